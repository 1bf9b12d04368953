from .channel import (
    CapacityApprox,
    ChannelRates,
    capacity_approx,
    capacity_bsc,
    capacity_mbl_small_signal,
    capacity_paper_asymmetric,
    capacity_taylor,
    conditional_entropy,
    delta_p_mbl,
    mutual_information_true,
)
from .energy import (
    FOM_MBL_LIMIT,
    BarrierEnergies,
    EnergyPoint,
    FomStatus,
    UnitMode,
    fom,
    fom_mbl_fundamental_limit,
    mbl_transition_energy,
    power_mbl,
    power_vbl,
)
from .estimator_snr import (
    LogicChoice,
    SnrModel,
    choose_logic,
    crossover_mu,
    snr_mbl,
    snr_vbl,
    var_of_sample_variance,
)
from .hybrid_sim import HybridConfig, HybridTrace, ReliabilityProfile, reliability_profile, simulate_startup
from .logic_models import (
    EQUAL_PRIORS,
    ErrorPair,
    Logic,
    MblParams,
    MeasurementSetup,
    Priors,
    VblParams,
    average_error,
    mbl_conditional_errors,
    p_avg_mbl,
    p_avg_vbl,
    state_density_profile,
    vbl_conditional_errors,
)
from .montecarlo import (
    McEstimate,
    NoiseShape,
    empirical_error_rates,
    empirical_mutual_information,
    empirical_snr,
    empirical_variance_of_sample_variance,
    validation_report,
)
from .sweep_opt import (
    Axis,
    CapacityKind,
    MinimizeReport,
    SweepGrid,
    SweepResult,
    capacity_vs_perror,
    default_mbl_grid,
    default_vbl_grid,
    evaluate_point,
    find_transition_point,
    fom_surface,
    minimize_fom,
    snr_region_map,
)

__all__ = [
    "CapacityApprox",
    "ChannelRates",
    "capacity_approx",
    "capacity_bsc",
    "capacity_mbl_small_signal",
    "capacity_paper_asymmetric",
    "capacity_taylor",
    "conditional_entropy",
    "delta_p_mbl",
    "mutual_information_true",
    "FOM_MBL_LIMIT",
    "BarrierEnergies",
    "EnergyPoint",
    "FomStatus",
    "UnitMode",
    "fom",
    "fom_mbl_fundamental_limit",
    "mbl_transition_energy",
    "power_mbl",
    "power_vbl",
    "LogicChoice",
    "SnrModel",
    "choose_logic",
    "crossover_mu",
    "snr_mbl",
    "snr_vbl",
    "var_of_sample_variance",
    "HybridConfig",
    "HybridTrace",
    "ReliabilityProfile",
    "reliability_profile",
    "simulate_startup",
    "EQUAL_PRIORS",
    "ErrorPair",
    "Logic",
    "MblParams",
    "MeasurementSetup",
    "Priors",
    "VblParams",
    "average_error",
    "mbl_conditional_errors",
    "p_avg_mbl",
    "p_avg_vbl",
    "state_density_profile",
    "vbl_conditional_errors",
    "McEstimate",
    "NoiseShape",
    "empirical_error_rates",
    "empirical_mutual_information",
    "empirical_snr",
    "empirical_variance_of_sample_variance",
    "validation_report",
    "Axis",
    "CapacityKind",
    "MinimizeReport",
    "SweepGrid",
    "SweepResult",
    "capacity_vs_perror",
    "default_mbl_grid",
    "default_vbl_grid",
    "evaluate_point",
    "find_transition_point",
    "fom_surface",
    "minimize_fom",
    "snr_region_map",
]
