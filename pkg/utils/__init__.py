from .errors import ConfigurationError, DomainError, NotFoundError, VblLimitsError, build_model
from .special_functions import (
    binary_entropy_bits,
    erfc,
    gaussian_pdf,
    gaussian_upper_tail,
    xlog2x,
)

__all__ = [
    "ConfigurationError",
    "DomainError",
    "NotFoundError",
    "VblLimitsError",
    "build_model",
    "binary_entropy_bits",
    "erfc",
    "gaussian_pdf",
    "gaussian_upper_tail",
    "xlog2x",
]
