"""Render the figures from files written by main.py.

    python main.py fom-sweep --out fom.csv
    python plot_figures.py fom fom.csv --save fom.png

One recipe per subcommand output: fom (fom-sweep), distributions,
capacity (capacity-curve), snr (snr-map), hybrid (hybrid-sim) and
reliability.
"""
import argparse
import csv
from collections import defaultdict
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from handlers.writers import META_PREFIX, read_header  # noqa: E402


def read_rows(path: str | Path) -> tuple[dict[str, str], list[dict[str, str]]]:
    """(metadata, rows) of a CSV output file."""
    meta = read_header(path)
    with open(path, newline="", encoding="utf-8") as f:
        body = [line for line in f if not line.startswith(META_PREFIX)]
    return meta, list(csv.DictReader(body))


def column(rows: list[dict[str, str]], name: str) -> np.ndarray:
    return np.array([float(row[name]) for row in rows])


def by_family(rows: list[dict[str, str]]) -> dict[str, list[dict[str, str]]]:
    groups = defaultdict(list)
    for row in rows:
        groups[row["family"]].append(row)
    return groups


def plot_fom(rows, ax):
    groups = by_family(rows)
    if "mbl" in groups:
        mbl = groups["mbl"]
        ax.plot(column(mbl, "power"), column(mbl, "fom_paper"), "k-", label="MBL, v_th = mu/2")
        ax.axhline(2 * np.pi * np.log(2), color="k", linestyle=":", label="2 pi ln 2")
    if "vbl" in groups:
        vbl = groups["vbl"]
        sc = ax.scatter(column(vbl, "power"), column(vbl, "fom_paper"), c=column(vbl, "v_th"), s=6, cmap="viridis")
        plt.colorbar(sc, ax=ax, label="VBL v_th")
    ax.axhline(1.0, color="grey", linestyle="--", linewidth=0.8)
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("power per measurement [KT f_c]")
    ax.set_ylabel("FOM [KT/bit]")
    ax.legend()


def plot_distributions(rows, ax):
    for family, group in by_family(rows).items():
        x = column(group, "x")
        ax.plot(x, column(group, "pdf_state0"), label=f"{family} state 0")
        ax.plot(x, column(group, "pdf_state1"), label=f"{family} state 1")
        decides = np.array([row["decides_one"] == "true" for row in group])
        ax.fill_between(x, 0, column(group, "pdf_state0"), where=decides, alpha=0.3)
    ax.set_xlabel("x [thermal units]")
    ax.set_ylabel("density")
    ax.legend()


def plot_capacity(rows, ax):
    for family, group in by_family(rows).items():
        marker = "-" if family == "mbl" else "."
        ax.plot(column(group, "p_avg"), column(group, "capacity_paper"), marker, label=f"{family}, 1 - H(Y|X)")
        ax.plot(column(group, "p_avg"), column(group, "mi_true"), marker, alpha=0.4, label=f"{family}, I(X;Y)")
    ax.set_xlabel("p_avg")
    ax.set_ylabel("capacity [bit/measurement]")
    ax.legend()


def plot_snr(rows, ax):
    mu = column(rows, "mu")
    sigma = column(rows, "sigma")
    mbl = np.array([row["choice"] == "mbl" for row in rows])
    ax.scatter(sigma[mbl], mu[mbl], s=4, label="MBL")
    ax.scatter(sigma[~mbl], mu[~mbl], s=4, label="VBL")
    order = np.argsort(sigma)
    ax.plot(sigma[order], column(rows, "boundary_mu")[order], "k-", label="crossover")
    ax.set_xlabel("sigma")
    ax.set_ylabel("mu")
    ax.legend()


def plot_hybrid(rows, ax):
    t = column(rows, "t")
    ax.plot(t, column(rows, "mu"), label="mu")
    ax.plot(t, column(rows, "sigma1"), label="sigma1")
    mbl = np.array([row["logic"] == "mbl" for row in rows])
    if mbl.any():
        ax.axvline(t[mbl.argmax()], color="k", linestyle=":", label="VBL -> MBL")
    ax.set_xlabel("t [s]")
    ax.legend()


def plot_reliability(rows, ax):
    sigma1 = column(rows, "sigma1")
    ax.plot(sigma1, column(rows, "p_avg_mbl"), label="MBL")
    ax.plot(sigma1, column(rows, "p_avg_vbl"), label="VBL")
    ax.set_xlabel("sigma1")
    ax.set_ylabel("p_avg")
    ax.legend()


RECIPES = {
    "fom": plot_fom,
    "distributions": plot_distributions,
    "capacity": plot_capacity,
    "snr": plot_snr,
    "hybrid": plot_hybrid,
    "reliability": plot_reliability,
}


def main():
    parser = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("figure", choices=sorted(RECIPES))
    parser.add_argument("source", help="CSV file written by main.py")
    parser.add_argument("--save", default=None, help="image path; defaults to <source>.png")
    args = parser.parse_args()

    meta, rows = read_rows(args.source)
    fig, ax = plt.subplots(figsize=(6, 4.5))
    RECIPES[args.figure](rows, ax)
    ax.set_title(f"{meta.get('subcommand', args.figure)} (seed {meta.get('seed', '?')})")
    fig.tight_layout()
    target = args.save or str(Path(args.source).with_suffix(".png"))
    fig.savefig(target, dpi=150)
    print(f"wrote {target}")


if __name__ == "__main__":
    main()
