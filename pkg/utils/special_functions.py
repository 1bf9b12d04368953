"""Scalar special functions used by every analytic formula.

erfc is evaluated without the platform math library so results do not
depend on libm: a non-alternating power series below ``_SERIES_LIMIT`` and
Laplace's continued fraction (modified Lentz) above it.
"""
import math

from .errors import DomainError

SQRT_PI = math.sqrt(math.pi)
SQRT_2 = math.sqrt(2.0)
SQRT_2PI = math.sqrt(2.0 * math.pi)
LN_2 = math.log(2.0)

# Smallest probability fed to a logarithm.
PROB_FLOOR = 1e-300

_SERIES_LIMIT = 3.0
_MAX_TERMS = 5000
_EPS = 1e-17
_CF_EPS = 4e-16
_TINY = 1e-300


def _check_finite(x: float, name: str = "x") -> float:
    x = float(x)
    if not math.isfinite(x):
        raise DomainError(f"{name} must be finite, got {x!r}")
    return x


def _erf_series(x: float) -> float:
    """erf(x) = 2/sqrt(pi) * exp(-x^2) * sum 2^n x^(2n+1) / (2n+1)!!, x >= 0."""
    term = x
    total = x
    x2 = 2.0 * x * x
    for n in range(1, _MAX_TERMS):
        term *= x2 / (2 * n + 1)
        total += term
        if term <= total * _EPS:
            break
    return 2.0 / SQRT_PI * math.exp(-x * x) * total


def _erfc_continued_fraction(x: float) -> float:
    """erfc(x) = exp(-x^2)/sqrt(pi) / (x + (1/2)/(x + 1/(x + (3/2)/(x + ...)))), x > 0."""
    f = x
    c = f
    d = 0.0
    for j in range(1, _MAX_TERMS):
        a = 0.5 * j
        d = x + a * d
        if d == 0.0:
            d = _TINY
        c = x + a / c
        if c == 0.0:
            c = _TINY
        d = 1.0 / d
        delta = c * d
        f *= delta
        if abs(delta - 1.0) < _CF_EPS:
            break
    return math.exp(-x * x) / (SQRT_PI * f)


def erfc(x: float) -> float:
    """Complementary error function, clamped to [0, 2]."""
    x = _check_finite(x)
    ax = abs(x)
    if ax < _SERIES_LIMIT:
        value = 1.0 - _erf_series(ax)
    else:
        value = _erfc_continued_fraction(ax)
    if x < 0.0:
        value = 2.0 - value
    return min(max(value, 0.0), 2.0)


def gaussian_pdf(x: float, mu: float, sigma: float) -> float:
    """Normal density with mean ``mu`` and standard deviation ``sigma``."""
    if not sigma > 0.0:
        raise DomainError(f"sigma must be positive, got {sigma!r}")
    z = (x - mu) / sigma
    return math.exp(-0.5 * z * z) / (sigma * SQRT_2PI)


def gaussian_upper_tail(x: float) -> float:
    """Q(x): probability that a standard normal exceeds ``x``."""
    x = _check_finite(x)
    return 0.5 * erfc(x / SQRT_2)


def xlog2x(p: float) -> float:
    """p * log2(p) with 0 * log2(0) = 0."""
    if p <= 0.0:
        return 0.0
    return p * math.log2(max(p, PROB_FLOOR))


def binary_entropy_bits(p: float) -> float:
    """H_b(p) in bits.

    The smaller of p, 1 - p is taken first so that H_b(p) and H_b(1 - p)
    evaluate the same two terms.
    """
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"probability must lie in [0, 1], got {p!r}")
    a = p if p <= 0.5 else 1.0 - p
    b = 1.0 - a
    # (1 - a) log2(1 - a) through log1p keeps the small term accurate
    return -xlog2x(a) - b * math.log1p(-a) / LN_2
