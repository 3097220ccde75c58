"""One-parameter Mittag-Leffler function, its derivatives and the CTRW jump-count law.

    E_beta(z) = sum_{n >= 0} z**n / Gamma(beta n + 1)

The power series is summed in extended precision (mpmath) with the working
precision raised to cover the cancellation between the largest term and the
result. For ``0 < beta < 1`` and large negative arguments the series is
replaced by the exact representation

    E_beta(-x) = sin(beta pi) / (beta pi)
                 * int_0^inf exp(-(u x)**(1/beta)) / (u**2 + 2 u cos(beta pi) + 1) du,

which is positive and completely monotone in ``x`` and evaluates in double
precision without cancellation.
"""

from __future__ import annotations

from dataclasses import dataclass
import math

import mpmath
import numpy as np
from scipy import integrate

__all__ = [
    "MLEvalConfig",
    "MLConvergenceError",
    "ml",
    "ml_derivative",
    "ml_asymptotic",
    "jump_count_pmf",
]


@dataclass(frozen=True)
class MLEvalConfig:
    series_cutoff: float = 5.0
    max_terms: int = 20000
    tolerance: float = 1e-17

    def __post_init__(self):
        if not self.series_cutoff > 0:
            raise ValueError("series_cutoff must be positive")
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")
        if self.max_terms < 10:
            raise ValueError("max_terms must be at least 10")


DEFAULT_CONFIG = MLEvalConfig()


class MLConvergenceError(ArithmeticError):
    """Series did not converge within ``max_terms``; ``partial`` holds the last partial sum."""

    def __init__(self, message, partial):
        super().__init__(message)
        self.partial = partial


def _check_beta(beta):
    if not beta > 0:
        raise ValueError(f"beta must be positive, got {beta}")


def _log_term(beta, n, m, logabsz):
    # log of (m+n)!/m! |z|^m / Gamma(beta (m+n) + 1)
    return math.lgamma(m + n + 1) - math.lgamma(m + 1) + m * logabsz - math.lgamma(beta * (m + n) + 1)


def _series_plan(beta, n, z, cfg):
    """Return (terms needed, log2 of the largest term) for the derivative series."""
    if z == 0:
        return 1, 0.0
    logabsz = math.log(abs(z))
    peak = -math.inf
    prev = -math.inf
    m = 0
    while True:
        lt = _log_term(beta, n, m, logabsz)
        peak = max(peak, lt)
        # past the peak; results can be as small as ~1/peak after cancellation
        if lt < prev and lt < math.log(cfg.tolerance) - max(0.0, peak) - 2:
            return m + 1, peak / math.log(2)
        prev = lt
        m += 1
        if m > cfg.max_terms:
            return None, peak / math.log(2)


def _series(beta, n, z, cfg):
    terms, log2peak = _series_plan(beta, n, z, cfg)
    if terms is None:
        raise MLConvergenceError(
            f"Mittag-Leffler series for beta={beta}, n={n}, z={z} needs more than {cfg.max_terms} terms",
            partial=_sum_terms(beta, n, z, cfg.max_terms, 53 + max(0, int(log2peak))),
        )
    # cancellation can leave a result as small as ~1/peak: budget the bits twice
    prec = 64 + 2 * max(0, int(math.ceil(log2peak)))
    return _sum_terms(beta, n, z, terms, prec)


def _sum_terms(beta, n, z, terms, prec):
    with mpmath.workprec(prec):
        zz = mpmath.mpf(z)
        b = mpmath.mpf(beta)
        total = mpmath.mpf(0)
        coef = mpmath.factorial(n)  # (m+n)!/m! at m = 0
        zpow = mpmath.mpf(1)
        for m in range(terms):
            total += coef * zpow * mpmath.rgamma(b * (m + n) + 1)
            coef = coef * (m + n + 1) / (m + 1)
            zpow *= zz
        return float(total)


def _integral_negative(beta, x):
    """E_beta(-x) for 0 < beta < 1, x > 0, via the spectral integral."""
    c = math.cos(beta * math.pi)
    p = 1.0 / beta

    def f(u):
        return math.exp(-((u * x) ** p)) / (u * u + 2.0 * u * c + 1.0)

    # the kernel peaks near u = 1 when beta -> 1; the exponential cuts off near u ~ 1/x
    cut = 40.0 ** beta / x
    pts = sorted({min(1.0, cut), cut})
    total = 0.0
    lo = 0.0
    for hi in pts:
        if hi > lo:
            v, _ = integrate.quad(f, lo, hi, epsabs=1e-16 * total, epsrel=1e-12, limit=200)
            total += v
            lo = hi
    # past the cutoff the integrand is negligible next to what is already summed
    v, _ = integrate.quad(f, lo, np.inf, epsabs=1e-16 * total, epsrel=1e-12, limit=200)
    total += v
    return math.sin(beta * math.pi) / (beta * math.pi) * total


def ml_asymptotic(beta: float, z: float, n: int = 0, max_order: int = 200):
    """Algebraic asymptotic expansion of the ``n``-th derivative for ``z -> -inf``.

    ``E_beta(z) ~ -sum_{k>=1} z**(-k) / Gamma(1 - beta k)``, differentiated term
    by term and truncated at the smallest term. Returns ``(value, smallest_term)``.
    Exponentially small contributions are not represented, so the expansion is
    only meaningful for ``0 < beta < 1`` (for ``beta = 1`` every term vanishes).
    """
    _check_beta(beta)
    if z >= 0:
        raise ValueError("asymptotic expansion is for negative arguments")
    total = 0.0
    best = math.inf
    for k in range(1, max_order + 1):
        arg = 1.0 - beta * k
        if arg <= 0 and arg == math.floor(arg):
            continue  # 1/Gamma vanishes at the poles
        # d^n/dz^n z^(-k) = (-1)^n (k)_n z^(-k-n), (k)_n the rising factorial
        rising = math.exp(math.lgamma(k + n) - math.lgamma(k))
        term = -((-1.0) ** n) * rising * z ** (-k - n) / math.gamma(arg)
        if abs(term) > best and k > 1:
            break
        best = abs(term)
        total += term
    return total, best


def ml(beta: float, z: float, cfg: MLEvalConfig = DEFAULT_CONFIG) -> float:
    """Mittag-Leffler function ``E_beta(z)`` for real ``z``."""
    _check_beta(beta)
    z = float(z)
    if not math.isfinite(z):
        raise ValueError("z must be finite")
    if z == 0.0:
        return 1.0
    if z < -cfg.series_cutoff and beta < 1.0:
        return _integral_negative(beta, -z)
    return _series(beta, 0, z, cfg)


def ml_derivative(beta: float, n: int, z: float, cfg: MLEvalConfig = DEFAULT_CONFIG) -> float:
    """``n``-th derivative of ``E_beta`` at ``z``.

    Sums ``sum_m (m+n)!/m! z**m / Gamma(beta (m+n) + 1)``. Beyond the series
    cutoff on the negative axis with ``beta < 1`` the series is still used
    when it fits within ``max_terms``; otherwise the asymptotic expansion is
    used if its smallest term is below the tolerance.
    """
    _check_beta(beta)
    if n < 0 or int(n) != n:
        raise ValueError("n must be a non-negative integer")
    n = int(n)
    if n == 0:
        return ml(beta, z, cfg)
    z = float(z)
    try:
        return _series(beta, n, z, cfg)
    except MLConvergenceError as err:
        if z < -cfg.series_cutoff and beta < 1.0:
            value, smallest = ml_asymptotic(beta, z, n)
            if smallest <= 1e-12 * max(abs(value), 1e-300):
                return value
        raise err


def jump_count_pmf(beta: float, t: float, n: int, cfg: MLEvalConfig = DEFAULT_CONFIG) -> float:
    """Probability of ``n`` jumps by time ``t`` with Mittag-Leffler survival ``E_beta(-t**beta)``.

    ``P(n, t) = t**(beta n) / n! * E_beta^(n)(-t**beta)``; for ``beta = 1`` this is
    the Poisson law with unit rate.
    """
    if not (0.0 < beta <= 1.0):
        raise ValueError(f"beta must lie in (0, 1], got {beta}")
    if t < 0:
        raise ValueError("t must be non-negative")
    if n < 0 or int(n) != n:
        raise ValueError("n must be a non-negative integer")
    if t == 0:
        return 1.0 if n == 0 else 0.0
    tb = t ** beta
    log_pref = n * math.log(tb) - math.lgamma(n + 1)
    return math.exp(log_pref) * ml_derivative(beta, n, -tb, cfg)
