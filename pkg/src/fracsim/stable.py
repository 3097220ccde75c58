"""Stable laws: characteristic functions and samplers.

Parameterization follows the characteristic function

    phi(t) = exp(i t mu - |sigma t|^alpha (1 - i beta sgn(t) Phi(t)))

with ``Phi(t) = tan(pi alpha / 2)`` for ``alpha != 1`` and
``Phi(t) = -(2/pi) log|t|`` for ``alpha == 1`` (Nolan's S1 convention).
Random variates are produced with the Chambers-Mallows-Stuck transform.
"""

from __future__ import annotations

from dataclasses import dataclass
import math

import numpy as np

__all__ = [
    "StableParams",
    "EllipticalParams",
    "RandomStream",
    "characteristic_function",
    "sample_stable",
    "one_sided_scale",
    "sample_one_sided_S",
    "sample_subgaussian_2d",
    "subgaussian_cf",
    "empirical_cf",
]


@dataclass(frozen=True)
class StableParams:
    alpha: float
    beta: float = 0.0
    sigma: float = 1.0
    mu: float = 0.0

    def __post_init__(self):
        if not (0.0 < self.alpha <= 2.0):
            raise ValueError(f"alpha must lie in (0, 2], got {self.alpha}")
        if not (-1.0 <= self.beta <= 1.0):
            raise ValueError(f"beta must lie in [-1, 1], got {self.beta}")
        if not self.sigma > 0.0:
            raise ValueError(f"sigma must be positive, got {self.sigma}")
        if not math.isfinite(self.mu):
            raise ValueError(f"mu must be finite, got {self.mu}")


@dataclass(frozen=True)
class EllipticalParams:
    """2-D elliptical (subgaussian) stable law with shape matrix ``Q``."""

    alpha: float
    Q: np.ndarray
    mu: np.ndarray = None

    def __post_init__(self):
        if not (0.0 < self.alpha <= 2.0):
            raise ValueError(f"alpha must lie in (0, 2], got {self.alpha}")
        Q = np.asarray(self.Q, dtype=float)
        if Q.shape != (2, 2):
            raise ValueError(f"Q must be 2x2, got shape {Q.shape}")
        if not np.allclose(Q, Q.T, rtol=0, atol=1e-14 * max(1.0, np.abs(Q).max())):
            raise ValueError("Q must be symmetric")
        if np.linalg.eigvalsh(Q).min() <= 0.0:
            raise ValueError("Q must be positive definite")
        mu = np.zeros(2) if self.mu is None else np.asarray(self.mu, dtype=float)
        if mu.shape != (2,):
            raise ValueError(f"mu must be a 2-vector, got shape {mu.shape}")
        object.__setattr__(self, "Q", Q)
        object.__setattr__(self, "mu", mu)


@dataclass(frozen=True)
class RandomStream:
    """Reproducible substream of a seeded counter-based generator.

    Identical ``(seed, stream_id)`` pairs give bit-identical draws; distinct
    ``stream_id`` values under one seed are independent (``SeedSequence``
    spawn keys feeding a Philox key).
    """

    seed: int
    stream_id: int = 0

    def __post_init__(self):
        if not (0 <= self.seed < 2**64):
            raise ValueError("seed must be an unsigned 64-bit integer")
        if not (0 <= self.stream_id < 2**64):
            raise ValueError("stream_id must be an unsigned 64-bit integer")

    def generator(self) -> np.random.Generator:
        ss = np.random.SeedSequence(self.seed, spawn_key=(self.stream_id,))
        return np.random.Generator(np.random.Philox(ss))

    def substream(self, index: int) -> "RandomStream":
        """Child stream, e.g. one per agent."""
        # fold (stream_id, index) into a single 64-bit id deterministically
        ss = np.random.SeedSequence(self.stream_id, spawn_key=(index,))
        return RandomStream(self.seed, int(ss.generate_state(1, np.uint64)[0]))


def _as_generator(stream) -> np.random.Generator:
    if isinstance(stream, RandomStream):
        return stream.generator()
    if isinstance(stream, np.random.Generator):
        return stream
    raise TypeError(f"expected RandomStream or numpy Generator, got {type(stream)!r}")


def characteristic_function(params: StableParams, t):
    """Evaluate the stable characteristic function at ``t`` (scalar or array)."""
    t = np.asarray(t, dtype=float)
    if not np.all(np.isfinite(t)):
        raise ValueError("t must be finite")
    a, b, s, m = params.alpha, params.beta, params.sigma, params.mu
    at = np.abs(t)
    if a == 1.0:
        with np.errstate(divide="ignore", invalid="ignore"):
            Phi = np.where(at > 0, -(2.0 / np.pi) * np.log(np.where(at > 0, at, 1.0)), 0.0)
    else:
        # tan(pi) is ~1e-16 rather than 0; alpha=2 must not pick up skew
        Phi = 0.0 if a == 2.0 else math.tan(np.pi * a / 2.0)
    expo = 1j * t * m - (s * at) ** a * (1.0 - 1j * b * np.sign(t) * Phi)
    out = np.exp(expo)
    return out[()] if out.ndim == 0 else out


def _cms_standard(alpha, beta, V, W):
    """Chambers-Mallows-Stuck transform, sigma=1, mu=0, S1 parameterization."""
    if alpha == 1.0:
        hb = np.pi / 2.0 + beta * V
        return (2.0 / np.pi) * (hb * np.tan(V) - beta * np.log((np.pi / 2.0) * W * np.cos(V) / hb))
    if beta == 0.0:
        return (
            np.sin(alpha * V) / np.cos(V) ** (1.0 / alpha)
            * (np.cos((1.0 - alpha) * V) / W) ** ((1.0 - alpha) / alpha)
        )
    zeta = beta * math.tan(np.pi * alpha / 2.0)
    B = math.atan(zeta) / alpha
    S = (1.0 + zeta * zeta) ** (1.0 / (2.0 * alpha))
    return (
        S * np.sin(alpha * (V + B)) / np.cos(V) ** (1.0 / alpha)
        * (np.cos(V - alpha * (V + B)) / W) ** ((1.0 - alpha) / alpha)
    )


def _draw_vw(rng: np.random.Generator, n: int):
    # open interval (-pi/2, pi/2): random() is in [0, 1), reflect the zero
    u = rng.random(n)
    u = np.where(u == 0.0, 0.5, u)
    V = np.pi * (u - 0.5)
    W = rng.standard_exponential(n)
    return V, W


def sample_stable(params: StableParams, stream, n: int) -> np.ndarray:
    """Draw ``n`` variates with characteristic function ``characteristic_function(params, .)``.

    Scale and location are applied last (``sigma * X + mu``), so for
    ``beta = 0`` samples at ``sigma`` are exactly ``sigma`` times the samples
    at unit scale drawn from the same stream.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = _as_generator(stream)
    V, W = _draw_vw(rng, n)
    X = _cms_standard(params.alpha, params.beta, V, W)
    if params.alpha == 1.0 and params.beta != 0.0:
        # the log|t| term makes sigma enter non-linearly at alpha = 1
        return params.sigma * X + (2.0 / np.pi) * params.beta * params.sigma * math.log(params.sigma) + params.mu
    return params.sigma * X + params.mu


def one_sided_scale(alpha_target: float) -> float:
    """Scale ``cos(pi alpha / 4) ** (2 / alpha)`` of the mixing variable."""
    return math.cos(math.pi * alpha_target / 4.0) ** (2.0 / alpha_target)


def sample_one_sided_S(alpha_target: float, stream, n: int) -> np.ndarray:
    """Positive mixing variable ``S ~ Stable(alpha/2, 1, cos(pi alpha/4)^(2/alpha), 0)``.

    Its Laplace transform is ``E exp(-u S) = exp(-u ** (alpha / 2))``.
    """
    if not (0.0 < alpha_target < 2.0):
        raise ValueError(
            f"alpha_target must lie in (0, 2), got {alpha_target}; "
            "alpha = 2 is the Gaussian case and needs no mixing variable"
        )
    params = StableParams(alpha_target / 2.0, 1.0, one_sided_scale(alpha_target), 0.0)
    return sample_stable(params, stream, n)


def sample_subgaussian_2d(params: EllipticalParams, stream, n: int) -> np.ndarray:
    """Draw ``n`` 2-vectors from the elliptical stable law.

    For ``alpha < 2`` the law has characteristic function
    ``exp(i t.mu - |t^T Q t| ** (alpha / 2))``; each draw is
    ``sqrt(s) * g + mu`` with ``s`` from :func:`sample_one_sided_S` and
    ``g ~ Normal(0, 2 Q)``. The factor 2 is what makes the mixture match
    that characteristic function (with ``g ~ Normal(0, Q)`` one gets
    ``|t^T Q t / 2| ** (alpha / 2)`` instead).

    ``alpha = 2`` is routed to a plain ``Normal(mu, Q)``: covariance ``Q``.
    Note this is half the covariance of the ``alpha -> 2`` limit.

    Returns an array of shape ``(n, 2)``.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = _as_generator(stream)
    L = np.linalg.cholesky(params.Q)
    if params.alpha == 2.0:
        g = rng.standard_normal((n, 2)) @ L.T
        return g + params.mu
    s = sample_one_sided_S(params.alpha, rng, n)
    g = rng.standard_normal((n, 2)) @ (math.sqrt(2.0) * L).T
    return np.sqrt(s)[:, None] * g + params.mu


def subgaussian_cf(params: EllipticalParams, t) -> complex:
    """Characteristic function of the law drawn by :func:`sample_subgaussian_2d`."""
    t = np.asarray(t, dtype=float)
    quad = float(t @ params.Q @ t)
    if params.alpha == 2.0:
        return complex(np.exp(1j * (t @ params.mu) - 0.5 * quad))
    return complex(np.exp(1j * (t @ params.mu) - abs(quad) ** (params.alpha / 2.0)))


def empirical_cf(samples, t) -> complex:
    """Sample mean of ``exp(i <t, x_j>)`` for scalar or vector samples."""
    x = np.asarray(samples, dtype=float)
    if x.size == 0:
        raise ValueError("empirical_cf needs at least one sample")
    t = np.asarray(t, dtype=float)
    phase = x * t if x.ndim == 1 else x @ t
    return complex(np.mean(np.exp(1j * phase)))
