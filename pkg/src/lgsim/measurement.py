"""Projective (strong) and Gaussian-pointer (weak) measurement channels.

A strong measurement dephases the state in the observable's eigenbasis,
``rho -> sum_i P_i rho P_i``, and every sampled pointer reading is an
eigenvalue. A weak measurement couples the system to a broad Gaussian
pointer whose position distribution has variance ``width^2 / 2`` per
branch; tracing the pointer out damps eigenbasis coherences,

    rho_ij -> rho_ij * exp(-(a_i - a_j)^2 / (4 width^2))        (exact)
    rho_ij -> rho_ij * (1 - (a_i - a_j)^2 / (4 width^2))        (order 2)

so the second-order map reproduces the exact one up to O(width^-4).
Pointer readings follow the mixture sum_i p_i Normal(a_i, width^2/2):
same mean as the strong case, variance inflated by width^2/2.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import (
    PerturbationAccuracyWarning,
    ValidationError,
    WeakRegimeWarning,
    require_same_dim,
)
from .quantum import DensityMatrix, Observable, born_weights, expectation, variance

TRUNCATION_EXACT = "exact"
TRUNCATION_SECOND_ORDER = "perturbative_o2"
_TRUNCATIONS = (TRUNCATION_EXACT, TRUNCATION_SECOND_ORDER)

MODE_STRONG = "strong"
MODE_WEAK = "weak"

# width below this multiple of the spectral diameter draws a weak-regime warning
WEAK_REGIME_FACTOR = 5.0
# expansion parameter (a_i-a_j)^2/(4 width^2) above this draws an accuracy warning
PERTURBATION_LIMIT = 0.1


@dataclass(frozen=True)
class PointerModel:
    """Gaussian pointer apparatus: width parameter and truncation choice.

    ``width`` is the dispersion parameter of the apparatus state; the
    observed per-branch pointer position variance is ``width**2 / 2``.
    """

    width: float
    truncation: str = TRUNCATION_EXACT

    def __post_init__(self):
        if not (self.width > 0):
            raise ValidationError(f"pointer width must be positive, got {self.width!r}")
        if self.truncation not in _TRUNCATIONS:
            raise ValidationError(
                f"truncation must be one of {_TRUNCATIONS}, got {self.truncation!r}"
            )

    @property
    def position_variance(self) -> float:
        return self.width**2 / 2.0

    def in_weak_regime(self, obs: Observable) -> bool:
        """True when the width comfortably exceeds the spectral diameter."""
        return self.width >= WEAK_REGIME_FACTOR * obs.spectral_diameter


@dataclass(frozen=True)
class MeasurementOutcome:
    """One sampled event: pointer reading plus the conditional post-state."""

    pointer_reading: float
    conditional_state: DensityMatrix
    mode: str

    def __post_init__(self):
        if self.mode not in (MODE_STRONG, MODE_WEAK):
            raise ValidationError(f"mode must be 'strong' or 'weak', got {self.mode!r}")


@dataclass(frozen=True)
class PointerStatistics:
    """Mean and variance of the pointer-reading distribution."""

    mean: float
    variance: float


def _warn_if_not_weak(pm: PointerModel, obs: Observable) -> None:
    if not pm.in_weak_regime(obs):
        warnings.warn(
            f"pointer width {pm.width} is below {WEAK_REGIME_FACTOR} x spectral "
            f"diameter {obs.spectral_diameter}; weak-limit formulas degrade here",
            WeakRegimeWarning,
            stacklevel=3,
        )


def _eigenbasis_map(rho: DensityMatrix, obs: Observable, weights: np.ndarray) -> DensityMatrix:
    """Apply rho -> sum_ij w[i, j] P_i rho P_j for a real symmetric weight table."""
    blocks = np.einsum("iab,bc,jcd->ijad", obs.projectors, rho.matrix, obs.projectors)
    out = np.einsum("ij,ijad->ad", weights, blocks)
    return DensityMatrix(0.5 * (out + out.conj().T))


def strong_channel(rho: DensityMatrix, obs: Observable) -> DensityMatrix:
    """Unconditional post-measurement state sum_i P_i rho P_i."""
    require_same_dim(rho.dim, obs.dim)
    return _eigenbasis_map(rho, obs, np.eye(obs.n_outcomes))


def _pair_gaps_squared(obs: Observable) -> np.ndarray:
    a = obs.eigenvalues
    return (a[:, None] - a[None, :]) ** 2


def weak_channel_exact(rho: DensityMatrix, obs: Observable, pm: PointerModel) -> DensityMatrix:
    """Unconditional weak post-state with the full Gaussian damping factors."""
    require_same_dim(rho.dim, obs.dim)
    _warn_if_not_weak(pm, obs)
    damping = np.exp(-_pair_gaps_squared(obs) / (4.0 * pm.width**2))
    return _eigenbasis_map(rho, obs, damping)


def weak_channel_perturbative(
    rho: DensityMatrix, obs: Observable, pm: PointerModel
) -> DensityMatrix:
    """Second-order truncation of the weak channel.

    Requires a pointer model with ``truncation='perturbative_o2'``; warns
    (without refusing) when the largest expansion parameter exceeds 0.1.
    """
    require_same_dim(rho.dim, obs.dim)
    if pm.truncation != TRUNCATION_SECOND_ORDER:
        raise ValidationError(
            "weak_channel_perturbative needs a pointer model with "
            f"truncation='{TRUNCATION_SECOND_ORDER}', got '{pm.truncation}'"
        )
    _warn_if_not_weak(pm, obs)
    x = _pair_gaps_squared(obs) / (4.0 * pm.width**2)
    if x.max() > PERTURBATION_LIMIT:
        warnings.warn(
            f"expansion parameter {x.max():.3g} exceeds {PERTURBATION_LIMIT}; "
            "second-order truncation is inaccurate",
            PerturbationAccuracyWarning,
            stacklevel=2,
        )
    return _eigenbasis_map(rho, obs, 1.0 - x)


def weak_channel(rho: DensityMatrix, obs: Observable, pm: PointerModel) -> DensityMatrix:
    """Dispatch to the exact or second-order channel per the pointer model."""
    if pm.truncation == TRUNCATION_EXACT:
        return weak_channel_exact(rho, obs, pm)
    return weak_channel_perturbative(rho, obs, pm)


def _draw_branch(weights: np.ndarray, u: float) -> int:
    """Inverse-CDF draw over the canonical eigenvalue order."""
    cum = np.cumsum(weights)
    return min(int(np.searchsorted(cum, u, side="right")), weights.size - 1)


def strong_sample(
    rho: DensityMatrix, obs: Observable, rng: np.random.Generator
) -> MeasurementOutcome:
    """Draw one projective outcome; reading is exactly an eigenvalue."""
    require_same_dim(rho.dim, obs.dim)
    w = born_weights(rho, obs).probabilities
    i = _draw_branch(w, rng.uniform())
    p = obs.projectors[i]
    cond = p @ rho.matrix @ p
    cond = cond / np.trace(cond).real
    return MeasurementOutcome(
        pointer_reading=float(obs.eigenvalues[i]),
        conditional_state=DensityMatrix(0.5 * (cond + cond.conj().T)),
        mode=MODE_STRONG,
    )


def gaussian_amplitude(x: np.ndarray | float, width: float) -> np.ndarray:
    """Real pointer amplitude phi with |phi|^2 = Normal(0, width^2/2) density."""
    return (np.pi * width**2) ** (-0.25) * np.exp(-np.asarray(x, dtype=float) ** 2 / (2.0 * width**2))


def weak_sample(
    rho: DensityMatrix, obs: Observable, pm: PointerModel, rng: np.random.Generator
) -> MeasurementOutcome:
    """Draw one weak-pointer event.

    The reading comes from the mixture sum_i p_i Normal(a_i, width^2/2);
    the conditional state is M(p) rho M(p) renormalized, with
    M(p) = sum_i phi(p - a_i) P_i. Averaging conditional states over the
    reading distribution recovers ``weak_channel_exact``.
    """
    require_same_dim(rho.dim, obs.dim)
    _warn_if_not_weak(pm, obs)
    w = born_weights(rho, obs).probabilities
    i = _draw_branch(w, rng.uniform())
    reading = float(obs.eigenvalues[i] + np.sqrt(pm.position_variance) * rng.standard_normal())
    amps = gaussian_amplitude(reading - obs.eigenvalues, pm.width)
    m = np.tensordot(amps, obs.projectors, axes=1)
    cond = m @ rho.matrix @ m
    cond = cond / np.trace(cond).real
    return MeasurementOutcome(
        pointer_reading=reading,
        conditional_state=DensityMatrix(0.5 * (cond + cond.conj().T)),
        mode=MODE_WEAK,
    )


def sample_strong_readings(
    rho: DensityMatrix, obs: Observable, n: int, rng: np.random.Generator
) -> np.ndarray:
    """Vectorized batch of n projective readings (no conditional states)."""
    require_same_dim(rho.dim, obs.dim)
    if n < 1:
        raise ValidationError(f"n must be >= 1, got {n}")
    w = born_weights(rho, obs).probabilities
    cum = np.cumsum(w)
    idx = np.minimum(np.searchsorted(cum, rng.uniform(size=n), side="right"), w.size - 1)
    return obs.eigenvalues[idx]


def sample_weak_readings(
    rho: DensityMatrix, obs: Observable, pm: PointerModel, n: int, rng: np.random.Generator
) -> np.ndarray:
    """Vectorized batch of n weak pointer readings (no conditional states)."""
    require_same_dim(rho.dim, obs.dim)
    if n < 1:
        raise ValidationError(f"n must be >= 1, got {n}")
    _warn_if_not_weak(pm, obs)
    w = born_weights(rho, obs).probabilities
    cum = np.cumsum(w)
    idx = np.minimum(np.searchsorted(cum, rng.uniform(size=n), side="right"), w.size - 1)
    return obs.eigenvalues[idx] + np.sqrt(pm.position_variance) * rng.standard_normal(n)


def pointer_statistics(
    rho: DensityMatrix, obs: Observable, pm: PointerModel | None = None
) -> PointerStatistics:
    """Closed-form reading mean/variance; ``pm=None`` means a strong apparatus.

    Strong: (<A>, Var A). Weak: (<A>, width^2/2 + Var A) - the weak mean
    matches the strong one, only the spread differs.
    """
    require_same_dim(rho.dim, obs.dim)
    mean = expectation(rho, obs)
    var = variance(rho, obs)
    if pm is None:
        return PointerStatistics(mean=mean, variance=var)
    _warn_if_not_weak(pm, obs)
    return PointerStatistics(mean=mean, variance=pm.position_variance + var)
