"""Ensemble-size and error budgeting for the two LG measurement schemes.

Start from a prepared ensemble of M members split over k series. The
weak-first scheme spends almost the whole M/k subensemble on each weak
measurement; with per-event pointer variance width^2/2 its mean carries
error eps = width / sqrt(2M/k) (had both measurements of a series been
weak, each would get only M/2k events and the error would be sqrt(2)
larger). An all-strong scheme hits that same eps with subensembles of
only M_s = Var(A)/eps^2 members per measurement, for a grand total of

    M_tot = 2k * M_s = 4 Var(A) M / width^2  << M   (when width > 2 sqrt(Var))

Wastage accounting (threshold rule): a strong measurement writes off its
whole M_s; a weak one writes off the fraction I1 = Var/width^2 of M/k.
At equal error the two figures differ by exactly a factor 2, so the
schemes waste comparable amounts while the strong one needs a far
smaller ensemble.

All member counts round up; a 1e-12 relative guard keeps float dust from
bumping exact integers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ValidationError
from .invasiveness import ORDER_UNITY_THRESHOLD, wasted_resource


def _ceil_count(x: float) -> int:
    if x < 0:
        raise ValidationError(f"count must be nonnegative, got {x!r}")
    return int(math.ceil(x * (1.0 - 1e-12)))


@dataclass(frozen=True)
class BudgetInput:
    """Knobs of the budget calculation."""

    ensemble_size: int            # M, total prepared members
    k: int                        # number of time slices / series
    delta_p: float                # pointer width of the weak apparatus
    var_a: float                  # observable variance in the prepared state
    order_unity_threshold: float = ORDER_UNITY_THRESHOLD

    def __post_init__(self):
        if self.k < 3:
            raise ValidationError(f"k must be >= 3, got {self.k}")
        if self.ensemble_size < 2 * self.k:
            raise ValidationError(
                f"ensemble size {self.ensemble_size} cannot cover 2k = {2 * self.k} measurements"
            )
        if not (self.delta_p > 0):
            raise ValidationError(f"delta_p must be positive, got {self.delta_p!r}")
        if self.var_a < 0:
            raise ValidationError(f"var_a must be >= 0, got {self.var_a!r}")
        if not (0 < self.order_unity_threshold <= 1):
            raise ValidationError(
                f"order-unity threshold must lie in (0, 1], got {self.order_unity_threshold!r}"
            )


@dataclass(frozen=True)
class BudgetReport:
    """Errors, ensemble demands and wastage for both schemes at equal accuracy."""

    eps_weak_both: float                  # weak error had both measurements been weak
    eps_target: float                     # the common error target (weak-first scheme)
    error_ratio_strong_over_weak: float   # strong/weak error at equal event count
    strong_subensemble: int               # M_s, members per strong measurement
    total_strong_ensemble: int            # M_tot = 2k * M_s
    ensemble_ratio_strong_over_weak: float  # M_tot / M
    strong_scheme_smaller: bool           # M_tot < M, i.e. width > 2 sqrt(var)
    waste_weak_per_measurement: int       # I1-based loss of one weak measurement
    waste_weak_per_measurement_i2: int    # same with the fidelity-based index
    waste_strong_per_measurement: int     # worst case: the whole M_s
    waste_total_weak_scheme: int          # k weak measurements
    waste_total_strong_scheme: int        # 2k strong measurements
    waste_ratio_strong_over_weak: float | None  # per-measurement ratio (2 at leading order); None when both vanish


def weak_error_both(ensemble_size: int, k: int, delta_p: float) -> float:
    """Per-measurement error if both series measurements were weak.

    Each weak measurement then gets only M/2k events of pointer variance
    delta_p^2/2, so the error is delta_p / sqrt(M/k).
    """
    _check_mk(ensemble_size, k, delta_p)
    return delta_p / math.sqrt(ensemble_size / k)


def target_error(ensemble_size: int, k: int, delta_p: float) -> float:
    """Common error target: one weak measurement using the whole M/k subensemble.

    eps = delta_p / sqrt(2M/k), a factor sqrt(2) below the both-weak case.
    """
    _check_mk(ensemble_size, k, delta_p)
    return delta_p / math.sqrt(2.0 * ensemble_size / k)


def strong_error(var_a: float, n: int) -> float:
    """Statistical error of a strong mean estimate over n events."""
    if var_a < 0:
        raise ValidationError(f"var_a must be >= 0, got {var_a!r}")
    if n < 1:
        raise ValidationError(f"n must be >= 1, got {n}")
    return math.sqrt(var_a / n)


def strong_subensemble(var_a: float, eps: float) -> int:
    """Members per strong measurement to reach error eps: Var(A)/eps^2."""
    if var_a < 0:
        raise ValidationError(f"var_a must be >= 0, got {var_a!r}")
    if not (eps > 0):
        raise ValidationError(f"eps must be positive, got {eps!r}")
    return _ceil_count(var_a / eps**2)


def total_strong_ensemble(ensemble_size: int, k: int, delta_p: float, var_a: float) -> int:
    """Grand total for 2k strong measurements: 4 Var(A) M / delta_p^2.

    Independent of k: the per-measurement demand shrinks as the number of
    measurements grows, and the two factors cancel.
    """
    _check_mk(ensemble_size, k, delta_p)
    if var_a < 0:
        raise ValidationError(f"var_a must be >= 0, got {var_a!r}")
    return _ceil_count(4.0 * var_a * ensemble_size / delta_p**2)


def _check_mk(ensemble_size: int, k: int, delta_p: float) -> None:
    if k < 3:
        raise ValidationError(f"k must be >= 3, got {k}")
    if ensemble_size < 2 * k:
        raise ValidationError(
            f"ensemble size {ensemble_size} cannot cover 2k = {2 * k} measurements"
        )
    if not (delta_p > 0):
        raise ValidationError(f"delta_p must be positive, got {delta_p!r}")


def wastage_report(inp: BudgetInput) -> BudgetReport:
    """Full two-scheme comparison at the common error target."""
    m, k, dp, var = inp.ensemble_size, inp.k, inp.delta_p, inp.var_a
    eps = target_error(m, k, dp)
    subensemble = m / k

    ms_real = var / dp**2 * (2.0 * m / k)
    mtot_real = 2.0 * k * ms_real
    ms = _ceil_count(ms_real)
    mtot = _ceil_count(mtot_real)

    # leading-order indices; capped at 1 so the wastage rule stays total
    i1_weak = min(var / dp**2, 1.0)
    i2_weak = i1_weak / 2.0
    waste_weak = wasted_resource(_ceil_count(subensemble), i1_weak, inp.order_unity_threshold)
    waste_weak_i2 = wasted_resource(_ceil_count(subensemble), i2_weak, inp.order_unity_threshold)
    waste_strong = ms  # worst case: the whole subensemble

    return BudgetReport(
        eps_weak_both=weak_error_both(m, k, dp),
        eps_target=eps,
        error_ratio_strong_over_weak=math.sqrt(2.0 * var) / dp,
        strong_subensemble=ms,
        total_strong_ensemble=mtot,
        ensemble_ratio_strong_over_weak=4.0 * var / dp**2,
        strong_scheme_smaller=mtot < m,
        waste_weak_per_measurement=waste_weak,
        waste_weak_per_measurement_i2=waste_weak_i2,
        waste_strong_per_measurement=waste_strong,
        waste_total_weak_scheme=k * waste_weak,
        waste_total_strong_scheme=2 * k * waste_strong,
        waste_ratio_strong_over_weak=(waste_strong / waste_weak) if waste_weak else None,
    )
