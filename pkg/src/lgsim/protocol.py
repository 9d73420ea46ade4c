"""Leggett-Garg measurement scheduling and two-time correlator estimation.

A plan over k times t_1 < ... < t_k runs k series, one per time pair
(1,2), (2,3), ..., (k-1,k), (1,k). Each series consumes a freshly
prepared subensemble: every event evolves the initial state to the
earlier time, measures (strong, or weak through a Gaussian pointer),
evolves the conditional state to the later time, measures strongly, and
contributes the product of the two readings to the correlator estimate.

The earlier slot of each series is the one that must approximate a
non-invasive measurement; the schedule records that label (k of the 2k
events) without it changing any behavior.

Sampling is chunked and vectorized: chunk c of series s always draws
from ``substream(seed, s, c)`` and partial sums merge in chunk order, so
estimates do not depend on worker count or scheduling.
"""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError, require_same_dim
from .measurement import MODE_STRONG, MODE_WEAK, PointerModel, _warn_if_not_weak
from .quantum import (
    DensityMatrix,
    Observable,
    _as_complex_matrix,
    _check_hermitian,
    basis_state,
    born_weights,
    evolve,
    pauli,
    propagator,
    spectral_decompose,
)
from .streams import DEFAULT_CHUNK_SIZE, chunk_sizes, substream


@dataclass(frozen=True)
class MeasurementEvent:
    """One scheduled measurement slot of a plan."""

    series_index: int   # 1-based series number
    time_index: int     # 1-based index into the plan's times
    slot: str           # "first" or "second" within the series
    non_invasive: bool  # True for the earlier slot of each series


@dataclass(frozen=True)
class SeriesPlan:
    """k measurement times and the k time pairs they are visited in."""

    k: int
    times: tuple[float, ...]

    def __post_init__(self):
        if self.k < 3:
            raise ValidationError(f"a plan needs k >= 3 time slices, got {self.k}")
        times = tuple(float(t) for t in self.times)
        if len(times) != self.k:
            raise ValidationError(
                f"expected {self.k} times, got {len(times)}"
            )
        if any(b <= a for a, b in zip(times, times[1:])):
            raise ValidationError(f"times must be strictly increasing, got {times}")
        object.__setattr__(self, "times", times)

    @property
    def pairs(self) -> tuple[tuple[int, int], ...]:
        """1-based index pairs (1,2), (2,3), ..., (k-1,k), (1,k)."""
        seq = [(i, i + 1) for i in range(1, self.k)]
        seq.append((1, self.k))
        return tuple(seq)

    def pair_times(self, pair: tuple[int, int]) -> tuple[float, float]:
        i, j = pair
        return self.times[i - 1], self.times[j - 1]

    def event_schedule(self) -> list[MeasurementEvent]:
        """All 2k measurement slots; the k earlier ones carry the NIM label."""
        events = []
        for s, (i, j) in enumerate(self.pairs, start=1):
            events.append(MeasurementEvent(s, i, "first", True))
            events.append(MeasurementEvent(s, j, "second", False))
        return events


def build_series(k: int, times) -> SeriesPlan:
    """Validate and assemble a k-slice plan."""
    return SeriesPlan(k=int(k), times=tuple(times))


@dataclass(frozen=True)
class DynamicsSpec:
    """System under test: Hamiltonian, measured observable, prepared state.

    The state is prepared at time 0; plan times are measured from there.
    The observable is fixed, with the Heisenberg picture realized by
    evolving the state between measurements.
    """

    hamiltonian: np.ndarray
    observable: Observable
    initial_state: DensityMatrix

    def __post_init__(self):
        h = _as_complex_matrix(self.hamiltonian, "hamiltonian")
        _check_hermitian(h, "hamiltonian")
        require_same_dim(h.shape[0], self.observable.dim, self.initial_state.dim)
        h = h.copy()
        h.setflags(write=False)
        object.__setattr__(self, "hamiltonian", h)


@dataclass(frozen=True)
class CorrelatorEstimate:
    """Monte Carlo estimate of one two-time correlator."""

    pair: tuple[int, int]
    value: float
    std_error: float
    n_events: int


def precession_qubit(omega: float = 1.0) -> DynamicsSpec:
    """Canonical benchmark: qubit precessing under (omega/2) sigma_x, measuring sigma_z."""
    return DynamicsSpec(
        hamiltonian=0.5 * omega * pauli("x"),
        observable=spectral_decompose(pauli("z")),
        initial_state=basis_state(2, 0),
    )


# ---------------------------------------------------------------------------
# series execution


def _inverse_cdf(cum_rows: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Row-wise inverse-CDF draw; cum_rows is (n, d) of cumulative weights."""
    idx = (cum_rows <= u[:, None]).sum(axis=1)
    return np.minimum(idx, cum_rows.shape[1] - 1)


class _SeriesKernel:
    """Precomputed per-series tables; maps one rng chunk to outcome products."""

    def __init__(
        self,
        dyn: DynamicsSpec,
        t_first: float,
        t_second: float,
        first_mode: str,
        pointer: PointerModel | None,
    ):
        obs = dyn.observable
        self.first_mode = first_mode
        self.eigenvalues = obs.eigenvalues
        rho0 = dyn.initial_state
        rho_first = evolve(rho0, propagator(dyn.hamiltonian, t_first)) if t_first else rho0
        u_gap = propagator(dyn.hamiltonian, t_second - t_first)
        w1 = born_weights(rho_first, obs).probabilities
        self.cum_first = np.cumsum(w1)
        d = obs.n_outcomes

        if first_mode == MODE_STRONG:
            # per-branch conditional states, evolved, reduced to Born rows
            rows = np.empty((d, d))
            for b in range(d):
                if w1[b] <= 0.0:
                    rows[b] = np.eye(d)[0]
                    continue
                cond = obs.projectors[b] @ rho_first.matrix @ obs.projectors[b] / w1[b]
                cond = DensityMatrix(0.5 * (cond + cond.conj().T))
                rows[b] = born_weights(evolve(cond, u_gap), obs).probabilities
            self.cum_second = np.cumsum(rows, axis=1)
        else:
            assert pointer is not None
            self.sigma = math.sqrt(pointer.position_variance)
            self.two_width_sq = 2.0 * pointer.width**2
            # G[b, i, j] = tr(B_b P_i rho P_j) with B_b the Heisenberg projector,
            # so the joint weight of reading p and second outcome b is
            # Re sum_ij phi_i(p) G[b,i,j] phi_j(p)
            blocks = np.einsum(
                "iab,bc,jcd->ijad", obs.projectors, rho_first.matrix, obs.projectors
            )
            heis = np.stack([u_gap.conj().T @ p @ u_gap for p in obs.projectors])
            self.g_table = np.einsum("bad,ijda->bij", heis, blocks)

    def run_chunk(self, rng: np.random.Generator, m: int) -> tuple[int, float, float]:
        """Simulate m events; return (count, sum, sum of squares) of products."""
        a = self.eigenvalues
        idx1 = np.minimum(
            np.searchsorted(self.cum_first, rng.uniform(size=m), side="right"),
            a.size - 1,
        )
        if self.first_mode == MODE_STRONG:
            first = a[idx1]
            idx2 = _inverse_cdf(self.cum_second[idx1], rng.uniform(size=m))
        else:
            first = a[idx1] + self.sigma * rng.standard_normal(m)
            logphi = -((first[:, None] - a[None, :]) ** 2) / self.two_width_sq
            phi = np.exp(logphi - logphi.max(axis=1, keepdims=True))
            w2 = np.einsum("ei,bij,ej->eb", phi, self.g_table, phi).real
            w2 = np.clip(w2, 0.0, None)
            cum2 = np.cumsum(w2, axis=1)
            cum2 /= cum2[:, -1:]
            idx2 = _inverse_cdf(cum2, rng.uniform(size=m))
        products = first * a[idx2]
        return m, float(products.sum()), float(np.dot(products, products))


def _merge_partials(partials: list[tuple[int, float, float]]) -> tuple[int, float, float]:
    n = sum(p[0] for p in partials)
    s1 = 0.0
    s2 = 0.0
    for _, a, b in partials:  # fixed chunk order => worker-count independent
        s1 += a
        s2 += b
    return n, s1, s2


def _check_run_args(first_mode, pointer, obs, n, workers) -> None:
    if first_mode not in (MODE_STRONG, MODE_WEAK):
        raise ValidationError(f"first_mode must be 'strong' or 'weak', got {first_mode!r}")
    if first_mode == MODE_WEAK:
        if pointer is None:
            raise ValidationError("weak first measurements need a pointer model")
        _warn_if_not_weak(pointer, obs)
    if n < 2:
        raise ValidationError(f"n_per_series must be >= 2, got {n}")
    if workers < 1:
        raise ValidationError(f"workers must be >= 1, got {workers}")
    if not obs.is_dichotomic():
        warnings.warn(
            "observable eigenvalues are not all +/-1; correlators are fine but "
            "the K3 macrorealism bound does not apply",
            UserWarning,
            stacklevel=3,
        )


def _run_kernels(
    kernels: list[_SeriesKernel],
    n_events: int,
    seed: int,
    stream_base: int,
    workers: int,
    chunk_size: int,
) -> list[tuple[int, float, float]]:
    """Per-series (count, sum, sum-of-squares), merged in fixed chunk order."""
    sizes = chunk_sizes(n_events, chunk_size)
    jobs = [
        (s_idx, c_idx, m)
        for s_idx in range(len(kernels))
        for c_idx, m in enumerate(sizes)
    ]

    def run_job(job):
        s_idx, c_idx, m = job
        return kernels[s_idx].run_chunk(substream(seed, stream_base + s_idx, c_idx), m)

    if workers == 1:
        results = [run_job(j) for j in jobs]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run_job, jobs))

    n_chunks = len(sizes)
    return [
        _merge_partials(results[s_idx * n_chunks : (s_idx + 1) * n_chunks])
        for s_idx in range(len(kernels))
    ]


def _estimate_from_sums(pair: tuple[int, int], sums: tuple[int, float, float]) -> CorrelatorEstimate:
    n, s1, s2 = sums
    mean = s1 / n
    sample_var = max(s2 - n * mean * mean, 0.0) / (n - 1)
    return CorrelatorEstimate(
        pair=pair, value=mean, std_error=math.sqrt(sample_var / n), n_events=n
    )


def run_series(
    plan: SeriesPlan,
    dyn: DynamicsSpec,
    first_mode: str,
    n_per_series: int,
    seed: int,
    pointer: PointerModel | None = None,
    workers: int = 1,
    chunk_size: int = DEFAULT_CHUNK_SIZE,
    stream_base: int = 0,
) -> list[CorrelatorEstimate]:
    """Estimate every correlator of the plan from fresh subensembles.

    ``first_mode`` selects how the earlier measurement of each series is
    done ("strong" or "weak"; the later one is always strong). The
    estimate for pair (i, j) is the mean of (first reading x second
    reading) over ``n_per_series`` events, with its standard error.
    Series s draws from streams (seed, stream_base + s, chunk).
    """
    _check_run_args(first_mode, pointer, dyn.observable, n_per_series, workers)
    kernels = [
        _SeriesKernel(dyn, *plan.pair_times(pair), first_mode, pointer)
        for pair in plan.pairs
    ]
    per_series = _run_kernels(kernels, n_per_series, seed, stream_base, workers, chunk_size)
    return [
        _estimate_from_sums(pair, sums) for pair, sums in zip(plan.pairs, per_series)
    ]


def estimate_correlator(
    dyn: DynamicsSpec,
    t_first: float,
    t_second: float,
    first_mode: str,
    n_events: int,
    seed: int,
    pointer: PointerModel | None = None,
    workers: int = 1,
    chunk_size: int = DEFAULT_CHUNK_SIZE,
    stream_base: int = 0,
) -> CorrelatorEstimate:
    """One two-time correlator outside any plan (sweeps, convergence studies)."""
    if t_second <= t_first:
        raise ValidationError(f"need t_second > t_first, got {t_first} >= {t_second}")
    _check_run_args(first_mode, pointer, dyn.observable, n_events, workers)
    kernel = _SeriesKernel(dyn, t_first, t_second, first_mode, pointer)
    sums = _run_kernels([kernel], n_events, seed, stream_base, workers, chunk_size)[0]
    return _estimate_from_sums((1, 2), sums)


# ---------------------------------------------------------------------------
# LG statistics


def k3_statistic(c12: float, c23: float, c13: float) -> float:
    """Three-time statistic K3 = C12 + C23 - C13."""
    for v in (c12, c23, c13):
        if not math.isfinite(v):
            raise ValidationError(f"correlators must be finite, got {v!r}")
    return c12 + c23 - c13


def lg_satisfied(k3: float) -> bool:
    """Macrorealism bound: -3 <= K3 <= 1."""
    return -3.0 <= k3 <= 1.0


def quantum_k3_oracle(omega: float, tau: float) -> float:
    """Analytic K3 for the precessing qubit with equally spaced times.

    With strong-first series and gap tau: C(i,i+1) = cos(omega tau) and
    C(1,3) = cos(2 omega tau), so K3 = 2 cos(omega tau) - cos(2 omega tau).
    """
    return 2.0 * math.cos(omega * tau) - math.cos(2.0 * omega * tau)
