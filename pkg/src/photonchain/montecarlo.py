"""Seeded Monte-Carlo simulation of a photon-counting chain.

Pipeline per observation window: generate source counts, thin each photon
through the end-to-end efficiency, add dark counts and apply non-paralyzable
dead time, then multiply surviving photoelectrons through a gain model.

Every random draw comes from a counter-based Philox stream keyed by
(master seed, stage, window), so a window's draws never depend on execution
order: chunked or threaded runs are bit-identical to serial ones.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .analytic import SourceSpec

__all__ = [
    "GainModel",
    "SimulationConfig",
    "CountStatistics",
    "Prediction",
    "RunResult",
    "generate_counts",
    "thin",
    "apply_dark_and_deadtime",
    "apply_gain",
    "run",
    "count_statistics",
    "predicted_count_moments",
    "exact_thinned_train_moments",
    "default_threads",
    "THREADS_ENV_VAR",
]

# Stage indices keying the per-window random streams.
_GENERATE, _THIN, _DARK, _DEADTIME, _GAIN = range(5)

# Windows per work unit; fixed so the chunking (and therefore every draw)
# is independent of the thread count.
_CHUNK_WINDOWS = 4096

THREADS_ENV_VAR = "PHOTONCHAIN_THREADS"

_UINT64 = 1 << 64
_WINDOW_BITS = 48


def default_threads() -> int:
    """Worker thread count from the environment, default 1."""
    return max(1, int(os.environ.get(THREADS_ENV_VAR, "1")))


def _stream(seed: int, stage: int, window: int) -> np.random.Generator:
    # 128-bit Philox key: master seed in one word, stage and window packed in
    # the other. Windows are limited to 2**48 per run.
    key = np.array([seed % _UINT64, (stage << _WINDOW_BITS) | window], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


@dataclass(frozen=True)
class GainModel:
    """Multiplication gain per photoelectron.

    kind 'none' passes counts through unchanged, 'deterministic' multiplies
    by a fixed mean_gain, 'exponential' draws each gain from an exponential
    distribution with the given mean.
    """

    kind: str = "none"
    mean_gain: float = 1.0

    def __post_init__(self):
        if self.kind not in ("none", "deterministic", "exponential"):
            raise ValueError(f"kind={self.kind!r} must be none, deterministic, or exponential")
        if self.kind != "none" and self.mean_gain <= 0.0:
            raise ValueError(f"mean_gain={self.mean_gain!r} must be positive")


@dataclass(frozen=True)
class SimulationConfig:
    """Full description of one simulation run; (config, seed) fixes every draw."""

    source: SourceSpec
    eta_effective: float = 1.0
    dark_rate_per_window: float = 0.0
    dead_time_windows: float = 0.0
    gain_model: GainModel = GainModel("none")
    windows: int = 10_000
    seed: int = 0

    def __post_init__(self):
        if not 0.0 <= self.eta_effective <= 1.0:
            raise ValueError(f"eta_effective={self.eta_effective!r} must lie in [0, 1]")
        if self.dark_rate_per_window < 0.0:
            raise ValueError(f"dark_rate_per_window={self.dark_rate_per_window!r} "
                             "must be nonnegative")
        if self.dead_time_windows < 0.0:
            raise ValueError(f"dead_time_windows={self.dead_time_windows!r} "
                             "must be nonnegative")
        if int(self.windows) != self.windows or self.windows < 1:
            raise ValueError(f"windows={self.windows!r} must be an integer >= 1")


@dataclass(frozen=True)
class CountStatistics:
    """Empirical windowed-count statistics.

    variance uses the unbiased (n-1) estimator. fano, snr, and the Fano
    standard error are None when the mean or variance is zero.
    """

    mean: float
    variance: float
    fano: float | None
    snr: float | None
    windows: int
    standard_error_of_fano: float | None


def count_statistics(values: np.ndarray) -> CountStatistics:
    """Summarize per-window counts (or charges) into CountStatistics."""
    values = np.asarray(values, dtype=np.float64)
    w = int(values.size)
    if w < 1:
        raise ValueError("need at least one window")
    mean = float(np.mean(values))
    variance = float(np.var(values, ddof=1)) if w > 1 else 0.0
    if mean == 0.0 or variance == 0.0:
        return CountStatistics(mean, variance, None, None, w, None)
    fano = variance / mean
    return CountStatistics(
        mean=mean,
        variance=variance,
        fano=fano,
        snr=mean / math.sqrt(variance),
        windows=w,
        standard_error_of_fano=fano * math.sqrt(2.0 / w),
    )


# ---------------------------------------------------------------------------
# Source generation


def _source_sampler(source: SourceSpec):
    """Resolve a SourceSpec into (kind, params) for per-window sampling.

    Sub-Poissonian sources use a binomial construction: n trials chosen so a
    success probability p = N/n gives mean exactly N and Fano factor 1 - p
    (equal to f whenever N/(1-f) is an integer). Super-Poissonian sources use
    a negative binomial with mean N and variance f*N.
    """
    n_mean = source.mean_photons
    if source.kind == "deterministic":
        return ("const", int(round(n_mean)))
    f = source.fano
    if source.kind == "poisson" or f == 1.0:
        return ("poisson", n_mean)
    if f < 1.0:
        trials = int(round(n_mean / (1.0 - f)))
        if trials < 1:
            raise ValueError(
                f"fano={f} with mean {n_mean}: N/(1-f) rounds to {trials} trials (< 1)")
        p = n_mean / trials
        if p > 1.0:
            raise ValueError(
                f"fano={f} with mean {n_mean}: rounded trial count {trials} cannot "
                f"reach the mean (p={p} > 1)")
        return ("binomial", trials, p)
    # f > 1: gamma-Poisson mixture.
    shape = n_mean / (f - 1.0)
    return ("negbin", shape, 1.0 / f)


def _generate_range(source: SourceSpec, start: int, stop: int, seed: int) -> np.ndarray:
    sampler = _source_sampler(source)
    out = np.empty(stop - start, dtype=np.int64)
    if sampler[0] == "const":
        out.fill(sampler[1])
        return out
    if sampler[0] == "poisson":
        lam = sampler[1]
        for i, w in enumerate(range(start, stop)):
            out[i] = _stream(seed, _GENERATE, w).poisson(lam)
    elif sampler[0] == "binomial":
        _, trials, p = sampler
        for i, w in enumerate(range(start, stop)):
            out[i] = _stream(seed, _GENERATE, w).binomial(trials, p)
    else:
        _, shape, p = sampler
        for i, w in enumerate(range(start, stop)):
            out[i] = _stream(seed, _GENERATE, w).negative_binomial(shape, p)
    return out


def generate_counts(source: SourceSpec, windows: int, seed: int) -> np.ndarray:
    """Draw per-window photon counts for the given source."""
    if windows < 1:
        raise ValueError(f"windows={windows!r} must be >= 1")
    return _generate_range(source, 0, windows, seed)


# ---------------------------------------------------------------------------
# Loss, dark counts, dead time


def _thin_range(counts: np.ndarray, eta: float, seed: int, start: int) -> np.ndarray:
    if eta == 1.0:
        return np.array(counts, dtype=np.int64, copy=True)
    out = np.zeros(len(counts), dtype=np.int64)
    if eta == 0.0:
        return out
    for i, k in enumerate(counts):
        if k > 0:
            out[i] = _stream(seed, _THIN, start + i).binomial(int(k), eta)
    return out


def thin(counts, eta: float, seed: int, first_window: int = 0) -> np.ndarray:
    """Survive each photon independently with probability eta.

    first_window offsets the window indices used for stream derivation; the
    chunked engine uses it, callers normally leave it at 0.
    """
    if not 0.0 <= eta <= 1.0:
        raise ValueError(f"eta={eta!r} must lie in [0, 1]")
    return _thin_range(np.asarray(counts, dtype=np.int64), eta, seed, first_window)


def _deadtime_scan(times: np.ndarray, tau: float, cap: int) -> int:
    # Non-paralyzable: an accepted event at t blocks everything before t+tau.
    recorded = 0
    i = 0
    n = len(times)
    while i < n and recorded < cap:
        recorded += 1
        i = int(np.searchsorted(times, times[i] + tau, side="left"))
    return recorded


def _dark_deadtime_range(counts: np.ndarray, dark_rate: float, dead_time: float,
                         seed: int, start: int) -> np.ndarray:
    out = np.empty(len(counts), dtype=np.int64)
    cap = int(math.floor(1.0 / dead_time)) if dead_time > 0.0 else 0
    for i, k in enumerate(counts):
        w = start + i
        total = int(k)
        if dark_rate > 0.0:
            total += int(_stream(seed, _DARK, w).poisson(dark_rate))
        if dead_time > 0.0 and total > 0:
            times = np.sort(_stream(seed, _DEADTIME, w).random(total))
            total = _deadtime_scan(times, dead_time, cap)
        out[i] = total
    return out


def apply_dark_and_deadtime(counts, dark_rate_per_window: float,
                            dead_time_windows: float, seed: int,
                            first_window: int = 0) -> np.ndarray:
    """Add Poisson dark counts, then drop events lost to detector recovery.

    Events are placed uniformly in the window; the detector records an event
    only after dead_time_windows has elapsed since the previous recorded one,
    and never more than floor(1/dead_time_windows) per window.
    """
    if dark_rate_per_window < 0.0 or dead_time_windows < 0.0:
        raise ValueError("dark rate and dead time must be nonnegative")
    return _dark_deadtime_range(np.asarray(counts, dtype=np.int64),
                                dark_rate_per_window, dead_time_windows,
                                seed, first_window)


# ---------------------------------------------------------------------------
# Multiplication gain


def _gain_range(counts: np.ndarray, gain: GainModel, seed: int,
                start: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Per-window charge plus per-window sums of M and M^2 for the ENF."""
    k = np.asarray(counts, dtype=np.float64)
    if gain.kind == "none":
        return k.copy(), k.copy(), k.copy()
    if gain.kind == "deterministic":
        g = gain.mean_gain
        return k * g, k * g, k * (g * g)
    charges = np.zeros(len(counts), dtype=np.float64)
    m_sum = np.zeros(len(counts), dtype=np.float64)
    m2_sum = np.zeros(len(counts), dtype=np.float64)
    for i, c in enumerate(counts):
        if c > 0:
            draws = _stream(seed, _GAIN, start + i).exponential(gain.mean_gain, int(c))
            charges[i] = draws.sum()
            m_sum[i] = charges[i]
            m2_sum[i] = np.square(draws).sum()
    return charges, m_sum, m2_sum


def _enf_from_moments(m_sum: np.ndarray, m2_sum: np.ndarray,
                      n_draws: float) -> float | None:
    if n_draws <= 0:
        return None
    mean_gain = float(np.sum(m_sum)) / n_draws
    mean_sq = float(np.sum(m2_sum)) / n_draws
    if mean_gain == 0.0:
        return None
    return mean_sq / mean_gain ** 2


def apply_gain(counts, gain_model: GainModel, seed: int,
               first_window: int = 0) -> tuple[np.ndarray, float | None]:
    """Draw one gain per photoelectron; return per-window charge and the
    empirical excess noise factor <M^2>/<M>^2 over all draws."""
    counts = np.asarray(counts, dtype=np.int64)
    charges, m_sum, m2_sum = _gain_range(counts, gain_model, seed, first_window)
    return charges, _enf_from_moments(m_sum, m2_sum, float(counts.sum()))


# ---------------------------------------------------------------------------
# Full pipeline


@dataclass(frozen=True)
class RunResult:
    """Statistics of recorded counts (pre-gain) and of charge (post-gain).

    The per-window arrays are kept only on request (reports that histogram
    the counts); statistics never depend on them being retained.
    """

    counts: CountStatistics
    charge: CountStatistics
    enf: float | None
    recorded_counts: np.ndarray | None = None
    charge_per_window: np.ndarray | None = None


def _simulate_range(config: SimulationConfig, start: int, stop: int):
    counts = _generate_range(config.source, start, stop, config.seed)
    counts = _thin_range(counts, config.eta_effective, config.seed, start)
    counts = _dark_deadtime_range(counts, config.dark_rate_per_window,
                                  config.dead_time_windows, config.seed, start)
    charges, m_sum, m2_sum = _gain_range(counts, config.gain_model, config.seed, start)
    return counts, charges, m_sum, m2_sum


def run(config: SimulationConfig, threads: int | None = None,
        keep_arrays: bool = False) -> RunResult:
    """Execute the full pipeline; identical output for any thread count."""
    if threads is None:
        threads = default_threads()
    w = config.windows
    bounds = [(s, min(s + _CHUNK_WINDOWS, w)) for s in range(0, w, _CHUNK_WINDOWS)]
    if threads > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda b: _simulate_range(config, *b), bounds))
    else:
        parts = [_simulate_range(config, *b) for b in bounds]
    counts = np.concatenate([p[0] for p in parts])
    charges = np.concatenate([p[1] for p in parts])
    m_sum = np.concatenate([p[2] for p in parts])
    m2_sum = np.concatenate([p[3] for p in parts])
    enf = _enf_from_moments(m_sum, m2_sum, float(counts.sum()))
    return RunResult(counts=count_statistics(counts),
                     charge=count_statistics(charges),
                     enf=enf,
                     recorded_counts=counts if keep_arrays else None,
                     charge_per_window=charges if keep_arrays else None)


@dataclass(frozen=True)
class Prediction:
    """Exact first and second moments of the recorded counts (dead time and
    gain excluded): thinning maps source variance v to eta^2*v +
    eta*(1-eta)*mean, and dark counts add Poisson mean and variance."""

    mean: float
    variance: float
    fano: float | None
    snr: float | None


def predicted_count_moments(config: SimulationConfig) -> Prediction:
    """Analytic prediction for the recorded-count statistics of a run."""
    sampler = _source_sampler(config.source)
    if sampler[0] == "const":
        mean0, var0 = float(sampler[1]), 0.0
    elif sampler[0] == "poisson":
        mean0, var0 = sampler[1], sampler[1]
    elif sampler[0] == "binomial":
        _, trials, p = sampler
        mean0, var0 = trials * p, trials * p * (1.0 - p)
    else:
        _, shape, p = sampler
        mean0 = shape * (1.0 - p) / p
        var0 = mean0 / p
    eta = config.eta_effective
    mean = eta * mean0 + config.dark_rate_per_window
    variance = eta * eta * var0 + eta * (1.0 - eta) * mean0 + config.dark_rate_per_window
    fano = variance / mean if mean > 0.0 and variance > 0.0 else None
    snr = mean / math.sqrt(variance) if variance > 0.0 else None
    return Prediction(mean=mean, variance=variance, fano=fano, snr=snr)


def exact_thinned_train_moments(k: int, eta: float) -> tuple[float, float]:
    """Exact mean and variance of a k-photon train thinned at eta, by full
    enumeration of all 2^k loss patterns with their probabilities.

    Deliberately avoids the binomial mean/variance formulas so it can serve
    as an independent cross-check of them. k is capped at 12.
    """
    if int(k) != k or not 0 <= k <= 12:
        raise ValueError(f"k={k!r} must be an integer in [0, 12]")
    if not 0.0 <= eta <= 1.0:
        raise ValueError(f"eta={eta!r} must lie in [0, 1]")
    weights = [eta ** pattern.bit_count() * (1.0 - eta) ** (k - pattern.bit_count())
               for pattern in range(1 << k)]
    survivors = [pattern.bit_count() for pattern in range(1 << k)]
    mean = sum(p * c for p, c in zip(weights, survivors))
    variance = sum(p * (c - mean) ** 2 for p, c in zip(weights, survivors))
    return mean, variance
