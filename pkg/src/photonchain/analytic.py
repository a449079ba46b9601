"""Closed-form counting statistics: SNR under loss, squeezing limits,
segmented-detector confidence, and amplification noise.

Full expressions and their large-N approximations are exposed as distinct
results because they differ by factors up to sqrt(eta); nothing here silently
substitutes one for the other. Strict inequalities ("much greater") are made
concrete with a decade threshold.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "SourceSpec",
    "ConfidenceInputs",
    "SnrCorrelated",
    "SnrFano",
    "SqueezingBound",
    "NoiseBudget",
    "snr_classical",
    "snr_correlated",
    "snr_fano",
    "squeezing_bound",
    "confidence",
    "excess_noise_factor",
    "noise_budget",
    "REGIME_DECADE",
]

# f / ((1-eta)/eta) at least a decade above or below 1 decides which term
# dominates the noise denominator.
REGIME_DECADE = 10.0


@dataclass(frozen=True)
class SourceSpec:
    """Photon source: mean photons per observation window and Fano factor.

    kind 'poisson' pins fano to 1; 'deterministic' is the perfectly
    correlated train, whose effective Fano factor for the closed-form
    expressions is 1/N.
    """

    kind: str
    mean_photons: float
    fano: float = 1.0

    def __post_init__(self):
        if self.kind not in ("poisson", "fano", "deterministic"):
            raise ValueError(f"kind={self.kind!r} must be poisson, fano, or deterministic")
        if self.mean_photons <= 0.0:
            raise ValueError(f"mean_photons={self.mean_photons!r} must be positive")
        if self.fano <= 0.0:
            raise ValueError(f"fano={self.fano!r} must be positive")
        if self.kind == "poisson" and self.fano != 1.0:
            raise ValueError(f"poisson sources have fano=1, got {self.fano!r}")

    @property
    def effective_fano(self) -> float:
        """Fano factor to use in the closed-form expressions."""
        if self.kind == "deterministic":
            return 1.0 / self.mean_photons
        return self.fano


@dataclass(frozen=True)
class ConfidenceInputs:
    """Segmented-detector inputs: element count, efficiency, mean photon
    number alpha of the state (delta = alpha^2/2)."""

    n_elements: int
    eta: float
    alpha: float

    def __post_init__(self):
        if int(self.n_elements) != self.n_elements or self.n_elements < 1:
            raise ValueError(f"n_elements={self.n_elements!r} must be an integer >= 1")
        if not 0.0 <= self.eta <= 1.0:
            raise ValueError(f"eta={self.eta!r} must lie in [0, 1]")
        if self.alpha < 0.0:
            raise ValueError(f"alpha={self.alpha!r} must be nonnegative")

    @property
    def delta(self) -> float:
        return self.alpha ** 2 / 2.0


def _check_eta(eta: float, open_top: bool = False) -> None:
    if open_top:
        if not 0.0 < eta < 1.0:
            raise ValueError(f"eta={eta!r} must lie in (0, 1)")
    elif not 0.0 < eta <= 1.0:
        raise ValueError(f"eta={eta!r} must lie in (0, 1]")


def _check_positive(name: str, value: float) -> None:
    if value <= 0.0:
        raise ValueError(f"{name}={value!r} must be positive")


def snr_classical(eta: float, n: float) -> float:
    """SNR of a Poissonian source seen through efficiency eta: sqrt(eta*N)."""
    _check_eta(eta)
    _check_positive("n", n)
    return math.sqrt(eta * n)


@dataclass(frozen=True)
class SnrCorrelated:
    """SNR of a perfectly correlated source through loss 1-eta.

    full = eta*N / sqrt(eta + (1-eta)*N); approx = sqrt(eta*N)/sqrt(1-eta),
    valid for N >> eta/(1-eta) (approx_valid uses a decade threshold).
    """

    full: float
    approx: float
    approx_valid: bool


def snr_correlated(eta: float, n: float) -> SnrCorrelated:
    """SNR of a perfectly correlated photon train after uncorrelated loss."""
    _check_eta(eta, open_top=True)
    _check_positive("n", n)
    full = eta * n / math.sqrt(eta + (1.0 - eta) * n)
    approx = math.sqrt(eta * n) / math.sqrt(1.0 - eta)
    valid = n >= REGIME_DECADE * eta / (1.0 - eta)
    return SnrCorrelated(full=full, approx=approx, approx_valid=valid)


@dataclass(frozen=True)
class SnrFano:
    """SNR of a partially squeezed source (Fano factor f) through loss.

    full = eta*N / sqrt(eta*f*N + (1-eta)*N);
    approx = sqrt(eta*N) / sqrt(f + (1-eta)/eta).
    regime tells which denominator term dominates: 'squeezing-limited' when
    f is at least a decade above (1-eta)/eta, 'loss-limited' a decade below,
    'mixed' otherwise.
    """

    full: float
    approx: float
    regime: str
    regime_ratio: float


def snr_fano(eta: float, f: float, n: float) -> SnrFano:
    """SNR for real (imperfectly squeezed) light with detector inefficiency."""
    _check_eta(eta)
    _check_positive("f", f)
    _check_positive("n", n)
    full = eta * n / math.sqrt(eta * f * n + (1.0 - eta) * n)
    loss_term = (1.0 - eta) / eta
    approx = math.sqrt(eta * n) / math.sqrt(f + loss_term)
    ratio = f / loss_term if loss_term > 0.0 else math.inf
    if ratio >= REGIME_DECADE:
        regime = "squeezing-limited"
    elif ratio <= 1.0 / REGIME_DECADE:
        regime = "loss-limited"
    else:
        regime = "mixed"
    return SnrFano(full=full, approx=approx, regime=regime, regime_ratio=ratio)


@dataclass(frozen=True)
class SqueezingBound:
    """Largest Fano factor compatible with a target SNR improvement.

    max_fano is the signed value improvement_factor^-2 - (1-eta)/eta; the
    bound is infeasible when it is not positive (the detector alone forbids
    the target).
    """

    max_fano: float
    feasible: bool


def squeezing_bound(improvement_factor: float, eta: float) -> SqueezingBound:
    """Solve sqrt(f + (1-eta)/eta) <= 1/improvement_factor for f."""
    if improvement_factor <= 1.0:
        raise ValueError(f"improvement_factor={improvement_factor!r} must exceed 1")
    _check_eta(eta)
    loss_term = (1.0 - eta) / eta
    max_fano = improvement_factor ** -2 - loss_term
    return SqueezingBound(max_fano=max_fano, feasible=max_fano > 0.0)


def confidence(c: ConfidenceInputs) -> float:
    """Probability that simultaneously arriving photons strike distinct
    elements of an N_E-element detector: N_E / (N_E + delta*(eta^2 +
    2*N_E*(1-eta^2)))."""
    ne = float(c.n_elements)
    penalty = c.delta * (c.eta ** 2 + 2.0 * ne * (1.0 - c.eta ** 2))
    return ne / (ne + penalty)


def excess_noise_factor(mean_gain: float, mean_square_gain: float) -> float:
    """Excess noise factor <M^2>/<M>^2 of a multiplication gain M."""
    _check_positive("mean_gain", mean_gain)
    if mean_square_gain < mean_gain ** 2:
        raise ValueError(
            f"mean_square_gain={mean_square_gain!r} must be >= mean_gain^2 "
            f"= {mean_gain ** 2!r}")
    return mean_square_gain / mean_gain ** 2


@dataclass(frozen=True)
class NoiseBudget:
    """Summed noise variances and whether shot noise is the limiting term."""

    total: float
    shot_limited: bool


def noise_budget(sigma2_shot: float, sigma2_dark: float = 0.0,
                 sigma2_stray: float = 0.0, sigma2_etc: float = 0.0) -> NoiseBudget:
    """Total noise variance; shot-limited when the shot term is at least as
    large as everything else combined."""
    terms = (sigma2_shot, sigma2_dark, sigma2_stray, sigma2_etc)
    for name, value in zip(("sigma2_shot", "sigma2_dark", "sigma2_stray", "sigma2_etc"), terms):
        if value < 0.0:
            raise ValueError(f"{name}={value!r} must be nonnegative")
    others = sigma2_dark + sigma2_stray + sigma2_etc
    return NoiseBudget(total=sigma2_shot + others, shot_limited=sigma2_shot >= others)
