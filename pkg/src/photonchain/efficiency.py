"""Quantum-efficiency budget arithmetic for a four-stage detection chain.

The chain is collection -> transmission/absorption -> photoelectron
conversion -> multiplication. All functions here are pure and deterministic;
the stochastic counterparts live in :mod:`photonchain.montecarlo`.
"""

from __future__ import annotations

from dataclasses import dataclass

__all__ = [
    "StageEfficiencies",
    "RateBudget",
    "DarkAdjustedQE",
    "RateBracket",
    "trap_absorption",
    "trap_absorption_series",
    "total_qe",
    "dark_adjusted_qe",
    "photon_flux",
    "rate_bracket",
    "HC_JOULE_METERS",
    "DEFAULT_RATE_MARGIN",
]

# Planck constant times speed of light, J*m.
HC_JOULE_METERS = 1.98645e-25

# Default separation factor for the operating-rate bracket: the count rate
# should exceed the dark rate, and stay below the saturation rate 1/tau_D,
# by three orders of magnitude.
DEFAULT_RATE_MARGIN = 1e3


def _check_fraction(name: str, value: float) -> None:
    if not 0.0 <= value <= 1.0:
        raise ValueError(f"{name}={value!r} must lie in [0, 1]")


@dataclass(frozen=True)
class StageEfficiencies:
    """The four per-stage efficiencies plus the number of trap detectors.

    eta_abs is the single-bounce absorption probability; trap_detectors = 1
    means a single pass with no trap geometry.
    """

    eta_col: float
    eta_abs: float
    eta_pe: float
    eta_mul: float = 1.0
    trap_detectors: int = 1

    def __post_init__(self):
        for name in ("eta_col", "eta_abs", "eta_pe", "eta_mul"):
            _check_fraction(name, getattr(self, name))
        if int(self.trap_detectors) != self.trap_detectors or self.trap_detectors < 1:
            raise ValueError(f"trap_detectors={self.trap_detectors!r} must be an integer >= 1")


@dataclass(frozen=True)
class RateBudget:
    """Operating rates in Hz and the device dead time in seconds.

    Fields are None when unknown; each operation states which ones it needs.
    """

    count_rate: float | None = None
    dark_rate: float | None = None
    dead_time: float | None = None
    photon_flux: float | None = None

    def __post_init__(self):
        for name in ("count_rate", "dark_rate", "dead_time", "photon_flux"):
            value = getattr(self, name)
            if value is not None and value < 0.0:
                raise ValueError(f"{name}={value!r} must be nonnegative")


def _bounces(n_detectors: int, geometry: str) -> int:
    # A retro-reflecting end detector sends the photon back down the chain,
    # giving 2N-1 encounters with an absorbing surface; a linear chain gives N.
    if geometry == "retro":
        return 2 * n_detectors - 1
    if geometry == "linear":
        return n_detectors
    raise ValueError(f"geometry={geometry!r} must be 'retro' or 'linear'")


def trap_absorption(eta_abs: float, n_detectors: int, geometry: str = "retro") -> float:
    """Effective absorption probability of a light trap with n detectors.

    Each surface encounter absorbs with probability eta_abs, so k encounters
    absorb with probability 1 - (1 - eta_abs)^k; the closed form of the
    geometric series, used for numerical stability.
    """
    _check_fraction("eta_abs", eta_abs)
    if int(n_detectors) != n_detectors or n_detectors < 1:
        raise ValueError(f"n_detectors={n_detectors!r} must be an integer >= 1")
    bounces = _bounces(n_detectors, geometry)
    if bounces == 1:
        # One encounter is the bare absorption probability; keep it exact.
        return eta_abs
    return 1.0 - (1.0 - eta_abs) ** bounces


def trap_absorption_series(eta_abs: float, n_detectors: int, geometry: str = "retro") -> float:
    """Term-by-term geometric series for the trap absorption probability.

    Mathematically identical to :func:`trap_absorption`; retained as an
    independent cross-check of the closed form.
    """
    _check_fraction("eta_abs", eta_abs)
    if int(n_detectors) != n_detectors or n_detectors < 1:
        raise ValueError(f"n_detectors={n_detectors!r} must be an integer >= 1")
    return sum(eta_abs * (1.0 - eta_abs) ** (n - 1)
               for n in range(1, _bounces(n_detectors, geometry) + 1))


def total_qe(s: StageEfficiencies, geometry: str = "retro") -> float:
    """Total quantum efficiency: the product of the four stage efficiencies,
    with the absorption stage enhanced by the trap geometry."""
    return (s.eta_col
            * trap_absorption(s.eta_abs, s.trap_detectors, geometry)
            * s.eta_pe
            * s.eta_mul)


@dataclass(frozen=True)
class DarkAdjustedQE:
    """Dark-count-adjusted quantum efficiency.

    value = eta_total - N_d/N. from_count_rate is the measured-rate reading
    (N_c - N_d)/N, present only when a count rate was supplied. value can be
    negative when dark counts swamp the signal; callers decide significance.
    """

    value: float
    from_count_rate: float | None = None


def dark_adjusted_qe(eta_total: float, b: RateBudget) -> DarkAdjustedQE:
    """Adjust a total QE for the dark-count contribution at photon flux N."""
    if b.dark_rate is None:
        raise ValueError("dark_rate is unknown; cannot adjust for dark counts")
    if not b.photon_flux:
        raise ValueError("photon_flux must be positive to adjust for dark counts")
    value = eta_total - b.dark_rate / b.photon_flux
    measured = None
    if b.count_rate is not None:
        measured = (b.count_rate - b.dark_rate) / b.photon_flux
    return DarkAdjustedQE(value=value, from_count_rate=measured)


def photon_flux(power: float, wavelength: float) -> float:
    """Photon flux lambda*P/(hc) in photons/s for power in W, wavelength in m."""
    if power < 0.0:
        raise ValueError(f"power={power!r} must be nonnegative")
    if wavelength <= 0.0:
        raise ValueError(f"wavelength={wavelength!r} must be positive")
    return wavelength * power / HC_JOULE_METERS


@dataclass(frozen=True)
class RateBracket:
    """Admissible count-rate interval [low, high] with the margin applied.

    Infeasible brackets keep both bounds so the violated gap can be reported;
    violation_ratio = low/high > 1 in that case.
    """

    low: float
    high: float
    feasible: bool
    margin: float

    @property
    def violation_ratio(self) -> float | None:
        if self.feasible:
            return None
        return self.low / self.high


def rate_bracket(b: RateBudget, margin: float = DEFAULT_RATE_MARGIN) -> RateBracket:
    """Bracket the usable count rate: margin*N_d <= N_c <= 1/(margin*tau_D).

    The margin makes the strict orderings 1/tau_D >> N_c >> N_d concrete;
    the bracket is nonempty iff margin^2 * N_d * tau_D < 1.
    """
    if margin < 1.0:
        raise ValueError(f"margin={margin!r} must be >= 1")
    if b.dark_rate is None:
        raise ValueError("dark_rate is unknown; cannot bracket the count rate")
    if b.dead_time is None or b.dead_time <= 0.0:
        raise ValueError("dead_time must be positive to bracket the count rate")
    low = margin * b.dark_rate
    high = 1.0 / (margin * b.dead_time)
    feasible = margin * margin * b.dark_rate * b.dead_time < 1.0
    return RateBracket(low=low, high=high, feasible=feasible, margin=margin)
