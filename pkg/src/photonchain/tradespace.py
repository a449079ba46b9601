"""Parameter sweeps, small design solvers, and the design checklist.

Everything here is a thin deterministic layer over the efficiency and
analytic formulas: one row per grid point, closed-form or monotone searches
only, no general-purpose optimizer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

from .analytic import confidence as _confidence
from .analytic import ConfidenceInputs, snr_classical, snr_correlated, snr_fano
from .catalog import DetectorSpec
from .efficiency import (
    DEFAULT_RATE_MARGIN,
    RateBudget,
    StageEfficiencies,
    dark_adjusted_qe,
    rate_bracket,
    total_qe,
    trap_absorption,
)

__all__ = [
    "SweepContext",
    "SweepSpec",
    "SweepRow",
    "SweepResult",
    "TrapGeometry",
    "ChecklistItem",
    "ChecklistReport",
    "sweep",
    "min_trap_detectors",
    "checklist",
    "delay_lines",
    "SWEEP_VARIABLES",
    "SWEEP_METRICS",
    "SPEED_OF_LIGHT",
    "COLLECTION_LOSS_LIMIT",
]

SPEED_OF_LIGHT = 299792458.0

# Conclusions-checklist threshold on total collection-optics loss.
COLLECTION_LOSS_LIMIT = 1e-3

SWEEP_VARIABLES = ("eta", "eta_col", "eta_abs", "eta_pe", "eta_mul",
                   "trap_detectors", "fano", "n_photons", "dark_rate", "dead_time")

SWEEP_METRICS = ("total_qe", "trap_absorption", "snr_classical",
                 "snr_correlated_full", "snr_correlated_approx", "snr_fano_full",
                 "snr_fano_approx", "snr_improvement", "dark_adjusted_qe",
                 "confidence", "rate_bracket_feasible", "rate_bracket_low",
                 "rate_bracket_high")


@dataclass(frozen=True)
class SweepContext:
    """Fixed parameter context a sweep varies one member of.

    eta is the effective detection efficiency used by the SNR metrics; when
    None it is derived as total_qe(stages). Fields left None simply make the
    metrics that need them unavailable.
    """

    stages: StageEfficiencies | None = None
    eta: float | None = None
    fano: float = 1.0
    n_photons: float | None = None
    dark_rate: float | None = None
    dead_time: float | None = None
    count_rate: float | None = None
    photon_flux: float | None = None
    n_elements: int | None = None
    alpha: float | None = None
    margin: float = DEFAULT_RATE_MARGIN
    trap_geometry: str = "retro"

    def resolved_eta(self) -> float:
        if self.eta is not None:
            return self.eta
        if self.stages is not None:
            return total_qe(self.stages, self.trap_geometry)
        raise ValueError("context provides neither eta nor stage efficiencies")

    def budget(self) -> RateBudget:
        return RateBudget(count_rate=self.count_rate, dark_rate=self.dark_rate,
                          dead_time=self.dead_time, photon_flux=self.photon_flux)


@dataclass(frozen=True)
class SweepSpec:
    """One swept variable over a strictly monotone grid, with requested metrics."""

    variable: str
    grid: tuple[float, ...]
    fixed: SweepContext
    outputs: tuple[str, ...]

    def __post_init__(self):
        if self.variable not in SWEEP_VARIABLES:
            raise ValueError(f"unknown sweep variable {self.variable!r}; "
                             f"expected one of {SWEEP_VARIABLES}")
        object.__setattr__(self, "grid", tuple(self.grid))
        object.__setattr__(self, "outputs", tuple(self.outputs))
        if not self.grid:
            raise ValueError("sweep grid must be nonempty")
        diffs = [b - a for a, b in zip(self.grid, self.grid[1:])]
        if diffs and not (all(d > 0 for d in diffs) or all(d < 0 for d in diffs)):
            raise ValueError("sweep grid must be strictly monotone")
        if not self.outputs:
            raise ValueError("at least one output metric is required")
        unknown = set(self.outputs) - set(SWEEP_METRICS)
        if unknown:
            raise ValueError(f"unknown metric(s) {sorted(unknown)}; "
                             f"expected among {SWEEP_METRICS}")


@dataclass(frozen=True)
class SweepRow:
    value: float
    metrics: dict
    error: str | None = None


@dataclass(frozen=True)
class SweepResult:
    spec: SweepSpec
    rows: list[SweepRow] = field(default_factory=list)

    @property
    def columns(self) -> list[str]:
        return [self.spec.variable, *self.spec.outputs, "error"]


def _apply_variable(ctx: SweepContext, variable: str, value: float) -> SweepContext:
    if variable == "eta":
        return replace(ctx, eta=value)
    if variable in ("fano", "n_photons", "dark_rate", "dead_time"):
        return replace(ctx, **{variable: value})
    if ctx.stages is None:
        raise ValueError(f"sweeping {variable} requires stage efficiencies in the context")
    if variable == "trap_detectors":
        return replace(ctx, stages=replace(ctx.stages, trap_detectors=int(value)))
    return replace(ctx, stages=replace(ctx.stages, **{variable: value}))


def _metric_value(name: str, ctx: SweepContext):
    if name == "total_qe":
        if ctx.stages is None:
            raise ValueError("total_qe requires stage efficiencies")
        return total_qe(ctx.stages, ctx.trap_geometry)
    if name == "trap_absorption":
        if ctx.stages is None:
            raise ValueError("trap_absorption requires stage efficiencies")
        return trap_absorption(ctx.stages.eta_abs, ctx.stages.trap_detectors,
                               ctx.trap_geometry)
    if name == "dark_adjusted_qe":
        return dark_adjusted_qe(ctx.resolved_eta(), ctx.budget()).value
    if name == "confidence":
        if ctx.n_elements is None or ctx.alpha is None:
            raise ValueError("confidence requires n_elements and alpha")
        return _confidence(ConfidenceInputs(ctx.n_elements, ctx.resolved_eta(), ctx.alpha))
    if name.startswith("rate_bracket"):
        bracket = rate_bracket(ctx.budget(), ctx.margin)
        if name == "rate_bracket_feasible":
            return bracket.feasible
        return bracket.low if name == "rate_bracket_low" else bracket.high
    # SNR family below needs the photon number.
    if ctx.n_photons is None:
        raise ValueError(f"{name} requires n_photons")
    eta, n = ctx.resolved_eta(), ctx.n_photons
    if name == "snr_classical":
        return snr_classical(eta, n)
    if name == "snr_correlated_full":
        return snr_correlated(eta, n).full
    if name == "snr_correlated_approx":
        return snr_correlated(eta, n).approx
    if name == "snr_fano_full":
        return snr_fano(eta, ctx.fano, n).full
    if name == "snr_fano_approx":
        return snr_fano(eta, ctx.fano, n).approx
    if name == "snr_improvement":
        return snr_correlated(eta, n).approx / snr_classical(eta, n)
    raise ValueError(f"unknown metric {name!r}")


def sweep(s: SweepSpec) -> SweepResult:
    """Evaluate every requested metric at every grid point.

    Rows are independent; a failing metric leaves a None cell and an error
    message on its row without stopping the sweep.
    """
    rows = []
    for value in s.grid:
        metrics: dict = {}
        errors = []
        try:
            ctx = _apply_variable(s.fixed, s.variable, value)
        except ValueError as exc:
            rows.append(SweepRow(value=value,
                                 metrics={name: None for name in s.outputs},
                                 error=str(exc)))
            continue
        for name in s.outputs:
            try:
                metrics[name] = _metric_value(name, ctx)
            except ValueError as exc:
                metrics[name] = None
                errors.append(f"{name}: {exc}")
        rows.append(SweepRow(value=value, metrics=metrics,
                             error="; ".join(errors) or None))
    return SweepResult(spec=s, rows=rows)


def min_trap_detectors(eta_abs: float, target: float) -> int:
    """Smallest detector count whose trap absorption reaches the target.

    Solved from the log inequality, then verified by direct evaluation so
    float rounding near the boundary cannot return an off-by-one count.
    """
    if not 0.0 < eta_abs <= 1.0:
        raise ValueError(f"eta_abs={eta_abs!r} must lie in (0, 1]")
    if not 0.0 < target < 1.0:
        raise ValueError(f"target={target!r} must lie in (0, 1)")
    if eta_abs == 1.0:
        return 1
    bounces = math.log(1.0 - target) / math.log(1.0 - eta_abs)
    n = max(1, math.ceil((bounces + 1.0) / 2.0))
    while trap_absorption(eta_abs, n) < target:
        n += 1
    while n > 1 and trap_absorption(eta_abs, n - 1) >= target:
        n -= 1
    return n


@dataclass(frozen=True)
class ChecklistItem:
    item: int
    name: str
    passed: bool | None
    value: float | None
    threshold: float | None
    note: str = ""


@dataclass(frozen=True)
class ChecklistReport:
    items: list[ChecklistItem]

    @property
    def passed(self) -> bool:
        return all(item.passed is not False for item in self.items)


def checklist(detector: DetectorSpec, stages: StageEfficiencies,
              operating: RateBudget, margin: float = DEFAULT_RATE_MARGIN) -> ChecklistReport:
    """Evaluate the five detection-system design conditions.

    (1) count rate at least `margin` above the dark rate, (2) a nonempty
    operating-rate bracket between dark rate and saturation, (3) collection
    loss under 1e-3, (4) a light-trap geometry, (5) the intrinsic conversion
    efficiency, reported informationally as the remaining ceiling.
    Dead time and dark rate fall back from the operating point to the
    detector spec when not supplied.
    """
    dark = operating.dark_rate if operating.dark_rate is not None else detector.dark_count_rate
    dead = operating.dead_time if operating.dead_time is not None else detector.dead_time
    if dark is None:
        raise ValueError(f"{detector.technology}: dark count rate unknown; "
                         "supply one to evaluate the rate conditions")
    budget = RateBudget(count_rate=operating.count_rate, dark_rate=dark,
                        dead_time=dead, photon_flux=operating.photon_flux)

    items = []
    if operating.count_rate is None:
        items.append(ChecklistItem(1, "count-to-dark ratio", None, None, margin,
                                   "count rate not specified; condition not evaluated"))
    elif dark == 0.0:
        items.append(ChecklistItem(1, "count-to-dark ratio", True, math.inf, margin,
                                   "no dark counts"))
    else:
        ratio = operating.count_rate / dark
        items.append(ChecklistItem(1, "count-to-dark ratio", ratio > margin, ratio, margin))

    bracket = rate_bracket(budget, margin)
    note = ""
    if not bracket.feasible:
        note = ("dark rate and dead time leave no usable rate window "
                f"(needs {bracket.violation_ratio:.3g}x more separation); gate the "
                "detector on for short windows after the source trigger to cut the "
                "effective dark rate")
    items.append(ChecklistItem(2, "operating-rate bracket", bracket.feasible,
                               bracket.low / bracket.high, 1.0, note))

    loss = 1.0 - stages.eta_col
    items.append(ChecklistItem(3, "collection loss", loss < COLLECTION_LOSS_LIMIT,
                               loss, COLLECTION_LOSS_LIMIT))
    items.append(ChecklistItem(4, "light-trap geometry", stages.trap_detectors >= 2,
                               float(stages.trap_detectors), 2.0))
    items.append(ChecklistItem(5, "intrinsic conversion efficiency", None,
                               stages.eta_pe, None,
                               "remaining ceiling once conditions 1-4 hold; choose the "
                               "material with the highest intrinsic quantum efficiency"))
    return ChecklistReport(items=items)


@dataclass(frozen=True)
class TrapGeometry:
    """Trap layout: per-detector optical path lengths from the source, meters."""

    n_detectors: int
    path_lengths: tuple[float, ...]
    geometry: str = "linear"

    def __post_init__(self):
        object.__setattr__(self, "path_lengths", tuple(self.path_lengths))
        if self.geometry not in ("retro", "linear"):
            raise ValueError(f"geometry={self.geometry!r} must be 'retro' or 'linear'")
        if len(self.path_lengths) != self.n_detectors:
            raise ValueError(f"expected {self.n_detectors} path lengths, "
                             f"got {len(self.path_lengths)}")
        if any(b <= a for a, b in zip(self.path_lengths, self.path_lengths[1:])):
            raise ValueError("path lengths must be strictly increasing")


def delay_lines(g: TrapGeometry, c: float = SPEED_OF_LIGHT) -> list[float]:
    """Per-detector electronic delays that align all detector signals.

    Each signal is delayed by the extra flight time of the longest path, so
    the farthest detector gets zero delay. Only the linear chain supports
    this; a retro-reflecting trap folds early and late passes onto the same
    detectors, so arrival times cannot be reconstructed.
    """
    if g.geometry != "linear":
        raise ValueError("retro geometry cannot reconstruct photon arrival times; "
                         "use the linear chain for timed summation")
    longest = g.path_lengths[-1]
    return [(longest - path) / c for path in g.path_lengths]
