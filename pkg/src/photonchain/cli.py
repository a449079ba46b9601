"""Command-line front end.

Subcommands map one-to-one onto the library operations; every command can
emit JSON carrying exactly the values printed in text mode. Numeric output
uses 17 significant digits, '.' decimal, no grouping, so byte-level
regression checks are stable. Simulation results depend only on the seed and
parameters, never on the worker thread count (PHOTONCHAIN_THREADS).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import asdict
from datetime import datetime, timezone
from pathlib import Path

from . import __version__
from .analytic import (
    ConfidenceInputs,
    SourceSpec,
    confidence,
    noise_budget,
    snr_classical,
    snr_correlated,
    snr_fano,
    squeezing_bound,
)
from .catalog import builtin_detectors, builtin_materials, load_specs, validate_material
from .efficiency import (
    RateBudget,
    StageEfficiencies,
    dark_adjusted_qe,
    photon_flux,
    rate_bracket,
    total_qe,
    trap_absorption,
    trap_absorption_series,
)
from .montecarlo import (
    THREADS_ENV_VAR,
    GainModel,
    SimulationConfig,
    predicted_count_moments,
    run,
)
from .tradespace import (
    SWEEP_METRICS,
    SWEEP_VARIABLES,
    SweepContext,
    SweepSpec,
    checklist,
    delay_lines,
    min_trap_detectors,
    sweep,
    TrapGeometry,
)

EXIT_OK = 0
EXIT_COMPUTE = 1
EXIT_USAGE = 2


# ---------------------------------------------------------------------------
# Output helpers


def _fmt(value) -> str:
    if value is None:
        return "n/a"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def _csv_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def _text_lines(payload: dict, prefix: str = "") -> list[str]:
    lines = []
    for key, value in payload.items():
        path = f"{prefix}{key}"
        if isinstance(value, dict):
            lines.extend(_text_lines(value, f"{path}."))
        elif isinstance(value, list):
            for i, item in enumerate(value):
                if isinstance(item, dict):
                    lines.extend(_text_lines(item, f"{path}[{i}]."))
                else:
                    lines.append(f"{path}[{i}] = {_fmt(item)}")
        else:
            lines.append(f"{path} = {_fmt(value)}")
    return lines


def _emit(payload: dict, args) -> None:
    if args.format == "json":
        sys.stdout.write(json.dumps(payload, indent=2) + "\n")
    else:
        sys.stdout.write("\n".join(_text_lines(payload)) + "\n")


def _maybe_manifest(args, params: dict, seed: int | None = None) -> None:
    if not getattr(args, "manifest", None):
        return
    doc = {
        "command": args.command,
        "parameters": params,
        "seed": seed,
        "version": __version__,
        "timestamp": datetime.now(timezone.utc).isoformat(),
    }
    Path(args.manifest).write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")


def _stats_dict(stats) -> dict:
    return {
        "mean": stats.mean,
        "variance": stats.variance,
        "fano": stats.fano,
        "snr": stats.snr,
        "windows": stats.windows,
        "standard_error_of_fano": stats.standard_error_of_fano,
    }


# ---------------------------------------------------------------------------
# Commands


def _cmd_budget(args) -> int:
    stages = StageEfficiencies(args.eta_col, args.eta_abs, args.eta_pe,
                               args.eta_mul, args.trap_n)
    total = total_qe(stages, args.geometry)
    params = {"eta_col": args.eta_col, "eta_abs": args.eta_abs, "eta_pe": args.eta_pe,
              "eta_mul": args.eta_mul, "trap_n": args.trap_n, "geometry": args.geometry}
    results = {
        "trap_absorption": trap_absorption(args.eta_abs, args.trap_n, args.geometry),
        "total_qe": total,
    }
    flux = args.flux
    if flux is None and args.power is not None:
        if args.wavelength is None:
            raise ValueError("--power requires --wavelength to derive the photon flux")
        flux = photon_flux(args.power, args.wavelength)
        params.update({"power": args.power, "wavelength": args.wavelength})
        results["photon_flux"] = flux
    if args.dark_rate is not None:
        if flux is None:
            raise ValueError("--dark-rate requires --flux (or --power/--wavelength)")
        params.update({"dark_rate": args.dark_rate, "flux": flux})
        budget = RateBudget(count_rate=args.count_rate, dark_rate=args.dark_rate,
                            photon_flux=flux)
        adjusted = dark_adjusted_qe(total, budget)
        results["dark_adjusted_qe"] = adjusted.value
        if adjusted.from_count_rate is not None:
            results["dark_adjusted_qe_from_count_rate"] = adjusted.from_count_rate
    payload = {"command": "budget", "version": __version__,
               "params": params, "results": results}
    _emit(payload, args)
    _maybe_manifest(args, params)
    return EXIT_OK


def _improvement_block(ratio: float) -> dict:
    return {
        "ratio": ratio,
        "db_power": 10.0 * math.log10(ratio),
        "db_amplitude": 20.0 * math.log10(ratio),
    }


def _cmd_snr(args) -> int:
    eta, f, n = args.eta, args.fano, args.n
    params = {"eta": eta, "fano": f, "n": n}
    classical = snr_classical(eta, n)
    fano_res = snr_fano(eta, f, n)
    results = {
        "snr_classical": classical,
        "snr_fano_full": fano_res.full,
        "snr_fano_approx": fano_res.approx,
        "regime": fano_res.regime,
        "regime_ratio": fano_res.regime_ratio,
        "improvement_fano_approx": _improvement_block(fano_res.approx / classical),
    }
    if eta < 1.0:
        corr = snr_correlated(eta, n)
        results["snr_correlated_full"] = corr.full
        results["snr_correlated_approx"] = corr.approx
        results["correlated_approx_valid"] = corr.approx_valid
        results["improvement_correlated_approx"] = _improvement_block(corr.approx / classical)
    exit_code = EXIT_OK
    if args.improvement is not None:
        params["improvement"] = args.improvement
        bound = squeezing_bound(args.improvement, eta)
        results["squeezing_bound"] = {"max_fano": bound.max_fano,
                                      "feasible": bound.feasible}
        if not bound.feasible:
            exit_code = EXIT_COMPUTE
    payload = {"command": "snr", "version": __version__,
               "params": params, "results": results}
    _emit(payload, args)
    _maybe_manifest(args, params)
    return exit_code


def _parse_gain(text: str) -> GainModel:
    if text == "none":
        return GainModel("none")
    kind, _, mean = text.partition(":")
    names = {"det": "deterministic", "exp": "exponential"}
    if kind in names and mean:
        try:
            return GainModel(names[kind], float(mean))
        except ValueError as exc:
            raise argparse.ArgumentTypeError(str(exc)) from exc
    raise argparse.ArgumentTypeError(
        f"gain {text!r} must be 'none', 'det:G', or 'exp:G'")


def _cmd_simulate(args) -> int:
    fano = 1.0 if args.source == "poisson" else args.fano
    source = SourceSpec(kind=args.source, mean_photons=args.n, fano=fano)
    config = SimulationConfig(
        source=source,
        eta_effective=args.eta,
        dark_rate_per_window=args.dark,
        dead_time_windows=args.dead_time,
        gain_model=args.gain,
        windows=args.windows,
        seed=args.seed,
    )
    result = run(config, keep_arrays=bool(args.plot))
    predicted = predicted_count_moments(config)
    params = {
        "source": args.source, "n": args.n, "fano": fano, "eta": args.eta,
        "dark": args.dark, "dead_time": args.dead_time,
        "gain": args.gain.kind, "gain_mean": args.gain.mean_gain,
        "windows": args.windows, "seed": args.seed,
    }
    counts = result.counts
    deviation: dict = {}
    if predicted.variance > 0.0 and counts.windows > 1:
        se_mean = math.sqrt(predicted.variance / counts.windows)
        deviation["mean_sigmas"] = (counts.mean - predicted.mean) / se_mean
    if (predicted.fano is not None and counts.fano is not None
            and counts.standard_error_of_fano):
        deviation["fano_sigmas"] = ((counts.fano - predicted.fano)
                                    / counts.standard_error_of_fano)
    results = {
        "counts": _stats_dict(counts),
        "charge": _stats_dict(result.charge),
        "enf": result.enf,
        "predicted": {"mean": predicted.mean, "variance": predicted.variance,
                      "fano": predicted.fano, "snr": predicted.snr},
        "deviation": deviation,
    }
    if args.dead_time > 0.0:
        results["predicted_excludes_dead_time"] = True
    payload = {"command": "simulate", "version": __version__,
               "params": params, "results": results}
    _emit(payload, args)
    if args.plot:
        from .plotting import plot_simulation

        plot_simulation(result.recorded_counts, predicted, counts, args.plot)
    _maybe_manifest(args, params, seed=args.seed)
    return EXIT_OK


def _context_from_args(args) -> SweepContext:
    stage_flags = (args.eta_col, args.eta_abs, args.eta_pe, args.eta_mul, args.trap_n)
    stages = None
    if any(v is not None for v in stage_flags) or args.variable in (
            "eta_col", "eta_abs", "eta_pe", "eta_mul", "trap_detectors"):
        stages = StageEfficiencies(
            eta_col=args.eta_col if args.eta_col is not None else 1.0,
            eta_abs=args.eta_abs if args.eta_abs is not None else 1.0,
            eta_pe=args.eta_pe if args.eta_pe is not None else 1.0,
            eta_mul=args.eta_mul if args.eta_mul is not None else 1.0,
            trap_detectors=args.trap_n if args.trap_n is not None else 1,
        )
    return SweepContext(
        stages=stages, eta=args.eta, fano=args.fano, n_photons=args.n,
        dark_rate=args.dark_rate, dead_time=args.dead_time,
        count_rate=args.count_rate, photon_flux=args.flux,
        n_elements=args.elements, alpha=args.alpha, margin=args.margin,
        trap_geometry=args.geometry,
    )


def _context_from_dict(fixed: dict) -> SweepContext:
    fixed = dict(fixed)
    stages = fixed.pop("stages", None)
    if stages is not None:
        stages = StageEfficiencies(**stages)
    known = {"eta", "fano", "n_photons", "dark_rate", "dead_time", "count_rate",
             "photon_flux", "n_elements", "alpha", "margin", "trap_geometry"}
    unknown = set(fixed) - known
    if unknown:
        raise ValueError(f"unknown fixed-context field(s) {sorted(unknown)}")
    defaults = SweepContext()
    return SweepContext(stages=stages, **{k: fixed.get(k, getattr(defaults, k))
                                          for k in known})


def _sweep_spec_from_args(args) -> SweepSpec:
    if args.spec:
        doc = json.loads(Path(args.spec).read_text(encoding="utf-8"))
        missing = {"variable", "grid", "outputs"} - set(doc)
        if missing:
            raise ValueError(f"sweep spec file missing {sorted(missing)}")
        return SweepSpec(variable=doc["variable"], grid=tuple(doc["grid"]),
                         fixed=_context_from_dict(doc.get("fixed", {})),
                         outputs=tuple(doc["outputs"]))
    if not args.variable or not args.metrics:
        raise ValueError("provide --spec FILE, or --variable with --metrics")
    if args.grid:
        grid = tuple(float(v) for v in args.grid.split(","))
    elif args.linspace:
        start, stop, num = args.linspace
        num = int(num)
        if num < 2:
            raise ValueError("--linspace needs at least 2 points")
        step = (stop - start) / (num - 1)
        grid = tuple(start + i * step for i in range(num))
    else:
        raise ValueError("provide --grid or --linspace")
    outputs = tuple(m for m in args.metrics.split(",") if m)
    return SweepSpec(variable=args.variable, grid=grid,
                     fixed=_context_from_args(args), outputs=outputs)


def _cmd_sweep(args) -> int:
    spec = _sweep_spec_from_args(args)
    result = sweep(spec)
    if args.format == "json":
        rows = [{spec.variable: row.value, **row.metrics, "error": row.error}
                for row in result.rows]
        payload = {"command": "sweep", "version": __version__,
                   "columns": result.columns, "rows": rows}
        text = json.dumps(payload, indent=2) + "\n"
    else:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(result.columns)
        for row in result.rows:
            writer.writerow([_csv_cell(row.value)]
                            + [_csv_cell(row.metrics.get(m)) for m in spec.outputs]
                            + [_csv_cell(row.error)])
        text = buf.getvalue()
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    if args.plot:
        from .plotting import plot_sweep

        plot_sweep(result, args.plot)
    _maybe_manifest(args, {"variable": spec.variable, "grid": list(spec.grid),
                           "outputs": list(spec.outputs), "fixed": asdict(spec.fixed)})
    return EXIT_OK


def _cmd_confidence(args) -> int:
    inputs = ConfidenceInputs(n_elements=args.elements, eta=args.eta, alpha=args.alpha)
    params = {"elements": args.elements, "eta": args.eta, "alpha": args.alpha}
    payload = {"command": "confidence", "version": __version__, "params": params,
               "results": {"delta": inputs.delta, "confidence": confidence(inputs)}}
    _emit(payload, args)
    _maybe_manifest(args, params)
    return EXIT_OK


def _cmd_trap(args) -> int:
    if args.n is None and args.target is None:
        raise ValueError("provide --n (detector count) and/or --target (absorption goal)")
    params = {"eta_abs": args.eta_abs, "geometry": args.geometry}
    results: dict = {}
    if args.n is not None:
        params["n"] = args.n
        results["effective_absorption"] = trap_absorption(args.eta_abs, args.n,
                                                          args.geometry)
        results["effective_absorption_series"] = trap_absorption_series(
            args.eta_abs, args.n, args.geometry)
    if args.target is not None:
        params["target"] = args.target
        n_min = min_trap_detectors(args.eta_abs, args.target)
        results["min_detectors"] = n_min
        results["achieved_absorption"] = trap_absorption(args.eta_abs, n_min)
    if args.paths:
        paths = tuple(float(p) for p in args.paths.split(","))
        geometry = TrapGeometry(n_detectors=len(paths), path_lengths=paths,
                                geometry=args.geometry)
        results["delay_lines_s"] = delay_lines(geometry)
    payload = {"command": "trap", "version": __version__,
               "params": params, "results": results}
    _emit(payload, args)
    _maybe_manifest(args, params)
    return EXIT_OK


def _cmd_checklist(args) -> int:
    by_name = {d.technology.lower(): d for d in builtin_detectors()}
    detector = by_name.get(args.detector.lower())
    if detector is None:
        raise ValueError(f"unknown detector {args.detector!r}; "
                         f"expected one of {sorted(by_name)}")
    stages = StageEfficiencies(
        eta_col=args.eta_col, eta_abs=args.eta_abs, eta_pe=args.eta_pe,
        eta_mul=args.eta_mul, trap_detectors=args.trap_n)
    operating = RateBudget(count_rate=args.count_rate, dark_rate=args.dark_rate,
                           dead_time=args.dead_time, photon_flux=args.flux)
    report = checklist(detector, stages, operating, margin=args.margin)
    params = {"detector": detector.technology, "margin": args.margin,
              "eta_col": args.eta_col, "eta_abs": args.eta_abs,
              "eta_pe": args.eta_pe, "eta_mul": args.eta_mul, "trap_n": args.trap_n,
              "count_rate": args.count_rate, "dark_rate": args.dark_rate,
              "dead_time": args.dead_time, "flux": args.flux}
    payload = {
        "command": "checklist", "version": __version__, "params": params,
        "results": {
            "passed": report.passed,
            "items": [{"item": it.item, "name": it.name, "passed": it.passed,
                       "value": it.value, "threshold": it.threshold, "note": it.note}
                      for it in report.items],
        },
    }
    _emit(payload, args)
    _maybe_manifest(args, params)
    return EXIT_OK


def _cmd_validate(args) -> int:
    if args.file:
        with open(args.file, "rb") as handle:
            materials, detectors = load_specs(handle, format=args.input_format)
    else:
        materials, detectors = builtin_materials(), builtin_detectors()
    findings = []
    for material in materials:
        for finding in validate_material(material):
            findings.append({"spec": finding.spec_name, "field": finding.field,
                             "message": finding.message, "stated": finding.stated,
                             "recomputed": finding.recomputed})
    payload = {
        "command": "validate", "version": __version__,
        "params": {"file": args.file, "input_format": args.input_format},
        "results": {"materials": len(materials), "detectors": len(detectors),
                    "findings": findings, "finding_count": len(findings)},
    }
    _emit(payload, args)
    _maybe_manifest(args, {"file": args.file})
    return EXIT_OK


def _cmd_noise(args) -> int:
    budget = noise_budget(args.shot, args.dark, args.stray, args.etc)
    params = {"shot": args.shot, "dark": args.dark, "stray": args.stray, "etc": args.etc}
    payload = {"command": "noise", "version": __version__, "params": params,
               "results": {"total": budget.total, "shot_limited": budget.shot_limited}}
    _emit(payload, args)
    _maybe_manifest(args, params)
    return EXIT_OK


# ---------------------------------------------------------------------------
# Parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="photonchain",
        description="Efficiency budgets, counting statistics, and Monte-Carlo "
                    "simulation for single-photon detection chains.",
        epilog=f"Set {THREADS_ENV_VAR} to change the simulation worker count; "
               "results are identical for any value.")
    parser.add_argument("--version", action="version",
                        version=f"photonchain {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text",
                        help="output format (default text)")
    common.add_argument("--manifest", metavar="FILE",
                        help="also write a timestamped run manifest to FILE")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("budget", parents=[common],
                       help="total and dark-adjusted quantum efficiency")
    p.add_argument("--eta-col", type=float, required=True, help="collection efficiency")
    p.add_argument("--eta-abs", type=float, required=True,
                   help="single-bounce absorption probability")
    p.add_argument("--eta-pe", type=float, required=True,
                   help="photoelectron conversion efficiency")
    p.add_argument("--eta-mul", type=float, default=1.0,
                   help="multiplication efficiency (default 1)")
    p.add_argument("--trap-n", type=int, default=1, help="trap detector count (default 1)")
    p.add_argument("--geometry", choices=("retro", "linear"), default="retro")
    p.add_argument("--dark-rate", type=float, help="dark count rate, Hz")
    p.add_argument("--flux", type=float, help="photon flux, photons/s")
    p.add_argument("--count-rate", type=float, help="measured count rate, Hz")
    p.add_argument("--power", type=float, help="incident power, W (with --wavelength)")
    p.add_argument("--wavelength", type=float, help="wavelength, m (with --power)")

    p = sub.add_parser("snr", parents=[common],
                       help="closed-form SNR for classical, correlated, and squeezed light")
    p.add_argument("--eta", type=float, required=True, help="detection efficiency")
    p.add_argument("--fano", type=float, default=1.0, help="source Fano factor (default 1)")
    p.add_argument("--n", type=float, default=1e6, help="photons per window (default 1e6)")
    p.add_argument("--improvement", type=float,
                   help="also bound the Fano factor needed for this amplitude improvement")

    p = sub.add_parser("simulate", parents=[common],
                       help="Monte-Carlo run of the detection chain")
    p.add_argument("--source", choices=("poisson", "fano", "deterministic"),
                   default="poisson")
    p.add_argument("--n", type=float, required=True, help="mean photons per window")
    p.add_argument("--fano", type=float, default=1.0,
                   help="source Fano factor (fano source only)")
    p.add_argument("--eta", type=float, default=1.0, help="end-to-end survival probability")
    p.add_argument("--dark", type=float, default=0.0, help="dark counts per window")
    p.add_argument("--dead-time", type=float, default=0.0,
                   help="dead time as a fraction of the window (0 disables)")
    p.add_argument("--gain", type=_parse_gain, default=GainModel("none"),
                   help="gain model: none, det:G, or exp:G")
    p.add_argument("--windows", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--plot", metavar="FILE", help="render a count histogram to FILE")

    p = sub.add_parser("sweep", parents=[common],
                       help="evaluate metrics over a parameter grid (CSV)")
    p.add_argument("--spec", metavar="FILE", help="JSON sweep spec file")
    p.add_argument("--variable", choices=SWEEP_VARIABLES)
    grid = p.add_mutually_exclusive_group()
    grid.add_argument("--grid", help="comma-separated grid values")
    grid.add_argument("--linspace", nargs=3, type=float,
                      metavar=("START", "STOP", "COUNT"))
    p.add_argument("--metrics", help=f"comma-separated metrics from {SWEEP_METRICS}")
    p.add_argument("--eta", type=float, help="detection efficiency for SNR metrics")
    p.add_argument("--fano", type=float, default=1.0)
    p.add_argument("--n", type=float, help="photons per window for SNR metrics")
    p.add_argument("--eta-col", type=float)
    p.add_argument("--eta-abs", type=float)
    p.add_argument("--eta-pe", type=float)
    p.add_argument("--eta-mul", type=float)
    p.add_argument("--trap-n", type=int)
    p.add_argument("--dark-rate", type=float)
    p.add_argument("--dead-time", type=float)
    p.add_argument("--count-rate", type=float)
    p.add_argument("--flux", type=float)
    p.add_argument("--elements", type=int)
    p.add_argument("--alpha", type=float)
    p.add_argument("--margin", type=float, default=1e3)
    p.add_argument("--geometry", choices=("retro", "linear"), default="retro")
    p.add_argument("--out", metavar="FILE", help="write the table to FILE instead of stdout")
    p.add_argument("--plot", metavar="FILE", help="render the sweep curves to FILE")

    p = sub.add_parser("confidence", parents=[common],
                       help="segmented-detector distinct-element confidence")
    p.add_argument("--elements", type=int, required=True)
    p.add_argument("--eta", type=float, required=True)
    p.add_argument("--alpha", type=float, required=True)

    p = sub.add_parser("trap", parents=[common],
                       help="light-trap absorption and sizing")
    p.add_argument("--eta-abs", type=float, required=True)
    p.add_argument("--n", type=int, help="detector count to evaluate")
    p.add_argument("--target", type=float, help="absorption target to size for")
    p.add_argument("--geometry", choices=("retro", "linear"), default="retro")
    p.add_argument("--paths", help="comma-separated optical path lengths (m) "
                                   "for delay-line computation (linear geometry)")

    p = sub.add_parser("checklist", parents=[common],
                       help="evaluate the detection-system design conditions")
    p.add_argument("--detector", required=True,
                   help="builtin detector name (PMT, APD, VLPC, TES, SSPD)")
    p.add_argument("--count-rate", type=float)
    p.add_argument("--dark-rate", type=float, help="override the detector dark rate")
    p.add_argument("--dead-time", type=float, help="override the detector dead time, s")
    p.add_argument("--flux", type=float)
    p.add_argument("--eta-col", type=float, default=1.0)
    p.add_argument("--eta-abs", type=float, default=1.0)
    p.add_argument("--eta-pe", type=float, default=1.0)
    p.add_argument("--eta-mul", type=float, default=1.0)
    p.add_argument("--trap-n", type=int, default=1)
    p.add_argument("--margin", type=float, default=1e3)

    p = sub.add_parser("validate", parents=[common],
                       help="consistency-check builtin or user spec tables")
    p.add_argument("--file", help="spec file to load instead of the builtin tables")
    p.add_argument("--input-format", choices=("json", "csv"), default="json")

    p = sub.add_parser("noise", parents=[common],
                       help="sum noise variances and test shot-limited operation")
    p.add_argument("--shot", type=float, required=True)
    p.add_argument("--dark", type=float, default=0.0)
    p.add_argument("--stray", type=float, default=0.0)
    p.add_argument("--etc", type=float, default=0.0)

    return parser


_HANDLERS = {
    "budget": _cmd_budget,
    "snr": _cmd_snr,
    "simulate": _cmd_simulate,
    "sweep": _cmd_sweep,
    "confidence": _cmd_confidence,
    "trap": _cmd_trap,
    "checklist": _cmd_checklist,
    "validate": _cmd_validate,
    "noise": _cmd_noise,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _HANDLERS[args.command](args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_COMPUTE


if __name__ == "__main__":
    sys.exit(main())
