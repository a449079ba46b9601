"""Built-in material and detector tables, user spec ingestion, and consistency checks.

The built-in tables are immutable module data; ``load_specs``/``dump_specs``
round-trip user-supplied JSON or CSV spec files. Validation never raises for
physically suspicious values: it returns findings and leaves the data as given.
"""

from __future__ import annotations

import csv
import io
import json
import math
import warnings
from dataclasses import dataclass, fields, asdict

__all__ = [
    "MaterialSpec",
    "DetectorSpec",
    "ValidationFinding",
    "SpecParseError",
    "builtin_materials",
    "builtin_detectors",
    "validate_material",
    "load_specs",
    "dump_specs",
    "DETECTOR_TABLE_FOOTNOTES",
]

# Tolerances for cross-checking stated material constants against the values
# recomputed from the refractive index. Chosen so that correctly rounded
# two-digit table entries pass while genuine inconsistencies are flagged.
REFLECTIVITY_TOL = 0.01
BREWSTER_TOL_DEG = 1.1

# Detector-table annotation that names no specific row; kept as data only.
DETECTOR_TABLE_FOOTNOTES = (
    "assumes eta_det = 0.125 (no referent row)",
)


class SpecParseError(ValueError):
    """Malformed spec input; carries the position where parsing failed."""

    def __init__(self, message: str, position: str = ""):
        self.position = position
        super().__init__(f"{message}" + (f" (at {position})" if position else ""))


def _require(cond: bool, field_name: str, value, rule: str) -> None:
    if not cond:
        raise ValueError(f"invariant violation: {field_name}={value!r} must satisfy {rule}")


@dataclass(frozen=True)
class MaterialSpec:
    """Intrinsic photodiode material properties.

    band_gap in eV, lambda_peak in nm, brewster_angle in degrees; the rest
    dimensionless.
    """

    name: str
    band_gap: float
    lambda_peak: float
    material_qe: float
    refractive_index: float
    normal_reflectivity: float
    brewster_angle: float

    def __post_init__(self):
        _require(0.0 <= self.material_qe <= 1.0, "material_qe", self.material_qe, "0 <= qe <= 1")
        _require(self.refractive_index > 1.0, "refractive_index", self.refractive_index, "n > 1")
        _require(0.0 <= self.normal_reflectivity <= 1.0, "normal_reflectivity",
                 self.normal_reflectivity, "0 <= R <= 1")
        _require(self.band_gap > 0.0, "band_gap", self.band_gap, "E > 0")
        _require(self.lambda_peak > 0.0, "lambda_peak", self.lambda_peak, "lambda > 0")


@dataclass(frozen=True)
class DetectorSpec:
    """Device-level performance parameters for one detector technology.

    bandwidth and dark_count_rate in Hz, operating_temp in K, dead_time in
    seconds. dark_count_rate is None when unknown; operations that need it
    must reject None rather than assume zero. dead_time defaults to
    1/bandwidth, the only timing figure a bare bandwidth spec provides.
    """

    technology: str
    bandwidth: float
    dark_count_rate: float | None
    operating_temp: float
    quantum_efficiency: float
    excess_noise_factor: float
    dead_time: float | None = None
    mode: str = "geiger"
    element_count: int = 1
    notes: str = ""

    def __post_init__(self):
        _require(self.bandwidth > 0.0, "bandwidth", self.bandwidth, "BW > 0")
        if self.dark_count_rate is not None:
            _require(self.dark_count_rate >= 0.0, "dark_count_rate",
                     self.dark_count_rate, "N_d >= 0")
        _require(0.0 <= self.quantum_efficiency <= 1.0, "quantum_efficiency",
                 self.quantum_efficiency, "0 <= eta <= 1")
        _require(self.excess_noise_factor >= 1.0, "excess_noise_factor",
                 self.excess_noise_factor, "F >= 1")
        if self.dead_time is None:
            object.__setattr__(self, "dead_time", 1.0 / self.bandwidth)
        _require(self.dead_time > 0.0, "dead_time", self.dead_time, "tau_D > 0")
        _require(self.mode in ("geiger", "counting"), "mode", self.mode,
                 "mode in {geiger, counting}")
        _require(int(self.element_count) == self.element_count and self.element_count >= 1,
                 "element_count", self.element_count, "N_E >= 1 integer")


@dataclass(frozen=True)
class ValidationFinding:
    """One consistency check result: what was stated vs what was recomputed."""

    spec_name: str
    field: str
    message: str
    stated: float | None = None
    recomputed: float | None = None


def builtin_materials() -> list[MaterialSpec]:
    """The three built-in photodiode materials (Si, Ge, InGaAs)."""
    return [
        MaterialSpec("Si", band_gap=1.11, lambda_peak=800.0, material_qe=0.99,
                     refractive_index=3.5, normal_reflectivity=0.31, brewster_angle=74.0),
        MaterialSpec("Ge", band_gap=0.66, lambda_peak=1600.0, material_qe=0.88,
                     refractive_index=4.0, normal_reflectivity=0.36, brewster_angle=75.0),
        MaterialSpec("InGaAs", band_gap=1.0, lambda_peak=1000.0, material_qe=0.98,
                     refractive_index=3.7, normal_reflectivity=0.33, brewster_angle=76.0),
    ]


def builtin_detectors() -> list[DetectorSpec]:
    """The five built-in detector technologies with state-of-the-art figures.

    PMT dark count is unknown (None), not zero. The SSPD light-trap QE of 0.9
    is a calculated estimate, kept as a note rather than the primary QE.
    """
    return [
        DetectorSpec("PMT", bandwidth=1.5e9, dark_count_rate=None, operating_temp=300.0,
                     quantum_efficiency=0.40, excess_noise_factor=1.2, mode="geiger",
                     notes="dark count rate not specified"),
        DetectorSpec("APD", bandwidth=1e9, dark_count_rate=25.0, operating_temp=300.0,
                     quantum_efficiency=0.75, excess_noise_factor=2.0, mode="geiger",
                     notes="also operated at 77 K"),
        DetectorSpec("VLPC", bandwidth=300e6, dark_count_rate=20e3, operating_temp=6.0,
                     quantum_efficiency=0.94, excess_noise_factor=1.015, mode="counting"),
        DetectorSpec("TES", bandwidth=20e3, dark_count_rate=0.001, operating_temp=0.1,
                     quantum_efficiency=0.20, excess_noise_factor=1.0, mode="counting",
                     notes="excess noise ~1, set by readout amplifier"),
        DetectorSpec("SSPD", bandwidth=30e9, dark_count_rate=0.01, operating_temp=5.0,
                     quantum_efficiency=0.03, excess_noise_factor=1.0, mode="geiger",
                     notes="0.9 QE estimated in light-trap geometry; excess noise ~1"),
    ]


def fresnel_normal_reflectivity(n: float) -> float:
    """Normal-incidence reflectivity ((n-1)/(n+1))^2 of an air/material interface."""
    return ((n - 1.0) / (n + 1.0)) ** 2


def brewster_angle_deg(n: float) -> float:
    """Brewster angle arctan(n) in degrees."""
    return math.degrees(math.atan(n))


def validate_material(m: MaterialSpec) -> list[ValidationFinding]:
    """Cross-check stated reflectivity and Brewster angle against the index.

    Emits a finding per inconsistency; an empty list means the stated values
    are within tolerance of the recomputed ones. Findings are not corrections.
    """
    findings = []
    r = fresnel_normal_reflectivity(m.refractive_index)
    if abs(m.normal_reflectivity - r) > REFLECTIVITY_TOL:
        findings.append(ValidationFinding(
            m.name, "normal_reflectivity",
            f"stated {m.normal_reflectivity:.4f} vs ((n-1)/(n+1))^2 = {r:.4f} "
            f"for n = {m.refractive_index}",
            stated=m.normal_reflectivity, recomputed=r))
    b = brewster_angle_deg(m.refractive_index)
    if abs(m.brewster_angle - b) > BREWSTER_TOL_DEG:
        findings.append(ValidationFinding(
            m.name, "brewster_angle",
            f"stated {m.brewster_angle:.2f} deg vs arctan(n) = {b:.2f} deg "
            f"for n = {m.refractive_index}",
            stated=m.brewster_angle, recomputed=b))
    return findings


# ---------------------------------------------------------------------------
# Spec file I/O
#
# JSON files are an object with "materials" and "detectors" arrays. A CSV file
# holds one kind of spec; the kind is recognized from the header (materials
# have a band_gap column, detectors a technology column).

_MATERIAL_FIELDS = {f.name for f in fields(MaterialSpec)}
_DETECTOR_FIELDS = {f.name for f in fields(DetectorSpec)}
_DETECTOR_OPTIONAL = {"dead_time", "mode", "element_count", "notes"}


def _as_text(source) -> str:
    if hasattr(source, "read"):
        source = source.read()
    if isinstance(source, bytes):
        return source.decode("utf-8")
    return source


def _warn_unknown(kind: str, unknown, position: str) -> None:
    warnings.warn(f"ignoring unknown {kind} field(s) {sorted(unknown)} at {position}")


def _build_material(record: dict, position: str) -> MaterialSpec:
    unknown = set(record) - _MATERIAL_FIELDS
    if unknown:
        _warn_unknown("material", unknown, position)
    missing = _MATERIAL_FIELDS - set(record)
    if missing:
        raise SpecParseError(f"material record missing field(s) {sorted(missing)}", position)
    try:
        return MaterialSpec(
            name=str(record["name"]),
            band_gap=float(record["band_gap"]),
            lambda_peak=float(record["lambda_peak"]),
            material_qe=float(record["material_qe"]),
            refractive_index=float(record["refractive_index"]),
            normal_reflectivity=float(record["normal_reflectivity"]),
            brewster_angle=float(record["brewster_angle"]),
        )
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ValueError) and "invariant violation" in str(exc):
            raise
        raise SpecParseError(f"bad material record: {exc}", position) from exc


def _parse_dark(value) -> float | None:
    # "--", "unknown" or an empty cell all mean the dark rate was not given.
    if value is None:
        return None
    if isinstance(value, str) and value.strip().lower() in ("", "--", "unknown", "none"):
        return None
    return float(value)


def _build_detector(record: dict, position: str) -> DetectorSpec:
    unknown = set(record) - _DETECTOR_FIELDS
    if unknown:
        _warn_unknown("detector", unknown, position)
    missing = (_DETECTOR_FIELDS - _DETECTOR_OPTIONAL) - set(record)
    if missing:
        raise SpecParseError(f"detector record missing field(s) {sorted(missing)}", position)
    try:
        dead = record.get("dead_time")
        if isinstance(dead, str) and dead.strip() == "":
            dead = None
        count = record.get("element_count", 1)
        if isinstance(count, str) and count.strip() == "":
            count = 1
        mode = record.get("mode", "geiger") or "geiger"
        return DetectorSpec(
            technology=str(record["technology"]),
            bandwidth=float(record["bandwidth"]),
            dark_count_rate=_parse_dark(record["dark_count_rate"]),
            operating_temp=float(record["operating_temp"]),
            quantum_efficiency=float(record["quantum_efficiency"]),
            excess_noise_factor=float(record["excess_noise_factor"]),
            dead_time=None if dead is None else float(dead),
            mode=str(mode),
            element_count=int(count),
            notes=str(record.get("notes", "") or ""),
        )
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ValueError) and "invariant violation" in str(exc):
            raise
        raise SpecParseError(f"bad detector record: {exc}", position) from exc


def load_specs(source, format: str = "json") -> tuple[list[MaterialSpec], list[DetectorSpec]]:
    """Parse materials and detectors from a JSON or CSV stream.

    ``source`` may be a str, bytes, or a readable file object. Unknown fields
    are ignored with a warning; malformed input raises SpecParseError and
    out-of-range values raise ValueError naming the field.
    """
    text = _as_text(source)
    if format == "json":
        return _load_json(text)
    if format == "csv":
        return _load_csv(text)
    raise ValueError(f"unknown spec format {format!r}; expected 'json' or 'csv'")


def _load_json(text: str) -> tuple[list[MaterialSpec], list[DetectorSpec]]:
    if text.strip() == "":
        return [], []
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecParseError(f"invalid JSON: {exc.msg}",
                             f"line {exc.lineno} column {exc.colno}") from exc
    if not isinstance(doc, dict):
        raise SpecParseError("top-level JSON value must be an object", "document root")
    unknown = set(doc) - {"materials", "detectors"}
    if unknown:
        _warn_unknown("top-level", unknown, "document root")
    materials = [_build_material(rec, f"materials[{i}]")
                 for i, rec in enumerate(doc.get("materials", []))]
    detectors = [_build_detector(rec, f"detectors[{i}]")
                 for i, rec in enumerate(doc.get("detectors", []))]
    return materials, detectors


def _load_csv(text: str) -> tuple[list[MaterialSpec], list[DetectorSpec]]:
    if text.strip() == "":
        return [], []
    reader = csv.DictReader(io.StringIO(text))
    header = set(reader.fieldnames or [])
    if "band_gap" in header:
        return [_build_material(row, f"row {i}") for i, row in enumerate(reader, start=2)], []
    if "technology" in header:
        return [], [_build_detector(row, f"row {i}") for i, row in enumerate(reader, start=2)]
    raise SpecParseError("CSV header matches neither material nor detector fields", "row 1")


def dump_specs(materials: list[MaterialSpec], detectors: list[DetectorSpec],
               format: str = "json") -> str:
    """Serialize specs so that load_specs round-trips them value-equal.

    CSV holds a single kind per document, so exactly one of the two lists may
    be nonempty in csv format.
    """
    if format == "json":
        return json.dumps({"materials": [asdict(m) for m in materials],
                           "detectors": [asdict(d) for d in detectors]}, indent=2)
    if format == "csv":
        if materials and detectors:
            raise ValueError("csv format holds one spec kind per document")
        out = io.StringIO()
        if detectors:
            names = [f.name for f in fields(DetectorSpec)]
            writer = csv.DictWriter(out, fieldnames=names, lineterminator="\n")
            writer.writeheader()
            for d in detectors:
                row = asdict(d)
                if row["dark_count_rate"] is None:
                    row["dark_count_rate"] = "--"
                writer.writerow(row)
        else:
            names = [f.name for f in fields(MaterialSpec)]
            writer = csv.DictWriter(out, fieldnames=names, lineterminator="\n")
            writer.writeheader()
            for m in materials:
                writer.writerow(asdict(m))
        return out.getvalue()
    raise ValueError(f"unknown spec format {format!r}; expected 'json' or 'csv'")
