"""Acceptance suite: one test per release criterion, each printing a
pass/fail line with the measured value. Run with -s to see the lines:

    pytest tests/test_acceptance.py -v -s
"""

import json
import math
import os
import random
import subprocess
import sys
import time

import numpy as np
import pytest

from photonchain.analytic import (
    ConfidenceInputs,
    SourceSpec,
    confidence,
    snr_fano,
    squeezing_bound,
)
from photonchain.catalog import builtin_detectors, builtin_materials, validate_material
from photonchain.cli import main
from photonchain.efficiency import (
    RateBudget,
    StageEfficiencies,
    rate_bracket,
    trap_absorption,
    trap_absorption_series,
)
from photonchain.montecarlo import (
    GainModel,
    SimulationConfig,
    apply_gain,
    exact_thinned_train_moments,
    run,
)
from photonchain.tradespace import SweepContext, SweepSpec, checklist, sweep

SEED = 42


def _report(number: int, name: str, ok: bool, detail: str = "") -> None:
    status = "PASS" if ok else "FAIL"
    suffix = f" ({detail})" if detail else ""
    print(f"[{status}] criterion {number}: {name}{suffix}")
    assert ok, f"criterion {number}: {name}{suffix}"


def _cli_json(capsys, *args) -> dict:
    code = main(list(args) + ["--format", "json"])
    out = capsys.readouterr().out
    assert code == 0
    return json.loads(out)


def test_criterion_1_sqrt_ten_improvement_limit(capsys):
    start = time.perf_counter()
    doc = _cli_json(capsys, "snr", "--eta", "0.9")
    reported = doc["results"]["improvement_correlated_approx"]["ratio"]
    ok = abs(reported - 3.1623) <= 1e-4

    spec = SweepSpec(variable="eta", grid=(0.5, 0.9, 0.99),
                     fixed=SweepContext(n_photons=1e6), outputs=("snr_improvement",))
    values = [row.metrics["snr_improvement"] for row in sweep(spec).rows]
    for value, expected in zip(values, (1.414, 3.162, 10.0)):
        ok = ok and abs(value - expected) <= 1e-3
    elapsed = time.perf_counter() - start
    ok = ok and elapsed < 1.0
    _report(1, "sqrt(10) improvement limit at eta=0.9", ok,
            f"cli ratio {reported:.6f}, sweep {['%.4f' % v for v in values]}, "
            f"{elapsed:.2f}s")


def test_criterion_2_trap_absorption_closed_form_vs_series():
    start = time.perf_counter()
    worst = 0.0
    for eta in [i / 10 for i in range(11)]:
        for n in range(1, 11):
            worst = max(worst, abs(trap_absorption(eta, n)
                                   - trap_absorption_series(eta, n)))
    anchor = trap_absorption(0.69, 3)
    ok = worst <= 1e-12 and abs(anchor - 0.9971370849) <= 1e-10
    elapsed = time.perf_counter() - start
    ok = ok and elapsed < 1.0
    _report(2, "trap absorption closed form vs literal series", ok,
            f"max |closed-series| {worst:.2e}, trap(0.69,3) {anchor:.10f}, "
            f"{elapsed:.2f}s")


def test_criterion_3_thinned_fano_law_and_oracle():
    start = time.perf_counter()
    cells_ok = 0
    details = []
    for eta in (0.3, 0.5, 0.9):
        for kind, fano in (("deterministic", 0.0), ("fano", 0.2), ("poisson", 1.0)):
            source = (SourceSpec(kind, 1e4, fano) if kind == "fano"
                      else SourceSpec(kind, 1e4))
            result = run(SimulationConfig(source, eta_effective=eta,
                                          windows=10_000, seed=SEED))
            target = eta * fano + (1.0 - eta)
            sigmas = abs(result.counts.fano - target) / result.counts.standard_error_of_fano
            cells_ok += sigmas <= 3.0
            details.append(f"{sigmas:.1f}")
    oracle_ok = True
    for k in range(0, 13):
        for eta in [i / 10 for i in range(11)]:
            mean, variance = exact_thinned_train_moments(k, eta)
            oracle_ok = oracle_ok and abs(mean - eta * k) <= 1e-12
            oracle_ok = oracle_ok and abs(variance - k * eta * (1 - eta)) <= 1e-12
    elapsed = time.perf_counter() - start
    ok = cells_ok >= 8 and oracle_ok and elapsed < 60.0
    _report(3, "thinned-Fano law (Monte Carlo + enumeration oracle)", ok,
            f"{cells_ok}/9 cells within 3 sigma [{', '.join(details)}], "
            f"oracle exact: {oracle_ok}, {elapsed:.1f}s")


def test_criterion_4_excess_noise_factor_anchor():
    _, enf_exp = apply_gain(np.array([1_000_000]), GainModel("exponential", 50.0), SEED)
    _, enf_det = apply_gain(np.array([1_000_000]), GainModel("deterministic", 50.0), SEED)
    ok = abs(enf_exp - 2.0) <= 0.01 and enf_det == 1.0
    _report(4, "excess noise factor: exponential 2.00 +/- 0.01, deterministic 1", ok,
            f"exponential {enf_exp:.4f}, deterministic {enf_det}")


def test_criterion_5_squeezing_bound():
    bound = squeezing_bound(4.0, 1.0)
    exact_ok = bound.max_fano == 0.0625
    worst = 0.0
    for eta in (0.97, 0.99, 1.0):
        for factor in (2.0, 3.0, 4.0):
            b = squeezing_bound(factor, eta)
            if not b.feasible:
                continue
            n = 1e6
            achieved = snr_fano(eta, b.max_fano, n).approx / math.sqrt(eta * n)
            worst = max(worst, abs(achieved - factor))
    ok = exact_ok and worst <= 1e-9
    _report(5, "squeezing bound 0.0625 exact and round-trip to 1e-9", ok,
            f"bound(4,1) {bound.max_fano}, worst round-trip error {worst:.2e}")


def test_criterion_6_confidence():
    rng = random.Random(2024)
    certainty_ok = all(
        confidence(ConfidenceInputs(rng.randint(1, 10_000), rng.random(), 0.0)) == 1.0
        for _ in range(100))
    anchor = confidence(ConfidenceInputs(100, 1.0, math.sqrt(2.0)))
    anchor_ok = abs(anchor - 100.0 / 101.0) <= 1e-12
    ok = certainty_ok and anchor_ok
    _report(6, "confidence: alpha=0 gives 1; (100, 1, sqrt 2) gives 100/101", ok,
            f"anchor {anchor:.15f}")


def test_criterion_7_rate_bracket_and_checklist():
    apd = rate_bracket(RateBudget(dark_rate=25.0, dead_time=1e-9), margin=1e3)
    apd_ok = (apd.feasible and abs(apd.low - 2.5e4) <= 1e-6
              and abs(apd.high - 1e6) <= 1e-3)
    vlpc = {d.technology: d for d in builtin_detectors()}["VLPC"]
    report = checklist(vlpc, StageEfficiencies(1.0, 1.0, 1.0, 1.0, 1), RateBudget())
    item2 = report.items[1]
    vlpc_ok = item2.passed is False and "gate" in item2.note
    ok = apd_ok and vlpc_ok
    _report(7, "rate bracket: APD feasible [2.5e4, 1e6], VLPC infeasible + gating", ok,
            f"APD [{apd.low:.3g}, {apd.high:.3g}], VLPC note: {item2.note[:40]}...")


def test_criterion_8_catalog_validation():
    materials = {m.name: m for m in builtin_materials()}
    si_ok = validate_material(materials["Si"]) == []
    findings = validate_material(materials["InGaAs"])
    flagged = (len(findings) == 1 and findings[0].field == "brewster_angle"
               and abs(findings[0].recomputed - 74.87) <= 0.01
               and findings[0].stated == 76.0)
    ok = si_ok and flagged
    detail = (f"Si findings {len(validate_material(materials['Si']))}, InGaAs "
              f"recomputed {findings[0].recomputed:.2f} vs stated 76")
    _report(8, "catalog validation: Si clean, InGaAs Brewster flagged", ok, detail)


def test_criterion_9_thread_count_determinism():
    cmd = [sys.executable, "-m", "photonchain", "simulate", "--seed", "42",
           "--source", "poisson", "--n", "100", "--eta", "0.8", "--gain", "exp:10",
           "--windows", "10000", "--format", "json"]
    outputs = []
    for threads in ("1", "8"):
        env = dict(os.environ, PHOTONCHAIN_THREADS=threads)
        proc = subprocess.run(cmd, capture_output=True, env=env)
        assert proc.returncode == 0, proc.stderr.decode()
        outputs.append(proc.stdout)
    ok = outputs[0] == outputs[1]
    _report(9, "simulate --seed 42 byte-identical for 1 and 8 threads", ok,
            f"{len(outputs[0])} bytes each")
