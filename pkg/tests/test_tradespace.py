import math

import pytest

from photonchain.catalog import builtin_detectors
from photonchain.efficiency import RateBudget, StageEfficiencies, trap_absorption
from photonchain.analytic import snr_classical, snr_correlated
from photonchain.tradespace import (
    SPEED_OF_LIGHT,
    SweepContext,
    SweepSpec,
    TrapGeometry,
    checklist,
    delay_lines,
    min_trap_detectors,
    sweep,
)


def _detector(name):
    return {d.technology: d for d in builtin_detectors()}[name]


class TestSweep:
    def test_snr_improvement_over_eta(self):
        spec = SweepSpec(variable="eta", grid=(0.5, 0.9, 0.99),
                         fixed=SweepContext(n_photons=1e6),
                         outputs=("snr_improvement",))
        result = sweep(spec)
        values = [row.metrics["snr_improvement"] for row in result.rows]
        assert values[0] == pytest.approx(1.414, abs=1e-3)
        assert values[1] == pytest.approx(3.162, abs=1e-3)
        assert values[2] == pytest.approx(10.0, abs=1e-3)
        for eta, value in zip(spec.grid, values):
            assert value == pytest.approx(1.0 / math.sqrt(1.0 - eta), rel=1e-12)

    def test_trap_detector_sweep(self):
        stages = StageEfficiencies(1.0, 0.69, 1.0, 1.0, 1)
        spec = SweepSpec(variable="trap_detectors", grid=(1, 2, 3),
                         fixed=SweepContext(stages=stages),
                         outputs=("trap_absorption", "total_qe"))
        result = sweep(spec)
        absorptions = [row.metrics["trap_absorption"] for row in result.rows]
        assert absorptions[0] == pytest.approx(0.69, abs=1e-12)
        assert absorptions[1] == pytest.approx(0.970209, abs=1e-9)
        assert absorptions[2] == pytest.approx(0.9971370849, abs=1e-9)
        # With all other stages at unity the two metrics coincide.
        for row in result.rows:
            assert row.metrics["total_qe"] == pytest.approx(
                row.metrics["trap_absorption"], rel=1e-14)

    def test_rows_equal_pointwise_evaluation(self):
        spec = SweepSpec(variable="eta", grid=(0.3, 0.6, 0.9),
                         fixed=SweepContext(n_photons=1e4),
                         outputs=("snr_classical", "snr_correlated_full"))
        result = sweep(spec)
        for eta, row in zip(spec.grid, result.rows):
            assert row.metrics["snr_classical"] == snr_classical(eta, 1e4)
            assert row.metrics["snr_correlated_full"] == snr_correlated(eta, 1e4).full
            assert row.error is None

    def test_rate_bracket_metrics(self):
        spec = SweepSpec(variable="dark_rate", grid=(25.0, 2e4),
                         fixed=SweepContext(dead_time=1e-9, margin=1e3),
                         outputs=("rate_bracket_feasible", "rate_bracket_low",
                                  "rate_bracket_high"))
        result = sweep(spec)
        assert result.rows[0].metrics["rate_bracket_feasible"] is True
        assert result.rows[0].metrics["rate_bracket_low"] == pytest.approx(2.5e4)
        assert result.rows[1].metrics["rate_bracket_feasible"] is False

    def test_empty_metric_list_rejected(self):
        with pytest.raises(ValueError, match="metric"):
            SweepSpec(variable="eta", grid=(0.5,), fixed=SweepContext(), outputs=())

    def test_empty_grid_rejected(self):
        with pytest.raises(ValueError, match="grid"):
            SweepSpec(variable="eta", grid=(), fixed=SweepContext(),
                      outputs=("snr_classical",))

    def test_non_monotone_grid_rejected(self):
        with pytest.raises(ValueError, match="monotone"):
            SweepSpec(variable="eta", grid=(0.5, 0.9, 0.7), fixed=SweepContext(),
                      outputs=("snr_classical",))

    def test_decreasing_grid_allowed(self):
        spec = SweepSpec(variable="eta", grid=(0.9, 0.5, 0.1),
                         fixed=SweepContext(n_photons=100.0),
                         outputs=("snr_classical",))
        assert [row.value for row in sweep(spec).rows] == [0.9, 0.5, 0.1]

    def test_unknown_variable_rejected(self):
        with pytest.raises(ValueError, match="variable"):
            SweepSpec(variable="zeta", grid=(1.0,), fixed=SweepContext(),
                      outputs=("snr_classical",))

    def test_per_row_errors_do_not_stop_sweep(self):
        # dark_adjusted_qe needs a photon flux; its absence is a row error,
        # and the remaining metric still computes.
        spec = SweepSpec(variable="eta", grid=(0.5, 0.9),
                         fixed=SweepContext(n_photons=1e4, dark_rate=10.0),
                         outputs=("dark_adjusted_qe", "snr_classical"))
        result = sweep(spec)
        for row in result.rows:
            assert row.metrics["dark_adjusted_qe"] is None
            assert "photon_flux" in row.error
            assert row.metrics["snr_classical"] is not None

    def test_columns(self):
        spec = SweepSpec(variable="fano", grid=(0.1, 0.2),
                         fixed=SweepContext(eta=0.9, n_photons=1e4),
                         outputs=("snr_fano_full", "snr_fano_approx"))
        assert sweep(spec).columns == ["fano", "snr_fano_full", "snr_fano_approx",
                                       "error"]


class TestMinTrapDetectors:
    def test_worked_example(self):
        # Four detectors leave 0.31^7 = 2.75e-4 unabsorbed; five reach 2.6e-5.
        assert min_trap_detectors(0.69, 0.9999) == 5
        assert trap_absorption(0.69, 4) < 0.9999 <= trap_absorption(0.69, 5)

    def test_single_bounce_suffices(self):
        assert min_trap_detectors(0.69, 0.69) == 1

    def test_already_above_target(self):
        assert min_trap_detectors(0.999, 0.9) == 1

    @pytest.mark.parametrize("eta", [0.1, 0.3, 0.69, 0.9])
    @pytest.mark.parametrize("target", [0.5, 0.9, 0.99, 0.9999])
    def test_minimality(self, eta, target):
        n = min_trap_detectors(eta, target)
        assert trap_absorption(eta, n) >= target
        if n > 1:
            assert trap_absorption(eta, n - 1) < target

    def test_domain(self):
        with pytest.raises(ValueError):
            min_trap_detectors(0.0, 0.9)
        with pytest.raises(ValueError):
            min_trap_detectors(0.5, 1.0)


class TestChecklist:
    def test_all_pass(self):
        report = checklist(
            _detector("APD"),
            StageEfficiencies(eta_col=0.9995, eta_abs=0.69, eta_pe=0.98,
                              eta_mul=1.0, trap_detectors=3),
            RateBudget(count_rate=25.0 * 1e4, dark_rate=25.0, dead_time=1e-9))
        assert report.passed
        assert [item.passed for item in report.items] == [True, True, True, True, None]

    def test_vlpc_bracket_fails_with_gating_recommendation(self):
        report = checklist(_detector("VLPC"), StageEfficiencies(1.0, 1.0, 1.0, 1.0, 1),
                           RateBudget())
        item2 = report.items[1]
        assert item2.item == 2
        assert item2.passed is False
        assert "gate" in item2.note
        assert not report.passed

    def test_collection_loss_threshold(self):
        report = checklist(
            _detector("APD"),
            StageEfficiencies(eta_col=0.99, eta_abs=0.69, eta_pe=0.98,
                              eta_mul=1.0, trap_detectors=3),
            RateBudget(count_rate=2.5e5))
        item3 = report.items[2]
        assert item3.passed is False
        assert item3.value == pytest.approx(1e-2, rel=1e-9)
        assert item3.threshold == 1e-3

    def test_trap_item_requires_two_detectors(self):
        report = checklist(_detector("SSPD"), StageEfficiencies(1.0, 0.9, 1.0, 1.0, 1),
                           RateBudget(count_rate=1e5))
        assert report.items[3].passed is False
        report = checklist(_detector("SSPD"), StageEfficiencies(1.0, 0.9, 1.0, 1.0, 2),
                           RateBudget(count_rate=1e5))
        assert report.items[3].passed is True

    def test_intrinsic_efficiency_is_informational(self):
        report = checklist(_detector("APD"), StageEfficiencies(1.0, 1.0, 0.98, 1.0, 2),
                           RateBudget(count_rate=1e6))
        item5 = report.items[4]
        assert item5.passed is None
        assert item5.value == pytest.approx(0.98)

    def test_missing_count_rate_leaves_item_unevaluated(self):
        report = checklist(_detector("APD"), StageEfficiencies(1.0, 1.0, 1.0, 1.0, 2),
                           RateBudget())
        assert report.items[0].passed is None

    def test_pmt_dark_unknown_rejected(self):
        with pytest.raises(ValueError, match="dark"):
            checklist(_detector("PMT"), StageEfficiencies(1.0, 1.0, 1.0, 1.0, 2),
                      RateBudget(count_rate=1e5))

    def test_pmt_with_override_works(self):
        report = checklist(_detector("PMT"), StageEfficiencies(1.0, 1.0, 1.0, 1.0, 2),
                           RateBudget(count_rate=1e5, dark_rate=10.0))
        assert report.items[1].passed is True


class TestDelayLines:
    def test_three_detector_chain(self):
        geometry = TrapGeometry(3, (1.0, 2.0, 3.0), "linear")
        delays = delay_lines(geometry)
        assert delays[0] == pytest.approx(2.0 / SPEED_OF_LIGHT, rel=1e-12)
        assert delays[0] == pytest.approx(6.671e-9, abs=1e-12)
        assert delays[1] == pytest.approx(3.336e-9, abs=1e-12)
        assert delays[2] == 0.0

    def test_single_detector(self):
        assert delay_lines(TrapGeometry(1, (0.5,), "linear")) == [0.0]

    def test_retro_geometry_rejected(self):
        with pytest.raises(ValueError, match="retro"):
            delay_lines(TrapGeometry(2, (1.0, 2.0), "retro"))

    def test_delays_equalize_arrival(self):
        geometry = TrapGeometry(4, (0.3, 0.9, 1.4, 2.2), "linear")
        delays = delay_lines(geometry)
        arrivals = [d + p / SPEED_OF_LIGHT for d, p in zip(delays, geometry.path_lengths)]
        assert all(a == pytest.approx(arrivals[0], rel=1e-12) for a in arrivals)
        assert delays[0] == max(delays)

    def test_geometry_invariants(self):
        with pytest.raises(ValueError, match="increasing"):
            TrapGeometry(2, (2.0, 1.0), "linear")
        with pytest.raises(ValueError, match="path lengths"):
            TrapGeometry(3, (1.0, 2.0), "linear")
