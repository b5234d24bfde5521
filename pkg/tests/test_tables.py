"""Fixture integrity and error-bound utilities."""

import hashlib
from importlib import resources

import pytest

from summarysd import tables
from summarysd.estimators import CorrectionOrder, eta_hat, xi_hat
from summarysd.specfun import std_normal_quantile
from summarysd.tables import error_bounds, eta_table, load_tables, xi_table

# Frozen checksum of the shipped fixture; any re-transcription must be
# reviewed deliberately.
FIXTURE_SHA256 = "62cee7cd4fae5634f268d16b2a05cebbf1cd93873c7d4b2c9b4a7cfef0e9318e"


def blom_range(n):
    return 2 * std_normal_quantile((n - 0.375) / (n + 0.25))


def blom_iqr(n):
    return 2 * std_normal_quantile((0.75 * n - 0.125) / (n + 0.25))


class TestFixture:
    def test_checksum(self):
        raw = resources.files("summarysd.data").joinpath(tables.FIXTURE_NAME).read_bytes()
        assert hashlib.sha256(raw).hexdigest() == FIXTURE_SHA256

    def test_full_coverage(self):
        xi_tab, eta_tab = load_tables()
        assert len(xi_tab.values) == 50
        assert len(eta_tab.values) == 50

    @pytest.mark.parametrize(
        "n, xi, eta",
        [(1, 0.0, 0.990), (2, 1.128, 1.144), (10, 3.078, 1.303), (50, 4.498, 1.340)],
    )
    def test_spot_values(self, n, xi, eta):
        assert xi_table(n) == xi
        assert eta_table(n) == eta

    def test_xi_strictly_increasing_from_2(self):
        vals = [xi_table(n) for n in range(2, 51)]
        assert all(b > a for a, b in zip(vals, vals[1:]))

    def test_eta_non_decreasing(self):
        vals = [eta_table(n) for n in range(1, 51)]
        assert all(b >= a for a, b in zip(vals, vals[1:]))

    @pytest.mark.parametrize("n", [0, 51, -3])
    def test_lookup_errors(self, n):
        with pytest.raises(KeyError):
            xi_table(n)
        with pytest.raises(KeyError):
            eta_table(n)


class TestErrorBounds:
    def test_self_comparison_is_zero(self):
        xi_tab, eta_tab = load_tables()
        for tab in (xi_tab, eta_tab):
            eb = error_bounds(tab, tab.value, 2, 50)
            assert eb.sup_abs == 0.0
            assert eb.inf_abs == 0.0

    def test_empty_or_bad_range(self):
        xi_tab, _ = load_tables()
        with pytest.raises(ValueError):
            error_bounds(xi_tab, xi_tab.value, 10, 5)
        with pytest.raises(ValueError):
            error_bounds(xi_tab, xi_tab.value, 0, 50)

    def test_uncorrected_iqr_divisor_bounds(self):
        # Published figures for the asymptotic IQR divisor: sup ~ 0.580,
        # inf ~ 0.030 over n = 2..50.
        _, eta_tab = load_tables()
        eb = error_bounds(eta_tab, blom_iqr, 2, 50)
        assert eb.sup_abs == pytest.approx(0.580, abs=0.001)
        assert eb.inf_abs == pytest.approx(0.030, abs=0.001)
        assert eb.argmax_n == 2

    def test_uncorrected_range_divisor_bounds(self):
        # sup ~ 0.051 / inf ~ 0.0003 (printed with the wrong symbol in
        # the source text; the values match the range table).
        xi_tab, _ = load_tables()
        eb = error_bounds(xi_tab, blom_range, 2, 50)
        assert eb.sup_abs == pytest.approx(0.051, abs=0.001)
        assert eb.inf_abs == pytest.approx(0.0003, abs=0.0002)

    def test_corrected_iqr_divisor_bounds(self):
        _, eta_tab = load_tables()
        eb = error_bounds(eta_tab, lambda n: eta_hat(n, CorrectionOrder.FIRST), 2, 50)
        assert eb.sup_abs <= 0.031
        assert eb.inf_abs < 0.0002

    def test_corrected_range_divisor_bounds(self):
        xi_tab, _ = load_tables()
        eb = error_bounds(xi_tab, xi_hat, 2, 50)
        assert eb.sup_abs <= 0.006
        assert eb.inf_abs < 0.0002
