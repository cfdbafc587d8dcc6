import json
import math
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from prolate import zeta_compare as zc
from prolate.darboux import dirac_eigenvalues
from prolate.errors import DomainError, FormatError, RangeError
from prolate.semiclassical import predicted_dirac_count, predicted_dirac_count_asymptotic

GOLDEN = Path(__file__).with_name("data")


@pytest.fixture(scope="module")
def table():
    return zc.load_zeros(zc.BUNDLED_ZEROS)


def spectrum_from(ims):
    """Dirac spectrum whose positive imaginary parts are exactly ``ims``."""
    return dirac_eigenvalues(math.sqrt(2), [-(g / 2) ** 2 for g in ims])


def synthetic_report(table):
    # deterministic stand-in for a computed spectrum: zeros shifted by a smooth drift
    ims = table.ordinates[:20] - 0.3 + 0.01 * np.arange(20)
    return zc.compare_counts(spectrum_from(ims), table, np.arange(15.0, 60.0 + 1e-9, 2.5), window=(20.0, 60.0))


class TestTable:
    def test_bundled(self, table):
        assert table.ordinates.size == 100
        assert table.ordinates[0] == pytest.approx(14.134725141734693, abs=1e-12)
        assert table.checksum == zc.BUNDLED_SHA256

    def test_counts(self, table):
        assert zc.zero_count(table, 14.0) == 0
        assert zc.zero_count(table, 15.0) == 1
        assert zc.zero_count(table, 50.0) == 10
        with pytest.raises(RangeError):
            zc.zero_count(table, 300.0)

    def test_riemann_von_mangoldt(self, table):
        for E in np.arange(15.0, table.ceiling, 1.0):
            assert abs(zc.zero_count(table, E) - zc.smooth_zero_count(E)) <= 3

    def test_decreasing_pair(self, tmp_path):
        p = tmp_path / "z.txt"
        p.write_text("# header\n14.134725\n21.022040\n20.5\n25.0\n")
        with pytest.raises(FormatError) as info:
            zc.load_zeros(p)
        assert info.value.line == 4

    def test_garbage_line(self, tmp_path):
        p = tmp_path / "z.txt"
        p.write_text("14.134725\nabc\n")
        with pytest.raises(FormatError) as info:
            zc.load_zeros(p)
        assert info.value.line == 2

    @pytest.mark.parametrize("text", ["", "# only a comment\n\n"])
    def test_empty(self, tmp_path, text):
        p = tmp_path / "z.txt"
        p.write_text(text)
        with pytest.raises(FormatError):
            zc.load_zeros(p)

    def test_env_override(self, tmp_path, monkeypatch):
        p = tmp_path / "z.txt"
        p.write_text("14.134725\n21.022040\n")
        monkeypatch.setenv(zc.ZEROS_ENV, str(p))
        assert zc.load_zeros().ordinates.size == 2


class TestPairing:
    def test_identical(self, table):
        pairs = zc.pair_nearest(spectrum_from(table.ordinates[:30]), table, (10.0, 80.0))
        assert all(p.deviation == 0.0 for p in pairs)

    @settings(max_examples=20, deadline=None)
    @given(st.floats(min_value=-0.4, max_value=0.4))
    def test_shifted(self, eps):
        table = zc.load_zeros(zc.BUNDLED_ZEROS)
        ims = table.ordinates[:30] - eps
        pairs = zc.pair_nearest(spectrum_from(ims), table, (16.0, 80.0))
        assert all(p.matched for p in pairs)
        np.testing.assert_allclose([p.deviation for p in pairs], eps, atol=1e-9)

    def test_unmatched_flagged(self, table):
        ims = list(table.ordinates[:10]) + [30.0]
        pairs = zc.pair_nearest(spectrum_from(sorted(ims)), table, (10.0, 45.0))
        assert sum(not p.matched for p in pairs) == 1

    def test_window_beyond_coverage(self, table):
        with pytest.raises(RangeError):
            zc.pair_nearest(spectrum_from(table.ordinates[:5]), table, (10.0, 80.0))


class TestReport:
    def test_empty_grid(self, table):
        rep = zc.compare_counts(spectrum_from(table.ordinates[:5]), table, [])
        assert rep.E_grid == [] and rep.max_abs_delta == 0.0

    def test_insufficient_coverage(self, table):
        with pytest.raises(RangeError, match="covers"):
            zc.compare_counts(spectrum_from(table.ordinates[:5]), table, [20.0, 60.0])

    def test_counts_monotone_and_summary(self, table):
        rep = synthetic_report(table)
        assert rep.dirac_count == sorted(rep.dirac_count)
        assert rep.zero_count == sorted(rep.zero_count)
        assert rep.max_abs_delta <= 1
        assert rep.summary()["unmatched"] == 0

    def test_predicted_column(self, table):
        rep = synthetic_report(table)
        for E, pred in zip(rep.E_grid, rep.predicted_count):
            assert pred == pytest.approx(predicted_dirac_count(E), rel=1e-14)
        # the exact area approaches its leading form from above as E grows
        gaps = [p - predicted_dirac_count_asymptotic(E) for E, p in zip(rep.E_grid, rep.predicted_count)]
        assert gaps[-1] < gaps[0]

    def test_deterministic(self, table):
        assert synthetic_report(table).to_dict() == synthetic_report(table).to_dict()

    def test_csv_round_trip(self, table, tmp_path):
        rep = synthetic_report(table)
        zc.export_report(rep, "csv", tmp_path / "r.csv")
        back = zc.read_report_csv(tmp_path / "r.csv")
        assert back["E"] == rep.E_grid
        assert back["dirac_count"] == rep.dirac_count
        assert back["zero_count"] == rep.zero_count
        assert back["predicted_count"] == rep.predicted_count
        assert back["delta"] == rep.delta

    def test_json_round_trip(self, table, tmp_path):
        rep = synthetic_report(table)
        zc.export_report(rep, "json", tmp_path / "r.json")
        assert json.loads((tmp_path / "r.json").read_text()) == json.loads(json.dumps(rep.to_dict()))

    def test_unknown_format(self, table, tmp_path):
        with pytest.raises(DomainError):
            zc.export_report(synthetic_report(table), "xml", tmp_path / "r.xml")

    @pytest.mark.parametrize("fmt", ["csv", "json"])
    def test_golden(self, table, tmp_path, fmt):
        out = tmp_path / f"report.{fmt}"
        zc.export_report(synthetic_report(table), fmt, out)
        assert out.read_text() == (GOLDEN / f"golden_report.{fmt}").read_text()
