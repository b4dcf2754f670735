import json
import math
import re

import numpy as np
import pytest

from tcsim.analytic import TCParams
from tcsim.errors import BackendUnavailable, InvalidParams
from tcsim.sweep import SweepSpec, emit_csv, emit_json, emit_svg, run_sweep


class TestSpec:
    def test_grid(self):
        spec = SweepSpec(TCParams(1, 1, 1), t_max=2.0, steps=5)
        np.testing.assert_array_equal(spec.t_grid(), [0, 0.5, 1.0, 1.5, 2.0])

    def test_canonical_backend_order(self):
        spec = SweepSpec(TCParams(1, 1, 1), backends=("qme", "analytic"))
        assert spec.backends == ("analytic", "qme")

    @pytest.mark.parametrize(
        "kwargs",
        [
            dict(steps=1),
            dict(t_max=0.0),
            dict(backends=("nope",)),
            dict(backends=("analytic", "analytic")),
            dict(shots=100),
            dict(backends=("circuit",), shots=0),
            dict(seed=-1),
        ],
    )
    def test_invalid(self, kwargs):
        with pytest.raises(InvalidParams):
            SweepSpec(TCParams(1, 1, 1), **kwargs)


class TestRunSweep:
    def test_two_points(self):
        p = TCParams(2, 3, 1)
        r = run_sweep(SweepSpec(p, steps=2))
        assert list(r.series) == ["analytic"]
        assert len(r.series["analytic"]) == 2
        np.testing.assert_array_equal(r.as_array("analytic")[0], [1, 0, 0])

    def test_qme_agreement(self):
        r = run_sweep(SweepSpec(TCParams(2, 10, 5), backends=("analytic", "qme")))
        assert r.max_diff("analytic", "qme") <= 1e-6

    def test_diff_matrix_shape(self):
        r = run_sweep(
            SweepSpec(TCParams(2, 10, 5), steps=11, backends=("analytic", "circuit", "volterra"))
        )
        d = r.diff_matrix
        np.testing.assert_array_equal(d, d.T)
        np.testing.assert_array_equal(np.diag(d), 0)
        assert r.max_diff("analytic", "circuit") <= 1e-12
        assert r.max_diff("analytic", "volterra") <= 1e-3

    def test_all_series_share_grid(self):
        r = run_sweep(SweepSpec(TCParams(3, 2, 5), steps=7, backends=("analytic", "circuit", "qme")))
        for s in r.series.values():
            assert [pv.t for pv in s] == list(r.t_grid)

    def test_volterra_needs_loss(self):
        with pytest.raises(BackendUnavailable):
            run_sweep(SweepSpec(TCParams(2, 1, 0), backends=("volterra",)))

    def test_shots_fig3_setup(self):
        spec = SweepSpec(
            TCParams(7, 5, 5), t_max=2, steps=101, backends=("analytic", "circuit"),
            shots=40000, seed=42,
        )
        r = run_sweep(spec)
        bound = 3 * math.sqrt(0.25 / 40000)
        assert bound == pytest.approx(0.0075)
        assert r.max_diff("analytic", "circuit") <= bound
        freqs = r.as_array("circuit")
        np.testing.assert_allclose(freqs.sum(axis=1), 1, atol=1e-15)
        np.testing.assert_allclose(freqs * 40000, np.round(freqs * 40000), atol=1e-8)

    def test_snapshot_semantics(self):
        p = TCParams(3, 2, 5)
        base = SweepSpec(p, t_max=2, steps=5, backends=("circuit",), shots=1000, seed=9)
        full = run_sweep(base).as_array("circuit")
        # t=1 is index 2 here and index 1 in the shorter sweep; both draw
        # with seed 11 (9 ^ 2 and 10 ^ 1), so the samples must coincide
        short = run_sweep(
            SweepSpec(p, t_max=1, steps=2, backends=("circuit",), shots=1000, seed=10)
        ).as_array("circuit")
        np.testing.assert_array_equal(full[2], short[1])

    def test_deterministic(self):
        spec = SweepSpec(TCParams(3, 2, 5), steps=11, backends=("analytic", "circuit"), shots=500)
        a, b = run_sweep(spec), run_sweep(spec)
        np.testing.assert_array_equal(a.as_array("circuit"), b.as_array("circuit"))

    def test_wall_clock_recorded(self):
        r = run_sweep(SweepSpec(TCParams(1, 1, 1), steps=3, backends=("analytic", "qme")))
        assert set(r.wall_clock) == {"analytic", "qme"}
        assert all(v >= 0 for v in r.wall_clock.values())


class TestCSV:
    def test_single_atom_two_steps(self):
        text = emit_csv(run_sweep(SweepSpec(TCParams(1, 1, 1), steps=2)))
        lines = text.splitlines()
        assert len(lines) == 3
        assert lines[0] == "t,backend,p_s1,p_env"
        assert text.endswith("\n")

    def test_initial_row(self):
        text = emit_csv(run_sweep(SweepSpec(TCParams(2, 1, 1), steps=3)))
        assert text.splitlines()[1] == "0,analytic,1,0,0"

    def test_sorted_by_backend_then_time(self):
        r = run_sweep(SweepSpec(TCParams(2, 1, 1), steps=4, backends=("qme", "circuit", "analytic")))
        rows = [line.split(",") for line in emit_csv(r).splitlines()[1:]]
        keys = [(b, float(t)) for t, b, *_ in rows]
        assert keys == sorted(keys)
        assert [k[0] for k in keys[::4]] == ["analytic", "circuit", "qme"]

    def test_number_format(self):
        text = emit_csv(run_sweep(SweepSpec(TCParams(7, 5, 5), steps=11)))
        for row in text.splitlines()[1:]:
            for field in [row.split(",")[0], *row.split(",")[2:]]:
                mantissa = re.sub(r"e[-+]\d+$", "", field).lstrip("-").replace(".", "")
                assert len(mantissa.lstrip("0")) <= 12
                assert field != "-0"

    def test_byte_identical(self):
        spec = SweepSpec(TCParams(3, 2, 5), steps=21, backends=("analytic", "circuit"), shots=1000)
        assert emit_csv(run_sweep(spec)) == emit_csv(run_sweep(spec))


class TestJSON:
    def test_schema(self):
        spec = SweepSpec(TCParams(2, 10, 5), steps=3, backends=("analytic", "qme"))
        doc = json.loads(emit_json(run_sweep(spec)))
        assert set(doc) == {"spec", "t_grid", "series", "diff_matrix"}
        assert doc["spec"]["n_atoms"] == 2
        assert doc["spec"]["backends"] == ["analytic", "qme"]
        assert doc["t_grid"] == [0.0, 1.0, 2.0]
        assert set(doc["series"]) == {"analytic", "qme"}
        assert len(doc["series"]["qme"]["atom_populations"]) == 3
        assert doc["diff_matrix"]["backends"] == ["analytic", "qme"]

    def test_timing_opt_in(self):
        r = run_sweep(SweepSpec(TCParams(1, 1, 1), steps=2))
        assert "wall_clock" in json.loads(emit_json(r, include_timing=True))

    def test_byte_identical(self):
        spec = SweepSpec(TCParams(2, 10, 5), steps=5, backends=("analytic", "volterra"))
        assert emit_json(run_sweep(spec)) == emit_json(run_sweep(spec))


class TestSVG:
    def test_canvas(self):
        svg = emit_svg(run_sweep(SweepSpec(TCParams(1, 1, 1), steps=5)))
        assert svg.startswith('<svg xmlns="http://www.w3.org/2000/svg" width="800" height="500"')
        assert svg.rstrip().endswith("</svg>")

    def test_empty_backend_set(self):
        svg = emit_svg(run_sweep(SweepSpec(TCParams(1, 1, 1), steps=5, backends=())))
        assert "<polyline" not in svg
        assert 'class="axes"' in svg
        assert "<text" in svg

    def test_polyline_count(self):
        r = run_sweep(SweepSpec(TCParams(1, 1, 1), steps=5, backends=("analytic", "qme")))
        assert emit_svg(r).count("<polyline") == 4

    def test_points_inside_canvas(self):
        r = run_sweep(SweepSpec(TCParams(3, 2, 5), steps=21, backends=("analytic",)))
        for pts in re.findall(r'points="([^"]+)"', emit_svg(r)):
            for pair in pts.split():
                x, y = map(float, pair.split(","))
                assert 0 <= x <= 800 and 0 <= y <= 500

    def test_no_nondeterministic_content(self):
        spec = SweepSpec(TCParams(2, 10, 5), steps=11, backends=("analytic", "circuit"))
        a = emit_svg(run_sweep(spec))
        assert a == emit_svg(run_sweep(spec))
        assert "id=" not in a
        assert "<metadata" not in a
