import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sharpfv import core1d
from sharpfv.core1d import (Box, CellField, Constant, Gaussian, Grid1D, Sinusoid, Step,
                            cell_integral, check_cfl, estimate_eoc, exact_advect_average,
                            norm, pad, project_initial, read_csv, total_variation, write_csv)
from sharpfv.errors import CFLError


def test_grid_geometry():
    g = Grid1D(0.0, 1.0, 4)
    assert g.dx == 0.25
    np.testing.assert_allclose(g.centers, [0.125, 0.375, 0.625, 0.875])
    np.testing.assert_allclose(g.faces, [0, 0.25, 0.5, 0.75, 1.0])
    with pytest.raises(ValueError):
        Grid1D(0.0, 1.0, 0)
    with pytest.raises(ValueError):
        Grid1D(1.0, 0.0, 4)
    with pytest.raises(ValueError):
        Grid1D(0.0, 1.0, 4, boundary="reflective")


def test_cellfield_is_read_only_and_checked():
    g = Grid1D(0.0, 1.0, 3)
    c = CellField(g, [1.0, 2.0, 3.0])
    with pytest.raises(ValueError):
        c.values[0] = 5.0
    with pytest.raises(ValueError):
        CellField(g, [1.0, 2.0])
    assert c.mass() == pytest.approx(2.0)


def test_check_cfl():
    check_cfl(1.0)
    check_cfl(-0.5)
    with pytest.raises(CFLError):
        check_cfl(1.0 + 1e-9)
    with pytest.raises(CFLError):
        check_cfl(1.0, strict=True)


def test_pad_periodic_and_inflow():
    v = np.array([1.0, 2.0, 3.0])
    np.testing.assert_array_equal(pad(v, Grid1D(0, 1, 3), 2, 1), [2, 3, 1, 2, 3, 1])
    np.testing.assert_array_equal(pad(v, Grid1D(0, 1, 3, "inflow", (7, 9)), 1, 2), [7, 1, 2, 3, 9, 9])


def test_project_constant():
    for mode in ("average", "point"):
        c = project_initial(Constant(3.0), Grid1D(0, 1, 5), mode)
        np.testing.assert_allclose(c.values, 3.0, rtol=1e-14)


def test_project_face_aligned_step():
    c = project_initial(Step(0.5, left=0.0, right=1.0), Grid1D(0, 1, 4))
    np.testing.assert_array_equal(c.values, [0, 0, 1, 1])


def test_project_step_inside_cell():
    # the unit part of H(x - 0.45) covers 0.05 of the cell [0.25, 0.5)
    c = project_initial(Step(0.45, left=0.0, right=1.0), Grid1D(0, 1, 4))
    np.testing.assert_allclose(c.values, [0, 0.2, 1, 1], atol=1e-15)
    c = project_initial(Step(0.45, left=1.0, right=0.0), Grid1D(0, 1, 4))
    np.testing.assert_allclose(c.values, [1, 0.8, 0, 0], atol=1e-15)


def test_project_rejects_non_finite():
    with pytest.raises(ValueError):
        project_initial(lambda x: np.full_like(x, np.nan), Grid1D(0, 1, 4), "point")


def test_quadrature_fallback_matches_antiderivative():
    g = Grid1D(0.0, 1.0, 16)
    f = Gaussian(0.4, 0.07)
    exact = project_initial(f, g).values
    quad = project_initial(lambda x: f(x), g).values
    np.testing.assert_allclose(quad, exact, atol=1e-12)
    # a plain callable with a jump needs the jump hint
    h = lambda x: np.where(np.asarray(x) < 0.3, 1.0, 0.0)  # noqa: E731
    quad_step = project_initial(h, g, jumps=[0.3]).values
    np.testing.assert_allclose(quad_step, project_initial(Step(0.3), g).values, atol=1e-12)
    assert cell_integral(np.sin, 0.0, np.pi) == pytest.approx(2.0, abs=1e-12)


def test_exact_advect_zero_time_is_projection():
    g = Grid1D(0, 1, 10)
    f = Box(0.2, 0.55)
    np.testing.assert_array_equal(exact_advect_average(f, g, 1.0, 0.0).values,
                                  project_initial(f, g).values)


def test_exact_advect_grid_aligned_shift():
    g = Grid1D(0, 1, 10)
    f = Gaussian(0.3, 0.1)
    c0 = project_initial(f, g).values
    c3 = exact_advect_average(f, g, 2.0, 3 * g.dx / 2.0).values
    np.testing.assert_allclose(c3, np.roll(c0, 3), atol=1e-14)


def test_exact_advect_fractional_shift_of_face_step():
    g = Grid1D(0, 1, 10)
    f = Step(0.5, left=1.0, right=0.0)
    c = exact_advect_average(f, g, 1.0, 0.4 * g.dx).values
    assert c[5] == pytest.approx(0.4, abs=1e-14)
    np.testing.assert_allclose(c[1:5], 1.0)
    # periodic wrap brings the 0 -> 1 jump at x = 0 into the first cell
    assert c[0] == pytest.approx(0.6, abs=1e-14)


def test_norms():
    g = Grid1D(0, 1, 4)
    a = CellField(g, [1.0, 0, 0, 0])
    b = CellField(g, np.zeros(4))
    assert norm(a, b, "L1") == pytest.approx(0.25)
    assert norm(a, b, "L2") == pytest.approx(0.5)
    assert norm(a, b, "Linf") == 1.0
    for kind in ("L1", "L2", "Linf"):
        assert norm(a, a, kind) == 0.0
    with pytest.raises(ValueError):
        norm(a, CellField(Grid1D(0, 2, 4), np.zeros(4)))
    with pytest.raises(ValueError):
        norm(a, b, "H1")


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(-10, 10), min_size=3, max_size=20), st.floats(-5, 5))
def test_norm_homogeneity(vals, lam):
    g = Grid1D(0, 1, len(vals))
    a = CellField(g, vals)
    z = CellField(g, np.zeros(len(vals)))
    s = CellField(g, lam * np.asarray(vals))
    for kind in ("L1", "L2"):
        assert norm(s, z, kind) == pytest.approx(abs(lam) * norm(a, z, kind), rel=1e-12, abs=1e-12)


def test_total_variation():
    g = Grid1D(0, 1, 6)
    assert total_variation(CellField(g, np.full(6, 2.0))) == 0.0
    assert total_variation(CellField(g, [0, 0, 1, 1, 1, 0])) == 2.0
    assert total_variation(np.array([0, 0.25, 0.5, 1.0, 0.5, 0.0])) == 2.0


def test_estimate_eoc():
    assert estimate_eoc([0.1, 0.05], [0.1, 0.05]) == pytest.approx([1.0])
    assert estimate_eoc([0.1, 0.025], [0.1, 0.05]) == pytest.approx([2.0])
    dxs = [0.1 / 2 ** i for i in range(5)]
    errs = [3.0 * h ** 0.75 for h in dxs]
    assert estimate_eoc(errs, dxs) == pytest.approx([0.75] * 4)
    assert estimate_eoc([0.0, 0.0], [0.1, 0.05]) == [None]
    with pytest.raises(ValueError):
        estimate_eoc([0.1], [0.1])
    with pytest.raises(ValueError):
        estimate_eoc([0.1, 0.05], [0.05, 0.1])


def test_sinusoid_average_is_exact():
    g = Grid1D(0, 1, 8)
    c = project_initial(Sinusoid(), g).values
    expected = (np.cos(2 * np.pi * g.faces[:-1]) - np.cos(2 * np.pi * g.faces[1:])) / (2 * np.pi * g.dx)
    np.testing.assert_allclose(c, expected, atol=1e-15)


def test_csv_round_trip(tmp_path):
    g = Grid1D(0, 1, 7)
    c = project_initial(Gaussian(), g)
    p = tmp_path / "c.csv"
    write_csv(c, p)
    assert p.read_text().splitlines()[0] == "x,value"
    np.testing.assert_array_equal(read_csv(p, g).values, c.values)


def test_public_names():
    for name in core1d.__all__:
        assert hasattr(core1d, name)
