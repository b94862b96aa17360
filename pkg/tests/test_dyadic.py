import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from xsblab.dyadic import (DyadicBand, band_levels, cell_grid, modulation_exponents, project, project_cell,
                           random_band_field, random_cell_field, single_modulation_ratio, square_function_defect,
                           sweep_csv, xsb_decomposition)
from xsblab.families import ModulationShell
from xsblab.grid import GridSpec, SpacetimeField, japanese, mixed_norm, xsb_norm

LAB = GridSpec(2.0, 32.0, 64, 256)


def random_field(seed, frame="lab"):
    rng = np.random.default_rng(seed)
    a = rng.standard_normal(LAB.shape) + 1j * rng.standard_normal(LAB.shape)
    if frame == "lab":
        return SpacetimeField(LAB, spectral=a)
    return SpacetimeField(LAB, spectral=a, frame="modulation", xi_shift=13.0)


def test_band_validation():
    with pytest.raises(ValueError):
        DyadicBand("frequency", 3)
    with pytest.raises(ValueError):
        DyadicBand("time", 4)
    with pytest.raises(ValueError):
        DyadicBand("frequency", 0)
    b = DyadicBand("modulation", 4.0)
    assert b.level == 4 and isinstance(b.level, int)
    assert b.contains(np.array([3.99, 4.0, 7.99, 8.0])).tolist() == [False, True, True, False]


def test_band_levels_cover():
    u = random_field(0)
    levels = band_levels(u, "frequency")
    top = japanese(np.abs(u.xi)).max()
    assert levels[0] == 1 and levels[-1] <= top < 2 * levels[-1]


@pytest.mark.parametrize("frame", ["lab", "modulation"])
@pytest.mark.parametrize("axis", ["frequency", "modulation"])
def test_projection_idempotent_and_orthogonal(frame, axis):
    u = random_field(1, frame)
    a = project(u, DyadicBand(axis, 4))
    assert np.array_equal(project(a, DyadicBand(axis, 4)).spectral, a.spectral)
    b = project(u, DyadicBand(axis, 8))
    assert np.vdot(a.spectral, b.spectral) == 0
    assert abs(np.vdot(a.physical, b.physical)) <= 1e-9 * a.l2_norm() * b.l2_norm() / (LAB.dt * LAB.dx)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from(["lab", "modulation"]))
def test_tilings(seed, frame):
    u = random_field(seed, frame)
    total = u.l2_norm() ** 2
    freq = sum(project(u, DyadicBand("frequency", N)).l2_norm() ** 2 for N in band_levels(u, "frequency"))
    assert freq == pytest.approx(total, rel=1e-9)
    cells = sum(project_cell(u, N, L).l2_norm() ** 2
                for N in band_levels(u, "frequency") for L in band_levels(u, "modulation"))
    assert cells == pytest.approx(total, rel=1e-9)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(-1, 1), st.floats(-1, 1))
def test_xsb_decomposes(seed, s, b):
    total, parts = xsb_decomposition(random_field(seed, "modulation"), s, b)
    assert parts == pytest.approx(total, rel=1e-9)


# ------------------------------------------------------- square function


def test_defect_single_band():
    rng = np.random.default_rng(3)
    u = random_band_field(LAB, 8, rng)
    assert square_function_defect(u, 4, 6) == pytest.approx(1.0, rel=1e-12)


def test_defect_two_bands_pythagoras():
    rng = np.random.default_rng(4)
    a = random_band_field(LAB, 2, rng)
    b = random_band_field(LAB, 16, rng)
    b = b.scaled(a.l2_norm() / b.l2_norm())
    u = a.with_spectral(a.spectral + b.spectral)
    assert square_function_defect(u, 2, 2) == pytest.approx(1.0, abs=1e-9)


def test_defect_six_bands_window():
    grid = GridSpec(1.0, 64.0, 8, 4096)
    rng = np.random.default_rng(5)
    values = []
    for _ in range(100):
        spec = sum(random_band_field(grid, 2**k, rng).spectral * rng.uniform(0.1, 1) for k in range(1, 7))
        values.append(square_function_defect(SpacetimeField(grid, spectral=spec), 2, 4))
    assert 0.1 <= min(values) and max(values) <= 10


def test_defect_errors():
    with pytest.raises(ValueError):
        square_function_defect(random_field(0), "inf", 2)
    with pytest.raises(ValueError):
        square_function_defect(SpacetimeField(LAB, spectral=np.zeros(LAB.shape)), 2, 2)


# --------------------------------------------------- single modulation


def test_modulation_exponents():
    assert modulation_exponents(2) == (0.0, 0.0)
    a, c = modulation_exponents(4)
    assert a == pytest.approx(1 / 8) and c == pytest.approx(-1 / 8)


def test_ratio_is_one_at_r2():
    rng = np.random.default_rng(6)
    for N, L in [(2, 1), (4, 8), (16, 2)]:
        u = random_cell_field(N, L, rng)
        assert single_modulation_ratio(u, N, L, 2) == pytest.approx(1.0, rel=1e-12)


def test_ratio_errors():
    rng = np.random.default_rng(7)
    u = random_cell_field(4, 4, rng)
    with pytest.raises(ValueError):
        single_modulation_ratio(u, 4, 4, "inf")
    with pytest.raises(ValueError):
        single_modulation_ratio(u, 32, 4, 4)


def test_cell_field_lives_in_cell():
    rng = np.random.default_rng(8)
    for N, L in [(2, 1), (8, 64), (64, 2)]:
        u = random_cell_field(N, L, rng)
        assert u.frame == "modulation"
        assert project_cell(u, N, L).l2_norm() == pytest.approx(u.l2_norm(), rel=1e-12)
        grid, W = cell_grid(N, L)
        assert grid == u.grid and W > 0


def test_random_band_field_support():
    rng = np.random.default_rng(9)
    u = random_band_field(LAB, 4, rng, L=8)
    mask = (u.spectral != 0)
    assert mask.any()
    xi_ok = DyadicBand("frequency", 4).contains(japanese(LAB.xi))[None, :]
    mod_ok = DyadicBand("modulation", 8).contains(japanese(u.modulation))
    assert np.all(xi_ok | ~mask) and np.all(mod_ok | ~mask)


def _slope(xs, ys):
    return float(np.polyfit(np.log2(xs), np.log2(ys), 1)[0])


def test_random_sweep_bounded():
    levels = [2, 4, 8, 16, 32, 64]
    table = np.empty((len(levels), len(levels)))
    for i, N in enumerate(levels):
        for j, L in enumerate(levels):
            rng = np.random.default_rng([10, N, L])
            table[i, j] = max(single_modulation_ratio(random_cell_field(N, L, rng), N, L, 4) for _ in range(3))
    assert table.max() / table.min() <= 50
    assert abs(_slope(levels, table.max(axis=1))) <= 0.05
    assert abs(_slope(levels, table.max(axis=0))) <= 0.05


def test_shell_ratio_bounded():
    ratios = []
    for N in (2, 4, 8, 16):
        w = ModulationShell(N).modulation_field(t_extent=64.0, n_t=128)
        ratios.append(single_modulation_ratio(w, N, 1, 4))
    assert max(ratios) / min(ratios) < 1.5


def test_sweep_csv():
    text = sweep_csv([(2, 4, "4", 0.5), (8, 1, "inf", 1.25)])
    assert text.splitlines() == ["N,L,r,ratio", "2,4,4,0.5", "8,1,inf,1.25"]


def test_mixed_norm_of_projection_matches_lab():
    # the modulation frame changes nothing about a field's norms
    rng = np.random.default_rng(11)
    u = random_cell_field(8, 4, rng)
    v = project_cell(u, 8, 4)
    assert mixed_norm(v, 2, 2) == pytest.approx(xsb_norm(v, 0, 0), rel=1e-12)
    assert math.isfinite(mixed_norm(v, 4, 4))
