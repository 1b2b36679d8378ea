import numpy as np
import pytest

from pampa_swe.global_flux import (LOBATTO_IIIA, SC_LOBATTO_III, assemble_global_flux, cell_sources,
                                   increments_lobattoIIIA, increments_sc_lobattoIII, local_flux,
                                   normalize_quadrature, source_increments)
from pampa_swe.models import RotatingShallowWater, SaintVenant
from pampa_swe.reconstruction import bathymetry_cells, reconstruct_cells

from states import lake_at_rest, random_state


def _sc(S, a=0.0, dx=1.0):
    return increments_sc_lobattoIII(S(a), S(a + dx / 4), S(a + dx / 2), S(a + dx), dx)


def _iiia(S, a=0.0, dx=1.0):
    return increments_lobattoIIIA(S(a), S(a + dx / 2), S(a + dx), dx)


def test_zero_and_unit_sources():
    for inc in (_sc(lambda x: 0.0), _iiia(lambda x: 0.0)):
        assert inc.dR_half == 0 and inc.dR_full == 0
    for inc in (_sc(lambda x: 1.0, dx=0.3), _iiia(lambda x: 1.0, dx=0.3)):
        assert inc.dR_half == pytest.approx(0.15, abs=1e-16)
        assert inc.dR_full == pytest.approx(0.3, abs=1e-16)


def test_exactness_degrees():
    rng = np.random.default_rng(3)
    c = rng.normal(size=4)
    cubic = lambda x: c[0] + c[1] * x + c[2] * x ** 2 + c[3] * x ** 3
    prim = lambda x: c[0] * x + c[1] * x ** 2 / 2 + c[2] * x ** 3 / 3 + c[3] * x ** 4 / 4
    a, dx = 0.7, 0.4
    inc = _sc(cubic, a, dx)
    assert inc.dR_full == pytest.approx(prim(a + dx) - prim(a), abs=1e-14)
    assert inc.dR_half == pytest.approx(prim(a + dx / 2) - prim(a), abs=1e-14)
    inc = _iiia(cubic, a, dx)
    assert inc.dR_full == pytest.approx(prim(a + dx) - prim(a), abs=1e-14)
    quad = lambda x: c[0] + c[1] * x + c[2] * x ** 2
    qprim = lambda x: c[0] * x + c[1] * x ** 2 / 2 + c[2] * x ** 3 / 3
    assert _iiia(quad, a, dx).dR_half == pytest.approx(qprim(a + dx / 2) - qprim(a), abs=1e-14)
    # but not for cubics on the half interval
    assert abs(_iiia(cubic, a, dx).dR_half - (prim(a + dx / 2) - prim(a))) > 1e-6
    assert _iiia(lambda x: x * x).dR_full == pytest.approx(1 / 3, abs=1e-16)
    assert _sc(lambda x: x ** 3).dR_full == pytest.approx(0.25, abs=1e-16)


def test_quadrature_names():
    assert normalize_quadrature("scIII") == SC_LOBATTO_III
    assert normalize_quadrature("IIIA") == LOBATTO_IIIA
    with pytest.raises(ValueError):
        normalize_quadrature("gauss")


def _field(state, model, quad=SC_LOBATTO_III):
    cells = reconstruct_cells(state.points, state.averages)
    bathy = bathymetry_cells(state.bathy_points, state.bathy_averages, state.grid.dx)
    src = cell_sources(cells, bathy, state.grid.nodes[:-1], state.grid.dx, model)
    inc = source_increments(src, state.grid.dx, quad)
    return cells, inc, assemble_global_flux(cells, inc, model)


def test_hydrostatic_identity_per_cell():
    m = SaintVenant(9.812)
    s = lake_at_rest(n=20, level=2.0)
    cells, inc, _ = _field(s, m)
    h0, h1 = s.points[0, :-1], s.points[0, 1:]
    np.testing.assert_allclose(inc.dR_full[1], 0.5 * m.g * (h1 ** 2 - h0 ** 2), atol=1e-13)


@pytest.mark.parametrize("model", [SaintVenant(9.812, 0.05), RotatingShallowWater(1.0, 10.0)])
def test_still_water_gives_constant_flux(model):
    s = lake_at_rest(n=50, level=1.0, nvars=model.nvars)
    _, _, fg = _field(s, model)
    vals = np.concatenate([fg.G_nodes[1], fg.G_mid[1]])
    assert vals.max() - vals.min() < 1e-13


def test_lobatto_iiia_not_still_water_exact():
    s = lake_at_rest(n=50, level=1.0)
    _, _, fg = _field(s, SaintVenant(9.812), LOBATTO_IIIA)
    vals = np.concatenate([fg.G_nodes[1], fg.G_mid[1]])
    assert vals.max() - vals.min() > 1e-10


def test_zero_source_field_is_flux(rng):
    s = random_state(rng, bump=0.0)
    m = SaintVenant(9.812)
    cells, inc, fg = _field(s, m)
    np.testing.assert_allclose(fg.G_nodes, m.flux(s.points), atol=1e-14)
    assert fg.R_nodes[:, 0].tolist() == [0.0, 0.0]


def test_field_differences_match_local_fluxes(rng):
    s = random_state(rng)
    m = SaintVenant(9.812, 0.03)
    cells, inc, fg = _field(s, m)
    lf = local_flux(cells, inc, m)
    np.testing.assert_allclose(fg.G_nodes[:, 1:] - fg.G_nodes[:, :-1], lf.g1 - lf.g0, atol=1e-12)
    np.testing.assert_allclose(fg.G_mid - fg.G_nodes[:, :-1], lf.gm - lf.g0, atol=1e-12)
    np.testing.assert_allclose(fg.G_nodes, m.flux(s.points) - fg.R_nodes, atol=1e-14)
