import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cartanchan import basis as bs
from cartanchan import regions as rg
from cartanchan.basis import Kind
from cartanchan.regions import HalfPlane

so_dims = st.integers(3, 64)
sp_dims = st.integers(2, 32).map(lambda k: 2 * k)


def coeffs(hps):
    return [c for h in hps for c in (h.c0, h.cA, h.cB)]


def test_cp_halfplane_examples():
    assert coeffs(rg.cp_halfplanes(4, Kind.SO)) == pytest.approx([1, 6, 9, 1, 2, -3, 1, -2, 1])
    assert coeffs(rg.cp_halfplanes(4, Kind.SP)) == pytest.approx([1, 10, 5, 1, -2, 1, 1, 2, -3])
    assert coeffs(rg.cp_halfplanes(2, Kind.SP)) == pytest.approx([1, 3, 0, 1, -1, 0, 1, 1, 0])
    with pytest.raises(ValueError):
        rg.cp_halfplanes(5, Kind.SP)


@pytest.mark.parametrize("D,kind", [(4, Kind.SO), (8, Kind.SO), (4, Kind.SP), (8, Kind.SP), (5, Kind.SO)])
def test_numeric_halfplanes_match_closed_forms(D, kind):
    cb = bs.build_cartan_basis(D, kind)
    assert coeffs(rg.halfplanes_from_basis(cb)) == pytest.approx(coeffs(rg.cp_halfplanes(D, kind)), abs=1e-10)


def test_ppt_halfplanes():
    hps = rg.ppt_halfplanes(5, Kind.SO)
    assert len(hps) == 6
    rows = sorted((h.c0, h.cA, h.cB) for h in hps)
    assert rows == sorted((c0, -cA, cB) for c0, cA, cB in rows)
    assert sum(abs(h.value(0, 2 / 7)) < 1e-12 for h in hps) == 2
    assert all(h.value(0, 0) > 0 for h in rg.ppt_halfplanes(8, Kind.SP))


def test_intersect_unit_square():
    sq = [HalfPlane(1, 1, 0), HalfPlane(1, -1, 0), HalfPlane(1, 0, 1), HalfPlane(1, 0, -1)]
    reg = rg.intersect_halfplanes(sq)
    assert reg.area == pytest.approx(4)
    assert sorted(reg.vertices) == [(-1, -1), (-1, 1), (1, -1), (1, 1)]
    c = rg.contains(reg, (0, 0))
    assert c.inside and c.margin == pytest.approx(1)


def test_intersect_errors():
    with pytest.raises(rg.RegionError):
        rg.intersect_halfplanes([HalfPlane(1, 1, 0), HalfPlane(1, -1, 0), HalfPlane(1, 0, 1)])
    with pytest.raises(rg.RegionError):
        rg.intersect_halfplanes([HalfPlane(-1, 1, 0), HalfPlane(-1, -1, 0), HalfPlane(1, 0, 1), HalfPlane(1, 0, -1)])
    with pytest.raises(rg.RegionError):
        rg.intersect_halfplanes(rg.cp_halfplanes(2, Kind.SP))


def test_cp_region_triangle():
    reg = rg.cp_region(5, Kind.SO)
    assert len(reg.vertices) == 3
    assert min(max(abs(a - 1), abs(b - 1)) for a, b in reg.vertices) <= 1e-12
    for D in (4, 8):
        assert any(np.allclose(v, (1, 1)) for v in rg.cp_region(D, Kind.SP).vertices)


def test_extreme_examples():
    so5 = [(0, 2 / 7), (0, -1 / 14), (1 / 4, 3 / 28), (-1 / 4, 3 / 28)]
    assert rg.vertex_distance(rg.extreme_ppt(5, Kind.SO), so5) <= 1e-15
    assert rg.vertex_distance(rg.ppt_region(5, Kind.SO).vertices, so5) <= 1e-10
    sp4 = [(0, 1 / 3), (0, -1 / 5), (1 / 5, 1 / 5), (-1 / 5, 1 / 5)]
    assert rg.vertex_distance(rg.ppt_region(4, Kind.SP).vertices, sp4) <= 1e-10
    assert any(np.allclose(v, (1 / 3, 1 / 9)) for v in rg.ppt_region(4, Kind.SO).vertices)
    with pytest.raises(ValueError):
        rg.extreme_ppt(2, Kind.SO)


@given(so_dims)
def test_so_extreme_points_match(D):
    assert rg.vertex_distance(rg.ppt_region(D, Kind.SO).vertices, rg.extreme_ppt(D, Kind.SO)) <= 1e-10


@given(sp_dims)
def test_sp_extreme_points_match(D):
    assert rg.vertex_distance(rg.ppt_region(D, Kind.SP).vertices, rg.extreme_ppt(D, Kind.SP)) <= 1e-10


@given(st.one_of(so_dims.map(lambda d: (d, Kind.SO)), sp_dims.map(lambda d: (d, Kind.SP))))
def test_regions_convex_and_distinct(pair):
    D, kind = pair
    for reg in (rg.cp_region(D, kind), rg.ppt_region(D, kind)):
        assert reg.convexity_residual() <= 1e-12
        v = np.array(reg.vertices)
        gaps = np.abs(v[:, None] - v[None]).max(axis=2) + np.eye(len(v))
        assert gaps.min() > 1e-12
        assert reg.area > 0


def test_web_region():
    web = rg.web_region(5)
    expected = [(1 / 6, 1 / 6), (-1 / 6, 1 / 6), (-1 / 24, -1 / 24), (1 / 24, -1 / 24)]
    assert rg.vertex_distance(web.vertices, expected) <= 1e-15
    assert rg.contains(web, (0, 3 / 98)).inside and rg.contains(web, (0, 3 / 98)).margin > 0
    assert not rg.contains(web, (0, 1 / 6 + 0.01)).inside


@given(st.integers(3, 64))
def test_web_geometry(D):
    web = rg.web_region(D)
    right = [v for v in web.vertices if v[0] > 0]
    for a, b in right:
        assert abs((D + 1) * (D - 2) * b - D * (D + 1) * a + 2) <= 1e-9
    assert rg.vertex_distance(web.vertices, [(-a, b) for a, b in web.vertices]) <= 1e-15
    assert rg.vertex_distance(rg.intersect_halfplanes(rg.web_halfplanes(D)).vertices, web.vertices) <= 1e-10


def test_ppt2_examples():
    rep = rg.ppt2_verify(5, Kind.SO)
    assert rep.verdict and rep.named_ok and not rep.informational
    named = {n.name: n for n in rep.named}
    assert named["beta_1v"].closed_form[1] == pytest.approx(4 / 49)
    h1h1 = next(c for c in rep.compositions if c.pair == ("h1", "h1"))
    # alpha = 1/(D-1)^2, beta = (D-2)^2 / ((D+2)^2 (D-1)^2)
    assert h1h1.point == pytest.approx((1 / 16, 9 / 784))
    D = 5
    assert (D + 1) * (D - 2) * h1h1.point[1] - D * (D + 1) * h1h1.point[0] + 2 > 0
    assert any(np.allclose(c.point, (0, 3 / 98)) for c in rep.compositions)

    rep = rg.ppt2_verify(8, Kind.SP)
    assert rep.verdict and rep.named_ok
    h1h1 = next(c for c in rep.compositions if c.pair == ("h1", "h1"))
    assert h1h1.point == pytest.approx((1 / 81, 1 / 81))
    assert 1 / 81 < 1 / 63


@pytest.mark.parametrize("kind,dims", [(Kind.SO, range(5, 65)), (Kind.SP, range(6, 65, 2))])
def test_ppt2_sweep(kind, dims):
    for D in dims:
        rep = rg.ppt2_verify(D, kind)
        assert len(rep.compositions) == 10
        assert rep.verdict and rep.named_ok, (kind, D)
        assert min(c.margin for c in rep.compositions) >= 0


def test_ppt2_small_dims_informational():
    rep = rg.ppt2_verify(4, Kind.SO)
    assert rep.informational and not rep.verdict
    assert rg.ppt2_verify(4, Kind.SP).informational


def test_region_sweep_trends():
    areas = [e.ppt.area for e in rg.region_sweep([4, 8, 16], Kind.SO)]
    assert areas[0] > areas[1] > areas[2]
    big = [e.ppt.area for e in rg.region_sweep([16, 32], Kind.SP)]
    assert big[0] > big[1]
    so4, sp4 = rg.ppt_region(4, Kind.SO), rg.ppt_region(4, Kind.SP)
    assert rg.vertex_distance(so4.vertices, sp4.vertices) > 1e-3


@given(st.sampled_from([(3, Kind.SO), (6, Kind.SO), (2, Kind.SP), (6, Kind.SP)]), st.integers(0, 2**32 - 1))
def test_sampled_channels_are_cp(pair, seed):
    from cartanchan.channels import is_cp

    D, kind = pair
    out = rg.sample_cp_channels(D, kind, 5, seed)
    assert len(out) == 5 and all(is_cp(c) for c in out)
    assert out == rg.sample_cp_channels(D, kind, 5, seed)
