import math

import numpy as np
import pytest

from fadingdpc.bc_regions import (BcConfig, RegionCurve, RegionPoint, dpc_csit_point, phi, sweep_region,
                                  thm3_point, thm4_point, time_share_curve)
from fadingdpc.bounds import PowerConfig, lattice_inner, outer_bound
from fadingdpc.errors import ConfigurationError
from fadingdpc.fading import FadingSpec

N_MC = 20_000
GRID = tuple(np.linspace(0, 1, 11))


def siso(user1=None, user2=None, Px=1.0, Pw1=1.0, Pw2=1.0, grid=GRID, **kw):
    return BcConfig(1, 1, 1, Px, Pw1, Pw2, user1 or FadingSpec.deterministic([[1]]),
                    user2 or FadingSpec.rayleigh(1, 1), grid, **kw)


def fig5():
    return BcConfig(2, 2, 4, 1.0, 1.0, 0.01, FadingSpec.deterministic(np.eye(2)), FadingSpec.rayleigh(2, 4), GRID)


def fig7():
    nak = FadingSpec.nakagami(2.0, 2)
    return BcConfig(1, 2, 2, 1.0, 1.0, 0.01, nak, nak, GRID)


class TestPhi:
    def test_examples(self):
        bc = siso()
        assert np.allclose(phi(np.array([[1.0]]), 1.0, bc), [[1.0]])
        assert np.allclose(phi(np.array([[1.0]]), 0.5, bc), [[1.5]])
        assert np.allclose(phi(np.zeros((2, 2)), 0.3, fig5()), np.eye(2))

    def test_alpha_range(self):
        with pytest.raises(ConfigurationError):
            phi(np.array([[1.0]]), 1.5, siso())


class TestConfig:
    def test_validation(self):
        with pytest.raises(ConfigurationError):
            siso(grid=(0.5, 0.2))
        with pytest.raises(ConfigurationError):
            siso(grid=(0.0, 1.2))
        with pytest.raises(ConfigurationError):
            BcConfig(2, 2, 2, 1, 1, 1, FadingSpec.rayleigh(1, 2), FadingSpec.rayleigh(2, 2))
        with pytest.raises(ConfigurationError):
            RegionPoint(0.5, -0.1, 0.0)
        with pytest.raises(ConfigurationError):
            RegionCurve("bogus", (RegionPoint(0, 0, 0),))
        with pytest.raises(ConfigurationError):
            sweep_region("bogus", siso())


class TestThm3:
    def test_plug_in(self):
        assert thm3_point(0.5, siso(), N_MC).R1 == pytest.approx(math.log2(4 / 3))

    def test_endpoints(self):
        bc = fig5()
        p0, p1 = thm3_point(0.0, bc, N_MC), thm3_point(1.0, bc, N_MC)
        assert p0.R1 == 0.0 and p1.R2 == 0.0
        assert p0.R2 == lattice_inner(PowerConfig(1.0, 0, 0.01, 2, 4), bc.user2, N_MC).mean
        assert p1.R1 == pytest.approx(2 * math.log2(1 + 0.5), abs=1e-14)
        assert p1.R1 == outer_bound(PowerConfig(1.0, 0, 1.0, 2, 2), bc.user1, N_MC).mean

    def test_needs_fixed_user1(self):
        with pytest.raises(ConfigurationError):
            thm3_point(0.5, fig7(), N_MC)


class TestThm4:
    def test_consistency_with_thm3(self):
        bc = siso()
        assert thm4_point(1.0, bc, N_MC).R1 == pytest.approx(1.0)
        for a in (0.2, 0.5, 0.9):
            assert thm4_point(a, bc, N_MC).R1 == pytest.approx(thm3_point(a, bc, N_MC).R1, rel=1e-12)

    def test_endpoints_are_single_user_lattice_rates(self):
        bc = fig7()
        assert thm4_point(0.0, bc, N_MC).R1 == 0.0
        r1 = thm4_point(1.0, bc, N_MC).R1
        assert r1 == lattice_inner(PowerConfig(1.0, 0, 1.0, 1, 2), bc.user1, N_MC).mean

    def test_nakagami_point_inside_csit_region(self):
        bc = fig7()
        p, q = thm4_point(0.5, bc, N_MC), dpc_csit_point(0.5, bc, N_MC)
        assert p.R1 <= q.R1 and p.R2 <= q.R2

    def test_as_printed_flag_changes_only_when_noise_is_not_unit(self):
        nak = FadingSpec.nakagami(2.0, 2)
        unit = BcConfig(1, 2, 2, 1.0, 1.0, 0.01, nak, nak, GRID, corrected_thm4=False)
        assert thm4_point(0.5, unit, N_MC).R1 == pytest.approx(thm4_point(0.5, fig7(), N_MC).R1, rel=1e-12)
        loud = BcConfig(1, 2, 2, 1.0, 0.1, 0.01, nak, nak, GRID, corrected_thm4=False)
        fixed = BcConfig(1, 2, 2, 1.0, 0.1, 0.01, nak, nak, GRID)
        assert thm4_point(0.5, loud, N_MC).R1 > thm4_point(0.5, fixed, N_MC).R1


class TestDpcCsit:
    def test_endpoints(self):
        bc = fig7()
        p0, p1 = dpc_csit_point(0.0, bc, N_MC), dpc_csit_point(1.0, bc, N_MC)
        assert p0.R1 == 0.0 and p1.R2 == 0.0
        assert p0.R2 == outer_bound(PowerConfig(1.0, 0, 0.01, 1, 2), bc.user2, N_MC).mean
        assert p1.R1 == outer_bound(PowerConfig(1.0, 0, 1.0, 1, 2), bc.user1, N_MC).mean


@pytest.mark.parametrize("make,mode", [(fig5, "thm3"), (fig7, "thm4"), (lambda: siso(), "thm3")],
                         ids=["mimo-fixed", "nakagami", "siso"])
class TestCurves:
    def test_dominance_and_monotonicity(self, make, mode):
        bc = make()
        lat = sweep_region(mode, bc, N_MC)
        csit = sweep_region("dpc_csit", bc, N_MC)
        assert len(lat.points) == len(GRID)
        assert np.all(csit.column("R1") >= lat.column("R1"))
        assert np.all(csit.column("R2") >= lat.column("R2"))
        for curve in (lat, csit):
            assert np.all(np.diff(curve.column("R1")) >= 0)
            assert np.all(np.diff(curve.column("R2")) <= 0)
            assert np.all(curve.column("R1") >= 0) and np.all(curve.column("R2") >= 0)

    def test_time_share_is_the_chord(self, make, mode):
        bc = make()
        lat = sweep_region(mode, bc, N_MC)
        ts = time_share_curve(bc, N_MC)
        r1_max, r2_max = lat.points[-1].R1, lat.points[0].R2
        a = ts.column("alpha")
        assert np.array_equal(ts.column("R1"), a * r1_max)
        assert np.array_equal(ts.column("R2"), (1 - a) * r2_max)
        mid = ts.points[5]
        assert (mid.R1, mid.R2) == pytest.approx((r1_max / 2, r2_max / 2))


def test_three_point_grid():
    assert len(sweep_region("thm3", siso(grid=(0, 0.5, 1)), 1000).points) == 3


def test_sweep_is_deterministic():
    a = sweep_region("thm4", fig7(), 5000)
    b = sweep_region("thm4", fig7(), 5000)
    assert a == b
