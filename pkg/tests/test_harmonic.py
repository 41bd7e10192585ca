import math

import numpy as np
import pytest

from disciter import harmonic
from disciter.errors import InvalidPointError
from disciter.harmonic import (SlitDiskDomain, arc_diameter,
                               arc_measure_from_diameter, hm_disk_arc,
                               hm_halfplane_interval, hm_wos, tail_hm_series,
                               tail_slit)
from disciter.maps import koebe_shift, iterate

WALKS = 2 * 10 ** 4  # module tests trade walks for speed; acceptance uses 1e5


class TestQuadrature:
    def test_half_circle_from_center(self):
        assert hm_disk_arc(0.0, 0.0, math.pi).value == pytest.approx(0.5, abs=1e-12)

    def test_center_matches_arc_formula(self):
        rng = np.random.default_rng(0)
        for _ in range(25):
            t1 = rng.uniform(0, 2 * math.pi)
            spread = rng.uniform(1e-3, math.pi)
            got = hm_disk_arc(0.0, t1, t1 + spread).value
            want = arc_measure_from_diameter(arc_diameter(t1, t1 + spread)).value
            assert got == pytest.approx(want, abs=1e-10)

    def test_degenerate_arc(self):
        assert hm_disk_arc(0.3, 1.0, 1.0).value == 0.0

    def test_kernel_monotone_toward_point(self):
        symmetric = (-0.5, 0.5)
        assert hm_disk_arc(0.5, *symmetric).value > hm_disk_arc(0.0, *symmetric).value

    def test_probability_measure(self):
        z = 0.4 - 0.3j
        total = hm_disk_arc(z, 0.0, 1.7).value + hm_disk_arc(z, 1.7, 2 * math.pi).value
        assert total == pytest.approx(1.0, abs=1e-10)

    def test_subordination_on_cayley(self):
        # disc arc <-> real interval under the upper Cayley chart; Moebius
        # equality of harmonic measures, quadrature vs closed form
        z = 0.2 + 0.1j
        t1, t2 = 2.0, 2.8  # arc away from the boundary point 1
        w = 1j * (1 + z) / (1 - z)
        a = complex(1j * (1 + np.exp(1j * t2)) / (1 - np.exp(1j * t2))).real
        b = complex(1j * (1 + np.exp(1j * t1)) / (1 - np.exp(1j * t1))).real
        lo, hi = min(a, b), max(a, b)
        assert hm_disk_arc(z, t1, t2).value == pytest.approx(
            hm_halfplane_interval(w, lo, hi), abs=1e-9)

    def test_bad_interval_rejected(self):
        with pytest.raises(InvalidPointError):
            hm_disk_arc(0.0, 1.0, 0.5)


class TestSlitDomain:
    def test_collinear_collapse(self):
        dom = SlitDiskDomain(np.linspace(0.5, 0.9, 40))
        assert len(dom.vertices) == 2

    def test_distance_to_segment(self):
        dom = SlitDiskDomain([0.0, 0.5])
        assert dom.distance(np.array([0.25 + 0.1j]))[0] == pytest.approx(0.1)
        assert dom.distance(np.array([-0.2 + 0.0j]))[0] == pytest.approx(0.2)

    def test_empty(self):
        dom = SlitDiskDomain([])
        assert dom.empty
        assert np.isinf(dom.distance(np.array([0.1 + 0.1j]))[0])

    def test_outside_disc_rejected(self):
        with pytest.raises(InvalidPointError):
            SlitDiskDomain([0.5, 1.5])

    def test_self_intersection_rejected(self):
        with pytest.raises(InvalidPointError):
            SlitDiskDomain([0.0, 0.5, 0.25 + 0.2j, 0.25 - 0.2j])


class TestWos:
    def test_matches_quadrature_no_slit(self):
        z = 0.3 + 0.2j
        t1, t2 = 0.7, 2.4
        est = hm_wos(SlitDiskDomain([]), z, target="circle", arc=(t1, t2),
                     n_walks=WALKS, seed=42)
        ref = hm_disk_arc(z, t1, t2).value
        assert abs(est.value - ref) <= 3.0 * est.se
        assert est.se == pytest.approx(
            math.sqrt(est.value * (1 - est.value) / (WALKS - est.discards)), rel=1e-12)

    def test_start_adjacent_to_slit_absorbs(self):
        dom = SlitDiskDomain([0.3, 0.6])
        est = hm_wos(dom, 0.45 + 0.5e-4 * 1j, target="slit", n_walks=100,
                     eps=1e-4, seed=1)
        assert est.value == 1.0

    def test_solynin_floor_radial_slit(self):
        ell = 0.5
        dom = SlitDiskDomain([1.0 - ell, 1.0 - 1e-9])
        est = hm_wos(dom, 0.0, target="slit", n_walks=WALKS, seed=3)
        floor = arc_measure_from_diameter(ell - 1e-9).value
        assert est.value >= floor - 3.0 * est.se

    def test_complementary_parts_sum_to_one(self):
        dom = SlitDiskDomain([0.2, 0.6])
        a = hm_wos(dom, -0.3, target="slit", n_walks=WALKS, seed=5)
        b = hm_wos(dom, -0.3, target="circle", n_walks=WALKS, seed=5)
        assert a.value + b.value == pytest.approx(1.0, abs=1e-12)

    def test_monotonicity_removing_slit(self):
        # removing the slit cannot decrease the arc's measure (paired seeds)
        arc = (2.0, 2.9)
        z = -0.2 + 0.1j
        with_slit = hm_wos(SlitDiskDomain([0.2, 0.7]), z, target="circle",
                           arc=arc, n_walks=WALKS, seed=11)
        without = hm_wos(SlitDiskDomain([]), z, target="circle", arc=arc,
                         n_walks=WALKS, seed=11)
        assert with_slit.value <= without.value + 3.0 * (with_slit.se + without.se)

    def test_reproducible_bitwise(self):
        dom = SlitDiskDomain([0.4, 0.8])
        a = hm_wos(dom, 0.0, target="slit", n_walks=5000, seed=77)
        b = hm_wos(dom, 0.0, target="slit", n_walks=5000, seed=77)
        assert a.value == b.value and a.se == b.se

    def test_discard_accounting(self):
        dom = SlitDiskDomain([0.4, 0.8])
        est = hm_wos(dom, 0.0, target="slit", n_walks=2000, cap=4, seed=1)
        assert est.discards > 0
        assert est.flagged


class TestTail:
    def test_tail_slit_is_single_segment(self):
        slit = tail_slit(koebe_shift(), 0.0, 10)
        assert len(slit.vertices) == 2
        z10 = (math.sqrt(11.0) - 1.0) / (math.sqrt(11.0) + 1.0)
        assert slit.vertices[0] == pytest.approx(z10, abs=1e-12)
        assert abs(slit.vertices[1] - 1.0) < 2e-6

    def test_series_chain(self):
        res = tail_hm_series(koebe_shift(), 0.0, [10, 100], n_walks=WALKS, seed=13)
        assert res.floor_holds
        assert res.max_omega_sqrt_n <= 5.0
        assert np.all(res.omega > 0.0) and np.all(res.omega < 1.0)
        assert np.all(res.se < 0.01)

    def test_final_rate_check(self):
        # |f^n(0) - 1| sqrt(n) -> 2 for the slit-plane translation model
        orbit = iterate(koebe_shift(), 0.0, 10 ** 6)
        vals = [float(orbit.dist_to_tau(n)) * math.sqrt(n) for n in (10 ** 4, 10 ** 6)]
        assert vals[-1] == pytest.approx(2.0, abs=0.01)
