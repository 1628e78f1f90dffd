"""
Tests for unit disk primitives: pseudo-distance, Blaschke factors and arc measures
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from interpiq.geometry import (
    BoundaryAngle,
    DiskPoint,
    LogModulus,
    arc_measure,
    log_abs_factors,
    log_blaschke_at,
    log_blaschke_many,
    mobius_factor,
    normalize_angle,
    phi_all,
    phi_lambda,
    poisson_at_one,
    pseudo_distance,
    symmetric_arc_measure,
)
from interpiq.harmonic.poisson import quadrature_arc_measure

pytestmark = [pytest.mark.unit, pytest.mark.geometry]


def disk_points(radius=0.95):
    """Complex numbers with |z| ≤ radius"""
    return st.builds(
        lambda r, t: r * complex(math.cos(t), math.sin(t)),
        st.floats(min_value=0.0, max_value=radius),
        st.floats(min_value=0.0, max_value=2 * math.pi),
    )


class TestDiskTypes:
    """Test point and angle value types"""

    def test_disk_point_rejects_boundary(self):
        """Points on or outside the circle are rejected"""
        with pytest.raises(ValueError):
            DiskPoint(1.0, 0.0)
        with pytest.raises(ValueError):
            DiskPoint(float("nan"), 0.0)

    def test_disk_point_from_polar(self):
        p = DiskPoint.from_polar(0.5, math.pi / 2)
        assert p.modulus == pytest.approx(0.5)
        assert p.value == pytest.approx(0.5j)
        assert p.angle.theta == pytest.approx(math.pi / 2)

    def test_boundary_angle_normalized(self):
        """Angles are stored in [0, 2π)"""
        assert BoundaryAngle(-math.pi / 2).theta == pytest.approx(1.5 * math.pi)
        assert BoundaryAngle(2 * math.pi).theta == 0.0
        assert normalize_angle(5 * math.pi) == pytest.approx(math.pi)

    def test_log_modulus_clamped(self):
        """Rounding never pushes a log-modulus above 0"""
        assert LogModulus(1e-17).value == 0.0
        assert LogModulus(-math.inf).flag == "neg_infinity"
        assert not LogModulus(-math.inf).is_finite
        with pytest.raises(ValueError):
            LogModulus(float("nan"))


class TestMobius:
    """Test elementary Blaschke factors and the pseudo-distance"""

    def test_factor_at_zero_is_identity(self):
        assert mobius_factor(0.0, 0.3 + 0.2j) == 0.3 + 0.2j

    def test_factor_vanishes_at_its_point(self):
        assert abs(mobius_factor(0.4 - 0.3j, 0.4 - 0.3j)) == 0.0

    def test_factor_unimodular_on_circle(self):
        lam = 0.7 * np.exp(0.4j)
        for theta in np.linspace(0.0, 2 * math.pi, 17):
            assert abs(mobius_factor(lam, np.exp(1j * theta))) == pytest.approx(1.0, rel=1e-12)

    def test_pseudo_distance_self(self):
        assert pseudo_distance(0.5j, 0.5j) == 0.0

    @given(disk_points(), disk_points())
    @settings(max_examples=50, deadline=None)
    def test_pseudo_distance_symmetric_and_below_one(self, z, w):
        """ρ is symmetric and takes values in [0, 1)"""
        rho = pseudo_distance(z, w)
        assert 0.0 <= rho < 1.0
        assert rho == pytest.approx(pseudo_distance(w, z), rel=1e-12, abs=1e-15)

    @given(disk_points(0.9), disk_points(0.9), disk_points(0.9))
    @settings(max_examples=50, deadline=None)
    def test_pseudo_distance_mobius_invariant(self, a, z, w):
        """Disk automorphisms preserve ρ"""
        before = pseudo_distance(z, w)
        after = pseudo_distance(mobius_factor(a, z), mobius_factor(a, w))
        assert after == pytest.approx(before, rel=1e-9, abs=1e-12)

    def test_log_factor_matches_direct_formula(self):
        """Both branches of the stable formula agree with log ρ"""
        mu = np.array([0.1, 0.5j, 0.999 * np.exp(0.3j)])
        z = 0.998 * np.exp(0.31j)
        logs = log_abs_factors(mu, z)
        direct = [math.log(pseudo_distance(m, z)) for m in mu]
        assert logs == pytest.approx(direct, rel=1e-10)

    def test_log_factor_coincidence(self):
        assert log_abs_factors(np.array([0.5]), 0.5)[0] == -math.inf


class TestBlaschke:
    """Test log-domain Blaschke products and the density φ_Λ"""

    def test_empty_product(self):
        assert log_blaschke_at([], 0.3).value == 0.0

    def test_skip_equals_shortened_list(self, explicit_seq):
        """Skipping an index is bit-identical to removing the point"""
        z = 0.1 + 0.2j
        skipped = log_blaschke_at(explicit_seq, z, skip=1).value
        shortened = log_blaschke_at(explicit_seq.without(1), z).value
        assert skipped == shortened

    def test_skip_out_of_range(self, explicit_seq):
        with pytest.raises(IndexError):
            log_blaschke_at(explicit_seq, 0.0, skip=3)

    def test_phi_two_points(self):
        """For two points φ_Λ = -log ρ at both"""
        points = [0.5, -0.5]
        expected = -math.log(pseudo_distance(0.5, -0.5))
        assert phi_all(points) == pytest.approx([expected, expected], rel=1e-13)

    def test_phi_repeated_point_is_infinite(self):
        assert phi_lambda([0.3, 0.3, 0.1j], 0) == math.inf

    def test_phi_single_point(self):
        assert phi_lambda([0.7j], 0) == 0.0

    def test_phi_index_error(self):
        with pytest.raises(IndexError):
            phi_lambda([0.1], 5)

    def test_phi_all_parallel_is_deterministic(self, radial_seq):
        """Thread count does not change a single bit"""
        serial = phi_all(radial_seq, parallelism=1)
        points = np.concatenate([radial_seq.complex_points, 0.5 * np.exp(1j * np.linspace(0.1, 6.0, 60))])
        assert np.array_equal(phi_all(points, parallelism=1), phi_all(points, parallelism=4))
        assert np.all(serial >= 0.0)

    def test_many_matches_single(self, explicit_seq):
        zs = [0.0, 0.2 + 0.1j, -0.4j]
        many = log_blaschke_many(explicit_seq, zs)
        single = [log_blaschke_at(explicit_seq, z).value for z in zs]
        assert many == pytest.approx(single, rel=1e-13)

    def test_exact_defects_near_boundary(self, radial_seq):
        """Points within 1e-9 of the circle still give finite positive densities"""
        phi = phi_all(radial_seq)
        assert np.all(np.isfinite(phi))
        assert phi[-1] > 0.0


class TestArcs:
    """Test closed-form harmonic measure"""

    def test_half_circle_at_origin(self):
        assert float(arc_measure(0.0, 0.0, math.pi)) == pytest.approx(0.5)

    def test_quarter_circle_at_origin(self):
        assert float(arc_measure(0.0, 0.0, 0.5 * math.pi)) == pytest.approx(0.25)

    def test_full_and_empty_arcs(self):
        assert float(arc_measure(0.3j, 0.0, 2 * math.pi)) == 1.0
        assert float(arc_measure(0.3j, 1.0, 1.0)) == 0.0

    @pytest.mark.parametrize("z", [0.5, 0.9 * np.exp(1.0j), -0.99 + 0.0j, 0.3 - 0.6j])
    def test_closed_form_matches_quadrature(self, z):
        """The chord-angle formula agrees with integrating the Poisson kernel"""
        for t1, t2 in [(0.2, 1.4), (-0.5, 0.5), (2.0, 5.5)]:
            assert float(arc_measure(z, t1, t2)) == pytest.approx(quadrature_arc_measure(z, t1, t2), abs=1e-9)

    def test_quadrature_near_the_circle(self):
        """The kernel peak is passed to the integrator as a breakpoint"""
        z = (1.0 - 1e-6) * np.exp(0.7j)
        value = quadrature_arc_measure(z, 0.5, 0.9)
        assert isinstance(value, float)
        assert value == pytest.approx(float(arc_measure(z, 0.5, 0.9)), abs=1e-9)
        assert value == pytest.approx(1.0, abs=1e-5)

    def test_complementary_arcs_sum_to_one(self):
        z = 0.8 * np.exp(2.0j)
        total = float(arc_measure(z, 0.3, 2.5)) + float(arc_measure(z, 2.5, 0.3 + 2 * math.pi))
        assert total == pytest.approx(1.0, abs=1e-12)

    def test_symmetric_arc(self):
        assert float(symmetric_arc_measure(0.0, 0.25 * math.pi)) == pytest.approx(0.25)

    def test_poisson_at_one(self):
        assert float(poisson_at_one(0.0)) == pytest.approx(1.0)
        assert float(poisson_at_one(0.5)) == pytest.approx(3.0)
