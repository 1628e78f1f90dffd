"""
Tests for Orlicz shapes, conjugates, norms and growth-condition probes
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from interpiq.harmonic.weights import ArcWeight
from interpiq.orlicz import (
    ConjugateShape,
    ExpShape,
    LogLogShape,
    PowerShape,
    PsiShape,
    TableShape,
    asymptotic_ratio,
    constant_dual_norm,
    delta2_probe,
    fnorm,
    holder_pairing,
    indicator_norm,
    inverse_growth,
    is_strongly_convex,
    luxemburg_norm,
    modular,
    nabla2_probe,
    orlicz_norm,
    pointeval_bound,
    shape_from_dict,
    shape_from_spec,
    tilde_delta2_probe,
)
from interpiq.orlicz.conditions import probe_grid
from interpiq.utils.numerics import ConvergenceError
from interpiq.utils.validators import ConfigError

pytestmark = [pytest.mark.unit, pytest.mark.orlicz]


class TestShapes:
    """Test shape families and the splice below t0"""

    def test_power(self, power2):
        assert power2.value(3.0) == 4.5
        assert power2.derivative(3.0) == 3.0
        assert power2.inverse(4.5) == pytest.approx(3.0)
        assert power2.young_gap(3.0) == pytest.approx(4.5)

    def test_power_rejects_small_exponent(self):
        with pytest.raises(ValueError):
            PowerShape(0.5)

    def test_psi_splice(self, psi1):
        """Below t0 = e² the shape is the line 2t; above it t ln t"""
        assert psi1.t0 == pytest.approx(math.exp(2.0))
        assert psi1.value(1.0) == pytest.approx(2.0)
        assert psi1.value(math.exp(3.0)) == pytest.approx(3.0 * math.exp(3.0))
        assert psi1.derivative(math.exp(3.0)) == pytest.approx(4.0)
        assert psi1.derivative(1.0) < psi1.derivative(psi1.t0)

    def test_psi_inverse(self, psi1):
        assert psi1.inverse(10.0) == pytest.approx(5.0)
        assert psi1.inverse(3.0 * math.exp(3.0)) == pytest.approx(math.exp(3.0), rel=1e-12)
        assert psi1.inverse(0.0) == 0.0

    def test_vectorized(self, psi1):
        t = np.array([0.0, 1.0, 10.0])
        out = psi1.value(t)
        assert isinstance(out, np.ndarray)
        assert out.tolist() == pytest.approx([psi1.value(0.0), psi1.value(1.0), psi1.value(10.0)])

    def test_negative_argument(self, psi1):
        with pytest.raises(ValueError):
            psi1.value(-1.0)

    @given(st.floats(min_value=1e-6, max_value=1e9))
    @settings(max_examples=60, deadline=None)
    def test_inverse_round_trip(self, u):
        """φ(φ⁻¹(u)) = u for the spliced ψ_1"""
        shape = PsiShape(1.0)
        assert shape.value(shape.inverse(u)) == pytest.approx(u, rel=1e-10)

    def test_loglog_splice(self):
        shape = LogLogShape(1.0)
        assert shape.t0 == pytest.approx(math.exp(math.exp(2.0)))
        assert shape.value(shape.t0) == pytest.approx(shape.t0 * 2.0)

    def test_exp(self):
        shape = ExpShape(1.0)
        assert shape.value(1.0) == pytest.approx(math.e - 1.0)
        assert shape.inverse(math.e - 1.0) == pytest.approx(1.0)
        assert shape.t_max == 700.0

    def test_table(self):
        shape = TableShape([0.0, 1.0, 2.0], [0.0, 1.0, 3.0])
        assert shape.value(1.5) == pytest.approx(2.0)
        assert shape.value(3.0) == pytest.approx(5.0)
        assert shape.derivative_bound == 2.0
        assert not shape.is_superlinear()

    @pytest.mark.parametrize("ts,values", [
        ([0.0, 1.0, 2.0], [0.0, 2.0, 3.0]),
        ([1.0, 2.0], [0.0, 1.0]),
        ([0.0, 1.0, 1.0], [0.0, 1.0, 2.0]),
    ])
    def test_table_rejects_invalid(self, ts, values):
        with pytest.raises(ValueError):
            TableShape(ts, values)

    def test_composed(self, power2):
        """Φ(x) = φ(log⁺ x)"""
        assert power2.composed(0.5) == 0.0
        assert power2.composed(math.e ** 2) == pytest.approx(2.0)

    def test_superlinear(self, psi1, power2, identity_shape):
        assert psi1.is_superlinear()
        assert power2.is_superlinear()
        assert not identity_shape.is_superlinear()


class TestConjugate:
    """Test the numeric complementary function"""

    def test_power_two_is_self_conjugate(self, power2):
        conj = power2.conjugate()
        assert isinstance(conj, ConjugateShape)
        assert conj.value(3.0) == pytest.approx(4.5, rel=1e-10)
        assert conj.maximizer(3.0) == pytest.approx(3.0, rel=1e-10)

    def test_power_conjugate_exponent(self):
        """(t³/3)* = s^{3/2}/(3/2)"""
        conj = PowerShape(3.0).conjugate()
        assert conj.value(4.0) == pytest.approx(4.0 ** 1.5 / 1.5, rel=1e-10)

    def test_cached(self, psi1):
        assert psi1.conjugate() is psi1.conjugate()

    def test_built_with_the_shape(self):
        """The conjugate table exists as soon as the shape does"""
        shape = PsiShape(1.0)
        assert isinstance(shape._conjugate, ConjugateShape)
        assert shape.conjugate() is shape._conjugate
        assert shape._conjugate.base is shape

    def test_conjugate_of_conjugate_on_demand(self, power2):
        conj = power2.conjugate()
        assert conj._conjugate is None
        twice = conj.conjugate()
        assert twice is conj.conjugate()
        assert twice.value(2.0) == pytest.approx(2.0, rel=1e-6)

    def test_linear_shape_domain(self, identity_shape):
        """φ(t) = t has φ* = 0 on [0, 1] and +∞ beyond"""
        conj = identity_shape.conjugate()
        assert conj.value(0.5) == 0.0
        with pytest.raises(ValueError):
            conj.value(2.0)

    def test_fenchel_equality(self, psi1):
        """φ*(φ′(x)) = x φ′(x) - φ(x)"""
        conj = psi1.conjugate()
        for x in (20.0, 50.0, 1e4):
            assert conj.value(psi1.derivative(x)) == pytest.approx(psi1.young_gap(x), rel=1e-9)

    @given(st.floats(min_value=0.0, max_value=100.0), st.floats(min_value=0.0, max_value=10.0))
    @settings(max_examples=60, deadline=None)
    def test_young_inequality(self, t, s):
        """st ≤ φ(t) + φ*(s)"""
        shape = PsiShape(1.0)
        conj = shape.conjugate()
        assert s * t <= shape.value(t) + conj.value(s) + 1e-9 * (1.0 + s * t)

    def test_table_gap_small(self, psi1):
        assert 0.0 <= psi1.conjugate().table_gap < 0.1


class TestShapeSpecs:
    """Test shape spec parsing"""

    @pytest.mark.parametrize("spec,family", [
        ("power:2", "power"),
        ("power:2,1", "power"),
        ("psi:1", "psi"),
        ("loglog:0.5", "loglog"),
        ("exp:2", "exp"),
        ("exp", "exp"),
        ("identity", "power"),
        ("table:0/0,1/1,2/3", "table"),
    ])
    def test_valid(self, spec, family):
        assert shape_from_spec(spec).family == family

    def test_splice_argument(self):
        assert shape_from_spec("power:2,1").t0 == 1.0

    @pytest.mark.parametrize("spec", ["psi", "psi:0", "power:0.5", "cubic:1", "table:0/0,1", "table:0/0,1/2,2/3"])
    def test_invalid(self, spec):
        with pytest.raises(ConfigError) as info:
            shape_from_spec(spec)
        assert info.value.field == "shape"

    @pytest.mark.parametrize("spec", ["power:2", "psi:1", "loglog:1", "exp:2", "table:0/0,1/1,2/3"])
    def test_dict_round_trip(self, spec):
        shape = shape_from_spec(spec)
        restored = shape_from_dict(shape.to_dict())
        for t in (0.5, 3.0, 40.0):
            assert restored.value(t) == shape.value(t)

    def test_describe(self, psi1):
        assert psi1.describe() == "psi:1"


class TestNorms:
    """Test modulars and norms on the circle"""

    def test_indicator_oracle(self, psi1):
        """‖χ_E‖ = 1/φ⁻¹(1/m(E)); for ψ_1 and m = 0.1 this is 1/5"""
        w = ArcWeight.centered_indicator(0.1)
        assert luxemburg_norm(psi1, w) == pytest.approx(0.2, rel=1e-8)
        assert indicator_norm(psi1, 0.1) == pytest.approx(0.2, rel=1e-12)

    def test_constant_weight(self, power2):
        w = ArcWeight.constant(3.0)
        assert modular(power2, w) == pytest.approx(4.5)
        assert luxemburg_norm(power2, w) == pytest.approx(3.0 / math.sqrt(2.0), rel=1e-9)
        assert orlicz_norm(power2, w) == pytest.approx(3.0 * math.sqrt(2.0), rel=1e-8)

    def test_luxemburg_feasible(self, psi1, quarter_arc):
        """The returned t always satisfies J(w/t) ≤ 1"""
        w = quarter_arc.scaled(7.0)
        t = luxemburg_norm(psi1, w)
        assert modular(psi1, w.scaled(1.0 / t)) <= 1.0

    def test_homogeneous(self, psi1, quarter_arc):
        single = luxemburg_norm(psi1, quarter_arc)
        assert luxemburg_norm(psi1, quarter_arc.scaled(2.0)) == pytest.approx(2.0 * single, rel=1e-9)

    def test_amemiya_between_one_and_two_luxemburg(self, psi1, quarter_arc):
        lux = luxemburg_norm(psi1, quarter_arc)
        amemiya, k = orlicz_norm(psi1, quarter_arc, return_k=True)
        assert lux * (1.0 - 1e-9) <= amemiya <= 2.0 * lux * (1.0 + 1e-9)
        assert k > 0.0

    def test_zero_weight(self, psi1):
        zero = ArcWeight.constant(0.0)
        assert modular(psi1, zero) == 0.0
        assert luxemburg_norm(psi1, zero) == 0.0
        assert orlicz_norm(psi1, zero) == 0.0
        assert fnorm(psi1, zero) == 0.0

    def test_fnorm_defining_property(self, power2):
        """J_Φ(f/t) ≤ t at the returned t, with Φ = φ∘log⁺"""
        values, masses = np.array([math.e ** 2, 1.0]), np.array([0.5, 0.5])
        t = fnorm(power2, values, masses)
        assert t > 0.0
        assert float(np.sum(masses * power2.composed(values / t))) <= t * (1.0 + 1e-12)

    def test_explicit_samples(self, power2):
        assert modular(power2, [2.0, 4.0], [0.25, 0.75]) == pytest.approx(0.25 * 2.0 + 0.75 * 8.0)
        with pytest.raises(ValueError):
            modular(power2, [1.0, 2.0], [1.0])
        with pytest.raises(ValueError):
            modular(power2, [1.0, 2.0])

    def test_iteration_cap(self, psi1, quarter_arc):
        with pytest.raises(ConvergenceError):
            luxemburg_norm(psi1, quarter_arc, max_iter=1)

    def test_pointeval_bound(self, psi1):
        assert pointeval_bound(psi1, 1.0, 0.5) == pytest.approx(1.0)
        with pytest.raises(ValueError):
            pointeval_bound(psi1, 1.0, 1.0)
        with pytest.raises(ValueError):
            pointeval_bound(psi1, 0.0, 0.5)

    def test_inverse_growth(self, psi1, power2):
        assert inverse_growth(power2, 8.0) == pytest.approx(4.0)
        u = 1e12
        assert psi1.value(inverse_growth(psi1, u)) == pytest.approx(u, rel=1e-9)
        assert inverse_growth(psi1, 0.0) == 0.0
        with pytest.raises(ValueError):
            inverse_growth(psi1, -1.0)

    def test_asymptotic_ratio(self, psi1, power2):
        """φ⁻¹(u) approaches its leading-order model from above for ψ"""
        assert asymptotic_ratio(power2, 50.0) == pytest.approx(1.0, rel=1e-12)
        early, late = asymptotic_ratio(psi1, 1e6), asymptotic_ratio(psi1, 1e12)
        assert 1.0 < late < early

    def test_holder_pairing(self):
        assert holder_pairing([1.0, 2.0], [3.0, 4.0], [0.5, 0.5]) == pytest.approx(5.5)

    def test_indicator_norm_domain(self, psi1):
        with pytest.raises(ValueError):
            indicator_norm(psi1, 0.0)

    def test_constant_dual_norm(self, power2):
        assert constant_dual_norm(power2, "orlicz") == pytest.approx(math.sqrt(2.0))
        assert constant_dual_norm(power2, "luxemburg") == pytest.approx(1.0 / math.sqrt(2.0), rel=1e-9)
        assert constant_dual_norm(power2, "sup") == 1.0
        with pytest.raises(ValueError):
            constant_dual_norm(power2, "l2")


class TestConditions:
    """Test growth-condition probes"""

    def test_power_delta2(self, power2):
        result = delta2_probe(power2)
        assert result.holds
        assert result.constants["M"] == pytest.approx(4.0, rel=1e-9)
        assert result.constants["K"] == 0.0

    def test_exp_fails_delta2(self):
        result = delta2_probe(ExpShape(1.0))
        assert not result.holds
        assert result.constants == {}
        assert result.witness is not None

    def test_power_nabla2(self, power2):
        result = nabla2_probe(power2)
        assert result.holds
        assert result.constants["d"] == 2.0

    @pytest.mark.parametrize("spec", ["identity", "psi:1"])
    def test_nearly_linear_fails_nabla2(self, spec):
        result = nabla2_probe(shape_from_spec(spec))
        assert not result.holds
        assert result.witness is not None

    def test_exp_tilde_delta2(self):
        """e^t - 1 fails Δ₂ but tolerates shifts"""
        result = tilde_delta2_probe(ExpShape(1.0))
        assert result.holds
        assert result.constants["M"] < 20.0
        assert result.constants["K"] > 0.0

    def test_strong_convexity(self, psi1, power2, identity_shape):
        assert is_strongly_convex(psi1)
        assert is_strongly_convex(power2)
        assert not is_strongly_convex(identity_shape)

    def test_probe_range_validation(self):
        with pytest.raises(ValueError):
            probe_grid((5.0, 1.0))

    def test_result_dict(self, power2):
        data = delta2_probe(power2, (1.0, 100.0)).to_dict()
        assert data["condition"] == "delta2"
        assert data["grid"] == [1.0, 100.0]
