"""
Tests for sequence generators, truncation diagnostics and tail control
"""

import json
import math

import numpy as np
import pytest

from interpiq.geometry import phi_lambda, pseudo_distance
from interpiq.sequences import (
    GeneratedSequence,
    Section6Generator,
    TailEstimate,
    blaschke_sum,
    build_sequence,
    far_field_estimate,
    gen_perturbed_pairs,
    gen_radial,
    gen_section6,
    index_of,
    perturbed_pair_residuals,
    separation_constant,
    stage_blaschke_sum,
    stage_count,
    stage_points,
    stagewise_phi,
    tail_bound,
)
from interpiq.sequences.section6 import first_stage
from interpiq.utils.validators import ConfigError

pytestmark = [pytest.mark.unit, pytest.mark.geometry]


class TestGeneratedSequence:
    """Test the truncation container"""

    def test_rejects_points_outside_disk(self):
        with pytest.raises(ValueError):
            GeneratedSequence.from_points([0.5, 1.0])

    def test_rejects_nonpositive_defects(self):
        with pytest.raises(ValueError):
            GeneratedSequence(np.array([0.5]), defects=np.array([0.0]))

    def test_rejects_mismatched_metadata(self):
        with pytest.raises(ValueError):
            GeneratedSequence(np.array([0.5, 0.6]), stages=np.array([1]))

    def test_arrays_are_read_only(self, radial_seq):
        with pytest.raises(ValueError):
            radial_seq.complex_points[0] = 0.0

    def test_to_frame_columns(self, radial_seq):
        frame = radial_seq.to_frame()
        assert list(frame.columns) == ["re", "im", "stage"]
        assert len(frame) == 30
        assert frame["stage"].tolist() == list(range(1, 31))

    def test_dict_round_trip(self, section6_seq):
        """Serialized sequences restore points, defects and stages"""
        restored = GeneratedSequence.from_dict(json.loads(json.dumps(section6_seq.to_dict())))
        assert np.array_equal(restored.complex_points, section6_seq.complex_points)
        assert np.array_equal(restored.defects, section6_seq.defects)
        assert restored.generator == "section6"

    def test_subset_keeps_order_and_metadata(self, radial_seq):
        part = radial_seq.subset([4, 1], generator="radial/part")
        assert len(part) == 2
        assert part.complex_points[0] == radial_seq.complex_points[4]
        assert part.defects[1] == radial_seq.defects[1]
        assert part.params["subset_of"] == "radial"

    def test_without(self, explicit_seq):
        shorter = explicit_seq.without(0)
        assert len(shorter) == 2
        assert 0.5 not in list(shorter.complex_points)


class TestRadial:
    """Test λ_n = 1 - qⁿ"""

    def test_points_and_defects(self, radial_seq):
        assert len(radial_seq) == 30
        assert radial_seq.defects[0] == 0.5
        assert radial_seq.defects[-1] == 2.0 ** -30
        assert radial_seq.complex_points[2] == 1.0 - 0.125

    def test_invalid_ratio(self):
        with pytest.raises(ValueError):
            gen_radial(1.0, 5)
        with pytest.raises(ValueError):
            gen_radial(0.5, -1)

    def test_blaschke_sum(self, radial_seq):
        """Σ(1 - |λ|²) = 2Σqⁿ - Σq²ⁿ"""
        expected = 2.0 * (1.0 - 2.0 ** -30) - (1.0 - 4.0 ** -30) / 3.0
        assert blaschke_sum(radial_seq) == pytest.approx(expected, rel=1e-13)

    def test_separation(self, radial_seq):
        """Neighbours approach ρ = (1-q)/(1+q) = 1/3 from above"""
        sep = separation_constant(radial_seq)
        assert sep == pytest.approx(1.0 / 3.0, rel=1e-6)
        assert sep >= 1.0 / 3.0 - 1e-9

    def test_separation_of_short_sequences(self):
        assert separation_constant(GeneratedSequence.from_points([0.2])) == 1.0


class TestSection6Stages:
    """Test stage counts and the staged truncation"""

    @pytest.mark.parametrize("n,expected", [(2, (4, 1)), (3, (2, 2)), (4, (2, 2)), (5, (2, 2)), (6, (3, 3))])
    def test_stage_counts_eps1(self, n, expected):
        """Effective k_n is capped at 2^{n-1} - 1"""
        assert stage_count(n, 1.0) == expected

    def test_invalid_stage(self):
        with pytest.raises(ValueError):
            stage_count(1, 1.0)
        with pytest.raises(ValueError):
            stage_count(3, 0.0)
        with pytest.raises(ValueError):
            stage_count(2, 1.0, family="loglog")

    def test_first_stage(self):
        assert first_stage("psi") == 2
        assert first_stage("loglog") == 3

    def test_truncation_size(self, section6_seq):
        assert len(section6_seq) == 13
        assert Section6Generator(1.0, 4).count() == 13

    def test_canonical_order(self, section6_seq):
        """Stage-major, k ascending"""
        assert section6_seq.stages.tolist() == [2] * 3 + [3] * 5 + [4] * 5
        ks, points = stage_points(3, 1.0)
        assert ks.tolist() == [-2, -1, 0, 1, 2]
        assert np.array_equal(section6_seq.complex_points[3:8], points)

    def test_points_on_dyadic_radii(self, section6_seq):
        radii = np.abs(section6_seq.complex_points)
        assert radii == pytest.approx(1.0 - section6_seq.defects, rel=1e-14)

    def test_index_of(self, section6_seq):
        idx = index_of(section6_seq, 3, -2)
        assert idx == 3
        assert section6_seq.complex_points[index_of(section6_seq, 4, 0)] == pytest.approx(1.0 - 2.0 ** -4)
        with pytest.raises(IndexError):
            index_of(section6_seq, 3, 3)
        with pytest.raises(IndexError):
            index_of(section6_seq, 5, 0)

    def test_loglog_family(self):
        seq = gen_section6(1.0, 5, family="loglog")
        assert seq.params["family"] == "loglog"
        assert int(seq.stages.min()) == 3
        assert stage_count(3, 1.0, "loglog")[1] == 3

    def test_generator_rejects_bad_parameters(self):
        with pytest.raises(ValueError):
            Section6Generator(0.0, 5)
        with pytest.raises(ValueError):
            Section6Generator(1.0, 1)
        with pytest.raises(ValueError):
            Section6Generator(1.0, 5, family="cubic")

    def test_stage_blaschke_sum(self, section6_seq):
        assert stage_blaschke_sum(1.0, 4) == pytest.approx(blaschke_sum(section6_seq), rel=1e-13)


class TestStagewisePhi:
    """Test the streamed density and its truncation bounds"""

    def test_matches_materialized_sequence(self, section6_seq_6):
        """Streaming stage by stage agrees with the full product"""
        idx = index_of(section6_seq_6, 4, 1)
        assert stagewise_phi(1.0, 4, 1, 6) == pytest.approx(phi_lambda(section6_seq_6, idx), rel=1e-12)

    def test_parallel_is_identical(self):
        assert stagewise_phi(1.0, 5, 0, 10, parallelism=1) == stagewise_phi(1.0, 5, 0, 10, parallelism=3)

    def test_requires_point_inside_truncation(self):
        with pytest.raises(ValueError):
            stagewise_phi(1.0, 6, 0, 5)
        with pytest.raises(IndexError):
            stagewise_phi(1.0, 4, 3, 6)

    def test_grows_with_truncation(self):
        assert stagewise_phi(1.0, 3, 0, 12) > stagewise_phi(1.0, 3, 0, 6)

    def test_tail_bound_covers_omitted_stages(self, section6_seq_6):
        """φ at J = 6 plus the tail bound dominates φ at J = 12"""
        bound = tail_bound(section6_seq_6, 1.0 - 2.0 ** -3, 6, defect=2.0 ** -3)
        assert isinstance(bound, TailEstimate)
        assert bound.bound > 0.0
        assert stagewise_phi(1.0, 3, 0, 6) + bound.bound >= stagewise_phi(1.0, 3, 0, 12)

    def test_tail_bound_zero_for_unstaged(self, radial_seq):
        assert tail_bound(radial_seq, 0.5, 10).bound == 0.0

    def test_tail_bound_needs_point_inside(self, section6_seq_6):
        with pytest.raises(ValueError):
            tail_bound(section6_seq_6, 1.0 - 2.0 ** -8, 6, defect=2.0 ** -8)

    def test_far_field_below_bound(self):
        far = far_field_estimate(1.0, 1.0 - 2.0 ** -4, 8, defect=2.0 ** -4)
        assert 0.0 < far.estimate <= far.bound
        assert far.uncertainty > 0.0

    def test_far_field_consistent_across_cutoffs(self):
        """Moving stages from the analytic far field into the exact sum keeps the total"""
        d = 2.0 ** -4
        near = far_field_estimate(1.0, 1.0 - d, 8, defect=d)
        far = far_field_estimate(1.0, 1.0 - d, 20, defect=d)
        exact = stagewise_phi(1.0, 4, 0, 20) - stagewise_phi(1.0, 4, 0, 8)
        assert abs(near.estimate - (exact + far.estimate)) <= 2.0 * (near.uncertainty + far.uncertainty) + 1e-9


class TestPerturbedPairs:
    """Test doubling with radial partners"""

    def test_pair_distance(self, short_radial_seq):
        doubled = gen_perturbed_pairs(short_radial_seq, [3.0] * 12)
        assert len(doubled) == 24
        assert doubled.generator == "perturbed_pairs"
        for n in range(12):
            rho = pseudo_distance(doubled.complex_points[2 * n], doubled.complex_points[2 * n + 1])
            assert rho == pytest.approx(math.exp(-3.0), rel=1e-8)
        assert doubled.stages.tolist()[:4] == [1, 1, 2, 2]

    def test_residuals_nonnegative(self, short_radial_seq):
        """Other partners only add to the density"""
        residuals = perturbed_pair_residuals(short_radial_seq, [3.0] * 12)
        assert residuals.size == 12
        assert np.all(residuals >= -1e-9)

    def test_interleaving_rejected(self, short_radial_seq):
        with pytest.raises(ValueError, match="interleave"):
            gen_perturbed_pairs(short_radial_seq, [0.1] * 12)

    def test_invalid_eta(self, short_radial_seq):
        with pytest.raises(ValueError):
            gen_perturbed_pairs(short_radial_seq, [0.0] * 12)
        with pytest.raises(ValueError):
            gen_perturbed_pairs(short_radial_seq, [3.0] * 5)


class TestBuildSequence:
    """Test generator spec strings"""

    def test_radial(self):
        seq = build_sequence("radial:0.5,30")
        assert seq.generator == "radial"
        assert len(seq) == 30

    def test_section6_and_loglog(self):
        assert len(build_sequence("section6:1,4")) == 13
        assert build_sequence("loglog:1,5").params["family"] == "loglog"

    def test_explicit(self):
        seq = build_sequence("explicit:0.5,0.3+0.1j")
        assert seq.complex_points.tolist() == [0.5 + 0j, 0.3 + 0.1j]

    def test_file(self, tmp_path, section6_seq):
        path = tmp_path / "points.json"
        path.write_text(json.dumps(section6_seq.to_dict()))
        seq = build_sequence(f"file:{path}")
        assert np.array_equal(seq.complex_points, section6_seq.complex_points)

    @pytest.mark.parametrize("spec", [
        "radial:0.5,3.5",
        "radial:2,10",
        "section6:1,41",
        "bogus:1",
        "explicit:abc",
        "file:/nonexistent/points.json",
        "",
    ])
    def test_invalid_specs(self, spec):
        with pytest.raises(ConfigError) as info:
            build_sequence(spec)
        assert info.value.field == "gen"
