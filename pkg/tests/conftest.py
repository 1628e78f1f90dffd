"""
Pytest configuration and fixtures for InterpIQ tests
"""

import pytest

from interpiq.config import RunConfig
from interpiq.harmonic.weights import ArcWeight, DiscreteMeasure
from interpiq.orlicz.shapes import PowerShape, PsiShape
from interpiq.sequences import GeneratedSequence, gen_radial, gen_section6


@pytest.fixture(scope="session")
def radial_seq():
    """The Carleson test case 1 - 2^-n, n = 1..30"""
    return gen_radial(0.5, 30)


@pytest.fixture(scope="session")
def short_radial_seq():
    """A short radial truncation for the quadratic-cost checks"""
    return gen_radial(0.5, 12)


@pytest.fixture(scope="session")
def section6_seq():
    """Staged sequence with ε = 1 up to stage 4 (3 + 5 + 5 points)"""
    return gen_section6(1.0, 4)


@pytest.fixture(scope="session")
def section6_seq_6():
    """Staged sequence with ε = 1 up to stage 6"""
    return gen_section6(1.0, 6)


@pytest.fixture
def explicit_seq():
    """Three points in general position"""
    return GeneratedSequence.from_points([0.5, 0.3 + 0.4j, -0.6j])


@pytest.fixture
def psi1():
    return PsiShape(1.0)


@pytest.fixture
def power2():
    return PowerShape(2.0)


@pytest.fixture
def identity_shape():
    return PowerShape(1.0)


@pytest.fixture
def quarter_arc():
    """Indicator of [0, π/2), normalized measure 1/4"""
    return ArcWeight.indicator(0.0, 0.5 * 3.141592653589793)


@pytest.fixture
def two_atoms():
    return DiscreteMeasure([0.5, 0.9j], [1.0, 2.0])


@pytest.fixture
def output_dir(tmp_path):
    """Fresh results directory for writers and CLI runs"""
    path = tmp_path / "results"
    path.mkdir()
    return path


@pytest.fixture
def run_config(output_dir):
    return RunConfig(output_dir=str(output_dir))
