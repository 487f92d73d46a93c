from collections import Counter
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from onb_uniformity.core import logger as logger_module
from onb_uniformity.models.field import FieldTag, RngStream
from onb_uniformity.models.polynomial import SpherePolynomial
from onb_uniformity.tracer import reset_traces

settings.register_profile("default", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

SIGMA = 4.0
REPO_ROOT = Path(__file__).resolve().parent.parent


@pytest.fixture(autouse=True)
def _isolated_runtime(monkeypatch):
    # records go to caplog; no stderr handler bound to a captured stream
    monkeypatch.setattr(logger_module, "_configured", True)
    reset_traces()
    yield
    reset_traces()


@pytest.fixture
def stream():
    return RngStream(20240601)


@pytest.fixture
def configs_dir() -> Path:
    return REPO_ROOT / "configs"


def within_sigma(value, expected, stderr, sigma=SIGMA, slack=1e-12) -> bool:
    return abs(value - expected) <= sigma * stderr + slack


@st.composite
def homogeneous_real_polynomials(draw, max_dim=5, max_degree=4):
    dim = draw(st.integers(2, max_dim))
    degree = draw(st.integers(0, max_degree))
    n_terms = draw(st.integers(1, 4))
    terms = {}
    for _ in range(n_terms):
        indices = draw(st.lists(st.integers(0, dim - 1), min_size=degree, max_size=degree))
        counts = Counter(indices)
        key = tuple(counts.get(j, 0) for j in range(dim))
        terms[key] = terms.get(key, 0) + Fraction(draw(st.integers(-5, 5)), draw(st.integers(1, 4)))
    return SpherePolynomial(dim, FieldTag.REAL, terms)


@st.composite
def bihomogeneous_complex_polynomials(draw, max_dim=4, max_degree=2):
    dim = draw(st.integers(2, max_dim))
    p = draw(st.integers(0, max_degree))
    q = draw(st.integers(0, max_degree))
    n_terms = draw(st.integers(1, 3))
    terms = {}
    for _ in range(n_terms):
        holo = Counter(draw(st.lists(st.integers(0, dim - 1), min_size=p, max_size=p)))
        anti = Counter(draw(st.lists(st.integers(0, dim - 1), min_size=q, max_size=q)))
        key = (tuple(holo.get(j, 0) for j in range(dim)), tuple(anti.get(j, 0) for j in range(dim)))
        terms[key] = terms.get(key, 0) + Fraction(draw(st.integers(-5, 5)), draw(st.integers(1, 3)))
    return SpherePolynomial(dim, FieldTag.COMPLEX, terms)
