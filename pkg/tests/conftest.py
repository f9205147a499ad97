import pytest
from hypothesis import strategies as st

from orbita.parser import parse_map
from orbita.poly import PolyMap, Polynomial


@pytest.fixture
def order6():
    return parse_map("vars x,y; f1 = -y; f2 = x + y")


@pytest.fixture
def quad():
    return parse_map("vars x; f1 = x^2 - 1")


def polynomials(n, max_degree=3, max_terms=4, coeff=20):
    exps = st.tuples(*[st.integers(0, max_degree)] * n)
    return st.dictionaries(exps, st.integers(-coeff, coeff), max_size=max_terms).map(
        lambda d: Polynomial.from_dict(n, d)
    )


@st.composite
def polymaps(draw, dims=(1, 2, 3), **kw):
    n = draw(st.sampled_from(dims))
    return PolyMap(tuple(draw(polynomials(n, **kw)) for _ in range(n)))


@st.composite
def map_and_point(draw, dims=(1, 2, 3), box=6, **kw):
    f = draw(polymaps(dims, **kw))
    P = tuple(draw(st.lists(st.integers(-box, box), min_size=f.dim, max_size=f.dim)))
    return f, P


def pytest_terminal_summary(terminalreporter):
    import sys

    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
