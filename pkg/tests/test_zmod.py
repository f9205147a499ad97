from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from orbita.errors import BudgetExceeded, TheoremViolation
from orbita.zmod import (
    ModMatrix,
    g_of,
    is_idempotent,
    mat_pow,
    matrix_at,
    min_d_fixing,
    multiplicative_order,
    verify_lemma,
)

F2_ORDER3 = ModMatrix.from_rows([[0, 1], [1, 1]], 2)
F2_NILP = ModMatrix.from_rows([[0, 1], [0, 0]], 2)


def test_construction_reduces_entries():
    assert ModMatrix.from_rows([[5, -1], [2, 3]], 3).entries == ((2, 2), (2, 0))
    with pytest.raises(ValueError):
        ModMatrix.from_rows([[1]], 4)


def test_mat_pow_examples():
    assert mat_pow(F2_ORDER3, 3) == ModMatrix.identity(2, 2)
    assert mat_pow(ModMatrix.from_rows([[3, 1], [4, 1]], 7), 0) == ModMatrix.identity(2, 7)
    assert mat_pow(F2_NILP, 2) == ModMatrix.zero(2, 2)


def test_is_idempotent_examples():
    assert is_idempotent(ModMatrix.identity(3, 5))
    assert is_idempotent(ModMatrix.zero(2, 3))
    assert not is_idempotent(F2_ORDER3)
    assert F2_ORDER3 @ F2_ORDER3 == ModMatrix.from_rows([[1, 1], [1, 0]], 2)


def test_g_of_examples():
    assert g_of(ModMatrix.identity(2, 3)) == 1
    assert g_of(F2_NILP) == 2
    assert g_of(F2_ORDER3) == 3 == 2**2 - 1


def test_g_of_ceiling_is_enforced(monkeypatch):
    import orbita.zmod as zmod

    monkeypatch.setattr(zmod, "is_idempotent", lambda A: False)
    with pytest.raises(TheoremViolation):
        zmod.g_of(F2_ORDER3)


def test_min_d_fixing_examples():
    assert min_d_fixing(ModMatrix.identity(2, 5), (3, 1)) == 1
    assert min_d_fixing(ModMatrix.from_rows([[0, 1], [1, 0]], 3), (1, 2)) == 2
    assert min_d_fixing(F2_NILP, (1, 0)) is None


@pytest.mark.parametrize(
    "n, p, max_g, count",
    [(1, 2, 1, 2), (2, 2, 3, 16), (2, 3, 8, 81), (1, 3, 2, 3), (1, 5, 4, 5)],
)
def test_verify_lemma_examples(n, p, max_g, count):
    report = verify_lemma(n, p)
    assert (report.max_g, report.bound, report.ok) == (max_g, p**n - 1, True)
    assert report.matrices_checked == count
    assert report.witnesses and all(g_of(W) == max_g for W in report.witnesses)


def test_verify_lemma_witnesses_are_order3_for_f2():
    report = verify_lemma(2, 2)
    assert {W.entries for W in report.witnesses} == {((0, 1), (1, 1)), ((1, 1), (1, 0))}


def test_verify_lemma_parallel_identical():
    assert verify_lemma(2, 3, jobs=1).to_json() == verify_lemma(2, 3, jobs=3).to_json()


def test_verify_lemma_budget():
    with pytest.raises(BudgetExceeded):
        verify_lemma(2, 3, limit=80)


def test_odometer_order():
    assert [matrix_at(i, 1, 3).entries for i in range(3)] == [((0,),), ((1,),), ((2,),)]
    assert matrix_at(1, 2, 2).entries == ((0, 0), (0, 1))
    assert matrix_at(4, 2, 2).entries == ((0, 1), (0, 0))


def _annihilator_divides_x2_minus_x(B):
    """Brute force: is the minimal polynomial of B one of x, x - 1, x^2 - x?"""
    p, n = B.p, B.n
    ident = ModMatrix.identity(n, p)
    B2 = B @ B

    def combo(c2, c1, c0):
        return tuple(
            tuple((c2 * B2.entries[i][j] + c1 * B.entries[i][j] + c0 * ident.entries[i][j]) % p
                  for j in range(n))
            for i in range(n)
        )

    zero = ModMatrix.zero(n, p).entries
    for c0 in range(p):  # monic degree 1: x + c0
        if combo(0, 1, c0) == zero:
            return c0 in (0, p - 1 if p > 1 else 0) or (c0 == 0)
    for c1, c0 in product(range(p), repeat=2):  # monic degree 2
        if combo(1, c1, c0) == zero:
            return (c1, c0) == (p - 1, 0)
    return False


matrices = st.integers(1, 3).flatmap(
    lambda n: st.sampled_from([2, 3, 5]).flatmap(
        lambda p: st.lists(st.integers(0, p - 1), min_size=n * n, max_size=n * n).map(
            lambda xs: ModMatrix(p, tuple(tuple(xs[i * n:(i + 1) * n]) for i in range(n)))
        )
    )
)


@settings(max_examples=120, deadline=None)
@given(matrices)
def test_idempotency_matches_minimal_polynomial_criterion(A):
    for k in range(1, A.p**A.n):
        B = mat_pow(A, k)
        assert is_idempotent(B) == _annihilator_divides_x2_minus_x(B)


@settings(max_examples=200, deadline=None)
@given(matrices)
def test_g_of_properties(A):
    g = g_of(A)
    assert 1 <= g <= A.p**A.n - 1
    assert is_idempotent(mat_pow(A, g))
    power = A
    for _ in range(1, g):
        assert not is_idempotent(power)
        power = power @ A
    order = multiplicative_order(A)
    if order is not None:
        assert g == order
    Ag = mat_pow(A, g)
    for v in product(range(A.p), repeat=A.n):
        if not any(v):
            continue
        d = min_d_fixing(A, v)
        if d is not None:
            w = tuple(v)
            for _ in range(d - 1):
                w = A.apply(w)
                assert w != tuple(v)
            assert A.apply(w) == tuple(v)
        if Ag.apply(v) == v:
            assert d is not None and g % d == 0
