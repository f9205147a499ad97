from itertools import islice

import numpy as np
import pytest

from orbita.bounds import bound_divisor, candidate_periods
from orbita.dynamics import DecideConfig, decide_periodic
from orbita.errors import BudgetExceeded, OrbitaError, TheoremViolation
from orbita.parser import parse_map, print_polynomial
from orbita.poly import PolyMap
from orbita.search import (
    CensusReport,
    FamilySpec,
    census,
    census_of_maps,
    delta,
    enumerate_family,
    map_at,
    max_order_gl,
    open_question_report,
)

PLANE_AFFINE = FamilySpec(N=2, linear_only=True, coeff_bound=1, point_box=2)


def test_family_counts():
    line = FamilySpec(N=1, degree=1, coeff_bound=1)
    maps = list(enumerate_family(line))
    assert len(maps) == 9
    got = {tuple(f.components[0].as_dict().items()) for f in maps}
    assert len(got) == 9
    assert FamilySpec(N=2, linear_only=True, coeff_bound=1).size == 729
    assert len(list(enumerate_family(FamilySpec(N=2, linear_only=True)))) == 729


def test_family_restart():
    spec = FamilySpec(N=2, linear_only=True)
    full = list(enumerate_family(spec))
    assert list(enumerate_family(spec, start=5)) == full[5:]
    assert map_at(spec, 5) == full[5]


def test_family_order_is_odometer():
    spec = FamilySpec(N=1, degree=1, coeff_bound=1)
    # constant term is the last slot and so runs fastest
    first = [print_polynomial(f.components[0], ["x"]) for f in islice(enumerate_family(spec), 3)]
    assert first == ["-x - 1", "-x", "-x + 1"]
    with pytest.raises(IndexError):
        map_at(spec, 9)


def test_family_rejects_bad_bounds():
    with pytest.raises(ValueError):
        FamilySpec(N=0)
    with pytest.raises(ValueError):
        FamilySpec(N=1, coeff_bound=0)


def test_budget_exceeded(monkeypatch):
    monkeypatch.setenv("ORBITA_BUDGET", "100")
    with pytest.raises(BudgetExceeded):
        list(enumerate_family(FamilySpec(N=2, linear_only=True)))
    with pytest.raises(BudgetExceeded):
        census(FamilySpec(N=1, degree=1, point_box=10))


def test_plane_affine_census():
    rep = census(PLANE_AFFINE)
    assert rep.maps_scanned == 729 and rep.points_scanned == 729 * 25
    assert rep.max_period == 6
    assert set(rep.histogram) <= set(candidate_periods(2))
    assert sum(rep.histogram.values()) + rep.not_periodic + sum(rep.unresolved.values()) \
        == rep.points_scanned
    for n, w in rep.witnesses.items():
        f = parse_map(w["map"])
        assert f == map_at(PLANE_AFFINE, w["index"])
        assert decide_periodic(f, w["point"]).primitive_period == n
        assert bound_divisor(2) % n == 0


def test_line_census_small():
    rep = census(FamilySpec(N=1, degree=2, coeff_bound=2, point_box=4))
    assert rep.max_period == 2 and 2 in rep.witnesses


def test_checkpoint_resume_matches_full(tmp_path):
    spec = PLANE_AFFINE
    full = census(spec)
    path = tmp_path / "ck.json"
    partial = census(spec, checkpoint=path, chunk=100, stop_after=300)
    assert partial.maps_scanned == 300
    resumed = census(spec, checkpoint=path, chunk=100)
    assert resumed.dumps() == full.dumps()


def test_checkpoint_family_mismatch(tmp_path):
    path = tmp_path / "ck.json"
    census(PLANE_AFFINE, checkpoint=path, chunk=100, stop_after=100)
    with pytest.raises(OrbitaError):
        census(FamilySpec(N=2, linear_only=True, coeff_bound=1, point_box=1), checkpoint=path)


def test_parallel_identical():
    serial = census(PLANE_AFFINE, chunk=64)
    parallel = census(PLANE_AFFINE, jobs=3, chunk=64)
    assert serial.dumps() == parallel.dumps()
    assert census(PLANE_AFFINE).dumps() == serial.dumps()


def test_report_json_roundtrip():
    rep = census(FamilySpec(N=1, degree=1, point_box=2))
    assert CensusReport.from_json(rep.to_json()).to_json() == rep.to_json()


def test_unresolved_tallied_separately():
    cfg = DecideConfig(primes=(2,), filter_primes=1, magnitude_cap=4)
    rep = census_of_maps([parse_map("vars x; f1 = x^2 + 2")], 1, 3, cfg)
    assert rep.unresolved and rep.points_scanned == 7
    assert sum(rep.unresolved.values()) + rep.not_periodic + sum(rep.histogram.values()) == 7


def test_out_of_range_period_is_loud(monkeypatch):
    import orbita.search as search

    monkeypatch.setattr(search, "candidate_periods", lambda N: [1])
    with pytest.raises(TheoremViolation):
        census(FamilySpec(N=1, degree=1, point_box=1))


# --- maximal finite order in GL_n(Z) ---------------------------------------


def test_delta_values():
    assert [delta(m) for m in (1, 2, 3, 4, 6, 12, 8, 10, 5)] == [0, 0, 2, 2, 2, 4, 4, 4, 4]


def test_max_order_examples():
    assert [max_order_gl(n) for n in range(1, 9)] == [2, 6, 6, 12, 12, 30, 30, 60]


def test_max_order_matches_delta_scan():
    for n in range(1, 9):
        assert max_order_gl(n) == max(m for m in range(1, 400) if delta(m) <= n)


def _orders_small_entries(n, cutoff=30, entry=2):
    """Largest order <= cutoff among integer n x n matrices with entries in [-entry, entry]."""
    vals = np.arange(-entry, entry + 1, dtype=np.int64)
    k = len(vals)
    idx = np.indices((k,) * (n * n)).reshape(n * n, -1).T
    mats = vals[idx].reshape(-1, n, n)
    det = np.rint(np.linalg.det(mats.astype(float))).astype(np.int64)
    mats = mats[np.abs(det) == 1]
    eye = np.eye(n, dtype=np.int64)
    best = 1
    power = mats.copy()
    alive = np.ones(len(mats), dtype=bool)
    for step in range(1, cutoff + 1):
        hit = alive & np.all(power == eye, axis=(1, 2))
        if hit.any():
            best = step
            witness = mats[np.flatnonzero(hit)[0]]
        alive &= ~hit
        alive &= np.abs(power).max(axis=(1, 2)) < 10**6
        power = np.where(alive[:, None, None], power @ mats, 0)
    return best, witness.tolist()


def _exact_order(A, cutoff=60):
    n = len(A)
    ident = [[int(i == j) for j in range(n)] for i in range(n)]
    P = A
    for k in range(1, cutoff + 1):
        if P == ident:
            return k
        P = [[sum(P[i][t] * A[t][j] for t in range(n)) for j in range(n)] for i in range(n)]
    return None


@pytest.mark.parametrize("n", [1, 2, 3])
def test_max_order_small_entry_oracle(n):
    best, witness = _orders_small_entries(n)
    assert _exact_order(witness) == best
    assert best == max_order_gl(n)


def test_max_order_four_attained():
    # block sum of an order-4 and an order-3 companion matrix
    A = [[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, -1]]
    assert _exact_order(A) == 12 == max_order_gl(4)


# --- open question ----------------------------------------------------------


def test_open_question_plane():
    rep = open_question_report(2, PLANE_AFFINE)
    assert (rep.census_max, rep.gl_max, rep.exceeded) == (6, 6, False)
    assert rep.reverified is None


def test_open_question_line():
    rep = open_question_report(1, FamilySpec(N=1, degree=2, coeff_bound=1, point_box=3))
    assert (rep.census_max, rep.gl_max, rep.exceeded) == (2, 6, False)


def test_open_question_identity_only():
    rep = open_question_report(2, maps=[PolyMap.identity(2)])
    assert (rep.census_max, rep.exceeded) == (1, False)


def test_open_question_exceeded_is_reverified(monkeypatch, caplog):
    import orbita.search as search

    monkeypatch.setattr(search, "max_order_gl", lambda n: 2)
    f = parse_map("vars x,y; f1 = -y; f2 = x + y")
    rep = open_question_report(2, maps=[f], point_box=1)
    assert rep.exceeded and rep.reverified is True
    assert "exceeds" in caplog.text


def test_open_question_needs_matching_family():
    with pytest.raises(ValueError):
        open_question_report(2, FamilySpec(N=1))
