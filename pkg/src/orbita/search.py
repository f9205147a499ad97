"""Exhaustive censuses of integral periodic orbits over families of maps.

A family is enumerated in a fixed odometer order over coefficient tuples,
so every map has a stable index; seed points run through an L-infinity box
in lexicographic order.  Work is split into contiguous index ranges and
merged in range order, which makes reports independent of the worker count.
"""
from __future__ import annotations

import json
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from itertools import product
from pathlib import Path
from typing import Iterable, Iterator

from .arith import budget, primes_upto
from .bounds import candidate_periods
from .dynamics import DecideConfig, decide_periodic, primitive_period_exact
from .errors import BudgetExceeded, OrbitaError, TheoremViolation
from .parser import parse_map, print_map
from .poly import PolyMap, Polynomial, _grlex_key

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class FamilySpec:
    """Maps of dimension N with coefficients in [-coeff_bound, coeff_bound].

    With ``linear_only`` the family is the affine maps x -> Ax + b (matrix
    entries row-major, then offset entries) and ``degree`` is ignored.
    Otherwise every monomial of total degree <= ``degree`` gets a
    coefficient in every component.
    """

    N: int
    degree: int = 1
    coeff_bound: int = 1
    point_box: int = 1
    linear_only: bool = False

    def __post_init__(self):
        if min(self.N, self.degree, self.coeff_bound) < 1 or self.point_box < 0:
            raise ValueError("family bounds must be positive")

    def monomials(self) -> list[tuple]:
        exps = [e for e in product(range(self.degree + 1), repeat=self.N) if sum(e) <= self.degree]
        return sorted(exps, key=_grlex_key)

    @property
    def slots(self) -> int:
        if self.linear_only:
            return self.N * self.N + self.N
        return self.N * len(self.monomials())

    @property
    def size(self) -> int:
        return (2 * self.coeff_bound + 1) ** self.slots

    @property
    def points_per_map(self) -> int:
        return (2 * self.point_box + 1) ** self.N

    def to_json(self) -> dict:
        return asdict(self)


def check_budget(total: int, what: str) -> None:
    cap = budget()
    if total > cap:
        raise BudgetExceeded(f"{what}: {total} exceeds the enumeration budget {cap} (ORBITA_BUDGET)")


def map_at(spec: FamilySpec, index: int) -> PolyMap:
    """The index-th map of the family (first coefficient slot most significant)."""
    if not 0 <= index < spec.size:
        raise IndexError(index)
    radix = 2 * spec.coeff_bound + 1
    digits = []
    for _ in range(spec.slots):
        index, r = divmod(index, radix)
        digits.append(r - spec.coeff_bound)
    coeffs = digits[::-1]
    N = spec.N
    if spec.linear_only:
        matrix = [coeffs[i * N:(i + 1) * N] for i in range(N)]
        return PolyMap.affine(matrix, coeffs[N * N:])
    monos = spec.monomials()
    k = len(monos)
    return PolyMap(tuple(
        Polynomial.from_dict(N, dict(zip(monos, coeffs[i * k:(i + 1) * k]))) for i in range(N)
    ))


def enumerate_family(spec: FamilySpec, start: int = 0) -> Iterator[PolyMap]:
    check_budget(spec.size, "family size")
    for index in range(start, spec.size):
        yield map_at(spec, index)


def seed_points(N: int, box: int) -> list[tuple]:
    return list(product(range(-box, box + 1), repeat=N))


@dataclass
class CensusReport:
    family: dict
    histogram: dict = field(default_factory=dict)  # period -> count
    witnesses: dict = field(default_factory=dict)  # period -> {"index", "map", "point"}
    maps_scanned: int = 0
    points_scanned: int = 0
    not_periodic: int = 0
    unresolved: dict = field(default_factory=dict)  # reason -> count

    @property
    def max_period(self) -> int:
        return max(self.histogram, default=0)

    def merge(self, other: "CensusReport") -> None:
        """Fold in a report over a later index range."""
        for n, c in other.histogram.items():
            self.histogram[n] = self.histogram.get(n, 0) + c
        for n, w in other.witnesses.items():
            if n not in self.witnesses or (w["index"], w["point"]) < (
                self.witnesses[n]["index"], self.witnesses[n]["point"]
            ):
                self.witnesses[n] = w
        for reason, c in other.unresolved.items():
            self.unresolved[reason] = self.unresolved.get(reason, 0) + c
        self.maps_scanned += other.maps_scanned
        self.points_scanned += other.points_scanned
        self.not_periodic += other.not_periodic

    def to_json(self) -> dict:
        periods = sorted(self.histogram)
        return {
            "family": self.family,
            "histogram": {str(n): self.histogram[n] for n in periods},
            "max_period": self.max_period,
            "witnesses": {
                str(n): {
                    "index": self.witnesses[n]["index"],
                    "map": self.witnesses[n]["map"],
                    "point": list(self.witnesses[n]["point"]),
                }
                for n in periods
            },
            "maps_scanned": self.maps_scanned,
            "points_scanned": self.points_scanned,
            "not_periodic": self.not_periodic,
            "unresolved": {k: self.unresolved[k] for k in sorted(self.unresolved)},
        }

    @classmethod
    def from_json(cls, data: dict) -> "CensusReport":
        return cls(
            family=data["family"],
            histogram={int(n): c for n, c in data["histogram"].items()},
            witnesses={
                int(n): {"index": w["index"], "map": w["map"], "point": tuple(w["point"])}
                for n, w in data["witnesses"].items()
            },
            maps_scanned=data["maps_scanned"],
            points_scanned=data["points_scanned"],
            not_periodic=data["not_periodic"],
            unresolved=dict(data["unresolved"]),
        )

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)


def _scan(maps: Iterable[tuple[int, PolyMap]], points, family, config) -> CensusReport:
    report = CensusReport(family=family)
    for index, f in maps:
        report.maps_scanned += 1
        for P in points:
            report.points_scanned += 1
            d = decide_periodic(f, P, config)
            if d.status == "periodic":
                n = d.primitive_period
                report.histogram[n] = report.histogram.get(n, 0) + 1
                if n not in report.witnesses:
                    report.witnesses[n] = {"index": index, "map": print_map(f), "point": P}
            elif d.status == "not_periodic":
                report.not_periodic += 1
            else:
                report.unresolved[d.reason] = report.unresolved.get(d.reason, 0) + 1
    return report


def _scan_range(args) -> CensusReport:
    spec, config, lo, hi = args
    points = seed_points(spec.N, spec.point_box)
    maps = ((i, map_at(spec, i)) for i in range(lo, hi))
    return _scan(maps, points, spec.to_json(), config)


def census(
    spec: FamilySpec,
    config: DecideConfig | None = None,
    jobs: int = 1,
    checkpoint: str | os.PathLike | None = None,
    chunk: int = 2048,
    stop_after: int | None = None,
) -> CensusReport:
    """Run ``decide_periodic`` on every (map, seed point) pair of the family.

    With ``checkpoint`` the partial report and the next map index are saved
    after every chunk and an existing file is resumed from.  ``stop_after``
    ends the run once that many maps are done (for staged runs).
    """
    config = config or DecideConfig()
    check_budget(spec.size * spec.points_per_map, "census size")
    report = CensusReport(family=spec.to_json())
    start = 0
    if checkpoint is not None and Path(checkpoint).exists():
        report, start = load_checkpoint(checkpoint, spec)
    end = spec.size if stop_after is None else min(spec.size, stop_after)
    ranges = [(spec, config, lo, min(lo + chunk, end)) for lo in range(start, end, chunk)]
    if jobs > 1 and len(ranges) > 1:
        pool = ProcessPoolExecutor(max_workers=jobs)
        results = pool.map(_scan_range, ranges)
    else:
        pool = None
        results = map(_scan_range, ranges)
    try:
        for (_, _, _, hi), part in zip(ranges, results):
            report.merge(part)
            if checkpoint is not None:
                save_checkpoint(checkpoint, report, hi)
    finally:
        if pool is not None:
            pool.shutdown()
    _check_report(report, spec.N)
    return report


def census_of_maps(
    maps: Iterable[PolyMap], N: int, point_box: int, config: DecideConfig | None = None
) -> CensusReport:
    """Census over an explicit list of maps instead of an enumerated family."""
    config = config or DecideConfig()
    family = {"N": N, "point_box": point_box, "explicit": True}
    report = _scan(enumerate(maps), seed_points(N, point_box), family, config)
    _check_report(report, N)
    return report


def _check_report(report: CensusReport, N: int) -> None:
    allowed = set(candidate_periods(N))
    for n in report.histogram:
        if n not in allowed:
            raise TheoremViolation(f"period {n} observed outside the candidate set for N={N}")


def save_checkpoint(path, report: CensusReport, next_index: int) -> None:
    data = {"family": report.family, "next_index": next_index, "partial": report.to_json()}
    tmp = Path(str(path) + ".tmp")
    tmp.write_text(json.dumps(data, indent=2))
    tmp.replace(path)


def load_checkpoint(path, spec: FamilySpec) -> tuple[CensusReport, int]:
    data = json.loads(Path(path).read_text())
    if data["family"] != spec.to_json():
        raise OrbitaError("checkpoint belongs to a different family")
    return CensusReport.from_json(data["partial"]), data["next_index"]


def delta(m: int) -> int:
    """Least n such that GL_n(Z) has an element of order m."""
    total = 0
    x, q = m, 2
    parts = []
    while q * q <= x:
        if x % q == 0:
            pk = 1
            while x % q == 0:
                x //= q
                pk *= q
            parts.append((q, pk))
        q += 1
    if x > 1:
        parts.append((x, x))
    for q, pk in parts:
        if q == 2 and pk == 2:
            continue
        total += pk // q * (q - 1)
    return total


def max_order_gl(n: int) -> int:
    """Largest finite order of an element of GL_n(Z).

    An element of order m exists iff delta(m) <= n, where delta sums
    phi(q^a) over the prime powers exactly dividing m, except that a lone
    factor 2 costs nothing.  The search runs over products of prime powers
    with phi(q^a) <= n.
    """
    if n < 1:
        raise ValueError("n must be positive")
    qs = primes_upto(n + 1)
    best = 1

    def dfs(i, cost, value):
        nonlocal best
        if i == len(qs):
            best = max(best, value)
            return
        q = qs[i]
        dfs(i + 1, cost, value)
        pk = q
        while True:
            phi = pk // q * (q - 1)
            c = 0 if pk == 2 else phi
            if cost + c > n:
                break
            dfs(i + 1, cost + c, value * pk)
            pk *= q

    dfs(0, 0, 1)
    return best


@dataclass
class OpenQuestionReport:
    N: int
    census_max: int
    gl_max: int
    exceeded: bool
    census: CensusReport
    reverified: bool | None = None

    def to_json(self) -> dict:
        return {
            "N": self.N,
            "census_max": self.census_max,
            "gl_max": self.gl_max,
            "exceeded": self.exceeded,
            "reverified": self.reverified,
            "census": self.census.to_json(),
        }


def open_question_report(
    N: int,
    spec: FamilySpec | None = None,
    config: DecideConfig | None = None,
    jobs: int = 1,
    maps: Iterable[PolyMap] | None = None,
    point_box: int = 1,
) -> OpenQuestionReport:
    """Compare the largest census period with the largest order in GL_{N+1}(Z).

    This only gathers evidence; ``exceeded`` refers to the scanned family.
    """
    config = config or DecideConfig()
    if maps is not None:
        report = census_of_maps(maps, N, point_box, config)
    else:
        if spec is None or spec.N != N:
            raise ValueError("a family of dimension N is required")
        report = census(spec, config, jobs=jobs)
    gl_max = max_order_gl(N + 1)
    out = OpenQuestionReport(N, report.max_period, gl_max, report.max_period > gl_max, report)
    if out.exceeded:
        w = report.witnesses[report.max_period]
        f = parse_map(w["map"])
        again = decide_periodic(f, w["point"], config)
        exact = primitive_period_exact(f, w["point"], report.max_period, None)
        out.reverified = (again.primitive_period == report.max_period
                          and exact.periodic and exact.value == report.max_period)
        log.warning(
            "census period %d exceeds the maximal finite order %d in GL_%d(Z): map %r at %r "
            "(re-verified: %s)", report.max_period, gl_max, N + 1, w["map"], w["point"],
            out.reverified,
        )
    return out

