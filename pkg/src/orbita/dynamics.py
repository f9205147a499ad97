"""Orbits over Z^N and F_p^N, primitive periods, and a certified periodicity test.

``decide_periodic`` never guesses.  A periodic verdict comes with an exact
return f^n(P) = P; a non-periodic verdict shows that every k up to the
uniform period bound is ruled out, either modulo some prime (f~^k(P~) != P~)
or by an exact mismatch.  When neither is possible within the configured
budget the outcome is ``unresolved``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import lcm
from typing import Sequence

from .arith import first_primes, is_prime, require_prime
from .bounds import step_bound
from .errors import DimensionError
from .poly import PolyMap

DEFAULT_PRIMES = (2, 3, 5, 7, 11, 13)
DEFAULT_CAP_BITS = 4096


@dataclass(frozen=True)
class LocalOrbitReport:
    """Rho shape of the orbit of P mod p; ``local_period`` is set iff P~ is periodic."""

    p: int
    tail_length: int
    cycle_length: int
    on_cycle: bool
    local_period: int | None

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "tail_length": self.tail_length,
            "cycle_length": self.cycle_length,
            "on_cycle": self.on_cycle,
            "local_period": self.local_period,
        }


def _check(f: PolyMap, P: Sequence[int]) -> tuple:
    if len(P) != f.dim:
        raise DimensionError(f"point has {len(P)} coordinates, map has dimension {f.dim}")
    return tuple(int(a) for a in P)


def orbit_mod_p(f: PolyMap, P: Sequence[int], p: int) -> LocalOrbitReport:
    require_prime(p)
    P = _check(f, P)
    pt = tuple(a % p for a in P)
    first_seen = {}
    step = 0
    while pt not in first_seen:
        first_seen[pt] = step
        pt = f.step_mod(pt, p)
        step += 1
    tail = first_seen[pt]
    cycle = step - tail
    on_cycle = tail == 0
    return LocalOrbitReport(p, tail, cycle, on_cycle, cycle if on_cycle else None)


def return_period_mod_p(f: PolyMap, P: Sequence[int], p: int, horizon: int) -> int | None:
    """Least k <= horizon with f~^k(P~) = P~, or None.

    The returns of P~ are exactly the multiples of this number, so it encodes
    the whole set {k <= horizon : f~^k(P~) = P~}.
    """
    return _walk_mod_p(f, P, p, horizon)[0]


def _walk_mod_p(f, P, p, horizon):
    # stops early once a point other than P~ repeats: P~ is then off the cycle
    start = tuple(a % p for a in P)
    seen = {start}
    pt = start
    for k in range(1, horizon + 1):
        pt = f.step_mod(pt, p)
        if pt == start:
            return k, k
        if pt in seen:
            return None, k
        seen.add(pt)
    return None, horizon


@dataclass(frozen=True)
class ExactResult:
    """Outcome of plain iteration: ``periodic``, ``not_returned`` or ``cap_exceeded``.

    ``value`` is the period, the step budget, or the step at which the
    magnitude cap was crossed, respectively.
    """

    kind: str
    value: int
    orbit: tuple = ()

    @property
    def periodic(self) -> bool:
        return self.kind == "periodic"


def _bits(pt) -> int:
    return max(abs(a).bit_length() for a in pt)


def primitive_period_exact(
    f: PolyMap, P: Sequence[int], max_steps: int, magnitude_cap: int | None = DEFAULT_CAP_BITS
) -> ExactResult:
    """Iterate exactly from P for at most ``max_steps`` steps.

    ``magnitude_cap`` bounds the bit length of coordinates; ``None`` disables
    it.  Crossing the cap is a non-answer, not evidence of non-periodicity.
    """
    if max_steps < 1:
        raise ValueError("max_steps must be positive")
    P = _check(f, P)
    orbit = [P]
    pt = P
    for k in range(1, max_steps + 1):
        pt = f(pt)
        if pt == P:
            return ExactResult("periodic", k, tuple(orbit))
        if magnitude_cap is not None and _bits(pt) > magnitude_cap:
            return ExactResult("cap_exceeded", k)
        orbit.append(pt)
    return ExactResult("not_returned", max_steps)


@dataclass(frozen=True)
class DecideConfig:
    """``bound_source``: auto | plane | divisor | elementary.

    The first ``filter_primes`` entries of ``primes`` are used before any
    exact iteration; the rest are held back for escalation after the
    magnitude cap is hit.
    """

    bound_source: str = "auto"
    primes: tuple = DEFAULT_PRIMES + tuple(first_primes(40)[6:])
    filter_primes: int = len(DEFAULT_PRIMES)
    magnitude_cap: int = DEFAULT_CAP_BITS

    def __post_init__(self):
        for p in self.primes:
            if not is_prime(p):
                raise ValueError(f"{p} in the escalation list is not prime")
        if self.filter_primes < 0 or self.magnitude_cap < 1:
            raise ValueError("bad decision configuration")


@dataclass
class PeriodicityCertificate:
    """Evidence for a decision.

    ``exclusions`` holds ``(p, m_p)`` pairs: modulo p the point returns
    exactly at multiples of m_p (``None``: never), so every k <= bound not
    divisible by m_p is excluded.  ``mismatches`` holds ``(k, i, diff)``
    with diff = f^k(P)_i - P_i != 0.
    """

    kind: str  # exact_return | modular_exclusion | exact_mismatch | unresolved
    bound: int
    exclusions: list = field(default_factory=list)
    mismatches: list = field(default_factory=list)
    exact_return: int | None = None
    steps_used: int = 0
    primes_used: list = field(default_factory=list)

    def excluded(self) -> set:
        """All k in [1, bound] ruled out by the recorded evidence."""
        out = set()
        for _, m in self.exclusions:
            out.update(k for k in range(1, self.bound + 1) if m is None or k % m)
        out.update(k for k, _, _ in self.mismatches)
        return out

    def covers_bound(self) -> bool:
        return self.excluded() >= set(range(1, self.bound + 1))

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "bound": self.bound,
            "exact_return": self.exact_return,
            "exclusions": [{"prime": p, "returns_every": m} for p, m in self.exclusions],
            "mismatches": [{"k": k, "coordinate": i, "difference": d}
                           for k, i, d in self.mismatches],
            "steps_used": self.steps_used,
            "primes_used": list(self.primes_used),
        }


@dataclass
class Decision:
    status: str  # periodic | not_periodic | unresolved
    primitive_period: int | None
    certificate: PeriodicityCertificate
    reason: str | None = None
    survivors: list = field(default_factory=list)

    @property
    def verdict(self) -> bool | None:
        return {"periodic": True, "not_periodic": False}.get(self.status)

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "periodic": self.verdict,
            "n": self.primitive_period,
            "reason": self.reason,
            "survivors": self.survivors,
            "certificate": self.certificate.to_json(),
        }


def decide_periodic(f: PolyMap, P: Sequence[int], config: DecideConfig | None = None) -> Decision:
    config = config or DecideConfig()
    P = _check(f, P)
    B = step_bound(f.dim, config.bound_source)
    cert = PeriodicityCertificate(kind="unresolved", bound=B)
    period_lcm = 1

    def sieve(p):
        nonlocal period_lcm
        m, walked = _walk_mod_p(f, P, p, B)
        cert.primes_used.append(p)
        cert.exclusions.append((p, m))
        cert.steps_used += walked
        if m is None:
            return False
        period_lcm = lcm(period_lcm, m)
        return period_lcm <= B

    def excluded():
        cert.kind = "exact_mismatch" if cert.mismatches else "modular_exclusion"
        return Decision("not_periodic", None, cert)

    for p in config.primes[: config.filter_primes]:
        if not sieve(p):
            return excluded()

    # exact stage: ascending survivors, reusing the computed prefix
    pt, step = P, 0
    k = period_lcm
    while k <= B:
        while step < k:
            pt = f(pt)
            step += 1
            cert.steps_used += 1
            if pt != P and _bits(pt) > config.magnitude_cap:
                break
        else:
            if pt == P:
                cert.kind = "exact_return"
                cert.exact_return = k
                return Decision("periodic", k, cert)
            i = next(j for j, (a, b) in enumerate(zip(pt, P)) if a != b)
            cert.mismatches.append((k, i, pt[i] - P[i]))
            k += period_lcm
            continue
        break
    else:
        return excluded()

    # cap crossed before reaching k; only primes can eliminate the rest
    for p in config.primes[config.filter_primes:]:
        before = period_lcm
        if not sieve(p):
            return excluded()
        if period_lcm != before:
            # smaller multiples of the new lcm were already refuted exactly
            k = -(-k // period_lcm) * period_lcm
            if k > B:
                return excluded()
    left = list(range(k, B + 1, period_lcm))
    return Decision("unresolved", None, cert, reason="magnitude_cap_exceeded", survivors=left)


@dataclass
class OrbitReport:
    periodic: bool | None
    primitive_period: int | None
    orbit_points: tuple
    certificate: PeriodicityCertificate
    status: str = ""

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "periodic": self.periodic,
            "n": self.primitive_period,
            "orbit": [list(pt) for pt in self.orbit_points],
            "certificate": self.certificate.to_json(),
        }


def orbit_report(f: PolyMap, P: Sequence[int], config: DecideConfig | None = None) -> OrbitReport:
    decision = decide_periodic(f, P, config)
    points: tuple = ()
    if decision.status == "periodic":
        pts = [tuple(P)]
        for _ in range(decision.primitive_period - 1):
            pts.append(f(pts[-1]))
        points = tuple(pts)
    return OrbitReport(decision.verdict, decision.primitive_period, points,
                       decision.certificate, decision.status)
