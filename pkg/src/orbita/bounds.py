"""Uniform bounds on sizes of integral periodic orbits in affine N-space.

All logarithm floors are exact integer computations (``arith.floor_log``).
"""
from __future__ import annotations

from dataclasses import dataclass

from .arith import divisors, floor_log, is_prime, primes_upto

PLANE_BOUND = 24


def valuation(x: int, p: int) -> int:
    """The p-adic valuation of a nonzero integer."""
    if x == 0:
        raise ValueError("valuation of 0 is infinite")
    e = 0
    while x % p == 0:
        x //= p
        e += 1
    return e


def largest_prime_below(bound: int) -> int | None:
    for q in range(bound - 1, 1, -1):
        if is_prime(q):
            return q
    return None


def bound_divisor(N: int) -> int:
    """2^(2N) times p^(2*floor(N log_p 2)) over primes 3 <= p < 2^N.

    Every integral periodic orbit size in A^N divides this number.
    """
    if N < 1:
        raise ValueError("N must be positive")
    result = 2 ** (2 * N)
    top = largest_prime_below(2**N)
    if top is None:
        return result
    for q in primes_upto(top):
        if q >= 3:
            result *= q ** (2 * floor_log(q, 2**N))
    return result


def bound_elementary(N: int) -> int:
    """Size bound read off from the decompositions at p = 2 and p = 3.

    With n = m d 2^e, m <= 2^N and d <= 2^N - 1, so an odd prime q <= 2^N
    appears in n at most floor(log_q 2^N) + floor(log_q (2^N - 1)) times and
    larger primes not at all.  The same reasoning at p = 3 bounds the
    exponent of 2 by floor(log_2 3^N) + floor(log_2 (3^N - 1)).
    """
    if N < 1:
        raise ValueError("N must be positive")
    e2 = floor_log(2, 3**N) + floor_log(2, 3**N - 1)
    result = 2**e2
    for q in primes_upto(2**N):
        if q == 2:
            continue
        result *= q ** (floor_log(q, 2**N) + floor_log(q, 2**N - 1))
    return result


def bound_plane() -> int:
    return PLANE_BOUND


def step_bound(N: int, source: str = "auto") -> int:
    """Largest period that needs to be considered for a point in A^N."""
    if source == "auto":
        source = "plane" if N == 2 else "divisor"
    if source == "plane":
        if N != 2:
            raise ValueError("the plane bound only applies to N = 2")
        return bound_plane()
    if source == "divisor":
        return bound_divisor(N)
    if source == "elementary":
        return bound_elementary(N)
    raise ValueError(f"unknown bound source {source!r}")


def candidate_periods(N: int, sharp: bool = False) -> list[int]:
    """Periods not ruled out by the divisor bound (and the plane bound for N = 2).

    ``sharp`` applies the classical affine-line fact (periods 1 and 2 only)
    when N = 1.
    """
    if N < 1:
        raise ValueError("N must be positive")
    if sharp and N == 1:
        return [1, 2]
    B = bound_divisor(N)
    ceiling = bound_plane() if N == 2 else B
    return [d for d in divisors(B) if d <= ceiling]


@dataclass(frozen=True)
class BoundsReport:
    N: int
    p_of_N: int | None
    elementary_bound: int
    divisor_bound: int
    plane_bound: int | None

    def to_json(self) -> dict:
        return {
            "N": self.N,
            "elementary": self.elementary_bound,
            "divisor": self.divisor_bound,
            "plane": self.plane_bound,
            "p_of_N": self.p_of_N,
        }


def bounds_report(N: int) -> BoundsReport:
    return BoundsReport(
        N=N,
        p_of_N=largest_prime_below(2**N),
        elementary_bound=bound_elementary(N),
        divisor_bound=bound_divisor(N),
        plane_bound=bound_plane() if N == 2 else None,
    )
