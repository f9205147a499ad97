"""Small exact integer helpers: primality, prime streams, integer logs, divisors."""
from __future__ import annotations

import os
from itertools import count
from math import isqrt

DEFAULT_BUDGET = 10**8


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    for d in range(3, isqrt(n) + 1, 2):
        if n % d == 0:
            return False
    return True


def require_prime(p: int) -> None:
    if not isinstance(p, int) or not is_prime(p):
        raise ValueError(f"{p!r} is not a prime")


def primes():
    """Yield 2, 3, 5, 7, ... indefinitely."""
    yield 2
    for n in count(3, 2):
        if is_prime(n):
            yield n


def primes_upto(bound: int) -> list[int]:
    return [q for q in range(2, bound + 1) if is_prime(q)]


def first_primes(k: int) -> list[int]:
    out = []
    for q in primes():
        if len(out) == k:
            break
        out.append(q)
    return out


def floor_log(base: int, x: int) -> int:
    """Largest e >= 0 with base**e <= x, by exact integer comparison."""
    if base < 2 or x < 1:
        raise ValueError("floor_log needs base >= 2 and x >= 1")
    e, power = 0, base
    while power <= x:
        e += 1
        power *= base
    return e


def divisors(n: int) -> list[int]:
    small, large = [], []
    for d in range(1, isqrt(n) + 1):
        if n % d == 0:
            small.append(d)
            if d != n // d:
                large.append(n // d)
    return small + large[::-1]


def budget() -> int:
    """Enumeration cap, overridable through ORBITA_BUDGET."""
    raw = os.environ.get("ORBITA_BUDGET")
    if raw is None:
        return DEFAULT_BUDGET
    return int(raw)
