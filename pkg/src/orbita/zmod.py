"""Linear algebra over the prime field F_p.

The central quantity is ``g_of(A)``: the least g >= 1 such that A^g is
idempotent.  Over a field, a matrix is diagonalizable with eigenvalues in
{0, 1} exactly when its minimal polynomial divides x^2 - x, i.e. when it is
idempotent, so the search only ever multiplies matrices.  The search never
needs more than p^n - 1 steps; exceeding that raises ``TheoremViolation``.
"""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import product
from typing import Sequence

from .arith import budget, require_prime
from .errors import BudgetExceeded, TheoremViolation


@dataclass(frozen=True)
class ModMatrix:
    p: int
    entries: tuple

    def __post_init__(self):
        rows = tuple(tuple(int(a) % self.p for a in row) for row in self.entries)
        if not rows or any(len(r) != len(rows) for r in rows):
            raise ValueError("ModMatrix must be square and nonempty")
        object.__setattr__(self, "entries", rows)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], p: int) -> "ModMatrix":
        require_prime(p)
        return cls(p, tuple(tuple(r) for r in rows))

    @classmethod
    def identity(cls, n: int, p: int) -> "ModMatrix":
        return cls(p, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @classmethod
    def zero(cls, n: int, p: int) -> "ModMatrix":
        return cls(p, ((0,) * n,) * n)

    @property
    def n(self) -> int:
        return len(self.entries)

    def __matmul__(self, other: "ModMatrix") -> "ModMatrix":
        if self.p != other.p or self.n != other.n:
            raise ValueError("incompatible matrices")
        p = self.p
        cols = list(zip(*other.entries))
        return ModMatrix(
            p, tuple(tuple(sum(a * b for a, b in zip(row, col)) % p for col in cols)
                     for row in self.entries)
        )

    def __add__(self, other: "ModMatrix") -> "ModMatrix":
        return ModMatrix(self.p, tuple(tuple(a + b for a, b in zip(r, s))
                                       for r, s in zip(self.entries, other.entries)))

    def apply(self, v: Sequence[int]) -> tuple:
        p = self.p
        return tuple(sum(a * b for a, b in zip(row, v)) % p for row in self.entries)

    def to_list(self) -> list:
        return [list(r) for r in self.entries]


def mat_pow(A: ModMatrix, k: int) -> ModMatrix:
    if k < 0:
        raise ValueError("negative exponent")
    result = ModMatrix.identity(A.n, A.p)
    base = A
    while k:
        if k & 1:
            result = result @ base
        k >>= 1
        if k:
            base = base @ base
    return result


def is_idempotent(A: ModMatrix) -> bool:
    return A @ A == A


def g_of(A: ModMatrix) -> int:
    ceiling = A.p ** A.n - 1
    power = A
    g = 1
    while not is_idempotent(power):
        g += 1
        if g > ceiling:
            raise TheoremViolation(
                f"no idempotent power of {A.to_list()} mod {A.p} up to exponent {ceiling}"
            )
        power = power @ A
    return g


def min_d_fixing(A: ModMatrix, v: Sequence[int]) -> int | None:
    """Least d >= 1 with A^d v = v, or None if the orbit of v never returns."""
    start = tuple(a % A.p for a in v)
    if len(start) != A.n:
        raise ValueError("vector length does not match matrix size")
    seen = {start}
    w = start
    for d in range(1, A.p ** A.n + 1):
        w = A.apply(w)
        if w == start:
            return d
        if w in seen:
            return None
        seen.add(w)
    return None


def multiplicative_order(A: ModMatrix) -> int | None:
    """Least k >= 1 with A^k = I, or None when A is singular mod p."""
    ident = ModMatrix.identity(A.n, A.p)
    seen = set()
    power, k = A, 1
    while power not in seen:
        if power == ident:
            return k
        seen.add(power)
        power = power @ A
        k += 1
    return None


def matrix_at(index: int, n: int, p: int) -> ModMatrix:
    """The index-th matrix in row-major odometer order (last entry fastest)."""
    digits = []
    for _ in range(n * n):
        index, r = divmod(index, p)
        digits.append(r)
    digits.reverse()
    return ModMatrix(p, tuple(tuple(digits[i * n:(i + 1) * n]) for i in range(n)))


def _sweep_range(args):
    n, p, start, stop = args
    best, witnesses = 0, []
    for idx in range(start, stop):
        A = matrix_at(idx, n, p)
        g = g_of(A)
        if g > best:
            best, witnesses = g, [idx]
        elif g == best:
            witnesses.append(idx)
    return best, witnesses


@dataclass
class LemmaReport:
    n: int
    p: int
    max_g: int
    bound: int
    witnesses: list
    matrices_checked: int
    ok: bool

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "p": self.p,
            "max_g": self.max_g,
            "bound": self.bound,
            "ok": self.ok,
            "matrices_checked": self.matrices_checked,
            "witnesses": [w.to_list() for w in self.witnesses],
        }


def verify_lemma(n: int, p: int, jobs: int = 1, limit: int | None = None) -> LemmaReport:
    """Compute g for every n x n matrix over F_p and compare with p^n - 1."""
    require_prime(p)
    if n < 1:
        raise ValueError("n must be positive")
    total = p ** (n * n)
    cap = budget() if limit is None else limit
    if total > cap:
        raise BudgetExceeded(f"{total} matrices exceed the enumeration budget {cap}")
    jobs = max(1, jobs)
    step = -(-total // jobs)
    shards = [(n, p, lo, min(lo + step, total)) for lo in range(0, total, step)]
    if jobs == 1:
        results = [_sweep_range(s) for s in shards]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_sweep_range, shards))
    max_g = max(r[0] for r in results)
    witness_idx = sorted(i for g, ws in results if g == max_g for i in ws)
    bound = p ** n - 1
    return LemmaReport(
        n=n,
        p=p,
        max_g=max_g,
        bound=bound,
        witnesses=[matrix_at(i, n, p) for i in witness_idx],
        matrices_checked=total,
        ok=max_g <= bound,
    )
