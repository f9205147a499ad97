"""Exact multivariate integer polynomials and polynomial self-maps of affine space.

Points are plain tuples of Python ints; matrices are tuples of row tuples.
Everything here is immutable and exact.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .arith import require_prime
from .errors import DimensionError

Point = tuple  # tuple[int, ...]
IntMatrix = tuple  # tuple[tuple[int, ...], ...]


def _grlex_key(exponents):
    # descending total degree, then descending lexicographic exponent vector
    return (-sum(exponents), tuple(-e for e in exponents))


@dataclass(frozen=True)
class Polynomial:
    """A polynomial in ``num_vars`` variables with integer coefficients.

    ``terms`` holds ``(exponents, coefficient)`` pairs in graded-lex order
    (highest degree first) with no zero coefficients, so structural equality
    is polynomial equality.
    """

    num_vars: int
    terms: tuple = ()

    def __post_init__(self):
        if self.num_vars < 1:
            raise ValueError("num_vars must be positive")
        for exps, c in self.terms:
            if len(exps) != self.num_vars:
                raise DimensionError(f"exponent vector {exps} has wrong length")
            if c == 0:
                raise ValueError("zero coefficient stored")

    @classmethod
    def from_dict(cls, num_vars: int, terms: Mapping) -> "Polynomial":
        items = []
        for exps, c in terms.items():
            if c:
                exps = tuple(int(e) for e in exps)
                if any(e < 0 for e in exps):
                    raise ValueError("negative exponent")
                items.append((exps, int(c)))
        items.sort(key=lambda t: _grlex_key(t[0]))
        return cls(num_vars, tuple(items))

    @classmethod
    def constant(cls, num_vars: int, c: int) -> "Polynomial":
        return cls.from_dict(num_vars, {(0,) * num_vars: c})

    @classmethod
    def variable(cls, num_vars: int, index: int) -> "Polynomial":
        exps = [0] * num_vars
        exps[index] = 1
        return cls(num_vars, ((tuple(exps), 1),))

    def as_dict(self) -> dict:
        return dict(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self) -> int:
        return max((sum(e) for e, _ in self.terms), default=0)

    def constant_term(self) -> int:
        return self.as_dict().get((0,) * self.num_vars, 0)

    def _check(self, other):
        if self.num_vars != other.num_vars:
            raise DimensionError("polynomials live in different numbers of variables")

    def __add__(self, other):
        if isinstance(other, int):
            other = Polynomial.constant(self.num_vars, other)
        self._check(other)
        acc = self.as_dict()
        for e, c in other.terms:
            acc[e] = acc.get(e, 0) + c
        return Polynomial.from_dict(self.num_vars, acc)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.num_vars, tuple((e, -c) for e, c in self.terms))

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            if other == 0:
                return Polynomial(self.num_vars)
            return Polynomial(self.num_vars, tuple((e, c * other) for e, c in self.terms))
        self._check(other)
        acc: dict = {}
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                e = tuple(a + b for a, b in zip(e1, e2))
                acc[e] = acc.get(e, 0) + c1 * c2
        return Polynomial.from_dict(self.num_vars, acc)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        result = Polynomial.constant(self.num_vars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def evaluate(self, point: Sequence[int]) -> int:
        if len(point) != self.num_vars:
            raise DimensionError(f"expected {self.num_vars} coordinates, got {len(point)}")
        total = 0
        for exps, c in self.terms:
            term = c
            for x, e in zip(point, exps):
                if e:
                    term *= x**e
            total += term
        return total

    def derivative(self, j: int) -> "Polynomial":
        acc = {}
        for exps, c in self.terms:
            if exps[j]:
                e = list(exps)
                e[j] -= 1
                acc[tuple(e)] = c * exps[j]
        return Polynomial.from_dict(self.num_vars, acc)

    def reduce(self, p: int) -> "Polynomial":
        return Polynomial.from_dict(self.num_vars, {e: c % p for e, c in self.terms})

    def substitute(self, polys: Sequence["Polynomial"]) -> "Polynomial":
        """Compose: replace variable i by ``polys[i]``."""
        if len(polys) != self.num_vars:
            raise DimensionError("substitution arity mismatch")
        target_vars = polys[0].num_vars
        powers: dict = {}

        def power(i, e):
            if (i, e) not in powers:
                powers[(i, e)] = polys[i] ** e
            return powers[(i, e)]

        total = Polynomial(target_vars)
        for exps, c in self.terms:
            term = Polynomial.constant(target_vars, c)
            for i, e in enumerate(exps):
                if e:
                    term = term * power(i, e)
            total = total + term
        return total


def _monomial_source(exps, names):
    factors = []
    for name, e in zip(names, exps):
        if e == 1:
            factors.append(name)
        elif e > 1:
            factors.append(f"{name}**{e}")
    return factors


def _poly_source(poly: Polynomial, names) -> str:
    parts = []
    for exps, c in poly.terms:
        parts.append("*".join([f"({c})"] + _monomial_source(exps, names)))
    return " + ".join(parts) if parts else "0"


@dataclass(frozen=True)
class PolyMap:
    """An endomorphism f = (f_1, ..., f_N) of affine N-space over Z."""

    components: tuple
    _cache: dict = field(default_factory=dict, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        comps = tuple(self.components)
        object.__setattr__(self, "components", comps)
        if not comps:
            raise DimensionError("a map needs at least one component")
        n = len(comps)
        for c in comps:
            if c.num_vars != n:
                raise DimensionError(
                    f"component in {c.num_vars} variables for a map of dimension {n}"
                )

    def __getstate__(self):
        return {"components": self.components}

    def __setstate__(self, state):
        object.__setattr__(self, "components", state["components"])
        object.__setattr__(self, "_cache", {})

    @property
    def dim(self) -> int:
        return len(self.components)

    @classmethod
    def identity(cls, n: int) -> "PolyMap":
        return cls(tuple(Polynomial.variable(n, i) for i in range(n)))

    @classmethod
    def from_dicts(cls, n: int, dicts: Sequence[Mapping]) -> "PolyMap":
        return cls(tuple(Polynomial.from_dict(n, d) for d in dicts))

    @classmethod
    def affine(cls, matrix: Sequence[Sequence[int]], offset: Sequence[int]) -> "PolyMap":
        """x -> matrix @ x + offset."""
        n = len(matrix)
        comps = []
        for i in range(n):
            d = {(0,) * n: offset[i]}
            for j in range(n):
                e = [0] * n
                e[j] = 1
                d[tuple(e)] = matrix[i][j]
            comps.append(Polynomial.from_dict(n, d))
        return cls(tuple(comps))

    def _compiled(self, p=None):
        key = ("fn", p)
        fn = self._cache.get(key)
        if fn is None:
            names = [f"x{i}" for i in range(self.dim)]
            if p is None:
                body = ", ".join(_poly_source(c, names) for c in self.components)
            else:
                body = ", ".join(f"({_poly_source(c, names)}) % {p}" for c in self.components)
            src = f"def _f(pt):\n    {', '.join(names)}, = pt\n    return ({body},)\n"
            namespace: dict = {}
            exec(compile(src, "<polymap>", "exec"), namespace)
            fn = self._cache[key] = namespace["_f"]
        return fn

    def __call__(self, point: Sequence[int]) -> Point:
        if len(point) != self.dim:
            raise DimensionError(f"point has {len(point)} coordinates, map has dimension {self.dim}")
        return self._compiled()(point)

    def step_mod(self, point: Sequence[int], p: int) -> Point:
        """Unchecked evaluation mod p (hot path for orbit walks)."""
        return self._compiled(p)(point)


def _check_dim(f: PolyMap, point) -> None:
    if len(point) != f.dim:
        raise DimensionError(f"point has {len(point)} coordinates, map has dimension {f.dim}")


def eval_map(f: PolyMap, P: Sequence[int]) -> Point:
    _check_dim(f, P)
    return tuple(c.evaluate(P) for c in f.components)


def eval_map_mod(f: PolyMap, P: Sequence[int], p: int) -> Point:
    require_prime(p)
    _check_dim(f, P)
    if any(not 0 <= a < p for a in P):
        raise ValueError(f"residues must lie in [0, {p})")
    return f.step_mod(tuple(P), p)


def iterate(f: PolyMap, P: Sequence[int], k: int) -> Point:
    _check_dim(f, P)
    pt = tuple(P)
    for _ in range(k):
        pt = f(pt)
    return pt


def translate_conjugate(f: PolyMap, P: Sequence[int]) -> PolyMap:
    """The map h(x) = f(x + P) - P, expanded exactly."""
    _check_dim(f, P)
    n = f.dim
    shifted = [Polynomial.variable(n, i) + a for i, a in enumerate(P)]
    return PolyMap(tuple(c.substitute(shifted) - a for c, a in zip(f.components, P)))


def jacobian_at(f: PolyMap, P: Sequence[int]) -> IntMatrix:
    _check_dim(f, P)
    return tuple(
        tuple(c.derivative(j).evaluate(P) for j in range(f.dim)) for c in f.components
    )


def mat_mul(A: IntMatrix, B: IntMatrix) -> IntMatrix:
    cols = list(zip(*B))
    return tuple(tuple(sum(a * b for a, b in zip(row, col)) for col in cols) for row in A)


def jacobian_along_orbit(f: PolyMap, P: Sequence[int], k: int) -> IntMatrix:
    """Jacobian of f^k at P as the ordered product D(f^{k-1}(P)) ... D(P)."""
    if k < 1:
        raise ValueError("k must be positive")
    _check_dim(f, P)
    pt = tuple(P)
    J = jacobian_at(f, pt)
    for _ in range(k - 1):
        pt = f(pt)
        J = mat_mul(jacobian_at(f, pt), J)
    return J


def reduce_mod(f: PolyMap, p: int) -> PolyMap:
    require_prime(p)
    return PolyMap(tuple(c.reduce(p) for c in f.components))
