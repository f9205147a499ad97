"""Seeded generators of test maps and points.

``periodic_corpus`` builds pairs that are periodic by construction: finite
order affine maps of the plane, conjugated by unimodular matrices,
translations and triangular polynomial automorphisms, plus quadratics on the
line with a prescribed 1- or 2-cycle.  ``random_pairs`` draws unstructured
small maps for soundness testing.
"""
from __future__ import annotations

import random
from typing import Iterator

from .poly import PolyMap, Polynomial

# finite-order elements of GL_2(Z), keyed by order
FINITE_ORDER_2x2 = {
    1: [((1, 0), (0, 1))],
    2: [((-1, 0), (0, -1)), ((0, 1), (1, 0)), ((1, 0), (0, -1)), ((1, 1), (0, -1))],
    3: [((0, -1), (1, -1)), ((-1, -1), (1, 0))],
    4: [((0, -1), (1, 0)), ((0, 1), (-1, 0))],
    6: [((0, -1), (1, 1)), ((1, -1), (1, 0))],
}


def _mul(A, B):
    return tuple(tuple(sum(A[i][k] * B[k][j] for k in range(2)) for j in range(2)) for i in range(2))


def random_unimodular(rng: random.Random, steps: int = 3):
    """A product of elementary matrices; returns (U, U^-1)."""
    U = Uinv = ((1, 0), (0, 1))
    for _ in range(steps):
        t = rng.randint(-2, 2)
        if rng.random() < 0.5:
            E, Einv = ((1, t), (0, 1)), ((1, -t), (0, 1))
        else:
            E, Einv = ((1, 0), (t, 1)), ((1, 0), (-t, 1))
        U, Uinv = _mul(U, E), _mul(Einv, Uinv)
    return U, Uinv


def triangular_conjugate(f: PolyMap, q: Polynomial) -> PolyMap:
    """phi^-1 o f o phi for phi(x, y) = (x, y + q(x))."""
    x, y = Polynomial.variable(2, 0), Polynomial.variable(2, 1)
    phi = [x, y + q]
    f1, f2 = (c.substitute(phi) for c in f.components)
    return PolyMap((f1, f2 - q.substitute([f1, y])))


def periodic_corpus(count: int, seed: int = 0) -> list[tuple[PolyMap, tuple]]:
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        kind = rng.random()
        if kind < 0.15:
            # f(x) = a (x - u)(x - w) + u + w - x swaps u and w; or fixes u
            u, w = rng.randint(-6, 6), rng.randint(-6, 6)
            a = rng.choice([-2, -1, 1, 2])
            t = Polynomial.variable(1, 0)
            if rng.random() < 0.7 and u != w:
                f = PolyMap((a * (t - u) * (t - w) + (u + w) - t,))
                out.append((f, (rng.choice([u, w]),)))
            else:
                out.append((PolyMap((a * (t - u) * (t - w) + u,)), (u,)))
            continue
        order = rng.choice(sorted(FINITE_ORDER_2x2))
        A = rng.choice(FINITE_ORDER_2x2[order])
        U, Uinv = random_unimodular(rng)
        M = _mul(_mul(U, A), Uinv)
        T = (rng.randint(-20, 20), rng.randint(-20, 20))
        # f(z) = M (z - T) + T
        offset = tuple(T[i] - sum(M[i][j] * T[j] for j in range(2)) for i in range(2))
        f = PolyMap.affine(M, offset)
        P = (T[0] + rng.randint(-3, 3), T[1] + rng.randint(-3, 3))
        if kind > 0.7:
            q = Polynomial.from_dict(2, {(2, 0): rng.choice([-1, 1]), (1, 0): rng.randint(-2, 2)})
            f = triangular_conjugate(f, q)
            P = (P[0], P[1] - q.evaluate(P))
        out.append((f, P))
    return out


def random_map(rng: random.Random, N: int, degree: int = 2, coeff: int = 2,
               density: float = 0.4) -> PolyMap:
    monos = list(_exponents(N, degree))
    comps = []
    for _ in range(N):
        d = {e: rng.randint(-coeff, coeff) for e in monos if rng.random() < density}
        comps.append(Polynomial.from_dict(N, d))
    return PolyMap(tuple(comps))


def _exponents(N, degree) -> Iterator[tuple]:
    if N == 1:
        for k in range(degree + 1):
            yield (k,)
        return
    for k in range(degree + 1):
        for rest in _exponents(N - 1, degree - k):
            yield (k,) + rest


def random_pairs(count: int, seed: int = 0, max_dim: int = 2, degree: int = 2,
                 coeff: int = 2, box: int = 3) -> list[tuple[PolyMap, tuple]]:
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        N = rng.randint(1, max_dim)
        f = random_map(rng, N, degree, coeff)
        P = tuple(rng.randint(-box, box) for _ in range(N))
        out.append((f, P))
    return out
