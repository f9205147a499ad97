"""Local-global decomposition certificates for integral periodic points.

For a point P of exact period n under f and a prime p, let m be the period
of P mod p.  Then n = m * d0 * p^e with d0 prime to p, and d0 divides
g(D~), where D~ is the Jacobian of f^m at P reduced mod p.  ``decompose``
computes every quantity in that statement from scratch and records each
intermediate identity it relies on as a named boolean check.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from math import gcd
from typing import Sequence

from .arith import require_prime
from .bounds import (  # noqa: F401  (re-exported: bounds belong to this module's API)
    BoundsReport,
    bound_divisor,
    bound_elementary,
    bound_plane,
    bounds_report,
    candidate_periods,
    largest_prime_below,
    valuation,
)
from .dynamics import DecideConfig, decide_periodic, orbit_mod_p
from .errors import NotPeriodicError, TheoremViolation
from .poly import PolyMap, jacobian_at, mat_mul
from .zmod import ModMatrix, g_of, mat_pow

log = logging.getLogger(__name__)


@dataclass
class DecompositionCertificate:
    p: int
    n: int
    m: int
    e: int
    d0: int
    g: int
    r: int | None
    v: tuple | None
    D_tilde: ModMatrix
    checks: dict

    @property
    def valid(self) -> bool:
        return all(self.checks.values())

    def failed_checks(self) -> list[str]:
        return [name for name, ok in self.checks.items() if not ok]

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "n": self.n,
            "m": self.m,
            "e": self.e,
            "d0": self.d0,
            "g": self.g,
            "r": self.r,
            "v": list(self.v) if self.v is not None else None,
            "D_tilde": self.D_tilde.to_list(),
            "checks": dict(self.checks),
        }


def _min_valuation(vec, p):
    vals = [valuation(a, p) for a in vec if a]
    return min(vals) if vals else None


def _split_p(x: int, p: int) -> tuple[int, int]:
    e = 0
    while x % p == 0:
        x //= p
        e += 1
    return x, e


def decompose(
    f: PolyMap,
    P: Sequence[int],
    p: int,
    n: int | None = None,
    config: DecideConfig | None = None,
    strict: bool = False,
) -> DecompositionCertificate:
    """Build and check the decomposition n = m * d0 * p^e for the periodic point P.

    ``n`` may be passed when the period is already certified; otherwise it
    is obtained from ``decide_periodic``.  With ``strict`` a failed check
    raises ``TheoremViolation`` instead of only marking the certificate.
    """
    require_prime(p)
    P = tuple(int(a) for a in P)
    if n is None:
        decision = decide_periodic(f, P, config)
        if decision.status != "periodic":
            raise NotPeriodicError(f"{P} is not a certified periodic point ({decision.status})")
        n = decision.primitive_period
    N = f.dim

    orbit = [P]
    for _ in range(n):
        orbit.append(f(orbit[-1]))
    if orbit[n] != P or any(pt == P for pt in orbit[1:n]):
        raise NotPeriodicError(f"{P} does not have exact period {n}")

    m = orbit_mod_p(f, P, p).local_period
    checks: dict = {}
    checks["local_period_divides"] = m is not None and n % m == 0
    if not checks["local_period_divides"]:
        return _finish(p, n, m or 0, 0, 0, 0, None, None, ModMatrix.zero(N, p), checks, strict)
    q = n // m

    # Jacobian of f^j at P for j = 0..n, as exact integer matrices
    jac = [tuple(tuple(int(i == j) for j in range(N)) for i in range(N))]
    for pt in orbit[:n]:
        jac.append(mat_mul(jacobian_at(f, pt), jac[-1]))
    D = jac[m]
    D_tilde = ModMatrix(p, D)
    g = g_of(D_tilde)
    d0, e = _split_p(q, p)

    checks["factorization"] = n == m * d0 * p**e
    checks["d0_coprime"] = gcd(d0, p) == 1
    checks["d0_bound"] = d0 <= p**N - 1
    checks["lemma_bound"] = g <= p**N - 1
    # D(f^(mk))~ = (D~)^k since P~ is fixed by f~^m
    checks["chain_rule"] = all(
        ModMatrix(p, jac[m * k]) == mat_pow(D_tilde, k) for k in range(q + 1)
    )

    r = v = None
    if q > 1:
        # offsets of the f^m orbit from P: o_k = f^(mk)(P) - P
        offsets = [tuple(a - b for a, b in zip(orbit[m * k], P)) for k in range(q + 1)]
        r = _min_valuation(offsets[1], p)
        checks["offset_nonzero"] = r is not None
        if r is None:
            return _finish(p, n, m, e, d0, g, None, None, D_tilde, checks, strict)
        checks["r_positive"] = r >= 1
        v = tuple((a // p**r) % p for a in offsets[1])
        checks["v_nonzero"] = any(v)
        checks["valuation_floor"] = all(
            all(a % p**r == 0 for a in o) for o in offsets[1:]
        )
        # o_k = (I + D + ... + D^(k-1)) o_1 mod p^(2r)
        mod = p ** (2 * r)
        s = offsets[1]
        lin_ok = True
        for k in range(1, q + 1):
            if any((a - b) % mod for a, b in zip(offsets[k], s)):
                lin_ok = False
                break
            s = tuple((o + sum(d * x for d, x in zip(row, s))) % mod
                      for o, row in zip(offsets[1], D))
        checks["linearization"] = lin_ok
        # (I + D~ + ... + D~^(q-1)) v~ = 0 in F_p^N
        acc, w = [0] * N, v
        for _ in range(q):
            acc = [(a + b) % p for a, b in zip(acc, w)]
            w = D_tilde.apply(w)
        checks["residue_identity"] = not any(acc)
        checks["fixed_direction"] = mat_pow(D_tilde, q).apply(v) == v
        checks["d0_divides_g"] = g % d0 == 0

    return _finish(p, n, m, e, d0, g, r, v, D_tilde, checks, strict)


def _finish(p, n, m, e, d0, g, r, v, D_tilde, checks, strict):
    cert = DecompositionCertificate(p, n, m, e, d0, g, r, v, D_tilde, checks)
    if not cert.valid:
        msg = f"decomposition checks failed for p={p}, n={n}: {cert.failed_checks()}"
        log.error(msg)
        if strict:
            raise TheoremViolation(msg)
    return cert
