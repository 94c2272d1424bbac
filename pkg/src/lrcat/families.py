"""Closed-form built-in categories: SU(2)_k, Ising, Fibonacci, pointed Z_n."""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from .category import CategoryData
from .errors import DegenerateForm, UnsupportedFamily
from .modular import FusionRingData, ModularData, quantum_dims


def build_family(name: str, *params) -> CategoryData:
    if name in ("su2_level_k", "su2"):
        return su2_level_k(*params)
    if name.startswith("su2_level_"):
        return su2_level_k(int(name.rsplit("_", 1)[1]))
    if name == "ising":
        return ising()
    if name == "fibonacci":
        return fibonacci()
    if name == "pointed_cyclic":
        return pointed_cyclic(*params)
    raise UnsupportedFamily(name)


def trivial() -> CategoryData:
    ring = FusionRingData(["0"], [0], np.ones((1, 1, 1), dtype=int))
    return CategoryData(ring, {(0,) * 6: np.ones((1, 1))}, {(0, 0, 0): np.ones((1, 1))},
                        ModularData([[1.0]], [1.0]), name="trivial")


def _ring_from_rule(labels, dual, rule):
    n = len(labels)
    N = np.zeros((n, n, n), dtype=int)
    for a in range(n):
        for b in range(n):
            for c in rule(a, b):
                N[a, b, c] += 1
    dims, w = quantum_dims(N)
    return FusionRingData(labels, dual, N, dims, w)


def _fill_F(ring, fn):
    """F blocks for a multiplicity-free ring from fn(a,b,c,d,e,f) -> scalar."""
    N, n = ring.N, ring.rank
    F = {}
    for a in range(n):
        for b in range(n):
            for c in range(n):
                for d in range(n):
                    for e in range(n):
                        if not (N[a, b, e] and N[e, c, d]):
                            continue
                        for f in range(n):
                            if N[b, c, f] and N[a, f, d]:
                                F[(a, b, c, d, e, f)] = np.array([[fn(a, b, c, d, e, f)]], dtype=complex)
    return F


def _fill_R(ring, fn):
    N, n = ring.N, ring.rank
    return {
        (a, b, c): np.array([[fn(a, b, c)]], dtype=complex)
        for a in range(n)
        for b in range(n)
        for c in range(n)
        if N[a, b, c]
    }


# SU(2)_k ------------------------------------------------------------------

def su2_level_k(k: int) -> CategoryData:
    """Labels are twice the spin, 0..k; real unitary q-6j F-symbols."""
    if k < 1:
        raise UnsupportedFamily(f"su2_level_k needs k >= 1, got {k}")
    n = k + 1

    def rule(a, b):
        return range(abs(a - b), min(a + b, 2 * k - a - b) + 1, 2)

    labels = [str(j) for j in range(n)]
    ring = _ring_from_rule(labels, list(range(n)), rule)
    qn = _qnums(k)

    def F(a, b, c, d, e, f):
        # labels are 2j; sign and 6j in spin units
        sign = (-1) ** ((a + b + c + d) // 2)
        return sign * math.sqrt(qn[e + 1] * qn[f + 1]) * _q6j(k, a, b, e, c, d, f)

    h = lambda j: j * (j + 2) / 4.0  # noqa: E731  j(j+1) with j = label/2
    q = np.exp(2j * np.pi / (k + 2))

    def R(a, b, c):
        return (-1) ** ((c - a - b) // 2) * q ** ((h(c) - h(a) - h(b)) / 2.0)

    twists = np.array([q ** h(j) for j in range(n)])
    S = np.array([[math.sqrt(2 / (k + 2)) * math.sin(math.pi * (a + 1) * (b + 1) / (k + 2))
                   for b in range(n)] for a in range(n)])
    return CategoryData(ring, _fill_F(ring, F), _fill_R(ring, R), ModularData(S, twists),
                        name=f"su2_level_{k}")


def _qnums(k):
    x = math.pi / (k + 2)
    return [math.sin(m * x) / math.sin(x) for m in range(2 * k + 6)]


@lru_cache(maxsize=None)
def _qfact(k, m):
    qn = _qnums(k)
    out = 1.0
    for i in range(1, m + 1):
        out *= qn[i]
    return out


def _delta(k, a, b, c):
    """Triangle coefficient with doubled-spin arguments."""
    return math.sqrt(
        _qfact(k, (a + b - c) // 2) * _qfact(k, (a - b + c) // 2) * _qfact(k, (-a + b + c) // 2)
        / _qfact(k, (a + b + c) // 2 + 1)
    )


def _q6j(k, a, b, e, c, d, f):
    """q-Racah {a b e; c d f} with doubled-spin arguments."""
    tri = [(a, b, e), (a, d, f), (c, b, f), (c, d, e)]
    pref = 1.0
    for t in tri:
        pref *= _delta(k, *t)
    s = [sum(t) // 2 for t in tri]
    m = [(a + b + c + d) // 2, (b + d + e + f) // 2, (a + c + e + f) // 2]
    total = 0.0
    for z in range(max(s), min(m) + 1):
        den = 1.0
        for x in s:
            den *= _qfact(k, z - x)
        for x in m:
            den *= _qfact(k, x - z)
        total += (-1) ** z * _qfact(k, z + 1) / den
    return pref * total


# Ising and Fibonacci ------------------------------------------------------

def ising() -> CategoryData:
    one, sig, psi = 0, 1, 2
    table = {(1, 1): [0, 2], (1, 2): [1], (2, 1): [1], (2, 2): [0]}

    def rule(a, b):
        if a == 0:
            return [b]
        if b == 0:
            return [a]
        return table[(a, b)]

    ring = _ring_from_rule(["1", "sigma", "psi"], [0, 1, 2], rule)
    r2 = 1 / math.sqrt(2)

    def F(a, b, c, d, e, f):
        if (a, b, c, d) == (sig, sig, sig, sig):
            return -r2 if (e, f) == (psi, psi) else r2
        if (a, b, c, d) == (sig, psi, sig, psi) or (a, b, c, d) == (psi, sig, psi, sig):
            return -1.0
        return 1.0

    Rv = {(sig, sig, one): np.exp(-1j * np.pi / 8), (sig, sig, psi): np.exp(3j * np.pi / 8),
          (sig, psi, sig): -1j, (psi, sig, sig): -1j, (psi, psi, one): -1.0}

    def R(a, b, c):
        return Rv.get((a, b, c), 1.0)

    twists = np.array([1, np.exp(1j * np.pi / 8), -1])
    S = 0.5 * np.array([[1, math.sqrt(2), 1], [math.sqrt(2), 0, -math.sqrt(2)], [1, -math.sqrt(2), 1]])
    return CategoryData(ring, _fill_F(ring, F), _fill_R(ring, R), ModularData(S, twists), name="ising")


def fibonacci() -> CategoryData:
    phi = (1 + math.sqrt(5)) / 2

    def rule(a, b):
        if a == 0:
            return [b]
        if b == 0:
            return [a]
        return [0, 1]

    ring = _ring_from_rule(["1", "tau"], [0, 1], rule)
    Ft = np.array([[1 / phi, 1 / math.sqrt(phi)], [1 / math.sqrt(phi), -1 / phi]])

    def F(a, b, c, d, e, f):
        if (a, b, c, d) == (1, 1, 1, 1):
            return Ft[e, f]
        return 1.0

    def R(a, b, c):
        if (a, b) == (1, 1):
            return np.exp(-4j * np.pi / 5) if c == 0 else np.exp(3j * np.pi / 5)
        return 1.0

    twists = np.array([1, np.exp(4j * np.pi / 5)])
    S = np.array([[1, phi], [phi, -1]]) / math.sqrt(2 + phi)
    return CategoryData(ring, _fill_F(ring, F), _fill_R(ring, R), ModularData(S, twists), name="fibonacci")


# pointed ------------------------------------------------------------------

def pointed_cyclic(n: int, p: int = 0, modular: bool | None = None) -> CategoryData:
    """Z_n with quadratic form q(a) = exp(i pi p a^2 / n); requires p*n even.

    F(a,b,c) = (-1)^(p a carry(b,c)) and R(a,b) = exp(i pi p a b / n) with
    representatives in 0..n-1.  ``p = 0`` is the symmetric (trivial) form.
    """
    if n < 1 or (p * n) % 2:
        raise UnsupportedFamily(f"pointed_cyclic needs n >= 1 and p*n even (n={n}, p={p})")
    ring = _ring_from_rule([str(a) for a in range(n)], [(-a) % n for a in range(n)],
                           lambda a, b: [(a + b) % n])

    def F(a, b, c, d, e, f):
        carry = 1 if b + c >= n else 0
        return (-1) ** (p * a * carry)

    def R(a, b, c):
        return np.exp(1j * np.pi * p * a * b / n)

    nondeg = math.gcd(p % (2 * n), n) == 1 if n > 1 else True
    if modular and not nondeg:
        raise DegenerateForm(f"q(a)=exp(i pi {p} a^2/{n}) is degenerate")
    twists = np.array([np.exp(1j * np.pi * p * a * a / n) for a in range(n)])
    # S from monodromy; unitary exactly when the form is non-degenerate
    S = np.array([[np.exp(-2j * np.pi * p * a * b / n) for b in range(n)] for a in range(n)]) / math.sqrt(n)
    md = ModularData(S, twists)
    return CategoryData(ring, _fill_F(ring, F), _fill_R(ring, R), md, name=f"pointed_Z{n}_p{p}")


def nondegenerate_forms(n: int) -> list[int]:
    return [p for p in range(2 * n) if (p * n) % 2 == 0 and math.gcd(p, n) == 1] if n > 1 else [0]
