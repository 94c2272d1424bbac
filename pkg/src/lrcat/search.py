"""Exhaustive search for modular invariants and the E6 identity check."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import qr

from .errors import SearchIncomplete
from .families import su2_level_k
from .linalg import nullspace
from .modular import ModularData

CHUNK = 200_000


@dataclass
class SearchResult:
    invariants: list
    free_parameters: int
    candidates: int
    entry_bound: int
    complete: bool = True


def _commutant_basis(md: ModularData):
    """Real basis of {Z : ZS = SZ, ZT = TZ} restricted to T-compatible entries."""
    S = np.asarray(md.S, dtype=complex)
    th = np.asarray(md.twists)
    n = S.shape[0]
    slots = [(i, j) for i in range(n) for j in range(n) if abs(th[i] - th[j]) < 1e-9]
    rows = []
    for a in range(n):
        for b in range(n):
            # (ZS - SZ)_{ab} = sum_k Z_ak S_kb - S_ak Z_kb
            r = np.zeros(len(slots), dtype=complex)
            for s, (i, j) in enumerate(slots):
                if i == a:
                    r[s] += S[j, b]
                if j == b:
                    r[s] -= S[a, i]
            rows.append(r)
    M = np.array(rows)
    # Z is real, so split the complex constraints into real and imaginary parts
    K = nullspace(np.vstack([M.real, M.imag])).real
    return slots, K


def search_invariants(md: ModularData, entry_bound: int = 2) -> SearchResult:
    """All non-negative integer Z with Z_00 = 1, entries <= entry_bound, commuting with S and T.

    The commutant is parametrized by a set of pivot entries; every assignment
    of the pivots in 0..entry_bound is tried, so the result is exhaustive for
    the bound.
    """
    n = md.S.shape[0]
    slots, K = _commutant_basis(md)
    r = K.shape[1]
    if r == 0:
        return SearchResult([], 0, 0, entry_bound)
    _, _, piv = qr(K.T, pivoting=True)
    piv = np.sort(piv[:r])
    coef = K @ np.linalg.inv(K[piv, :])  # every slot as a combination of the pivot slots
    z00 = slots.index((0, 0))
    found = []
    total = 0
    ranges = [range(entry_bound + 1)] * r
    if z00 in piv:
        ranges[list(piv).index(z00)] = range(1, 2)
    it = itertools.product(*ranges)
    while True:
        chunk = np.array(list(itertools.islice(it, CHUNK)), dtype=float)
        if not len(chunk):
            break
        total += len(chunk)
        vals = chunk @ coef.T
        rnd = np.rint(vals)
        ok = np.all(np.abs(vals - rnd) < 1e-6, axis=1)
        ok &= np.all((rnd >= 0) & (rnd <= entry_bound), axis=1)
        ok &= rnd[:, z00] == 1
        for row in rnd[ok]:
            Z = np.zeros((n, n), dtype=int)
            for s, (i, j) in enumerate(slots):
                Z[i, j] = int(row[s])
            found.append(Z)
    found.sort(key=lambda Z: (int(np.abs(Z - np.eye(n, dtype=int)).sum()), tuple(Z.ravel())))
    return SearchResult(found, r, total, entry_bound)


@dataclass
class E6Report:
    level: int
    invariants: list
    e6: np.ndarray | None
    vacuum_sum: float
    expected: float
    residual: float
    threshold: float = 1e-9
    search: SearchResult | None = field(default=None, repr=False)

    @property
    def passed(self) -> bool:
        return self.e6 is not None and self.residual < self.threshold

    def __bool__(self):
        return self.passed


def vacuum_sum(Z, dims) -> float:
    """sum_lam d_lam Z_{lam 0}."""
    return float(np.dot(dims, np.asarray(Z)[:, 0]))


def e6_identity_check(entry_bound: int = 2, tol: float = 1e-9) -> E6Report:
    """Find the exceptional level-10 invariant and evaluate sum_lam d_lam Z_{lam 0}."""
    cat = su2_level_k(10)
    res = search_invariants(cat.modular, entry_bound)
    dims = cat.dims
    expected = 3 + math.sqrt(3)
    # exceptional: the vacuum column reaches past 0 but not the simple current k
    e6 = None
    for Z in res.invariants:
        col = np.nonzero(Z[:, 0])[0].tolist()
        if len(col) > 1 and 10 not in col:
            e6 = Z
            break
    if e6 is None:
        raise SearchIncomplete(f"no exceptional invariant within entry bound {entry_bound}")
    v = vacuum_sum(e6, dims)
    return E6Report(10, res.invariants, e6, v, expected, abs(v - expected), tol, res)
