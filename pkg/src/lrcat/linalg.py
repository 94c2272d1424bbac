"""Null spaces and splitting of finite-dimensional *-algebras of matrices."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import orth

from .errors import NotClosed

log = logging.getLogger(__name__)

RANK_TOL = 1e-7


def nullspace(M: np.ndarray, tol: float = RANK_TOL) -> np.ndarray:
    """Orthonormal basis (columns) of ker M; logs the singular-value gap."""
    M = np.atleast_2d(np.asarray(M, dtype=complex))
    n = M.shape[1]
    if M.shape[0] == 0:
        return np.eye(n, dtype=complex)
    scale = max(1.0, float(np.abs(M).max()))
    _, s, vh = np.linalg.svd(M, full_matrices=True)
    s_full = np.zeros(n)
    s_full[: len(s)] = s
    keep = s_full <= tol * scale
    if log.isEnabledFor(logging.DEBUG):
        small = s_full[keep]
        big = s_full[~keep]
        if len(small) and len(big):
            log.debug("rank gap %.3g / %.3g", small.max(), big.min())
    return vh[keep].conj().T


def rank(M: np.ndarray, tol: float = RANK_TOL) -> int:
    M = np.asarray(M)
    if M.size == 0:
        return 0
    s = np.linalg.svd(M, compute_uv=False)
    return int(np.sum(s > tol * max(1.0, s.max() if len(s) else 1.0)))


def range_basis(P: np.ndarray, tol: float = RANK_TOL) -> np.ndarray:
    """Orthonormal basis of the range of a (near) projection."""
    if P.size == 0:
        return np.zeros((P.shape[0], 0), dtype=complex)
    return orth(P, rcond=tol)


@dataclass
class SimpleBlock:
    """One simple summand M_n of the algebra.

    ``central`` is the minimal central projection, ``units[i][j]`` the matrix
    units (``units[i][i]`` are minimal projections), ``size`` = n.
    """

    central: np.ndarray
    units: list
    size: int

    @property
    def minimal(self) -> list:
        return [self.units[i][i] for i in range(self.size)]

    @property
    def rank(self) -> int:
        return int(round(np.trace(self.central).real))


def _orth_span(mats, tol=RANK_TOL):
    """Canonical orthonormal basis of span(mats), independent of their order.

    The projector onto the span is applied to the standard basis in
    lexicographic order and the results are Gram-Schmidt orthonormalized.
    """
    if not mats:
        return []
    shape = mats[0].shape
    A = np.array([m.ravel() for m in mats]).T
    Q = orth(A, rcond=tol) if A.size else A
    k = Q.shape[1]
    if k == 0:
        return []
    coords = []
    for row in Q:
        v = row.conj()
        if np.linalg.norm(v) < 1e-6:
            continue
        for u in coords:
            v = v - (u.conj() @ v) * u
        nv = np.linalg.norm(v)
        if nv > 1e-6:
            coords.append(v / nv)
            if len(coords) == k:
                break
    C = np.array(coords).T
    B = Q @ C
    return [B[:, i].reshape(shape) for i in range(k)]


def algebra_basis(gens, check: bool = True, tol: float = 1e-8) -> list:
    """Orthonormal (Hilbert-Schmidt) basis of the span of ``gens``.

    With ``check`` the span must be closed under products and adjoints.
    """
    basis = _orth_span([np.asarray(g, dtype=complex) for g in gens])
    if check and basis:
        B = np.array([b.ravel() for b in basis]).T
        proj = B @ B.conj().T
        worst = 0.0
        for x in basis:
            for y in basis:
                v = (x @ y).ravel()
                worst = max(worst, np.linalg.norm(v - proj @ v))
            v = x.conj().T.ravel()
            worst = max(worst, np.linalg.norm(v - proj @ v))
        if worst > tol * max(1.0, len(basis)):
            raise NotClosed(f"span not closed under product/adjoint (residual {worst:.3g})")
    return basis


def _generic_hermitian(mats, shift: int = 0) -> np.ndarray:
    """Deterministic self-adjoint element: sum of sym parts with weights pi^-i."""
    n = mats[0].shape[0]
    h = np.zeros((n, n), dtype=complex)
    for i, m in enumerate(mats):
        w = math.pi ** (-(i + shift))
        h += w * (m + m.conj().T) / 2
        h += (w / math.e) * (1j * (m - m.conj().T)) / 2
    return h


def _group_eigs(vals, tol):
    groups, cur = [], [0]
    for i in range(1, len(vals)):
        if vals[i] - vals[i - 1] > tol:
            groups.append(cur)
            cur = [i]
        else:
            cur.append(i)
    groups.append(cur)
    return groups


def _center_basis(basis):
    """Orthonormal basis of the center of the algebra spanned by ``basis``."""
    k = len(basis)
    if k == 0:
        return []
    rows = []
    for b in basis:
        rows.append(np.array([(x @ b - b @ x).ravel() for x in basis]).T)
    M = np.vstack(rows)
    K = nullspace(M)
    return _orth_span([sum(K[i, j] * basis[i] for i in range(k)) for j in range(K.shape[1])])


def split_idempotents(gens, check: bool = True) -> list[SimpleBlock]:
    """Decompose the *-algebra generated (spanned) by ``gens`` into matrix blocks.

    Returns one :class:`SimpleBlock` per minimal central projection, in a
    canonical order that does not depend on the order of ``gens``.
    """
    basis = algebra_basis(gens, check=check)
    if not basis:
        return []
    center = _center_basis(basis)
    blocks: list[SimpleBlock] = []
    cprojs = _central_projections(center, basis)
    for P in cprojs:
        corner = _orth_span([P @ b @ P for b in basis])
        blocks.append(_matrix_units(P, corner))
    blocks.sort(key=lambda b: _canon_key(b.central))
    return blocks


def _central_projections(center, basis):
    """Minimal central projections from a generic central self-adjoint element."""
    for shift in range(4):
        h = _generic_hermitian(center, shift) if center else np.zeros_like(basis[0])
        out = []
        unit = sum(b @ b.conj().T for b in basis)  # support of the algebra
        supp = range_basis(unit)
        hs = supp.conj().T @ h @ supp
        vals, vecs = np.linalg.eigh((hs + hs.conj().T) / 2)
        ok = True
        for g in _group_eigs(vals, 1e-6):
            V = supp @ vecs[:, g]
            P = V @ V.conj().T
            # a minimal central projection has a one-dimensional central corner
            zc = rank(np.array([(P @ z).ravel() for z in center]).T) if center else 1
            if zc != 1:
                ok = False
                break
            out.append(P)
        if ok:
            return out
    raise NotClosed("could not separate central projections")


def _matrix_units(P, corner):
    """Matrix units of the simple algebra ``corner`` with unit ``P``."""
    supp = range_basis(P)
    r = supp.shape[1]
    red = [supp.conj().T @ b @ supp for b in corner]
    dimA = len(red)
    size = int(round(math.sqrt(dimA)))
    if size * size != dimA:
        raise NotClosed(f"corner of dimension {dimA} is not a full matrix algebra")
    if size == 1:
        return SimpleBlock(P, [[P]], 1)
    for shift in range(4):
        h = _generic_hermitian(red, shift)
        vals, vecs = np.linalg.eigh((h + h.conj().T) / 2)
        groups = _group_eigs(vals, 1e-6)
        if len(groups) == size and all(len(g) == r // size for g in groups):
            break
    else:
        raise NotClosed("could not find minimal projections")
    mins = []
    for g in groups:
        V = supp @ vecs[:, g]
        mins.append(V @ V.conj().T)
    # e_{i0}: normalized p_i x p_0 for the basis element x with largest overlap
    units = [[None] * size for _ in range(size)]
    units[0][0] = mins[0]
    for i in range(1, size):
        best = max(corner, key=lambda x: np.linalg.norm(mins[i] @ x @ mins[0]))
        y = mins[i] @ best @ mins[0]
        c = np.trace(y.conj().T @ y).real / np.trace(mins[0]).real
        units[i][0] = y / math.sqrt(c)
    for i in range(size):
        for j in range(size):
            if i == 0 and j == 0:
                continue
            ei0 = units[i][0] if i else mins[0]
            ej0 = units[j][0] if j else mins[0]
            units[i][j] = ei0 @ ej0.conj().T
    return SimpleBlock(P, units, size)


def _canon_key(P):
    d = np.round(np.real(np.diag(P)), 6)
    return (int(round(np.trace(P).real)), tuple(-x for x in d))


def hermitian_orthonormalize(vectors, gram_fn) -> list:
    """Gram-Schmidt of ``vectors`` under the inner product ``gram_fn(x, y)``."""
    out = []
    for v in vectors:
        for u in out:
            v = v - gram_fn(u, v) * u
        nrm = math.sqrt(max(gram_fn(v, v).real, 0.0))
        if nrm > 1e-9:
            out.append(v / nrm)
    return out
