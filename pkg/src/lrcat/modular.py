"""Fusion rings, modular data and the Verlinde formula."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import Inconsistent, NotModular, NotUnitary

TOL = 1e-9


@dataclass(frozen=True, eq=False)
class FusionRingData:
    """Labels, duals, fusion multiplicities and statistical dimensions.

    ``N[i, j, k]`` is the multiplicity of ``k`` in ``i * j``. Label ``0`` is
    always the unit.
    """

    labels: tuple[str, ...]
    dual: tuple[int, ...]
    N: np.ndarray
    dims: np.ndarray = field(default=None)
    w: float = field(default=None)

    def __post_init__(self):
        N = np.asarray(self.N, dtype=int)
        object.__setattr__(self, "N", N)
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(self, "dual", tuple(int(x) for x in self.dual))
        if self.dims is None:
            dims, w = quantum_dims(N)
            object.__setattr__(self, "dims", dims)
            object.__setattr__(self, "w", w)
        else:
            dims = np.asarray(self.dims, dtype=float)
            object.__setattr__(self, "dims", dims)
            if self.w is None:
                object.__setattr__(self, "w", float(np.sum(dims**2)))

    @property
    def rank(self) -> int:
        return len(self.labels)

    def index(self, label) -> int:
        if isinstance(label, (int, np.integer)):
            return int(label)
        return self.labels.index(label)

    def channels(self, a: int, b: int) -> list[int]:
        return [int(c) for c in np.nonzero(self.N[a, b])[0]]

    def validate(self, tol: float = TOL) -> None:
        """Raise :class:`Inconsistent` naming the first violated ring axiom."""
        check_ring(self.N, self.dual, self.dims, tol)


def check_ring(N, dual, dims=None, tol: float = TOL) -> None:
    N = np.asarray(N)
    n = N.shape[0]
    if N.shape != (n, n, n):
        raise Inconsistent(f"N has shape {N.shape}, expected ({n}, {n}, {n})")
    if np.any(N < 0):
        raise Inconsistent("negative fusion multiplicity")
    eye = np.eye(n, dtype=int)
    if not (np.array_equal(N[0], eye) and np.array_equal(N[:, 0, :], eye)):
        raise Inconsistent("unit law N_0j^k = N_j0^k = delta_jk fails")
    for i in range(n):
        if dual[dual[i]] != i:
            raise Inconsistent(f"dual is not an involution at label {i}")
        for j in range(n):
            if N[i, j, 0] != (1 if j == dual[i] else 0):
                raise Inconsistent(f"duality pairing fails at ({i}, {j})")
    lhs = np.einsum("ijm,mkl->ijkl", N, N)
    rhs = np.einsum("jkm,iml->ijkl", N, N)
    bad = np.argwhere(lhs != rhs)
    if len(bad):
        i, j, k, l = (int(x) for x in bad[0])
        raise Inconsistent(f"associativity fails at quadruple ({i}, {j}, {k}, {l})")
    if dims is not None:
        dims = np.asarray(dims)
        err = np.abs(np.einsum("i,j->ij", dims, dims) - N @ dims).max()
        if err > max(tol, 1e-9 * dims.max() ** 2):
            raise Inconsistent(f"d_i d_j != sum_k N_ij^k d_k (residual {err:.3g})")


def quantum_dims(N, tol: float = 1e-12, max_iter: int = 100000) -> tuple[np.ndarray, float]:
    """Perron-Frobenius dimensions by power iteration.

    Iterates the regular-representation element ``sum_i N_i`` (which shares
    the PF eigenvector of every ``N_i``) from the all-ones vector.
    """
    N = np.asarray(N, dtype=float)
    n = N.shape[0]
    # (N_i)_{jk} = N_ij^k ; the dims vector d satisfies N_i d = d_i d
    M = N.sum(axis=0) + np.eye(n)  # shift keeps the iteration aperiodic
    v = np.ones(n)
    for _ in range(max_iter):
        u = M @ v
        u /= u[0] if u[0] != 0 else np.linalg.norm(u)
        if np.abs(u - v).max() < tol:
            v = u
            break
        v = u
    if np.array_equal(M, M.T):
        # polish with a symmetric eigensolve; the top eigenvector is the PF one
        vals, vecs = np.linalg.eigh(M)
        top = vecs[:, -1]
        if np.all(np.abs(top) > 0) and abs(vals[-1] - vals[-2] if n > 1 else 1) > 1e-9:
            v = top
    dims = v / v[0]
    err = np.abs(np.outer(dims, dims) - np.einsum("ijk,k->ij", N, dims)).max()
    if err > 1e-7 * max(1.0, dims.max() ** 2):
        raise Inconsistent(f"d_i d_j != sum_k N_ij^k d_k (residual {err:.3g})")
    return dims, float(np.sum(dims**2))


@dataclass(frozen=True, eq=False)
class ModularData:
    S: np.ndarray
    T: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "S", np.asarray(self.S, dtype=complex))
        T = np.asarray(self.T, dtype=complex)
        if T.ndim == 1:
            T = np.diag(T)
        object.__setattr__(self, "T", T)

    @property
    def twists(self) -> np.ndarray:
        return np.diag(self.T)


def unitarity_residual(S) -> float:
    S = np.asarray(S, dtype=complex)
    return float(np.linalg.norm(S @ S.conj().T - np.eye(len(S)), 2))


def verlinde_fusion(S, tol: float = 1e-6) -> np.ndarray:
    """N_ij^k = sum_m S_im S_jm conj(S_km) / S_0m, rounded to integers."""
    S = np.asarray(S, dtype=complex)
    res = unitarity_residual(S)
    if res > 1e-9:
        raise NotUnitary(f"||S S^+ - I|| = {res:.3g}")
    if np.any(np.abs(S[0].imag) > 1e-12) or np.any(S[0].real <= 0):
        raise NotModular("row 0 of S must be strictly positive")
    Nf = np.einsum("im,jm,km,m->ijk", S, S, S.conj(), 1.0 / S[0])
    N = np.rint(Nf.real).astype(int)
    dev = max(np.abs(Nf - N).max(), 0.0)
    if dev > tol:
        raise NotModular(f"Verlinde coefficients deviate from integers by {dev:.3g}")
    return N


@dataclass
class NondegeneracyReport:
    nondegenerate: bool
    residual: float

    def __bool__(self):
        return self.nondegenerate


def check_nondegenerate(md: ModularData, tol: float = TOL) -> NondegeneracyReport:
    res = unitarity_residual(md.S)
    return NondegeneracyReport(res < tol, res)


def s_from_braiding(ring: FusionRingData, twists) -> np.ndarray:
    """S_ab = (1/sqrt w) sum_c N_{a* b}^c theta_c/(theta_a theta_b) d_c.

    Built purely from twists and fusion rules; a symmetric (degenerate)
    braiding gives a rank-deficient matrix.
    """
    t = np.asarray(twists, dtype=complex)
    n = ring.rank
    S = np.zeros((n, n), dtype=complex)
    for a in range(n):
        ad = ring.dual[a]
        for b in range(n):
            S[a, b] = sum(
                ring.N[ad, b, c] * t[c] / (t[ad] * t[b]) * ring.dims[c] for c in range(n)
            )
    return S / np.sqrt(ring.w)
