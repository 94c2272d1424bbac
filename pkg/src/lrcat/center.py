"""Longo-Rehren and Rehren Q-systems, half-braidings and the tube-algebra center."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .category import CategoryData, conjugate_category, product_category
from .errors import ClosureOverflow, ValidationFailed
from .induction import QSystemData
from .linalg import nullspace, rank
from .morphisms import (
    UNIT,
    Morphism,
    assemble,
    braid,
    categorical_dim,
    covertex,
    identity,
    obj,
    otensor,
    tensor,
    vertex,
)

log = logging.getLogger(__name__)

PRES_TOL = 1e-8


# presentations ----------------------------------------------------------------

@dataclass(eq=False)
class QSystemPresentation:
    """(Gamma, V, W) with V: id -> Gamma, W: Gamma -> Gamma Gamma isometries."""

    ambient: CategoryData
    gamma: tuple
    V: Morphism
    W: Morphism
    w_value: float
    summands: list = field(default_factory=list)  # provenance per summand of gamma
    base_rank: int = 0

    def as_qsystem(self) -> QSystemData:
        return QSystemData(self.ambient, self.gamma, self.W.dag, self.V, name="presentation")

    def relations(self) -> dict:
        cat, G = self.ambient, self.gamma
        V, W = self.V, self.W
        I = identity(cat, G)
        s = self.w_value ** -0.5
        GV = tensor(I, V)
        GW = tensor(I, W)
        return {
            "W*V = w^-1/2": (W.dag @ tensor(V, I) - s * I).maxabs(),
            "Gamma(V*)W = w^-1/2": (GV.dag @ W - s * I).maxabs(),
            "W*Gamma(W) = WW*": (tensor(W.dag, I) @ GW - W @ W.dag).maxabs(),
            "Gamma(W)W = W^2": (GW @ W - tensor(W, I) @ W).maxabs(),
            "W*W = V*V = 1": max((W.dag @ W - I).maxabs(), abs((V.dag @ V).scalar() - 1)),
        }

    def passed(self, tol: float = PRES_TOL) -> bool:
        return all(v < tol for v in self.relations().values())

    def multiplicities(self) -> np.ndarray:
        """Multiplicity matrix of base-label pairs (lam, mu) in gamma."""
        n = self.base_rank
        M = np.zeros((n, n), dtype=int)
        for (p,) in self.gamma:
            M[p // n, p % n] += 1
        return M


def reverse_product(cat: CategoryData) -> CategoryData:
    """C x C^rev, with C^rev realized as the complex-conjugate category."""
    key = "_lr_ambient"
    amb = cat._cache.get(key)
    if amb is None:
        amb = product_category(cat, conjugate_category(cat), name=f"{cat.name}x{cat.name}^rev")
        cat._cache[key] = amb
    return amb


def build_lr_qsystem(cat: CategoryData, tol: float = PRES_TOL, validate: bool = True) -> QSystemPresentation:
    """Gamma = sum_b b x b^opp with coefficients sqrt(d1 d2 / (w d3))."""
    n = cat.rank
    N, d, w = cat.N, cat.dims, float(cat.ring.w)
    amb = reverse_product(cat)
    G = tuple((b * n + b,) for b in range(n))
    GG = otensor(G, G)
    parts = {}
    for i in range(n):
        for j in range(n):
            for k in range(n):
                if not N[i, j, k]:
                    continue
                coef = math.sqrt(d[i] * d[j] / (w * d[k]))
                acc = None
                for l_ in range(N[i, j, k]):
                    v = vertex(amb, i * n + i, j * n + j, k * n + k, l_ * N[i, j, k] + l_)
                    acc = v if acc is None else acc + v
                parts[(k, i * n + j)] = coef * acc
    m = assemble(amb, GG, G, parts)
    V = Morphism(amb, UNIT, G)
    V.blocks[0][0, 0] = 1.0
    pres = QSystemPresentation(amb, G, V, m.dag, w, [(b, b, 0) for b in range(n)], n)
    if validate:
        _validate(pres, tol)
    return pres


def _validate(pres, tol):
    rel = pres.relations()
    bad = {k: v for k, v in rel.items() if not v < tol}
    if bad:
        k, v = max(bad.items(), key=lambda kv: kv[1])
        raise ValidationFailed(f"{k} violated (residual {v:.3g})")


# half-braidings -----------------------------------------------------------------

@dataclass(eq=False)
class HalfBraiding:
    """e(y): Z y -> y Z for every simple y of the ambient category."""

    cat: CategoryData
    obj: tuple
    table: dict
    name: str = ""

    def bfe_residual(self) -> float:
        """max over fusion vertices T: z -> x y of |e(z)(1 x T*) - (T* x 1)(1 x e(y))(e(x) x 1)|."""
        cat = self.cat
        Z = self.obj
        IZ = identity(cat, Z)
        worst = 0.0
        for x in range(cat.rank):
            for y in range(cat.rank):
                lhs_r = tensor(identity(cat, obj(x)), self.table[y]) @ tensor(self.table[x], identity(cat, obj(y)))
                for z in range(cat.rank):
                    for k in range(cat.N[x, y, z]):
                        Td = vertex(cat, x, y, z, k)
                        a = self.table[z] @ tensor(IZ, Td)
                        b = tensor(Td, IZ) @ lhs_r
                        worst = max(worst, (a - b).maxabs())
        return worst

    def unitarity_residual(self) -> float:
        return max((e @ e.dag - identity(self.cat, e.cod)).maxabs() for e in self.table.values())

    def twist(self) -> complex:
        """Tr(c_{Z,Z}) / d_Z, with c_{Z,Z} assembled from e on the words of Z."""
        return self._twist_trace()

    def word(self, w) -> Morphism:
        """e(w): Z w -> w Z for a word w of simples."""
        cat, Z = self.cat, self.obj
        if len(w) == 0:
            return identity(cat, Z)
        out = self.table[w[0]]
        for k in range(1, len(w)):
            prev = tensor(identity(cat, (tuple(w[:k]),)), self.table[w[k]])
            out = prev @ tensor(out, identity(cat, obj(w[k])))
        return out

    def _twist_trace(self) -> complex:
        cat, Z = self.cat, self.obj
        dZ = categorical_dim(cat, Z)
        if len(Z) == 1:
            e = self.word(Z[0])
            # e(Z): Z Z -> Z Z for a single-word Z
            return e.trace() / dZ
        # only the block from Z_j w_j to w_j Z_j contributes to the trace
        tot = 0j
        for j, w in enumerate(Z):
            tot += self.word(w).part(j, j).trace()
        return tot / dZ


def braided_half_braiding(cat: CategoryData, lam: int, mu: int) -> HalfBraiding:
    """Object lam mu with e(y) = (c_{lam,y} x 1)(1 x c_{y,mu}^{-1})."""
    Z = obj(lam, mu)
    table = {}
    for y in range(cat.rank):
        a = tensor(identity(cat, obj(lam)), braid(cat, mu, y, -1))  # lam mu y -> lam y mu
        b = tensor(braid(cat, lam, y, 1), identity(cat, obj(mu)))  # lam y mu -> y lam mu
        table[y] = b @ a
    return HalfBraiding(cat, Z, table, name=f"{cat.ring.labels[lam]}|{cat.ring.labels[mu]}")


# tube algebra -----------------------------------------------------------------------

@dataclass
class CenterObject:
    underlying: tuple  # multiplicity of each simple
    dim: float
    twist: complex
    half_braiding: HalfBraiding | None = None
    bfe_residual: float | None = None


class TubeAlgebra:
    """Basis elements (a, x, b, c, i, j): entry (i, j) of charge c in Hom(x a, b x)."""

    def __init__(self, cat: CategoryData):
        self.cat = cat
        n, N = cat.rank, cat.N
        self.basis = []
        for a in range(n):
            for x in range(n):
                for b in range(n):
                    for c in range(n):
                        for i in range(N[b, x, c]):
                            for j in range(N[x, a, c]):
                                self.basis.append((a, x, b, c, i, j))
        self.index = {t: k for k, t in enumerate(self.basis)}
        self.D = len(self.basis)

    def element(self, t) -> Morphism:
        a, x, b, c, i, j = t
        m = Morphism(self.cat, obj(x, a), obj(b, x))
        m.blocks[c][i, j] = 1.0
        return m

    def _coords(self, m: Morphism, a, z, c) -> dict:
        out = {}
        for ch, blk in m.blocks.items():
            for i in range(blk.shape[0]):
                for j in range(blk.shape[1]):
                    if abs(blk[i, j]) > 1e-14:
                        out[self.index[(a, z, c, ch, i, j)]] = blk[i, j]
        return out

    def structure_constants(self) -> np.ndarray:
        """C[k, s, t]: coefficient of basis k in (s * t), s after t."""
        cat = self.cat
        n, N = cat.rank, cat.N
        D = self.D
        C = np.zeros((D, D, D), dtype=complex)
        by_src: dict = {}
        for k, (a, x, b, c, i, j) in enumerate(self.basis):
            by_src.setdefault(a, []).append(k)
        for t_idx, t in enumerate(self.basis):
            a, x, b = t[0], t[1], t[2]
            f = self.element(t)
            for s_idx in by_src[b]:
                _, y, c = self.basis[s_idx][:3]
                g = self.element(self.basis[s_idx])
                mid = tensor(g, identity(cat, obj(x))) @ tensor(identity(cat, obj(y)), f)
                for z in range(n):
                    for k in range(N[y, x, z]):
                        prod = (tensor(identity(cat, obj(c)), vertex(cat, y, x, z, k)) @ mid
                                @ tensor(covertex(cat, z, y, x, k), identity(cat, obj(a))))
                        for idx, v in self._coords(prod, a, z, c).items():
                            C[idx, s_idx, t_idx] += v
        return C

    def unit(self) -> np.ndarray:
        u = np.zeros(self.D, dtype=complex)
        for a in range(self.cat.rank):
            u[self.index[(a, 0, a, a, 0, 0)]] = 1.0
        return u

    def dehn_twist(self) -> np.ndarray:
        """sum_a of id_{a a} in the x = a sector."""
        cat = self.cat
        t = np.zeros(self.D, dtype=complex)
        for a in range(cat.rank):
            for c in range(cat.rank):
                for i in range(cat.N[a, a, c]):
                    t[self.index[(a, a, a, c, i, i)]] = 1.0
        return t


def compute_center(cat: CategoryData, max_simples: int = 4096) -> list[CenterObject]:
    tube = TubeAlgebra(cat)
    C = tube.structure_constants()
    D = tube.D
    # center: z with z*t = t*z for all basis t
    rows = []
    for t in range(D):
        # (z*t - t*z)_k = sum_s z_s (C[k, s, t] - C[k, t, s])
        rows.append(C[:, :, t] - C[:, t, :])
    M = np.vstack(rows)
    Zb = nullspace(M)
    nz = Zb.shape[1]
    if nz > max_simples:
        raise ClosureOverflow(f"{nz} center simples exceed bound {max_simples}")
    # eigenvectors of multiplication by a generic central element are
    # multiples of the primitive idempotents
    weights = np.array([1.0 / (k + math.pi) for k in range(nz)])
    z = Zb @ weights
    Lz = np.einsum("kst,s->kt", C, z)
    A = np.linalg.lstsq(Zb, Lz @ Zb, rcond=None)[0]
    vals, vecs = np.linalg.eig(A)
    gaps = np.abs(vals[:, None] - vals[None, :]) + np.eye(nz)
    if nz > 1 and gaps.min() < 1e-8:
        raise ClosureOverflow("central eigenvalue collision")
    idems = []
    for k in range(nz):
        v = Zb @ vecs[:, k]
        vv = np.einsum("kst,s,t->k", C, v, v)
        c = np.vdot(v, vv) / np.vdot(v, v)
        idems.append(v / c)
    twist_el = tube.dehn_twist()
    out = []
    n = cat.rank
    for e in idems:
        Le = np.einsum("kst,s->kt", C, e)
        und = []
        for a in range(n):
            cols = [tube.index[t] for t in tube.basis if t[0] == a and t[2] == a]
            r = rank(Le[:, cols], 1e-7)
            und.append(int(round(math.sqrt(r))))
        te = np.einsum("kst,s,t->k", C, twist_el, e)
        theta = complex(np.vdot(e, te) / np.vdot(e, e))
        dim = float(sum(und[a] * cat.dims[a] for a in range(n)))
        out.append(CenterObject(tuple(und), dim, theta))
    out.sort(key=lambda o: (round(o.dim, 8), o.underlying, round(np.angle(o.twist), 8)))
    if cat.braided:
        _attach_half_braidings(cat, out)
    return out


def _attach_half_braidings(cat, objs):
    """Match each tube simple with a braided object lam x mu^rev of equal data."""
    n = cat.rank
    tw = cat.twists
    if tw is None:
        return
    used = set()
    for o in objs:
        for lam in range(n):
            for mu in range(n):
                if (lam, mu) in used:
                    continue
                und = tuple(int(cat.N[lam, mu, a]) for a in range(n))
                if und != o.underlying:
                    continue
                if abs(tw[lam] * np.conj(tw[mu]) - o.twist) > 1e-7:
                    continue
                hb = braided_half_braiding(cat, lam, mu)
                o.half_braiding = hb
                o.bfe_residual = hb.bfe_residual()
                used.add((lam, mu))
                break
            if o.half_braiding is not None:
                break
