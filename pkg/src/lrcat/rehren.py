"""Q-system in C x C^rev built from the intertwiners alpha^+_lam -> alpha^-_mu.

For a Q-system A in C every orthonormal phi in Hom(alpha^+_lam, alpha^-_mu)
contributes one summand lam x mu^rev to Gamma.  The multiplication pairs two
intertwiners through the isomorphisms alpha^s_lam1 (x)_A alpha^s_lam2 = alpha^s_{lam1 lam2}
and projects onto a third.  With A trivial this reproduces the Longo-Rehren
presentation exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .center import PRES_TOL, QSystemPresentation, _validate, reverse_product
from .induction import InducedSystem, hom_space_between, inner, relative_tensor
from .morphisms import (
    UNIT,
    Morphism,
    assemble,
    braid_objects,
    categorical_dim,
    flatten,
    identity,
    obj,
    otensor,
    tensor,
    vertex,
)


def _flat(cat, lam, A):
    return flatten(cat, otensor(obj(lam), A))


class _Inductions:
    """Cached flattenings and product isometries for one induced system."""

    def __init__(self, sys: InducedSystem):
        self.sys = sys
        self.cat = sys.q.cat
        self.A = sys.q.obj
        self._u: dict = {}
        self._J: dict = {}

    def alpha(self, sign, lam):
        return (self.sys.alpha_plus if sign > 0 else self.sys.alpha_minus)[lam]

    def u(self, lam) -> Morphism:
        """lam A -> flat object carrying alpha^+-(lam)."""
        if lam not in self._u:
            self._u[lam] = _flat(self.cat, lam, self.A)
        return self._u[lam]

    def J(self, sign, l1, l2) -> Morphism:
        """Isometry lam1 lam2 A -> X1 X2 onto alpha_lam1 (x)_A alpha_lam2."""
        key = (sign, l1, l2)
        if key not in self._J:
            cat = self.cat
            X2 = self.alpha(sign, l2)
            X1obj = self.alpha(sign, l1).obj
            L1 = identity(cat, obj(l1))
            J = (tensor(self.u(l1), identity(cat, X2.obj))
                 @ tensor(L1, X2.left.dag)
                 @ tensor(L1, self.u(l2)))
            s = (J.dag @ J).maxabs()
            self._J[key] = (1.0 / math.sqrt(s)) * J if s > 0 else J
            assert self._J[key].cod == otensor(X1obj, X2.obj)
        return self._J[key]


@dataclass
class RehrenSummand:
    lam: int
    mu: int
    phi: Morphism  # alpha^+_lam -> alpha^-_mu, <phi, phi> = 1


def intertwiner_basis(sys: InducedSystem) -> list[RehrenSummand]:
    """Orthonormal intertwiners, ordered by (lam, mu); the unit summand is exactly 1_A."""
    n = sys.q.cat.rank
    out = []
    for lam in range(n):
        for mu in range(n):
            if not sys.Z[lam, mu]:
                continue
            if lam == 0 and mu == 0:
                out.append(RehrenSummand(0, 0, identity(sys.q.cat, sys.alpha_plus[0].obj)))
                continue
            hs = hom_space_between(sys.alpha_plus[lam], sys.alpha_minus[mu])
            out.extend(RehrenSummand(lam, mu, f) for f in hs.basis)
    return out


def _pair_coefficient(ind: _Inductions, s1, s2, s3, e1, e2) -> complex:
    """<phi_3, u (t2 x 1) J^-* (phi_1 x phi_2) J^+ (t1* x 1) u*>."""
    cat, A = ind.cat, ind.A
    IA = identity(cat, A)
    t1 = vertex(cat, s1.lam, s2.lam, s3.lam, e1)
    t2 = vertex(cat, s1.mu, s2.mu, s3.mu, e2)
    R = (ind.u(s3.mu) @ tensor(t2, IA) @ ind.J(-1, s1.mu, s2.mu).dag
         @ tensor(s1.phi, s2.phi)
         @ ind.J(+1, s1.lam, s2.lam) @ tensor(t1.dag, IA) @ ind.u(s3.lam).dag)
    return inner(s3.phi, R)


def build_rehren_qsystem(sys: InducedSystem, tol: float = PRES_TOL, validate: bool = True) -> QSystemPresentation:
    """Gamma = sum over intertwiners phi: alpha^+_lam -> alpha^-_mu of lam x mu^rev."""
    cat = sys.q.cat
    n = cat.rank
    N, d = cat.N, cat.dims
    amb = reverse_product(cat)
    ind = _Inductions(sys)
    summ = intertwiner_basis(sys)
    G = tuple((s.lam * n + s.mu,) for s in summ)
    w_gamma = float(sum(d[s.lam] * d[s.mu] for s in summ))
    GG = otensor(G, G)
    parts: dict = {}
    S = len(summ)
    for i1, s1 in enumerate(summ):
        for i2, s2 in enumerate(summ):
            for i3, s3 in enumerate(summ):
                n1 = N[s1.lam, s2.lam, s3.lam]
                n2 = N[s1.mu, s2.mu, s3.mu]
                if not (n1 and n2):
                    continue
                K = (d[s1.lam] * d[s2.lam] * d[s1.mu] * d[s2.mu] / (d[s3.lam] * d[s3.mu])) ** 0.25
                K /= math.sqrt(w_gamma)
                acc = None
                for e1 in range(n1):
                    for e2 in range(n2):
                        c = _pair_coefficient(ind, s1, s2, s3, e1, e2)
                        if abs(c) < 1e-13:
                            continue
                        v = (K * c) * vertex(amb, G[i1][0], G[i2][0], G[i3][0], e1 * n2 + e2)
                        acc = v if acc is None else acc + v
                if acc is not None:
                    # parts are keyed by (cod word, dom word) positions
                    key = (i3, i1 * S + i2)
                    parts[key] = acc if key not in parts else parts[key] + acc
    m = assemble(amb, GG, G, parts)
    V = Morphism(amb, UNIT, G)
    V.blocks[0][0, 0] = 1.0
    pres = QSystemPresentation(amb, G, V, m.dag, w_gamma,
                               [(s.lam, s.mu, k) for k, s in enumerate(summ)], n)
    if validate:
        _validate(pres, tol)
    return pres


def orthonormality_residual(pres: QSystemPresentation) -> float:
    """max |E(U_l U_l'*) - delta dim(U_l) / d_Gamma| over summand inclusions U_l.

    E is the normalized categorical trace on End(Gamma).
    """
    amb, G = pres.ambient, pres.gamma
    dG = categorical_dim(amb, G)
    inc = []
    for k, (c,) in enumerate(G):
        U = Morphism(amb, ((c,),), G)
        pos = [j for j in range(k) if G[j] == (c,)]
        U.blocks[c][len(pos), 0] = 1.0
        inc.append(U)
    worst = 0.0
    for i, Ui in enumerate(inc):
        for j, Uj in enumerate(inc):
            if G[i] != G[j]:
                continue
            e = (Ui @ Uj.dag).trace() / dG
            want = amb.dims[G[i][0]] / dG if i == j else 0.0
            worst = max(worst, abs(e - want))
    return worst


# relative braiding of ambichiral bimodules ------------------------------------

def _embeddings(sys: InducedSystem, t: int, sign: int) -> list:
    """(lam, T) with T: beta_t -> alpha^sign_lam an isometric bimodule map."""
    beta = sys.simples[t]
    out = []
    for lam in range(sys.q.cat.rank):
        alpha = (sys.alpha_plus if sign > 0 else sys.alpha_minus)[lam]
        if beta.underlying and not any(a and b for a, b in zip(beta.underlying, alpha.underlying)):
            continue
        for T in hom_space_between(beta, alpha).basis:
            out.append((lam, T))
    return out


class RelativeBraiding:
    """eps(beta, beta'): beta (x)_A beta' -> beta' (x)_A beta on the ambichiral system."""

    def __init__(self, sys: InducedSystem, sign: int = 1):
        self.sys = sys
        self.sign = sign
        self.ind = _Inductions(sys)
        self._prod: dict = {}
        self._emb = {t: _embeddings(sys, t, sign) for t in sys.ambichiral}

    def product(self, t1, t2):
        if (t1, t2) not in self._prod:
            self._prod[(t1, t2)] = relative_tensor(self.sys.simples[t1], self.sys.simples[t2])
        return self._prod[(t1, t2)]

    def _to_induced(self, t1, t2, c1, c2) -> Morphism:
        (l1, T1), (l2, T2) = self._emb[t1][c1], self._emb[t2][c2]
        Y = self.product(t1, t2)
        return self.ind.J(self.sign, l1, l2).dag @ tensor(T1, T2) @ Y.embedding

    def eps(self, t1, t2, c1: int = 0, c2: int = 0) -> Morphism:
        cat, A = self.ind.cat, self.ind.A
        l1, l2 = self._emb[t1][c1][0], self._emb[t2][c2][0]
        e12 = self._to_induced(t1, t2, c1, c2)
        e21 = self._to_induced(t2, t1, c2, c1)
        c = tensor(braid_objects(cat, obj(l1), obj(l2), self.sign), identity(cat, A))
        return e21.dag @ c @ e12

    def naturality_residual(self, t1, t2) -> float:
        """Spread of eps over every choice of embeddings into induced objects."""
        ref = self.eps(t1, t2)
        worst = 0.0
        for c1 in range(len(self._emb[t1])):
            for c2 in range(len(self._emb[t2])):
                worst = max(worst, (self.eps(t1, t2, c1, c2) - ref).maxabs())
        return worst

    def monodromy(self, t1, t2) -> Morphism:
        return self.eps(t2, t1) @ self.eps(t1, t2)


@dataclass
class MonodromyEntry:
    pair: tuple
    channel: int
    scalar: complex
    scalar_residual: float
    expected: complex


def ambichiral_twists(sys: InducedSystem) -> dict:
    """theta of each ambichiral bimodule, read off any lam with b+ > 0."""
    tw = sys.q.cat.twists
    out = {}
    for r, t in enumerate(sys.ambichiral):
        lams = np.nonzero(sys.b_plus[r])[0]
        out[t] = complex(tw[lams[0]])
    return out


def monodromy_table(sys: InducedSystem, rb: RelativeBraiding | None = None) -> list[MonodromyEntry]:
    """Monodromy on each channel beta'' of beta (x)_A beta' against theta''/(theta theta')."""
    rb = rb or RelativeBraiding(sys)
    th = ambichiral_twists(sys)
    out = []
    for t1 in sys.ambichiral:
        for t2 in sys.ambichiral:
            M = rb.monodromy(t1, t2)
            Y = rb.product(t1, t2)
            for t3 in sys.ambichiral:
                for f in hom_space_between(sys.simples[t3], Y).basis:
                    Mf = M @ f
                    s = inner(f, Mf)
                    res = (Mf - s * f).maxabs()
                    out.append(MonodromyEntry((t1, t2), t3, complex(s), float(res), th[t3] / (th[t1] * th[t2])))
    return out


# theorem-level reports ----------------------------------------------------------

@dataclass
class DualityReport:
    index_value: float
    w_full: float
    index_residual: float
    multiplicities_match: bool
    presentation_residuals: dict
    orthonormality: float
    twist_mismatch: float  # |theta_lam - theta_mu| over Z_{lam mu} > 0
    monodromy_scalar: float
    monodromy_twist: float
    naturality: float
    threshold: float = 1e-8

    @property
    def passed(self) -> bool:
        vals = [self.index_residual, self.orthonormality, self.twist_mismatch, self.monodromy_scalar,
                self.monodromy_twist, self.naturality, *self.presentation_residuals.values()]
        return self.multiplicities_match and all(v < self.threshold for v in vals)

    def __bool__(self):
        return self.passed


def verify_duality(sys: InducedSystem, tol: float = 1e-8) -> DualityReport:
    cat = sys.q.cat
    d, tw = cat.dims, cat.twists
    n = cat.rank
    pres = build_rehren_qsystem(sys, validate=False)
    idx = float(sum(sys.Z[l, m] * d[l] * d[m] for l in range(n) for m in range(n)))
    tmis = max((abs(tw[l] - tw[m]) for l in range(n) for m in range(n) if sys.Z[l, m]), default=0.0)
    rb = RelativeBraiding(sys)
    table = monodromy_table(sys, rb)
    nat = max((rb.naturality_residual(a, b) for a in sys.ambichiral for b in sys.ambichiral), default=0.0)
    return DualityReport(
        index_value=idx,
        w_full=sys.w_full,
        index_residual=abs(idx - sys.w_full),
        multiplicities_match=bool(np.array_equal(pres.multiplicities(), sys.Z)),
        presentation_residuals=pres.relations(),
        orthonormality=orthonormality_residual(pres),
        twist_mismatch=float(tmis),
        monodromy_scalar=max((e.scalar_residual for e in table), default=0.0),
        monodromy_twist=max((abs(e.scalar - e.expected) for e in table), default=0.0),
        naturality=nat,
        threshold=tol,
    )


@dataclass
class MixedReport:
    b_plus: np.ndarray
    b_plus_recount: np.ndarray
    index_value: float
    w_plus: float

    @property
    def passed(self) -> bool:
        return bool(np.array_equal(self.b_plus, self.b_plus_recount)) and abs(self.index_value - self.w_plus) < 1e-8

    def __bool__(self):
        return self.passed


def verify_mixed(sys: InducedSystem) -> MixedReport:
    """Mixed canonical object sum b+_{tau lam} lam x tau^opp over ambichiral tau.

    Multiplicities are recounted from orthonormal bases of Hom(alpha^+_lam, tau).
    """
    cat = sys.q.cat
    n = cat.rank
    amb = sys.ambichiral
    B = np.array([[len(hom_space_between(sys.alpha_plus[l], sys.simples[t]).basis) for l in range(n)]
                  for t in amb], dtype=int).reshape(len(amb), n)
    idx = float(sum(B[r, l] * cat.dims[l] * sys.dims[t] for r, t in enumerate(amb) for l in range(n)))
    return MixedReport(sys.b_plus, B, idx, sys.w_plus)


def coefficient_agreement(p1: QSystemPresentation, p2: QSystemPresentation) -> float:
    """max |m1 - m2| after rephasing the summands of p1 to match p2.

    Summand phases g are fixed from the pairing channels s s' -> 1, where the
    coefficient picks up g_s g_s'.
    """
    if p1.gamma != p2.gamma:
        return float("inf")
    G = p1.gamma
    S = len(G)
    m1, m2 = p1.W.dag, p2.W.dag
    g = np.ones(S, dtype=complex)
    fixed = {0}
    for s in range(1, S):
        if s in fixed:
            continue
        for t in range(S):
            a = m1.part(0, s * S + t).vector()
            if not a.size or np.linalg.norm(a) < 1e-12:
                continue
            b = m2.part(0, s * S + t).vector()
            r = np.vdot(a, b) / np.vdot(a, a)
            r /= abs(r) if abs(r) > 1e-12 else 1.0
            if t == s:
                g[s] = np.sqrt(r)
            elif t in fixed:
                g[s] = r / g[t]
            else:
                g[s], g[t] = r, 1.0
                fixed.add(t)
            fixed.add(s)
            break
    worst = 0.0
    for i3 in range(S):
        for i1 in range(S):
            for i2 in range(S):
                a = m1.part(i3, i1 * S + i2).vector()
                if not a.size:
                    continue
                b = m2.part(i3, i1 * S + i2).vector()
                worst = max(worst, float(np.abs(a * g[i1] * g[i2] * np.conj(g[i3]) - b).max()))
    return worst
