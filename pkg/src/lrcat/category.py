"""F- and R-symbol storage, coherence checks and gauge transformations.

Conventions
-----------
``T^{ab}_{c,mu}`` denotes an isometric splitting vertex ``c -> a b``.  The
left tree ``L(e; mu, nu) = (T^{ab}_{e,mu} x 1_c) T^{ec}_{d,nu}`` and the right
tree ``R(f; kappa, lam) = (1_a x T^{bc}_{f,kappa}) T^{af}_{d,lam}`` are related
by ``R(f) = sum_e F^{abc}_d[(e,mu,nu), (f,kappa,lam)] L(e)``.

The braiding acts as ``c_{a,b} T^{ab}_{c,mu} = sum_nu R^{ab}_c[nu, mu] T^{ba}_{c,nu}``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .errors import MissingBlock, ShapeMismatch
from .modular import FusionRingData, ModularData

TOL = 1e-9


@dataclass(eq=False)
class CategoryData:
    ring: FusionRingData
    F: dict  # (a,b,c,d,e,f) -> array (N_ab^e N_ec^d, N_bc^f N_af^d)
    R: dict | None = None  # (a,b,c) -> array (N_ba^c, N_ab^c)
    modular: ModularData | None = None
    name: str = "category"
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def N(self):
        return self.ring.N

    @property
    def dims(self):
        return self.ring.dims

    @property
    def rank(self):
        return self.ring.rank

    @property
    def dual(self):
        return self.ring.dual

    @property
    def braided(self) -> bool:
        return self.R is not None

    def tree3(self, a, b, c, d) -> list[tuple[int, int, int]]:
        """Left-tree basis (e, mu, nu) of Hom(d, (ab)c)."""
        key = ("L", a, b, c, d)
        if key not in self._cache:
            N = self.N
            self._cache[key] = [
                (e, mu, nu)
                for e in range(self.rank)
                for mu in range(N[a, b, e])
                for nu in range(N[e, c, d])
            ]
        return self._cache[key]

    def rtree3(self, a, b, c, d) -> list[tuple[int, int, int]]:
        """Right-tree basis (f, kappa, lam) of Hom(d, a(bc))."""
        key = ("R", a, b, c, d)
        if key not in self._cache:
            N = self.N
            self._cache[key] = [
                (f, ka, la)
                for f in range(self.rank)
                for ka in range(N[b, c, f])
                for la in range(N[a, f, d])
            ]
        return self._cache[key]

    def Fmat(self, a, b, c, d) -> np.ndarray:
        """Full F^{abc}_d, rows = left trees, columns = right trees."""
        key = ("F", a, b, c, d)
        if key in self._cache:
            return self._cache[key]
        N = self.N
        rows, cols = self.tree3(a, b, c, d), self.rtree3(a, b, c, d)
        M = np.zeros((len(rows), len(cols)), dtype=complex)
        rpos = {}
        for i, (e, mu, nu) in enumerate(rows):
            rpos.setdefault(e, i)
        cpos = {}
        for j, (f, ka, la) in enumerate(cols):
            cpos.setdefault(f, j)
        for e in rpos:
            for f in cpos:
                blk = self.F.get((a, b, c, d, e, f))
                if blk is None:
                    raise MissingBlock(f"F block {(a, b, c, d, e, f)} missing")
                nr, nc = N[a, b, e] * N[e, c, d], N[b, c, f] * N[a, f, d]
                blk = np.asarray(blk, dtype=complex).reshape(nr, nc)
                M[rpos[e] : rpos[e] + nr, cpos[f] : cpos[f] + nc] = blk
        self._cache[key] = M
        return M

    def Rmat(self, a, b, c, sign: int = 1) -> np.ndarray:
        """Braiding matrix on Hom(c, ab) -> Hom(c, ba); ``sign=-1`` gives c_{b,a}^{-1}."""
        if self.R is None:
            from .errors import MissingBraiding

            raise MissingBraiding(f"{self.name} has no R-symbols")
        if sign > 0:
            blk = self.R.get((a, b, c))
            if blk is None:
                raise MissingBlock(f"R block {(a, b, c)} missing")
            return np.asarray(blk, dtype=complex).reshape(self.N[b, a, c], self.N[a, b, c])
        return self.Rmat(b, a, c, 1).conj().T

    def admissible_F_keys(self):
        N, n = self.N, self.rank
        for a, b, c, d in itertools.product(range(n), repeat=4):
            for e in range(n):
                if not (N[a, b, e] and N[e, c, d]):
                    continue
                for f in range(n):
                    if N[b, c, f] and N[a, f, d]:
                        yield (a, b, c, d, e, f)

    def admissible_R_keys(self):
        N, n = self.N, self.rank
        for a, b, c in itertools.product(range(n), repeat=3):
            if N[a, b, c]:
                yield (a, b, c)

    def clear_cache(self):
        self._cache.clear()

    @property
    def twists(self) -> np.ndarray | None:
        if self.modular is not None:
            return self.modular.twists
        return None


@dataclass
class ResidualReport:
    name: str
    residual: float
    threshold: float
    worst: tuple | None = None
    instances: int = 0

    @property
    def passed(self) -> bool:
        return self.residual < self.threshold

    def __bool__(self):
        return self.passed


def check_pentagon(cat: CategoryData, tol: float = TOL) -> ResidualReport:
    """Largest deviation between the two F-move paths ((ab)c)d -> a(b(cd))."""
    N, n = cat.N, cat.rank
    worst, worst_key, count = 0.0, None, 0
    for a, b, c, d in itertools.product(range(n), repeat=4):
        for e in range(n):
            if not any(N[a, b, q] and N[q, c, p] and N[p, d, e] for q in range(n) for p in range(n)):
                continue
            res = _pentagon_instance(cat, a, b, c, d, e)
            count += 1
            if res > worst:
                worst, worst_key = res, (a, b, c, d, e)
    return ResidualReport("pentagon", worst, tol, worst_key, count)


def _full_left4(cat, a, b, c, d, e):
    """Basis (p, q, al, mu, nu) of ((ab)_q c)_p d -> e."""
    N, n = cat.N, cat.rank
    return [
        (p, q, al, mu, nu)
        for q in range(n)
        for p in range(n)
        for al in range(N[a, b, q])
        for mu in range(N[q, c, p])
        for nu in range(N[p, d, e])
    ]


def _full_right4(cat, a, b, c, d, e):
    """Basis (r, s, x, y, z) of a(b(cd)_s)_r -> e."""
    N, n = cat.N, cat.rank
    return [
        (r, s, x, y, z)
        for s in range(n)
        for r in range(n)
        for x in range(N[c, d, s])
        for y in range(N[b, s, r])
        for z in range(N[a, r, e])
    ]


def _pentagon_instance(cat, a, b, c, d, e) -> float:
    L = _full_left4(cat, a, b, c, d, e)
    Rb = _full_right4(cat, a, b, c, d, e)
    if not L or not Rb:
        return 0.0
    Lpos = {k: i for i, k in enumerate(L)}
    P1 = np.zeros((len(L), len(Rb)), dtype=complex)
    P2 = np.zeros_like(P1)
    for j, (r, s, x, y, z) in enumerate(Rb):
        # path 1: via (ab)(cd)
        F1 = cat.Fmat(a, b, s, e)
        c1 = cat.rtree3(a, b, s, e).index((r, y, z))
        for i1, (q, al, ga) in enumerate(cat.tree3(a, b, s, e)):
            coef1 = F1[i1, c1]
            if coef1 == 0:
                continue
            F2 = cat.Fmat(q, c, d, e)
            c2 = cat.rtree3(q, c, d, e).index((s, x, ga))
            for i2, (p, mu, nu) in enumerate(cat.tree3(q, c, d, e)):
                P1[Lpos[(p, q, al, mu, nu)], j] += coef1 * F2[i2, c2]
        # path 2: via (a(bc))d and a((bc)d)
        G1 = cat.Fmat(b, c, d, r)
        g1 = cat.rtree3(b, c, d, r).index((s, x, y))
        for i1, (t, ka, rho) in enumerate(cat.tree3(b, c, d, r)):
            coef1 = G1[i1, g1]
            if coef1 == 0:
                continue
            G2 = cat.Fmat(a, t, d, e)
            g2 = cat.rtree3(a, t, d, e).index((r, rho, z))
            for i2, (p, si, nu) in enumerate(cat.tree3(a, t, d, e)):
                coef2 = coef1 * G2[i2, g2]
                if coef2 == 0:
                    continue
                G3 = cat.Fmat(a, b, c, p)
                g3 = cat.rtree3(a, b, c, p).index((t, ka, si))
                for i3, (q, al, mu) in enumerate(cat.tree3(a, b, c, p)):
                    P2[Lpos[(p, q, al, mu, nu)], j] += coef2 * G3[i3, g3]
    return float(np.abs(P1 - P2).max())


def check_hexagon(cat: CategoryData, tol: float = TOL) -> ResidualReport:
    """Both hexagons c_{a,bc} = (1 x c_{a,c})(c_{a,b} x 1) for R and for the reverse braiding."""
    n = cat.rank
    worst, worst_key, count = 0.0, None, 0
    for sign in (1, -1):
        for a, b, c, d in itertools.product(range(n), repeat=4):
            if not cat.tree3(a, b, c, d):
                continue
            res = _hexagon_instance(cat, a, b, c, d, sign)
            count += 1
            if res > worst:
                worst, worst_key = res, (sign, a, b, c, d)
    return ResidualReport("hexagon", worst, tol, worst_key, count)


def _hexagon_instance(cat, a, b, c, d, sign) -> float:
    src = cat.tree3(a, b, c, d)
    tgt = cat.tree3(b, c, a, d)
    tpos = {k: i for i, k in enumerate(tgt)}
    # LHS: L^{abc} -> R^{abc} -> braid a past f -> L^{bca}
    Fabc = cat.Fmat(a, b, c, d)
    rt = cat.rtree3(a, b, c, d)
    lhs = np.zeros((len(tgt), len(src)), dtype=complex)
    for j, _ in enumerate(src):
        for k, (f, ka, la) in enumerate(rt):
            coef = np.conj(Fabc[j, k])
            if coef == 0:
                continue
            Raf = cat.Rmat(a, f, d, sign)
            for lp in range(Raf.shape[0]):
                lhs[tpos[(f, ka, lp)], j] += coef * Raf[lp, la]
    # RHS: braid a past b, L^{bac} -> R^{bac}, braid a past c, R^{bca} -> L^{bca}
    rhs = np.zeros_like(lhs)
    Fbac = cat.Fmat(b, a, c, d)
    Fbca = cat.Fmat(b, c, a, d)
    lt_bac = cat.tree3(b, a, c, d)
    lpos_bac = {k: i for i, k in enumerate(lt_bac)}
    rt_bac = cat.rtree3(b, a, c, d)
    rt_bca = cat.rtree3(b, c, a, d)
    rpos_bca = {k: i for i, k in enumerate(rt_bca)}
    for j, (e, mu, nu) in enumerate(src):
        Rab = cat.Rmat(a, b, e, sign)
        v = np.zeros(len(lt_bac), dtype=complex)
        for mp in range(Rab.shape[0]):
            v[lpos_bac[(e, mp, nu)]] += Rab[mp, mu]
        w = Fbac.conj().T @ v  # coefficients on R^{bac} trees
        u = np.zeros(len(rt_bca), dtype=complex)
        for k, (f, ka, la) in enumerate(rt_bac):
            if w[k] == 0:
                continue
            Rac = cat.Rmat(a, c, f, sign)
            for kp in range(Rac.shape[0]):
                u[rpos_bca[(f, kp, la)]] += w[k] * Rac[kp, ka]
        rhs[:, j] = Fbca @ u
    return float(np.abs(lhs - rhs).max())


def check_unitary_F(cat: CategoryData) -> float:
    worst = 0.0
    n = cat.rank
    for a, b, c, d in itertools.product(range(n), repeat=4):
        M = cat.Fmat(a, b, c, d)
        if M.size:
            worst = max(worst, float(np.abs(M @ M.conj().T - np.eye(len(M))).max()))
    return worst


def gauge_transform(cat: CategoryData, g: dict) -> CategoryData:
    """Change every splitting basis by T'_mu = sum_mu' T_mu' g[(a,b,c)][mu', mu].

    ``g`` maps admissible triples to unitaries; missing triples default to the
    identity.  Triples with a unit label must stay trivial.
    """
    N, n = cat.N, cat.rank

    def u(a, b, c):
        m = N[a, b, c]
        x = g.get((a, b, c))
        if x is None:
            return np.eye(m, dtype=complex)
        x = np.atleast_2d(np.asarray(x, dtype=complex))
        if x.shape != (m, m):
            raise ShapeMismatch(f"gauge on {(a, b, c)} has shape {x.shape}, expected {(m, m)}")
        return x

    newF = {}
    for a, b, c, d in itertools.product(range(n), repeat=4):
        rows, cols = cat.tree3(a, b, c, d), cat.rtree3(a, b, c, d)
        if not rows:
            continue
        UL = _tree_gauge(rows, lambda e: (u(a, b, e), u(e, c, d)))
        UR = _tree_gauge(cols, lambda f: (u(b, c, f), u(a, f, d)))
        Fn = np.linalg.solve(UL, cat.Fmat(a, b, c, d) @ UR)
        _split_F(cat, newF, a, b, c, d, Fn)
    newR = None
    if cat.R is not None:
        newR = {}
        for a, b, c in cat.admissible_R_keys():
            newR[(a, b, c)] = np.linalg.solve(u(b, a, c), cat.Rmat(a, b, c) @ u(a, b, c))
    return CategoryData(cat.ring, newF, newR, cat.modular, name=cat.name)


def _tree_gauge(basis, blocks):
    U = np.zeros((len(basis), len(basis)), dtype=complex)
    starts = {}
    for i, (e, _, _) in enumerate(basis):
        starts.setdefault(e, i)
    for e, s in starts.items():
        u1, u2 = blocks(e)
        k = np.kron(u1, u2)
        U[s : s + len(k), s : s + len(k)] = k
    return U


def _split_F(cat, out, a, b, c, d, M):
    N = cat.N
    rows, cols = cat.tree3(a, b, c, d), cat.rtree3(a, b, c, d)
    rs, cs = {}, {}
    for i, (e, _, _) in enumerate(rows):
        rs.setdefault(e, i)
    for j, (f, _, _) in enumerate(cols):
        cs.setdefault(f, j)
    for e, i0 in rs.items():
        nr = N[a, b, e] * N[e, c, d]
        for f, j0 in cs.items():
            nc = N[b, c, f] * N[a, f, d]
            out[(a, b, c, d, e, f)] = M[i0 : i0 + nr, j0 : j0 + nc].copy()


def perturb_F(cat: CategoryData, key, delta) -> CategoryData:
    """Copy of ``cat`` with ``delta`` added to the F block ``key`` (for defect tests)."""
    F = {k: np.array(v, dtype=complex, copy=True) for k, v in cat.F.items()}
    F[key] = F[key] + delta
    return CategoryData(cat.ring, F, cat.R, cat.modular, name=cat.name + "*")


def _interleave(m1, m2, shape1, shape2):
    """kron of two blocks with rows (mu1,nu1),(mu2,nu2) reordered to ((mu1,mu2),(nu1,nu2))."""
    (r1a, r1b), (c1a, c1b) = shape1
    (r2a, r2b), (c2a, c2b) = shape2
    t = np.einsum("ABCD,EFGH->AEBFCGDH",
                  m1.reshape(r1a, r1b, c1a, c1b), m2.reshape(r2a, r2b, c2a, c2b))
    return t.reshape(r1a * r2a * r1b * r2b, c1a * c2a * c1b * c2b)


def product_category(c1: CategoryData, c2: CategoryData, name=None) -> CategoryData:
    """Deligne product; label (i, j) has index i * rank2 + j."""
    n1, n2 = c1.rank, c2.rank
    N = np.einsum("ace,bdf->abcdef", c1.N, c2.N).reshape(n1 * n2, n1 * n2, n1 * n2)
    labels = [f"{x}|{y}" for x in c1.ring.labels for y in c2.ring.labels]
    dual = [c1.dual[i] * n2 + c2.dual[j] for i in range(n1) for j in range(n2)]
    dims = np.kron(c1.dims, c2.dims)
    ring = FusionRingData(labels, dual, N, dims, c1.ring.w * c2.ring.w)

    def split(x):
        return divmod(x, n2)

    F = {}
    for k1 in c1.F:
        a1, b1, cc1, d1, e1, f1 = k1
        s1 = ((c1.N[a1, b1, e1], c1.N[e1, cc1, d1]), (c1.N[b1, cc1, f1], c1.N[a1, f1, d1]))
        m1 = np.asarray(c1.F[k1], dtype=complex).reshape(s1[0][0] * s1[0][1], -1)
        for k2 in c2.F:
            a2, b2, cc2, d2, e2, f2 = k2
            s2 = ((c2.N[a2, b2, e2], c2.N[e2, cc2, d2]), (c2.N[b2, cc2, f2], c2.N[a2, f2, d2]))
            m2 = np.asarray(c2.F[k2], dtype=complex).reshape(s2[0][0] * s2[0][1], -1)
            key = tuple(x * n2 + y for x, y in zip(k1, k2))
            F[key] = _interleave(m1, m2, s1, s2)
    R = None
    if c1.R is not None and c2.R is not None:
        R = {}
        for (a1, b1, x1), r1 in c1.R.items():
            for (a2, b2, x2), r2 in c2.R.items():
                R[(a1 * n2 + a2, b1 * n2 + b2, x1 * n2 + x2)] = np.kron(
                    np.asarray(r1, dtype=complex), np.asarray(r2, dtype=complex)
                )
    md = None
    if c1.modular is not None and c2.modular is not None:
        md = ModularData(np.kron(c1.modular.S, c2.modular.S), np.kron(c1.modular.T, c2.modular.T))
    return CategoryData(ring, F, R, md, name=name or f"{c1.name}x{c2.name}")


def conjugate_category(cat: CategoryData, name=None) -> CategoryData:
    """Complex-conjugate category: F -> conj F, R -> conj R (reversed chirality)."""
    F = {k: np.conj(np.asarray(v, dtype=complex)) for k, v in cat.F.items()}
    R = None if cat.R is None else {k: np.conj(np.asarray(v, dtype=complex)) for k, v in cat.R.items()}
    md = None
    if cat.modular is not None:
        md = ModularData(cat.modular.S.conj(), cat.modular.T.conj())
    return CategoryData(cat.ring, F, R, md, name=name or f"{cat.name}^rev")


def monodromy_residual(cat: CategoryData) -> float:
    """max |R^{ba}_c R^{ab}_c - theta_c/(theta_a theta_b) 1| over fusion channels."""
    t = cat.modular.twists
    worst = 0.0
    for a, b, c in cat.admissible_R_keys():
        M = cat.Rmat(b, a, c) @ cat.Rmat(a, b, c)
        worst = max(worst, float(np.abs(M - t[c] / (t[a] * t[b]) * np.eye(len(M))).max()))
    return worst
