"""Morphisms between tensor products of simples, in fusion-tree bases.

An *object* is a tuple of words (a direct sum); a *word* is a tuple of simple
labels standing for their left-associated tensor product.  ``Hom(X, Y)`` is
stored as one block per simple charge ``c``: a matrix from the splitting-tree
basis of ``Hom(c, X)`` to that of ``Hom(c, Y)``.  Splitting vertices are
isometries, so composition and adjoints act blockwise.
"""

from __future__ import annotations

import numpy as np

from .category import CategoryData
from .errors import TypeMismatch

Word = tuple
Object = tuple


def obj(*labels) -> Object:
    """Single-word object."""
    return (tuple(int(x) for x in labels),)


UNIT: Object = ((),)


def otensor(X: Object, Y: Object) -> Object:
    return tuple(x + y for x in X for y in Y)


def osum(*objs) -> Object:
    return tuple(w for X in objs for w in X)


class TreeSpace:
    """Per-category cache of splitting-tree bases and recoupling matrices."""

    def __init__(self, cat: CategoryData):
        self.cat = cat
        self._trees: dict = {}
        self._index: dict = {}
        self._U: dict = {}
        self._phase = None

    # bases ------------------------------------------------------------------
    def trees(self, word: Word, c: int) -> list:
        key = (word, c)
        if key in self._trees:
            return self._trees[key]
        N = self.cat.N
        n = len(word)
        if n == 0:
            out = [((), ())] if c == 0 else []
        elif n == 1:
            out = [((), ())] if word[0] == c else []
        else:
            out = []
            head, last = word[:-1], word[-1]
            for e in range(self.cat.rank):
                m = N[e, last, c]
                if not m:
                    continue
                for inner, mults in self.trees(head, e):
                    ext = inner + ((e,) if n - 1 >= 2 else ())
                    for nu in range(m):
                        out.append((ext, mults + (nu,)))
        self._trees[key] = out
        self._index[key] = {t: i for i, t in enumerate(out)}
        return out

    def index(self, word, c):
        self.trees(word, c)
        return self._index[(word, c)]

    def dim(self, X: Object, c: int) -> int:
        return sum(len(self.trees(w, c)) for w in X)

    def offsets(self, X: Object, c: int) -> list[int]:
        out, s = [], 0
        for w in X:
            out.append(s)
            s += len(self.trees(w, c))
        return out

    def charges(self, X: Object) -> list[int]:
        return [c for c in range(self.cat.rank) if self.dim(X, c)]

    # recoupling -------------------------------------------------------------
    def product_basis(self, X: Word, Y: Word, c: int) -> list:
        N = self.cat.N
        out = []
        for a in range(self.cat.rank):
            ta = self.trees(X, a)
            if not ta:
                continue
            for b in range(self.cat.rank):
                m = N[a, b, c]
                tb = self.trees(Y, b)
                if not m or not tb:
                    continue
                for mu in range(m):
                    for i in range(len(ta)):
                        for j in range(len(tb)):
                            out.append((a, b, mu, i, j))
        return out

    def U(self, X: Word, Y: Word, c: int) -> np.ndarray:
        """Columns: product basis (tX x tY) T^{ab}_{c,mu}; rows: left trees of XY."""
        key = (X, Y, c)
        if key in self._U:
            return self._U[key]
        XY = X + Y
        rows = self.index(XY, c)
        cols = self.product_basis(X, Y, c)
        M = np.zeros((len(rows), len(cols)), dtype=complex)
        for k, (a, b, mu, i, j) in enumerate(cols):
            for t, coef in self._expand(X, Y, a, b, mu, i, j, c).items():
                M[rows[t], k] += coef
        self._U[key] = M
        return M

    def _extend(self, tree, a, mu, len_head):
        inner, mults = tree
        return (inner + ((a,) if len_head >= 2 else ()), mults + (mu,))

    def _expand(self, X, Y, a, b, mu, i, j, c) -> dict:
        if len(Y) == 0:
            return {self.trees(X, a)[i]: 1.0}
        if len(X) == 0:
            return {self.trees(Y, b)[j]: 1.0}
        ti = self.trees(X, a)[i]
        if len(Y) == 1:
            return {self._extend(ti, a, mu, len(X)): 1.0}
        head, y = Y[:-1], Y[-1]
        inner, mults = self.trees(Y, b)[j]
        g = inner[-1] if len(head) >= 2 else head[0]
        nu = mults[-1]
        sub = (inner[:-1] if len(head) >= 2 else (), mults[:-1])
        jj = self.index(head, g)[sub]
        cat = self.cat
        F = cat.Fmat(a, g, y, c)
        col = cat.rtree3(a, g, y, c).index((b, nu, mu))
        out: dict = {}
        for r, (f, ka, la) in enumerate(cat.tree3(a, g, y, c)):
            coef = F[r, col]
            if coef == 0:
                continue
            for t, v in self._expand(X, head, a, g, ka, i, jj, f).items():
                key = self._extend(t, f, la, len(X) + len(head))
                out[key] = out.get(key, 0.0) + coef * v
        return out

    # duality phases ---------------------------------------------------------
    def cup_phase(self, a: int) -> complex:
        """Phase p_a making (cap(a) x 1)(1 x cup(a*)) = 1 whenever possible."""
        if self._phase is None:
            cat = self.cat
            kap = [cat.dims[x] * cat.Fmat(x, cat.dual[x], x, x)[0, 0] for x in range(cat.rank)]
            ph = [1.0 + 0j] * cat.rank
            for x in range(cat.rank):
                xd = cat.dual[x]
                if xd > x:
                    ph[xd] = ph[x] / kap[x]
            self._phase = ph
        return self._phase[a]


_SPACES: dict = {}


def space(cat: CategoryData) -> TreeSpace:
    key = id(cat)
    sp = _SPACES.get(key)
    if sp is None or sp.cat is not cat:
        sp = TreeSpace(cat)
        _SPACES[key] = sp
    return sp


class Morphism:
    """A morphism ``dom -> cod`` stored as charge blocks."""

    __slots__ = ("cat", "dom", "cod", "blocks")
    __array_priority__ = 100

    def __init__(self, cat: CategoryData, dom: Object, cod: Object, blocks=None):
        self.cat = cat
        self.dom = tuple(tuple(w) for w in dom)
        self.cod = tuple(tuple(w) for w in cod)
        sp = space(cat)
        self.blocks = {}
        for c in range(cat.rank):
            r, s = sp.dim(self.cod, c), sp.dim(self.dom, c)
            if r and s:
                b = None if blocks is None else blocks.get(c)
                self.blocks[c] = (np.zeros((r, s), dtype=complex) if b is None
                                  else np.asarray(b, dtype=complex).reshape(r, s))

    # constructors -------------------------------------------------------------
    @classmethod
    def identity(cls, cat, X: Object) -> Morphism:
        sp = space(cat)
        return cls(cat, X, X, {c: np.eye(sp.dim(X, c)) for c in sp.charges(X)})

    @classmethod
    def zeros(cls, cat, dom, cod) -> Morphism:
        return cls(cat, dom, cod)

    # algebra ------------------------------------------------------------------
    def __matmul__(self, other: Morphism) -> Morphism:
        """Composition ``self o other``."""
        if other.cod != self.dom:
            raise TypeMismatch(f"cannot compose {other.dom}->{other.cod} with {self.dom}->{self.cod}")
        out = Morphism(self.cat, other.dom, self.cod)
        for c in out.blocks:
            if c in self.blocks and c in other.blocks:
                out.blocks[c] = self.blocks[c] @ other.blocks[c]
        return out

    @property
    def dag(self) -> Morphism:
        return Morphism(self.cat, self.cod, self.dom, {c: b.conj().T for c, b in self.blocks.items()})

    def __add__(self, other):
        self._same(other)
        return Morphism(self.cat, self.dom, self.cod,
                        {c: self.blocks[c] + other.blocks[c] for c in self.blocks})

    def __sub__(self, other):
        return self + (-1.0) * other

    def __rmul__(self, s):
        return Morphism(self.cat, self.dom, self.cod, {c: s * b for c, b in self.blocks.items()})

    __mul__ = __rmul__

    def __neg__(self):
        return (-1.0) * self

    def _same(self, other):
        if self.dom != other.dom or self.cod != other.cod:
            raise TypeMismatch("morphisms have different boundaries")

    def norm(self) -> float:
        """Operator norm (max over charges)."""
        return max((float(np.linalg.norm(b, 2)) for b in self.blocks.values() if b.size), default=0.0)

    def maxabs(self) -> float:
        return max((float(np.abs(b).max()) for b in self.blocks.values() if b.size), default=0.0)

    def trace(self) -> complex:
        """Categorical (spherical) trace."""
        if self.dom != self.cod:
            raise TypeMismatch("trace needs an endomorphism")
        d = self.cat.dims
        return complex(sum(d[c] * np.trace(b) for c, b in self.blocks.items()))

    def scalar(self) -> complex:
        """Value of an endomorphism of the empty word."""
        if self.dom != UNIT or self.cod != UNIT:
            raise TypeMismatch("not a closed diagram")
        return complex(self.blocks[0][0, 0]) if 0 in self.blocks else 0j

    def vector(self) -> np.ndarray:
        return np.concatenate([self.blocks[c].ravel() for c in sorted(self.blocks)]) if self.blocks \
            else np.zeros(0, dtype=complex)

    @classmethod
    def from_vector(cls, cat, dom, cod, v) -> Morphism:
        out = cls(cat, dom, cod)
        s = 0
        for c in sorted(out.blocks):
            n = out.blocks[c].size
            out.blocks[c] = np.asarray(v[s : s + n], dtype=complex).reshape(out.blocks[c].shape)
            s += n
        return out

    def hom_dim(self) -> int:
        return sum(b.size for b in self.blocks.values())

    def dense(self) -> np.ndarray:
        """Block-diagonal matrix over all charges (a faithful representation)."""
        from scipy.linalg import block_diag

        bl = [self.blocks[c] for c in sorted(self.blocks)]
        return block_diag(*bl) if bl else np.zeros((0, 0), dtype=complex)

    def allclose(self, other, tol=1e-9) -> bool:
        return (self - other).maxabs() < tol

    # summand access -------------------------------------------------------------
    def part(self, k: int, i: int) -> Morphism:
        """Component from dom summand ``i`` to cod summand ``k``."""
        sp = space(self.cat)
        out = Morphism(self.cat, (self.dom[i],), (self.cod[k],))
        for c in out.blocks:
            r0 = sp.offsets(self.cod, c)[k]
            c0 = sp.offsets(self.dom, c)[i]
            r, s = out.blocks[c].shape
            out.blocks[c] = self.blocks[c][r0 : r0 + r, c0 : c0 + s].copy()
        return out

    def tensor(self, other: Morphism) -> Morphism:
        return tensor(self, other)

    def __repr__(self):
        return f"Morphism({self.dom} -> {self.cod}, charges={sorted(self.blocks)})"


def assemble(cat, dom: Object, cod: Object, parts: dict) -> Morphism:
    """Build a morphism from word-level pieces ``{(cod_idx, dom_idx): Morphism}``."""
    sp = space(cat)
    out = Morphism(cat, dom, cod)
    for (k, i), m in parts.items():
        for c, b in m.blocks.items():
            if c not in out.blocks:
                continue
            r0 = sp.offsets(cod, c)[k]
            c0 = sp.offsets(dom, c)[i]
            out.blocks[c][r0 : r0 + b.shape[0], c0 : c0 + b.shape[1]] += b
    return out


def _tensor_words(f: Morphism, g: Morphism) -> Morphism:
    """Tensor of word-level morphisms (single-summand dom and cod)."""
    cat = f.cat
    sp = space(cat)
    X, Y = f.dom[0], f.cod[0]
    Xp, Yp = g.dom[0], g.cod[0]
    out = Morphism(cat, (X + Xp,), (Y + Yp,))
    N = cat.N
    for c in out.blocks:
        Pcols = sp.product_basis(X, Xp, c)
        Prows = sp.product_basis(Y, Yp, c)
        if not Pcols or not Prows:
            continue
        P = np.zeros((len(Prows), len(Pcols)), dtype=complex)
        # both bases are grouped by (a, b, mu) with (i, j) inner
        rstart, cstart = {}, {}
        for n_, (a, b, mu, i, j) in enumerate(Prows):
            rstart.setdefault((a, b, mu), n_)
        for n_, (a, b, mu, i, j) in enumerate(Pcols):
            cstart.setdefault((a, b, mu), n_)
        for key, r0 in rstart.items():
            if key not in cstart:
                continue
            a, b, mu = key
            if a not in f.blocks or b not in g.blocks:
                continue
            k = np.kron(f.blocks[a], g.blocks[b])
            c0 = cstart[key]
            P[r0 : r0 + k.shape[0], c0 : c0 + k.shape[1]] = k
        out.blocks[c] = sp.U(Y, Yp, c) @ P @ sp.U(X, Xp, c).conj().T
    del N
    return out


def tensor(f: Morphism, g: Morphism) -> Morphism:
    cat = f.cat
    dom = otensor(f.dom, g.dom)
    cod = otensor(f.cod, g.cod)
    if len(f.dom) == len(f.cod) == len(g.dom) == len(g.cod) == 1:
        return _tensor_words(f, g)
    parts = {}
    nd2, nc2 = len(g.dom), len(g.cod)
    for k in range(len(f.cod)):
        for i in range(len(f.dom)):
            fk = f.part(k, i)
            if fk.maxabs() == 0:
                continue
            for l_ in range(nc2):
                for j in range(nd2):
                    gl = g.part(l_, j)
                    if gl.maxabs() == 0:
                        continue
                    parts[(k * nc2 + l_, i * nd2 + j)] = _tensor_words(fk, gl)
    return assemble(cat, dom, cod, parts)


def tensor_all(*ms: Morphism) -> Morphism:
    out = ms[0]
    for m in ms[1:]:
        out = tensor(out, m)
    return out


def identity(cat, X: Object) -> Morphism:
    return Morphism.identity(cat, X)


# generators -----------------------------------------------------------------

def vertex(cat, a: int, b: int, c: int, k: int = 0) -> Morphism:
    """Co-isometric fusion map a b -> c (adjoint of the splitting vertex)."""
    if k >= cat.N[a, b, c]:
        raise TypeMismatch(f"no fusion vertex {a},{b}->{c};{k}")
    m = Morphism(cat, obj(a, b), obj(c))
    m.blocks[c][0, :] = 0
    m.blocks[c][0, k] = 1.0
    return m


def covertex(cat, c: int, a: int, b: int, k: int = 0) -> Morphism:
    return vertex(cat, a, b, c, k).dag


def cup(cat, a: int) -> Morphism:
    """() -> a a*, normalized so cap(a) o cup(a) = d_a."""
    ad = cat.dual[a]
    m = Morphism(cat, UNIT, obj(a, ad))
    m.blocks[0][0, 0] = np.sqrt(cat.dims[a]) * space(cat).cup_phase(a)
    return m


def cap(cat, a: int) -> Morphism:
    return cup(cat, a).dag


def braid(cat, a: int, b: int, sign: int = 1) -> Morphism:
    """c_{a,b}: a b -> b a for sign=+1; c_{b,a}^{-1} for sign=-1."""
    m = Morphism(cat, obj(a, b), obj(b, a))
    for c in m.blocks:
        m.blocks[c] = cat.Rmat(a, b, c, sign)
    return m


def braid_words(cat, X: Word, Y: Word, sign: int = 1) -> Morphism:
    """Braiding of the word X past the word Y, built from adjacent crossings."""
    X, Y = tuple(X), tuple(Y)
    word = X + Y
    out = identity(cat, (word,))
    # move letters of X (last first) to the right through Y
    cur = list(word)
    for s in range(len(X) - 1, -1, -1):
        for pos in range(s, s + len(Y)):
            a, b = cur[pos], cur[pos + 1]
            step = tensor_all(*[m for m in (
                identity(cat, (tuple(cur[:pos]),)),
                braid(cat, a, b, sign),
                identity(cat, (tuple(cur[pos + 2:]),)),
            )])
            out = step @ out
            cur[pos], cur[pos + 1] = b, a
    return out


def braid_objects(cat, X: Object, Y: Object, sign: int = 1) -> Morphism:
    dom = otensor(X, Y)
    cod = otensor(Y, X)
    parts = {}
    for i, x in enumerate(X):
        for j, y in enumerate(Y):
            parts[(j * len(X) + i, i * len(Y) + j)] = braid_words(cat, x, y, sign)
    return assemble(cat, dom, cod, parts)


def left_inverse(cat, a: int, x: Morphism) -> Morphism:
    """phi_a(x) = (1/d_a) (r* x 1)(1_{a*} x x)(r x 1) for x in End(a Y), r = cup(a*)."""
    ad = cat.dual[a]
    if any(len(w) == 0 or w[0] != a for w in x.dom + x.cod):
        raise TypeMismatch(f"left inverse of {a} needs every boundary word to start with {a}")
    Yd = tuple(w[1:] for w in x.dom)
    Yc = tuple(w[1:] for w in x.cod)
    r = cup(cat, ad)
    top = tensor(r.dag, identity(cat, Yc))
    bot = tensor(r, identity(cat, Yd))
    mid = tensor(identity(cat, obj(ad)), x)
    return (1.0 / cat.dims[a]) * (top @ mid @ bot)


def categorical_dim(cat, X: Object) -> float:
    sp = space(cat)
    return float(sum(cat.dims[c] * sp.dim(X, c) for c in range(cat.rank)))


def from_dense(cat, dom: Object, cod: Object, M) -> Morphism:
    """Inverse of :meth:`Morphism.dense` for the given boundaries."""
    out = Morphism(cat, dom, cod)
    r0 = c0 = 0
    M = np.asarray(M)
    for c in sorted(out.blocks):
        r, s = out.blocks[c].shape
        out.blocks[c] = M[r0 : r0 + r, c0 : c0 + s].copy()
        r0 += r
        c0 += s
    return out


def flat_object(cat, X: Object) -> Object:
    """The object sum_c dim(X, c) * c as single-letter words, sorted by label."""
    sp = space(cat)
    return tuple((c,) for c in range(cat.rank) for _ in range(sp.dim(X, c)))


def flatten(cat, X: Object) -> Morphism:
    """Canonical unitary X -> flat_object(X) (identity on every charge block)."""
    sp = space(cat)
    F = flat_object(cat, X)
    return Morphism(cat, X, F, {c: np.eye(sp.dim(X, c)) for c in sp.charges(X)})


def subobject(cat, X: Object, p: Morphism, tol: float = 1e-7):
    """Split a projection ``p`` in End(X): returns (Y, v) with v: Y -> X an isometry, v v* = p."""
    from scipy.linalg import orth

    cols = {}
    for c, b in p.blocks.items():
        if b.size and np.abs(b).max() > tol:
            cols[c] = orth(b, rcond=tol)
    Y = tuple((c,) for c in sorted(cols) for _ in range(cols[c].shape[1]))
    return Y, Morphism(cat, Y, X, cols)
