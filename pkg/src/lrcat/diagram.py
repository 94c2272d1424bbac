"""A small s-expression language for string diagrams and its evaluator.

    term := id(L|OBJ) | vertex(L,L->L;k) | covertex(L->L,L;k) | cap(L) | cup(L)
          | braid+(L,L) | braid-(L,L) | half+(OBJ,L) | half-(OBJ,L)
          | compose(term, ...) | tensor(term, ...) | sum(term, ...)
          | scale(complex, term) | linv(L, term) | loop(L)

``compose(f, g)`` is f after g.  Labels are names from the category (or a
unique prefix of one); a trailing ``*`` takes the dual.  ``cup(a)`` maps the
unit to ``a a*`` and ``cap(a)`` is its adjoint, so ``loop(a)`` is ``d_a``.
Vertices are co-isometries ``a b -> c``.  Columns in error messages count
from 0, lines from 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .category import CategoryData
from .errors import DiagramSyntaxError, MissingHalfBraiding, ShapeMismatch, TypeMismatch, UnknownLabel
from .morphisms import (
    Morphism,
    braid,
    cap,
    covertex,
    cup,
    identity,
    left_inverse,
    obj,
    tensor_all,
    vertex,
)

LEAVES = ("id", "vertex", "covertex", "cap", "cup", "braid+", "braid-", "half+", "half-", "loop")
NODES = ("compose", "tensor", "sum", "scale", "linv")


@dataclass(frozen=True)
class Term:
    op: str
    labels: tuple = ()
    args: tuple = ()
    index: int = 0
    value: complex = 1.0
    pos: tuple = field(default=(1, 0), compare=False)  # (line, column) of the operator name

    def __str__(self) -> str:
        return print_diagram(self)


# parsing --------------------------------------------------------------------------

class _Reader:
    def __init__(self, text: str):
        self.text = text
        self.i = 0

    def where(self, i=None):
        i = self.i if i is None else i
        line = self.text.count("\n", 0, i) + 1
        col = i - (self.text.rfind("\n", 0, i) + 1)
        return line, col

    def fail(self, msg, i=None):
        raise DiagramSyntaxError(msg, *self.where(i))

    def skip(self):
        while self.i < len(self.text) and self.text[self.i].isspace():
            self.i += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.i] if self.i < len(self.text) else ""

    def expect(self, s: str):
        self.skip()
        if not self.text.startswith(s, self.i):
            got = self.text[self.i] if self.i < len(self.text) else "end of input"
            self.fail(f"expected '{s}', got '{got}'")
        self.i += len(s)

    def name(self, what="label") -> str:
        self.skip()
        j = self.i
        while j < len(self.text) and (self.text[j].isalnum() or self.text[j] in "_."):
            j += 1
        if j < len(self.text) and self.text[j] == "*":
            j += 1
        if j == self.i:
            self.fail(f"expected {what}")
        s = self.text[self.i : j]
        self.i = j
        return s

    def op(self) -> str:
        self.skip()
        start = self.i
        s = self.name("operator")
        if s in ("braid", "half") and self.i < len(self.text) and self.text[self.i] in "+-":
            s += self.text[self.i]
            self.i += 1
        if s not in LEAVES + NODES:
            self.fail(f"unknown operator '{s}'", start)
        return s

    def integer(self) -> int:
        self.skip()
        j = self.i
        while j < len(self.text) and self.text[j].isdigit():
            j += 1
        if j == self.i:
            self.fail("expected integer")
        v = int(self.text[self.i : j])
        self.i = j
        return v

    def number(self) -> complex:
        self.skip()
        j = self.i
        while j < len(self.text) and self.text[j] not in ",)":
            j += 1
        raw = self.text[self.i : j].replace(" ", "")
        try:
            v = complex(raw)
        except ValueError:
            self.fail(f"bad complex literal '{raw}'")
        self.i = j
        return v


def _term(r: _Reader) -> Term:
    r.skip()
    pos = r.where()
    op = r.op()
    r.expect("(")
    if op in ("id", "cap", "cup", "loop"):
        t = Term(op, (r.name(),), pos=pos)
    elif op == "vertex":
        a = r.name()
        r.expect(",")
        b = r.name()
        r.expect("->")
        c = r.name()
        k = 0
        if r.peek() == ";":
            r.expect(";")
            k = r.integer()
        t = Term(op, (a, b, c), index=k, pos=pos)
    elif op == "covertex":
        c = r.name()
        r.expect("->")
        a = r.name()
        r.expect(",")
        b = r.name()
        k = 0
        if r.peek() == ";":
            r.expect(";")
            k = r.integer()
        t = Term(op, (c, a, b), index=k, pos=pos)
    elif op in ("braid+", "braid-", "half+", "half-"):
        a = r.name("object" if op.startswith("half") else "label")
        r.expect(",")
        t = Term(op, (a, r.name()), pos=pos)
    elif op == "scale":
        v = r.number()
        r.expect(",")
        t = Term(op, args=(_term(r),), value=v, pos=pos)
    elif op == "linv":
        a = r.name()
        r.expect(",")
        t = Term(op, (a,), args=(_term(r),), pos=pos)
    else:
        args = [_term(r)]
        while r.peek() == ",":
            r.expect(",")
            args.append(_term(r))
        t = Term(op, args=tuple(args), pos=pos)
    r.expect(")")
    return t


def parse_diagram(source: str, cat: CategoryData | None = None, half_braidings: dict | None = None) -> Term:
    """Parse ``source``; with ``cat`` the term is also type-checked by evaluation."""
    r = _Reader(source)
    t = _term(r)
    if r.peek():
        r.fail("trailing input")
    if cat is not None:
        evaluate_diagram(t, cat, half_braidings)
    return t


def _fmt(v: complex) -> str:
    v = complex(v)
    if v.imag == 0:
        return repr(v.real)
    return repr(v).strip("()")


def print_diagram(t: Term) -> str:
    """Canonical text: no optional parts omitted, ', ' between arguments."""
    op, L = t.op, t.labels
    if op in ("id", "cap", "cup", "loop"):
        return f"{op}({L[0]})"
    if op == "vertex":
        return f"vertex({L[0]},{L[1]}->{L[2]};{t.index})"
    if op == "covertex":
        return f"covertex({L[0]}->{L[1]},{L[2]};{t.index})"
    if op in ("braid+", "braid-", "half+", "half-"):
        return f"{op}({L[0]},{L[1]})"
    if op == "scale":
        return f"scale({_fmt(t.value)}, {print_diagram(t.args[0])})"
    if op == "linv":
        return f"linv({L[0]}, {print_diagram(t.args[0])})"
    return f"{op}(" + ", ".join(print_diagram(a) for a in t.args) + ")"


# evaluation -----------------------------------------------------------------------

def resolve_label(cat: CategoryData, name: str) -> int:
    dual = name.endswith("*")
    base = name[:-1] if dual else name
    labels = cat.ring.labels
    if base in labels:
        a = labels.index(base)
    else:
        hits = [i for i, s in enumerate(labels) if s.startswith(base)]
        if len(hits) != 1:
            raise UnknownLabel(f"label '{base}' is not in {cat.name} {labels}")
        a = hits[0]
    return cat.dual[a] if dual else a


def evaluate_diagram(t: Term, cat: CategoryData, half_braidings: dict | None = None) -> Morphism:
    """Contract ``t`` to a morphism between its boundary words."""
    hb = half_braidings or {}

    def lab(s):
        return resolve_label(cat, s)

    def ev(t: Term) -> Morphism:
        m = _ev(t)
        return _strip_unit(m) if t.op in LEAVES else m

    def _ev(t: Term) -> Morphism:
        op = t.op
        try:
            if op == "id":
                if t.labels[0] in hb:
                    return identity(cat, hb[t.labels[0]].obj)
                return identity(cat, obj(lab(t.labels[0])))
            if op == "vertex":
                return vertex(cat, *map(lab, t.labels), t.index)
            if op == "covertex":
                return covertex(cat, *map(lab, t.labels), t.index)
            if op == "cup":
                return cup(cat, lab(t.labels[0]))
            if op == "cap":
                return cap(cat, lab(t.labels[0]))
            if op == "loop":
                a = lab(t.labels[0])
                return cap(cat, a) @ cup(cat, a)
            if op in ("braid+", "braid-"):
                if not cat.braided:
                    raise TypeMismatch(f"{cat.name} has no braiding")
                return braid(cat, lab(t.labels[0]), lab(t.labels[1]), 1 if op == "braid+" else -1)
            if op in ("half+", "half-"):
                name = t.labels[0]
                if name not in hb:
                    raise MissingHalfBraiding(f"no half-braiding named '{name}'")
                e = hb[name].table[lab(t.labels[1])]
                return e if op == "half+" else e.dag
            if op == "compose":
                out = ev(t.args[-1])
                for a in reversed(t.args[:-1]):
                    out = ev(a) @ out
                return out
            if op == "tensor":
                return tensor_all(*[ev(a) for a in t.args])
            if op == "sum":
                parts = [ev(a) for a in t.args]
                out = parts[0]
                for p in parts[1:]:
                    if p.dom != out.dom or p.cod != out.cod:
                        raise TypeMismatch("sum of terms with different boundaries")
                    out = out + p
                return out
            if op == "scale":
                return complex(t.value) * ev(t.args[0])
            if op == "linv":
                a = lab(t.labels[0])
                # unit wires are stripped, and phi of the unit is the identity
                return ev(t.args[0]) if a == 0 else left_inverse(cat, a, ev(t.args[0]))
        except TypeMismatch as exc:
            if "(at line" in str(exc):
                raise
            raise TypeMismatch(f"{exc} (at line {t.pos[0]}, column {t.pos[1]})") from None
        raise TypeMismatch(f"unknown operator {op}")

    return ev(t)


def _strip_unit(m: Morphism) -> Morphism:
    """Drop unit-label wires; the unit is invisible in a diagram."""
    def strip(X):
        return tuple(tuple(x for x in w if x != 0) for w in X)

    dom, cod = strip(m.dom), strip(m.cod)
    if dom == m.dom and cod == m.cod:
        return m
    return Morphism(m.cat, dom, cod, m.blocks)


def diagram_scalar(t: Term, cat: CategoryData, half_braidings: dict | None = None) -> complex:
    return evaluate_diagram(t, cat, half_braidings).scalar()


def left_inverse_apply(label: str, t: Term) -> Term:
    """Close off the leftmost wire ``label`` with prefactor 1/d (the map phi_a)."""
    return Term("linv", (label,), (t,))


# recoupling -----------------------------------------------------------------------

_SHAPES = {"(ab)c": "left", "left": "left", "a(bc)": "right", "right": "right"}


def fusion_tree(shape: str, a, b, c, mid, d, k1=0, k2=0, split=False) -> Term:
    """Three-leaf fusion tree a b c -> d through ``mid``; ``split`` gives the adjoint tree."""
    s = _SHAPES.get(shape)
    if s is None:
        raise ShapeMismatch(f"unknown tree shape '{shape}'")
    if s == "left":
        inner = Term("vertex", (a, b, mid), index=k1)
        outer = Term("vertex", (mid, c, d), index=k2)
        t = Term("compose", args=(outer, Term("tensor", args=(inner, Term("id", (c,))))))
    else:
        inner = Term("vertex", (b, c, mid), index=k1)
        outer = Term("vertex", (a, mid, d), index=k2)
        t = Term("compose", args=(outer, Term("tensor", args=(Term("id", (a,)), inner))))
    return adjoint_term(t) if split else t


def adjoint_term(t: Term) -> Term:
    op = t.op
    if op == "vertex":
        a, b, c = t.labels
        return Term("covertex", (c, a, b), index=t.index)
    if op == "covertex":
        c, a, b = t.labels
        return Term("vertex", (a, b, c), index=t.index)
    if op in ("id", "loop"):
        return t
    if op == "compose":
        return Term("compose", args=tuple(adjoint_term(a) for a in reversed(t.args)))
    if op in ("tensor", "sum"):
        return Term(op, args=tuple(adjoint_term(a) for a in t.args))
    if op == "scale":
        return Term("scale", args=(adjoint_term(t.args[0]),), value=complex(t.value).conjugate())
    raise TypeMismatch(f"no adjoint rule for {op}")


def _match_tree(t: Term, shape: str):
    """(a, b, c, mid, d, k1, k2, split) if ``t`` is a three-leaf tree of ``shape``."""
    split = False
    if t.op == "compose" and len(t.args) == 2 and t.args[1].op == "covertex":
        t = adjoint_term(t)
        split = True
    if t.op != "compose" or len(t.args) != 2:
        return None
    outer, rest = t.args
    if outer.op != "vertex" or rest.op != "tensor" or len(rest.args) != 2:
        return None
    x, y = rest.args
    if _SHAPES[shape] == "left" and x.op == "vertex" and y.op == "id":
        a, b, mid = x.labels
        mid2, c, d = outer.labels
        if mid == mid2:
            return a, b, c, mid, d, x.index, outer.index, split
    if _SHAPES[shape] == "right" and x.op == "id" and y.op == "vertex":
        b, c, mid = y.labels
        a, mid2, d = outer.labels
        if mid == mid2:
            return a, b, c, mid, d, y.index, outer.index, split
    return None


def basis_change_6j(t: Term, cat: CategoryData, src: str, dst: str) -> Term:
    """Rewrite every ``src``-shaped three-leaf tree in ``t`` in the ``dst`` basis.

    The coefficients are the recoupling (6j) entries between the two bases,
    computed from the evaluator so the value of the diagram is unchanged.
    """
    if src not in _SHAPES or dst not in _SHAPES:
        raise ShapeMismatch(f"unknown tree shape '{src if src not in _SHAPES else dst}'")
    if _SHAPES[src] == _SHAPES[dst]:
        return t
    m = _match_tree(t, src)
    if m is not None:
        a, b, c, mid, d, k1, k2, split = m
        source = evaluate_diagram(fusion_tree(src, a, b, c, mid, d, k1, k2), cat)
        ia, ib, ic, idd = (resolve_label(cat, s) for s in (a, b, c, d))
        N = cat.N
        terms = []
        for f in range(cat.rank):
            pair = (N[ib, ic, f], N[ia, f, idd]) if _SHAPES[dst] == "right" else (N[ia, ib, f], N[f, ic, idd])
            for j1 in range(pair[0]):
                for j2 in range(pair[1]):
                    fl = cat.ring.labels[f]
                    tgt = fusion_tree(dst, a, b, c, fl, d, j1, j2)
                    coef = (source @ evaluate_diagram(tgt, cat).dag).blocks[idd][0, 0]
                    if abs(coef) < 1e-14:
                        continue
                    if split:
                        terms.append(Term("scale", args=(adjoint_term(tgt),), value=np.conj(coef)))
                    else:
                        terms.append(Term("scale", args=(tgt,), value=coef))
        if not terms:
            raise ShapeMismatch("tree has no component in the target basis")
        return terms[0] if len(terms) == 1 else Term("sum", args=tuple(terms))
    if t.args:
        return Term(t.op, t.labels, tuple(basis_change_6j(a, cat, src, dst) for a in t.args), t.index, t.value, t.pos)
    return t


# identities checked through the language ---------------------------------------------

def hat_term(cat: CategoryData, x: int, y: int, z: int, j: int, sign: int = 1) -> Term:
    """T^_j: x y -> z, the vertex T_j* carried once around the z wire.

    The dual of T_j* sits on a loop closed by a cup and a cap, and the loop
    crosses the through-going wire with braid+ (or braid- for sign -1).
    """
    L = cat.ring.labels
    X, Y, Zl = L[x], L[y], L[z]
    b = "braid+" if sign > 0 else "braid-"
    cup_xy = f"compose(tensor(id({X}), cup({Y}), id({X}*)), cup({X}))"
    dual_t = (f"compose(tensor(cap({Zl}*), id({Y}*), id({X}*)), "
              f"tensor(id({Zl}*), vertex({X},{Y}->{Zl};{j}), id({Y}*), id({X}*)), "
              f"tensor(id({Zl}*), {cup_xy}))")
    cap_aa = f"compose(cap({Y}*), tensor(id({Y}*), cap({X}*), id({Y})))"
    cross = f"compose(tensor(id({X}), {b}({Zl},{Y})), tensor({b}({Zl},{X}), id({Y})))"
    src = (f"compose(tensor({cap_aa}, id({Zl})), tensor(id({Y}*), id({X}*), {cross}), "
           f"tensor({dual_t}, id({Zl}), id({X}), id({Y})), tensor(cup({Zl}*), id({X}), id({Y})))")
    return parse_diagram(src)


def hat_gram_residual(cat: CategoryData, sign: int = 1) -> float:
    """max |<T^_k, T^_j> - <T_k, T_j>| over all fusion channels x y -> z."""
    worst = 0.0
    n, N = cat.rank, cat.N
    for x in range(n):
        for y in range(n):
            for z in range(n):
                m = N[x, y, z]
                if not m:
                    continue
                hats = [evaluate_diagram(hat_term(cat, x, y, z, j, sign), cat) for j in range(m)]
                ts = [covertex(cat, z, x, y, j) for j in range(m)]
                for j in range(m):
                    for k in range(m):
                        g_hat = (hats[k] @ hats[j].dag).blocks[z][0, 0]
                        g = (ts[k].dag @ ts[j]).blocks[z][0, 0]
                        worst = max(worst, abs(g_hat - g))
    return worst


def bfe_terms(name: str, cat: CategoryData, x: int, y: int, z: int, k: int = 0) -> tuple:
    """Both sides of the braiding-fusion equation for a half-braiding ``name``.

    e(z) (1 x T*) and (T* x 1)(1 x e(y))(e(x) x 1) with T*: x y -> z.
    """
    L = cat.ring.labels
    X, Y, Zl = L[x], L[y], L[z]
    lhs = f"compose(half+({name},{Zl}), tensor(id({name}), vertex({X},{Y}->{Zl};{k})))"
    rhs = (f"compose(tensor(vertex({X},{Y}->{Zl};{k}), id({name})), "
           f"tensor(id({X}), half+({name},{Y})), tensor(half+({name},{X}), id({Y})))")
    return parse_diagram(lhs), parse_diagram(rhs)


def bfe_diagram_residual(hb, cat: CategoryData, name: str = "Z") -> float:
    """BFE residual of a half-braiding, evaluated through the language."""
    table = {name: hb}
    worst = 0.0
    n, N = cat.rank, cat.N
    for x in range(n):
        for y in range(n):
            for z in range(n):
                for k in range(N[x, y, z]):
                    lhs, rhs = bfe_terms(name, cat, x, y, z, k)
                    a = evaluate_diagram(lhs, cat, table)
                    b = evaluate_diagram(rhs, cat, table)
                    worst = max(worst, (a - b).maxabs())
    return worst


def zigzag_values(cat: CategoryData) -> list:
    """(cap(a) x 1)(1 x cup(a*)) on the a wire, one scalar per label."""
    out = []
    for a in range(cat.rank):
        A = cat.ring.labels[a]
        t = parse_diagram(f"compose(tensor(cap({A}), id({A})), tensor(id({A}), cup({A}*)))")
        m = evaluate_diagram(t, cat)
        out.append(complex(m.blocks[a][0, 0]) if a in m.blocks else 1.0 + 0j)
    return out
