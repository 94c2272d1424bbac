import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lrcat.center import compute_center
from lrcat.diagram import (
    basis_change_6j,
    bfe_diagram_residual,
    diagram_scalar,
    evaluate_diagram,
    fusion_tree,
    hat_gram_residual,
    left_inverse_apply,
    parse_diagram,
    print_diagram,
    zigzag_values,
)
from lrcat.errors import DiagramSyntaxError, MissingHalfBraiding, ShapeMismatch, TypeMismatch, UnknownLabel
from lrcat.families import fibonacci, ising, pointed_cyclic, su2_level_k
from lrcat.morphisms import cap, cup, identity, obj, tensor

# source text generator ---------------------------------------------------------------

labels = st.sampled_from(["a", "tau", "sigma", "x1", "psi"]).flatmap(
    lambda s: st.sampled_from([s, s + "*"]))
idx = st.integers(0, 2)


def _leaf():
    return st.one_of(
        labels.map(lambda a: f"id({a})"),
        st.tuples(labels, labels, labels, idx).map(lambda t: f"vertex({t[0]},{t[1]}->{t[2]};{t[3]})"),
        st.tuples(labels, labels, labels, idx).map(lambda t: f"covertex({t[0]}->{t[1]},{t[2]};{t[3]})"),
        labels.map(lambda a: f"cap({a})"),
        labels.map(lambda a: f"cup({a})"),
        st.tuples(st.sampled_from("+-"), labels, labels).map(lambda t: f"braid{t[0]}({t[1]},{t[2]})"),
        labels.map(lambda a: f"loop({a})"),
    )


def _node(children):
    seq = st.lists(children, min_size=1, max_size=3).map(", ".join)
    num = st.sampled_from(["2", "-0.5", "1.5+2j", "0.25j"])
    return st.one_of(
        seq.map(lambda s: f"compose({s})"),
        seq.map(lambda s: f"tensor({s})"),
        seq.map(lambda s: f"sum({s})"),
        st.tuples(num, children).map(lambda t: f"scale({t[0]}, {t[1]})"),
        st.tuples(labels, children).map(lambda t: f"linv({t[0]}, {t[1]})"),
    )


sources = st.recursive(_leaf(), _node, max_leaves=8)


@settings(max_examples=200, deadline=None)
@given(sources)
def test_print_parse_roundtrip(src):
    t = parse_diagram(src)
    canon = print_diagram(t)
    t2 = parse_diagram(canon)
    assert t2 == t
    assert print_diagram(t2) == canon


@settings(max_examples=50, deadline=None)
@given(sources, st.sampled_from([" ", "\n", "\t ", "  \n  "]))
def test_whitespace_insensitive(src, ws):
    spaced = src.replace(",", "," + ws).replace("(", "(" + ws).replace(")", ws + ")")
    assert parse_diagram(spaced) == parse_diagram(src)


# parser ------------------------------------------------------------------------------

def test_parse_loop():
    t = parse_diagram("loop(tau)")
    assert t.op == "loop" and t.labels == ("tau",)


def test_parse_closed_pair():
    cat = ising()
    t = parse_diagram("compose(vertex(s,s->1;0), covertex(1->s,s;0))", cat)
    m = evaluate_diagram(t, cat)
    assert m.dom == m.cod == ((),)
    assert abs(m.scalar() - 1) < 1e-12


def test_syntax_error_position():
    with pytest.raises(DiagramSyntaxError) as e:
        parse_diagram("vertex(s,s->")
    assert (e.value.line, e.value.column) == (1, 12)


def test_syntax_error_line():
    with pytest.raises(DiagramSyntaxError) as e:
        parse_diagram("compose(\n  loop(tau),\n  bogus(x))")
    assert (e.value.line, e.value.column) == (3, 2)


def test_type_mismatch_reported():
    with pytest.raises(TypeMismatch):
        parse_diagram("compose(vertex(s,s->1), id(s))", ising())


def test_unknown_label():
    with pytest.raises(UnknownLabel):
        parse_diagram("loop(q)", ising())


def test_missing_half_braiding():
    with pytest.raises(MissingHalfBraiding):
        parse_diagram("half+(Z,s)", ising())


# evaluator ---------------------------------------------------------------------------

@pytest.mark.parametrize("make", [fibonacci, ising, lambda: su2_level_k(3)])
def test_loop_is_dimension(make):
    cat = make()
    for a, name in enumerate(cat.ring.labels):
        assert abs(diagram_scalar(parse_diagram(f"loop({name})"), cat) - cat.dims[a]) < 1e-12


def test_vertex_then_adjoint_is_identity():
    cat = su2_level_k(2)
    L = cat.ring.labels
    for a, b, c in itertools.product(range(3), repeat=3):
        if cat.N[a, b, c]:
            t = parse_diagram(f"compose(vertex({L[a]},{L[b]}->{L[c]};0), covertex({L[c]}->{L[a]},{L[b]};0))")
            m = evaluate_diagram(t, cat)
            assert (m - evaluate_diagram(parse_diagram(f"id({L[c]})"), cat)).maxabs() < 1e-12


def test_scale_and_sum():
    cat = fibonacci()
    t = parse_diagram("sum(scale(2, loop(tau)), scale(-1, loop(1)))")
    assert abs(diagram_scalar(t, cat) - (2 * cat.dims[1] - 1)) < 1e-12


def test_zigzag_snake():
    # the snake is the identity up to the Frobenius-Schur sign, which is +1 here
    assert np.allclose(zigzag_values(pointed_cyclic(3, 2)), 1)
    assert np.allclose(zigzag_values(ising()), 1)


def test_dual_labels_on_wires():
    cat = pointed_cyclic(3, 2)
    t = parse_diagram("compose(cap(1), cup(1))")
    assert abs(diagram_scalar(t, cat) - 1) < 1e-12
    m = evaluate_diagram(parse_diagram("cup(1)"), cat)
    assert m.cod == ((1, 2),)


# left inverse ------------------------------------------------------------------------

def test_left_inverse_of_identity():
    cat = fibonacci()
    t = left_inverse_apply("tau", parse_diagram("id(tau)"))
    assert abs(diagram_scalar(t, cat) - 1) < 1e-12


def _phi_dense(cat, a, X):
    """(1/d_a) (cap(a*) x 1)(1 x X)(cup(a*) x 1) assembled from morphisms directly."""
    ab = cat.dual[a]
    rest = X.dom[0][1:]
    cod_rest = X.cod[0][1:]
    m = tensor(cap(cat, ab), identity(cat, obj(*cod_rest))) @ tensor(identity(cat, obj(ab)), X) \
        @ tensor(cup(cat, ab), identity(cat, obj(*rest)))
    return m * (1 / cat.dims[a])


@pytest.mark.parametrize("make", [fibonacci, ising, lambda: su2_level_k(3)])
def test_left_inverse_on_channel_projection(make):
    cat = make()
    L = cat.ring.labels
    n = cat.rank
    for a, b, c in itertools.product(range(1, n), range(1, n), range(n)):
        if not cat.N[a, b, c]:
            continue
        src = f"compose(covertex({L[c]}->{L[a]},{L[b]};0), vertex({L[a]},{L[b]}->{L[c]};0))"
        m = evaluate_diagram(left_inverse_apply(L[a], parse_diagram(src)), cat)
        want = cat.dims[c] / (cat.dims[a] * cat.dims[b])
        assert (m - want * identity(cat, obj(b))).maxabs() < 1e-12
        dense = _phi_dense(cat, a, evaluate_diagram(parse_diagram(src), cat))
        assert (m - dense).maxabs() < 1e-12


# recoupling --------------------------------------------------------------------------

def test_same_shape_unchanged():
    cat = fibonacci()
    t = fusion_tree("(ab)c", "tau", "tau", "tau", "1", "tau")
    assert basis_change_6j(t, cat, "(ab)c", "left") == t


def test_unknown_shape():
    with pytest.raises(ShapeMismatch):
        basis_change_6j(parse_diagram("id(tau)"), fibonacci(), "(ab)c", "ab(c)")


@pytest.mark.parametrize("mid1,mid2", [("1", "1"), ("1", "tau"), ("tau", "1"), ("tau", "tau")])
def test_fibonacci_theta_network_value_preserved(mid1, mid2):
    cat = fibonacci()
    top = fusion_tree("(ab)c", "tau", "tau", "tau", mid1, "tau")
    bottom = fusion_tree("a(bc)", "tau", "tau", "tau", mid2, "tau", split=True)
    closed = parse_diagram(f"compose(cap(tau), tensor({print_diagram(top)}, id(tau)), "
                           f"tensor({print_diagram(bottom)}, id(tau)), cup(tau))")
    before = diagram_scalar(closed, cat)
    after = diagram_scalar(basis_change_6j(closed, cat, "(ab)c", "a(bc)"), cat)
    assert abs(before) > 1e-3
    assert abs(after - before) < 1e-10


def test_basis_change_unitary_on_open_tree():
    cat = su2_level_k(2)
    t = fusion_tree("left", "1", "1", "1", "0", "1")
    m1 = evaluate_diagram(t, cat)
    m2 = evaluate_diagram(basis_change_6j(t, cat, "left", "right"), cat)
    assert (m1 - m2).maxabs() < 1e-12


# identities --------------------------------------------------------------------------

@pytest.mark.parametrize("make", [fibonacci, ising, lambda: su2_level_k(2), lambda: su2_level_k(3),
                                  lambda: pointed_cyclic(3, 2)])
def test_hat_gram(make):
    cat = make()
    assert hat_gram_residual(cat, 1) < 1e-9
    assert hat_gram_residual(cat, -1) < 1e-9


@pytest.mark.parametrize("make", [fibonacci, ising, lambda: pointed_cyclic(4, 1)])
def test_bfe_through_diagrams(make):
    cat = make()
    for o in compute_center(cat):
        assert bfe_diagram_residual(o.half_braiding, cat) < 1e-9
