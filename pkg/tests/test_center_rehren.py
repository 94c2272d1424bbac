import itertools
import math

import numpy as np
import pytest

from lrcat.center import TubeAlgebra, braided_half_braiding, build_lr_qsystem, compute_center
from lrcat.families import fibonacci, ising, pointed_cyclic, su2_level_k, trivial
from lrcat.induction import build_induced_system, ising_fermion_qsystem, subgroup_qsystem, trivial_qsystem
from lrcat.morphisms import Morphism
from lrcat.rehren import (
    RelativeBraiding,
    ambichiral_twists,
    build_rehren_qsystem,
    coefficient_agreement,
    intertwiner_basis,
    monodromy_table,
    orthonormality_residual,
    verify_duality,
    verify_mixed,
)
from lrcat.suites import center_multiset_residual

PHI = (1 + math.sqrt(5)) / 2


@pytest.fixture(scope="module")
def z4():
    return build_induced_system(subgroup_qsystem(pointed_cyclic(4, 1), [0, 2]), full_ring=False)


@pytest.fixture(scope="module")
def ising_psi():
    return build_induced_system(ising_fermion_qsystem(ising()), full_ring=False)


# Longo-Rehren ------------------------------------------------------------------------

def test_lr_one_label():
    p = build_lr_qsystem(trivial())
    assert p.gamma == ((0,),)
    assert p.w_value == 1.0
    assert abs(p.V.blocks[0][0, 0] - 1) < 1e-15 and abs(p.W.blocks[0][0, 0] - 1) < 1e-15


@pytest.mark.parametrize("make,w", [(fibonacci, 1 + PHI**2), (ising, 4.0), (lambda: su2_level_k(3), None)])
def test_lr_relations(make, w):
    cat = make()
    p = build_lr_qsystem(cat)
    assert max(p.relations().values()) < 1e-8
    assert p.w_value == pytest.approx(w if w else float(np.sum(cat.dims**2)), abs=1e-9)
    assert np.array_equal(p.multiplicities(), np.eye(cat.rank, dtype=int))


# center ------------------------------------------------------------------------------

def test_center_fibonacci_dims():
    objs = compute_center(fibonacci())
    assert sorted(o.dim for o in objs) == pytest.approx([1, PHI, PHI, PHI**2], abs=1e-9)


@pytest.mark.parametrize("make", [fibonacci, ising, lambda: pointed_cyclic(3, 2), lambda: su2_level_k(2)])
def test_center_against_tube_count(make):
    cat = make()
    n, N = cat.rank, cat.N
    # tube algebra = sum over a, b of Hom(I(a), I(b)) = sum_Z (sum_a n_Za)^2
    count = sum(N[x, a, c] * N[b, x, c] for a, b, x, c in itertools.product(range(n), repeat=4))
    assert len(TubeAlgebra(cat).basis) == count
    objs = compute_center(cat)
    assert sum(sum(o.underlying) ** 2 for o in objs) == count


def test_center_z2_trivial_form_is_double():
    objs = compute_center(pointed_cyclic(2, 0))
    assert len(objs) == 4
    assert all(o.dim == pytest.approx(1.0) for o in objs)
    assert sorted(round(o.twist.real) for o in objs) == [-1, 1, 1, 1]


@pytest.mark.parametrize("make", [trivial, fibonacci, ising, lambda: su2_level_k(3), lambda: pointed_cyclic(4, 3)])
def test_center_matches_double(make):
    cat = make()
    objs = compute_center(cat)
    assert len(objs) == cat.rank**2
    assert center_multiset_residual(cat, objs) < 1e-8
    assert sum(o.dim**2 for o in objs) == pytest.approx(cat.ring.w**2, abs=1e-6)
    assert max(o.bfe_residual for o in objs) < 1e-9


def test_braided_half_braiding_bfe():
    cat = ising()
    for lam, mu in itertools.product(range(3), repeat=2):
        assert braided_half_braiding(cat, lam, mu).bfe_residual() < 1e-10


# Rehren construction -----------------------------------------------------------------

@pytest.mark.parametrize("make", [fibonacci, ising, lambda: su2_level_k(3)])
def test_rehren_trivial_reduces_to_lr(make):
    cat = make()
    s = build_induced_system(trivial_qsystem(cat), full_ring=False)
    p = build_rehren_qsystem(s)
    assert coefficient_agreement(p, build_lr_qsystem(cat)) < 1e-8
    assert verify_duality(s).passed


@pytest.mark.parametrize("which", ["z4", "ising_psi"])
def test_rehren_axioms(which, request):
    s = request.getfixturevalue(which)
    p = build_rehren_qsystem(s)
    assert max(p.relations().values()) < 1e-8
    assert orthonormality_residual(p) < 1e-8
    assert np.array_equal(p.multiplicities(), s.Z)


def test_intertwiner_basis_unit_first(z4):
    basis = intertwiner_basis(z4)
    assert (basis[0].lam, basis[0].mu) == (0, 0)
    assert len(basis) == int(z4.Z.sum())


@pytest.mark.parametrize("which", ["z4", "ising_psi"])
def test_duality_and_mixed(which, request):
    s = request.getfixturevalue(which)
    r = verify_duality(s)
    assert r.passed, r
    m = verify_mixed(s)
    assert m.passed
    assert np.array_equal(m.b_plus, m.b_plus_recount)
    assert m.index_value == pytest.approx(m.w_plus, abs=1e-8)


def test_mixed_trivial_is_identity():
    s = build_induced_system(trivial_qsystem(ising()), full_ring=False)
    m = verify_mixed(s)
    assert np.array_equal(m.b_plus, np.eye(3, dtype=int))


# relative braiding -------------------------------------------------------------------

def test_relative_braiding_unitary_and_natural(ising_psi):
    rb = RelativeBraiding(ising_psi)
    amb = ising_psi.ambichiral
    for a, b in itertools.product(amb, repeat=2):
        e = rb.eps(a, b)
        assert (e.dag @ e - Morphism.identity(e.cat, e.dom)).maxabs() < 1e-9
        assert rb.naturality_residual(a, b) < 1e-9


def test_monodromy_is_twist_ratio(z4):
    th = ambichiral_twists(z4)
    assert len(th) == 4
    for e in monodromy_table(z4):
        assert e.scalar_residual < 1e-9
        assert abs(e.scalar - e.expected) < 1e-9


def test_relative_braiding_d4():
    s = build_induced_system(subgroup_qsystem(su2_level_k(4), [0, 4]), full_ring=False)
    rb = RelativeBraiding(s)
    amb = s.ambichiral
    assert max(rb.naturality_residual(a, b) for a in amb for b in amb) < 1e-9
    assert all(e.scalar_residual < 1e-9 and abs(e.scalar - e.expected) < 1e-9 for e in monodromy_table(s, rb))
