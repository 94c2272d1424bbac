import math

import numpy as np
import pytest

from lrcat.errors import ShapeMismatch, ValidationFailed
from lrcat.families import fibonacci, ising, pointed_cyclic, su2_level_k
from lrcat.induction import (
    alpha_induce,
    branching_factorization,
    build_induced_system,
    check_modular_invariance,
    check_qsystem,
    commutativity_report,
    decompose_bimodule,
    hom_dim,
    hom_space_between,
    ising_fermion_qsystem,
    pointed_invariant,
    relative_tensor,
    subgroup_qsystem,
    transpose_oracle,
    trivial_qsystem,
)

Z4_CONJ = [[1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0], [0, 1, 0, 0]]


@pytest.fixture(scope="module")
def z4():
    cat = pointed_cyclic(4, 1)
    return build_induced_system(subgroup_qsystem(cat, [0, 2]))


@pytest.fixture(scope="module")
def ising_psi():
    return build_induced_system(ising_fermion_qsystem(ising()))


@pytest.fixture(scope="module")
def ising_trivial():
    return build_induced_system(trivial_qsystem(ising()))


# Q-systems ---------------------------------------------------------------------------

def test_trivial_qsystem_exact():
    rep = check_qsystem(trivial_qsystem(fibonacci()))
    assert all(v == 0 for v in rep.residuals.values())


@pytest.mark.parametrize("build", [
    lambda: subgroup_qsystem(pointed_cyclic(4, 1), [0, 2]),
    lambda: ising_fermion_qsystem(ising()),
    lambda: subgroup_qsystem(su2_level_k(4), [0, 4]),
    lambda: subgroup_qsystem(pointed_cyclic(6, 1), [0, 2, 4]),
])
def test_qsystem_axioms(build):
    q = build()
    rep = check_qsystem(q)
    assert rep.passed, rep.residuals
    assert q.d_theta == pytest.approx(sum(m * q.cat.dims[c] for c, m in q.theta.items()))


def test_ising_fermion_not_commutative():
    # psi has twist -1, so the multiplication does not absorb the braiding
    rep = check_qsystem(ising_fermion_qsystem(ising()))
    assert not rep.commutative
    assert rep.commutativity_residual > 0.1


def test_subgroup_with_nontrivial_associator_rejected():
    with pytest.raises(ValidationFailed, match="associativity"):
        subgroup_qsystem(pointed_cyclic(6, 1), [0, 3])


def test_subgroup_must_be_invertible():
    with pytest.raises(ShapeMismatch):
        subgroup_qsystem(ising(), [0, 1])


# induction and hom spaces ------------------------------------------------------------

def test_trivial_induction_is_identity():
    cat = fibonacci()
    q = trivial_qsystem(cat)
    for lam in range(cat.rank):
        for sign in (1, -1):
            x = alpha_induce(sign, lam, q)
            assert x.underlying == tuple(int(c == lam) for c in range(cat.rank))
            assert max(x.residuals().values()) < 1e-12
    a = alpha_induce(1, 1, q)
    assert len(hom_space_between(a, a).basis) == 1
    assert len(hom_space_between(a, alpha_induce(-1, 0, q)).basis) == 0


def test_hom_space_orthonormal():
    q = ising_fermion_qsystem(ising())
    x = relative_tensor(alpha_induce(1, 1, q), alpha_induce(1, 1, q))
    hs = hom_space_between(x, x)
    assert len(hs.basis) == 2
    assert np.allclose(hs.gram, np.eye(2), atol=1e-10)


def test_z4_alpha_plus_one_pairs_with_alpha_minus_three():
    # with q(a) = exp(i pi a^2 / 4), B(1, 2) = -1: alpha+_1 meets alpha-_3, not alpha-_1
    q = subgroup_qsystem(pointed_cyclic(4, 1), [0, 2])
    ap = alpha_induce(1, 1, q)
    assert hom_dim(ap, alpha_induce(-1, 1, q)) == 0
    assert hom_dim(ap, alpha_induce(-1, 3, q)) == 1


def test_ising_sigma_inductions():
    q = ising_fermion_qsystem(ising())
    ap, am = alpha_induce(1, 1, q), alpha_induce(-1, 1, q)
    # only one A-A bimodule has dimension sqrt 2, so both inductions land on it
    assert hom_dim(ap, ap) == 1
    assert hom_dim(ap, am) == 1
    assert ap.dim == pytest.approx(math.sqrt(2))


def test_decompose_simple_is_itself():
    q = ising_fermion_qsystem(ising())
    ap = alpha_induce(1, 1, q)
    parts = decompose_bimodule(ap)
    assert len(parts) == 1 and parts[0][1] == 1
    assert parts[0][0].underlying == ap.underlying


def test_decompose_trivial():
    q = trivial_qsystem(ising())
    parts = decompose_bimodule(alpha_induce(1, 2, q))
    assert [(p.underlying, m) for p, m in parts] == [((0, 0, 1), 1)]


def test_decompose_product_matches_end_dimension():
    q = ising_fermion_qsystem(ising())
    ap = alpha_induce(1, 1, q)
    x = relative_tensor(ap, ap)
    parts = decompose_bimodule(x)
    assert sum(m * m for _, m in parts) == hom_dim(x, x) == 2


# induced systems ---------------------------------------------------------------------

def test_trivial_on_ising(ising_trivial):
    s = ising_trivial
    assert np.array_equal(s.Z, np.eye(3, dtype=int))
    assert len(s.full) == len(s.chiral_plus) == len(s.chiral_minus) == len(s.ambichiral) == 3
    assert s.w_full == pytest.approx(4.0, abs=1e-12)
    assert branching_factorization(s) == 0
    assert commutativity_report(s).commutative


def test_z4_matches_group_oracle(z4):
    cat = pointed_cyclic(4, 1)
    assert z4.Z.tolist() == Z4_CONJ
    assert np.array_equal(z4.Z, pointed_invariant(cat, [0, 2]))
    inv = check_modular_invariance(z4.Z, cat.modular)
    assert inv.passed
    assert branching_factorization(z4) == 0
    assert commutativity_report(z4).commutative


def test_z4_global_dimensions(z4):
    # frozen from the computation: A is not commutative, every system has w = 4
    for w in (z4.w, z4.w_full, z4.w_plus, z4.w_minus, z4.w_zero):
        assert w == pytest.approx(4.0, abs=1e-12)
    assert z4.w_full * z4.w_zero == pytest.approx(z4.w_plus * z4.w_minus)
    vals = z4.identity_chain()["values"]
    assert vals["w/w_plus"] == pytest.approx(1.0) and vals["w_plus/w_zero"] == pytest.approx(1.0)
    assert vals["d_theta"] == pytest.approx(2.0)


def test_ising_psi_system(ising_psi):
    s = ising_psi
    cat = ising()
    assert np.array_equal(s.Z, np.eye(3, dtype=int))
    assert check_modular_invariance(s.Z, cat.modular).passed
    idx = sum(s.Z[l, m] * cat.dims[l] * cat.dims[m] for l in range(3) for m in range(3))
    assert idx == pytest.approx(s.w_full, abs=1e-8)
    assert [x.underlying for x in s.simples] == [(1, 0, 1), (0, 2, 0), (1, 0, 1)]
    assert branching_factorization(s) == 0
    # frozen from the computation; the vacuum column gives 1 while d_theta is 2
    assert s.identity_chain()["values"]["sum d_lam Z_lam0"] == pytest.approx(1.0)


def test_ising_psi_commutativity_oracle(ising_psi):
    assert commutativity_report(ising_psi).commutative == transpose_oracle(ising_psi)


def test_d4_noncommutative_full_system():
    cat = su2_level_k(4)
    s = build_induced_system(subgroup_qsystem(cat, [0, 4]))
    assert s.Z.tolist() == [[1, 0, 0, 0, 1], [0, 0, 0, 0, 0], [0, 0, 2, 0, 0], [0, 0, 0, 0, 0], [1, 0, 0, 0, 1]]
    rep = commutativity_report(s)
    assert not rep.commutative and rep.z_max == 2
    assert transpose_oracle(s) is False
    assert check_modular_invariance(s.Z, cat.modular).passed
    assert branching_factorization(s) == 0


def test_modular_invariance_identity_and_counterexample():
    md = ising().modular
    assert check_modular_invariance(np.eye(3, dtype=int), md).passed
    swap = np.array([[0, 0, 1], [0, 1, 0], [1, 0, 0]])
    rep = check_modular_invariance(swap, md)
    assert not rep.passed and rep.z00 == 0


# group-theoretic oracle --------------------------------------------------------------

@pytest.mark.parametrize("n,p", [(3, 2), (4, 3), (5, 2)])
def test_pointed_oracle_trivial_subgroup(n, p):
    assert np.array_equal(pointed_invariant(pointed_cyclic(n, p), [0]), np.eye(n, dtype=int))


def test_pointed_oracle_z6():
    cat = pointed_cyclic(6, 1)
    s = build_induced_system(subgroup_qsystem(cat, [0, 2, 4]), full_ring=False)
    assert np.array_equal(s.Z, pointed_invariant(cat, [0, 2, 4]))


def test_pointed_oracle_rejects_nontrivial_associator():
    with pytest.raises(ValueError):
        pointed_invariant(pointed_cyclic(6, 1), [0, 3])
