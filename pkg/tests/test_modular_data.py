import math

import numpy as np
import pytest

from lrcat.errors import DegenerateForm, Inconsistent, NotModular, NotUnitary, UnsupportedFamily
from lrcat.families import build_family, fibonacci, ising, nondegenerate_forms, pointed_cyclic, su2_level_k, trivial
from lrcat.modular import check_nondegenerate, check_ring, quantum_dims, verlinde_fusion

PHI = (1 + math.sqrt(5)) / 2

MODULAR_BUILTINS = [trivial, fibonacci, ising] + [lambda k=k: su2_level_k(k) for k in range(1, 9)] + [
    lambda n=n, p=p: pointed_cyclic(n, p) for n in range(2, 7) for p in nondegenerate_forms(n)]


def su2_rule(k, a, b):
    """Truncated Clebsch-Gordan rule, written out independently of the Verlinde sum."""
    return [c for c in range(abs(a - b), min(a + b, 2 * k - a - b) + 1, 2)]


def test_verlinde_one_label():
    assert verlinde_fusion(np.array([[1.0]])).tolist() == [[[1]]]


def test_verlinde_ising():
    r2 = math.sqrt(2)
    S = 0.5 * np.array([[1, r2, 1], [r2, 0, -r2], [1, -r2, 1]])
    N = verlinde_fusion(S)
    assert N[1, 1].tolist() == [1, 0, 1]
    assert N[1, 2].tolist() == [0, 1, 0]
    assert N[2, 2].tolist() == [1, 0, 0]


def test_verlinde_su2_4_matches_clebsch_gordan():
    k = 4
    n = k + 1
    S = np.array([[math.sqrt(2 / (k + 2)) * math.sin(math.pi * (i + 1) * (j + 1) / (k + 2)) for j in range(n)]
                  for i in range(n)])
    N = verlinde_fusion(S)
    for a in range(n):
        for b in range(n):
            want = np.zeros(n, dtype=int)
            want[su2_rule(k, a, b)] = 1
            assert N[a, b].tolist() == want.tolist()


def test_verlinde_rejects_non_unitary():
    with pytest.raises(NotUnitary):
        verlinde_fusion(np.ones((2, 2)) / 1.5)


def test_verlinde_rejects_non_integer():
    # unitary with positive first row, but fusion coefficients come out fractional
    t = 0.3
    S = np.array([[math.cos(t), math.sin(t)], [math.sin(t), -math.cos(t)]])
    with pytest.raises(NotModular):
        verlinde_fusion(S)


@pytest.mark.parametrize("make", MODULAR_BUILTINS)
def test_builtin_verlinde_reproduces_N(make):
    cat = make()
    assert np.array_equal(verlinde_fusion(cat.modular.S), cat.N)


@pytest.mark.parametrize("make", MODULAR_BUILTINS)
def test_builtin_modular_data_invariants(make):
    cat = make()
    S, T = cat.modular.S, cat.modular.T
    n = cat.rank
    assert np.linalg.norm(S @ S.conj().T - np.eye(n)) < 1e-9
    assert np.allclose(S[0].imag, 0) and np.all(S[0].real > 0)
    assert np.allclose(S[0] / S[0, 0], cat.dims, atol=1e-9)
    assert np.allclose(T, np.diag(np.diag(T))) and np.allclose(np.abs(np.diag(T)), 1)
    dims, w = quantum_dims(cat.N)
    assert np.allclose(dims, cat.dims, atol=1e-9)
    assert abs(w - np.sum(dims**2)) < 1e-9


@pytest.mark.parametrize("make", MODULAR_BUILTINS)
def test_duality_symmetries(make):
    cat = make()
    d = np.asarray(cat.dual)
    assert np.array_equal(d[d], np.arange(cat.rank))
    N = cat.N
    for i in range(cat.rank):
        for j in range(cat.rank):
            assert np.array_equal(N[i, j], N[d[j], d[i]][d])


def test_quantum_dims_values():
    assert quantum_dims(trivial().N) == (pytest.approx([1.0]), pytest.approx(1.0))
    dims, w = quantum_dims(fibonacci().N)
    assert dims[1] == pytest.approx(PHI, abs=1e-12)
    assert w == pytest.approx(1 + PHI**2, abs=1e-12)
    dims, w = quantum_dims(ising().N)
    assert dims[1] == pytest.approx(math.sqrt(2), abs=1e-12)
    assert w == pytest.approx(4.0, abs=1e-12)


def test_check_ring_rejects_non_associative():
    N = np.zeros((3, 3, 3), dtype=int)
    for j in range(3):
        N[0, j, j] = N[j, 0, j] = 1
    N[1, 1] = [1, 0, 1]
    N[1, 2] = N[2, 1] = [0, 1, 0]
    N[2, 2] = [1, 1, 0]
    with pytest.raises(Inconsistent, match="associativity"):
        check_ring(N, (0, 1, 2))


def test_fibonacci_F_block_up_to_gauge():
    cat = fibonacci()
    M = np.array([[cat.F[(1, 1, 1, 1, e, f)][0, 0] for f in (0, 1)] for e in (0, 1)])
    # gauge can only rephase the off-diagonal pair; moduli and diagonal are fixed
    assert np.allclose(np.abs(M), [[1 / PHI, 1 / math.sqrt(PHI)], [1 / math.sqrt(PHI), 1 / PHI]])
    assert np.allclose(np.diag(M), [1 / PHI, -1 / PHI])
    assert np.allclose(M @ M.conj().T, np.eye(2))


def test_su2_level_10_labels_and_d6():
    cat = su2_level_k(10)
    assert cat.rank == 11
    assert cat.dims[6] == pytest.approx(2 + math.sqrt(3), abs=1e-12)
    assert cat.dims[6] == pytest.approx(math.sin(7 * math.pi / 12) / math.sin(math.pi / 12), abs=1e-12)


def test_pointed_z2_trivial_form():
    cat = pointed_cyclic(2, 0)
    assert all(np.allclose(b, 1) for b in cat.F.values())
    assert cat.N[1, 1].tolist() == [1, 0] and cat.N[0, 1].tolist() == [0, 1]


def test_degenerate_form_rejected_when_modular_requested():
    with pytest.raises(DegenerateForm):
        pointed_cyclic(2, 0, modular=True)


def test_unknown_family():
    with pytest.raises(UnsupportedFamily):
        build_family("haagerup")


def test_nondegenerate_reports():
    assert check_nondegenerate(ising().modular).nondegenerate
    assert check_nondegenerate(trivial().modular).nondegenerate
    assert not check_nondegenerate(pointed_cyclic(2, 0).modular).nondegenerate


def test_nondegenerate_forms_z4():
    assert nondegenerate_forms(4) == [1, 3, 5, 7]
