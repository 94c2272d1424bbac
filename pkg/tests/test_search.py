import math
import time

import numpy as np
import pytest

from lrcat.families import fibonacci, ising, su2_level_k
from lrcat.induction import check_modular_invariance
from lrcat.search import e6_identity_check, search_invariants, vacuum_sum


@pytest.fixture(scope="module")
def e6():
    t = time.time()
    r = e6_identity_check()
    return r, time.time() - t


def test_identity_always_found():
    for cat in (fibonacci(), ising(), su2_level_k(3)):
        res = search_invariants(cat.modular)
        assert np.array_equal(res.invariants[0], np.eye(cat.rank, dtype=int))
        assert vacuum_sum(res.invariants[0], cat.dims) == pytest.approx(1.0)


def test_su2_4_has_d4():
    res = search_invariants(su2_level_k(4).modular)
    assert len(res.invariants) == 2
    d4 = res.invariants[1]
    assert d4.tolist() == [[1, 0, 0, 0, 1], [0, 0, 0, 0, 0], [0, 0, 2, 0, 0], [0, 0, 0, 0, 0], [1, 0, 0, 0, 1]]


def test_every_result_is_invariant():
    md = su2_level_k(6).modular
    for Z in search_invariants(md).invariants:
        rep = check_modular_invariance(Z, md)
        assert rep.passed and rep.z00 == 1


def test_level_10_classification(e6):
    r, _ = e6
    assert len(r.invariants) == 3  # A11, D7, E6 within entry bound 2
    assert r.search.complete


def test_e6_vacuum_column(e6):
    r, elapsed = e6
    assert np.nonzero(r.e6[:, 0])[0].tolist() == [0, 6]
    assert r.vacuum_sum == pytest.approx(3 + math.sqrt(3), abs=1e-9)
    assert r.passed
    assert elapsed < 60


def test_e6_blocks(e6):
    r, _ = e6
    # |chi_0 + chi_6|^2 + |chi_3 + chi_7|^2 + |chi_4 + chi_10|^2
    v = np.zeros((3, 11), dtype=int)
    for i, (a, b) in enumerate([(0, 6), (3, 7), (4, 10)]):
        v[i, [a, b]] = 1
    assert np.array_equal(r.e6, v.T @ v)


def test_z00_constraint_enforced(e6):
    r, _ = e6
    assert all(Z[0, 0] == 1 for Z in r.invariants)
    assert all(np.all(Z >= 0) and Z.max() <= 2 for Z in r.invariants)


def test_determinism():
    md = su2_level_k(4).modular
    a, b = search_invariants(md), search_invariants(md)
    assert [Z.tolist() for Z in a.invariants] == [Z.tolist() for Z in b.invariants]
