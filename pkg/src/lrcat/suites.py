"""Check suites behind ``lrcat run-suite`` and the per-command reports."""

from __future__ import annotations

import time

import numpy as np

from .category import CategoryData, check_hexagon, check_pentagon
from .center import build_lr_qsystem, compute_center
from .diagram import bfe_diagram_residual, hat_gram_residual
from .errors import UnknownSuite
from .families import fibonacci, ising, nondegenerate_forms, pointed_cyclic, su2_level_k, trivial
from .induction import (
    branching_factorization,
    build_induced_system,
    check_modular_invariance,
    check_qsystem,
    commutativity_report,
    ising_fermion_qsystem,
    pointed_invariant,
    subgroup_qsystem,
    transpose_oracle,
    trivial_qsystem,
)
from .io import RunReport
from .rehren import (
    RelativeBraiding,
    build_rehren_qsystem,
    coefficient_agreement,
    monodromy_table,
    orthonormality_residual,
    verify_mixed,
)
from .search import e6_identity_check

SUITES = ("coherence", "lr", "induction", "duality", "e6", "all")
TOL = 1e-9
PRES_TOL = 1e-8


def coherence_categories() -> list[CategoryData]:
    cats = [su2_level_k(k) for k in range(1, 9)] + [fibonacci(), ising()]
    cats += [pointed_cyclic(n, p) for n in range(1, 7) for p in nondegenerate_forms(n)]
    return cats


def center_categories() -> list[CategoryData]:
    """Modular built-ins small enough for the tube algebra at desk scale."""
    cats = [trivial(), fibonacci(), ising()] + [su2_level_k(k) for k in range(1, 5)]
    cats += [pointed_cyclic(n, p) for n in range(2, 7) for p in nondegenerate_forms(n)]
    return cats


_CENTERS: dict = {}


def center_of(cat: CategoryData):
    """compute_center, memoized by category name across suites in one process."""
    if cat.name not in _CENTERS:
        _CENTERS[cat.name] = compute_center(cat)
    return _CENTERS[cat.name]


def z4_z2():
    cat = pointed_cyclic(4, 1)
    return cat, subgroup_qsystem(cat, [0, 2])


def ising_psi():
    cat = ising()
    return cat, ising_fermion_qsystem(cat)


# per-command reports -----------------------------------------------------------------

def add_lr(rep: RunReport, cat: CategoryData, tol: float = PRES_TOL):
    pres = build_lr_qsystem(cat, validate=False)
    for k, v in pres.relations().items():
        rep.add(f"lr/{cat.name}/{k}", v, tol)
    rep.add(f"lr/{cat.name}/wValue", abs(pres.w_value - float(np.sum(cat.dims**2))), TOL)
    rep.artifacts.setdefault("lr", {})[cat.name] = {"wValue": pres.w_value, "gamma": [w[0] for w in pres.gamma]}
    return pres


def center_multiset_residual(cat: CategoryData, objs) -> float:
    """Distance between the (dim, twist) multisets of the center and of C x C^rev."""
    tw = cat.twists
    want = [(cat.dims[a] * cat.dims[b], tw[a] * np.conj(tw[b])) for a in range(cat.rank) for b in range(cat.rank)]
    if len(want) != len(objs):
        return float("inf")
    worst = 0.0
    for o in objs:
        # greedy nearest match; entries are separated far beyond the tolerance
        dist = [abs(d - o.dim) + abs(t - o.twist) for d, t in want]
        k = int(np.argmin(dist))
        worst = max(worst, dist[k])
        want.pop(k)
    return worst


def add_center(rep: RunReport, cat: CategoryData, bfe: bool = True):
    objs = center_of(cat)
    rep.exact(f"center/{cat.name}/count = rank^2", len(objs) == cat.rank**2)
    rep.add(f"center/{cat.name}/sum dim^2 = w^2", abs(sum(o.dim**2 for o in objs) - cat.ring.w**2), 1e-6)
    if cat.twists is not None:
        rep.add(f"center/{cat.name}/(dim, twist) multiset", center_multiset_residual(cat, objs), 1e-8)
    if bfe and cat.braided:
        rep.exact(f"center/{cat.name}/half-braidings attached", all(o.half_braiding is not None for o in objs))
        rep.add(f"center/{cat.name}/BFE", max((o.bfe_residual or 0.0) for o in objs), TOL)
    rep.artifacts.setdefault("center", {})[cat.name] = {
        "dims": [o.dim for o in objs], "twists": [o.twist for o in objs],
        "underlying": [list(o.underlying) for o in objs]}
    return objs


def add_induction(rep: RunReport, cat, q, tag: str, max_simples: int = 256, chain: bool = True):
    sys = build_induced_system(q, max_simples=max_simples)
    qr = check_qsystem(q)
    rep.add(f"{tag}/Q-system axioms", max(qr.residuals.values()), PRES_TOL)
    inv = check_modular_invariance(sys.Z, cat.modular)
    rep.add(f"{tag}/ZS = SZ", inv.s_residual, TOL)
    rep.add(f"{tag}/ZT = TZ", inv.t_residual, TOL)
    rep.exact(f"{tag}/Z00 = 1, Z >= 0", inv.z00 == 1 and inv.nonnegative)
    rep.add(f"{tag}/branching factorization", branching_factorization(sys), 0)
    idx = float(sum(sys.Z[l, m] * cat.dims[l] * cat.dims[m] for l in range(cat.rank) for m in range(cat.rank)))
    rep.add(f"{tag}/sum Z d d = wFull", abs(idx - sys.w_full), PRES_TOL)
    ic = sys.identity_chain()
    if chain:
        for k, v in ic["residuals"].items():
            rep.add(f"{tag}/chain {k}", v, TOL)
    rep.artifacts.setdefault("induction", {})[tag] = {
        "Z": sys.Z, "bPlus": sys.b_plus, "bMinus": sys.b_minus, "dims": sys.dims,
        "wFull": sys.w_full, "wPlus": sys.w_plus, "wMinus": sys.w_minus, "wZero": sys.w_zero,
        "chain": ic["values"], "local": ic["local"],
        "commutative": commutativity_report(sys).commutative if sys.full_ring is not None else None,
    }
    return sys


def add_rehren(rep: RunReport, sys, tag: str):
    pres = build_rehren_qsystem(sys, validate=False)
    for k, v in pres.relations().items():
        rep.add(f"{tag}/rehren {k}", v, PRES_TOL)
    rep.add(f"{tag}/rehren orthonormality", orthonormality_residual(pres), PRES_TOL)
    rep.exact(f"{tag}/rehren multiplicities = Z", bool(np.array_equal(pres.multiplicities(), sys.Z)))
    mixed = verify_mixed(sys)
    rep.exact(f"{tag}/mixed multiplicities = b+", bool(np.array_equal(mixed.b_plus, mixed.b_plus_recount)))
    rep.add(f"{tag}/mixed index = wPlus", abs(mixed.index_value - mixed.w_plus), PRES_TOL)
    return pres


def add_braiding(rep: RunReport, sys, tag: str):
    rb = RelativeBraiding(sys)
    amb = sys.ambichiral
    nat = max((rb.naturality_residual(a, b) for a in amb for b in amb), default=0.0)
    rep.add(f"{tag}/relative braiding naturality", nat, TOL)
    table = monodromy_table(sys, rb)
    rep.add(f"{tag}/monodromy scalar", max((e.scalar_residual for e in table), default=0.0), TOL)
    rep.add(f"{tag}/monodromy |scalar| = 1", max((abs(abs(e.scalar) - 1) for e in table), default=0.0), TOL)
    rep.add(f"{tag}/monodromy = theta''/(theta theta')",
            max((abs(e.scalar - e.expected) for e in table), default=0.0), TOL)


# suites -----------------------------------------------------------------------------

def suite_coherence(rep: RunReport, **_):
    for cat in coherence_categories():
        rep.add(f"pentagon/{cat.name}", check_pentagon(cat).residual, TOL)
        rep.add(f"hexagon/{cat.name}", check_hexagon(cat).residual, TOL)


def suite_lr(rep: RunReport, **_):
    for cat in (trivial(), fibonacci(), ising()):
        add_lr(rep, cat)
    for cat in center_categories():
        add_center(rep, cat)


def suite_induction(rep: RunReport, max_simples: int = 256, **_):
    for cat in (fibonacci(), ising()):
        tag = f"trivial/{cat.name}"
        sys = add_induction(rep, cat, trivial_qsystem(cat), tag, max_simples)
        n = cat.rank
        rep.exact(f"{tag}/Z = I", bool(np.array_equal(sys.Z, np.eye(n, dtype=int))))
        same = (len(sys.full) == len(sys.chiral_plus) == len(sys.chiral_minus) == len(sys.ambichiral) == n)
        # each simple is alpha of one label; compare the fusion tables through that labelling
        lab = [int(np.argmax(s.underlying)) for s in sys.simples]
        if same and sys.full_ring is not None:
            N2 = np.zeros_like(cat.N)
            for i in range(n):
                for j in range(n):
                    for k in range(n):
                        N2[lab[i], lab[j], lab[k]] = sys.full_ring.N[i, j, k]
            same = bool(np.array_equal(N2, cat.N))
        rep.exact(f"{tag}/full = chiral = ambichiral = input", same)
        rep.add(f"{tag}/rehren = LR after rephasing",
                coefficient_agreement(build_rehren_qsystem(sys, validate=False), build_lr_qsystem(cat)), PRES_TOL)
    cat, q = z4_z2()
    sys = add_induction(rep, cat, q, "Z4/Z2", max_simples)
    rep.exact("Z4/Z2/Z = group-theoretic oracle", bool(np.array_equal(sys.Z, pointed_invariant(cat, [0, 2]))))
    cat, q = ising_psi()
    sys = add_induction(rep, cat, q, "Ising 1+psi", max_simples, chain=False)
    rep.add("Ising 1+psi/sum d Z_l0 = 2", abs(sys.identity_chain()["values"]["sum d_lam Z_lam0"] - 2.0), TOL)
    rep.exact("Ising 1+psi/commutativity verdict = transpose oracle",
              commutativity_report(sys).commutative == transpose_oracle(sys))


def suite_duality(rep: RunReport, max_simples: int = 256, **_):
    for tag, (cat, q) in (("Z4/Z2", z4_z2()), ("Ising 1+psi", ising_psi())):
        sys = build_induced_system(q, max_simples=max_simples, full_ring=False)
        add_rehren(rep, sys, tag)
        add_braiding(rep, sys, tag)
    cat = su2_level_k(4)
    sys = build_induced_system(subgroup_qsystem(cat, [0, 4]), max_simples=max_simples, full_ring=False)
    add_braiding(rep, sys, "su2_4 D4")
    for cat in coherence_categories():
        rep.add(f"dsl/{cat.name}/<T^k,T^j> = <Tk,Tj> braid+", hat_gram_residual(cat, 1), TOL)
        rep.add(f"dsl/{cat.name}/<T^k,T^j> = <Tk,Tj> braid-", hat_gram_residual(cat, -1), TOL)
    for cat in center_categories():
        hbs = [o.half_braiding for o in center_of(cat) if o.half_braiding is not None]
        worst = max((bfe_diagram_residual(hb, cat) for hb in hbs), default=0.0)
        rep.add(f"dsl/{cat.name}/BFE through diagrams", worst, TOL)


def suite_e6(rep: RunReport, entry_bound: int = 2, **_):
    t = time.time()
    r = e6_identity_check(entry_bound)
    rep.add("e6/sum d_lam Z_lam0 = 3+sqrt3", r.residual, TOL)
    rep.exact("e6/search exhaustive", r.search.complete)
    rep.artifacts["e6"] = {"Z": r.e6, "vacuumSum": r.vacuum_sum, "invariants": len(r.invariants),
                           "freeParameters": r.search.free_parameters, "candidates": r.search.candidates}
    rep.add("e6/search time < 60 s", 0.0 if time.time() - t < 60 else 1.0, 0.0)


_RUNNERS = {
    "coherence": suite_coherence,
    "lr": suite_lr,
    "induction": suite_induction,
    "duality": suite_duality,
    "e6": suite_e6,
}


def run_suite(name: str, entry_bound: int = 2, max_simples: int = 256) -> RunReport:
    if name not in SUITES:
        raise UnknownSuite(f"unknown suite '{name}'; choose from {', '.join(SUITES)}")
    rep = RunReport(f"run-suite {name}")
    t = time.time()
    names = list(_RUNNERS) if name == "all" else [name]
    for s in names:
        _RUNNERS[s](rep, entry_bound=entry_bound, max_simples=max_simples)
    rep.wall_time = time.time() - t
    return rep
