"""Unitary modular categories, Q-systems, alpha-induction and the Longo-Rehren center."""

from .category import CategoryData, check_hexagon, check_pentagon, gauge_transform
from .center import QSystemPresentation, build_lr_qsystem, compute_center
from .diagram import diagram_scalar, evaluate_diagram, parse_diagram, print_diagram
from .families import build_family, fibonacci, ising, pointed_cyclic, su2_level_k, trivial
from .induction import (
    InducedSystem,
    QSystemData,
    build_induced_system,
    check_modular_invariance,
    check_qsystem,
    ising_fermion_qsystem,
    subgroup_qsystem,
    trivial_qsystem,
)
from .io import RunReport, load_category, load_qsystem
from .modular import FusionRingData, ModularData, verlinde_fusion
from .rehren import RelativeBraiding, build_rehren_qsystem, verify_duality, verify_mixed
from .search import e6_identity_check, search_invariants
from .suites import run_suite

__all__ = [
    "CategoryData",
    "FusionRingData",
    "InducedSystem",
    "ModularData",
    "QSystemData",
    "QSystemPresentation",
    "RelativeBraiding",
    "RunReport",
    "build_family",
    "build_induced_system",
    "build_lr_qsystem",
    "build_rehren_qsystem",
    "check_hexagon",
    "check_modular_invariance",
    "check_pentagon",
    "check_qsystem",
    "compute_center",
    "diagram_scalar",
    "e6_identity_check",
    "evaluate_diagram",
    "fibonacci",
    "gauge_transform",
    "ising",
    "ising_fermion_qsystem",
    "load_category",
    "load_qsystem",
    "parse_diagram",
    "pointed_cyclic",
    "print_diagram",
    "run_suite",
    "search_invariants",
    "su2_level_k",
    "subgroup_qsystem",
    "trivial",
    "trivial_qsystem",
    "verify_duality",
    "verify_mixed",
    "verlinde_fusion",
]
