"""JSON files for categories and Q-systems, and deterministic run reports.

Complex numbers are written as ``[re, im]``.  Category and Q-system files keep
full double precision so a reload reproduces the data bit for bit; reports
round every number to 12 significant digits.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .category import CategoryData, check_hexagon, check_pentagon
from .errors import Inconsistent, ParseError, SchemaError, ValidationFailed
from .families import build_family, trivial
from .induction import (
    QSystemData,
    check_qsystem,
    ising_fermion_qsystem,
    subgroup_qsystem,
    trivial_qsystem,
)
from .modular import FusionRingData, ModularData, check_ring
from .morphisms import Morphism, otensor

FORMAT_VERSION = "1"
SIG = 12


# numbers ------------------------------------------------------------------------

def _cplx(z) -> list:
    z = complex(z)
    return [z.real, z.imag]


def _matrix(M) -> list:
    M = np.atleast_2d(np.asarray(M, dtype=complex))
    return [[_cplx(x) for x in row] for row in M]


def _read_cplx(x, where: str) -> complex:
    if isinstance(x, (int, float)) and not isinstance(x, bool):
        return complex(x)
    if isinstance(x, list) and len(x) == 2 and all(isinstance(v, (int, float)) for v in x):
        return complex(x[0], x[1])
    raise SchemaError(f"{where}: expected a number or [re, im], got {x!r}")


def _read_matrix(x, where: str) -> np.ndarray:
    if not isinstance(x, list) or not all(isinstance(r, list) for r in x):
        raise SchemaError(f"{where}: expected a nested array")
    rows = [[_read_cplx(v, where) for v in r] for r in x]
    if len({len(r) for r in rows}) > 1:
        raise SchemaError(f"{where}: ragged matrix")
    return np.array(rows, dtype=complex).reshape(len(rows), len(rows[0]) if rows else 0)


def round_sig(x, sig: int = SIG):
    """Round every float inside nested containers to ``sig`` significant digits."""
    if isinstance(x, dict):
        return {k: round_sig(v, sig) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [round_sig(v, sig) for v in x]
    if isinstance(x, np.ndarray):
        return round_sig(x.tolist(), sig)
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (complex, np.complexfloating)):
        return [round_sig(float(x.real), sig), round_sig(float(x.imag), sig)]
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if x == 0 or not np.isfinite(x):
            return 0.0 if x == 0 else x
        return float(f"{x:.{sig}g}")
    return x


# category files -------------------------------------------------------------------

def category_to_dict(cat: CategoryData) -> dict:
    out = {
        "format_version": FORMAT_VERSION,
        "name": cat.name,
        "labels": list(cat.ring.labels),
        "unit": 0,
        "dual": list(cat.dual),
        "N": cat.N.tolist(),
    }
    if cat.modular is not None:
        out["S"] = _matrix(cat.modular.S)
        out["T"] = [_cplx(t) for t in cat.modular.twists]
    out["F"] = {",".join(map(str, k)): _matrix(v) for k, v in sorted(cat.F.items())}
    if cat.R is not None:
        out["R"] = {",".join(map(str, k)): _matrix(v) for k, v in sorted(cat.R.items())}
    return out


def dumps_category(cat: CategoryData) -> str:
    return json.dumps(category_to_dict(cat), indent=1) + "\n"


def _load_json(path) -> dict:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: {exc.msg} at line {exc.lineno}, column {exc.colno}") from None
    if not isinstance(doc, dict):
        raise SchemaError("top level must be an object")
    return doc


def _require(doc: dict, key: str, kind, where: str = ""):
    if key not in doc:
        raise SchemaError(f"{where}missing field '{key}'")
    if not isinstance(doc[key], kind):
        raise SchemaError(f"{where}field '{key}' has the wrong type")
    return doc[key]


def _check_version(doc):
    v = _require(doc, "format_version", str)
    if v != FORMAT_VERSION:
        raise SchemaError(f"unsupported format_version {v!r}")


def category_from_dict(doc: dict, tol: float = 1e-9, validate: bool = True) -> CategoryData:
    """Build and validate a category; the first failing invariant is reported."""
    _check_version(doc)
    labels = _require(doc, "labels", list)
    n = len(labels)
    if doc.get("unit", 0) != 0:
        raise SchemaError("the unit must be label 0")
    dual = _require(doc, "dual", list)
    N = np.asarray(_require(doc, "N", list))
    if N.shape != (n, n, n) or len(dual) != n:
        raise SchemaError(f"N must be {n}x{n}x{n} and dual of length {n}")
    try:
        check_ring(N.astype(int), dual)  # combinatorial axioms before any eigenvalue work
        ring = FusionRingData(labels, dual, N.astype(int))
        ring.validate(tol)
    except Inconsistent as exc:
        raise ValidationFailed(str(exc)) from None
    F = {}
    Fdoc = _require(doc, "F", dict)
    R = None
    proto = CategoryData(ring, {}, None)
    for key in proto.admissible_F_keys():
        s = ",".join(map(str, key))
        if s not in Fdoc:
            raise SchemaError(f"missing F block '{s}'")
        F[key] = _read_matrix(Fdoc[s], f"F[{s}]")
    if "R" in doc:
        Rdoc = _require(doc, "R", dict)
        R = {}
        for key in proto.admissible_R_keys():
            s = ",".join(map(str, key))
            if s not in Rdoc:
                raise SchemaError(f"missing R block '{s}'")
            R[key] = _read_matrix(Rdoc[s], f"R[{s}]")
    md = None
    if "S" in doc and "T" in doc:
        S = _read_matrix(doc["S"], "S")
        T = np.array([_read_cplx(t, "T") for t in doc["T"]])
        md = ModularData(S, T)
    cat = CategoryData(ring, F, R, md, name=str(doc.get("name", "category")))
    if validate:
        for rep in (check_pentagon(cat, tol), check_hexagon(cat, tol) if R is not None else None):
            if rep is not None and not rep.residual < tol:
                raise ValidationFailed(f"{rep.name} fails at {rep.worst} (residual {rep.residual:.3g})")
    return cat


def load_category(path, tol: float = 1e-9) -> CategoryData:
    return category_from_dict(_load_json(path), tol)


BUILTIN_QSYSTEMS = ("trivial", "ising_fermion", "subgroup:<labels>")


def resolve_category(spec: str, tol: float = 1e-9) -> CategoryData:
    """A file path, or a built-in name such as ``fibonacci``, ``su2_level_3``, ``pointed_cyclic:4:1``."""
    if Path(spec).is_file():
        return load_category(spec, tol)
    name, *params = spec.split(":")
    if name == "trivial":
        return trivial()
    try:
        return build_family(name, *(int(p) for p in params))
    except (ValueError, TypeError) as exc:
        raise ParseError(f"bad built-in category '{spec}': {exc}") from None


# Q-system files -------------------------------------------------------------------

def _blocks_to_doc(m: Morphism, labels) -> dict:
    return {labels[c]: _matrix(b) for c, b in sorted(m.blocks.items())}


def qsystem_to_dict(q: QSystemData) -> dict:
    labels = q.cat.ring.labels
    theta: dict = {}
    for (c,) in q.obj:
        theta[labels[c]] = theta.get(labels[c], 0) + 1
    return {
        "format_version": FORMAT_VERSION,
        "name": q.name,
        "category": q.cat.name,
        "theta": theta,
        "mult": _blocks_to_doc(q.mult, labels),
        "unit": _blocks_to_doc(q.unit, labels),
    }


def dumps_qsystem(q: QSystemData) -> str:
    return json.dumps(qsystem_to_dict(q), indent=1) + "\n"


def qsystem_from_dict(doc: dict, cat: CategoryData, tol: float = 1e-8) -> QSystemData:
    """Blocks are per charge over left-associated fusion trees of A A and A."""
    _check_version(doc)
    labels = cat.ring.labels
    theta = _require(doc, "theta", dict)
    mult = {}
    A = []
    for c, lab in enumerate(labels):
        k = theta.get(lab, 0)
        if not isinstance(k, int) or k < 0:
            raise SchemaError(f"theta[{lab}] must be a non-negative integer")
        A += [(c,)] * k
    for lab in theta:
        if lab not in labels:
            raise SchemaError(f"theta names unknown label '{lab}'")
    A = tuple(A)
    if not A or A[0] != (0,):
        raise SchemaError("theta must contain the unit label")
    m = Morphism(cat, otensor(A, A), A)
    for c, blk in m.blocks.items():
        raw = _require(_require(doc, "mult", dict), labels[c], list, "mult: ")
        M = _read_matrix(raw, f"mult[{labels[c]}]")
        if M.shape != blk.shape:
            raise SchemaError(f"mult[{labels[c]}] has shape {M.shape}, expected {blk.shape}")
        mult[c] = M
    m = Morphism(cat, otensor(A, A), A, mult)
    u = Morphism(cat, ((),), A)
    raw = _require(_require(doc, "unit", dict), labels[0], list, "unit: ")
    U = _read_matrix(raw, "unit")
    if U.shape != u.blocks[0].shape:
        raise SchemaError(f"unit has shape {U.shape}, expected {u.blocks[0].shape}")
    u = Morphism(cat, ((),), A, {0: U})
    q = QSystemData(cat, A, m, u, name=str(doc.get("name", "qsystem")))
    rep = check_qsystem(q, tol)
    if not rep.passed:
        k, v = max(rep.residuals.items(), key=lambda kv: kv[1])
        raise ValidationFailed(f"Q-system axiom '{k}' fails (residual {v:.3g})")
    return q


def load_qsystem(path, cat: CategoryData, tol: float = 1e-8) -> QSystemData:
    return qsystem_from_dict(_load_json(path), cat, tol)


def resolve_qsystem(spec: str, cat: CategoryData) -> QSystemData:
    """A file path, or ``trivial``, ``ising_fermion``, ``subgroup:0,2``."""
    if Path(spec).is_file():
        return load_qsystem(spec, cat)
    if spec == "trivial":
        return trivial_qsystem(cat)
    if spec == "ising_fermion":
        return ising_fermion_qsystem(cat)
    if spec.startswith("subgroup:"):
        try:
            elems = [int(x) for x in spec.split(":", 1)[1].split(",")]
        except ValueError:
            raise ParseError(f"bad subgroup list in '{spec}'") from None
        return subgroup_qsystem(cat, elems)
    raise ParseError(f"'{spec}' is neither a file nor a built-in Q-system {BUILTIN_QSYSTEMS}")


# reports --------------------------------------------------------------------------

@dataclass
class Check:
    name: str
    residual: float
    threshold: float
    passed: bool = field(init=False)

    def __post_init__(self):
        self.residual = float(self.residual)
        self.passed = bool(self.residual <= self.threshold)


@dataclass
class RunReport:
    command: str
    inputs: dict = field(default_factory=dict)
    checks: list = field(default_factory=list)
    artifacts: dict = field(default_factory=dict)
    wall_time: float = 0.0

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name: str, residual: float, threshold: float) -> Check:
        c = Check(name, residual, threshold)
        self.checks.append(c)
        return c

    def exact(self, name: str, ok: bool) -> Check:
        """A yes/no check recorded as residual 0 or 1 against threshold 0."""
        return self.add(name, 0.0 if ok else 1.0, 0.0)

    def to_dict(self, with_time: bool = True) -> dict:
        out = {
            "command": self.command,
            "inputs": dict(sorted(self.inputs.items())),
            "passed": self.passed,
            "checks": [{"name": c.name, "residual": c.residual, "threshold": c.threshold, "pass": c.passed}
                       for c in self.checks],
            "artifacts": self.artifacts,
        }
        if with_time:
            out["wallTime"] = self.wall_time
        return round_sig(out)

    def to_json(self, with_time: bool = True) -> str:
        return json.dumps(self.to_dict(with_time), indent=1) + "\n"

    def summary(self) -> str:
        w = max((len(c.name) for c in self.checks), default=10)
        lines = [f"{self.command}: {'PASS' if self.passed else 'FAIL'} ({len(self.checks)} checks, {self.wall_time:.2f} s)"]
        for c in self.checks:
            mark = "ok  " if c.passed else "FAIL"
            lines.append(f"  {mark} {c.name:<{w}}  {c.residual:.3e} <= {c.threshold:.1e}")
        return "\n".join(lines)


def file_digest(path) -> str:
    p = Path(path)
    if not p.is_file():
        return f"builtin:{path}"
    return "sha256:" + hashlib.sha256(p.read_bytes()).hexdigest()


__all__ = [
    "Check", "RunReport", "category_from_dict", "category_to_dict", "dumps_category", "dumps_qsystem",
    "file_digest", "load_category", "load_qsystem", "qsystem_from_dict", "qsystem_to_dict",
    "resolve_category", "resolve_qsystem", "round_sig",
]
