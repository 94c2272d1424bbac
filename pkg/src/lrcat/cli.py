"""``lrcat`` command line.

Every command prints a human summary to stdout and, with ``--json PATH``, writes
the machine report.  Exit status: 0 all checks pass, 1 some check fails, 2 bad
input.  Category and Q-system arguments accept files or built-in names
(``fibonacci``, ``su2_level_3``, ``pointed_cyclic:4:1``; ``trivial``,
``ising_fermion``, ``subgroup:0,2``).
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

import numpy as np

from . import suites
from .diagram import evaluate_diagram, parse_diagram
from .errors import LRCatError
from .induction import build_induced_system
from .io import (
    RunReport,
    _blocks_to_doc,
    dumps_category,
    dumps_qsystem,
    file_digest,
    resolve_category,
    resolve_qsystem,
)

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


def _fmt(z: complex) -> str:
    z = complex(z)
    if abs(z.imag) < 1e-13:
        return f"{z.real:.12g}"
    return f"{z.real:.12g}{z.imag:+.12g}i"


def _matrix_table(name: str, M, labels) -> str:
    M = np.asarray(M)
    w = max(len(str(x)) for x in list(labels) + [int(M.max()) if M.size else 0]) + 1
    head = " " * (len(name) + 1) + "".join(f"{l:>{w}}" for l in labels[: M.shape[1]])
    rows = [(name if i == 0 else " " * len(name)) + " " + "".join(f"{int(x):>{w}}" for x in row)
            for i, row in enumerate(M)]
    return "\n".join([head] + rows)


# commands -------------------------------------------------------------------------

def cmd_eval_diagram(a, rep: RunReport):
    cat = resolve_category(a.category, a.tolerance)
    src = Path(a.diagram).read_text() if Path(a.diagram).is_file() else a.diagram
    t = parse_diagram(src)
    m = evaluate_diagram(t, cat)
    labels = cat.ring.labels
    word = lambda X: [[labels[c] for c in w] for w in X]  # noqa: E731
    rep.artifacts["tensor"] = {"dom": word(m.dom), "cod": word(m.cod), "blocks": _blocks_to_doc(m, labels)}
    rep.exact("diagram type-checks", True)
    lines = []
    for c, b in sorted(m.blocks.items()):
        for (i, j), z in np.ndenumerate(b):
            lines.append(f"[{labels[c]}] ({i},{j}) {_fmt(z)}")
    return "\n".join(lines)


def cmd_induce(a, rep):
    cat = resolve_category(a.category, a.tolerance)
    q = resolve_qsystem(a.qsystem, cat)
    s = suites.add_induction(rep, cat, q, "induce", a.max_simples)
    lab = cat.ring.labels
    amb = [f"t{i}" for i in range(len(s.ambichiral))]
    vals = s.identity_chain()["values"]
    out = [_matrix_table("Z  ", s.Z, lab), "",
           "ambichiral x labels", _matrix_table("b+ ", s.b_plus, lab), "", _matrix_table("b- ", s.b_minus, lab),
           f"  ambichiral: {', '.join(amb)}", "",
           f"w = {s.w:.12g}  wFull = {s.w_full:.12g}  wPlus = {s.w_plus:.12g}  "
           f"wMinus = {s.w_minus:.12g}  wZero = {s.w_zero:.12g}",
           "identity chain: " + ", ".join(f"{k} = {v:.12g}" for k, v in vals.items())]
    return "\n".join(out)


def cmd_lr_build(a, rep):
    cat = resolve_category(a.category, a.tolerance)
    p = suites.add_lr(rep, cat)
    return f"Gamma has {len(p.gamma)} summands, wValue = {p.w_value:.12g}"


def cmd_center(a, rep):
    cat = resolve_category(a.category, a.tolerance)
    objs = suites.add_center(rep, cat)
    lab = cat.ring.labels
    out = [f"{len(objs)} simple objects"]
    for o in objs:
        und = " + ".join(f"{m}{lab[c]}" if m > 1 else lab[c] for c, m in enumerate(o.underlying) if m)
        out.append(f"  dim {o.dim:.12g}  twist {_fmt(o.twist)}  over {und}")
    return "\n".join(out)


def _system(a):
    cat = resolve_category(a.category, a.tolerance)
    q = resolve_qsystem(a.qsystem, cat)
    return cat, build_induced_system(q, max_simples=a.max_simples, full_ring=False)


def cmd_rehren_build(a, rep):
    _, s = _system(a)
    p = suites.add_rehren(rep, s, "rehren")
    rep.artifacts["rehren"] = {"multiplicities": p.multiplicities(), "wValue": p.w_value}
    return f"Gamma has {len(p.gamma)} summands, wValue = {p.w_value:.12g}"


def cmd_verify_duality(a, rep):
    cat, s = _system(a)
    p = suites.add_rehren(rep, s, "duality")
    suites.add_braiding(rep, s, "duality")
    tw = cat.twists
    n = cat.rank
    mis = max((abs(tw[l] - tw[m]) for l in range(n) for m in range(n) if s.Z[l, m]), default=0.0)
    rep.add("duality/Z couples equal twists", mis, suites.TOL)
    rep.artifacts["duality"] = {"Z": s.Z, "multiplicities": p.multiplicities(), "bPlus": s.b_plus}
    return f"{len(s.ambichiral)} ambichiral sectors"


def cmd_e6_check(a, rep):
    suites.suite_e6(rep, entry_bound=a.entry_bound)
    Z = np.asarray(rep.artifacts["e6"]["Z"])
    return _matrix_table("Z", Z, [str(i) for i in range(Z.shape[0])])


def cmd_run_suite(a, rep):
    r = suites.run_suite(a.suite, entry_bound=a.entry_bound, max_simples=a.max_simples)
    rep.checks, rep.artifacts = r.checks, r.artifacts
    return ""


def cmd_export_category(a, rep):
    cat = resolve_category(a.category, a.tolerance)
    return dumps_category(cat).rstrip("\n")


def cmd_export_qsystem(a, rep):
    cat = resolve_category(a.category, a.tolerance)
    return dumps_qsystem(resolve_qsystem(a.qsystem, cat)).rstrip("\n")


# parser -----------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tolerance", type=float, default=1e-9, help="validation tolerance for loaded data")
    common.add_argument("--json", metavar="PATH", help="write the JSON report here")
    common.add_argument("--entry-bound", type=int, default=2, help="largest Z entry in the commutant search")
    common.add_argument("--max-simples", type=int, default=256, help="closure bound for induced systems")

    p = argparse.ArgumentParser(prog="lrcat", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, *args, help=None):
        s = sub.add_parser(name, parents=[common], help=help)
        for arg in args:
            s.add_argument(arg)
        s.set_defaults(fn=fn)
        return s

    add("eval-diagram", cmd_eval_diagram, "category", "diagram", help="evaluate a .diag file (or literal term)")
    add("induce", cmd_induce, "category", "qsystem", help="alpha-induction: Z, b+-, global dimensions")
    add("lr-build", cmd_lr_build, "category", help="canonical Q-system of C x C^rev")
    add("rehren-build", cmd_rehren_build, "category", "qsystem", help="Q-system with multiplicities Z")
    add("center", cmd_center, "category", help="simple objects of the Drinfeld center")
    add("verify-duality", cmd_verify_duality, "category", "qsystem", help="Rehren build, relative braiding, monodromy")
    add("e6-check", cmd_e6_check, help="exceptional su(2) level 10 invariant")
    s = add("run-suite", cmd_run_suite, help="run a named check suite")
    s.add_argument("suite", choices=suites.SUITES)
    add("export-category", cmd_export_category, "category", help="write a category file to stdout")
    add("export-qsystem", cmd_export_qsystem, "category", "qsystem", help="write a Q-system file to stdout")
    return p


def main(argv=None) -> int:
    a = build_parser().parse_args(argv)
    inputs = {k: file_digest(getattr(a, k)) for k in ("category", "qsystem", "diagram") if getattr(a, k, None)}
    if getattr(a, "suite", None):
        inputs["suite"] = a.suite
    rep = RunReport(a.command, inputs)
    t = time.time()
    try:
        text = a.fn(a, rep)
    except (LRCatError, OSError) as exc:
        print(f"lrcat {a.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    rep.wall_time = time.time() - t
    if a.command.startswith("export-"):
        print(text)
        return EXIT_OK
    if text:
        print(text)
    print(rep.summary())
    if a.json:
        Path(a.json).write_text(rep.to_json())
    return EXIT_OK if rep.passed else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
