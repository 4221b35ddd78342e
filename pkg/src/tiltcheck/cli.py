"""Command-line front end.

Every command writes a JSON report (to ``--out`` or stdout) with sorted keys
so that repeated runs produce identical bytes.  Exit codes:

    0  success / Equivalence
    1  a check failed (invalid witness, torsion axioms violated)
    2  parse or usage error
    3  NotEquivalence
    4  Undetermined
    5  the complex is not two-term silting
"""
from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .exactlinalg import QQ, GF, Field
from .homalg import ext_dim, minimal_resolution
from .quiverparse import InfiniteDimensionalError, ParseError, parse_algebra
from .repcat import enumerate_indecomposables, hom_dim, simple_module
from .torsionpairs import (
    NotSiltingError,
    TorsionPair,
    check_torsion_axioms,
    parse_torsion_pair,
    torsion_from_silting,
)
from .twotermcx import NotTwoTermError, parse_complexes, silting_check
from . import hrscheck

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_PARSE = 2
EXIT_NOT_EQUIVALENCE = 3
EXIT_UNDETERMINED = 4
EXIT_NOT_SILTING = 5

CONCLUSION_EXIT = {
    hrscheck.EQUIVALENCE: EXIT_OK,
    hrscheck.NOT_EQUIVALENCE: EXIT_NOT_EQUIVALENCE,
    hrscheck.UNDETERMINED: EXIT_UNDETERMINED,
}


class UsageError(Exception):
    pass


def parse_field(text: str | None) -> Field | None:
    if text is None:
        return None
    t = text.strip()
    if t in ("Q", "QQ", "rational"):
        return QQ
    for prefix in ("GF", "F", "Fp"):
        if t.startswith(prefix) and t[len(prefix):].lstrip("(_ ").rstrip(")").isdigit():
            return GF(int(t[len(prefix):].lstrip("(_ ").rstrip(")")))
    if t.isdigit():
        return GF(int(t))
    raise UsageError(f"unknown field {text!r}; use Q or GF<p>")


def _read(path: str | None, what: str) -> str:
    if path is None:
        raise UsageError(f"--{what} is required for this command")
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {what} file {path!r}: {exc.strerror}") from None


class Workspace:
    """Loads every referenced file before any computation runs."""

    def __init__(self, args):
        self.args = args
        self.field = parse_field(args.field)
        self.algebra = load_algebra_file(args.algebra, self.field)
        self._inds = None
        self.complexes = None
        self.pair_text = None
        self.witness_text = None
        if getattr(args, "complex", None):
            self.complexes = parse_complexes(_read(args.complex, "complex"), self.algebra)
        if getattr(args, "pair", None):
            self.pair_text = _read(args.pair, "pair")
        if getattr(args, "witness", None):
            self.witness_text = _read(args.witness, "witness")
        self.budget = args.budget
        self.seed = args.seed

    @property
    def inds(self):
        if self._inds is None:
            try:
                self._inds = enumerate_indecomposables(self.algebra)
            except ValueError as exc:
                raise UsageError(str(exc)) from None
        return self._inds

    def pair(self) -> TorsionPair:
        if self.pair_text is not None:
            return parse_torsion_pair(self.pair_text, self.inds)
        if self.complexes is not None:
            return torsion_from_silting(self.complexes, self.inds)
        raise UsageError("--pair or --complex is required for this command")


def load_algebra_file(path: str | None, field):
    text = _read(path, "algebra")
    return parse_algebra(text, field=field)


# -- commands -----------------------------------------------------------------------


def cmd_info(ws: Workspace):
    alg = ws.algebra
    q = alg.quiver
    print(f"dim = {alg.dim}, vertices = {q.n_vertices}")
    pds = {}
    for v in q.vertices:
        res = minimal_resolution(simple_module(alg, v), alg.dim + 1)
        pds[f"S{v}"] = res.projective_dimension()
    report = {
        "field": alg.field.name,
        "dimension": alg.dim,
        "vertices": list(q.vertices),
        "arrows": [a.name for a in q.arrows],
        "pathBasis": [alg.path_name(i) for i in range(alg.dim)],
        "projectiveDimensions": pds,
        "summary": f"dim = {alg.dim}, vertices = {q.n_vertices}",
    }
    return report, EXIT_OK


def cmd_indecomposables(ws: Workspace):
    inds = ws.inds
    report = {
        "class": inds.algebra_class,
        "complete": inds.complete,
        "count": len(inds.labels),
        "modules": [{"label": l, "dims": list(m.dims)} for l, m in zip(inds.labels, inds.modules)],
    }
    return report, EXIT_OK


def cmd_ext(ws: Workspace):
    inds = ws.inds
    args = ws.args
    degrees = [args.degree] if args.degree is not None else [0, 1, 2, 3]
    xs = [inds.resolve(args.x)] if args.x else list(inds.labels)
    ys = [inds.resolve(args.y)] if args.y else list(inds.labels)
    table = []
    for x in xs:
        for y in ys:
            row = {"X": x, "Y": y}
            for n in degrees:
                row[f"ext{n}"] = hom_dim(inds[x], inds[y]) if n == 0 else ext_dim(inds[x], inds[y], n)
            table.append(row)
    return {"degrees": degrees, "table": table}, EXIT_OK


def _need_complexes(ws: Workspace):
    if ws.complexes is None:
        raise UsageError("--complex is required for this command")
    return ws.complexes


def cmd_check(ws: Workspace):
    p = _need_complexes(ws)
    try:
        rep = silting_check(p)
    except NotTwoTermError as exc:
        return {"error": str(exc), "failed": ["two-term"]}, EXIT_NOT_SILTING
    if not rep.silting:
        return {"silting": rep.to_dict(), "error": "not two-term silting: failed " + ", ".join(rep.failed)}, EXIT_NOT_SILTING
    inds = ws.inds
    tp = torsion_from_silting(p, inds)
    verdict = hrscheck.verdict_from_silting(p, inds)
    heart = hrscheck.heart_presentation(p, inds)
    report = {
        "silting": rep.to_dict(),
        "torsionPair": tp.to_dict(),
        "verdict": verdict.to_dict(),
        "heart": heart.to_dict(),
    }
    return report, CONCLUSION_EXIT[verdict.conclusion]


def cmd_torsion(ws: Workspace):
    tp = ws.pair()
    ax = check_torsion_axioms(tp)
    report = {"torsionPair": tp.to_dict(), "axioms": ax.to_dict()}
    if not ax.ok:
        return report, EXIT_FAILED
    verdict = hrscheck.verdict_from_torsion(tp, ws.budget)
    report["verdict"] = verdict.to_dict()
    return report, CONCLUSION_EXIT[verdict.conclusion]


def cmd_verify_witness(ws: Workspace):
    tp = ws.pair()
    if ws.witness_text is None:
        raise UsageError("--witness is required for this command")
    w = hrscheck.parse_witness(ws.witness_text, ws.inds)
    chk = hrscheck.verify_witness(tp, w)
    code = EXIT_FAILED if chk.status == "invalid" else EXIT_OK
    return {"torsionPair": tp.to_dict(), "witness": chk.to_dict()}, code


def cmd_witness_search(ws: Workspace):
    tp = ws.pair()
    inds = ws.inds
    labels = [inds.resolve(ws.args.module)] if ws.args.module else list(inds.labels)
    results = [hrscheck.witness_search(tp, inds[l], ws.budget).to_dict(l) for l in labels]
    return {"budget": ws.budget, "results": results}, EXIT_OK


COMMANDS = {
    "info": cmd_info,
    "indecomposables": cmd_indecomposables,
    "ext": cmd_ext,
    "check": cmd_check,
    "torsion": cmd_torsion,
    "verify-witness": cmd_verify_witness,
    "witness-search": cmd_witness_search,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--algebra", required=True, help="bound quiver algebra file")
    common.add_argument("--field", default=None, help="Q or GF<p>; overrides the file's field line")
    common.add_argument("--complex", default=None, help="two-term complex file")
    common.add_argument("--pair", default=None, help="torsion pair file")
    common.add_argument("--witness", default=None, help="six-term witness file")
    common.add_argument("--budget", type=int, default=hrscheck.DEFAULT_BUDGET, help="witness search budget")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized fallbacks")
    common.add_argument("--out", default=None, help="write the JSON report here instead of stdout")

    ap = argparse.ArgumentParser(prog="tiltcheck", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"tiltcheck {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)
    sub.add_parser("info", parents=[common], help="dimension, path basis, projective dimensions")
    sub.add_parser("indecomposables", parents=[common], help="list the indecomposable modules")
    p_ext = sub.add_parser("ext", parents=[common], help="Ext dimensions between indecomposables")
    p_ext.add_argument("x", nargs="?", default=None, help="first label (default: all)")
    p_ext.add_argument("y", nargs="?", default=None, help="second label (default: all)")
    p_ext.add_argument("--degree", "-n", type=int, default=None)
    sub.add_parser("check", parents=[common], help="silting check and verdict")
    sub.add_parser("torsion", parents=[common], help="torsion axioms, classification, verdict")
    sub.add_parser("verify-witness", parents=[common], help="check a six-term witness")
    p_ws = sub.add_parser("witness-search", parents=[common], help="bounded witness search")
    p_ws.add_argument("--module", default=None, help="restrict to one label")
    return ap


def render(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        ws = Workspace(args)
        report, code = COMMANDS[args.command](ws)
    except ParseError as exc:
        print(f"tiltcheck: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (UsageError, InfiniteDimensionalError) as exc:
        print(f"tiltcheck: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except NotSiltingError as exc:
        print(f"tiltcheck: {exc}", file=sys.stderr)
        return EXIT_NOT_SILTING
    text = render(report)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
