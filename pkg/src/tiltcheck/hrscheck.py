"""Certified verdicts on whether the realization functor of an HRS-tilt is an equivalence.

Only the silting route decides both ways: for a two-term silting ``P`` the
functor is an equivalence exactly when ``Hom(P, Sigma^{-1} P) = 0``.  For
a bare torsion pair the sufficient criteria (splitting, ``F * Sub T``,
``Fac F * T``, vanishing six-term witnesses for every indecomposable) can
certify an equivalence, but a negative answer is never claimed.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field as dc_field
from importlib import resources
from typing import Callable, Iterator, Sequence

from .homalg import SixTermSequence, witness_class, NotExactError
from .repcat import (
    ModMorphism,
    Representation,
    Subobject,
    cokernel,
    decompose,
    direct_sum,
    hom_space,
    in_fac,
    in_sub,
    kernel,
    left_approximation,
    right_approximation,
    stack_maps_in,
    stack_maps_out,
    zero_module,
)
from .torsionpairs import TorsionPair, candidate_submodules, classify, ext1_table, in_add, torsion_from_silting
from .twotermcx import (
    ProjComplex,
    complex_direct_sum,
    endo_algebra,
    hom_complex,
    hom_upto_homotopy,
    silting_check,
)

EQUIVALENCE = "Equivalence"
NOT_EQUIVALENCE = "NotEquivalence"
UNDETERMINED = "Undetermined"

ROUTE_SILTING = "silting-criterion"
ROUTE_SILTING_NEG = "silting-criterion-negative"
ROUTE_SPLITTING = "splitting"
ROUTE_F_SUBT = "f-star-subT"
ROUTE_FACF_T = "facF-star-T"
ROUTE_WITNESSES = "per-module-witnesses-all-vanish"
ROUTE_NONE = "none"

EQUIVALENCE_ROUTES = {ROUTE_SILTING, ROUTE_F_SUBT, ROUTE_FACF_T, ROUTE_SPLITTING, ROUTE_WITNESSES}
NEGATIVE_ROUTES = {ROUTE_SILTING_NEG}

DEFAULT_BUDGET = 200

THETA2_CAVEAT = (
    "the theta^2 criterion is not evaluated on the heart directly; "
    "it is reached only through the silting route when that applies"
)


@dataclass
class Verdict:
    conclusion: str
    route: str
    evidence: dict = dc_field(default_factory=dict)
    budget: int | None = None
    caveats: list = dc_field(default_factory=list)

    def __post_init__(self):
        if self.conclusion == EQUIVALENCE and self.route not in EQUIVALENCE_ROUTES:
            raise ValueError(f"route {self.route!r} cannot certify an equivalence")
        if self.conclusion == NOT_EQUIVALENCE and self.route not in NEGATIVE_ROUTES:
            raise ValueError(f"route {self.route!r} cannot certify a non-equivalence")

    def to_dict(self) -> dict:
        ev = {"homDimensions": {}, "witnesses": [], "extClassZero": None}
        ev.update(self.evidence)
        return {
            "conclusion": self.conclusion,
            "route": self.route,
            "evidence": ev,
            "budget": self.budget,
            "caveats": list(self.caveats),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def verdict_schema() -> dict:
    text = resources.files("tiltcheck").joinpath("verdict.schema.json").read_text(encoding="utf-8")
    return json.loads(text)


def _fmt_matrix(mat) -> list[list[str]]:
    return [[str(e) for e in row] for row in mat]


# -- the silting route -------------------------------------------------------------


def verdict_from_silting(p: Sequence[ProjComplex], inds=None) -> Verdict:
    rep = silting_check(p)
    if not rep.silting:
        raise ValueError("not two-term silting: failed " + ", ".join(rep.failed))
    P = complex_direct_sum(list(p))
    hc = hom_complex(P, P)
    for i in (-2, -3):
        if hc.dim(i) != 0:
            raise AssertionError(f"Hom^{i}(P, P) has components for a two-term complex")
    neg = hom_upto_homotopy(P, P, -1)
    dims = {"Hom(P,Sigma^-1 P)": neg.dim, "Hom(P,Sigma^-2 P)": 0}
    dims.update({f"Hom(P,Sigma^{i} P)": d for i, d in rep.pos_self_homs.items()})
    caveats = [THETA2_CAVEAT] + list(rep.notes)
    if neg.dim == 0:
        return Verdict(EQUIVALENCE, ROUTE_SILTING, {"homDimensions": dims, "extClassZero": None}, None, caveats)
    maps = [{str(n): _fmt_matrix(m) for n, m in sorted(cm.matrices().items())} for cm in neg.basis]
    return Verdict(
        NOT_EQUIVALENCE,
        ROUTE_SILTING_NEG,
        {"homDimensions": dims, "negativeChainMaps": maps, "extClassZero": None},
        None,
        caveats,
    )


# -- witnesses ----------------------------------------------------------------------


@dataclass
class WitnessCheck:
    status: str  # "valid-vanishing" | "valid-nonvanishing" | "invalid"
    reason: str | None = None
    class_representative: list | None = None
    certificate: dict = dc_field(default_factory=dict)

    @property
    def vanishing(self) -> bool:
        return self.status == "valid-vanishing"

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "reason": self.reason,
            "vanishing": self.vanishing,
            "classRepresentative": self.class_representative,
            "certificate": self.certificate,
        }


def verify_witness(tp: TorsionPair, w: SixTermSequence) -> WitnessCheck:
    inds = tp.over
    terms = w.terms
    for name in ("F0", "F1"):
        if not in_add(tp.free, terms[name], inds):
            return WitnessCheck("invalid", f"term {name} is not in F", certificate=w.certificate())
    for name in ("T0", "T1"):
        if not in_add(tp.torsion, terms[name], inds):
            return WitnessCheck("invalid", f"term {name} is not in T", certificate=w.certificate())
    fail = w.exactness_failure()
    if fail is not None:
        return WitnessCheck("invalid", fail, certificate=w.certificate())
    c = witness_class(w)
    rep = [str(x) for x in c.canonical()]
    status = "valid-vanishing" if c.is_zero() else "valid-nonvanishing"
    cert = w.certificate()
    cert["extDim"] = c.group.dim
    return WitnessCheck(status, None, rep, cert)


def trivial_witness_into(x: Representation, mono: ModMorphism) -> SixTermSequence:
    """``0 -> 0 -> 0 -> x -> T0 -> T1 -> 0`` from a monomorphism ``x -> T0``."""
    alg = x.algebra
    z = zero_module(alg)
    q = cokernel(mono)
    return SixTermSequence(
        ModMorphism.zero(z, z), ModMorphism.zero(z, x), mono, q.projection
    )


def trivial_witness_onto(x: Representation, epi: ModMorphism) -> SixTermSequence:
    """``0 -> F0 -> F1 -> x -> 0 -> 0 -> 0`` from an epimorphism ``F1 -> x``."""
    alg = x.algebra
    z = zero_module(alg)
    k = kernel(epi)
    return SixTermSequence(k.inclusion, epi, ModMorphism.zero(x, z), ModMorphism.zero(z, z))


def assemble_witness(
    x: Representation, sub: Subobject, cover: ModMorphism, hull_of_quotient: ModMorphism, proj: ModMorphism
) -> SixTermSequence:
    """Splice ``F0 -> F1 ->> V``, ``V -> x -> x/V`` and ``x/V -> T0 ->> T1``."""
    k = kernel(cover)
    p = sub.inclusion @ cover
    q = hull_of_quotient @ proj
    b = cokernel(hull_of_quotient).projection
    return SixTermSequence(k.inclusion, p, q, b)


def _families(basis, max_mult: int):
    """Multisets of basis maps, by size and then by total dimension."""
    for r in range(1, max_mult * len(basis) + 1):
        picks = [
            c for c in itertools.combinations_with_replacement(range(len(basis)), r)
            if max(c.count(i) for i in set(c)) <= max_mult
        ]
        picks.sort(key=lambda c: (sum(basis[i][0].total_dim for i in c), c))
        for c in picks:
            yield [basis[i] for i in c]


def _epi_subfamilies(cls: Sequence[Representation], v: Representation, max_mult: int, cap: int) -> list[ModMorphism]:
    """Epimorphisms onto ``v`` from sums of class members, smallest first."""
    if v.is_zero():
        z = zero_module(v.algebra)
        return [ModMorphism.zero(z, v)]
    basis = [(c, f) for c in cls for f in hom_space(c, v)]
    out = []
    for fam in _families(basis, max_mult):
        ds = direct_sum([c for c, _ in fam])
        f = stack_maps_in([g for _, g in fam], ds.module, v)
        if f.is_epi():
            out.append(f)
            if len(out) >= cap:
                break
    return out


def _mono_subfamilies(cls: Sequence[Representation], u: Representation, max_mult: int, cap: int) -> list[ModMorphism]:
    """Monomorphisms from ``u`` into sums of class members, smallest first."""
    if u.is_zero():
        z = zero_module(u.algebra)
        return [ModMorphism.zero(u, z)]
    basis = [(c, f) for c in cls for f in hom_space(u, c)]
    out = []
    for fam in _families(basis, max_mult):
        ds = direct_sum([c for c, _ in fam])
        f = stack_maps_out(u, [g for _, g in fam], ds.module)
        if f.is_mono():
            out.append(f)
            if len(out) >= cap:
                break
    return out


@dataclass
class WitnessSearchResult:
    witness: SixTermSequence | None
    check: WitnessCheck | None
    route: str | None
    evaluated: int
    exhausted: bool
    complete_candidates: bool
    nonvanishing: int = 0

    @property
    def found(self) -> bool:
        return self.witness is not None

    def to_dict(self, label: str | None = None) -> dict:
        out = {
            "module": label,
            "found": self.found,
            "route": self.route,
            "evaluated": self.evaluated,
            "exhausted": self.exhausted,
            "nonvanishingEvaluated": self.nonvanishing,
            "candidateSubmodulesComplete": self.complete_candidates,
        }
        if self.witness is not None:
            out["witness"] = self.witness.certificate()
            out["check"] = self.check.to_dict()
        return out


def witness_search(
    tp: TorsionPair,
    x: Representation,
    budget: int = DEFAULT_BUDGET,
    cancel: Callable[[], bool] | None = None,
) -> WitnessSearchResult:
    """Bounded search for a six-term witness with vanishing class.

    ``budget`` bounds the number of candidate witnesses evaluated.  An
    unsuccessful search is reported as exhausted, never as a proof that no
    witness exists.
    """
    if budget <= 0:
        return WitnessSearchResult(None, None, None, 0, True, False)
    T, F = tp.T, tp.F
    evaluated = 0
    nonvanishing = 0

    def attempt(w: SixTermSequence, route: str):
        nonlocal evaluated, nonvanishing
        evaluated += 1
        chk = verify_witness(tp, w)
        if chk.vanishing:
            return WitnessSearchResult(w, chk, route, evaluated, False, True, nonvanishing)
        if chk.status == "valid-nonvanishing":
            nonvanishing += 1
        return None

    # Sub T: the left approximation is injective and its cokernel is torsion
    if in_sub(T, x):
        r = attempt(trivial_witness_into(x, left_approximation(T, x)), "sub-T")
        if r:
            return r
    if evaluated >= budget:
        return WitnessSearchResult(None, None, None, evaluated, True, False, nonvanishing)
    if in_fac(F, x):
        r = attempt(trivial_witness_onto(x, right_approximation(F, x)), "fac-F")
        if r:
            return r
    cands, complete = candidate_submodules(x, tp)
    admissible = []
    for s in cands:
        quo = cokernel(s.inclusion)
        if in_fac(F, s.module) and in_sub(T, quo.module):
            admissible.append((s, quo))
    # splices whose outer terms vanish come first: F0 = 0 or T1 = 0
    def priority(item):
        s, quo = item
        v_free = in_add(tp.free, s.module, inds=tp.over)
        u_tors = in_add(tp.torsion, quo.module, inds=tp.over)
        return (0 if (v_free or u_tors) else 1, s.module.total_dim)

    admissible.sort(key=priority)
    cap = max(1, budget)
    max_mult = max(1, x.total_dim)
    for s, quo in admissible:
        covers = []
        if in_add(tp.free, s.module, tp.over):
            covers.append(ModMorphism.identity(s.module))
        covers.extend(_epi_subfamilies(F, s.module, max_mult, cap))
        hulls = []
        if in_add(tp.torsion, quo.module, tp.over):
            hulls.append(ModMorphism.identity(quo.module))
        hulls.extend(_mono_subfamilies(T, quo.module, max_mult, cap))
        for cov in covers:
            for hull in hulls:
                if cancel is not None and cancel():
                    return WitnessSearchResult(None, None, None, evaluated, True, complete, nonvanishing)
                if evaluated >= budget:
                    return WitnessSearchResult(None, None, None, evaluated, True, complete, nonvanishing)
                route = "splice"
                if cov.source == s.module and cov.is_iso():
                    route = "splice-F0-zero"
                elif hull.target == quo.module and hull.is_iso():
                    route = "splice-T1-zero"
                r = attempt(assemble_witness(x, s, cov, hull, quo.projection), route)
                if r:
                    r.complete_candidates = complete
                    return r
    return WitnessSearchResult(None, None, None, evaluated, True, complete, nonvanishing)


# -- the torsion route ---------------------------------------------------------------


def verdict_from_torsion(tp: TorsionPair, budget: int = DEFAULT_BUDGET) -> Verdict:
    """Sufficient criteria only; never returns a negative verdict."""
    v = classify(tp)
    caveats = [THETA2_CAVEAT, "criteria from a torsion pair alone are sufficient, not necessary"]
    evidence: dict = {"classification": v.to_dict(), "homDimensions": {}}
    if v.splitting:
        table = ext1_table(tp)
        if any(table.values()):
            raise AssertionError("splitting reported with a nonzero Ext^1(F, T)")
        evidence["ext1Table"] = {f"{f}|{t}": d for (f, t), d in sorted(table.items())}
        evidence["extClassZero"] = True
        return Verdict(EQUIVALENCE, ROUTE_SPLITTING, evidence, budget, caveats)
    if v.f_star_subT:
        return Verdict(EQUIVALENCE, ROUTE_F_SUBT, evidence, budget, caveats)
    if v.facF_star_T:
        return Verdict(EQUIVALENCE, ROUTE_FACF_T, evidence, budget, caveats)
    witnesses = []
    all_found = True
    for lab, m in zip(tp.over.labels, tp.over.modules):
        r = witness_search(tp, m, budget)
        witnesses.append(r.to_dict(lab))
        all_found = all_found and r.found
    evidence["witnesses"] = witnesses
    evidence["extClassZero"] = all_found
    if all_found and tp.over.complete:
        return Verdict(EQUIVALENCE, ROUTE_WITNESSES, evidence, budget, caveats)
    # a six-term sequence puts Im(p) in Fac F and Im(q) in Sub T, so a module
    # outside (Fac F) * (Sub T) admits no witness of any kind
    blocked = v.evidence["facF_star_subT"]["failures"]
    if blocked:
        evidence["noSixTermSequence"] = {"modules": list(blocked), "searchComplete": v.complete}
        caveats.append(
            "some modules lie outside (Fac F) * (Sub T) and admit no six-term sequence; "
            "the conclusion stays Undetermined because only the silting route reports NotEquivalence"
        )
    caveats.append("witness search is bounded; exhaustion does not prove that no witness exists")
    return Verdict(UNDETERMINED, ROUTE_NONE, evidence, budget, caveats)


# -- heart presentation --------------------------------------------------------------


@dataclass
class HeartDescription:
    torsion_pair: TorsionPair
    end_dim: int
    end_table: dict
    heart_stalks: list
    caveats: list

    def to_dict(self) -> dict:
        return {
            "torsionPair": self.torsion_pair.to_dict(),
            "endDimension": self.end_dim,
            "endTableNonzero": {f"{i},{j}": [str(c) for c in v] for (i, j), v in sorted(self.end_table.items()) if any(v)},
            "heartStalks": self.heart_stalks,
            "caveats": self.caveats,
        }


def heart_presentation(p: Sequence[ProjComplex], inds) -> HeartDescription:
    tp = torsion_from_silting(p, inds)
    e = endo_algebra(list(p))
    if not e.associative():
        raise AssertionError("endomorphism table is not associative")
    stalks = [{"H-1": f, "H0": None} for f in tp.free] + [{"H-1": None, "H0": t} for t in tp.torsion]
    caveats = ["connecting maps of non-stalk heart objects are not resolved"]
    return HeartDescription(tp, e.dim, e.table, stalks, caveats)


# -- witness files -------------------------------------------------------------------
#
#   module <name> / dim ... / map ...     explicit modules, as in module files
#   use <name> = <label>                  a listed indecomposable
#   zero <name>                           the zero module
#   sum <name> = <name> + <name> ...      a direct sum of earlier modules
#   morphism <name>: <src> -> <tgt>       followed by `at <vertex> = [[..]]` lines
#   sequence <a> <p> <q> <b>              F0 -a-> F1 -p-> A -q-> T0 -b-> T1


def parse_witness(text: str, inds) -> SixTermSequence:
    from .quiverparse import ParseError
    from .repcat import parse_matrix_literal, parse_modules
    from .exactlinalg import Matrix

    alg = inds.algebra
    q = alg.quiver
    k = alg.field
    modules: dict[str, Representation] = {}
    morphisms: dict[str, ModMorphism] = {}
    pending_module: list[str] = []
    cur = None  # (name, src, tgt, blocks, line)
    seq = None

    def flush_module():
        nonlocal pending_module
        if pending_module:
            for m in parse_modules("\n".join(pending_module), alg):
                modules[m.name] = m
            pending_module = []

    def flush_morphism():
        nonlocal cur
        if cur is None:
            return
        name, src, tgt, blocks, ln = cur
        mats = []
        for v in range(q.n_vertices):
            if v in blocks:
                rows, bln = blocks[v]
                if tgt.dims[v] and src.dims[v]:
                    if len(rows) != tgt.dims[v] or any(len(r) != src.dims[v] for r in rows):
                        raise ParseError(
                            f"block at {q.vertices[v]} must be {tgt.dims[v]}x{src.dims[v]}", bln, 1
                        )
                    mats.append(Matrix(k, rows, src.dims[v]))
                    continue
            mats.append(Matrix.zeros(k, tgt.dims[v], src.dims[v]))
        try:
            morphisms[name] = ModMorphism(src, tgt, mats)
        except ValueError as exc:
            raise ParseError(f"morphism {name}: {exc}", ln, 1) from None
        cur = None

    def module_ref(tok: str, ln: int, line: str) -> Representation:
        if tok not in modules:
            raise ParseError(f"unknown module {tok!r}", ln, line.find(tok) + 1)
        return modules[tok]

    lines = text.splitlines()
    for ln, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        kw, _, rest = line.strip().partition(" ")
        if kw in ("dim", "map") and pending_module:
            pending_module.append(line)
            continue
        flush_module()
        if kw == "module":
            flush_morphism()
            pending_module = [line]
        elif kw == "use":
            flush_morphism()
            name, eq, lab = rest.partition("=")
            if not eq:
                raise ParseError("expected 'use <name> = <label>'", ln, 1)
            try:
                modules[name.strip()] = inds[inds.resolve(lab.strip())]
            except KeyError:
                raise ParseError(f"unknown label {lab.strip()!r}", ln, line.find(lab.strip()) + 1) from None
        elif kw == "zero":
            flush_morphism()
            modules[rest.strip()] = zero_module(alg)
        elif kw == "sum":
            flush_morphism()
            name, eq, body = rest.partition("=")
            if not eq:
                raise ParseError("expected 'sum <name> = X + Y'", ln, 1)
            parts = [module_ref(t.strip(), ln, line) for t in body.split("+")]
            modules[name.strip()] = direct_sum(parts, alg).module
        elif kw == "morphism":
            flush_morphism()
            head, colon, body = rest.partition(":")
            src, arrow, tgt = body.partition("->")
            if not colon or not arrow:
                raise ParseError("expected 'morphism <name>: <src> -> <tgt>'", ln, 1)
            cur = (head.strip(), module_ref(src.strip(), ln, line), module_ref(tgt.strip(), ln, line), {}, ln)
        elif kw == "at":
            if cur is None:
                raise ParseError("at outside a morphism block", ln, 1)
            v, eq, lit = rest.partition("=")
            v = v.strip()
            if not eq or v not in q.vertex_index:
                raise ParseError(f"unknown vertex {v!r}", ln, line.find(rest) + 1)
            cur[3][q.vertex_index[v]] = (parse_matrix_literal(lit, k, ln, line.find(lit) + 1), ln)
        elif kw == "sequence":
            flush_morphism()
            names = rest.split()
            if len(names) != 4:
                raise ParseError("sequence needs four morphism names", ln, 1)
            seq = (names, ln, line)
        else:
            raise ParseError(f"unknown keyword {kw!r}", ln, 1)
    flush_module()
    flush_morphism()
    if seq is None:
        raise ParseError("no sequence line", len(lines) or 1, 1)
    names, ln, line = seq
    maps = []
    for n in names:
        if n not in morphisms:
            raise ParseError(f"unknown morphism {n!r}", ln, line.find(n) + 1)
        maps.append(morphisms[n])
    return SixTermSequence(*maps)


def serialize_witness(w: SixTermSequence) -> str:
    from .repcat import serialize_module

    q = w.a.source.algebra.quiver
    out = []
    for name, m in w.terms.items():
        out.append(serialize_module(m, name))
    chain = (("a", w.a, "F0", "F1"), ("p", w.p, "F1", "A"), ("q", w.q, "A", "T0"), ("b", w.b, "T0", "T1"))
    for name, f, src, tgt in chain:
        out.append(f"morphism {name}: {src} -> {tgt}")
        for v, blk in enumerate(f.blocks):
            if blk.nrows and blk.ncols:
                body = ",".join("[" + ",".join(str(e) for e in r) + "]" for r in blk.rows)
                out.append(f"at {q.vertices[v]} = [{body}]")
    out.append("sequence a p q b")
    return "\n".join(out) + "\n"
