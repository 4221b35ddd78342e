"""Torsion pairs over a finite list of indecomposables.

Class membership for a decomposable module is membership of all of its
summands; the zero module belongs to every class.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from typing import Iterable, Sequence

from .homalg import ShortExact, ext_dim
from .quiverparse import ParseError
from .repcat import (
    IndecomposableList,
    ModMorphism,
    Representation,
    Subobject,
    cokernel,
    decompose,
    hom_dim,
    in_fac,
    in_sub,
    is_isomorphic,
    is_thin,
    reject,
    thin_submodules,
    trace_of_class,
)
from .twotermcx import ModComplex, ProjComplex, complex_direct_sum, hom_dim as cx_hom_dim, silting_check


@dataclass
class TorsionPair:
    torsion: tuple
    free: tuple
    over: IndecomposableList

    def __post_init__(self):
        self.torsion = tuple(self.over.resolve(l) for l in self.torsion)
        self.free = tuple(self.over.resolve(l) for l in self.free)
        order = {l: i for i, l in enumerate(self.over.labels)}
        self.torsion = tuple(sorted(set(self.torsion), key=order.__getitem__))
        self.free = tuple(sorted(set(self.free), key=order.__getitem__))
        if set(self.torsion) & set(self.free):
            raise ValueError("torsion and torsion-free labels overlap")

    @property
    def T(self) -> list[Representation]:
        return [self.over[l] for l in self.torsion]

    @property
    def F(self) -> list[Representation]:
        return [self.over[l] for l in self.free]

    @property
    def neither(self) -> tuple:
        s = set(self.torsion) | set(self.free)
        return tuple(l for l in self.over.labels if l not in s)

    def to_dict(self) -> dict:
        return {"torsion": list(self.torsion), "free": list(self.free), "neither": list(self.neither)}


def parse_torsion_pair(text: str, inds: IndecomposableList) -> TorsionPair:
    tors, free = [], []
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        kw, _, rest = line.strip().partition(" ")
        if kw not in ("torsion", "free"):
            raise ParseError(f"unknown keyword {kw!r}", ln, 1)
        for tok in _label_tokens(rest):
            try:
                lab = inds.resolve(tok)
            except KeyError:
                raise ParseError(f"unknown label {tok!r}", ln, line.find(tok) + 1) from None
            (tors if kw == "torsion" else free).append(lab)
    try:
        return TorsionPair(tuple(tors), tuple(free), inds)
    except ValueError as exc:
        raise ParseError(str(exc), 1, 1) from None


def _label_tokens(text: str) -> list[str]:
    """Split on whitespace outside brackets so ``[1, 2]`` stays one token."""
    out, cur, depth = [], "", 0
    for ch in text:
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
        if ch.isspace() and depth == 0:
            if cur:
                out.append(cur)
            cur = ""
        else:
            cur += ch
    if cur:
        out.append(cur)
    return out


def serialize_torsion_pair(tp: TorsionPair) -> str:
    return f"torsion {' '.join(tp.torsion)}\nfree {' '.join(tp.free)}\n"


# -- membership ---------------------------------------------------------------------


def in_add(labels: Iterable[str], x: Representation, inds: IndecomposableList) -> bool:
    if x.is_zero():
        return True
    try:
        d = decompose(x, inds)
    except ValueError:
        return False
    allowed = set(labels)
    return all(l in allowed for l in d)


# -- construction from silting data --------------------------------------------------


class NotSiltingError(ValueError):
    pass


def torsion_from_silting(p: Sequence[ProjComplex], inds: IndecomposableList) -> TorsionPair:
    """``T = {X : Hom(P, Sigma X) = 0}``, ``F = {X : Hom(P, X) = 0}``."""
    rep = silting_check(p)
    if not rep.silting:
        raise NotSiltingError("not two-term silting: failed " + ", ".join(rep.failed))
    P = complex_direct_sum(list(p))
    tors, free = [], []
    for lab, m in zip(inds.labels, inds.modules):
        st = ModComplex.stalk(m)
        if cx_hom_dim(P, st, 1) == 0:
            tors.append(lab)
        if cx_hom_dim(P, st, 0) == 0:
            free.append(lab)
    return TorsionPair(tuple(tors), tuple(free), inds)


# -- axioms ---------------------------------------------------------------------------


@dataclass
class AxiomReport:
    ok: bool
    failure: str | None = None
    witness: dict = dc_field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"ok": self.ok, "failure": self.failure, "witness": self.witness}


def check_torsion_axioms(tp: TorsionPair) -> AxiomReport:
    """Hom-orthogonality plus a canonical sequence for every listed module."""
    inds = tp.over
    for t in tp.torsion:
        for f in tp.free:
            d = hom_dim(inds[t], inds[f])
            if d:
                return AxiomReport(False, "Hom(T, F) is not zero", {"T": t, "F": f, "homDim": d})
    for lab, x in zip(inds.labels, inds.modules):
        tx = trace_of_class(tp.T, x)
        quo = cokernel(tx.inclusion).module
        if not in_add(tp.torsion, tx.module, inds):
            return AxiomReport(False, "trace of T is not in T", {"module": lab, "trace": list(tx.module.dims)})
        if not in_add(tp.free, quo, inds):
            return AxiomReport(
                False,
                "quotient by the trace of T is not in F",
                {"module": lab, "trace": list(tx.module.dims), "quotient": list(quo.dims)},
            )
    return AxiomReport(True)


def canonical_sequence(tp: TorsionPair, x: Representation) -> ShortExact:
    """``0 -> tX -> X -> X/tX -> 0`` with ``tX`` the trace of ``T``."""
    tx = trace_of_class(tp.T, x)
    q = cokernel(tx.inclusion)
    return ShortExact(tx.inclusion, q.projection)


# -- classification -----------------------------------------------------------------


@dataclass
class StarResult:
    holds: bool
    complete: bool
    evidence: dict


def candidate_submodules(x: Representation, tp: TorsionPair) -> tuple[list[Subobject], bool]:
    """All submodules for thin ``x``; otherwise traces and rejects (incomplete)."""
    if is_thin(x):
        return thin_submodules(x), True
    cands = []
    pools = [tp.T, tp.F]
    for pool in pools:
        for r in range(len(pool) + 1):
            for sub in itertools.combinations(pool, r):
                cands.append(trace_of_class(list(sub), x))
                cands.append(reject(list(sub), x))
    return cands, False


def _sub_label(s: Subobject) -> list[int]:
    return list(s.module.dims)


def star_predicate(tp: TorsionPair, x: Representation, left, right) -> StarResult:
    """Is there ``0 -> U -> x -> V -> 0`` with ``left(U)`` and ``right(V)``?"""
    cands, complete = candidate_submodules(x, tp)
    for s in cands:
        quo = cokernel(s.inclusion).module
        if left(s.module) and right(quo):
            return StarResult(True, complete, {"sub": list(s.module.dims), "quotient": list(quo.dims)})
    return StarResult(False, complete, {})


@dataclass
class TorsionVerdicts:
    splitting: bool
    tilting: bool
    cotilting: bool
    facF_star_T: bool
    f_star_subT: bool
    facF_star_subT: bool
    complete: bool
    evidence: dict

    def to_dict(self) -> dict:
        return {
            "splitting": self.splitting,
            "tilting": self.tilting,
            "cotilting": self.cotilting,
            "facF_star_T": self.facF_star_T,
            "f_star_subT": self.f_star_subT,
            "facF_star_subT": self.facF_star_subT,
            "searchComplete": self.complete,
            "evidence": self.evidence,
        }


def ext1_table(tp: TorsionPair) -> dict:
    inds = tp.over
    return {(f, t): ext_dim(inds[f], inds[t], 1) for f in tp.free for t in tp.torsion}


def classify(tp: TorsionPair) -> TorsionVerdicts:
    inds = tp.over
    T, F = tp.T, tp.F
    table = ext1_table(tp)
    splitting = all(v == 0 for v in table.values())
    ev: dict = {"ext1": {f"{f}|{t}": v for (f, t), v in table.items() if v}}
    not_sub = [l for l, m in zip(inds.labels, inds.modules) if not in_sub(T, m)]
    not_fac = [l for l, m in zip(inds.labels, inds.modules) if not in_fac(F, m)]
    ev["notSubT"] = not_sub
    ev["notFacF"] = not_fac
    tilting = not not_sub
    cotilting = not not_fac

    def isT(m):
        return in_add(tp.torsion, m, inds)

    def isF(m):
        return in_add(tp.free, m, inds)

    def subT(m):
        return in_sub(T, m)

    def facF(m):
        return in_fac(F, m)

    complete = True
    results = {}
    for name, (left, right) in {
        "facF_star_T": (facF, isT),
        "f_star_subT": (isF, subT),
        "facF_star_subT": (facF, subT),
    }.items():
        fails = []
        per = {}
        for lab, m in zip(inds.labels, inds.modules):
            r = star_predicate(tp, m, left, right)
            complete = complete and r.complete
            if r.holds:
                per[lab] = r.evidence
            else:
                fails.append(lab)
        results[name] = not fails
        ev[name] = {"failures": fails}
    v = TorsionVerdicts(
        splitting, tilting, cotilting,
        results["facF_star_T"], results["f_star_subT"], results["facF_star_subT"],
        complete, ev,
    )
    _assert_implications(v)
    return v


def _assert_implications(v: TorsionVerdicts) -> None:
    # tilting: 0 -> 0 -> X -> X -> 0 exhibits F * Sub T;  cotilting dually
    if v.tilting and not v.f_star_subT:
        raise AssertionError("tilting pair without F * Sub T")
    if v.cotilting and not v.facF_star_T:
        raise AssertionError("cotilting pair without Fac F * T")
    if v.splitting and not (v.facF_star_subT and v.f_star_subT and v.facF_star_T):
        raise AssertionError("splitting pair without the star decompositions")
    if (v.f_star_subT or v.facF_star_T) and not v.facF_star_subT and v.complete:
        raise AssertionError("star predicates are not monotone")


# -- TTF triples ----------------------------------------------------------------------


@dataclass
class TTFReport:
    first_pair: AxiomReport
    second_pair: AxiomReport
    z_in_sub_x: bool | None
    x_in_fac_z: bool | None
    sub_table: dict
    fac_table: dict
    conclusions: dict

    def to_dict(self) -> dict:
        return {
            "firstPair": self.first_pair.to_dict(),
            "secondPair": self.second_pair.to_dict(),
            "ZinSubX": self.z_in_sub_x,
            "XinFacZ": self.x_in_fac_z,
            "subTable": self.sub_table,
            "facTable": self.fac_table,
            "conclusions": self.conclusions,
        }


def ttf_check(x: Sequence[str], y: Sequence[str], z: Sequence[str], inds: IndecomposableList) -> TTFReport:
    p1 = check_torsion_axioms(TorsionPair(tuple(x), tuple(y), inds))
    p2 = check_torsion_axioms(TorsionPair(tuple(y), tuple(z), inds))
    if not (p1.ok and p2.ok):
        return TTFReport(p1, p2, None, None, {}, {}, {"stage": "not a TTF triple"})
    X = [inds[l] for l in x]
    Z = [inds[l] for l in z]
    sub_table = {inds.resolve(l): in_sub(X, inds[l]) for l in z}
    fac_table = {inds.resolve(l): in_fac(Z, inds[l]) for l in x}
    zs = all(sub_table.values())
    xf = all(fac_table.values())
    conclusions = {
        "tiltAtXY": "Equivalence" if zs else "NotEquivalence",
        "tiltAtYZ": "Equivalence" if xf else "NotEquivalence",
    }
    return TTFReport(p1, p2, zs, xf, sub_table, fac_table, conclusions)
