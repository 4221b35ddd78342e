import json
from importlib import resources

import jsonschema
import pytest

from tiltcheck.exactlinalg import QQ
from tiltcheck.homalg import SixTermSequence, witness_class
from tiltcheck.quiverparse import load_algebra, parse_algebra
from tiltcheck.repcat import (
    ModMorphism,
    cokernel,
    direct_sum,
    enumerate_indecomposables,
    kernel,
    thin_submodules,
    zero_module,
)
from tiltcheck.torsionpairs import in_add, parse_torsion_pair, torsion_from_silting
from tiltcheck.twotermcx import ProjComplex, parse_complexes
from tiltcheck import hrscheck
from tiltcheck.hrscheck import (
    Verdict,
    assemble_witness,
    heart_presentation,
    parse_witness,
    serialize_witness,
    trivial_witness_into,
    trivial_witness_onto,
    verdict_from_silting,
    verdict_from_torsion,
    verdict_schema,
    verify_witness,
    witness_search,
)
from tiltcheck.repcat import left_approximation, right_approximation

from conftest import FIXTURES

SILTING_FIXTURES = [
    ("nakayama6.quiver", "nakayama6.complexes", "NotEquivalence"),
    ("nakayama6.quiver", "nakayama6_stalks.complexes", "Equivalence"),
    ("a2.quiver", "a2_tilting.complexes", "Equivalence"),
    ("a2.quiver", "a2_stalks.complexes", "Equivalence"),
    ("a2.quiver", "a2_negative.complexes", "NotEquivalence"),
]

PAIR_FIXTURES = [
    ("a2.quiver", "a2_splitting.pair", "splitting"),
    ("a3.quiver", "a3_tilting.pair", "f-star-subT"),
    ("a3.quiver", "a3_cotilting.pair", "facF-star-T"),
]


def _load(quiver, complexes):
    alg = load_algebra(FIXTURES / quiver)
    inds = enumerate_indecomposables(alg)
    return alg, inds, parse_complexes((FIXTURES / complexes).read_text(), alg)


def validate(v):
    jsonschema.validate(v.to_dict(), verdict_schema())


@pytest.mark.parametrize("quiver, complexes, expected", SILTING_FIXTURES)
def test_silting_verdicts(quiver, complexes, expected):
    alg, inds, p = _load(quiver, complexes)
    v = verdict_from_silting(p, inds)
    assert v.conclusion == expected
    neg = v.evidence["homDimensions"]["Hom(P,Sigma^-1 P)"]
    assert (neg == 0) == (expected == "Equivalence")
    if expected == "NotEquivalence":
        assert v.route == "silting-criterion-negative"
        assert len(v.evidence["negativeChainMaps"]) == neg
    else:
        assert v.route == "silting-criterion"
    validate(v)


def test_example_negative_hom_dimension(nak6_inds, nak6_complexes):
    v = verdict_from_silting(nak6_complexes, nak6_inds)
    assert v.evidence["homDimensions"]["Hom(P,Sigma^-1 P)"] == 4


@pytest.mark.parametrize("quiver, complexes, expected", SILTING_FIXTURES)
def test_silting_and_torsion_routes_never_contradict(quiver, complexes, expected):
    alg, inds, p = _load(quiver, complexes)
    tp = torsion_from_silting(p, inds)
    vt = verdict_from_torsion(tp, budget=40)
    assert vt.conclusion != "NotEquivalence"
    if vt.conclusion == "Equivalence":
        assert expected == "Equivalence"
    validate(vt)


@pytest.mark.parametrize("quiver, pair, route", PAIR_FIXTURES)
def test_torsion_verdict_routes(quiver, pair, route):
    alg = load_algebra(FIXTURES / quiver)
    inds = enumerate_indecomposables(alg)
    tp = parse_torsion_pair((FIXTURES / pair).read_text(), inds)
    v = verdict_from_torsion(tp)
    assert v.conclusion == "Equivalence"
    assert v.route == route
    validate(v)
    # an equivalence must come with a vanishing witness for every indecomposable
    for lab, m in zip(inds.labels, inds.modules):
        r = witness_search(tp, m)
        assert r.found, lab
        assert r.check.vanishing


def test_splitting_route_rechecks_ext(a2_inds):
    tp = parse_torsion_pair((FIXTURES / "a2_splitting.pair").read_text(), a2_inds)
    v = verdict_from_torsion(tp)
    assert v.evidence["ext1Table"] == {"[2]|[1..2]": 0, "[2]|[1]": 0}
    assert v.evidence["extClassZero"] is True


def test_example_pair_is_undetermined(nak6_pair):
    v = verdict_from_torsion(nak6_pair, budget=20)
    assert v.conclusion == "Undetermined"
    assert v.route == "none"
    found = {w["module"]: w["found"] for w in v.evidence["witnesses"]}
    assert {l for l, ok in found.items() if not ok} == {"[2..4]", "[2..5]", "[3..4]", "[3..5]"}
    validate(v)


def test_obstructed_pair_reports_missing_sequences(a2, a2_inds):
    p = parse_complexes((FIXTURES / "a2_negative.complexes").read_text(), a2)
    tp = torsion_from_silting(p, a2_inds)
    v = verdict_from_torsion(tp)
    assert v.conclusion == "Undetermined"
    assert v.evidence["noSixTermSequence"] == {"modules": ["[1..2]"], "searchComplete": True}


def test_verdict_invariants():
    with pytest.raises(ValueError):
        Verdict("NotEquivalence", "splitting")
    with pytest.raises(ValueError):
        Verdict("Equivalence", "none")
    v = Verdict("Undetermined", "none")
    assert json.loads(v.to_json())["evidence"] == {"homDimensions": {}, "witnesses": [], "extClassZero": None}


def test_schema_is_shipped():
    text = resources.files("tiltcheck").joinpath("verdict.schema.json").read_text()
    assert json.loads(text) == verdict_schema()
    with pytest.raises(jsonschema.ValidationError):
        jsonschema.validate({"conclusion": "NotEquivalence", "route": "splitting", "evidence": {
            "homDimensions": {}, "witnesses": [], "extClassZero": None}, "budget": None, "caveats": []},
            verdict_schema())


# -- witnesses --------------------------------------------------------------------


def split_family(tp):
    """0 -> f' -> f + f' -> f + t -> t + t' -> t' -> 0 with split middle piece."""
    inds = tp.over
    out = []
    for f in tp.free[:3]:
        for t in tp.torsion[:3]:
            for f2, t2 in ((tp.free[-1], tp.torsion[-1]), (tp.free[0], tp.torsion[0])):
                F1 = direct_sum([inds[f], inds[f2]])
                A = direct_sum([inds[f], inds[t]])
                T0 = direct_sum([inds[t], inds[t2]])
                a = F1.injections[1]
                p = A.injections[0] @ F1.projections[0]
                q = T0.injections[0] @ A.projections[1]
                b = T0.projections[1]
                out.append(SixTermSequence(a, p, q, b))
    return out


def f0_zero_family(tp):
    out = []
    inds = tp.over
    for lab, x in zip(inds.labels, inds.modules):
        for s in thin_submodules(x):
            quo = cokernel(s.inclusion)
            if in_add(tp.free, s.module, inds) and not s.module.is_zero():
                try:
                    hull = left_approximation(tp.T, quo.module)
                except ValueError:
                    continue
                if hull.is_mono():
                    out.append(assemble_witness(x, s, ModMorphism.identity(s.module), hull, quo.projection))
    return out


def t1_zero_family(tp):
    out = []
    inds = tp.over
    for lab, x in zip(inds.labels, inds.modules):
        for s in thin_submodules(x):
            quo = cokernel(s.inclusion)
            if in_add(tp.torsion, quo.module, inds) and not quo.module.is_zero():
                cover = right_approximation(tp.F, s.module)
                if cover.is_epi():
                    out.append(assemble_witness(x, s, cover, ModMorphism.identity(quo.module), quo.projection))
    return out


def test_trivial_families_have_zero_class(nak6_pair):
    fams = {
        "split": split_family(nak6_pair),
        "F0=0": f0_zero_family(nak6_pair),
        "T1=0": t1_zero_family(nak6_pair),
    }
    assert sum(len(v) for v in fams.values()) >= 30
    for name, ws in fams.items():
        assert ws, name
        for w in ws:
            assert w.is_exact(), name
            assert witness_class(w).is_zero(), name
            assert verify_witness(nak6_pair, w).status == "valid-vanishing", name
    assert all(w.a.source.is_zero() for w in fams["F0=0"])
    assert all(w.b.target.is_zero() for w in fams["T1=0"])


def test_invalid_witness_names_term(nak6_pair, nak6_inds):
    x = nak6_inds["[2..4]"]
    # [2..4] is in neither class, so using it as T0 must be rejected
    w = trivial_witness_into(x, ModMorphism.identity(x))
    chk = verify_witness(nak6_pair, w)
    assert chk.status == "invalid"
    assert "T0" in chk.reason


def test_non_exact_chain_is_invalid(nak6_pair, nak6_inds):
    x = nak6_inds["[4]"]
    z = zero_module(x.algebra)
    w = SixTermSequence(ModMorphism.zero(z, z), ModMorphism.zero(z, x), ModMorphism.zero(x, x), ModMorphism.zero(x, z))
    chk = verify_witness(nak6_pair, w)
    assert chk.status == "invalid"
    assert "exact" in chk.reason or "injective" in chk.reason
    assert chk.certificate["ranks"]["q"] == [0, 0, 0, 0, 0, 0]


def test_witness_file_round_trip(nak6_pair, nak6_inds):
    text = (FIXTURES / "nakayama6_witness_2-4.txt").read_text()
    w = parse_witness(text, nak6_inds)
    assert serialize_witness(w) == text
    chk = verify_witness(nak6_pair, w)
    assert chk.status == "valid-nonvanishing"
    assert chk.class_representative == ["1"]


def test_witness_file_with_labels(nak6_pair, nak6_inds):
    text = """
use X = [4]
use T = [4]
zero Z
morphism zin: Z -> Z
morphism zx: Z -> X
morphism id: X -> T
at 4 = [[1]]
morphism out: T -> Z
sequence zin zx id out
"""
    chk = verify_witness(nak6_pair, parse_witness(text, nak6_inds))
    assert chk.status == "valid-vanishing"


def test_budget_zero_is_immediate_exhaustion(nak6_pair, nak6_inds):
    r = witness_search(nak6_pair, nak6_inds["[1]"], budget=0)
    assert not r.found
    assert r.exhausted
    assert r.evaluated == 0


def test_search_respects_budget(nak6_pair, nak6_inds):
    r = witness_search(nak6_pair, nak6_inds["[2..5]"], budget=7)
    assert r.exhausted and r.evaluated <= 7


def test_found_witnesses_verify_for_all_indecomposables(nak6_pair, nak6_inds):
    for lab, m in zip(nak6_inds.labels, nak6_inds.modules):
        r = witness_search(nak6_pair, m)
        if r.found:
            again = verify_witness(nak6_pair, r.witness)
            assert again.status == "valid-vanishing", lab
            assert witness_class(r.witness).is_zero(), lab


def test_cancellation_between_candidates(nak6_pair, nak6_inds):
    r = witness_search(nak6_pair, nak6_inds["[2..5]"], cancel=lambda: True)
    assert not r.found and r.exhausted


# -- heart --------------------------------------------------------------------------


def test_heart_of_stalks_is_module_category(nak6, nak6_inds):
    p = parse_complexes((FIXTURES / "nakayama6_stalks.complexes").read_text(), nak6)
    h = heart_presentation(p, nak6_inds)
    assert h.end_dim == nak6.dim
    assert h.torsion_pair.free == ()
    assert len(h.torsion_pair.torsion) == 16


def test_heart_of_example(nak6_complexes, nak6_inds):
    h = heart_presentation(nak6_complexes, nak6_inds)
    assert h.end_dim == 12
    assert len(h.heart_stalks) == 12
    d = h.to_dict()
    assert d["endDimension"] == 12


def test_one_vertex_algebra_has_end_k():
    alg = parse_algebra("vertices 1\n")
    inds = enumerate_indecomposables(alg)
    h = heart_presentation([ProjComplex.stalk(alg, ["1"], 0)], inds)
    assert h.end_dim == 1
