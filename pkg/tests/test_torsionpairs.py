import pytest

from tiltcheck.quiverparse import ParseError
from tiltcheck.repcat import hom_dim
from tiltcheck.torsionpairs import (
    NotSiltingError,
    TorsionPair,
    canonical_sequence,
    check_torsion_axioms,
    classify,
    ext1_table,
    in_add,
    parse_torsion_pair,
    serialize_torsion_pair,
    torsion_from_silting,
    ttf_check,
)
from tiltcheck.twotermcx import parse_complexes

from conftest import FIXTURES

NAK6_T = ("[1]", "[1..2]", "[1..3]", "[4]", "[4..5]", "[5]")
NAK6_F = ("[2]", "[2..3]", "[3]", "[4..6]", "[5..6]", "[6]")


def orthogonal_pair(tp):
    """Torsion pairs of finite type are Hom-orthogonal closures of each other."""
    inds = tp.over
    labs = inds.labels
    left = {x for x in labs if all(hom_dim(inds[x], inds[f]) == 0 for f in tp.free)}
    right = {y for y in labs if all(hom_dim(inds[t], inds[y]) == 0 for t in tp.torsion)}
    return left == set(tp.torsion) and right == set(tp.free)


def test_pair_from_silting(nak6_complexes, nak6_inds):
    tp = torsion_from_silting(nak6_complexes, nak6_inds)
    assert tp.torsion == NAK6_T
    assert tp.free == NAK6_F
    assert tp.neither == ("[2..4]", "[2..5]", "[3..4]", "[3..5]")


def test_pair_file_matches_silting(nak6_pair, nak6_complexes, nak6_inds):
    assert nak6_pair == torsion_from_silting(nak6_complexes, nak6_inds)
    assert parse_torsion_pair(serialize_torsion_pair(nak6_pair), nak6_inds) == nak6_pair


def test_alias_labels(nak6_inds):
    tp = parse_torsion_pair("torsion [1] [1,2] [1, 2, 3] [4] [4,5] [5]\nfree [2] [2,3] [3] [4,5,6] [5,6] [6]\n", nak6_inds)
    assert tp.torsion == NAK6_T and tp.free == NAK6_F


def test_parse_errors(nak6_inds):
    with pytest.raises(ParseError) as info:
        parse_torsion_pair("torsion [1]\nfree [9]\n", nak6_inds)
    assert info.value.line == 2
    with pytest.raises(ParseError):
        parse_torsion_pair("torsion [1]\nfree [1]\n", nak6_inds)
    with pytest.raises(ParseError):
        parse_torsion_pair("tors [1]\n", nak6_inds)


def test_non_silting_input(a2, a2_inds):
    p = parse_complexes((FIXTURES / "a2_nonsilting.complexes").read_text(), a2)
    with pytest.raises(NotSiltingError):
        torsion_from_silting(p, a2_inds)


def test_axioms_hold_on_example(nak6_pair):
    assert check_torsion_axioms(nak6_pair).ok
    assert orthogonal_pair(nak6_pair)


def test_canonical_sequences(nak6_pair, nak6_inds):
    for lab, x in zip(nak6_inds.labels, nak6_inds.modules):
        xi = canonical_sequence(nak6_pair, x)
        assert xi.is_exact()
        assert in_add(nak6_pair.torsion, xi.left, nak6_inds)
        assert in_add(nak6_pair.free, xi.right, nak6_inds)


def test_classification_of_example(nak6_pair):
    v = classify(nak6_pair)
    assert v.facF_star_subT
    assert not v.tilting
    assert not v.cotilting
    assert not v.splitting
    assert not v.f_star_subT
    assert not v.facF_star_T
    assert v.complete


def test_ext1_table(nak6_pair):
    nonzero = {k for k, d in ext1_table(nak6_pair).items() if d}
    assert nonzero == {("[2..3]", "[4]"), ("[2..3]", "[4..5]"), ("[3]", "[4]"), ("[3]", "[4..5]")}


def test_splitting_pair_on_a2(a2_inds):
    tp = parse_torsion_pair((FIXTURES / "a2_splitting.pair").read_text(), a2_inds)
    assert check_torsion_axioms(tp).ok
    assert all(d == 0 for d in ext1_table(tp).values())
    v = classify(tp)
    assert v.splitting and v.f_star_subT and v.facF_star_T


def test_tilting_and_cotilting_pairs_on_a3(a3_inds):
    tilt = parse_torsion_pair((FIXTURES / "a3_tilting.pair").read_text(), a3_inds)
    cotilt = parse_torsion_pair((FIXTURES / "a3_cotilting.pair").read_text(), a3_inds)
    vt, vc = classify(tilt), classify(cotilt)
    assert vt.tilting and vt.f_star_subT and not vt.splitting
    assert vc.cotilting and vc.facF_star_T and not vc.splitting


def _moved(tp, label):
    t, f = set(tp.torsion), set(tp.free)
    if label in t:
        t.remove(label)
        f.add(label)
    else:
        f.remove(label)
        t.add(label)
    return TorsionPair(tuple(t), tuple(f), tp.over)


# moving one of these labels keeps a genuine torsion pair
STILL_TORSION_PAIRS = {"[1..3]", "[5]", "[2]", "[4..6]"}


@pytest.mark.parametrize("label", NAK6_T + NAK6_F)
def test_single_moves_agree_with_orthogonality_oracle(nak6_pair, label):
    mutated = _moved(nak6_pair, label)
    rep = check_torsion_axioms(mutated)
    assert rep.ok == orthogonal_pair(mutated)
    assert rep.ok == (label in STILL_TORSION_PAIRS)
    if not rep.ok:
        assert rep.failure
        assert rep.witness


def test_hom_failure_names_the_pair(nak6_pair):
    rep = check_torsion_axioms(_moved(nak6_pair, "[3]"))
    assert rep.failure == "Hom(T, F) is not zero"
    assert rep.witness["T"] == "[3]"
    assert rep.witness["homDim"] >= 1


def test_ttf_triple_on_a2(a2_inds):
    rep = ttf_check(["[2]"], ["[1]"], ["[1..2]", "[2]"], a2_inds)
    assert rep.first_pair.ok and rep.second_pair.ok
    assert rep.z_in_sub_x is False
    assert rep.x_in_fac_z is True
    assert rep.conclusions == {"tiltAtXY": "NotEquivalence", "tiltAtYZ": "Equivalence"}


def test_ttf_rejects_non_triples(a2_inds):
    rep = ttf_check(["[1]"], ["[1..2]", "[2]"], [], a2_inds)
    assert not rep.second_pair.ok
    assert rep.conclusions == {"stage": "not a TTF triple"}
