import pytest
from hypothesis import given, settings, strategies as st

from tiltcheck.quiverparse import ParseError
from tiltcheck.repcat import direct_sum, interval_module
from tiltcheck.twotermcx import (
    ChainMap,
    ModComplex,
    NotTwoTermError,
    ProjComplex,
    chain_map_from_matrices,
    complex_cohomology,
    complex_direct_sum,
    compose,
    cone,
    endo_algebra,
    hom_complex,
    hom_dim,
    hom_upto_homotopy,
    identity_map,
    parse_complexes,
    serialize_complex,
    shift,
    silting_check,
)

from conftest import FIXTURES


def _load(alg, name):
    return parse_complexes((FIXTURES / name).read_text(), alg)


def test_example_complex_is_silting(nak6, nak6_complexes):
    rep = silting_check(nak6_complexes)
    assert rep.two_term and rep.presilting and rep.generating and rep.silting
    assert rep.failed == []


def test_example_self_homs(nak6_complexes):
    p = complex_direct_sum(nak6_complexes)
    assert hom_dim(p, p, -1) == 4
    assert hom_dim(p, p, 1) == 0
    assert hom_dim(p, p, 0) == 12
    e = endo_algebra(nak6_complexes)
    assert e.dim == 12
    assert e.associative()


def test_pairwise_hom_classes_sum_to_end(nak6_complexes):
    total = sum(hom_dim(x, y, 0) for x in nak6_complexes for y in nak6_complexes)
    assert total == endo_algebra(nak6_complexes).dim


def test_cohomology_of_two_term_pieces(nak6, nak6_complexes):
    by_name = {c.name: c for c in nak6_complexes}
    c = by_name["P2P1"]
    assert list(complex_cohomology(c, 0).dims) == [1, 0, 0, 0, 0, 0]
    # right multiplication by a kills c*b and d*c*b in P2
    assert list(complex_cohomology(c, -1).dims) == [0, 0, 0, 1, 1, 0]
    assert list(complex_cohomology(by_name["P6P5"], 0).dims) == [0, 0, 0, 0, 1, 0]
    assert complex_cohomology(by_name["P6P5"], -1).is_zero()


def test_a2_tilting_complex(a2):
    p = _load(a2, "a2_tilting.complexes")
    rep = silting_check(p)
    assert rep.silting
    assert rep.neg_self_homs[-1] == 0


def test_a2_failures(a2):
    rep = silting_check(_load(a2, "a2_nonsilting.complexes"))
    assert rep.failed == ["generating"]
    bad = [ProjComplex.stalk(a2, ["1"], 0), ProjComplex.stalk(a2, ["2"], -1)]
    rep = silting_check(bad)
    assert "presilting" in rep.failed
    assert rep.pos_self_homs[1] == 1


def test_three_term_support_is_rejected(a2):
    with pytest.raises(NotTwoTermError):
        silting_check([ProjComplex.stalk(a2, ["1"], -2)])


def test_negative_fixture(a2):
    p = _load(a2, "a2_negative.complexes")
    rep = silting_check(p)
    assert rep.silting
    assert rep.neg_self_homs[-1] == 1


def test_d_squared_checked(nak6):
    text = "complex X\nterm -1 = P1\nterm 0 = P2\nd -1 = [[b]]\n"
    with pytest.raises(ParseError):
        parse_complexes(text, nak6)


@pytest.mark.parametrize(
    "name",
    ["nakayama6.complexes", "nakayama6_stalks.complexes"],
)
def test_round_trip_nak6(nak6, name):
    cs = _load(nak6, name)
    text = "".join(serialize_complex(c) for c in cs)
    again = parse_complexes(text, nak6)
    assert again == cs
    assert "".join(serialize_complex(c) for c in again) == text


@pytest.mark.parametrize("name", ["a2_tilting.complexes", "a2_stalks.complexes", "a2_negative.complexes"])
def test_round_trip_a2(a2, name):
    cs = _load(a2, name)
    again = parse_complexes("".join(serialize_complex(c) for c in cs), a2)
    assert again == cs


def test_shift_moves_homs(nak6_complexes):
    p = complex_direct_sum(nak6_complexes)
    for i in (-1, 0, 1):
        assert hom_dim(p, shift(p, i), 0) == hom_dim(p, p, i)


def test_cone_of_identity_is_contractible(nak6_complexes):
    x = nak6_complexes[1]
    c = cone(identity_map(x))
    assert hom_dim(c, c, 0) == 0
    for n in c.degrees():
        assert complex_cohomology(c, n).is_zero()


def test_cone_of_arrow_map(a2):
    p2 = ProjComplex.stalk(a2, ["2"], 0)
    p1 = ProjComplex.stalk(a2, ["1"], 0)
    f = chain_map_from_matrices(p2, p1, 0, {0: [[a2.path("a")]]})
    assert f.is_chain_map()
    assert not f.is_zero_class()
    c = cone(f)
    assert list(complex_cohomology(c, 0).dims) == [1, 0]
    assert complex_cohomology(c, -1).is_zero()


def test_hom_to_stalk_module_complex(nak6, nak6_inds):
    # Hom_K(P_v, X) = e_v X for a stalk projective
    for v in "123456":
        pv = ProjComplex.stalk(nak6, [v], 0)
        for lab, m in zip(nak6_inds.labels, nak6_inds.modules):
            assert hom_dim(pv, ModComplex.stalk(m), 0) == m.dims[nak6.vertex(v)]


def test_identity_is_neutral(nak6_complexes):
    x = nak6_complexes[3]
    basis = hom_upto_homotopy(x, x, 0).basis
    i = identity_map(x)
    for b in basis:
        assert compose(i, b).canonical() == b.canonical()
        assert compose(b, i).canonical() == b.canonical()


_STATE = {}


def _summands():
    if "p" not in _STATE:
        from tiltcheck.quiverparse import load_algebra

        alg = load_algebra(FIXTURES / "nakayama6.quiver")
        _STATE["p"] = parse_complexes((FIXTURES / "nakayama6.complexes").read_text(), alg)
    return _STATE["p"]


@settings(max_examples=30, deadline=None)
@given(st.data())
def test_composition_is_associative_up_to_homotopy(data):
    cs = _summands()
    x, y, z, w = (data.draw(st.sampled_from(cs)) for _ in range(4))
    hs = [hom_upto_homotopy(x, y, 0), hom_upto_homotopy(y, z, 0), hom_upto_homotopy(z, w, 0)]
    if not all(h.basis for h in hs):
        return
    f, g, h = (data.draw(st.sampled_from(hh.basis)) for hh in hs)
    assert compose(h, compose(g, f)).canonical() == compose(compose(h, g), f).canonical()
