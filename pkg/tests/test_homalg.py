import itertools

import pytest
from hypothesis import given, settings, strategies as st

from tiltcheck.homalg import (
    ExtGroup,
    SixTermSequence,
    ShortExact,
    chi1,
    ext_dim,
    ext_group,
    ext_pullback,
    ext_pushout,
    minimal_resolution,
    morphism_class,
    realize_ext1,
    split_sequence,
    witness_class,
    yoneda_product,
)
from tiltcheck.repcat import cokernel, hom_space, kernel, projective_module, simple_module
from tiltcheck.twotermcx import hom_dim as homotopy_dim

from conftest import FIXTURES


def test_a2_ext(a2):
    s1, s2 = simple_module(a2, "1"), simple_module(a2, "2")
    assert ext_dim(s1, s2, 1) == 1
    assert ext_dim(s2, s1, 1) == 0
    assert ext_dim(s1, s1, 0) == 1


def test_example_top_degree_ext(nak6_inds):
    assert ext_dim(nak6_inds["[1]"], nak6_inds["[6]"], 3) == 1
    assert ext_dim(nak6_inds["[1..2]"], nak6_inds["[5..6]"], 3) == 1
    assert ext_dim(nak6_inds["[1]"], nak6_inds["[5..6]"], 3) == 1


def test_nonzero_ext1_from_free_to_torsion(nak6_inds, nak6_pair):
    nonzero = {
        (f, t)
        for f in nak6_pair.free
        for t in nak6_pair.torsion
        if ext_dim(nak6_inds[f], nak6_inds[t], 1)
    }
    assert nonzero == {("[2..3]", "[4]"), ("[2..3]", "[4..5]"), ("[3]", "[4]"), ("[3]", "[4..5]")}


def test_resolution_of_simple_top(nak6):
    res = minimal_resolution(simple_module(nak6, "1"), 8)
    assert res.complete
    assert res.projective_dimension() == 3
    assert res.is_exact()
    assert res.is_minimal()
    assert [tuple(res.term(n).vertices) for n in range(4)] == [(0,), (1,), (3,), (5,)]


def test_projectives_have_trivial_resolutions(nak6):
    for v in "123456":
        assert minimal_resolution(projective_module(nak6, v), 4).projective_dimension() == 0


def test_chi1_of_the_a2_sequence(a2):
    p1, s1, s2 = projective_module(a2, "1"), simple_module(a2, "1"), simple_module(a2, "2")
    g = hom_space(p1, s1)[0]
    xi = ShortExact(kernel(g).inclusion, g)
    c = chi1(xi)
    assert not c.is_zero()
    again = realize_ext1(c.scale(3))
    assert list(again.middle.dims) == [1, 1]
    assert chi1(again) == c.scale(3)


def test_split_sequences_have_zero_class(nak6_inds):
    for x, y in [("[2..3]", "[4]"), ("[3]", "[4..5]"), ("[1]", "[6]")]:
        assert chi1(split_sequence(nak6_inds[x], nak6_inds[y])).is_zero()


def test_morphism_class_composes_like_maps(nak6_inds):
    x, y, z = nak6_inds["[2..5]"], nak6_inds["[2..3]"], nak6_inds["[2]"]
    f, g = hom_space(x, y)[0], hom_space(y, z)[0]
    assert yoneda_product(morphism_class(g), morphism_class(f)) == morphism_class(g @ f)


def test_pullback_and_pushout_are_natural(nak6_inds):
    # chi1(t^* xi) = chi1(xi) o t  and  chi1(s_* xi) = s o chi1(xi)
    xi = realize_ext1(ext_group(nak6_inds["[3]"], nak6_inds["[4]"], 1).basis[0])
    for lab in ("[3]", "[2..3]", "[1..3]"):
        for t in hom_space(nak6_inds[lab], xi.right):
            pulled = ext_pullback(xi, t)
            assert pulled.is_exact()
            assert chi1(pulled) == yoneda_product(chi1(xi), morphism_class(t))
    for lab in ("[4]", "[4..5]", "[4..6]", "[3..4]"):
        for s in hom_space(xi.left, nak6_inds[lab]):
            pushed = ext_pushout(xi, s)
            assert pushed.is_exact()
            assert chi1(pushed) == yoneda_product(morphism_class(s), chi1(xi))


def test_witness_class_of_minimal_splice(nak6, nak6_inds):
    from tiltcheck.hrscheck import parse_witness

    w = parse_witness((FIXTURES / "nakayama6_witness_2-4.txt").read_text(), nak6_inds)
    assert w.is_exact()
    c = witness_class(w)
    assert c.degree == 3
    assert c.group.dim == 1
    assert not c.is_zero()


_STATE = {}


def _nak6():
    if "inds" not in _STATE:
        from tiltcheck.quiverparse import load_algebra
        from tiltcheck.repcat import enumerate_indecomposables

        _STATE["inds"] = enumerate_indecomposables(load_algebra(FIXTURES / "nakayama6.quiver"))
    return _STATE["inds"]


labels = st.sampled_from(
    ["[1]", "[1..2]", "[1..3]", "[2]", "[2..3]", "[2..4]", "[2..5]", "[3]",
     "[3..4]", "[3..5]", "[4]", "[4..5]", "[4..6]", "[5]", "[5..6]", "[6]"]
)


@settings(max_examples=30, deadline=None)
@given(labels, labels, labels, labels, st.data())
def test_yoneda_is_associative(a, b, c, d, data):
    inds = _nak6()
    degs = [data.draw(st.integers(0, 2)) for _ in range(3)]
    groups = [
        ext_group(inds[a], inds[b], degs[0]),
        ext_group(inds[b], inds[c], degs[1]),
        ext_group(inds[c], inds[d], degs[2]),
    ]
    if not all(g.dim for g in groups):
        return
    x, y, z = (g.make([data.draw(st.integers(-2, 2)) for _ in range(g.dim)]) for g in groups)
    assert yoneda_product(z, yoneda_product(y, x)) == yoneda_product(yoneda_product(z, y), x)


@settings(max_examples=30, deadline=None)
@given(labels, labels, st.data())
def test_yoneda_is_bilinear(a, b, data):
    inds = _nak6()
    g1 = ext_group(inds[a], inds[b], 1)
    labs2 = [l for l in inds.labels if ext_dim(inds[b], inds[l], 1)]
    if not g1.dim or not labs2:
        return
    g2 = ext_group(inds[b], inds[data.draw(st.sampled_from(labs2))], 1)
    x1, x2 = (g1.make([data.draw(st.integers(-2, 2)) for _ in range(g1.dim)]) for _ in range(2))
    y = g2.make([data.draw(st.integers(-2, 2)) for _ in range(g2.dim)])
    assert yoneda_product(y, x1 + x2) == yoneda_product(y, x1) + yoneda_product(y, x2)


def _ext_vs_homotopy(x, y, length):
    qx = minimal_resolution(x, length).complex
    qy = minimal_resolution(y, length).complex
    for n in (0, 1, 2, 3):
        assert ext_dim(x, y, n) == homotopy_dim(qx, qy, n)
    assert homotopy_dim(qx, qy, -1) == 0


def test_ext_matches_homotopy_on_a2(a2_inds):
    for x, y in itertools.product(a2_inds.modules, repeat=2):
        _ext_vs_homotopy(x, y, 6)


@settings(max_examples=25, deadline=None)
@given(labels, labels)
def test_ext_matches_homotopy_on_example(a, b):
    inds = _nak6()
    _ext_vs_homotopy(inds[a], inds[b], 8)
