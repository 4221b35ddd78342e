from collections import Counter

import pytest
from hypothesis import given, settings, strategies as st

from tiltcheck.exactlinalg import QQ, Matrix
from tiltcheck.quiverparse import ParseError, parse_algebra
from tiltcheck.repcat import (
    ModMorphism,
    Representation,
    cokernel,
    decompose,
    direct_sum,
    enumerate_indecomposables,
    hom_dim,
    hom_space,
    image,
    in_fac,
    in_sub,
    interval_module,
    is_indecomposable,
    is_isomorphic,
    kernel,
    linear_combination,
    parse_modules,
    projective_module,
    radical,
    reject,
    serialize_module,
    simple_module,
    thin_submodules,
    top_generators,
    trace_of_class,
)

NAK6_LABELS = [
    "[1]", "[1..2]", "[1..3]", "[2]", "[2..3]", "[2..4]", "[2..5]", "[3]",
    "[3..4]", "[3..5]", "[4]", "[4..5]", "[4..6]", "[5]", "[5..6]", "[6]",
]


def test_projective_dimension_vectors(nak6):
    dims = {v: projective_module(nak6, v).dims for v in "123456"}
    assert list(dims["1"]) == [1, 1, 1, 0, 0, 0]
    assert list(dims["2"]) == [0, 1, 1, 1, 1, 0]
    assert list(dims["3"]) == [0, 0, 1, 1, 1, 0]
    assert list(dims["4"]) == [0, 0, 0, 1, 1, 1]
    assert list(dims["5"]) == [0, 0, 0, 0, 1, 1]
    assert list(dims["6"]) == [0, 0, 0, 0, 0, 1]


def test_sixteen_intervals(nak6_inds):
    assert list(nak6_inds.labels) == NAK6_LABELS
    assert nak6_inds.complete
    assert nak6_inds.algebra_class == "nakayama-linear"


def test_hereditary_counts(a2_inds, a3_inds):
    assert list(a2_inds.labels) == ["[1]", "[1..2]", "[2]"]
    assert len(a3_inds.labels) == 6
    assert a3_inds.algebra_class == "hereditary-linear"


def test_label_aliases(nak6_inds):
    assert nak6_inds.resolve("[1,2,3]") == "[1..3]"
    assert nak6_inds.resolve("[4]") == "[4]"
    with pytest.raises(KeyError):
        nak6_inds.resolve("[1,3]")


def test_hom_matrix_is_invertible(nak6_inds):
    assert nak6_inds.hom_matrix().is_invertible()


def test_unsupported_class_needs_a_list():
    alg = parse_algebra("vertices 1 2 3 4\narrow a: 1 -> 2\narrow b: 2 -> 4\narrow c: 1 -> 3\narrow d: 3 -> 4\n")
    with pytest.raises(ValueError):
        enumerate_indecomposables(alg)


def test_relations_checked(nak6):
    m = projective_module(nak6, "1")
    assert m.verify_relations() is None
    bad = [Matrix.identity(QQ, 1)] * 5
    with pytest.raises(ValueError):
        Representation(nak6, [1, 1, 1, 1, 1, 1], bad)


def test_kernel_and_cokernel_are_exact(nak6):
    p1 = projective_module(nak6, "1")
    s1 = simple_module(nak6, "1")
    f = hom_space(p1, s1)[0]
    k = kernel(f)
    q = cokernel(f)
    assert list(k.module.dims) == [0, 1, 1, 0, 0, 0]
    assert q.module.is_zero()
    assert (f @ k.inclusion).is_zero()
    assert k.inclusion.is_mono()


def test_image_factorization(nak6_inds):
    x, y = nak6_inds["[2..5]"], nak6_inds["[1..3]"]
    f = hom_space(x, y)[0]
    sub, core = image(f)
    assert sub.inclusion @ core == f
    assert core.is_epi()
    assert list(sub.module.dims) == [0, 1, 1, 0, 0, 0]


def test_radical_and_top(nak6):
    p2 = projective_module(nak6, "2")
    assert list(radical(p2).module.dims) == [0, 0, 1, 1, 1, 0]
    assert [v for v, _ in top_generators(p2)] == [1]


def test_hom_dimensions(nak6_inds):
    assert hom_dim(nak6_inds["[1..3]"], nak6_inds["[1]"]) == 1
    assert hom_dim(nak6_inds["[1]"], nak6_inds["[1..3]"]) == 0
    assert hom_dim(nak6_inds["[2..5]"], nak6_inds["[1..3]"]) == 1


def test_decompose_and_isomorphism(nak6_inds):
    x = direct_sum([nak6_inds["[2..4]"], nak6_inds["[3]"], nak6_inds["[2..4]"]]).module
    assert decompose(x, nak6_inds) == {"[2..4]": 2, "[3]": 1}
    assert is_isomorphic(x, direct_sum([nak6_inds["[3]"], nak6_inds["[2..4]"], nak6_inds["[2..4]"]]).module)
    assert is_isomorphic(nak6_inds["[3]"], nak6_inds["[4]"]) is False
    assert is_indecomposable(nak6_inds["[2..4]"], nak6_inds)
    assert not is_indecomposable(x, nak6_inds)


def test_trace_reject_sub_fac(nak6_inds):
    x = nak6_inds["[2..4]"]
    t = trace_of_class([nak6_inds["[4..6]"]], x)
    assert list(t.module.dims) == [0, 0, 0, 1, 0, 0]
    r = reject([nak6_inds["[1..3]"]], x)
    assert list(r.module.dims) == [0, 0, 0, 1, 0, 0]
    assert in_sub([nak6_inds["[1..3]"]], nak6_inds["[2..3]"])
    assert not in_sub([nak6_inds["[1..3]"]], x)
    assert in_fac([nak6_inds["[4..6]"]], nak6_inds["[4]"])


def test_thin_submodules_of_uniserial(nak6_inds):
    # an interval module is uniserial: its submodules are the socle-side tails
    for lab, m in zip(nak6_inds.labels, nak6_inds.modules):
        subs = thin_submodules(m)
        assert len(subs) == m.total_dim + 1, lab


def test_thin_submodules_of_sum(a3_inds):
    # [1] + [3] is thin and semisimple, so every coordinate subspace is a submodule
    x = direct_sum([a3_inds["[1]"], a3_inds["[3]"]]).module
    subs = thin_submodules(x)
    assert sorted(tuple(s.module.dims) for s in subs) == [(0, 0, 0), (0, 0, 1), (1, 0, 0), (1, 0, 1)]
    for s in subs:
        assert s.inclusion.is_mono()
    with pytest.raises(ValueError):
        thin_submodules(direct_sum([a3_inds["[1]"], a3_inds["[1]"]]).module)


def test_module_file_round_trip(nak6, nak6_inds):
    text = "".join(serialize_module(m, f"M{i}") for i, m in enumerate(nak6_inds.modules))
    mods = parse_modules(text, nak6)
    assert mods == list(nak6_inds.modules)
    assert "".join(serialize_module(m) for m in mods) == text


def test_module_file_errors(nak6):
    with pytest.raises(ParseError) as info:
        parse_modules("module M\ndim 1=1 2=1\nmap a = [[1,2]]\n", nak6)
    assert info.value.line == 3


@settings(max_examples=25, deadline=None)
@given(st.data())
def test_hom_compositions_intertwine(data):
    inds = _NAK6_INDS()
    labs = inds.labels
    x, y, z = (inds[data.draw(st.sampled_from(labs))] for _ in range(3))
    bf, bg = hom_space(x, y), hom_space(y, z)
    f = linear_combination(bf, [data.draw(st.integers(-2, 2)) for _ in bf], x, y)
    g = linear_combination(bg, [data.draw(st.integers(-2, 2)) for _ in bg], y, z)
    assert (g @ f).intertwines()


@settings(max_examples=20, deadline=None)
@given(st.lists(st.integers(0, 15), min_size=1, max_size=4))
def test_decompose_recovers_multiplicities(picks):
    inds = _NAK6_INDS()
    labs = [inds.labels[i] for i in picks]
    x = direct_sum([inds[l] for l in labs]).module
    assert decompose(x, inds) == dict(Counter(labs))


_CACHE = {}


def _NAK6_INDS():
    if "inds" not in _CACHE:
        from conftest import FIXTURES
        from tiltcheck.quiverparse import load_algebra

        _CACHE["inds"] = enumerate_indecomposables(load_algebra(FIXTURES / "nakayama6.quiver"))
    return _CACHE["inds"]
