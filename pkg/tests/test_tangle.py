from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from klrw.linalg import kernel
from klrw.tangle import (ChainComplex, Generator, GradedVectorSpace, TangleError, TangleWord,
                         cap_functor,
                         cup_bimodule, evaluate_annular_link, minimal_resolution, parse_tangle,
                         tor_complex)


def unknot():
    return parse_tangle("cup 0\ncap 0\n")


def test_unknot_homology():
    g = evaluate_annular_link(unknot())
    assert g.dims == {(0, 1): 1, (0, -1): 1}
    assert g.poincare() == "q + q^-1"


def test_unknot_at_other_position():
    assert evaluate_annular_link(parse_tangle("cup 1\ncap 1")).poincare() == "q + q^-1"


def test_empty_link():
    assert evaluate_annular_link([]).poincare() == "1"


def test_two_unknots_multiply():
    g = evaluate_annular_link(parse_tangle("cup 0\ncap 0\ncup 1\ncap 1"))
    assert g.dims == {(0, 2): 1, (0, 0): 2, (0, -2): 1}


def test_essential_circle_has_rank_two():
    assert evaluate_annular_link(parse_tangle("cup 0\ncap 1")).total() == 2


def test_unsupported_generators_raise():
    bad = ["cup 0\nbraid 0 -\ncap 0",   # negative crossing
           "cup 1\nbraid 0 +\ncap 1",   # not sent to a shifted cup
           "cup 0\nbraid 1 +\ncap 0",   # index out of range
           "braid 0 +",
           "cup 0\ncup 0\ncap 0\ncap 0",  # four reds
           "cup 0", "cap 0"]
    for text in bad:
        with pytest.raises(TangleError):
            evaluate_annular_link(parse_tangle(text))
    with pytest.raises(TangleError):
        parse_tangle("twist 3")
    with pytest.raises(TangleError):
        cup_bimodule(2)


def test_rotations_preserve_the_unknot():
    for text in ("cup 0\nrot +\ncap 0", "cup 1\nrot -\ncap 1", "rot +\ncup 0\nrot +\nrot +\ncap 0"):
        assert evaluate_annular_link(parse_tangle(text)).poincare() == "q + q^-1"


def test_rotated_cup_against_other_cap_is_essential():
    assert evaluate_annular_link(parse_tangle("cup 0\nrot +\ncap 1")).total() == 2


def test_word_boundaries():
    w = TangleWord(parse_tangle("cup 1\nrot +\ncap 0"))
    assert w.boundaries() == [((), 0), (("1", "1"), 1), (("1", "1"), 1), ((), 0)]
    assert w.closes()
    assert not TangleWord(parse_tangle("cup 0")).closes()
    with pytest.raises(TangleError):
        TangleWord(parse_tangle("cap 0")).boundaries()


def test_parse_tangle():
    assert parse_tangle("# c\ncup 1\nbraid 0 -\nrot +\n") == [
        Generator("cup", 1), Generator("braid", 0, -1), Generator("rot", 0, 1)]


def test_zero_module_maps_to_zero():
    assert cap_functor(0, None).total() == 0


def test_cup_kills_outside_idempotents():
    for k in (0, 1):
        c = cup_bimodule(k)
        assert c.annihilated()
        assert c.outside and c.pinch
        # the pinched corner is the ground field in degree 0
        assert c.morita_dims() == [1] + [0] * c.trunc.N


def test_resolution_is_short_and_squares_to_zero():
    c = cup_bimodule(0)
    F0, K0 = c.quotient.left_module(c.pinch)
    res = minimal_resolution(c.trunc, F0, K0)
    assert res.length <= 4
    cx = tor_complex(c.quotient, c.pinch, res)
    cx.check()
    assert cx.simplified().homology() == cx.homology()


def test_graded_space_algebra():
    a = GradedVectorSpace({(0, 1): 1, (1, 0): 0})
    b = GradedVectorSpace({(0, -1): 2})
    assert (a + b).dims == {(0, 1): 1, (0, -1): 2}
    assert a.tensor(b).dims == {(0, 0): 2}
    assert GradedVectorSpace({(1, 2): 3}).poincare() == "3*t*q^2"
    assert GradedVectorSpace({}).poincare() == "0"


def _random_complex(n0, n1, n2, entries, combos):
    """C2 -> C1 -> C0 in one internal degree with d1 d2 = 0."""
    labels = {i: [(i, k) for k in range(n)] for i, n in enumerate((n0, n1, n2))}
    d1 = {}
    vals = iter(entries)
    for b in labels[1]:
        d1[b] = {a: F(next(vals, 0)) for a in labels[0]}
        d1[b] = {a: v for a, v in d1[b].items() if v}
    ker = kernel([(b, d1[b]) for b in labels[1]])
    cvals = iter(combos)
    d2 = {}
    for c in labels[2]:
        img = {}
        for vec in ker:
            t = next(cvals, 0)
            for b, x in vec.items():
                img[b] = img.get(b, 0) + t * x
        d2[c] = {b: x for b, x in img.items() if x}
    spaces = {i: {0: list(labels[i])} for i in range(3)}
    return ChainComplex(spaces, {1: {0: d1}, 2: {0: d2}})


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 3), st.integers(0, 4), st.integers(0, 3),
       st.lists(st.integers(-2, 2), min_size=12, max_size=12),
       st.lists(st.integers(-2, 2), min_size=12, max_size=12))
def test_gaussian_elimination_preserves_homology(n0, n1, n2, entries, combos):
    cx = _random_complex(n0, n1, n2, entries, combos)
    cx.check()
    h = cx.homology()
    s = cx.simplified()
    s.check()
    assert s.homology() == h
    # Euler characteristic
    chi = sum((-1) ** i * len(per.get(0, [])) for i, per in cx.spaces.items())
    assert sum((-1) ** i * d for (i, _), d in h.items()) == chi


def test_check_detects_nonzero_square():
    spaces = {0: {0: ["a"]}, 1: {0: ["b"]}, 2: {0: ["c"]}}
    cx = ChainComplex(spaces, {1: {0: {"b": {"a": 1}}}, 2: {0: {"c": {"b": 1}}}})
    with pytest.raises(TangleError):
        cx.check()
