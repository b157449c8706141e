from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from klrw.quiver_flavor import (Edge, FlavorError, FlavorGroup, Flavoring, Quiver, build_cb_graph,
                                circuit_set, coboundary_shift, cyclic_compare, enumerate_circuits,
                                is_generic)

from helpers import cb_cycles

QZ = FlavorGroup.rational()
F19 = FlavorGroup.prime(19)

# i <- j <- k with edges e: j -> i and f: k -> j
IJK = Quiver(("i", "j", "k"), (Edge("e", "j", "i"), Edge("f", "k", "j")))
A2 = Quiver(("1", "2"), (Edge("e", "1", "2"),))

rationals = st.fractions(min_value=-3, max_value=3, max_denominator=40)


def test_unknown_vertex_rejected():
    with pytest.raises(FlavorError):
        Quiver(("1",), (Edge("e", "1", "2"),))


def test_cb_graph_a1_two_framings():
    cb = build_cb_graph(Quiver(("1",)), {"1": 2})
    assert cb.framing_edges == (("1", 1), ("1", 2))


def test_cb_graph_ijk_example():
    cb = build_cb_graph(IJK, {"i": 1, "j": 0, "k": 1})
    assert cb.framing_edges == (("i", 1), ("k", 1))


def test_cb_graph_zero_framing():
    assert build_cb_graph(IJK, {"i": 0, "j": 0, "k": 0}).framing_edges == ()


def test_cb_graph_requires_total_w():
    with pytest.raises(FlavorError):
        build_cb_graph(IJK, {"i": 1})


def test_cyclic_compare_examples():
    assert cyclic_compare(F19, 2, 4, 7)
    assert cyclic_compare(QZ, F(1, 10), F(1, 2), F(9, 10))
    assert not cyclic_compare(QZ, F(9, 10), F(1, 2), F(1, 10))
    assert not cyclic_compare(QZ, F(1, 3), F(1, 3), F(1, 2))


@given(rationals, rationals, rationals, rationals)
def test_cyclic_compare_translation_invariant(a, b, c, t):
    assert cyclic_compare(QZ, a, b, c) == cyclic_compare(QZ, a + t, b + t, c + t)


@given(st.integers(0, 18), st.integers(0, 18), st.integers(0, 18), st.integers(0, 18))
def test_cyclic_compare_fp_translation(a, b, c, t):
    assert cyclic_compare(F19, a, b, c) == cyclic_compare(F19, a + t, b + t, c + t)


@given(rationals, rationals, rationals)
def test_cyclic_compare_rotation_and_orientation(a, b, c):
    assert cyclic_compare(QZ, a, b, c) == cyclic_compare(QZ, b, c, a)
    if len({QZ.element(a), QZ.element(b), QZ.element(c)}) == 3:
        assert cyclic_compare(QZ, a, b, c) != cyclic_compare(QZ, a, c, b)


def test_circuits_a1_w2():
    cs = enumerate_circuits(build_cb_graph(Quiver(("1",)), {"1": 2}))
    assert len(cs) == 1
    assert cs[0].path == ()
    assert cs[0].coefficients() == {("1", 1): -1, ("1", 2): 1}


def test_circuits_a2_example():
    cs = enumerate_circuits(build_cb_graph(A2, {"1": 1, "2": 1}))
    assert len(cs) == 1
    co = cs[0].coefficients()
    assert co == {("1", 1): -1, ("2", 1): 1, "e": 1}


@pytest.mark.parametrize("q,w", [
    (IJK, {"i": 1, "j": 0, "k": 1}),
    (A2, {"1": 1, "2": 1}),
    (A2, {"1": 2, "2": 1}),
    (Quiver(("1", "2"), (Edge("a", "1", "2"), Edge("b", "2", "1"))), {"1": 1, "2": 1}),
    (Quiver(("1", "2", "3"), (Edge("a", "1", "2"), Edge("b", "2", "3"), Edge("c", "3", "1"))),
     {"1": 1, "2": 0, "3": 1}),
])
def test_circuits_match_bruteforce_cycle_oracle(q, w):
    cb = build_cb_graph(q, w)
    assert circuit_set(enumerate_circuits(cb)) == cb_cycles(cb)


def test_circuit_enumeration_independent_of_edge_order():
    q1 = Quiver(("1", "2", "3"), (Edge("a", "1", "2"), Edge("b", "2", "3"), Edge("c", "3", "1")))
    q2 = Quiver(("1", "2", "3"), (Edge("c", "3", "1"), Edge("a", "1", "2"), Edge("b", "2", "3")))
    w = {"1": 1, "2": 1, "3": 1}
    assert circuit_set(enumerate_circuits(build_cb_graph(q1, w))) == \
        circuit_set(enumerate_circuits(build_cb_graph(q2, w)))


def test_generic_example_figure():
    cb = build_cb_graph(A2, {"1": 1, "2": 1})
    f = Flavoring.make(cb, QZ, {"e": F(1, 4), ("1", 1): F(1, 2), ("2", 1): F(1, 3)})
    rep = is_generic(f)
    assert rep.generic
    assert [val for _, val in rep.values] == [F(1, 12)]


def test_all_zero_is_not_generic():
    cb = build_cb_graph(Quiver(("1",)), {"1": 2})
    f = Flavoring.make(cb, QZ, {("1", 1): 0, ("1", 2): 0})
    rep = is_generic(f)
    assert not rep.generic and len(rep.violated) == 1


def test_f19_example_generic():
    cb = build_cb_graph(IJK, {"i": 1, "j": 0, "k": 1})
    beta = {"e": 10, "f": 14, ("i", 1): 2, ("k", 1): 12}
    f = Flavoring.make(cb, F19, beta)
    assert is_generic(f).generic
    # oracle: both signed sums of the only path, mod 19
    for s in (1, -1):
        assert (12 - 2 + s * (10 + 14)) % 19 != 0


@settings(max_examples=60)
@given(st.lists(rationals, min_size=4, max_size=4), st.lists(rationals, min_size=3, max_size=3))
def test_genericity_invariant_under_coboundary(vals, eta):
    cb = build_cb_graph(IJK, {"i": 1, "j": 1, "k": 1})
    keys = cb.edge_keys()
    beta = dict(zip(keys, vals + [vals[0] / 3]))
    f = Flavoring.make(cb, QZ, beta)
    g = coboundary_shift(f, dict(zip(("i", "j", "k"), eta)))
    a, b = is_generic(f), is_generic(g)
    assert a.generic == b.generic
    assert [v for _, v in a.values] == [v for _, v in b.values]


def test_flavoring_must_be_total():
    cb = build_cb_graph(A2, {"1": 1, "2": 1})
    with pytest.raises(FlavorError):
        Flavoring.make(cb, QZ, {"e": F(1, 4)})


def test_rational_values_are_reduced_mod_one():
    assert QZ.element(F(7, 4)) == F(3, 4)
    assert QZ.element(F(-1, 4)) == F(3, 4)
    assert F19.element(-1) == 18
