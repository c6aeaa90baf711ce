"""Tests for parabolic coset generation and the wedge-power decomposition."""

import pytest

from contactpde.contact import contact_grading, semisimple_part
from contactpde.errors import PreconditionError
from contactpde.kostant import (
    decomposition_dimensions,
    generate_wp,
    kostant_decomposition,
    primitive_wedge_dim,
)
from contactpde.rootsys import CartanType, build_root_system, weyl_orbit

T = CartanType.parse

TYPES = ["A2", "A3", "A4", "B3", "B4", "C3", "C4", "D4", "D5", "F4", "G2"]


def test_length_zero_is_identity():
    for name in ["A3", "B3", "G2", "E6"]:
        level0 = generate_wp(T(name))[0]
        assert len(level0) == 1
        assert level0[0].word.word == ()
        assert level0[0].weight == tuple([0] * T(name).rank)


def test_length_one_counts():
    for name in ["B3", "C4", "D5", "F4", "G2", "E7"]:
        assert len(generate_wp(T(name))[1]) == 1
    for name in ["A2", "A3", "A5"]:
        assert len(generate_wp(T(name))[1]) == 2


def test_length_one_word_is_crossed_node():
    wp1 = generate_wp(T("F4"))[1]
    assert wp1[0].word.word == (0,)
    wp1 = generate_wp(T("G2"))[1]
    assert wp1[0].word.word == (1,)


def test_e8_total_240():
    full = generate_wp(T("E8"))
    assert sum(len(v) for v in full.values()) == 240


@pytest.mark.parametrize("name", TYPES)
def test_total_equals_orbit_of_highest_root(name):
    rs = build_root_system(T(name))
    orbit = weyl_orbit(rs, rs.highest_root_fund)
    full = generate_wp(T(name))
    assert sum(len(v) for v in full.values()) == len(orbit)


@pytest.mark.parametrize("name", TYPES)
def test_poincare_duality(name):
    g = contact_grading(T(name))
    full = generate_wp(T(name))
    top = 2 * g.n + 1
    assert max(full) == top
    for i in range(top + 1):
        assert len(full.get(i, ())) == len(full.get(top - i, ()))


@pytest.mark.parametrize("name", TYPES + ["E6", "E7", "E8"])
def test_dimension_identity(name):
    n = contact_grading(T(name)).n
    for i in range(1, n + 1):
        dims = decomposition_dimensions(T(name), i)
        assert sum(dims) == primitive_wedge_dim(n, i)


def test_degree_one_is_g_minus1():
    for name in ["B3", "D4", "G2", "A4"]:
        n = contact_grading(T(name)).n
        assert sum(decomposition_dimensions(T(name), 1)) == 2 * n


def test_g2_degree_two_is_five_dimensional():
    dims = decomposition_dimensions(T("G2"), 2)
    assert dims == [5]
    (coset,) = kostant_decomposition(T("G2"), 2)
    assert coset.restricted_weight == (4,)


def test_b3_degree_three_total_14():
    assert sum(decomposition_dimensions(T("B3"), 3)) == 14


def test_degree_out_of_range():
    with pytest.raises(PreconditionError):
        kostant_decomposition(T("B3"), 0)
    with pytest.raises(PreconditionError):
        kostant_decomposition(T("B3"), 4)


def test_max_length_truncation():
    partial = generate_wp(T("F4"), 2)
    assert sorted(partial) == [0, 1, 2]
    with pytest.raises(PreconditionError):
        generate_wp(T("F4"), -1)


@pytest.mark.parametrize("name", ["B3", "F4", "G2", "A3"])
def test_words_reproduce_weights(name):
    rs = build_root_system(T(name))
    part = semisimple_part(T(name))
    for length, cosets in generate_wp(T(name)).items():
        for c in cosets:
            assert len(c.word.word) == length == c.length
            wrho = rs.apply_word(c.word.word, rs.rho)
            assert tuple(a - b for a, b in zip(wrho, rs.rho)) == c.weight
            restricted = part.restrict(c.weight)
            assert restricted == c.restricted_weight
            assert all(x >= 0 for x in restricted)


def test_canonical_order_is_stable():
    a = generate_wp(T("D4"))
    b = generate_wp(T("D4"))
    for k in a:
        assert [c.word.word for c in a[k]] == [c.word.word for c in b[k]]
        words = [c.word.word for c in a[k]]
        assert words == sorted(words)
