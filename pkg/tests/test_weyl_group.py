"""
Tests for finite Weyl groups: enumeration, reduced words, descents and parabolics
"""

import sys
from itertools import combinations
from pathlib import Path

import pytest

# Add project root to path for imports
sys.path.insert(0, str(Path(__file__).parents[1]))

from src.errors import CapExceededError, DatumMismatchError, ParseError, RootDatumError
from src.root_datum import build_root_datum, parse_datum_descriptor
from src.weyl_group import (
    WeylGroup,
    descent_set,
    enumerate_weyl,
    format_word,
    longest_element,
    min_coset_reps,
    parabolic_roots,
    parse_word,
    weyl_group,
)


@pytest.fixture
def a2_group():
    return weyl_group(parse_datum_descriptor("A2"))


@pytest.fixture
def b3_group():
    return weyl_group(parse_datum_descriptor("B3"))


class TestEnumeration:

    @pytest.mark.parametrize("label,order", [
        ("A1", 2), ("A2", 6), ("A3", 24), ("B2", 8), ("B3", 48), ("C3", 48),
        ("G2", 12), ("D4", 192), ("F4", 1152),
    ])
    def test_orders(self, label, order):
        group = weyl_group(parse_datum_descriptor(label))
        assert group.order == order
        assert group.order_formula() == order

    def test_order_formula_without_enumeration(self):
        assert weyl_group(parse_datum_descriptor("E6")).order_formula() == 51840
        e8 = build_root_datum("E", 8, max_rank=8)
        assert WeylGroup(e8).order_formula() == 696729600

    def test_elements_sorted_by_length_then_word(self, b3_group):
        keys = [(w.length, w.word) for w in b3_group.elements]
        assert keys == sorted(keys)
        assert len({w.perm for w in b3_group.elements}) == b3_group.order

    def test_rank_cap(self):
        datum = parse_datum_descriptor("A3")
        with pytest.raises(CapExceededError):
            WeylGroup(datum, max_rank=2)
        with pytest.raises(CapExceededError):
            enumerate_weyl(datum, max_rank=2)

    def test_length_distribution_of_a2(self, a2_group):
        assert {length: len(elements) for length, elements in a2_group.by_length().items()} == {0: 1, 1: 2, 2: 2, 3: 1}


class TestReducedWords:

    def test_words_rebuild_the_element(self, b3_group):
        for w in b3_group.elements:
            assert b3_group.from_word(w.word) == w
            assert len(w.word) == w.length

    def test_canonical_words_are_lexicographically_least(self, a2_group):
        w0 = a2_group.longest_element()
        assert w0.word == (1, 2, 1)
        assert a2_group.from_word((2, 1, 2)) == w0
        assert a2_group.from_word((2, 1, 2)).word == (1, 2, 1)

    def test_longest_elements(self):
        for label, word in [("B2", (1, 2, 1, 2)), ("G2", (1, 2, 1, 2, 1, 2))]:
            assert longest_element(parse_datum_descriptor(label)).word == word

    def test_longest_element_negates_positive_roots(self, b3_group):
        w0 = b3_group.longest_element()
        assert w0.length == b3_group.num_positive
        assert all(w0.perm[k] >= b3_group.num_positive for k in range(b3_group.num_positive))

    def test_word_text(self):
        assert format_word(()) == "1"
        assert format_word((1, 2)) == "s1 s2"
        assert parse_word("s1s2 s1") == (1, 2, 1)
        assert parse_word("1,2") == (1, 2)
        assert parse_word("1") == ()
        with pytest.raises(ParseError):
            parse_word("s1x")


class TestGroupLaw:

    def test_associativity_and_inverses(self, a2_group):
        elements = a2_group.elements
        for a in elements:
            assert a2_group.multiply(a, a2_group.inverse(a)) == a2_group.identity
            for b in elements:
                for c in elements:
                    left = a2_group.multiply(a2_group.multiply(a, b), c)
                    right = a2_group.multiply(a, a2_group.multiply(b, c))
                    assert left == right

    def test_simple_reflection_range(self, a2_group):
        with pytest.raises(RootDatumError):
            a2_group.simple_reflection(3)

    def test_mixing_groups_is_rejected(self):
        # G2 and A3 both have six positive roots
        g2 = weyl_group(parse_datum_descriptor("G2"))
        a3 = weyl_group(parse_datum_descriptor("A3"))
        with pytest.raises(DatumMismatchError):
            a3.multiply(a3.identity, g2.simple_reflection(1))

    def test_reflection_in_highest_root(self, b3_group):
        datum = b3_group.datum
        s_theta = b3_group.reflection(datum.highest_root_index)
        assert b3_group.multiply(s_theta, s_theta) == b3_group.identity
        assert s_theta.length % 2 == 1


class TestDescents:

    def test_descent_sets(self, a2_group):
        s1 = a2_group.simple_reflection(1)
        assert a2_group.descent_set(a2_group.identity) == frozenset({1, 2})
        assert a2_group.descent_set(a2_group.longest_element()) == frozenset()
        assert a2_group.descent_set(s1) == frozenset({2})
        assert descent_set(s1) == frozenset({2})
        assert a2_group.left_descents(s1) == frozenset({1})
        assert a2_group.right_descents(a2_group.from_word((1, 2))) == frozenset({2})

    def test_descent_set_matches_lengths(self, b3_group):
        for w in b3_group.elements:
            for i in b3_group.datum.simple_indices:
                longer = b3_group.left_multiply_simple(i, w).length > w.length
                assert (i in b3_group.descent_set(w)) == longer


class TestParabolics:

    def test_parabolic_roots_of_a2(self, a2_group):
        roots = parabolic_roots(a2_group.datum, [1])
        assert roots.positive == (0,)
        assert roots.negative == (3,)
        assert parabolic_roots(a2_group.datum, []).roots == ()

    @pytest.mark.parametrize("label", ["A3", "B3", "G2"])
    def test_min_coset_representatives_count(self, label):
        group = weyl_group(parse_datum_descriptor(label))
        for size in range(group.rank + 1):
            for subset in combinations(group.datum.simple_indices, size):
                reps = min_coset_reps(group.datum, subset)
                assert len(reps) * group.order_formula(subset) == group.order
                assert len(group.parabolic_subgroup(subset)) == group.order_formula(subset)

    @pytest.mark.parametrize("label", ["A3", "B3", "C3", "G2"])
    def test_min_coset_representatives_are_shortest_in_their_cosets(self, label):
        group = weyl_group(parse_datum_descriptor(label))
        for size in range(1, group.rank + 1):
            for subset in combinations(group.datum.simple_indices, size):
                parabolic = group.parabolic_subgroup(subset)
                reps = set(min_coset_reps(group.datum, subset))
                shortest = set()
                for w in group.elements:
                    coset = [group.multiply(u, w) for u in parabolic]
                    lengths = sorted(x.length for x in coset)
                    assert lengths[0] < lengths[1]
                    shortest.add(min(coset, key=lambda x: x.length))
                assert reps == shortest

    @pytest.mark.parametrize("label", ["A3", "B3", "G2"])
    def test_min_coset_representatives_keep_parabolic_roots_positive(self, label):
        group = weyl_group(parse_datum_descriptor(label))
        n_pos = group.num_positive
        for size in range(group.rank + 1):
            for subset in combinations(group.datum.simple_indices, size):
                positive = group.parabolic_roots(subset).positive
                expected = [w for w in group.elements if all(w.inverse_perm[k] < n_pos for k in positive)]
                assert list(min_coset_reps(group.datum, subset)) == expected

    def test_longest_element_of_parabolic(self, b3_group):
        w0_j = b3_group.longest_element([2, 3])
        assert w0_j.length == 4
        assert set(w0_j.word) <= {2, 3}

    def test_subset_outside_i0(self, a2_group):
        with pytest.raises(RootDatumError):
            a2_group.parabolic_roots([3])


class TestActions:

    def test_cochar_action_matches_reflections(self, b3_group):
        datum = b3_group.datum
        y = (1, -2, 3)
        for i in datum.simple_indices:
            assert b3_group.act_on_cochar(b3_group.simple_reflection(i), y) == datum.reflect_cochar(i, y)

    def test_cochar_action_is_a_group_action(self, a2_group):
        y = (2, -1)
        for a in a2_group.elements:
            for b in a2_group.elements:
                lhs = a2_group.act_on_cochar(a2_group.multiply(a, b), y)
                rhs = a2_group.act_on_cochar(a, a2_group.act_on_cochar(b, y))
                assert lhs == rhs

    def test_root_action_matches_permutation(self, b3_group):
        datum = b3_group.datum
        for w in b3_group.elements[:20]:
            for k, root in enumerate(datum.roots):
                assert b3_group.act_on_root(w, root) == datum.roots[b3_group.act_on_root_index(w, k)]

    def test_pairing_is_invariant(self, a2_group):
        datum = a2_group.datum
        y, x = (3, 1), (1, 0)
        for w in a2_group.elements:
            assert datum.pairing(a2_group.act_on_cochar(w, y), a2_group.act_on_root(w, x)) == datum.pairing(y, x)

    def test_dominant_conjugate(self, b3_group):
        w, dominant = b3_group.dominant_conjugate((-1, 0, 1))
        assert b3_group.datum.is_dominant(dominant)
        assert b3_group.act_on_cochar(w, (-1, 0, 1)) == dominant

    def test_inversions_count_length(self, b3_group):
        for w in b3_group.elements:
            assert len(b3_group.inversion_indices(w)) == w.length

    def test_to_dict(self, a2_group):
        dump = a2_group.to_dict()
        assert dump["order"] == 6
        assert dump["elements_by_length"]["3"] == ["s1 s2 s1"]
