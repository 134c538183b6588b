"""
Tests for the affine Hecke algebra, module validation and module traces
"""

import sys
from pathlib import Path

import numpy as np
import pytest

# Add project root to path for imports
sys.path.insert(0, str(Path(__file__).parents[1]))

from src.affine_weyl import affine_weyl_group
from src.errors import DatumMismatchError, ModuleValidationError, NotDominantError, ParseError
from src.exact_ring import ONE, Q, LaurentPoly
from src.hecke_algebra import (
    HeckeAlgebra,
    HeckeElt,
    char_thm43,
    char_thm43_volume_form,
    direct_sum,
    hecke_mul,
    load_module,
    matmul,
    matrices_equal,
    represent,
    steinberg_module,
    to_matrix,
    trace,
    trace_T,
    trivial_module,
)
from src.root_datum import parse_datum_descriptor


def algebra(descriptor: str) -> HeckeAlgebra:
    return HeckeAlgebra(affine_weyl_group(parse_datum_descriptor(descriptor)))


@pytest.fixture
def a1_two_dim():
    """T_s1 = diag(-1, q) and T_s0 = diag(q, -1) over the simply connected A1"""
    datum = parse_datum_descriptor("A1")
    return load_module(datum, {"s0": [["q", 0], [0, -1]], "s1": [[-1, 0], [0, "q"]]}, name="two-dim")


@pytest.fixture
def a2_reflection():
    """Two-dimensional module of the simply connected A2 with non-commuting T_s1, T_s2; T_s0 acts as T_s1"""
    datum = parse_datum_descriptor("A2")
    t1 = [[-1, 0], [1, "q"]]
    t2 = [["q", "q"], [0, -1]]
    return load_module(datum, {"s0": t1, "s1": t1, "s2": t2}, name="reflection")


class TestHeckeProducts:

    @pytest.mark.parametrize("descriptor", ["A1", "A1:adjoint", "A2", "B2", "G2"])
    def test_quadratic_relation(self, descriptor):
        h = algebra(descriptor)
        one = h.one()
        for i in h.group.simple_indices:
            t = h.generator(i)
            assert t * t == one.scale(Q) + t.scale(Q - 1)

    def test_length_additive_products(self):
        h = algebra("A2:adjoint")
        group = h.group
        rng = np.random.default_rng(2)
        checked = 0
        for _ in range(40):
            a, b = group.random_element(rng), group.random_element(rng)
            ab = group.multiply(a, b)
            if group.length(ab) == group.length(a) + group.length(b):
                assert h.basis(a) * h.basis(b) == h.basis(ab)
                checked += 1
        assert checked > 0

    def test_omega_multiplies_without_coefficients(self):
        h = algebra("A1:adjoint")
        omega = h.group.omega_elements[1]
        s0 = h.group.simple_reflection(0)
        assert h.basis(omega) * h.basis(s0) == h.basis(h.group.multiply(omega, s0))

    def test_associativity(self):
        h = algebra("B2")
        group = h.group
        rng = np.random.default_rng(8)
        for _ in range(5):
            a, b, c = (h.basis(group.random_element(rng, max_word_length=4)) for _ in range(3))
            assert (a * b) * c == a * (b * c)

    def test_non_additive_product_is_not_a_basis_element(self):
        h = algebra("A1")
        t1 = h.generator(1)
        assert t1 * t1 != h.one()
        assert hecke_mul(t1, t1).coefficient(h.group.identity) == Q

    def test_linear_structure(self):
        h = algebra("A1")
        t0, t1 = h.generator(0), h.generator(1)
        combined = t0.scale(2) + t1 - t1
        assert combined == 2 * t0
        assert (t0 - t0).is_zero()
        assert str(HeckeElt(h.group)) == "0"
        assert h.basis(h.group.identity).to_dict()[0]["text"] == "1"

    def test_elements_from_different_data_do_not_mix(self):
        with pytest.raises(DatumMismatchError):
            algebra("A1").one() + algebra("A2").one()


class TestBuiltinModules:

    @pytest.mark.parametrize("descriptor", ["A1", "A1:adjoint", "A2:adjoint", "B2:adjoint", "G2", "D4:adjoint"])
    def test_builtin_modules_validate(self, descriptor):
        datum = parse_datum_descriptor(descriptor)
        for module in (steinberg_module(datum), trivial_module(datum)):
            assert module.validated
            assert module.dim == 1

    def test_sign_on_omega(self):
        datum = parse_datum_descriptor("A1:adjoint")
        module = steinberg_module(datum)
        assert module.omega_matrix(1)[0, 0] == -1
        assert module.omega_matrix(0)[0, 0] == ONE

    def test_direct_sum(self):
        datum = parse_datum_descriptor("A2:adjoint")
        module = direct_sum(steinberg_module(datum), trivial_module(datum))
        assert module.dim == 2
        assert module.name == "sign+trivial"
        assert module.matrix("s1")[1, 1] == Q
        assert module.matrix("s1")[0, 1] == 0

    def test_direct_sum_needs_one_datum(self):
        with pytest.raises(DatumMismatchError):
            direct_sum(steinberg_module(parse_datum_descriptor("A1")), trivial_module(parse_datum_descriptor("A2")))

    def test_to_dict(self):
        dump = trivial_module(parse_datum_descriptor("A1")).to_dict()
        assert dump["dim"] == 1
        assert dump["generators"]["s0"] == [[[[2, "1"]]]]


class TestModuleValidation:

    def test_worked_two_dimensional_module(self, a1_two_dim):
        assert char_thm43((1,), a1_two_dim) == LaurentPoly({-2: -2})
        assert char_thm43((0,), a1_two_dim) == 2

    def test_swap_module_over_adjoint_a1(self):
        datum = parse_datum_descriptor("A1:adjoint")
        module = load_module(datum, {
            "s0": [["q", 0], [0, -1]],
            "s1": [[-1, 0], [0, "q"]],
            "omega_1": [[0, 1], [1, 0]],
        })
        assert module.dim == 2

    def test_omega_relation_failure(self):
        datum = parse_datum_descriptor("A1:adjoint")
        with pytest.raises(ModuleValidationError, match="omega_1"):
            load_module(datum, {
                "s0": [["q", 0], [0, -1]],
                "s1": [[-1, 0], [0, "q"]],
                "omega_1": [[1, 0], [0, 1]],
            })

    def test_quadratic_relation_failure(self):
        datum = parse_datum_descriptor("A1")
        with pytest.raises(ModuleValidationError) as excinfo:
            load_module(datum, {"s0": [[1]], "s1": [[-1]]})
        assert "T_s0" in excinfo.value.relation

    def test_braid_relation_failure(self):
        datum = parse_datum_descriptor("A2")
        with pytest.raises(ModuleValidationError, match="braid"):
            load_module(datum, {
                "s0": [[-1, 0], [0, -1]],
                "s1": [[-1, 0], [0, "q"]],
                "s2": [["q", 0], [0, -1]],
            })

    def test_missing_and_unknown_generators(self):
        datum = parse_datum_descriptor("A1")
        with pytest.raises(ModuleValidationError, match="missing"):
            load_module(datum, {"s0": [[-1]]})
        with pytest.raises(ModuleValidationError, match="unknown"):
            load_module(datum, {"s0": [[-1]], "s1": [[-1]], "omega_1": [[1]]})

    def test_mismatched_sizes(self):
        datum = parse_datum_descriptor("A1")
        with pytest.raises(ModuleValidationError):
            load_module(datum, {"s0": [[-1]], "s1": [[-1, 0], [0, -1]]})

    def test_ragged_matrix(self):
        with pytest.raises(ParseError):
            to_matrix([[1, 0], [0]])
        with pytest.raises(ParseError):
            to_matrix([])


class TestTraces:

    def test_trace_is_independent_of_the_reduced_word(self):
        datum = parse_datum_descriptor("A2:adjoint")
        module = direct_sum(steinberg_module(datum), trivial_module(datum))
        group = affine_weyl_group(datum)
        rng = np.random.default_rng(4)
        for _ in range(10):
            a = group.random_element(rng)
            assert trace_T(a, module, "first") == trace_T(a, module, "last")

    def test_trace_is_word_independent_on_a_non_commutative_module(self, a2_reflection):
        t1, t2 = a2_reflection.matrix("s1"), a2_reflection.matrix("s2")
        assert not matrices_equal(matmul(t1, t2), matmul(t2, t1))

        group = affine_weyl_group(a2_reflection.datum)
        rng = np.random.default_rng(12)
        elements = [group.translation((1, 1)), group.translation((2, 1))]
        elements += [group.random_element(rng) for _ in range(15)]
        distinct_words = 0
        for a in elements:
            first, last = group.decompose(a, "first"), group.decompose(a, "last")
            distinct_words += first.word != last.word
            assert trace_T(a, a2_reflection, "first") == trace_T(a, a2_reflection, "last")
            assert trace_T(a, a2_reflection) == trace(represent(HeckeElt.basis(group, a), a2_reflection))
        assert distinct_words > 0

    def test_non_commutative_module_is_multiplicative(self, a2_reflection):
        group = affine_weyl_group(a2_reflection.datum)
        h = HeckeAlgebra(group)
        rng = np.random.default_rng(8)
        for _ in range(6):
            a = h.basis(group.random_element(rng, max_word_length=4))
            b = h.basis(group.random_element(rng, max_word_length=4))
            product = matmul(represent(a, a2_reflection), represent(b, a2_reflection))
            assert matrices_equal(represent(a * b, a2_reflection), product)

    def test_swapping_omega_module_traces(self):
        datum = parse_datum_descriptor("A1:adjoint")
        module = load_module(datum, {
            "s0": [["q", 0], [0, -1]],
            "s1": [[-1, 0], [0, "q"]],
            "omega_1": [[0, 1], [1, 0]],
        }, name="swap")
        group = affine_weyl_group(datum)
        rng = np.random.default_rng(21)
        for _ in range(10):
            a = group.random_element(rng)
            assert trace_T(a, module, "first") == trace_T(a, module, "last")
        # t(1) is a length-one element times the swap, so its trace vanishes
        assert trace_T(group.translation((1,)), module) == 0

    def test_representation_is_multiplicative(self):
        datum = parse_datum_descriptor("B2:adjoint")
        module = direct_sum(steinberg_module(datum), trivial_module(datum))
        h = algebra("B2:adjoint")
        rng = np.random.default_rng(6)
        for _ in range(5):
            a = h.basis(h.group.random_element(rng, max_word_length=4))
            b = h.basis(h.group.random_element(rng, max_word_length=4))
            assert matrices_equal(represent(a * b, module), matmul(represent(a, module), represent(b, module)))

    def test_trace_helper(self):
        assert trace(to_matrix([["q", 1], [0, -1]])) == Q - 1

    def test_character_values(self):
        datum = parse_datum_descriptor("A1")
        assert char_thm43((1,), steinberg_module(datum)) == LaurentPoly.q_power(-2)
        assert char_thm43((1,), trivial_module(datum)) == ONE
        assert char_thm43_volume_form((2,), steinberg_module(datum)) == LaurentPoly.q_power(-4)

    def test_dimension_at_zero(self):
        datum = parse_datum_descriptor("B2:adjoint")
        module = direct_sum(steinberg_module(datum), trivial_module(datum))
        assert char_thm43((0, 0), module) == 2

    def test_non_dominant_is_rejected(self):
        datum = parse_datum_descriptor("A2")
        with pytest.raises(NotDominantError):
            char_thm43((1, 0), steinberg_module(datum))
        with pytest.raises(NotDominantError):
            char_thm43_volume_form((-1, -1), steinberg_module(datum))
