from fractions import Fraction

import pytest

from core.base import CostGuard, TruncationWindow, WindowOverflow
from bvcalc import (
    BVComponent, BVOperad, bar_bv_homology, biderivation_space, bv_component, bv_cobar,
    comodule_endo_space, delta, e1_page, e_basis, e_element, module_ratio_holds, monomial_text,
    parse_monomial, straighten, symmetry_facts, transport, xi_derivation,
)


# ==================== Arnold basis ====================

def test_parse_and_print_monomials():
    assert parse_monomial("w12*th3") == [(1, 2), (3, 3)]
    assert parse_monomial("w21") == [(1, 2)]
    assert parse_monomial("1") == []
    assert monomial_text(()) == "1"
    assert monomial_text(((1, 2), (3, 3))) == "w12*th3"
    for bad in ("x1", "w11", "th"):
        with pytest.raises(ValueError):
            parse_monomial(bad)


def test_straightening_uses_the_arnold_relation():
    expected = {((1, 2), (2, 3)): 1, ((1, 2), (1, 3)): -1}
    assert straighten([(1, 3), (2, 3)]) == expected
    assert straighten([(1, 3), (2, 3)], last=True) == expected
    assert straighten([(2, 3), (1, 3)]) == {m: -c for m, c in expected.items()}
    assert straighten([(1, 2), (1, 2)]) == {}


def test_bv_two_is_the_cube():
    assert bv_component(2).dims() == {0: 1, 1: 3, 2: 3, 3: 1}


@pytest.mark.parametrize("r", [1, 2, 3])
@pytest.mark.parametrize("framed", [True, False])
def test_straightened_counts(r, framed):
    component = BVComponent(r, framed)
    assert component.dims() == component.poincare() == component.independent_dims()


def test_unframed_three():
    assert BVComponent(3, framed=False).dims() == {0: 1, 1: 3, 2: 2}


@pytest.mark.parametrize("r", [2, 3])
def test_cocomposition_structure(r):
    component = bv_component(r)
    assert component.check_confluence() == []
    assert component.check_algebra_map() == []
    assert component.check_coassociativity() == []


def test_component_bounds(small_window):
    with pytest.raises(WindowOverflow):
        bv_component(3, window=small_window)
    with pytest.raises(ValueError):
        BVComponent(0)
    with pytest.raises(ValueError):
        bv_component(2).cocompose(((1, 2),), 2, 2)


# ==================== Operad side ====================

def test_bv_operad_axioms(small_window):
    for cyclic in (False, True):
        operad = BVOperad(small_window, cyclic=cyclic)
        assert operad.check_axioms() == []
        assert operad.check_cyclic_axioms() == []


def test_cyclic_component_is_a_representation(window):
    component = BVOperad(window, cyclic=True).component(2)
    component.check()
    assert sum(component.space.dims().values()) == 8


def test_transport_is_an_involution():
    for m in bv_component(2).basis():
        twice = {}
        for m2, c in transport(m, 2).items():
            for m3, c3 in transport(m2, 2).items():
                twice[m3] = twice.get(m3, 0) + c * c3
        assert {k: v for k, v in twice.items() if v} == {m: 1}


def test_degree_one_basis():
    assert len(e_basis(2)) == 3
    assert e_element(2, 1, 2) == {('bv', 2, ((1, 2),)): Fraction(-1, 2)}
    with pytest.raises(ValueError):
        e_element(2, 2, 1)


def test_symmetry_facts(window):
    facts = symmetry_facts(window)
    assert facts == {'delta_composed_with_product': True, 'transposition_image': True, 'not_invariant': True}


# ==================== Rigidity ====================

def test_comodule_endomorphisms_are_trivial(window):
    solution = comodule_endo_space(window)
    assert solution.is_identity
    assert solution.dimension == 0


@pytest.mark.parametrize("degree", [0, -1])
def test_low_degree_biderivations_vanish(degree, window):
    solution = biderivation_space(degree, window)
    assert solution.is_zero
    assert solution.as_dict()['consistent']


# ==================== Bar homology ====================

def test_bar_homology_two_legs():
    found = bar_bv_homology(2, 'operad')
    assert found.dims == {1: 1, 3: 1}


def test_bar_homology_three_legs():
    operad_side = bar_bv_homology(3, 'operad')
    module_side = bar_bv_homology(3, 'module', jobs=2)
    assert operad_side.dims == {0: 1}
    assert operad_side.decompositions[0] == {'V_3': 1}
    assert module_side.dims == {1: 2}
    assert module_side.decompositions[1] == {'V_21': 1}
    assert module_ratio_holds(operad_side, module_side)
    assert operad_side.euler_characteristic == 1


@pytest.mark.slow
def test_bar_homology_four_legs():
    found = bar_bv_homology(4, 'operad', jobs=2)
    assert found.dims == {1: 2, 2: 1}
    assert found.euler_characteristic == -1


def test_bar_homology_guards():
    with pytest.raises(CostGuard):
        bar_bv_homology(5)
    with pytest.raises(ValueError):
        bar_bv_homology(1)
    with pytest.raises(ValueError):
        bv_cobar('cyclic', TruncationWindow())


def test_e1_page():
    assert [(e.weight, e.degree, e.dimension) for e in e1_page(2)] == [(1, -1, 1)]
    assert [(e.weight, e.degree, e.dimension) for e in e1_page(3)] == [(1, 0, 1)]


# ==================== ξ ====================

def test_xi_is_a_derivation(window):
    report = xi_derivation(window, max_arity=2)
    assert report.unit_value == {}
    assert report.biderivation_failures == []
    assert report.equivariance_failures == []
    assert abs(report.factor) == 2
    assert set(report.module_value) == {delta()}
    assert report.ok
