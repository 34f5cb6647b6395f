import pytest

from core.base import NonRepresentation
from core.ratlin import ComplexSlice, SparseMatrix
from core.symseq import (
    GradedSpace, GroupAction, SymSequence, aux_inclusion, build_aux, compose_perm, decompose,
    equivariant_hom_dim, format_decomposition, homology_action, induce, invert_perm,
    irreducible_character, perm_sign, permutation_action, reduced_word, restrict, tensor_components,
    transposition, trivial_component,
)


def test_permutation_basics():
    p = (2, 0, 1)
    assert compose_perm(p, invert_perm(p)) == (0, 1, 2)
    assert perm_sign(p) == 1
    assert perm_sign(transposition(3, 1)) == -1


def test_reduced_word_rebuilds_the_permutation():
    for p in [(1, 2, 0), (2, 1, 0), (0, 2, 1, 3), (3, 2, 1, 0)]:
        q = tuple(range(len(p)))
        for i in reduced_word(p):
            q = compose_perm(q, transposition(len(p), i))
        assert q == p


def test_irreducible_characters():
    assert irreducible_character((2, 1), (1, 1, 1)) == 2
    assert irreducible_character((2, 1), (3,)) == -1
    assert irreducible_character((1, 1, 1), (2, 1)) == -1


def test_repeated_label_rejected():
    with pytest.raises(ValueError):
        GradedSpace({0: ['a'], 1: ['a']})


def test_permutation_representation_of_s3():
    points = [0, 1, 2]
    action = permutation_action(3, points, lambda s, x: {s[x]: 1})
    assert format_decomposition(decompose(action, 0, 3)) == {'V_3': 1, 'V_21': 1}


def test_broken_action_is_not_a_representation():
    action = GroupAction(2, {0: {0: SparseMatrix.from_rows([[2]])}})
    with pytest.raises(NonRepresentation):
        action.check_coxeter([0], {0: 1})


def test_empty_degrees_need_no_matrices():
    swap = SparseMatrix.from_rows([[0, 1], [1, 0]])
    action = GroupAction(2, {0: {0: swap}})
    action.check_coxeter([0, 1], {0: 2, 1: 0})
    assert action.generator(0, 1).rows == 0
    assert action.matrix((1, 0), 1).rows == 0
    with pytest.raises(NonRepresentation):
        action.check_coxeter([1], {1: 3})


def test_aux_sequences():
    x = build_aux('X', 3)
    x.check()
    assert x.space.dims() == {-1: 3, 0: 1}
    y = build_aux('Y', 3)
    y.check()
    assert format_decomposition(decompose(y.action, -1, 2)) == {'V_21': 1}
    inclusion = aux_inclusion(3)
    assert (x.d(-1) @ inclusion).is_zero()
    with pytest.raises(ValueError):
        build_aux('X', 1)


def test_homology_of_x_is_the_standard_representation():
    x = build_aux('X', 3)
    c = ComplexSlice(x.space.basis, x.differential)
    induced, dim = homology_action(c, x.action, -1)
    assert dim == 2
    assert decompose(induced, -1, dim) == {(2, 1): 1}


def test_equivariant_hom_dims():
    y = build_aux('Y', 3)
    xprime = build_aux('Xprime', 3)
    assert equivariant_hom_dim(y, y, -1, -1) == 1
    assert equivariant_hom_dim(xprime, xprime, -1, -1) == 2


def test_tensor_product_is_a_complex():
    x = build_aux('X', 3)
    t = tensor_components(x, x)
    t.check()
    assert t.space.dims() == {-2: 9, -1: 6, 0: 1}


def test_induce_then_restrict():
    a = SymSequence({1: trivial_component(1)})
    b = induce(a)
    assert b.cyclic
    component = b[2]
    assert component.space.dims() == {0: 2}
    assert format_decomposition(decompose(component.action, 0, 2)) == {'V_2': 1, 'V_11': 1}
    assert restrict(b).dims() == {1: {0: 2}}
