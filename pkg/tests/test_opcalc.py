import pytest

from core.base import TruncationWindow, UnknownName
from core.ratlin import ComplexSlice, SparseMatrix, homology_dims
from core.symseq import decompose, format_decomposition, homology_action
from opcalc import (
    ForgetCyclic, PointedModule, bar, builtin, cobar_bar_counit_check, comparison_zigzag, counit_eta,
    functor_G, g_of_cobar, induced_cyclic, presentation_counit,
)
from opcalc.functor_g import COBAR_UNIT, with_unit
from opcalc.quasiiso import check_quasi_iso, identity_map


@pytest.mark.parametrize("name", ['com_cyc', 'ass_cyc', 'lie'])
def test_builtin_axioms(name, window):
    p = builtin(name, window)
    assert p.cyclic
    assert p.check_axioms() == []
    assert p.check_cyclic_axioms() == []


def test_builtin_dims(window):
    assert builtin('com_cyc', window).dims() == {1: 1, 2: 1, 3: 1}
    assert builtin('ass_cyc', window).dims() == {1: 1, 2: 2, 3: 6}
    assert builtin('lie', window).dims() == {1: 1, 2: 1, 3: 2}


def test_unknown_builtin():
    with pytest.raises(UnknownName):
        builtin('pre_lie')


def test_forgetful_functor_fixes_the_output(window):
    f = ForgetCyclic(builtin('ass_cyc', window))
    assert not f.cyclic
    with pytest.raises(ValueError):
        f.permute(('ass', (1, 2)), (1, 0, 2))


def test_bar_of_com_is_lie(window):
    complex_ = bar(builtin('com_cyc', window), 'operad', w=window)
    assert complex_.homology(2) == {0: 1}
    assert complex_.homology(3) == {-1: 2}
    component = complex_.component(3)
    component.check()
    induced, dim = homology_action(complex_.slice(3), complex_.action(3), -1)
    assert format_decomposition(decompose(induced, -1, dim)) == {'V_21': 1}


def test_cyclic_bar_of_com(window):
    complex_ = bar(builtin('com_cyc', window), 'cyclic', w=window)
    assert complex_.homology(4) == {-1: 2}
    induced, dim = homology_action(complex_.slice(4), complex_.action(4), -1)
    assert format_decomposition(decompose(induced, -1, dim)) == {'V_22': 1}


def test_bar_of_ass(window):
    complex_ = bar(builtin('ass_cyc', window), 'operad', w=window)
    assert complex_.homology(3) == {-1: 6}


def test_bar_argument_errors(window):
    with pytest.raises(ValueError):
        bar(builtin('com_cyc', window), 'module')
    with pytest.raises(ValueError):
        bar(ForgetCyclic(builtin('com_cyc', window)), 'cyclic')


def test_identity_is_a_quasi_isomorphism(window):
    complex_ = bar(builtin('com_cyc', window), 'operad', w=window)
    report = check_quasi_iso(identity_map("id", {3: complex_.slice(3)}), window)
    assert report.iso
    assert report.failures() == []


@pytest.mark.parametrize("variant", ['operad', 'cyclic'])
def test_cobar_bar_counit(variant, window):
    report = cobar_bar_counit_check(builtin('com_cyc', window), variant, window)
    assert report.iso


def test_comparison_zigzag(window):
    _, _, report = comparison_zigzag(builtin('com_cyc', window), window)
    assert all(report.identities.values())
    assert report.f.iso and report.incl.iso and report.graded.iso
    assert all(report.homology_ratio.values())


def test_counit_factorization(window):
    report = counit_eta(builtin('com_cyc', window), window)
    assert report.ok
    assert report.factorization and report.r_kills_shifted and report.l_extends_f


def test_g_of_cobar_matches_g_of_the_free_pair(window):
    result = g_of_cobar(builtin('com_cyc', window), window)
    assert result.matches
    assert result.dims[2] == {0: 1}
    # corollas: four Ind labels and one module label; two vertices: 3 pairings of 4 x 4 labels
    assert result.dims[4][0] == 53


def test_unit_joins_degree_zero():
    c = ComplexSlice({-1: ['a'], 0: ['b'], 1: ['c']}, {-1: SparseMatrix.from_rows([[1]])})
    assert homology_dims(c)[0] == 0
    extended = with_unit(c)
    assert extended.spaces[0] == ['b', COBAR_UNIT]
    assert homology_dims(extended) == {-1: 0, 0: 1, 1: 1}


@pytest.mark.parametrize("name,variant,r", [
    ('ass_cyc', 'operad', 3), ('ass_cyc', 'cyclic', 4), ('com_cyc', 'cyclic', 4), ('lie', 'operad', 3),
    ('bv_cyc', 'operad', 2), ('bv_cyc', 'operad', 3), ('bv_cyc', 'cyclic', 3),
])
def test_bar_components_are_representations(name, variant, r, window):
    bar(builtin(name, window), variant, w=window).component(r).check()


def test_g_of_pointed_module_recovers_the_operad(small_window):
    p = builtin('com_cyc', small_window)
    counit = presentation_counit(functor_G(p, PointedModule(p), small_window), p)
    assert counit.kills_ideal
    assert all(counit.iso.values())
    assert presentation_counit(induced_cyclic(p, small_window), p).kills_ideal


def test_pointed_module_needs_a_cyclic_operad(window):
    with pytest.raises(ValueError):
        PointedModule(ForgetCyclic(builtin('com_cyc', window)))
