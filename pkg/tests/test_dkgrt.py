from fractions import Fraction
from math import comb, factorial

import pytest

from core.base import ConfigError, CostGuard, NotGroupLike
from core.symseq import decompose, format_decomposition
from dkgrt import (
    AssocSeries, DKAlgebra, GrtCandidate, LiePoly, ce_quasi_iso, coxeter_residuals, enumerate_pap,
    format_pap, grt_check, grt_inverse, grt_multiply, grt_solve, is_lie, lie_action, lyndon_words,
    pap_action, parcd_cyclic_check, parse_pap, pbw_dims, presentation_dims_agree,
)
from dkgrt.dk import generator_map
from dkgrt.pap import associator_objects_check, restriction_is_relabeling


# ==================== Series ====================

def test_lyndon_words_follow_the_witt_formula():
    assert lyndon_words(2, 3) == [(0, 0, 1), (0, 1, 1)]
    assert [len(lyndon_words(2, n)) for n in range(1, 6)] == [2, 1, 2, 3, 6]


def test_exp_log_and_inverse():
    a = AssocSeries({(0,): 1, (1,): Fraction(1, 2)}, max_weight=3)
    assert a.exp().log() == a
    s = a.exp()
    assert s * s.inverse() == AssocSeries.one(3)
    assert s.is_group_like()
    with pytest.raises(ValueError):
        s.exp()


def test_group_likeness():
    not_group_like = AssocSeries({(): 1, (0, 1): 1}, max_weight=2)
    assert not not_group_like.is_group_like()
    with pytest.raises(NotGroupLike):
        AssocSeries({(): 2}, max_weight=2).require_group_like()


def test_lie_polynomials():
    bracket = LiePoly({(0, 1): 1})
    assert bracket.expand() == {(0, 1): 1, (1, 0): -1}
    assert is_lie(bracket.expand())
    assert not is_lie({(0, 1): Fraction(1)})
    assert LiePoly.from_words({(0, 1): Fraction(2), (1, 0): Fraction(-2)}).coeffs == {(0, 1): 2}
    with pytest.raises(ValueError):
        LiePoly({(1, 0): 1})
    with pytest.raises(ValueError):
        LiePoly.from_words({(0, 1): Fraction(1)})


# ==================== Drinfeld-Kohno algebras ====================

def test_t3_dims():
    t3 = DKAlgebra(3, max_weight=3)
    assert t3.lie_dims() == {1: 3, 2: 1, 3: 2}
    assert t3.u_dims() == pbw_dims(t3.lie_dims(), 3)
    assert t3.u_dims() == {1: 3, 2: 7, 3: 15}


def test_algebra_arguments():
    with pytest.raises(ValueError):
        DKAlgebra(1)
    with pytest.raises(ValueError):
        DKAlgebra(3, cyclic=True)
    assert DKAlgebra(2, framed=True, cyclic=True).name == "ft((3))"


@pytest.mark.parametrize("r", [2, 3])
def test_cyclic_generators_respect_the_relations(r):
    algebra = DKAlgebra(r, framed=True, max_weight=2)
    for i in range(r):
        assert all(not res for res in generator_map(algebra, i).relation_residuals())
    for w in (1, 2):
        assert all(coxeter_residuals(algebra, w).values())


def test_two_presentations_of_ft_agree():
    assert all(presentation_dims_agree(3, 2).values())


def test_ft3_weight_one_is_three_dimensional():
    algebra = DKAlgebra(2, framed=True, cyclic=True, max_weight=1)
    assert len(algebra.lie_basis(1)) == 3
    parts = format_decomposition(decompose(lie_action(algebra, 1, cyclic=True), 1, 3))
    assert parts == {'V_3': 1, 'V_21': 1}


# ==================== GRT ====================

def test_identity_is_in_grt():
    report = grt_check(GrtCandidate.identity(3))
    assert report.ok
    assert report.failing_weights() == {}


def test_bracket_is_not_in_grt():
    report = grt_check(GrtCandidate.from_lie(LiePoly({(0, 1): 1}), 3))
    assert not report.ok
    assert 2 in report.failing_weights()['hexagon']


def test_grt_solve_low_weights():
    solution = grt_solve(3)
    assert solution.dims == {1: 0, 2: 0, 3: 1}
    assert solution.oracle_agrees
    for candidate in solution.candidates():
        assert grt_check(candidate).ok
    with pytest.raises(CostGuard):
        grt_solve(5)


def test_group_law():
    (candidate,) = grt_solve(3).candidates()
    assert grt_check(grt_multiply(candidate, candidate)).ok
    inverse = grt_inverse(candidate)
    assert grt_check(inverse).ok
    assert grt_multiply(candidate, inverse).phi == AssocSeries.one(3)
    assert grt_multiply(GrtCandidate.identity(3), candidate).phi == candidate.phi


def test_candidate_serialization():
    (candidate,) = grt_solve(3).candidates()
    again = GrtCandidate.from_dict(candidate.as_dict())
    assert again.phi == candidate.phi and again.lam == candidate.lam
    with pytest.raises(ConfigError):
        GrtCandidate.from_dict({'phi': []})
    with pytest.raises(ValueError):
        GrtCandidate(Fraction(0), AssocSeries.one(2))


def test_candidate_file(tmp_path):
    path = tmp_path / "phi.json"
    GrtCandidate.identity(2).save(path)
    assert GrtCandidate.load(path).phi == AssocSeries.one(2)
    with pytest.raises(ConfigError):
        GrtCandidate.load(tmp_path / "missing.json")


def test_cyclic_invariance_of_the_associator():
    assert parcd_cyclic_check(GrtCandidate.identity(3), 3).ok
    for candidate in grt_solve(3).candidates():
        report = parcd_cyclic_check(candidate, 3)
        assert report.ok
        assert all(step.ok for step in report.steps)


# ==================== Parenthesized permutations ====================

@pytest.mark.parametrize("r", [2, 3, 4])
def test_pap_objects(r):
    trees = enumerate_pap(r)
    assert len(trees) == factorial(r) * comb(2 * r - 2, r - 1) // r
    assert all(parse_pap(format_pap(t)) == t for t in trees)
    pap_action(r).check_coxeter([0], {0: len(trees)})


def test_pap_syntax():
    assert format_pap(((1, 2), 3)) == "(12)3"
    assert parse_pap("1(4((35)6))") == (1, (4, ((3, 5), 6)))
    for bad in ("(12", "(1)2", "(11)"):
        with pytest.raises(ValueError):
            parse_pap(bad)


def test_pap_cyclic_action():
    assert restriction_is_relabeling(3)
    assert all(associator_objects_check().values())


# ==================== Chevalley-Eilenberg ====================

@pytest.mark.parametrize("r", [1, 2])
def test_ce_map_is_a_quasi_isomorphism(r, window):
    assert ce_quasi_iso(r, window).iso
