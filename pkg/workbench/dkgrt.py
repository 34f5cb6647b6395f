"""
Drinfeld-Kohno and GRT suites.
"""

from fractions import Fraction
from math import comb, factorial
from typing import List, Optional

from core.base import check_logger, vec_add
from core.symseq import decompose, format_decomposition
from dkgrt import (
    DKAlgebra, GrtCandidate, LiePoly, ce_quasi_iso, coxeter_residuals, enumerate_pap, format_pap,
    grt_check, grt_inverse, grt_multiply, grt_solve, lie_action, pap_action, parcd_cyclic_check,
    parse_pap, presentation_dims_agree,
)
from dkgrt.dk import generator_map
from dkgrt.grt import MAX_SOLVE_WEIGHT, GrtSolution
from dkgrt.pap import associator_objects_check, restriction_is_relabeling

from .base import CheckResult

SAMPLED_CANDIDATES = 3
MAX_DK_LEGS = 4
MAX_PAP_ARITY = 4
MAX_CE_ARITY = 3


def pap_count(r: int) -> int:
    """r! orderings times the Catalan number of bracketings."""
    return factorial(r) * comb(2 * r - 2, r - 1) // r


class DKMixin:
    """
    Suites dk_cyclic, grt, prop52, pap and ce.
    Requires: self.window, self.config (phi_file), self.run_check(), self.rng()
    """

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self._grt_solution: Optional[GrtSolution] = None

    @property
    def solve_weight(self) -> int:
        return max(1, min(self.window.max_weight, MAX_SOLVE_WEIGHT))

    def grt_solution(self) -> GrtSolution:
        if self._grt_solution is None:
            self._grt_solution = grt_solve(self.solve_weight)
        return self._grt_solution

    def candidate(self) -> GrtCandidate:
        """The --phi-file candidate, or the identity associator."""
        if self.config.phi_file:
            return GrtCandidate.load(self.config.phi_file)
        return GrtCandidate.identity(max(1, self.window.max_weight))

    def sampled_candidates(self, suite: str) -> List[GrtCandidate]:
        """exp of seeded random combinations of the solved grt basis."""
        solution = self.grt_solution()
        basis = [psi for w in sorted(solution.basis) for psi in solution.basis[w]]
        if not basis:
            return []
        rng = self.rng(suite)
        out = []
        for _ in range(SAMPLED_CANDIDATES):
            coeffs = {}
            for psi in basis:
                c = Fraction(rng.randint(-3, 3), rng.randint(1, 3))
                vec_add(coeffs, psi.coeffs, c)
            out.append(GrtCandidate.from_lie(LiePoly(coeffs), solution.max_weight))
        return out

    # ==================== dk_cyclic ====================

    def verify_dk_cyclic(self) -> List[CheckResult]:
        results = []
        weight = max(1, self.window.max_weight)
        top = min(MAX_DK_LEGS, self.window.max_arity + 1)
        for r in range(2, top + 1):
            results.append(self.run_check(f"dk_cyclic/ft{r}/relations", "relation images under the cyclic map vanish",
                                          lambda r=r: self._relation_images(r, weight)))
            results.append(self.run_check(f"dk_cyclic/ft{r}/coxeter", "Coxeter relations, τ² = id",
                                          lambda r=r: self._coxeter(r, weight)))
            results.append(self.run_check(f"dk_cyclic/ft{r}/presentations", "ft(r) and ft((r + 1)) agree by weight",
                                          lambda r=r: self._presentations(r, weight)))
        results.append(self.run_check("dk_cyclic/ft3/weight1", "ft((3)) in weight 1 is Q³ = V_3 ⊕ V_21",
                                      self._ft3_weight_one))
        return results

    @staticmethod
    def _relation_images(r: int, weight: int):
        algebra = DKAlgebra(r, framed=True, max_weight=weight)
        failing = []
        for i in range(r):
            residuals = generator_map(algebra, i).relation_residuals()
            failing += [f"s{i}: {algebra.format(res)}" for res in residuals if res]
        return not failing, f"{algebra.name}: {len(failing)} nonzero relation images", {'failing': failing[:20]}

    @staticmethod
    def _coxeter(r: int, weight: int):
        algebra = DKAlgebra(r, framed=True, max_weight=weight)
        table = {}
        for w in range(1, weight + 1):
            table[w] = coxeter_residuals(algebra, w)
        ok = all(all(row.values()) for row in table.values())
        return ok, f"{algebra.name}: Coxeter relations up to weight {weight}", {'relations': table}

    @staticmethod
    def _presentations(r: int, weight: int):
        agree = presentation_dims_agree(r, weight)
        return all(agree.values()), f"ft({r}) against ft(({r + 1}))", {'agree': agree}

    @staticmethod
    def _ft3_weight_one():
        algebra = DKAlgebra(2, framed=True, cyclic=True, max_weight=1)
        dim = len(algebra.lie_basis(1))
        parts = format_decomposition(decompose(lie_action(algebra, 1, cyclic=True), 1, dim))
        ok = dim == 3 and parts == {'V_3': 1, 'V_21': 1}
        return ok, f"dim {dim}, {parts}", {'dimension': dim, 'decomposition': parts}

    # ==================== grt ====================

    def verify_grt(self) -> List[CheckResult]:
        results = [
            self.run_check("grt/candidate/residuals", "duality, hexagon and pentagon",
                           lambda: self._residuals(self.candidate())),
            self.run_check("grt/solve/oracle", "grt dims agree with the brute-force count", self._solve),
            self.run_check("grt/group-law", "products and inverses of solutions stay in GRT", self._group_law),
        ]
        return results

    @staticmethod
    def _residuals(candidate: GrtCandidate):
        report = grt_check(candidate)
        return report.ok, f"residuals up to weight {report.max_weight}: {report.failing_weights() or 'none'}", \
            report.as_dict()

    def _solve(self):
        solution = self.grt_solution()
        return solution.oracle_agrees, f"dims {solution.dims}, oracle {solution.oracle_dims}", \
            {'dims': solution.dims, 'oracle_dims': solution.oracle_dims}

    def _group_law(self):
        samples = self.grt_solution().candidates() + self.sampled_candidates("grt")
        failing = []
        for k, a in enumerate(samples):
            b = samples[(k + 1) % len(samples)]
            if not grt_check(grt_multiply(a, b)).ok:
                failing.append(f"product {k}·{(k + 1) % len(samples)}")
            if not grt_check(grt_inverse(a)).ok:
                failing.append(f"inverse {k}")
        return not failing, f"{len(samples)} candidates, {len(failing)} failures", {'failing': failing}

    # ==================== prop52 ====================

    def verify_prop52(self) -> List[CheckResult]:
        candidates = [('given', self.candidate())]
        candidates += [(f"basis{k}", c) for k, c in enumerate(self.grt_solution().candidates())]
        candidates += [(f"sample{k}", c) for k, c in enumerate(self.sampled_candidates("prop52"))]
        return [self.run_check(f"prop52/{label}/cyclic", "τ sends Φ(t23, t13)⁻¹ to Φ(t12, t23)",
                               lambda c=c: self._cyclic_invariance(c))
                for label, c in candidates]

    @staticmethod
    def _cyclic_invariance(candidate: GrtCandidate):
        weight = min(candidate.max_weight, 3)
        residuals = grt_check(candidate, weight)
        if not residuals.ok:
            check_logger.debug(f"candidate outside GRT at weight {weight}, cyclic check not applicable")
            return True, "not a GRT element; nothing to check", {'grt': residuals.as_dict()}
        report = parcd_cyclic_check(candidate, weight)
        failing = [s.name for s in report.steps if not s.ok]
        return report.ok and not failing, f"{len(report.steps)} steps, failing {failing or 'none'}", report.as_dict()

    # ==================== pap ====================

    def verify_pap(self) -> List[CheckResult]:
        results = []
        for r in range(2, min(MAX_PAP_ARITY, self.window.max_arity + 1) + 1):
            results.append(self.run_check(f"pap/{r}/objects", "count, round trip and cyclic action",
                                          lambda r=r: self._pap_objects(r)))
        results.append(self.run_check("pap/associator", "τ on the associator objects",
                                      lambda: (all(associator_objects_check().values()), "source and target",
                                               associator_objects_check())))
        return results

    @staticmethod
    def _pap_objects(r: int):
        trees = enumerate_pap(r)
        round_trip = all(parse_pap(format_pap(t)) == t for t in trees)
        action = pap_action(r)
        action.check_coxeter([0], {0: len(trees)})
        relabeling = restriction_is_relabeling(r)
        ok = len(trees) == pap_count(r) and round_trip and relabeling
        return ok, f"{len(trees)} objects", {'count': len(trees), 'expected': pap_count(r),
                                             'round_trip': round_trip, 'restriction_is_relabeling': relabeling}

    # ==================== ce ====================

    def verify_ce(self) -> List[CheckResult]:
        results = []
        for r in range(1, min(MAX_CE_ARITY, self.window.max_arity) + 1):
            results.append(self.run_check(f"ce/ft{r}/quasi-iso", "C(ft(r)) -> BV^c(r) is a quasi-isomorphism",
                                          lambda r=r: self._ce(r)))
        return results

    def _ce(self, r: int):
        report = ce_quasi_iso(r, self.window)
        return report.iso, f"{report.name}: {len(report.failures())} failing slices", report.as_dict()
