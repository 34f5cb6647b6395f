"""
BV suites: dimensions, rigidity, bar homology, the derivation ξ and the E¹ counts.
"""

from typing import Dict, List

from bvcalc import (
    bar_bv_homology, biderivation_space, bv_component, comodule_endo_space, e1_page,
    module_ratio_holds, symmetry_facts, xi_derivation,
)
from bvcalc.homology import MAX_BAR_ARITY

from .base import CheckResult

BV_DIMS_ARITY = 3

# (r, variant) -> {degree: (dimension, decomposition or None)}
EXPECTED_BAR_HOMOLOGY = {
    (2, 'operad'): {1: (1, None), 3: (1, None)},
    (3, 'operad'): {0: (1, {'V_3': 1})},
    (3, 'module'): {1: (2, {'V_21': 1})},
    (4, 'operad'): {1: (2, None), 2: (1, None)},
}

# r -> [(weight, degree, dimension)]
EXPECTED_E1 = {
    2: [(1, -1, 1)],
    3: [(1, 0, 1)],
}


class BVMixin:
    """
    Suites bv_dims, rigidity, bv_homology, xi and e1_page.
    Requires: self.window, self.config (jobs, unsafe), self.run_check()
    """

    # ==================== bv_dims ====================

    def verify_bv_dims(self) -> List[CheckResult]:
        results = [self.run_check("bv_dims/r2/poincare", "BV^c(2) has Poincaré coefficients (1, 3, 3, 1)",
                                  self._bv_two)]
        for r in range(1, min(BV_DIMS_ARITY, self.window.max_arity) + 1):
            for framed in (True, False):
                tag = "framed" if framed else "unframed"
                results.append(self.run_check(f"bv_dims/r{r}/{tag}", "straightening count equals the product formula",
                                              lambda r=r, framed=framed: self._counts(r, framed)))
            results.append(self.run_check(f"bv_dims/r{r}/coalgebra", "cocomposition is a coassociative algebra map",
                                          lambda r=r: self._structure(r)))
        return results

    def _bv_two(self):
        component = bv_component(2, True, self.window)
        dims = component.dims()
        coefficients = [dims.get(d, 0) for d in range(4)]
        return coefficients == [1, 3, 3, 1], f"{component.name}: {coefficients}", {'dims': dims}

    def _counts(self, r: int, framed: bool):
        component = bv_component(r, framed, self.window)
        dims, poincare, independent = component.dims(), component.poincare(), component.independent_dims()
        ok = dims == poincare == independent
        return ok, f"{component.name}: {dims}", {'straightening': dims, 'product_formula': poincare,
                                                 'arnold_quotient': independent}

    def _structure(self, r: int):
        component = bv_component(r, True, self.window)
        failures = component.check_confluence() + component.check_algebra_map() + component.check_coassociativity()
        return not failures, f"{component.name}: {len(failures)} failures", {'failures': failures[:20]}

    # ==================== rigidity ====================

    def verify_rigidity(self) -> List[CheckResult]:
        return [
            self.run_check("rigidity/endomorphisms", "comodule endomorphisms of BV^{c,mod} are the identity",
                           lambda: self._rigidity(comodule_endo_space(self.window), 'is_identity')),
            self.run_check("rigidity/biderivations-0", "degree 0 biderivations vanish",
                           lambda: self._rigidity(biderivation_space(0, self.window), 'is_zero')),
            self.run_check("rigidity/biderivations-1", "degree -1 biderivations vanish",
                           lambda: self._rigidity(biderivation_space(-1, self.window), 'is_zero')),
            self.run_check("rigidity/symmetry", "Δ∘c = E_01 + E_02 and its image under a transposition",
                           self._symmetry),
        ]

    @staticmethod
    def _rigidity(solution, expected: str):
        ok = getattr(solution, expected)
        return ok, f"{solution.kind} in degree {solution.degree}: kernel dim {solution.dimension}", solution.as_dict()

    def _symmetry(self):
        facts = symmetry_facts(self.window)
        return all(facts.values()), ", ".join(k for k, v in facts.items() if v), facts

    # ==================== bv_homology ====================

    def verify_bv_homology(self) -> List[CheckResult]:
        results = []
        top = MAX_BAR_ARITY if self.window.max_arity >= MAX_BAR_ARITY else 3
        computed: Dict = {}
        for (r, variant), expected in EXPECTED_BAR_HOMOLOGY.items():
            if r > top:
                continue

            def check(r=r, variant=variant, expected=expected):
                found = bar_bv_homology(r, variant, jobs=self.config.jobs, unsafe=self.config.unsafe)
                computed[(r, variant)] = found
                return self._compare_homology(found, expected)

            results.append(self.run_check(f"bv_homology/r{r}/{variant}", "homology of the cobar construction of BV",
                                          check))
        found = computed.get((4, 'operad'))
        if found is not None:
            results.append(self.run_check("bv_homology/r4/euler", "Euler characteristic -1",
                                          lambda: (found.euler_characteristic == -1,
                                                   f"χ = {found.euler_characteristic}", found.as_dict())))
        for r in (2, 3):
            results.append(self.run_check(f"bv_homology/r{r}/ratio", "module side is (r - 1) copies, shifted by one",
                                          lambda r=r: self._ratio(r, computed)))
        return results

    @staticmethod
    def _compare_homology(found, expected):
        wrong = []
        for degree, (dim, parts) in expected.items():
            if found.dims.get(degree, 0) != dim:
                wrong.append(f"dim H^{degree} = {found.dims.get(degree, 0)}, expected {dim}")
            elif parts is not None and found.decompositions.get(degree) != parts:
                wrong.append(f"H^{degree} = {found.decompositions.get(degree)}, expected {parts}")
        if found.r == 2 and found.variant == 'operad' and set(found.dims) != set(expected):
            wrong.append(f"extra classes in degrees {sorted(set(found.dims) - set(expected))}")
        return not wrong, "; ".join(wrong) or f"dims {found.dims}", found.as_dict()

    def _ratio(self, r: int, computed: Dict):
        operad_side = computed.get((r, 'operad')) or bar_bv_homology(r, 'operad', jobs=self.config.jobs)
        module_side = computed.get((r, 'module')) or bar_bv_homology(r, 'module', jobs=self.config.jobs)
        ok = module_ratio_holds(operad_side, module_side)
        return ok, f"operad {operad_side.dims}, module {module_side.dims}", \
            {'operad': operad_side.as_dict(), 'module': module_side.as_dict()}

    # ==================== xi ====================

    def verify_xi(self) -> List[CheckResult]:
        found = {}

        def derivation():
            report = xi_derivation(self.window, max_arity=min(3, self.window.max_arity))
            found['report'] = report
            ok = not report.unit_value and not report.biderivation_failures and not report.equivariance_failures
            return ok, f"{len(report.biderivation_failures)} derivation failures", report.as_dict()

        results = [self.run_check("xi/derivation", "ξ kills the unit and is an equivariant derivation", derivation)]
        if 'report' in found:
            report = found['report']
            results.append(self.run_check(
                "xi/module-point", "ξ^mod(1) = ±2Δ",
                lambda: (report.factor is not None and abs(report.factor) == 2,
                         f"ξ^mod(1) = {report.factor}·Δ", {'factor': report.factor})))
        return results

    # ==================== e1_page ====================

    def verify_e1_page(self) -> List[CheckResult]:
        results = []
        for r, expected in EXPECTED_E1.items():
            results.append(self.run_check(f"e1_page/r{r}", "E¹ counts from ft((r)) and the module cobar homology",
                                          lambda r=r, expected=expected: self._e1(r, expected)))
        return results

    @staticmethod
    def _e1(r: int, expected):
        entries = e1_page(r, max_weight=1)
        found = [(e.weight, e.degree, e.dimension) for e in entries]
        return found == expected, f"entries {found}", {'entries': [e.as_dict() for e in entries]}
