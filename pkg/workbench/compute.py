"""
Compute tasks: tables rather than pass/fail verdicts. A task fails only
when an error stops it.
"""

from typing import Dict, List

from bvcalc import bar_bv_homology, bv_component
from core.symseq import decompose, format_decomposition, homology_action
from dkgrt import grt_solve
from dkgrt.grt import MAX_SOLVE_WEIGHT
from opcalc import bar

from .base import CheckResult

BV_NAMES = ('bv', 'bv_cyc')


class ComputeMixin:
    """
    Tasks bar_homology, dims, decompose and grt_solve.
    Requires: self.window, self.config (operads, arity, variant, jobs, unsafe), self.run_check(), self.operad()
    """

    def _task_arities(self) -> List[int]:
        if self.config.arity is not None:
            return [self.config.arity]
        return list(range(1, self.window.max_arity + 1))

    # ==================== bar_homology ====================

    def compute_bar_homology(self) -> List[CheckResult]:
        r = self.config.arity or 2
        return [self.run_check(f"bar_homology/{name}/r{r}/{self.config.variant}", "homology table",
                               lambda name=name: self._bar_homology(name, r))
                for name in self.config.operads]

    def _bar_homology(self, name: str, r: int):
        if name in BV_NAMES:
            found = bar_bv_homology(r, self.config.variant, jobs=self.config.jobs, unsafe=self.config.unsafe)
            return True, f"dims {found.dims}, χ = {found.euler_characteristic}", found.as_dict()
        p = self.operad(name)
        variant = 'cyclic' if p.cyclic else 'operad'
        complex_ = bar(p, variant, w=self.window)
        c = complex_.slice(r)
        dims = complex_.homology(r)
        action = complex_.action(r)
        parts = {}
        for d in sorted(dims):
            induced, dim = homology_action(c, action, d)
            parts[d] = format_decomposition(decompose(induced, d, dim))
        data = {'r': r, 'variant': variant, 'dims': dims, 'decompositions': parts,
                'complex_dims': {d: c.dim(d) for d in c.degrees() if c.dim(d)},
                'reliable': [d for d in c.degrees() if c.is_reliable(d)]}
        return True, f"{complex_.name}(({r})): H dims {dims}", data

    # ==================== dims ====================

    def compute_dims(self) -> List[CheckResult]:
        return [self.run_check(f"dims/{name}", "graded dimensions", lambda name=name: self._dims(name))
                for name in self.config.operads]

    def _dims(self, name: str):
        table: Dict[int, Dict[int, int]] = {}
        if name in BV_NAMES:
            for r in self._task_arities():
                component = bv_component(r, True, self.window)
                table[r] = component.dims()
            return True, f"BV^c dims {table}", {'dims': table, 'poincare': {
                r: bv_component(r, True, self.window).poincare() for r in table}}
        p = self.operad(name)
        for r in self._task_arities():
            table[r] = p.component(r).space.dims()
        return True, f"{name} dims {table}", {'dims': table}

    # ==================== decompose ====================

    def compute_decompose(self) -> List[CheckResult]:
        return [self.run_check(f"decompose/{name}", "S_n decompositions of components",
                               lambda name=name: self._decompose(name))
                for name in self.config.operads]

    def _decompose(self, name: str):
        p = self.operad(name)
        table = {}
        for r in self._task_arities():
            component = p.component(r)
            component.check()
            table[r] = {d: format_decomposition(decompose(component.action, d, n))
                        for d, n in component.space.dims().items()}
        return True, f"{name}: {len(table)} arities", {'cyclic': p.cyclic, 'decompositions': table}

    # ==================== grt_solve ====================

    def compute_grt_solve(self) -> List[CheckResult]:
        weight = max(1, min(self.window.max_weight, MAX_SOLVE_WEIGHT))
        return [self.run_check(f"grt_solve/w{weight}", "grt basis by weight",
                               lambda: self._grt_solve(weight))]

    @staticmethod
    def _grt_solve(weight: int):
        solution = grt_solve(weight)
        return True, f"dims {solution.dims}", solution.as_dict()
