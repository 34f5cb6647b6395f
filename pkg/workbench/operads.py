"""
Operad verification suites: bar and cobar complexes, the comparison zigzag
and the counit of the G-of-cobar construction.
"""

from typing import Dict, List

from core.base import ConfigError
from opcalc import (
    OperadData, bar, builtin, cobar_bar_counit_check, comparison_zigzag, counit_eta, functor_G,
    g_of_cobar, induced_cyclic, presentation_counit,
)
from opcalc.modules import PointedModule

from .base import CheckResult


def _nonzero_dims(dims: Dict[int, int]) -> Dict[str, int]:
    return {str(d): n for d, n in sorted(dims.items()) if n}


class OperadChecksMixin:
    """
    Suites bar_cobar, prop34 and theorem11.
    Requires: self.window, self.config.operads, self.run_check()
    """

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self._operad_cache: Dict[str, OperadData] = {}

    def operad(self, name: str) -> OperadData:
        if name not in self._operad_cache:
            self._operad_cache[name] = builtin(name, self.window)
        return self._operad_cache[name]

    def _cyclic(self, name: str) -> OperadData:
        p = self.operad(name)
        if not p.cyclic:
            raise ConfigError(f"{name} is not a cyclic operad")
        return p

    # ==================== bar_cobar ====================

    def verify_bar_cobar(self) -> List[CheckResult]:
        results = []
        for name in self.config.operads:
            results.append(self.run_check(f"bar_cobar/{name}/axioms", "operad and cyclic operad axioms",
                                          lambda name=name: self._axioms(name)))
            variants = ['operad', 'cyclic'] if self.operad(name).cyclic else ['operad']
            for variant in variants:
                results.append(self.run_check(f"bar_cobar/{name}/bar-{variant}", "d² = 0 and equivariance of Bar",
                                              lambda name=name, variant=variant: self._bar_slices(name, variant)))
                results.append(self.run_check(f"bar_cobar/{name}/counit-{variant}",
                                              "Cobar(Bar P) -> P is a quasi-isomorphism",
                                              lambda name=name, variant=variant: self._cobar_bar(name, variant)))
            if self.operad(name).cyclic:
                results.append(self.run_check(f"bar_cobar/{name}/pair-cobar",
                                              "G-of-cobar complex against its presentation",
                                              lambda name=name: self._pair_cobar(name)))
        return results

    def _axioms(self, name: str):
        p = self.operad(name)
        failures = p.check_axioms()
        if p.cyclic:
            failures += p.check_cyclic_axioms()
        return not failures, f"{len(failures)} axiom failures", {'dims': p.dims(), 'failures': failures[:20]}

    def _arities(self, variant: str) -> List[int]:
        top = self.window.max_arity
        return list(range(3, top + 2)) if variant == 'cyclic' else list(range(2, top + 1))

    def _bar_slices(self, name: str, variant: str):
        complex_ = bar(self.operad(name), variant, w=self.window)
        data = {}
        for r in self._arities(variant):
            # builds every differential, so d∘d and the Coxeter relations are asserted here
            complex_.component(r).check()
            data[str(r)] = {'homology': _nonzero_dims(complex_.homology(r))}
        return True, f"{complex_.name}: {len(data)} slices consistent", data

    def _cobar_bar(self, name: str, variant: str):
        report = cobar_bar_counit_check(self.operad(name), variant, self.window)
        return report.iso, f"{report.name}: {'iso' if report.iso else 'not iso'}", report.as_dict()

    def _pair_cobar(self, name: str):
        result = g_of_cobar(self.operad(name), self.window)
        data = {'dims': result.dims, 'oracle_dims': result.oracle_dims}
        return result.matches, f"G(Bar^c) dims {'match' if result.matches else 'differ from'} G of the free pair", data

    # ==================== prop34 ====================

    def verify_prop34(self) -> List[CheckResult]:
        results = []
        for name in self.config.operads:
            found = {}

            def zigzag(name=name, found=found):
                _, _, report = comparison_zigzag(self._cyclic(name), self.window)
                found['report'] = report
                ok = all(report.identities.values())
                return ok, f"chain-map identities {'hold' if ok else 'fail'}", {'identities': report.identities}

            results.append(self.run_check(f"prop34/{name}/identities", "f(d''T) = ∂f(T) and the companion identities",
                                          zigzag))
            if 'report' not in found:
                continue
            report = found['report']
            for key, anchor in (('f', "f induces an isomorphism on homology"),
                                ('incl', "the inclusion of Y ⊗ Bar induces an isomorphism"),
                                ('graded', "f on the essential-vertex graded pieces")):
                results.append(self.run_check(f"prop34/{name}/{key}", anchor,
                                              lambda part=getattr(report, key): self._quasi_iso(part)))
            results.append(self.run_check(f"prop34/{name}/ratio", "dim H(Bar P^mod) = (r - 1) dim H(Bar P)[1]",
                                          lambda report=report: (all(report.homology_ratio.values()),
                                                                 "homology ratio by arity",
                                                                 {'ratio': report.homology_ratio})))
        return results

    @staticmethod
    def _quasi_iso(report):
        failures = report.failures()
        return report.iso, f"{report.name}: {len(failures)} failing slices", report.as_dict()

    # ==================== theorem11 ====================

    def verify_theorem11(self) -> List[CheckResult]:
        results = []
        for name in self.config.operads:
            found = {}

            def eta(name=name, found=found):
                report = counit_eta(self._cyclic(name), self.window)
                found['report'] = report
                return self._quasi_iso(report.eta)

            results.append(self.run_check(f"theorem11/{name}/eta", "η: G Bar^c Bar F(P) -> P is a quasi-isomorphism",
                                          eta))
            if 'report' in found:
                report = found['report']
                for key in ('phi', 'l', 'r'):
                    results.append(self.run_check(f"theorem11/{name}/{key}", f"{key} is a quasi-isomorphism",
                                                  lambda part=getattr(report, key): self._quasi_iso(part)))
                results.append(self.run_check(
                    f"theorem11/{name}/factorization", "φ = r∘l as matrices",
                    lambda report=report: (report.factorization and report.r_kills_shifted and report.l_extends_f,
                                           "factorization through the second line",
                                           {'factorization': report.factorization,
                                            'r_kills_shifted': report.r_kills_shifted,
                                            'l_extends_f': report.l_extends_f})))
                results.append(self.run_check(
                    f"theorem11/{name}/presentation", "G-of-cobar dims match the presentation",
                    lambda report=report: (all(report.presentation_dims.values()), "presentation dims by arity",
                                           {'presentation_dims': report.presentation_dims})))
            results.append(self.run_check(f"theorem11/{name}/g-counit", "G(F(P), P^mod) -> P is an isomorphism",
                                          lambda name=name: self._g_counit(name)))
            results.append(self.run_check(f"theorem11/{name}/induced", "I(Q) -> Q kills the composition relations",
                                          lambda name=name: self._induced(name)))
        return results

    def _g_counit(self, name: str):
        p = self._cyclic(name)
        g = functor_G(p, PointedModule(p), self.window)
        counit = presentation_counit(g, p)
        ok = counit.kills_ideal and all(counit.iso.values())
        return ok, f"counit of G({name}, {name}^mod)", {'kills_ideal': counit.kills_ideal, 'iso': counit.iso}

    def _induced(self, name: str):
        p = self._cyclic(name)
        counit = presentation_counit(induced_cyclic(p, self.window), p)
        dims = {n: counit.matrices[n].cols for n in sorted(counit.matrices)}
        return counit.kills_ideal, f"I({name}) -> {name}", {'kills_ideal': counit.kills_ideal, 'dims': dims}
