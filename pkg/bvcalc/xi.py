"""
The degree -1 derivations built from the BV operator:

    ξ(x)      = Δ ∘_1 x - (-1)^|x| Σ_j x ∘_j Δ        on BV
    ξ^mod(y)  = Σ_j y ∘_{j,0} Δ                        on BV^mod, over all slots
"""

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations
from typing import Dict, Hashable, List, Optional

from core.base import TruncationWindow, Vec, check_logger, vec_add
from opcalc.modules import PointedModule

from .bv import BVOperad, delta


def xi(operad: BVOperad, x: Hashable) -> Vec:
    d = delta()
    out: Vec = dict(operad.compose(d, 1, x))
    sign = -1 if operad.degree(x) % 2 else 1
    for j in range(1, operad.arity(x) + 1):
        vec_add(out, operad.compose(x, j, d), -sign)
    return out


def xi_vec(operad: BVOperad, v: Vec) -> Vec:
    out: Vec = {}
    for x, c in v.items():
        vec_add(out, xi(operad, x), c)
    return out


def xi_mod(module: PointedModule, y: Hashable) -> Vec:
    out: Vec = {}
    for j in range(module.slots(y)):
        vec_add(out, module.act(y, j, delta()))
    return out


@dataclass
class XiReport:
    """
    Attributes:
        unit_value: ξ(1), expected zero
        module_value: ξ^mod(1)
        factor: c with ξ^mod(1) = c·Δ, None when not a multiple of Δ
        biderivation_failures: pairs where the derivation rule fails
        equivariance_failures: elements where ξ does not commute with relabeling
    """
    unit_value: Vec
    module_value: Vec
    factor: Optional[Fraction]
    biderivation_failures: List[str] = field(default_factory=list)
    equivariance_failures: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return (not self.unit_value and self.factor is not None and abs(self.factor) == 2
                and not self.biderivation_failures and not self.equivariance_failures)

    def as_dict(self) -> Dict:
        return {
            'unit_value': {repr(k): str(v) for k, v in sorted(self.unit_value.items())},
            'module_value': {repr(k): str(v) for k, v in sorted(self.module_value.items())},
            'factor': None if self.factor is None else str(self.factor),
            'biderivation_failures': self.biderivation_failures,
            'equivariance_failures': self.equivariance_failures,
            'ok': self.ok,
        }


def xi_derivation(window: Optional[TruncationWindow] = None, max_arity: int = 3) -> XiReport:
    """
    Evaluate ξ and ξ^mod: the unit is killed, ξ satisfies the derivation rule
    ξ(x ∘_i y) = ξ(x) ∘_i y + (-1)^|x| x ∘_i ξ(y) on basis pairs with
    arity(x) + arity(y) - 1 <= max_arity, ξ commutes with relabeling of the
    inputs, and ξ^mod(1) is ±2Δ.
    """
    operad = BVOperad(window, cyclic=True)
    module = PointedModule(operad)
    unit_value = xi(operad, operad.unit)
    module_value = xi_mod(module, module.point)
    d = delta()
    factor = module_value.get(d)
    if set(module_value) - {d}:
        factor = None

    failures = []
    for n in range(1, max_arity + 1):
        for m in range(1, max_arity - n + 2):
            for x in operad.basis(n):
                sign = -1 if operad.degree(x) % 2 else 1
                xi_x = xi(operad, x)
                for y in operad.basis(m):
                    xi_y = xi(operad, y)
                    for i in range(1, n + 1):
                        left = xi_vec(operad, operad.compose(x, i, y))
                        right = operad.compose_vec(xi_x, i, {y: 1})
                        vec_add(right, operad.compose_vec({x: 1}, i, xi_y), sign)
                        if left != right:
                            failures.append(f"derivation rule fails for {x!r} ∘_{i} {y!r}")

    equivariance = []
    for n in range(2, max_arity + 1):
        for p in permutations(range(1, n + 1)):
            perm = (0,) + p
            for x in operad.basis(n):
                if xi_vec(operad, operad.permute(x, perm)) != operad.permute_vec(xi(operad, x), perm):
                    equivariance.append(f"ξ does not commute with {perm} on {x!r}")

    report = XiReport(unit_value, module_value, factor, failures, equivariance)
    check_logger.info(f"ξ^mod(1) = {factor}·Δ, derivation failures {len(failures)}")
    return report
