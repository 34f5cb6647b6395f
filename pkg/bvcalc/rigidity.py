"""
Rigidity of the pointed BV comodule, as linear algebra on the operad side.

A comodule map (or a biderivation of the identity) is determined by its value
u on the point 1 ∈ BV((2)) = BV(1); it sends x to u ∘_1 x. The unknowns are
the coordinates of u in a fixed degree, the constraints are equivariance of
x -> u ∘_1 x under every cyclic generator, and the counit condition.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Hashable, List, Optional

from core.base import TruncationWindow, Vec, check_logger, vec_add
from core.ratlin import SparseMatrix, solve_affine
from core.symseq import transposition

from .bv import BVOperad, delta, e_element


@dataclass
class RigiditySolution:
    """
    Affine solution space of one rigidity system.

    Attributes:
        kind: 'endomorphism' or 'biderivation'
        degree: degree of the unknown u = φ(1)
        unknowns: basis of BV(1) in that degree
        particular: a solution, None when the system is inconsistent
        kernel: homogeneous solutions
        equations: number of linear constraints assembled
    """
    kind: str
    degree: int
    unknowns: List[Hashable]
    particular: Optional[Vec]
    kernel: List[Vec] = field(default_factory=list)
    equations: int = 0

    @property
    def dimension(self) -> int:
        return len(self.kernel)

    @property
    def is_identity(self) -> bool:
        return self.particular == {('bv', 1, ()): 1} and not self.kernel

    @property
    def is_zero(self) -> bool:
        return self.particular == {} and not self.kernel

    def as_dict(self) -> Dict:
        return {
            'kind': self.kind,
            'degree': self.degree,
            'unknowns': [repr(u) for u in self.unknowns],
            'consistent': self.particular is not None,
            'particular': {repr(k): str(v) for k, v in sorted((self.particular or {}).items())},
            'kernel_dimension': self.dimension,
            'equations': self.equations,
        }


def _solve(kind: str, degree: int, window: Optional[TruncationWindow]) -> RigiditySolution:
    w = window or TruncationWindow()
    operad = BVOperad(w, cyclic=True)
    unknowns = [x for x in operad.basis(1) if operad.degree(x) == degree]
    rows: List[Dict[int, Fraction]] = []
    rhs: List[Fraction] = []
    for m in range(1, w.max_arity + 1):
        gens = [transposition(m + 1, i) for i in range(m)]
        for x in operad.basis(m):
            for s in gens:
                xs = operad.permute(x, s)
                equation: Dict[Hashable, Dict[int, Fraction]] = {}
                for k, u in enumerate(unknowns):
                    diff: Vec = {}
                    vec_add(diff, operad.compose_vec({u: 1}, 1, xs))
                    vec_add(diff, operad.permute_vec(operad.compose(u, 1, x), s), -1)
                    for label, c in diff.items():
                        equation.setdefault(label, {})[k] = c
                for label in sorted(equation, key=repr):
                    rows.append(equation[label])
                    rhs.append(Fraction(0))
    # counit: the coefficient of the unit is 1 for a comodule map, 0 for a biderivation
    if operad.unit in unknowns:
        rows.append({unknowns.index(operad.unit): Fraction(1)})
        rhs.append(Fraction(1 if kind == 'endomorphism' else 0))
    elif kind == 'endomorphism':
        rows.append({})
        rhs.append(Fraction(1))
    system = SparseMatrix(len(rows), len(unknowns), {(r, c): v for r, row in enumerate(rows) for c, v in row.items()})
    solved = solve_affine(system, rhs)
    if solved is None:
        result = RigiditySolution(kind, degree, unknowns, None, [], len(rows))
    else:
        particular, kernel = solved
        result = RigiditySolution(
            kind, degree, unknowns,
            {unknowns[k]: v for k, v in particular.items()},
            [{unknowns[k]: v for k, v in vec.items()} for vec in kernel],
            len(rows),
        )
    check_logger.info(f"{kind} space in degree {degree}: {len(rows)} equations, "
                      f"{'inconsistent' if solved is None else f'kernel dim {result.dimension}'}")
    return result


def comodule_endo_space(window: Optional[TruncationWindow] = None) -> RigiditySolution:
    """Degree-0 comodule endomorphisms of BV^{c,mod}; expected to be the identity only."""
    return _solve('endomorphism', 0, window)


def biderivation_space(k: int, window: Optional[TruncationWindow] = None) -> RigiditySolution:
    """Biderivations of the identity of degree k; expected to vanish for k = 0 and k = -1."""
    return _solve('biderivation', k, window)


def symmetry_facts(window: Optional[TruncationWindow] = None) -> Dict[str, bool]:
    """
    Δ ∘_1 c = E_01 + E_02 for the product c, and the transposition of the
    slots 0 and 1 sends it to E_01 + E_12, which differs.
    """
    operad = BVOperad(window, cyclic=True)
    c = ('bv', 2, ())
    composite = operad.compose(delta(), 1, c)
    expected: Vec = {}
    vec_add(expected, e_element(2, 0, 1))
    vec_add(expected, e_element(2, 0, 2))
    moved = operad.permute_vec(composite, transposition(3, 0))
    image: Vec = {}
    vec_add(image, e_element(2, 0, 1))
    vec_add(image, e_element(2, 1, 2))
    return {
        'delta_composed_with_product': composite == expected,
        'transposition_image': moved == image,
        'not_invariant': moved != composite,
    }
