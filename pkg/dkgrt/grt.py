"""
The Grothendieck-Teichmüller group GRT over Q, weight by weight.

A candidate is a pair (λ, Φ) with λ ≠ 0 and Φ a group-like series in two
letters x, y. It lies in GRT when Φ satisfies

    duality    Φ(y, x) Φ(x, y) = 1
    hexagon    Φ(x, y) Φ(y, -x-y) Φ(-x-y, x) = 1
    pentagon   Φ(t12, t23+t24) Φ(t13+t23, t34) = Φ(t23, t34) Φ(t12+t13, t24+t34) Φ(t12, t23)  in U t(4)

Residuals are reported per weight so that a truncated candidate can be
checked exactly up to its truncation weight.
"""

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

from core.base import CostGuard, ConfigError, check_logger, build_logger, vec_add
from core.ratlin import SparseMatrix, kernel_basis

from .dk import DKAlgebra, UElement, dk_cyclic_map, presentation_maps
from .series import AssocSeries, LiePoly, Word, dynkin, lyndon_expansion, lyndon_words, words

HEXAGON_FORM = "Φ(x,y)Φ(y,-x-y)Φ(-x-y,x) - 1"
MAX_SOLVE_WEIGHT = 4


@lru_cache(maxsize=None)
def t4(max_weight: int) -> DKAlgebra:
    return DKAlgebra(4, max_weight=max_weight)


@lru_cache(maxsize=None)
def ft3(max_weight: int) -> Tuple[DKAlgebra, DKAlgebra]:
    """ft(3) and ft((4)), for the cyclic compatibility check."""
    return (DKAlgebra(3, framed=True, max_weight=max_weight),
            DKAlgebra(3, framed=True, cyclic=True, max_weight=max_weight))


# ==================== Candidates ====================

@dataclass
class GrtCandidate:
    """
    A pair (λ, Φ).

    Attributes:
        lam: nonzero rational scalar
        phi: series in x, y with constant term 1
    """
    lam: Fraction
    phi: AssocSeries

    def __post_init__(self):
        self.lam = Fraction(self.lam)
        if not self.lam:
            raise ValueError("λ must be nonzero")

    @property
    def max_weight(self) -> int:
        return self.phi.max_weight

    @classmethod
    def identity(cls, max_weight: int = 3) -> "GrtCandidate":
        return cls(Fraction(1), AssocSeries.one(max_weight))

    @classmethod
    def from_lie(cls, psi: LiePoly, max_weight: int, lam: Fraction = Fraction(1)) -> "GrtCandidate":
        """(λ, exp ψ) for a Lie polynomial ψ without linear part."""
        return cls(lam, psi.to_series(max_weight).exp())

    def as_dict(self) -> Dict:
        return {'lambda': str(self.lam), 'max_weight': self.max_weight, 'phi': self.phi.terms()}

    @classmethod
    def from_dict(cls, data: Dict) -> "GrtCandidate":
        """
        Read {lambda, max_weight, phi: [{word, coeff}]}; with "log": true the
        terms give log Φ instead of Φ.

        Raises:
            ConfigError: missing or malformed fields
        """
        try:
            max_weight = int(data['max_weight'])
            series = AssocSeries.from_terms(data['phi'], max_weight)
            lam = Fraction(data.get('lambda', 1))
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as e:
            raise ConfigError(f"malformed GRT candidate: {e}") from None
        if data.get('log'):
            series = series.exp()
        return cls(lam, series)

    @classmethod
    def load(cls, path: Union[str, Path]) -> "GrtCandidate":
        try:
            data = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as e:
            raise ConfigError(f"cannot read candidate {path}: {e}") from None
        return cls.from_dict(data)

    def save(self, path: Union[str, Path]):
        Path(path).write_text(json.dumps(self.as_dict(), indent=2))


# ==================== Residuals ====================

def _by_weight(coeffs: Dict[Word, Fraction], text) -> Dict[int, Dict[str, str]]:
    out: Dict[int, Dict[str, str]] = {}
    for w, c in sorted(coeffs.items(), key=lambda t: (len(t[0]), t[0])):
        if c:
            out.setdefault(len(w), {})[text(w)] = str(c)
    return out


@dataclass
class GrtResiduals:
    """Nonzero residual terms of each relation, grouped by weight."""
    max_weight: int
    duality: Dict[int, Dict[str, str]] = field(default_factory=dict)
    hexagon: Dict[int, Dict[str, str]] = field(default_factory=dict)
    pentagon: Dict[int, Dict[str, str]] = field(default_factory=dict)
    hexagon_form: str = HEXAGON_FORM

    @property
    def ok(self) -> bool:
        return not (self.duality or self.hexagon or self.pentagon)

    def failing_weights(self) -> Dict[str, List[int]]:
        return {name: sorted(getattr(self, name)) for name in ('duality', 'hexagon', 'pentagon')
                if getattr(self, name)}

    def as_dict(self) -> Dict:
        def keyed(d):
            return {str(w): terms for w, terms in d.items()}
        return {'max_weight': self.max_weight, 'duality': keyed(self.duality), 'hexagon': keyed(self.hexagon),
                'pentagon': keyed(self.pentagon), 'hexagon_form': self.hexagon_form, 'ok': self.ok}


def duality_residual(phi: AssocSeries) -> AssocSeries:
    x, y = AssocSeries.letter(0, phi.max_weight), AssocSeries.letter(1, phi.max_weight)
    return phi.substitute([y, x]) * phi - AssocSeries.one(phi.max_weight)


def hexagon_residual(phi: AssocSeries) -> AssocSeries:
    x, y = AssocSeries.letter(0, phi.max_weight), AssocSeries.letter(1, phi.max_weight)
    z = -x - y
    return phi * phi.substitute([y, z]) * phi.substitute([z, x]) - AssocSeries.one(phi.max_weight)


def pentagon_residual(phi: AssocSeries) -> UElement:
    u = t4(phi.max_weight)
    t = u.t

    def plus(a: UElement, b: UElement) -> UElement:
        out = dict(a)
        vec_add(out, b)
        return out

    left = u.mul(u.substitute(phi, t(1, 2), plus(t(2, 3), t(2, 4))),
                 u.substitute(phi, plus(t(1, 3), t(2, 3)), t(3, 4)))
    right = u.mul(u.mul(u.substitute(phi, t(2, 3), t(3, 4)),
                        u.substitute(phi, plus(t(1, 2), t(1, 3)), plus(t(2, 4), t(3, 4)))),
                  u.substitute(phi, t(1, 2), t(2, 3)))
    vec_add(left, right, -1)
    return u.reduce(left)


def grt_check(candidate: GrtCandidate, max_weight: Optional[int] = None) -> GrtResiduals:
    """
    Residuals of duality, hexagon and pentagon up to max_weight.

    Raises:
        NotGroupLike: Φ is not group-like
    """
    w = max_weight or candidate.max_weight
    phi = candidate.phi.truncate(w)
    phi.require_group_like()
    u = t4(w)

    def pentagon_text(word: Word) -> str:
        return "*".join(u.letter_text(k) for k in word)

    report = GrtResiduals(
        max_weight=w,
        duality=_by_weight(duality_residual(phi).coeffs, phi.word_text),
        hexagon=_by_weight(hexagon_residual(phi).coeffs, phi.word_text),
        pentagon=_by_weight(pentagon_residual(phi), pentagon_text),
    )
    check_logger.info(f"grt check up to weight {w}: {'ok' if report.ok else report.failing_weights()}")
    return report


# ==================== Group law ====================

def grt_multiply(first: GrtCandidate, second: GrtCandidate) -> GrtCandidate:
    """
    (λ, Φ)(μ, Ψ) = (λμ, Φ · (λ·Ψ)) with (Φ · Φ')(x, y) = Φ(x, y) Φ'(x, Φ⁻¹ y Φ)
    and λ·Ψ the dilation x, y -> λx, λy.
    """
    if first.max_weight != second.max_weight:
        raise ValueError(f"truncation weights differ: {first.max_weight} vs {second.max_weight}")
    w = first.max_weight
    phi = first.phi
    x, y = AssocSeries.letter(0, w), AssocSeries.letter(1, w)
    conjugated = phi.inverse() * y * phi
    psi = second.phi.dilate(first.lam)
    return GrtCandidate(first.lam * second.lam, phi * psi.substitute([x, conjugated]))


def grt_inverse(candidate: GrtCandidate) -> GrtCandidate:
    """Solve (λ, Φ)(λ⁻¹, Ψ) = 1 for Ψ weight by weight."""
    w = candidate.max_weight
    lam = 1 / candidate.lam
    psi = AssocSeries.one(w)
    for _ in range(w):
        product = grt_multiply(candidate, GrtCandidate(lam, psi))
        # product = 1 + e; correct the lowest wrong weight of Ψ
        error = product.phi - AssocSeries.one(w)
        low = error.lowest_weight()
        if low is None:
            break
        correction = AssocSeries(error.weight_part(low), w).dilate(lam)
        psi = psi - correction
    return GrtCandidate(lam, psi)


# ==================== Solving the linearized relations ====================

def _linear_relations(poly: Dict[Word, Fraction], w: int) -> Dict[Tuple, Fraction]:
    """Linearized duality, hexagon and pentagon of a homogeneous polynomial, keyed by relation."""
    x, y = AssocSeries.letter(0, w), AssocSeries.letter(1, w)
    z = -x - y
    psi = AssocSeries(poly, w)
    out: Dict[Tuple, Fraction] = {}
    dual = psi.substitute([y, x]) + psi
    hexagon = psi + psi.substitute([y, z]) + psi.substitute([z, x])
    for word, c in dual.weight_part(w).items():
        out[('duality', word)] = c
    for word, c in hexagon.weight_part(w).items():
        out[('hexagon', word)] = c
    u = t4(w)
    t = u.t

    def plus(*parts: UElement) -> UElement:
        acc: UElement = {}
        for p in parts:
            vec_add(acc, p)
        return acc

    pentagon: UElement = {}
    vec_add(pentagon, u.substitute(psi, t(1, 2), plus(t(2, 3), t(2, 4))))
    vec_add(pentagon, u.substitute(psi, plus(t(1, 3), t(2, 3)), t(3, 4)))
    vec_add(pentagon, u.substitute(psi, t(2, 3), t(3, 4)), -1)
    vec_add(pentagon, u.substitute(psi, plus(t(1, 2), t(1, 3)), plus(t(2, 4), t(3, 4))), -1)
    vec_add(pentagon, u.substitute(psi, t(1, 2), t(2, 3)), -1)
    for word, c in u.reduce(pentagon).items():
        if len(word) == w:
            out[('pentagon', word)] = c
    return out


def _kernel(columns: List[Dict[Tuple, Fraction]]) -> List[Dict[int, Fraction]]:
    keys = sorted({k for col in columns for k in col}, key=repr)
    index = {k: i for i, k in enumerate(keys)}
    matrix = SparseMatrix.from_columns(len(keys), [{index[k]: c for k, c in col.items()} for col in columns])
    return kernel_basis(matrix)


@dataclass
class GrtSolution:
    """
    The Lie algebra grt up to a weight: dims and a basis per weight, with the
    dims found by the oracle on all words when it was run.
    """
    max_weight: int
    basis: Dict[int, List[LiePoly]]
    oracle_dims: Dict[int, int] = field(default_factory=dict)

    @property
    def dims(self) -> Dict[int, int]:
        return {w: len(b) for w, b in self.basis.items()}

    @property
    def oracle_agrees(self) -> bool:
        return all(self.oracle_dims.get(w, d) == d for w, d in self.dims.items())

    def candidates(self) -> List[GrtCandidate]:
        """(1, exp ψ) for every basis element ψ."""
        return [GrtCandidate.from_lie(psi, self.max_weight) for w in sorted(self.basis) for psi in self.basis[w]]

    def as_dict(self) -> Dict:
        return {
            'max_weight': self.max_weight,
            'dims': {str(w): d for w, d in self.dims.items()},
            'oracle_dims': {str(w): d for w, d in self.oracle_dims.items()},
            'basis': {str(w): [AssocSeries(psi.expand(), self.max_weight).terms() for psi in b]
                      for w, b in self.basis.items()},
        }


def grt_solve(max_weight: int, oracle: bool = True) -> GrtSolution:
    """
    Solve the linearized GRT relations on log Φ in the Lyndon basis, weight by weight.

    With oracle=True the same relations are also solved on all words with
    the Dynkin condition D(ψ) = wψ added, as an independent count.

    Raises:
        CostGuard: max_weight above 4
    """
    if max_weight > MAX_SOLVE_WEIGHT:
        raise CostGuard(f"grt_solve is limited to weight {MAX_SOLVE_WEIGHT}, got {max_weight}")
    basis: Dict[int, List[LiePoly]] = {}
    oracle_dims: Dict[int, int] = {}
    for w in range(1, max_weight + 1):
        lyndon = lyndon_words(2, w)
        columns = [_linear_relations(lyndon_expansion(word), w) for word in lyndon]
        basis[w] = [LiePoly({lyndon[k]: c for k, c in v.items()}) for v in _kernel(columns)]
        if oracle:
            oracle_dims[w] = _oracle_dim(w)
        build_logger.debug(f"grt weight {w}: dim {len(basis[w])}")
    solution = GrtSolution(max_weight, basis, oracle_dims)
    check_logger.info(f"grt dims {solution.dims}" + (f", oracle {oracle_dims}" if oracle else ""))
    return solution


def _oracle_dim(w: int) -> int:
    columns = []
    for word in words(2, w):
        col = _linear_relations({word: Fraction(1)}, w)
        lie_defect = dynkin({word: Fraction(1)})
        vec_add(lie_defect, {word: Fraction(-w)})
        for u, c in lie_defect.items():
            col[('lie', u)] = c
        columns.append(col)
    return len(_kernel(columns))


# ==================== Cyclic compatibility ====================

@dataclass
class CyclicStep:
    name: str
    residual: str

    @property
    def ok(self) -> bool:
        return self.residual == "0"


@dataclass
class CyclicCheck:
    """The chain τ·Φ(t23, t13)⁻¹ = ... = Φ(t12, t23) in U ft(3), step by step."""
    steps: List[CyclicStep]
    total: str

    @property
    def ok(self) -> bool:
        return self.total == "0"

    def as_dict(self) -> Dict:
        return {'steps': [{'name': s.name, 'residual': s.residual, 'ok': s.ok} for s in self.steps],
                'total': self.total, 'ok': self.ok}


def parcd_cyclic_check(candidate: GrtCandidate, max_weight: Optional[int] = None) -> CyclicCheck:
    """
    Check that τ = (0 1) sends the associator Φ(t23, t13)⁻¹ of ft(3) to
    Φ(t12, t23), through the intermediate forms

        Φ(t23, -t13-t23-t33)⁻¹   cyclic action, also computed through ft((4))
        Φ(t23, t12+t11+t22)⁻¹    adding the central t11+t22+t33+t12+t13+t23
        Φ(t23, t12)⁻¹            dropping the central t11+t22
        Φ(t12, t23)              duality
    """
    w = max_weight or candidate.max_weight
    phi = candidate.phi.truncate(w)
    phi.require_group_like()
    inv = phi.inverse()
    f, c = ft3(w)
    _, to_framed = presentation_maps(f, c)
    t = f.t

    def plus(*parts: UElement, scale: int = 1) -> UElement:
        acc: UElement = {}
        for p in parts:
            vec_add(acc, p, scale)
        return acc

    def diff(a: UElement, b: UElement) -> str:
        out = dict(a)
        vec_add(out, b, -1)
        return f.format(f.reduce(out))

    tau = (1, 0, 2, 3)
    start = f.substitute(inv, t(2, 3), t(1, 3))
    acted = dk_cyclic_map(f, start, tau)
    through_cyclic = to_framed(dk_cyclic_map(c, c.substitute(inv, c.t(2, 3), c.t(1, 3)), tau))
    s1 = f.substitute(inv, t(2, 3), plus(t(1, 3), t(2, 3), t(3, 3), scale=-1))
    s2 = f.substitute(inv, t(2, 3), plus(t(1, 2), t(1, 1), t(2, 2)))
    s3 = f.substitute(inv, t(2, 3), t(1, 2))
    s4 = f.substitute(phi, t(1, 2), t(2, 3))
    steps = [
        CyclicStep("cyclic action", diff(acted, s1)),
        CyclicStep("cyclic presentation", diff(through_cyclic, s1)),
        CyclicStep("central full twist", diff(s1, s2)),
        CyclicStep("central t11 + t22", diff(s2, s3)),
        CyclicStep("duality", diff(s3, s4)),
    ]
    report = CyclicCheck(steps, diff(acted, s4))
    check_logger.info(f"cyclic compatibility up to weight {w}: {'ok' if report.ok else 'FAILED'}")
    return report
