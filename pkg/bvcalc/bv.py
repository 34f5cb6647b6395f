"""
The BV cooperad BV^c = H(fD_2) on its Arnold presentation, and the BV operad
as its linear dual.

A monomial is a sorted tuple of generators (i, j): (i, j) with i < j is ω_ij,
(i, i) is θ_i, and every generator has degree 1. The straightened basis
keeps at most one ω for each second index (the Arnold basis) times any
square-free product of θ's. Text syntax: "w12*w13*th2", "1" for the unit.

The operad side follows the slot conventions of opcalc.operads: an element
('bv', n, M) of arity n pairs to 1 with the monomial M of BV^c(n), whose
indices 1..n are the input slots.
"""

from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product
from math import comb
from typing import Dict, Hashable, List, Optional, Sequence, Tuple

from core.base import (
    TransportFailure, TruncationWindow, Vec, WindowOverflow, build_logger, vec_add,
)
from core.ratlin import Echelon
from core.symseq import GroupAction, Perm, reduced_word, transposition
from dkgrt.dk import DKAlgebra, tau_framed
from opcalc.barcobar import DualComodule
from opcalc.modules import PointedModule
from opcalc.operads import OperadData

Gen = Tuple[int, int]
Monomial = Tuple[Gen, ...]


# ==================== Text ====================

def gen_text(g: Gen) -> str:
    i, j = g
    return f"th{i}" if i == j else f"w{i}{j}"


def monomial_text(m: Monomial) -> str:
    return "*".join(gen_text(g) for g in m) or "1"


def parse_monomial(text: str) -> List[Gen]:
    """
    Factors of "w12*th3" in the written order (not straightened).

    Raises:
        ValueError: a factor is neither wIJ nor thI with single-digit labels
    """
    text = text.replace(" ", "")
    if text in ("", "1"):
        return []
    out = []
    for factor in text.split("*"):
        if factor.startswith("th") and len(factor) == 3 and factor[2].isdigit():
            i = int(factor[2])
            out.append((i, i))
        elif factor.startswith("w") and len(factor) == 3 and factor[1:].isdigit() and factor[1] != factor[2]:
            out.append(_normal_gen((int(factor[1]), int(factor[2]))))
        else:
            raise ValueError(f"bad factor {factor!r} in {text!r}")
    return out


def format_vec(v: Dict[Monomial, Fraction]) -> str:
    if not v:
        return "0"
    return " + ".join(f"{c}*{monomial_text(m)}" for m, c in sorted(v.items()))


# ==================== Straightening ====================

def _normal_gen(g: Gen) -> Gen:
    i, j = g
    return (j, i) if i > j else (i, j)


def sort_factors(factors: Sequence[Gen]) -> Tuple[int, Optional[Monomial]]:
    """Sign of the sorting permutation and the sorted monomial; (0, None) on a repeated factor."""
    arr = [_normal_gen(g) for g in factors]
    sign = 1
    for a in range(1, len(arr)):
        b = a
        while b > 0 and arr[b - 1] > arr[b]:
            arr[b - 1], arr[b] = arr[b], arr[b - 1]
            sign = -sign
            b -= 1
    if any(arr[k] == arr[k + 1] for k in range(len(arr) - 1)):
        return 0, None
    return sign, tuple(arr)


def _clash(m: Monomial, last: bool) -> Optional[Tuple[int, int]]:
    """Positions p < q of two ω factors sharing their second index."""
    by_second: Dict[int, List[int]] = {}
    for k, (i, j) in enumerate(m):
        if i != j:
            by_second.setdefault(j, []).append(k)
    pairs = [pair for positions in by_second.values() for pair in combinations(positions, 2)]
    if not pairs:
        return None
    return max(pairs) if last else min(pairs)


@lru_cache(maxsize=None)
def _straighten_sorted(m: Monomial, last: bool) -> Tuple[Tuple[Monomial, Fraction], ...]:
    clash = _clash(m, last)
    if clash is None:
        return ((m, Fraction(1)),)
    p, q = clash
    (a, j), (b, _) = m[p], m[q]
    rest = list(m[:p] + m[p + 1:q] + m[q + 1:])
    # m = (-1)^(p+q-1) ω_aj ω_bj rest, and ω_aj ω_bj = ω_ab ω_bj - ω_ab ω_aj
    sign = -1 if (p + q - 1) % 2 else 1
    out: Dict[Monomial, Fraction] = {}
    for factors, c in (([(a, b), (b, j)], 1), ([(a, b), (a, j)], -1)):
        s, sorted_m = sort_factors(factors + rest)
        if s:
            for m2, c2 in _straighten_sorted(sorted_m, last):
                vec_add(out, {m2: sign * c * s * c2})
    return tuple(sorted(out.items()))


def straighten(factors: Sequence[Gen], last: bool = False) -> Dict[Monomial, Fraction]:
    """
    Normal form of a product of generators in the Arnold basis.

    Args:
        factors: generators in product order
        last: resolve the last clashing pair first instead of the first one
    """
    s, m = sort_factors(factors)
    if not s:
        return {}
    return {m2: s * c for m2, c in _straighten_sorted(m, last)}


def multiply(x: Dict[Monomial, Fraction], y: Dict[Monomial, Fraction]) -> Dict[Monomial, Fraction]:
    out: Dict[Monomial, Fraction] = {}
    for mx, cx in x.items():
        for my, cy in y.items():
            vec_add(out, straighten(mx + my), cx * cy)
    return out


def arnold_relation(a: int, b: int, c: int) -> List[Tuple[List[Gen], int]]:
    """ω_ab ω_bc + ω_bc ω_ca + ω_ca ω_ab as (factors, coefficient) terms."""
    return [([(a, b), (b, c)], 1), ([(b, c), (c, a)], 1), ([(c, a), (a, b)], 1)]


def generators(r: int, framed: bool = True) -> List[Gen]:
    out = [(i, j) for i in range(1, r + 1) for j in range(i + 1, r + 1)]
    if framed:
        out += [(i, i) for i in range(1, r + 1)]
    return sorted(out)


# ==================== Components ====================

class BVComponent:
    """
    BV^c(r) (framed) or e_2^c(r) (unframed): Arnold basis, product and
    cocompositions.
    """

    def __init__(self, r: int, framed: bool = True):
        if r < 1:
            raise ValueError(f"arity must be positive, got {r}")
        self.r = r
        self.framed = framed
        self.generators = generators(r, framed)
        self._basis: Optional[Dict[int, List[Monomial]]] = None

    @property
    def name(self) -> str:
        return f"{'BV' if self.framed else 'e2'}^c({self.r})"

    # ==================== Basis ====================

    def basis_by_degree(self) -> Dict[int, List[Monomial]]:
        if self._basis is not None:
            return self._basis
        omega_choices = [[None] + [(a, j) for a in range(1, j)] for j in range(2, self.r + 1)]
        theta_sets = [()]
        if self.framed:
            theta_sets = [s for k in range(self.r + 1) for s in combinations(range(1, self.r + 1), k)]
        out: Dict[int, List[Monomial]] = {}
        for omegas in product(*omega_choices):
            chosen = [g for g in omegas if g is not None]
            for thetas in theta_sets:
                _, m = sort_factors(chosen + [(i, i) for i in thetas])
                out.setdefault(len(m), []).append(m)
        self._basis = {d: sorted(ms) for d, ms in sorted(out.items())}
        return self._basis

    def basis(self, degree: Optional[int] = None) -> List[Monomial]:
        by_degree = self.basis_by_degree()
        if degree is None:
            return [m for d in sorted(by_degree) for m in by_degree[d]]
        return list(by_degree.get(degree, []))

    def dims(self) -> Dict[int, int]:
        return {d: len(ms) for d, ms in self.basis_by_degree().items()}

    def poincare(self) -> Dict[int, int]:
        """Coefficients of Π_{j=2..r} (1 + (j - 1) q), times (1 + q)^r when framed."""
        series = [1]
        factors = [(1, j - 1) for j in range(2, self.r + 1)]
        if self.framed:
            factors += [(1, 1)] * self.r
        for c0, c1 in factors:
            nxt = [0] * (len(series) + 1)
            for k, v in enumerate(series):
                nxt[k] += c0 * v
                nxt[k + 1] += c1 * v
            series = nxt
        return {d: v for d, v in enumerate(series) if v}

    def independent_dims(self) -> Dict[int, int]:
        """dim Λ^d(generators) minus the rank of the Arnold ideal in degree d."""
        n = len(self.generators)
        relations = []
        for a, b, c in combinations(range(1, self.r + 1), 3):
            rel: Dict[Monomial, Fraction] = {}
            for factors, coeff in arnold_relation(a, b, c):
                s, m = sort_factors(factors)
                vec_add(rel, {m: Fraction(s * coeff)})
            relations.append(rel)
        out = {}
        for d in range(n + 1):
            ideal = Echelon()
            if d >= 2:
                for extra in combinations(self.generators, d - 2):
                    for rel in relations:
                        v: Dict[Monomial, Fraction] = {}
                        for m, c in rel.items():
                            s, m2 = sort_factors(list(m) + list(extra))
                            if s:
                                vec_add(v, {m2: c * s})
                        if v:
                            ideal.add(v)
            dim = comb(n, d) - len(ideal)
            if dim:
                out[d] = dim
        return out

    # ==================== Cocomposition ====================

    def cocompose(self, m: Monomial, i: int, k: int) -> Dict[Tuple[Monomial, Monomial], Fraction]:
        """
        Δ_i on a basis monomial: the block {i, .., i + k - 1} is collapsed to
        the index i of the outer factor and renumbered 1..k in the inner one.

        Raises:
            ValueError: the block does not fit in 1..r
        """
        if k < 1 or i < 1 or i + k - 1 > self.r:
            raise ValueError(f"block {i}..{i + k - 1} outside 1..{self.r}")

        def outer(j: int) -> int:
            return j if j < i else (i if j < i + k else j - k + 1)

        def inner(j: int) -> int:
            return j - i + 1

        def in_block(j: int) -> bool:
            return i <= j < i + k

        terms: List[Tuple[Tuple[Gen, ...], Tuple[Gen, ...], int]] = [((), (), 1)]
        for a, b in m:
            if a == b:
                images = [(((outer(a),) * 2,), (), 1)]
                if in_block(a):
                    images.append(((), ((inner(a),) * 2,), 1))
            elif in_block(a) and in_block(b):
                images = [((), ((inner(a), inner(b)),), 1)]
                if self.framed:
                    images.append((((i, i),), (), 1))
            else:
                images = [(((outer(a), outer(b)),), (), 1)]
            step = []
            for o, n, c in terms:
                for o2, n2, c2 in images:
                    # (o ⊗ n)(o2 ⊗ n2) = (-1)^{|n||o2|} o o2 ⊗ n n2
                    sign = -1 if (len(n) * len(o2)) % 2 else 1
                    step.append((o + o2, n + n2, c * c2 * sign))
            terms = step
        out: Dict[Tuple[Monomial, Monomial], Fraction] = {}
        for o, n, c in terms:
            for om, oc in straighten(o).items():
                for nm, nc in straighten(n).items():
                    vec_add(out, {(om, nm): c * oc * nc})
        return out

    def cocompose_vec(self, v: Dict[Monomial, Fraction], i: int, k: int) -> Dict[Tuple[Monomial, Monomial], Fraction]:
        out: Dict[Tuple[Monomial, Monomial], Fraction] = {}
        for m, c in v.items():
            vec_add(out, self.cocompose(m, i, k), c)
        return out

    # ==================== Checks ====================

    def check_confluence(self, max_degree: int = 3) -> List[str]:
        """Both clash orders give the same normal form on every monomial of degree <= max_degree."""
        failures = []
        for d in range(max_degree + 1):
            for factors in combinations(self.generators, d):
                if straighten(factors) != straighten(factors, last=True):
                    failures.append(f"straightening of {monomial_text(factors)} depends on the order")
        return failures

    def check_algebra_map(self) -> List[str]:
        """Δ_i(g m) = Δ_i(g) Δ_i(m) for generators g and basis monomials m."""
        failures = []
        for i in range(1, self.r + 1):
            for k in range(1, self.r - i + 2):
                for g in self.generators:
                    dg = self.cocompose((g,), i, k)
                    for m in self.basis():
                        left = self.cocompose_vec(straighten((g,) + m), i, k)
                        right = _tensor_product(dg, self.cocompose(m, i, k))
                        if left != right:
                            failures.append(f"Δ_{i},{k} is not multiplicative on {gen_text(g)}·{monomial_text(m)}")
        return failures

    def check_coassociativity(self) -> List[str]:
        """Sequential and parallel coassociativity on every basis monomial."""
        failures = []
        r = self.r
        for m in self.basis():
            # sequential: block B of size b at i, then a block of size l at j inside it
            for i in range(1, r + 1):
                for b in range(1, r - i + 2):
                    for j in range(1, b + 1):
                        for l in range(1, b - j + 2):
                            left: Dict = {}
                            for (x, yz), c in self.cocompose(m, i, b).items():
                                for (y, z), c2 in component(b, self.framed).cocompose(yz, j, l).items():
                                    vec_add(left, {(x, y, z): c * c2})
                            right: Dict = {}
                            for (xy, z), c in self.cocompose(m, i + j - 1, l).items():
                                for (x, y), c2 in component(r - l + 1, self.framed).cocompose(xy, i, b - l + 1).items():
                                    vec_add(right, {(x, y, z): c * c2})
                            if left != right:
                                failures.append(f"sequential coassociativity fails on {monomial_text(m)} ({i},{b},{j},{l})")
            # parallel: disjoint blocks of sizes b at i and l at s > i + b - 1
            for i in range(1, r + 1):
                for b in range(1, r - i + 2):
                    for s in range(i + b, r + 1):
                        for l in range(1, r - s + 2):
                            left = {}
                            for (xz, y), c in self.cocompose(m, i, b).items():
                                shifted = s - b + 1
                                for (x, z), c2 in component(r - b + 1, self.framed).cocompose(xz, shifted, l).items():
                                    sign = -1 if (len(y) * len(z)) % 2 else 1
                                    vec_add(left, {(x, y, z): sign * c * c2})
                            right = {}
                            for (xy, z), c in self.cocompose(m, s, l).items():
                                for (x, y), c2 in component(r - l + 1, self.framed).cocompose(xy, i, b).items():
                                    vec_add(right, {(x, y, z): c * c2})
                            if left != right:
                                failures.append(f"parallel coassociativity fails on {monomial_text(m)} ({i},{b},{s},{l})")
        return failures

    def as_dict(self) -> Dict:
        return {'name': self.name, 'dims': {str(d): n for d, n in self.dims().items()},
                'poincare': {str(d): n for d, n in self.poincare().items()},
                'independent': {str(d): n for d, n in self.independent_dims().items()}}


def _tensor_product(u: Dict[Tuple[Monomial, Monomial], Fraction],
                    v: Dict[Tuple[Monomial, Monomial], Fraction]) -> Dict[Tuple[Monomial, Monomial], Fraction]:
    """Product in BV^c ⊗ BV^c with the Koszul rule."""
    out: Dict[Tuple[Monomial, Monomial], Fraction] = {}
    for (a, b), c in u.items():
        for (a2, b2), c2 in v.items():
            sign = -1 if (len(b) * len(a2)) % 2 else 1
            for am, ac in straighten(a + a2).items():
                for bm, bc in straighten(b + b2).items():
                    vec_add(out, {(am, bm): sign * c * c2 * ac * bc})
    return out


@lru_cache(maxsize=None)
def component(r: int, framed: bool = True) -> BVComponent:
    return BVComponent(r, framed)


def bv_component(r: int, framed: bool = True, window: Optional[TruncationWindow] = None) -> BVComponent:
    """
    BV^c(r) with its straightened basis.

    Raises:
        WindowOverflow: r exceeds the window arity
    """
    if window is not None and r > window.max_arity:
        raise WindowOverflow(f"arity {r} exceeds the window arity {window.max_arity}")
    c = component(r, framed)
    build_logger.debug(f"{c.name}: dims {c.dims()}")
    return c


# ==================== Cyclic transport ====================

@lru_cache(maxsize=None)
def _transport_generators(n: int) -> Dict[Gen, Tuple[Tuple[Monomial, Fraction], ...]]:
    """
    The transposition (0 1) on the generators of BV^c(n), pulled back along
    t_ij* -> ω_ij (t_ii* -> θ_i) from the cyclic map of ft(n).
    """
    algebra = DKAlgebra(n, framed=True, max_weight=1)
    tau = tau_framed(algebra)
    out = {}
    for g in generators(n):
        a, b = g
        # ω_ab lifts to t_ab*/2, θ_a to t_aa*
        lift = Fraction(1) if a == b else Fraction(1, 2)
        k = algebra.index[g]
        image: Dict[Monomial, Fraction] = {}
        for letter, target in enumerate(tau.images):
            coeff = target.get((k,), 0)
            if coeff:
                i, j = algebra.letters[letter]
                vec_add(image, {((i, j),): lift * coeff * (1 if i == j else 2)})
        out[g] = tuple(sorted(image.items()))
    _check_transport(n, out)
    return out


def _check_transport(n: int, images: Dict[Gen, Tuple[Tuple[Monomial, Fraction], ...]]):
    for a, b, c in combinations(range(1, n + 1), 3):
        total: Dict[Monomial, Fraction] = {}
        for factors, coeff in arnold_relation(a, b, c):
            left, right = (dict(images[_normal_gen(g)]) for g in factors)
            vec_add(total, multiply(left, right), coeff)
        if total:
            raise TransportFailure(f"the cyclic transport does not preserve the Arnold relation ({a}{b}{c})")


def transport(m: Monomial, n: int) -> Dict[Monomial, Fraction]:
    """The transposition (0 1) on a monomial of BV^c(n), as an algebra map."""
    images = _transport_generators(n)
    out: Dict[Monomial, Fraction] = {(): Fraction(1)}
    for g in m:
        out = multiply(out, dict(images[g]))
    return out


def relabel(m: Monomial, p: Perm) -> Dict[Monomial, Fraction]:
    """Index t becomes p[t]."""
    return straighten([(p[a], p[b]) for a, b in m])


# ==================== The operad ====================

class BVOperad(OperadData):
    """
    BV = H_•(fD_2) as the linear dual of BV^c. ('bv', n, M) has degree -|M|;
    the cyclic variant lets (0 1) act by the transport of the framed
    Drinfeld-Kohno cyclic map.
    """

    def __init__(self, window: Optional[TruncationWindow] = None, cyclic: bool = False):
        super().__init__(window)
        self.cyclic = cyclic
        self.name = "bv_cyc" if cyclic else "bv"
        self.unit = ('bv', 1, ())
        self._tables: Dict[Tuple[int, int, int], Dict] = {}
        self._pullbacks: Dict[Tuple[int, Perm], Dict[Monomial, Dict[Monomial, Fraction]]] = {}

    def basis(self, arity: int) -> List[Hashable]:
        if arity < 1:
            return []
        return [('bv', arity, m) for m in component(arity).basis()]

    def arity(self, x) -> int:
        return x[1]

    def degree(self, x) -> int:
        return -len(x[2])

    def _table(self, total: int, i: int, m: int) -> Dict[Tuple[Monomial, Monomial], List[Tuple[Monomial, Fraction]]]:
        key = (total, i, m)
        if key not in self._tables:
            table: Dict = {}
            c = component(total)
            for big in c.basis():
                for pair, coeff in c.cocompose(big, i, m).items():
                    table.setdefault(pair, []).append((big, coeff))
            self._tables[key] = table
        return self._tables[key]

    def compose(self, x, i, y) -> Vec:
        n, m = x[1], y[1]
        total = n + m - 1
        sign = -1 if (len(x[2]) * len(y[2])) % 2 else 1
        return {('bv', total, big): sign * c for big, c in self._table(total, i, m).get((x[2], y[2]), [])}

    def _pullback(self, n: int, p: Perm) -> Dict[Monomial, Dict[Monomial, Fraction]]:
        """For each monomial M', the pairings <x·p, M> = coefficient of M' in the image of M."""
        key = (n, p)
        if key not in self._pullbacks:
            table: Dict[Monomial, Dict[Monomial, Fraction]] = {}
            for big in component(n).basis():
                image = relabel(big, p) if p[0] == 0 else transport(big, n)
                for m2, c in image.items():
                    table.setdefault(m2, {})[big] = c
            self._pullbacks[key] = table
        return self._pullbacks[key]

    def permute(self, x, p) -> Vec:
        n = x[1]
        p = tuple(p)
        if p == tuple(range(n + 1)):
            return {x: Fraction(1)}
        if p[0] == 0 or p == transposition(n + 1, 0):
            if p[0] != 0 and not self.cyclic:
                raise ValueError("the output slot moves only in the cyclic BV operad")
            return {('bv', n, big): c for big, c in self._pullback(n, p).get(x[2], {}).items()}
        if not self.cyclic:
            raise ValueError("the output slot moves only in the cyclic BV operad")
        out: Vec = {x: Fraction(1)}
        for i in reduced_word(p):
            out = self.permute_vec(out, transposition(n + 1, i))
        return out


def bv_cyclic_action(r: int, window: Optional[TruncationWindow] = None) -> GroupAction:
    """S_(r+1) on BV((r+1)) = BV(r), in every degree."""
    return BVOperad(window, cyclic=True).component(r).action


def bv_module(window: Optional[TruncationWindow] = None) -> PointedModule:
    """BV^mod: the cyclic BV operad as a pointed right module over itself."""
    return PointedModule(BVOperad(window, cyclic=True))


def bv_comodule(window: Optional[TruncationWindow] = None) -> DualComodule:
    """BV^{c,mod}, the dual of BV^mod."""
    return DualComodule(bv_module(window))


# ==================== Degree-one basis ====================

def delta() -> Hashable:
    """The BV operator Δ in BV(1)."""
    return ('bv', 1, ((1, 1),))


def e_element(n: int, a: int, b: int) -> Vec:
    """
    E_ab in BV(n), 0 <= a < b <= n on the slots: E_ab = -ω_ab^∨/2 for a >= 1,
    E_0b = θ_b^∨ + Σ_{j != b} ω_bj^∨/2.
    """
    if not 0 <= a < b <= n:
        raise ValueError(f"need 0 <= a < b <= {n}, got ({a}, {b})")
    if a >= 1:
        return {('bv', n, ((a, b),)): Fraction(-1, 2)}
    out: Vec = {('bv', n, ((b, b),)): Fraction(1)}
    for j in range(1, n + 1):
        if j != b:
            out[('bv', n, (_normal_gen((b, j)),))] = Fraction(1, 2)
    return out


def e_basis(n: int) -> Dict[Tuple[int, int], Vec]:
    """The basis (E_ab) of the degree -1 part of BV(n)."""
    return {(a, b): e_element(n, a, b) for a in range(n + 1) for b in range(a + 1, n + 1)}
