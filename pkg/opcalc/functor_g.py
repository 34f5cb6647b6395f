"""
The functor G from pointed pairs (Q, M) to cyclic operads, the left
adjoint I to restriction, and G applied to a cobar construction.

G(Q, M) is the free cyclic operad on Ind Q̄ ⊕ M modulo
    ind(q1) ∘_j ind(q2) = ind(q1 ∘_j q2)
    m ∘_{i,0} ind(q)    = m ∘_i q
    point               = unit
where ind(q) puts the output of q at slot 0.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Dict, Hashable, List, Optional, Tuple

from core.base import TruncationWindow, Vec, WindowOverflow, build_logger, check_logger, vec_add
from core.ratlin import ComplexSlice, SparseMatrix, rank
from core.treecalc import MARKED, Canonicalizer, TreeGraph, evaluate_tree

from .barcobar import (
    CUT_LEG, BarDecorations, Cooperad, Marked, TreeComplex, cobar, cut_edge, rename_legs,
    split_names, strip_point,
)
from .free import FREE_UNIT, FreeOperad, GeneratorSet, QuotientOperad, induced_generators, quotient_by_ideal
from .modules import FreeTreeModule, ModuleData, PointedModule
from .operads import ForgetCyclic, OperadData


def output_at(o: int, slots: int) -> Tuple[int, ...]:
    """Permutation putting slot 0 at o and the inputs, in order, on the other slots."""
    p = [0] * slots
    rank_ = 1
    for t in range(slots):
        if t == o:
            continue
        p[t] = rank_
        rank_ += 1
    return tuple(p)


# ==================== Presentations ====================

def pair_generators(q: OperadData, m: Optional[ModuleData], top: int) -> GeneratorSet:
    """Ind Q̄ (labels ('ind', o, x)) plus M (labels ('mod', y)) up to arity top."""
    base = GeneratorSet({n: q.reduced_basis(n) for n in range(1, top + 1)},
                        {x: q.degree(x) for n in range(1, top + 1) for x in q.reduced_basis(n)},
                        q.permute)
    ind = induced_generators(base)
    basis = {n: list(labels) for n, labels in ind.basis.items()}
    degrees = dict(ind.degrees)
    if m is not None:
        for k in range(2, top + 2):
            labels = [('mod', y) for y in m.basis(k)]
            basis.setdefault(k - 1, []).extend(labels)
            degrees.update({label: m.degree(label[1]) for label in labels})

    def action(label, p) -> Vec:
        if label[0] == 'ind':
            return ind.permute(label, p)
        return {('mod', y): c for y, c in m.permute(label[1], p).items()}

    return GeneratorSet(basis, degrees, action, cyclic=True)


def _safely(build) -> Optional[Vec]:
    try:
        return build()
    except WindowOverflow:
        return None


def composition_relations(free: FreeOperad, q: OperadData, top: int) -> List[Vec]:
    """ind(q1) ∘_j ind(q2) - ind(q1 ∘_j q2)."""
    out = []
    for n1 in range(1, top + 1):
        for q1 in q.reduced_basis(n1):
            for n2 in range(1, top + 2 - n1):
                for q2 in q.reduced_basis(n2):
                    for j in range(1, n1 + 1):
                        rel = _safely(lambda: free.compose(free.generator(('ind', 0, q1)), j,
                                                           free.generator(('ind', 0, q2))))
                        if rel is None:
                            continue
                        for r, c in q.compose(q1, j, q2).items():
                            target = FREE_UNIT if r == q.unit else free.generator(('ind', 0, r))
                            vec_add(rel, {target: -c})
                        if rel:
                            out.append(rel)
    return out


def action_relations(free: FreeOperad, q: OperadData, m: ModuleData, top: int) -> List[Vec]:
    """m ∘_{i,0} ind(q) - m ∘_i q."""
    out = []
    for k in range(2, top + 2):
        for y in m.basis(k):
            for n in range(1, top + 3 - k):
                for x in q.reduced_basis(n):
                    for i in range(k):
                        rel = _safely(lambda: free.glue(free.generator(('mod', y)), i,
                                                        free.generator(('ind', 0, x)), 0))
                        if rel is None:
                            continue
                        for z, c in m.act(y, i, x).items():
                            vec_add(rel, {free.generator(('mod', z)): -c})
                        if rel:
                            out.append(rel)
    return out


def free_pair_G(q: FreeOperad, m: FreeTreeModule, w: Optional[TruncationWindow] = None,
                max_vertices: Optional[int] = None) -> QuotientOperad:
    """
    G on a free pair (F(A), F_pt(B)): the free cyclic operad on Ind A ⊕ B̄,
    B̄ being B without the point. No relations are needed.
    """
    w = w or q.window
    top = w.max_arity
    ind = induced_generators(q.gens)
    basis = {n: list(labels) for n, labels in ind.basis.items() if n <= top}
    degrees = dict(ind.degrees)
    point = m.point[1][0][1]
    for k in range(2, top + 2):
        labels = [('mod', y) for y in m.gens.get(k, []) if y != point]
        basis.setdefault(k - 1, []).extend(labels)
        degrees.update({label: m.gen_degrees.get(label[1], 0) for label in labels})

    def action(label, p) -> Vec:
        if label[0] == 'ind':
            return ind.permute(label, p)
        return {('mod', h): c for h, c in m.gen_action(label[1], p).items()}

    gens = GeneratorSet(basis, degrees, action, cyclic=True)
    free = FreeOperad(gens, w, 'cyclic', max_vertices or top + 1, name=f"F_cyc(Ind {q.name} ⊕ {m.name}‾)")
    build_logger.info(f"G({q.name}, {m.name}) on free generators: {sum(map(len, basis.values()))} labels")
    return quotient_by_ideal(free, [], name=f"G({q.name}, {m.name})")


def functor_G(q: OperadData, m: ModuleData, w: Optional[TruncationWindow] = None,
              max_vertices: Optional[int] = None) -> QuotientOperad:
    """
    G(Q, M) as a presented cyclic operad. A free module over a free operad
    goes through free_pair_G.
    """
    if m.point is None:
        raise ValueError("functor_G needs a pointed module")
    if isinstance(q, FreeOperad) and isinstance(m, FreeTreeModule) and m.free is q:
        return free_pair_G(q, m, w, max_vertices)
    w = w or q.window
    top = w.max_arity
    gens = pair_generators(q, m, top)
    free = FreeOperad(gens, w, 'cyclic', max_vertices or top + 1, name=f"F_cyc(Ind {q.name} ⊕ {m.name})")
    relations = composition_relations(free, q, top)
    relations += action_relations(free, q, m, top)
    relations.append({free.generator(('mod', m.point)): Fraction(1), FREE_UNIT: Fraction(-1)})
    build_logger.info(f"G({q.name}, {m.name}): {len(gens.basis)} generator arities, {len(relations)} relations")
    return QuotientOperad(free, relations, name=f"G({q.name}, {m.name})")


def induced_cyclic(q: OperadData, w: Optional[TruncationWindow] = None,
                   max_vertices: Optional[int] = None) -> QuotientOperad:
    """I(Q) = F_cyc(Ind Q̄) modulo the composition relations."""
    w = w or q.window
    top = w.max_arity
    gens = pair_generators(q, None, top)
    free = FreeOperad(gens, w, 'cyclic', max_vertices or top + 1, name=f"F_cyc(Ind {q.name})")
    return QuotientOperad(free, composition_relations(free, q, top), name=f"I({q.name})")


# ==================== Counit of a presentation ====================

def evaluate_free(free: FreeOperad, x, p: OperadData, image) -> Vec:
    """Send every vertex through image(label) -> P-vector and compose in P."""
    if x == FREE_UNIT:
        return {p.unit: Fraction(1)}
    graph = free.graph(x)
    options = [list(image(dec).items()) for dec in graph.decorations]
    canon = Canonicalizer(permute=p.permute, degree=p.degree, edge_degree=0)
    out: Vec = {}
    for combo in product(*options):
        coeff = Fraction(1)
        for _, c in combo:
            coeff *= c
        g = TreeGraph(graph.ports, [d for d, _ in combo], [('v', v) for v in range(len(combo))], None)
        vec_add(out, evaluate_tree(g, p.glue, p.permute, canon), coeff)
    return out


def pair_counit_image(p: OperadData):
    """Generators of G(F(P), P^mod) evaluated in P."""
    def image(label) -> Vec:
        if label[0] == 'ind':
            _, o, x = label
            return p.permute(x, output_at(o, p.slots(x)))
        return {label[1]: Fraction(1)}
    return image


@dataclass
class PresentationCounit:
    """The canonical map G(F(P), P^mod) -> P, arity by arity."""
    matrices: Dict[int, SparseMatrix]
    kills_ideal: bool
    iso: Dict[int, bool] = field(default_factory=dict)


def presentation_counit(g: QuotientOperad, p: OperadData) -> PresentationCounit:
    image = pair_counit_image(p)
    matrices, iso = {}, {}
    kills = True
    for n, echelon in g.ideal.items():
        for _, ids in echelon.reduced_rows():
            out: Vec = {}
            for key, c in g._keys(ids).items():
                vec_add(out, evaluate_free(g.free, key, p, image), c)
            if out:
                kills = False
    for n in range(1, g.window.max_arity + 1):
        src = g.basis(n)
        tgt = p.basis(n)
        index = {x: i for i, x in enumerate(tgt)}
        columns = [{index[y]: c for y, c in evaluate_free(g.free, x, p, image).items()} for x in src]
        mat = SparseMatrix.from_columns(len(tgt), columns)
        matrices[n] = mat
        iso[n] = len(src) == len(tgt) == rank(mat)
    check_logger.info(f"counit {g.name} -> {p.name}: kills ideal {kills}, iso {iso}")
    return PresentationCounit(matrices, kills, iso)


# ==================== G of a cobar construction ====================

class PairCooperad(Cooperad):
    """
    Ind C̄ ⊕ M̄ for C = Bar(F(P)) and M = Bar(P^mod), a 1-shifted cyclic
    cooperad without counit.

    Labels are ('ind', key) for bar trees of F(P) rooted at their output
    leg and ('mod', key) for marked trees. The differential on ('mod', ...)
    has an extra part d' coming from cuts that split off the point.
    """

    shift = 1
    cyclic = True

    def __init__(self, p: OperadData, w: Optional[TruncationWindow] = None):
        if not p.cyclic:
            raise ValueError("the pair cooperad needs a cyclic operad")
        self.p = p
        self.window = w or p.window
        self.name = f"Ind Bar({p.name})‾ ⊕ Bar({p.name}^mod)‾"
        self.nc = TreeComplex(BarDecorations(ForgetCyclic(p)), 'bar', 'operad', self.window, name=f"Bar(F {p.name})")
        self.module = PointedModule(p)
        self.mod = TreeComplex(BarDecorations(p, self.module), 'bar', 'module', self.window,
                               name=f"Bar({self.module.name})")
        self.cyc = BarDecorations(p).canonicalizer()
        self._labels: Dict[int, List[Hashable]] = {}

    # ==================== Labels ====================

    def ind_labels(self, slots: int) -> List[Hashable]:
        out = []
        if slots < 2:
            return out
        for key in self.nc.all_keys(slots - 1):
            for o in range(slots):
                for k2 in self.nc.relabel(key, output_at(o, slots), o):
                    out.append(('ind', k2))
        return out

    def labels(self, slots):
        if slots not in self._labels:
            self._labels[slots] = self.ind_labels(slots) + [('mod', k) for k in self.mod.all_keys(slots)]
        return self._labels[slots]

    def basis(self, slots) -> Dict[int, List[Hashable]]:
        out: Dict[int, List[Hashable]] = {}
        for x in self.labels(slots):
            out.setdefault(self.degree(x), []).append(x)
        return out

    def degree(self, x):
        return (self.nc if x[0] == 'ind' else self.mod).degree(x[1])

    def permute(self, x, p):
        tag, key = x
        if tag == 'ind':
            inv = [0] * len(p)
            for t, s in enumerate(p):
                inv[s] = t
            return {('ind', k): c for k, c in self.nc.relabel(key, p, inv[key[0]]).items()}
        return {('mod', k): c for k, c in self.mod.relabel(key, p, None).items()}

    # ==================== Differential ====================

    def d_prime(self, x) -> Vec:
        """The part of the differential produced by splitting off the point."""
        if x[0] != 'mod':
            return {}
        stripped = strip_point(self.mod, x[1], self.module.point)
        if stripped is None:
            return {}
        j, t, sign = stripped
        return {('ind', k): -sign * c for k, c in self.cyc.canonicalize(t, j).items()}

    def internal(self, x) -> Vec:
        tag, key = x
        source = self.nc if tag == 'ind' else self.mod
        out = {}
        for k, c in source.differential_of(key).items():
            if tag == 'mod' and self.mod.decorations.is_coaugmentation(k):
                continue
            out[(tag, k)] = c
        return out

    def differential(self, x) -> Vec:
        out = self.internal(x)
        vec_add(out, self.d_prime(x))
        return out

    # ==================== Cocomposition ====================

    def cocompose(self, x, block):
        tag, key = x
        source = self.nc if tag == 'ind' else self.mod
        graph = source.graph(key)
        degree = source.canon.item_degree(graph)
        target = sorted(block)
        out: Dict[Tuple, Fraction] = {}
        for w in range(1, len(graph.ports)):
            cut = cut_edge(graph, w, degree)
            if 0 in cut.upper_legs:
                if cut.lower_legs != target:
                    continue
                outer_graph, inner_graph, upper_first = cut.upper, cut.lower, True
                outer_names, inner_names = split_names(cut.upper_legs, target)
            else:
                if cut.upper_legs != target:
                    continue
                outer_graph, inner_graph, upper_first = cut.lower, cut.upper, False
                outer_names, inner_names = split_names(cut.lower_legs, target)
            if tag == 'mod' and self._is_point_half(cut.lower):
                continue
            outer = self._half(rename_legs(outer_graph, outer_names), tag, outer_names, key[0],
                               outer_graph is cut.lower)
            inner = self._half(rename_legs(inner_graph, inner_names), tag, inner_names, key[0],
                               inner_graph is cut.lower)
            sign = cut.sign(upper_first)
            for ok, oc in outer.items():
                for ik, ic in inner.items():
                    total = out.get((ok, ik), 0) + sign * oc * ic
                    if total:
                        out[(ok, ik)] = total
                    else:
                        out.pop((ok, ik), None)
        return out

    def _is_point_half(self, half: TreeGraph) -> bool:
        return (len(half.ports) == 1 and half.marked == 0 and len(half.ports[0]) == 2
                and half.decorations[0] == Marked(self.module.point))

    def _half(self, graph: TreeGraph, tag: str, names: Dict[int, int], anchor, is_lower: bool) -> Vec:
        """Canonical label of one half; the half holding the old root keeps it."""
        if tag == 'mod' and is_lower:
            return {('mod', k): c for k, c in self.mod.canonical(graph, None).items()}
        if tag == 'ind' and is_lower:
            root = names[anchor]
        else:
            root = names[CUT_LEG]
        return {('ind', k): c for k, c in self.nc.canonical(graph, root).items()}


COBAR_UNIT = ('unit',)


def with_unit(c: ComplexSlice) -> ComplexSlice:
    """Append the unit tree to degree 0 of a ((2)) slice; it is a cycle and no boundary."""
    spaces = {d: list(keys) for d, keys in c.spaces.items()}
    spaces.setdefault(0, []).append(COBAR_UNIT)
    differentials = dict(c.differentials)
    if -1 in differentials:
        m = differentials[-1]
        differentials[-1] = SparseMatrix(m.rows + 1, m.cols, m.entries)
    if 0 in differentials:
        m = differentials[0]
        differentials[0] = SparseMatrix(m.rows, m.cols + 1, m.entries)
    return ComplexSlice(spaces, differentials, c.complete)


@dataclass
class GOfCobar:
    """Bar^c_cyc(Ind C̄ ⊕ M̄) together with the oracle comparison."""
    cooperad: PairCooperad
    complex: TreeComplex
    dims: Dict[int, Dict[int, int]] = field(default_factory=dict)
    oracle_dims: Dict[int, Dict[int, int]] = field(default_factory=dict)

    @property
    def matches(self) -> bool:
        return self.dims == self.oracle_dims

    def slice(self, r: int) -> ComplexSlice:
        """Slice of the cobar construction, the unit included at ((2))."""
        c = self.complex.slice(r)
        return with_unit(c) if r == 2 else c


def _graded_dims(q: QuotientOperad, n: int) -> Dict[int, int]:
    out: Dict[int, int] = {}
    for x in q.basis(n):
        d = q.degree(x)
        out[d] = out.get(d, 0) + 1
    return out


def g_of_cobar(p: OperadData, w: Optional[TruncationWindow] = None, arities: Optional[List[int]] = None,
               oracle: bool = True) -> GOfCobar:
    """
    Cobar construction of the pair cooperad for (Bar F(P), Bar P^mod), with
    every slice built (so d² = 0 is asserted) and, when oracle is set, the
    graded dimensions compared with functor_G on the underlying free pair
    (Bar^c C, Bar^c(C, M)).
    """
    w = w or p.window
    arities = arities or list(range(2, w.max_arity + 2))
    k = PairCooperad(p, w)
    complex_ = cobar(k, 'cyclic', w=w, name=f"Bar^c({k.name})")
    result = GOfCobar(k, complex_)
    for r in arities:
        c = result.slice(r)
        result.dims[r] = {d: n for d, n in ((d, c.dim(d)) for d in c.degrees()) if n}
    if oracle:
        q, m = cobar_pair_presentation(k, w)
        g = functor_G(q, m, w)
        for r in arities:
            result.oracle_dims[r] = _graded_dims(g, r - 1)
    check_logger.info(f"G(Bar^c) for {p.name}: dims {result.dims}, oracle {result.oracle_dims}")
    return result


def cobar_pair_presentation(k: PairCooperad, w: TruncationWindow) -> Tuple[FreeOperad, FreeTreeModule]:
    """Underlying graded (Bar^c C, Bar^c(C, M)) as a free operad and free module."""
    top = w.max_arity
    nc = k.nc
    gens = GeneratorSet({n: nc.all_keys(n) for n in range(1, top + 1)},
                        {x: nc.degree(x) for n in range(1, top + 1) for x in nc.all_keys(n)},
                        lambda x, p: nc.relabel(x, p, 0))
    q = FreeOperad(gens, w, 'plain', top, name=f"Bar^c({nc.name})")
    point = (MARKED, (Marked(k.module.point), (0, 1)))
    module_gens = {s: list(k.mod.all_keys(s)) for s in range(1, top + 2)}
    module_gens.setdefault(2, []).insert(0, point)
    degrees = {x: k.mod.degree(x) for labels in module_gens.values() for x in labels}
    m = FreeTreeModule(q, module_gens, degrees, lambda x, p: k.mod.relabel(x, p, None), point, top + 1,
                       name=f"Bar^c({k.mod.name})")
    return q, m
