"""
Free (cyclic) operads on decorated trees and their quotients by ideals.

Elements of the free operad are canonical decorated trees anchored at leg 0;
the unit is the bare edge ``FREE_UNIT``. Generator actions must be monomial
(each permutation sends a generator to a signed generator).
"""

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Callable, Dict, Hashable, List, Optional, Sequence, Tuple

from core.base import TruncationWindow, Vec, WindowOverflow, build_logger, vec_add
from core.ratlin import Echelon
from core.symseq import Perm, invert_perm, transposition
from core.treecalc import Canonicalizer, Tree, TreeGraph, enumerate_trees, node_leaves, tree_to_graph, sort_key

from .operads import OperadData

FREE_UNIT = ('unit',)


@dataclass
class GeneratorSet:
    """
    Generators of a free operad.

    Attributes:
        basis: arity -> generator labels
        degrees: label -> degree (missing labels have degree 0)
        action: action(label, p) -> {label: coeff}; None for the trivial action
        cyclic: whether the action covers permutations moving slot 0
    """
    basis: Dict[int, List[Hashable]]
    degrees: Dict[Hashable, int] = field(default_factory=dict)
    action: Optional[Callable[[Hashable, Perm], Vec]] = None
    cyclic: bool = False

    def __post_init__(self):
        self._arity = {g: n for n, gens in self.basis.items() for g in gens}

    def arity(self, g: Hashable) -> int:
        return self._arity[g]

    def degree(self, g: Hashable) -> int:
        return self.degrees.get(g, 0)

    def permute(self, g: Hashable, p: Perm) -> Vec:
        if self.action is None:
            return {g: Fraction(1)}
        return self.action(g, p)

    def arities(self) -> List[int]:
        return sorted(n for n, gens in self.basis.items() if gens)


def induced_generators(gens: GeneratorSet) -> GeneratorSet:
    """
    Ind of a non-cyclic generator set: labels ('ind', o, g) put the output of g
    at slot o and its inputs at the remaining slots in increasing order.
    """
    basis = {n: [('ind', o, g) for o in range(n + 1) for g in labels] for n, labels in gens.basis.items()}
    degrees = {('ind', o, g): gens.degree(g) for labels in basis.values() for (_, o, g) in labels}

    def act(label, p: Perm) -> Vec:
        _, o, g = label
        return induced_permute(o, g, p, gens.permute)

    return GeneratorSet(basis, degrees, act, cyclic=True)


def induced_permute(o: int, g: Hashable, p: Perm, permute: Callable[[Hashable, Perm], Vec]) -> Vec:
    """Relabel an Ind element (output o, non-cyclic element g) by p."""
    inv = invert_perm(p)
    new_output = inv[o]
    old_inputs = [s for s in range(len(p)) if s != o]
    new_positions = [inv[s] for s in old_inputs]
    ranked = sorted(range(len(old_inputs)), key=lambda k: new_positions[k])
    inner = (0,) + tuple(k + 1 for k in ranked)
    image = permute(g, inner) if inner != tuple(range(len(inner))) else {g: Fraction(1)}
    return {('ind', new_output, h): c for h, c in image.items()}


class FreeOperad(OperadData):
    """
    Free operad (or free cyclic operad) on a generator set, truncated at a
    number of vertices.
    """

    def __init__(self, gens: GeneratorSet, window: Optional[TruncationWindow] = None,
                 variant: str = 'plain', max_vertices: Optional[int] = None, name: str = "free"):
        super().__init__(window)
        if variant not in ('plain', 'cyclic'):
            raise ValueError(f"unknown free operad variant {variant!r}")
        if variant == 'cyclic' and not gens.cyclic:
            raise ValueError("cyclic free operad needs a cyclic generator action")
        self.gens = gens
        self.cyclic = variant == 'cyclic'
        self.name = name
        self.max_vertices = max_vertices if max_vertices is not None else self.window.max_arity
        self.unit = FREE_UNIT
        self.canon = Canonicalizer(permute=gens.permute, degree=gens.degree)
        self._basis: Dict[int, List[Hashable]] = {}
        self._degree: Dict[Hashable, int] = {FREE_UNIT: 0}

    # ==================== Basis ====================

    def basis(self, arity: int) -> List[Hashable]:
        if arity in self._basis:
            return self._basis[arity]
        out: List[Hashable] = [FREE_UNIT] if arity == 1 else []
        arities = self.gens.arities()
        if arities:
            seen = set()
            shapes = enumerate_trees(range(arity + 1), 'unrooted', self.max_vertices,
                                     min_valence=min(arities) + 1)
            for shape in shapes:
                graph = tree_to_graph(shape)
                choices = [self.gens.basis.get(len(ports) - 1, []) for ports in graph.ports]
                for combo in product(*choices):
                    g = graph.copy()
                    g.decorations = list(combo)
                    g.word = [('v', k) for k in range(len(g.ports))]
                    degree = sum(self.gens.degree(d) for d in combo)
                    if not self.window.contains_degree(degree):
                        continue
                    for key in self.canon.canonicalize(g, 0):
                        if key not in seen:
                            seen.add(key)
                            self._degree[key] = degree
                            out.append(key)
            out[1 if arity == 1 else 0:] = sorted(out[1 if arity == 1 else 0:], key=sort_key)
        self._basis[arity] = out
        build_logger.debug(f"{self.name}: arity {arity} has {len(out)} basis trees")
        return out

    def arity(self, x) -> int:
        if x == FREE_UNIT:
            return 1
        return len(node_leaves(x[1]))

    def degree(self, x) -> int:
        if x not in self._degree:
            self._degree[x] = sum(self.gens.degree(v[0]) for v in Tree(x[1], 0).vertices())
        return self._degree[x]

    def generator(self, g: Hashable) -> Hashable:
        """The one-vertex tree of a generator."""
        n = self.gens.arity(g)
        return (0, (g, tuple(range(1, n + 1))))

    def vertex_count(self, x) -> int:
        return 0 if x == FREE_UNIT else Tree(x[1], 0).vertex_count()

    # ==================== Structure maps ====================

    def graph(self, x, legs: Optional[Sequence[int]] = None) -> TreeGraph:
        """Graph of a basis tree, legs 0..n renamed through ``legs``."""
        g = tree_to_graph(Tree(x[1], 0))
        if legs is not None:
            g.ports = [[('leg', legs[p[1]]) if p[0] == 'leg' else p for p in ports] for ports in g.ports]
        return g

    def compose(self, x, i, y) -> Vec:
        if x == FREE_UNIT:
            return {y: Fraction(1)}
        n, m = self.arity(x), self.arity(y)
        if y == FREE_UNIT:
            return {x: Fraction(1)}
        x_legs = [0] + [l if l < i else (None if l == i else l + m - 1) for l in range(1, n + 1)]
        y_legs = [None] + [j + i - 1 for j in range(1, m + 1)]
        gx = self.graph(x, x_legs)
        gy = self.graph(y, y_legs)
        v, slot = gx.leg_port(None)
        offset = len(gx.ports)
        gy.ports = [[('v', p[1] + offset) if p[0] == 'v' else p for p in ports] for ports in gy.ports]
        w, wslot = gy.leg_port(None)
        gx.ports[v][slot] = ('v', w + offset)
        gy.ports[w][wslot] = ('v', v)
        graph = TreeGraph(gx.ports + gy.ports, gx.decorations + gy.decorations,
                          [('v', k) for k in range(offset + len(gy.ports))])
        return self._finish(graph)

    def permute(self, x, p) -> Vec:
        if p[0] != 0 and not self.cyclic:
            raise ValueError("plain free operad cannot move the output slot")
        if x == FREE_UNIT:
            return {x: Fraction(1)}
        inv = invert_perm(p)
        g = self.graph(x, [inv[l] for l in range(len(p))])
        g.word = [('v', k) for k in range(len(g.ports))]
        return self._finish(g)

    def _finish(self, graph: TreeGraph) -> Vec:
        if len(graph.ports) > self.max_vertices:
            raise WindowOverflow(f"{self.name}: composite has {len(graph.ports)} vertices, bound is {self.max_vertices}")
        degree = sum(self.gens.degree(d) for d in graph.decorations)
        if not self.window.contains_degree(degree):
            raise WindowOverflow(f"{self.name}: composite of degree {degree} leaves the window")
        return self.canon.canonicalize(graph, 0)

    def fits(self, arity: int, vertices: int) -> bool:
        return arity <= self.window.max_arity and vertices <= self.max_vertices


def free_operad(gens: GeneratorSet, w: Optional[TruncationWindow] = None, variant: str = 'plain',
                max_vertices: Optional[int] = None) -> FreeOperad:
    """Free operad on gens; composites escaping the window raise WindowOverflow."""
    w = w or TruncationWindow()
    for label, degree in gens.degrees.items():
        if not w.contains_degree(degree):
            raise WindowOverflow(f"generator {label!r} has degree {degree} outside the window")
    return FreeOperad(gens, w, variant, max_vertices)


# ==================== Quotients ====================

class QuotientOperad(OperadData):
    """
    Free operad modulo the ideal generated by relations, arity-wise.

    The ideal is closed under composition with generators on both sides and
    under the symmetric (or cyclic) action until nothing new appears within
    the window. Basis labels are the free trees that are not pivots of the
    ideal.
    """

    def __init__(self, free: FreeOperad, relations: Sequence[Vec], name: str = "quotient"):
        super().__init__(free.window)
        self.free = free
        self.cyclic = free.cyclic
        self.name = name
        self.unit = free.unit
        self._index: Dict[Hashable, Tuple[int, int]] = {}
        self._labels: Dict[Tuple[int, int], Hashable] = {}
        self.ideal: Dict[int, Echelon] = {}
        self._close(relations)

    def _ids(self, v: Vec) -> Dict[Tuple[int, int], Fraction]:
        out = {}
        for key, c in v.items():
            if key not in self._index:
                n = self.free.arity(key)
                for j, label in enumerate(self.free.basis(n)):
                    self._index[label] = (n, j)
                    self._labels[(n, j)] = label
            out[self._index[key]] = c
        return out

    def _keys(self, v: Dict[Tuple[int, int], Fraction]) -> Vec:
        return {self._labels[i]: c for i, c in v.items()}

    def _close(self, relations: Sequence[Vec]):
        free = self.free
        top = self.window.max_arity
        generators = [free.generator(g) for n in free.gens.arities() for g in free.gens.basis[n]]
        queue: List[Vec] = []

        def push(v: Vec):
            if not v:
                return
            n = free.arity(next(iter(v)))
            echelon = self.ideal.setdefault(n, Echelon())
            if echelon.add(self._ids(v)):
                queue.append(v)

        for rel in relations:
            push(rel)
        while queue:
            v = queue.pop()
            n = free.arity(next(iter(v)))
            moves = [transposition(n + 1, i) for i in range(1, n)]
            if self.cyclic:
                moves.append(transposition(n + 1, 0))
            for s in moves:
                push(free.permute_vec(v, s))
            for g in generators:
                k = free.arity(g)
                if n + k - 1 > top:
                    continue
                for i in range(1, n + 1):
                    push(self._safe(v, i, {g: Fraction(1)}))
                for i in range(1, k + 1):
                    push(self._safe({g: Fraction(1)}, i, v))
        build_logger.debug(f"{self.name}: ideal dims {{{', '.join(f'{n}: {len(e)}' for n, e in sorted(self.ideal.items()))}}}")

    def _safe(self, u: Vec, i: int, v: Vec) -> Vec:
        try:
            return self.free.compose_vec(u, i, v)
        except WindowOverflow:
            return {}

    def reduce(self, v: Vec) -> Vec:
        if not v:
            return {}
        n = self.free.arity(next(iter(v)))
        ids = self._ids(v)
        if n in self.ideal:
            ids = self.ideal[n].reduce(ids)
        return self._keys(ids)

    def basis(self, arity: int) -> List[Hashable]:
        labels = self.free.basis(arity)
        pivots = self.ideal[arity].pivots if arity in self.ideal else {}
        self._ids({label: 1 for label in labels})
        return [label for label in labels if self._index[label] not in pivots]

    def arity(self, x):
        return self.free.arity(x)

    def degree(self, x):
        return self.free.degree(x)

    def compose(self, x, i, y) -> Vec:
        return self.reduce(self.free.compose(x, i, y))

    def permute(self, x, p) -> Vec:
        return self.reduce(self.free.permute(x, p))

    def augmentation(self, x) -> Fraction:
        return Fraction(1) if x == self.unit else Fraction(0)


def quotient_by_ideal(free: FreeOperad, relations: Sequence[Vec], name: str = "quotient") -> QuotientOperad:
    """Quotient of a free operad by the operadic (cyclic) ideal generated by relations."""
    return QuotientOperad(free, [r for r in relations if r], name)
