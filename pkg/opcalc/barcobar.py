"""
Bar and cobar constructions as graded complexes of decorated trees.

Conventions:
    - Bar: vertices decorated by the augmentation ideal, edges of degree -1,
      D = d_internal + (edge contractions). Cogenerators are not shifted.
    - Cobar of a cooperad with cocomposition of degree ``shift``: edges of
      degree 1 - shift, D = d_internal - (vertex splittings).
    - Variants: 'operad' (legs 0..r, output leg 0), 'cyclic' (legs 0..r-1 at
      arity ((r))), 'module' (legs 0..k-1, marked root vertex decorated by
      the module).

Every element is a canonical key (anchor, node); its sign word lists the
edges in preorder of their lower vertex followed by the vertices.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from typing import Callable, Dict, Hashable, Iterable, List, Optional, Sequence, Tuple

from core.base import TruncationWindow, Vec, WindowOverflow, build_logger, vec_add
from core.ratlin import ComplexSlice, SparseMatrix, homology_dims
from core.symseq import ArityComponent, GradedSpace, GroupAction, Perm, invert_perm, transposition
from core.treecalc import (
    MARKED, Canonicalizer, Tree, TreeGraph, contract_decorated, edge_item, enumerate_trees,
    evaluate_tree, koszul_sign, move_to_front, split_decorated, tree_to_graph,
)

from .modules import ModuleData
from .operads import OperadData


@dataclass(frozen=True)
class Marked:
    """Decoration of the marked vertex (module or comodule element)."""
    label: Hashable


def decorate(node, decorations: Iterable) -> Tuple:
    """Fill the vertices of a shape, in preorder, with decorations."""
    it = iter(decorations)

    def walk(n):
        dec = next(it)
        return (dec, tuple(walk(c) if isinstance(c, tuple) else c for c in n[1]))
    return walk(node)


def key_vertices(key) -> List:
    return Tree(key[1], key[0]).vertices()


def key_degree(key, degree: Callable[[Hashable], int], edge_degree: int) -> int:
    nodes = key_vertices(key)
    return sum(degree(n[0]) for n in nodes) + edge_degree * (len(nodes) - 1)


# ==================== Decoration sources ====================

class Decorations:
    """What may sit on the vertices of a tree complex, and how it behaves."""

    edge_degree = -1
    shift = 0

    def labels(self, slots: int) -> List[Hashable]:
        raise NotImplementedError

    def marked_labels(self, slots: int) -> List[Hashable]:
        return []

    def degree(self, dec) -> int:
        raise NotImplementedError

    def permute(self, dec, p: Perm) -> Vec:
        raise NotImplementedError

    def differential(self, dec) -> Vec:
        return {}

    def is_coaugmentation(self, key) -> bool:
        return False

    def canonicalizer(self) -> Canonicalizer:
        return Canonicalizer(permute=self.permute, degree=self.degree, edge_degree=self.edge_degree)

    def min_slots(self, top: int, marked: bool = False) -> int:
        for k in range(1, top + 1):
            if (self.marked_labels(k) if marked else self.labels(k)):
                return k
        return top + 1


class BarDecorations(Decorations):
    """The augmentation ideal of an operad, and optionally a module on the marked vertex."""

    edge_degree = -1

    def __init__(self, operad: OperadData, module: Optional[ModuleData] = None):
        self.operad = operad
        self.module = module

    def labels(self, slots):
        return self.operad.reduced_basis(slots - 1) if slots >= 2 else []

    def marked_labels(self, slots):
        if self.module is None:
            return []
        return [Marked(m) for m in self.module.basis(slots)]

    def degree(self, dec):
        if isinstance(dec, Marked):
            return self.module.degree(dec.label)
        return self.operad.degree(dec)

    def permute(self, dec, p):
        if isinstance(dec, Marked):
            return {Marked(m): c for m, c in self.module.permute(dec.label, p).items()}
        return self.operad.permute(dec, p)

    def differential(self, dec):
        if isinstance(dec, Marked):
            return {Marked(m): c for m, c in self.module.differential(dec.label).items()}
        return {x: c for x, c in self.operad.differential(dec).items() if x != self.operad.unit}

    def glue(self, x, a, y, b) -> Vec:
        if isinstance(x, Marked):
            return {Marked(m): c for m, c in self.module.glue(x.label, a, y, b).items()}
        return {z: c for z, c in self.operad.glue(x, a, y, b).items() if z != self.operad.unit}

    def is_coaugmentation(self, key) -> bool:
        node = key[1]
        return (key[0] == MARKED and len(node[1]) == 2 and all(not isinstance(c, tuple) for c in node[1])
                and self.module is not None and node[0] == Marked(self.module.point))


class Cooperad:
    """
    Interface of a (1-shifted) cooperad for the cobar construction.

    ``cocompose(x, block)`` returns {(outer, inner): coeff} for the slots in
    block (never containing 0) collected into the inner factor: the outer
    factor has the remaining slots in order with the new slot at min(block),
    the inner factor has slot 0 towards the outer one followed by the block.
    """

    shift = 0
    cyclic = False

    def labels(self, slots: int) -> List[Hashable]:
        raise NotImplementedError

    def degree(self, x) -> int:
        raise NotImplementedError

    def permute(self, x, p: Perm) -> Vec:
        raise NotImplementedError

    def differential(self, x) -> Vec:
        return {}

    def cocompose(self, x, block: Sequence[int]) -> Dict[Tuple[Hashable, Hashable], Fraction]:
        raise NotImplementedError


class Comodule:
    """Interface of a right comodule for the module cobar construction."""

    def labels(self, slots: int) -> List[Hashable]:
        raise NotImplementedError

    def degree(self, m) -> int:
        raise NotImplementedError

    def permute(self, m, p: Perm) -> Vec:
        raise NotImplementedError

    def differential(self, m) -> Vec:
        return {}

    def coact(self, m, block: Sequence[int]) -> Dict[Tuple[Hashable, Hashable], Fraction]:
        """Same slot conventions as Cooperad.cocompose; any proper block allowed."""
        raise NotImplementedError


class CobarDecorations(Decorations):

    def __init__(self, cooperad: Cooperad, comodule: Optional[Comodule] = None):
        self.cooperad = cooperad
        self.comodule = comodule
        self.shift = cooperad.shift
        self.edge_degree = 1 - cooperad.shift

    def labels(self, slots):
        return self.cooperad.labels(slots)

    def marked_labels(self, slots):
        if self.comodule is None:
            return []
        return [Marked(m) for m in self.comodule.labels(slots)]

    def degree(self, dec):
        if isinstance(dec, Marked):
            return self.comodule.degree(dec.label)
        return self.cooperad.degree(dec)

    def permute(self, dec, p):
        if isinstance(dec, Marked):
            return {Marked(m): c for m, c in self.comodule.permute(dec.label, p).items()}
        return self.cooperad.permute(dec, p)

    def differential(self, dec):
        if isinstance(dec, Marked):
            return {Marked(m): c for m, c in self.comodule.differential(dec.label).items()}
        return self.cooperad.differential(dec)

    def cocompose(self, dec, block) -> Vec:
        if isinstance(dec, Marked):
            return {(Marked(o), i): c for (o, i), c in self.comodule.coact(dec.label, block).items()}
        return self.cooperad.cocompose(dec, block)


# ==================== Tree complexes ====================

class TreeComplex:
    """
    Bar or cobar complex, built slice by slice within a truncation window.

    Args:
        decorations: BarDecorations or CobarDecorations
        kind: 'bar' or 'cobar'
        variant: 'operad', 'cyclic' or 'module'
        window: truncation window (degree range and arity bound)
        max_vertices: bound on tree size; defaults to a bound that is exact
            whenever no bivalent decoration exists
    """

    def __init__(self, decorations: Decorations, kind: str, variant: str,
                 window: Optional[TruncationWindow] = None, max_vertices: Optional[int] = None,
                 name: str = ""):
        if kind not in ('bar', 'cobar'):
            raise ValueError(f"unknown complex kind {kind!r}")
        if variant not in ('operad', 'cyclic', 'module'):
            raise ValueError(f"unknown complex variant {variant!r}")
        self.decorations = decorations
        self.kind = kind
        self.variant = variant
        self.window = window or TruncationWindow()
        self.max_vertices = max_vertices
        self.name = name or f"{kind}-{variant}"
        self.canon = decorations.canonicalizer()
        self._basis: Dict[int, Dict[int, List[Hashable]]] = {}
        self._slices: Dict[int, ComplexSlice] = {}

    # ==================== Basis ====================

    def legs(self, r: int) -> List[int]:
        return list(range(r + 1)) if self.variant == 'operad' else list(range(r))

    def arity_of(self, key) -> int:
        legs = len(Tree(key[1], key[0]).legs())
        return legs - 1 if self.variant == 'operad' else legs

    def vertex_bound(self, r: int) -> int:
        if self.max_vertices is not None:
            return self.max_vertices
        n = len(self.legs(r))
        top = n + 1
        if self.decorations.min_slots(top) >= 3:
            return max(1, n - 2) + (1 if self.variant == 'module' else 0)
        return n + (self.window.degree_max - self.window.degree_min)

    def basis(self, r: int) -> Dict[int, List[Hashable]]:
        """Canonical keys of arity r grouped by degree (window degrees only)."""
        if r in self._basis:
            return self._basis[r]
        legs = self.legs(r)
        bound = self.vertex_bound(r)
        dec = self.decorations
        if self.variant == 'module':
            shapes = enumerate_trees(legs, 'with_marked_vertex', bound,
                                     min_valence=dec.min_slots(len(legs) + 1),
                                     marked_min_valence=dec.min_slots(len(legs) + 1, marked=True))
        else:
            shapes = enumerate_trees(legs, 'unrooted', bound, min_valence=dec.min_slots(len(legs) + 1))
        out: Dict[int, List[Hashable]] = {}
        for shape in shapes:
            graph = tree_to_graph(shape)
            choices = []
            for v, ports in enumerate(graph.ports):
                if v == 0 and graph.marked is not None:
                    choices.append(dec.marked_labels(len(ports)))
                else:
                    choices.append(dec.labels(len(ports)))
            edges = len(graph.ports) - 1
            for combo in product(*choices):
                degree = sum(dec.degree(d) for d in combo) + dec.edge_degree * edges
                if not self.window.contains_degree(degree):
                    continue
                key = (shape.anchor, decorate(shape.root, combo))
                if dec.is_coaugmentation(key):
                    continue
                out.setdefault(degree, []).append(key)
        self._basis[r] = out
        build_logger.debug(f"{self.name}({r}): dims {{{', '.join(f'{d}: {len(v)}' for d, v in sorted(out.items()))}}}")
        return out

    def all_keys(self, r: int) -> List[Hashable]:
        return [k for d in sorted(self.basis(r)) for k in self.basis(r)[d]]

    def degree(self, key) -> int:
        return key_degree(key, self.decorations.degree, self.decorations.edge_degree)

    def cogenerators(self, r: int) -> List[Hashable]:
        """One-vertex trees."""
        return [k for k in self.all_keys(r) if not any(isinstance(c, tuple) for c in k[1][1])]

    # ==================== Graph access ====================

    def graph(self, key) -> TreeGraph:
        return tree_to_graph(Tree(key[1], key[0]))

    def root_leg(self, key) -> Optional[int]:
        return None if key[0] == MARKED else key[0]

    def canonical(self, graph: TreeGraph, root_leg: Optional[int]) -> Vec:
        return self.canon.canonicalize(graph, root_leg)

    def relabel(self, key, p: Perm, root_leg: Optional[int] = None) -> Vec:
        """Rename legs by p (p[new] = old), rooted at root_leg (default: minimal leg)."""
        inv = invert_perm(p)
        g = self.graph(key)
        g.ports = [[('leg', inv[q[1]]) if q[0] == 'leg' else q for q in ports] for ports in g.ports]
        return self.canonical(g, root_leg)

    # ==================== Differential ====================

    def internal_part(self, key) -> Vec:
        graph = self.graph(key)
        root = self.root_leg(key)
        out: Vec = {}
        deg = self.canon.item_degree(graph)
        for v in range(len(graph.ports)):
            image = self.decorations.differential(graph.decorations[v])
            if not image:
                continue
            word, sign = move_to_front(graph.word, [('v', v)], deg)
            for d2, c in image.items():
                g = graph.copy()
                g.decorations[v] = d2
                g.word = word
                vec_add(out, self.canonical(g, root), sign * c)
        return out

    def contraction_part(self, key, graph: Optional[TreeGraph] = None, edges: Optional[Iterable[int]] = None) -> Vec:
        """Sum over edges (given by their lower vertex) of the edge contraction."""
        graph = graph or self.graph(key)
        root = self.root_leg(key)
        out: Vec = {}
        for w in (edges if edges is not None else range(1, len(graph.ports))):
            u = graph.ports[w][0][1]
            for g, c in contract_decorated(graph, u, w, self.decorations.glue, self.canon):
                vec_add(out, self.canonical(g, root), c)
        return out

    def split_part(self, key) -> Vec:
        graph = self.graph(key)
        root = self.root_leg(key)
        out: Vec = {}
        for v, ports in enumerate(graph.ports):
            k = len(ports)
            marked_root = v == 0 and graph.marked is not None
            allowed = list(range(k)) if marked_root else list(range(1, k))
            for size in range(1, len(allowed) + 1):
                for block in combinations(allowed, size):
                    pieces = self.decorations.cocompose(graph.decorations[v], block)
                    if not pieces:
                        continue
                    for g, c in split_decorated(graph, v, block, pieces, self.canon):
                        vec_add(out, self.canonical(g, root), -c)
        return out

    def differential_of(self, key) -> Vec:
        out = self.internal_part(key)
        if self.kind == 'bar':
            vec_add(out, self.contraction_part(key))
        else:
            vec_add(out, self.split_part(key))
        return out

    # ==================== Slices ====================

    def slice(self, r: int) -> ComplexSlice:
        """The arity-r complex with all differentials between window degrees."""
        if r in self._slices:
            return self._slices[r]
        basis = self.basis(r)
        w = self.window
        spaces = {d: basis.get(d, []) for d in range(w.degree_min, w.degree_max + 1)}
        index = {d: {k: i for i, k in enumerate(keys)} for d, keys in spaces.items()}
        differentials: Dict[int, SparseMatrix] = {}
        for d in range(w.degree_min, w.degree_max):
            if not spaces[d]:
                continue
            columns = []
            for key in spaces[d]:
                image = self.differential_of(key)
                column = {}
                for k2, c in image.items():
                    if k2 not in index[d + 1]:
                        if self.kind == 'bar' and self.decorations.is_coaugmentation(k2):
                            continue
                        raise WindowOverflow(f"{self.name}({r}): differential leaves the enumerated trees at degree {d + 1}")
                    column[index[d + 1][k2]] = c
                columns.append(column)
            differentials[d] = SparseMatrix.from_columns(len(spaces[d + 1]), columns)
        result = ComplexSlice(spaces, differentials, complete=(w.degree_min + 1, w.degree_max - 1))
        self._slices[r] = result
        return result

    def homology(self, r: int) -> Dict[int, int]:
        """Nonzero homology dimensions at the reliable degrees."""
        c = self.slice(r)
        dims = homology_dims(c)
        return {d: n for d, n in dims.items() if n and c.is_reliable(d)}

    def action(self, r: int) -> GroupAction:
        """Symmetric group action on the legs (inputs only for the operad variant)."""
        legs = self.legs(r)
        offset = 1 if self.variant == 'operad' else 0
        n = len(legs) - offset
        basis = self.basis(r)
        generators: Dict[int, Dict[int, SparseMatrix]] = {}
        for i in range(n - 1):
            s = transposition(len(legs), i + offset)
            generators[i] = {}
            for d, keys in basis.items():
                index = {k: j for j, k in enumerate(keys)}
                root = 0 if self.variant != 'module' else None
                columns = [{index[k2]: c for k2, c in self.relabel(k, s, root).items()} for k in keys]
                generators[i][d] = SparseMatrix.from_columns(len(keys), columns)
        return GroupAction(n, generators)

    def component(self, r: int) -> ArityComponent:
        c = self.slice(r)
        return ArityComponent(GradedSpace(dict(c.spaces)), self.action(r), dict(c.differentials))


def bar(p: OperadData, variant: str = 'operad', m: Optional[ModuleData] = None,
        w: Optional[TruncationWindow] = None, max_vertices: Optional[int] = None) -> TreeComplex:
    """Bar construction of an augmented operad (or module bar of a module)."""
    if variant == 'module' and m is None:
        raise ValueError("module bar construction needs a module")
    if variant == 'cyclic' and not p.cyclic:
        raise ValueError("cyclic bar construction needs a cyclic operad")
    w = w or p.window
    w.require_same(p.window)
    name = f"Bar({m.name if variant == 'module' else p.name})"
    return TreeComplex(BarDecorations(p, m if variant == 'module' else None), 'bar', variant, w, max_vertices, name)


def cobar(c: Cooperad, variant: str = 'operad', m: Optional[Comodule] = None,
          w: Optional[TruncationWindow] = None, max_vertices: Optional[int] = None, name: str = "") -> TreeComplex:
    """Cobar construction of a (1-shifted) cooperad, or module cobar of a comodule."""
    if variant == 'module' and m is None:
        raise ValueError("module cobar construction needs a comodule")
    return TreeComplex(CobarDecorations(c, m if variant == 'module' else None), 'cobar', variant,
                       w, max_vertices, name or "Cobar")


# ==================== Cooperads from operads ====================

def block_order(k: int, block: Sequence[int]) -> Perm:
    """p with p[t] = position of original slot t in (outer before, block, outer after)."""
    block = sorted(block)
    first = block[0]
    order = [s for s in range(k) if s < first] + block + [s for s in range(k) if s > first and s not in block]
    position = {s: i for i, s in enumerate(order)}
    return tuple(position[t] for t in range(k))


class DualCooperad(Cooperad):
    """Linear dual of a finite (cyclic) operad, restricted to the augmentation ideal."""

    shift = 0

    def __init__(self, operad: OperadData):
        self.operad = operad
        self.cyclic = operad.cyclic
        self.name = f"{operad.name}^∨"

    def labels(self, slots):
        return [('dual', x) for x in self.operad.reduced_basis(slots - 1)] if slots >= 2 else []

    def degree(self, x):
        return -self.operad.degree(x[1])

    def permute(self, x, p):
        q = invert_perm(p)
        out: Vec = {}
        for y in self.operad.basis(len(p) - 1):
            c = self.operad.permute(y, q).get(x[1], 0)
            if c:
                out[('dual', y)] = Fraction(c)
        return out

    def differential(self, x):
        # (d f)(y) = -(-1)^|f| f(dy)
        sign = 1 if self.degree(x) % 2 else -1
        out: Vec = {}
        for y in self.operad.reduced_basis(self.operad.arity(x[1])):
            c = self.operad.differential(y).get(x[1], 0)
            if c:
                out[('dual', y)] = Fraction(sign * c)
        return out

    def cocompose(self, x, block):
        k = self.operad.slots(x[1])
        b = len(block)
        if b < 1 or b > k - 1 or 0 in block:
            return {}
        a = min(block)
        order = block_order(k, block)
        out: Dict[Tuple, Fraction] = {}
        for outer in self.operad.reduced_basis(k - b):
            for inner in self.operad.reduced_basis(b):
                composite = self.operad.glue(outer, a, inner, 0)
                coeff = self.operad.permute_vec(composite, order).get(x[1], 0)
                if coeff:
                    if (self.operad.degree(outer) * self.operad.degree(inner)) % 2:
                        coeff = -coeff
                    out[(('dual', outer), ('dual', inner))] = Fraction(coeff)
        return out


class DualComodule(Comodule):
    """
    Linear dual of a finite right module, a comodule over the dual of the
    operad it is a module over. Blocks may contain slot 0.
    """

    def __init__(self, module: ModuleData):
        self.module = module
        self.operad = module.operad
        self.name = f"{module.name}^∨"

    def labels(self, slots):
        return [('dual', m) for m in self.module.basis(slots)]

    def degree(self, m):
        return -self.module.degree(m[1])

    def _permute_vec(self, v: Vec, p: Perm) -> Vec:
        out: Vec = {}
        for m, c in v.items():
            vec_add(out, self.module.permute(m, p), c)
        return out

    def permute(self, m, p):
        q = invert_perm(p)
        out: Vec = {}
        for y in self.module.basis(len(p)):
            c = self.module.permute(y, q).get(m[1], 0)
            if c:
                out[('dual', y)] = Fraction(c)
        return out

    def differential(self, m):
        sign = 1 if self.degree(m) % 2 else -1
        out: Vec = {}
        for y in self.module.basis(self.module.slots(m[1])):
            c = self.module.differential(y).get(m[1], 0)
            if c:
                out[('dual', y)] = Fraction(sign * c)
        return out

    def coact(self, m, block):
        k = self.module.slots(m[1])
        b = len(block)
        if b < 1 or b > k - 1:
            return {}
        a = min(block)
        order = block_order(k, block)
        out: Dict[Tuple, Fraction] = {}
        for outer in self.module.basis(k - b + 1):
            for inner in self.operad.reduced_basis(b):
                composite = self.module.act(outer, a, inner)
                coeff = self._permute_vec(composite, order).get(m[1], 0)
                if coeff:
                    if (self.module.degree(outer) * self.operad.degree(inner)) % 2:
                        coeff = -coeff
                    out[(('dual', outer), ('dual', inner))] = Fraction(coeff)
        return out


class BarCooperad(Cooperad):
    """
    The bar construction of an operad as a 1-shifted cooperad: cocomposition
    cuts one edge, with the cut edge moved to the front of the word.
    """

    shift = 1

    def __init__(self, complex_: TreeComplex):
        self.bar = complex_
        self.cyclic = complex_.variant == 'cyclic'
        self.name = complex_.name

    def labels(self, slots):
        r = slots if self.cyclic else slots - 1
        if r < 1:
            return []
        return self.bar.all_keys(r)

    def degree(self, x):
        return self.bar.degree(x)

    def permute(self, x, p):
        if p == tuple(range(len(p))):
            return {x: Fraction(1)}
        return self.bar.relabel(x, p, 0)

    def differential(self, x):
        return self.bar.differential_of(x)

    def cocompose(self, x, block):
        return cut_tree(self.bar, x, block)


def branch(graph: TreeGraph, w: int) -> List[int]:
    """w and every vertex above it (graph in canonical numbering)."""
    out = [w]
    for v in out:
        out.extend(p[1] for p in graph.ports[v][1:] if p[0] == 'v')
    return sorted(out)


CUT_LEG = -2


@dataclass
class EdgeCut:
    """
    The two halves of a tree cut along the edge below a vertex.

    Both halves keep the original leg labels and name the cut end CUT_LEG.
    The word of each half keeps the relative order of the original word.
    """
    lower: TreeGraph
    upper: TreeGraph
    lower_legs: List[int]
    upper_legs: List[int]
    lower_first_sign: int
    upper_first_sign: int

    def sign(self, upper_first: bool = False) -> int:
        return self.upper_first_sign if upper_first else self.lower_first_sign


def cut_edge(graph: TreeGraph, w: int, degree: Callable) -> EdgeCut:
    """Cut the edge between w and its parent (graph in canonical numbering)."""
    upper_vertices = branch(graph, w)
    upper_set = set(upper_vertices)
    lower_vertices = [v for v in range(len(graph.ports)) if v not in upper_set]
    e = edge_item(graph.ports[w][0][1], w)

    def upper_item(item) -> bool:
        if item[0] == 'v':
            return item[1] in upper_set
        return item[1][0] in upper_set and item[1][1] in upper_set

    rest = [item for item in graph.word if item != e]
    lower_items = [it for it in rest if not upper_item(it)]
    upper_items = [it for it in rest if upper_item(it)]
    lower_first = koszul_sign(graph.word, [e] + lower_items + upper_items, degree)
    upper_first = koszul_sign(graph.word, [e] + upper_items + lower_items, degree)

    def half(vertices, items, marked):
        vmap = {v: i for i, v in enumerate(vertices)}
        ports = []
        for v in vertices:
            row = []
            for p in graph.ports[v]:
                if p[0] == 'leg':
                    row.append(p)
                elif p[1] in vmap:
                    row.append(('v', vmap[p[1]]))
                else:
                    row.append(('leg', CUT_LEG))
            ports.append(row)
        word = [('v', vmap[it[1]]) if it[0] == 'v' else edge_item(vmap[it[1][0]], vmap[it[1][1]])
                for it in items]
        return TreeGraph(ports, [graph.decorations[v] for v in vertices], word, marked)

    def legs(vertices):
        return sorted(p[1] for v in vertices for p in graph.ports[v] if p[0] == 'leg')

    return EdgeCut(half(lower_vertices, lower_items, 0 if graph.marked == 0 else None),
                   half(upper_vertices, upper_items, None),
                   legs(lower_vertices), legs(upper_vertices), lower_first, upper_first)


def rename_legs(graph: TreeGraph, mapping: Dict[int, int]) -> TreeGraph:
    g = graph.copy()
    g.ports = [[('leg', mapping[p[1]]) if p[0] == 'leg' else p for p in row] for row in g.ports]
    return g


def split_names(outer_legs: Sequence[int], block: Sequence[int]) -> Tuple[Dict[int, int], Dict[int, int]]:
    """
    Leg renamings for a cocomposition along block: the outer side ranks its
    legs together with the cut (named min(block)), the inner side sends the
    cut to 0 and the block to 1..|block|.
    """
    block = sorted(block)
    ranked = sorted(list(outer_legs) + [block[0]])
    outer = {l: i for i, l in enumerate(ranked) if l != block[0]}
    outer[CUT_LEG] = ranked.index(block[0])
    inner = {l: i + 1 for i, l in enumerate(block)}
    inner[CUT_LEG] = 0
    return outer, inner


def cut_tree(complex_: TreeComplex, key, block: Sequence[int]) -> Dict[Tuple, Fraction]:
    """Infinitesimal decomposition of a bar tree along one edge."""
    graph = complex_.graph(key)
    target = sorted(block)
    out: Dict[Tuple, Fraction] = {}
    for w in range(1, len(graph.ports)):
        legs = sorted(p[1] for v in branch(graph, w) for p in graph.ports[v] if p[0] == 'leg')
        if legs != target:
            continue
        cut = cut_edge(graph, w, complex_.canon.item_degree(graph))
        outer_names, inner_names = split_names(cut.lower_legs, target)
        outer = rename_legs(cut.lower, outer_names)
        inner = rename_legs(cut.upper, inner_names)
        for ok, oc in complex_.canonical(outer, complex_.root_leg(key)).items():
            for ik, ic in complex_.canonical(inner, 0).items():
                total = out.get((ok, ik), 0) + cut.sign() * oc * ic
                if total:
                    out[(ok, ik)] = total
                else:
                    out.pop((ok, ik), None)
    return out


def cobar_bar_counit(complex_: TreeComplex, operad: OperadData, key) -> Vec:
    """
    The counit Cobar(Bar P) -> P on one cobar tree.

    Nonzero only when every vertex carries a one-vertex bar tree; the
    decorations are then composed along the cobar edges.
    """
    graph = complex_.graph(key)
    decorations = []
    for dec in graph.decorations:
        if isinstance(dec, Marked) or any(isinstance(c, tuple) for c in dec[1][1]):
            return {}
        decorations.append(dec[1][0])
    g = TreeGraph(graph.ports, decorations, [('v', v) for v in range(len(decorations))], None)
    canon = Canonicalizer(permute=operad.permute, degree=operad.degree, edge_degree=0)
    return evaluate_tree(g, operad.glue, operad.permute, canon)


def strip_point(complex_: TreeComplex, key, point) -> Optional[Tuple[int, TreeGraph, int]]:
    """
    Remove a bivalent marked vertex decorated by the point that touches one
    leg j and one vertex. Returns (j, remaining unmarked graph, sign), where
    the sign moves the removed edge to the front of the word; None otherwise.
    """
    if key[0] != MARKED or key[1][0] != Marked(point):
        return None
    g = complex_.graph(key)
    ports = g.ports[0]
    legs = [p[1] for p in ports if p[0] == 'leg']
    if len(ports) != 2 or len(legs) != 1:
        return None
    j = legs[0]
    w = next(p[1] for p in ports if p[0] == 'v')
    e = edge_item(0, w)
    rest = [item for item in g.word if item not in (e, ('v', 0))]
    sign = koszul_sign(g.word, [e, ('v', 0)] + rest, complex_.canon.item_degree(g))
    g.ports[w] = [('leg', j) if p == ('v', 0) else p for p in g.ports[w]]
    ports_rest = [[('v', p[1] - 1) if p[0] == 'v' else p for p in row] for row in g.ports[1:]]
    word = [('v', it[1] - 1) if it[0] == 'v' else edge_item(it[1][0] - 1, it[1][1] - 1) for it in rest]
    return j, TreeGraph(ports_rest, g.decorations[1:], word, None), sign
