"""
Leaf-labeled trees, canonical forms and the Koszul sign calculus.

A canonical tree is a nested tuple ``(decoration, children)`` where each child
is either an int (a leg label) or another node. Children are sorted by their
minimal leg label. A tree is anchored either at a leg (the root leg, usually
the minimal label), at an implicit output (``anchor=None``, shapes only) or at
a marked vertex (``anchor=MARKED``).

Every element of a tree complex is a decorated tree together with an ordered
word of its edges and vertices; the canonical word lists the edges in preorder
of their lower vertex, followed by the vertices in preorder. All signs are
Koszul signs of reorderings of such words.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Any, Callable, Dict, Hashable, Iterator, List, Optional, Sequence, Tuple, Union

from .base import LeafEdge, UnknownLeaf, Vec

MARKED = 'm'
IMPLICIT_ROOT = -1

Node = Tuple[Any, Tuple[Any, ...]]
Port = Tuple[str, int]       # ('leg', label) or ('v', vertex index)
Item = Tuple[str, Any]       # ('e', (u, w)) with u < w, or ('v', vertex index)


def edge_item(u: int, w: int) -> Item:
    return ('e', (u, w) if u < w else (w, u))


# ==================== Canonical trees ====================

@dataclass(frozen=True)
class Tree:
    """Canonical tree: nested node plus anchor (leg label, None or MARKED)."""
    root: Node
    anchor: Union[int, str, None] = None

    def vertices(self) -> List[Node]:
        """Nodes in preorder."""
        out: List[Node] = []

        def walk(node):
            out.append(node)
            for child in node[1]:
                if isinstance(child, tuple):
                    walk(child)
        walk(self.root)
        return out

    def vertex_count(self) -> int:
        return len(self.vertices())

    def leaves(self) -> List[int]:
        return sorted(node_leaves(self.root))

    def edge_count(self) -> int:
        return self.vertex_count() - 1

    def legs(self) -> List[int]:
        legs = self.leaves()
        if isinstance(self.anchor, int):
            legs = sorted(legs + [self.anchor])
        return legs


def node_leaves(node: Node) -> List[int]:
    out = []
    for child in node[1]:
        if isinstance(child, tuple):
            out.extend(node_leaves(child))
        else:
            out.append(child)
    return out


def node_min(child) -> int:
    if isinstance(child, tuple):
        return min(node_leaves(child))
    return child


def strip_decorations(node: Node) -> Node:
    return (None, tuple(strip_decorations(c) if isinstance(c, tuple) else c for c in node[1]))


def sort_key(key) -> str:
    """Deterministic ordering key for canonical keys."""
    return repr(key)


# ==================== Enumeration ====================

def set_partitions(items: Sequence[int]) -> Iterator[List[List[int]]]:
    """Set partitions with blocks ordered by minimal element (items sorted)."""
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for partition in set_partitions(rest):
        yield [[first]] + partition
        for i in range(len(partition)):
            yield partition[:i] + [[first] + partition[i]] + partition[i + 1:]


def _sorted_partitions(items: Sequence[int]) -> List[List[List[int]]]:
    out = [sorted((sorted(b) for b in p), key=lambda b: b[0]) for p in set_partitions(list(items))]
    return sorted(out, key=lambda p: (len(p), p))


def _rooted_shapes(labels: Tuple[int, ...], max_vertices: int, min_children: int,
                   root_min_children: int, cache: Dict) -> List[Tuple[Node, int]]:
    key = (labels, max_vertices, min_children, root_min_children)
    if key in cache:
        return cache[key]
    out: List[Tuple[Node, int]] = []
    if max_vertices >= 1:
        for blocks in _sorted_partitions(labels):
            if len(blocks) < max(1, root_min_children):
                continue
            options: List[List[Tuple[Any, int]]] = []
            for block in blocks:
                choices: List[Tuple[Any, int]] = []
                if len(block) == 1:
                    choices.append((block[0], 0))
                for node, count in _rooted_shapes(tuple(block), max_vertices - 1, min_children, min_children, cache):
                    choices.append((node, count))
                options.append(choices)
            for combo in product(*options):
                total = 1 + sum(count for _, count in combo)
                if total <= max_vertices:
                    out.append(((None, tuple(child for child, _ in combo)), total))
    cache[key] = out
    return out


def enumerate_trees(labels: Sequence[int], variant: str = 'rooted', max_vertices: int = 1,
                    min_valence: int = 3, marked_min_valence: int = 2) -> List[Tree]:
    """
    One canonical representative per labeled isomorphism class.

    Args:
        labels: leg labels
        variant: 'rooted' (labels are inputs, output implicit), 'unrooted'
            (rooted at the minimal label) or 'with_marked_vertex'
        max_vertices: bound on the number of vertices
        min_valence: minimal total valence of unmarked vertices
        marked_min_valence: minimal valence of the marked vertex

    Returns:
        Trees ordered by vertex count, then by a fixed structural order.
    """
    labels = tuple(sorted(labels))
    min_children = max(1, min_valence - 1)
    cache: Dict = {}
    if variant == 'rooted':
        shapes = _rooted_shapes(labels, max_vertices, min_children, min_children, cache)
        trees = [(Tree(node, None), n) for node, n in shapes]
    elif variant == 'unrooted':
        if len(labels) < 2:
            return []
        shapes = _rooted_shapes(labels[1:], max_vertices, min_children, min_children, cache)
        trees = [(Tree(node, labels[0]), n) for node, n in shapes]
    elif variant == 'with_marked_vertex':
        shapes = _rooted_shapes(labels, max_vertices, min_children, marked_min_valence, cache)
        trees = [(Tree(node, MARKED), n) for node, n in shapes]
    else:
        raise ValueError(f"unknown tree variant {variant!r}")
    trees.sort(key=lambda t: (t[1], sort_key(t[0].root)))
    return [t for t, _ in trees]


# ==================== Graph form ====================

@dataclass
class TreeGraph:
    """
    Mutable tree with ordered ports at every vertex.

    Attributes:
        ports: per vertex, the ordered list of ('leg', label) / ('v', index)
        decorations: per vertex decoration (None for shapes)
        word: ordered edge and vertex items carrying the Koszul signs
        marked: index of the marked vertex, if any
    """
    ports: List[List[Port]]
    decorations: List[Any]
    word: List[Item] = field(default_factory=list)
    marked: Optional[int] = None

    def leg_port(self, label: int) -> Tuple[int, int]:
        for v, ports in enumerate(self.ports):
            for i, port in enumerate(ports):
                if port == ('leg', label):
                    return v, i
        raise UnknownLeaf(f"leg {label} not in tree")

    def legs(self) -> List[int]:
        return sorted(p[1] for ports in self.ports for p in ports if p[0] == 'leg')

    def neighbours(self, v: int) -> List[int]:
        return [p[1] for p in self.ports[v] if p[0] == 'v']

    def copy(self) -> "TreeGraph":
        return TreeGraph([list(p) for p in self.ports], list(self.decorations), list(self.word), self.marked)


def tree_to_graph(tree: Tree, with_vertices: bool = True) -> TreeGraph:
    """Graph in canonical numbering (preorder) with the canonical word."""
    ports: List[List[Port]] = []
    decorations: List[Any] = []
    parents: List[Optional[int]] = []

    def walk(node: Node, parent: Optional[int]) -> int:
        index = len(ports)
        ports.append([])
        decorations.append(node[0])
        parents.append(parent)
        own: List[Port] = []
        if parent is not None:
            own.append(('v', parent))
        elif tree.anchor != MARKED:
            own.append(('leg', IMPLICIT_ROOT if tree.anchor is None else tree.anchor))
        for child in node[1]:
            if isinstance(child, tuple):
                own.append(('v', walk(child, index)))
            else:
                own.append(('leg', child))
        ports[index] = own
        return index

    walk(tree.root, None)
    word: List[Item] = [edge_item(parents[v], v) for v in range(1, len(ports))]
    if with_vertices:
        word += [('v', v) for v in range(len(ports))]
    marked = 0 if tree.anchor == MARKED else None
    return TreeGraph(ports, decorations, word, marked)


def koszul_sign(old: Sequence[Hashable], new: Sequence[Hashable], degree: Callable[[Hashable], int]) -> int:
    """Sign of reordering the word old into new."""
    position = {item: i for i, item in enumerate(new)}
    odd = [position[item] for item in old if degree(item) % 2]
    inversions = sum(1 for i in range(len(odd)) for j in range(i + 1, len(odd)) if odd[i] > odd[j])
    return -1 if inversions % 2 else 1


def move_to_front(word: List[Item], items: Sequence[Item], degree: Callable[[Item], int]) -> Tuple[List[Item], int]:
    rest = [x for x in word if x not in items]
    new = list(items) + rest
    return new, koszul_sign(word, new, degree)


@dataclass
class Traversal:
    """Result of walking a graph from its canonical root."""
    anchor: Union[int, str]
    root: int
    order: Dict[int, Tuple[int, ...]]
    preorder: List[int]
    parent_of: Dict[int, Optional[int]]


@dataclass
class Canonicalizer:
    """
    Turns tree graphs into canonical keys.

    Attributes:
        permute: permute(decoration, p) -> {decoration: coeff}, p[new] = old
            slot; None for undecorated shapes
        degree: decoration degree (0 when absent)
        edge_degree: degree of every edge item
    """
    permute: Optional[Callable[[Any, Tuple[int, ...]], Vec]] = None
    degree: Optional[Callable[[Any], int]] = None
    edge_degree: int = -1

    def item_degree(self, graph: TreeGraph) -> Callable[[Item], int]:
        def deg(item: Item) -> int:
            if item[0] == 'e':
                return self.edge_degree
            dec = graph.decorations[item[1]]
            return self.degree(dec) if (self.degree and dec is not None) else 0
        return deg

    def traverse(self, graph: TreeGraph, root_leg: Optional[int] = None) -> Traversal:
        ports = graph.ports
        if graph.marked is not None:
            root = graph.marked
            anchor: Union[int, str] = MARKED
            root_parent_port: Optional[int] = None
        else:
            legs = graph.legs()
            if not legs:
                raise UnknownLeaf("tree without legs needs a marked vertex")
            anchor = root_leg if root_leg is not None else min(legs)
            root, root_parent_port = graph.leg_port(anchor)

        memo: Dict[Tuple[int, int], int] = {}

        def port_min(v: int, port: Port) -> int:
            if port[0] == 'leg':
                return port[1]
            w = port[1]
            key = (w, v)
            if key not in memo:
                memo[key] = min(port_min(w, q) for q in ports[w] if q != ('v', v))
            return memo[key]

        order: Dict[int, Tuple[int, ...]] = {}
        preorder: List[int] = []
        parent_of: Dict[int, Optional[int]] = {}

        def visit(v: int, parent_index: Optional[int], parent: Optional[int]):
            preorder.append(v)
            parent_of[v] = parent
            children = [i for i in range(len(ports[v])) if i != parent_index]
            children.sort(key=lambda i: port_min(v, ports[v][i]))
            order[v] = tuple(([parent_index] if parent_index is not None else []) + children)
            for i in children:
                port = ports[v][i]
                if port[0] == 'v':
                    w = port[1]
                    visit(w, ports[w].index(('v', v)), v)

        visit(root, root_parent_port, None)
        if len(preorder) != len(ports):
            raise ValueError("graph is not connected")
        return Traversal(anchor, root, order, preorder, parent_of)

    def canonicalize(self, graph: TreeGraph, root_leg: Optional[int] = None) -> Dict[Tuple, Fraction]:
        """
        Canonical keys with coefficients.

        Args:
            graph: any numbering, port order and word
            root_leg: anchor leg; defaults to the minimal leg (ignored for
                marked graphs)

        Returns:
            {(anchor, node): coefficient}
        """
        walk = self.traverse(graph, root_leg)
        ports = graph.ports
        preorder = walk.preorder

        new_word: List[Item] = []
        if any(item[0] == 'e' for item in graph.word):
            new_word += [edge_item(walk.parent_of[v], v) for v in preorder[1:]]
        if any(item[0] == 'v' for item in graph.word):
            new_word += [('v', v) for v in preorder]
        sign = koszul_sign(graph.word, new_word, self.item_degree(graph))

        per_vertex: List[List[Tuple[Any, Fraction]]] = []
        for v in preorder:
            dec = graph.decorations[v]
            p = walk.order[v]
            if self.permute is None or dec is None or p == tuple(range(len(p))):
                per_vertex.append([(dec, Fraction(1))])
            else:
                per_vertex.append(list(self.permute(dec, p).items()))

        position = {v: i for i, v in enumerate(preorder)}

        def build(v: int, combo) -> Node:
            skip = 0 if (v == walk.root and graph.marked is not None) else 1
            children = []
            for i in walk.order[v][skip:]:
                port = ports[v][i]
                children.append(build(port[1], combo) if port[0] == 'v' else port[1])
            return (combo[position[v]][0], tuple(children))

        result: Dict[Tuple, Fraction] = {}
        for combo in product(*per_vertex):
            coeff = Fraction(sign)
            for _, c in combo:
                coeff *= c
            if not coeff:
                continue
            key = (walk.anchor, build(walk.root, combo))
            total = result.get(key, 0) + coeff
            if total:
                result[key] = total
            else:
                result.pop(key, None)
        return result


SHAPES = Canonicalizer()


def canonicalize(graph: TreeGraph, root_leg: Optional[int] = None) -> Tuple[Tree, Dict[int, int], int]:
    """
    Canonical shape of an undecorated graph.

    Returns:
        (tree, vertex relabeling old index -> preorder index, sign of the
        edge word reordering)
    """
    walk = SHAPES.traverse(graph, root_leg)
    (key, coeff), = SHAPES.canonicalize(graph, root_leg).items()
    anchor, node = key
    if anchor == IMPLICIT_ROOT:
        anchor = None
    relabeling = {v: i for i, v in enumerate(walk.preorder)}
    return Tree(node, anchor), relabeling, int(coeff)


def _root_leg_of(tree: Tree) -> Optional[int]:
    if tree.anchor is None:
        return IMPLICIT_ROOT
    if tree.anchor == MARKED:
        return None
    return tree.anchor


# ==================== Shape operations ====================

@dataclass
class ContractResult:
    tree: Tree
    merged: int
    sign: int
    word: List[int]


def contract_edge(tree: Tree, edge: int, word: Optional[List[int]] = None) -> ContractResult:
    """
    Contract the edge above the vertex with preorder index ``edge``.

    Args:
        tree: canonical tree
        edge: preorder index of the lower vertex of the edge (>= 1)
        word: edge word as a list of edge ids; defaults to preorder

    Returns:
        ContractResult with sign (-1)^(position of edge in word), the merged
        vertex (the parent, in the input numbering) and the word without edge.
    """
    n = tree.vertex_count()
    if word is None:
        word = list(range(1, n))
    if not 1 <= edge < n or edge not in word:
        raise LeafEdge(f"edge {edge} is not an internal edge")
    graph = tree_to_graph(tree, with_vertices=False)
    graph.word = []
    parent = next(p[1] for p in graph.ports[edge] if p[0] == 'v' and p[1] < edge)
    sign = -1 if word.index(edge) % 2 else 1
    merge_vertices(graph, parent, edge)
    new_tree, _, _ = canonicalize(graph, _root_leg_of(tree))
    return ContractResult(new_tree, parent, sign, [e for e in word if e != edge])


def merge_vertices(graph: TreeGraph, u: int, w: int) -> List[Port]:
    """
    Merge w into its neighbour u in place.

    The merged port list is u's ports before w, then w's ports cyclically
    after the port to u, then u's remaining ports. Returns that list.
    """
    a = graph.ports[u].index(('v', w))
    b = graph.ports[w].index(('v', u))
    inner = graph.ports[w][b + 1:] + graph.ports[w][:b]
    graph.ports[u] = graph.ports[u][:a] + inner + graph.ports[u][a + 1:]
    for port in inner:
        if port[0] == 'v':
            x = port[1]
            graph.ports[x] = [('v', u) if q == ('v', w) else q for q in graph.ports[x]]
    moved = {port[1] for port in inner if port[0] == 'v'}
    graph.word = [edge_item(u, _other(item, w)) if item[0] == 'e' and w in item[1] and _other(item, w) in moved
                  else item for item in graph.word]
    merged = list(graph.ports[u])
    _remove_vertex(graph, w)
    return merged


def _other(item: Item, v: int) -> int:
    x, y = item[1]
    return y if x == v else x


def _remove_vertex(graph: TreeGraph, v: int):
    """Delete vertex v (already disconnected) and shift higher indices down."""
    del graph.ports[v]
    del graph.decorations[v]

    def shift(x: int) -> int:
        return x - 1 if x > v else x

    graph.ports = [[('v', shift(p[1])) if p[0] == 'v' else p for p in ports] for ports in graph.ports]
    new_word = []
    for item in graph.word:
        if item[0] == 'e':
            x, y = item[1]
            if v in (x, y):
                continue
            new_word.append(edge_item(shift(x), shift(y)))
        elif item[1] != v:
            new_word.append(('v', shift(item[1])))
    graph.word = new_word
    if graph.marked is not None:
        graph.marked = shift(graph.marked)


def graft(a: Tree, b: Tree, leaf: int) -> Tuple[Tree, int]:
    """
    Replace the leg ``leaf`` of a by the root of b.

    For an unrooted ``a`` grafting at its anchor leg realizes composition at
    the distinguished slot; the result is re-rooted at its minimal leg.

    Returns:
        (canonical tree, preorder index of the lower vertex of the new edge)
    """
    if b.anchor == MARKED:
        raise ValueError("cannot graft a marked tree")
    ga = tree_to_graph(a, with_vertices=False)
    try:
        v, i = ga.leg_port(leaf)
    except UnknownLeaf:
        raise UnknownLeaf(f"leaf {leaf} not in tree")
    gb = tree_to_graph(b, with_vertices=False)
    offset = len(ga.ports)
    ports_b = [[('v', p[1] + offset) if p[0] == 'v' else p for p in ports] for ports in gb.ports]
    ports_b[0][0] = ('v', v)
    ga.ports[v][i] = ('v', offset)
    graph = TreeGraph(ga.ports + ports_b, ga.decorations + gb.decorations, [], None)
    root_leg = _root_leg_of(a)
    if root_leg is not None and root_leg == leaf:
        root_leg = None
    tree, relabeling, _ = canonicalize(graph, root_leg)
    walk = SHAPES.traverse(graph, root_leg)
    lower = offset if walk.parent_of[offset] == v else v
    return tree, relabeling[lower]


def relabel(tree: Tree, mapping: Dict[int, int]) -> Tuple[Tree, Dict[int, int], int]:
    """Apply a bijection of leg labels and re-canonicalize."""
    graph = tree_to_graph(tree, with_vertices=False)
    graph.ports = [[('leg', mapping.get(p[1], p[1])) if p[0] == 'leg' else p for p in ports] for ports in graph.ports]
    root_leg = IMPLICIT_ROOT if tree.anchor is None else None
    return canonicalize(graph, root_leg)


# ==================== Bracketed syntax ====================

def format_tree(tree: Union[Tree, Node]) -> str:
    """Bracketed term, e.g. (1(4((35)6))); labels >= 10 are comma separated."""
    node = tree.root if isinstance(tree, Tree) else tree
    wide = any(label >= 10 for label in node_leaves(node))

    def fmt(n) -> str:
        if not isinstance(n, tuple):
            return str(n)
        sep = ',' if wide else ''
        return '(' + sep.join(fmt(c) for c in n[1]) + ')'
    return fmt(node)


def parse_tree(text: str) -> Tree:
    """Inverse of format_tree for rooted shapes (children re-sorted)."""
    text = text.replace(' ', '')
    pos = 0

    def parse_node():
        nonlocal pos
        if text[pos] != '(':
            raise ValueError(f"expected '(' at {pos} in {text!r}")
        pos += 1
        children = []
        while text[pos] != ')':
            if text[pos] == ',':
                pos += 1
                continue
            if text[pos] == '(':
                children.append(parse_node())
            else:
                start = pos
                while text[pos].isdigit():
                    pos += 1
                if ',' in text:
                    children.append(int(text[start:pos]))
                else:
                    children.extend(int(ch) for ch in text[start:pos])
        pos += 1
        children.sort(key=node_min)
        return (None, tuple(children))

    node = parse_node()
    if pos != len(text):
        raise ValueError(f"trailing characters in {text!r}")
    return Tree(node, None)


# ==================== Decorated operations ====================

Glue = Callable[[Any, int, Any, int], Vec]


def contract_decorated(graph: TreeGraph, u: int, w: int, glue: Glue,
                       canon: Canonicalizer) -> List[Tuple[TreeGraph, Fraction]]:
    """
    Contract the edge between u and w, composing decorations.

    The items edge(u, w), u, w are first moved to the front of the word; the
    merged vertex then takes their place. ``glue(x, a, y, b)`` must return
    decorations whose slots are x[:a] + y[b+1:] + y[:b] + x[a+1:].
    """
    a = graph.ports[u].index(('v', w))
    b = graph.ports[w].index(('v', u))
    front = [item for item in (edge_item(u, w), ('v', u), ('v', w)) if item in graph.word]
    _, sign = move_to_front(graph.word, front, canon.item_degree(graph))
    head = [('v', u)] if ('v', u) in graph.word else []
    pieces = glue(graph.decorations[u], a, graph.decorations[w], b)
    out = []
    for dec, coeff in pieces.items():
        g = graph.copy()
        g.word = head + [item for item in g.word if item not in front]
        if g.marked == w:
            g.marked = u
        merge_vertices(g, u, w)
        g.decorations[u if u < w else u - 1] = dec
        out.append((g, coeff * sign))
    return out


def split_decorated(graph: TreeGraph, u: int, block: Sequence[int], pieces: Vec,
                    canon: Canonicalizer, with_edge: bool = True) -> List[Tuple[TreeGraph, Fraction]]:
    """
    Split vertex u along a block of its slots.

    ``pieces`` maps (outer, inner) pairs to coefficients. The outer vertex
    keeps u's index with slots ordered by original slot index, the new inner
    edge sitting at min(block); the inner vertex is appended with slot 0
    towards u followed by the block slots in increasing order. In the word,
    u is replaced by (edge, outer, inner).
    """
    block = sorted(block)
    _, sign = move_to_front(graph.word, [('v', u)], canon.item_degree(graph))
    ports = graph.ports[u]
    new_index = len(graph.ports)
    outer_ports: List[Port] = []
    for s in range(len(ports)):
        if s == block[0]:
            outer_ports.append(('v', new_index))
        elif s not in block:
            outer_ports.append(ports[s])
    inner_ports: List[Port] = [('v', u)] + [ports[s] for s in block]
    head = ([edge_item(u, new_index)] if with_edge else []) + [('v', u), ('v', new_index)]
    moved = {port[1] for port in inner_ports[1:] if port[0] == 'v'}
    rest = [edge_item(new_index, _other(item, u)) if item[0] == 'e' and u in item[1] and _other(item, u) in moved
            else item for item in graph.word if item != ('v', u)]
    out = []
    for (outer, inner), coeff in pieces.items():
        g = graph.copy()
        g.ports[u] = list(outer_ports)
        g.ports.append(list(inner_ports))
        g.decorations[u] = outer
        g.decorations.append(inner)
        for port in inner_ports[1:]:
            if port[0] == 'v':
                x = port[1]
                g.ports[x] = [('v', new_index) if q == ('v', u) else q for q in g.ports[x]]
        g.word = head + rest
        out.append((g, coeff * sign))
    return out


def evaluate_tree(graph: TreeGraph, glue: Glue, permute: Callable[[Any, Tuple[int, ...]], Vec],
                  canon: Canonicalizer) -> Vec:
    """
    Compose all decorations of a tree into one element.

    The result has its slots in increasing leg order. Edges must carry even
    degree (or be absent from the word).
    """
    stack = [(graph, Fraction(1))]
    result: Dict[Any, Fraction] = {}
    while stack:
        g, coeff = stack.pop()
        if len(g.ports) > 1:
            for h, c in contract_decorated(g, 0, g.neighbours(0)[0], glue, canon):
                stack.append((h, coeff * c))
            continue
        legs = [p[1] for p in g.ports[0]]
        order = tuple(sorted(range(len(legs)), key=lambda i: legs[i]))
        if order == tuple(range(len(order))):
            image = {g.decorations[0]: Fraction(1)}
        else:
            image = permute(g.decorations[0], order)
        for dec, c in image.items():
            total = result.get(dec, 0) + coeff * c
            if total:
                result[dec] = total
            else:
                result.pop(dec, None)
    return result
