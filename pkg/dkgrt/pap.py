"""
Parenthesized permutations: the objects of the operads of parenthesized
braids and chord diagrams.

A PaP of arity r is a planar binary tree whose leaves carry 1..r once each,
written as nested pairs: ((1, 2), 3) prints as "(12)3" and
(1, (4, ((3, 5), 6))) as "1(4((35)6))". The output root is the implicit
leaf 0; the cyclic action relabels all r + 1 leaves and re-roots the
planar tree at the leaf that ends up labeled 0.
"""

from fractions import Fraction
from itertools import permutations
from typing import Dict, Hashable, Iterator, List, Tuple, Union

from core.symseq import GroupAction, Perm, permutation_action

Pap = Union[int, Tuple["Pap", "Pap"]]


# ==================== Text ====================

def format_pap(tree: Pap) -> str:
    if isinstance(tree, int):
        return str(tree)
    return "".join(_part(child) for child in tree)


def _part(child: Pap) -> str:
    return str(child) if isinstance(child, int) else f"({format_pap(child)})"


def parse_pap(text: str) -> Pap:
    """
    Inverse of format_pap for labels 1..9.

    Raises:
        ValueError: unbalanced parentheses, a group without exactly two parts,
            or a repeated leaf
    """
    tree, end = _parse_sequence(text.replace(" ", ""), 0)
    if end != len(text.replace(" ", "")):
        raise ValueError(f"unexpected ')' in {text!r}")
    found = leaves(tree)
    if len(set(found)) != len(found):
        raise ValueError(f"repeated leaf in {text!r}")
    return tree


def _parse_sequence(text: str, pos: int) -> Tuple[Pap, int]:
    items: List[Pap] = []
    while pos < len(text) and text[pos] != ')':
        ch = text[pos]
        if ch == '(':
            inner, pos = _parse_sequence(text, pos + 1)
            if pos >= len(text) or text[pos] != ')':
                raise ValueError(f"unbalanced parentheses in {text!r}")
            if isinstance(inner, int):
                raise ValueError(f"a parenthesized group needs two parts in {text!r}")
            items.append(inner)
            pos += 1
        elif ch.isdigit():
            items.append(int(ch))
            pos += 1
        else:
            raise ValueError(f"unexpected {ch!r} in {text!r}")
    if len(items) == 1 and isinstance(items[0], int):
        return items[0], pos
    if len(items) != 2:
        raise ValueError(f"expected two parts, found {len(items)} in {text!r}")
    return (items[0], items[1]), pos


# ==================== Enumeration and relabeling ====================

def leaves(tree: Pap) -> List[int]:
    if isinstance(tree, int):
        return [tree]
    return leaves(tree[0]) + leaves(tree[1])


def shapes(r: int) -> Iterator[Pap]:
    """Planar binary trees with r leaves, leaves numbered 1..r left to right."""
    def build(lo: int, hi: int) -> Iterator[Pap]:
        if lo == hi:
            yield lo
            return
        for split in range(lo, hi):
            for left in build(lo, split):
                for right in build(split + 1, hi):
                    yield (left, right)
    return build(1, r)


def relabel(tree: Pap, mapping: Dict[int, int]) -> Pap:
    if isinstance(tree, int):
        return mapping.get(tree, tree)
    return (relabel(tree[0], mapping), relabel(tree[1], mapping))


def enumerate_pap(r: int) -> List[Pap]:
    """All r! · Catalan(r - 1) parenthesized permutations of 1..r."""
    out = []
    for shape in shapes(r):
        for p in permutations(range(1, r + 1)):
            out.append(relabel(shape, {k + 1: p[k] for k in range(r)}))
    return out


# ==================== Cyclic action ====================

def _unrooted(tree: Pap) -> Tuple[Dict[Hashable, List[Hashable]], Hashable]:
    """
    Neighbour lists in planar cyclic order (parent, left, right) for internal
    vertices; leaves are ('leaf', label) and the root is attached to ('leaf', 0).
    """
    graph: Dict[Hashable, List[Hashable]] = {}
    counter = [0]

    def visit(node: Pap, parent: Hashable) -> Hashable:
        if isinstance(node, int):
            key = ('leaf', node)
            graph[key] = [parent]
            return key
        key = ('v', counter[0])
        counter[0] += 1
        graph[key] = [parent]
        graph[key] += [visit(node[0], key), visit(node[1], key)]
        return key

    root = ('leaf', 0)
    graph[root] = [visit(tree, root)]
    return graph, root


def cyclic_act(tree: Pap, sigma: Perm) -> Pap:
    """
    sigma (a permutation of 0..r, leaf i -> sigma[i]) applied to a PaP of
    arity r: relabel every leaf including the root, then re-root at leaf 0.
    """
    r = len(leaves(tree))
    if len(sigma) != r + 1:
        raise ValueError(f"expected a permutation of 0..{r}")
    graph, _ = _unrooted(tree)
    renamed = {}
    for key, neighbours in graph.items():
        renamed[_rename(key, sigma)] = [_rename(n, sigma) for n in neighbours]
    root = ('leaf', 0)
    (start,) = renamed[root]
    return _rooted(renamed, start, root)


def _rename(key: Hashable, sigma: Perm) -> Hashable:
    return ('leaf', sigma[key[1]]) if key[0] == 'leaf' else key


def _rooted(graph: Dict[Hashable, List[Hashable]], node: Hashable, parent: Hashable) -> Pap:
    if node[0] == 'leaf':
        return node[1]
    neighbours = graph[node]
    k = neighbours.index(parent)
    left, right = neighbours[(k + 1) % 3], neighbours[(k + 2) % 3]
    return (_rooted(graph, left, node), _rooted(graph, right, node))


def pap_action(r: int) -> GroupAction:
    """S_(r+1) permuting the parenthesized permutations of arity r."""
    basis = enumerate_pap(r)
    return permutation_action(r + 1, basis, lambda s, tree: {cyclic_act(tree, s): Fraction(1)})


def associator_objects_check() -> Dict[str, bool]:
    """
    τ = (0 1) on the source (12)3 and target 1(23) of the associator, against
    the relabeled associator between (23)1 and 2(31), traversed backwards.
    """
    tau = (1, 0, 2, 3)
    source, target = parse_pap("(12)3"), parse_pap("1(23)")
    shift = {1: 2, 2: 3, 3: 1}
    return {
        'source': cyclic_act(source, tau) == relabel(target, shift),
        'target': cyclic_act(target, tau) == relabel(source, shift),
    }


def restriction_is_relabeling(r: int) -> bool:
    """On permutations fixing 0 the cyclic action is plain relabeling."""
    for p in permutations(range(1, r + 1)):
        sigma = (0,) + p
        for tree in enumerate_pap(r):
            if cyclic_act(tree, sigma) != relabel(tree, {i: sigma[i] for i in range(1, r + 1)}):
                return False
    return True
