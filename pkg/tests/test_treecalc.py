from itertools import combinations

import pytest

from core.base import LeafEdge, UnknownLeaf
from core.treecalc import (
    MARKED, Canonicalizer, TreeGraph, contract_decorated, contract_edge, edge_item, enumerate_trees,
    format_tree, graft, koszul_sign, merge_vertices, parse_tree, relabel, set_partitions, split_decorated,
    tree_to_graph,
)


def test_set_partitions_are_counted_by_bell_numbers():
    assert len(list(set_partitions([1, 2, 3]))) == 5
    assert len(list(set_partitions([1, 2, 3, 4]))) == 15


def test_rooted_trees_on_three_leaves():
    trees = enumerate_trees([1, 2, 3], 'rooted', max_vertices=2)
    assert [format_tree(t) for t in trees][0] == '(123)'
    assert sorted(format_tree(t) for t in trees[1:]) == ['((12)3)', '((13)2)', '(1(23))']


def test_unrooted_trees_are_anchored_at_the_minimal_leg():
    trees = enumerate_trees([0, 1, 2, 3], 'unrooted', max_vertices=2)
    assert len(trees) == 4
    assert all(t.anchor == 0 for t in trees)
    assert trees[0].legs() == [0, 1, 2, 3]


def test_marked_trees():
    trees = enumerate_trees([1, 2], 'with_marked_vertex', max_vertices=1)
    assert [t.anchor for t in trees] == [MARKED]
    with pytest.raises(ValueError):
        enumerate_trees([1, 2], 'planar')


def test_bracketed_syntax_round_trip():
    for tree in enumerate_trees([1, 2, 3, 4], 'rooted', max_vertices=3):
        assert parse_tree(format_tree(tree)) == tree
    assert format_tree(parse_tree('(1(10,11))')) == '(1,(10,11))'
    with pytest.raises(ValueError):
        parse_tree('(12))')


def test_contract_edge():
    tree = parse_tree('((12)3)')
    result = contract_edge(tree, 1)
    assert format_tree(result.tree) == '(123)'
    assert result.sign == 1
    assert result.merged == 0
    with pytest.raises(LeafEdge):
        contract_edge(tree, 0)


def test_graft_and_relabel():
    tree, lower = graft(parse_tree('(12)'), parse_tree('(34)'), 2)
    assert format_tree(tree) == '(1(34))'
    assert lower == 1
    with pytest.raises(UnknownLeaf):
        graft(parse_tree('(12)'), parse_tree('(34)'), 5)
    relabeled, _, _ = relabel(parse_tree('((12)3)'), {1: 3, 3: 1})
    assert format_tree(relabeled) == '(1(23))'


def test_canonical_word_lists_edges_then_vertices():
    graph = tree_to_graph(parse_tree('((12)3)'))
    assert graph.word == [('e', (0, 1)), ('v', 0), ('v', 1)]
    assert graph.legs() == [-1, 1, 2, 3]


def test_koszul_sign():
    assert koszul_sign(['a', 'b'], ['b', 'a'], lambda item: 1) == -1
    assert koszul_sign(['a', 'b'], ['b', 'a'], lambda item: 0) == 1
    assert koszul_sign(['a', 'b', 'c'], ['c', 'a', 'b'], lambda item: 1) == 1


def test_binary_rooted_trees_are_counted_by_double_factorials():
    for n, expected in ((3, 3), (4, 15), (5, 105)):
        trees = enumerate_trees(list(range(1, n + 1)), 'rooted', max_vertices=n - 1)
        binary = [t for t in trees if all(len(node[1]) == 2 for node in t.vertices())]
        assert len(binary) == expected


# ==================== Decorated contraction ====================

def _glue(x, a, y, b):
    return {'m': 1}


def _graph_edges(graph: TreeGraph):
    return sorted({edge_item(v, p[1]) for v, ports in enumerate(graph.ports) for p in ports if p[0] == 'v'})


def _word_edges(graph: TreeGraph):
    return sorted(item for item in graph.word if item[0] == 'e')


def _chain():
    ports = [[('leg', 0), ('v', 1)], [('v', 0), ('v', 2), ('leg', 1)],
             [('v', 1), ('v', 3), ('leg', 2)], [('v', 2), ('leg', 3)]]
    word = [edge_item(0, 1), edge_item(1, 2), edge_item(2, 3)] + [('v', v) for v in range(4)]
    return TreeGraph(ports, ['a', 'b', 'c', 'd'], word)


def test_merging_keeps_the_edges_of_the_absorbed_vertex():
    graph = _chain()
    merge_vertices(graph, 1, 2)
    assert graph.ports[1] == [('v', 0), ('v', 2), ('leg', 2), ('leg', 1)]
    assert graph.word == [edge_item(0, 1), edge_item(1, 2), ('v', 0), ('v', 1), ('v', 2)]
    assert _word_edges(graph) == _graph_edges(graph)


def test_contracting_the_second_edge():
    [(graph, sign)] = contract_decorated(_chain(), 1, 2, _glue, Canonicalizer())
    assert sign == -1
    assert graph.decorations == ['a', 'm', 'd']
    assert _word_edges(graph) == _graph_edges(graph) == [edge_item(0, 1), edge_item(1, 2)]


def _image(edge, contracted):
    u, w = contracted[1]

    def move(x):
        x = u if x == w else x
        return x - 1 if x > w else x

    x, y = edge[1]
    return edge_item(move(x), move(y))


def _contract(graph, edge):
    [(result, sign)] = contract_decorated(graph, edge[1][0], edge[1][1], _glue, Canonicalizer())
    assert _word_edges(result) == _graph_edges(result)
    return result, sign


@pytest.mark.parametrize("legs", [4, 5, 6])
def test_contractions_anticommute(legs):
    for tree in enumerate_trees(list(range(1, legs + 1)), 'rooted', max_vertices=legs - 1):
        graph = tree_to_graph(tree)
        edges = [item for item in graph.word if item[0] == 'e']
        for e, f in combinations(edges, 2):
            first, s1 = _contract(graph, e)
            _, s2 = _contract(first, _image(f, e))
            second, t1 = _contract(graph, f)
            _, t2 = _contract(second, _image(e, f))
            assert s1 * s2 == -t1 * t2


def test_split_moves_edges_onto_the_new_vertex():
    ports = [[('leg', 0), ('v', 1), ('v', 2)], [('v', 0), ('leg', 1), ('leg', 2)],
             [('v', 0), ('leg', 3), ('leg', 4)]]
    word = [edge_item(0, 1), edge_item(0, 2)] + [('v', v) for v in range(3)]
    graph = TreeGraph(ports, ['x', 'y', 'z'], word)
    [(result, sign)] = split_decorated(graph, 0, [1, 2], {('outer', 'inner'): 1}, Canonicalizer())
    assert sign == 1
    assert result.ports[0] == [('leg', 0), ('v', 3)]
    assert result.ports[3] == [('v', 0), ('v', 1), ('v', 2)]
    assert result.decorations == ['outer', 'y', 'z', 'inner']
    assert _word_edges(result) == _graph_edges(result) == [edge_item(0, 3), edge_item(1, 3), edge_item(2, 3)]


def _ladder():
    ports = [[('leg', 0), ('v', 1)], [('v', 0), ('v', 2)], [('v', 1), ('v', 3)], [('v', 2), ('leg', 1)]]
    word = [edge_item(0, 1), edge_item(1, 2), edge_item(2, 3)] + [('v', v) for v in range(4)]
    return TreeGraph(ports, ['a', 'b', 'c', 'd'], word)


@pytest.mark.parametrize("from_the_end,expected", [(False, 1), (True, -1)])
def test_bivalent_ladder(from_the_end, expected):
    graph, total = _ladder(), 1
    while len(graph.ports) > 1:
        edges = _word_edges(graph)
        graph, sign = _contract(graph, edges[-1] if from_the_end else edges[0])
        total *= sign
    assert total == expected
    assert graph.word == [('v', 0)]
    assert graph.ports == [[('leg', 0), ('leg', 1)]]
