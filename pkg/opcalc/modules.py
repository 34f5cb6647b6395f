"""
Right modules over operads, with optional pointing.

A module element of arity k has slots 0..k-1, all of them inputs. The point
is a distinguished S_2-invariant element of arity 2.
"""

from fractions import Fraction
from itertools import product
from typing import Dict, Hashable, List, Optional, Tuple

from core.base import Vec, WindowOverflow, vec_add
from core.symseq import Perm, invert_perm
from core.treecalc import (
    MARKED, Canonicalizer, Tree, TreeGraph, enumerate_trees, node_leaves, sort_key, tree_to_graph,
)

from .free import FREE_UNIT, FreeOperad
from .operads import OperadData


class ModuleData:
    """Base class; subclasses provide basis, act, permute and the point."""

    name = "module"
    point: Optional[Hashable] = None

    def __init__(self, operad: OperadData):
        self.operad = operad
        self.window = operad.window

    def basis(self, k: int) -> List[Hashable]:
        raise NotImplementedError

    def slots(self, m: Hashable) -> int:
        raise NotImplementedError

    def degree(self, m: Hashable) -> int:
        return 0

    def act(self, m: Hashable, i: int, q: Hashable) -> Vec:
        """m ∘_i q: slots m0..m(i-1), q1..qn, m(i+1)..."""
        raise NotImplementedError

    def permute(self, m: Hashable, p: Perm) -> Vec:
        raise NotImplementedError

    def differential(self, m: Hashable) -> Vec:
        return {}

    def augmentation(self, m: Hashable) -> Fraction:
        return Fraction(1) if m == self.point else Fraction(0)

    def glue(self, m: Hashable, a: int, q: Hashable, b: int) -> Vec:
        """Attach slot b of q to slot a of m (b != 0 needs a cyclic operad)."""
        if b == 0:
            return self.act(m, a, q)
        k = self.operad.slots(q)
        out: Vec = {}
        for q2, c in self.operad.permute(q, tuple((b + t) % k for t in range(k))).items():
            vec_add(out, self.act(m, a, q2), c)
        return out

    def check_point(self) -> bool:
        """The point is S_2-invariant."""
        return self.point is None or self.permute(self.point, (1, 0)) == {self.point: 1}


class PointedModule(ModuleData):
    """P^mod: the cyclic operad P seen as a right module over F(P), M((k)) = P((k))."""

    def __init__(self, operad: OperadData):
        if not operad.cyclic:
            raise ValueError("P^mod needs a cyclic operad")
        super().__init__(operad)
        self.name = f"{operad.name}^mod"
        self.point = operad.unit

    def basis(self, k: int) -> List[Hashable]:
        return self.operad.basis(k - 1) if k >= 2 else []

    def slots(self, m) -> int:
        return self.operad.slots(m)

    def degree(self, m) -> int:
        return self.operad.degree(m)

    def act(self, m, i, q) -> Vec:
        return self.operad.glue(m, i, q, 0)

    def glue(self, m, a, q, b) -> Vec:
        return self.operad.glue(m, a, q, b)

    def permute(self, m, p) -> Vec:
        return self.operad.permute(m, p)

    def differential(self, m) -> Vec:
        return self.operad.differential(m)


Part = Tuple[Tuple[int, ...], Hashable]


class FreePointedModule(ModuleData):
    """
    The free right Q-module on an S_2-invariant point of arity 2.

    Elements are unordered pairs of parts (slots, q): q is an element of Q
    whose inputs are the listed slots in increasing order. Parts are stored
    sorted by their minimal slot.
    """

    def __init__(self, operad: OperadData):
        super().__init__(operad)
        self.name = f"free_module({operad.name})"
        unit = operad.unit
        self.point = ('pt', ((0,), unit), ((1,), unit))
        self._basis = {}

    def basis(self, k: int) -> List[Hashable]:
        if k in self._basis:
            return self._basis[k]
        out = []
        slots = list(range(k))
        for mask in range(1, 2 ** (k - 1)):
            first = tuple(s for s in slots if s == 0 or not (mask >> (s - 1)) & 1)
            second = tuple(s for s in slots if s not in first)
            if not second:
                continue
            for qa in self.operad.basis(len(first)):
                for qb in self.operad.basis(len(second)):
                    out.append(('pt', (first, qa), (second, qb)))
        self._basis[k] = out
        return out

    def slots(self, m) -> int:
        return len(m[1][0]) + len(m[2][0])

    def degree(self, m) -> int:
        return self.operad.degree(m[1][1]) + self.operad.degree(m[2][1])

    def _normal(self, a: Part, b: Part, coeff: Fraction) -> Vec:
        if a[0][0] > b[0][0]:
            if (self.operad.degree(a[1]) * self.operad.degree(b[1])) % 2:
                coeff = -coeff
            a, b = b, a
        return {('pt', a, b): coeff}

    def _relabel_part(self, part: Part, new_slots: List[int]) -> Vec:
        """Part whose slots are renamed positionally, re-sorted with q permuted."""
        order = sorted(range(len(new_slots)), key=lambda k: new_slots[k])
        inner = (0,) + tuple(k + 1 for k in order)
        q = part[1]
        image = {q: Fraction(1)} if inner == tuple(range(len(inner))) else self.operad.permute(q, inner)
        ordered = tuple(sorted(new_slots))
        return {(ordered, h): c for h, c in image.items()}

    def permute(self, m, p) -> Vec:
        inv = invert_perm(p)
        out: Vec = {}
        pa = self._relabel_part(m[1], [inv[s] for s in m[1][0]])
        pb = self._relabel_part(m[2], [inv[s] for s in m[2][0]])
        for a, ca in pa.items():
            for b, cb in pb.items():
                vec_add(out, self._normal(a, b, ca * cb))
        return out

    def act(self, m, i, q) -> Vec:
        n = self.operad.arity(q)

        def shift(s: int) -> int:
            return s if s < i else s + n - 1

        out: Vec = {}
        (sa, qa), (sb, qb) = m[1], m[2]
        if i in sa:
            j = sa.index(i) + 1
            inner = tuple(sorted([shift(s) for s in sa if s != i] + list(range(i, i + n))))
            rest = (tuple(shift(s) for s in sb), qb)
            sign = -1 if (self.operad.degree(q) * self.operad.degree(qb)) % 2 else 1
            for r, c in self.operad.compose(qa, j, q).items():
                vec_add(out, self._normal((inner, r), rest, c * sign))
        else:
            j = sb.index(i) + 1
            inner = tuple(sorted([shift(s) for s in sb if s != i] + list(range(i, i + n))))
            rest = (tuple(shift(s) for s in sa), qa)
            for r, c in self.operad.compose(qb, j, q).items():
                vec_add(out, self._normal(rest, (inner, r), c))
        return out


class FreeTreeModule(ModuleData):
    """
    Free right module over a free operad, generated by a pointed sequence.

    Elements are trees with a marked root vertex carrying a module generator
    and further vertices carrying generators of the free operad.

    Args:
        free: the free operad acted on
        gens: slots -> generator labels
        degrees: generator degrees
        action: action(label, p) on generators (all slots movable)
        point: the point generator (two slots)
        max_vertices: tree size bound
    """

    def __init__(self, free: FreeOperad, gens: Dict[int, List[Hashable]], degrees: Dict[Hashable, int],
                 action, point: Hashable, max_vertices: Optional[int] = None, name: str = "free_module"):
        super().__init__(free)
        self.free = free
        self.gens = gens
        self.gen_degrees = degrees
        self.gen_action = action
        self.name = name
        self.max_vertices = max_vertices if max_vertices is not None else free.max_vertices
        self.point = (MARKED, (('gen', point), (0, 1)))
        self.canon = Canonicalizer(permute=self._permute_dec, degree=self._degree_dec)
        self._basis: Dict[int, List[Hashable]] = {}

    def _is_module_gen(self, dec) -> bool:
        return isinstance(dec, tuple) and dec[:1] == ('gen',)

    def _permute_dec(self, dec, p):
        if self._is_module_gen(dec):
            return {('gen', h): c for h, c in self.gen_action(dec[1], p).items()}
        return self.free.gens.permute(dec, p)

    def _degree_dec(self, dec) -> int:
        if self._is_module_gen(dec):
            return self.gen_degrees.get(dec[1], 0)
        return self.free.gens.degree(dec)

    def basis(self, k: int) -> List[Hashable]:
        if k in self._basis:
            return self._basis[k]
        out, seen = [], set()
        arities = self.free.gens.arities()
        min_valence = (min(arities) + 1) if arities else k + 2
        for shape in enumerate_trees(range(k), 'with_marked_vertex', self.max_vertices,
                                     min_valence=min_valence, marked_min_valence=1):
            graph = tree_to_graph(shape)
            choices = [[('gen', g) for g in self.gens.get(len(graph.ports[0]), [])]]
            choices += [self.free.gens.basis.get(len(ports) - 1, []) for ports in graph.ports[1:]]
            for combo in product(*choices):
                g = graph.copy()
                g.decorations = list(combo)
                g.word = [('v', v) for v in range(len(g.ports))]
                if not self.window.contains_degree(sum(self._degree_dec(d) for d in combo)):
                    continue
                for key in self.canon.canonicalize(g):
                    if key not in seen:
                        seen.add(key)
                        out.append(key)
        out.sort(key=sort_key)
        self._basis[k] = out
        return out

    def slots(self, m) -> int:
        return len(node_leaves(m[1]))

    def degree(self, m) -> int:
        return sum(self._degree_dec(v[0]) for v in Tree(m[1], MARKED).vertices())

    def generator(self, label) -> Hashable:
        slots = next(k for k, labels in self.gens.items() if label in labels)
        return (MARKED, (('gen', label), tuple(range(slots))))

    def _finish(self, graph: TreeGraph) -> Vec:
        if len(graph.ports) > self.max_vertices:
            raise WindowOverflow(f"{self.name}: {len(graph.ports)} vertices exceed {self.max_vertices}")
        return self.canon.canonicalize(graph)

    def permute(self, m, p) -> Vec:
        inv = invert_perm(p)
        g = tree_to_graph(Tree(m[1], MARKED))
        g.ports = [[('leg', inv[q[1]]) if q[0] == 'leg' else q for q in row] for row in g.ports]
        return self._finish(g)

    def act(self, m, i, q) -> Vec:
        if q == FREE_UNIT:
            return {m: Fraction(1)}
        n = self.free.arity(q)
        gm = tree_to_graph(Tree(m[1], MARKED))
        gm.ports = [[('leg', None if p[1] == i else (p[1] if p[1] < i else p[1] + n - 1)) if p[0] == 'leg' else p
                     for p in row] for row in gm.ports]
        gq = self.free.graph(q, [None] + [i + t for t in range(n)])
        v, slot = gm.leg_port(None)
        offset = len(gm.ports)
        gq.ports = [[('v', p[1] + offset) if p[0] == 'v' else p for p in row] for row in gq.ports]
        w, wslot = gq.leg_port(None)
        gm.ports[v][slot] = ('v', w + offset)
        gq.ports[w][wslot] = ('v', v)
        graph = TreeGraph(gm.ports + gq.ports, gm.decorations + gq.decorations,
                          [('v', k) for k in range(offset + len(gq.ports))], 0)
        return self._finish(graph)
