"""
Finite (cyclic) operads on explicit basis labels.

An element of arity n has slots 0..n: slot 0 is the output, slots 1..n are
the inputs. For a cyclic operad all n + 1 slots are on equal footing and
the component P(n) is also written P((n + 1)).

Conventions shared by every implementation:
    compose(x, i, y)   slots x0..x(i-1), y1..ym, x(i+1)..xn
    permute(x, p)      new slot t holds old slot p[t]; p[0] != 0 only when cyclic
    glue(x, a, y, b)   slots x[:a] + y[b+1:] + y[:b] + x[a+1:]
"""

from fractions import Fraction
from itertools import permutations
from typing import Dict, Hashable, List, Optional, Sequence, Tuple

from core.base import (
    TruncationWindow, UnknownName, Vec, build_logger, vec_add, vec_scale,
)
from core.ratlin import SparseMatrix
from core.symseq import ArityComponent, GradedSpace, GroupAction, Perm, invert_perm, transposition


class OperadData:
    """
    Base class for finite-window operads.

    Subclasses provide ``basis``, ``arity``, ``compose``, ``permute`` and the
    ``unit`` label; degrees and differentials default to zero.
    """

    name = "operad"
    cyclic = False
    one_shifted = False

    def __init__(self, window: Optional[TruncationWindow] = None):
        self.window = window or TruncationWindow()

    # ==================== Structure ====================

    unit: Hashable = None

    def basis(self, arity: int) -> List[Hashable]:
        raise NotImplementedError

    def arity(self, x: Hashable) -> int:
        raise NotImplementedError

    def degree(self, x: Hashable) -> int:
        return 0

    def compose(self, x: Hashable, i: int, y: Hashable) -> Vec:
        raise NotImplementedError

    def permute(self, x: Hashable, p: Perm) -> Vec:
        raise NotImplementedError

    def differential(self, x: Hashable) -> Vec:
        return {}

    # ==================== Derived operations ====================

    def augmentation(self, x: Hashable) -> Fraction:
        return Fraction(1) if x == self.unit else Fraction(0)

    def reduced_basis(self, arity: int) -> List[Hashable]:
        """Basis of the augmentation ideal."""
        return [x for x in self.basis(arity) if x != self.unit]

    def cyclic_basis(self, r: int) -> List[Hashable]:
        """Basis of P((r))."""
        return self.basis(r - 1)

    def slots(self, x: Hashable) -> int:
        return self.arity(x) + 1

    def glue(self, x: Hashable, a: int, y: Hashable, b: int) -> Vec:
        """Cyclic composition of slot a of x with slot b of y."""
        k = self.slots(y)
        if b:
            ys = self.permute(y, tuple((b + t) % k for t in range(k)))
        else:
            ys = {y: Fraction(1)}
        n = self.slots(x)
        out: Vec = {}
        if a:
            for y2, c in ys.items():
                vec_add(out, self.compose(x, a, y2), c)
            return out
        # rotate x so that its slot 0 becomes the last slot, compose there, rotate back
        m = k - 1
        rotated = self.permute(x, tuple((t + 1) % n for t in range(n)))
        back = tuple([n - 1 + t for t in range(m)] + [t - m for t in range(m, n - 1 + m)])
        for x2, cx in rotated.items():
            for y2, cy in ys.items():
                for z, cz in self.compose(x2, n - 1, y2).items():
                    vec_add(out, self.permute(z, back), cx * cy * cz)
        return out

    def compose_vec(self, u: Vec, i: int, v: Vec) -> Vec:
        out: Vec = {}
        for x, cx in u.items():
            for y, cy in v.items():
                vec_add(out, self.compose(x, i, y), cx * cy)
        return out

    def permute_vec(self, u: Vec, p: Perm) -> Vec:
        out: Vec = {}
        for x, c in u.items():
            vec_add(out, self.permute(x, p), c)
        return out

    def differential_vec(self, u: Vec) -> Vec:
        out: Vec = {}
        for x, c in u.items():
            vec_add(out, self.differential(x), c)
        return out

    def component(self, arity: int) -> ArityComponent:
        """The arity component as a graded space with its symmetric group action."""
        labels = self.basis(arity)
        by_degree: Dict[int, List[Hashable]] = {}
        for x in labels:
            by_degree.setdefault(self.degree(x), []).append(x)
        space = GradedSpace(by_degree)
        n = arity + 1 if self.cyclic else arity
        offset = 0 if self.cyclic else 1
        generators: Dict[int, Dict[int, SparseMatrix]] = {}
        for i in range(n - 1):
            s = transposition(arity + 1, i + offset)
            generators[i] = {}
            for degree, basis in by_degree.items():
                index = {x: j for j, x in enumerate(basis)}
                columns = [{index[k]: v for k, v in self.permute(x, s).items()} for x in basis]
                generators[i][degree] = SparseMatrix.from_columns(len(basis), columns)
        differential: Dict[int, SparseMatrix] = {}
        for degree, basis in by_degree.items():
            target = by_degree.get(degree + 1, [])
            if not target:
                continue
            index = {x: j for j, x in enumerate(target)}
            columns = [{index[k]: v for k, v in self.differential(x).items()} for x in basis]
            differential[degree] = SparseMatrix.from_columns(len(target), columns)
        return ArityComponent(space, GroupAction(n, generators), differential)

    def dims(self, max_arity: Optional[int] = None) -> Dict[int, int]:
        top = max_arity if max_arity is not None else self.window.max_arity
        return {n: len(self.basis(n)) for n in range(1, top + 1)}

    # ==================== Axioms ====================

    def check_axioms(self, max_arity: Optional[int] = None) -> List[str]:
        """
        Unit, associativity, equivariance (and cyclic compatibility) on all
        basis triples within the arity bound. Returns the failures found.
        """
        top = max_arity if max_arity is not None else self.window.max_arity
        failures: List[str] = []
        for n in range(1, top + 1):
            for x in self.basis(n):
                if self.compose(self.unit, 1, x) != {x: 1}:
                    failures.append(f"left unit fails on {x!r}")
                for i in range(1, n + 1):
                    if self.compose(x, i, self.unit) != {x: 1}:
                        failures.append(f"right unit fails on {x!r} at {i}")
        for n in range(1, top + 1):
            for m in range(1, top - n + 2):
                for k in range(1, top - n - m + 3):
                    failures += self._check_triples(n, m, k)
        for n in range(2, top + 1):
            failures += self._check_equivariance(n, top)
        return failures

    def _check_triples(self, n: int, m: int, k: int) -> List[str]:
        failures = []
        for x in self.basis(n):
            for y in self.basis(m):
                for z in self.basis(k):
                    for i in range(1, n + 1):
                        xy = self.compose(x, i, y)
                        # sequential
                        for j in range(1, m + 1):
                            left = self.compose_vec(xy, i + j - 1, {z: 1})
                            right = self.compose_vec({x: 1}, i, self.compose(y, j, z))
                            if left != right:
                                failures.append(f"sequential associativity fails for {x!r},{y!r},{z!r}")
                        # parallel
                        for j in range(i + 1, n + 1):
                            left = self.compose_vec(xy, j + m - 1, {z: 1})
                            sign = -1 if (self.degree(y) * self.degree(z)) % 2 else 1
                            xz = self.compose(x, j, z)
                            right = vec_scale(self.compose_vec(xz, i, {y: 1}), sign)
                            if left != right:
                                failures.append(f"parallel associativity fails for {x!r},{y!r},{z!r}")
        return failures

    def _check_equivariance(self, n: int, top: int) -> List[str]:
        failures = []
        for p in permutations(range(1, n + 1)):
            perm = (0,) + p
            for x in self.basis(n):
                for m in range(1, top - n + 2):
                    for y in self.basis(m):
                        for i in range(1, n + 1):
                            left = self.compose_vec(self.permute(x, perm), i, {y: 1})
                            right = self.permute_vec(self.compose(x, perm[i], y), block_permutation(perm, i, m))
                            if left != right:
                                failures.append(f"equivariance fails for {x!r} under {perm}")
        return failures

    def check_cyclic_axioms(self, max_arity: Optional[int] = None) -> List[str]:
        """
        glue(x, a, y, b) = ±glue(y, b, x, a) rotated, on all basis pairs with
        at most max_arity + 1 slots in the result. Empty for non-cyclic operads.
        """
        if not self.cyclic:
            return []
        top = max_arity if max_arity is not None else self.window.max_arity
        failures: List[str] = []
        for n in range(1, top + 1):
            for m in range(1, top - n + 2):
                for x in self.basis(n):
                    for y in self.basis(m):
                        sign = -1 if (self.degree(x) * self.degree(y)) % 2 else 1
                        for a in range(n + 1):
                            for b in range(m + 1):
                                left = self.glue(x, a, y, b)
                                swapped = self.glue(y, b, x, a)
                                right = vec_scale(self.permute_vec(swapped, rotation(n + m, b + n - a)), sign)
                                if left != right:
                                    failures.append(f"cyclic gluing fails for {x!r} at {a}, {y!r} at {b}")
        return failures


def block_permutation(p: Perm, i: int, m: int) -> Perm:
    """
    The permutation q with (x·p) ∘_i y = (x ∘_{p[i]} y)·q for y of arity m.
    """
    j = p[i]

    def position(old: int) -> int:
        return old if old < j else old + m - 1

    q = []
    n = len(p) - 1
    for s in range(n + m):
        if s < i:
            q.append(position(p[s]))
        elif s < i + m:
            q.append(j + s - i)
        else:
            q.append(position(p[s - m + 1]))
    return tuple(q)


def rotation(k: int, b: int) -> Perm:
    """Cyclic relabeling bringing slot b to slot 0."""
    return tuple((b + t) % k for t in range(k))


def relabel_for(p: Perm) -> Dict[int, int]:
    """Old slot -> new slot under p (p[new] = old)."""
    inv = invert_perm(p)
    return {old: inv[old] for old in range(len(p))}


# ==================== Com ====================

class ComOperad(OperadData):
    """Commutative operad, cyclic: Com((r)) = Q with trivial action."""

    name = "com_cyc"
    cyclic = True
    unit = ('com', 1)

    def basis(self, arity: int) -> List[Hashable]:
        return [('com', arity)] if arity >= 1 else []

    def arity(self, x) -> int:
        return x[1]

    def compose(self, x, i, y) -> Vec:
        return {('com', x[1] + y[1] - 1): Fraction(1)}

    def permute(self, x, p) -> Vec:
        return {x: Fraction(1)}


# ==================== Ass ====================

def _cyclic_word(word: Tuple[int, ...], p: Perm) -> Tuple[int, ...]:
    inv = invert_perm(p)
    cycle = [inv[0]] + [inv[letter] for letter in word]
    start = cycle.index(0)
    rotated = cycle[start:] + cycle[:start]
    return tuple(rotated[1:])


class AssOperad(OperadData):
    """
    Associative operad. An element of arity n is a word (w1..wn) in the input
    slots, read as the cyclic order (0, w1, ..., wn).
    """

    name = "ass_cyc"
    cyclic = True
    unit = ('ass', (1,))

    def basis(self, arity: int) -> List[Hashable]:
        if arity < 1:
            return []
        return [('ass', w) for w in permutations(range(1, arity + 1))]

    def arity(self, x) -> int:
        return len(x[1])

    def compose(self, x, i, y) -> Vec:
        m = len(y[1])
        word = []
        for letter in x[1]:
            if letter == i:
                word.extend(l + i - 1 for l in y[1])
            else:
                word.append(letter if letter < i else letter + m - 1)
        return {('ass', tuple(word)): Fraction(1)}

    def permute(self, x, p) -> Vec:
        return {('ass', _cyclic_word(x[1], p)): Fraction(1)}


# ==================== Lie ====================

def lie_comb(word: Sequence[int]) -> Vec:
    """Expansion of the left-normed bracket [..[[x_w1, x_w2], x_w3]..] in Ass."""
    current: Dict[Tuple[int, ...], Fraction] = {(word[0],): Fraction(1)}
    for letter in word[1:]:
        nxt: Dict[Tuple[int, ...], Fraction] = {}
        for w, c in current.items():
            vec_add(nxt, {w + (letter,): c})
            vec_add(nxt, {(letter,) + w: -c})
        current = nxt
    return {('ass', w): c for w, c in current.items()}


class LieOperad(OperadData):
    """
    Lie operad realized inside Ass. The basis of Lie(n) is the left-normed
    combs starting with x1; the coordinate of a Lie element on the comb
    (1, w2, .., wn) is its coefficient on the associative word 1 w2 .. wn.
    """

    name = "lie"
    cyclic = True
    unit = ('lie', (1,))

    def __init__(self, window: Optional[TruncationWindow] = None):
        super().__init__(window)
        self.ass = AssOperad(window)

    def basis(self, arity: int) -> List[Hashable]:
        if arity < 1:
            return []
        return [('lie', (1,) + w) for w in permutations(range(2, arity + 1))]

    def arity(self, x) -> int:
        return len(x[1])

    def expand(self, x) -> Vec:
        return lie_comb(x[1])

    def extract(self, v: Vec) -> Vec:
        return {('lie', w[1]): c for w, c in v.items() if w[1][0] == 1}

    def compose(self, x, i, y) -> Vec:
        return self.extract(self.ass.compose_vec(self.expand(x), i, self.expand(y)))

    def permute(self, x, p) -> Vec:
        return self.extract(self.ass.permute_vec(self.expand(x), p))


# ==================== Forgetful functor ====================

class ForgetCyclic(OperadData):
    """F(P): the underlying non-cyclic operad of a cyclic operad."""

    cyclic = False

    def __init__(self, operad: OperadData):
        super().__init__(operad.window)
        self.operad = operad
        self.name = f"F({operad.name})"
        self.unit = operad.unit

    def basis(self, arity):
        return self.operad.basis(arity)

    def arity(self, x):
        return self.operad.arity(x)

    def degree(self, x):
        return self.operad.degree(x)

    def compose(self, x, i, y):
        return self.operad.compose(x, i, y)

    def permute(self, x, p):
        if p[0] != 0:
            raise ValueError("non-cyclic operad cannot move the output slot")
        return self.operad.permute(x, p)

    def differential(self, x):
        return self.operad.differential(x)


# ==================== Registry ====================

BUILTINS = ('com_cyc', 'ass_cyc', 'lie', 'bv', 'bv_cyc')


def builtin(name: str, w: Optional[TruncationWindow] = None) -> OperadData:
    """
    Look up a builtin operad.

    Raises:
        UnknownName: name is not one of com_cyc, ass_cyc, lie, bv, bv_cyc
    """
    w = w or TruncationWindow()
    if name == 'com_cyc':
        operad: OperadData = ComOperad(w)
    elif name == 'ass_cyc':
        operad = AssOperad(w)
    elif name == 'lie':
        operad = LieOperad(w)
    elif name in ('bv', 'bv_cyc'):
        from bvcalc.bv import BVOperad
        operad = BVOperad(w, cyclic=(name == 'bv_cyc'))
    else:
        raise UnknownName(f"no builtin operad named {name!r}; known: {', '.join(BUILTINS)}")
    build_logger.debug(f"builtin operad {name} in window {w.as_dict()}")
    return operad
