"""
Graded vector spaces with symmetric group actions.

Symmetric sequences carry an S_r action on labels 1..r; cyclic sequences carry
an S_r action on labels 0..r-1 at arity ((r)). Actions are stored through the
images of adjacent transpositions only.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Dict, Hashable, List, Optional, Sequence, Tuple

from .base import NonRepresentation, TruncationWindow, WindowMismatch
from .ratlin import ComplexSlice, SparseMatrix, coordinates, homology, kernel_basis

Perm = Tuple[int, ...]


# ==================== Permutations ====================

def compose_perm(a: Perm, b: Perm) -> Perm:
    """(a ∘ b)(i) = a(b(i))."""
    return tuple(a[b[i]] for i in range(len(a)))


def invert_perm(a: Perm) -> Perm:
    inv = [0] * len(a)
    for i, j in enumerate(a):
        inv[j] = i
    return tuple(inv)


def perm_sign(a: Perm) -> int:
    seen = [False] * len(a)
    sign = 1
    for start in range(len(a)):
        if seen[start]:
            continue
        length = 0
        j = start
        while not seen[j]:
            seen[j] = True
            j = a[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def transposition(n: int, i: int) -> Perm:
    """Adjacent transposition swapping positions i and i+1."""
    p = list(range(n))
    p[i], p[i + 1] = p[i + 1], p[i]
    return tuple(p)


def reduced_word(p: Perm) -> List[int]:
    """Indices i with p = s_{i_1} s_{i_2} ... s_{i_k} (reduced)."""
    word: List[int] = []
    current = list(p)
    while True:
        for i in range(len(current) - 1):
            if current[i] > current[i + 1]:
                current[i], current[i + 1] = current[i + 1], current[i]
                word.append(i)
                break
        else:
            break
    return list(reversed(word))


def cycle_type_representative(mu: Sequence[int]) -> Perm:
    """Permutation with consecutive cycles of the given lengths."""
    perm = []
    start = 0
    for length in mu:
        for k in range(length):
            perm.append(start + (k + 1) % length)
        start += length
    return tuple(perm)


# ==================== Graded spaces ====================

@dataclass
class GradedSpace:
    """Finite basis per degree; labels unique across degrees."""
    basis: Dict[int, List[Hashable]] = field(default_factory=dict)

    def __post_init__(self):
        seen = set()
        for degree, labels in self.basis.items():
            for label in labels:
                if label in seen:
                    raise ValueError(f"label {label!r} repeated")
                seen.add(label)
        self._index = {label: (d, i) for d, labels in self.basis.items() for i, label in enumerate(labels)}

    def dim(self, degree: Optional[int] = None) -> int:
        if degree is None:
            return sum(len(v) for v in self.basis.values())
        return len(self.basis.get(degree, []))

    def degrees(self) -> List[int]:
        return sorted(d for d, v in self.basis.items() if v)

    def locate(self, label: Hashable) -> Tuple[int, int]:
        return self._index[label]

    def dims(self) -> Dict[int, int]:
        return {d: len(self.basis[d]) for d in self.degrees()}


@dataclass
class GroupAction:
    """
    Left S_n action given by images of adjacent transpositions.

    Attributes:
        n: group degree
        generators: i -> degree -> matrix of s_i = (i, i+1) on that degree
    """
    n: int
    generators: Dict[int, Dict[int, SparseMatrix]]

    def __post_init__(self):
        self._cache: Dict[Tuple[Perm, int], SparseMatrix] = {}

    def degree_dim(self, degree: int) -> int:
        for mats in self.generators.values():
            if degree in mats:
                return mats[degree].rows
        return 0

    def generator(self, i: int, degree: int, size: Optional[int] = None) -> SparseMatrix:
        """Matrix of s_i on a degree; empty degrees get the 0x0 matrix."""
        mats = self.generators[i]
        if degree in mats:
            return mats[degree]
        size = size if size is not None else self.degree_dim(degree)
        if size:
            raise NonRepresentation(f"s_{i} has no matrix in degree {degree} of dimension {size}")
        return SparseMatrix.identity(0)

    def matrix(self, p: Perm, degree: int, dim: Optional[int] = None) -> SparseMatrix:
        key = (p, degree)
        if key in self._cache:
            return self._cache[key]
        size = dim if dim is not None else self.degree_dim(degree)
        result = SparseMatrix.identity(size)
        for i in reduced_word(p):
            result = result @ self.generator(i, degree, size)
        self._cache[key] = result
        return result

    def check_coxeter(self, degrees: Sequence[int], dims: Dict[int, int]):
        """Raise NonRepresentation unless the Coxeter relations hold."""
        for degree in degrees:
            size = dims.get(degree, 0)
            if not size:
                continue
            ident = SparseMatrix.identity(size)
            for i in range(self.n - 1):
                s = self.generator(i, degree, size)
                if s @ s != ident:
                    raise NonRepresentation(f"s_{i}^2 != 1 in degree {degree}")
                if i + 1 < self.n - 1:
                    t = self.generator(i + 1, degree, size)
                    if s @ t @ s != t @ s @ t:
                        raise NonRepresentation(f"braid relation fails for s_{i} in degree {degree}")
                for j in range(i + 2, self.n - 1):
                    t = self.generator(j, degree, size)
                    if s @ t != t @ s:
                        raise NonRepresentation(f"s_{i}, s_{j} do not commute in degree {degree}")


def permutation_action(n: int, basis: List[Hashable], act, degree: int = 0) -> GroupAction:
    """
    Action from a function act(perm, label) -> {label: coeff}.

    The perm acts on positions 0..n-1 of the group's labels.
    """
    index = {label: i for i, label in enumerate(basis)}
    generators: Dict[int, Dict[int, SparseMatrix]] = {}
    for i in range(n - 1):
        s = transposition(n, i)
        columns = []
        for label in basis:
            image = act(s, label)
            columns.append({index[k]: v for k, v in image.items()})
        generators[i] = {degree: SparseMatrix.from_columns(len(basis), columns)}
    return GroupAction(n, generators)


@dataclass
class ArityComponent:
    """One arity of a sequence: graded space, group action, differential (degree k -> k+1)."""
    space: GradedSpace
    action: GroupAction
    differential: Dict[int, SparseMatrix] = field(default_factory=dict)

    def d(self, degree: int) -> SparseMatrix:
        if degree in self.differential:
            return self.differential[degree]
        return SparseMatrix.zero(self.space.dim(degree + 1), self.space.dim(degree))

    def check(self):
        """Coxeter relations, d² = 0 and equivariance of d."""
        dims = {d: self.space.dim(d) for d in self.space.basis}
        self.action.check_coxeter(list(dims), dims)
        for k in self.space.degrees():
            if not (self.d(k + 1) @ self.d(k)).is_zero():
                raise NonRepresentation(f"d∘d nonzero at degree {k}")
            for i in range(self.action.n - 1):
                src = self.action.generators[i].get(k)
                tgt = self.action.generators[i].get(k + 1)
                if src is None or tgt is None:
                    continue
                if tgt @ self.d(k) != self.d(k) @ src:
                    raise NonRepresentation(f"differential not equivariant at degree {k}")


@dataclass
class SymSequence:
    """Arity r >= 1 components with S_r acting on labels 1..r."""
    components: Dict[int, ArityComponent]
    window: Optional[TruncationWindow] = None
    cyclic = False

    def __getitem__(self, arity: int) -> ArityComponent:
        return self.components[arity]

    def dims(self) -> Dict[int, Dict[int, int]]:
        return {r: c.space.dims() for r, c in sorted(self.components.items())}


@dataclass
class CycSequence(SymSequence):
    """Arity ((r)) components, r >= 2, with S_r acting on labels 0..r-1."""
    cyclic = True


def _empty_action(n: int, degrees: Sequence[int], dims: Dict[int, int]) -> GroupAction:
    return GroupAction(n, {i: {d: SparseMatrix.identity(dims[d]) for d in degrees} for i in range(n - 1)})


def trivial_component(n: int, degree: int = 0, label: Hashable = 'e') -> ArityComponent:
    space = GradedSpace({degree: [label]})
    return ArityComponent(space, _empty_action(n, [degree], {degree: 1}))


# ==================== Restriction and induction ====================

def restrict(b: CycSequence) -> SymSequence:
    """Res(B)(r) = B((r+1)) with S_r the stabilizer of label 0."""
    components = {}
    for arity, comp in b.components.items():
        r = arity - 1
        if r < 1:
            continue
        gens = {i - 1: mats for i, mats in comp.action.generators.items() if i >= 1}
        components[r] = ArityComponent(comp.space, GroupAction(r, gens), comp.differential)
    return SymSequence(components, b.window)


def coset_rep(n: int, k: int) -> Perm:
    """The cycle sending 0 to k and i to i-1 for 1 <= i <= k."""
    p = list(range(n))
    p[0] = k
    for i in range(1, k + 1):
        p[i] = i - 1
    return tuple(p)


def induce(a: SymSequence) -> CycSequence:
    """Ind(A)((r)) = Ind from S_{r-1} (stabilizer of 0) to S_r of A(r-1)."""
    components = {}
    for arity, comp in a.components.items():
        n = arity + 1
        reps = [coset_rep(n, k) for k in range(n)]
        basis = {d: [(k, label) for k in range(n) for label in labels] for d, labels in comp.space.basis.items()}
        space = GradedSpace(basis)
        generators: Dict[int, Dict[int, SparseMatrix]] = {}
        for i in range(n - 1):
            s = transposition(n, i)
            generators[i] = {}
            for degree, labels in comp.space.basis.items():
                m = len(labels)
                entries = {}
                for k in range(n):
                    target = s[k]
                    h = compose_perm(invert_perm(reps[target]), compose_perm(s, reps[k]))
                    assert h[0] == 0
                    inner = tuple(x - 1 for x in h[1:])
                    mat = comp.action.matrix(inner, degree, m) if arity > 1 else SparseMatrix.identity(m)
                    for (row, col), v in mat.entries.items():
                        entries[(target * m + row, k * m + col)] = v
                generators[i][degree] = SparseMatrix(n * m, n * m, entries)
        differential = {}
        for degree, mat in comp.differential.items():
            entries = {}
            src, tgt = mat.cols, mat.rows
            for k in range(n):
                for (row, col), v in mat.entries.items():
                    entries[(k * tgt + row, k * src + col)] = v
            differential[degree] = SparseMatrix(n * tgt, n * src, entries)
        components[n] = ArityComponent(space, GroupAction(n, generators), differential)
    return CycSequence(components, a.window)


# ==================== Auxiliary sequences ====================

def build_aux(kind: str, r: int) -> ArityComponent:
    """
    X((r)), X'((r)) or Y((r)) with S_r permuting the symbols ∂_1..∂_r.

    Labels: ('c',) in degree 0 and ('d', j) in degree -1 for X; Y uses
    ('y', j) for ∂_1 - ∂_j, j = 2..r.
    """
    if r < 2:
        raise ValueError("auxiliary sequences start at arity 2")
    partials = [('d', j) for j in range(1, r + 1)]

    def act_partials(s: Perm, label):
        return {('d', s[label[1] - 1] + 1): Fraction(1)}

    if kind in ('X', 'Xprime'):
        action = permutation_action(r, partials, act_partials, degree=-1)
        if kind == 'Xprime':
            return ArityComponent(GradedSpace({-1: partials}), action)
        for i in action.generators:
            action.generators[i][0] = SparseMatrix.identity(1)
        differential = {-1: SparseMatrix(1, r, {(0, j): Fraction(1) for j in range(r)})}
        return ArityComponent(GradedSpace({-1: partials, 0: [('c',)]}), action, differential)

    if kind == 'Y':
        labels = [('y', j) for j in range(2, r + 1)]

        def act_y(s: Perm, label):
            # ∂_1 - ∂_j -> (∂_1 - ∂_s(j)) - (∂_1 - ∂_s(1))
            out: Dict[Hashable, Fraction] = {}
            a, b = s[0] + 1, s[label[1] - 1] + 1
            if b != 1:
                out[('y', b)] = out.get(('y', b), 0) + 1
            if a != 1:
                out[('y', a)] = out.get(('y', a), 0) - 1
            return {k: v for k, v in out.items() if v}

        return ArityComponent(GradedSpace({-1: labels}), permutation_action(r, labels, act_y, degree=-1))

    raise ValueError(f"unknown auxiliary sequence {kind!r}")


def aux_inclusion(r: int) -> SparseMatrix:
    """Y((r)) -> X((r)) in degree -1: ('y', j) -> ∂_1 - ∂_j."""
    entries = {}
    for col, j in enumerate(range(2, r + 1)):
        entries[(0, col)] = Fraction(1)
        entries[(j - 1, col)] = Fraction(-1)
    return SparseMatrix(r, r - 1, entries)


# ==================== Tensor products ====================

def kron(a: SparseMatrix, b: SparseMatrix) -> SparseMatrix:
    entries = {}
    for (i, j), x in a.entries.items():
        for (k, l), y in b.entries.items():
            entries[(i * b.rows + k, j * b.cols + l)] = x * y
    return SparseMatrix(a.rows * b.rows, a.cols * b.cols, entries)


def tensor_components(a: ArityComponent, b: ArityComponent) -> ArityComponent:
    """Graded tensor product with diagonal action and Koszul-signed Leibniz differential."""
    if a.action.n != b.action.n:
        raise WindowMismatch("tensor factors act through different groups")
    n = a.action.n
    blocks: Dict[int, List[Tuple[int, int]]] = {}
    for da in a.space.degrees():
        for db in b.space.degrees():
            blocks.setdefault(da + db, []).append((da, db))
    basis = {}
    offsets: Dict[Tuple[int, int], int] = {}
    for degree, pairs in sorted(blocks.items()):
        labels = []
        for da, db in pairs:
            offsets[(da, db)] = len(labels)
            labels.extend((x, y) for x in a.space.basis[da] for y in b.space.basis[db])
        basis[degree] = labels
    space = GradedSpace(basis)

    generators: Dict[int, Dict[int, SparseMatrix]] = {}
    for i in range(n - 1):
        generators[i] = {}
        for degree, pairs in blocks.items():
            size = len(basis[degree])
            entries = {}
            for da, db in pairs:
                block = kron(a.action.generator(i, da, a.space.dim(da)),
                             b.action.generator(i, db, b.space.dim(db)))
                off = offsets[(da, db)]
                for (row, col), v in block.entries.items():
                    entries[(off + row, off + col)] = v
            generators[i][degree] = SparseMatrix(size, size, entries)

    differential: Dict[int, SparseMatrix] = {}
    for degree, pairs in blocks.items():
        if degree + 1 not in blocks:
            continue
        entries: Dict[Tuple[int, int], Fraction] = {}
        for da, db in pairs:
            off_src = offsets[(da, db)]
            na, nb = a.space.dim(da), b.space.dim(db)
            if (da + 1, db) in offsets:
                da_mat = kron(a.d(da), SparseMatrix.identity(nb))
                off_tgt = offsets[(da + 1, db)]
                for (row, col), v in da_mat.entries.items():
                    key = (off_tgt + row, off_src + col)
                    entries[key] = entries.get(key, 0) + v
            if (da, db + 1) in offsets:
                sign = -1 if da % 2 else 1
                db_mat = kron(SparseMatrix.identity(na), b.d(db))
                off_tgt = offsets[(da, db + 1)]
                for (row, col), v in db_mat.entries.items():
                    key = (off_tgt + row, off_src + col)
                    entries[key] = entries.get(key, 0) + sign * v
        differential[degree] = SparseMatrix(len(basis[degree + 1]), len(basis[degree]), entries)
    return ArityComponent(space, GroupAction(n, generators), differential)


def tensor_arity_wise(a: SymSequence, b: SymSequence) -> SymSequence:
    if a.window is not None and b.window is not None:
        a.window.require_same(b.window)
    components = {r: tensor_components(a[r], b[r]) for r in sorted(set(a.components) & set(b.components))}
    cls = CycSequence if a.cyclic else SymSequence
    return cls(components, a.window or b.window)


def equivariant_hom_dim(a: ArityComponent, b: ArityComponent, degree_a: int, degree_b: int) -> int:
    """Dimension of S_n-equivariant linear maps A_degree_a -> B_degree_b, by a linear solve."""
    m, k = a.space.dim(degree_a), b.space.dim(degree_b)
    if m == 0 or k == 0:
        return 0
    # unknown M[row, col] at index row * m + col
    rows = []
    for i in range(a.action.n - 1):
        sa = a.action.generator(i, degree_a, m)
        sb = b.action.generator(i, degree_b, k)
        for row in range(k):
            for col in range(m):
                eq = {}
                for t, v in sb.row(row).items():
                    eq[t * m + col] = eq.get(t * m + col, 0) + v
                for t, v in sa.column(col).items():
                    eq[row * m + t] = eq.get(row * m + t, 0) - v
                rows.append({c: v for c, v in eq.items() if v})
    system = SparseMatrix(len(rows), k * m, {(r, c): v for r, eq in enumerate(rows) for c, v in eq.items()})
    return len(kernel_basis(system))


# ==================== Characters ====================

def partitions(n: int, largest: Optional[int] = None) -> List[Tuple[int, ...]]:
    """Partitions of n in decreasing lexicographic order."""
    if largest is None:
        largest = n
    if n == 0:
        return [()]
    out = []
    for first in range(min(n, largest), 0, -1):
        for rest in partitions(n - first, first):
            out.append((first,) + rest)
    return out


@lru_cache(maxsize=None)
def irreducible_character(shape: Tuple[int, ...], cycle_type: Tuple[int, ...]) -> int:
    """Murnaghan-Nakayama rule on beta-sets."""
    if not cycle_type:
        return 1 if sum(shape) == 0 else 0
    k, rest = cycle_type[0], cycle_type[1:]
    length = len(shape)
    beta = [shape[i] + (length - 1 - i) for i in range(length)]
    beta_set = set(beta)
    total = 0
    for b in beta:
        target = b - k
        if target < 0 or target in beta_set:
            continue
        height = sum(1 for x in beta if target < x < b)
        new_beta = sorted((beta_set - {b}) | {target}, reverse=True)
        new_shape = tuple(x - (length - 1 - i) for i, x in enumerate(new_beta))
        new_shape = tuple(x for x in new_shape if x > 0)
        total += (-1) ** height * irreducible_character(new_shape, rest)
    return total


def class_size(mu: Tuple[int, ...]) -> int:
    n = sum(mu)
    z = 1
    for part in set(mu):
        count = mu.count(part)
        z *= part ** count * factorial(count)
    return factorial(n) // z


def partition_name(shape: Tuple[int, ...]) -> str:
    return "V_" + "".join(str(p) for p in shape)


def character(action: GroupAction, degree: int, dim: int) -> Dict[Tuple[int, ...], Fraction]:
    chars = {}
    for mu in partitions(action.n):
        mat = action.matrix(cycle_type_representative(mu), degree, dim)
        chars[mu] = sum((mat.get(i, i) for i in range(dim)), Fraction(0))
    return chars


def decompose(action: GroupAction, degree: int, dim: int, check: bool = True) -> Dict[Tuple[int, ...], int]:
    """
    Multiplicities of irreducibles in one graded piece.

    Raises:
        NonRepresentation: Coxeter relations fail or multiplicities are not
        non-negative integers.
    """
    n = action.n
    if dim == 0:
        return {}
    if n <= 1:
        return {(1,) if n == 1 else (): dim}
    if check:
        action.check_coxeter([degree], {degree: dim})
    chars = character(action, degree, dim)
    order = factorial(n)
    result = {}
    reconstructed = 0
    for shape in partitions(n):
        inner = sum(class_size(mu) * chars[mu] * irreducible_character(shape, mu) for mu in chars)
        mult = Fraction(inner, order)
        if mult.denominator != 1 or mult < 0:
            raise NonRepresentation(f"multiplicity {mult} for {shape} is not a non-negative integer")
        if mult:
            result[shape] = int(mult)
            reconstructed += int(mult) * irreducible_character(shape, (1,) * n)
    if reconstructed != dim:
        raise NonRepresentation(f"dimension reconstruction {reconstructed} != {dim}")
    return result


def format_decomposition(decomposition: Dict[Tuple[int, ...], int]) -> Dict[str, int]:
    return {partition_name(shape): mult for shape, mult in sorted(decomposition.items(), reverse=True)}


def invariant_pairing(a: Dict[Tuple[int, ...], Fraction], b: Dict[Tuple[int, ...], Fraction], n: int) -> int:
    """dim (A ⊗ B)^{S_n} from the characters of A and B."""
    total = sum((class_size(mu) * a.get(mu, 0) * b.get(mu, 0) for mu in partitions(n)), Fraction(0))
    value = total / factorial(n)
    if value.denominator != 1 or value < 0:
        raise NonRepresentation(f"invariant dimension {value} is not a non-negative integer")
    return int(value)


# ==================== Homology ====================

def homology_action(c: ComplexSlice, action: GroupAction, degree: int) -> Tuple[GroupAction, int]:
    """
    The action induced on H^degree, written in the basis of the homology
    representatives of `homology(c, degree)`.

    Raises:
        NonRepresentation: the image of a cycle leaves the span of the
            representatives and the boundaries
    """
    reps = homology(c, degree).representatives
    boundaries = c.d(degree - 1).columns()
    generators: Dict[int, Dict[int, SparseMatrix]] = {}
    for i, mats in action.generators.items():
        mat = mats.get(degree)
        columns = []
        for z in reps:
            image = mat.apply(z) if mat is not None else dict(z)
            found = coordinates(reps + boundaries, image)
            if found is None:
                raise NonRepresentation(f"s_{i} does not preserve cycles in degree {degree}")
            columns.append({k: v for k, v in enumerate(found[:len(reps)]) if v})
        generators[i] = {degree: SparseMatrix.from_columns(len(reps), columns)}
    return GroupAction(action.n, generators), len(reps)
