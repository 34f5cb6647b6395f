"""
Drinfeld-Kohno Lie algebras t(r), ft(r) and ft((r + 1)) with their truncated
universal enveloping algebras.

An algebra is presented by letters t_ij and quadratic Lie relations. The
weight-w piece of U is T_w / J_w, where J_w is spanned by the words
a·rel·b; the normal form of an element is its reduction against an echelon
basis of J_w. Elements of U are dicts from words (tuples of letter indices)
to Fractions.
"""

from fractions import Fraction
from itertools import combinations
from typing import Callable, Dict, Hashable, List, Optional, Sequence, Tuple

from core.base import Vec, WindowOverflow, build_logger, vec_add
from core.ratlin import Echelon, coordinates
from core.symseq import GroupAction, Perm, permutation_action, reduced_word, transposition

from .series import AssocSeries, Word, commutator, lyndon_expansion, lyndon_words, words

Form = Dict[int, Fraction]
UElement = Dict[Word, Fraction]


def form_add(*parts: Tuple[Form, Fraction]) -> Form:
    out: Form = {}
    for form, c in parts:
        vec_add(out, form, c)
    return out


class DKAlgebra:
    """
    One Drinfeld-Kohno algebra and its truncated envelope.

    Args:
        r: number of labels besides 0
        framed: keep the t_ii (central in ft)
        cyclic: labels 0..r with the relations Σ_i t_ij = 0 used to
            eliminate the t_ii; implies framed
        max_weight: truncation weight
    """

    def __init__(self, r: int, framed: bool = False, cyclic: bool = False, max_weight: int = 3):
        if r < (1 if framed else 2):
            raise ValueError(f"r must be at least {1 if framed else 2}, got {r}")
        if max_weight < 1:
            raise ValueError("max_weight must be at least 1")
        if cyclic and not framed:
            raise ValueError("the cyclic presentation exists for ft only")
        self.r = r
        self.framed = framed
        self.cyclic = cyclic
        self.max_weight = max_weight
        self.labels = list(range(0 if cyclic else 1, r + 1))
        first = self.labels[0]
        self.letters: List[Tuple[int, int]] = [
            (i, j) for i in self.labels for j in self.labels
            if i < j or (i == j and framed and not cyclic)
        ]
        self.index = {pair: k for k, pair in enumerate(self.letters)}
        self.relations = self._relations()
        self._ideal: Dict[int, Echelon] = {}
        self._lie: Dict[int, List[Tuple[Word, UElement]]] = {}
        build_logger.debug(f"{self.name}: {len(self.letters)} letters, {len(self.relations)} relations, "
                           f"labels from {first}")

    @property
    def name(self) -> str:
        if self.cyclic:
            return f"ft(({self.r + 1}))"
        return f"{'f' if self.framed else ''}t({self.r})"

    # ==================== Generators ====================

    def symbol(self, i: int, j: int) -> Form:
        """t_ij as a linear form in the letters (t_ji = t_ij; t_ii eliminated when cyclic)."""
        if i > j:
            i, j = j, i
        if (i, j) in self.index:
            return {self.index[(i, j)]: Fraction(1)}
        if i == j and self.cyclic:
            return form_add(*[(self.symbol(m, i), Fraction(-1)) for m in self.labels if m != i])
        raise KeyError(f"t_{i}{j} is not a generator of {self.name}")

    def t(self, i: int, j: int) -> UElement:
        return self.form_element(self.symbol(i, j))

    @staticmethod
    def form_element(form: Form) -> UElement:
        return {(k,): c for k, c in form.items() if c}

    def _relations(self) -> List[Tuple[Form, Form]]:
        pairs = [(i, j) for i in self.labels for j in self.labels if i < j]
        if self.framed:
            pairs += [(i, i) for i in self.labels]
        out: List[Tuple[Form, Form]] = []
        for a, b in combinations(pairs, 2):
            if not set(a) & set(b):
                out.append((self.symbol(*a), self.symbol(*b)))
        if self.cyclic:
            return out
        for i in self.labels:
            for j in self.labels:
                if j < i or (i == j and not self.framed):
                    continue
                for k in self.labels:
                    if not self.framed and k in (i, j):
                        continue
                    if i == j == k:
                        continue
                    rhs = form_add((self.symbol(k, i), Fraction(1)), (self.symbol(k, j), Fraction(1)))
                    out.append((self.symbol(i, j), rhs))
        return out

    def bracket_forms(self, a: Form, b: Form) -> UElement:
        return commutator(self.form_element(a), self.form_element(b))

    # ==================== Normal form ====================

    def ideal(self, w: int) -> Echelon:
        """Echelon basis of J_w."""
        if w in self._ideal:
            return self._ideal[w]
        if w > self.max_weight:
            raise WindowOverflow(f"weight {w} exceeds the truncation weight {self.max_weight}")
        basis = Echelon()
        if w == 2:
            for a, b in self.relations:
                basis.add(self.bracket_forms(a, b))
        elif w > 2:
            below = self.ideal(w - 1)
            n = len(self.letters)
            for vector in below.pivots.values():
                for letter in range(n):
                    basis.add({(letter,) + word: c for word, c in vector.items()})
                    basis.add({word + (letter,): c for word, c in vector.items()})
        self._ideal[w] = basis
        build_logger.debug(f"{self.name}: dim J_{w} = {len(basis)}")
        return basis

    def reduce(self, x: UElement) -> UElement:
        """Normal form; terms above the truncation weight are dropped."""
        by_weight: Dict[int, UElement] = {}
        for word, c in x.items():
            if len(word) <= self.max_weight and c:
                by_weight.setdefault(len(word), {})[word] = Fraction(c)
        out: UElement = {}
        for w, part in by_weight.items():
            out.update(self.ideal(w).reduce(part) if w >= 2 else part)
        return out

    def mul(self, x: UElement, y: UElement) -> UElement:
        out: UElement = {}
        for u, cu in x.items():
            room = self.max_weight - len(u)
            for v, cv in y.items():
                if len(v) <= room:
                    vec_add(out, {u + v: cu * cv})
        return self.reduce(out)

    def bracket(self, x: UElement, y: UElement) -> UElement:
        out = self.mul(x, y)
        vec_add(out, self.mul(y, x), -1)
        return out

    def normal_words(self, w: int) -> List[Word]:
        """Words of weight w that are not pivots of J_w: a basis of U_w."""
        pivots = self.ideal(w).pivots if w >= 2 else {}
        return [word for word in words(len(self.letters), w) if word not in pivots]

    def u_dims(self) -> Dict[int, int]:
        n = len(self.letters)
        return {w: n ** w - (len(self.ideal(w)) if w >= 2 else 0) for w in range(1, self.max_weight + 1)}

    # ==================== Lie piece ====================

    def lie_basis(self, w: int) -> List[Tuple[Word, UElement]]:
        """Lyndon words whose bracket images form a basis of the Lie piece, with those images."""
        if w in self._lie:
            return self._lie[w]
        span = Echelon()
        out = []
        for word in lyndon_words(len(self.letters), w):
            image = self.reduce(lyndon_expansion(word))
            if span.add(image):
                out.append((word, image))
        self._lie[w] = out
        return out

    def lie_dims(self) -> Dict[int, int]:
        return {w: len(self.lie_basis(w)) for w in range(1, self.max_weight + 1)}

    def lie_coordinates(self, x: UElement, w: int) -> List[Fraction]:
        found = coordinates([image for _, image in self.lie_basis(w)], x)
        if found is None:
            raise ValueError(f"element is not in the weight-{w} Lie piece of {self.name}")
        return found

    # ==================== Substitution ====================

    def substitute(self, phi: AssocSeries, *arguments: UElement) -> UElement:
        """phi(a, b, ...) in U, one argument per letter of phi."""
        cache: Dict[Word, UElement] = {(): {(): Fraction(1)}}

        def power(word: Word) -> UElement:
            if word not in cache:
                cache[word] = self.mul(power(word[:-1]), arguments[word[-1]])
            return cache[word]

        out: UElement = {}
        for word in sorted(phi.coeffs, key=len):
            if len(word) <= self.max_weight:
                vec_add(out, power(word), phi.coeffs[word])
        return out

    # ==================== Text ====================

    def letter_text(self, k: int) -> str:
        i, j = self.letters[k]
        return f"t{i}{j}"

    def format(self, x: UElement) -> str:
        if not x:
            return "0"
        terms = []
        for word, c in sorted(x.items(), key=lambda t: (len(t[0]), t[0])):
            monomial = "*".join(self.letter_text(k) for k in word) or "1"
            terms.append(f"{c}*{monomial}")
        return " + ".join(terms)

    def as_dict(self) -> Dict:
        return {'name': self.name, 'letters': [self.letter_text(k) for k in range(len(self.letters))],
                'u_dims': {str(w): d for w, d in self.u_dims().items()},
                'lie_dims': {str(w): d for w, d in self.lie_dims().items()}}


def build_dk(r: int, framed: bool = False, cyclic: bool = False, max_weight: int = 3) -> DKAlgebra:
    """Build t(r), ft(r) or ft((r + 1)) truncated at max_weight."""
    algebra = DKAlgebra(r, framed, cyclic, max_weight)
    build_logger.info(f"{algebra.name}: U dims {algebra.u_dims()}")
    return algebra


def pbw_dims(lie_dims: Dict[int, int], max_weight: int) -> Dict[int, int]:
    """Coefficients of Π_k (1 - q^k)^(-l_k): dims of U from dims of the Lie algebra."""
    series = [0] * (max_weight + 1)
    series[0] = 1
    for k, l in sorted(lie_dims.items()):
        for _ in range(l):
            for n in range(k, max_weight + 1):
                series[n] += series[n - k]
    return {w: series[w] for w in range(1, max_weight + 1)}


# ==================== Morphisms given on letters ====================

class LetterMap:
    """A weight-preserving algebra map U(source) -> U(target) given on letters."""

    def __init__(self, source: DKAlgebra, target: DKAlgebra, images: Sequence[Form]):
        self.source = source
        self.target = target
        self.images = [target.form_element(f) for f in images]

    def __call__(self, x: UElement) -> UElement:
        cache: Dict[Word, UElement] = {(): {(): Fraction(1)}}

        def image(word: Word) -> UElement:
            if word not in cache:
                cache[word] = self.target.mul(image(word[:-1]), self.images[word[-1]])
            return cache[word]

        out: UElement = {}
        for word, c in x.items():
            vec_add(out, image(word), c)
        return out

    def form_image(self, form: Form) -> UElement:
        out: UElement = {}
        for k, c in form.items():
            vec_add(out, self.images[k], c)
        return out

    def relation_residuals(self) -> List[UElement]:
        """Images of the source relations, reduced; all zero iff the map is well defined."""
        out = []
        for a, b in self.source.relations:
            out.append(self.target.bracket(self.form_image(a), self.form_image(b)))
        return out


def relabeling(algebra: DKAlgebra, p: Perm) -> LetterMap:
    """t_ij -> t_p(i)p(j); p is a permutation of 0..r (p[0] = 0 unless cyclic)."""
    return LetterMap(algebra, algebra, [algebra.symbol(p[i], p[j]) for i, j in algebra.letters])


def tau_framed(algebra: DKAlgebra) -> LetterMap:
    """The transposition (0 1) on ft(r) in the presentation with labels 1..r."""
    if not algebra.framed or algebra.cyclic:
        raise ValueError("tau_framed needs the framed presentation with labels 1..r")
    images = []
    labels = algebra.labels
    for i, j in algebra.letters:
        if i >= 2:
            images.append(algebra.symbol(i, j))
        elif j >= 2:
            images.append(form_add(*[(algebra.symbol(k, j), Fraction(-1)) for k in labels]))
        else:
            images.append(form_add(*[(algebra.symbol(k, l), Fraction(1)) for k in labels for l in labels]))
    return LetterMap(algebra, algebra, images)


def generator_map(algebra: DKAlgebra, i: int) -> LetterMap:
    """The adjacent transposition s_i = (i, i+1) of the labels 0..r."""
    p = transposition(algebra.r + 1, i)
    if i == 0 and not algebra.cyclic:
        return tau_framed(algebra)
    return relabeling(algebra, p)


def dk_cyclic_map(algebra: DKAlgebra, x: UElement, tau: Perm) -> UElement:
    """
    The cyclic action of a permutation of 0..r on an element of U.

    The permutation is written as a reduced word in adjacent transpositions;
    the transposition (0 1) acts by the explicit formulas in the framed
    presentation and by relabeling in the cyclic one.
    """
    if not algebra.framed:
        raise ValueError(f"{algebra.name} has no cyclic structure")
    if len(tau) != algebra.r + 1:
        raise ValueError(f"expected a permutation of 0..{algebra.r}")
    if algebra.cyclic:
        return relabeling(algebra, tau)(x)
    for i in reversed(reduced_word(tau)):
        x = generator_map(algebra, i)(x)
    return x


def cyclic_action(algebra: DKAlgebra, w: int) -> GroupAction:
    """S_(r+1) acting on the normal-form basis of U_w."""
    basis = algebra.normal_words(w)
    maps = {i: generator_map(algebra, i) for i in range(algebra.r)}

    def act(s: Perm, word: Word) -> Vec:
        i = next(k for k in range(len(s)) if s[k] != k)
        return maps[i]({word: Fraction(1)})

    return permutation_action(algebra.r + 1, basis, act, degree=w)


def lie_action(algebra: DKAlgebra, w: int, cyclic: bool = True) -> GroupAction:
    """
    The action on the weight-w Lie piece in Lyndon-bracket coordinates:
    S_(r+1) on all labels when cyclic, S_r on the labels 1..r otherwise.
    """
    basis = algebra.lie_basis(w)
    offset = 0 if cyclic else 1
    n = algebra.r + 1 - offset
    maps = {i: generator_map(algebra, i + offset) for i in range(n - 1)}
    labels = [word for word, _ in basis]
    images = {word: image for word, image in basis}

    def act(s: Perm, word: Word) -> Vec:
        i = next(k for k in range(len(s)) if s[k] != k)
        found = algebra.lie_coordinates(maps[i](images[word]), w)
        return {labels[k]: c for k, c in enumerate(found) if c}

    return permutation_action(n, labels, act, degree=w)


# ==================== The two presentations of ft ====================

def presentation_maps(framed: DKAlgebra, cyclic: DKAlgebra) -> Tuple[LetterMap, LetterMap]:
    """
    Mutually inverse maps between ft(r) (labels 1..r, central t_ii) and
    ft((r + 1)) (labels 0..r, t_ii eliminated).
    """
    if framed.r != cyclic.r or not framed.framed or framed.cyclic or not cyclic.cyclic:
        raise ValueError("need ft(r) and ft((r + 1)) with the same r")
    to_cyclic = LetterMap(framed, cyclic, [cyclic.symbol(i, j) for i, j in framed.letters])
    images = []
    for i, j in cyclic.letters:
        if i == 0:
            images.append(form_add(*[(framed.symbol(k, j), Fraction(-1)) for k in framed.labels]))
        else:
            images.append(framed.symbol(i, j))
    return to_cyclic, LetterMap(cyclic, framed, images)


def presentation_dims_agree(r: int, max_weight: int = 3) -> Dict[int, bool]:
    """Per weight: dim U ft(r)_w = dim U ft((r + 1))_w."""
    a = DKAlgebra(r, framed=True, max_weight=max_weight)
    b = DKAlgebra(r, framed=True, cyclic=True, max_weight=max_weight)
    da, db = a.u_dims(), b.u_dims()
    return {w: da[w] == db[w] for w in da}


def coxeter_residuals(algebra: DKAlgebra, w: int) -> Dict[str, bool]:
    """s_i² = 1, braid and commutation relations of the cyclic generators on U_w."""
    maps: Dict[int, Callable[[UElement], UElement]] = {i: generator_map(algebra, i) for i in range(algebra.r)}
    out: Dict[str, bool] = {}
    for word in algebra.normal_words(w):
        x = {word: Fraction(1)}
        for i in range(algebra.r):
            key = f"s{i}^2"
            out[key] = out.get(key, True) and maps[i](maps[i](x)) == x
            if i + 1 < algebra.r:
                a = maps[i](maps[i + 1](maps[i](x)))
                b = maps[i + 1](maps[i](maps[i + 1](x)))
                key = f"s{i}s{i + 1}s{i}"
                out[key] = out.get(key, True) and a == b
            for j in range(i + 2, algebra.r):
                key = f"s{i}s{j}"
                out[key] = out.get(key, True) and maps[i](maps[j](x)) == maps[j](maps[i](x))
    return out


def element_from_terms(algebra: DKAlgebra, terms: Dict[Hashable, Fraction]) -> UElement:
    """Sum of c * t_i1j1 * t_i2j2 ... for terms {((i1, j1), (i2, j2), ...): c}."""
    out: UElement = {}
    for pairs, c in terms.items():
        value: UElement = {(): Fraction(1)}
        for i, j in pairs:
            value = algebra.mul(value, algebra.t(i, j))
        vec_add(out, value, c)
    return algebra.reduce(out)
