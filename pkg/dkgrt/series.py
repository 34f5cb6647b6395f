"""
Weight-truncated series in free associative algebras, and Lie polynomials on
the Lyndon bracket basis.

Words are tuples of letter indices; the weight of a word is its length.
Every product drops the terms above the truncation weight.
"""

from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterator, List, Optional, Sequence, Tuple, Union

from core.base import NotGroupLike, Vec, vec_add
from core.ratlin import coordinates

Word = Tuple[int, ...]
Scalar = Union[int, Fraction]


# ==================== Words and brackets ====================

def words(n_letters: int, length: int) -> Iterator[Word]:
    """All words of a given length, in lexicographic order."""
    if length == 0:
        yield ()
        return
    for head in words(n_letters, length - 1):
        for letter in range(n_letters):
            yield head + (letter,)


def lyndon_words(n_letters: int, length: int) -> List[Word]:
    """Lyndon words of exactly the given length (Duval's generation order)."""
    out: List[Word] = []
    if length < 1 or n_letters < 1:
        return out
    w = [-1]
    while w:
        w[-1] += 1
        if len(w) == length:
            out.append(tuple(w))
        m = len(w)
        while len(w) < length:
            w.append(w[len(w) - m])
        while w and w[-1] == n_letters - 1:
            w.pop()
    return out


def standard_factorization(word: Word) -> Tuple[Word, Word]:
    """w = uv with v the longest proper Lyndon suffix."""
    for start in range(1, len(word)):
        suffix = word[start:]
        if is_lyndon(suffix):
            return word[:start], suffix
    raise ValueError(f"{word} has no proper Lyndon suffix")


def is_lyndon(word: Word) -> bool:
    return bool(word) and all(word < word[k:] + word[:k] for k in range(1, len(word)))


def commutator(a: Dict[Word, Fraction], b: Dict[Word, Fraction]) -> Dict[Word, Fraction]:
    out: Dict[Word, Fraction] = {}
    for u, cu in a.items():
        for v, cv in b.items():
            vec_add(out, {u + v: cu * cv})
            vec_add(out, {v + u: -cu * cv})
    return out


@lru_cache(maxsize=None)
def _lyndon_expansion(word: Word) -> Tuple[Tuple[Word, Fraction], ...]:
    if len(word) == 1:
        return ((word, Fraction(1)),)
    u, v = standard_factorization(word)
    return tuple(sorted(commutator(lyndon_expansion(u), lyndon_expansion(v)).items()))


def lyndon_expansion(word: Word) -> Dict[Word, Fraction]:
    """The standard bracketing of a Lyndon word, expanded into words."""
    return dict(_lyndon_expansion(word))


def left_normed(word: Word) -> Dict[Word, Fraction]:
    """Expansion of [..[[w1, w2], w3].., wn]."""
    current: Dict[Word, Fraction] = {word[:1]: Fraction(1)}
    for letter in word[1:]:
        nxt: Dict[Word, Fraction] = {}
        for w, c in current.items():
            vec_add(nxt, {w + (letter,): c})
            vec_add(nxt, {(letter,) + w: -c})
        current = nxt
    return current


def dynkin(poly: Dict[Word, Fraction]) -> Dict[Word, Fraction]:
    """The Dynkin map: linear extension of the left-normed bracketing."""
    out: Dict[Word, Fraction] = {}
    for w, c in poly.items():
        if w:
            vec_add(out, left_normed(w), c)
    return out


def is_lie(poly: Dict[Word, Fraction]) -> bool:
    """Dynkin-Specht-Wever: a homogeneous part P_n is Lie iff D(P_n) = n P_n."""
    by_weight: Dict[int, Dict[Word, Fraction]] = {}
    for w, c in poly.items():
        by_weight.setdefault(len(w), {})[w] = c
    if by_weight.get(0):
        return False
    for n, part in by_weight.items():
        image = dynkin(part)
        vec_add(image, part, -n)
        if image:
            return False
    return True


# ==================== Associative series ====================

class AssocSeries:
    """
    An element of the free associative algebra truncated above max_weight.

    Attributes:
        coeffs: word -> nonzero coefficient
        max_weight: truncation weight
        alphabet: letter names, used for parsing and printing
    """

    def __init__(self, coeffs: Optional[Dict[Word, Scalar]] = None, max_weight: int = 3,
                 alphabet: Sequence[str] = ('x', 'y')):
        self.max_weight = max_weight
        self.alphabet = tuple(alphabet)
        self.coeffs: Dict[Word, Fraction] = {}
        for w, c in (coeffs or {}).items():
            if len(w) <= max_weight and c:
                self.coeffs[tuple(w)] = Fraction(c)

    # ==================== Construction ====================

    @classmethod
    def one(cls, max_weight: int = 3, alphabet: Sequence[str] = ('x', 'y')) -> "AssocSeries":
        return cls({(): 1}, max_weight, alphabet)

    @classmethod
    def letter(cls, i: int, max_weight: int = 3, alphabet: Sequence[str] = ('x', 'y')) -> "AssocSeries":
        return cls({(i,): 1}, max_weight, alphabet)

    def like(self, coeffs: Dict[Word, Scalar]) -> "AssocSeries":
        return AssocSeries(coeffs, self.max_weight, self.alphabet)

    # ==================== Arithmetic ====================

    def __add__(self, other: "AssocSeries") -> "AssocSeries":
        self._require_compatible(other)
        out = dict(self.coeffs)
        vec_add(out, other.coeffs)
        return self.like(out)

    def __sub__(self, other: "AssocSeries") -> "AssocSeries":
        return self + other.scaled(-1)

    def __neg__(self) -> "AssocSeries":
        return self.scaled(-1)

    def scaled(self, factor: Scalar) -> "AssocSeries":
        return self.like({w: c * factor for w, c in self.coeffs.items()})

    def __mul__(self, other: "AssocSeries") -> "AssocSeries":
        self._require_compatible(other)
        out: Dict[Word, Fraction] = {}
        for u, cu in self.coeffs.items():
            room = self.max_weight - len(u)
            for v, cv in other.coeffs.items():
                if len(v) <= room:
                    vec_add(out, {u + v: cu * cv})
        return self.like(out)

    def __eq__(self, other) -> bool:
        if not isinstance(other, AssocSeries):
            return NotImplemented
        return self.max_weight == other.max_weight and self.coeffs == other.coeffs

    def _require_compatible(self, other: "AssocSeries"):
        if self.max_weight != other.max_weight:
            raise ValueError(f"truncation weights differ: {self.max_weight} vs {other.max_weight}")

    # ==================== Pieces ====================

    @property
    def constant(self) -> Fraction:
        return self.coeffs.get((), Fraction(0))

    def weight_part(self, n: int) -> Dict[Word, Fraction]:
        return {w: c for w, c in self.coeffs.items() if len(w) == n}

    def without_constant(self) -> "AssocSeries":
        return self.like({w: c for w, c in self.coeffs.items() if w})

    def is_zero(self) -> bool:
        return not self.coeffs

    def lowest_weight(self) -> Optional[int]:
        return min((len(w) for w in self.coeffs), default=None)

    # ==================== exp / log / inverse ====================

    def exp(self) -> "AssocSeries":
        """exp(a) = 1 + a(1 + a/2(1 + a/3(...))) for a without constant term."""
        if self.constant:
            raise ValueError("exp needs a series without constant term")
        one = AssocSeries.one(self.max_weight, self.alphabet)
        s = one
        for depth in range(self.max_weight, 0, -1):
            s = one + (self * s).scaled(Fraction(1, depth))
        return s

    def log(self) -> "AssocSeries":
        """log(1 + a) = a(1 - a(1/2 - a(1/3 - ...)))."""
        if self.constant != 1:
            raise NotGroupLike(f"log needs constant term 1, got {self.constant}")
        a = self.without_constant()
        one = AssocSeries.one(self.max_weight, self.alphabet)
        if self.max_weight == 0:
            return self.like({})
        t = one.scaled(Fraction(1, self.max_weight))
        for k in range(self.max_weight - 1, 0, -1):
            t = one.scaled(Fraction(1, k)) - a * t
        return a * t

    def inverse(self) -> "AssocSeries":
        if self.constant != 1:
            raise ValueError(f"inverse needs constant term 1, got {self.constant}")
        a = self.without_constant()
        one = AssocSeries.one(self.max_weight, self.alphabet)
        s = one
        for _ in range(self.max_weight):
            s = one - a * s
        return s

    # ==================== Substitution ====================

    def substitute(self, images: Sequence["AssocSeries"]) -> "AssocSeries":
        """Replace letter i by images[i] (series without constant term)."""
        target = images[0]
        powers: Dict[Word, AssocSeries] = {(): AssocSeries.one(target.max_weight, target.alphabet)}
        out = target.like({})
        for w in sorted(self.coeffs, key=len):
            product = self._prefix_product(w, images, powers)
            out = out + product.scaled(self.coeffs[w])
        return out

    @staticmethod
    def _prefix_product(w: Word, images: Sequence["AssocSeries"], cache: Dict[Word, "AssocSeries"]) -> "AssocSeries":
        if w in cache:
            return cache[w]
        value = AssocSeries._prefix_product(w[:-1], images, cache) * images[w[-1]]
        cache[w] = value
        return value

    def dilate(self, factor: Scalar) -> "AssocSeries":
        """Multiply the weight-n part by factor^n."""
        return self.like({w: c * Fraction(factor) ** len(w) for w, c in self.coeffs.items()})

    def truncate(self, max_weight: int) -> "AssocSeries":
        return AssocSeries({w: c for w, c in self.coeffs.items() if len(w) <= max_weight}, max_weight, self.alphabet)

    # ==================== Group-likeness ====================

    def is_group_like(self) -> bool:
        """Constant term 1 and a Lie logarithm."""
        return self.constant == 1 and is_lie(self.log().coeffs)

    def require_group_like(self):
        if self.constant != 1:
            raise NotGroupLike(f"constant term is {self.constant}, expected 1")
        if not is_lie(self.log().coeffs):
            raise NotGroupLike("logarithm is not a Lie series")

    # ==================== Text ====================

    def word_text(self, w: Word) -> str:
        return "".join(self.alphabet[i] for i in w)

    def parse_word(self, text: str) -> Word:
        index = {name: i for i, name in enumerate(self.alphabet)}
        try:
            return tuple(index[ch] for ch in text)
        except KeyError as e:
            raise ValueError(f"letter {e.args[0]!r} is not in the alphabet {self.alphabet}") from None

    def terms(self) -> List[Dict[str, str]]:
        """Terms in (weight, word) order, as {word, coeff} records."""
        return [{'word': self.word_text(w), 'coeff': str(c)}
                for w, c in sorted(self.coeffs.items(), key=lambda t: (len(t[0]), t[0]))]

    @classmethod
    def from_terms(cls, terms: Sequence[Dict[str, str]], max_weight: int,
                   alphabet: Sequence[str] = ('x', 'y')) -> "AssocSeries":
        s = cls({}, max_weight, alphabet)
        coeffs: Vec = {}
        for term in terms:
            vec_add(coeffs, {s.parse_word(term['word']): Fraction(term['coeff'])})
        return cls(coeffs, max_weight, alphabet)

    def __repr__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for t in self.terms():
            parts.append(f"{t['coeff']}*{t['word']}" if t['word'] else t['coeff'])
        return " + ".join(parts)


# ==================== Lie polynomials ====================

class LiePoly:
    """
    A Lie polynomial in coordinates on the Lyndon bracket basis.

    Attributes:
        coeffs: Lyndon word -> coefficient
        n_letters: size of the alphabet
    """

    def __init__(self, coeffs: Optional[Dict[Word, Scalar]] = None, n_letters: int = 2):
        self.n_letters = n_letters
        self.coeffs = {tuple(w): Fraction(c) for w, c in (coeffs or {}).items() if c}
        for w in self.coeffs:
            if not is_lyndon(w):
                raise ValueError(f"{w} is not a Lyndon word")

    def expand(self) -> Dict[Word, Fraction]:
        out: Dict[Word, Fraction] = {}
        for w, c in self.coeffs.items():
            vec_add(out, lyndon_expansion(w), c)
        return out

    def to_series(self, max_weight: int, alphabet: Sequence[str] = ('x', 'y')) -> AssocSeries:
        return AssocSeries(self.expand(), max_weight, alphabet)

    @classmethod
    def from_words(cls, poly: Dict[Word, Fraction], n_letters: int = 2) -> "LiePoly":
        """
        Coordinates of a Lie polynomial given on words.

        Raises:
            ValueError: the polynomial is not Lie
        """
        by_weight: Dict[int, Dict[Word, Fraction]] = {}
        for w, c in poly.items():
            by_weight.setdefault(len(w), {})[w] = c
        coeffs: Dict[Word, Fraction] = {}
        for n, part in sorted(by_weight.items()):
            basis = lyndon_words(n_letters, n)
            found = coordinates([lyndon_expansion(w) for w in basis], part) if basis else None
            if found is None:
                raise ValueError(f"weight {n} part is not a Lie polynomial")
            coeffs.update({w: c for w, c in zip(basis, found) if c})
        return cls(coeffs, n_letters)

    def weight_part(self, n: int) -> "LiePoly":
        return LiePoly({w: c for w, c in self.coeffs.items() if len(w) == n}, self.n_letters)
