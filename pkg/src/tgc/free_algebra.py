"""Graded free associative algebra over Q, truncated at total grade < r.

Every generator carries a grade (the power of epsilon it stands for), so
"mod epsilon^r" is just a filter on the grade of a word.  Polynomials are
sparse dicts from words (tuples of generator ids) to nonzero Fractions.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Iterable, Mapping, Sequence

__all__ = [
    "Generator",
    "FreeAlgebra",
    "NCPoly",
    "TruncationMismatch",
    "GradeError",
    "bracket",
    "dynkin_lie_test",
    "factored_log",
    "factored_exp",
]

Word = tuple[int, ...]


class TruncationMismatch(ValueError):
    pass


class GradeError(ValueError):
    pass


@dataclass(frozen=True)
class Generator:
    id: int
    label: str
    grade: int


class FreeAlgebra:
    """The ambient algebra: a list of generators plus the truncation order."""

    def __init__(self, generators: Iterable[tuple[str, int]], r: int):
        if r < 1:
            raise ValueError("truncation order must be positive")
        gens = []
        seen = set()
        for k, (label, grade) in enumerate(generators):
            if grade < 1:
                raise GradeError("generator %s must have grade >= 1" % label)
            if label in seen:
                raise ValueError("duplicate label %s" % label)
            seen.add(label)
            gens.append(Generator(k, label, grade))
        self.r = r
        self.generators = tuple(gens)
        self._by_label = {g.label: g for g in gens}
        self._grades = tuple(g.grade for g in gens)

    def __repr__(self):
        return "FreeAlgebra(r=%d, %s)" % (self.r, " ".join(g.label for g in self.generators))

    def __getitem__(self, label: str) -> Generator:
        return self._by_label[label]

    def __contains__(self, label: str) -> bool:
        return label in self._by_label

    def word_grade(self, word: Word) -> int:
        g = self._grades
        return sum(g[k] for k in word)

    def word_labels(self, word: Word) -> tuple[str, ...]:
        return tuple(self.generators[k].label for k in word)

    def word_key(self, word: Word):
        """Canonical monomial order: (grade, length, ids)."""
        return (self.word_grade(word), len(word), word)

    def zero(self) -> "NCPoly":
        return NCPoly(self, {})

    def one(self) -> "NCPoly":
        return NCPoly(self, {(): Fraction(1)})

    def scalar(self, c) -> "NCPoly":
        return NCPoly(self, {(): Fraction(c)})

    def gen(self, label: str) -> "NCPoly":
        g = self._by_label[label]
        if g.grade >= self.r:
            return self.zero()
        return NCPoly(self, {(g.id,): Fraction(1)})

    def from_labels(self, terms: Mapping[tuple[str, ...], object]) -> "NCPoly":
        out = defaultdict(Fraction)
        for labels, c in terms.items():
            out[tuple(self._by_label[s].id for s in labels)] += Fraction(c)
        return NCPoly(self, out)

    def parse(self, text: str) -> "NCPoly":
        """Inverse of :meth:`NCPoly.serialize`."""
        terms = defaultdict(Fraction)
        for line in text.splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            coeff, _, word = line.partition(":")
            word = word.split()
            if word == ["1"]:
                word = []
            terms[tuple(self._by_label[s].id for s in word)] += Fraction(coeff.strip())
        return NCPoly(self, terms)


class NCPoly:
    """Immutable truncated non-commutative polynomial."""

    __slots__ = ("algebra", "terms", "_hash")

    def __init__(self, algebra: FreeAlgebra, terms: Mapping[Word, Fraction]):
        r = algebra.r
        grade = algebra.word_grade
        self.algebra = algebra
        self.terms = {w: Fraction(c) for w, c in terms.items() if c and grade(w) < r}
        self._hash = None

    @classmethod
    def _trusted(cls, algebra, terms):
        obj = cls.__new__(cls)
        obj.algebra = algebra
        obj.terms = terms
        obj._hash = None
        return obj

    @property
    def r(self) -> int:
        return self.algebra.r

    def _same(self, other: "NCPoly"):
        if other.algebra is not self.algebra:
            if other.algebra.r != self.algebra.r:
                raise TruncationMismatch("truncation orders %d and %d" % (self.r, other.r))
            raise ValueError("polynomials live in different algebras")

    def _coerce(self, other):
        if isinstance(other, NCPoly):
            self._same(other)
            return other
        if isinstance(other, (int, Fraction)):
            return self.algebra.scalar(other)
        return NotImplemented

    # ring structure

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for w, c in other.terms.items():
            v = out.get(w, 0) + c
            if v:
                out[w] = v
            else:
                out.pop(w, None)
        return NCPoly._trusted(self.algebra, out)

    __radd__ = __add__

    def __neg__(self):
        return NCPoly._trusted(self.algebra, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "NCPoly":
        c = Fraction(c)
        if not c:
            return self.algebra.zero()
        return NCPoly._trusted(self.algebra, {w: c * v for w, v in self.terms.items()})

    def by_grade(self) -> dict[int, list[tuple[Word, Fraction]]]:
        groups = defaultdict(list)
        grade = self.algebra.word_grade
        for w, c in self.terms.items():
            groups[grade(w)].append((w, c))
        return groups

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        r = self.r
        out = defaultdict(Fraction)
        right = other.by_grade()
        for ga, left_terms in self.by_grade().items():
            for gb, right_terms in right.items():
                if ga + gb >= r:
                    continue
                for wa, ca in left_terms:
                    for wb, cb in right_terms:
                        out[wa + wb] += ca * cb
        return NCPoly._trusted(self.algebra, {w: c for w, c in out.items() if c})

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        out = self.algebra.one()
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.algebra.scalar(other)
        if not isinstance(other, NCPoly):
            return NotImplemented
        return self.r == other.r and self.label_terms() == other.label_terms()

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.label_terms().items()))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    # inspection

    def label_terms(self) -> dict[tuple[str, ...], Fraction]:
        """Terms keyed by label words; comparable across algebras."""
        lab = self.algebra.word_labels
        return {lab(w): c for w, c in self.terms.items()}

    def sorted_terms(self) -> list[tuple[Word, Fraction]]:
        key = self.algebra.word_key
        return sorted(self.terms.items(), key=lambda t: key(t[0]))

    def constant_term(self) -> Fraction:
        return self.terms.get((), Fraction(0))

    def min_grade(self) -> int | None:
        if not self.terms:
            return None
        return min(self.algebra.word_grade(w) for w in self.terms)

    def grades(self) -> set[int]:
        return {self.algebra.word_grade(w) for w in self.terms}

    def generators_used(self) -> set[str]:
        gens = self.algebra.generators
        return {gens[k].label for w in self.terms for k in w}

    def coefficient(self, labels: Sequence[str]) -> Fraction:
        alg = self.algebra
        return self.terms.get(tuple(alg[s].id for s in labels), Fraction(0))

    def slice(self, j: int) -> "NCPoly":
        """Grade-j homogeneous component."""
        grade = self.algebra.word_grade
        return NCPoly._trusted(self.algebra, {w: c for w, c in self.terms.items() if grade(w) == j})

    def length_component(self, n: int) -> "NCPoly":
        return NCPoly._trusted(self.algebra, {w: c for w, c in self.terms.items() if len(w) == n})

    def serialize(self) -> str:
        """One term per line, ``num/den : label label``; the empty word is ``1``."""
        lines = []
        lab = self.algebra.word_labels
        for w, c in self.sorted_terms():
            word = " ".join(lab(w)) if w else "1"
            lines.append("%d/%d : %s" % (c.numerator, c.denominator, word))
        return "\n".join(lines) + ("\n" if lines else "")

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        lab = self.algebra.word_labels
        for w, c in self.sorted_terms():
            parts.append("%s*%s" % (c, "".join("[%s]" % s for s in lab(w)) if w else "1"))
        return " + ".join(parts)

    # series operations

    def _nilpotent_part(self, what: str) -> "NCPoly":
        if self.constant_term() != 1:
            raise ValueError("%s needs constant term 1, got %s" % (what, self.constant_term()))
        return self - 1

    def exp(self) -> "NCPoly":
        if self.constant_term():
            raise GradeError("exp needs zero grade-0 component")
        out = self.algebra.one()
        power = self.algebra.one()
        k = 1
        while True:
            power = power * self
            if not power:
                return out
            out = out + power.scale(Fraction(1, factorial(k)))
            k += 1

    def log(self) -> "NCPoly":
        n = self._nilpotent_part("log")
        out = self.algebra.zero()
        power = self.algebra.one()
        k = 1
        while True:
            power = power * n
            if not power:
                return out
            out = out + power.scale(Fraction((-1) ** (k + 1), k))
            k += 1

    def group_inverse(self) -> "NCPoly":
        n = self._nilpotent_part("group_inverse")
        out = self.algebra.one()
        power = self.algebra.one()
        neg = -n
        while True:
            power = power * neg
            if not power:
                return out
            out = out + power

    def substitute(self, assignment: Mapping[str, "NCPoly"]) -> "NCPoly":
        """Homomorphic extension of ``label -> polynomial``; unlisted generators stay put."""
        alg = self.algebra
        images = {}
        for label, value in assignment.items():
            gen = alg[label]
            if isinstance(value, (int, Fraction)):
                value = alg.scalar(value)
            self._same(value)
            mg = value.min_grade()
            if mg is not None and mg < gen.grade:
                raise GradeError("image of %s has grade %d < %d" % (label, mg, gen.grade))
            images[gen.id] = value
        out = alg.zero()
        cache = {}
        for w, c in self.terms.items():
            term = alg.scalar(c)
            for k in w:
                img = images.get(k)
                if img is None:
                    img = cache.get(k)
                    if img is None:
                        img = cache[k] = NCPoly._trusted(alg, {(k,): Fraction(1)})
                term = term * img
                if not term:
                    break
            out = out + term
        return out


def bracket(a: NCPoly, b: NCPoly) -> NCPoly:
    return a * b - b * a


@lru_cache(maxsize=200_000)
def _left_nested(word: Word) -> tuple[tuple[Word, int], ...]:
    # [[...[a1, a2], ...], an] expanded into words with integer coefficients
    terms = {word[:1]: 1}
    for letter in word[1:]:
        nxt = defaultdict(int)
        for w, c in terms.items():
            nxt[w + (letter,)] += c
            nxt[(letter,) + w] -= c
        terms = {w: c for w, c in nxt.items() if c}
    return tuple(terms.items())


def dynkin_operator(p: NCPoly) -> NCPoly:
    """Linear map sending each word a1..an to its left-nested bracket."""
    out = defaultdict(Fraction)
    for w, c in p.terms.items():
        if not w:
            raise ValueError("Dynkin operator undefined on the empty word")
        for v, k in _left_nested(w):
            out[v] += c * k
    return NCPoly._trusted(p.algebra, {w: c for w, c in out.items() if c})


def dynkin_lie_test(p: NCPoly) -> bool:
    """Dynkin-Specht-Wever: P is Lie iff delta(P_n) = n P_n for each word length n."""
    if p.constant_term():
        raise ValueError("Lie test needs zero constant term")
    lengths = {len(w) for w in p.terms}
    for n in lengths:
        pn = p.length_component(n)
        if dynkin_operator(pn) != pn.scale(n):
            return False
    return True


def factored_log(g: NCPoly) -> list[NCPoly]:
    """The unique V_1..V_{r-1}, V_j of pure grade j, with g = e^{V_1} ... e^{V_{r-1}}."""
    if g.constant_term() != 1:
        raise ValueError("factored_log needs constant term 1")
    out = []
    rest = g
    for j in range(1, g.r):
        vj = rest.slice(j)
        out.append(vj)
        if vj:
            rest = (-vj).exp() * rest
    return out


def factored_exp(parts: Sequence[NCPoly]) -> NCPoly:
    """Ordered product e^{V_1} e^{V_2} ...; V_j must be homogeneous of grade j."""
    if not parts:
        raise ValueError("need at least one factor")
    alg = parts[0].algebra
    out = alg.one()
    for j, vj in enumerate(parts, start=1):
        if vj and vj.grades() != {j}:
            raise GradeError("factor %d is not homogeneous of grade %d" % (j, j))
        out = out * vj.exp()
    return out
