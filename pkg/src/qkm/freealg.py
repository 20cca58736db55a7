"""The graded free associative algebra on generators E_1..E_n.

Words are tuples of 0-based letter indices; a multidegree is the tuple of
letter counts.  Elements are homogeneous linear combinations of words of a
common multidegree with exact scalar coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import factorial


class ResourceLimitError(RuntimeError):
    """A request exceeded the configured degree or size cap."""


class TruncationError(RuntimeError):
    """A graded component beyond the computed truncation was requested."""


MAX_COMPONENT_DIM = 20000


def total_degree(m) -> int:
    return sum(m)


def multinomial(m) -> int:
    out = factorial(sum(m))
    for k in m:
        out //= factorial(k)
    return out


def unit_degree(n: int, i: int) -> tuple[int, ...]:
    return tuple(int(k == i) for k in range(n))


def add_degrees(a, b) -> tuple[int, ...]:
    return tuple(x + y for x, y in zip(a, b))


def word_degree(word, n: int) -> tuple[int, ...]:
    m = [0] * n
    for letter in word:
        m[letter] += 1
    return tuple(m)


def word_weight(word, cd):
    """The root-lattice weight of a monomial, as a multidegree offset."""
    return word_degree(word, cd.n)


def check_degree_budget(n: int, max_total: int) -> None:
    """Fail fast when a full sweep up to max_total would enumerate more
    words than the component cap allows."""
    total = sum(n ** k for k in range(1, max_total + 1))
    if total > MAX_COMPONENT_DIM:
        raise ResourceLimitError(
            f"sweep up to total degree {max_total} on {n} generators needs "
            f"{total} words (cap {MAX_COMPONENT_DIM})")


@lru_cache(maxsize=None)
def enumerate_words(m: tuple[int, ...]) -> tuple[tuple[int, ...], ...]:
    """All words with letter counts m, in lexicographic order."""
    if multinomial(m) > MAX_COMPONENT_DIM:
        raise ResourceLimitError(
            f"component of multidegree {m} has {multinomial(m)} words "
            f"(cap {MAX_COMPONENT_DIM})")
    n = len(m)
    if total_degree(m) == 0:
        return ((),)
    out = []
    for i in range(n):
        if m[i]:
            rest = list(m)
            rest[i] -= 1
            for w in enumerate_words(tuple(rest)):
                out.append((i,) + w)
    return tuple(out)


def word_string(word) -> str:
    """Serialized form: 1-based letter indices, e.g. '112' for E1 E1 E2."""
    return "".join(str(i + 1) for i in word)


@dataclass(frozen=True)
class FreeElement:
    """A combination of words; coefficients are exact scalars.

    Pairing and kernel machinery only ever sees homogeneous elements
    (degree is the common multidegree); sums across degrees carry None.
    """

    degree: tuple[int, ...] | None
    terms: tuple  # sorted tuple of (word, coeff) pairs, no zero coeffs

    @staticmethod
    def from_dict(degree, d) -> "FreeElement":
        items = tuple(sorted((w, c) for w, c in d.items() if not _is_zero(c)))
        return FreeElement(tuple(degree) if degree is not None else None, items)

    @staticmethod
    def from_word(word, n: int, coeff) -> "FreeElement":
        return FreeElement.from_dict(word_degree(word, n), {tuple(word): coeff})

    def as_dict(self) -> dict:
        return dict(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, word):
        for w, c in self.terms:
            if w == tuple(word):
                return c
        return None

    def scaled(self, s) -> "FreeElement":
        return FreeElement.from_dict(self.degree,
                                     {w: c * s for w, c in self.terms})

    def __add__(self, other: "FreeElement") -> "FreeElement":
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        degree = self.degree if self.degree == other.degree else None
        d = self.as_dict()
        for w, c in other.terms:
            d[w] = d.get(w, 0) + c
        return FreeElement.from_dict(degree, d)

    def __sub__(self, other: "FreeElement") -> "FreeElement":
        return self + other.scaled(-1)

    def __str__(self):
        if not self.terms:
            return "0"
        return "; ".join(f"{word_string(w)}:{c}" for w, c in self.terms)


def _is_zero(c) -> bool:
    if hasattr(c, "is_zero"):
        return c.is_zero()
    return c == 0


def free_mul(x: FreeElement, y: FreeElement) -> FreeElement:
    """Concatenation product; degrees add, coefficients multiply."""
    if x.degree is not None and y.degree is not None:
        degree = add_degrees(x.degree, y.degree)
    else:
        degree = None
    d = {}
    for wx, cx in x.terms:
        for wy, cy in y.terms:
            w = wx + wy
            c = cx * cy
            d[w] = d.get(w, 0) + c
    return FreeElement.from_dict(degree, d)
