"""Exact clopen-set algebra on subshift transversals, and shift holonomy.

A transversal point is a bi-infinite legal sequence marked at a tile; a
cylinder pins a finite window around the mark.  Clopen sets are finite
unions of cylinders kept in canonical form at a common radius r: every
member cylinder is expanded to the full set of legal centered windows of
length 2r+1.  At a fixed radius distinct windows denote disjoint
cylinders, so set operations on the window sets are exact set semantics.
Holonomy at this symbolic level is generated by the one-tile shifts.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .subshift import LanguageOracle


@dataclass(frozen=True)
class Cylinder:
    """Window ``word`` with the origin tile at index ``mark``."""

    word: str
    mark: int

    def __post_init__(self):
        if not 0 <= self.mark < len(self.word):
            raise ValueError("mark must index a letter of the word")

    @property
    def radius(self) -> int:
        """Least centered-window radius containing this cylinder."""
        return max(self.mark, len(self.word) - 1 - self.mark)

    def __str__(self):
        return f"{self.word}@{self.mark}"

    @classmethod
    def parse(cls, text: str) -> "Cylinder":
        word, _, mark = text.rpartition("@")
        if not word:
            raise ValueError(f"cylinder literal must look like 'word@index': {text!r}")
        return cls(word, int(mark))


class ClopenSet:
    """Finite union of cylinders over one language oracle, canonicalized."""

    def __init__(self, oracle: LanguageOracle, radius: int, windows: Iterable[str]):
        self.oracle = oracle
        self.radius = radius
        width = 2 * radius + 1
        windows = frozenset(windows)
        for w in windows:
            if len(w) != width:
                raise ValueError(f"window {w!r} does not have radius {radius}")
        self.windows = frozenset(w for w in windows if oracle.is_legal(w))

    # -- constructors ---------------------------------------------------

    @classmethod
    def empty(cls, oracle: LanguageOracle) -> "ClopenSet":
        return cls(oracle, 0, ())

    @classmethod
    def whole(cls, oracle: LanguageOracle) -> "ClopenSet":
        return cls(oracle, 0, oracle.words(1))

    @classmethod
    def from_cylinder(cls, oracle: LanguageOracle, cylinder: Cylinder) -> "ClopenSet":
        if not oracle.is_legal(cylinder.word):
            raise ValueError(f"cylinder word {cylinder.word!r} is not legal")
        r = cylinder.radius
        width = 2 * r + 1
        left = r - cylinder.mark
        windows = {
            u
            for u in oracle.words(width)
            if u[left : left + len(cylinder.word)] == cylinder.word
        }
        return cls(oracle, r, windows)

    @classmethod
    def from_cylinders(cls, oracle: LanguageOracle, cylinders: Sequence[Cylinder]) -> "ClopenSet":
        out = cls.empty(oracle)
        for cyl in cylinders:
            out = union(out, cls.from_cylinder(oracle, cyl))
        return out

    # -- basic queries ----------------------------------------------------

    def is_empty(self) -> bool:
        return not self.windows

    def cylinders(self) -> list[Cylinder]:
        return [Cylinder(w, self.radius) for w in sorted(self.windows)]

    def __repr__(self):
        inside = ", ".join(str(c) for c in self.cylinders())
        return f"ClopenSet(r={self.radius}, {{{inside}}})"

    def __eq__(self, other):
        return isinstance(other, ClopenSet) and is_equal(self, other)

    __hash__ = None


def canonicalize(s: ClopenSet, radius: int) -> ClopenSet:
    """Re-express at a larger radius; set semantics are unchanged."""
    if radius < s.radius:
        raise ValueError("canonicalization radius may only grow")
    if radius == s.radius:
        return s
    pad = radius - s.radius
    inner = 2 * s.radius + 1
    windows = {
        u
        for u in s.oracle.words(2 * radius + 1)
        if u[pad : pad + inner] in s.windows
    }
    return ClopenSet(s.oracle, radius, windows)


def _common(a: ClopenSet, b: ClopenSet) -> tuple[ClopenSet, ClopenSet]:
    if a.oracle is not b.oracle:
        raise ValueError("clopen sets live over different language oracles")
    r = max(a.radius, b.radius)
    return canonicalize(a, r), canonicalize(b, r)


def union(a: ClopenSet, b: ClopenSet) -> ClopenSet:
    a, b = _common(a, b)
    return ClopenSet(a.oracle, a.radius, a.windows | b.windows)


def intersect(a: ClopenSet, b: ClopenSet) -> ClopenSet:
    a, b = _common(a, b)
    return ClopenSet(a.oracle, a.radius, a.windows & b.windows)


def subtract(a: ClopenSet, b: ClopenSet) -> ClopenSet:
    a, b = _common(a, b)
    return ClopenSet(a.oracle, a.radius, a.windows - b.windows)


def complement(a: ClopenSet) -> ClopenSet:
    return subtract(canonicalize(ClopenSet.whole(a.oracle), a.radius), a)


def is_subset(a: ClopenSet, b: ClopenSet) -> bool:
    a, b = _common(a, b)
    return a.windows <= b.windows


def is_equal(a: ClopenSet, b: ClopenSet) -> bool:
    a, b = _common(a, b)
    return a.windows == b.windows


def shift_set(s: ClopenSet, steps: int) -> ClopenSet:
    """Pointwise image under the ``steps``-fold shift; exact.

    Shifting by +n re-marks every point n tiles to the right, so the old
    radius-r window sits at offset -n in the image's radius-(r+n) windows.
    """
    if steps == 0:
        return s
    n = abs(steps)
    r = s.radius
    width = 2 * r + 1
    lo = 0 if steps > 0 else 2 * n
    windows = {
        u
        for u in s.oracle.words(2 * (r + n) + 1)
        if u[lo : lo + width] in s.windows
    }
    return ClopenSet(s.oracle, r + n, windows)


@dataclass(frozen=True)
class HolonomyWord:
    """A composite of one-tile shifts restricted to a clopen domain."""

    steps: tuple[int, ...]
    domain: ClopenSet

    def __post_init__(self):
        if any(s not in (1, -1) for s in self.steps):
            raise ValueError("holonomy steps are single tiles: +1 or -1")

    @property
    def displacement(self) -> int:
        return sum(self.steps)

    def image(self) -> ClopenSet:
        return shift_set(self.domain, self.displacement)

    def apply(self, s: ClopenSet) -> ClopenSet:
        """Image of the part of ``s`` where the word is defined."""
        return shift_set(intersect(s, self.domain), self.displacement)

    def inverse(self) -> "HolonomyWord":
        return HolonomyWord(tuple(-x for x in reversed(self.steps)), self.image())


def identity_holonomy(oracle: LanguageOracle) -> HolonomyWord:
    return HolonomyWord((), ClopenSet.whole(oracle))


def shift(s: ClopenSet, steps: int) -> tuple[ClopenSet, HolonomyWord]:
    """The shifted set together with the holonomy word that produced it."""
    sign = 1 if steps >= 0 else -1
    word = HolonomyWord((sign,) * abs(steps), s)
    return shift_set(s, steps), word


def compose_holonomy(words: Sequence[HolonomyWord]) -> HolonomyWord:
    """Apply left to right; the domain shrinks to where every prefix runs."""
    if not words:
        raise ValueError("nothing to compose")
    oracle = words[0].domain.oracle
    steps: tuple[int, ...] = ()
    domain = ClopenSet.whole(oracle)
    travelled = 0
    for w in words:
        domain = intersect(domain, shift_set(w.domain, -travelled))
        steps = steps + w.steps
        travelled += w.displacement
    return HolonomyWord(steps, domain)
