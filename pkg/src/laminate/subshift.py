"""Factor languages of subshifts: substitutions, SFTs, full shifts.

A :class:`LanguageOracle` answers "what are the legal words of length L".
Words are plain strings over single-character symbols.  The oracle caches
by length, can persist its cache to ``LAMINATE_CACHE_DIR``, and guarantees
the two structural facts the rest of the package leans on: factor
closedness and two-sided extendability of every legal word.
"""

from __future__ import annotations

import hashlib
import itertools
import json
import os
import threading
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Optional, Sequence

import numpy as np


@dataclass(frozen=True)
class Substitution:
    """Symbol rewriting rules; primitivity is computed, not assumed."""

    alphabet: tuple[str, ...]
    rules: Mapping[str, str]

    def __post_init__(self):
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        object.__setattr__(self, "rules", dict(self.rules))
        letters = set(self.alphabet)
        if any(len(a) != 1 for a in letters):
            raise ValueError("symbols must be single characters")
        if set(self.rules) != letters:
            raise ValueError("rules must cover exactly the alphabet")
        for a, w in self.rules.items():
            if not w or not set(w) <= letters:
                raise ValueError(f"rule for {a!r} must be a nonempty word over the alphabet")

    def apply(self, word: str) -> str:
        return "".join(self.rules[a] for a in word)

    def incidence_matrix(self) -> np.ndarray:
        """M[i, j] = how often alphabet[i] occurs in the rule for alphabet[j]."""
        n = len(self.alphabet)
        pos = {a: i for i, a in enumerate(self.alphabet)}
        m = np.zeros((n, n), dtype=np.int64)
        for j, a in enumerate(self.alphabet):
            for c in self.rules[a]:
                m[pos[c], j] += 1
        return m

    def primitivity(self) -> tuple[bool, Optional[int]]:
        """(is primitive, least power with strictly positive incidence)."""
        n = len(self.alphabet)
        m = self.incidence_matrix() > 0
        power = m.copy()
        bound = (n - 1) ** 2 + 1 if n > 1 else 1
        for p in range(1, bound + 1):
            if power.all():
                return True, p
            power = (power @ m) > 0
        return False, None

    @property
    def is_primitive(self) -> bool:
        return self.primitivity()[0]


def _fingerprint(payload) -> str:
    blob = json.dumps(payload, sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


class LanguageOracle:
    """Legal-word supplier for a subshift, cached by word length."""

    def __init__(self, alphabet: Sequence[str], *, cache_dir: Optional[str] = None):
        self.alphabet = tuple(alphabet)
        if any(len(a) != 1 for a in self.alphabet):
            raise ValueError("symbols must be single characters")
        if len(set(self.alphabet)) != len(self.alphabet):
            raise ValueError("duplicate symbols in the alphabet")
        self._cache: dict[int, frozenset[str]] = {0: frozenset({""})}
        self._lock = threading.Lock()
        self._cache_dir = cache_dir if cache_dir is not None else os.environ.get(
            "LAMINATE_CACHE_DIR"
        )
        self._loaded_disk = False

    # -- constructors ---------------------------------------------------

    @classmethod
    def full_shift(cls, alphabet: Sequence[str], **kw) -> "LanguageOracle":
        oracle = cls(alphabet, **kw)
        oracle.source = ("full", tuple(oracle.alphabet))
        return oracle

    @classmethod
    def from_substitution(cls, subst: Substitution, **kw) -> "LanguageOracle":
        oracle = cls(subst.alphabet, **kw)
        oracle.substitution = subst
        primitive, power = subst.primitivity()
        if not primitive:
            warnings.warn(
                "substitution is not primitive; the factor language is taken "
                "as the stabilized union over all letters",
                stacklevel=2,
            )
        oracle._stable_rounds = power if primitive else len(subst.alphabet) + 2
        oracle.source = ("substitution", tuple(sorted(subst.rules.items())))
        return oracle

    @classmethod
    def from_forbidden(
        cls, alphabet: Sequence[str], forbidden: Sequence[str], **kw
    ) -> "LanguageOracle":
        oracle = cls(alphabet, **kw)
        forbidden = tuple(sorted(set(forbidden)))
        letters = set(oracle.alphabet)
        for w in forbidden:
            if not w or not set(w) <= letters:
                raise ValueError(f"forbidden word {w!r} is not over the alphabet")
        oracle.forbidden = forbidden
        oracle.source = ("sft", tuple(oracle.alphabet), forbidden)
        return oracle

    # -- public API -----------------------------------------------------

    def words(self, length: int) -> frozenset[str]:
        if length < 0:
            raise ValueError("length must be nonnegative")
        with self._lock:
            self._load_disk_cache()
            if length not in self._cache:
                self._cache[length] = frozenset(self._compute(length))
                if not self._cache[length]:
                    raise ValueError(
                        f"the language has no words of length {length}; "
                        "the subshift is empty"
                    )
                self._save_disk_cache()
            return self._cache[length]

    def is_legal(self, word: str) -> bool:
        return word in self.words(len(word))

    def extensions(self, word: str, radius: int) -> frozenset[str]:
        """Legal words of length len(word) + 2*radius with ``word`` centered."""
        target = len(word) + 2 * radius
        return frozenset(
            u for u in self.words(target) if u[radius : radius + len(word)] == word
        )

    # -- computation ----------------------------------------------------

    def _compute(self, length: int):
        kind = self.source[0]
        if kind == "full":
            return {"".join(t) for t in itertools.product(self.alphabet, repeat=length)}
        if kind == "substitution":
            return self._substitution_words(length)
        return self._sft_words(length)

    def _substitution_words(self, length: int) -> set[str]:
        subst = self.substitution
        words = {a: a for a in self.alphabet}
        factors: set[str] = set()
        stable = 0
        for _ in range(400):
            words = {a: subst.apply(w) for a, w in words.items()}
            new = set()
            for w in words.values():
                new.update(w[i : i + length] for i in range(len(w) - length + 1))
            if new == factors and new:
                stable += 1
                if stable >= self._stable_rounds:
                    return factors
            else:
                stable = 0
            factors = new
            if max(len(w) for w in words.values()) > 2_000_000:
                break
        if not factors:
            raise ValueError(
                f"substitution generates no words of length {length}; "
                "its eventual language is empty"
            )
        return factors

    def _sft_words(self, length: int) -> set[str]:
        forbidden = self.forbidden
        if not forbidden:
            return {"".join(t) for t in itertools.product(self.alphabet, repeat=length)}
        bad = set(forbidden)
        m = max(len(w) for w in bad)

        def clean(w: str) -> bool:
            return not any(f in w for f in bad)

        block = m - 1
        if block == 0:
            good = [a for a in self.alphabet if a not in bad]
            if not good:
                raise ValueError("every letter is forbidden; the subshift is empty")
            return {"".join(t) for t in itertools.product(good, repeat=length)}
        blocks = {
            "".join(t)
            for t in itertools.product(self.alphabet, repeat=block)
            if clean("".join(t))
        }

        def successors(b, universe):
            return {
                c
                for c in self.alphabet
                if clean(b + c) and (b + c)[1:] in universe
            }

        # keep only blocks on bi-infinite forbidden-free paths: repeatedly
        # drop blocks with no successor or no predecessor
        while True:
            succ = {b: successors(b, blocks) for b in blocks}
            reachable = {b[1:] + c for b in blocks for c in succ[b]}
            dead = {b for b in blocks if not succ[b]} | (blocks - reachable)
            if not dead:
                break
            blocks -= dead
        if not blocks:
            raise ValueError("the forbidden list kills every orbit; the subshift is empty")
        if length <= block:
            return {b[:length] for b in blocks}
        succ = {b: successors(b, blocks) for b in blocks}
        words = set(blocks)
        for _ in range(length - block):
            words = {w + c for w in words for c in succ[w[-block:]]}
        return words

    # -- disk cache -----------------------------------------------------

    def _cache_path(self) -> Optional[Path]:
        if not self._cache_dir:
            return None
        return Path(self._cache_dir) / f"lang-{_fingerprint(self.source)}.json"

    def _load_disk_cache(self):
        path = self._cache_path()
        if path is None or self._loaded_disk:
            return
        self._loaded_disk = True
        try:
            stored = json.loads(path.read_text())
        except (OSError, ValueError):
            return
        for key, words in stored.items():
            self._cache.setdefault(int(key), frozenset(words))

    def _save_disk_cache(self):
        path = self._cache_path()
        if path is None:
            return
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(
                json.dumps({str(k): sorted(v) for k, v in self._cache.items()})
            )
        except OSError:
            pass


def fibonacci() -> Substitution:
    return Substitution(("a", "b"), {"a": "ab", "b": "a"})


def thue_morse() -> Substitution:
    return Substitution(("0", "1"), {"0": "01", "1": "10"})
