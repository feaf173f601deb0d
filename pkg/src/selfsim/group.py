"""Elements of the group of an invertible automaton, as words over signed states.

A word is stored as a tuple of signed codes: ``2*q`` for state ``q`` and
``2*q + 1`` for its inverse. Words act left to right (first letter first).
"""

from __future__ import annotations

import functools
import re
from collections import deque
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .automaton import IDENTITY_NAME, Automaton, AutomatonError, run
from .kernels import level_tables

EQUALS_CAP = 10**6


class GroupError(AutomatonError):
    code = "group"


@dataclass(frozen=True)
class GroupWord:
    automaton: Automaton
    codes: tuple = ()

    def __post_init__(self):
        n2 = 2 * self.automaton.num_states
        for c in self.codes:
            if not 0 <= c < n2:
                raise GroupError(f"signed state code {c} out of range")
        self.automaton.signed_tables  # raises for non-invertible automata

    @classmethod
    def of(cls, automaton: Automaton, letters: Sequence) -> "GroupWord":
        """From ``(state, sign)`` pairs or bare states (sign +1)."""
        codes = []
        for item in letters:
            if isinstance(item, tuple):
                state, sign = item
            else:
                state, sign = item, 1
            if sign not in (1, -1):
                raise GroupError(f"sign must be +1 or -1, got {sign!r}")
            codes.append(2 * automaton.index(state) + (sign < 0))
        return cls(automaton, tuple(codes))

    @classmethod
    def identity(cls, automaton: Automaton) -> "GroupWord":
        return cls(automaton, ())

    @classmethod
    def parse(cls, automaton: Automaton, text: str) -> "GroupWord":
        return cls(automaton, parse_word(automaton, text))

    @property
    def letters(self) -> tuple:
        return tuple((c >> 1, -1 if c & 1 else 1) for c in self.codes)

    def __len__(self):
        return len(self.codes)

    def __mul__(self, other: "GroupWord") -> "GroupWord":
        _same(self, other)
        return GroupWord(self.automaton, self.codes + other.codes)

    def __pow__(self, n: int) -> "GroupWord":
        base = self if n >= 0 else self.inverse()
        return GroupWord(self.automaton, base.codes * abs(n))

    def inverse(self) -> "GroupWord":
        return GroupWord(self.automaton, tuple(c ^ 1 for c in reversed(self.codes)))

    def reduced(self) -> "GroupWord":
        return GroupWord(self.automaton, reduce_codes(self.automaton, self.codes))

    def __call__(self, word: Sequence[int]) -> tuple:
        return self.apply(word)[0]

    def apply(self, word: Sequence[int]) -> tuple[tuple, "GroupWord"]:
        """Image of a letter word and the (unreduced) restriction there."""
        k = self.automaton.alphabet_size
        for a in word:
            if not isinstance(a, (int, np.integer)) or not 0 <= a < k:
                raise GroupError(f"letter {a!r} out of range")
        sig, tr = self.automaton.signed_tables
        out, rest = run(sig, tr, self.codes, list(word))
        return tuple(out), GroupWord(self.automaton, tuple(rest))

    def text(self) -> str:
        return format_word(self.automaton, self.codes)

    def __str__(self):
        return self.text()


def _same(g: GroupWord, h: GroupWord):
    if g.automaton is not h.automaton and g.automaton != h.automaton:
        raise GroupError("words over different automata")


def reduce_codes(automaton: Automaton, codes: Sequence[int]) -> tuple:
    """Free reduction, also dropping identity states."""
    trivial = automaton.trivial_states
    stack: list[int] = []
    for c in codes:
        if (c >> 1) in trivial:
            continue
        if stack and stack[-1] == c ^ 1:
            stack.pop()
        else:
            stack.append(c)
    return tuple(stack)


def restrict(g: GroupWord, word: Sequence[int]) -> GroupWord:
    """The restriction of ``g`` below ``word``; same length as ``g``."""
    return g.apply(word)[1]


def root_permutation(g: GroupWord) -> tuple:
    """The permutation ``a -> g(a)`` of single letters, as a tuple."""
    sig, _ = g.automaton.signed_tables
    k = g.automaton.alphabet_size
    perm = list(range(k))
    for c in g.codes:
        perm = [sig[x][c] for x in perm]
    return tuple(perm)


@dataclass(frozen=True)
class WreathDecomposition:
    restrictions: tuple  # one GroupWord per letter
    root_permutation: tuple

    def text(self) -> str:
        rest = ",".join(r.reduced().text() for r in self.restrictions)
        return f"({rest}){_cycle_text(self.root_permutation)}"


def wreath_decomposition(g: GroupWord) -> WreathDecomposition:
    k = g.automaton.alphabet_size
    return WreathDecomposition(tuple(restrict(g, [a]) for a in range(k)), root_permutation(g))


def _cycle_text(perm: tuple) -> str:
    seen, cycles = set(), []
    for start in range(len(perm)):
        if start in seen or perm[start] == start:
            continue
        cyc, x = [], start
        while x not in seen:
            seen.add(x)
            cyc.append(str(x))
            x = perm[x]
        cycles.append("(" + ",".join(cyc) + ")")
    return "".join(cycles)


def _step(sig, tr, trivial, codes: tuple, k: int):
    """Outputs and reduced restrictions of a reduced word at every letter."""
    outs, rests = [], []
    for a in range(k):
        x = a
        rest = []
        for c in codes:
            s = tr[x][c]
            x = sig[x][c]
            if (s >> 1) in trivial:
                continue
            if rest and rest[-1] == s ^ 1:
                rest.pop()
            else:
                rest.append(s)
        outs.append(x)
        rests.append(tuple(rest))
    return outs, rests


def equals(g: GroupWord, h: GroupWord, cap: int = EQUALS_CAP) -> bool:
    """Whether two words induce the same automorphism of the tree.

    Explores pairs of restrictions below common vertices; the set of pairs is
    finite because restrictions never get longer.
    """
    _same(g, h)
    return equal_codes(g.automaton, g.codes, h.codes, cap)


def equal_codes(automaton: Automaton, u: Sequence[int], v: Sequence[int], cap: int = EQUALS_CAP) -> bool:
    sig, tr = automaton.signed_tables
    trivial = automaton.trivial_states
    k = automaton.alphabet_size
    start = (reduce_codes(automaton, u), reduce_codes(automaton, v))
    seen = {start}
    queue = deque([start])
    while queue:
        x, y = queue.popleft()
        if x == y:
            continue
        ox, rx = _step(sig, tr, trivial, x, k)
        oy, ry = _step(sig, tr, trivial, y, k)
        if ox != oy:
            return False
        for a in range(k):
            pair = (rx[a], ry[a])
            if pair not in seen:
                seen.add(pair)
                if len(seen) > cap:
                    raise GroupError(f"equality check exceeded {cap} restriction pairs")
                queue.append(pair)
    return True


def is_trivial(g: GroupWord) -> bool:
    return equals(g, GroupWord.identity(g.automaton))


class Fingerprinter:
    """Hashes words by their action on one fixed level of the tree.

    Equal elements always share a fingerprint; the converse is confirmed
    with :func:`equals`.
    """

    def __init__(self, automaton: Automaton, max_points: int = 4096):
        k = automaton.alphabet_size
        depth = 0
        while k ** (depth + 1) <= max_points and depth < 24:
            depth += 1
            if k == 1:
                break
        self.depth = depth
        sig, tr = automaton.signed_tables
        perm, _ = level_tables(sig, tr, depth)
        self.perms = perm
        self.size = perm.shape[1]

    def perm(self, codes: Sequence[int]) -> np.ndarray:
        p = np.arange(self.size, dtype=np.int64)
        for c in codes:
            p = self.perms[c][p]
        return p

    def key(self, codes: Sequence[int]) -> bytes:
        return self.perm(codes).tobytes()


class ElementTable:
    """A list of distinct group elements with lookup up to equality."""

    def __init__(self, automaton: Automaton):
        self.automaton = automaton
        self.fingerprint = Fingerprinter(automaton)
        self.words: list[tuple] = []
        self._buckets: dict[bytes, list[int]] = {}

    def __len__(self):
        return len(self.words)

    def find(self, codes: Sequence[int]) -> int | None:
        codes = reduce_codes(self.automaton, codes)
        for i in self._buckets.get(self.fingerprint.key(codes), ()):
            if self.words[i] == codes or equal_codes(self.automaton, self.words[i], codes):
                return i
        return None

    def add(self, codes: Sequence[int]) -> tuple[int, bool]:
        """Index of the element and whether it was new; keeps the shortest word seen."""
        codes = reduce_codes(self.automaton, codes)
        key = self.fingerprint.key(codes)
        bucket = self._buckets.setdefault(key, [])
        for i in bucket:
            if self.words[i] == codes or equal_codes(self.automaton, self.words[i], codes):
                if _shorter(codes, self.words[i]):
                    self.words[i] = codes
                return i, False
        self.words.append(codes)
        bucket.append(len(self.words) - 1)
        return len(self.words) - 1, True


def _shorter(u: tuple, v: tuple) -> bool:
    # ties go to fewer inverted letters, then to the smaller code sequence
    return (len(u), sum(c & 1 for c in u), u) < (len(v), sum(c & 1 for c in v), v)


# text form ---------------------------------------------------------------

_POWER = re.compile(r"^(.*?)\^(-?\d+)$")
_SPECIAL = "·^()* "


def format_word(automaton: Automaton, codes: Sequence[int]) -> str:
    """``a·b^-1``; runs of one signed state collapse to ``a^3``; empty is ``ε``."""
    empty = IDENTITY_NAME if automaton.identity is None else automaton.states[automaton.identity]
    return format_codes(automaton.states, codes, empty)


def format_codes(names: Sequence[str], codes: Sequence[int], empty: str = IDENTITY_NAME) -> str:
    if not codes:
        return empty
    if len(codes) == 1 and not codes[0] & 1:
        return names[codes[0] >> 1]
    parts = []
    i = 0
    while i < len(codes):
        j = i
        while j < len(codes) and codes[j] == codes[i]:
            j += 1
        name, mult = _power_name(names[codes[i] >> 1])
        exp = (j - i) * mult * (-1 if codes[i] & 1 else 1)
        parts.append(name if exp == 1 else f"{name}^{exp}")
        i = j
    return "·".join(parts)


def _power_name(name: str) -> tuple[str, int]:
    """Split a state named like ``τ^2`` into its base and exponent."""
    m = _POWER.match(name)
    if m and m.group(1) and not any(ch in m.group(1) for ch in _SPECIAL):
        return m.group(1), int(m.group(2))
    if any(ch in name for ch in _SPECIAL):
        return f"({name})", 1
    return name, 1


def parse_word(automaton: Automaton, text: str) -> tuple:
    text = text.strip()
    if text in automaton.states:
        return (2 * automaton.index(text),)
    if text in ("", IDENTITY_NAME, "1"):
        return ()
    codes: list[int] = []
    for token in _split_top(text):
        token = token.strip()
        exp = 1
        if token in automaton.states:
            name = token
        else:
            m = _POWER.match(token)
            if m and m.group(1):
                name, exp = m.group(1), int(m.group(2))
            else:
                name = token
            if name.startswith("(") and name.endswith(")"):
                name = name[1:-1]
        if name not in automaton.states:
            if name == IDENTITY_NAME:
                continue
            raise GroupError(f"unknown state {name!r} in word {text!r}")
        q = automaton.index(name)
        codes.extend([2 * q + (exp < 0)] * abs(exp))
    return tuple(codes)


def _split_top(text: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if depth == 0 and ch in "·.":
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return [p for p in parts if p.strip()]


@functools.lru_cache(maxsize=64)
def _state_words(automaton: Automaton) -> tuple:
    return tuple(GroupWord(automaton, (2 * q,)) for q in range(automaton.num_states))


def state_word(automaton: Automaton, state) -> GroupWord:
    return _state_words(automaton)[automaton.index(state)]
