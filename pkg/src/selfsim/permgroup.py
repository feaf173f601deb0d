"""Finite level actions and their permutation groups.

Permutations are int arrays ``p`` with ``p[x]`` the image of ``x``; products
are left to right, so ``g*h`` is ``h[g]``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .automaton import Automaton, AutomatonError, is_invertible
from .kernels import level_tables

LEVEL_CAP = 100_000


class LevelTooLarge(AutomatonError):
    code = "level-too-large"


def check_level(automaton: Automaton, n: int, cap: int = LEVEL_CAP) -> int:
    if n < 0:
        raise AutomatonError("level must be non-negative")
    size = automaton.alphabet_size ** n
    if size > cap:
        raise LevelTooLarge(f"level {n} has {size} vertices, above the cap of {cap}")
    return size


def level_action(automaton: Automaton, n: int, cap: int = LEVEL_CAP):
    """``(perm, restr)`` arrays of shape ``(states, k**n)``; words indexed lexicographically."""
    check_level(automaton, n, cap)
    return level_tables(automaton.sigma, automaton.tau, n)


def word_index(word, k: int) -> int:
    x = 0
    for a in word:
        x = x * k + a
    return x


def index_word(x: int, k: int, n: int) -> tuple:
    out = [0] * n
    for i in range(n - 1, -1, -1):
        x, out[i] = divmod(x, k)
    return tuple(out)


def inverse_perm(p: np.ndarray) -> np.ndarray:
    inv = np.empty_like(p)
    inv[p] = np.arange(len(p), dtype=p.dtype)
    return inv


@dataclass
class _Level:
    base: int
    gens: list = field(default_factory=list)
    transversal: dict = field(default_factory=dict)  # point -> perm taking base there
    checked: set = field(default_factory=set)


class StabilizerChain:
    """Deterministic Schreier-Sims; base points are chosen smallest-moved-first."""

    def __init__(self, degree: int):
        self.degree = degree
        self.identity = np.arange(degree, dtype=np.int64)
        self.levels: list[_Level] = []

    def order(self) -> int:
        result = 1
        for lvl in self.levels:
            result *= len(lvl.transversal)
        return result

    @property
    def base(self) -> list[int]:
        return [lvl.base for lvl in self.levels]

    def sift(self, g: np.ndarray, start: int = 0):
        for i in range(start, len(self.levels)):
            lvl = self.levels[i]
            x = int(g[lvl.base])
            u = lvl.transversal.get(x)
            if u is None:
                return g, i
            g = inverse_perm(u)[g]
        return g, len(self.levels)

    def insert(self, g: np.ndarray, start: int = 0):
        residue, _ = self.sift(g, start)
        if not np.array_equal(residue, self.identity):
            self._add(start, residue)

    def _add(self, i: int, g: np.ndarray):
        if i == len(self.levels):
            moved = np.nonzero(g != self.identity)[0]
            base = int(moved[0])
            self.levels.append(_Level(base, [], {base: self.identity}))
        lvl = self.levels[i]
        lvl.gens.append(g)
        while True:
            pending = [
                (x, s) for x in list(lvl.transversal) for s in range(len(lvl.gens))
                if (x, s) not in lvl.checked
            ]
            if not pending:
                break
            for x, s in pending:
                lvl.checked.add((x, s))
                gen = lvl.gens[s]
                y = int(gen[x])
                ux = lvl.transversal[x]
                if y not in lvl.transversal:
                    lvl.transversal[y] = gen[ux]
                    continue
                # schreier generator u_x * s * u_y^-1 fixes the base point
                h = inverse_perm(lvl.transversal[y])[gen[ux]]
                residue, _ = self.sift(h, i + 1)
                if not np.array_equal(residue, self.identity):
                    self._add(i + 1, residue)


def group_order(generators, degree: int) -> int:
    chain = StabilizerChain(degree)
    for g in generators:
        chain.insert(np.asarray(g, dtype=np.int64))
    return chain.order()


def level_quotient_order(automaton: Automaton, n: int, cap: int = LEVEL_CAP) -> int:
    """Order of the group induced on the level-``n`` words."""
    if not is_invertible(automaton):
        raise AutomatonError("level quotients need an invertible automaton")
    perm, _ = level_action(automaton, n, cap)
    return group_order(list(perm), perm.shape[1])
