"""Mealy automata over a finite alphabet and their tree action.

An automaton has letters ``0..k-1`` and named states. Tables are indexed
``[letter][state]``: ``sigma[a][q]`` is the output letter and ``tau[a][q]``
the index of the next state. A state word ``q1 q2 ... qm`` acts with ``q1``
applied first.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Iterable, Sequence

from .graph import LabeledGraph

IDENTITY_NAME = "ε"


class AutomatonError(ValueError):
    """Raised for malformed automata or invalid arguments to an operation."""

    code = "automaton"


@dataclass(frozen=True)
class Automaton:
    alphabet_size: int
    states: tuple
    sigma: tuple
    tau: tuple
    identity: int | None = None

    def __post_init__(self):
        k, n = self.alphabet_size, len(self.states)
        if k < 1:
            raise AutomatonError("alphabet size must be positive")
        if n < 1:
            raise AutomatonError("an automaton needs at least one state")
        if len(set(self.states)) != n:
            raise AutomatonError("state names must be unique")
        if len(self.sigma) != k or len(self.tau) != k:
            raise AutomatonError("tables need one row per letter")
        for a in range(k):
            if len(self.sigma[a]) != n or len(self.tau[a]) != n:
                raise AutomatonError("tables need one column per state")
            for q in range(n):
                if not 0 <= self.sigma[a][q] < k:
                    raise AutomatonError(f"output {self.sigma[a][q]} out of range at ({a}, {q})")
                if not 0 <= self.tau[a][q] < n:
                    raise AutomatonError(f"transition {self.tau[a][q]} out of range at ({a}, {q})")
        if self.identity is not None:
            e = self.identity
            if not 0 <= e < n:
                raise AutomatonError("identity index out of range")
            if any(self.sigma[a][e] != a or self.tau[a][e] != e for a in range(k)):
                raise AutomatonError(f"state {self.states[e]!r} is not an identity state")

    @classmethod
    def from_tables(cls, alphabet_size, states, sigma, tau, identity=None) -> "Automaton":
        """Build from nested sequences; ``tau`` may hold state names or indices."""
        states = tuple(str(s) for s in states)
        index = {s: i for i, s in enumerate(states)}

        def _ix(x):
            if isinstance(x, str):
                if x not in index:
                    raise AutomatonError(f"unknown state {x!r}")
                return index[x]
            return int(x)

        if isinstance(identity, str):
            identity = _ix(identity)
        return cls(
            int(alphabet_size),
            states,
            tuple(tuple(int(b) for b in row) for row in sigma),
            tuple(tuple(_ix(x) for x in row) for row in tau),
            identity,
        )

    @property
    def num_states(self) -> int:
        return len(self.states)

    def index(self, state) -> int:
        if isinstance(state, int):
            if not 0 <= state < len(self.states):
                raise AutomatonError(f"state index {state} out of range")
            return state
        try:
            return self.states.index(state)
        except ValueError:
            raise AutomatonError(f"unknown state {state!r}") from None

    def column(self, q: int) -> tuple:
        return tuple(self.sigma[a][q] for a in range(self.alphabet_size))

    @functools.cached_property
    def trivial_states(self) -> frozenset:
        """Indices of states acting as the identity on the whole tree."""
        k = self.alphabet_size
        alive = {q for q in range(self.num_states) if self.column(q) == tuple(range(k))}
        changed = True
        while changed:
            changed = False
            for q in list(alive):
                if any(self.tau[a][q] not in alive for a in range(k)):
                    alive.discard(q)
                    changed = True
        return frozenset(alive)

    @functools.cached_property
    def signed_tables(self) -> tuple:
        """Tables over signed states: code ``2q`` is ``q`` and ``2q+1`` its inverse."""
        if not is_invertible(self):
            raise AutomatonError("automaton is not invertible")
        k, n = self.alphabet_size, self.num_states
        sig = [[0] * (2 * n) for _ in range(k)]
        tr = [[0] * (2 * n) for _ in range(k)]
        for q in range(n):
            for a in range(k):
                b = self.sigma[a][q]
                sig[a][2 * q] = b
                tr[a][2 * q] = 2 * self.tau[a][q]
                sig[b][2 * q + 1] = a
                tr[b][2 * q + 1] = 2 * self.tau[a][q] + 1
        return tuple(map(tuple, sig)), tuple(map(tuple, tr))

    def with_identity(self) -> tuple["Automaton", bool]:
        """Return an automaton with an identity state and whether one was adjoined.

        A state that already acts trivially is promoted instead of adding a new one.
        """
        if self.identity is not None:
            return self, False
        if self.trivial_states:
            e = min(self.trivial_states)
            if all(self.tau[a][e] == e for a in range(self.alphabet_size)):
                return Automaton(self.alphabet_size, self.states, self.sigma, self.tau, e), False
        name = IDENTITY_NAME
        while name in self.states:
            name += "'"
        n = self.num_states
        sigma = tuple(row + (a,) for a, row in enumerate(self.sigma))
        tau = tuple(row + (n,) for row in self.tau)
        return Automaton(self.alphabet_size, self.states + (name,), sigma, tau, n), True

    def to_json(self) -> dict:
        return {
            "alphabet_size": self.alphabet_size,
            "states": list(self.states),
            "identity": None if self.identity is None else self.states[self.identity],
            "sigma": [list(row) for row in self.sigma],
            "tau": [[self.states[q] for q in row] for row in self.tau],
        }

    @classmethod
    def from_json(cls, doc: dict) -> "Automaton":
        try:
            return cls.from_tables(
                doc["alphabet_size"], doc["states"], doc["sigma"], doc["tau"], doc.get("identity")
            )
        except (KeyError, TypeError) as exc:
            raise AutomatonError(f"malformed automaton document: {exc}") from None


def graph_of(automaton: Automaton) -> LabeledGraph:
    """One edge ``q -> tau(a,q)`` labeled ``a/sigma(a,q)`` per letter and state."""
    names = automaton.states
    edges = []
    for q in range(automaton.num_states):
        for a in range(automaton.alphabet_size):
            edges.append((names[q], names[automaton.tau[a][q]], f"{a}/{automaton.sigma[a][q]}"))
    return LabeledGraph.build(names, edges)


def dual(automaton: Automaton) -> Automaton:
    """Swap letters and states; the dual has no designated identity state."""
    k, n = automaton.alphabet_size, automaton.num_states
    # new sigma[q][a] = tau[a][q] ; new tau[q][a] = sigma[a][q]
    sigma = tuple(tuple(automaton.tau[a][q] for a in range(k)) for q in range(n))
    tau = tuple(tuple(automaton.sigma[a][q] for a in range(k)) for q in range(n))
    return Automaton(n, tuple(str(a) for a in range(k)), sigma, tau, None)


def product(left: Automaton, right: Automaton) -> Automaton:
    """The automaton whose state ``(q, q')`` acts as ``q`` followed by ``q'``.

    States are ordered with the left factor outermost and named ``q*q'``.
    """
    if left.alphabet_size != right.alphabet_size:
        raise AutomatonError("incompatible alphabets")
    k, n1, n2 = left.alphabet_size, left.num_states, right.num_states
    names = tuple(f"{p}*{q}" for p in left.states for q in right.states)
    sigma, tau = [], []
    for a in range(k):
        srow, trow = [], []
        for i in range(n1):
            b = left.sigma[a][i]
            ti = left.tau[a][i]
            for j in range(n2):
                srow.append(right.sigma[b][j])
                trow.append(ti * n2 + right.tau[b][j])
        sigma.append(tuple(srow))
        tau.append(tuple(trow))
    identity = None
    if left.identity is not None and right.identity is not None:
        identity = left.identity * n2 + right.identity
    return Automaton(k, names, tuple(sigma), tuple(tau), identity)


def power(automaton: Automaton, n: int) -> Automaton:
    if n < 1:
        raise AutomatonError("power needs n >= 1")
    result = automaton
    for _ in range(n - 1):
        result = product(result, automaton)
    return result


def run(sigma, tau, codes: Sequence[int], letters: Sequence[int]) -> tuple[list, list]:
    """Extended output and transition of a state word on a letter word.

    Each state is pushed through the whole input before the next one.
    """
    out = list(letters)
    rest = []
    for c in codes:
        s = c
        for i, a in enumerate(out):
            out[i] = sigma[a][s]
            s = tau[a][s]
        rest.append(s)
    return out, rest


def act(automaton: Automaton, state_word: Iterable, word: Sequence[int]) -> tuple[tuple, tuple]:
    """Return ``(output word, transition word)`` of a state word on a letter word."""
    codes = [automaton.index(q) for q in state_word]
    letters = list(word)
    for a in letters:
        if not isinstance(a, int) or not 0 <= a < automaton.alphabet_size:
            raise AutomatonError(f"letter {a!r} out of range")
    out, rest = run(automaton.sigma, automaton.tau, codes, letters)
    return tuple(out), tuple(rest)


def is_invertible(automaton: Automaton) -> bool:
    k = automaton.alphabet_size
    return all(
        len(set(automaton.column(q))) == k for q in range(automaton.num_states)
    )


def inverse_automaton(automaton: Automaton) -> Automaton:
    """States ``q^-1`` acting as the inverse transformations; the identity keeps its name."""
    if not is_invertible(automaton):
        raise AutomatonError("automaton is not invertible")
    k, n = automaton.alphabet_size, automaton.num_states
    names = tuple(
        q if i == automaton.identity else f"{q}^-1" for i, q in enumerate(automaton.states)
    )
    sigma = [[0] * n for _ in range(k)]
    tau = [[0] * n for _ in range(k)]
    for q in range(n):
        for b in range(k):
            a = automaton.sigma[b][q]
            sigma[a][q] = b
            tau[a][q] = automaton.tau[b][q]
    return Automaton(k, names, tuple(map(tuple, sigma)), tuple(map(tuple, tau)), automaton.identity)


def minimize(automaton: Automaton) -> tuple[Automaton, tuple]:
    """Merge states inducing the same tree transformation.

    Partition refinement seeded by the output columns. Returns the quotient
    and the state map (old index -> new index); the quotient keeps the name
    of the first state of each class, or the identity's name for its class.
    """
    k, n = automaton.alphabet_size, automaton.num_states
    block = _renumber([automaton.column(q) for q in range(n)])
    while True:
        signature = [
            (block[q], tuple(block[automaton.tau[a][q]] for a in range(k))) for q in range(n)
        ]
        refined = _renumber(signature)
        if max(refined) == max(block):
            break
        block = refined
    nblocks = max(block) + 1
    rep = [None] * nblocks
    for q in range(n):
        if rep[block[q]] is None:
            rep[block[q]] = q
    names = [automaton.states[r] for r in rep]
    identity = None
    if automaton.identity is not None:
        identity = block[automaton.identity]
        names[identity] = automaton.states[automaton.identity]
    sigma = tuple(tuple(automaton.sigma[a][r] for r in rep) for a in range(k))
    tau = tuple(tuple(block[automaton.tau[a][r]] for r in rep) for a in range(k))
    return Automaton(k, tuple(names), sigma, tau, identity), tuple(block)


def _renumber(keys) -> list[int]:
    seen: dict = {}
    return [seen.setdefault(key, len(seen)) for key in keys]


def is_homomorphism(source: Automaton, target: Automaton, state_map: Sequence[int]) -> bool:
    return all(
        target.sigma[a][state_map[q]] == source.sigma[a][q]
        and target.tau[a][state_map[q]] == state_map[source.tau[a][q]]
        for q in range(source.num_states)
        for a in range(source.alphabet_size)
    )


def square_tiles(automaton: Automaton, omit_identity: bool = False) -> list[tuple[str, str, str, str]]:
    """``(bottom, left, top, right)`` labels, states outer and letters inner."""
    tiles = []
    for q in range(automaton.num_states):
        if omit_identity and q in automaton.trivial_states:
            continue
        for a in range(automaton.alphabet_size):
            tiles.append((
                str(a),
                automaton.states[q],
                str(automaton.sigma[a][q]),
                automaton.states[automaton.tau[a][q]],
            ))
    return tiles


def render_square_tiles(automaton: Automaton, omit_identity: bool = False) -> str:
    """ASCII squares, one row of boxes per state.

    Each box shows the input letter below, the state on the left, the output
    letter on top and the next state on the right::

          +-1-+
        τ |   | ε
          +-0-+
    """
    rows = []
    tiles = square_tiles(automaton, omit_identity)
    k = automaton.alphabet_size
    for start in range(0, len(tiles), k):
        cells = [_box(*t) for t in tiles[start:start + k]]
        lines = ["  ".join(cell[i] for cell in cells).rstrip() for i in range(3)]
        rows.append("\n".join(lines))
    return "\n\n".join(rows) + "\n"


def _box(bottom: str, left: str, top: str, right: str) -> list[str]:
    inner = max(len(top), len(bottom)) + 2
    pad_l = " " * (len(left) + 1)
    pad_r = " " * (len(right) + 1)
    return [
        pad_l + "+" + top.center(inner, "-") + "+" + pad_r,
        left + " |" + " " * inner + "| " + right,
        pad_l + "+" + bottom.center(inner, "-") + "+" + pad_r,
    ]
