"""Property checks on automaton groups: smoothness, expansion rules, the open
set condition, recurrence and spherical transitivity.

The nucleus, nuclearity and restriction depth live in :mod:`selfsim.nucleus`;
level quotient orders in :mod:`selfsim.permgroup`. They are re-exported here.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass

import numpy as np

from .automaton import Automaton, AutomatonError, is_invertible
from .group import ElementTable, GroupWord, reduce_codes
from .kernels import components
# nucleus and level-order names are re-exported so analysis is one import
from .nucleus import (  # noqa: F401
    NucleusReport,
    Status,
    Unbounded,
    Verdict,
    check_tau_onto,
    is_contracting,
    is_nuclear,
    nucleus,
    restriction_depth,
)
from .nucleus import REPORT_SCHEMA
from .permgroup import LEVEL_CAP, level_action, level_quotient_order  # noqa: F401

SEARCH_LEN = 8


def identity_letter_graph(automaton: Automaton) -> dict[int, list[tuple[int, int]]]:
    """Edges ``a -> sigma(a,q)`` for every state ``q`` restricting to the identity at ``a``.

    Returns ``{a: [(b, q), ...]}`` ordered by state index.
    """
    trivial = automaton.trivial_states
    graph: dict[int, list[tuple[int, int]]] = {a: [] for a in range(automaton.alphabet_size)}
    for a in range(automaton.alphabet_size):
        for q in range(automaton.num_states):
            if automaton.tau[a][q] in trivial:
                graph[a].append((automaton.sigma[a][q], q))
    return graph


def _reach(graph, start) -> set:
    seen = {start}
    queue = deque([start])
    while queue:
        v = queue.popleft()
        for w, _ in graph[v]:
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return seen


def is_smooth(automaton: Automaton) -> bool:
    """Transition map onto, and the identity-restriction letter graph strongly connected."""
    automaton, _ = automaton.with_identity()
    if not check_tau_onto(automaton):
        return False
    graph = identity_letter_graph(automaton)
    k = automaton.alphabet_size
    if len(_reach(graph, 0)) != k:
        return False
    reverse = {a: [] for a in range(k)}
    for a, edges in graph.items():
        for b, q in edges:
            reverse[b].append((a, q))
    return len(_reach(reverse, 0)) == k


@dataclass(frozen=True)
class ExpansionRule:
    """``entries[q] = (e_q, v_q)`` with ``tau(e_q, v_q) = q``; ``paths[a, b]`` a state
    word carrying ``a`` to ``b`` with identity restrictions all along."""

    automaton: Automaton
    entries: dict
    paths: dict

    def to_json(self) -> dict:
        names = self.automaton.states
        return {
            "entries": {names[q]: {"letter": e, "state": names[v]} for q, (e, v) in self.entries.items()},
            "paths": {f"{a},{b}": [names[q] for q in p] for (a, b), p in self.paths.items()},
        }


def expansion_rule(automaton: Automaton) -> ExpansionRule | None:
    """The expansion rule, or ``None`` exactly when the automaton is not smooth."""
    automaton, _ = automaton.with_identity()
    if not is_smooth(automaton):
        return None
    k, n = automaton.alphabet_size, automaton.num_states
    entries = {}
    for v in range(n):
        for e in range(k):
            entries.setdefault(automaton.tau[e][v], (e, v))
    graph = identity_letter_graph(automaton)
    paths = {}
    for a in range(k):
        prev = {a: None}
        queue = deque([a])
        while queue:
            x = queue.popleft()
            for y, q in graph[x]:
                if y not in prev:
                    prev[y] = (x, q)
                    queue.append(y)
        for b in range(k):
            word, y = [], b
            while prev[y] is not None:
                x, q = prev[y]
                word.append(q)
                y = x
            paths[a, b] = tuple(reversed(word))
    return ExpansionRule(automaton, dict(sorted(entries.items())), paths)


def connecting_word(rule: ExpansionRule, source, target, states=()) -> tuple:
    """A state word carrying ``source`` to ``target`` whose transition word is
    ``states`` interleaved with identity states.

    Built level by level from the expansion rule.
    """
    automaton = rule.automaton
    if len(source) != len(target):
        raise AutomatonError("words must have the same length")
    word = tuple(automaton.index(q) for q in states)
    for a, b in zip(reversed(source), reversed(target)):
        top, cur = [], a
        for q in word:
            e, v = rule.entries[q]
            top.extend(rule.paths[cur, e])
            top.append(v)
            cur = automaton.sigma[e][v]
        top.extend(rule.paths[cur, b])
        word = tuple(top)
    return word


def open_set_condition(automaton: Automaton) -> bool:
    """Every state has some restriction equal to the identity."""
    automaton, _ = automaton.with_identity()
    k, n = automaton.alphabet_size, automaton.num_states
    preds: dict[int, set] = {q: set() for q in range(n)}
    for q in range(n):
        for a in range(k):
            preds[automaton.tau[a][q]].add(q)
    seen = set(automaton.trivial_states)
    queue = deque(seen)
    while queue:
        q = queue.popleft()
        for p in preds[q]:
            if p not in seen:
                seen.add(p)
                queue.append(p)
    return len(seen) == n


class RecurrenceStatus(str, enum.Enum):
    VERIFIED = "verified"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class LetterRecurrence:
    letter: int
    orbit: tuple
    transversal: dict  # point -> GroupWord carrying the letter there
    schreier_generators: tuple  # GroupWords fixing the letter
    restrictions: tuple  # their restrictions at the letter
    found: dict  # state name -> GroupWord witness, or None

    def to_json(self) -> dict:
        return {
            "letter": self.letter,
            "orbit": list(self.orbit),
            "transversal": {str(x): w.text() for x, w in self.transversal.items()},
            "stabilizer_generators": [
                {"generator": g.text(), "restriction": r.reduced().text()}
                for g, r in zip(self.schreier_generators, self.restrictions)
            ],
            "found": {q: (w.text() if w is not None else None) for q, w in self.found.items()},
        }


@dataclass(frozen=True)
class RecurrenceReport:
    status: RecurrenceStatus
    per_letter: tuple
    search_len: int

    @property
    def verified(self) -> bool:
        return self.status is RecurrenceStatus.VERIFIED

    def to_json(self) -> dict:
        return {
            "schema": REPORT_SCHEMA,
            "kind": "recurrence",
            "status": self.status.value,
            "search_len": self.search_len,
            "letters": [entry.to_json() for entry in self.per_letter],
        }


def _generator_codes(automaton: Automaton) -> list[int]:
    trivial = automaton.trivial_states
    return [c for c in range(2 * automaton.num_states) if (c >> 1) not in trivial]


def recurrence(automaton: Automaton, search_len: int = SEARCH_LEN,
               max_elements: int = 20_000) -> RecurrenceReport:
    """Check that each letter's stabilizer restricts onto the whole group.

    Stabilizer generators come from shortest coset representatives; every
    state is then searched for among products of at most ``search_len``
    restricted stabilizer generators (and their inverses).
    """
    if not is_invertible(automaton):
        raise AutomatonError("recurrence needs an invertible automaton")
    k = automaton.alphabet_size
    sig, tr = automaton.signed_tables
    gens = _generator_codes(automaton)
    targets = [q for q in range(automaton.num_states) if q not in automaton.trivial_states]
    target_table = ElementTable(automaton)
    target_index: dict[int, list[int]] = {}
    for q in targets:
        idx, _ = target_table.add((2 * q,))
        target_index.setdefault(idx, []).append(q)

    entries = []
    verified = True
    for a in range(k):
        transversal = {a: ()}
        queue = deque([a])
        while queue:
            x = queue.popleft()
            for c in gens:
                y = sig[x][c]
                if y not in transversal:
                    transversal[y] = transversal[x] + (c,)
                    queue.append(y)
        stab = ElementTable(automaton)
        stab.add(())
        for x in transversal:
            for c in gens:
                y = sig[x][c]
                back = tuple(d ^ 1 for d in reversed(transversal[y]))
                stab.add(transversal[x] + (c,) + back)
        schreier = stab.words[1:]
        restricted = []
        for w in schreier:
            x, rest = a, []
            for c in w:
                rest.append(tr[x][c])
                x = sig[x][c]
            restricted.append(tuple(rest))

        found = _search(automaton, restricted, target_table, target_index, search_len, max_elements)
        if len(found) < len(targets):
            verified = False
        entries.append(LetterRecurrence(
            a,
            tuple(transversal),
            {x: GroupWord(automaton, w) for x, w in transversal.items()},
            tuple(GroupWord(automaton, w) for w in schreier),
            tuple(GroupWord(automaton, w) for w in restricted),
            {automaton.states[q]: (GroupWord(automaton, found[q]) if q in found else None) for q in targets},
        ))
    status = RecurrenceStatus.VERIFIED if verified else RecurrenceStatus.UNKNOWN
    return RecurrenceReport(status, tuple(entries), search_len)


def _search(automaton, restricted, target_table, target_index, search_len, max_elements) -> dict:
    """Breadth-first search over products of restricted stabilizer generators.

    Returns ``{state: codes}`` for every target state met within ``search_len`` steps.
    """
    steps = []
    for w in restricted:
        w = reduce_codes(automaton, w)
        if w:
            steps.append(w)
            steps.append(tuple(c ^ 1 for c in reversed(w)))
    wanted = sum(len(qs) for qs in target_index.values())
    found: dict[int, tuple] = {}
    seen = ElementTable(automaton)
    seen.add(())
    frontier = [()]
    for _ in range(search_len):
        if len(found) == wanted or not frontier:
            break
        nxt = []
        for w in frontier:
            for s in steps:
                codes = reduce_codes(automaton, w + s)
                _, new = seen.add(codes)
                if not new:
                    continue
                nxt.append(codes)
                t = target_table.find(codes)
                if t is not None:
                    for q in target_index[t]:
                        found.setdefault(q, codes)
                if len(seen) > max_elements:
                    return found
        frontier = nxt
    return found


def spherical_transitivity(automaton: Automaton, max_level: int, cap: int = LEVEL_CAP) -> list[bool]:
    """Whether the group is transitive on each level ``1..max_level``."""
    if not is_invertible(automaton):
        raise AutomatonError("transitivity needs an invertible automaton")
    result = []
    for n in range(1, max_level + 1):
        perm, _ = level_action(automaton, n, cap)
        size = perm.shape[1]
        src = np.tile(np.arange(size, dtype=np.int64), perm.shape[0])
        labels = components(size, src, perm.reshape(-1))
        result.append(bool(np.all(labels == 0)))
    return result
