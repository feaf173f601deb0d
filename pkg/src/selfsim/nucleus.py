"""Nucleus of a contracting automaton group, nuclearity and restriction depth."""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass

from .automaton import Automaton, AutomatonError, is_invertible, minimize
from .group import ElementTable, GroupWord, equal_codes, format_word, reduce_codes

MAX_ELEMENTS = 512
MAX_LEN = 12
MAX_DEPTH = 64
REPORT_SCHEMA = "ssa-report/1"


class Status(str, enum.Enum):
    CONTRACTING = "contracting"
    EXCEEDED_BOUND = "exceeded-bound"


class Verdict(str, enum.Enum):
    YES = "yes"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class NucleusReport:
    status: Status
    automaton: Automaton
    nucleus: tuple = ()  # GroupWords, identity first
    nuclear_automaton: Automaton | None = None
    witness: dict | None = None
    bounds_used: tuple = (MAX_ELEMENTS, MAX_LEN)
    elements_explored: int = 0

    @property
    def contracting(self) -> bool:
        return self.status is Status.CONTRACTING

    def names(self) -> list[str]:
        return [g.text() for g in self.nucleus]

    def to_json(self) -> dict:
        return {
            "schema": REPORT_SCHEMA,
            "kind": "nucleus",
            "status": self.status.value,
            "nucleus": self.names() if self.contracting else None,
            "nuclear_automaton": self.nuclear_automaton.to_json() if self.nuclear_automaton else None,
            "witness": self.witness,
            "bounds": {"max_elements": self.bounds_used[0], "max_len": self.bounds_used[1]},
            "elements_explored": self.elements_explored,
        }


class _Bound(Exception):
    def __init__(self, codes, reason, node=None):
        self.codes, self.reason, self.node = codes, reason, node


def _limit_nodes(nodes, successors) -> set:
    """Nodes reachable from a cycle: strip nodes without predecessors until none remain."""
    indeg = {v: 0 for v in nodes}
    for v in nodes:
        for w in successors(v):
            indeg[w] += 1
    queue = deque(v for v, d in indeg.items() if d == 0)
    alive = set(nodes)
    while queue:
        v = queue.popleft()
        alive.discard(v)
        for w in successors(v):
            indeg[w] -= 1
            if indeg[w] == 0:
                queue.append(w)
    return alive


def nucleus(
    automaton: Automaton,
    max_elements: int = MAX_ELEMENTS,
    max_len: int = MAX_LEN,
    schedule: str = "limits-first",
) -> NucleusReport:
    """Compute the nucleus by fixed-point closure.

    Starting from the states and their inverses, every product of two known
    elements is restricted repeatedly; the products sitting on or below a
    cycle of restrictions join the set. ``schedule`` chooses whether the
    starting set is first cut down to its own limit set (``"limits-first"``)
    or used whole (``"products-first"``); both reach the same nucleus.
    """
    if not is_invertible(automaton):
        raise AutomatonError("nucleus needs an invertible automaton")
    if schedule not in ("limits-first", "products-first"):
        raise ValueError(f"unknown schedule {schedule!r}")
    k = automaton.alphabet_size
    sig, tr = automaton.signed_tables
    table = ElementTable(automaton)
    outs: list[tuple] = []
    succ: list[list[int]] = []

    table.add(())
    outs.append(tuple(range(k)))
    succ.append([0] * k)
    code_member = {}
    for c in range(2 * automaton.num_states):
        idx, new = table.add((c,))
        code_member[c] = idx
        if new:
            outs.append(tuple(sig[a][c] for a in range(k)))
            succ.append([])
    for c, idx in code_member.items():
        if not succ[idx]:
            succ[idx] = [code_member[tr[a][c]] for a in range(k)]

    members = range(len(table))
    if schedule == "limits-first":
        active = _limit_nodes(members, lambda m: succ[m]) | {0}
    else:
        active = set(members)

    pair_member: dict[tuple, int] = {}
    processed: set[tuple] = set()

    def pair_next(node, a):
        x, y = node
        return succ[x][a], succ[y][outs[x][a]]

    try:
        grew = True
        while grew:
            grew = False
            order = sorted(active, key=lambda m: (len(table.words[m]), m))
            for i in order:
                for j in order:
                    if (i, j) in processed:
                        continue
                    processed.add((i, j))
                    if _close_pair((i, j), pair_next, k, table, outs, succ, pair_member,
                                   active, max_elements, max_len):
                        grew = True
    except _Bound as exc:
        witness = {
            "element": format_word(automaton, exc.codes),
            "word_length": len(exc.codes),
            "reason": exc.reason,
            "self_restriction": _self_cycle(exc.node, pair_next, k) if exc.node else None,
        }
        return NucleusReport(Status.EXCEEDED_BOUND, automaton, witness=witness,
                             bounds_used=(max_elements, max_len), elements_explored=len(table))

    limit = _limit_nodes(sorted(active), lambda m: succ[m])
    ordered = [0] + sorted(m for m in limit if m != 0)
    position = {m: i for i, m in enumerate(ordered)}
    words = tuple(GroupWord(automaton, table.words[m]) for m in ordered)
    names = tuple(format_word(automaton, table.words[m]) for m in ordered)
    nuclear = Automaton(
        k,
        names,
        tuple(tuple(outs[m][a] for m in ordered) for a in range(k)),
        tuple(tuple(position[succ[m][a]] for m in ordered) for a in range(k)),
        0,
    )
    return NucleusReport(Status.CONTRACTING, automaton, words, nuclear,
                         bounds_used=(max_elements, max_len), elements_explored=len(table))


def _close_pair(start, pair_next, k, table, outs, succ, pair_member, active, max_elements, max_len):
    """Add the limit elements of the restriction graph of one product; True if any is new."""
    seen = {start}
    stack = [start]
    while stack:
        node = stack.pop()
        for a in range(k):
            nxt = pair_next(node, a)
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    adjacency = {v: [pair_next(v, a) for a in range(k)] for v in seen}
    limit = _limit_nodes(seen, adjacency.__getitem__)
    fresh = []
    for node in sorted(limit):
        if node in pair_member:
            continue
        x, y = node
        codes = reduce_codes(table.automaton, table.words[x] + table.words[y])
        idx, new = table.add(codes)
        pair_member[node] = idx
        if new:
            if len(table.words[idx]) > max_len:
                raise _Bound(table.words[idx], f"word length exceeds {max_len}", node)
            if len(table) > max_elements:
                raise _Bound(table.words[idx], f"more than {max_elements} elements", node)
            outs.append(tuple(outs[y][outs[x][a]] for a in range(k)))
            succ.append([])
            fresh.append((idx, node))
    for idx, node in fresh:
        succ[idx] = [pair_member[nxt] for nxt in adjacency[node]]
    added = False
    for node in limit:
        m = pair_member[node]
        if m not in active:
            active.add(m)
            added = True
    return added


def _self_cycle(node, pair_next, k):
    """Shortest letter word along which the product at ``node`` restricts to itself."""
    queue = deque([(node, "")])
    seen = set()
    while queue:
        v, path = queue.popleft()
        for a in range(k):
            w = pair_next(v, a)
            if w == node:
                return path + str(a)
            if w not in seen and len(seen) < 10000:
                seen.add(w)
                queue.append((w, path + str(a)))
    return None


def is_contracting(automaton: Automaton, max_elements: int = MAX_ELEMENTS,
                   max_len: int = MAX_LEN) -> tuple[Verdict, NucleusReport]:
    """``YES`` when the closure stabilises; otherwise ``UNKNOWN`` with the report.

    Non-contraction is never asserted: a tripped bound is only evidence.
    """
    report = nucleus(automaton, max_elements, max_len)
    return (Verdict.YES if report.contracting else Verdict.UNKNOWN), report


def is_nuclear(automaton: Automaton) -> bool:
    """Polynomial check that the states (as transformations) form the nucleus."""
    if not is_invertible(automaton):
        return False
    quotient, _ = minimize(automaton)
    k, n = quotient.alphabet_size, quotient.num_states
    trivial = quotient.trivial_states
    if not trivial:
        return False
    # every state must sit below a cycle, i.e. have a predecessor
    if len(_limit_nodes(range(n), lambda q: [quotient.tau[a][q] for a in range(k)])) != n:
        return False
    inverse_of = {}
    for q in range(n):
        for r in range(n):
            if equal_codes(quotient, (2 * q + 1,), (2 * r,)):
                inverse_of[q] = r
                break
        else:
            return False
    sigma, tau = quotient.sigma, quotient.tau

    def pair_next(node, a):
        x, y = node
        return tau[a][x], tau[sigma[a][x]][y]

    nodes = [(x, y) for x in range(n) for y in range(n)]
    limit = _limit_nodes(nodes, lambda v: [pair_next(v, a) for a in range(k)])
    for x, y in limit:
        codes = reduce_codes(quotient, (2 * x, 2 * y))
        if not any(equal_codes(quotient, codes, (2 * r,)) for r in range(n)):
            return False
    return True


def check_tau_onto(automaton: Automaton) -> bool:
    hit = {automaton.tau[a][q] for a in range(automaton.alphabet_size) for q in range(automaton.num_states)}
    return len(hit) == automaton.num_states


@dataclass(frozen=True)
class Unbounded:
    cap: int

    def __str__(self):
        return f"unbounded(>{self.cap})"


def restriction_depth(g: GroupWord, nucleus_elements, max_depth: int = MAX_DEPTH,
                      max_width: int = 4096):
    """Smallest ``n`` with every restriction of ``g`` below level ``n`` in the nucleus."""
    automaton = g.automaton
    members = ElementTable(automaton)
    for h in nucleus_elements:
        members.add(h.codes)
    k = automaton.alphabet_size
    sig, tr = automaton.signed_tables
    level = ElementTable(automaton)
    level.add(g.codes)
    for depth in range(max_depth + 1):
        if all(members.find(w) is not None for w in level.words):
            return depth
        nxt = ElementTable(automaton)
        for w in level.words:
            for a in range(k):
                x, rest = a, []
                for c in w:
                    rest.append(tr[x][c])
                    x = sig[x][c]
                nxt.add(rest)
                if len(nxt) > max_width:
                    return Unbounded(depth)
        level = nxt
    return Unbounded(max_depth)
