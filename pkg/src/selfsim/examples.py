"""The worked example automata, built from their wreath recursions.

Each entry keeps the generating automaton, its nucleus automaton when the
group is contracting, and a record of the published (or independently
derived) properties that the test suite checks against.
"""

from __future__ import annotations

import functools
import re
from collections import deque
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .automaton import IDENTITY_NAME, Automaton, AutomatonError
from .group import GroupWord, equals, format_codes
from .nucleus import nucleus

MAX_RECURSION_STATES = 64
_TOKEN = re.compile(r"^(.+?)(?:\^(-?\d+))?$")


class UnknownExample(AutomatonError):
    code = "unknown-example"


def automaton_from_recursion(
    alphabet_size: int,
    recursion: Mapping[str, tuple[Sequence[str], Sequence[int]]],
    include_identity: bool = False,
) -> Automaton:
    """Build an automaton from ``name -> ((g|_0, ..., g|_{k-1}), permutation)``.

    Restrictions are words in the generators, e.g. ``"τ^2"``, ``"a^-1·b"`` or
    ``"ε"``. Restrictions that are not generators become extra states named by
    their reduced word; each one is checked to act as that word.
    """
    gens = list(recursion)
    if IDENTITY_NAME in gens:
        raise AutomatonError(f"{IDENTITY_NAME} is reserved for the identity")
    k = alphabet_size
    perms, rests = [], []
    for g in gens:
        words, perm = recursion[g]
        if len(words) != k or sorted(perm) != list(range(k)):
            raise AutomatonError(f"bad recursion for {g!r}")
        perms.append(tuple(perm))
        rests.append([_parse_gen_word(gens, w) for w in words])
    inv_perms = [tuple(p.index(a) for a in range(k)) for p in perms]

    def step(word):
        outs, restrictions = [], []
        for a in range(k):
            x, rest = a, []
            for c in word:
                g = c >> 1
                if c & 1:
                    y = inv_perms[g][x]
                    rest.extend(d ^ 1 for d in reversed(rests[g][y]))
                    x = y
                else:
                    rest.extend(rests[g][x])
                    x = perms[g][x]
            outs.append(x)
            restrictions.append(_free_reduce(rest))
        return outs, restrictions

    order: list[tuple] = []
    if include_identity:
        order.append(())
    order.extend((2 * i,) for i in range(len(gens)))
    index = {w: i for i, w in enumerate(order)}
    tables = {}
    queue = deque(order)
    while queue:
        w = queue.popleft()
        outs, restrictions = step(w)
        tables[w] = (outs, restrictions)
        for r in restrictions:
            if r not in index:
                if len(order) >= MAX_RECURSION_STATES:
                    raise AutomatonError("recursion does not close on a small state set")
                index[r] = len(order)
                order.append(r)
                queue.append(r)
    names = tuple(format_codes(gens, w) for w in order)
    sigma = tuple(tuple(tables[w][0][a] for w in order) for a in range(k))
    tau = tuple(tuple(index[tables[w][1][a]] for w in order) for a in range(k))
    identity = index.get(())
    automaton = Automaton(k, names, sigma, tau, identity)

    for i, w in enumerate(order):
        if len(w) == 1 and not w[0] & 1:
            continue
        as_state = GroupWord(automaton, (2 * i,))
        as_product = GroupWord(automaton, tuple(2 * index[(c & ~1,)] + (c & 1) for c in w))
        if not equals(as_state, as_product):
            raise AutomatonError(f"adjoined state {names[i]!r} does not act as its word")
    return automaton


def _parse_gen_word(gens, text: str) -> tuple:
    text = text.strip()
    if text in ("", IDENTITY_NAME):
        return ()
    codes = []
    for token in re.split(r"[·.]", text):
        m = _TOKEN.match(token.strip())
        name, exp = m.group(1), int(m.group(2) or 1)
        if name == IDENTITY_NAME:
            continue
        if name not in gens:
            raise AutomatonError(f"unknown generator {name!r} in {text!r}")
        g = gens.index(name)
        codes.extend([2 * g + (exp < 0)] * abs(exp))
    return _free_reduce(codes)


def _free_reduce(codes) -> tuple:
    stack = []
    for c in codes:
        if stack and stack[-1] == c ^ 1:
            stack.pop()
        else:
            stack.append(c)
    return tuple(stack)


@dataclass(frozen=True)
class Expectation:
    """A property value, where it comes from, and which automaton form it describes."""

    value: object
    source: str  # "published" or "derived"
    form: str = "automaton"  # "automaton" or "nuclear"


@dataclass(frozen=True)
class ExampleEntry:
    name: str
    title: str
    automaton: Automaton
    expected: Mapping[str, Expectation] = field(default_factory=dict)

    @functools.cached_property
    def nucleus_report(self):
        return nucleus(self.automaton)

    @property
    def nuclear_automaton(self) -> Automaton | None:
        return self.nucleus_report.nuclear_automaton

    def form(self, which: str) -> Automaton:
        if which == "nuclear":
            if self.nuclear_automaton is None:
                raise AutomatonError(f"{self.name} has no nucleus automaton")
            return self.nuclear_automaton
        return self.automaton


SIGMA2 = (1, 0)
SIGMA3 = (1, 2, 0)
ID2 = (0, 1)


def _squares(rows: str) -> tuple:
    return tuple(tuple(cell.split()) for cell in rows.strip().split(";"))


_DEFINITIONS = {
    "lamplighter": dict(
        title="Lamplighter group",
        k=2,
        recursion={"a": (("a", "b"), ID2), "b": (("b", "a"), SIGMA2)},
        identity=False,
        expected={
            "nucleus": Expectation(None, "published"),
            "nuclear": Expectation(False, "published"),
            "squares": Expectation(_squares("0 a 0 a; 1 a 1 b; 0 b 1 b; 1 b 0 a"), "published"),
        },
    ),
    "bs13": dict(
        title="Baumslag-Solitar group BS(1,3)",
        k=2,
        recursion={"a": (("a", "b"), ID2), "b": (("a", "c"), SIGMA2), "c": (("b", "c"), ID2)},
        identity=False,
        expected={
            "nucleus": Expectation(None, "published"),
            "nuclear": Expectation(False, "published"),
            "squares": Expectation(
                _squares("0 a 0 a; 1 a 1 b; 0 b 1 a; 1 b 0 c; 0 c 0 b; 1 c 1 c"), "published"
            ),
        },
    ),
    "odometer": dict(
        title="Odometer (binary adding machine)",
        k=2,
        recursion={"τ": (("ε", "τ"), SIGMA2)},
        identity=True,
        expected={
            "nucleus": Expectation(("ε", "τ", "τ^-1"), "published"),
            "nuclear": Expectation(False, "derived"),
            "smooth": Expectation(True, "derived", "nuclear"),
            "squares": Expectation(
                _squares("0 τ 1 ε; 1 τ 0 τ; 0 τ^-1 1 τ^-1; 1 τ^-1 0 ε"), "published", "nuclear"
            ),
            "spherically_transitive": Expectation(True, "derived"),
            "quotient_orders": Expectation({n: 2**n for n in range(1, 9)}, "derived"),
        },
    ),
    "nonrecurrent3": dict(
        title="Non-recurrent ternary example",
        k=3,
        recursion={"τ": (("ε", "τ", "τ"), SIGMA3)},
        identity=True,
        expected={
            "nucleus": Expectation(("ε", "τ", "τ^-1", "τ^2", "τ^-2"), "published"),
            "recurrent": Expectation(False, "published"),
            "squares": Expectation(_squares(
                "0 τ^-2 1 τ^-2; 0 τ^2 2 τ; 0 τ^-1 2 τ^-1; 0 τ 1 ε;"
                "1 τ^-2 2 τ^-1; 1 τ^2 0 τ^2; 1 τ^-1 0 ε; 1 τ 2 τ;"
                "2 τ^-2 0 τ^-1; 2 τ^2 1 τ; 2 τ^-1 1 τ^-1; 2 τ 0 τ"
            ), "published", "nuclear"),
            "quotient_orders": Expectation({n: 3**n for n in range(1, 6)}, "derived"),
        },
    ),
    "nonsmooth3": dict(
        title="Non-smooth ternary example",
        k=3,
        recursion={"τ": (("τ", "τ^-1", "τ"), SIGMA3)},
        identity=True,
        expected={
            "nucleus": Expectation(("ε", "τ", "τ^-1", "τ^2", "τ^-2"), "published"),
            "recurrent": Expectation(True, "published"),
            "smooth": Expectation(False, "published"),
            "open_set": Expectation(False, "derived", "nuclear"),
            "squares": Expectation(_squares(
                "0 τ^-2 1 ε; 0 τ^2 2 ε; 0 τ^-1 2 τ^-1; 0 τ 1 τ;"
                "1 τ^-2 2 τ^-2; 1 τ^2 0 ε; 1 τ^-1 0 τ^-1; 1 τ 2 τ^-1;"
                "2 τ^-2 0 ε; 2 τ^2 1 τ^2; 2 τ^-1 1 τ; 2 τ 0 τ"
            ), "published", "nuclear"),
        },
    ),
    "nonsmooth3b": dict(
        title="Essentially non-smooth ternary example",
        k=3,
        recursion={"τ": (("τ^2", "ε", "τ^-1"), SIGMA3)},
        identity=True,
        expected={
            "nucleus": Expectation(("ε", "τ", "τ^-1", "τ^2", "τ^-2"), "published"),
            "recurrent": Expectation(True, "published"),
            "smooth": Expectation(False, "published", "nuclear"),
            "tiles_connected": Expectation(False, "published", "nuclear"),
            "squares": Expectation(_squares(
                "0 τ^-2 1 τ; 0 τ^2 2 τ^2; 0 τ^-1 2 τ; 0 τ 1 τ^2;"
                "1 τ^-2 2 τ^-1; 1 τ^2 0 τ^-1; 1 τ^-1 0 τ^-2; 1 τ 2 ε;"
                "2 τ^-2 0 τ^-2; 2 τ^2 1 τ; 2 τ^-1 1 ε; 2 τ 0 τ^-1"
            ), "published", "nuclear"),
        },
    ),
    "basilica": dict(
        title="Basilica group",
        k=2,
        recursion={"a": (("ε", "b"), SIGMA2), "b": (("ε", "a"), ID2)},
        identity=True,
        expected={
            "nucleus": Expectation(("ε", "a", "a^-1", "b", "b^-1", "a^-1·b", "b^-1·a"), "published"),
            "open_set": Expectation(True, "derived", "nuclear"),
            "recurrent": Expectation(True, "derived"),
            "spherically_transitive": Expectation(True, "derived"),
        },
    ),
}

NAMES = tuple(_DEFINITIONS)


@functools.lru_cache(maxsize=None)
def build(name: str) -> ExampleEntry:
    if name not in _DEFINITIONS:
        raise UnknownExample(f"unknown example {name!r}; choose from {', '.join(NAMES)}")
    d = _DEFINITIONS[name]
    automaton = automaton_from_recursion(d["k"], d["recursion"], d["identity"])
    return ExampleEntry(name, d["title"], automaton, d["expected"])


def all_examples() -> list[ExampleEntry]:
    return [build(n) for n in NAMES]
