from __future__ import annotations

import itertools

import pytest

from selfsim.automaton import Automaton

# criterion number -> (passed, description, detail); filled by test_acceptance
ACCEPTANCE_RESULTS: dict[int, tuple[bool, str, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE_RESULTS):
        passed, description, detail = ACCEPTANCE_RESULTS[number]
        line = f"criterion {number:2d}: {'PASS' if passed else 'FAIL'}  {description}"
        if detail:
            line += f"  [{detail}]"
        terminalreporter.write_line(line)


# brute-force oracles, written straight from the table definitions -----------

def table_act(automaton: Automaton, codes, word) -> tuple:
    """Apply signed states one after another, walking the tables letter by letter."""
    word = list(word)
    for c in codes:
        q, inverse = c >> 1, c & 1
        out = []
        for a in word:
            if inverse:
                b = next(b for b in range(automaton.alphabet_size) if automaton.sigma[b][q] == a)
                out.append(b)
                q = automaton.tau[b][q]
            else:
                out.append(automaton.sigma[a][q])
                q = automaton.tau[a][q]
        word = out
    return tuple(word)


def words(k: int, n: int):
    return itertools.product(range(k), repeat=n)


def words_upto(k: int, n: int):
    for m in range(n + 1):
        yield from words(k, m)


def level_images(automaton: Automaton, codes, n: int) -> tuple:
    return tuple(table_act(automaton, codes, w) for w in words(automaton.alphabet_size, n))


def identity_automaton(k: int = 2) -> Automaton:
    return Automaton(k, ("ε",), tuple((a,) for a in range(k)), tuple((0,) for _ in range(k)), 0)


@pytest.fixture
def trivial():
    return identity_automaton(2)


def parse_rendered_squares(text: str) -> list[tuple[str, str, str, str]]:
    """Read (bottom, left, top, right) back out of the ASCII square picture."""
    import re

    cells = []
    for block in text.strip("\n").split("\n\n"):
        top, middle, bottom = block.split("\n")
        tops = re.findall(r"\+-+([^-+\s]+)-+\+", top)
        bottoms = re.findall(r"\+-+([^-+\s]+)-+\+", bottom)
        sides = re.findall(r"(\S+) \|\s+\| (\S+)", middle)
        assert len(tops) == len(bottoms) == len(sides)
        cells.extend((b, l, t, r) for t, b, (l, r) in zip(tops, bottoms, sides))
    return cells
