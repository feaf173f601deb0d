from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from selfsim.examples import build
from selfsim.permgroup import (
    LevelTooLarge,
    StabilizerChain,
    group_order,
    index_word,
    inverse_perm,
    level_action,
    level_quotient_order,
    word_index,
)

from conftest import identity_automaton, table_act, words


def closure_size(generators, degree: int) -> int:
    """Enumerate the whole group by breadth-first multiplication."""
    identity = tuple(range(degree))
    seen = {identity}
    frontier = [identity]
    gens = [tuple(int(x) for x in g) for g in generators]
    while frontier:
        nxt = []
        for p in frontier:
            for g in gens:
                q = tuple(g[x] for x in p)
                if q not in seen:
                    seen.add(q)
                    nxt.append(q)
        frontier = nxt
    return len(seen)


def cycle_length(perm) -> int:
    x, n = 0, 1
    while perm[x] != 0:
        x = perm[x]
        n += 1
    return n


@settings(max_examples=60, deadline=None)
@given(degree=st.integers(1, 7), data=st.data())
def test_order_matches_enumeration(degree, data):
    gens = data.draw(st.lists(st.permutations(range(degree)), min_size=1, max_size=3))
    assert group_order(gens, degree) == closure_size(gens, degree)


def test_symmetric_and_alternating():
    n = 7
    cycle = list(range(1, n)) + [0]
    swap = [1, 0] + list(range(2, n))
    assert group_order([cycle, swap], n) == math.factorial(n)
    three = [1, 2, 0] + list(range(3, n))
    shifted = [0, 2, 3, 1] + list(range(4, n))
    alt = [[(i + 1) % 3 if i < 3 else i for i in range(n)]] + [
        [i if i < k or i > k + 2 else k + (i - k + 1) % 3 for i in range(n)] for k in range(1, n - 2)
    ]
    assert group_order(alt, n) == math.factorial(n) // 2
    assert group_order([three, shifted], n) == closure_size([three, shifted], n)


def test_chain_base_smallest_moved():
    chain = StabilizerChain(5)
    chain.insert(np.array([0, 2, 1, 3, 4]))
    assert chain.base == [1]
    assert chain.order() == 2


def test_inverse_perm():
    p = np.array([2, 0, 1])
    assert list(inverse_perm(p)[p]) == [0, 1, 2]


def test_word_indexing():
    for x in range(27):
        assert word_index(index_word(x, 3, 3), 3) == x
    assert index_word(1, 2, 3) == (0, 0, 1)


@pytest.mark.parametrize("name", ["odometer", "basilica", "nonsmooth3b", "bs13"])
def test_level_action_matches_tables(name):
    a = build(name).automaton
    k = a.alphabet_size
    for n in range(0, 4):
        perm, restr = level_action(a, n)
        for q in range(a.num_states):
            for x, w in enumerate(words(k, n)):
                assert index_word(perm[q, x], k, n) == table_act(a, (2 * q,), w)
                # restriction after reading w, via the tables
                s = q
                for letter in w:
                    s = a.tau[letter][s]
                assert restr[q, x] == s


def test_odometer_orders():
    a = build("odometer").automaton
    for n in range(1, 9):
        assert level_quotient_order(a, n) == 2 ** n
        perm, _ = level_action(a, n)
        assert cycle_length(perm[a.index("τ")]) == 2 ** n


def test_nonrecurrent_orders():
    a = build("nonrecurrent3").automaton
    for n in range(1, 6):
        perm, _ = level_action(a, n)
        assert cycle_length(perm[a.index("τ")]) == 3 ** n
        assert level_quotient_order(a, n) == 3 ** n


def test_identity_orders():
    for n in range(0, 5):
        assert level_quotient_order(identity_automaton(2), n) == 1


@pytest.mark.parametrize("name", ["basilica", "lamplighter", "bs13", "nonsmooth3"])
def test_small_levels_match_enumeration(name):
    a = build(name).automaton
    for n in range(1, 4):
        perm, _ = level_action(a, n)
        assert level_quotient_order(a, n) == closure_size(list(perm), perm.shape[1])


def test_level_cap():
    with pytest.raises(LevelTooLarge):
        level_quotient_order(build("odometer").automaton, 20)
    with pytest.raises(LevelTooLarge):
        level_action(build("odometer").automaton, 5, cap=16)
