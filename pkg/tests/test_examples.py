from __future__ import annotations

from collections import Counter

import pytest

from selfsim.analysis import spherical_transitivity
from selfsim.automaton import AutomatonError, render_square_tiles
from selfsim.examples import NAMES, UnknownExample, automaton_from_recursion, build
from selfsim.group import GroupWord, equals, restrict, wreath_decomposition

from conftest import parse_rendered_squares


def test_registry():
    assert NAMES == ("lamplighter", "bs13", "odometer", "nonrecurrent3", "nonsmooth3",
                     "nonsmooth3b", "basilica")
    with pytest.raises(UnknownExample):
        build("grigorchuk")


def test_state_sets():
    assert build("lamplighter").automaton.states == ("a", "b")
    assert build("bs13").automaton.states == ("a", "b", "c")
    assert build("odometer").automaton.states == ("ε", "τ")
    assert build("nonsmooth3").automaton.states == ("ε", "τ", "τ^-1")
    assert build("nonsmooth3b").automaton.states == ("ε", "τ", "τ^2", "τ^-1", "τ^-2")
    assert build("basilica").automaton.states == ("ε", "a", "b")


def test_expected_nuclei():
    assert build("odometer").expected["nucleus"].value == ("ε", "τ", "τ^-1")
    assert len(build("nonrecurrent3").expected["nucleus"].value) == 5
    assert len(build("basilica").expected["nucleus"].value) == 7
    for entry in (build(n) for n in NAMES):
        for exp in entry.expected.values():
            assert exp.source in ("published", "derived")
            assert exp.form in ("automaton", "nuclear")


@pytest.mark.parametrize("name", NAMES)
def test_recursions_reproduced(name):
    """Each generator's wreath decomposition matches the recursion it was built from."""
    from selfsim.examples import _DEFINITIONS

    d = _DEFINITIONS[name]
    a = build(name).automaton
    for gen, (rests, perm) in d["recursion"].items():
        dec = wreath_decomposition(GroupWord.parse(a, gen))
        assert dec.root_permutation == tuple(perm)
        for got, text in zip(dec.restrictions, rests):
            assert equals(got, GroupWord.parse(a, text))


@pytest.mark.parametrize("name", NAMES)
def test_square_tables(name):
    entry = build(name)
    exp = entry.expected["squares"] if "squares" in entry.expected else None
    if exp is None:
        pytest.skip("no published square table")
    a = entry.form(exp.form)
    rendered = render_square_tiles(a, omit_identity=True)
    assert Counter(parse_rendered_squares(rendered)) == Counter(exp.value)


def test_nonrecurrent_projection():
    a = build("nonrecurrent3").automaton
    assert equals(restrict(GroupWord.parse(a, "τ^3"), [0]), GroupWord.parse(a, "τ^2"))


def test_nonsmooth3_square_of_generator():
    a = build("nonsmooth3").automaton
    dec = wreath_decomposition(GroupWord.parse(a, "τ^2"))
    assert dec.root_permutation == (2, 0, 1)
    e = GroupWord.identity(a)
    assert equals(dec.restrictions[0], e) and equals(dec.restrictions[1], e)
    assert equals(dec.restrictions[2], GroupWord.parse(a, "τ^2"))


def test_basilica_contains_odometer():
    a = build("basilica").automaton
    g = GroupWord.parse(a, "a^-1·b")
    for n in range(1, 7):
        x = start = (0,) * n
        length = 0
        while True:
            x = g(x)
            length += 1
            if x == start:
                break
        assert length == 2 ** n
    assert all(spherical_transitivity(a, 6))


def test_recursion_errors():
    with pytest.raises(AutomatonError):
        automaton_from_recursion(2, {"a": (("b", "a"), (1, 0))})
    with pytest.raises(AutomatonError):
        automaton_from_recursion(2, {"a": (("a",), (1, 0))})
    with pytest.raises(AutomatonError):
        automaton_from_recursion(2, {"ε": (("ε", "ε"), (0, 1))})


def test_expected_properties_hold():
    """Every recorded expectation with a directly checkable value is checked here."""
    from selfsim.analysis import is_smooth, level_quotient_order, open_set_condition, recurrence

    checks = {
        "smooth": is_smooth,
        "open_set": open_set_condition,
        "recurrent": lambda a: recurrence(a).verified,
        "spherically_transitive": lambda a: all(spherical_transitivity(a, 5)),
        "quotient_orders": lambda a: None,
    }
    for entry in (build(n) for n in NAMES):
        for key, exp in entry.expected.items():
            if key not in checks:
                continue
            a = entry.form(exp.form)
            if key == "quotient_orders":
                assert {n: level_quotient_order(a, n) for n in exp.value} == exp.value
            else:
                assert checks[key](a) == exp.value, (entry.name, key)
