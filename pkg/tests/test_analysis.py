from __future__ import annotations

import pytest

from selfsim.analysis import (
    RecurrenceStatus,
    Status,
    Unbounded,
    Verdict,
    check_tau_onto,
    connecting_word,
    expansion_rule,
    identity_letter_graph,
    is_contracting,
    is_nuclear,
    is_smooth,
    nucleus,
    open_set_condition,
    recurrence,
    restriction_depth,
    spherical_transitivity,
)
from selfsim.automaton import Automaton, act, minimize
from selfsim.examples import NAMES, build
from selfsim.group import GroupWord, equal_codes, equals, reduce_codes, restrict

from conftest import identity_automaton, table_act, words

CONTRACTING = ["odometer", "nonrecurrent3", "nonsmooth3", "nonsmooth3b", "basilica"]


def members(report):
    return [w.codes for w in report.nucleus]


def same_set(automaton, found, expected_texts) -> bool:
    expected = [GroupWord.parse(automaton, t).codes for t in expected_texts]
    if len(found) != len(expected):
        return False
    return all(any(equal_codes(automaton, f, e) for f in found) for e in expected)


# nucleus ---------------------------------------------------------------------

@pytest.mark.parametrize("name", CONTRACTING)
def test_nucleus_matches_published(name):
    entry = build(name)
    report = nucleus(entry.automaton)
    assert report.status is Status.CONTRACTING
    assert same_set(entry.automaton, members(report), entry.expected["nucleus"].value)
    assert report.names() == list(entry.expected["nucleus"].value)


@pytest.mark.parametrize("name", ["lamplighter", "bs13"])
def test_not_contracting_within_bounds(name):
    report = nucleus(build(name).automaton)
    assert report.status is Status.EXCEEDED_BOUND
    assert report.nucleus == () and report.nuclear_automaton is None
    assert report.witness is not None
    verdict, _ = is_contracting(build(name).automaton)
    assert verdict is Verdict.UNKNOWN


def test_lamplighter_witness_self_restricts():
    report = nucleus(build("lamplighter").automaton)
    a = build("lamplighter").automaton
    g = GroupWord.parse(a, report.witness["element"])
    path = [int(x) for x in report.witness["self_restriction"]]
    assert path and equals(restrict(g, path), g)
    assert not equals(g, GroupWord.identity(a))


def test_identity_automaton_nucleus(trivial):
    verdict, report = is_contracting(trivial)
    assert verdict is Verdict.YES
    assert report.names() == ["ε"]


@pytest.mark.parametrize("name", CONTRACTING)
def test_schedules_agree(name):
    a = build(name).automaton
    first = nucleus(a, schedule="limits-first")
    second = nucleus(a, schedule="products-first")
    assert first.names() == second.names()


@pytest.mark.parametrize("name", CONTRACTING)
def test_nucleus_closed(name):
    a = build(name).automaton
    found = members(nucleus(a))
    assert () in found
    for g in found:
        inv = tuple(c ^ 1 for c in reversed(g))
        assert any(equal_codes(a, inv, h) for h in found)
        for x in range(a.alphabet_size):
            r = restrict(GroupWord(a, g), [x]).codes
            assert any(equal_codes(a, r, h) for h in found)


@pytest.mark.parametrize("name", CONTRACTING)
def test_nucleus_minimal(name):
    """Each non-trivial member is a restriction of some member (no removable element)."""
    a = build(name).automaton
    found = members(nucleus(a))
    for h in found:
        if h == ():
            continue
        hit = any(
            equal_codes(a, restrict(GroupWord(a, g), [x]).codes, h)
            for g in found for x in range(a.alphabet_size)
        )
        assert hit


@pytest.mark.parametrize("name", CONTRACTING)
def test_nucleus_pair_products_land_inside(name):
    a = build(name).automaton
    report = nucleus(a)
    found = members(report)
    for g in found:
        for h in found:
            depth = restriction_depth(GroupWord(a, g + h), report.nucleus)
            assert isinstance(depth, int)
            for w in words(a.alphabet_size, depth + 1):
                r = restrict(GroupWord(a, g + h), w).codes
                assert any(equal_codes(a, r, m) for m in found)


@pytest.mark.parametrize("name", CONTRACTING)
def test_nucleus_idempotent(name):
    report = nucleus(build(name).automaton)
    nuclear = report.nuclear_automaton
    again = nucleus(nuclear)
    assert again.names() == report.names()
    assert is_nuclear(nuclear)
    assert nuclear.states == tuple(report.names())


def test_nucleus_rejects_non_invertible():
    a = Automaton(2, ("q",), ((0,), (0,)), ((0,), (0,)))
    with pytest.raises(ValueError):
        nucleus(a)


def test_report_json():
    doc = nucleus(build("odometer").automaton).to_json()
    assert doc["schema"] == "ssa-report/1"
    assert doc["status"] == "contracting"
    assert doc["nucleus"] == ["ε", "τ", "τ^-1"]


# nuclearity ------------------------------------------------------------------

def test_is_nuclear_examples():
    assert is_nuclear(build("odometer").nuclear_automaton)
    assert not is_nuclear(build("odometer").automaton)
    assert not is_nuclear(build("lamplighter").automaton)
    assert not is_nuclear(build("bs13").automaton)


@pytest.mark.parametrize("name", NAMES)
def test_nuclear_implies_tau_onto(name):
    entry = build(name)
    for a in filter(None, [entry.automaton, entry.nuclear_automaton]):
        if is_nuclear(a):
            assert check_tau_onto(a)


def test_tau_onto():
    assert check_tau_onto(build("basilica").nuclear_automaton)
    assert check_tau_onto(build("odometer").nuclear_automaton)
    unreachable = Automaton(2, ("ε", "x"), ((0, 1), (1, 0)), ((0, 0), (0, 0)), 0)
    assert not check_tau_onto(unreachable)


# smoothness and expansion rules ---------------------------------------------

def test_smoothness_verdicts():
    assert is_smooth(build("odometer").nuclear_automaton)
    assert not is_smooth(build("nonsmooth3").automaton)
    assert not is_smooth(build("nonsmooth3b").automaton)
    assert not is_smooth(build("nonsmooth3b").nuclear_automaton)


def test_odometer_letter_graph():
    a = build("odometer").nuclear_automaton
    graph = identity_letter_graph(a)
    labels = {(x, y, a.states[q]) for x, edges in graph.items() for y, q in edges}
    assert (0, 1, "τ") in labels and (1, 0, "τ^-1") in labels


@pytest.mark.parametrize("name", NAMES)
def test_expansion_rule_iff_smooth(name):
    entry = build(name)
    for a in filter(None, [entry.automaton, entry.nuclear_automaton]):
        assert (expansion_rule(a) is not None) == is_smooth(a)


def test_expansion_rule_odometer():
    a = build("odometer").nuclear_automaton
    rule = expansion_rule(a)
    t = a.index("τ")
    assert rule.entries[t] == (1, t)
    assert [a.states[q] for q in rule.paths[0, 1]] == ["τ"]
    assert all(rule.paths[x, x] == () for x in range(2))


@pytest.mark.parametrize("name", CONTRACTING)
def test_expansion_rule_equations(name):
    a = build(name).nuclear_automaton
    rule = expansion_rule(a)
    if rule is None:
        return
    a = rule.automaton
    for q, (e, v) in rule.entries.items():
        assert a.tau[e][v] == q
    for (x, y), path in rule.paths.items():
        out, rest = act(a, path, (x,))
        assert out == (y,)
        assert all(r in a.trivial_states for r in rest)


@pytest.mark.parametrize("name", ["odometer", "basilica", "nonsmooth3"])
def test_connecting_words(name):
    rule = expansion_rule(build(name).nuclear_automaton)
    assert rule is not None
    a = rule.automaton
    k = a.alphabet_size
    for n in range(1, 4 if k == 2 else 3):
        for src in words(k, n):
            for dst in words(k, n):
                for states in [(), (a.states[1],)]:
                    word = connecting_word(rule, src, dst, states)
                    out, rest = act(a, word, src)
                    assert out == dst
                    # restriction along src: the given states padded with identity states
                    assert tuple(q for q in rest if q not in a.trivial_states) == tuple(
                        a.index(s) for s in states if a.index(s) not in a.trivial_states
                    )


def test_open_set():
    assert open_set_condition(build("basilica").nuclear_automaton)
    assert open_set_condition(build("odometer").nuclear_automaton)
    assert open_set_condition(build("nonsmooth3b").nuclear_automaton)
    # the published squares show tau^{+-1} only restricting to tau^{+-1}
    assert not open_set_condition(build("nonsmooth3").nuclear_automaton)
    looping = Automaton(2, ("x",), ((1,), (0,)), ((0,), (0,)))
    assert not open_set_condition(looping)


# recurrence ------------------------------------------------------------------

@pytest.mark.parametrize("name", ["nonsmooth3", "nonsmooth3b", "basilica", "odometer"])
def test_recurrent(name):
    report = recurrence(build(name).automaton)
    assert report.status is RecurrenceStatus.VERIFIED
    a = build(name).automaton
    for entry in report.per_letter:
        for state, witness in entry.found.items():
            assert equals(witness, GroupWord.parse(a, state))


def test_nonrecurrent_unknown():
    a = build("nonrecurrent3").automaton
    report = recurrence(a, search_len=8)
    assert report.status is RecurrenceStatus.UNKNOWN
    assert report.search_len == 8
    assert any(entry.found["τ"] is None for entry in report.per_letter)
    t3 = GroupWord.parse(a, "τ^3")
    assert equals(restrict(t3, [0]), GroupWord.parse(a, "τ^2"))
    # the stabilizer of 0 is generated by tau^3, which restricts to tau^2
    first = report.per_letter[0]
    assert any(equals(r, GroupWord.parse(a, "τ^2")) or equals(r, GroupWord.parse(a, "τ^-2"))
               for r in first.restrictions)


def test_recurrence_json():
    doc = recurrence(build("basilica").automaton).to_json()
    assert doc["status"] == "verified" and doc["schema"] == "ssa-report/1"
    assert len(doc["letters"]) == 2


@pytest.mark.parametrize("name", NAMES)
def test_recurrent_and_transitive_lemma(name):
    a = build(name).automaton
    if recurrence(a).verified and spherical_transitivity(a, 1)[0]:
        assert all(spherical_transitivity(a, 5 if a.alphabet_size == 2 else 4))


# transitivity ----------------------------------------------------------------

def test_transitivity():
    assert spherical_transitivity(build("odometer").automaton, 8) == [True] * 8
    assert spherical_transitivity(build("basilica").automaton, 6) == [True] * 6
    fixing = Automaton(2, ("x",), ((0,), (1,)), ((0,), (0,)))
    assert spherical_transitivity(fixing, 2) == [False, False]


def test_odometer_subgroup_of_basilica_transitive():
    a = build("basilica").automaton
    g = GroupWord.parse(a, "a^-1·b")
    for n in range(1, 7):
        orbit = {tuple([0] * n)}
        x = tuple([0] * n)
        for _ in range(2 ** n):
            x = g(x)
            orbit.add(x)
        assert len(orbit) == 2 ** n


# restriction depth -----------------------------------------------------------

def test_restriction_depth():
    od = build("odometer")
    assert restriction_depth(GroupWord.parse(od.automaton, "τ^2"), od.nucleus_report.nucleus) == 1
    for g in od.nucleus_report.nucleus:
        assert restriction_depth(g, od.nucleus_report.nucleus) == 0
    bas = build("basilica")
    depth = restriction_depth(GroupWord.parse(bas.automaton, "a·b"), bas.nucleus_report.nucleus)
    assert isinstance(depth, int) and depth <= 3


def test_restriction_depth_brute_force():
    bas = build("basilica")
    a = bas.automaton
    nuc = [g.codes for g in bas.nucleus_report.nucleus]
    g = GroupWord.parse(a, "a·b")
    depth = restriction_depth(g, bas.nucleus_report.nucleus)
    inside = lambda w: any(equal_codes(a, restrict(g, w).codes, h) for h in nuc)  # noqa: E731
    assert all(inside(w) for w in words(2, depth))
    assert depth == 0 or not all(inside(w) for w in words(2, depth - 1))
    assert all(inside(w) for w in words(2, 4))


def test_restriction_depth_unbounded():
    lamp = build("lamplighter").automaton
    assert isinstance(restriction_depth(GroupWord.parse(lamp, "a"), [], max_depth=5), Unbounded)


# minimized quotients carry the same nuclei -----------------------------------

def test_nuclear_automaton_is_minimal():
    for name in CONTRACTING:
        a = build(name).nuclear_automaton
        quotient, smap = minimize(a)
        assert quotient.num_states == a.num_states


def test_reduce_drops_trivial_states():
    a = build("basilica").automaton
    e = a.index("ε")
    assert reduce_codes(a, (2 * e, 2 * a.index("a"), 2 * a.index("a") + 1)) == ()
    assert table_act(a, (2 * e,), (1, 0)) == (1, 0)


def test_identity_helpers():
    a = identity_automaton(3)
    assert is_nuclear(a) and is_smooth(a) is False
