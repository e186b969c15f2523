import random

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from stickermc.automata import accepts_run, build_formula_fsa
from stickermc.checker import (RunCapWarning, check_ctl, check_existential, check_path, check_universal,
                               compute_bound, count_runs, cross_validate, enumerate_runs, m1_path,
                               tl_mc_dna)
from stickermc.core import RunPath, make_model
from stickermc.frontend import ALL_KINDS, Kind, LtlObligation, Obligation, parse_formula, reduce
from stickermc.oracle import word_satisfies

from .strategies import P, Q, construct, m1, models

PHI1 = reduce(parse_formula("E p U q")).obligation
M1 = m1()


def test_bound_examples():
    assert compute_bound(M1) == 15
    assert compute_bound(make_model("a", [0], 0, [], {0: {}})) == 1
    assert compute_bound(make_model("b", [0, 1], 0, [(0, 1), (1, 0)], {0: {}, 1: {}})) == 6


def test_bound_overflow():
    big = make_model("big", range(70), 0, [], {s: {} for s in range(70)})
    with pytest.raises(OverflowError):
        compute_bound(big)


def test_enumerate_small_bound():
    runs = enumerate_runs(M1, 3)
    assert {r.states for r in runs} == {(0, 1, 2), (0, 1, 0)}
    # depth first, ascending successors
    assert [r.states for r in runs] == [(0, 1, 0), (0, 1, 2)]


def test_enumerate_reference_bound():
    runs = [r.states for r in enumerate_runs(M1, 15)]
    assert (0, 1, 2) in runs and (0, 1, 0, 1, 2) in runs
    assert (0, 1) * 7 + (0,) in runs
    assert all(len(r) <= 15 for r in runs)
    assert len(runs) == len(set(runs)) == 8


def test_single_state_run():
    m = make_model("one", ["s"], "s", [], {"s": {"p": True}})
    assert [r.states for r in enumerate_runs(m, 5)] == [("s",)]


def test_run_cap_warns():
    with pytest.warns(RunCapWarning):
        runs = enumerate_runs(M1, 15, cap=3)
    assert len(runs) == 3 and runs.warning


@given(models(), st.integers(1, 6))
def test_count_matches_enumeration(m, L):
    assert count_runs(m, L) == len(enumerate_runs(m, L))


@pytest.mark.parametrize("g,expected", [
    (PHI1, True),
    (LtlObligation(Obligation.UNTIL, P, Q), False),
    (LtlObligation(Obligation.FINALLY, P), True),
])
def test_tl_mc_dna_examples(g, expected):
    out = tl_mc_dna(M1, g, 15)
    assert out.answer is expected
    assert len(out.per_run) == 8


REFERENCE = {"A p U q": False, "AF p": True, "AG p": False, "AX p": False,
             "E p U q": False, "EF p": True, "EG p": False, "EX p": False}


@pytest.mark.parametrize("text", sorted(REFERENCE))
def test_reference_verdicts(text):
    v = check_ctl(M1, parse_formula(text))
    assert v.answer is REFERENCE[text]
    assert v.bound == 15 and v.runs_checked == len(v.per_run) == 8
    # universal-no and existential-yes carry a witness
    needs = (text[0] == "A") != v.answer
    assert (v.witness is not None) == needs


def test_dispatch_guards():
    with pytest.raises(ValueError):
        check_universal(M1, parse_formula("EF p"), 15)
    with pytest.raises(ValueError):
        check_existential(M1, parse_formula("AF p"), 15)


def test_single_p_state():
    m = make_model("one", [0], 0, [], {0: {"p": True}}, {"p"})
    assert check_ctl(m, parse_formula("AG p")).answer
    assert not check_ctl(m, parse_formula("EG !p")).answer


def test_check_path():
    for k in (1, 2, 7, 15):
        assert check_path(M1, m1_path(k), PHI1)
    assert not check_path(M1, m1_path(1), LtlObligation(Obligation.UNTIL, P, Q))
    with pytest.raises(ValueError):
        check_path(M1, RunPath((0, 2)), PHI1)


@pytest.mark.parametrize("kind", ALL_KINDS)
def test_cross_validate_reference_model(kind):
    rep = cross_validate(M1, construct(kind))
    assert rep.agree and rep.first_difference is None
    assert rep.dna.answer == rep.oracle.answer


def _obligations():
    p, q = P, Q
    return [LtlObligation(Obligation.UNTIL, p, q), LtlObligation(Obligation.FINALLY, p),
            LtlObligation(Obligation.GLOBALLY, p), LtlObligation(Obligation.NEXT, p),
            LtlObligation(Obligation.FINALLY, p.negate()), LtlObligation(Obligation.GLOBALLY, p.negate()),
            LtlObligation(Obligation.NEXT, p.negate()), PHI1]


@settings(max_examples=60, deadline=None)
@given(models(), st.integers(1, 6))
def test_layer_equivalence(m, L):
    runs = enumerate_runs(m, L)
    for g in _obligations():
        a = build_formula_fsa(g)
        dna = [ok for _, ok in tl_mc_dna(m, g, L, runs=runs).per_run]
        assert dna == [accepts_run(a, r, m) for r in runs]
        if g.kind is not Obligation.PHI1:
            assert dna == [word_satisfies(g, r.valuations(m)) for r in runs]


@settings(max_examples=60, deadline=None)
@given(models())
def test_existential_is_negated_dual(m):
    L = compute_bound(m)
    assume(count_runs(m, L) <= 5000)
    pairs = [(Kind.EF, Kind.AG), (Kind.EG, Kind.AF), (Kind.EX, Kind.AX)]
    for e, a in pairs:
        assert check_ctl(m, construct(e), L).answer == (not check_ctl(m, construct(a, P.negate()), L).answer)
    assert check_ctl(m, construct(Kind.EU), L).answer == (not tl_mc_dna(m, PHI1, L).answer)


@settings(max_examples=40, deadline=None)
@given(models(), st.sampled_from(ALL_KINDS), st.randoms(use_true_random=False))
def test_verdict_independent_of_run_order(m, kind, rnd):
    runs = list(enumerate_runs(m, 5))
    shuffled = runs[:]
    rnd.shuffle(shuffled)
    c = construct(kind)
    assert check_ctl(m, c, 5, runs=runs).answer == check_ctl(m, c, 5, runs=shuffled).answer


def test_known_disagreement_classes():
    # a deadlocked initial state: its one run has no next state under either atom
    dead = make_model("dead", [0], 0, [], {0: {"p": True, "q": False}})
    rep = cross_validate(dead, parse_formula("EX p"))
    assert rep.dna.answer and not rep.oracle.answer
    # a run violating p U q that the reference automaton still rejects
    labels = {0: {"p": False, "q": False}, 1: {"p": False, "q": True}, 2: {"p": False, "q": False}}
    m = make_model("eu", [0, 1, 2], 0, [(0, 1), (1, 2)], labels)
    rep = cross_validate(m, parse_formula("E p U q"))
    assert rep.dna.answer and not rep.oracle.answer
    assert rep.first_difference[0] == RunPath((0, 1, 2))


def test_random_models_agree_outside_known_classes():
    rng = random.Random(5)
    checked = 0
    while checked < 150:
        n = rng.randint(1, 3)
        states = list(range(n))
        edges = [(a, b) for a in states for b in states if rng.random() < 0.4]
        labels = {s: {"p": rng.random() < .5, "q": rng.random() < .5} for s in states}
        m = make_model("r", states, 0, edges, labels)
        if not m.successors(0) or count_runs(m, compute_bound(m)) > 2000:
            continue
        checked += 1
        for kind in ALL_KINDS:
            if kind is Kind.EU:
                continue
            assert cross_validate(m, construct(kind)).agree, (m, kind)


@settings(max_examples=60, deadline=None)
@given(models(), st.sampled_from(ALL_KINDS))
def test_bound_stability(m, kind):
    L = compute_bound(m)
    assume(count_runs(m, 2 * L) <= 20000)
    c = construct(kind)
    assert check_ctl(m, c, L).answer == check_ctl(m, c, 2 * L).answer
