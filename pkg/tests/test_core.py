import pytest
from hypothesis import given
from hypothesis import strategies as st

from stickermc.core import (DnaStrand, FormulaFsa, Letter, Literal, Orientation, RunPath, SystemModel,
                            emittable_letters, is_satisfiable, letter_for, make_model,
                            validate_model)

from .strategies import m1, models, valuations


def test_literal_negation_and_holds():
    p = Literal("p")
    assert p.negate() == Literal("p", True)
    assert p.negate().negate() == p
    assert p.holds({"p": True}) and not p.negate().holds({"p": True})
    assert str(p.negate()) == "!p"


def test_reference_letter_names():
    P, Q = Literal("p"), Literal("q")
    assert letter_for(P).name == "p"
    assert letter_for(Q.negate()).name == "s"
    assert letter_for(P.negate(), Q.negate()).name == "u"
    assert letter_for(P, Q).name == "p&q"
    assert letter_for(P, P.negate()) is None


def test_unsatisfiable_letter_rejected():
    with pytest.raises(ValueError):
        Letter("x", frozenset({Literal("p"), Literal("p", True)}))
    assert not is_satisfiable([Literal("a"), Literal("a", True)])


def test_letter_needs_all_propositions():
    u = letter_for(Literal("p", True), Literal("q", True))
    with pytest.raises(KeyError):
        u.holds({"p": False})


@given(valuations)
def test_emittable_letters_match_conditions(v):
    alphabet = {letter_for(Literal("q", True)), letter_for(Literal("p", True), Literal("q", True)),
                letter_for(Literal("q"))}
    names = {l.name for l in emittable_letters(v, alphabet)}
    assert ("s" in names) == (not v["q"])
    assert ("u" in names) == (not v["p"] and not v["q"])
    assert ("q" in names) == v["q"]


def test_m1_is_well_formed():
    m = m1()
    assert validate_model(m) == []
    assert list(m.successors(1)) == [0, 2]
    assert m.valuation(0) == {"p": True, "q": False}


def test_validate_reports_each_problem():
    m = SystemModel("bad", (0, 1), 5, frozenset({(0, 7)}), {0: {"p": True}}, frozenset({"p", "q"}))
    problems = validate_model(m)
    assert any("initial state 5" in x for x in problems)
    assert any("undeclared state 7" in x for x in problems)
    assert any("state 1 has no label" in x for x in problems)
    assert any("omits q" in x for x in problems)


def test_make_model_completes_valuations():
    m = make_model("m", [0], 0, [], {0: {"p": True}}, {"p", "q"})
    assert m.valuation(0) == {"p": True, "q": False}


def test_closed_world_extension():
    m = make_model("m", [0], 0, [], {0: {"p": True}})
    ext = m.with_propositions({"q"})
    assert ext.valuation(0)["q"] is False
    assert m.with_propositions({"p"}) is m


def test_runpath_validation():
    m = m1()
    assert str(RunPath.of(m, [0, 1, 2])) == "0,1,2"
    with pytest.raises(ValueError):
        RunPath.of(m, [0, 2])
    with pytest.raises(ValueError):
        RunPath.of(m, [1, 0])
    with pytest.raises(ValueError):
        RunPath.of(m, [])


@given(models())
def test_random_models_validate(m):
    assert validate_model(m) == []
    for s in m.states:
        assert set(m.valuation(s)) == {"p", "q"}


def test_fsa_rejects_foreign_states():
    a = letter_for(Literal("p"))
    with pytest.raises(ValueError):
        FormulaFsa(frozenset({a}), ("x",), {("x", a): frozenset({"y"})}, "x", frozenset({"x"}))
    with pytest.raises(ValueError):
        FormulaFsa(frozenset({a}), ("x",), {}, "z", frozenset())


def test_strand_orientation_rendering():
    s = DnaStrand("GAAC", Orientation.THREE_TO_FIVE, "x")
    assert s.written == "CAAG"
    assert Orientation.FIVE_TO_THREE.flipped() is Orientation.THREE_TO_FIVE
    with pytest.raises(ValueError):
        DnaStrand("GAUC")


@given(st.text(alphabet="ACGT", max_size=30))
def test_strand_written_is_involutive(bases):
    s = DnaStrand(bases, Orientation.THREE_TO_FIVE)
    assert s.written[::-1] == bases
    assert len(s) == len(bases)
