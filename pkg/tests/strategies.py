"""Hypothesis strategies and small fixtures shared by the test modules."""

from hypothesis import strategies as st

from stickermc.core import FormulaFsa, Letter, Literal, make_model
from stickermc.frontend import ALL_KINDS, CtlConstruct, Kind, parse_model
from stickermc.cli import _data

P, Q = Literal("p"), Literal("q")

VALUATIONS = [{"p": a, "q": b} for a in (False, True) for b in (False, True)]


def m1():
    return parse_model(_data("m1.lfsa"))


def construct(kind, p=P, q=Q):
    return CtlConstruct(kind, p, q if kind in (Kind.AU, Kind.EU) else None)


literals = st.builds(Literal, st.sampled_from(["p", "q"]), st.booleans())
valuations = st.sampled_from(VALUATIONS)
traces = st.lists(valuations, min_size=1, max_size=6)
kinds = st.sampled_from(ALL_KINDS)


@st.composite
def constructs(draw):
    kind = draw(kinds)
    return construct(kind, draw(literals), draw(literals))


@st.composite
def models(draw, max_states=3, edge_p=None):
    """Small models with total {p,q} valuations; state 0 is initial."""
    n = draw(st.integers(1, max_states))
    states = list(range(n))
    edges = [(a, b) for a in states for b in states if draw(st.booleans())]
    labels = {s: dict(draw(valuations)) for s in states}
    return make_model("h", states, 0, edges, labels, {"p", "q"})


LETTER_NAMES = ["a", "b", "c"]


@st.composite
def fsas(draw, max_states=4, max_letters=3):
    n = draw(st.integers(1, max_states))
    k = draw(st.integers(1, max_letters))
    states = tuple(f"q{i}" for i in range(n))
    letters = [Letter(name, frozenset({Literal(name)})) for name in LETTER_NAMES[:k]]
    transitions = {}
    for s in states:
        for a in letters:
            dsts = draw(st.frozensets(st.sampled_from(states), max_size=2))
            if dsts:
                transitions[(s, a)] = dsts
    accepting = draw(st.frozensets(st.sampled_from(states), min_size=1))
    return FormulaFsa(frozenset(letters), states, transitions, states[0], accepting)
