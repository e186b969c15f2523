"""Shared domain types: literals, letters, system models, formula automata,
runs and DNA strands.

All types are immutable once built.  Operations here are pure.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping

Valuation = Mapping[str, bool]


@dataclass(frozen=True, order=True)
class Literal:
    """An atomic proposition or its negation."""

    name: str
    negated: bool = False

    def __post_init__(self):
        if not self.name:
            raise ValueError("proposition name must be non-empty")

    def negate(self) -> "Literal":
        return Literal(self.name, not self.negated)

    def holds(self, v: Valuation) -> bool:
        return v[self.name] != self.negated

    def __str__(self):
        return ("!" if self.negated else "") + self.name


# Letter names of the reference code table, keyed by condition over p and q.
_REFERENCE_LETTER_NAMES = {
    frozenset({Literal("p")}): "p",
    frozenset({Literal("q")}): "q",
    frozenset({Literal("p", True)}): "r",
    frozenset({Literal("q", True)}): "s",
    frozenset({Literal("p", True), Literal("q", True)}): "u",
}


@dataclass(frozen=True)
class Letter:
    """A named alphabet symbol whose condition is a conjunction of literals."""

    name: str
    condition: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if not self.name:
            raise ValueError("letter name must be non-empty")
        if not is_satisfiable(self.condition):
            raise ValueError(f"letter {self.name!r} has an unsatisfiable condition")

    def holds(self, v: Valuation) -> bool:
        missing = [lit.name for lit in self.condition if lit.name not in v]
        if missing:
            raise KeyError(f"valuation has no value for {', '.join(sorted(missing))}")
        return all(lit.holds(v) for lit in self.condition)

    def propositions(self) -> frozenset:
        return frozenset(lit.name for lit in self.condition)

    def __str__(self):
        return self.name


def is_satisfiable(literals: Iterable[Literal]) -> bool:
    seen = {}
    for lit in literals:
        if seen.setdefault(lit.name, lit.negated) != lit.negated:
            return False
    return True


def letter_name(condition: frozenset) -> str:
    """Canonical name for a condition.

    Conditions over ``p``/``q`` that appear in the reference table get its
    single-character names (p, q, r, s, u); anything else is rendered as
    ``lit&lit``.
    """
    known = _REFERENCE_LETTER_NAMES.get(condition)
    if known is not None:
        return known
    return "&".join(str(lit) for lit in sorted(condition))


def letter_for(*literals: Literal) -> Letter | None:
    """Letter for the conjunction of ``literals``, or None if unsatisfiable."""
    cond = frozenset(literals)
    if not is_satisfiable(cond):
        return None
    return Letter(letter_name(cond), cond)


def emittable_letters(v: Valuation, alphabet: Iterable[Letter]) -> frozenset:
    """Letters of ``alphabet`` whose condition holds under ``v``."""
    return frozenset(letter for letter in alphabet if letter.holds(v))


def state_sort_key(state):
    # ints before strings, so numeric ids sort numerically
    return (0, state, "") if isinstance(state, int) else (1, 0, str(state))


@dataclass(frozen=True, eq=True)
class SystemModel:
    """Labeled FSA of the system under check."""

    name: str
    states: tuple
    initial: object
    edges: frozenset
    labeling: Mapping
    propositions: frozenset = frozenset()

    def __hash__(self):
        return hash((self.name, self.states, self.initial, self.edges))

    def successors(self, state) -> list:
        return sorted((dst for src, dst in self.edges if src == state), key=state_sort_key)

    def valuation(self, state) -> Valuation:
        return self.labeling[state]

    def with_propositions(self, names: Iterable[str]) -> "SystemModel":
        """Closed-world extension: new propositions are false everywhere."""
        extra = frozenset(names) - self.propositions
        if not extra:
            return self
        labeling = {
            s: {**dict(v), **{n: False for n in extra}} for s, v in self.labeling.items()
        }
        return SystemModel(
            self.name, self.states, self.initial, self.edges, labeling,
            self.propositions | extra,
        )


def make_model(name, states, initial, edges, labeling, propositions=None) -> SystemModel:
    """Build a model; valuations are completed with False for missing propositions."""
    states = tuple(sorted(states, key=state_sort_key))
    props = set(propositions or ())
    for v in labeling.values():
        props.update(v)
    props = frozenset(props)
    full = {s: {p: bool(v.get(p, False)) for p in props} for s, v in labeling.items()}
    return SystemModel(name, states, initial, frozenset(map(tuple, edges)), full, props)


def validate_model(model: SystemModel) -> list[str]:
    """Every violated model invariant, as text; empty iff well-formed."""
    problems = []
    declared = set(model.states)
    if len(declared) != len(model.states):
        dups = sorted({s for s in model.states if model.states.count(s) > 1}, key=state_sort_key)
        problems.extend(f"duplicate state {s}" for s in dups)
    if model.initial not in declared:
        problems.append(f"initial state {model.initial} is not declared")
    for src, dst in sorted(model.edges, key=lambda e: (state_sort_key(e[0]), state_sort_key(e[1]))):
        for end in (src, dst):
            if end not in declared:
                problems.append(f"edge {src}->{dst} uses undeclared state {end}")
    for s in model.states:
        if s not in model.labeling:
            problems.append(f"state {s} has no label")
            continue
        missing = sorted(model.propositions - set(model.labeling[s]))
        if missing:
            problems.append(f"label of state {s} omits {', '.join(missing)}")
    for s in model.labeling:
        if s not in declared:
            problems.append(f"label for undeclared state {s}")
    return problems


@dataclass(frozen=True)
class RunPath:
    """A finite run through a system model, as its state sequence."""

    states: tuple

    @classmethod
    def of(cls, model: SystemModel, states: Iterable) -> "RunPath":
        states = tuple(states)
        if not states:
            raise ValueError("a run needs at least one state")
        if states[0] != model.initial:
            raise ValueError(f"run starts at {states[0]}, not the initial state {model.initial}")
        for a, b in zip(states, states[1:]):
            if (a, b) not in model.edges:
                raise ValueError(f"{a}->{b} is not an edge of {model.name}")
        return cls(states)

    def __len__(self):
        return len(self.states)

    def valuations(self, model: SystemModel) -> list:
        return [model.valuation(s) for s in self.states]

    def __str__(self):
        return ",".join(map(str, self.states))


@dataclass(frozen=True)
class FormulaFsa:
    """Possibly nondeterministic FSA over named letters.

    ``transitions`` maps ``(state, letter)`` to a frozenset of successors.
    State order in ``states`` fixes the contiguous state index.
    """

    alphabet: frozenset
    states: tuple
    transitions: Mapping
    initial: str
    accepting: frozenset

    def __post_init__(self):
        if self.initial not in self.states:
            raise ValueError(f"initial state {self.initial} not in states")
        if not self.accepting <= set(self.states):
            raise ValueError("accepting states must be a subset of states")
        if len(set(self.states)) != len(self.states):
            raise ValueError("duplicate FSA state")
        names = [a.name for a in self.alphabet]
        if len(set(names)) != len(names):
            raise ValueError("letters in one alphabet need distinct names")
        for (src, letter), dsts in self.transitions.items():
            if src not in self.states or not set(dsts) <= set(self.states):
                raise ValueError(f"transition on {letter} leaves the state set")
            if letter not in self.alphabet:
                raise ValueError(f"transition letter {letter} not in alphabet")

    def __hash__(self):
        return hash((self.alphabet, self.states, self.initial, self.accepting))

    @property
    def state_index(self) -> dict:
        return {s: i for i, s in enumerate(self.states)}

    def step(self, current: Iterable[str], letter: Letter) -> frozenset:
        out = set()
        for q in current:
            out |= self.transitions.get((q, letter), frozenset())
        return frozenset(out)

    def edges(self) -> list:
        """All (source, letter, target) triples, ordered by (src index, dst index, letter)."""
        idx = self.state_index
        triples = [
            (src, letter, dst)
            for (src, letter), dsts in self.transitions.items()
            for dst in dsts
        ]
        return sorted(triples, key=lambda t: (idx[t[0]], idx[t[2]], t[1].name))

    def letter(self, name: str) -> Letter:
        for a in self.alphabet:
            if a.name == name:
                return a
        raise KeyError(name)


class Orientation(str, Enum):
    FIVE_TO_THREE = "5to3"
    THREE_TO_FIVE = "3to5"

    def flipped(self) -> "Orientation":
        if self is Orientation.FIVE_TO_THREE:
            return Orientation.THREE_TO_FIVE
        return Orientation.FIVE_TO_THREE


_BASES = frozenset("ACGT")


@dataclass(frozen=True)
class DnaStrand:
    """A single strand.

    ``bases`` is always stored 5'->3'; ``orientation`` records the direction
    the strand is conventionally written in (class-I strands 5'->3', class-II
    stickers 3'->5').
    """

    bases: str
    orientation: Orientation = Orientation.FIVE_TO_THREE
    label: str = ""

    def __post_init__(self):
        bad = set(self.bases) - _BASES
        if bad:
            raise ValueError(f"invalid bases {sorted(bad)} in strand {self.label!r}")

    def __len__(self):
        return len(self.bases)

    @property
    def written(self) -> str:
        """Bases in the written direction."""
        if self.orientation is Orientation.FIVE_TO_THREE:
            return self.bases
        return self.bases[::-1]

    def render(self) -> str:
        if self.orientation is Orientation.FIVE_TO_THREE:
            return f"5' {self.written} 3'"
        return f"3' {self.written} 5'"
