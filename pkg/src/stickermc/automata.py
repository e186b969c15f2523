"""Formula automata for the five obligation kinds, relabelling, and
acceptance of words and of model runs."""

from __future__ import annotations

from collections import defaultdict
from typing import Mapping, Sequence

from .core import FormulaFsa, Letter, RunPath, SystemModel, emittable_letters, letter_for
from .frontend import LtlObligation, Obligation


class _Builder:
    def __init__(self, states):
        self.states = tuple(states)
        self.delta = defaultdict(set)
        self.alphabet = set()

    def add(self, src, literals, dsts):
        # unsatisfiable conditions (e.g. p & !p) can never be emitted; drop them
        letter = letter_for(*literals)
        if letter is None:
            return
        self.alphabet.add(letter)
        self.delta[(src, letter)].update(dsts)

    def build(self, initial, accepting) -> FormulaFsa:
        transitions = {k: frozenset(v) for k, v in self.delta.items()}
        return FormulaFsa(frozenset(self.alphabet), self.states, transitions, initial, frozenset(accepting))


def build_formula_fsa(g: LtlObligation) -> FormulaFsa:
    """Automaton over finite emission words for obligation ``g``.

    Letters are conjunctions of the obligation's literals; a negated atom
    just yields a different letter, the structure is unchanged.
    """
    p, q = g.p, g.q
    if g.kind is Obligation.UNTIL:
        b = _Builder(["a0", "a1"])
        b.add("a0", [p], ["a0"])
        b.add("a0", [q], ["a1"])
        # once q has been seen the suffix is unconstrained
        b.add("a1", [p], ["a1"])
        b.add("a1", [p.negate()], ["a1"])
        return b.build("a0", ["a1"])
    if g.kind is Obligation.PHI1:
        # p, q here are already the negated construct atoms: s = q, u = p & q
        b = _Builder(["s0", "s1", "s2"])
        b.add("s0", [q], ["s0", "s2"])
        b.add("s0", [p, q], ["s1"])
        b.add("s1", [q], ["s1"])
        b.add("s1", [q.negate()], ["s2"])
        return b.build("s0", ["s2"])
    if g.kind is Obligation.FINALLY:
        b = _Builder(["f0", "f1"])
        b.add("f0", [p.negate()], ["f0"])
        b.add("f0", [p], ["f1"])
        b.add("f1", [p], ["f1"])
        b.add("f1", [p.negate()], ["f1"])
        return b.build("f0", ["f1"])
    if g.kind is Obligation.GLOBALLY:
        b = _Builder(["g0"])
        b.add("g0", [p], ["g0"])
        return b.build("g0", ["g0"])
    if g.kind is Obligation.NEXT:
        b = _Builder(["x0", "x1", "x2"])
        for lit in (p, p.negate()):
            b.add("x0", [lit], ["x1"])
            b.add("x2", [lit], ["x2"])
        b.add("x1", [p], ["x2"])
        return b.build("x0", ["x2"])
    raise ValueError(f"unknown obligation {g.kind}")


def relabel(a: FormulaFsa, substitution: Mapping[Letter, Letter]) -> FormulaFsa:
    """Rename transition letters; letters not in ``substitution`` are kept."""
    unknown = set(substitution) - set(a.alphabet)
    if unknown:
        raise ValueError(f"substitution keys outside alphabet: {sorted(l.name for l in unknown)}")
    mapping = {letter: substitution.get(letter, letter) for letter in a.alphabet}
    images = list(mapping.values())
    if len(set(images)) != len(images) or len({l.name for l in images}) != len(images):
        raise ValueError("substitution images collide")
    transitions = {(src, mapping[letter]): dsts for (src, letter), dsts in a.transitions.items()}
    return FormulaFsa(frozenset(images), a.states, transitions, a.initial, a.accepting)


def fsa_accepts(a: FormulaFsa, word: Sequence[Letter]) -> bool:
    current = frozenset({a.initial})
    for letter in word:
        if letter not in a.alphabet:
            raise ValueError(f"letter {letter} is not in the automaton's alphabet")
        current = a.step(current, letter)
        if not current:
            return False
    return bool(current & a.accepting)


def accepts_valuations(a: FormulaFsa, valuations: Sequence) -> bool:
    """True iff some emission word of the valuation sequence is accepted.

    A forward sweep over (position, automaton state); never enumerates words.
    """
    current = frozenset({a.initial})
    for v in valuations:
        nxt = set()
        for letter in emittable_letters(v, a.alphabet):
            nxt |= a.step(current, letter)
        current = frozenset(nxt)
        if not current:
            return False
    return bool(current & a.accepting)


def accepts_run(a: FormulaFsa, path: RunPath, model: SystemModel) -> bool:
    return accepts_valuations(a, path.valuations(model))
