"""Classical finite-trace semantics, used as the ground truth for the DNA layer.

Conventions: Until is strong (q must occur), Next on a one-state trace is false.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .core import RunPath, SystemModel
from .frontend import (CtlConstruct, LtlObligation, Obligation, Quantifier, Reduction,
                       classify, path_obligation)


@dataclass(frozen=True)
class Verdict:
    answer: bool
    construct: CtlConstruct
    reduction: Reduction | None
    bound: int | None
    per_run: tuple = field(default_factory=tuple)
    witness: RunPath | None = None
    method: str = "dna"

    @property
    def runs_checked(self) -> int:
        return len(self.per_run)

    @property
    def answer_text(self) -> str:
        return "yes" if self.answer else "no"


def word_satisfies(g: LtlObligation, vs: Sequence) -> bool:
    if not vs:
        raise ValueError("obligations are evaluated on non-empty traces")
    p, q = g.p, g.q
    if g.kind is Obligation.UNTIL:
        for v in vs:
            if q.holds(v):
                return True
            if not p.holds(v):
                return False
        return False
    if g.kind is Obligation.PHI1:
        # the atoms stored here are the negations of the Until atoms
        return not word_satisfies(LtlObligation(Obligation.UNTIL, p.negate(), q.negate()), vs)
    if g.kind is Obligation.FINALLY:
        return any(p.holds(v) for v in vs)
    if g.kind is Obligation.GLOBALLY:
        return all(p.holds(v) for v in vs)
    if g.kind is Obligation.NEXT:
        return len(vs) >= 2 and p.holds(vs[1])
    raise ValueError(f"unknown obligation {g.kind}")


def oracle_check(model: SystemModel, c: CtlConstruct, runs: Sequence[RunPath]) -> Verdict:
    """Brute-force verdict over an explicit run set."""
    g = path_obligation(c)
    model = model.with_propositions(g.propositions())
    per_run = tuple((run, word_satisfies(g, run.valuations(model))) for run in runs)
    if classify(c) is Quantifier.UNIVERSAL:
        failing = [run for run, ok in per_run if not ok]
        return Verdict(not failing, c, None, None, per_run, failing[0] if failing else None, "oracle")
    holding = [run for run, ok in per_run if ok]
    return Verdict(bool(holding), c, None, None, per_run, holding[0] if holding else None, "oracle")
