"""End-to-end checking: bounded runs, the per-run DNA decision, and the
three dispatch algorithms for the eight basic CTL constructs."""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .automata import accepts_run, build_formula_fsa
from .core import FormulaFsa, RunPath, SystemModel, emittable_letters
from .encoding import REFERENCE_TABLE, ClassIILibrary, CodeTable, encode_formula_fsa, generate_code_table
from .frontend import CtlConstruct, LtlObligation, Quantifier, classify, reduce
from .hybridization import IncrementalTiler
from .oracle import Verdict, oracle_check

DEFAULT_RUN_CAP = 10**6
_INT64_MAX = 2**63 - 1


class RunCapWarning(UserWarning):
    pass


def compute_bound(model: SystemModel) -> int:
    """|V| * 2^(|V|-1) + |E|, the number of states a run needs to be checked to."""
    v, e = len(model.states), len(model.edges)
    if v == 0:
        raise ValueError("model has no states")
    bound = v * 2 ** (v - 1) + e
    if bound > _INT64_MAX:
        raise OverflowError(f"bound for {v} states does not fit a 64-bit integer")
    return bound


def count_runs(model: SystemModel, L: int) -> int:
    """Size of the bounded run set, without enumerating it."""
    if L < 1:
        raise ValueError("L must be at least 1")
    # ways[s] = runs completed from s with `left` states still allowed (s included)
    ways = {s: 1 for s in model.states}
    for _ in range(L - 1):
        ways = {s: (sum(ways[t] for t in model.successors(s)) or 1) for s in model.states}
    return ways[model.initial]


class RunList(list):
    """A list of RunPath with an optional truncation warning attached."""

    warning: str | None = None


def enumerate_runs(model: SystemModel, L: int, cap: int = DEFAULT_RUN_CAP) -> RunList:
    """Maximal runs of at most ``L`` states, plus runs truncated at ``L``.

    Depth first, successors in ascending order.  When more than ``cap`` runs
    exist only the first ``cap`` are returned and a warning is attached.
    """
    if L < 1:
        raise ValueError("L must be at least 1")
    runs = RunList()
    stack = [(model.initial,)]
    while stack:
        path = stack.pop()
        succ = model.successors(path[-1])
        if not succ or len(path) == L:
            if len(runs) == cap:
                runs.warning = f"more than {cap} runs; only the first {cap} were checked"
                warnings.warn(runs.warning, RunCapWarning, stacklevel=2)
                break
            runs.append(RunPath(path))
            continue
        stack.extend(path + (t,) for t in reversed(succ))
    return runs


def _reference_covers(a: FormulaFsa) -> bool:
    names = set(REFERENCE_TABLE.letter_codes)
    return len(a.states) <= REFERENCE_TABLE.m and {l.name for l in a.alphabet} <= names


@lru_cache(maxsize=None)
def default_code_table(a: FormulaFsa) -> CodeTable:
    """The reference table when it covers ``a``, else a seeded generated one."""
    if _reference_covers(a):
        return REFERENCE_TABLE.truncated(len(a.states))
    return generate_code_table(a.alphabet, len(a.states), seed=0)


@dataclass
class DnaPipeline:
    """Formula automaton, code table, sticker library and tiler for one obligation."""

    obligation: LtlObligation
    fsa: FormulaFsa
    table: CodeTable
    library: ClassIILibrary
    tiler: IncrementalTiler

    def emissions(self, model: SystemModel, run: RunPath) -> list:
        return [
            [l.name for l in emittable_letters(v, self.fsa.alphabet)]
            for v in run.valuations(model)
        ]


_PIPELINES: dict = {}


def pipeline(g: LtlObligation, table: CodeTable | None = None) -> DnaPipeline:
    key = (g, table)
    if key not in _PIPELINES:
        a = build_formula_fsa(g)
        ct = table.truncated(len(a.states)) if table is not None else default_code_table(a)
        if ct.m != len(a.states):
            raise ValueError(f"code table has m={ct.m}, automaton has {len(a.states)} states")
        lib = encode_formula_fsa(a, ct)
        _PIPELINES[key] = DnaPipeline(g, a, ct, lib, IncrementalTiler(lib, ct))
    return _PIPELINES[key]


@dataclass(frozen=True)
class DnaOutcome:
    """What the TL-MC-DNA step yields before any existential inversion."""

    answer: bool
    per_run: tuple
    warning: str | None = None


def _decide_runs(model: SystemModel, pipe: DnaPipeline, runs: Sequence[RunPath]) -> tuple:
    tiler = pipe.tiler
    letters = {s: [l.name for l in emittable_letters(model.valuation(s), pipe.fsa.alphabet)]
               for s in model.states}
    # runs from a DFS share prefixes; carry sweep states along the shared prefix
    out = []
    prev: tuple = ()
    sweeps = [tiler.start]
    for run in runs:
        common = 0
        for a, b in zip(prev, run.states):
            if a != b:
                break
            common += 1
        del sweeps[common + 1:]
        for s in run.states[common:]:
            sweeps.append(tiler.step(sweeps[-1], letters[s]))
        out.append((run, tiler.accepts(sweeps[-1])))
        prev = run.states
    return tuple(out)


def tl_mc_dna(model: SystemModel, g: LtlObligation, L: int, table: CodeTable | None = None,
              runs: Sequence[RunPath] | None = None, cap: int = DEFAULT_RUN_CAP) -> DnaOutcome:
    """Yes iff every bounded run has an emission word whose strand tiles completely."""
    model = model.with_propositions(g.propositions())
    pipe = pipeline(g, table)
    if runs is None:
        runs = enumerate_runs(model, L, cap)
    per_run = _decide_runs(model, pipe, runs)
    return DnaOutcome(all(ok for _, ok in per_run), per_run, getattr(runs, "warning", None))


def check_path(model: SystemModel, path: RunPath, g: LtlObligation, table: CodeTable | None = None) -> bool:
    """DNA decision for one explicit run."""
    model = model.with_propositions(g.propositions())
    path = RunPath.of(model, path.states)
    pipe = pipeline(g, table)
    return pipe.tiler.run(pipe.emissions(model, path))


@dataclass(frozen=True)
class CtlVerdict(Verdict):
    warning: str | None = None


def _verdict(c, outcome: DnaOutcome, negate: bool, L: int) -> CtlVerdict:
    answer = outcome.answer != negate
    witness = None
    if not outcome.answer:
        # universal "no" or existential "yes": the first rejected run
        witness = next(run for run, ok in outcome.per_run if not ok)
    return CtlVerdict(answer, c, reduce(c), L, outcome.per_run, witness, "dna", outcome.warning)


def check_universal(model: SystemModel, c: CtlConstruct, L: int, table=None, cap=DEFAULT_RUN_CAP,
                    runs=None) -> CtlVerdict:
    if classify(c) is not Quantifier.UNIVERSAL:
        raise ValueError(f"{c} is not a universal construct")
    red = reduce(c)
    return _verdict(c, tl_mc_dna(model, red.obligation, L, table, runs, cap), False, L)


def check_existential(model: SystemModel, c: CtlConstruct, L: int, table=None, cap=DEFAULT_RUN_CAP,
                      runs=None) -> CtlVerdict:
    """Check the dual universal obligation on negated atoms, then invert."""
    if classify(c) is not Quantifier.EXISTENTIAL:
        raise ValueError(f"{c} is not an existential construct")
    red = reduce(c)
    return _verdict(c, tl_mc_dna(model, red.obligation, L, table, runs, cap), True, L)


def check_ctl(model: SystemModel, c: CtlConstruct, L: int | None = None, table=None,
              cap=DEFAULT_RUN_CAP, runs=None) -> CtlVerdict:
    if L is None:
        L = compute_bound(model)
    if classify(c) is Quantifier.EXISTENTIAL:
        return check_existential(model, c, L, table, cap, runs)
    return check_universal(model, c, L, table, cap, runs)


def m1_path(k: int) -> RunPath:
    """Path (0,1)^k,2 through the reference model."""
    if k < 1:
        raise ValueError("k must be at least 1")
    return RunPath((0, 1) * k + (2,))


@dataclass(frozen=True)
class Agreement:
    construct: CtlConstruct
    dna: CtlVerdict
    oracle: Verdict
    first_difference: tuple | None = None  # (run, dna says path formula holds, oracle says)

    @property
    def agree(self) -> bool:
        return self.dna.answer == self.oracle.answer and self.first_difference is None

    @property
    def runs_checked(self) -> int:
        return self.dna.runs_checked


def cross_validate(model: SystemModel, c: CtlConstruct, L: int | None = None, table=None,
                   cap=DEFAULT_RUN_CAP) -> Agreement:
    """Run the DNA layer and the oracle over the same run set and compare."""
    if L is None:
        L = compute_bound(model)
    runs = enumerate_runs(model, L, cap)
    dna = check_ctl(model, c, L, table, cap, runs)
    oracle = oracle_check(model, c, runs)
    negate = classify(c) is Quantifier.EXISTENTIAL
    first = None
    for (run, accepted), (_, holds) in zip(dna.per_run, oracle.per_run):
        # for existential constructs a run accepted by the dual obligation violates the path formula
        dna_holds = accepted != negate
        if dna_holds != holds:
            first = (run, dna_holds, holds)
            break
    return Agreement(c, dna, oracle, first)


def accepts_runs(model: SystemModel, g: LtlObligation, runs: Sequence[RunPath]) -> list:
    """Automaton-level per-run acceptance, for layer comparisons."""
    model = model.with_propositions(g.propositions())
    a = build_formula_fsa(g)
    return [accepts_run(a, run, model) for run in runs]
