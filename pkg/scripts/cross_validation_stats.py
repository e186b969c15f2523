"""Random-model statistics: DNA layer against the oracle, classified by cause,
plus bound stability and run-set growth."""

import argparse
import itertools
import random
from collections import Counter

from stickermc.automata import accepts_valuations, build_formula_fsa
from stickermc.checker import check_ctl, compute_bound, count_runs, cross_validate
from stickermc.core import Literal, make_model
from stickermc.frontend import ALL_KINDS, CtlConstruct, Kind, LtlObligation, Obligation
from stickermc.oracle import word_satisfies

P, Q = Literal("p"), Literal("q")
VALUATIONS = [{"p": a, "q": b} for a in (False, True) for b in (False, True)]


def construct(kind):
    return CtlConstruct(kind, P, Q if kind in (Kind.AU, Kind.EU) else None)


def random_model(rng, edge_p):
    n = rng.randint(1, 3)
    states = list(range(n))
    edges = [(a, b) for a in states for b in states if rng.random() < edge_p]
    labels = {s: dict(rng.choice(VALUATIONS)) for s in states}
    return make_model("r", states, 0, edges, labels, {"p", "q"})


def cause(m, kind, diff):
    if kind is Kind.EX and not m.successors(m.initial):
        return "EX, deadlocked initial state"
    if kind is Kind.EU:
        return "EU, Phi1 automaton rejects a run violating p U q"
    return f"{kind.value}, unexplained"


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--models", type=int, default=500)
    ap.add_argument("--edge-p", type=float, default=0.4)
    ap.add_argument("--max-runs", type=int, default=20000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = random.Random(args.seed)

    checked, skipped = 0, 0
    agree = Counter()
    causes = Counter()
    stable = unstable = stability_skipped = 0
    sizes = []
    while checked < args.models:
        m = random_model(rng, args.edge_p)
        L = compute_bound(m)
        n_runs = count_runs(m, L)
        sizes.append(n_runs)
        if n_runs > args.max_runs:
            skipped += 1
            continue
        checked += 1
        for kind in ALL_KINDS:
            rep = cross_validate(m, construct(kind), L)
            agree[kind.value, rep.agree] += 1
            if not rep.agree:
                causes[cause(m, kind, rep.first_difference)] += 1
        if count_runs(m, 2 * L) <= args.max_runs:
            for kind in ALL_KINDS:
                same = check_ctl(m, construct(kind), L).answer == check_ctl(m, construct(kind), 2 * L).answer
                stable += same
                unstable += not same
        else:
            stability_skipped += 1

    print(f"models checked {checked}, skipped {skipped} with more than {args.max_runs} runs at the bound")
    sizes.sort()
    print(f"bounded run-set size: median {sizes[len(sizes) // 2]}, max {sizes[-1]}")
    print("\nagreement per construct")
    for kind in ALL_KINDS:
        ok, bad = agree[kind.value, True], agree[kind.value, False]
        print(f"  {kind.value}  {ok:5d}/{ok + bad}")
    print("\ndisagreements by cause")
    for c, n in causes.most_common():
        print(f"  {n:5d}  {c}")
    print(f"\nbound stability (L vs 2L): {stable} same, {unstable} changed, "
          f"{stability_skipped} models skipped as too large at 2L")

    a1 = build_formula_fsa(LtlObligation(Obligation.PHI1, P.negate(), Q.negate()))
    until = LtlObligation(Obligation.UNTIL, P, Q)
    total = bad = 0
    for n in range(1, 7):
        for vs in itertools.product(VALUATIONS, repeat=n):
            total += 1
            bad += accepts_valuations(a1, vs) == word_satisfies(until, vs)
    print(f"\nPhi1 automaton vs not(p U q), all traces up to length 6: {bad}/{total} disagree")


if __name__ == "__main__":
    main()
