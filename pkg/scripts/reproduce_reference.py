"""Regenerate the reference-model golden data: sticker library, run strand,
ten-group experiment, per-path results and the eight verdicts."""

import argparse

from stickermc.automata import build_formula_fsa
from stickermc.checker import check_ctl, check_path, compute_bound, enumerate_runs, m1_path
from stickermc.cli import load_model
from stickermc.encoding import REFERENCE_TABLE, encode_formula_fsa, encode_run
from stickermc.frontend import parse_formula, reduce
from stickermc.hybridization import decode_tiling, enumerate_groups, tile

FORMULAS = ["A p U q", "AF p", "AG p", "AX p", "E p U q", "EF p", "EG p", "EX p"]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--model", default="m1")
    ap.add_argument("--max-k", type=int, default=15)
    args = ap.parse_args()

    model = load_model(args.model)
    phi1 = reduce(parse_formula("E p U q")).obligation
    a1 = build_formula_fsa(phi1)
    lib = encode_formula_fsa(a1, REFERENCE_TABLE)

    print("== sticker library for the Phi1 automaton (written 3'->5')")
    for s in lib.strands():
        print(f"  {s.label:8s} {s.written}")

    strand = encode_run(["s", "u", "q"], REFERENCE_TABLE)
    print(f"\n== class-I strand for [s,u,q]: {len(strand)} nt\n  {strand.bases}")
    t = tile(strand, lib)
    print("  cover:", " ".join(f"{n}[{i}-{j}]" for n, i, j in t.cover))
    print("  automaton states:", " ".join(decode_tiling(t, a1)))

    print("\n== groups of three transition stickers")
    for group, res in enumerate_groups(strand, lib, 3):
        print(f"  {','.join(group):18s} {'complete' if res.complete else 'incomplete'}")

    print(f"\n== per-path results, path (0,1)^k,2 for k = 1..{args.max_k}")
    print("  " + " ".join("yes" if check_path(model, m1_path(k), phi1) else "no" for k in range(1, args.max_k + 1)))

    L = compute_bound(model)
    print(f"\n== verdicts (bound {L}, {len(enumerate_runs(model, L))} runs)")
    for f in FORMULAS:
        print(f"  {f:8s} {check_ctl(model, parse_formula(f), L).answer_text}")


if __name__ == "__main__":
    main()
