"""Sticker-automaton DNA encoding.

A run word a1..an becomes the class-I strand::

    5' I1 X0..Xm C(a1) X0..Xm C(a2) ... C(an) X0..Xm I2 3'

and the formula automaton becomes class-II stickers, each the Watson-Crick
complement of the class-I stretch it is meant to cover:

    initial s_i          ~ I1 X0..Xi
    transition s_i-a->s_j ~ X(i+1)..Xm C(a) X0..Xj
    accepting s_j        ~ X(j+1)..Xm I2
"""

from __future__ import annotations

import itertools
import random
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .core import DnaStrand, FormulaFsa, Letter, Orientation

_PAIR = str.maketrans("ACGT", "TGCA")


def complement_bases(seq: str) -> str:
    return seq.translate(_PAIR)


def reverse_complement(seq: str) -> str:
    return seq.translate(_PAIR)[::-1]


def wc_complement(s: DnaStrand) -> DnaStrand:
    """Watson-Crick partner: antiparallel, so the written direction flips."""
    return DnaStrand(reverse_complement(s.bases), s.orientation.flipped(), s.label)


@dataclass(frozen=True)
class CodeTable:
    initiator: str
    terminator: str
    spacers: tuple
    letter_codes: Mapping[str, str]

    def __post_init__(self):
        frags = [self.initiator, self.terminator, *self.spacers, *self.letter_codes.values()]
        if any(not f or set(f) - set("ACGT") for f in frags):
            raise ValueError("codes must be non-empty strings over ACGT")
        if len(self.spacers) < 1:
            raise ValueError("need at least one spacer")
        if len({len(x) for x in self.spacers}) != 1:
            raise ValueError("spacers must share one length")
        if len({len(c) for c in self.letter_codes.values()}) > 1:
            raise ValueError("letter codes must share one length")
        if len(set(self.spacers)) != len(self.spacers):
            raise ValueError("spacers must be pairwise distinct")
        codes = list(self.letter_codes.values())
        if len(set(codes)) != len(codes):
            raise ValueError("letter codes must be injective")
        clash = set(codes) & set(self.spacers)
        if clash:
            raise ValueError(f"letter code equals a spacer: {sorted(clash)}")

    def __hash__(self):
        return hash((self.initiator, self.terminator, self.spacers, tuple(sorted(self.letter_codes.items()))))

    @property
    def m(self) -> int:
        return len(self.spacers) - 1

    @property
    def block(self) -> str:
        return "".join(self.spacers)

    @property
    def code_length(self) -> int:
        return len(next(iter(self.letter_codes.values()))) if self.letter_codes else 0

    def code(self, letter) -> str:
        name = letter.name if isinstance(letter, Letter) else letter
        try:
            return self.letter_codes[name]
        except KeyError:
            raise KeyError(f"no code for letter {name!r}") from None

    def truncated(self, m: int) -> "CodeTable":
        """Same table restricted to spacers X0..Xm."""
        if m > self.m:
            raise ValueError(f"table only has spacers up to X{self.m}")
        return CodeTable(self.initiator, self.terminator, self.spacers[: m + 1], dict(self.letter_codes))

    def to_text(self) -> str:
        lines = [f"I1 {self.initiator}", f"I2 {self.terminator}"]
        lines += [f"X{i} {x}" for i, x in enumerate(self.spacers)]
        lines += [f"code {name} {code}" for name, code in sorted(self.letter_codes.items())]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "CodeTable":
        init = term = None
        spacers = {}
        codes = {}
        for lineno, raw in enumerate(text.splitlines(), 1):
            words = raw.split("#", 1)[0].split()
            if not words:
                continue
            key = words[0]
            if key == "I1" and len(words) == 2:
                init = words[1]
            elif key == "I2" and len(words) == 2:
                term = words[1]
            elif key.startswith("X") and key[1:].isdigit() and len(words) == 2:
                spacers[int(key[1:])] = words[1]
            elif key == "code" and len(words) == 3:
                codes[words[1]] = words[2]
            else:
                raise ValueError(f"line {lineno}: cannot parse {raw.strip()!r}")
        if init is None or term is None:
            raise ValueError("code table needs I1 and I2")
        if sorted(spacers) != list(range(len(spacers))):
            raise ValueError("spacers must be numbered X0..Xm without gaps")
        return cls(init, term, tuple(spacers[i] for i in range(len(spacers))), codes)


REFERENCE_TABLE = CodeTable(
    initiator="GCCA",
    terminator="CGTC",
    spacers=("GAA", "TTG", "CAA", "GGC"),
    letter_codes={"p": "CGA", "q": "CCC", "r": "CGC", "s": "AGC", "u": "GCG"},
)


def encode_run(word: Sequence, ct: CodeTable, label: str = "run") -> DnaStrand:
    parts = [ct.initiator, ct.block]
    for letter in word:
        parts += [ct.code(letter), ct.block]
    parts.append(ct.terminator)
    return DnaStrand("".join(parts), Orientation.FIVE_TO_THREE, label)


def run_strand_length(n: int, ct: CodeTable) -> int:
    return len(ct.initiator) + len(ct.terminator) + (n + 1) * len(ct.block) + n * ct.code_length


class DecodeError(ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


def decode_run_strand(s: DnaStrand, ct: CodeTable) -> tuple:
    """Inverse of encode_run: the letter names, or DecodeError at the first bad offset."""
    if s.orientation is not Orientation.FIVE_TO_THREE:
        raise ValueError("class-I strands are read 5'->3'")
    seq = s.bases

    def expect(fragment, at, what):
        got = seq[at: at + len(fragment)]
        if got != fragment:
            bad = next((at + k for k, (x, y) in enumerate(zip(got, fragment)) if x != y), at + len(got))
            raise DecodeError(f"expected {what}", bad)
        return at + len(fragment)

    pos = expect(ct.initiator, 0, "initiator")
    pos = expect(ct.block, pos, "spacer block")
    by_code = {code: name for name, code in ct.letter_codes.items()}
    word = []
    k = ct.code_length
    while True:
        if len(seq) - pos <= len(ct.terminator):
            expect(ct.terminator, pos, "terminator")
            return tuple(word)
        chunk = seq[pos: pos + k]
        if chunk not in by_code:
            raise DecodeError("expected letter code", pos)
        word.append(by_code[chunk])
        pos = expect(ct.block, pos + k, "spacer block")


@dataclass(frozen=True)
class ClassIILibrary:
    """Stickers for one formula automaton.

    ``transitions`` is keyed by (source index, letter name, target index).
    """

    initial: DnaStrand
    accepting: Mapping[int, DnaStrand]
    transitions: Mapping[tuple, DnaStrand]

    def __hash__(self):
        return hash((self.initial, tuple(self.accepting), tuple(self.transitions)))

    def transition_strands(self) -> list:
        return [self.transitions[k] for k in sorted(self.transitions, key=lambda k: (k[0], k[2], k[1]))]

    def strands(self) -> list:
        return [self.initial, *self.transition_strands(), *(self.accepting[j] for j in sorted(self.accepting))]

    def restricted(self, names: Iterable[str]) -> "ClassIILibrary":
        """Keep only the named transition stickers (initial/accepting are kept)."""
        names = set(names)
        kept = {k: s for k, s in self.transitions.items() if s.label in names}
        return ClassIILibrary(self.initial, dict(self.accepting), kept)

    def to_fasta(self) -> str:
        return strands_to_fasta(self.strands())


def transition_name(i: int, letter: str, j: int) -> str:
    return f"t{i}{letter}{j}"


def encode_formula_fsa(a: FormulaFsa, ct: CodeTable) -> ClassIILibrary:
    if ct.m != len(a.states):
        raise ValueError(f"code table has m={ct.m} but the automaton has {len(a.states)} states")
    idx = a.state_index
    X = ct.spacers

    def sticker(sense, label):
        return wc_complement(DnaStrand(sense, Orientation.FIVE_TO_THREE, label))

    i0 = idx[a.initial]
    initial = sticker(ct.initiator + "".join(X[: i0 + 1]), f"init-{a.initial}")
    accepting = {}
    for state in a.accepting:
        j = idx[state]
        accepting[j] = sticker("".join(X[j + 1:]) + ct.terminator, f"acc-{state}")
    transitions = {}
    names = set()
    for src, letter, dst in a.edges():
        i, j = idx[src], idx[dst]
        name = transition_name(i, letter.name, j)
        if name in names:
            raise ValueError(f"ambiguous sticker name {name}")
        names.add(name)
        sense = "".join(X[i + 1:]) + ct.code(letter) + "".join(X[: j + 1])
        transitions[(i, letter.name, j)] = sticker(sense, name)
    return ClassIILibrary(initial, accepting, transitions)


def strands_to_fasta(strands: Iterable[DnaStrand]) -> str:
    return "".join(f">{s.label} {s.orientation.value}\n{s.written}\n" for s in strands)


def strands_from_fasta(text: str) -> list:
    out = []
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    for header, seq in zip(lines[::2], lines[1::2]):
        if not header.startswith(">"):
            raise ValueError(f"bad FASTA header {header!r}")
        label, orient = header[1:].split()
        orient = Orientation(orient)
        bases = seq if orient is Orientation.FIVE_TO_THREE else seq[::-1]
        out.append(DnaStrand(bases, orient, label))
    return out


# --- code-table audit -------------------------------------------------------

@dataclass(frozen=True)
class Finding:
    """Two class-I sites whose windows can pair with the same (or each other's) sticker.

    ``kind`` is "misprime" when a window's complement binds an unintended
    site, "complement" when two scheme windows are Watson-Crick partners.
    """

    kind: str
    site_a: tuple
    site_b: tuple
    window: str

    @property
    def pair(self) -> tuple:
        return (_fragment_name(self.site_a[0]), _fragment_name(self.site_b[0]))


def _fragment_name(slot) -> str:
    if slot == "I1" or slot == "I2":
        return slot
    if slot[0] == "X":
        return f"X{slot[1]}"
    return f"C({slot[1]})"


@dataclass
class AuditReport:
    min_hit: int
    findings: list = field(default_factory=list)
    composition: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.findings

    def pairs(self) -> set:
        return {f.pair for f in self.findings}

    def to_text(self) -> str:
        lines = [f"audit at min-hit {self.min_hit}: {'PASS' if self.passed else 'FAIL'}"]
        for f in self.findings:
            a, b = f.pair
            lines.append(f"  {f.kind:10s} {a}+{f.site_a[1]} ~ {b}+{f.site_b[1]}  {f.window}")
        lines.append("base composition (A C G T, %):")
        for name, comp in self.composition.items():
            counts = " ".join(f"{comp[b]:3d}" for b in "ACGT")
            pct = " ".join(f"{pct:5.1f}" for pct in composition_percent(comp).values())
            lines.append(f"  {name:8s} {counts}   {pct}")
        return "\n".join(lines) + "\n"


def base_composition(strands: Iterable) -> Counter:
    total = Counter({b: 0 for b in "ACGT"})
    for s in strands:
        total.update(s.bases if isinstance(s, DnaStrand) else s)
    return total


def composition_percent(comp: Mapping[str, int]) -> dict:
    n = sum(comp[b] for b in "ACGT")
    return {b: (100.0 * comp[b] / n if n else 0.0) for b in "ACGT"}


def _grammar(ct: CodeTable):
    """Slots of the class-I language and their successors.

    A slot is ("I1",), ("X", i), ("C", letter) or ("I2",); its text is fixed.
    """
    slots = {"I1": ct.initiator, "I2": ct.terminator}
    nxt = {"I1": [("X", 0)]}
    for i, x in enumerate(ct.spacers):
        slots[("X", i)] = x
        nxt[("X", i)] = [("X", i + 1)] if i < ct.m else [("C", a) for a in sorted(ct.letter_codes)] + ["I2"]
    for a, code in ct.letter_codes.items():
        slots[("C", a)] = code
        nxt[("C", a)] = [("X", 0)]
    nxt["I2"] = []
    return slots, nxt


def _position_class(slot, offset):
    # all letter codes share one alignment class
    if slot not in ("I1", "I2") and slot[0] == "C":
        return ("C", offset)
    return (slot, offset)


def scheme_windows(ct: CodeTable, h: int) -> dict:
    """Every length-h window of every class-I strand, mapped to where it can start.

    Returns window -> set of (slot, offset) start sites.
    """
    slots, nxt = _grammar(ct)
    found = defaultdict(set)

    def extend(prefix, slot, off, start):
        text = slots[slot]
        take = text[off: off + h - len(prefix)]
        prefix += take
        if len(prefix) == h:
            found[prefix].add(start)
            return
        for succ in nxt[slot]:
            extend(prefix, succ, 0, start)

    for slot, text in slots.items():
        for off in range(len(text)):
            extend("", slot, off, (slot, off))
    return found


def audit_code_table(ct: CodeTable, min_hit: int) -> AuditReport:
    """Exhaustive cross-hybridisation scan of the scheme at window length ``min_hit``.

    misprime: the same window starts at two alignment classes, so a sticker
    stretch can pair at an unintended offset.  complement: a window is the
    reverse complement of another scheme window (strand self-pairing and
    sticker-sticker pairing).
    """
    if min_hit < 1:
        raise ValueError("min_hit must be >= 1")
    windows = scheme_windows(ct, min_hit)
    report = AuditReport(min_hit)
    for w in sorted(windows):
        sites = sorted(windows[w], key=repr)
        classes = {}
        for site in sites:
            classes.setdefault(_position_class(*site), site)
        reps = list(classes.values())
        for a, b in itertools.combinations(reps, 2):
            report.findings.append(Finding("misprime", a, b, w))
    for w in sorted(windows):
        rc = reverse_complement(w)
        if rc in windows and w <= rc:
            a = sorted(windows[w], key=repr)[0]
            b = sorted(windows[rc], key=repr)[0]
            report.findings.append(Finding("complement", a, b, w))
    frags = {"I1": ct.initiator, "I2": ct.terminator}
    frags.update({f"X{i}": x for i, x in enumerate(ct.spacers)})
    frags.update({f"C({a})": c for a, c in sorted(ct.letter_codes.items())})
    report.composition = {name: base_composition([seq]) for name, seq in frags.items()}
    report.composition["all"] = base_composition(frags.values())
    return report


def generate_code_table(alphabet: Iterable, fsa_state_count: int, code_len: int = 3,
                        spacer_len: int = 3, seed: int = 0, max_steps: int = 20000) -> CodeTable:
    """Seeded local search for a table passing the audit at ``code_len + 1``.

    Initiator and terminator are one base longer than the letter codes.
    """
    names = sorted(a.name if isinstance(a, Letter) else a for a in alphabet)
    n_spacers = fsa_state_count + 1
    if 4 ** code_len < len(names) + fsa_state_count + 3:
        raise ValueError(f"4^{code_len} codes cannot cover {len(names)} letters and {n_spacers} spacers")
    if 4 ** spacer_len < n_spacers:
        raise ValueError("spacer length too small for the number of spacers")
    rng = random.Random(seed)
    min_hit = code_len + 1
    end_len = code_len + 1

    def rand_seq(n):
        return "".join(rng.choice("ACGT") for _ in range(n))

    def fresh(n, taken):
        for _ in range(1000):
            s = rand_seq(n)
            if s not in taken:
                return s
        raise ValueError("code space exhausted")

    spacers = []
    for _ in range(n_spacers):
        spacers.append(fresh(spacer_len, set(spacers)))
    codes = {}
    for name in names:
        codes[name] = fresh(code_len, set(codes.values()) | set(spacers))
    parts = {"I1": rand_seq(end_len), "I2": rand_seq(end_len)}

    def table():
        return CodeTable(parts["I1"], parts["I2"], tuple(spacers), dict(codes))

    for _ in range(max_steps):
        ct = table()
        report = audit_code_table(ct, min_hit)
        if report.passed:
            return ct
        # resample one fragment involved in a random finding
        finding = rng.choice(report.findings)
        slot = rng.choice([finding.site_a[0], finding.site_b[0]])
        if slot in ("I1", "I2"):
            parts[slot] = rand_seq(end_len)
        elif slot[0] == "X":
            others = set(spacers) - {spacers[slot[1]]} | set(codes.values())
            spacers[slot[1]] = fresh(spacer_len, others)
        else:
            others = set(codes.values()) - {codes[slot[1]]} | set(spacers)
            codes[slot[1]] = fresh(code_len, others)
    raise ValueError("code table search exhausted its step budget")
