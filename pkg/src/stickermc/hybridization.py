"""Complete-duplex decision by tiling a class-I strand with stickers.

A strand is given as a list of slots, each a tuple of equal-length
alternatives.  A concrete strand is one slot with one alternative; a run
whose states may emit several letters becomes a strand with a choice at each
letter-code slot, so the emission choice is folded into the same sweep.
"""

from __future__ import annotations

import heapq
import itertools
from collections import defaultdict, deque
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

from .core import DnaStrand, FormulaFsa, Orientation
from .encoding import ClassIILibrary, CodeTable, reverse_complement


@dataclass(frozen=True)
class TilingResult:
    """Outcome of one hybridisation.

    ``cover`` holds (sticker name, first offset, last offset), offsets
    inclusive.  On failure it is the longest tiled prefix and
    ``uncovered`` the gap that no sticker chain reaches.
    """

    complete: bool
    length: int
    cover: tuple
    uncovered: tuple = ()

    @property
    def multiplicity(self) -> dict:
        counts = {}
        for name, _, _ in self.cover:
            counts[name] = counts.get(name, 0) + 1
        return counts

    def to_dict(self) -> dict:
        return {
            "complete": self.complete,
            "length": self.length,
            "cover": [{"strand": n, "start": a, "end": b} for n, a, b in self.cover],
            "uncovered": [list(r) for r in self.uncovered],
            "multiplicity": self.multiplicity,
        }


class Readout(str, Enum):
    ACCEPTED = "Accepted"
    REJECTED = "Rejected"


class _Strand:
    """Flattened slot view of a (possibly degenerate) class-I strand."""

    def __init__(self, slots: Sequence[Sequence[str]], widths=None):
        self.slots = [tuple(alts) for alts in slots]
        self.widths = []
        self.starts = []
        pos = 0
        for k, alts in enumerate(self.slots):
            lengths = {len(a) for a in alts}
            if len(lengths) > 1:
                raise ValueError("each slot needs equal-length alternatives")
            width = lengths.pop() if lengths else (widths[k] if widths else None)
            if not width:
                raise ValueError("an empty slot needs an explicit width")
            self.widths.append(width)
            self.starts.append(pos)
            pos += width
        self.length = pos

    def slot_at(self, offset):
        # index of the slot containing offset
        lo, hi = 0, len(self.starts) - 1
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if self.starts[mid] <= offset:
                lo = mid
            else:
                hi = mid - 1
        return lo

    def match(self, target: str, offset: int, carried):
        """Try to lay ``target`` at ``offset``.

        ``carried`` restricts the alternatives of the slot that ``offset`` falls
        inside (None when offset is a slot boundary).  Returns the end offset
        and the restriction to carry, or None.
        """
        end = offset + len(target)
        if end > self.length:
            return None
        k = self.slot_at(offset)
        pos = offset
        allowed = carried
        while pos < end:
            start = self.starts[k]
            alts = self.slots[k]
            seg_end = min(end, start + self.widths[k])
            piece = target[pos - offset: seg_end - offset]
            idx = range(len(alts)) if allowed is None else allowed
            ok = frozenset(i for i in idx if alts[i][pos - start: seg_end - start] == piece)
            if not ok:
                return None
            if seg_end < start + self.widths[k]:
                return end, ok
            pos = seg_end
            k += 1
            allowed = None
        return end, None


def _targets(lib: ClassIILibrary):
    init = [(lib.initial.label, reverse_complement(lib.initial.bases))]
    trans = sorted((s.label, reverse_complement(s.bases)) for s in lib.transitions.values())
    acc = sorted((s.label, reverse_complement(s.bases)) for s in lib.accepting.values())
    return init, trans, acc


_START = ("start",)
_END = ("end",)


def _edges(strand: _Strand, node, init, trans, acc):
    """Outgoing (label, next node) pairs, label = (name, first, last)."""
    if node == _END:
        return []
    if node == _START:
        out = []
        for name, t in init:
            hit = strand.match(t, 0, None)
            if hit:
                out.append(((name, 0, hit[0] - 1), hit))
        return out
    offset, carried = node
    out = []
    for name, t in trans:
        hit = strand.match(t, offset, carried)
        if hit:
            out.append(((name, offset, hit[0] - 1), hit))
    for name, t in acc:
        hit = strand.match(t, offset, carried)
        if hit and hit[0] == strand.length:
            out.append(((name, offset, hit[0] - 1), _END))
    return out


def _explore(strand, sources, init, trans, acc):
    graph = {}
    queue = deque(sources)
    while queue:
        node = queue.popleft()
        if node in graph:
            continue
        graph[node] = _edges(strand, node, init, trans, acc)
        for _, nxt in graph[node]:
            if nxt not in graph:
                queue.append(nxt)
    return graph


def _can_reach(graph, targets):
    reverse = {}
    for node, edges in graph.items():
        for _, nxt in edges:
            reverse.setdefault(nxt, []).append(node)
    good = set(t for t in targets if t in graph or t == _END)
    queue = deque(good)
    while queue:
        node = queue.popleft()
        for prev in reverse.get(node, ()):
            if prev not in good:
                good.add(prev)
                queue.append(prev)
    return good


def _least_path(graph, good, source, stop):
    cover = []
    node = source
    while not stop(node):
        label, node = min(((lab, nxt) for lab, nxt in graph[node] if nxt in good), key=lambda e: e[0])
        cover.append(label)
    return tuple(cover)


def tile_slots(slots: Sequence[Sequence[str]], lib: ClassIILibrary, widths=None) -> TilingResult:
    """Tile a slot-form strand; see the module docstring.

    The cover of a complete tiling is the lexicographically least one
    (compared as the sequence of (name, first, last) triples).
    """
    strand = _Strand(slots, widths)
    init, trans, acc = _targets(lib)
    graph = _explore(strand, [_START], init, trans, acc)
    if _END in graph:
        good = _can_reach(graph, [_END])
        cover = _least_path(graph, good, _START, lambda n: n == _END)
        return TilingResult(True, strand.length, cover)

    reached = [n for n in graph if n not in (_START, _END)]
    best = max((n[0] for n in reached), default=0)
    if reached:
        targets = [n for n in reached if n[0] == best]
        good = _can_reach(graph, targets)
        cover = _least_path(graph, good, _START, lambda n: n != _START and n[0] == best)
    else:
        cover = ()
    # how far back from the 3' end can a sticker chain finishing on an acceptance sticker reach
    suffix = _explore(strand, [(o, None) for o in range(strand.length)], init, trans, acc)
    tail_ok = _can_reach(suffix, [_END])
    suffix_start = min((n[0] for n in tail_ok if n not in (_START, _END)), default=strand.length)
    last = strand.length - 1
    gap_end = suffix_start - 1 if suffix_start > best else last
    return TilingResult(False, strand.length, cover, ((best, gap_end),))


def tile(class_i: DnaStrand, lib: ClassIILibrary) -> TilingResult:
    if class_i.orientation is not Orientation.FIVE_TO_THREE:
        raise ValueError("class-I strand must be 5'->3'")
    return tile_slots([[class_i.bases]], lib)


def readout(t: TilingResult) -> Readout:
    """One uniform band after nuclease digestion iff the duplex is complete."""
    return Readout.ACCEPTED if t.complete else Readout.REJECTED


def decode_tiling(t: TilingResult, a: FormulaFsa) -> list:
    """Automaton state sequence spelled by a complete cover."""
    if not t.complete:
        raise ValueError("cannot decode an incomplete tiling")
    by_name = {}
    idx = a.state_index
    for src, letter, dst in a.edges():
        by_name[f"t{idx[src]}{letter.name}{idx[dst]}"] = (src, dst)
    states = [a.initial]
    for name, _, _ in t.cover[1:-1]:
        src, dst = by_name[name]
        if src != states[-1]:
            raise ValueError(f"sticker {name} does not continue from state {states[-1]}")
        states.append(dst)
    if states[-1] not in a.accepting:
        raise ValueError("cover does not end in an accepting state")
    return states


def enumerate_groups(class_i: DnaStrand, lib: ClassIILibrary, group_size: int) -> list:
    """Tile against every size-``group_size`` subset of the transition stickers."""
    names = [s.label for s in lib.transition_strands()]
    if group_size < 0 or group_size > len(names):
        raise ValueError(f"group size must be between 0 and {len(names)}")
    return [
        (group, tile(class_i, lib.restricted(group)))
        for group in itertools.combinations(names, group_size)
    ]


def run_slots(emissions: Iterable[Iterable[str]], ct: CodeTable) -> tuple:
    """Slot form of every class-I strand of a run, plus slot widths.

    ``emissions`` lists the emittable letter names per run state; a state
    that emits nothing leaves a code slot no sticker can pair with.
    """
    slots = [[ct.initiator], [ct.block]]
    for names in emissions:
        slots.append(sorted({ct.code(n) for n in names}))
        slots.append([ct.block])
    slots.append([ct.terminator])
    widths = [len(alts[0]) if alts else ct.code_length for alts in slots]
    return slots, widths


class IncrementalTiler:
    """Left-to-right tiling of run strands that share prefixes.

    A sweep state holds the unsettled DP frontier plus the strand tail it can
    still read, rebased to offset 0.  Runs through the same model states reach
    the same sweep states, so each distinct step is tiled once.  The per-run
    result equals ``tile_slots(*run_slots(...)).complete``.
    """

    DEAD = ((), (), frozenset())

    def __init__(self, lib: ClassIILibrary, ct: CodeTable):
        self.init, self.trans, self.acc = _targets(lib)
        self.maxlen = max(len(t) for _, t in self.init + self.trans + self.acc)
        self.ct = ct
        self._steps = {}
        self._finals = {}
        self.start = self._settle(((ct.initiator,), (ct.block,)),
                                  (len(ct.initiator), len(ct.block)), frozenset({_START}), False)

    def step(self, sweep, letter_names):
        """Append one run state that may emit any of ``letter_names``."""
        if sweep == self.DEAD:
            return sweep
        slot = tuple(sorted({self.ct.code(n) for n in letter_names}))
        key = (sweep, slot)
        hit = self._steps.get(key)
        if hit is None:
            slots, widths, frontier = sweep
            hit = self._settle(slots + (slot, (self.ct.block,)),
                               widths + (self.ct.code_length, len(self.ct.block)), frontier, False)
            self._steps[key] = hit
        return hit

    def accepts(self, sweep) -> bool:
        """Close the strand with the terminator; True iff it tiles completely."""
        if sweep == self.DEAD:
            return False
        hit = self._finals.get(sweep)
        if hit is None:
            slots, widths, frontier = sweep
            hit = self._settle(slots + ((self.ct.terminator,),),
                               widths + (len(self.ct.terminator),), frontier, True)
            self._finals[sweep] = hit
        return hit

    def run(self, emissions) -> bool:
        sweep = self.start
        for names in emissions:
            sweep = self.step(sweep, names)
        return self.accepts(sweep)

    def _settle(self, slots, widths, frontier, final):
        strand = _Strand(slots, widths)
        pending = defaultdict(set)
        for node in frontier:
            pending[-1 if node == _START else node[0]].add(node)
        order = list(pending)
        heapq.heapify(order)
        done = False
        while order:
            o = order[0]
            # a node is settled once every sticker laid from it lies inside known sequence
            if not final and max(o, 0) + self.maxlen > strand.length:
                break
            heapq.heappop(order)
            for node in pending.pop(o):
                for _, nxt in _edges(strand, node, self.init, self.trans, self.acc):
                    if nxt == _END:
                        done = True
                        continue
                    if nxt[0] not in pending:
                        heapq.heappush(order, nxt[0])
                    pending[nxt[0]].add(nxt)
        if final:
            return done
        keep = frozenset(n for nodes in pending.values() for n in nodes)
        if not keep:
            return self.DEAD
        if _START in keep:
            return tuple(strand.slots), tuple(strand.widths), keep
        k = strand.slot_at(min(n[0] for n in keep))
        base = strand.starts[k]
        rebased = frozenset((n[0] - base, n[1]) for n in keep)
        return tuple(strand.slots[k:]), tuple(strand.widths[k:]), rebased
