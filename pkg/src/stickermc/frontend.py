"""CTL constructs, their LTL reductions, and the text front end.

Formula grammar (whitespace-separated tokens, parentheses optional)::

    formula := ('A' | 'E') atom 'U' atom
             | ('A' | 'E') '(' atom 'U' atom ')'
             | ('AF' | 'AG' | 'AX' | 'EF' | 'EG' | 'EX') atom
    atom    := ['!'] identifier | '(' atom ')'

Model format: one directive per line, ``#`` starts a comment::

    model NAME
    props p q          # optional; propositions never set true
    states 0 1 2
    init 0
    label 0 p !q       # omitted propositions are false
    edge 0 1
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum

from .core import Literal, SystemModel, make_model, validate_model


class Kind(str, Enum):
    AU = "AU"
    EU = "EU"
    AF = "AF"
    EF = "EF"
    AG = "AG"
    EG = "EG"
    AX = "AX"
    EX = "EX"


class Obligation(str, Enum):
    UNTIL = "Until"
    FINALLY = "Finally"
    GLOBALLY = "Globally"
    NEXT = "Next"
    PHI1 = "Phi1"


class Quantifier(str, Enum):
    UNIVERSAL = "Universal"
    EXISTENTIAL = "Existential"


_BINARY_KINDS = {Kind.AU, Kind.EU}
_BINARY_OBLIGATIONS = {Obligation.UNTIL, Obligation.PHI1}


@dataclass(frozen=True)
class CtlConstruct:
    kind: Kind
    p: Literal
    q: Literal | None = None

    def __post_init__(self):
        if (self.q is not None) != (self.kind in _BINARY_KINDS):
            raise ValueError(f"{self.kind.value} takes {'two' if self.kind in _BINARY_KINDS else 'one'} atom(s)")

    def __str__(self):
        return render(self)


@dataclass(frozen=True)
class LtlObligation:
    kind: Obligation
    p: Literal
    q: Literal | None = None

    def __post_init__(self):
        if (self.q is not None) != (self.kind in _BINARY_OBLIGATIONS):
            raise ValueError(f"{self.kind.value} arity mismatch")

    def propositions(self) -> frozenset:
        return frozenset(l.name for l in (self.p, self.q) if l is not None)

    def __str__(self):
        if self.kind is Obligation.UNTIL:
            return f"{self.p} U {self.q}"
        if self.kind is Obligation.PHI1:
            return f"{self.p} Ubar {self.q}"
        return f"{self.kind.value[0]} {self.p}"


@dataclass(frozen=True)
class Reduction:
    obligation: LtlObligation
    negate_verdict: bool


def classify(c: CtlConstruct) -> Quantifier:
    return Quantifier.UNIVERSAL if c.kind.value[0] == "A" else Quantifier.EXISTENTIAL


_UNIVERSAL_TARGET = {
    Kind.AU: Obligation.UNTIL,
    Kind.AF: Obligation.FINALLY,
    Kind.AG: Obligation.GLOBALLY,
    Kind.AX: Obligation.NEXT,
}
# existential kind -> obligation checked on all runs before the verdict is inverted
_EXISTENTIAL_TARGET = {
    Kind.EU: Obligation.PHI1,
    Kind.EF: Obligation.GLOBALLY,
    Kind.EG: Obligation.FINALLY,
    Kind.EX: Obligation.NEXT,
}


def reduce(c: CtlConstruct) -> Reduction:
    """Map a construct to the obligation every run must meet.

    Existential constructs go through their universal dual with negated
    atoms, and the verdict is inverted afterwards.
    """
    if classify(c) is Quantifier.UNIVERSAL:
        return Reduction(LtlObligation(_UNIVERSAL_TARGET[c.kind], c.p, c.q), False)
    q = c.q.negate() if c.q is not None else None
    return Reduction(LtlObligation(_EXISTENTIAL_TARGET[c.kind], c.p.negate(), q), True)


def path_obligation(c: CtlConstruct) -> LtlObligation:
    """The un-negated path formula under the construct's quantifier."""
    target = {Kind.AU: Obligation.UNTIL, Kind.EU: Obligation.UNTIL}.get(c.kind)
    if target is None:
        target = {"F": Obligation.FINALLY, "G": Obligation.GLOBALLY, "X": Obligation.NEXT}[c.kind.value[1]]
    return LtlObligation(target, c.p, c.q)


def render(c: CtlConstruct) -> str:
    if c.kind in _BINARY_KINDS:
        return f"{c.kind.value[0]} {c.p} U {c.q}"
    return f"{c.kind.value} {c.p}"


ALL_KINDS = tuple(Kind)


class FormulaSyntaxError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class ModelFormatError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line


_TOKEN = re.compile(r"\s*(?:(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<sym>[!()]))")
_UNARY = {k.value for k in ALL_KINDS if k not in _BINARY_KINDS}
_KEYWORDS = _UNARY | {"A", "E", "U"}


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = []
        pos = 0
        while True:
            m = _TOKEN.match(text, pos)
            if not m:
                if text[pos:].strip():
                    raise FormulaSyntaxError(f"unexpected character {text[pos:].lstrip()[0]!r}",
                                             len(text) - len(text[pos:].lstrip()))
                break
            tok = m.group("ident") or m.group("sym")
            self.tokens.append((tok, m.start(m.lastgroup)))
            pos = m.end()
        self.i = 0

    def peek(self):
        return self.tokens[self.i][0] if self.i < len(self.tokens) else None

    def where(self):
        return self.tokens[self.i][1] if self.i < len(self.tokens) else len(self.text)

    def take(self, expected=None):
        tok = self.peek()
        if tok is None:
            raise FormulaSyntaxError(f"expected {expected or 'token'}, got end of input", self.where())
        if expected is not None and tok != expected:
            raise FormulaSyntaxError(f"expected {expected!r}, got {tok!r}", self.where())
        self.i += 1
        return tok

    def atom(self) -> Literal:
        tok = self.peek()
        if tok == "(":
            self.take()
            if self.peek() in _UNARY or self.peek() in ("A", "E"):
                raise FormulaSyntaxError("nested constructs unsupported", self.where())
            lit = self.atom()
            self.take(")")
            return lit
        negated = False
        if tok == "!":
            self.take()
            negated = True
            tok = self.peek()
        if tok in _UNARY or tok in ("A", "E"):
            raise FormulaSyntaxError("nested constructs unsupported", self.where())
        if tok is None or tok in _KEYWORDS or not re.match(r"[A-Za-z_]", tok):
            got = repr(tok) if tok else "end of input"
            raise FormulaSyntaxError(f"expected proposition, got {got}", self.where())
        self.take()
        return Literal(tok, negated)

    def formula(self) -> CtlConstruct:
        if self.peek() is None:
            raise FormulaSyntaxError("expected a CTL quantifier, got end of input", self.where())
        head = self.take()
        if head in _UNARY:
            c = CtlConstruct(Kind(head), self.atom())
        elif head in ("A", "E"):
            wrapped = self.peek() == "(" and self._until_in_parens()
            if wrapped:
                self.take("(")
            p = self.atom()
            self.take("U")
            q = self.atom()
            if wrapped:
                self.take(")")
            c = CtlConstruct(Kind(head + "U"), p, q)
        else:
            self.i -= 1
            raise FormulaSyntaxError(f"expected a CTL quantifier, got {head!r}", self.where())
        if self.peek() is not None:
            raise FormulaSyntaxError(f"unexpected trailing {self.peek()!r}", self.where())
        return c

    def _until_in_parens(self) -> bool:
        # "A (p U q)" vs "A (p) U q": look for U before the matching ')'
        depth = 0
        for tok, _ in self.tokens[self.i:]:
            if tok == "(":
                depth += 1
            elif tok == ")":
                depth -= 1
                if depth == 0:
                    return False
            elif tok == "U" and depth == 1:
                return True
        return False


def parse_formula(text: str) -> CtlConstruct:
    return _Parser(text).formula()


def _state_id(tok: str):
    return int(tok) if re.fullmatch(r"-?\d+", tok) else tok


def parse_model(text: str) -> SystemModel:
    """Parse the line-oriented model format; raises ModelFormatError."""
    name = "model"
    states: list = []
    seen = set()
    init = None
    labels: dict = {}
    edges = []
    props = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        words = raw.split("#", 1)[0].split()
        if not words:
            continue
        head, args = words[0], words[1:]
        if head == "model":
            if len(args) != 1:
                raise ModelFormatError("model takes one name", lineno)
            name = args[0]
        elif head == "props":
            props.update(args)
        elif head == "states":
            for tok in args:
                s = _state_id(tok)
                if s in seen:
                    raise ModelFormatError(f"duplicate state id {tok}", lineno)
                seen.add(s)
                states.append(s)
        elif head == "init":
            if len(args) != 1:
                raise ModelFormatError("init takes one state", lineno)
            if init is not None:
                raise ModelFormatError("more than one initial state", lineno)
            init = _state_id(args[0])
        elif head == "label":
            if not args:
                raise ModelFormatError("label needs a state", lineno)
            s = _state_id(args[0])
            if s in labels:
                raise ModelFormatError(f"state {s} labelled twice", lineno)
            v = {}
            for tok in args[1:]:
                m = re.fullmatch(r"(!?)([A-Za-z_][A-Za-z0-9_]*)", tok)
                if not m:
                    raise ModelFormatError(f"bad literal {tok!r}", lineno)
                v[m.group(2)] = not m.group(1)
            labels[s] = v
        elif head == "edge":
            if len(args) != 2:
                raise ModelFormatError("edge takes two states", lineno)
            edges.append((_state_id(args[0]), _state_id(args[1])))
        else:
            raise ModelFormatError(f"unknown directive {head!r}", lineno)
    if init is None:
        raise ModelFormatError("no initial state")
    for s in states:
        labels.setdefault(s, {})
    model = make_model(name, states, init, edges, labels, props)
    problems = validate_model(model)
    if problems:
        raise ModelFormatError("; ".join(problems))
    return model


def render_model(model: SystemModel) -> str:
    lines = [f"model {model.name}"]
    if model.propositions:
        lines.append("props " + " ".join(sorted(model.propositions)))
    lines.append("states " + " ".join(map(str, model.states)))
    lines.append(f"init {model.initial}")
    for s in model.states:
        lits = [n if model.labeling[s][n] else f"!{n}" for n in sorted(model.propositions)]
        lines.append(" ".join(["label", str(s), *lits]))
    for src in model.states:
        for dst in model.successors(src):
            lines.append(f"edge {src} {dst}")
    return "\n".join(lines) + "\n"
