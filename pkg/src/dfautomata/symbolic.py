"""Symbolic layer: Turing machines, dotted sequences and generalized shifts.

A dotted sequence ``... a_-2 a_-1 . a_0 a_1 ...`` is stored as two finite
tuples.  ``stack`` holds the left half *top-first* (``a_-1`` first) and
``input`` holds the right half in reading order (``a_0`` first).  Everything
beyond the stored part is the blank symbol (or nothing, for alphabets without
a blank, as in the parser case).

Shift convention: a rule's ``shift`` counts how far the *dot* moves after the
replacement.  Positive values move it right (symbols travel from the input
onto the stack), negative values move it left.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .errors import AmbiguousMatch, MalformedDescription

#: Match-any marker allowed at the outer ends of a rule's DoD words.
WILDCARD = "*"


class Stop(enum.Enum):
    """Terminal outcomes of a single symbolic step."""

    HALTED = "halted"
    NO_RULE = "no-rule"


HALTED = Stop.HALTED
NO_RULE = Stop.NO_RULE


@dataclass(frozen=True)
class Alphabet:
    symbols: tuple[str, ...]
    blank: str | None = None

    def __post_init__(self):
        symbols = tuple(self.symbols)
        object.__setattr__(self, "symbols", symbols)
        if any(not isinstance(s, str) or not s for s in symbols):
            raise ValueError("symbol names must be nonempty strings")
        if len(set(symbols)) != len(symbols):
            raise ValueError(f"duplicate symbol names in {symbols}")
        if WILDCARD in symbols:
            raise ValueError(f"{WILDCARD!r} is reserved for wildcards")
        if self.blank is not None and self.blank not in symbols:
            raise ValueError(f"blank {self.blank!r} is not in the alphabet")

    def __contains__(self, symbol):
        return symbol in self.symbols

    def __len__(self):
        return len(self.symbols)

    def union(self, other: "Alphabet") -> "Alphabet":
        extra = tuple(s for s in other.symbols if s not in self.symbols)
        return Alphabet(self.symbols + extra, self.blank or other.blank)


def _strip_blanks(word, blank):
    word = tuple(word)
    if blank is None:
        return word
    end = len(word)
    while end and word[end - 1] == blank:
        end -= 1
    return word[:end]


@dataclass(frozen=True)
class DottedSequence:
    """Canonical finite representation of a bi-infinite dotted sequence.

    Trailing blanks on either side are dropped on construction, so two
    sequences compare equal iff they denote the same bi-infinite string.
    """

    stack: tuple[str, ...] = ()
    input: tuple[str, ...] = ()
    alphabet: Alphabet | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        blank = self.blank
        object.__setattr__(self, "stack", _strip_blanks(self.stack, blank))
        object.__setattr__(self, "input", _strip_blanks(self.input, blank))
        if self.alphabet is not None:
            for sym in self.stack + self.input:
                if sym not in self.alphabet:
                    raise ValueError(f"symbol {sym!r} not in alphabet")

    @property
    def blank(self):
        return None if self.alphabet is None else self.alphabet.blank

    @classmethod
    def from_written(cls, text: str, alphabet: Alphabet | None = None):
        """Parse ``"VP NP . NP V NP"`` (stack written left to right, top last)."""
        tokens = text.split()
        if tokens.count(".") != 1:
            raise ValueError(f"expected exactly one dot in {text!r}")
        i = tokens.index(".")
        left = [t for t in tokens[:i] if t != "ε"]
        right = [t for t in tokens[i + 1:] if t != "ε"]
        return cls(tuple(reversed(left)), tuple(right), alphabet)

    def written(self) -> str:
        left = " ".join(reversed(self.stack)) or "ε"
        right = " ".join(self.input) or "ε"
        return f"{left} . {right}"

    def is_empty(self):
        return not self.stack and not self.input

    def stack_at(self, k):
        return self.stack[k] if k < len(self.stack) else self.blank

    def input_at(self, k):
        return self.input[k] if k < len(self.input) else self.blank

    def __str__(self):
        return self.written()


@dataclass(frozen=True)
class CylinderSpec:
    """Pair of part cylinders fixing ``left`` (top-first) and ``right`` around the dot."""

    left: tuple[str, ...]
    right: tuple[str, ...]
    alphabet: Alphabet | None = field(default=None, compare=False, repr=False)

    @property
    def n(self):
        return len(self.left) + len(self.right)

    @property
    def t(self):
        return -len(self.left)

    def contains(self, s: DottedSequence) -> bool:
        return all(s.stack_at(k) == sym for k, sym in enumerate(self.left)) and all(
            s.input_at(k) == sym for k, sym in enumerate(self.right)
        )

    __contains__ = contains


def cylinder(word_left: Sequence[str], word_right: Sequence[str], alphabet: Alphabet | None = None):
    if alphabet is not None:
        for sym in tuple(word_left) + tuple(word_right):
            if sym not in alphabet:
                raise ValueError(f"symbol {sym!r} not in alphabet")
    return CylinderSpec(tuple(word_left), tuple(word_right), alphabet)


# -- Turing machines ---------------------------------------------------------


@dataclass(frozen=True)
class TuringMachine:
    """Deterministic TM ``(Q, N, T, delta, q0, b, F)``.

    ``table`` maps ``(state, symbol)`` to ``(state', symbol', move)`` with
    ``move`` in ``{"L", "R"}``.  State names and tape symbols must be
    disjoint because both live on the same tape of the dotted sequence.
    """

    states: tuple[str, ...]
    tape_alphabet: Alphabet
    input_symbols: frozenset[str]
    table: Mapping[tuple[str, str], tuple[str, str, str]]
    initial: str
    halting: frozenset[str] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "input_symbols", frozenset(self.input_symbols))
        object.__setattr__(self, "halting", frozenset(self.halting))
        object.__setattr__(self, "table", dict(self.table))
        N = self.tape_alphabet
        if N.blank is None:
            raise ValueError("tape alphabet needs a blank symbol")
        if len(set(self.states)) != len(self.states):
            raise ValueError("duplicate state names")
        if set(self.states) & set(N.symbols):
            raise ValueError("state names and tape symbols must be disjoint")
        if not self.input_symbols <= set(N.symbols) - {N.blank}:
            raise ValueError("input symbols must be non-blank tape symbols")
        if self.initial not in self.states:
            raise ValueError(f"initial state {self.initial!r} not in Q")
        if not self.halting <= set(self.states):
            raise ValueError("halting states must be a subset of Q")
        for (q, a), (q2, a2, move) in self.table.items():
            if q not in self.states or q2 not in self.states:
                raise ValueError(f"unknown state in transition {(q, a)}")
            if a not in N or a2 not in N:
                raise ValueError(f"unknown tape symbol in transition {(q, a)}")
            if move not in ("L", "R"):
                raise ValueError(f"move must be 'L' or 'R', got {move!r}")
            if q in self.halting:
                raise ValueError(f"halting state {q!r} has a transition")

    @property
    def joint_alphabet(self) -> Alphabet:
        N = self.tape_alphabet
        return Alphabet(N.symbols + self.states, N.blank)

    def initial_description(self, tape: Iterable[str] = ()) -> DottedSequence:
        return DottedSequence((self.initial,), tuple(tape), self.joint_alphabet)


def tm_step(tm: TuringMachine, s: DottedSequence):
    """One machine-table step on a state description ``tape . q | head tape``."""
    blank = tm.tape_alphabet.blank
    if not s.stack or s.stack[0] not in tm.states:
        raise MalformedDescription(f"no control state left of the dot in {s}")
    q = s.stack[0]
    a = s.input[0] if s.input else blank
    if a not in tm.tape_alphabet:
        raise MalformedDescription(f"{a!r} under the head is not a tape symbol")
    if q in tm.halting or (q, a) not in tm.table:
        return HALTED
    q2, a2, move = tm.table[q, a]
    alphabet = s.alphabet or tm.joint_alphabet
    rest_left, rest_right = s.stack[1:], s.input[1:]
    if move == "R":
        return DottedSequence((q2, a2) + rest_left, rest_right, alphabet)
    c = rest_left[0] if rest_left else blank
    return DottedSequence((q2,) + rest_left[1:], (c, a2) + rest_right, alphabet)


def tm_run(tm: TuringMachine, s: DottedSequence, max_steps: int):
    """Iterate :func:`tm_step`; returns the list of visited descriptions."""
    states = [s]
    for _ in range(max_steps):
        nxt = tm_step(tm, states[-1])
        if nxt is HALTED:
            break
        states.append(nxt)
    return states


# -- generalized shifts ------------------------------------------------------


def _concrete_length(word):
    n = len(word)
    while n and word[n - 1] == WILDCARD:
        n -= 1
    return n


@dataclass(frozen=True)
class GsRule:
    """DoD ``dod_left . dod_right`` replaced by ``doe_left . doe_right``, then shift.

    Left words are top-first.  Wildcards may only form a run at the outer end
    of a DoD word; they match any symbol (including implicit padding) and are
    left in place by the replacement.
    """

    dod_left: tuple[str, ...]
    dod_right: tuple[str, ...]
    doe_left: tuple[str, ...] = ()
    doe_right: tuple[str, ...] = ()
    shift: int = 0
    label: str = ""

    def __post_init__(self):
        for name in ("dod_left", "dod_right", "doe_left", "doe_right"):
            object.__setattr__(self, name, tuple(getattr(self, name)))
        if len(self.dod_left) + len(self.dod_right) < 1:
            raise ValueError("a rule needs a DoD of length >= 1")
        if WILDCARD in self.doe_left + self.doe_right:
            raise ValueError("wildcards are not allowed in the DoE")
        for word in (self.dod_left, self.dod_right):
            if WILDCARD in word[: _concrete_length(word)]:
                raise ValueError(f"wildcards must be at the outer end of {word}")

    @property
    def d(self):
        return len(self.dod_left) + len(self.dod_right)

    @property
    def e(self):
        return len(self.doe_left) + len(self.doe_right)

    def matches(self, s: DottedSequence) -> bool:
        return all(
            sym == WILDCARD or s.stack_at(k) == sym for k, sym in enumerate(self.dod_left)
        ) and all(
            sym == WILDCARD or s.input_at(k) == sym for k, sym in enumerate(self.dod_right)
        )

    def apply(self, s: DottedSequence) -> DottedSequence:
        left = list(self.doe_left) + list(s.stack[_concrete_length(self.dod_left):])
        right = list(self.doe_right) + list(s.input[_concrete_length(self.dod_right):])
        blank = s.blank
        for _ in range(self.shift):
            if not right and blank is None:
                raise MalformedDescription("shift runs past the end of the input")
            left.insert(0, right.pop(0) if right else blank)
        for _ in range(-self.shift):
            if not left and blank is None:
                raise MalformedDescription("shift runs past the bottom of the stack")
            right.insert(0, left.pop(0) if left else blank)
        return DottedSequence(tuple(left), tuple(right), s.alphabet)

    def written(self) -> str:
        def side(left, right):
            return f"{' '.join(reversed(left)) or 'ε'} . {' '.join(right) or 'ε'}"

        return f"{side(self.dod_left, self.dod_right)} -> {side(self.doe_left, self.doe_right)} [{self.shift:+d}]"


def _compatible(p, q):
    return all(a == b or WILDCARD in (a, b) for a, b in zip(p, q))


def rules_overlap(r1: GsRule, r2: GsRule) -> bool:
    """True if some dotted sequence matches both rules."""
    return _compatible(r1.dod_left, r2.dod_left) and _compatible(r1.dod_right, r2.dod_right)


@dataclass(frozen=True)
class GeneralizedShift:
    """Rule set of a deterministic generalized shift.

    ``no_rule_outcome`` names what a non-empty sequence without a matching
    rule means: ``"reject"`` for parsers, ``"halt"`` for machine emulation.
    """

    alphabet: Alphabet
    rules: tuple[GsRule, ...] = ()
    no_rule_outcome: str = "reject"

    def __post_init__(self):
        rules = tuple(self.rules)
        object.__setattr__(self, "rules", rules)
        for i, r1 in enumerate(rules):
            for r2 in rules[i + 1:]:
                if rules_overlap(r1, r2):
                    raise AmbiguousMatch(f"rules {r1.written()} and {r2.written()} overlap")
        for r in rules:
            for sym in r.dod_left + r.dod_right + r.doe_left + r.doe_right:
                if sym != WILDCARD and sym not in self.alphabet:
                    raise ValueError(f"rule symbol {sym!r} not in alphabet")

    def matching(self, s: DottedSequence):
        return [r for r in self.rules if r.matches(s)]


def gs_match(gs: GeneralizedShift, s: DottedSequence) -> GsRule | None:
    found = gs.matching(s)
    if len(found) > 1:
        raise AmbiguousMatch(f"{len(found)} rules match {s}")
    return found[0] if found else None


def gs_step(gs: GeneralizedShift, s: DottedSequence):
    """Apply the unique matching rule, or return :data:`NO_RULE`."""
    rule = gs_match(gs, s)
    if rule is None:
        return NO_RULE
    return rule.apply(s)


@dataclass(frozen=True)
class TraceStep:
    t: int
    state: DottedSequence
    op: str


@dataclass(frozen=True)
class Trace:
    steps: tuple[TraceStep, ...]
    outcome: str

    def __len__(self):
        return len(self.steps)

    def __iter__(self):
        return iter(self.steps)

    def __getitem__(self, i):
        return self.steps[i]

    @property
    def transitions(self):
        return len(self.steps) - 1

    @property
    def states(self):
        return [step.state for step in self.steps]


def gs_run(gs: GeneralizedShift, s0: DottedSequence, max_steps: int) -> Trace:
    """Iterate the shift, labelling each step with the rule that fired.

    The last record carries the outcome (``accept``, ``reject``, ``halt``
    or ``budget``) as its operation.
    """
    if max_steps < 0:
        raise ValueError("max_steps must be >= 0")
    steps = []
    s, t = s0, 0
    while True:
        rule = gs_match(gs, s)
        if rule is None:
            outcome = "accept" if s.is_empty() else gs.no_rule_outcome
            break
        if t >= max_steps:
            outcome = "budget"
            break
        steps.append(TraceStep(t, s, rule.label))
        s, t = rule.apply(s), t + 1
    steps.append(TraceStep(t, s, outcome))
    return Trace(tuple(steps), outcome)


def tm_to_gs(tm: TuringMachine) -> GeneralizedShift:
    """Generalized shift emulating ``tm`` step for step.

    Right moves read ``q . a`` and write ``a' . q'`` before moving the dot one
    place right.  Left moves need the symbol ``c`` left of the state, so they
    expand into one rule per tape symbol reading ``c q . a``.
    """
    rules = []
    for (q, a), (q2, a2, move) in tm.table.items():
        if move == "R":
            rules.append(GsRule((q,), (a,), (a2,), (q2,), +1, f"{q},{a}->{q2},{a2},R"))
        else:
            for c in tm.tape_alphabet.symbols:
                rules.append(
                    GsRule((q, c), (a,), (c, q2), (a2,), -1, f"{q},{a}->{q2},{a2},L")
                )
    return GeneralizedShift(tm.joint_alphabet, tuple(rules), no_rule_outcome="halt")


# -- context-free grammars ---------------------------------------------------


@dataclass(frozen=True)
class ContextFreeGrammar:
    nonterminals: tuple[str, ...]
    terminals: tuple[str, ...]
    rules: tuple[tuple[str, tuple[str, ...]], ...]
    start: str

    def __post_init__(self):
        object.__setattr__(self, "nonterminals", tuple(self.nonterminals))
        object.__setattr__(self, "terminals", tuple(self.terminals))
        object.__setattr__(
            self, "rules", tuple((lhs, tuple(rhs)) for lhs, rhs in self.rules)
        )
        if set(self.nonterminals) & set(self.terminals):
            raise ValueError("nonterminals and terminals must be disjoint")
        if self.start not in self.nonterminals:
            raise ValueError(f"start symbol {self.start!r} is not a nonterminal")
        symbols = set(self.nonterminals) | set(self.terminals)
        for lhs, rhs in self.rules:
            if lhs not in self.nonterminals:
                raise ValueError(f"rule lhs {lhs!r} is not a nonterminal")
            if not rhs:
                raise ValueError(f"rule {lhs} -> ε: empty right-hand sides are not supported")
            unknown = set(rhs) - symbols
            if unknown:
                raise ValueError(f"unknown symbols {sorted(unknown)} in rule for {lhs}")


def rule_text(lhs, rhs):
    return f"{lhs} -> {' '.join(rhs)}"


def cfg_to_gs(g: ContextFreeGrammar, which_terminals: Iterable[str] | None = None) -> GeneralizedShift:
    """Predict/attach parser for ``g`` as a generalized shift.

    ``which_terminals`` declares the symbols treated as terminals of the
    parser; rules rewriting them (e.g. lexical rules) are dropped.  Defaults
    to the grammar's own terminals.
    """
    terms = tuple(g.terminals if which_terminals is None else which_terminals)
    all_symbols = set(g.nonterminals) | set(g.terminals)
    if not set(terms) <= all_symbols:
        raise ValueError(f"unknown terminals {sorted(set(terms) - all_symbols)}")
    rules = [
        GsRule((lhs,), (WILDCARD,), tuple(rhs), (), 0, f"predict({rule_text(lhs, rhs)})")
        for lhs, rhs in g.rules
        if lhs not in terms
    ]
    rules += [GsRule((z,), (z,), (), (), 0, "attach") for z in terms]
    used = [g.start] + [lhs for lhs, _ in g.rules if lhs not in terms]
    used += [s for lhs, rhs in g.rules if lhs not in terms for s in rhs] + list(terms)
    ordered = tuple(dict.fromkeys(s for s in g.nonterminals + g.terminals if s in used))
    return GeneralizedShift(Alphabet(ordered), tuple(rules), no_rule_outcome="reject")


def parser_start(g: ContextFreeGrammar, gs: GeneralizedShift, words: Sequence[str]) -> DottedSequence:
    return DottedSequence((g.start,), tuple(words), gs.alphabet)
