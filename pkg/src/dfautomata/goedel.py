"""Goedel encoding of dotted sequences and compilation to NDAs.

All coordinates, cells and branch coefficients are :class:`fractions.Fraction`
so that the symbolic and geometric dynamics can be compared exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import InexpressibleRule, UncodedSymbol
from .symbolic import WILDCARD, DottedSequence, GeneralizedShift, GsRule

Point = tuple[Fraction, Fraction]


@dataclass(frozen=True)
class GoedelCoding:
    """Integer Goedel numbers for the stack side and the input side."""

    stack_code: Mapping[str, int]
    input_code: Mapping[str, int]
    b_L: int
    b_R: int
    blank: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "stack_code", dict(self.stack_code))
        object.__setattr__(self, "input_code", dict(self.input_code))
        for side, code, base in (("stack", self.stack_code, self.b_L), ("input", self.input_code, self.b_R)):
            if base < 1:
                raise ValueError(f"{side} base must be positive")
            if len(code) != base:
                raise ValueError(f"{side} side codes {len(code)} symbols but base is {base}")
            if sorted(code.values()) != list(range(base)):
                raise ValueError(f"{side} codes must be a bijection onto 0..{base - 1}")
            if self.blank is not None and self.blank in code and code[self.blank] != 0:
                raise ValueError(f"blank must have code 0 on the {side} side")

    @classmethod
    def from_orders(cls, stack_symbols: Sequence[str], input_symbols: Sequence[str], blank=None):
        """Number symbols by position, moving the blank (if any) to code 0."""

        def numbering(symbols):
            symbols = list(symbols)
            if blank in symbols:
                symbols.remove(blank)
                symbols.insert(0, blank)
            return {s: i for i, s in enumerate(symbols)}

        return cls(numbering(stack_symbols), numbering(input_symbols),
                   len(stack_symbols), len(input_symbols), blank)

    def stack_value(self, word: Sequence[str]) -> Fraction:
        return _word_value(word, self.stack_code, self.b_L, "stack")

    def input_value(self, word: Sequence[str]) -> Fraction:
        return _word_value(word, self.input_code, self.b_R, "input")


def _word_value(word, code, base, side):
    value = Fraction(0)
    scale = Fraction(1)
    for sym in word:
        scale /= base
        try:
            value += code[sym] * scale
        except KeyError:
            raise UncodedSymbol(f"symbol {sym!r} has no {side}-side Goedel number") from None
    return value


def encode(s: DottedSequence, c: GoedelCoding) -> Point:
    """Symbologram point of ``s``: base-``b_L`` digits of the stack, base-``b_R`` of the input."""
    return c.stack_value(s.stack), c.input_value(s.input)


@dataclass(frozen=True)
class Rect:
    """Half-open rectangle ``[x_lo, x_hi) x [y_lo, y_hi)`` with rational corners."""

    x_lo: Fraction
    x_hi: Fraction
    y_lo: Fraction
    y_hi: Fraction

    def __post_init__(self):
        for name in ("x_lo", "x_hi", "y_lo", "y_hi"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))
        if not (0 <= self.x_lo < self.x_hi <= 1 and 0 <= self.y_lo < self.y_hi <= 1):
            raise ValueError(f"degenerate or out-of-square rectangle {self}")

    @classmethod
    def unit(cls):
        return cls(0, 1, 0, 1)

    @property
    def width(self):
        return self.x_hi - self.x_lo

    @property
    def height(self):
        return self.y_hi - self.y_lo

    @property
    def area(self):
        return self.width * self.height

    @property
    def center(self) -> Point:
        return (self.x_lo + self.x_hi) / 2, (self.y_lo + self.y_hi) / 2

    def contains_point(self, p) -> bool:
        x, y = p
        return self.x_lo <= x < self.x_hi and self.y_lo <= y < self.y_hi

    def contains(self, other: "Rect") -> bool:
        return (self.x_lo <= other.x_lo and other.x_hi <= self.x_hi
                and self.y_lo <= other.y_lo and other.y_hi <= self.y_hi)

    def intersects(self, other: "Rect") -> bool:
        return (max(self.x_lo, other.x_lo) < min(self.x_hi, other.x_hi)
                and max(self.y_lo, other.y_lo) < min(self.y_hi, other.y_hi))

    def intersection_area(self, other: "Rect") -> Fraction:
        w = min(self.x_hi, other.x_hi) - max(self.x_lo, other.x_lo)
        h = min(self.y_hi, other.y_hi) - max(self.y_lo, other.y_lo)
        return w * h if w > 0 and h > 0 else Fraction(0)

    def as_tuple(self):
        return self.x_lo, self.x_hi, self.y_lo, self.y_hi

    def __str__(self):
        return f"[{self.x_lo}, {self.x_hi}) x [{self.y_lo}, {self.y_hi})"


def cylinder_rect(word_stack: Sequence[str], word_input: Sequence[str], c: GoedelCoding) -> Rect:
    """Rectangle covered by all continuations of the given building blocks."""
    x = c.stack_value(word_stack)
    y = c.input_value(word_input)
    return Rect(x, x + Fraction(1, c.b_L ** len(word_stack)),
                y, y + Fraction(1, c.b_R ** len(word_input)))


@dataclass(frozen=True)
class AffineBranch:
    """``(x, y) -> (a_x + lambda_x x, a_y + lambda_y y)`` on ``cell``."""

    cell: Rect
    a_x: Fraction
    a_y: Fraction
    lambda_x: Fraction
    lambda_y: Fraction
    label: str = ""

    def __post_init__(self):
        for name in ("a_x", "a_y", "lambda_x", "lambda_y"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))
        if self.lambda_x <= 0 or self.lambda_y <= 0:
            raise ValueError("branch scale factors must be positive")
        self.image(self.cell)

    def __call__(self, p) -> Point:
        x, y = p
        return self.a_x + self.lambda_x * x, self.a_y + self.lambda_y * y

    def image(self, r: Rect) -> Rect:
        # scale factors are positive, so the map is monotone per axis
        return Rect(self.a_x + self.lambda_x * r.x_lo, self.a_x + self.lambda_x * r.x_hi,
                    self.a_y + self.lambda_y * r.y_lo, self.a_y + self.lambda_y * r.y_hi)


@dataclass(frozen=True)
class NdaMachine:
    """Piecewise affine-linear map on the unit square; identity off the cells."""

    branches: tuple[AffineBranch, ...]
    coding: GoedelCoding

    def __post_init__(self):
        branches = tuple(self.branches)
        object.__setattr__(self, "branches", branches)
        for i, b1 in enumerate(branches):
            for b2 in branches[i + 1:]:
                if b1.cell.intersects(b2.cell):
                    raise ValueError(f"branch cells {b1.cell} and {b2.cell} overlap")

    def branch_at(self, p) -> AffineBranch | None:
        for b in self.branches:
            if b.cell.contains_point(p):
                return b
        return None

    def __call__(self, p) -> Point:
        return nda_step(self, p)


def _effective_words(rule: GsRule):
    """Reduce a rule to ``(D_L, D_R, E_L, E_R)`` with the dot shift folded in."""
    dod_left = _strip_wildcards(rule.dod_left)
    dod_right = _strip_wildcards(rule.dod_right)
    left, right = list(rule.doe_left), list(rule.doe_right)
    for _ in range(rule.shift):
        if not right:
            raise InexpressibleRule(f"{rule.written()}: shift reads past the DoE")
        left.insert(0, right.pop(0))
    for _ in range(-rule.shift):
        if not left:
            raise InexpressibleRule(f"{rule.written()}: shift reads past the DoE")
        right.insert(0, left.pop(0))
    return dod_left, dod_right, tuple(left), tuple(right)


def _strip_wildcards(word):
    word = tuple(word)
    while word and word[-1] == WILDCARD:
        word = word[:-1]
    return word


def compile_rule(rule: GsRule, c: GoedelCoding) -> AffineBranch:
    d_l, d_r, e_l, e_r = _effective_words(rule)
    cell = cylinder_rect(d_l, d_r, c)
    lam_x = Fraction(c.b_L) ** (len(d_l) - len(e_l))
    lam_y = Fraction(c.b_R) ** (len(d_r) - len(e_r))
    a_x = c.stack_value(e_l) - lam_x * c.stack_value(d_l)
    a_y = c.input_value(e_r) - lam_y * c.input_value(d_r)
    return AffineBranch(cell, a_x, a_y, lam_x, lam_y, rule.label)


def compile_nda(gs: GeneralizedShift, c: GoedelCoding) -> NdaMachine:
    """One affine branch per rule, acting on the rule's DoD cylinder rectangle.

    Trailing wildcards are context the rule leaves untouched; expanding them
    over the coded symbols yields sub-cells with identical coefficients, so
    they are kept merged into one branch.
    """
    return NdaMachine(tuple(compile_rule(r, c) for r in gs.rules), c)


def nda_step(m: NdaMachine, p) -> Point:
    p = (Fraction(p[0]), Fraction(p[1]))
    branch = m.branch_at(p)
    return p if branch is None else branch(p)


def nda_orbit(m: NdaMachine, p, steps: int) -> list[Point]:
    orbit = [(Fraction(p[0]), Fraction(p[1]))]
    for _ in range(steps):
        orbit.append(nda_step(m, orbit[-1]))
    return orbit


@dataclass(frozen=True)
class DodDoe:
    cell: Rect
    image: Rect
    label: str

    @property
    def action(self):
        return self.label.split("(", 1)[0]


def dod_doe_report(m: NdaMachine) -> list[DodDoe]:
    return [DodDoe(b.cell, b.image(b.cell), b.label) for b in m.branches]


def symbol_partition(c: GoedelCoding) -> list[Rect]:
    """The ``b_L * b_R`` rectangles fixed by the top stack and head input symbol."""
    return [Rect(Fraction(i, c.b_L), Fraction(i + 1, c.b_L), Fraction(j, c.b_R), Fraction(j + 1, c.b_R))
            for i in range(c.b_L) for j in range(c.b_R)]
