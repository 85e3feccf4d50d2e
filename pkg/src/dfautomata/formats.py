"""JSON (and binary) readers and writers for definitions and artifacts.

Rationals are always serialized as ``"num/den"`` strings (``"3"`` for
integers) so that every artifact round-trips without loss.  See FORMATS.md
in the repository root for the schemas.
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any

import numpy as np

from .amari import ConstantFieldConfig, FixedPointReport, SigmoidParams
from .dfa import GridDensity, RectMacrostate, TransferOperator
from .errors import AutomatonError
from .goedel import AffineBranch, GoedelCoding, NdaMachine, Rect
from .symbolic import (
    Alphabet,
    ContextFreeGrammar,
    DottedSequence,
    GeneralizedShift,
    Trace,
    TuringMachine,
    cfg_to_gs,
    tm_to_gs,
)


class DefinitionError(AutomatonError):
    """A definition or artifact file violates its schema or an invariant."""


def frac_str(q) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def parse_frac(text) -> Fraction:
    if isinstance(text, bool) or not isinstance(text, (str, int)):
        raise DefinitionError(f"expected a rational string, got {text!r}")
    return Fraction(text)


def _read_json(source):
    if isinstance(source, dict):
        return source
    path = Path(source)
    try:
        return json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise DefinitionError(f"{path}: invalid JSON ({exc})") from None


def dump_json(obj, path):
    Path(path).write_text(json.dumps(obj, indent=2, ensure_ascii=False) + "\n")


# -- machine and grammar definitions ----------------------------------------


@dataclass(frozen=True)
class Definition:
    kind: str
    machine: TuringMachine | ContextFreeGrammar
    gs: GeneralizedShift
    coding: GoedelCoding | None = None

    def initial(self, words) -> DottedSequence:
        """Start description for input ``words`` (start symbol or initial state on the stack)."""
        top = self.machine.start if self.kind == "cfg" else self.machine.initial
        return DottedSequence((top,), tuple(words), self.gs.alphabet)


def _require(data, key, where):
    if key not in data:
        raise DefinitionError(f"{where}: missing required field {key!r}")
    return data[key]


def _coding_from(block, stack_symbols, input_symbols, blank):
    if block is None:
        return None
    if block == "auto":
        return GoedelCoding.from_orders(stack_symbols, input_symbols, blank)
    try:
        stack = _require(block, "stack", "coding")
        inp = _require(block, "input", "coding")
        return GoedelCoding(stack, inp, block.get("b_L", len(stack)), block.get("b_R", len(inp)),
                            block.get("blank", blank))
    except (TypeError, AttributeError) as exc:
        raise DefinitionError(f"coding: malformed block ({exc})") from None


def load_definition(source) -> Definition:
    data = _read_json(source)
    kind = data.get("type")
    try:
        if kind == "cfg":
            return _load_cfg(data)
        if kind == "tm":
            return _load_tm(data)
    except DefinitionError:
        raise
    except (AutomatonError, ValueError, KeyError, TypeError) as exc:
        raise DefinitionError(f"invalid {kind} definition: {exc}") from None
    raise DefinitionError(f"'type' must be 'cfg' or 'tm', got {kind!r}")


def _load_cfg(data):
    symbols = _require(data, "symbols", "cfg")
    rules = [(_require(r, "lhs", "rule"), tuple(_require(r, "rhs", "rule")))
             for r in _require(data, "rules", "cfg")]
    g = ContextFreeGrammar(tuple(_require(symbols, "nonterminals", "symbols")),
                           tuple(_require(symbols, "terminals", "symbols")),
                           tuple(rules), _require(data, "start", "cfg"))
    gs = cfg_to_gs(g, data.get("parser_terminals"))
    terms = data.get("parser_terminals", g.terminals)
    coding = _coding_from(data.get("coding"), gs.alphabet.symbols, terms, None)
    return Definition("cfg", g, gs, coding)


def _load_tm(data):
    symbols = _require(data, "symbols", "tm")
    tape = Alphabet(tuple(_require(symbols, "tape", "symbols")), _require(symbols, "blank", "symbols"))
    table = {}
    for r in _require(data, "rules", "tm"):
        key = (str(_require(r, "state", "rule")), str(_require(r, "read", "rule")))
        if key in table:
            raise DefinitionError(f"duplicate transition for {key} (machine must be deterministic)")
        table[key] = (str(r["next"]), str(r["write"]), r["move"])
    tm = TuringMachine(tuple(str(q) for q in _require(symbols, "states", "symbols")), tape,
                       frozenset(symbols.get("input", ())), table,
                       str(_require(data, "initial", "tm")),
                       frozenset(str(q) for q in data.get("halting", ())))
    gs = tm_to_gs(tm)
    coding = _coding_from(data.get("coding"), tm.joint_alphabet.symbols, tape.symbols, tape.blank)
    return Definition("tm", tm, gs, coding)


# -- traces -----------------------------------------------------------------


def trace_records(trace: Trace):
    for step in trace:
        yield {"t": step.t, "stack": list(step.state.stack), "input": list(step.state.input), "op": step.op}


def write_trace_jsonl(trace: Trace, path):
    with open(path, "w", encoding="utf-8") as fh:
        for rec in trace_records(trace):
            fh.write(json.dumps(rec, ensure_ascii=False) + "\n")


def read_trace_jsonl(path) -> list[dict[str, Any]]:
    with open(path, encoding="utf-8") as fh:
        return [json.loads(line) for line in fh if line.strip()]


def trace_table(trace: Trace) -> str:
    """Plain-text table with time, state (stack . input) and operation columns."""
    rows = [(str(s.t), " ".join(reversed(s.state.stack)) or "ε", " ".join(s.state.input) or "ε", s.op)
            for s in trace]
    wt = max(4, *(len(r[0]) for r in rows))
    wl = max(len(r[1]) for r in rows)
    wr = max(len(r[2]) for r in rows)
    lines = [f"{'time':>{wt}}  {'state':^{wl + wr + 3}}  operation"]
    lines += [f"{t:>{wt}}  {left:>{wl}} . {right:<{wr}}  {op}" for t, left, right, op in rows]
    return "\n".join(lines) + "\n"


# -- NDA --------------------------------------------------------------------


def rect_to_json(r: Rect):
    return {"x": [frac_str(r.x_lo), frac_str(r.x_hi)], "y": [frac_str(r.y_lo), frac_str(r.y_hi)]}


def rect_from_json(d) -> Rect:
    (x0, x1), (y0, y1) = d["x"], d["y"]
    return Rect(parse_frac(x0), parse_frac(x1), parse_frac(y0), parse_frac(y1))


def coding_to_json(c: GoedelCoding):
    return {"stack": dict(c.stack_code), "input": dict(c.input_code), "b_L": c.b_L, "b_R": c.b_R,
            "blank": c.blank}


def nda_to_json(m: NdaMachine):
    return {
        "coding": coding_to_json(m.coding),
        "branches": [
            {"cell": rect_to_json(b.cell), "a_x": frac_str(b.a_x), "a_y": frac_str(b.a_y),
             "lambda_x": frac_str(b.lambda_x), "lambda_y": frac_str(b.lambda_y), "label": b.label}
            for b in m.branches
        ],
    }


def nda_from_json(source) -> NdaMachine:
    data = _read_json(source)
    try:
        c = data["coding"]
        coding = GoedelCoding(c["stack"], c["input"], c["b_L"], c["b_R"], c.get("blank"))
        branches = tuple(
            AffineBranch(rect_from_json(b["cell"]), parse_frac(b["a_x"]), parse_frac(b["a_y"]),
                         parse_frac(b["lambda_x"]), parse_frac(b["lambda_y"]), b.get("label", ""))
            for b in data["branches"]
        )
        return NdaMachine(branches, coding)
    except (KeyError, TypeError, ValueError) as exc:
        raise DefinitionError(f"invalid NDA file: {exc}") from None


# -- densities and operators ------------------------------------------------


def orbit_to_json(orbit: list[RectMacrostate]):
    return {"orbit": [{"t": t, "support": rect_to_json(r.support), "weight": frac_str(r.weight)}
                      for t, r in enumerate(orbit)]}


def orbit_from_json(source) -> list[RectMacrostate]:
    data = _read_json(source)
    return [RectMacrostate(rect_from_json(e["support"]), parse_frac(e["weight"])) for e in data["orbit"]]


def operator_to_json(op: TransferOperator):
    return {"n": op.n, "order": "row-major, y fastest",
            "triples": [[s, t, frac_str(f)] for s, t, f in op.triples()]}


def operator_from_json(source) -> TransferOperator:
    data = _read_json(source)
    n = data["n"]
    rows = [[] for _ in range(n * n)]
    for s, t, f in data["triples"]:
        rows[s].append((t, parse_frac(f)))
    return TransferOperator(n, tuple(tuple(r) for r in rows))


def density_to_json(d: GridDensity):
    return {"n": d.n, "order": "row-major, y fastest", "cells": [float(v) for v in d.flat()]}


def density_from_json(source) -> GridDensity:
    data = _read_json(source)
    n = data["n"]
    return GridDensity(n, np.asarray(data["cells"], dtype=float).reshape(n, n))


_HEADER = struct.Struct("<II")


def write_density_bin(d: GridDensity, path):
    """Little-endian float64 cells after an 8-byte ``{n: uint32, reserved: uint32}`` header."""
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(d.n, 0))
        fh.write(np.asarray(d.flat(), dtype="<f8").tobytes())


def read_density_bin(path) -> GridDensity:
    raw = Path(path).read_bytes()
    n, _ = _HEADER.unpack_from(raw)
    cells = np.frombuffer(raw, dtype="<f8", offset=_HEADER.size)
    if cells.size != n * n:
        raise DefinitionError(f"{path}: expected {n * n} cells, found {cells.size}")
    return GridDensity(n, cells.reshape(n, n).astype(float))


# -- stability --------------------------------------------------------------


def stability_config_from_json(source) -> tuple[ConstantFieldConfig, dict]:
    """Returns the field config and the optional ``integrate`` block."""
    data = _read_json(source)
    try:
        cfg = ConstantFieldConfig(
            float(data["domain_measure"]), float(data["kernel_value"]), data.get("activation", "sigmoid"),
            SigmoidParams(float(data.get("beta", 1.0)), float(data.get("theta", 0.0))),
            float(data.get("tau", 1.0)), float(data.get("scan_step", 1e-3)),
            tuple(data["bracket"]) if "bracket" in data else None,
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise DefinitionError(f"invalid stability config: {exc}") from None
    return cfg, data.get("integrate", {})


def report_to_json(report: FixedPointReport):
    return report.to_dict()


def report_from_json(source) -> FixedPointReport:
    return FixedPointReport.from_dict(_read_json(source))
