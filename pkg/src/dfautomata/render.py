"""Deterministic SVG renderings of symbolograms and rectangle orbits.

Coordinates are printed with 12 significant digits; y grows upward in the
unit square and is flipped for SVG.  Half-open rectangles are drawn closed.
"""

from __future__ import annotations

from .dfa import RectMacrostate
from .goedel import NdaMachine, Rect, dod_doe_report, symbol_partition

FILL = {"predict": "#999999", "attach": "#000000", "identity": "#ffffff"}
MARGIN = 10


def _num(v) -> str:
    return format(float(v), ".12g")


def _rect(r: Rect, size, ox=0, fill="#000000", stroke="#000000", opacity=None):
    x = ox + MARGIN + float(r.x_lo) * size
    y = MARGIN + (1 - float(r.y_hi)) * size
    extra = f' fill-opacity="{_num(opacity)}"' if opacity is not None else ""
    return (f'<rect x="{_num(x)}" y="{_num(y)}" width="{_num(float(r.width) * size)}" '
            f'height="{_num(float(r.height) * size)}" fill="{fill}" stroke="{stroke}" '
            f'stroke-width="0.5"{extra}/>')


def _doc(width, height, body, title):
    return "\n".join([
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_num(width)}" height="{_num(height)}" '
        f'viewBox="0 0 {_num(width)} {_num(height)}">',
        f"<title>{title}</title>",
        *body,
        "</svg>",
    ]) + "\n"


def _action(label):
    kind = label.split("(", 1)[0]
    return kind if kind in FILL else "predict"


def _legend(y, size):
    out = []
    for k, (name, color) in enumerate(FILL.items()):
        x = MARGIN + k * size / 3
        out.append(f'<rect x="{_num(x)}" y="{_num(y)}" width="10" height="10" fill="{color}" stroke="#000000" stroke-width="0.5"/>')
        out.append(f'<text x="{_num(x + 14)}" y="{_num(y + 9)}" font-size="10" font-family="sans-serif">{name}</text>')
    return out


def symbologram_svg(m: NdaMachine, panel: str = "dod", size: int = 400) -> str:
    """Domains of dependence (``panel="dod"``) or effect (``"doe"``) of each branch.

    Predict actions are gray, attach actions black, the identity region white.
    Branch labels other than ``predict``/``attach`` are drawn gray.
    """
    if panel not in ("dod", "doe"):
        raise ValueError("panel must be 'dod' or 'doe'")
    body = [_rect(Rect.unit(), size, fill=FILL["identity"])]
    entries = dod_doe_report(m)
    for e in entries:
        r = e.cell if panel == "dod" else e.image
        # images may overlap (attach maps onto the whole square), so draw them translucent
        body.append(_rect(r, size, fill=FILL[_action(e.label)], opacity=None if panel == "dod" else 0.5))
    for r in symbol_partition(m.coding):
        body.append(_rect(r, size, fill="none", stroke="#666666"))
    body += _legend(size + 2 * MARGIN, size)
    return _doc(size + 2 * MARGIN, size + 3 * MARGIN + 10, body, f"symbologram {panel}")


def orbit_svg(orbit: list[RectMacrostate], size: int = 160) -> str:
    """One unit-square panel per time step with the macrostate's support filled."""
    body = []
    for t, r in enumerate(orbit):
        ox = t * (size + MARGIN)
        body.append(_rect(Rect.unit(), size, ox, fill="#ffffff"))
        body.append(_rect(r.support, size, ox, fill="#000000"))
        body.append(f'<text x="{_num(ox + MARGIN)}" y="{_num(size + 2 * MARGIN + 8)}" font-size="10" '
                    f'font-family="sans-serif">t = {t}</text>')
    width = len(orbit) * (size + MARGIN) + MARGIN
    return _doc(width, size + 3 * MARGIN + 10, body, "rectangle orbit")
