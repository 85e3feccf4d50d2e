"""
Symbologram of the parser
=========================

Goedel-encoding both halves of a dotted sequence places every parser state
in the unit square.  The parser then becomes a piecewise affine map whose
branches live on rectangles.  This script prints the branches and writes
SVG panels for their domains and images.
"""

import sys
from pathlib import Path

from dfautomata import compile_nda, data_path
from dfautomata.formats import load_definition
from dfautomata.goedel import dod_doe_report, symbol_partition
from dfautomata.render import symbologram_svg

out = Path(sys.argv[1] if len(sys.argv) > 1 else "symbologram_out")
out.mkdir(exist_ok=True)

definition = load_definition(data_path("grammar_np_v_np.json"))
m = compile_nda(definition.gs, definition.coding)

############################################################
# The background partition by leading symbols, and the affine branches

print(len(symbol_partition(m.coding)), "partition rectangles")
for b in m.branches:
    print(f"{b.label:22s} cell {b.cell}  x -> {b.lambda_x} x + {b.a_x},  y -> {b.lambda_y} y + {b.a_y}")

############################################################
# Where each branch reads from and where it writes to

for e in dod_doe_report(m):
    print(f"{e.action:8s} {e.cell}  ->  {e.image}")

(out / "dod.svg").write_text(symbologram_svg(m, "dod"))
(out / "doe.svg").write_text(symbologram_svg(m, "doe"))
print("wrote", out / "dod.svg", "and", out / "doe.svg")
