"""
Uniform densities on rectangles
===============================

Instead of a single point we push a uniform density on the rectangle of
all states beginning with ``S . NP V NP`` through the map.  Its support
stays a rectangle at every step.  The same evolution on a 64 x 64 grid
with a sparse transfer matrix gives identical cell values.
"""

import numpy as np

from dfautomata import compile_nda, data_path
from dfautomata.dfa import RectMacrostate, build_transfer_operator, dfa_orbit, fp_orbit, rasterize
from dfautomata.formats import load_definition
from dfautomata.goedel import cylinder_rect

definition = load_definition(data_path("grammar_np_v_np.json"))
m = compile_nda(definition.gs, definition.coding)

############################################################
# Exact orbit of the macrostate

r0 = RectMacrostate(cylinder_rect(("S",), ("NP", "V", "NP"), m.coding))
orbit = dfa_orbit(m, r0, 5)
for t, r in enumerate(orbit):
    print(t, r.support, "density", r.weight)

############################################################
# The grid version

op = build_transfer_operator(m, 64)
densities = fp_orbit(op, rasterize(r0.support, 64), 5)
same = [np.array_equal(d.cells, rasterize(r.support, 64).cells) for d, r in zip(densities, orbit)]
print("grid snapshots equal rasterized orbit:", all(same))
print("row sums within", float(np.max(np.abs(op.row_sums() - 1))), "of 1")
