"""
Parsing with a generalized shift
================================

A small phrase-structure grammar is turned into a generalized shift and run
on the input ``NP V NP``.  Each row shows the stack (written with its top
next to the dot), the remaining input and the rule that fires.
"""

from dfautomata import data_path, gs_run
from dfautomata.formats import load_definition, trace_table

############################################################
# Load the grammar and look at the compiled rules

definition = load_definition(data_path("grammar_np_v_np.json"))
for rule in definition.gs.rules:
    print(rule.written(), " ", rule.label)

############################################################
# Run the parser on a well-formed sentence

trace = gs_run(definition.gs, definition.initial(["NP", "V", "NP"]), 100)
print(trace_table(trace))

############################################################
# An ill-formed input gets stuck and is rejected

bad = gs_run(definition.gs, definition.initial(["V", "NP"]), 100)
print(trace_table(bad))
