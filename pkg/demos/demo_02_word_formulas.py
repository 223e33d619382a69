"""
Word formulas, cylinders and representing formulas
===================================================

"""

from porkit import Q, cylinder_measure
from porkit.rl import (build_repr_formula, check_representability, classify, eval_measure,
                       eval_standard, format_formula, parse)
from porkit.measure import Oracle

# flip(t) holds when the oracle answers 1 at the value of t.  The set of
# oracles satisfying a formula is a finite union of cylinders.
f = parse('flip(eps) & flip("0")')
print(cylinder_measure(eval_measure(f, {})))

# The standard reading picks one oracle.
print(eval_standard(f, {}, Oracle({"": 1, "0": 1})))

# Quantifiers must be bounded to be evaluated.
g = parse("E x <= y . x ^ 1 = y")
print(classify(g), eval_standard(g, {"y": "01"}, Oracle()))

# Each recursion-free function has a formula describing its graph.
FQ = build_repr_formula(Q())
print(format_formula(FQ))

# The check compares the measure of each output's formula with the
# exact probability of that output.
print(check_representability(FQ, Q(), 2).summary())
