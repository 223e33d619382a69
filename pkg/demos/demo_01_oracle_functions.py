"""
Oracle functions and their output distributions
================================================

"""

# Functions are built from a handful of base pieces.  Q asks the oracle
# for the bit stored at a coordinate; everything else is deterministic.
from porkit import Comp, Oracle, P, Q, S, eval_dist, eval_por, stdlib

coin = Comp(Q(), (P(1, 1),))
print(eval_por(coin, ["01"], Oracle({"01": 1})))

# With a uniformly random oracle the output is a random variable.  Its
# distribution is computed exactly by branching on fresh coordinates.
print(eval_dist(coin, ["01"]))

# Asking the same coordinate twice gives the same answer, so the
# conjunction of a coin with itself is still a fair coin.
lib = stdlib()
both = Comp(lib["and"], (coin, coin))
print(eval_dist(both, ["0"]))

# Two different coordinates are independent.
print(eval_dist(lib["coinxor"], ["1"]))

# Recursion on notation is bounded: every intermediate value is cut at
# the length of a bound term.  Equality and prefix tests are built that way.
print(eval_por(lib["eq"], ["0110", "0110"], Oracle()))
print(eval_por(lib["sub"], ["01", "0110"], Oracle()))
