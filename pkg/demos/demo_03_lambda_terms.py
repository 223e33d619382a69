"""
A typed lambda calculus over strings
====================================

"""

from porkit.porlambda import (FlipTable, format_lterm, lambda_stdlib, lambda_to_por, normalize,
                              numeral, parse_lterm, por_to_lambda, run, typecheck)
from porkit import Oracle, eval_por, stdlib

lib = lambda_stdlib()

# Strings are numerals built with o: the numeral for 01 is (eps o 0) o 1.
print(format_lterm(numeral("01")))

# Combinators are ordinary terms.  Applying them and normalizing computes.
print(run(lib["Conc"], ["01", "1"]))
print(run(lib["Eq"], ["0110", "0110"]))

t = parse_lterm(r"\x:s. Cond x eps 0 1", lib)
print(typecheck(t))

# Flipcoin is answered from a table, one bit per numeral.
print(format_lterm(normalize(parse_lterm("Flipcoin 01"), FlipTable({"01": 1}))))

# Functions translate to terms and, for the supported fragment, back.
eq = stdlib()["eq"]
term = por_to_lambda(eq)
print(run(term, ["10", "10"]) == eval_por(eq, ["10", "10"], Oracle()))

back = lambda_to_por(lib["Conc"])
print(eval_por(back, ["10", "011"], Oracle()))
