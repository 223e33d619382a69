"""Derived POR functions, all assembled from the base functions with
composition and bounded recursion."""

from .por import (BBit, BCat, BRec, BTimes, BX, BY, C, Comp, E, P, PorFn, Q, S)


def const(bit: str, k: int) -> PorFn:
    """The k-ary function returning the one-bit string ``bit``."""
    return Comp(S(bit), (Comp(E(), (P(k, 1),)),))


def empty(k: int) -> PorFn:
    return Comp(E(), (P(k, 1),))


def cond(x: PorFn, y: PorFn, z0: PorFn, z1: PorFn) -> PorFn:
    return Comp(C(), (x, y, z0, z1))


def compose(g: PorFn, *hs: PorFn) -> PorFn:
    return Comp(g, tuple(hs))


# tail2(w, y): y without its last bit
TAIL2 = BRec(E(), P(3, 2), P(3, 2), BY())
# tail(x): x without its last bit, tail(eps) = eps
TAIL = Comp(TAIL2, (P(1, 1), P(1, 1)))

# bit tests on the last bit: results are always the strings 0 or 1
IS1 = cond(P(1, 1), const("0", 1), const("0", 1), const("1", 1))
IS0 = cond(P(1, 1), const("0", 1), const("1", 1), const("0", 1))
NOT = cond(P(1, 1), const("1", 1), const("1", 1), const("0", 1))
AND = cond(P(2, 1), const("0", 2), const("0", 2), Comp(IS1, (P(2, 2),)))
OR = cond(P(2, 1), Comp(IS1, (P(2, 2),)), Comp(IS1, (P(2, 2),)), const("1", 2))
XOR = cond(P(2, 1), Comp(IS1, (P(2, 2),)), Comp(IS1, (P(2, 2),)),
           Comp(NOT, (P(2, 2),)))


def and_(a: PorFn, b: PorFn) -> PorFn:
    return Comp(AND, (a, b))


def not_(a: PorFn) -> PorFn:
    return Comp(NOT, (a,))


# truncw(w, x) = x cut to |w|; trunc(x, w) swaps the arguments
TRUNCW = BRec(E(), Comp(S("0"), (P(3, 3),)), Comp(S("1"), (P(3, 3),)), BX(1))
TRUNC = Comp(TRUNCW, (P(2, 2), P(2, 1)))

# drop(a, c): a with its last |c| bits removed
DROP = BRec(P(1, 1), Comp(TAIL, (P(3, 3),)), Comp(TAIL, (P(3, 3),)), BX(1))
# longer(a, c) = 1 iff |a| > |c|
LONGER = cond(DROP, const("0", 2), const("1", 2), const("1", 2))


def _pre_step(bit: str) -> PorFn:
    # h_b(x, u, z) = z and |x| > |u| and x[|u|] = b
    test = IS1 if bit == "1" else IS0
    next_prefix = Comp(TRUNC, (P(3, 1), Comp(S(bit), (P(3, 2),))))
    return and_(P(3, 3), and_(Comp(LONGER, (P(3, 1), P(3, 2))),
                              Comp(test, (next_prefix,))))


# pre(x, y) = 1 iff y is an initial subword of x
PRE = BRec(const("1", 1), _pre_step("0"), _pre_step("1"), BBit("1"))
# sub(x, y) = 1 iff x is an initial subword of y
SUB = Comp(PRE, (P(2, 2), P(2, 1)))
# eq(x, y) = 1 iff x = y
EQ = and_(PRE, not_(LONGER))

# conc(x, y) = xy
CONC = BRec(P(1, 1), Comp(S("0"), (P(3, 3),)), Comp(S("1"), (P(3, 3),)),
            BCat(BCat(BX(1), BY()), BBit("1")))

# times(x, y) = x repeated |y| times
TIMES = BRec(empty(1), Comp(CONC, (P(3, 3), P(3, 1))), Comp(CONC, (P(3, 3), P(3, 1))),
             BCat(BTimes(BX(1), BY()), BX(1)))

# queries
QX = Comp(Q(), (P(1, 1),))
COIN_XOR = Comp(XOR, (QX, Comp(Q(), (Comp(S("0"), (P(1, 1),)),))))


def _append_query(bit: str) -> PorFn:
    # h_b(w, u, z) = z followed by Q(ub)
    q = Comp(Q(), (Comp(S(bit), (P(3, 2),)),))
    z = P(3, 3)
    return cond(q, z, Comp(S("0"), (z,)), Comp(S("1"), (z,)))


# qpre2(w, y) = Q(eps) Q(y1) Q(y1y2) ... one query per nonempty prefix
QPRE2 = BRec(Comp(Q(), (empty(1),)), _append_query("0"), _append_query("1"),
             BCat(BCat(BY(), BBit("1")), BBit("1")))
QPREFIXES = Comp(QPRE2, (P(1, 1), P(1, 1)))

# Q(x) Q(x) Q(tail x): the first two bits always agree
COLLIDE = Comp(CONC, (Comp(CONC, (QX, QX)), Comp(Q(), (TAIL,))))

# Q(x Q(x)): the queried coordinate depends on an earlier answer
NESTQ = Comp(Q(), (Comp(CONC, (P(1, 1), QX)),))


def stdlib() -> dict:
    return {
        "tail": TAIL,
        "tail2": TAIL2,
        "is0": IS0,
        "is1": IS1,
        "not": NOT,
        "and": AND,
        "or": OR,
        "xor": XOR,
        "truncw": TRUNCW,
        "trunc": TRUNC,
        "drop": DROP,
        "longer": LONGER,
        "pre": PRE,
        "sub": SUB,
        "eq": EQ,
        "conc": CONC,
        "times": TIMES,
        "coinxor": COIN_XOR,
        "qprefixes": QPREFIXES,
        "collide": COLLIDE,
        "nestq": NESTQ,
    }


CORPUS_ORDER = ("E", "P2_2", "S1", "C", "Q", "eq", "sub", "tail", "conc",
                "coinxor", "qprefixes", "collide", "nestq")


def corpus() -> dict:
    """The thirteen reference functions used for cross-stage checks."""
    lib = stdlib()
    base = {"E": E(), "P2_2": P(2, 2), "S1": S("1"), "C": C(), "Q": Q()}
    return {name: base[name] if name in base else lib[name] for name in CORPUS_ORDER}
