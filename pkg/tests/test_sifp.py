import itertools
import random
from fractions import Fraction

import pytest

from conftest import as_fractions, brute_histogram
from porkit.measure import BitStream, Distribution, Dyadic, Oracle, StreamUnderrun
from porkit.sifp import (And, Append, Assign, Eps, Flip, Not, Prefix, Program, RandBit, Reg,
                         SifpError, SifpFuelExhausted, While, check_register, eval_expr,
                         format_stmt, parse_expr, parse_sifp, run_la, run_la_dist, run_ra,
                         run_ra_dist, seq)

HALF = Dyadic(1, 1)
COIN = Distribution({"0": HALF, "1": HALF})


def test_expr_examples():
    assert eval_expr(Reg("X1"), {}) == ""
    assert eval_expr(Not(Eps()), {}) == "0"
    assert eval_expr(Prefix(Append(Eps(), "0"), "X1"), {"X1": "01"}) == "1"


def test_expr_and_is_total():
    for a, b in itertools.product(["", "0", "1", "11"], repeat=2):
        want = "1" if a == "1" and b == "1" else "0"
        assert eval_expr(And(Reg("Y1"), "Y2"), {"Y1": a, "Y2": b}) == want


def test_not_only_on_zero():
    assert eval_expr(Not(Reg("Z")), {"Z": "0"}) == "1"
    assert eval_expr(Not(Reg("Z")), {"Z": "10"}) == "0"


def test_run_ra_examples():
    assert run_ra(parse_sifp("R <- eps.1"))["R"] == "1"
    assert run_ra(parse_sifp("flip(eps)"), oracle=Oracle({"": 0}))["R"] == "0"
    out = run_ra(parse_sifp("while (R) { R <- eps }"), {"R": "1"})
    assert out["R"] == ""


def test_while_guard_exactly_one():
    # 11 is not 1, so the body never runs
    out = run_ra(parse_sifp("while (R) { R <- eps.0 }"), {"R": "11"})
    assert out["R"] == "11"


def test_run_ra_fuel():
    with pytest.raises(SifpFuelExhausted):
        run_ra(parse_sifp("R <- eps.1; while (R) { Z <- eps }"), fuel=1000)


def test_run_la_examples():
    st, used = run_la(parse_sifp("randbit()"), stream=BitStream("1"))
    assert st["R"] == "1" and used == 1
    st, used = run_la(parse_sifp("randbit(); randbit()"), stream=BitStream("10"))
    assert st["R"] == "0" and used == 2
    st, used = run_la(parse_sifp("R <- eps.1.1", "LA"), stream=BitStream("0101"))
    assert used == 0 and st["R"] == "11"
    with pytest.raises(StreamUnderrun):
        run_la(parse_sifp("randbit()"), stream=BitStream(""))


def test_dist_examples():
    assert run_ra_dist(parse_sifp("flip(eps)")) == COIN
    assert run_ra_dist(parse_sifp("flip(eps); flip(eps)")) == COIN
    p = parse_sifp("randbit(); randbit()")
    assert run_la_dist(p) == COIN
    # four equally likely streams
    outs = [run_la(p, stream=BitStream("".join(b)))[0]["R"]
            for b in itertools.product("01", repeat=2)]
    assert sorted(outs) == ["0", "0", "1", "1"]


def test_dist_divergence_mass():
    p = parse_sifp("randbit(); while (R) { Z <- eps }")
    d = run_la_dist(p, fuel=200)
    assert d.divergence_mass == HALF and d.weights == {"0": HALF}
    assert d.total() == Dyadic(1)


def test_dialect_purity():
    with pytest.raises(SifpError):
        Program(seq(Flip(Eps()), RandBit()), "RA")
    with pytest.raises(SifpError):
        Program(RandBit(), "RA")
    with pytest.raises(SifpError):
        Program(Flip(Eps()), "LA")
    with pytest.raises(SifpError):
        parse_sifp("flip(eps); randbit()")


def test_registers():
    for good in ("X1", "Y12", "S3", "R", "Q", "Z", "T", "Z4"):
        assert check_register(good) == good
    for bad in ("X0", "W1", "x1", "RR"):
        with pytest.raises(SifpError):
            check_register(bad)


def test_syntax_roundtrip():
    src = "X2 <- X1.0; while (!(eps.1 sub X1) & Y1) { flip(Y1.1); Y1 <- R }; R <- Y1"
    p = parse_sifp(src)
    assert parse_sifp(format_stmt(p.body)) == p
    e = parse_expr("!(X1.0 sub Y2) & Z")
    assert e == And(Not(Prefix(Append(Reg("X1"), "0"), "Y2")), "Z")


def _rand_ra(rng, depth=3):
    r = rng.random()
    regs = ["X1", "Y1", "R"]
    if depth == 0 or r < 0.4:
        if rng.random() < 0.5:
            e = Reg(rng.choice(regs))
            for _ in range(rng.randrange(2)):
                e = Append(e, rng.choice("01"))
            return Flip(e)
        e = rng.choice([Eps(), Reg(rng.choice(regs)), Append(Reg(rng.choice(regs)), rng.choice("01"))])
        return Assign(rng.choice(["Y1", "R"]), e)
    return seq(*[_rand_ra(rng, depth - 1) for _ in range(rng.randint(2, 3))])


def test_ra_dist_matches_brute_force():
    rng = random.Random(9)
    for _ in range(60):
        p = Program(_rand_ra(rng), "RA")
        for x in ["", "1", "01"]:
            d = run_ra_dist(p, {"X1": x})
            hist = brute_histogram(lambda o: run_ra(p, {"X1": x}, o).get("R", ""))
            assert as_fractions(d) == hist


def test_la_dist_matches_stream_enumeration():
    rng = random.Random(10)
    for _ in range(40):
        body = _rand_ra(rng)
        # same shape with randbit in place of flip
        la = Program(_to_la(body), "LA")
        n = sum(1 for _ in _flips(body))
        d = run_la_dist(la)
        hist = {}
        for bits in itertools.product("01", repeat=n):
            st, used = run_la(la, stream=BitStream("".join(bits)))
            assert used == n
            hist[st.get("R", "")] = hist.get(st.get("R", ""), 0) + Fraction(1, 2 ** n)
        assert as_fractions(d) == hist


def _flips(s):
    from porkit.sifp import iter_stmts
    return [t for t in iter_stmts(s) if isinstance(t, Flip)]


def _to_la(s):
    from porkit.sifp import Seq
    if isinstance(s, Flip):
        return RandBit()
    if isinstance(s, Seq):
        return Seq(tuple(_to_la(t) for t in s.body))
    return s


def test_determinism():
    p = parse_sifp("flip(X1); Y1 <- R; flip(Y1); R <- R & Y1")
    o = Oracle({"": 1, "1": 1}, "zero")
    assert run_ra(p, {}, o) == run_ra(p, {}, o)
    assert run_ra_dist(p) == run_ra_dist(p)
