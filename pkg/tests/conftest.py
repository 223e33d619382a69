import itertools
import sys
from fractions import Fraction

from porkit.bits import all_tuples
from porkit.measure import Oracle
from porkit.por import eval_por
from porkit.stm import NOCONSUME, applicable, apply_transition, initial_config


class Recording:
    """Oracle wrapper that remembers which coordinates were read."""

    def __init__(self, inner):
        self.inner = inner
        self.seen = set()

    def __call__(self, c):
        self.seen.add(c)
        return self.inner(c)


def queried_closure(run):
    """Coordinates that some oracle can make ``run`` read.

    Starts from nothing and grows K until every table over K (with either
    constant default) only reads coordinates already in K.
    """
    ks = set()
    while True:
        found = set(ks)
        order = sorted(ks)
        for bits in itertools.product((0, 1), repeat=len(order)):
            for policy in ("zero", "one"):
                rec = Recording(Oracle(dict(zip(order, bits)), policy))
                run(rec)
                found |= rec.seen
        if found == ks:
            return order
        ks = found


def brute_histogram(run):
    """Output histogram of ``run(oracle)`` over all tables on the
    coordinates it can read, as Fractions."""
    ks = queried_closure(run)
    hist = {}
    for bits in itertools.product((0, 1), repeat=len(ks)):
        out = run(Oracle(dict(zip(ks, bits)), "strict"))
        hist[out] = hist.get(out, 0) + Fraction(1, 2 ** len(ks))
    return hist


def por_histogram(f, args):
    return brute_histogram(lambda o: eval_por(f, list(args), o))


def as_fractions(dist):
    return {k: w.to_fraction() for k, w in dist.weights.items()}


def inputs(arity, max_len):
    return list(all_tuples(arity, max_len))


def enumerated_layer(m, inp, n):
    """Configuration measures after exactly n steps, by running every
    stream of length n through the reference step function."""
    out = {}
    for bits in itertools.product("01", repeat=n):
        c, stream, alive = initial_config(m, inp), list(bits), True
        for _ in range(n):
            tags = applicable(m, c)
            if NOCONSUME in tags:
                c = apply_transition(c, tags[NOCONSUME])
                continue
            b = stream.pop(0)
            if b not in tags:
                alive = False
                break
            c = apply_transition(c, tags[b])
        if alive:
            out[c] = out.get(c, Fraction(0)) + Fraction(1, 2 ** n)
    return out


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)
