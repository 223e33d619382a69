"""SIFP_LA -> multi-tape on-demand stream machine.

One tape per register plus a scratch tape ``e`` for expression values.
Between statements every register tape holds its value starting at the
head with blanks everywhere else.  ``randbit()`` is the only gadget whose
transitions consume stream bits.
"""

import re

from .sifp import (And, Append, Assign, Eps, Flip, Not, Prefix, Program, RandBit, Reg,
                   Seq, SifpError, While, registers_of)
from .stm import ANY, BLANK, MachineError, StmSpec, Transition

MAX_TAPES = 512
MAX_STATES = 2_000_000


def _reg_key(name):
    m = re.match(r"^([A-Z])(\d*)$", name)
    cls, num = m.group(1), m.group(2)
    order = {"X": 0}.get(cls, 1)
    return (order, cls, int(num) if num else 0)


class _Builder:
    def __init__(self, tapes: int):
        self.tapes = tapes
        self.count = 0
        self.rows = []
        self.alias = {}

    def new(self) -> str:
        self.count += 1
        if self.count > MAX_STATES:
            raise MachineError(f"state cap of {MAX_STATES} exceeded")
        return f"q{self.count}"

    def add(self, src, reads=None, writes=None, moves=None, nxt=None, tag="~"):
        r = [ANY] * self.tapes
        w = [ANY] * self.tapes
        m = ["S"] * self.tapes
        for i, s in (reads or {}).items():
            r[i] = s
        for i, s in (writes or {}).items():
            w[i] = s
        for i, s in (moves or {}).items():
            m[i] = s
        self.rows.append((src, tuple(r), tag, tuple(w), tuple(m), nxt))

    def resolve(self, q):
        while q in self.alias:
            q = self.alias[q]
        return q


class _Compiler:
    def __init__(self, regs, builder: _Builder):
        self.tape = {r: i for i, r in enumerate(regs)}
        self.e = len(regs)
        self.b = builder

    # -- tape gadgets

    def rewind_loop(self, t, k):
        """Head on the value or one past it: walk left to the blank, step right."""
        s = self.b.new()
        for c in "01":
            self.b.add(s, {t: c}, None, {t: "L"}, s)
        self.b.add(s, {t: BLANK}, None, {t: "R"}, k)
        return s

    def rewind(self, t, k):
        s = self.b.new()
        self.b.add(s, None, None, {t: "L"}, self.rewind_loop(t, k))
        return s

    def clear(self, t, k):
        s = self.b.new()
        for c in "01":
            self.b.add(s, {t: c}, {t: BLANK}, {t: "R"}, s)
        self.b.add(s, {t: BLANK}, None, None, k)
        return s

    def copy(self, src, dst, k):
        """dst (blank) <- src, both heads back at the start."""
        s, back = self.b.new(), self.b.new()
        for c in "01":
            self.b.add(s, {src: c}, {dst: c}, {src: "R", dst: "R"}, s)
        self.b.add(s, {src: BLANK}, None, {src: "L", dst: "L"}, back)
        for c in "01":
            self.b.add(back, {src: c}, None, {src: "L", dst: "L"}, back)
        self.b.add(back, {src: BLANK}, None, {src: "R", dst: "R"}, k)
        return s

    def result(self, value, k, *others):
        """Rewind e and the given register tapes, then set e to ``value``."""
        s = self.b.new()
        self.b.add(s, None, {self.e: value}, None, k)
        nxt = self.clear(self.e, s)
        for t in others:
            nxt = self.rewind(t, nxt)
        return self.rewind(self.e, nxt)

    # -- expressions: value left on e, head at its start

    def expr(self, x, k):
        e = self.e
        if isinstance(x, Eps):
            return self.clear(e, k)
        if isinstance(x, Reg):
            return self.clear(e, self.copy(self.tape[x.name], e, k))
        if isinstance(x, Append):
            s = self.b.new()
            for c in "01":
                self.b.add(s, {e: c}, None, {e: "R"}, s)
            self.b.add(s, {e: BLANK}, {e: x.bit}, None, self.rewind_loop(e, k))
            return self.expr(x.expr, s)
        if isinstance(x, Prefix):
            r = self.tape[x.reg]
            yes, no = self.result("1", k, r), self.result("0", k, r)
            s = self.b.new()
            for c in "01":
                self.b.add(s, {e: c, r: c}, None, {e: "R", r: "R"}, s)
                for d in "01" + BLANK:
                    if d != c:
                        self.b.add(s, {e: c, r: d}, None, None, no)
            self.b.add(s, {e: BLANK}, None, None, yes)
            return self.expr(x.expr, s)
        if isinstance(x, And):
            r = self.tape[x.reg]
            yes, no = self.result("1", k, r), self.result("0", k, r)
            a0, a1 = self.b.new(), self.b.new()
            for c in "01" + BLANK:
                for d in "01" + BLANK:
                    if c == d == "1":
                        self.b.add(a0, {e: c, r: d}, None, {e: "R", r: "R"}, a1)
                    else:
                        self.b.add(a0, {e: c, r: d}, None, None, no)
                    self.b.add(a1, {e: c, r: d}, None, None,
                               yes if c == d == BLANK else no)
            return self.expr(x.expr, a0)
        if isinstance(x, Not):
            yes, no = self.result("1", k), self.result("0", k)
            n0, n1 = self.b.new(), self.b.new()
            self.b.add(n0, {e: "0"}, None, {e: "R"}, n1)
            self.b.add(n0, {e: "1"}, None, None, no)
            self.b.add(n0, {e: BLANK}, None, None, no)
            self.b.add(n1, {e: BLANK}, None, None, yes)
            for c in "01":
                self.b.add(n1, {e: c}, None, None, no)
            return self.expr(x.expr, n0)
        raise SifpError(f"not an expression: {x!r}")

    # -- statements

    def stmt(self, s, k):
        if isinstance(s, Seq):
            for t in reversed(s.body):
                k = self.stmt(t, k)
            return k
        if isinstance(s, Assign):
            r = self.tape[s.reg]
            return self.expr(s.expr, self.clear(r, self.copy(self.e, r, k)))
        if isinstance(s, RandBit):
            r = self.tape["R"]
            draw = self.b.new()
            self.b.add(draw, None, {r: "0"}, None, k, tag="0")
            self.b.add(draw, None, {r: "1"}, None, k, tag="1")
            return self.clear(r, draw)
        if isinstance(s, While):
            e = self.e
            head = self.b.new()
            body = self.stmt(s.body, head)
            t0, t1 = self.b.new(), self.b.new()
            self.b.add(t0, {e: "1"}, None, {e: "R"}, t1)
            self.b.add(t0, {e: "0"}, None, None, k)
            self.b.add(t0, {e: BLANK}, None, None, k)
            self.b.add(t1, {e: BLANK}, None, {e: "L"}, body)
            for c in "01":
                self.b.add(t1, {e: c}, None, {e: "L"}, k)
            self.b.alias[head] = self.expr(s.guard, t0)
            return head
        if isinstance(s, Flip):
            raise SifpError("flip(e) is not part of the LA dialect")
        raise SifpError(f"not a statement: {s!r}")


def _meet(a, b):
    out = []
    for x, y in zip(a, b):
        if x == ANY:
            out.append(y)
        elif y == ANY or x == y:
            out.append(x)
        else:
            return None
    return tuple(out)


def _fuse_noops(rows, tapes, rounds: int = 6):
    """Replace each effect-free non-consuming transition s -> k by the
    transitions of k restricted to what s has read.  The machine takes
    fewer steps and computes the same function."""
    keep = ("*",) * tapes
    stay = ("S",) * tapes
    for _ in range(rounds):
        by_state = {}
        for row in rows:
            by_state.setdefault(row[0], []).append(row)
        out, changed = [], False
        for row in rows:
            src, rd, tag, w, m, nx = row
            if tag != "~" or w != keep or m != stay or nx == src:
                out.append(row)
                continue
            changed = True
            for _, rd2, tag2, w2, m2, nx2 in by_state.get(nx, ()):
                both = _meet(rd, rd2)
                if both is not None:
                    out.append((src, both, tag2, w2, m2, nx2))
        rows = out
        if not changed:
            break
    return rows


def _prune(rows, initial):
    by_state = {}
    for row in rows:
        by_state.setdefault(row[0], []).append(row)
    seen, todo = {initial}, [initial]
    while todo:
        q = todo.pop()
        for row in by_state.get(q, ()):
            if row[5] not in seen:
                seen.add(row[5])
                todo.append(row[5])
    return [row for row in rows if row[0] in seen]


def sifpla_to_odstm(p: Program, arity: int = None) -> StmSpec:
    """Compile an LA program; inputs go to the tapes of X1..X<arity>."""
    if p.dialect != "LA":
        raise SifpError("expected an LA program")
    regs = set(registers_of(p.body)) | {"R"}
    if arity is None:
        arity = max((int(r[1:]) for r in regs if r.startswith("X") and r[1:]), default=0)
    regs |= {f"X{i + 1}" for i in range(arity)}
    regs = sorted(regs, key=_reg_key)
    if len(regs) + 1 > MAX_TAPES:
        raise MachineError(f"register cap of {MAX_TAPES} exceeded")
    b = _Builder(len(regs) + 1)
    comp = _Compiler(regs, b)
    r = comp.tape["R"]
    # final gadget: move the output head past the value
    fin = b.new()
    for c in "01":
        b.add(fin, {r: c}, None, {r: "R"}, fin)
    start = comp.stmt(p.body, fin)
    q0 = b.new()
    b.alias[q0] = start
    initial = b.resolve(q0)
    rows = [(b.resolve(src), rd, tag, w, m, b.resolve(nx)) for src, rd, tag, w, m, nx in b.rows]
    rows = _prune(_fuse_noops(rows, b.tapes), initial)
    ts = [Transition(*row) for row in rows]
    used = {initial} | {t.state for t in ts} | {t.next for t in ts}
    states = tuple(sorted(used, key=lambda q: int(q[1:])))
    inputs = tuple(comp.tape[f"X{i + 1}"] for i in range(arity))
    return StmSpec(states, initial, b.tapes, tuple(ts), inputs, r)


def tape_names(p: Program, arity: int = None):
    regs = set(registers_of(p.body)) | {"R"}
    if arity is None:
        arity = max((int(r[1:]) for r in regs if r.startswith("X") and r[1:]), default=0)
    regs |= {f"X{i + 1}" for i in range(arity)}
    return sorted(regs, key=_reg_key) + ["e"]
