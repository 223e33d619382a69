"""SIFP while-languages over bit-string registers.

Two dialects share the syntax: RA programs read randomness with
``flip(e)`` (random access, coordinate addressed) and LA programs with
``randbit()`` (linear access to a bit stream).
"""

import re
from dataclasses import dataclass
from typing import Tuple

from .measure import DistBuilder, Distribution, OracleMiss, StreamUnderrun
from .por import CoordinateCapExceeded


class SifpError(ValueError):
    pass


class SifpFuelExhausted(RuntimeError):
    pass


REGISTER_RE = re.compile(r"^(?:[XYSZ][1-9][0-9]*|R|Q|Z|T)$")


def check_register(name: str) -> str:
    if not REGISTER_RE.match(name):
        raise SifpError(f"not a register name: {name!r}")
    return name


# ---------------------------------------------------------------- syntax trees


class Expr:
    pass


@dataclass(frozen=True)
class Eps(Expr):
    pass


@dataclass(frozen=True)
class Append(Expr):
    expr: Expr
    bit: str


@dataclass(frozen=True)
class Reg(Expr):
    name: str

    def __post_init__(self):
        check_register(self.name)


@dataclass(frozen=True)
class Prefix(Expr):
    """1 when expr is an initial subword of the register, else 0."""
    expr: Expr
    reg: str

    def __post_init__(self):
        check_register(self.reg)


@dataclass(frozen=True)
class And(Expr):
    """1 when both expr and the register equal 1, else 0."""
    expr: Expr
    reg: str

    def __post_init__(self):
        check_register(self.reg)


@dataclass(frozen=True)
class Not(Expr):
    """1 when expr equals 0, else 0."""
    expr: Expr


class Stmt:
    pass


@dataclass(frozen=True)
class Assign(Stmt):
    reg: str
    expr: Expr

    def __post_init__(self):
        check_register(self.reg)


@dataclass(frozen=True)
class Seq(Stmt):
    body: Tuple[Stmt, ...]

    def __post_init__(self):
        object.__setattr__(self, "body", tuple(self.body))


@dataclass(frozen=True)
class While(Stmt):
    guard: Expr
    body: Stmt


@dataclass(frozen=True)
class Flip(Stmt):
    expr: Expr


@dataclass(frozen=True)
class RandBit(Stmt):
    pass


def seq(*stmts) -> Stmt:
    """Flattening sequence constructor."""
    flat = []
    for s in stmts:
        if isinstance(s, Seq):
            flat.extend(s.body)
        elif isinstance(s, (list, tuple)):
            flat.extend(seq(*s).body if s else ())
        else:
            flat.append(s)
    return Seq(tuple(flat))


def iter_stmts(s: Stmt):
    yield s
    if isinstance(s, Seq):
        for t in s.body:
            yield from iter_stmts(t)
    elif isinstance(s, While):
        yield from iter_stmts(s.body)


def iter_exprs(e: Expr):
    yield e
    if isinstance(e, (Append, Prefix, And, Not)):
        yield from iter_exprs(e.expr)


def registers_of(s: Stmt) -> set:
    regs = set()
    for t in iter_stmts(s):
        exprs = []
        if isinstance(t, Assign):
            regs.add(t.reg)
            exprs.append(t.expr)
        elif isinstance(t, While):
            exprs.append(t.guard)
        elif isinstance(t, Flip):
            regs.add("R")
            exprs.append(t.expr)
        elif isinstance(t, RandBit):
            regs.add("R")
        for e in exprs:
            for x in iter_exprs(e):
                if isinstance(x, Reg):
                    regs.add(x.name)
                elif isinstance(x, (Prefix, And)):
                    regs.add(x.reg)
    return regs


def assigned_registers(s: Stmt) -> set:
    out = set()
    for t in iter_stmts(s):
        if isinstance(t, Assign):
            out.add(t.reg)
        elif isinstance(t, (Flip, RandBit)):
            out.add("R")
    return out


class Program:
    """A statement tagged with its dialect, ``RA`` or ``LA``."""

    def __init__(self, body: Stmt, dialect: str):
        if dialect not in ("RA", "LA"):
            raise SifpError(f"unknown dialect {dialect!r}")
        for t in iter_stmts(body):
            if dialect == "RA" and isinstance(t, RandBit):
                raise SifpError("randbit() is not part of the RA dialect")
            if dialect == "LA" and isinstance(t, Flip):
                raise SifpError("flip(e) is not part of the LA dialect")
        self.body = body
        self.dialect = dialect

    def __eq__(self, other):
        return isinstance(other, Program) and (self.body, self.dialect) == (other.body, other.dialect)

    def __hash__(self):
        return hash((self.body, self.dialect))

    def __str__(self):
        return format_stmt(self.body)

    def __repr__(self):
        return f"Program({self.dialect}, {format_stmt(self.body)!r})"


# ---------------------------------------------------------------- semantics


def eval_expr(e: Expr, store) -> str:
    cls = type(e)
    if cls is Reg:
        return store.get(e.name, "")
    if cls is Append:
        return eval_expr(e.expr, store) + e.bit
    if cls is Eps:
        return ""
    if cls is Prefix:
        return "1" if store.get(e.reg, "").startswith(eval_expr(e.expr, store)) else "0"
    if cls is And:
        return "1" if eval_expr(e.expr, store) == "1" and store.get(e.reg, "") == "1" else "0"
    if cls is Not:
        return "1" if eval_expr(e.expr, store) == "0" else "0"
    raise SifpError(f"not an expression: {e!r}")


# A continuation is a linked list (stmt, rest) so that branching shares it.

def _advance(cont, store, fuel):
    """Run deterministic steps until a random statement, the end, or fuel
    runs out.  Mutates ``store``.  Returns (kind, stmt, cont, fuel) with
    kind one of "done", "flip", "randbit", "fuel"."""
    while cont is not None:
        if fuel <= 0:
            return "fuel", None, cont, fuel
        fuel -= 1
        s, cont = cont
        cls = type(s)
        if cls is Assign:
            store[s.reg] = eval_expr(s.expr, store)
        elif cls is Seq:
            for t in reversed(s.body):
                cont = (t, cont)
        elif cls is While:
            if eval_expr(s.guard, store) == "1":
                cont = (s.body, (s, cont))
        elif cls is Flip or cls is RandBit:
            return ("flip" if cls is Flip else "randbit"), s, cont, fuel
        else:
            raise SifpError(f"not a statement: {s!r}")
    return "done", None, None, fuel


def _program(p, dialect):
    if isinstance(p, Program):
        if p.dialect != dialect:
            raise SifpError(f"expected an {dialect} program, got {p.dialect}")
        return p
    return Program(p, dialect)


def run_ra(p, store=None, oracle=None, fuel: int = 10 ** 6) -> dict:
    p = _program(p, "RA")
    store = dict(store or {})
    cont = (p.body, None)
    while True:
        kind, s, cont, fuel = _advance(cont, store, fuel)
        if kind == "done":
            return store
        if kind == "fuel":
            raise SifpFuelExhausted("SIFP program ran out of fuel")
        coord = eval_expr(s.expr, store)
        if oracle is None:
            raise OracleMiss(coord)
        store["R"] = "1" if oracle(coord) else "0"


def run_la(p, store=None, stream=None, fuel: int = 10 ** 6):
    """Returns (store, bits_consumed)."""
    p = _program(p, "LA")
    store = dict(store or {})
    cont = (p.body, None)
    used = 0
    while True:
        kind, s, cont, fuel = _advance(cont, store, fuel)
        if kind == "done":
            return store, used
        if kind == "fuel":
            raise SifpFuelExhausted("SIFP program ran out of fuel")
        if stream is None:
            raise StreamUnderrun(used)
        bit, stream = stream.take()
        used += 1
        store["R"] = "1" if bit else "0"


def _dist(p, store, fuel, dialect, coord_cap, out_reg):
    p = _program(p, dialect)
    out = DistBuilder()
    # (cont, store, fuel, path, depth); path maps coordinates to bits (RA)
    stack = [((p.body, None), dict(store or {}), fuel, {}, 0)]
    while stack:
        cont, st, f, path, depth = stack.pop()
        while True:
            kind, s, cont, f = _advance(cont, st, f)
            if kind == "done":
                out.add(st.get(out_reg, ""), depth)
                break
            if kind == "fuel":
                out.diverge(depth)
                break
            if kind == "flip":
                coord = eval_expr(s.expr, st)
                bit = path.get(coord)
                if bit is not None:
                    st["R"] = "1" if bit else "0"
                    continue
                if len(path) >= coord_cap:
                    raise CoordinateCapExceeded(f"more than {coord_cap} coordinates on one path")
                other = dict(st)
                other["R"] = "1"
                stack.append((cont, other, f, {**path, coord: 1}, depth + 1))
                path = {**path, coord: 0}
                st["R"] = "0"
                depth += 1
            else:
                if depth >= coord_cap:
                    raise CoordinateCapExceeded(f"more than {coord_cap} random bits on one path")
                other = dict(st)
                other["R"] = "1"
                stack.append((cont, other, f, path, depth + 1))
                st["R"] = "0"
                depth += 1
    return out.build()


def run_ra_dist(p, store=None, fuel: int = 10 ** 6, coord_cap: int = 24,
                out_reg: str = "R") -> Distribution:
    return _dist(p, store, fuel, "RA", coord_cap, out_reg)


def run_la_dist(p, store=None, fuel: int = 10 ** 6, out_reg: str = "R",
                max_bits: int = 24) -> Distribution:
    return _dist(p, store, fuel, "LA", max_bits, out_reg)


def inputs_store(args) -> dict:
    return {f"X{i + 1}": a for i, a in enumerate(args)}


# ---------------------------------------------------------------- text syntax


_TOKEN_RE = re.compile(r"\s*(<-|\.0|\.1|[(){};!&]|[A-Za-z_][A-Za-z0-9_]*|\S)")


def _tokens(src):
    src = "\n".join(line.split("#", 1)[0] for line in src.splitlines())
    pos, out = 0, []
    while pos < len(src):
        m = _TOKEN_RE.match(src, pos)
        if not m:
            break
        if m.group(1):
            out.append(m.group(1))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, src):
        self.toks = _tokens(src)
        self.pos = 0

    def peek(self):
        return self.toks[self.pos] if self.pos < len(self.toks) else None

    def next(self):
        tok = self.peek()
        if tok is None:
            raise SifpError("unexpected end of program")
        self.pos += 1
        return tok

    def expect(self, tok):
        got = self.next()
        if got != tok:
            raise SifpError(f"expected {tok!r}, got {got!r}")

    def register(self):
        return check_register(self.next())

    def stmts(self, closing=None):
        body = []
        while self.peek() is not None and self.peek() != closing:
            if self.peek() == ";":
                self.next()
                continue
            body.append(self.stmt())
            if self.peek() not in (";", closing, None):
                raise SifpError(f"expected ';' between statements, got {self.peek()!r}")
        return seq(*body)

    def stmt(self):
        tok = self.peek()
        if tok == "while":
            self.next()
            self.expect("(")
            guard = self.expr()
            self.expect(")")
            self.expect("{")
            body = self.stmts("}")
            self.expect("}")
            return While(guard, body)
        if tok == "flip":
            self.next()
            self.expect("(")
            e = self.expr()
            self.expect(")")
            return Flip(e)
        if tok == "randbit":
            self.next()
            self.expect("(")
            self.expect(")")
            return RandBit()
        reg = self.register()
        self.expect("<-")
        return Assign(reg, self.expr())

    def expr(self):
        e = self.unary()
        while self.peek() in ("sub", "&"):
            op = self.next()
            reg = self.register()
            e = Prefix(e, reg) if op == "sub" else And(e, reg)
        return e

    def unary(self):
        if self.peek() == "!":
            self.next()
            return Not(self.unary())
        return self.postfix()

    def postfix(self):
        tok = self.next()
        if tok == "(":
            e = self.expr()
            self.expect(")")
        elif tok == "eps":
            e = Eps()
        else:
            e = Reg(check_register(tok))
        while self.peek() in (".0", ".1"):
            e = Append(e, self.next()[1])
        return e


def parse_sifp(src: str, dialect: str = None) -> Program:
    """Parse a program.  The dialect defaults to LA when randbit() occurs
    and RA otherwise."""
    p = _Parser(src)
    body = p.stmts()
    if p.peek() is not None:
        raise SifpError(f"unexpected {p.peek()!r}")
    if dialect is None:
        dialect = "LA" if any(isinstance(t, RandBit) for t in iter_stmts(body)) else "RA"
    return Program(body, dialect)


def parse_expr(src: str) -> Expr:
    p = _Parser(src)
    e = p.expr()
    if p.peek() is not None:
        raise SifpError(f"unexpected {p.peek()!r}")
    return e


def format_expr(e: Expr) -> str:
    if isinstance(e, Eps):
        return "eps"
    if isinstance(e, Reg):
        return e.name
    if isinstance(e, Append):
        inner = format_expr(e.expr)
        if isinstance(e.expr, (Prefix, And, Not)):
            inner = f"({inner})"
        return f"{inner}.{e.bit}"
    if isinstance(e, Not):
        inner = format_expr(e.expr)
        if isinstance(e.expr, (Prefix, And)):
            inner = f"({inner})"
        return f"!{inner}"
    if isinstance(e, (Prefix, And)):
        op = "sub" if isinstance(e, Prefix) else "&"
        return f"{format_expr(e.expr)} {op} {e.reg}"
    raise SifpError(f"not an expression: {e!r}")


def format_stmt(s: Stmt, indent: int = 0) -> str:
    pad = "  " * indent
    if isinstance(s, Seq):
        if not s.body:
            return ""
        return ";\n".join(format_stmt(t, indent) for t in s.body)
    if isinstance(s, Assign):
        return f"{pad}{s.reg} <- {format_expr(s.expr)}"
    if isinstance(s, Flip):
        return f"{pad}flip({format_expr(s.expr)})"
    if isinstance(s, RandBit):
        return f"{pad}randbit()"
    if isinstance(s, While):
        body = format_stmt(s.body, indent + 1)
        if not body:
            return f"{pad}while ({format_expr(s.guard)}) {{ }}"
        return f"{pad}while ({format_expr(s.guard)}) {{\n{body}\n{pad}}}"
    raise SifpError(f"not a statement: {s!r}")
