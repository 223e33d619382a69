"""A simply typed lambda calculus over bit strings with a coin-flip constant,
and translations to and from POR functions."""

import itertools
import re
from dataclasses import dataclass

from .bits import truncate
from .measure import Oracle


class LambdaError(ValueError):
    pass


class LambdaTypeError(LambdaError):
    pass


class LambdaFuelExhausted(RuntimeError):
    pass


class Unsupported(LambdaError):
    """The term lies outside the fragment that can be read back as POR."""


# ---------------------------------------------------------------- types


class LType:
    pass


@dataclass(frozen=True)
class Base(LType):
    def __str__(self):
        return "s"


@dataclass(frozen=True)
class Arrow(LType):
    dom: LType
    cod: LType

    def __str__(self):
        d = f"({self.dom})" if isinstance(self.dom, Arrow) else str(self.dom)
        return f"{d} -> {self.cod}"


S_T = Base()


def arrows(*ts) -> LType:
    out = ts[-1]
    for t in reversed(ts[:-1]):
        out = Arrow(t, out)
    return out


def first_order(n: int) -> LType:
    return arrows(*([S_T] * (n + 1)))


def order(t: LType) -> int:
    if isinstance(t, Base):
        return 0
    return max(order(t.dom) + 1, order(t.cod))


_S2 = first_order(2)

SIGNATURES = {
    "eps": S_T,
    "0": S_T,
    "1": S_T,
    "o": first_order(2),
    "Tail": first_order(1),
    "Trunc": first_order(2),
    "Cond": first_order(4),
    "Flipcoin": first_order(1),
    "Times": first_order(2),
    "Rec": arrows(S_T, _S2, _S2, first_order(1), S_T, S_T),
}

# number of arguments a constant needs before its equations apply
DELTA_ARITY = {"o": 2, "Tail": 1, "Trunc": 2, "Cond": 4, "Flipcoin": 1, "Times": 2, "Rec": 5}


# ---------------------------------------------------------------- terms


class LTerm:
    def __str__(self):
        return format_lterm(self)


@dataclass(frozen=True)
class LVar(LTerm):
    name: str


@dataclass(frozen=True)
class Lam(LTerm):
    var: str
    ty: LType
    body: LTerm


@dataclass(frozen=True)
class App(LTerm):
    fn: LTerm
    arg: LTerm


@dataclass(frozen=True)
class Const(LTerm):
    name: str

    def __post_init__(self):
        if self.name not in SIGNATURES:
            raise LambdaError(f"unknown constant {self.name!r}")


EPS = Const("eps")
O = Const("o")
BITS = {"0": Const("0"), "1": Const("1")}


def app(f, *args) -> LTerm:
    for a in args:
        f = App(f, a)
    return f


def lam(params, body) -> LTerm:
    """lam(["x", "y"], body) with every parameter of base type."""
    for p in reversed(params):
        body = Lam(p, S_T, body)
    return body


def spine(t):
    args = []
    while isinstance(t, App):
        args.append(t.arg)
        t = t.fn
    return t, args[::-1]


_NO_VARS = frozenset()


def free_vars(t) -> frozenset:
    got = t.__dict__.get("_fv")
    if got is not None:
        return got
    if isinstance(t, LVar):
        got = frozenset((t.name,))
    elif isinstance(t, Lam):
        got = free_vars(t.body) - {t.var}
    elif isinstance(t, App):
        got = free_vars(t.fn) | free_vars(t.arg)
    else:
        got = _NO_VARS
    object.__setattr__(t, "_fv", got)
    return got


def _fresh(base, avoid):
    stem = base.rstrip("'0123456789") or "v"
    for i in itertools.count(1):
        name = f"{stem}{i}"
        if name not in avoid:
            return name


def subst(t, x, u, fv_u=None):
    """t with u for the free occurrences of x, renaming binders as needed."""
    if x not in free_vars(t):
        return t
    if fv_u is None:
        fv_u = free_vars(u)
    if isinstance(t, LVar):
        return u if t.name == x else t
    if isinstance(t, App):
        return App(subst(t.fn, x, u, fv_u), subst(t.arg, x, u, fv_u))
    if isinstance(t, Lam):
        if t.var == x:
            return t
        if t.var in fv_u and x in free_vars(t.body):
            new = _fresh(t.var, fv_u | free_vars(t.body))
            body = subst(t.body, t.var, LVar(new))
            return Lam(new, t.ty, subst(body, x, u, fv_u))
        return Lam(t.var, t.ty, subst(t.body, x, u, fv_u))
    return t


# ---------------------------------------------------------------- numerals


def numeral(sigma: str) -> LTerm:
    """eps for the empty string, then one ``o`` per bit: 01 is (eps o 0) o 1."""
    t = EPS
    for c in sigma:
        t = App(App(O, t), BITS[c])
    return t


def as_bits(t):
    """The string of a numeral, or None when t is not one."""
    out = []
    while True:
        if t == EPS:
            return "".join(reversed(out))
        if isinstance(t, App) and isinstance(t.arg, Const) and t.arg.name in BITS \
                and isinstance(t.fn, App) and t.fn.fn == O:
            out.append(t.arg.name)
            t = t.fn.arg
            continue
        return None


def denumeral(t: LTerm) -> str:
    """Read back a closed term built from eps, 0, 1 and o."""
    if isinstance(t, Const) and t.name in ("eps", "0", "1"):
        return "" if t.name == "eps" else t.name
    head, args = spine(t)
    if head == O and len(args) == 2:
        return denumeral(args[0]) + denumeral(args[1])
    raise LambdaError(f"not a numeral: {format_lterm(t)}")


# ---------------------------------------------------------------- typing


def typecheck(t: LTerm, ctx=None) -> LType:
    ctx = dict(ctx or {})
    return _type(t, ctx)


def _type(t, ctx):
    closed = not free_vars(t)
    if closed:
        got = t.__dict__.get("_ty")
        if got is not None:
            return got
    ty = _type_of(t, ctx)
    if closed:
        object.__setattr__(t, "_ty", ty)
    return ty


def _type_of(t, ctx):
    if isinstance(t, Const):
        return SIGNATURES[t.name]
    if isinstance(t, LVar):
        if t.name not in ctx:
            raise LambdaTypeError(f"unbound variable {t.name!r}")
        return ctx[t.name]
    if isinstance(t, Lam):
        inner = dict(ctx)
        inner[t.var] = t.ty
        return Arrow(t.ty, _type(t.body, inner))
    if isinstance(t, App):
        ft = _type(t.fn, ctx)
        at = _type(t.arg, ctx)
        if not isinstance(ft, Arrow):
            raise LambdaTypeError(
                f"in {format_lterm(t)}: {format_lterm(t.fn)} has type {ft}, not a function")
        if ft.dom != at:
            raise LambdaTypeError(
                f"in {format_lterm(t)}: argument {format_lterm(t.arg)} has type {at}, "
                f"expected {ft.dom}")
        return ft.cod
    raise LambdaError(f"not a term: {t!r}")


# ---------------------------------------------------------------- normalisation


class FlipTable(Oracle):
    """Answers for Flipcoin on numerals; a table oracle under another name."""


class _Normaliser:
    def __init__(self, table, fuel, check_types):
        self.table = table
        self.fuel = fuel
        self.check = check_types

    def tick(self):
        self.fuel -= 1
        if self.fuel < 0:
            raise LambdaFuelExhausted("normalisation ran out of fuel")

    def rewrote(self, before, after):
        # subject reduction, checked on closed redexes only
        if self.check and not free_vars(before):
            a, b = typecheck(before), typecheck(after)
            if a != b:
                raise AssertionError(f"rewrite changed type {a} to {b}")

    def nf(self, t):
        head, args = spine(t)
        if isinstance(head, Lam):
            if not args:
                return Lam(head.var, head.ty, self.nf(head.body))
            self.tick()
            arg = args[0]
            # closed base-type arguments are evaluated once, then shared
            if head.ty == S_T and not free_vars(arg):
                arg = self.nf(arg)
            out = app(subst(head.body, head.var, arg), *args[1:])
            self.rewrote(app(head, *args), out)
            return self.nf(out)
        if isinstance(head, LVar):
            return app(head, *[self.nf(a) for a in args])
        if isinstance(head, Const):
            return self.delta(head, args)
        raise LambdaError(f"not a term: {t!r}")

    def delta(self, c, args):
        name = c.name
        if name == "eps":
            return EPS
        if name in BITS:
            # a lone bit is the numeral of that bit
            return numeral(name) if not args else app(c, *args)
        need = DELTA_ARITY[name]
        if len(args) < need:
            return app(c, *[self.nf(a) for a in args])
        main, extra = args[:need], args[need:]
        if extra:
            raise LambdaTypeError(f"{name} applied to too many arguments")
        if name == "Rec":
            return self.rec(*main)
        if name == "o" and isinstance(main[1], Const) and main[1].name in BITS:
            left = self.nf(main[0])
            return App(App(O, left), main[1])
        if name == "Cond":
            x = self.nf(main[0])
            bits = as_bits(x)
            if bits is None:
                return app(c, x, *[self.nf(a) for a in main[1:]])
            self.tick()
            pick = main[1] if not bits else main[2] if bits[-1] == "0" else main[3]
            return self.nf(pick)
        vals = [self.nf(a) for a in main]
        bits = [as_bits(v) for v in vals]
        if any(b is None for b in bits):
            return app(c, *vals)
        self.tick()
        if name == "o":
            out = bits[0] + bits[1]
        elif name == "Tail":
            out = bits[0][:-1]
        elif name == "Trunc":
            out = truncate(bits[0], bits[1])
        elif name == "Times":
            out = bits[0] * len(bits[1])
        elif name == "Flipcoin":
            if self.table is None:
                return app(c, *vals)
            out = str(self.table(bits[0]))
        else:
            raise LambdaError(f"no equations for {name}")
        result = numeral(out)
        self.rewrote(app(c, *vals), result)
        return result

    def rec(self, g, h0, h1, k, y):
        yv = self.nf(y)
        ybits = as_bits(yv)
        if ybits is None:
            return app(Const("Rec"), self.nf(g), self.nf(h0), self.nf(h1), self.nf(k), yv)
        acc = self.nf(g)
        for i, b in enumerate(ybits):
            self.tick()
            u = numeral(ybits[:i])
            h = h0 if b == "0" else h1
            step = self.nf(app(h, u, acc))
            bound = self.nf(App(k, u))
            sv, bv = as_bits(step), as_bits(bound)
            if sv is None or bv is None:
                acc = app(Const("Trunc"), step, bound)
                continue
            acc = numeral(truncate(sv, bv))
            if len(ybits) and len(truncate(sv, bv)) > len(bv):
                raise AssertionError("recursion value exceeds its bound")
        return acc


def eta(t: LTerm) -> LTerm:
    """Contract every lambda x. t x with x not free in t."""
    if isinstance(t, Lam):
        body = eta(t.body)
        if isinstance(body, App) and body.arg == LVar(t.var) and t.var not in free_vars(body.fn):
            return body.fn
        return Lam(t.var, t.ty, body)
    if isinstance(t, App):
        return App(eta(t.fn), eta(t.arg))
    return t


def normalize(t: LTerm, table=None, fuel: int = 10 ** 6, check_types: bool = False,
              contract: bool = True) -> LTerm:
    """Normal form of a well-typed term.

    ``table`` answers Flipcoin on numerals (any callable string -> bit);
    with no table Flipcoin stays unevaluated.  Eta contraction runs on the
    result when ``contract`` is set.
    """
    typecheck(t)
    out = _Normaliser(table, fuel, check_types).nf(t)
    return eta(out) if contract else out


def run(t: LTerm, args, table=None, fuel: int = 10 ** 6) -> str:
    """Apply t to the numerals of ``args`` and read the result back."""
    out = normalize(app(t, *[numeral(a) for a in args]), table, fuel)
    bits = as_bits(out)
    if bits is None:
        raise LambdaError(f"result is not a numeral: {format_lterm(out)}")
    return bits


# ---------------------------------------------------------------- syntax


_TOKEN = re.compile(r"\s*(->|=>|\\|λ|[():.]|[01]+|[A-Za-z_][A-Za-z0-9_']*)")
_CONST_NAMES = {"eps", "o", "Tail", "Trunc", "Cond", "Flipcoin", "Rec", "Times"}


def _lex(src):
    src = re.sub(r"#[^\n]*", "", src).rstrip()
    pos, out = 0, []
    while pos < len(src):
        m = _TOKEN.match(src, pos)
        if not m:
            raise LambdaError(f"unexpected character at {pos}: {src[pos:pos + 10]!r}")
        out.append(m.group(1))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, src, env):
        self.toks = _lex(src)
        self.pos = 0
        self.env = env or {}

    def peek(self):
        return self.toks[self.pos] if self.pos < len(self.toks) else None

    def next(self):
        tok = self.peek()
        if tok is None:
            raise LambdaError("unexpected end of input")
        self.pos += 1
        return tok

    def expect(self, tok):
        got = self.next()
        if got != tok:
            raise LambdaError(f"expected {tok!r}, got {got!r} at token {self.pos}")

    def type_(self):
        tok = self.next()
        if tok == "(":
            dom = self.type_()
            self.expect(")")
        elif tok == "s":
            dom = S_T
        else:
            raise LambdaError(f"bad type at {tok!r}")
        if self.peek() in ("->", "=>"):
            self.next()
            return Arrow(dom, self.type_())
        return dom

    def term(self, bound):
        items = []
        while True:
            tok = self.peek()
            if tok in ("\\", "λ"):
                items.append(self.lam(bound))
                break
            if tok is None or tok in (")",):
                break
            items.append(self.atom(bound))
        if not items:
            raise LambdaError(f"expected a term at token {self.pos}")
        return app(*items)

    def lam(self, bound):
        self.next()
        var = self.next()
        if not re.match(r"^[A-Za-z_]", var) or var in _CONST_NAMES:
            raise LambdaError(f"bad variable name {var!r}")
        self.expect(":")
        ty = self.type_()
        self.expect(".")
        return Lam(var, ty, self.term(bound | {var}))

    def atom(self, bound):
        tok = self.next()
        if tok == "(":
            t = self.term(bound)
            self.expect(")")
            return t
        if re.match(r"^[01]+$", tok):
            return BITS[tok] if len(tok) == 1 else numeral(tok)
        if tok in bound:
            return LVar(tok)
        if tok in self.env:
            return self.env[tok]
        if tok in _CONST_NAMES:
            return Const(tok)
        if re.match(r"^[A-Za-z_]", tok):
            return LVar(tok)
        raise LambdaError(f"unexpected {tok!r}")


def parse_lterm(src: str, env=None) -> LTerm:
    """Parse ``\\x:s. body`` syntax; names in ``env`` expand to their terms."""
    p = _Parser(src, env)
    t = p.term(frozenset())
    if p.peek() is not None:
        raise LambdaError(f"unexpected {p.peek()!r} at token {p.pos}")
    return t


def parse_ltype(src: str) -> LType:
    p = _Parser(src, None)
    t = p.type_()
    if p.peek() is not None:
        raise LambdaError(f"unexpected {p.peek()!r}")
    return t


def format_lterm(t: LTerm, ctx: int = 0) -> str:
    """ctx 0: anywhere, 1: function position, 2: argument position."""
    bits = as_bits(t)
    if bits is not None and len(bits) >= 2:
        return bits
    if isinstance(t, Const):
        return t.name
    if isinstance(t, LVar):
        return t.name
    if isinstance(t, Lam):
        s = f"\\{t.var}:{t.ty}. {format_lterm(t.body)}"
        return f"({s})" if ctx else s
    if isinstance(t, App):
        s = f"{format_lterm(t.fn, 1)} {format_lterm(t.arg, 2)}"
        return f"({s})" if ctx == 2 else s
    raise LambdaError(f"not a term: {t!r}")


# ---------------------------------------------------------------- combinators


_STDLIB_SRC = [
    ("B", r"\x:s. Cond x eps 0 1"),
    ("BNeg", r"\x:s. Cond x eps 1 0"),
    ("BOr", r"\x:s. \y:s. Cond (B x) (B y) (B y) 1"),
    ("BAnd", r"\x:s. \y:s. Cond (B x) eps 0 (B y)"),
    ("Eps", r"\x:s. Cond x 1 0 0"),
    ("Bool", r"\x:s. BAnd (Eps (Tail x)) (BNeg (Eps x))"),
    ("Zero", r"\x:s. Cond (Bool x) 0 0 (Cond x 0 1 0)"),
    ("Conc", r"\x:s. \y:s. Rec x (\u:s. \v:s. o v 0) (\u:s. \v:s. o v 1) (\u:s. o (o x u) 1) y"),
    ("Times", r"\x:s. \y:s. Rec eps (\u:s. \v:s. Conc v x) (\u:s. \v:s. Conc v x)"
              r" (\u:s. Times x (o u 1)) y"),
    # drop x y: x without its last |y| bits
    ("Drop", r"\x:s. \y:s. Rec x (\u:s. \v:s. Tail v) (\u:s. \v:s. Tail v) (\u:s. x) y"),
    # at x u: the bit of x at position |u|, or eps when x is too short
    ("At", r"\x:s. \u:s. Cond (Drop (Trunc x (o u 1)) u) eps (B (Trunc x (o u 1)))"
           r" (B (Trunc x (o u 1)))"),
    # bit by bit: each x[|u|] must exist and match, and x may not be longer
    ("Eq", r"\x:s. \y:s. BAnd"
           r" (Rec 1 (\u:s. \v:s. BAnd v (Cond (At x u) 0 1 0))"
           r"        (\u:s. \v:s. BAnd v (Cond (At x u) 0 0 1))"
           r"        (\u:s. 1) y)"
           r" (Eps (Drop x y))"),
    ("Sub", r"\x:s. \y:s. Rec (Eps x) (\u:s. \v:s. BOr v (Eq x (o u 0)))"
            r" (\u:s. \v:s. BOr v (Eq x (o u 1))) (\u:s. 1) y"),
]


def lambda_stdlib() -> dict:
    env = {}
    for name, src in _STDLIB_SRC:
        # inside its own definition Times names the primitive constant
        t = parse_lterm(src, env)
        typecheck(t)
        env[name] = t
    return dict(env)


# ---------------------------------------------------------------- POR <-> lambda


def _bound_term(b, xs, y):
    from .por import BBit, BCat, BEps, BTimes, BX, BY

    if isinstance(b, BEps):
        return EPS
    if isinstance(b, BBit):
        return BITS[b.bit]
    if isinstance(b, BX):
        return LVar(xs[b.index - 1])
    if isinstance(b, BY):
        return LVar(y)
    if isinstance(b, BCat):
        right = _bound_term(b.right, xs, y)
        return app(O, _bound_term(b.left, xs, y), right)
    if isinstance(b, BTimes):
        return app(Const("Times"), _bound_term(b.left, xs, y), _bound_term(b.right, xs, y))
    raise LambdaError(f"not a bound term: {b!r}")


def _params(n, stem="x"):
    return [f"{stem}{i + 1}" for i in range(n)]


def por_to_lambda(f) -> LTerm:
    """A closed term of type s -> ... -> s representing f."""
    from .por import BRec, C, Comp, E, P, PorError, Q, S

    if isinstance(f, E):
        return Lam("x", S_T, EPS)
    if isinstance(f, P):
        xs = _params(f.n)
        return lam(xs, LVar(xs[f.i - 1]))
    if isinstance(f, S):
        return Lam("x", S_T, app(O, LVar("x"), BITS[f.bit]))
    if isinstance(f, C):
        return Const("Cond")
    if isinstance(f, Q):
        return Const("Flipcoin")
    if isinstance(f, Comp):
        xs = _params(f.arity)
        vs = [LVar(x) for x in xs]
        inner = [app(por_to_lambda(h), *vs) for h in f.hs]
        return lam(xs, app(por_to_lambda(f.g), *inner))
    if isinstance(f, BRec):
        n = f.g.arity
        xs = _params(n)
        vs = [LVar(x) for x in xs]
        step = [lam(["y", "z"], app(por_to_lambda(h), *vs, LVar("y"), LVar("z")))
                for h in (f.h0, f.h1)]
        k = Lam("y", S_T, _bound_term(f.bound, xs, "y"))
        body = app(Const("Rec"), app(por_to_lambda(f.g), *vs), step[0], step[1], k, LVar("w"))
        return lam(xs + ["w"], body)
    raise PorError(f"not a POR function: {f!r}")


def _arity(ty) -> int:
    n = 0
    while isinstance(ty, Arrow):
        if ty.dom != S_T:
            raise Unsupported(f"parameter of type {ty.dom} is not first order")
        n += 1
        ty = ty.cod
    return n


def _eta_expand(t, n, avoid):
    """Bring t to the shape lambda v1..vn. body (all base-type parameters)."""
    params = []
    while len(params) < n and isinstance(t, Lam):
        params.append(t.var)
        t = t.body
    used = set(avoid) | free_vars(t) | set(params)
    while len(params) < n:
        v = _fresh("v", used)
        used.add(v)
        params.append(v)
        t = App(t, LVar(v))
    return params, t


def lambda_to_por(t: LTerm):
    """A POR function computing the same thing as a closed first-order term.

    Supported: the constants, numerals, lambda and application, and Rec with
    a bound built from eps, 0, 1, o and Times over the parameters.
    """
    ty = typecheck(t)
    if free_vars(t):
        raise Unsupported("term is not closed")
    n = _arity(ty)
    if n == 0:
        raise Unsupported("a POR function needs at least one argument")
    t = normalize(t, None, contract=False)
    params, body = _eta_expand(t, n, ())
    body = _Normaliser(None, 10 ** 6, False).nf(body)
    return _tidy(_to_por(body, params))


def _tidy(f):
    """Drop compositions with the identity projections: comp g P1..Pn is g."""
    from .por import BRec, Comp, P

    if isinstance(f, Comp):
        g, hs = _tidy(f.g), tuple(_tidy(h) for h in f.hs)
        n = hs[0].arity
        if len(hs) == n and all(h == P(n, i + 1) for i, h in enumerate(hs)):
            return g
        return Comp(g, hs)
    if isinstance(f, BRec):
        return BRec(_tidy(f.g), _tidy(f.h0), _tidy(f.h1), f.bound)
    return f


def _to_por(t, ctx):
    from .por import BRec, C, Comp, E, P, Q, S
    from .por_lib import CONC, TAIL, TIMES, TRUNC

    n = len(ctx)
    bits = as_bits(t)
    if bits is not None or (isinstance(t, Const) and t.name in BITS):
        bits = bits if bits is not None else t.name
        out = Comp(E(), (P(n, 1),))
        for c in bits:
            out = Comp(S(c), (out,))
        return out
    if isinstance(t, LVar):
        # innermost binding wins
        if t.name not in ctx:
            raise Unsupported(f"free variable {t.name!r}")
        return P(n, n - ctx[::-1].index(t.name))
    head, args = spine(t)
    if not isinstance(head, Const):
        raise Unsupported(f"cannot translate {format_lterm(t)}")
    name = head.name
    if DELTA_ARITY.get(name) != len(args):
        raise Unsupported(f"{name} is not fully applied in {format_lterm(t)}")
    if name == "o":
        if isinstance(args[1], Const) and args[1].name in BITS:
            return Comp(S(args[1].name), (_to_por(args[0], ctx),))
        return Comp(CONC, (_to_por(args[0], ctx), _to_por(args[1], ctx)))
    sub = [None] * len(args)
    if name != "Rec":
        sub = [_to_por(a, ctx) for a in args]
    if name == "Tail":
        return Comp(TAIL, tuple(sub))
    if name == "Trunc":
        return Comp(TRUNC, tuple(sub))
    if name == "Times":
        return Comp(TIMES, tuple(sub))
    if name == "Cond":
        return Comp(C(), tuple(sub))
    if name == "Flipcoin":
        return Comp(Q(), tuple(sub))
    # Rec(g, h0, h1, k, y): recursion on the value of y
    g, h0, h1, k, y = args
    steps = []
    for h in (h0, h1):
        vs, body = _eta_expand(h, 2, ctx)
        body = _Normaliser(None, 10 ** 6, False).nf(body)
        steps.append(_to_por(body, list(ctx) + vs))
    kv, kbody = _eta_expand(k, 1, ctx)
    kbody = _Normaliser(None, 10 ** 6, False).nf(kbody)
    # subterms of the bound that are not bound terms become extra parameters
    extras = []
    bound = _to_bound(kbody, ctx, kv[0], extras)
    if extras:
        wide = list(ctx) + [f"#{j}" for j in range(len(extras))]
        m = len(wide)
        steps = [_widen(h, n, m) for h in steps]
        g_por = _widen(_to_por(g, ctx), n, m, extra=0)
    else:
        g_por = _to_por(g, ctx)
    rec = BRec(g_por, steps[0], steps[1], bound)
    return Comp(rec, tuple(P(n, i + 1) for i in range(n))
                + tuple(_to_por(e, ctx) for e in extras) + (_to_por(y, ctx),))


def _widen(f, n, m, extra=2):
    """f over n parameters (plus ``extra`` trailing ones) as a function of
    m >= n parameters (plus the same trailing ones) ignoring the new ones."""
    from .por import Comp, P

    total = m + extra
    picks = [P(total, i + 1) for i in range(n)] + [P(total, m + j + 1) for j in range(extra)]
    return Comp(f, tuple(picks))


def _to_bound(t, ctx, y, extras):
    from .por import BBit, BCat, BEps, BTimes, BX, BY

    bits = as_bits(t)
    if bits is not None:
        out = BEps()
        for c in bits:
            out = BBit(c) if isinstance(out, BEps) else BCat(out, BBit(c))
        return out
    if isinstance(t, Const) and t.name in BITS:
        return BBit(t.name)
    if isinstance(t, LVar):
        if t.name == y:
            return BY()
        if t.name in ctx:
            return BX(len(ctx) - ctx[::-1].index(t.name))
        raise Unsupported(f"free variable {t.name!r} in a bound")
    head, args = spine(t)
    if head == O and len(args) == 2:
        return BCat(_to_bound(args[0], ctx, y, extras), _to_bound(args[1], ctx, y, extras))
    if head == Const("Times") and len(args) == 2:
        return BTimes(_to_bound(args[0], ctx, y, extras), _to_bound(args[1], ctx, y, extras))
    if y in free_vars(t):
        raise Unsupported(f"recursion bound {format_lterm(t)} is not a bound term")
    if t not in extras:
        extras.append(t)
    return BX(len(ctx) + extras.index(t) + 1)
