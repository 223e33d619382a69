"""The POR function algebra: syntax, evaluation against an oracle, exact
output distributions, and syntactic size bounds."""

from dataclasses import dataclass
from typing import Tuple

from .bits import format_bits, truncate
from .measure import DistBuilder, Distribution


class PorError(ValueError):
    pass


class FuelExhausted(RuntimeError):
    pass


class CoordinateCapExceeded(RuntimeError):
    pass


# ---------------------------------------------------------------- bound terms


class BoundTerm:
    """Terms built from eps, 0, 1, variables x_i and y, cat and times."""

    def max_x(self) -> int:
        return 0

    def uses_y(self) -> bool:
        return False


@dataclass(frozen=True)
class BEps(BoundTerm):
    def __str__(self):
        return "(eps)"


@dataclass(frozen=True)
class BBit(BoundTerm):
    bit: str

    def __post_init__(self):
        if self.bit not in ("0", "1"):
            raise PorError("bound bit must be 0 or 1")

    def __str__(self):
        return f"(b{self.bit})"


@dataclass(frozen=True)
class BX(BoundTerm):
    index: int

    def __post_init__(self):
        if self.index < 1:
            raise PorError("bound variable index starts at 1")

    def max_x(self):
        return self.index

    def __str__(self):
        return f"(x {self.index})"


@dataclass(frozen=True)
class BY(BoundTerm):
    def uses_y(self):
        return True

    def __str__(self):
        return "(y)"


@dataclass(frozen=True)
class BCat(BoundTerm):
    left: BoundTerm
    right: BoundTerm

    def max_x(self):
        return max(self.left.max_x(), self.right.max_x())

    def uses_y(self):
        return self.left.uses_y() or self.right.uses_y()

    def __str__(self):
        return f"(cat {self.left} {self.right})"


@dataclass(frozen=True)
class BTimes(BoundTerm):
    left: BoundTerm
    right: BoundTerm

    def max_x(self):
        return max(self.left.max_x(), self.right.max_x())

    def uses_y(self):
        return self.left.uses_y() or self.right.uses_y()

    def __str__(self):
        return f"(times {self.left} {self.right})"


def eval_bound(t: BoundTerm, xs, y: str = "") -> str:
    if isinstance(t, BEps):
        return ""
    if isinstance(t, BBit):
        return t.bit
    if isinstance(t, BX):
        return xs[t.index - 1]
    if isinstance(t, BY):
        return y
    if isinstance(t, BCat):
        return eval_bound(t.left, xs, y) + eval_bound(t.right, xs, y)
    if isinstance(t, BTimes):
        return eval_bound(t.left, xs, y) * len(eval_bound(t.right, xs, y))
    raise PorError(f"not a bound term: {t!r}")


def subst_bound(t: BoundTerm, xs=None, y=None) -> BoundTerm:
    """Replace x_i by xs[i-1] and y by ``y`` (when given)."""
    if isinstance(t, BX) and xs is not None:
        return xs[t.index - 1]
    if isinstance(t, BY) and y is not None:
        return y
    if isinstance(t, BCat):
        return BCat(subst_bound(t.left, xs, y), subst_bound(t.right, xs, y))
    if isinstance(t, BTimes):
        return BTimes(subst_bound(t.left, xs, y), subst_bound(t.right, xs, y))
    return t


# ---------------------------------------------------------------- functions


class PorFn:
    arity: int

    def __str__(self):
        return format_por(self)


@dataclass(frozen=True)
class E(PorFn):
    @property
    def arity(self):
        return 1


@dataclass(frozen=True)
class P(PorFn):
    n: int
    i: int

    def __post_init__(self):
        if not 1 <= self.i <= self.n:
            raise PorError(f"projection P({self.n},{self.i}) out of range")

    @property
    def arity(self):
        return self.n


@dataclass(frozen=True)
class S(PorFn):
    bit: str

    def __post_init__(self):
        if self.bit not in ("0", "1"):
            raise PorError("successor bit must be 0 or 1")

    @property
    def arity(self):
        return 1


@dataclass(frozen=True)
class C(PorFn):
    @property
    def arity(self):
        return 4


@dataclass(frozen=True)
class Q(PorFn):
    @property
    def arity(self):
        return 1


@dataclass(frozen=True)
class Comp(PorFn):
    g: PorFn
    hs: Tuple[PorFn, ...]

    def __post_init__(self):
        object.__setattr__(self, "hs", tuple(self.hs))
        if not self.hs:
            raise PorError("composition needs at least one inner function")
        if self.g.arity != len(self.hs):
            raise PorError(
                f"composition arity mismatch: outer takes {self.g.arity}, "
                f"got {len(self.hs)} inner functions")
        if len({h.arity for h in self.hs}) != 1:
            raise PorError("inner functions of a composition must share an arity")

    @property
    def arity(self):
        return self.hs[0].arity


@dataclass(frozen=True)
class BRec(PorFn):
    g: PorFn
    h0: PorFn
    h1: PorFn
    bound: BoundTerm

    def __post_init__(self):
        n = self.g.arity
        if self.h0.arity != n + 2 or self.h1.arity != n + 2:
            raise PorError("recursion steps must take the base arity plus two")
        if not isinstance(self.bound, BoundTerm):
            raise PorError("recursion bound must be a bound term")
        if self.bound.max_x() > n:
            raise PorError(f"bound mentions x_{self.bound.max_x()} but only {n} parameters exist")

    @property
    def arity(self):
        return self.g.arity + 1


def has_query(f: PorFn) -> bool:
    if isinstance(f, Q):
        return True
    if isinstance(f, Comp):
        return has_query(f.g) or any(has_query(h) for h in f.hs)
    if isinstance(f, BRec):
        return has_query(f.g) or has_query(f.h0) or has_query(f.h1)
    return False


def iter_nodes(f: PorFn):
    yield f
    if isinstance(f, Comp):
        yield from iter_nodes(f.g)
        for h in f.hs:
            yield from iter_nodes(h)
    elif isinstance(f, BRec):
        yield from iter_nodes(f.g)
        yield from iter_nodes(f.h0)
        yield from iter_nodes(f.h1)


# ---------------------------------------------------------------- evaluation


class _Fuel:
    __slots__ = ("left",)

    def __init__(self, n):
        self.left = n

    def tick(self):
        self.left -= 1
        if self.left < 0:
            raise FuelExhausted("POR evaluation ran out of fuel")


def _eval(f, args, oracle, fuel):
    fuel.tick()
    cls = type(f)
    if cls is P:
        return args[f.i - 1]
    if cls is Comp:
        inner = [_eval(h, args, oracle, fuel) for h in f.hs]
        return _eval(f.g, inner, oracle, fuel)
    if cls is BRec:
        xs = list(args[:-1])
        y = args[-1]
        acc = _eval(f.g, xs, oracle, fuel)
        for k in range(len(y)):
            u = y[:k]
            h = f.h0 if y[k] == "0" else f.h1
            bound = eval_bound(f.bound, xs, u)
            acc = truncate(_eval(h, xs + [u, acc], oracle, fuel), bound)
            if len(acc) > len(bound):  # truncation law
                raise AssertionError("recursion value exceeds its bound")
        return acc
    if cls is E:
        return ""
    if cls is S:
        return args[0] + f.bit
    if cls is C:
        x = args[0]
        if not x:
            return args[1]
        return args[2] if x[-1] == "0" else args[3]
    if cls is Q:
        return "1" if oracle(args[0]) else "0"
    raise PorError(f"not a POR function: {f!r}")


def eval_por(f: PorFn, args, oracle, fuel: int = 10 ** 6) -> str:
    """Value of f on args with queries answered by ``oracle``."""
    args = list(args)
    if len(args) != f.arity:
        raise PorError(f"expected {f.arity} arguments, got {len(args)}")
    return _eval(f, args, oracle, _Fuel(fuel))


class _Fresh(Exception):
    def __init__(self, coord):
        self.coord = coord


def eval_dist(f: PorFn, args, fuel: int = 10 ** 6, coord_cap: int = 24) -> Distribution:
    """Exact output distribution over a uniformly random oracle.

    Each run records the coordinates it has decided; a query on a fresh
    coordinate splits the run into its two extensions, so repeated queries
    of one coordinate share a bit.
    """
    args = list(args)
    if len(args) != f.arity:
        raise PorError(f"expected {f.arity} arguments, got {len(args)}")
    out = DistBuilder()
    stack = [{}]
    while stack:
        path = stack.pop()

        def oracle(c, path=path):
            b = path.get(c)
            if b is None:
                raise _Fresh(c)
            return b

        try:
            value = _eval(f, args, oracle, _Fuel(fuel))
        except _Fresh as fresh:
            if len(path) >= coord_cap:
                raise CoordinateCapExceeded(f"more than {coord_cap} coordinates on one path")
            for b in (1, 0):
                stack.append({**path, fresh.coord: b})
            continue
        except FuelExhausted:
            out.diverge(len(path))
            continue
        out.add(value, len(path))
    return out.build()


# ---------------------------------------------------------------- size bounds


def size_bound(f: PorFn) -> BoundTerm:
    """A bound term t over x_1..x_arity with |f(x)| <= |t(x)| for all x."""
    if isinstance(f, E):
        return BEps()
    if isinstance(f, P):
        return BX(f.i)
    if isinstance(f, S):
        return BCat(BX(1), BBit("1"))
    if isinstance(f, C):
        return BCat(BCat(BX(2), BX(3)), BX(4))
    if isinstance(f, Q):
        return BBit("1")
    if isinstance(f, Comp):
        inner = [size_bound(h) for h in f.hs]
        return subst_bound(size_bound(f.g), xs=inner)
    if isinstance(f, BRec):
        n = f.g.arity
        return BCat(size_bound(f.g), subst_bound(f.bound, y=BX(n + 1)))
    raise PorError(f"not a POR function: {f!r}")


# ---------------------------------------------------------------- syntax


def _tokenize(src: str):
    tokens = []
    for line in src.splitlines():
        line = line.split(";", 1)[0]
        tokens.extend(line.replace("(", " ( ").replace(")", " ) ").split())
    return tokens


def _read_sexp(tokens, pos):
    if pos >= len(tokens):
        raise PorError("unexpected end of input")
    tok = tokens[pos]
    if tok == ")":
        raise PorError("unexpected ')'")
    if tok != "(":
        return tok, pos + 1
    items = []
    pos += 1
    while True:
        if pos >= len(tokens):
            raise PorError("missing ')'")
        if tokens[pos] == ")":
            return items, pos + 1
        item, pos = _read_sexp(tokens, pos)
        items.append(item)


def _int(tok):
    if isinstance(tok, list) or not tok.isdigit():
        raise PorError(f"expected a number, got {tok!r}")
    return int(tok)


def _bound_of(sx) -> BoundTerm:
    if not isinstance(sx, list) or not sx:
        raise PorError(f"bad bound term {sx!r}")
    head, rest = sx[0], sx[1:]
    if head == "eps" and not rest:
        return BEps()
    if head in ("b0", "b1") and not rest:
        return BBit(head[1])
    if head == "x" and len(rest) == 1:
        return BX(_int(rest[0]))
    if head == "y" and not rest:
        return BY()
    if head in ("cat", "times") and len(rest) == 2:
        cls = BCat if head == "cat" else BTimes
        return cls(_bound_of(rest[0]), _bound_of(rest[1]))
    raise PorError(f"bad bound term {sx!r}")


def _fn_of(sx, env) -> PorFn:
    if isinstance(sx, str):
        if env is not None and sx in env:
            return env[sx]
        raise PorError(f"unknown function name {sx!r}")
    if not sx:
        raise PorError("empty expression")
    head, rest = sx[0], sx[1:]
    if head == "E" and not rest:
        return E()
    if head == "P" and len(rest) == 2:
        return P(_int(rest[0]), _int(rest[1]))
    if head in ("S0", "S1") and not rest:
        return S(head[1])
    if head == "C" and not rest:
        return C()
    if head == "Q" and not rest:
        return Q()
    if head == "comp" and len(rest) >= 2:
        return Comp(_fn_of(rest[0], env), tuple(_fn_of(h, env) for h in rest[1:]))
    if head == "brec" and len(rest) == 4:
        return BRec(_fn_of(rest[0], env), _fn_of(rest[1], env), _fn_of(rest[2], env),
                    _bound_of(rest[3]))
    raise PorError(f"bad POR expression starting with {head!r}")


def parse_por(src: str, env=None) -> PorFn:
    """Parse the parenthesised prefix syntax.  Bare names are looked up in
    ``env`` (a mapping name -> PorFn) when one is given."""
    tokens = _tokenize(src)
    sx, pos = _read_sexp(tokens, 0)
    if pos != len(tokens):
        raise PorError("trailing input after expression")
    return _fn_of(sx, env)


def parse_bound(src: str) -> BoundTerm:
    tokens = _tokenize(src)
    sx, pos = _read_sexp(tokens, 0)
    if pos != len(tokens):
        raise PorError("trailing input after bound term")
    return _bound_of(sx)


def format_por(f: PorFn) -> str:
    if isinstance(f, E):
        return "(E)"
    if isinstance(f, P):
        return f"(P {f.n} {f.i})"
    if isinstance(f, S):
        return f"(S{f.bit})"
    if isinstance(f, C):
        return "(C)"
    if isinstance(f, Q):
        return "(Q)"
    if isinstance(f, Comp):
        return "(comp " + " ".join(format_por(x) for x in (f.g,) + f.hs) + ")"
    if isinstance(f, BRec):
        return f"(brec {format_por(f.g)} {format_por(f.h0)} {format_por(f.h1)} {f.bound})"
    raise PorError(f"not a POR function: {f!r}")


def pretty_por(f: PorFn, indent: int = 0, width: int = 78) -> str:
    """Multi-line layout for long expressions."""
    flat = format_por(f)
    pad = " " * indent
    if len(flat) + indent <= width or not isinstance(f, (Comp, BRec)):
        return pad + flat
    if isinstance(f, Comp):
        parts = [pretty_por(x, indent + 2, width) for x in (f.g,) + f.hs]
        return pad + "(comp\n" + "\n".join(parts) + ")"
    parts = [pretty_por(x, indent + 2, width) for x in (f.g, f.h0, f.h1)]
    parts.append(" " * (indent + 2) + str(f.bound))
    return pad + "(brec\n" + "\n".join(parts) + ")"


def show_args(args) -> str:
    return ", ".join(format_bits(a) for a in args)
