"""POR -> SIFP_RA and SIFP_RA -> SIFP_LA passes."""

from .por import (BBit, BCat, BEps, BRec, BTimes, BX, BY, C, Comp, E, P, PorError,
                  PorFn, Q, S)
from .sifp import (And, Append, Assign, Eps, Flip, Not, Prefix, Program, RandBit,
                   Reg, SifpError, Stmt, While, registers_of, seq)


class _Alloc:
    """Stack-like allocation of temporaries: S_i for values, Y_i for flags
    and scan cursors."""

    def __init__(self):
        self.next = {"S": 1, "Y": 1}
        self.free_list = {"S": [], "Y": []}

    def get(self, cls="S"):
        if self.free_list[cls]:
            return self.free_list[cls].pop()
        name = f"{cls}{self.next[cls]}"
        self.next[cls] += 1
        return name

    def release(self, *names):
        for n in names:
            self.free_list[n[0]].append(n)


# ---------------------------------------------------------------- idioms


def _if(flag: str, cond, body) -> list:
    """Run body once when cond evaluates to 1."""
    return [Assign(flag, cond), While(Reg(flag), seq(*body, Assign(flag, Eps())))]


def _if_else(f: str, g: str, cond, then, other) -> list:
    return [Assign(f, cond), Assign(g, Not(Reg(f))),
            While(Reg(f), seq(*then, Assign(f, Eps()))),
            While(Reg(g), seq(*other, Assign(g, Eps())))]


def _not_done(cur: str, target: str):
    # with cur an initial subword of target: 1 iff cur != target
    return Not(Prefix(Reg(target), cur))


def _step_bit(cur: str, target: str, a: _Alloc, extra0=(), extra1=()) -> list:
    """Extend cur by the next bit of target (cur a proper prefix of target),
    running extra0/extra1 in the matching branch."""
    f, g = a.get("Y"), a.get("Y")
    code = _if_else(f, g, Prefix(Append(Reg(cur), "0"), target),
                    [Assign(cur, Append(Reg(cur), "0")), *extra0],
                    [Assign(cur, Append(Reg(cur), "1")), *extra1])
    a.release(f, g)
    return code


def _append_all(dst: str, src: str, a: _Alloc) -> list:
    """dst <- dst followed by src, bit by bit."""
    p, go = a.get("Y"), a.get("Y")
    body = _step_bit(p, src, a, [Assign(dst, Append(Reg(dst), "0"))],
                     [Assign(dst, Append(Reg(dst), "1"))])
    code = [Assign(p, Eps()), Assign(go, _not_done(p, src)),
            While(Reg(go), seq(*body, Assign(go, _not_done(p, src))))]
    a.release(p, go)
    return code


def _truncate(src: str, bnd: str, dst: str, a: _Alloc) -> list:
    """dst <- src cut to |bnd|."""
    p, m1, m2, go = a.get("Y"), a.get("Y"), a.get("Y"), a.get("Y")
    test = [Assign(m1, _not_done(dst, src)), Assign(m2, _not_done(p, bnd)),
            Assign(go, And(Reg(m1), m2))]
    body = _step_bit(dst, src, a) + _step_bit(p, bnd, a) + test
    code = [Assign(dst, Eps()), Assign(p, Eps()), *test, While(Reg(go), seq(*body))]
    a.release(p, m1, m2, go)
    return code


def _bound(t, xs, u, a: _Alloc):
    """Code computing a bound term; returns (code, register, owned)."""
    if isinstance(t, BX):
        return [], xs[t.index - 1], False
    if isinstance(t, BY):
        return [], u, False
    dst = a.get("S")
    if isinstance(t, BEps):
        return [Assign(dst, Eps())], dst, True
    if isinstance(t, BBit):
        return [Assign(dst, Append(Eps(), t.bit))], dst, True
    lcode, lreg, lown = _bound(t.left, xs, u, a)
    rcode, rreg, rown = _bound(t.right, xs, u, a)
    if isinstance(t, BCat):
        code = lcode + rcode + [Assign(dst, Reg(lreg))] + _append_all(dst, rreg, a)
    elif isinstance(t, BTimes):
        p, go = a.get("Y"), a.get("Y")
        body = _step_bit(p, rreg, a) + _append_all(dst, lreg, a)
        code = lcode + rcode + [Assign(dst, Eps()), Assign(p, Eps()),
                                Assign(go, _not_done(p, rreg)),
                                While(Reg(go), seq(*body, Assign(go, _not_done(p, rreg))))]
        a.release(p, go)
    else:
        raise PorError(f"not a bound term: {t!r}")
    for reg, own in ((rreg, rown), (lreg, lown)):
        if own:
            a.release(reg)
    return code, dst, True


def _compile(f: PorFn, ins, out: str, a: _Alloc) -> list:
    if isinstance(f, E):
        return [Assign(out, Eps())]
    if isinstance(f, P):
        return [Assign(out, Reg(ins[f.i - 1]))]
    if isinstance(f, S):
        return [Assign(out, Append(Reg(ins[0]), f.bit))]
    if isinstance(f, Q):
        return [Flip(Reg(ins[0])), Assign(out, Reg("R"))]
    if isinstance(f, C):
        x, y, z0, z1 = ins
        p, last, go = a.get("Y"), a.get("Y"), a.get("Y")
        scan = _step_bit(p, x, a, [Assign(last, Append(Eps(), "0"))],
                         [Assign(last, Append(Eps(), "1"))])
        f0, f1 = a.get("Y"), a.get("Y")
        code = [Assign(out, Reg(y)), Assign(p, Eps()), Assign(last, Eps()),
                Assign(go, _not_done(p, x)),
                While(Reg(go), seq(*scan, Assign(go, _not_done(p, x)))),
                *_if(f0, Not(Reg(last)), [Assign(out, Reg(z0))]),
                *_if(f1, Prefix(Append(Eps(), "1"), last), [Assign(out, Reg(z1))])]
        a.release(p, last, go, f0, f1)
        return code
    if isinstance(f, Comp):
        code, regs, owned = [], [], []
        for h in f.hs:
            if isinstance(h, P):
                regs.append(ins[h.i - 1])
                continue
            t = a.get("S")
            code += _compile(h, ins, t, a)
            regs.append(t)
            owned.append(t)
        code += _compile(f.g, regs, out, a)
        a.release(*reversed(owned))
        return code
    if isinstance(f, BRec):
        xs, y = list(ins[:-1]), ins[-1]
        acc, u, nxt = a.get("S"), a.get("S"), a.get("S")
        f0, f1, go = a.get("Y"), a.get("Y"), a.get("Y")
        bcode, breg, bown = _bound(f.bound, xs, u, a)
        if breg == u:
            # u moves on before the truncation, so keep the old value
            breg, bown = a.get("S"), True
            bcode = [Assign(breg, Reg(u))]
        step0 = _compile(f.h0, xs + [u, acc], nxt, a) + [Assign(u, Append(Reg(u), "0"))]
        step1 = _compile(f.h1, xs + [u, acc], nxt, a) + [Assign(u, Append(Reg(u), "1"))]
        body = (bcode
                + _if_else(f0, f1, Prefix(Append(Reg(u), "0"), y), step0, step1)
                + _truncate(nxt, breg, acc, a)
                + [Assign(go, _not_done(u, y))])
        code = (_compile(f.g, xs, acc, a)
                + [Assign(u, Eps()), Assign(go, _not_done(u, y)), While(Reg(go), seq(*body)),
                   Assign(out, Reg(acc))])
        if bown:
            a.release(breg)
        a.release(go, f1, f0, nxt, u, acc)
        return code
    raise PorError(f"not a POR function: {f!r}")


def input_registers(k: int):
    return [f"X{i + 1}" for i in range(k)]


def por_to_sifpra(f: PorFn) -> Program:
    """An RA program leaving f(X1..Xk) in R; input registers are read only."""
    ins = input_registers(f.arity)
    if isinstance(f, E):
        return Program(seq(Assign("R", Eps())), "RA")
    if isinstance(f, S):
        return Program(seq(Assign("R", Append(Reg("X1"), f.bit))), "RA")
    if isinstance(f, P):
        return Program(seq(Assign("R", Reg(ins[f.i - 1]))), "RA")
    if isinstance(f, Q):
        return Program(seq(Flip(Reg("X1"))), "RA")
    a = _Alloc()
    out = a.get("S")
    return Program(seq(*_compile(f, ins, out, a), Assign("R", Reg(out))), "RA")


# ---------------------------------------------------------------- RA -> LA


def encode_kv_list(entries) -> str:
    """Key bits c as 1c, then 01, the value bit b as 1b, then 00."""
    out = []
    for key, bit in entries:
        out.extend("1" + c for c in key)
        out.append("01")
        out.append("1" + str(int(bit)))
        out.append("00")
    return "".join(out)


def decode_kv_list(code: str):
    if len(code) % 2:
        raise ValueError("odd-length table encoding")
    pairs = [code[i:i + 2] for i in range(0, len(code), 2)]
    entries, i = [], 0
    while i < len(pairs):
        key = []
        while i < len(pairs) and pairs[i][0] == "1":
            key.append(pairs[i][1])
            i += 1
        if i + 3 > len(pairs) or pairs[i] != "01" or pairs[i + 1][0] != "1" or pairs[i + 2] != "00":
            raise ValueError(f"malformed table encoding {code!r}")
        entries.append(("".join(key), int(pairs[i + 1][1])))
        i += 3
    return entries


TABLE = "T"


def _is_reserved(reg: str) -> bool:
    return reg == TABLE or reg.startswith("Z")


class _ZAlloc:
    def __init__(self):
        self.n = 0

    def get(self):
        self.n += 1
        return f"Z{self.n}"


def _lookup_or_draw(expr) -> list:
    z = _ZAlloc()
    key, found, pos, cur, inval, val = (z.get() for _ in range(6))
    go, a_, b_, c_, d_, e1, e2, e3, k_, nf = (z.get() for _ in range(10))

    def if_else(f, g, cond, then, other):
        return _if_else(f, g, cond, then, other)

    def app(r, bits):
        e = Reg(r)
        for c in bits:
            e = Append(e, c)
        return Assign(r, e)

    # payload pair 1c: extend the key in the key phase, record the value otherwise
    def payload(c):
        return [app(pos, "1" + c),
                Assign(k_, Not(Reg(inval))),
                While(Reg(k_), seq(app(cur, c), Assign(k_, Eps()))),
                Assign(k_, Reg(inval)),
                While(Reg(k_), seq(Assign(val, Append(Eps(), c)), Assign(k_, Eps())))]

    end_entry = [app(pos, "00"),
                 Assign(e1, Prefix(Reg(cur), key)), Assign(e2, Prefix(Reg(key), cur)),
                 Assign(e3, And(Reg(e1), e2)),
                 While(Reg(e3), seq(Assign(found, Append(Eps(), "1")), Assign("R", Reg(val)),
                                    Assign(e3, Eps()))),
                 Assign(cur, Eps()), Assign(inval, Append(Eps(), "0"))]
    marker = if_else(c_, d_, Prefix(Append(Append(Reg(pos), "0"), "1"), TABLE),
                     [app(pos, "01"), Assign(inval, Append(Eps(), "1"))], end_entry)
    pair = if_else(a_, b_, Prefix(Append(Reg(pos), "1"), TABLE),
                   if_else(c_, d_, Prefix(Append(Append(Reg(pos), "1"), "0"), TABLE),
                           payload("0"), payload("1")),
                   marker)
    scan = [Assign(key, expr), Assign(found, Append(Eps(), "0")), Assign(pos, Eps()),
            Assign(cur, Eps()), Assign(inval, Append(Eps(), "0")),
            Assign(go, _not_done(pos, TABLE)),
            While(Reg(go), seq(*pair, Assign(go, _not_done(pos, TABLE))))]
    # not found: draw a bit and append the encoded entry
    kp, kgo = z.get(), z.get()
    enc_key = [Assign(kp, Eps()), Assign(kgo, _not_done(kp, key)),
               While(Reg(kgo), seq(*if_else(c_, d_, Prefix(Append(Reg(kp), "0"), key),
                                            [app(kp, "0"), app(TABLE, "10")],
                                            [app(kp, "1"), app(TABLE, "11")]),
                                   Assign(kgo, _not_done(kp, key))))]
    draw = [RandBit(), *enc_key, app(TABLE, "01"),
            *if_else(c_, d_, Prefix(Append(Eps(), "1"), "R"),
                     [app(TABLE, "11")], [app(TABLE, "10")]),
            app(TABLE, "00")]
    return scan + [Assign(nf, Not(Reg(found))), While(Reg(nf), seq(*draw, Assign(nf, Eps())))]


def _ra_to_la(s: Stmt) -> Stmt:
    from .sifp import Seq
    if isinstance(s, Seq):
        return seq(*[_ra_to_la(t) for t in s.body])
    if isinstance(s, While):
        return While(s.guard, _ra_to_la(s.body))
    if isinstance(s, Flip):
        return seq(*_lookup_or_draw(s.expr))
    if isinstance(s, RandBit):
        raise SifpError("randbit() inside an RA program")
    return s


def sifpra_to_sifpla(p: Program) -> Program:
    """Replace every flip by a lookup in (or extension of) the table kept in
    register T.  The scratch registers Z* and T are reserved."""
    if p.dialect != "RA":
        raise SifpError("expected an RA program")
    bad = sorted(r for r in registers_of(p.body) if _is_reserved(r))
    if bad:
        raise SifpError(f"program uses reserved registers: {', '.join(bad)}")
    return Program(_ra_to_la(p.body), "LA")
