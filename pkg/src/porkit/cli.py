"""Command-line front end: ``porkit <group> <command> ...``."""

import argparse
import json
import random
import sys
from dataclasses import dataclass
from pathlib import Path

from . import harness, porlambda, rl
from .bits import BitsError, all_tuples, format_bits, parse_bits
from .compile_sifp import por_to_sifpra, sifpra_to_sifpla
from .compile_stm import sifpla_to_odstm
from .measure import BitStream, Oracle
from .por import eval_dist, eval_por, parse_por
from .por_lib import stdlib
from .sifp import format_stmt, inputs_store, parse_sifp, run_la, run_la_dist, run_ra, run_ra_dist
from .stm import format_machine, h_encode, parse_machine, run, run_dist, stm_to_ptm


@dataclass
class CliConfig:
    fuel: int = 10 ** 5
    max_len: int = 3
    coord_cap: int = 24
    seed: int = 0
    format: str = "table"

    def __post_init__(self):
        for name in ("fuel", "max_len", "coord_cap"):
            if getattr(self, name) < (0 if name == "max_len" else 1):
                raise UsageError(f"--{name.replace('_', '-')} must be positive")


class UsageError(Exception):
    pass


class CheckFailed(Exception):
    pass


# ---------------------------------------------------------------- helpers

EXTENSIONS = {".por", ".rl", ".sifp", ".stm", ".lam"}


def _text(arg: str) -> str:
    """A file's contents when ``arg`` names a file, else the argument itself."""
    p = Path(arg)
    try:
        if p.is_file():
            return p.read_text()
    except OSError:
        pass
    if p.suffix in EXTENSIONS:
        raise UsageError(f"no such file: {arg}")
    return arg


def _inputs(values):
    return [parse_bits(v) for v in (values or [])]


def _table(spec: str):
    out = {}
    if not spec:
        return out
    for item in spec.split(","):
        item = item.strip()
        if not item:
            continue
        try:
            k, v = item.split("=")
        except ValueError:
            raise UsageError(f"table entries look like coord=bit, got {item!r}") from None
        if v not in ("0", "1"):
            raise UsageError(f"table bit must be 0 or 1, got {v!r}")
        out[parse_bits(k)] = int(v)
    return out


def _oracle(args, cfg):
    table = _table(args.table)
    if args.default == "random":
        rng = random.Random(cfg.seed)

        def oracle(c):
            if c not in table:
                table[c] = rng.getrandbits(1)
            return table[c]

        return oracle
    return Oracle(table, args.default)


def _emit(cfg, structured, table_text):
    if cfg.format == "structured":
        print(json.dumps(structured, sort_keys=True))
    else:
        print(table_text)


def _emit_dist(cfg, dist):
    _emit(cfg, dist.to_json(), repr(dist))


def _load_por(path):
    return parse_por(_text(path), stdlib())


# ---------------------------------------------------------------- commands


def cmd_por(args, cfg):
    f = _load_por(args.file)
    xs = _inputs(args.input)
    if args.cmd == "eval":
        out = eval_por(f, xs, _oracle(args, cfg), cfg.fuel)
        _emit(cfg, {"output": format_bits(out), "seed": cfg.seed}, format_bits(out))
    else:
        _emit_dist(cfg, eval_dist(f, xs, cfg.fuel, cfg.coord_cap))
    return 0


def _env(items):
    env = {}
    for item in items or []:
        try:
            k, v = item.split("=", 1)
        except ValueError:
            raise UsageError(f"environment entries look like x=bits, got {item!r}") from None
        env[k] = parse_bits(v)
    return env


def cmd_rl(args, cfg):
    if args.cmd == "classify":
        F = rl.parse_formula(_text(args.formula))
        cls = rl.classify(F)
        _emit(cfg, {"class": cls}, cls)
        return 0
    if args.cmd == "measure":
        F = rl.parse_formula(_text(args.formula))
        c = rl.eval_measure(F, _env(args.env))
        mu = c.measure()
        _emit(cfg, {"measure": mu.to_json(), "coords": [format_bits(k) for k in c.coords],
                    "members": sorted(c.members)},
              f"{mu}  over coordinates {[format_bits(k) for k in c.coords]}")
        return 0
    f = _load_por(args.file)
    F = rl.parse_formula(_text(args.formula)) if args.formula else rl.build_repr_formula(f)
    rep = rl.check_representability(F, f, cfg.max_len, fuel=cfg.fuel)
    first = rep.first()
    _emit(cfg, {"ok": rep.ok, "class": rep.classification, "counts": rep.counts(),
                "warnings": rep.warnings,
                "first": None if first is None else {
                    "condition": first.condition, "args": list(first.args),
                    "output": first.output, "detail": first.detail}},
          rep.summary())
    if not rep.ok:
        raise CheckFailed("representability check failed")
    return 0


def cmd_lam(args, cfg):
    env = porlambda.lambda_stdlib()
    if args.cmd == "typecheck":
        t = porlambda.parse_lterm(_text(args.term), env)
        ty = porlambda.typecheck(t)
        _emit(cfg, {"type": str(ty)}, str(ty))
        return 0
    if args.cmd == "normalize":
        t = porlambda.parse_lterm(_text(args.term), env)
        table = porlambda.FlipTable(_table(args.table), args.default) \
            if args.default != "random" else _oracle(args, cfg)
        out = porlambda.normalize(t, table, cfg.fuel)
        text = porlambda.format_lterm(out)
        bits = porlambda.as_bits(out)
        shown = text if bits is None or len(bits) >= 2 else f"{text}  = {format_bits(bits)}"
        _emit(cfg, {"normal_form": text,
                    "numeral": None if bits is None else format_bits(bits)}, shown)
        return 0
    f = _load_por(args.file)
    term = porlambda.por_to_lambda(f)
    rng = random.Random(cfg.seed)
    bad = None
    checked = 0
    for _ in range(args.tables):
        table = {}

        def coin(c, table=table):
            if c not in table:
                table[c] = rng.getrandbits(1)
            return table[c]

        for xs in all_tuples(f.arity, cfg.max_len):
            a = eval_por(f, xs, coin, cfg.fuel)
            b = porlambda.run(term, xs, porlambda.FlipTable(table, "strict"), cfg.fuel * 10)
            checked += 1
            if a != b and bad is None:
                bad = {"input": [format_bits(x) for x in xs], "por": a, "lambda": b}
    ok = bad is None
    _emit(cfg, {"ok": ok, "checked": checked, "seed": cfg.seed, "counterexample": bad},
          f"{'pass' if ok else 'FAIL'}: {checked} runs, seed {cfg.seed}"
          + ("" if ok else f"; first mismatch {bad}"))
    if not ok:
        raise CheckFailed("lambda term disagrees with the POR function")
    return 0


def cmd_sifp(args, cfg):
    dialect = {"run-ra": "RA", "run-la": "LA"}.get(args.cmd)
    p = parse_sifp(_text(args.file), dialect)
    store = inputs_store(_inputs(args.input))
    if args.cmd == "run-ra":
        st = run_ra(p, store, _oracle(args, cfg), cfg.fuel)
        out = st.get("R", "")
        _emit(cfg, {"output": format_bits(out), "store": {k: format_bits(v) for k, v in st.items()}},
              format_bits(out))
    elif args.cmd == "run-la":
        st, used = run_la(p, store, BitStream(parse_bits(args.stream)), cfg.fuel)
        out = st.get("R", "")
        _emit(cfg, {"output": format_bits(out), "bits_used": used},
              f"{format_bits(out)}  ({used} bits used)")
    else:
        if p.dialect == "LA":
            d = run_la_dist(p, store, cfg.fuel, max_bits=cfg.coord_cap)
        else:
            d = run_ra_dist(p, store, cfg.fuel, cfg.coord_cap)
        _emit_dist(cfg, d)
    return 0


def cmd_stm(args, cfg):
    m = parse_machine(_text(args.file))
    xs = _inputs(args.input) or [""]
    if args.cmd == "encode-h":
        sys.stdout.write(format_machine(h_encode(m)))
        return 0
    if args.cmd == "run":
        out, steps, used = run(m, xs, BitStream(parse_bits(args.stream)), cfg.fuel)
        _emit(cfg, {"output": format_bits(out), "steps": steps, "bits_used": used},
              f"{format_bits(out)}  ({steps} steps, {used} bits used)")
        return 0
    _emit_dist(cfg, run_dist(m, xs, cfg.fuel, max_depth=max(cfg.coord_cap, 4 * cfg.fuel)))
    return 0


def cmd_compile(args, cfg):
    f = _load_por(args.file)
    if args.stage == "manifest":
        bundle = harness.build_pipeline(f)
        print(json.dumps(bundle.manifest(), sort_keys=True, indent=2))
        return 0
    ra = por_to_sifpra(f)
    if args.stage == "ra":
        print(format_stmt(ra.body))
        return 0
    la = sifpra_to_sifpla(ra)
    if args.stage == "la":
        print(format_stmt(la.body))
        return 0
    od = sifpla_to_odstm(la, f.arity)
    if args.stage == "od":
        sys.stdout.write(format_machine(od))
        return 0
    stm = h_encode(od)
    sys.stdout.write(format_machine(stm if args.stage == "stm" else stm_to_ptm(stm)))
    return 0


def _corpus_files(target: str):
    p = Path(target)
    if p.is_dir():
        return sorted(p.glob("*.por"))
    if p.is_file():
        return [p]
    raise UsageError(f"no such file or directory: {target}")


def cmd_pipeline(args, cfg):
    files = _corpus_files(args.target)
    if not files:
        raise UsageError(f"no .por files under {args.target}")
    reports = []
    for path in files:
        f = _load_por(str(path))
        rep = harness.check_stage_equivalence(
            f, all_tuples(f.arity, cfg.max_len), cfg.fuel, cfg.coord_cap, entry=path.stem)
        reports.append(rep)
        if cfg.format != "structured":
            print(rep.table(), flush=True)
    if cfg.format == "structured":
        print(json.dumps([r.to_json() for r in reports], sort_keys=True))
    if not all(r.ok for r in reports):
        raise CheckFailed("stage distributions differ")
    return 0


# ---------------------------------------------------------------- parser


def _common(p):
    p.add_argument("--fuel", type=int, default=10 ** 5)
    p.add_argument("--max-len", type=int, default=3)
    p.add_argument("--coord-cap", type=int, default=24)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=("table", "structured"), default="table")


def _oracle_flags(p):
    p.add_argument("--table", default="", help="oracle entries, e.g. eps=1,01=0")
    p.add_argument("--default", choices=("zero", "one", "strict", "random"), default="zero",
                   help="answer for coordinates missing from --table")


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="porkit", description=__doc__)
    groups = top.add_subparsers(dest="group", required=True)

    g = groups.add_parser("por").add_subparsers(dest="cmd", required=True)
    for name in ("eval", "dist"):
        p = g.add_parser(name)
        p.add_argument("file")
        p.add_argument("--input", action="append", help="one per argument; eps for empty")
        _oracle_flags(p)
        _common(p)

    g = groups.add_parser("rl").add_subparsers(dest="cmd", required=True)
    p = g.add_parser("classify")
    p.add_argument("formula")
    _common(p)
    p = g.add_parser("measure")
    p.add_argument("formula")
    p.add_argument("--env", action="append", help="x=bits")
    _common(p)
    p = g.add_parser("check-repr")
    p.add_argument("file", help="a .por file")
    p.add_argument("--formula", help="formula to check (default: the built one)")
    _common(p)

    g = groups.add_parser("lam").add_subparsers(dest="cmd", required=True)
    p = g.add_parser("typecheck")
    p.add_argument("term")
    _common(p)
    p = g.add_parser("normalize")
    p.add_argument("term")
    _oracle_flags(p)
    _common(p)
    p = g.add_parser("check-repr")
    p.add_argument("file", help="a .por file")
    p.add_argument("--tables", type=int, default=10)
    _common(p)

    g = groups.add_parser("sifp").add_subparsers(dest="cmd", required=True)
    for name in ("run-ra", "run-la", "dist"):
        p = g.add_parser(name)
        p.add_argument("file")
        p.add_argument("--input", action="append")
        if name == "run-ra":
            _oracle_flags(p)
        if name == "run-la":
            p.add_argument("--stream", default="eps", help="random bits to consume")
        _common(p)

    g = groups.add_parser("stm").add_subparsers(dest="cmd", required=True)
    for name in ("run", "dist", "encode-h"):
        p = g.add_parser(name)
        p.add_argument("file")
        p.add_argument("--input", action="append")
        if name == "run":
            p.add_argument("--stream", default="eps")
        _common(p)

    p = groups.add_parser("compile")
    p.add_argument("stage", choices=("ra", "la", "od", "stm", "ptm", "manifest"))
    p.add_argument("file")
    _common(p)

    g = groups.add_parser("pipeline").add_subparsers(dest="cmd", required=True)
    p = g.add_parser("check")
    p.add_argument("target", help="a .por file or a directory of them")
    _common(p)
    return top


COMMANDS = {"por": cmd_por, "rl": cmd_rl, "lam": cmd_lam, "sifp": cmd_sifp,
            "stm": cmd_stm, "compile": cmd_compile, "pipeline": cmd_pipeline}


def dispatch(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code else 0
    try:
        cfg = CliConfig(args.fuel, args.max_len, args.coord_cap, args.seed, args.format)
        return COMMANDS[args.group](args, cfg)
    except CheckFailed as e:
        print(f"porkit: {e}", file=sys.stderr)
        return 1
    except (UsageError, ValueError, KeyError, BitsError) as e:
        print(f"porkit: error: {e}", file=sys.stderr)
        return 2
    except (RuntimeError, LookupError) as e:
        # fuel, caps and oracle misses: the computation itself failed
        print(f"porkit: {type(e).__name__}: {e}", file=sys.stderr)
        return 1


def main():
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
