"""Command-line front end.

Exit codes: 0 success, 1 domain error (or a failed ``check``), 2 precision
exhausted, 3 configuration or usage error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass
from pathlib import Path

from . import algebra, gamma, jacobi, oracle, presets, tower, widom
from .errors import ConfigError, DomainError, PrecisionExhausted
from .numeric import DEFAULT_PRECISION, LogScalar, to_decimal, working

EXIT_OK, EXIT_DOMAIN, EXIT_PRECISION, EXIT_CONFIG = 0, 1, 2, 3


@dataclass(frozen=True)
class RunConfig:
    spec: gamma.GammaSpec
    precision_bits: int
    fmt: str
    output: Path | None

    def __post_init__(self):
        if self.fmt not in ("csv", "json"):
            raise ConfigError(f"format must be csv or json, got {self.fmt!r}")
        if not 64 <= self.precision_bits <= 8192:
            raise ConfigError(f"precision must lie in [64, 8192], got {self.precision_bits}")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise ConfigError(message)


def _int_list(text: str) -> list:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers: {text}") from exc


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    src = common.add_mutually_exclusive_group()
    src.add_argument("--gamma", help="inline sequence: const:<v> | periodic:<v1,..> | "
                                     "list:<v1,..>;tail=const:<v>")
    src.add_argument("--config", help="YAML/JSON file with prefix, tail.kind, tail.values")
    src.add_argument("--preset", choices=presets.PRESETS)
    common.add_argument("--kmin", type=int, default=4, help="first k of 1/k in example presets")
    common.add_argument("--depth", type=int, default=64, help="truncation depth for example2")
    common.add_argument("--sparse", type=_int_list, help="index list for example4-sparse")
    common.add_argument("--precision", type=int, help="mantissa bits (default 256)")
    common.add_argument("--format", dest="fmt", choices=("csv", "json"), default="csv")
    common.add_argument("--output", type=Path)

    parser = _Parser(prog="cantor-op", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("capacity", parents=[common], help="logarithmic capacity of K(gamma)")
    p = sub.add_parser("intervals", parents=[common], help="basic intervals of E_s")
    p.add_argument("--level", type=int, required=True)
    p = sub.add_parser("nodes", parents=[common], help="zeros of Q_{2^s}")
    p.add_argument("--level", type=int, required=True)
    p = sub.add_parser("jacobi", parents=[common], help="recurrence coefficients a_1..a_N")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--checkpoint", type=Path)
    p.add_argument("--max-precision", type=int, default=jacobi.MAX_PRECISION,
                   help="ceiling for precision doubling (default 4096)")
    p = sub.add_parser("widom", parents=[common], help="Widom factors")
    p.add_argument("--n", type=int)
    p.add_argument("--dyadic", action="store_true", help="closed-form W_{2^s}, s < smax")
    p.add_argument("--smax", type=int)
    p = sub.add_parser("qpoly", parents=[common], help="B-expansion of Q_n")
    p.add_argument("--n", type=int, required=True)
    p = sub.add_parser("moment", parents=[common], help="integral of an A-word")
    p.add_argument("--aword", required=True, help='e.g. "4:2,2:1" for Q_4^2 Q_2')
    p = sub.add_parser("limits", parents=[common], help="profile of a_{j 2^s + n}")
    p.add_argument("--j", type=int, required=True)
    p.add_argument("--nn", type=int, required=True)
    p.add_argument("--smax", type=int, required=True)
    p.add_argument("--smin", type=int, default=1)
    p = sub.add_parser("check", parents=[common], help="recursion vs Stieltjes oracle (JSON)")
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--tol", type=float, required=True)
    sub.add_parser("presets", parents=[common], help="list presets or show one with --preset")
    return parser


def _resolve(args) -> RunConfig:
    try:
        return _load(args)
    except DomainError as exc:
        raise ConfigError(str(exc)) from exc


def _load(args) -> RunConfig:
    bits = args.precision or DEFAULT_PRECISION
    if args.config:
        spec = gamma.load_config(args.config, args.precision)
        bits = spec.precision_bits
    elif args.preset:
        spec = presets.load_preset(args.preset, bits, kmin=args.kmin, depth=args.depth,
                                   sparse=args.sparse)
    elif args.gamma:
        spec = gamma.parse_inline(args.gamma, bits)
    elif args.command == "presets":
        spec = gamma.GammaSpec.constant(gamma.QUARTER, bits)  # unused by the listing
    else:
        raise ConfigError("one of --gamma, --config or --preset is required")
    return RunConfig(spec, bits, args.fmt, args.output)


def _render(fmt: str, header: list, rows: list, notes: list) -> str:
    if fmt == "json":
        return json.dumps({"notes": notes, "rows": [dict(zip(header, r)) for r in rows]},
                          indent=2) + "\n"
    buf = io.StringIO()
    for note in notes:
        buf.write(f"# {note}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _log_pair(x: LogScalar, bits: int) -> list:
    with working(bits):
        return [to_decimal(x.value, bits), to_decimal(x.log2, bits)]


def _run(args, cfg: RunConfig):
    spec, bits = cfg.spec, cfg.precision_bits
    dec = lambda x: to_decimal(x, bits)
    cmd = args.command
    if cmd == "capacity":
        return ["capacity", "log2_capacity"], [_log_pair(gamma.capacity(spec), bits)]
    if cmd == "intervals":
        ivs = tower.basic_intervals(spec, args.level)
        with working(bits):
            return (["j", "left", "right", "length"],
                    [[j, dec(iv.left), dec(iv.right), dec(iv.length)]
                     for j, iv in enumerate(ivs, 1)])
    if cmd == "nodes":
        ns = tower.chebyshev_nodes(spec, args.level)
        return ["k", "x_k"], [[k, dec(x)] for k, x in enumerate(ns.nodes, 1)]
    if cmd == "jacobi":
        table = jacobi.jacobi_coefficients(spec, args.n, max_precision=args.max_precision,
                                           checkpoint=args.checkpoint)
        return (["n", "a_n", "log2_a_n"],
                [[n, *_log_pair(v, table.precision_bits)]
                 for n, v in enumerate(table.log_values(), 1)])
    if cmd == "widom":
        if args.dyadic:
            if args.smax is None:
                raise ConfigError("--dyadic needs --smax")
            return (["s", "n", "W_n", "log2_W_n"],
                    [[s, 1 << s, *_log_pair(widom.widom_dyadic_closed(spec, s), bits)]
                     for s in range(args.smax)])
        if args.n is None:
            raise ConfigError("widom needs --n or --dyadic --smax")
        series = widom.widom_factors(spec, args.n)
        return (["n", "W_n", "log2_W_n", "is_dyadic"],
                [[n, *_log_pair(series[n], series.precision_bits), int(series.is_dyadic(n))]
                 for n in range(1, args.n + 1)])
    if cmd == "qpoly":
        exp = algebra.gram_expand_Q(spec, args.n)
        return ["basis_degree", "coefficient"], [[d, dec(c)] for d, c in exp.terms()]
    if cmd == "moment":
        word = algebra.AWord.parse(args.aword)
        closed = algebra.a_integral_closed(spec, word)
        reduced = algebra.a_integral_reduce(spec, word)
        if closed != reduced:
            raise ArithmeticError(f"closed form and reduction disagree on {word}")
        if closed is None:
            return ["aword", "integral", "log2_integral"], [[str(word), "0", "-inf"]]
        return ["aword", "integral", "log2_integral"], [[str(word), *_log_pair(closed, bits)]]
    if cmd == "limits":
        prof = jacobi.limit_profile(spec, args.j, args.nn, range(args.smin, args.smax + 1))
        with working(bits):
            return (["s", "index", "a", "deviation"],
                    [[p.s, p.index, dec(p.a), dec(p.deviation)] for p in prof])
    if cmd == "presets":
        if args.preset:
            return (["s", "gamma_s"],
                    [[s, str(spec.gamma(s))] for s in range(1, len(spec.prefix) + 2)])
        return ["preset"], [[name] for name in presets.PRESETS]
    raise ConfigError(f"unknown command {cmd}")


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        cfg = _resolve(args)
        notes = [cfg.spec.label] if cfg.spec.label else []
        if args.command == "check":
            report = oracle.compare_jacobi(cfg.spec, args.level, args.m, args.tol)
            text = json.dumps({"notes": notes, **report.to_dict()}, indent=2) + "\n"
            code = EXIT_OK if report.passed else EXIT_DOMAIN
        else:
            header, rows = _run(args, cfg)
            text = _render(cfg.fmt, header, rows, notes)
            code = EXIT_OK
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except PrecisionExhausted as exc:
        print(f"precision exhausted: {exc}", file=sys.stderr)
        return EXIT_PRECISION
    except DomainError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    if cfg.output:
        cfg.output.write_text(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
