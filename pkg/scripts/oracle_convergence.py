"""Recursion vs Stieltjes oracle on nu_s across levels.

For each level the oracle runs at the largest M the node count supports,
which shows that nu_s reproduces the limit coefficients exactly (up to
round-off) below its node count.
"""
import argparse
import time
from dataclasses import dataclass

from cantor_op import GammaSpec, jacobi_coefficients
from cantor_op.gamma import parse_inline
from cantor_op.numeric import working
from cantor_op.oracle import nu_measure, stieltjes


@dataclass
class Config:
    gamma: str = "const:1/6"
    levels: tuple = (4, 6, 8, 10)
    precision_bits: int = 256


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--gamma", default=Config.gamma)
    parser.add_argument("--levels", type=lambda t: tuple(int(v) for v in t.split(",")),
                        default=Config.levels)
    args = parser.parse_args()
    cfg = Config(args.gamma, args.levels)
    spec: GammaSpec = parse_inline(cfg.gamma, cfg.precision_bits)
    table = jacobi_coefficients(spec, (1 << max(cfg.levels)) - 1)
    print(f"{'s':>3} {'M':>6} {'max |a_rec - a_oracle|':>24} {'max |b - 1/2|':>16} {'seconds':>8}")
    for s in cfg.levels:
        M = (1 << s) - 1
        start = time.perf_counter()
        a, b = stieltjes(nu_measure(spec, s), M, cfg.precision_bits)
        with working(cfg.precision_bits):
            dev = max(abs(a[n - 1] - table.a(n)) for n in range(1, M + 1))
            b_off = max(abs(x - 0.5) for x in b)
        print(f"{s:>3} {M:>6} {float(dev):>24.3e} {float(b_off):>16.3e} "
              f"{time.perf_counter() - start:>8.2f}")


if __name__ == "__main__":
    main()
