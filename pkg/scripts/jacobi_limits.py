"""Profiles of a_{j 2^s + n} against a_n, and the envelope of a_{2^s}."""
import argparse
from dataclasses import dataclass

import gmpy2
from gmpy2 import mpfr

from cantor_op.jacobi import jacobi_coefficients, limit_profile
from cantor_op.gamma import parse_inline
from cantor_op.numeric import working


@dataclass
class Config:
    gamma: str = "const:1/6"
    smax: int = 14
    js: tuple = (1, 3)
    ns: tuple = tuple(range(0, 9))
    precision_bits: int = 256


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--gamma", default=Config.gamma)
    parser.add_argument("--smax", type=int, default=Config.smax)
    args = parser.parse_args()
    cfg = Config(args.gamma, args.smax)
    spec = parse_inline(cfg.gamma, cfg.precision_bits)
    table = jacobi_coefficients(spec, max(cfg.js) * (1 << cfg.smax) + max(cfg.ns))
    with working(cfg.precision_bits):
        print("deviation |a_(j 2^s + n) - a_n|")
        for j in cfg.js:
            for n in cfg.ns:
                prof = limit_profile(spec, j, n, range(2, cfg.smax + 1), table=table)
                devs = " ".join(f"{float(p.deviation):.1e}" for p in prof)
                print(f"j={j} n={n}: {devs}")
        print("a_(j 2^s) * 2^(s/2)  (bounded by the envelope when non-increasing)")
        for j in cfg.js:
            scaled = [table.a(j << s) * gmpy2.sqrt(mpfr(2) ** s) for s in range(2, cfg.smax + 1)]
            print(f"j={j}: " + " ".join(f"{float(x):.5f}" for x in scaled))


if __name__ == "__main__":
    main()
