"""Dyadic Widom factors for the example gamma families.

Writes one CSV per family with W_{2^s} and W_{2^s - 1} (the block maxima
that drive limsup W_n = infinity) and prints a short summary.
"""
import argparse
import csv
from dataclasses import dataclass
from pathlib import Path

from cantor_op import GammaSpec, load_preset, widom_dyadic_closed, widom_factors
from cantor_op.numeric import working


@dataclass
class Config:
    smax: int = 80
    series_smax: int = 12
    out_dir: Path = Path("results/widom")
    precision_bits: int = 256


def families(cfg: Config) -> dict:
    bits = cfg.precision_bits
    sparse = [2 ** k for k in range(1, 7)]
    return {
        "uniform-sixth": load_preset("uniform-sixth", bits),
        "decaying": GammaSpec.from_list([f"1/{6 + s}" for s in range(1, 120)], "1/200", bits),
        "example2-alternating": load_preset("example2-alternating", bits, depth=2 * cfg.smax),
        "periodic-floor": GammaSpec.periodic(["1/7", "1/10"], bits),
        "example4-sparse": load_preset("example4-sparse", bits, sparse=sparse),
    }


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--smax", type=int, default=Config.smax)
    parser.add_argument("--out-dir", type=Path, default=Config.out_dir)
    cfg = Config(**{k: v for k, v in vars(parser.parse_args()).items()})
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    for name, spec in families(cfg).items():
        series = widom_factors(spec, (1 << cfg.series_smax) - 1) if spec.jac3_regime else None
        path = cfg.out_dir / f"{name}.csv"
        with open(path, "w", newline="") as fh, working(cfg.precision_bits):
            writer = csv.writer(fh)
            writer.writerow(["s", "W_2^s", "W_2^s-1"])
            for s in range(cfg.smax):
                below = ""
                if series is not None and 1 <= s <= cfg.series_smax:
                    below = f"{float(series[(1 << s) - 1].value):.12g}"
                writer.writerow([s, f"{float(widom_dyadic_closed(spec, s).value):.12g}", below])
        with working(cfg.precision_bits):
            ws = [float(widom_dyadic_closed(spec, s).value) for s in range(cfg.smax)]
        note = f" ({spec.label})" if spec.label else ""
        print(f"{name}{note}: min W_2^s = {min(ws):.4f}, last = {ws[-1]:.4f} -> {path}")


if __name__ == "__main__":
    main()
