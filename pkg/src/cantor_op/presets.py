"""Named gamma sequences, including the Widom-factor example families.

The example families use gamma = 1/k, which exceeds 1/4 for k < 4.  Their
index is shifted so k starts at ``kmin`` (default 4); the shift is recorded
in the spec label and printed in CLI output headers.
"""
from __future__ import annotations

from gmpy2 import mpq

from .errors import ConfigError
from .gamma import GammaSpec, Tail
from .numeric import DEFAULT_PRECISION

PRESETS = ("uniform-quarter", "uniform-sixth", "example2-alternating", "example4-sparse")


def _check_kmin(kmin: int) -> int:
    if kmin < 4:
        raise ConfigError(f"kmin={kmin} would give gamma = 1/{kmin} > 1/4")
    return kmin


def load_preset(name: str, precision_bits: int = DEFAULT_PRECISION, *, kmin: int = 4,
                depth: int = 64, sparse=None) -> GammaSpec:
    """The named preset.

    example2-alternating: gamma_{2k} = 1/6 and gamma_{2k-1} = 1/(k + kmin - 1),
    truncated after ``depth`` terms and continued by the constant 1/6 (the
    closed-form tail sums need a constant or repeating tail).

    example4-sparse: gamma_s = 1/6 except gamma_{s_i} = 1/(i + kmin - 1) on the
    strictly increasing index list ``sparse``.
    """
    if name == "uniform-quarter":
        return GammaSpec((), Tail("constant", (mpq(1, 4),)), precision_bits, label=name)
    if name == "uniform-sixth":
        return GammaSpec((), Tail("constant", (mpq(1, 6),)), precision_bits, label=name)
    if name == "example2-alternating":
        kmin = _check_kmin(kmin)
        if depth < 1:
            raise ConfigError("depth must be positive")
        prefix = [mpq(1, 6) if s % 2 == 0 else mpq(1, (s + 1) // 2 + kmin - 1)
                  for s in range(1, depth + 1)]
        label = (f"{name}: gamma_(2k-1) = 1/(k+{kmin - 1}) (index shifted so k starts at {kmin}); "
                 f"truncated at s={depth}, tail const 1/6")
        return GammaSpec(tuple(prefix), Tail("constant", (mpq(1, 6),)), precision_bits, label=label)
    if name == "example4-sparse":
        kmin = _check_kmin(kmin)
        sparse = list(sparse or [])
        if not sparse or any(s < 1 for s in sparse) or any(a >= b for a, b in zip(sparse, sparse[1:])):
            raise ConfigError("example4-sparse needs a strictly increasing list of positive indices")
        prefix = [mpq(1, 6)] * sparse[-1]
        for i, s in enumerate(sparse):
            prefix[s - 1] = mpq(1, i + kmin)
        label = (f"{name}: gamma_(s_i) = 1/(i+{kmin - 1}) on s = {sparse} "
                 f"(index shifted so k starts at {kmin}); 1/6 elsewhere")
        return GammaSpec(tuple(prefix), Tail("constant", (mpq(1, 6),)), precision_bits, label=label)
    raise ConfigError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}")
