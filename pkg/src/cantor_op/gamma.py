"""The parameter sequence gamma, the scales r_s, capacity and dyadic norms.

A :class:`GammaSpec` is a finite prefix gamma_1..gamma_P followed by a tail
rule (a constant or a repeating block).  Both rules make the weighted tail
sums ``sum_{k>m} 2^(m-k) log gamma_k`` available in closed form, which is
what capacity and the dyadic Widom factors need.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import lru_cache
from pathlib import Path

import gmpy2
import yaml
from gmpy2 import mpfr, mpq

from .errors import ConfigError, DomainError
from .numeric import DEFAULT_PRECISION, LogScalar, working

QUARTER = mpq(1, 4)
SIXTH = mpq(1, 6)

TAIL_KINDS = {"constant": "constant", "const": "constant",
              "repeat": "repeat", "periodic": "repeat"}


def parse_rational(text) -> mpq:
    """Exact rational from ``"p/q"``, a decimal string, an int or a float."""
    if isinstance(text, type(mpq())):
        return text
    if isinstance(text, float):
        text = repr(text)
    try:
        return mpq(Fraction(str(text).strip()))
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"not a rational number: {text!r}") from exc


@dataclass(frozen=True)
class Tail:
    kind: str
    values: tuple

    def __post_init__(self):
        if self.kind not in ("constant", "repeat"):
            raise ConfigError(f"tail kind must be constant or repeat, got {self.kind!r}")
        if not self.values:
            raise ConfigError("tail needs at least one value")
        if self.kind == "constant" and len(self.values) != 1:
            raise ConfigError("constant tail takes exactly one value")


@dataclass(frozen=True)
class GammaSpec:
    prefix: tuple
    tail: Tail
    precision_bits: int = DEFAULT_PRECISION
    label: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "prefix", tuple(parse_rational(g) for g in self.prefix))
        object.__setattr__(self, "tail", Tail(self.tail.kind,
                                              tuple(parse_rational(g) for g in self.tail.values)))
        if self.precision_bits < 16:
            raise ConfigError(f"precision_bits too small: {self.precision_bits}")
        for g in self.prefix + self.tail.values:
            if not 0 < g <= QUARTER:
                raise DomainError(f"gamma values must lie in (0, 1/4], got {g}")

    @classmethod
    def constant(cls, value, precision_bits: int = DEFAULT_PRECISION) -> "GammaSpec":
        return cls((), Tail("constant", (value,)), precision_bits)

    @classmethod
    def from_list(cls, prefix, tail_value, precision_bits: int = DEFAULT_PRECISION) -> "GammaSpec":
        return cls(tuple(prefix), Tail("constant", (tail_value,)), precision_bits)

    @classmethod
    def periodic(cls, values, precision_bits: int = DEFAULT_PRECISION) -> "GammaSpec":
        return cls((), Tail("repeat", tuple(values)), precision_bits)

    def gamma(self, s: int) -> mpq:
        """gamma_s for s >= 1 (exact rational)."""
        if s < 1:
            raise DomainError(f"gamma is indexed from 1, got {s}")
        if s <= len(self.prefix):
            return self.prefix[s - 1]
        values = self.tail.values
        return values[(s - len(self.prefix) - 1) % len(values)]

    @property
    def jac3_regime(self) -> bool:
        """True iff every gamma_s <= 1/6."""
        return all(g <= SIXTH for g in self.prefix + self.tail.values)

    def with_precision(self, bits: int) -> "GammaSpec":
        return replace(self, precision_bits=int(bits))

    def to_mapping(self) -> dict:
        return {
            "prefix": [str(g) for g in self.prefix],
            "tail": {"kind": self.tail.kind, "values": [str(g) for g in self.tail.values]},
            "precision_bits": self.precision_bits,
        }

    def digest(self) -> str:
        """Stable hash of the gamma sequence alone (used by checkpoints)."""
        mapping = self.to_mapping()
        del mapping["precision_bits"]
        text = yaml.safe_dump(mapping, sort_keys=True)
        return hashlib.sha256(text.encode()).hexdigest()


# -- configuration -----------------------------------------------------------

def spec_from_mapping(data: dict, precision_bits: int | None = None) -> GammaSpec:
    """Build a spec from a mapping with keys prefix, tail.kind, tail.values, precision_bits."""
    if not isinstance(data, dict):
        raise ConfigError("gamma config must be a mapping")
    tail = data.get("tail")
    if not isinstance(tail, dict):
        raise ConfigError("gamma config needs a 'tail' mapping")
    kind = TAIL_KINDS.get(str(tail.get("kind", "")).lower())
    if kind is None:
        raise ConfigError(f"unsupported tail kind {tail.get('kind')!r}; use constant or repeat")
    values = tail.get("values", tail.get("value"))
    if not isinstance(values, (list, tuple)):
        values = [values]
    prefix = data.get("prefix") or []
    bits = precision_bits or int(data.get("precision_bits", DEFAULT_PRECISION))
    return GammaSpec(tuple(prefix), Tail(kind, tuple(values)), bits)


def load_config(path, precision_bits: int | None = None) -> GammaSpec:
    try:
        data = yaml.safe_load(Path(path).read_text())
    except (OSError, yaml.YAMLError) as exc:
        raise ConfigError(f"cannot read gamma config {path}: {exc}") from exc
    return spec_from_mapping(data, precision_bits)


def _values(text: str) -> list:
    items = [v for v in text.split(",") if v.strip()]
    if not items:
        raise ConfigError("empty value list")
    return [parse_rational(v) for v in items]


def parse_inline(text: str, precision_bits: int = DEFAULT_PRECISION) -> GammaSpec:
    """Parse ``const:<v>``, ``periodic:<v1,...>`` or ``list:<v1,...>;tail=<rule>``."""
    text = text.strip()
    head, _, rest = text.partition(":")
    head = head.lower()
    if head in ("const", "constant"):
        return GammaSpec((), Tail("constant", (parse_rational(rest),)), precision_bits)
    if head in ("periodic", "repeat"):
        return GammaSpec((), Tail("repeat", tuple(_values(rest))), precision_bits)
    if head == "list":
        values, sep, tail_text = rest.partition(";")
        if not sep or not tail_text.strip().startswith("tail="):
            raise ConfigError("list gamma needs ';tail=const:<v>' or ';tail=periodic:<...>'")
        tail_spec = parse_inline(tail_text.strip()[len("tail="):], precision_bits)
        return GammaSpec(tuple(_values(values)), tail_spec.tail, precision_bits)
    raise ConfigError(f"cannot parse gamma {text!r}")


# -- scales, capacity, norms -------------------------------------------------

@lru_cache(maxsize=None)
def log_gamma(spec: GammaSpec, s: int) -> mpfr:
    with working(spec.precision_bits):
        return gmpy2.log(mpfr(spec.gamma(s)))


@lru_cache(maxsize=None)
def r_value(spec: GammaSpec, s: int) -> LogScalar:
    """r_0 = 1, r_s = gamma_s r_{s-1}^2."""
    if s < 0:
        raise DomainError(f"level must be >= 0, got {s}")
    with working(spec.precision_bits):
        log_r = mpfr(0)
        for k in range(1, s + 1):
            log_r = log_gamma(spec, k) + 2 * log_r
        return LogScalar(log_r)


def r_linear(spec: GammaSpec, s: int) -> mpfr:
    with working(spec.precision_bits):
        return r_value(spec, s).value


@lru_cache(maxsize=None)
def log_tail(spec: GammaSpec, m: int) -> mpfr:
    """sum_{k>m} 2^(m-k) log gamma_k, with the tail summed in closed form."""
    if m < 0:
        raise DomainError(f"level must be >= 0, got {m}")
    with working(spec.precision_bits):
        total = mpfr(0)
        k = m + 1
        P = len(spec.prefix)
        while k <= P:
            total += gmpy2.mul_2exp(log_gamma(spec, k), m - k)
            k += 1
        values = spec.tail.values
        p = len(values)
        phase = (k - P - 1) % p
        block = mpfr(0)
        for j in range(p):
            block += gmpy2.mul_2exp(gmpy2.log(mpfr(values[(phase + j) % p])), -(j + 1))
        block /= 1 - gmpy2.mul_2exp(mpfr(1), -p)
        return total + gmpy2.mul_2exp(block, m - k + 1)


def capacity(spec: GammaSpec) -> LogScalar:
    """Cap(K(gamma)) = exp(sum_k 2^-k log gamma_k)."""
    if spec.tail.kind not in ("constant", "repeat"):
        raise DomainError("capacity needs a constant or repeating tail")
    return LogScalar(log_tail(spec, 0))


@lru_cache(maxsize=None)
def q_norm_sq(spec: GammaSpec, s: int) -> LogScalar:
    """||Q_{2^s}||^2 = (1 - 2 gamma_{s+1}) r_s^2 / 4."""
    with working(spec.precision_bits):
        g = mpfr(spec.gamma(s + 1))
        return LogScalar(gmpy2.log(1 - 2 * g) + 2 * r_value(spec, s).log_value
                         - 2 * gmpy2.const_log2())


@dataclass(frozen=True)
class NormTable:
    r: tuple
    q_norm_sq: tuple


def norm_table(spec: GammaSpec, smax: int) -> NormTable:
    return NormTable(tuple(r_value(spec, s) for s in range(smax + 1)),
                     tuple(q_norm_sq(spec, s) for s in range(smax + 1)))
