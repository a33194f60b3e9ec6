"""Recurrence coefficients a_n of the equilibrium measure (b_n = 1/2 throughout).

The canonical store is the prefix sum L[n] = sum_{i<=n} log a_i, so every
block product a_i^2 ... a_j^2 is exp(2 (L[j] - L[i-1])).  a_n at a power of
two comes from a quotient of dyadic norms; every other a_n comes from the
block identity

    a_n^2 ... a_{n-2^s+1}^2 + a_{n-2^s}^2 ... a_{n-2^(s+1)+1}^2 = ||Q_{2^s}||^2

with n = 2^s (2k + 1).  The subtraction on the right is the only place where
precision can be lost, so it is metered.
"""
from __future__ import annotations

import json
import logging
import math
import struct
from dataclasses import dataclass
from pathlib import Path

import gmpy2
from gmpy2 import mpfr

from .errors import DomainError, PrecisionExhausted
from .gamma import GammaSpec, q_norm_sq
from .numeric import LogScalar, working

log = logging.getLogger(__name__)

MAX_PRECISION = 4096
CHECKPOINT_EVERY = 1 << 16
_MAGIC = b"CJTB"
_VERSION = 1


class _CancellationBudget(Exception):
    def __init__(self, bits):
        self.bits = bits


@dataclass(frozen=True, eq=False)
class JacobiTable:
    spec: GammaSpec
    prefix_log: tuple
    precision_bits: int
    max_loss_bits: float

    @property
    def N(self) -> int:
        return len(self.prefix_log) - 1

    def log_a(self, n: int) -> mpfr:
        if not 1 <= n <= self.N:
            raise DomainError(f"a_{n} outside table 1..{self.N}")
        with working(self.precision_bits):
            return self.prefix_log[n] - self.prefix_log[n - 1]

    def a(self, n: int) -> mpfr:
        """a_n, with a_0 = 0."""
        if n == 0:
            return mpfr(0)
        with working(self.precision_bits):
            return gmpy2.exp(self.log_a(n))

    def a_values(self) -> list:
        return [self.a(n) for n in range(1, self.N + 1)]

    def log_values(self) -> list:
        return [LogScalar(self.log_a(n)) for n in range(1, self.N + 1)]

    def norm(self, n: int) -> LogScalar:
        """||Q_n|| = a_1 ... a_n."""
        return LogScalar(self.prefix_log[n])


def _dyadic(m: int) -> tuple:
    v = (m & -m).bit_length() - 1
    return v, ((m >> v) - 1) // 2


def _extend(spec: GammaSpec, prefix: list, N: int, budget: float, max_loss: float,
            checkpoint: Path | None, every: int) -> float:
    log_n = lambda s: q_norm_sq(spec, s).log_value
    log2 = gmpy2.const_log2()
    for m in range(len(prefix), N + 1):
        v, k = _dyadic(m)
        if m == 1:
            log_a = log_n(0) / 2
        elif k == 0:
            half = 1 << (v - 1)
            log_a = (log_n(v) - log_n(v - 1)) / 2 - (prefix[m - 1] - prefix[half])
        else:
            end = k << (v + 1)
            ratio = gmpy2.exp(2 * (prefix[end] - prefix[end - (1 << v)]) - log_n(v))
            if ratio >= 1:
                raise _CancellationBudget(math.inf)
            loss = float(-gmpy2.log1p(-ratio) / log2)
            max_loss = max(max_loss, loss)
            if loss > budget:
                raise _CancellationBudget(loss)
            log_numer = log_n(v) + gmpy2.log1p(-ratio)
            log_a = (log_numer - 2 * (prefix[m - 1] - prefix[end])) / 2
        prefix.append(prefix[-1] + log_a)
        if checkpoint is not None and m % every == 0:
            save_checkpoint(checkpoint, spec, prefix, max_loss)
    return max_loss


def jacobi_coefficients(spec: GammaSpec, N: int, max_precision: int = MAX_PRECISION,
                        checkpoint=None, checkpoint_every: int = CHECKPOINT_EVERY) -> JacobiTable:
    """a_1..a_N, doubling precision whenever a subtraction loses more than half of it."""
    if N < 1:
        raise DomainError(f"N must be >= 1, got {N}")
    checkpoint = Path(checkpoint) if checkpoint is not None else None
    bits = spec.precision_bits
    while True:
        work = spec.with_precision(bits)
        with working(bits):
            prefix, max_loss = [mpfr(0)], 0.0
            if checkpoint is not None and checkpoint.exists():
                prefix, max_loss = load_checkpoint(checkpoint, work)
                prefix = prefix[: N + 1]
            try:
                max_loss = _extend(work, prefix, N, bits / 2, max_loss, checkpoint,
                                   checkpoint_every)
            except _CancellationBudget as exc:
                if bits * 2 > max_precision:
                    raise PrecisionExhausted(
                        f"recurrence lost {exc.bits:.1f} bits at {bits}-bit precision; "
                        f"ceiling is {max_precision}") from None
                log.info("cancellation of %.1f bits at %d bits; retrying at %d",
                         exc.bits, bits, bits * 2)
                bits *= 2
                continue
        if checkpoint is not None:
            save_checkpoint(checkpoint, work, prefix, max_loss)
        return JacobiTable(work, tuple(prefix), bits, max_loss)


# -- checkpoints -----------------------------------------------------------------

def save_checkpoint(path, spec: GammaSpec, prefix: list, max_loss: float) -> None:
    """Versioned binary record: magic, version, JSON header, prefix log-sums."""
    header = json.dumps({"spec": spec.digest(), "precision_bits": spec.precision_bits,
                         "count": len(prefix), "max_loss_bits": max_loss}).encode()
    path = Path(path)
    tmp = path.with_suffix(path.suffix + ".tmp")
    with open(tmp, "wb") as fh:
        fh.write(_MAGIC + struct.pack("<HI", _VERSION, len(header)) + header)
        for x in prefix:
            blob = gmpy2.to_binary(x)
            fh.write(struct.pack("<I", len(blob)) + blob)
    tmp.replace(path)


def load_checkpoint(path, spec: GammaSpec) -> tuple:
    """Prefix log-sums and loss meter from a checkpoint written for ``spec``."""
    data = Path(path).read_bytes()
    if data[:4] != _MAGIC:
        raise DomainError(f"{path} is not a Jacobi checkpoint")
    version, hlen = struct.unpack_from("<HI", data, 4)
    if version != _VERSION:
        raise DomainError(f"unsupported checkpoint version {version}")
    offset = 10
    header = json.loads(data[offset: offset + hlen])
    offset += hlen
    if header["spec"] != spec.digest():
        raise DomainError(f"checkpoint {path} was written for a different gamma sequence")
    if header["precision_bits"] != spec.precision_bits:
        return [mpfr(0)], 0.0
    prefix = []
    for _ in range(header["count"]):
        (size,) = struct.unpack_from("<I", data, offset)
        offset += 4
        prefix.append(gmpy2.from_binary(data[offset: offset + size]))
        offset += size
    return prefix, header["max_loss_bits"]


# -- block products, bounds, limits -------------------------------------------------

def block_product(table: JacobiTable, n: int, s: int) -> LogScalar:
    """a_n^2 a_{n-1}^2 ... a_{n-2^s+1}^2."""
    start = n - (1 << s)
    if start < 0 or n > table.N:
        raise DomainError(f"window [{start + 1}, {n}] outside table 1..{table.N}")
    with working(table.precision_bits):
        return LogScalar(2 * (table.prefix_log[n] - table.prefix_log[start]))


@dataclass(frozen=True)
class JacBounds:
    c: mpfr
    C: mpfr
    lower: LogScalar
    upper: LogScalar
    even_upper: LogScalar


def jac3_bounds(spec: GammaSpec, s: int) -> JacBounds:
    """Bracket for odd-multiple blocks and the cap for even-multiple blocks at level s."""
    if not spec.jac3_regime:
        raise DomainError("block bounds need every gamma_s <= 1/6")
    with working(spec.precision_bits):
        g = spec.gamma(s + 1)
        c_exact = 4 * g * g / (1 - 2 * g) ** 2  # exact, so 1 - 4c is never rounded below 0
        c = mpfr(c_exact)
        C = 2 / (1 + gmpy2.sqrt(mpfr(1 - 4 * c_exact)))
        norm = q_norm_sq(spec, s)
        log_C = gmpy2.log(C)
        return JacBounds(c, C, LogScalar(norm.log_value - log_C), norm,
                         LogScalar(log_C + q_norm_sq(spec, s + 1).log_value - norm.log_value))


@dataclass(frozen=True)
class ProfilePoint:
    s: int
    index: int
    a: mpfr
    deviation: mpfr


def limit_profile(spec: GammaSpec, j: int, n: int, s_range, table: JacobiTable | None = None) -> list:
    """a_{j 2^s + n} over ``s_range`` together with |a_{j 2^s + n} - a_n|."""
    if not spec.jac3_regime:
        raise DomainError("limit profiles need every gamma_s <= 1/6")
    s_range = list(s_range)
    need = max(j * (1 << s) + n for s in s_range)
    if table is None or table.N < need:
        table = jacobi_coefficients(spec, max(need, n, 1))
    with working(table.precision_bits):
        target = table.a(n)
        out = []
        for s in s_range:
            index = j * (1 << s) + n
            value = table.a(index)
            out.append(ProfilePoint(s, index, value, abs(value - target)))
        return out
