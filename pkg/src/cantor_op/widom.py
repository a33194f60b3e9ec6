"""Widom factors W_n = a_1 ... a_n / Cap^n and their dyadic closed form."""
from __future__ import annotations

from dataclasses import dataclass

import gmpy2
from gmpy2 import mpfr

from .errors import DomainError
from .gamma import GammaSpec, capacity, log_tail
from .jacobi import JacobiTable, jacobi_coefficients
from .numeric import LogScalar, working


@dataclass(frozen=True, eq=False)
class WidomSeries:
    N: int
    log_w: tuple  # log_w[n - 1] = log W_n
    precision_bits: int

    def __getitem__(self, n: int) -> LogScalar:
        if not 1 <= n <= self.N:
            raise DomainError(f"W_{n} outside 1..{self.N}")
        return LogScalar(self.log_w[n - 1])

    @staticmethod
    def is_dyadic(n: int) -> bool:
        return n > 0 and n & (n - 1) == 0


def widom_factors(spec: GammaSpec, N: int, table: JacobiTable | None = None) -> WidomSeries:
    if table is None or table.N < N:
        table = jacobi_coefficients(spec, N)
    with working(table.precision_bits):
        log_cap = capacity(table.spec).log_value
        logs = tuple(table.prefix_log[n] - n * log_cap for n in range(1, N + 1))
    return WidomSeries(N, logs, table.precision_bits)


def widom_dyadic_closed(spec: GammaSpec, s: int) -> LogScalar:
    """W_{2^s} = sqrt(1 - 2 gamma_{s+1}) / (2 exp(sum_{k>s} 2^(s-k) log gamma_k))."""
    with working(spec.precision_bits):
        g = mpfr(spec.gamma(s + 1))
        return LogScalar(gmpy2.log(1 - 2 * g) / 2 - gmpy2.const_log2() - log_tail(spec, s))


@dataclass(frozen=True)
class BlockReport:
    s: int
    horizon: int
    argmin: int
    minimum: LogScalar
    argmax: int
    maximum: LogScalar
    min_at_dyadic: bool


def widom_min_check(spec: GammaSpec, s: int, series: WidomSeries | None = None) -> BlockReport:
    """Minimum and maximum of W_n over 2^s <= n < 2^(s+1)."""
    if not spec.jac3_regime:
        raise DomainError("the dyadic-block minimum needs every gamma_s <= 1/6")
    lo, hi = 1 << s, 1 << (s + 1)
    if series is None or series.N < hi - 1:
        series = widom_factors(spec, hi - 1)
    block = [(series.log_w[n - 1], n) for n in range(lo, hi)]
    # ties resolve to the smallest n, so an exact tie with W_{2^s} counts as attained there
    low = min(block)
    high = max(block, key=lambda t: (t[0], -t[1]))
    return BlockReport(s, hi - 1, low[1], LogScalar(low[0]), high[1], LogScalar(high[0]),
                       low[1] == lo)
