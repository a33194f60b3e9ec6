"""Moments of products of Q_{2^k} and the B-polynomial expansion of Q_n.

An A-word is a product Q_{2^{s_n}}^{i_n} ... Q_{2^{s_1}}^{i_1} with strictly
decreasing levels and exponents in {1, 2}.  Its integral against the
equilibrium measure is either exactly zero or a product of squared dyadic
norms, and is computed two independent ways below: a closed product formula
and the step-by-step reduction rules.

B_n is the product of Q_{2^k} over the binary digits of n.  For
n = 2^s (2k + 1), Q_n is B_n plus a combination of B_{(2j+1) 2^s}, j < k,
whose coefficients solve a k x k Gram system.
"""
from __future__ import annotations

from dataclasses import dataclass

import gmpy2
from gmpy2 import mpfr

from .errors import DomainError, PrecisionExhausted
from .gamma import GammaSpec, q_norm_sq
from .numeric import LogScalar, tolerance, working
from .tower import q_pow2_values

GRAM_LIMIT = 256


@dataclass(frozen=True)
class AWord:
    """Pairs (level, exponent) read from the top level down."""

    terms: tuple

    def __post_init__(self):
        terms = tuple((int(s), int(i)) for s, i in self.terms)
        object.__setattr__(self, "terms", terms)
        for s, i in terms:
            if s < 0 or i not in (1, 2):
                raise DomainError(f"bad A-word term {(s, i)}")
        levels = [s for s, _ in terms]
        if any(a <= b for a, b in zip(levels, levels[1:])):
            raise DomainError(f"A-word levels must strictly decrease: {levels}")

    @classmethod
    def from_exponents(cls, exponents: dict) -> "AWord":
        """From {level: exponent}; zero exponents are dropped."""
        return cls(tuple((s, e) for s, e in sorted(exponents.items(), reverse=True) if e))

    @classmethod
    def parse(cls, text: str) -> "AWord":
        """Parse ``"4:2,2:1"`` meaning Q_4^2 Q_2 (degrees must be powers of two)."""
        exponents = {}
        for item in text.split(","):
            item = item.strip()
            if not item:
                continue
            degree, _, exp = item.partition(":")
            degree = int(degree)
            if degree < 1 or degree & (degree - 1):
                raise DomainError(f"A-word degree {degree} is not a power of two")
            level = degree.bit_length() - 1
            if level in exponents:
                raise DomainError(f"A-word repeats degree {degree}")
            exponents[level] = int(exp) if exp else 1
        return cls(tuple(sorted(exponents.items(), reverse=True)))

    @property
    def degree(self) -> int:
        return sum(i << s for s, i in self.terms)

    @property
    def top_level(self) -> int:
        return self.terms[0][0] if self.terms else -1

    def __str__(self) -> str:
        return ",".join(f"{1 << s}:{i}" for s, i in self.terms)


def _norm_log(spec: GammaSpec, s: int) -> mpfr:
    return q_norm_sq(spec, s).log_value


def a_integral_closed(spec: GammaSpec, word: AWord):
    """Integral of an A-word from the closed product formula; None means exactly 0."""
    bottom_up = list(reversed(word.terms))
    if bottom_up and bottom_up[0][1] == 1:
        # the gap factor alone misses this when the bottom level is 0
        return None
    prev = -1
    for s, i in bottom_up:
        if (i - 1) ** (s - prev - 1) == 0:
            return None
        prev = s
    with working(spec.precision_bits):
        log = mpfr(0)
        exps = [i for _, i in bottom_up] + [2]
        for k, (s, _) in enumerate(bottom_up):
            if exps[k + 1] == 2:
                log += _norm_log(spec, s)
        return LogScalar(log)


def _reduce(spec: GammaSpec, terms: tuple):
    if not terms:
        return mpfr(0)
    bottom_up = list(reversed(terms))
    if bottom_up[0][1] == 1:
        return None
    for (s_lo, _), (s, i) in zip(bottom_up, bottom_up[1:]):
        if i == 1 and s >= s_lo + 2:
            return None
    top, top_exp = terms[0]
    if top_exp == 2:
        rest = _reduce(spec, terms[1:])
        return None if rest is None else _norm_log(spec, top) + rest
    q = next(j for j, (_, i) in enumerate(terms) if i == 2)
    run = [s for s, _ in terms[: q + 1]]
    if any(a != b + 1 for a, b in zip(run, run[1:])):
        raise ArithmeticError(f"no reduction rule applies to {terms}")
    rest = _reduce(spec, terms[q + 1:])
    return None if rest is None else _norm_log(spec, top) + rest


def a_integral_reduce(spec: GammaSpec, word: AWord):
    """Integral of an A-word by repeated reduction; None means exactly 0.

    Strips a top square (times its norm), collapses a consecutive run of
    single factors that ends in a square (times the top norm), and returns
    zero when the lowest exponent is 1 or a single factor sits two or more
    levels above the next one.
    """
    with working(spec.precision_bits):
        log = _reduce(spec, word.terms)
        return None if log is None else LogScalar(log)


# -- B-polynomials -------------------------------------------------------------

def b_exponents(n: int) -> dict:
    """{level: 1} for each set bit of n."""
    return {k: 1 for k in range(n.bit_length()) if n >> k & 1}


def b_product_word(n: int, m: int) -> AWord:
    """The A-word of B_n B_m (levels where both have a bit get exponent 2)."""
    exps = b_exponents(n)
    for k in b_exponents(m):
        exps[k] = exps.get(k, 0) + 1
    return AWord.from_exponents(exps)


def b_inner(spec: GammaSpec, n: int, m: int):
    """Integral of B_n B_m; None for an exact zero."""
    return a_integral_closed(spec, b_product_word(n, m))


def b_norm_sq(spec: GammaSpec, n: int) -> LogScalar:
    """||B_n||^2 = product of ||Q_{2^k}||^2 over the set bits of n."""
    with working(spec.precision_bits):
        return LogScalar(sum((_norm_log(spec, k) for k in b_exponents(n)), mpfr(0)))


def decompose_index(n: int) -> tuple:
    """(s, k) with n = 2^s (2k + 1)."""
    if n < 1:
        raise DomainError(f"index must be >= 1, got {n}")
    s = (n & -n).bit_length() - 1
    return s, ((n >> s) - 1) // 2


@dataclass(frozen=True)
class QExpansion:
    """Q_n = B_n + sum_j coefficients[j] B_{basis[j]}."""

    n: int
    s: int
    k: int
    coefficients: tuple
    basis: tuple

    def terms(self):
        yield from zip(self.basis, self.coefficients)
        yield self.n, mpfr(1)


def _scaled_entry(log_entry, log_di, log_dj):
    if log_entry is None:
        return mpfr(0)
    return gmpy2.exp(log_entry.log_value - log_di - log_dj)


def cholesky_solve(a: list, b: list, pivot_floor: mpfr) -> list:
    """Solve a x = b for symmetric positive definite ``a`` (lists of mpfr)."""
    n = len(a)
    low = [[mpfr(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1):
            acc = a[i][j]
            for p in range(j):
                acc -= low[i][p] * low[j][p]
            if i == j:
                if acc <= pivot_floor:
                    raise PrecisionExhausted(
                        f"Gram matrix lost positive definiteness at row {i} "
                        f"(pivot {float(acc):.3e}); increase precision_bits")
                low[i][i] = gmpy2.sqrt(acc)
            else:
                low[i][j] = acc / low[j][j]
    y = [mpfr(0)] * n
    for i in range(n):
        acc = b[i]
        for p in range(i):
            acc -= low[i][p] * y[p]
        y[i] = acc / low[i][i]
    x = [mpfr(0)] * n
    for i in reversed(range(n)):
        acc = y[i]
        for p in range(i + 1, n):
            acc -= low[p][i] * x[p]
        x[i] = acc / low[i][i]
    return x


def gram_expand_Q(spec: GammaSpec, n: int, max_k: int = GRAM_LIMIT) -> QExpansion:
    """Expansion of Q_n over B_{(2j+1) 2^s}, j <= k, with n = 2^s (2k + 1)."""
    s, k = decompose_index(n)
    if k > max_k:
        raise DomainError(f"Gram size {k} exceeds the limit {max_k}")
    basis = tuple((2 * j + 1) << s for j in range(k))
    if k == 0:
        return QExpansion(n, s, 0, (), ())
    with working(spec.precision_bits):
        log_d = [b_norm_sq(spec, m).log_value / 2 for m in basis]
        log_dn = b_norm_sq(spec, n).log_value / 2
        gram = [[_scaled_entry(b_inner(spec, bi, bj), log_d[i], log_d[j])
                 for j, bj in enumerate(basis)] for i, bi in enumerate(basis)]
        rhs = [-_scaled_entry(b_inner(spec, n, bj), log_dn, log_d[j])
               for j, bj in enumerate(basis)]
        y = cholesky_solve(gram, rhs, tolerance(spec.precision_bits))
        coeffs = tuple(y[j] * gmpy2.exp(log_dn - log_d[j]) for j in range(k))
        return QExpansion(n, s, k, coeffs, basis)


def eval_Q(spec: GammaSpec, n: int, x, expansion: QExpansion | None = None):
    """Q_n(x) for any n >= 1 via its B-expansion (x may be an object array)."""
    if n == 0:
        return mpfr(1)
    expansion = expansion or gram_expand_Q(spec, n)
    with working(spec.precision_bits):
        q = q_pow2_values(spec, n.bit_length() - 1, x)
        total = 0
        for degree, c in expansion.terms():
            term = c
            for level in b_exponents(degree):
                term = term * q[level]
            total = total + term
        return total


def q_norm_general(spec: GammaSpec, n: int) -> LogScalar:
    """||Q_n||^2 = integral of Q_n B_n."""
    if n == 0:
        return LogScalar.one()
    expansion = gram_expand_Q(spec, n)
    with working(spec.precision_bits):
        log_bn = b_norm_sq(spec, n).log_value
        ratio = mpfr(1)
        for degree, c in zip(expansion.basis, expansion.coefficients):
            inner = b_inner(spec, degree, n)
            if inner is not None:
                ratio += c * gmpy2.exp(inner.log_value - log_bn)
        if ratio <= 0:
            raise PrecisionExhausted(f"norm of Q_{n} cancelled to {ratio}; increase precision_bits")
        return LogScalar(log_bn + gmpy2.log(ratio))
