"""Independent ground truth from the node measures nu_s.

nu_s puts mass 2^-s on each zero of Q_{2^s}; these measures converge
weak-star to the equilibrium measure.  The discretized Stieltjes procedure
on nu_s gives recurrence coefficients that depend on nothing but the node
positions, which makes it a check on the closed-form recursion.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import gmpy2
import numpy as np
from gmpy2 import mpfr

from .algebra import AWord
from .errors import DomainError, PrecisionExhausted
from .gamma import GammaSpec
from .jacobi import JacobiTable, jacobi_coefficients
from .numeric import working
from .tower import chebyshev_nodes, q_pow2_values


@dataclass(frozen=True, eq=False)
class DiscreteMeasure:
    nodes: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        if len(self.nodes) != len(self.weights):
            raise DomainError("nodes and weights differ in length")


def nu_measure(spec: GammaSpec, s: int) -> DiscreteMeasure:
    nodeset = chebyshev_nodes(spec, s)
    weights = np.empty(len(nodeset), dtype=object)
    weights[:] = [nodeset.weight] * len(nodeset)
    return DiscreteMeasure(nodeset.nodes, weights)


def stieltjes(measure: DiscreteMeasure, M: int, precision_bits: int = 256,
              reorthogonalize: bool = True) -> tuple:
    """Recurrence coefficients (a_1..a_M, b_1..b_M) of a discrete measure.

    Runs the Stieltjes/Lanczos iteration on the vector of square-root weights
    with full reorthogonalization against every earlier vector.
    """
    n = len(measure.nodes)
    if not 1 <= M < n:
        raise DomainError(f"need 1 <= M < {n} nodes, got M={M}")
    with working(precision_bits):
        x = measure.nodes
        q = np.array([gmpy2.sqrt(mpfr(w)) for w in measure.weights], dtype=object)
        q = q / gmpy2.sqrt(np.dot(q, q))
        basis = [q]
        prev = np.zeros(n, dtype=object) + mpfr(0)
        a_prev = mpfr(0)
        a, b = [], []
        for _ in range(M):
            v = x * q
            bj = np.dot(q, v)
            v = v - bj * q - a_prev * prev
            if reorthogonalize:
                for u in basis:
                    v -= np.dot(u, v) * u
            aj2 = np.dot(v, v)
            if aj2 <= 0:
                raise PrecisionExhausted(f"Stieltjes breakdown at step {len(a) + 1}")
            aj = gmpy2.sqrt(aj2)
            a.append(aj)
            b.append(bj)
            prev, q, a_prev = q, v / aj, aj
            basis.append(q)
        return a, b


def moment_quadrature(spec: GammaSpec, word: AWord, s: int) -> mpfr:
    """Integral of an A-word against nu_s by direct summation over the nodes."""
    nodeset = chebyshev_nodes(spec, s)
    with working(spec.precision_bits):
        values = q_pow2_values(spec, max(word.top_level, 0), nodeset.nodes)
        prod = np.zeros(len(nodeset), dtype=object) + mpfr(1)
        for level, exp in word.terms:
            prod = prod * values[level] ** exp
        total = mpfr(0)
        for v in prod:
            total += v
        return total * nodeset.weight


@dataclass
class OracleReport:
    level: int
    M: int
    tol: float
    max_deviation: float
    deviations: list
    cauchy_level: int | None
    cauchy_max: float | None
    max_b_offset: float
    passed: bool
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "level": self.level, "M": self.M, "tol": self.tol,
            "max_deviation": self.max_deviation, "deviations": self.deviations,
            "cauchy_level": self.cauchy_level, "cauchy_max": self.cauchy_max,
            "max_b_offset": self.max_b_offset, "pass": self.passed, **self.extra,
        }


def compare_jacobi(spec: GammaSpec, s: int, M: int, tol: float,
                   cauchy_level: int | None = None, table: JacobiTable | None = None) -> OracleReport:
    """Recursion coefficients a_1..a_M against the Stieltjes oracle on nu_s.

    The oracle is also run on nu_{cauchy_level} (default s - 2) so that the
    report separates the oracle's own discretization error from the recursion.
    """
    if M > 1 << max(s - 2, 0):
        raise DomainError(f"M={M} exceeds 2^(s-2)={1 << max(s - 2, 0)} for level {s}")
    bits = spec.precision_bits
    if table is None or table.N < M:
        table = jacobi_coefficients(spec, M)
    a_or, b_or = stieltjes(nu_measure(spec, s), M, bits)
    with working(bits):
        devs = [abs(table.a(n) - a_or[n - 1]) for n in range(1, M + 1)]
        b_off = max(abs(bj - mpfr(1) / 2) for bj in b_or)
        cauchy = None
        if cauchy_level is None and s - 2 >= 1 and M < 1 << (s - 2):
            cauchy_level = s - 2
        if cauchy_level is not None:
            a_c, _ = stieltjes(nu_measure(spec, cauchy_level), M, bits)
            cauchy = float(max(abs(x - y) for x, y in zip(a_or, a_c)))
        worst = float(max(devs))
    return OracleReport(s, M, tol, worst, [float(d) for d in devs], cauchy_level, cauchy,
                        float(b_off), worst < tol)
