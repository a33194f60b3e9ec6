"""The polynomial tower P_{2^s}, its preimages, basic intervals and node measures.

Evaluation functions only use ``+`` and ``*`` on ``x``, so they accept a
numpy object array of mpfr values as well as a scalar.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import gmpy2
import numpy as np
from gmpy2 import mpfr

from .errors import DomainError
from .gamma import GammaSpec, q_norm_sq, r_linear
from .numeric import tolerance, working


def _coerce(x):
    if isinstance(x, np.ndarray):
        return x
    return mpfr(x)


def eval_P(spec: GammaSpec, s: int, x):
    """P_{2^s}(x) from P_1 = x - 1 and P_{2^(m+1)} = P_{2^m} (P_{2^m} + r_m)."""
    with working(spec.precision_bits):
        p = _coerce(x) - 1
        for m in range(s):
            p = p * (p + r_linear(spec, m))
        return p


def eval_Q_pow2(spec: GammaSpec, s: int, x):
    """Q_{2^s}(x) = P_{2^s}(x) + r_s/2."""
    with working(spec.precision_bits):
        return eval_P(spec, s, x) + r_linear(spec, s) / 2


def eval_Q_pow2_squaring(spec: GammaSpec, s: int, x):
    """Q_{2^s} through Q_{2^(m+1)} = Q_{2^m}^2 - ||Q_{2^m}||^2, starting at x - 1/2."""
    with working(spec.precision_bits):
        q = _coerce(x) - mpfr(1) / 2
        for m in range(s):
            q = q * q - q_norm_sq(spec, m).value
        return q


def q_pow2_values(spec: GammaSpec, smax: int, x) -> list:
    """[Q_1(x), Q_2(x), ..., Q_{2^smax}(x)] sharing one pass through the tower."""
    with working(spec.precision_bits):
        p = _coerce(x) - 1
        out = []
        for m in range(smax + 1):
            r = r_linear(spec, m)
            out.append(p + r / 2)
            p = p * (p + r)
        return out


def _split(r: mpfr, t: mpfr, slack: mpfr):
    """Roots y_lo <= y_hi of y^2 + r y - t = 0 (i.e. y (y + r) = t)."""
    disc = r * r + 4 * t
    if disc < 0:
        if disc < -slack * r * r:
            raise DomainError(f"negative discriminant {disc} in preimage")
        disc = mpfr(0)
    lo = (-r - gmpy2.sqrt(disc)) / 2
    hi = -t / lo
    return lo, hi


def _preimage(spec: GammaSpec, m: int, t: mpfr, slack: mpfr) -> list:
    if m == 0:
        return [t + 1]
    lo, hi = _split(r_linear(spec, m - 1), t, slack)
    below = _preimage(spec, m - 1, lo, slack)
    above = _preimage(spec, m - 1, hi, slack)
    out = []
    # On level m-1 >= 1 the tower decreases on even-numbered intervals and
    # increases on odd ones; level 0 is a single increasing interval.
    for j, (a, b) in enumerate(zip(below, above)):
        if m - 1 >= 1 and j % 2 == 0:
            out += [b, a]
        else:
            out += [a, b]
    return out


def preimage(spec: GammaSpec, s: int, t) -> list:
    """All 2^s real solutions of P_{2^s}(x) = t, ascending.

    Valid for t in [-r_s, 0]; raises DomainError if a discriminant is negative
    beyond the relative slack 2^-(precision/2).
    """
    if s < 0:
        raise DomainError(f"level must be >= 0, got {s}")
    with working(spec.precision_bits):
        return _preimage(spec, s, mpfr(t), tolerance(spec.precision_bits))


@dataclass(frozen=True)
class Interval:
    left: mpfr
    right: mpfr
    level: int

    @property
    def length(self) -> mpfr:
        return self.right - self.left

    def __contains__(self, x) -> bool:
        return self.left <= x <= self.right


def basic_intervals(spec: GammaSpec, s: int) -> list:
    """The 2^s basic intervals of E_s = {-r_s <= P_{2^s} <= 0}, left to right."""
    with working(spec.precision_bits):
        zeros = preimage(spec, s, 0)
        bottoms = preimage(spec, s, -r_linear(spec, s))
        out = []
        for j, (z, b) in enumerate(zip(zeros, bottoms)):
            decreasing = s >= 1 and j % 2 == 0
            left, right = (z, b) if decreasing else (b, z)
            out.append(Interval(left, right, s))
        return out


@dataclass(frozen=True, eq=False)
class NodeSet:
    level: int
    nodes: np.ndarray
    weight: mpfr

    def __len__(self) -> int:
        return len(self.nodes)


@lru_cache(maxsize=16)
def chebyshev_nodes(spec: GammaSpec, s: int) -> NodeSet:
    """Zeros of Q_{2^s} with uniform weight 2^-s (the measure nu_s)."""
    if s < 1:
        raise DomainError(f"node level must be >= 1, got {s}")
    with working(spec.precision_bits):
        xs = preimage(spec, s, -r_linear(spec, s) / 2)
        nodes = np.empty(len(xs), dtype=object)
        nodes[:] = xs
        nodes.setflags(write=False)
        return NodeSet(s, nodes, gmpy2.mul_2exp(mpfr(1), -s))


def integrate_nu(spec: GammaSpec, s: int, f, vectorized: bool = False) -> mpfr:
    """2^-s sum_k f(x_k) over the zeros of Q_{2^s}."""
    nodeset = chebyshev_nodes(spec, s)
    with working(spec.precision_bits):
        if vectorized:
            values = f(nodeset.nodes)
        else:
            values = [f(x) for x in nodeset.nodes]
        total = mpfr(0)
        for v in values:
            total += v
        return total * nodeset.weight
