import gmpy2
import numpy as np
import pytest
from gmpy2 import mpfr

from cantor_op.algebra import q_norm_general
from cantor_op.errors import DomainError
from cantor_op.gamma import GammaSpec
from cantor_op.jacobi import jacobi_coefficients
from cantor_op.numeric import working
from cantor_op.oracle import DiscreteMeasure, compare_jacobi, nu_measure, stieltjes

EPS = mpfr(2) ** -120


def test_two_point_measure():
    spec = GammaSpec.constant("1/4")
    a, b = stieltjes(nu_measure(spec, 1), 1)
    with working(256):
        assert abs(a[0] - 1 / gmpy2.sqrt(mpfr(8))) < EPS
        assert abs(b[0] - mpfr(1) / 2) < EPS


def test_measure_shape(mixed):
    m = nu_measure(mixed, 6)
    with working(256):
        assert sum(m.weights, mpfr(0)) == 1
        xs = sorted(m.nodes)
        assert all(abs(x + y - 1) < EPS for x, y in zip(xs, reversed(xs)))
    with pytest.raises(DomainError):
        DiscreteMeasure(m.nodes, m.weights[:-1])
    with pytest.raises(DomainError):
        stieltjes(m, 64)


def test_quarter_oracle_is_constant():
    spec = GammaSpec.constant("1/4")
    report = compare_jacobi(spec, 12, 64, 1e-10)
    assert report.passed
    assert report.max_b_offset < 1e-60
    a, _ = stieltjes(nu_measure(spec, 10), 32)
    with working(256):
        assert max(abs(x - mpfr(1) / 4) for x in a[1:]) < 1e-60


@pytest.mark.parametrize("spec", [GammaSpec.constant("1/6"), GammaSpec.from_list(["1/5", "1/7"], "1/6"),
                                  GammaSpec.constant("1/4")])
def test_node_measure_is_exact_below_node_count(spec):
    # equal weights on the zeros of Q_{2^s} integrate degree < 2^(s+1) exactly,
    # so every coefficient the measure supports already equals the limit
    table = jacobi_coefficients(spec, 63)
    a, _ = stieltjes(nu_measure(spec, 6), 63)
    with working(256):
        assert max(abs(a[n - 1] - table.a(n)) for n in range(1, 64)) < 1e-70
    for s in (8, 10):
        assert compare_jacobi(spec, s, 16, 1e-70, table=table).passed


def test_mixed_spec_agrees(mixed):
    report = compare_jacobi(mixed, 12, 48, 1e-8)
    assert report.passed, report.max_deviation
    assert report.cauchy_level == 10 and report.cauchy_max is not None
    assert report.max_b_offset < 1e-60
    d = report.to_dict()
    assert d["pass"] is True and len(d["deviations"]) == 48


def test_oracle_norms_match_expansion(mixed):
    a, _ = stieltjes(nu_measure(mixed, 12), 24)
    with working(256):
        log_norm = mpfr(0)
        for n in range(1, 25):
            log_norm += gmpy2.log(a[n - 1])
            assert abs(2 * log_norm - q_norm_general(mixed, n).log_value) < 1e-40


def test_oracle_matches_without_reorthogonalization_at_small_m(sixth):
    m = nu_measure(sixth, 8)
    full, _ = stieltjes(m, 8)
    plain, _ = stieltjes(m, 8, reorthogonalize=False)
    with working(256):
        assert max(abs(x - y) for x, y in zip(full, plain)) < 1e-50


def test_m_limit(sixth):
    with pytest.raises(DomainError):
        compare_jacobi(sixth, 6, 17, 1e-8)


def test_reuses_table(sixth):
    table = jacobi_coefficients(sixth, 32)
    report = compare_jacobi(sixth, 8, 16, 1e-3, table=table)
    assert report.passed and report.level == 8 and report.M == 16
