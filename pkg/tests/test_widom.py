import gmpy2
import pytest
from gmpy2 import mpfr, mpq
from hypothesis import given, settings, strategies as st

from cantor_op.errors import DomainError
from cantor_op.gamma import GammaSpec, Tail, capacity
from cantor_op.jacobi import jacobi_coefficients
from cantor_op.numeric import working
from cantor_op.presets import load_preset
from cantor_op.widom import WidomSeries, widom_dyadic_closed, widom_factors, widom_min_check

from conftest import random_specs

EPS = mpfr(2) ** -120


def rel(x, y):
    with working(256):
        return abs(mpfr(x) - mpfr(y)) / abs(mpfr(y))


@pytest.fixture(scope="module")
def sixth_series():
    return widom_factors(GammaSpec.constant("1/6"), 4095)


@pytest.mark.parametrize("value, expected", [("1/4", 2), ("1/6", 6)])
def test_dyadic_equalities(value, expected):
    spec = GammaSpec.constant(value)
    series = widom_factors(spec, 4096)
    with working(256):
        root = gmpy2.sqrt(mpfr(expected))
        for s in range(13):
            assert rel(series[1 << s].value, root) < EPS
            assert rel(widom_dyadic_closed(spec, s).value, root) < EPS


@pytest.mark.parametrize("spec", random_specs(5, seed=3, lo=100, hi=2500)
                         + [GammaSpec.periodic(["1/5", "1/9", "1/4"])])
def test_closed_form_matches_series(spec):
    series = widom_factors(spec, 1 << 12)
    for s in range(13):
        assert abs(series[1 << s].log_value - widom_dyadic_closed(spec, s).log_value) < EPS


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(1, 250), min_size=0, max_size=12),
       st.lists(st.integers(1, 250), min_size=1, max_size=3))
def test_dyadic_lower_bounds(prefix, tail):
    spec = GammaSpec(tuple(mpq(p, 1000) for p in prefix),
                     Tail("repeat", tuple(mpq(t, 1000) for t in tail)))
    with working(256):
        for s in range(20):
            w = widom_dyadic_closed(spec, s).log_value
            assert w >= gmpy2.log(mpfr(2)) / 2 - EPS
            if spec.jac3_regime:
                assert w >= gmpy2.log(mpfr(6)) / 2 - EPS


@settings(max_examples=20, deadline=None)
@given(st.lists(st.integers(1, 166), min_size=1, max_size=12), st.integers(1, 166))
def test_decaying_gamma_lower_bound(prefix, tail):
    # W_{2^s} >= sqrt(1 / (6 gamma_{s+1})) in the 1/6 regime
    spec = GammaSpec(tuple(mpq(p, 1000) for p in prefix), Tail("constant", (mpq(tail, 1000),)))
    with working(256):
        for s in range(16):
            bound = gmpy2.log(1 / (6 * mpfr(spec.gamma(s + 1)))) / 2
            assert widom_dyadic_closed(spec, s).log_value >= bound - EPS


@pytest.mark.parametrize("value", ["1/6", "1/8"])
def test_block_minimum_at_power_of_two(value):
    spec = GammaSpec.constant(value)
    series = widom_factors(spec, 2047)
    for s in range(3, 11):
        report = widom_min_check(spec, s, series)
        assert report.min_at_dyadic and report.argmin == 1 << s
        assert report.horizon == (1 << (s + 1)) - 1
        assert report.maximum.log_value > report.minimum.log_value


def test_block_minimum_examples(sixth_series):
    assert widom_min_check(GammaSpec.constant("1/6"), 4).argmin == 16
    with working(256):
        root3 = gmpy2.log(mpfr(3)) / 2
        for s in range(1, 11):
            n = (1 << s) + (1 << (s - 1))
            assert sixth_series[n].log_value >= sixth_series[1 << s].log_value + root3 - EPS
    with pytest.raises(DomainError):
        widom_min_check(GammaSpec.constant("1/4"), 3)


def test_block_max_grows(sixth_series):
    logs = [sixth_series[(1 << s) - 1].log_value for s in range(2, 13)]
    assert all(x < y for x, y in zip(logs, logs[1:]))


def test_regularity_proxy(sixth_series):
    with working(256):
        ratios = [sixth_series[(1 << s) - 1].log_value / ((1 << s) - 1) for s in range(3, 13)]
    assert all(x > y for x, y in zip(ratios, ratios[1:]))
    assert ratios[-1] < mpfr(0.01)


@pytest.mark.parametrize("spec", [GammaSpec.constant("1/6"), GammaSpec.periodic(["1/7", "1/10"]),
                                  GammaSpec.from_list(["1/9", "1/12"], "1/8")])
def test_dyadic_minimum_below_half_inverse_floor(spec):
    c = min(spec.prefix + spec.tail.values)
    with working(256):
        proxy = min(widom_dyadic_closed(spec, s).value for s in range(30))
        assert proxy <= 1 / (2 * mpfr(c)) + EPS


def test_alternating_preset_grows_and_sparse_preset_stays_bounded():
    ex2 = load_preset("example2-alternating", depth=200)
    logs = [widom_dyadic_closed(ex2, s).log_value for s in range(0, 120, 10)]
    assert all(x < y for x, y in zip(logs, logs[1:]))
    assert logs[-1] - logs[1] > 1
    sparse = [2, 4, 8, 16, 32, 64]
    ex4 = load_preset("example4-sparse", sparse=sparse)
    with working(256):
        at_sparse = [widom_dyadic_closed(ex4, s).value for s in sparse]
        assert max(at_sparse) < 3
        below = [widom_dyadic_closed(ex4, s - 1).value for s in sparse]
        assert all(x < y for x, y in zip(below, below[1:]))


def test_series_lookup_and_log_identity(mixed):
    table = jacobi_coefficients(mixed, 64)
    series = widom_factors(mixed, 64, table=table)
    assert WidomSeries.is_dyadic(32) and not WidomSeries.is_dyadic(48)
    with working(256):
        cap = capacity(mixed).log_value
        assert abs(series[17].log_value - (table.prefix_log[17] - 17 * cap)) < EPS
    with pytest.raises(DomainError):
        series[65]
