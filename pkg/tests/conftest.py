import random

import pytest
from gmpy2 import mpq

from cantor_op.gamma import GammaSpec, Tail


def random_spec(rng: random.Random, prefix_len: int = 12, lo: int = 500, hi: int = 2500,
                precision_bits: int = 256) -> GammaSpec:
    """Random sequence with gamma_s in [lo/10^4, hi/10^4] and a random constant tail."""
    prefix = tuple(mpq(rng.randint(lo, hi), 10000) for _ in range(prefix_len))
    tail = mpq(rng.randint(lo, hi), 10000)
    return GammaSpec(prefix, Tail("constant", (tail,)), precision_bits)


def random_specs(count: int, seed: int, **kw) -> list:
    rng = random.Random(seed)
    return [random_spec(rng, **kw) for _ in range(count)]


@pytest.fixture(scope="session")
def quarter():
    return GammaSpec.constant("1/4")


@pytest.fixture(scope="session")
def sixth():
    return GammaSpec.constant("1/6")


@pytest.fixture(scope="session")
def mixed():
    return GammaSpec.from_list(["1/5", "1/7"], "1/6")


ACCEPTANCE = []  # (criterion, passed, detail) in run order


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, passed, detail in sorted(ACCEPTANCE):
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'} criterion {number:2d}: {detail}")
