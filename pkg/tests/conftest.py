"""Shared test oracles. These deliberately avoid the package's own code paths."""
from fractions import Fraction

import pytest
from hypothesis import settings

settings.register_profile("default", max_examples=100, deadline=None)
settings.load_profile("default")


def partition_dp(n_max):
    """p(0..n_max) by the coin-change recurrence over part sizes."""
    p = [1] + [0] * n_max
    for part in range(1, n_max + 1):
        for total in range(part, n_max + 1):
            p[total] += p[total - part]
    return p


def expand_product(factors, n_max):
    """Coefficients of prod (1 + c q^e) over (c, e) pairs, below q^(n_max+1)."""
    out = [0] * (n_max + 1)
    out[0] = 1
    for c, e in factors:
        if e > n_max:
            continue
        for i in range(n_max, e - 1, -1):
            out[i] += c * out[i - e]
    return out


def euler_product(n_max, r=1):
    return expand_product([(-1, r * j) for j in range(1, n_max // r + 1)], n_max)


def divisors(n):
    return [d for d in range(1, n + 1) if n % d == 0]


@pytest.fixture(scope="session")
def p_table():
    return partition_dp(600)


F = Fraction
