from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from cphi.builders import (CharacterSpec, EtaQuotientSpec, bernoulli2, eisenstein, eta_quotient, fgh_ell,
                           gen_eta, jacobi_f, kronecker, nu, partition, partition_progression,
                           pochhammer, theta, twisted_eisenstein)
from cphi.series import InvalidInput, PuiseuxSeries, series_invert, series_pow, substitute_power

from conftest import divisors, euler_product, expand_product, partition_dp

N = 60


def coeffs(s, n):
    return [s.coefficient(i) for i in range(n)]


def legendre_oracle(d, p):
    """(d/p) for an odd prime p via Euler's criterion."""
    r = pow(d % p, (p - 1) // 2, p)
    return 0 if d % p == 0 else (1 if r == 1 else -1)


def kronecker_oracle(d, n):
    if n == 0:
        return 1 if abs(d) == 1 else 0
    out = 1
    if n < 0:
        n = -n
        out = -1 if d < 0 else 1
    while n % 2 == 0:
        n //= 2
        out *= 0 if d % 2 == 0 else (1 if d % 8 in (1, 7) else -1)
    p = 3
    while n > 1:
        while n % p == 0:
            n //= p
            out *= legendre_oracle(d, p)
        p += 2
    return out


# -- products ------------------------------------------------------------------

def test_euler_product_pentagonal():
    e = pochhammer(1, 1, N)
    assert e.integer_coefficients(N) == euler_product(N - 1)
    pent = {k * (3 * k - 1) // 2 for k in range(-10, 11)}
    assert {i for i, c in enumerate(e.integer_coefficients(N)) if c} == {x for x in pent if x < N}


def test_q2_q4_product():
    s = pochhammer(2, 4, 30)
    assert s.integer_coefficients(30) == expand_product([(-1, 2 + 4 * j) for j in range(8)], 29)
    assert coeffs(s, 7) == [1, 0, -1, 0, 0, 0, -1]


def test_theta3_product_form():
    lhs = series_pow(pochhammer(1, 2, N, negate=True), 2) * pochhammer(2, 2, N)
    assert lhs == theta(3, 1, N)


def test_eta_quotients():
    s = eta_quotient(EtaQuotientSpec(((5, 6), (1, -6)), 30))
    assert coeffs(s, 4) == [0, 1, 6, 27]
    assert eta_quotient(EtaQuotientSpec(((1, 1), (2, 0)), 30)).coefficient(Fraction(1, 24)) == 1
    one = eta_quotient(EtaQuotientSpec(((1, 1),), 30)) * series_invert(eta_quotient(EtaQuotientSpec(((1, 1),), 30)))
    assert one == PuiseuxSeries.const(1)
    delta_q = eta_quotient(EtaQuotientSpec(((1, 24),), 30)).shift(-1)
    assert coeffs(delta_q, 3) == [1, -24, 252]
    with pytest.raises(InvalidInput):
        EtaQuotientSpec(((1, 2), (1, 3)), 30)


@given(st.integers(1, 6))
def test_single_eta_24th_power(r):
    s = eta_quotient(EtaQuotientSpec(((r, 24),), 40))
    assert s == (series_pow(pochhammer(r, r, 40), 24).shift(r)).truncate(40)


# -- theta and Jacobi -------------------------------------------------------------

@pytest.mark.parametrize("r", [1, 2, 3, 5, Fraction(1, 2)])
def test_theta3_matches_direct_sum(r):
    direct = {}
    for j in range(-20, 21):
        e = r * j * j
        if e < N:
            direct[e] = direct.get(e, 0) + 1
    assert theta(3, r, N) == PuiseuxSeries.from_terms(direct, prec=N)


def test_theta_examples():
    assert theta(3, 1, 10) == PuiseuxSeries.from_terms({0: 1, 1: 2, 4: 2, 9: 2})
    t2 = theta(2, 1, 7)
    assert t2.terms() == [(Fraction(1, 4), 2), (Fraction(9, 4), 2), (Fraction(25, 4), 2)]
    assert theta(3, 3, 13) == PuiseuxSeries.from_terms({0: 1, 3: 2, 12: 2})


@given(st.integers(1, 6), st.integers(1, 6))
def test_jacobi_symmetric(x, y):
    assert jacobi_f(x, y, 40) == jacobi_f(y, x, 40)


def test_jacobi_dissections():
    assert jacobi_f(1, 1, N) == theta(3, 1, N)
    q = PuiseuxSeries.monomial
    lhs = theta(3, 1, N) - theta(3, 9, N) - 2 * q(1) * jacobi_f(3, 15, N)
    assert lhs.truncate(N).is_zero()
    lhs = theta(2, 1, N) - theta(2, 9, N) - 2 * q(Fraction(1, 4)) * jacobi_f(6, 12, N)
    assert lhs.truncate(N).is_zero()


# -- generalized eta -----------------------------------------------------------------

def test_gen_eta_leading_exponent():
    assert 17 * bernoulli2(Fraction(2, 17)) / 2 == Fraction(109, 204)
    assert gen_eta(17, 2, 10).valuation == Fraction(109, 204)


@pytest.mark.parametrize("a", range(1, 17))
def test_gen_eta_reflection(a):
    assert gen_eta(17, a, 30) == gen_eta(17, 17 - a, 30)


def test_gen_eta_index_shift_flips_sign():
    assert gen_eta(17, 19, 30) == -gen_eta(17, 2, 30)
    assert gen_eta(17, 36, 30) == gen_eta(17, 2, 30)
    with pytest.raises(InvalidInput):
        gen_eta(17, 34, 30)


# -- Eisenstein and characters ----------------------------------------------------------

def sigma(w, n):
    return sum(d ** w for d in divisors(n))


def test_eisenstein_examples():
    assert coeffs(eisenstein("E2", 1, 10), 4) == [1, -24, -72, -96]
    e4 = eisenstein("E4", 1, 30)
    assert coeffs(e4, 3) == [1, 240, 2160]
    assert [e4.coefficient(n) for n in range(1, 30)] == [240 * sigma(3, n) for n in range(1, 30)]
    e9 = e4.scale_by(Fraction(1, 240))
    assert e9.coefficient(0) == Fraction(1, 240)
    assert e9.coefficient(5) == sigma(3, 5)


def test_twisted_divisor_sums():
    chi = CharacterSpec(5)
    e51 = twisted_eisenstein(1, chi, "divisor", 40)
    assert coeffs(e51, 4)[1:] == [1, 1, 2]
    oracle = [sum(kronecker_oracle(5, d) * (n // d) for d in divisors(n)) for n in range(1, 40)]
    assert [e51.coefficient(n) for n in range(1, 40)] == oracle
    # Lambert form: sum_j (j/5) q^j / (1 - q^j)^2
    lam = PuiseuxSeries.zero(40)
    for j in range(1, 40):
        c = kronecker_oracle(5, j)
        if c:
            geo = series_invert(PuiseuxSeries.from_terms({0: 1, j: -1}, prec=40))
            lam = lam + c * PuiseuxSeries.monomial(j) * geo * geo
    assert lam.truncate(40) == e51
    trivial = twisted_eisenstein(1, CharacterSpec(1), "divisor", 40)
    assert [trivial.coefficient(n) for n in range(1, 40)] == [sigma(1, n) for n in range(1, 40)]
    assert trivial.coefficient(0) == 0


def test_kronecker_examples():
    assert kronecker(2, 5) == -1
    assert [kronecker(j, 7) for j in range(1, 7)] == [1, 1, -1, 1, -1, -1]
    assert all(kronecker(d, 1) == 1 for d in range(-30, 30))


@given(st.sampled_from([5, -7, 12, -20, -3, 8, -4, 13, -23]), st.integers(-200, 200))
def test_kronecker_matches_oracle(d, n):
    assert kronecker(d, n) == kronecker_oracle(d, n) == CharacterSpec(d)(n)


# -- partitions --------------------------------------------------------------------------

def test_partition_values():
    assert partition(4) == 5 and partition(0) == 1 and partition(9) == 30
    assert partition(-1) == 0 and partition(Fraction(1, 2)) == 0


def test_partition_recurrence_matches_inverse():
    inv = series_invert(pochhammer(1, 1, 301))
    assert [partition(n) for n in range(301)] == inv.integer_coefficients(301) == partition_dp(300)


def test_partition_progression():
    s = partition_progression(5, 1, 30)
    assert coeffs(s, 4) == [0, 5, 30, 135]
    rama = 5 * PuiseuxSeries.monomial(1) * series_pow(pochhammer(5, 5, 30), 5) * series_pow(pochhammer(1, 1, 30), -6)
    assert s == rama.truncate(30)
    assert partition_progression(1, 1, 30) == (PuiseuxSeries.monomial(1) * series_invert(pochhammer(1, 1, 30))).truncate(30)


# -- f, g, h ------------------------------------------------------------------------------

def test_fgh_examples():
    f5 = fgh_ell("f", 5, 40)
    assert f5.coefficient(1) == 25
    assert f5 == fgh_ell("g", 5, 40)
    assert fgh_ell("h", 17, 10).coefficient(1) == 170 == 17 * (17 - partition_dp(5)[5])


@pytest.mark.parametrize("ell", [5, 7, 11, 13, 17, 19, 23])
def test_g_minus_one_divisible(ell):
    g = fgh_ell("g", ell, 60) - 1
    assert all(c.denominator == 1 and c % ell == 0 for _, c in g.terms())


def test_fgh_preconditions():
    for bad in [("f", 4), ("g", 9), ("h", 13), ("f", 3)]:
        with pytest.raises(InvalidInput):
            fgh_ell(bad[0], bad[1], 10)


def test_nu_values():
    assert [nu(ell) for ell in (17, 19, 23)] == [170, 266, 506]
