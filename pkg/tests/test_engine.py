import itertools
import math

import pytest
from hypothesis import given, settings, strategies as st

from cphi.builders import partition, pochhammer, theta
from cphi.engine import (LatticeForm, binary_qf_theta, cphi, cphi_series, cphi_values, dual_theta,
                         frobenius_theta, refined_cphi_ct, refined_from_engine)
from cphi.frobenius import color_difference, enumerate_symbols
from cphi.series import InvalidInput, OutOfPrecision, PuiseuxSeries

from conftest import partition_dp


def brute_theta(k, N):
    """Direct box enumeration of Q over Z^{k-1}, no pruning tricks."""
    out = [0] * N
    r = math.isqrt(2 * N) + 1
    for m in itertools.product(range(-r, r + 1), repeat=k - 1):
        v = (sum(x * x for x in m) + sum(m) ** 2) // 2
        if v < N:
            out[v] += 1
    return out


@pytest.mark.parametrize("k,N", [(2, 30), (3, 30), (4, 16), (5, 10)])
def test_theta_against_box_enumeration(k, N):
    assert frobenius_theta(k, N).integer_coefficients(N) == brute_theta(k, N)


@settings(max_examples=40)
@given(st.integers(2, 8), st.integers(1, 40))
def test_ct_and_lattice_agree(k, N):
    assert frobenius_theta(k, N, "ct") == frobenius_theta(k, N, "lattice")


@given(st.integers(2, 12))
def test_theta_shape(k):
    a = frobenius_theta(k, 12)
    assert a.coefficient(0) == 1 and a.coefficient(1) == k * (k - 1)
    assert all(c >= 0 and c.denominator == 1 for _, c in a.terms())


def test_theta_examples():
    assert frobenius_theta(2, 50) == theta(3, 1, 50)
    assert [frobenius_theta(3, 5).coefficient(i) for i in range(5)] == [1, 6, 0, 6, 6]
    a5 = frobenius_theta(5, 5)
    assert (a5.coefficient(1), a5.coefficient(2)) == (20, 5 * 4 * 3 * 2 // 4)
    with pytest.raises(InvalidInput):
        frobenius_theta(1, 10)


def test_lattice_form_values():
    assert LatticeForm(3).value((1, 1)) == 3
    assert LatticeForm(3).value((1, -1)) == 1
    assert LatticeForm(5, "dual").value((1, 0, 0, 0)) == 2


def test_dual_theta_examples():
    b5 = dual_theta(5, 6)
    assert [b5.coefficient(i) for i in range(4)] == [1, 0, 10, 20]
    b7 = dual_theta(7, 8)
    assert b7.coefficient(3) == 14 and b7.coefficient(5) == 42
    with pytest.raises(InvalidInput):
        dual_theta(9, 10)


@pytest.mark.parametrize("ell", [5, 7, 11, 13])
def test_dual_theta_leading_structure(ell):
    b = dual_theta(ell, ell)
    h = (ell - 1) // 2
    assert all(b.coefficient(j) == 0 for j in range(1, h))
    assert b.coefficient(h) == 2 * ell
    assert b.coefficient(ell - 2) == ell * (ell - 1) + (2 * ell if ell - 2 == h else 0)


def test_cphi_examples():
    assert cphi(2, 2) == 9
    assert [cphi(1, n) for n in range(30)] == partition_dp(29)
    assert cphi(5, 1) == 25 == 5 * partition(4)
    with pytest.raises(OutOfPrecision):
        cphi(3, 10, prec=5)


def test_binary_forms():
    assert binary_qf_theta(1, 1, 1, 60) == frobenius_theta(3, 60)
    rhs = theta(3, 1, 60) * theta(3, 3, 60) + theta(2, 1, 60) * theta(2, 3, 60)
    assert binary_qf_theta(1, 1, 1, 60).coefficient(1) == rhs.coefficient(1) == 6
    t = theta(3, 1, 60)
    assert binary_qf_theta(1, 0, 1, 60) == t * t
    with pytest.raises(InvalidInput):
        binary_qf_theta(1, 3, 1, 10)


def test_refined_examples():
    tab = refined_cphi_ct(2, 4)
    assert tab.row(2) == {-1: 2, 0: 5, 1: 2}
    assert tab.total(2) == 9
    one = refined_cphi_ct(1, 8)
    for n in range(9):
        assert one.row(n) == {0: partition(n)}


@pytest.mark.parametrize("k", [1, 2, 3])
def test_refined_collapses_to_cphi(k):
    tot = refined_from_engine(k, 6)
    assert [tot[n] for n in range(7)] == cphi_values(k, 6)


@pytest.mark.parametrize("k", [2, 3])
def test_refined_symmetric_and_matches_enumeration(k):
    tab = refined_cphi_ct(k, 5)
    for n in range(6):
        row = tab.row(n)
        assert all(row[m] == row.get(-m) for m in row)
        hist = {}
        for s in enumerate_symbols(k, n):
            m = color_difference(s)
            hist[m] = hist.get(m, 0) + 1
        assert row == dict(sorted(hist.items()))
