import pytest
from hypothesis import given, strategies as st

from cphi.builders import partition
from cphi.engine import cphi, cphi_values, refined_cphi_ct
from cphi.frobenius import (FrobeniusSymbol, cphi_from_overline, color_difference, enumerate_phi,
                            enumerate_symbols, mobius, overline_via_mobius, refined_counts, symbol_order)

from conftest import divisors

# the nine 2-colored symbols of weight 2, as (top row, bottom row) of (value, color)
NINE = {
    (((1, 1),), ((0, 1),)), (((1, 1),), ((0, 2),)), (((1, 2),), ((0, 1),)), (((1, 2),), ((0, 2),)),
    (((0, 1),), ((1, 1),)), (((0, 2),), ((1, 1),)), (((0, 1),), ((1, 2),)), (((0, 2),), ((1, 2),)),
    (((0, 2), (0, 1)), ((0, 2), (0, 1))),
}


def sym(k, top, bottom):
    return FrobeniusSymbol(k, tuple(top), tuple(bottom))


def test_nine_symbols():
    got = {(s.top, s.bottom) for s in enumerate_symbols(2, 2)}
    assert got == NINE
    assert sum(1 for s in enumerate_symbols(2, 2) if symbol_order(s) == 1) == 1


def test_small_counts():
    assert len(enumerate_symbols(1, 3)) == partition(3) == 3
    assert len(enumerate_symbols(3, 1)) == 9
    assert [s.render() for s in enumerate_symbols(1, 0)] == ["( | )"]


def test_phi_examples():
    assert enumerate_phi(2, 3) == 5
    assert enumerate_phi(2, 1) == 1
    assert [enumerate_phi(1, n) for n in range(15)] == [partition(n) for n in range(15)]


@pytest.mark.parametrize("k,n_max", [(1, 8), (2, 8), (3, 8), (4, 5)])
def test_enumeration_matches_engine(k, n_max):
    counts = [len(enumerate_symbols(k, n)) for n in range(n_max + 1)]
    assert counts == cphi_values(k, n_max, "ct") == cphi_values(k, n_max, "lattice")


@pytest.mark.parametrize("k,n", [(2, 6), (3, 5), (4, 4), (6, 3)])
def test_weights_rows_and_orders(k, n):
    for s in enumerate_symbols(k, n):
        assert s.weight == n
        assert k % symbol_order(s) == 0
        assert color_difference(s.swapped()) == -color_difference(s)


def test_order_examples():
    assert symbol_order(sym(2, [(0, 2), (0, 1)], [(0, 2), (0, 1)])) == 1
    assert symbol_order(sym(2, [(1, 1)], [(0, 1)])) == 2
    assert all(symbol_order(s) == 1 for s in enumerate_symbols(1, 5))


def test_color_difference_examples():
    assert color_difference(sym(2, [(1, 1)], [(0, 2)])) == -1
    assert color_difference(sym(3, [], [])) == 0


def test_refined_counts_example():
    rc = refined_counts(2, 2)
    assert (rc.cphi, rc.psi, rc.overline) == (9, {1: 1, 2: 8}, 8)
    assert rc.overline == 9 - cphi(1, 1)
    assert rc.residue_classes == {0: 4, 1: 4}
    assert rc.by_difference == {-1: 2, 0: 5, 1: 2}


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_psi_sums_to_total_and_reduces(k):
    for n in range(9 if k < 4 else 6):
        rc = refined_counts(k, n)
        assert sum(rc.psi.values()) == rc.cphi
        for ell, count in rc.psi.items():
            step = k // ell
            expected = refined_counts(ell, n // step).overline if n % step == 0 else 0
            assert count == expected


@pytest.mark.parametrize("k", [1, 2, 3])
def test_residue_classes_equal_and_divisible(k):
    for n in range(9):
        vals = set(refined_counts(k, n).residue_classes.values())
        assert len(vals) == 1 and next(iter(vals)) % k == 0


def test_refined_table_matches_ct():
    for k in (2, 3):
        tab = refined_cphi_ct(k, 6)
        for n in range(7):
            assert refined_counts(k, n).by_difference == tab.row(n)


def mobius_oracle(n):
    f, p, out = n, 2, 1
    while p * p <= f:
        if f % p == 0:
            f //= p
            if f % p == 0:
                return 0
            out = -out
        p += 1
    return -out if f > 1 else out


def test_mobius():
    assert (mobius(1), mobius(6), mobius(12)) == (1, 1, 0)
    assert [mobius(n) for n in range(1, 200)] == [mobius_oracle(n) for n in range(1, 200)]


def provider(k, n):
    return cphi(k, n, prec=61)


def test_overline_examples():
    assert overline_via_mobius(2, 2, provider) == 8
    v = overline_via_mobius(5, 1, provider)
    assert v == 25 and v % 25 == 0


@given(st.integers(1, 6), st.integers(0, 60))
def test_mobius_round_trip(k, n):
    def over(ell, m):
        return overline_via_mobius(ell, m, provider)
    assert cphi_from_overline(k, n, over) == provider(k, n)
    assert sum(over(ell, n // (k // ell)) for ell in divisors(k) if n % (k // ell) == 0) == provider(k, n)


@pytest.mark.parametrize("k", [2, 3, 4])
def test_overline_matches_enumeration(k):
    for n in range(6):
        assert refined_counts(k, n).overline == overline_via_mobius(k, n, provider)
