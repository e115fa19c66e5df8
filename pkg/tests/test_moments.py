from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from vnmoments.dims import Dims, as_dims
from vnmoments.errors import DomainError
from vnmoments.exactnum import GAMMA, PI2, ZERO, to_float
from vnmoments.laguerre import oracle_IA, oracle_IB
from vnmoments.moments import (
    IA_closed,
    IA_consolidated,
    IA_from_regularized,
    IB_closed,
    IB_consolidated,
    a1,
    a2,
    a3,
    assemble_E_T2,
    b4,
    b5,
    b6,
    ib_double_sum,
    ib_double_sum_split,
    induced_T2_target,
    induced_T_mean,
    moment_report,
    page_mean,
    second_moment_S,
    table_row,
    table_rows_for,
    variance_S_via_relation,
    vpo_variance,
)
from vnmoments.polygamma import psi0_int, psi1_int

dims = st.integers(1, 14).flatmap(lambda n: st.tuples(st.integers(1, n), st.just(n)))


def test_dims_validation():
    assert Dims(2, 3).mn == 6 and Dims(2, 3).alpha == 1
    assert as_dims((2, 3)) == as_dims(2, 3) == Dims(2, 3)
    for bad in [(0, 1), (3, 2), (1.0, 2), (True, 2)]:
        with pytest.raises(DomainError):
            Dims(*bad)


def test_page_mean_examples():
    for n in range(1, 10):
        assert page_mean((1, n)) == ZERO
    assert page_mean((2, 2)) == F(1, 3)
    assert page_mean((2, 3)) == F(9, 20)


def test_vpo_variance_examples():
    for n in range(1, 10):
        assert vpo_variance((1, n)) == ZERO
    assert vpo_variance((2, 2)) == F(13, 36) - PI2 / 30
    assert to_float(vpo_variance((2, 2))) == pytest.approx(0.0321242977, abs=1e-10)
    # exact hand expansion: -psi1(7) + (5/7) psi1(3) - 27/252
    assert vpo_variance((2, 3)) == F(1769, 3600) - PI2 / 21
    assert vpo_variance((2, 3)) == -psi1_int(7) + F(5, 7) * psi1_int(3) - F(27, 252)


def test_induced_mean_examples():
    assert induced_T_mean((1, 1)) == 1 - GAMMA
    assert induced_T_mean((2, 2)) == 7 - 4 * GAMMA
    assert induced_T_mean((2, 3)) == 12 - 6 * GAMMA


def test_induced_second_moment_examples():
    assert induced_T2_target((1, 1)) == PI2 / 3 + 2 * GAMMA**2 - 6 * GAMMA + 2
    assert assemble_E_T2((1, 1)) == PI2 / 3 + 2 * GAMMA**2 - 6 * GAMMA + 2


def test_IA_closed_examples():
    assert IA_closed((1, 1)) == PI2 / 3 + 2 * GAMMA**2 - 6 * GAMMA + 2
    assert IA_closed((2, 2)) == table_row("m=2", 2, "I_A") == table_row("m=n", 2, "I_A")
    assert IA_closed((3, 5)) == oracle_IA((3, 5))


@pytest.mark.parametrize("n", range(1, 10))
def test_m1_rows(n):
    p0, p1 = psi0_int(n), psi1_int(n)
    ia = n * (n + 1) * p1 + n * (n + 1) * p0**2 + (4 * n + 2) * p0 + 2
    assert IA_closed((1, n)) == ia
    assert IB_closed((1, n)) == (n * p0 + 1) ** 2


@pytest.mark.parametrize("n", range(2, 10))
def test_m2_second_moment_row(n):
    p0, p1 = psi0_int(n), psi1_int(n)
    want = 2 * (n * (n + 2) * p1 + n * (2 * n + 1) * p0**2 + (8 * n + 3) * p0 + 6)
    assert assemble_E_T2((2, n)) == want


@pytest.mark.parametrize("n", range(1, 10))
def test_square_second_moment_row(n):
    p0, p1 = psi0_int(n), psi1_int(n)
    want = (
        8 * n**3 * p1
        + 4 * n**2 * (n**2 + 1) * p0**2
        + 4 * n * (n**3 + n**2 + 3 * n + 1) * p0
        + n * (n + 1) * (n**2 + n + 2)
    ) * F(1, 4)
    assert assemble_E_T2((n, n)) == want


def test_table_rows_for():
    assert table_rows_for((1, 1)) == ["m=1", "m=n"]
    assert table_rows_for((2, 5)) == ["m=2"]
    assert table_rows_for((4, 6)) == []
    with pytest.raises(DomainError):
        table_row("m=3", 4, "I_A")


def test_variance_relation_examples():
    for n in range(1, 8):
        assert variance_S_via_relation((1, n)) == ZERO
    assert variance_S_via_relation((2, 2)) == F(13, 36) - PI2 / 30
    assert variance_S_via_relation((3, 4)) == vpo_variance((3, 4))


@given(dims)
def test_second_moment_consistent(d):
    assert second_moment_S(d) - page_mean(d) ** 2 == variance_S_via_relation(d)


@given(dims)
def test_variance_nonnegative(d):
    assert to_float(vpo_variance(d)) >= -1e-15


def test_regularized_route_for_IA():
    for n in range(1, 8):
        for m in range(1, n + 1):
            assert IA_from_regularized((m, n)) == IA_closed((m, n))


def test_consolidated_examples():
    assert IA_consolidated((3, 5)) == IA_closed((3, 5))
    assert IB_consolidated((4, 7)) == IB_closed((4, 7))
    with pytest.raises(DomainError):
        IA_consolidated((2, 5))
    with pytest.raises(DomainError):
        IB_consolidated((4, 4))


def test_coefficient_differences():
    for n in range(4, 16):
        for m in range(3, n):
            assert a2(m, n) == b5(m, n)
            assert a1(m, n) - b4(m, n) == m * (n - m) * (n - m + 1) * (2 * n + m + 1)
            assert a3(m, n) - b6(m, n) == F(m * (m + 1) * (n - m) * (n - m + 1), 2)


def test_double_sum_split():
    for n in range(4, 13):
        for m in range(3, n):
            assert ib_double_sum_split((m, n)) == ib_double_sum((m, n))


def test_IB_against_oracle_small():
    for n in range(1, 6):
        for m in range(1, n + 1):
            assert IB_closed((m, n)) == oracle_IB((m, n))


def test_moment_report():
    r = moment_report((2, 2), "var_S")
    assert r.exact == F(13, 36) - PI2 / 30
    d = r.to_dict()
    assert d["exact"] == "13/36 - 1/30*pi^2" and d["ensemble"] == "fixed-trace"
    with pytest.raises(DomainError):
        moment_report((2, 2), "nope")
