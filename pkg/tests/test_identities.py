from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from vnmoments.errors import DomainError
from vnmoments.exactnum import GAMMA
from vnmoments.identities import (
    ALL_IDS,
    check,
    check_chu,
    check_factorial_sum,
    check_hyp4F3,
    check_milgram,
    check_psi_sum,
    check_recurrences,
    hypergeometric_terminating,
    rhs_term_count,
    s_sum,
    sweep,
    sweep_params,
    t_sum,
)
from vnmoments.polygamma import psi0_int, psi1_int


def test_A1_examples():
    r = check_psi_sum("A1", 1, 1)
    assert r.lhs == 1 - GAMMA and r.equal
    r = check_psi_sum("A1", 2, 3)
    assert r.lhs == r.rhs == F(47, 12) - 2 * GAMMA


def test_A7_example():
    r = check_psi_sum("A7", 3, 2)
    assert r.lhs == psi1_int(3) + psi1_int(4) + psi1_int(5)
    assert r.rhs == 5 * psi1_int(5) - 2 * psi1_int(2) + psi0_int(5) - psi0_int(2)
    assert r.equal


def test_factorial_examples():
    r = check_factorial_sum("A10", 2, 3)
    assert r.lhs == 3 and r.equal
    r = check_factorial_sum("A11", 2, 3)
    assert r.lhs == F(5, 2) and r.rhs == 3 * (psi0_int(4) - psi0_int(2))
    assert check_factorial_sum("A12", 2, 4).equal


def test_recurrence_examples():
    assert s_sum(1, 2) == 1
    wy1, wy2 = check_recurrences(2, 4)
    assert wy1.lhs == wy1.rhs == 7
    assert s_sum(2, 4) == 7
    assert t_sum(2, 4) == 6 + F(1, 2)
    assert all(r.equal for r in check_recurrences(3, 5))


def test_milgram_examples():
    r = check_milgram(1, 2)
    assert r.lhs == psi0_int(2) / 2 == (1 - GAMMA) / 2
    assert r.equal
    assert check_milgram(2, 3).equal and check_milgram(5, 9).equal


def test_hypergeometric_examples():
    for n in range(2, 8):
        assert check_hyp4F3(1, n).equal
    assert check_hyp4F3(2, 3).equal and check_hyp4F3(4, 7).equal
    assert hypergeometric_terminating([-2, 1], [1]) == 1 - 2 + 1
    assert check_chu(3, 6).equal


def test_domain_errors():
    with pytest.raises(DomainError):
        check("A12", 4, 4)
    with pytest.raises(DomainError):
        check("A1", 0, 3)
    with pytest.raises(DomainError):
        check("NOPE", 1, 2)
    with pytest.raises(DomainError):
        check_psi_sum("A10", 2, 3)


@given(st.sampled_from(ALL_IDS), st.integers(1, 30), st.integers(1, 30))
def test_identities_hold_off_grid(name, p, q):
    try:
        r = check(name, p, q)
    except DomainError:
        return
    assert r.equal, r.to_dict()


@pytest.mark.parametrize("name", ALL_IDS)
def test_mutation_is_detected(name):
    # bumping any single right-side coefficient must break the identity somewhere
    for idx in range(rhs_term_count(name)):
        results = [check(name, p, q, perturb=idx) for p, q in sweep_params(name, 8)]
        assert any(not r.equal for r in results), (name, idx)


def test_sweep_small_and_params():
    results = sweep(6)
    assert results and all(r.equal for r in results)
    assert list(sweep_params("A12", 3)) == [(1, 2), (1, 3), (2, 3)]
    assert {r.identity for r in results} == set(ALL_IDS)
