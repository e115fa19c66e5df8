import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from vnmoments.errors import DomainError
from vnmoments.montecarlo import (
    Estimate,
    chunk_rng,
    draw_batch,
    draw_sample,
    estimate_moments,
    hermitian_eigenvalues,
    hermitian_eigenvalues_batch,
    invariant_violations,
    sample_ginibre,
    simulate,
)
from vnmoments.dims import Dims


def test_eigen_examples():
    assert np.allclose(hermitian_eigenvalues(np.diag([3.0, 1.0])), [3.0, 1.0], atol=0)
    ev = hermitian_eigenvalues([[2, 1 + 1j], [1 - 1j, 2]])
    assert ev == pytest.approx([2 + math.sqrt(2), 2 - math.sqrt(2)], abs=1e-14)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 12), st.integers(0, 2**32 - 1))
def test_eigen_reconstruction(m, seed):
    rng = np.random.default_rng(seed)
    G = rng.normal(size=(m, m)) + 1j * rng.normal(size=(m, m))
    Q, _ = np.linalg.qr(G)
    lam = np.sort(rng.uniform(-5, 5, m))[::-1]
    H = (Q * lam) @ Q.conj().T
    H = 0.5 * (H + H.conj().T)
    ev = hermitian_eigenvalues(H)
    assert np.max(np.abs(ev - lam)) < 1e-9
    assert abs(ev.sum() - np.trace(H).real) < 1e-10
    assert np.all(np.diff(ev) <= 0)


def test_eigen_against_reference_batch():
    rng = np.random.default_rng(3)
    A = rng.normal(size=(200, 6, 6)) + 1j * rng.normal(size=(200, 6, 6))
    H = A + np.conj(np.swapaxes(A, 1, 2))
    ref = np.linalg.eigvalsh(H)[:, ::-1]
    assert np.max(np.abs(hermitian_eigenvalues_batch(H) - ref)) < 1e-12


def test_eigen_degenerate_and_large():
    assert hermitian_eigenvalues(np.eye(4) * 2.5) == pytest.approx([2.5] * 4)
    rng = np.random.default_rng(5)
    A = rng.normal(size=(32, 32)) + 1j * rng.normal(size=(32, 32))
    H = A + A.conj().T
    assert np.max(np.abs(hermitian_eigenvalues(H) - np.linalg.eigvalsh(H)[::-1])) < 1e-11


def test_eigen_rejects_bad_input():
    with pytest.raises(DomainError):
        hermitian_eigenvalues([[1, 1], [0, 1]])
    with pytest.raises(DomainError):
        hermitian_eigenvalues(np.eye(33))


def test_ginibre_variance_convention():
    Y = sample_ginibre((3, 4), chunk_rng(11, 0), size=100_000 // 12)
    a = np.abs(Y.ravel()) ** 2
    se = a.std(ddof=1) / math.sqrt(a.size)
    assert abs(a.mean() - 1) < 3 * se
    assert abs(np.mean(Y.real ** 2) - 0.5) < 0.01 and abs(np.mean(Y.real * Y.imag)) < 0.01


def test_ginibre_one_by_one_is_exponential():
    a = np.abs(sample_ginibre((1, 1), chunk_rng(12, 0), size=200_000)[:, 0, 0]) ** 2
    # P(|Y|^2 > t) = e^{-t}
    for t in (0.5, 1.0, 2.0, 4.0):
        p = math.exp(-t)
        assert abs(np.mean(a > t) - p) < 4 * math.sqrt(p * (1 - p) / a.size)


def test_ginibre_deterministic():
    a = sample_ginibre((2, 3), chunk_rng(5, 2))
    b = sample_ginibre((2, 3), chunk_rng(5, 2))
    assert np.array_equal(a, b)
    assert not np.array_equal(a, sample_ginibre((2, 3), chunk_rng(5, 3)))


def test_single_subsystem_sample():
    s = draw_sample((1, 4), chunk_rng(1, 0))
    assert s.S == 0.0
    assert s.T == pytest.approx(s.r * math.log(s.r), rel=1e-15)
    assert s.lam.tolist() == [1.0]


@pytest.mark.parametrize("m,n", [(1, 1), (2, 2), (3, 7), (5, 5)])
def test_sample_invariants(m, n):
    b = draw_batch((m, n), chunk_rng(9, 0), 5000)
    inv = invariant_violations(Dims(m, n), b)
    assert inv["entropy_identity"] < 1e-10
    assert inv["lambda_sum"] < 1e-12
    assert inv["S_below_zero"] == 0 and inv["S_above_log_m"] <= 1e-12
    assert inv["nonpositive_r"] == 0 and inv["unsorted"] == 0


def test_thread_count_does_not_change_samples():
    one = simulate((2, 3), 5000, 77, threads=1, chunk_size=1024)
    four = simulate((2, 3), 5000, 77, threads=4, chunk_size=1024)
    for a, b in zip(one[:3], four[:3]):
        assert np.array_equal(a, b)


def test_estimate_small_run():
    rep = estimate_moments((2, 3), 20_000, 4)
    assert rep.N == 20_000
    assert set(rep.estimates) == {"mean_S", "var_S", "E_T", "E_T2", "mean_r", "var_r"}
    assert all(e.se > 0 for e in rep.estimates.values())
    assert rep.estimates["mean_r"].prediction == 6.0
    assert all(abs(e.z) < 5 for e in rep.estimates.values())
    assert rep.to_dict()["corr_bound"] == pytest.approx(3 / math.sqrt(20_000))


def test_estimate_m1_zero_variance():
    rep = estimate_moments((1, 5), 2000, 1)
    v = rep.estimates["var_S"]
    assert v.value == 0 and v.prediction == 0 and v.z == 0
    assert rep.corr_r_S == 0.0


def test_estimate_guards():
    with pytest.raises(DomainError):
        estimate_moments((2, 2), 999, 0)
    with pytest.raises(DomainError):
        estimate_moments((2, 2), 1000, 0, threads=0)


def test_z_score():
    assert Estimate(1.0, 0.5, 0.0).z == 2.0
    assert Estimate(1.0, 0.0, 0.0).z == math.inf
    assert Estimate(1.0, 0.1).z is None
