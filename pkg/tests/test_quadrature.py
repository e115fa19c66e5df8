import math

import numpy as np
import pytest

from vnmoments.errors import ConvergenceError
from vnmoments.quadrature import integrate, integrate_doubling, panel_nodes


def test_polynomial_exact():
    res = integrate(lambda x: x**5 - 3 * x, 0.0, 2.0)
    assert res.converged and res.value == pytest.approx(64 / 6 - 6, rel=1e-14)


def test_exponential():
    res = integrate(np.exp, 0.0, 1.0)
    assert res.value == pytest.approx(math.e - 1, rel=1e-14)


def test_grading_handles_log_singularity():
    res = integrate(lambda x: x * np.log(x), 0.0, 1.0, grade=40)
    assert res.value == pytest.approx(-0.25, rel=1e-13)


def test_graded_nodes_cover_interval():
    x, w = panel_nodes(0.0, 3.0, 4, order=5, grade=10)
    assert w.sum() == pytest.approx(3.0, rel=1e-14)
    assert x.min() > 0 and x.max() < 3.0


def test_non_convergence():
    with pytest.raises(ConvergenceError) as info:
        integrate(lambda x: np.sin(1 / x), 1e-9, 1.0, max_panels=64)
    assert info.value.error > 0
    res = integrate_doubling(
        lambda x, w: np.sum(w * np.sin(1 / x)), 1e-9, 1.0, max_panels=64, strict=False
    )
    assert not res.converged
