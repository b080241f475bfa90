from __future__ import annotations

import math

import numpy as np
import pytest
import scipy.special as sc
from hypothesis import given, settings
from hypothesis import strategies as st

from anyonchain.special import EULER_GAMMA, digamma, trigamma


def test_digamma_integers_are_harmonic():
    for n in range(1, 40):
        harmonic = sum(1 / k for k in range(1, n))
        assert digamma(n) == pytest.approx(harmonic - EULER_GAMMA, abs=1e-14)


def test_trigamma_integers():
    for n in range(1, 30):
        tail = math.pi**2 / 6 - sum(1 / k**2 for k in range(1, n))
        assert trigamma(n) == pytest.approx(tail, abs=1e-14)


@settings(max_examples=200, deadline=None)
@given(st.floats(min_value=1e-3, max_value=1e6))
def test_against_scipy(x):
    assert abs(digamma(x) - sc.digamma(x)) < 2e-14 * max(1.0, abs(sc.digamma(x)))
    assert abs(trigamma(x) - sc.polygamma(1, x)) < 1e-14 * max(1.0, sc.polygamma(1, x))


@given(st.floats(min_value=0.01, max_value=100))
def test_recurrences(x):
    assert digamma(x + 1) - digamma(x) == pytest.approx(1 / x, rel=1e-12, abs=1e-12)
    assert trigamma(x) - trigamma(x + 1) == pytest.approx(1 / x**2, rel=1e-12)


def test_gauss_values():
    assert digamma(0.5) == pytest.approx(-EULER_GAMMA - 2 * math.log(2), abs=1e-14)
    assert trigamma(0.5) == pytest.approx(math.pi**2 / 2, abs=1e-13)


@pytest.mark.parametrize("x", [0.0, -1.0, -2.5])
def test_domain(x):
    with pytest.raises(ValueError):
        digamma(x)
    with pytest.raises(ValueError):
        trigamma(x)


def test_vector_free_scalar_output():
    assert isinstance(digamma(np.float64(3.0)), float)
