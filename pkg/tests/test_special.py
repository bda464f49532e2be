import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from toronto_ilhi.errors import DomainError
from toronto_ilhi.quadrature import QuadSpec, integrate
from toronto_ilhi.special import (
    bessel_i_half_odd,
    bessel_i_series,
    half_odd_index,
    is_half_odd,
    lower_incomplete_gamma,
    marcum_q,
    pochhammer,
    regularized_gamma_p,
    regularized_gamma_q,
    scaled_lower_gamma,
    upper_incomplete_gamma,
)


def erf_taylor(x):
    # erf(x) = 2/sqrt(pi) sum (-1)^k x^(2k+1) / (k! (2k+1))
    total, term, k = 0.0, x, 0
    while True:
        add = term / (2 * k + 1)
        total += add
        if abs(add) < 1e-18 * abs(total):
            return 2.0 / math.sqrt(math.pi) * total
        k += 1
        term *= -x * x / k


def bessel_power_series(n, x):
    return math.fsum((x / 2) ** (2 * k + n) / (math.factorial(k) * math.gamma(n + k + 1))
                     for k in range(80))


# -- pochhammer --

@pytest.mark.parametrize("a,k,want", [(3.7, 0, 1.0), (1, 5, 120.0), (2.5, 3, 39.375)])
def test_pochhammer_examples(a, k, want):
    assert pochhammer(a, k) == pytest.approx(want, rel=1e-15)


def test_pochhammer_rejects_fractional_k():
    with pytest.raises(DomainError):
        pochhammer(1.0, 1.5)


def test_half_odd_lattice():
    assert is_half_odd(0.5) and is_half_odd(3.5)
    assert not is_half_odd(0.4) and not is_half_odd(1.0) and not is_half_odd(-0.5)
    assert half_odd_index(2.5) == 2
    with pytest.raises(DomainError, match="n \\+ 1/2"):
        half_odd_index(0.4)


# -- incomplete gamma --

def test_gamma_examples():
    assert lower_incomplete_gamma(1, 1) == pytest.approx(1 - math.exp(-1), rel=1e-15)
    want = math.sqrt(math.pi) * erf_taylor(1.0)
    assert abs(lower_incomplete_gamma(0.5, 1) - want) <= 1e-13 * want
    assert lower_incomplete_gamma(0.5, 1) == pytest.approx(1.493648265, abs=1e-9)
    assert lower_incomplete_gamma(2.5, 0) == 0.0


def test_gamma_one_is_exponential():
    for i in range(201):
        x = 10.0 * i / 200
        assert abs(lower_incomplete_gamma(1.0, x) - (1.0 - math.exp(-x))) <= 1e-14


@pytest.mark.parametrize("s", [0.5, 1.0, 2.5, 7.0, 10.0])
def test_gamma_saturates(s):
    ratio = lower_incomplete_gamma(s, 50.0) / math.gamma(s)
    assert 1 - 1e-10 <= ratio <= 1 + 1e-15


def test_gamma_rejects_bad_args():
    with pytest.raises(DomainError):
        lower_incomplete_gamma(0.0, 1.0)
    with pytest.raises(DomainError):
        lower_incomplete_gamma(1.0, -1.0)


@settings(max_examples=200, deadline=None)
@given(st.floats(0.05, 30.0), st.floats(0.0, 60.0))
def test_gamma_complement(s, x):
    lo, up = lower_incomplete_gamma(s, x), upper_incomplete_gamma(s, x)
    assert lo + up == pytest.approx(math.gamma(s), rel=1e-12)
    assert regularized_gamma_p(s, x) + regularized_gamma_q(s, x) == pytest.approx(1.0, abs=1e-13)


@settings(max_examples=200, deadline=None)
@given(st.floats(0.05, 30.0), st.floats(0.0, 60.0), st.floats(0.0, 5.0))
def test_gamma_monotone_in_x(s, x, dx):
    assert lower_incomplete_gamma(s, x + dx) >= lower_incomplete_gamma(s, x) * (1 - 1e-14)


def test_gamma_against_scipy():
    special = pytest.importorskip("scipy.special")
    for s in (0.3, 1.0, 2.5, 6.0, 15.5):
        for x in (0.01, 0.5, 3.0, 9.0, 40.0):
            want = special.gammainc(s, x) * math.gamma(s)
            assert lower_incomplete_gamma(s, x) == pytest.approx(want, rel=1e-13)


def test_scaled_gamma_continuous_at_zero():
    for s in (1.5, 3.5):
        limit = scaled_lower_gamma(s, 0.0, 2.0)
        assert limit == pytest.approx(2.0 ** s / s, rel=1e-15)
        assert scaled_lower_gamma(s, 1e-9, 2.0) == pytest.approx(limit, rel=1e-8)


# -- Bessel --

def test_bessel_examples():
    assert bessel_i_half_odd(0.5, 1.0) == pytest.approx(math.sqrt(2 / math.pi) * math.sinh(1.0), rel=1e-15)
    assert bessel_i_half_odd(0.5, 1.0) == pytest.approx(0.937674888, abs=1e-9)
    assert bessel_i_half_odd(1.5, 2.0) == pytest.approx(bessel_power_series(1.5, 2.0), rel=1e-14)
    assert bessel_i_half_odd(0.5, 1e-300) < 1e-140
    assert bessel_i_series(0, 0) == 1.0
    assert bessel_i_series(2, 0) == 0.0
    assert bessel_i_series(0.5, 1.0) == pytest.approx(bessel_i_half_odd(0.5, 1.0), rel=1e-14)


def test_half_odd_matches_series_on_grid():
    worst = 0.0
    for N in range(8):
        for x in (1e-3, 0.01, 0.1, 0.5, 1, 2, 5, 10, 20, 30, 50):
            a, b = bessel_i_half_odd(N + 0.5, x), bessel_i_series(N + 0.5, x)
            worst = max(worst, abs(a - b) / b)
    assert worst <= 1e-12


def test_bessel_against_scipy():
    special = pytest.importorskip("scipy.special")
    for n in (0.0, 0.4, 1.3, 2.5):
        for x in (0.2, 3.0, 17.0, 40.0):
            assert bessel_i_series(n, x) == pytest.approx(special.iv(n, x), rel=1e-12)


def test_bessel_series_domain():
    with pytest.raises(DomainError):
        bessel_i_series(0.5, 100.0)
    with pytest.raises(DomainError):
        bessel_i_half_odd(0.4, 1.0)


@settings(max_examples=100, deadline=None)
@given(st.floats(0.0, 5.0), st.floats(0.01, 40.0))
def test_bessel_recurrence(n, x):
    # I_n - I_{n+2} = 2(n+1)/x * I_{n+1}
    lhs = bessel_i_series(n, x) - bessel_i_series(n + 2, x)
    rhs = 2 * (n + 1) / x * bessel_i_series(n + 1, x)
    assert lhs == pytest.approx(rhs, rel=1e-11)


# -- Marcum Q --

def marcum_by_quadrature(nu, a, b):
    # Q_nu(a, b) = 1 - integral_0^b x (x/a)^(nu-1) e^(-(x^2+a^2)/2) I_{nu-1}(a x) dx
    def f(x):
        return x * (x / a) ** (nu - 1) * math.exp(-(x * x + a * a) / 2) * bessel_i_series(nu - 1, a * x)
    return 1.0 - integrate(f, 0.0, b, QuadSpec(1e-14, 1e-13)).value


def test_marcum_examples():
    assert marcum_q(1, 0, 0) == 1.0
    assert marcum_q(1, 0, 2) == pytest.approx(math.exp(-2), rel=1e-14)
    assert marcum_q(1.5, 1, 1) == pytest.approx(marcum_by_quadrature(1.5, 1.0, 1.0), rel=1e-11)


@pytest.mark.parametrize("nu,a,b", [(1, 1, 2), (2.5, 2, 1), (1.5, 3, 4), (3, 0.5, 0.7)])
def test_marcum_against_quadrature(nu, a, b):
    assert marcum_q(nu, a, b) == pytest.approx(marcum_by_quadrature(nu, a, b), rel=1e-10, abs=1e-14)


@settings(max_examples=100, deadline=None)
@given(st.floats(0.5, 5), st.floats(0, 5), st.floats(0, 8), st.floats(0.01, 1))
def test_marcum_decreasing_in_b(nu, a, b, db):
    assert marcum_q(nu, a, b + db) <= marcum_q(nu, a, b) + 1e-15
