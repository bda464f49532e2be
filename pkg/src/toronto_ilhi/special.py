"""Foundation special functions.

Lower/upper incomplete gamma, the Pochhammer symbol, the modified Bessel
function of the first kind (power series for any order, finite exponential
sum for half-odd orders) and the generalized Marcum Q-function.

All functions are pure.  They take and return Python floats, except the
``*_mp`` variants, which work at the current mpmath precision.
"""
import math
import sys

import mpmath

from .errors import ConvergenceError, DomainError

EPS = sys.float_info.epsilon
TINY = sys.float_info.min / EPS

GAMMA_RTOL = 1e-16
GAMMA_MAX_ITER = 2000

BESSEL_SERIES_TOL = 1e-17
BESSEL_SERIES_MAX_TERMS = 500
# Positive-term series; accurate well past this, but this is the supported range.
BESSEL_SERIES_MAX_X = 64.0

MARCUM_MAX_TERMS = 5000


def pochhammer(a, k):
    """Rising factorial ``a (a+1) ... (a+k-1)``; 1 for ``k == 0``."""
    if k < 0 or int(k) != k:
        raise DomainError(f"pochhammer requires a non-negative integer k (got {k})")
    out = 1.0
    for j in range(int(k)):
        out *= a + j
    return out


def is_half_odd(n, tol=1e-12):
    """True when ``n + 1/2`` is a natural number (n = 0.5, 1.5, ...)."""
    if n < 0.5 - tol:
        return False
    return abs((n - 0.5) - round(n - 0.5)) <= tol


def half_odd_index(n):
    """Return ``N = n - 1/2`` as an int, raising if n is not half-odd."""
    if not is_half_odd(n):
        raise DomainError(f"closed form requires n + 1/2 ∈ ℕ (got n={n!r})")
    return int(round(n - 0.5))


# -- incomplete gamma -------------------------------------------------------

def _check_gamma_args(s, x):
    if not s > 0:
        raise DomainError(f"incomplete gamma requires s > 0 (got s={s!r})")
    if not x >= 0:
        raise DomainError(f"incomplete gamma requires x >= 0 (got x={x!r})")


def _gamma_series_sum(s, x, rtol=GAMMA_RTOL):
    """``sum_j x^j / (s)_{j+1}``, so that gamma(s, x) = x^s e^-x * sum."""
    term = 1.0 / s
    total = term
    ap = s
    for _ in range(GAMMA_MAX_ITER):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * rtol:
            return total
    raise ConvergenceError(f"incomplete gamma series did not converge (s={s}, x={x})",
                           partial_sum=total, terms=GAMMA_MAX_ITER)


def _gamma_cf(s, x, rtol=GAMMA_RTOL):
    """Continued fraction (modified Lentz) with Gamma(s, x) = x^s e^-x * cf."""
    b = x + 1.0 - s
    c = 1.0 / TINY
    d = 1.0 / b
    h = d
    for i in range(1, GAMMA_MAX_ITER + 1):
        an = -i * (i - s)
        b += 2.0
        d = an * d + b
        if abs(d) < TINY:
            d = TINY
        c = b + an / c
        if abs(c) < TINY:
            c = TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < rtol:
            return h
    raise ConvergenceError(f"incomplete gamma continued fraction did not converge (s={s}, x={x})",
                           partial_sum=h, terms=GAMMA_MAX_ITER)


def _log_prefactor(s, x):
    return s * math.log(x) - x


def lower_incomplete_gamma(s, x):
    """gamma(s, x) = integral_0^x t^(s-1) e^-t dt for s > 0, x >= 0."""
    _check_gamma_args(s, x)
    if x == 0.0:
        return 0.0
    if x < s + 1.0:
        return math.exp(_log_prefactor(s, x)) * _gamma_series_sum(s, x)
    return math.gamma(s) - math.exp(_log_prefactor(s, x)) * _gamma_cf(s, x)


def upper_incomplete_gamma(s, x):
    """Gamma(s, x) = integral_x^inf t^(s-1) e^-t dt for s > 0, x >= 0."""
    _check_gamma_args(s, x)
    if x == 0.0:
        return math.gamma(s)
    if x < s + 1.0:
        return math.gamma(s) - math.exp(_log_prefactor(s, x)) * _gamma_series_sum(s, x)
    return math.exp(_log_prefactor(s, x)) * _gamma_cf(s, x)


def regularized_gamma_p(s, x):
    """P(s, x) = gamma(s, x) / Gamma(s), computed without forming Gamma(s)."""
    _check_gamma_args(s, x)
    if x == 0.0:
        return 0.0
    if x < s + 1.0:
        return math.exp(_log_prefactor(s, x) - math.lgamma(s)) * _gamma_series_sum(s, x)
    return 1.0 - math.exp(_log_prefactor(s, x) - math.lgamma(s)) * _gamma_cf(s, x)


def regularized_gamma_q(s, x):
    """Q(s, x) = 1 - P(s, x), accurate in the upper tail."""
    _check_gamma_args(s, x)
    if x == 0.0:
        return 1.0
    if x < s + 1.0:
        return 1.0 - math.exp(_log_prefactor(s, x) - math.lgamma(s)) * _gamma_series_sum(s, x)
    return math.exp(_log_prefactor(s, x) - math.lgamma(s)) * _gamma_cf(s, x)


def lower_incomplete_gamma_mp(s, x):
    """gamma(s, x) at the current mpmath working precision."""
    _check_gamma_args(s, x)
    return mpmath.gammainc(s, 0, x)


def upper_incomplete_gamma_mp(s, x):
    """Gamma(s, x) at the current mpmath working precision."""
    _check_gamma_args(s, x)
    return mpmath.gammainc(s, x)


def scaled_lower_gamma(s, c, z):
    """``gamma(s, c z) / c^s`` = integral_0^z x^(s-1) e^(-c x) dx for c >= 0.

    Continuous through c = 0, where it equals z^s / s.
    """
    if not s > 0:
        raise DomainError(f"incomplete gamma requires s > 0 (got s={s!r})")
    if c < 0 or z < 0:
        raise DomainError(f"scaled gamma requires c >= 0 and z >= 0 (got c={c!r}, z={z!r})")
    if z == 0.0:
        return 0.0
    if c == 0.0:
        return z ** s / s
    x = c * z
    if x < s + 1.0:
        return math.exp(s * math.log(z) - x) * _gamma_series_sum(s, x)
    return lower_incomplete_gamma(s, x) / c ** s


# -- modified Bessel I ------------------------------------------------------

def bessel_i_reduced(n, x):
    """``I_n(x) / (x/2)^n`` by its power series: sum (x/2)^(2k) / (k! Gamma(n+k+1)).

    Entire in x and free of negative powers, which is what the quadrature
    integrands need near the origin.
    """
    if n < 0:
        raise DomainError(f"Bessel series requires n >= 0 (got n={n!r})")
    if x < 0:
        raise DomainError(f"Bessel series requires x >= 0 (got x={x!r})")
    q = 0.25 * x * x
    term = 1.0 / math.gamma(n + 1.0)
    total = term
    if q == 0.0:
        return total
    for k in range(1, BESSEL_SERIES_MAX_TERMS + 1):
        term *= q / (k * (n + k))
        total += term
        if term < total * BESSEL_SERIES_TOL:
            return total
    raise ConvergenceError(f"Bessel series did not converge in {BESSEL_SERIES_MAX_TERMS} terms "
                           f"(n={n}, x={x})", partial_sum=total, terms=BESSEL_SERIES_MAX_TERMS)


def bessel_i_series(n, x):
    """I_n(x) for real n >= 0 and 0 <= x <= BESSEL_SERIES_MAX_X by power series."""
    if x > BESSEL_SERIES_MAX_X:
        raise DomainError(f"Bessel series supported for x <= {BESSEL_SERIES_MAX_X} (got x={x!r})")
    reduced = bessel_i_reduced(n, x)
    if n == 0:
        return reduced
    if x == 0.0:
        return 0.0
    return (0.5 * x) ** n * reduced


def half_odd_weights(N):
    """Coefficients ``(N+k)! / (k! (N-k)!)`` of the half-odd Bessel expansion, k = 0..N."""
    return [math.factorial(N + k) // (math.factorial(k) * math.factorial(N - k)) for k in range(N + 1)]


def _working_digits(n, N, x):
    # Largest summand against the lower bound (x/2)^n / Gamma(n+1) of I_n(x)
    # gives the number of digits the finite sum cancels away.
    weights = half_odd_weights(N)
    log_big = x - 0.5 * math.log(2 * math.pi * x) + max(
        math.log(w) - k * math.log(2 * x) for k, w in enumerate(weights))
    log_small = n * math.log(0.5 * x) - math.lgamma(n + 1.0)
    lost = max(0.0, (log_big - log_small) / math.log(10))
    return 20 + int(math.ceil(lost))


def bessel_i_half_odd(n, x):
    """I_n(x) for half-odd n from the finite exponential sum.

    I_{N+1/2}(x) = sum_k w_k [(-1)^k e^x + (-1)^(N+1) e^-x] / (sqrt(2 pi x) (2x)^k),
    w_k = (N+k)! / (k! (N-k)!).  The sum cancels heavily for small x, so it is
    carried out with enough extra digits to return a correctly rounded double.
    """
    N = half_odd_index(n)
    if x < 0:
        raise DomainError(f"bessel_i_half_odd requires x >= 0 (got x={x!r})")
    if x == 0.0:
        return 0.0
    with mpmath.workdps(_working_digits(n, N, x)):
        return float(bessel_i_half_odd_mp(N, mpmath.mpf(x)))


def bessel_i_half_odd_mp(N, x):
    """I_{N+1/2}(x) from the finite sum at the current mpmath precision (x > 0)."""
    ep, em = mpmath.exp(x), mpmath.exp(-x)
    sign_minus = -1 if (N + 1) % 2 else 1
    total = mpmath.mpf(0)
    for k, w in enumerate(half_odd_weights(N)):
        total += w * ((-1) ** k * ep + sign_minus * em) / (2 * x) ** k
    return total / mpmath.sqrt(2 * mpmath.pi * x)


# -- Marcum Q ---------------------------------------------------------------

def marcum_q(order, a, b):
    """Generalized Marcum Q-function Q_nu(a, b).

    Poisson mixture of regularized upper incomplete gammas:
    Q_nu(a, b) = sum_k e^(-a^2/2) (a^2/2)^k / k! * Q(nu + k, b^2/2).
    """
    if not order > 0:
        raise DomainError(f"Marcum Q requires order > 0 (got {order!r})")
    if a < 0 or b < 0:
        raise DomainError(f"Marcum Q requires a, b >= 0 (got a={a!r}, b={b!r})")
    if b == 0.0:
        return 1.0
    lam = 0.5 * a * a
    x = 0.5 * b * b
    if lam == 0.0:
        return regularized_gamma_q(order, x)
    log_lam = math.log(lam)
    total = 0.0
    for k in range(MARCUM_MAX_TERMS):
        log_w = -lam + k * log_lam - math.lgamma(k + 1.0)
        w = math.exp(log_w)
        total += w * regularized_gamma_q(order + k, x)
        if k > lam:
            # Geometric bound on the remaining Poisson mass.
            tail = w * lam / (k + 1.0 - lam)
            if tail < 1e-17:
                return min(1.0, max(0.0, total))
    raise ConvergenceError(f"Marcum Q series did not converge (order={order}, a={a}, b={b})",
                           partial_sum=total, terms=MARCUM_MAX_TERMS)
