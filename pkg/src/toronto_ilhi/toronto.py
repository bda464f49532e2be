"""Incomplete Toronto function T_B(m, n, r).

    T_B(m, n, r) = 2 r^(n-m+1) e^(-r^2) integral_0^B t^(m-n) e^(-t^2) I_n(2rt) dt

Representations provided here:

* ``toronto_closed_form`` -- finite sum of incomplete gamma functions for
  half-odd n (see RECONCILIATION.md for the derivation and its domain);
* ``toronto_series_3`` / ``toronto_series_4`` -- the two convergent series;
* ``toronto_marcum_identity`` -- the n = (m-1)/2 special case via Marcum Q;
* ``toronto_lower_bound`` / ``toronto_upper_bound`` / ``toronto_bounds`` --
  closed forms at the neighbouring half-odd orders.
"""
import functools
import math

import mpmath

from .errors import ClosedFormUnavailable, ConvergenceError, DomainError
from .params import BoundPair, SeriesControl, TorontoParams
from .special import (
    bessel_i_half_odd,
    half_odd_index,
    half_odd_weights,
    bessel_i_half_odd_mp,
    lower_incomplete_gamma,
    lower_incomplete_gamma_mp,
    marcum_q,
    regularized_gamma_p,
    upper_incomplete_gamma,
    upper_incomplete_gamma_mp,
)

_INT_TOL = 1e-12
_SQRT_PI = math.sqrt(math.pi)


def _as_int(x, what):
    k = round(x)
    if abs(x - k) > _INT_TOL:
        raise DomainError(f"{what} must be an integer (got {x!r})")
    return int(k)


# -- numeric contexts -------------------------------------------------------
#
# The finite sums below cancel heavily when B is small against r or the
# powers are high, so they run in mpmath and the precision is raised until
# two successive evaluations agree.  The incomplete gamma kernels are the
# package's own, evaluated on mpmath numbers.

class _FloatCtx:
    num = float
    exp = staticmethod(math.exp)
    sqrt_pi = _SQRT_PI
    lower_gamma = staticmethod(lower_incomplete_gamma)
    upper_gamma = staticmethod(upper_incomplete_gamma)

    @staticmethod
    def bessel_half_odd(n, x):
        return bessel_i_half_odd(n, x)


class _MPCtx:
    num = staticmethod(mpmath.mpf)
    exp = staticmethod(mpmath.exp)
    lower_gamma = staticmethod(lower_incomplete_gamma_mp)
    upper_gamma = staticmethod(upper_incomplete_gamma_mp)

    @property
    def sqrt_pi(self):
        return mpmath.sqrt(mpmath.pi)

    @staticmethod
    def bessel_half_odd(n, x):
        return bessel_i_half_odd_mp(half_odd_index(n), x)


FLOAT_CTX = _FloatCtx()
MP_CTX = _MPCtx()

START_DPS = 30
DPS_STEP = 30
MAX_DPS = 600
AGREE_RTOL = 1e-17


def stable_mp(fn, label):
    """Evaluate ``fn()`` in mpmath at rising precision until two runs agree."""
    dps = START_DPS
    with mpmath.workdps(dps):
        prev = fn()
    while dps < MAX_DPS:
        dps += DPS_STEP
        with mpmath.workdps(dps):
            cur = fn()
            if cur == prev or abs(cur - prev) <= AGREE_RTOL * abs(cur):
                return float(cur)
            prev = cur
    raise ConvergenceError(f"{label}: no stable value up to {MAX_DPS} digits",
                           partial_sum=float(prev), terms=dps)


# -- Gaussian moments -------------------------------------------------------

def _gauss_moment_from_zero(l, x, ctx=FLOAT_CTX):
    """integral_0^x u^l e^(-u^2) du for any real x."""
    if x == 0:
        return ctx.num(0)
    v = ctx.lower_gamma(0.5 * (l + 1), x * x) / 2
    if x > 0 or l % 2 == 1:
        return v
    return -v


def gauss_moment(l, u1, u2, ctx=FLOAT_CTX):
    """integral_{u1}^{u2} u^l e^(-u^2) du for integer l >= 0.

    When both limits sit in the same Gaussian tail the integral is taken as a
    difference of upper incomplete gammas, which avoids subtracting two
    nearly equal lower ones.
    """
    s = 0.5 * (l + 1)
    if u1 * u2 > 0 and min(abs(u1), abs(u2)) > 1:
        val = (ctx.upper_gamma(s, u1 * u1) - ctx.upper_gamma(s, u2 * u2)) / 2
        if u1 > 0:
            return val
        return val if l % 2 == 1 else -val
    return _gauss_moment_from_zero(l, u2, ctx) - _gauss_moment_from_zero(l, u1, ctx)


def _shifted_gauss_power(L, s, B, ctx=FLOAT_CTX):
    """integral_0^B t^L e^(-(t-s)^2) dt by binomial expansion about t = s."""
    total = ctx.num(0)
    for l in range(L + 1):
        total += math.comb(L, l) * s ** (L - l) * gauss_moment(l, -s, B - s, ctx)
    return total


# -- closed form ------------------------------------------------------------

def check_closed_form(m, n):
    """Raise unless the closed form covers orders (m, n).

    DomainError for parameters outside the half-odd lattice,
    ClosedFormUnavailable where m - 2n is a negative odd integer: there the
    expansion leaves a residual integral of e^(-t^2) sinh(2rt) / t that has
    no finite incomplete-gamma form.
    """
    N = half_odd_index(n)
    if m < n:
        raise DomainError(f"closed form requires m >= n (got m={m!r}, n={n!r})")
    L0 = m - n - 0.5
    if abs(L0 - round(L0)) > _INT_TOL:
        raise DomainError(f"closed form requires m - n - 1/2 to be a non-negative integer "
                          f"(got m={m!r}, n={n!r})")
    gap = int(round(L0)) - N  # = m - 2n
    if gap < 0 and gap % 2 == 1:
        raise ClosedFormUnavailable(f"closed form unavailable for m - 2n = {gap} "
                                    f"(m={m!r}, n={n!r}); needs m - 2n >= 0 or even")


def closed_form_available(m, n):
    try:
        check_closed_form(m, n)
    except DomainError:
        return False
    return True


def _reduced_moment_factory(r, B, ctx=FLOAT_CTX):
    """Build e^(-r^2) * integral_0^B t^p e^(-t^2) I_n(2rt) dt for half-odd n.

    Keys are (2p, 2n) as ints.  Non-negative gap p - n uses the finite
    expansion of I_n directly; even negative gaps are lifted with the
    integration-by-parts recurrence
        (p+1-n) J(p, n) = 2 J(p+2, n) - 2 r J(p+1, n-1) + B^(p+1) e^(-B^2) I_n(2rB).
    """
    r, B = ctx.num(r), ctx.num(B)
    cache = {}
    edge = ctx.exp(-(B * B + r * r))

    def direct(p, n):
        N = half_odd_index(n)
        total = ctx.num(0)
        for k, w in enumerate(half_odd_weights(N)):
            L = _as_int(p - k - 0.5, "power of t")
            plus = _shifted_gauss_power(L, r, B, ctx)
            minus = _shifted_gauss_power(L, -r, B, ctx)
            bracket = (-1) ** k * plus + (-1) ** (N + 1) * minus
            total += w / ctx.sqrt_pi / ctx.num(2) ** (2 * k + 1) / r ** (k + ctx.num(0.5)) * bracket
        return total

    def moment(p2, n2):
        key = (p2, n2)
        if key in cache:
            return cache[key]
        p, n = 0.5 * p2, 0.5 * n2
        gap = (p2 - n2) // 2
        if gap >= 0:
            val = direct(p, n)
        else:
            boundary = B ** (p + 1) * edge * ctx.bessel_half_odd(n, 2 * r * B) if B > 0 else 0
            val = (2 * moment(p2 + 4, n2) - 2 * r * moment(p2 + 2, n2 - 2) + boundary) / (p + 1 - n)
        cache[key] = val
        return val

    return moment


@functools.lru_cache(maxsize=4096)
def toronto_closed_form(m, n, r, B):
    """T_B(m, n, r) as a finite sum of lower incomplete gamma functions.

    Requires half-odd n, integer m - n - 1/2 >= 0, and m - 2n not a negative
    odd integer.  The sum is carried in extended precision (see stable_mp).
    """
    p = TorontoParams(m, n, r, B)
    check_closed_form(p.m, p.n)
    if p.B == 0.0:
        return 0.0
    pw = round(2 * (p.m - p.n))
    nw = round(2 * p.n)

    def run():
        moment = _reduced_moment_factory(p.r, p.B, MP_CTX)
        return 2 * mpmath.mpf(p.r) ** (mpmath.mpf(p.n) - p.m + 1) * moment(pw, nw)

    return stable_mp(run, "toronto closed form")


# -- series -----------------------------------------------------------------

def _sum_series(terms, ctl, label):
    """Sum until |term| / |partial| < rel_tol holds for ``patience`` terms in a row."""
    total = 0.0
    calm = 0
    count = 0
    for term in terms:
        count += 1
        total += term
        # A run of exact zeros with a zero total means the value underflows.
        if abs(term) < ctl.rel_tol * abs(total) or (term == 0.0 and total == 0.0):
            calm += 1
            if calm >= ctl.patience:
                return total, count
        else:
            calm = 0
        if count >= ctl.max_terms:
            break
    raise ConvergenceError(f"{label} did not converge within {ctl.max_terms} terms",
                           partial_sum=total, terms=count)


def toronto_series_3(m, n, r, B, ctl=SeriesControl(), return_terms=False):
    """Series in powers of B^2 with inner sums Y_k, a = (m+1)/2.

    T = B^(2a) r^(2n-m+1) e^(-r^2-B^2) / Gamma(n+1) * sum_k B^(2k) Y_k / (a)_(k+1),
    Y_k = sum_{i<=k} (a)_i r^(2i) / ((n+1)_i i!).
    """
    p = TorontoParams(m, n, r, B)
    if p.B == 0.0:
        return (0.0, 0) if return_terms else 0.0
    a = 0.5 * (p.m + 1)
    b2, r2 = p.B * p.B, p.r * p.r

    def terms():
        q = 1.0 / a          # B^(2k) / (a)_(k+1)
        u = 1.0              # (a)_k r^(2k) / ((n+1)_k k!)
        y = u
        k = 0
        while True:
            yield q * y
            q *= b2 / (a + k + 1)
            u *= (a + k) * r2 / ((p.n + 1 + k) * (k + 1))
            y += u
            k += 1

    total, count = _sum_series(terms(), ctl, "series in B^2")
    log_pref = 2 * a * math.log(p.B) + (2 * p.n - p.m + 1) * math.log(p.r) - r2 - b2 - math.lgamma(p.n + 1)
    value = math.exp(log_pref) * total
    return (value, count) if return_terms else value


def toronto_series_4(m, n, r, B, ctl=SeriesControl(), gamma_arg="B2", return_terms=False):
    """Series of lower incomplete gammas, a = (m+1)/2.

    T = r^(2n-m+1) e^(-r^2) sum_k r^(2k) gamma(a+k, X) / (k! Gamma(n+k+1)),
    with X = B^2 (``gamma_arg="B2"``, the default, which matches the integral)
    or X = B (``gamma_arg="B"``, kept for comparison only).
    """
    p = TorontoParams(m, n, r, B)
    if gamma_arg not in ("B2", "B"):
        raise DomainError(f"gamma_arg must be 'B2' or 'B' (got {gamma_arg!r})")
    if p.B == 0.0:
        return (0.0, 0) if return_terms else 0.0
    a = 0.5 * (p.m + 1)
    x = p.B * p.B if gamma_arg == "B2" else p.B
    log_r2 = 2 * math.log(p.r)

    def terms():
        k = 0
        while True:
            log_c = k * log_r2 + math.lgamma(a + k) - math.lgamma(k + 1) - math.lgamma(p.n + k + 1)
            yield math.exp(log_c) * regularized_gamma_p(a + k, x)
            k += 1

    total, count = _sum_series(terms(), ctl, "incomplete-gamma series")
    value = p.r ** (2 * p.n - p.m + 1) * math.exp(-p.r * p.r) * total
    return (value, count) if return_terms else value


def toronto_marcum_identity(m, r, B):
    """T_B(m, (m-1)/2, r) = 1 - Q_{(m+1)/2}(r sqrt2, B sqrt2)."""
    if m < 1:
        raise DomainError(f"identity requires n = (m-1)/2 >= 0, i.e. m >= 1 (got m={m!r})")
    TorontoParams(m, 0.5 * (m - 1), r, B)
    return 1.0 - marcum_q(0.5 * (m + 1), r * math.sqrt(2.0), B * math.sqrt(2.0))


# -- bounds -----------------------------------------------------------------

def snap_up(n):
    """Smallest half-odd order >= n: ceil(n + 1/2) - 1/2."""
    return math.ceil(n + 0.5) - 0.5


def snap_down(n):
    """Largest half-odd order <= n: floor(n - 1/2) + 1/2 (negative when n < 1/2)."""
    return math.floor(n - 0.5) + 0.5


def decreasing_in_n_certified(r, n_min):
    """True when T_B(m, ., r) is provably strictly decreasing on [n_min, inf).

    Every term of the incomplete-gamma series has log-derivative in n equal
    to 2 ln r - digamma(n + k + 1), so 2 ln r < digamma(n_min + 1) suffices.
    For larger r the function rises with n over part of the range and the
    half-odd neighbours swap roles.
    """
    return 2 * math.log(r) < float(mpmath.digamma(n_min + 1))


def toronto_lower_bound(m, n, r, B):
    """Closed form at order ceil(n + 1/2) - 1/2 (a lower bound where T decreases in n)."""
    p = TorontoParams(m, n, r, B)
    n_snap = snap_up(p.n)
    if p.m < n_snap:
        raise DomainError(f"lower bound needs m >= {n_snap} (got m={p.m!r})")
    return toronto_closed_form(p.m, n_snap, p.r, p.B)


def toronto_upper_bound(m, n, r, B):
    """Closed form at order floor(n - 1/2) + 1/2 (an upper bound where T decreases in n)."""
    p = TorontoParams(m, n, r, B)
    n_snap = snap_down(p.n)
    if n_snap < 0:
        raise DomainError(f"upper bound requires n >= 0.5: no half-odd order lies below n={p.n!r}")
    return toronto_closed_form(p.m, n_snap, p.r, p.B)


def toronto_bounds(m, n, r, B):
    """Both half-odd neighbours of n, ordered by value.

    Where the decrease in n is certified the ceil-snapped value is the lower
    bound.  Otherwise the two values are still returned in ascending order
    and the pair is marked uncertified.
    """
    p = TorontoParams(m, n, r, B)
    lo_n, up_n = snap_up(p.n), snap_down(p.n)
    lo = toronto_lower_bound(p.m, p.n, p.r, p.B)
    up = toronto_upper_bound(p.m, p.n, p.r, p.B)
    certified = lo_n == up_n or decreasing_in_n_certified(p.r, up_n)
    if lo <= up:
        return BoundPair(lo, up, lo_n, up_n, certified)
    return BoundPair(up, lo, up_n, lo_n, False)
