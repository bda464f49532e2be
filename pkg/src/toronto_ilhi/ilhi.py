"""Incomplete Lipschitz-Hankel integrals of the modified Bessel function I_n.

    Ie_{m,n}(a, z) = integral_0^z x^m e^(-a x) I_n(x) dx

For half-odd n the finite exponential form of I_n turns each term into a
lower incomplete gamma function, giving a closed form for a >= 1.  Bounds for
general n come from the two neighbouring half-odd orders, since I_n(x) is
strictly decreasing in n >= 0 for every x > 0.
"""
import functools

import mpmath

from .errors import ClosedFormUnavailable, DomainError
from .params import BoundPair, IlhiParams
from .special import half_odd_index, half_odd_weights, lower_incomplete_gamma_mp
from .toronto import snap_down, snap_up, stable_mp


def _scaled_gamma_mp(P, c, z):
    """gamma(P, c z) / c^P in mpmath, equal to z^P / P at c = 0."""
    if c == 0:
        return z ** P / P
    return lower_incomplete_gamma_mp(P, c * z) / c ** P


@functools.lru_cache(maxsize=4096)
def ilhi_closed_form(m, n, a, z):
    """Ie_{m,n}(a, z) for half-odd n and a >= 1.

    Ie = sum_k w_k 2^-(k+1/2) / sqrt(pi)
             * [(-1)^k g(P, a-1) + (-1)^(N+1) g(P, a+1)],
    P = m - k + 1/2, g(P, c) = gamma(P, c z) / c^P, and g(P, 0) = z^P / P.
    """
    p = IlhiParams(m, n, a, z)
    N = half_odd_index(p.n)
    if p.a < 1.0:
        raise ClosedFormUnavailable(f"closed form requires a >= 1 (got a={p.a!r}); "
                                    "use the quadrature oracle for 0 < a < 1")
    if p.z == 0.0:
        return 0.0
    sign_minus = -1 if (N + 1) % 2 else 1

    def run():
        a, z = mpmath.mpf(p.a), mpmath.mpf(p.z)
        total = mpmath.mpf(0)
        for k, w in enumerate(half_odd_weights(N)):
            P = p.m - k + mpmath.mpf(0.5)
            grow = _scaled_gamma_mp(P, a - 1, z)
            decay = _scaled_gamma_mp(P, a + 1, z)
            total += w * mpmath.mpf(2) ** (-k - mpmath.mpf(0.5)) * ((-1) ** k * grow + sign_minus * decay)
        return total / mpmath.sqrt(mpmath.pi)

    return stable_mp(run, "ilhi closed form")


def ilhi_lower_bound(m, n, a, z):
    """Closed form at order ceil(n + 1/2) - 1/2 >= n."""
    p = IlhiParams(m, n, a, z)
    n_snap = snap_up(p.n)
    if p.m < n_snap:
        raise DomainError(f"lower bound needs m >= {n_snap} (got m={p.m!r})")
    return ilhi_closed_form(p.m, n_snap, p.a, p.z)


def ilhi_upper_bound(m, n, a, z):
    """Closed form at order floor(n - 1/2) + 1/2 <= n."""
    p = IlhiParams(m, n, a, z)
    n_snap = snap_down(p.n)
    if n_snap < 0:
        raise DomainError(f"upper bound requires n >= 0.5: no half-odd order lies below n={p.n!r}")
    return ilhi_closed_form(p.m, n_snap, p.a, p.z)


def ilhi_bounds(m, n, a, z):
    p = IlhiParams(m, n, a, z)
    return BoundPair(
        lower=ilhi_lower_bound(p.m, p.n, p.a, p.z),
        upper=ilhi_upper_bound(p.m, p.n, p.a, p.z),
        n_lower_snap=snap_up(p.n),
        n_upper_snap=snap_down(p.n),
    )
