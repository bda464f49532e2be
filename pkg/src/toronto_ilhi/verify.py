"""Grid checks of every representation against the quadrature oracle.

Each check returns a :class:`CheckResult` recording the worst discrepancy,
the tolerance it was held to, and the parameter tuple responsible.
"""
import itertools
import math
from dataclasses import dataclass, field

from .errors import DomainError
from .ilhi import ilhi_closed_form, ilhi_lower_bound, ilhi_upper_bound
from .params import SeriesControl
from .quadrature import QuadSpec, ilhi_oracle, toronto_oracle
from .special import is_half_odd
from .toronto import (
    closed_form_available,
    decreasing_in_n_certified,
    snap_down,
    snap_up,
    toronto_closed_form,
    toronto_lower_bound,
    toronto_marcum_identity,
    toronto_series_3,
    toronto_series_4,
    toronto_upper_bound,
)

TORONTO_M = (1.0, 2.0, 3.0, 4.0)
TORONTO_N = (0.5, 1.5, 2.5)
TORONTO_R = (0.5, 1.0, 2.0, 4.0)
TORONTO_B = (0.5, 1.0, 2.0, 4.0)

MARCUM_M = (2.0, 4.0)
MARCUM_R = (0.5, 1.0, 2.0)
MARCUM_B = (0.5, 1.0, 2.0, 4.0)

TORONTO_BOUND_N = (0.4, 0.6, 1.3, 2.4, 2.6)
TORONTO_BOUND_M = (1.0, 2.0, 3.0, 4.0, 5.0)

ILHI_M = (1.0, 2.0, 3.0)
ILHI_N = (0.5, 1.5, 2.5)
ILHI_A = (1.0, 1.5, 2.0, 3.0, 5.0)
ILHI_Z = (0.5, 1.0, 2.0, 5.0)
ILHI_BOUND_N = (0.6, 1.3, 1.4, 1.7, 2.4)

TOL_MARCUM = 1e-9
TOL_CLOSED = 1e-8
TOL_SERIES = 1e-7


@dataclass
class CheckResult:
    name: str
    worst: float
    tol: float | None
    passed: bool
    worst_point: tuple | None = None
    count: int = 0
    notes: list = field(default_factory=list)

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        if self.tol is None:
            msg = f"{status}  {self.name:<34} min_margin={self.worst:.3e}  strict  points={self.count}"
        else:
            msg = f"{status}  {self.name:<34} worst={self.worst:.3e}  tol={self.tol:.1e}  points={self.count}"
        if not self.passed and self.worst_point is not None:
            msg += f"  worst_at={self.worst_point}"
        return msg


def rel_err(value, ref):
    if ref == 0.0:
        return abs(value)
    return abs(value - ref) / abs(ref)


def _finish(name, errors, tol):
    """errors: iterable of (err, point)."""
    worst, point, count = 0.0, None, 0
    for err, pt in errors:
        count += 1
        if not err <= worst:
            worst, point = err, pt
    passed = count > 0 and not math.isnan(worst) and worst <= tol
    return CheckResult(name, worst, tol, passed, point, count)


# -- grids ------------------------------------------------------------------

def toronto_grid(ms=TORONTO_M, ns=TORONTO_N, rs=TORONTO_R, Bs=TORONTO_B):
    """Grid points where the closed form exists, plus the (m, n) pairs dropped."""
    points, dropped = [], []
    for m, n in itertools.product(ms, ns):
        if m < n:
            continue
        if not closed_form_available(m, n):
            dropped.append((m, n))
            continue
        points.extend((m, n, r, B) for r in rs for B in Bs)
    return points, dropped


def ilhi_grid(ms=ILHI_M, ns=ILHI_N, As=ILHI_A, zs=ILHI_Z):
    return [(m, n, a, z) for m, n, a, z in itertools.product(ms, ns, As, zs) if m >= n]


def toronto_bounds_defined(m, n):
    """The ceil snap has a closed form, and so does the floor snap when it exists."""
    up, down = snap_up(n), snap_down(n)
    if m < up or not closed_form_available(m, up):
        return False
    return down < 0 or closed_form_available(m, down)


def ilhi_bounds_defined(m, n, a):
    return a >= 1.0 and m >= snap_up(n) and snap_down(n) >= 0


def toronto_bound_points(ns=TORONTO_BOUND_N, ms=TORONTO_BOUND_M, rs=TORONTO_R, Bs=TORONTO_B):
    return [(m, n, r, B) for n, m in itertools.product(ns, ms) if toronto_bounds_defined(m, n)
            for r in rs for B in Bs]


def ilhi_bound_points(ns=ILHI_BOUND_N, ms=ILHI_M, As=ILHI_A, zs=ILHI_Z):
    return [(m, n, a, z) for n, m, a, z in itertools.product(ns, ms, As, zs)
            if ilhi_bounds_defined(m, n, a)]


# -- checks -----------------------------------------------------------------

def check_marcum_identity(ms=MARCUM_M, rs=MARCUM_R, Bs=MARCUM_B, tol=TOL_MARCUM):
    def errs():
        for m, r, B in itertools.product(ms, rs, Bs):
            diff = abs(toronto_closed_form(m, 0.5 * (m - 1), r, B) - toronto_marcum_identity(m, r, B))
            yield diff, (m, 0.5 * (m - 1), r, B)
    return _finish("toronto closed vs Marcum identity", errs(), tol)


def oracle_values(fn, points, quad=QuadSpec()):
    return {pt: fn(*pt, quad).value for pt in points}


def check_closed_vs_oracle(name, closed, points, oracle, tol=TOL_CLOSED):
    return _finish(name, ((rel_err(closed(*pt), oracle[pt]), pt) for pt in points), tol)


def check_series_vs_closed(name, series, points, tol=TOL_SERIES, ctl=SeriesControl()):
    def errs():
        for pt in points:
            value, terms = series(*pt, ctl=ctl, return_terms=True)
            if terms >= ctl.max_terms:
                yield math.inf, pt
            yield rel_err(value, toronto_closed_form(*pt)), pt
    return _finish(name, errs(), tol)


def toronto_sandwich_rows(points, oracle=None, quad=QuadSpec()):
    """Per-point (m, n, r, B, ceil-snap value, oracle, floor-snap value or None, certified)."""
    rows = []
    for m, n, r, B in points:
        exact = oracle[(m, n, r, B)] if oracle else toronto_oracle(m, n, r, B, quad).value
        lo = toronto_lower_bound(m, n, r, B)
        try:
            up = toronto_upper_bound(m, n, r, B)
        except DomainError:
            up = None
        certified = decreasing_in_n_certified(r, min(n, snap_down(n)) if up is not None else n)
        rows.append((m, n, r, B, lo, exact, up, certified))
    return rows


def _sandwich_margin(lo, exact, up):
    """Smallest relative gap of lo < exact < up; negative when violated."""
    margin = (exact - lo) / abs(exact)
    if up is not None:
        margin = min(margin, (up - exact) / abs(exact))
    return margin


def check_toronto_sandwich(rows, certified_only=True):
    """Strict lower < oracle < upper; by default only where the direction is certified."""
    name = "toronto bound sandwich (certified)" if certified_only else "toronto bound sandwich (all)"
    worst, point, count, skipped = math.inf, None, 0, 0
    for m, n, r, B, lo, exact, up, certified in rows:
        if certified_only and not certified:
            skipped += 1
            continue
        count += 1
        margin = _sandwich_margin(lo, exact, up)
        if margin < worst:
            worst, point = margin, (m, n, r, B)
    res = CheckResult(name, 0.0 if count == 0 else worst, None, count > 0 and worst > 0, point, count)
    if skipped:
        res.notes.append(f"{skipped} points outside the certified decreasing-in-n regime not checked")
    return res


def check_ilhi_sandwich(points, quad=QuadSpec()):
    worst, point = math.inf, None
    for m, n, a, z in points:
        exact = ilhi_oracle(m, n, a, z, quad).value
        margin = _sandwich_margin(ilhi_lower_bound(m, n, a, z), exact, ilhi_upper_bound(m, n, a, z))
        if margin < worst:
            worst, point = margin, (m, n, a, z)
    return CheckResult("ilhi bound sandwich", worst, None, bool(points) and worst > 0, point, len(points))


def run_verification(tol=None, toronto_points=None, ilhi_points=None, quad=QuadSpec(),
                     ctl=SeriesControl()):
    """Run the default grids (or the given points) and return the check results.

    ``tol`` replaces every numeric tolerance when given.
    """
    results = []
    notes = []
    default = toronto_points is None and ilhi_points is None
    if default:
        toronto_points, dropped = toronto_grid()
        if dropped:
            notes.append(f"(m, n) pairs without a closed form, not in the closed-form grid: {dropped}")
        ilhi_points = ilhi_grid()
        results.append(check_marcum_identity(tol=tol or TOL_MARCUM))
        t_bound = toronto_bound_points()
        i_bound = ilhi_bound_points()
    else:
        toronto_points = toronto_points or []
        ilhi_points = ilhi_points or []
        t_bound = [pt for pt in toronto_points
                   if not is_half_odd(pt[1]) and toronto_bounds_defined(pt[0], pt[1])]
        i_bound = [pt for pt in ilhi_points
                   if not is_half_odd(pt[1]) and ilhi_bounds_defined(pt[0], pt[1], pt[2])]
        toronto_points = [pt for pt in toronto_points if closed_form_available(pt[0], pt[1])]
        ilhi_points = [pt for pt in ilhi_points if is_half_odd(pt[1]) and pt[2] >= 1.0]
        marcum = [pt for pt in toronto_points if abs(pt[1] - 0.5 * (pt[0] - 1)) < 1e-12]
        for m, n, r, B in marcum:
            results.append(check_marcum_identity((m,), (r,), (B,), tol=tol or TOL_MARCUM))

    if toronto_points:
        oracle = oracle_values(toronto_oracle, toronto_points, quad)
        results.append(check_closed_vs_oracle("toronto closed vs oracle", toronto_closed_form,
                                              toronto_points, oracle, tol or TOL_CLOSED))
        results.append(check_series_vs_closed("toronto series-3 vs closed", toronto_series_3,
                                              toronto_points, tol or TOL_SERIES, ctl))
        results.append(check_series_vs_closed("toronto series-4 vs closed", toronto_series_4,
                                              toronto_points, tol or TOL_SERIES, ctl))
    if t_bound:
        rows = toronto_sandwich_rows(t_bound, quad=quad)
        res = check_toronto_sandwich(rows, certified_only=True)
        if res.count:
            results.append(res)
        else:
            notes.append("toronto bounds: no point in the certified regime")
    if ilhi_points:
        oracle = oracle_values(ilhi_oracle, ilhi_points, quad)
        results.append(check_closed_vs_oracle("ilhi closed vs oracle", ilhi_closed_form,
                                              ilhi_points, oracle, tol or TOL_CLOSED))
    if i_bound:
        results.append(check_ilhi_sandwich(i_bound, quad))
    if results:
        results[0].notes.extend(notes)
    return results
