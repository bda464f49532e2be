"""Method dispatch returning tagged results, shared by the CLI and reports."""
from .errors import DomainError
from .ilhi import ilhi_closed_form, ilhi_lower_bound, ilhi_upper_bound
from .params import EvalResult, SeriesControl
from .quadrature import QuadSpec, ilhi_oracle, toronto_oracle
from .toronto import (
    toronto_closed_form,
    toronto_lower_bound,
    toronto_marcum_identity,
    toronto_series_3,
    toronto_series_4,
    toronto_upper_bound,
)

TORONTO_METHODS = ("auto", "closed", "series3", "series4", "marcum", "lower", "upper", "oracle")
ILHI_METHODS = ("auto", "closed", "lower", "upper", "oracle")

TAGS = {
    "closed": "closed-form",
    "series3": "series-3",
    "series4": "series-4",
    "marcum": "marcum-identity",
    "lower": "lower-bound",
    "upper": "upper-bound",
    "oracle": "oracle",
}


def evaluate_toronto(m, n, r, B, method="auto", ctl=SeriesControl(), quad=QuadSpec()):
    if method == "auto":
        try:
            return EvalResult(toronto_closed_form(m, n, r, B), TAGS["closed"])
        except DomainError:
            method = "oracle"
    if method == "oracle":
        res = toronto_oracle(m, n, r, B, quad)
        return EvalResult(res.value, TAGS["oracle"], res.error_estimate)
    if method == "closed":
        value = toronto_closed_form(m, n, r, B)
    elif method == "series3":
        value = toronto_series_3(m, n, r, B, ctl)
    elif method == "series4":
        value = toronto_series_4(m, n, r, B, ctl)
    elif method == "marcum":
        if abs(n - 0.5 * (m - 1)) > 1e-12:
            raise DomainError(f"Marcum identity requires n = (m-1)/2 (got m={m!r}, n={n!r})")
        value = toronto_marcum_identity(m, r, B)
    elif method == "lower":
        value = toronto_lower_bound(m, n, r, B)
    elif method == "upper":
        value = toronto_upper_bound(m, n, r, B)
    else:
        raise DomainError(f"unknown method {method!r}; choose from {', '.join(TORONTO_METHODS)}")
    return EvalResult(value, TAGS[method])


def evaluate_ilhi(m, n, a, z, method="auto", quad=QuadSpec()):
    if method == "auto":
        try:
            return EvalResult(ilhi_closed_form(m, n, a, z), TAGS["closed"])
        except DomainError:
            method = "oracle"
    if method == "oracle":
        res = ilhi_oracle(m, n, a, z, quad)
        return EvalResult(res.value, TAGS["oracle"], res.error_estimate)
    if method == "closed":
        value = ilhi_closed_form(m, n, a, z)
    elif method == "lower":
        value = ilhi_lower_bound(m, n, a, z)
    elif method == "upper":
        value = ilhi_upper_bound(m, n, a, z)
    else:
        raise DomainError(f"unknown method {method!r}; choose from {', '.join(ILHI_METHODS)}")
    return EvalResult(value, TAGS[method])
