"""Parameter tuples and small result records."""
import math
from dataclasses import dataclass

from .errors import DomainError


def _finite(**values):
    for name, v in values.items():
        if not math.isfinite(v):
            raise DomainError(f"{name} must be finite (got {v!r})")


@dataclass(frozen=True)
class TorontoParams:
    """Arguments of T_B(m, n, r); validated on construction."""
    m: float
    n: float
    r: float
    B: float

    def __post_init__(self):
        _finite(m=self.m, n=self.n, r=self.r, B=self.B)
        if not self.m > 0:
            raise DomainError(f"requires m > 0 (got m={self.m!r})")
        if not self.n >= 0:
            raise DomainError(f"requires n >= 0 (got n={self.n!r})")
        if not self.m >= self.n:
            raise DomainError(f"requires m >= n (got m={self.m!r}, n={self.n!r})")
        if not self.r > 0:
            raise DomainError(f"requires r > 0 (got r={self.r!r})")
        if not self.B >= 0:
            raise DomainError(f"requires B >= 0 (got B={self.B!r})")


@dataclass(frozen=True)
class IlhiParams:
    """Arguments of Ie_{m,n}(a, z); validated on construction."""
    m: float
    n: float
    a: float
    z: float

    def __post_init__(self):
        _finite(m=self.m, n=self.n, a=self.a, z=self.z)
        if not self.m > 0:
            raise DomainError(f"requires m > 0 (got m={self.m!r})")
        if not self.n >= 0:
            raise DomainError(f"requires n >= 0 (got n={self.n!r})")
        if not self.m >= self.n:
            raise DomainError(f"requires m >= n (got m={self.m!r}, n={self.n!r})")
        if not self.a > 0:
            raise DomainError(f"requires a > 0 (got a={self.a!r})")
        if not self.z >= 0:
            raise DomainError(f"requires z >= 0 (got z={self.z!r})")


@dataclass(frozen=True)
class SeriesControl:
    """Truncation control for the infinite series representations."""
    rel_tol: float = 1e-14
    max_terms: int = 10000
    # Consecutive small terms required before stopping.
    patience: int = 3

    def __post_init__(self):
        if not self.rel_tol > 0:
            raise DomainError("rel_tol must be positive")
        if self.max_terms < 1:
            raise DomainError("max_terms must be >= 1")


@dataclass(frozen=True)
class BoundPair:
    """Two closed-form evaluations at the half-odd orders bracketing n.

    ``certified`` is True when monotonicity in n over the bracket is proven
    for these arguments, so that ``lower <= f(n) <= upper`` is guaranteed.
    """
    lower: float
    upper: float
    n_lower_snap: float
    n_upper_snap: float
    certified: bool = True


@dataclass(frozen=True)
class EvalResult:
    value: float
    method: str
    error_estimate: float | None = None
