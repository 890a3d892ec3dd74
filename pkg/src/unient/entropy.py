"""Unified (q,s)/(r,t) entropies, reduced functions and classical limits."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .states import DensityMatrix, eigenvalues


class Family(str, enum.Enum):
    QS = "QS"
    RT = "RT"


class DomainError(ValueError):
    """Parameters outside the validity domain of a measure family."""


@dataclass(frozen=True)
class MeasureParams:
    """Family tag plus the two entropy parameters.

    ``QS`` needs ``a > 1`` and ``a * b >= 1``; ``RT`` needs ``0 < a < 1`` and
    ``0 < b <= 1``. Out-of-domain values are rejected here, so every function
    taking a ``MeasureParams`` can assume a valid pair.
    """

    family: Family
    a: float
    b: float

    def __post_init__(self):
        fam = Family(self.family)
        a, b = float(self.a), float(self.b)
        object.__setattr__(self, "family", fam)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        if not (math.isfinite(a) and math.isfinite(b)):
            raise DomainError(f"non-finite parameters ({a}, {b})")
        if fam is Family.QS:
            if not (a > 1 and a * b >= 1 - 1e-12):
                raise DomainError(f"QS requires q > 1 and q*s >= 1, got ({a}, {b})")
        elif not (0 < a < 1 and 0 < b <= 1):
            raise DomainError(f"RT requires 0 < r < 1 and 0 < t <= 1, got ({a}, {b})")

    @classmethod
    def qs(cls, q: float, s: float) -> "MeasureParams":
        return cls(Family.QS, q, s)

    @classmethod
    def rt(cls, r: float, t: float) -> "MeasureParams":
        return cls(Family.RT, r, t)

    @property
    def scale(self) -> float:
        """The ``(1 - a) b`` denominator shared by both families."""
        return (1.0 - self.a) * self.b

    def from_trace_power(self, tp):
        """Map ``tr(rho**a)`` to the entropy value, ``[(tp)**b - 1] / ((1-a) b)``."""
        return (np.power(tp, self.b) - 1.0) / self.scale

    def __str__(self):
        return f"{self.family.value}({self.a:g},{self.b:g})"


def spectrum_of(rho) -> np.ndarray:
    """Eigenvalues of a density operator, matrix, or an already-diagonal probability vector."""
    if isinstance(rho, DensityMatrix):
        return eigenvalues(rho)
    arr = np.asarray(rho)
    if arr.ndim == 1:
        return arr.real
    return eigenvalues(arr)


def unified_entropy_from_eigs(w: np.ndarray, p: MeasureParams) -> float:
    w = np.asarray(w, dtype=float)
    w = w[w > 0]
    return float(p.from_trace_power(np.sum(w**p.a)))


def unified_entropy(rho, p: MeasureParams) -> float:
    """Unified entropy ``[(tr rho^a)^b - 1] / ((1-a) b)``.

    Args:
        rho: a :class:`DensityMatrix`, a Hermitian matrix, or a probability
            vector (taken as the spectrum).
        p: measure parameters.

    Returns:
        float: the entropy, zero exactly on pure states.
    """
    w = spectrum_of(rho)
    if np.count_nonzero(w > 1e-15) <= 1:
        return 0.0
    return max(unified_entropy_from_eigs(w, p), 0.0)


def reduced_function_h(rho, p: MeasureParams) -> float:
    """Reduced function of the bipartite measure; identical to :func:`unified_entropy`.

    For QS parameters this is written ``[1 - (tr rho^q)^s] / ((q-1) s)``, for
    RT ``[1 - (tr rho^r)^t] / ((r-1) t)``; both rearrange to the same value.
    """
    return unified_entropy(rho, p)


def max_reduced_function(d: int, p: MeasureParams) -> float:
    """Largest reduced-function value over ``d``-dimensional states (``I/d``)."""
    return float(p.from_trace_power(d ** (1.0 - p.a)))


class LimitKind(str, enum.Enum):
    TSALLIS = "tsallis"
    RENYI = "renyi"
    VON_NEUMANN = "von_neumann"


def classical_limit_entropy(rho, kind: LimitKind | str, x: float | None = None) -> float:
    """Tsallis, Renyi or von Neumann entropy in natural-log units.

    Tsallis is the unified entropy at ``b = 1``; Renyi its ``b -> 0`` limit
    ``ln(tr rho^x) / (1 - x)``.
    """
    kind = LimitKind(kind)
    w = spectrum_of(rho)
    w = w[w > 0]
    if kind is LimitKind.VON_NEUMANN:
        return float(max(-np.sum(w * np.log(w)), 0.0))
    if x is None or not x > 0 or x == 1:
        raise DomainError(f"{kind.value} entropy needs x > 0, x != 1; got {x}")
    tp = float(np.sum(w**x))
    if kind is LimitKind.TSALLIS:
        return (1.0 - tp) / (x - 1.0)
    return math.log(tp) / (1.0 - x)


def tsallis_entropy(rho, x: float) -> float:
    return classical_limit_entropy(rho, LimitKind.TSALLIS, x)


def renyi_entropy(rho, x: float) -> float:
    return classical_limit_entropy(rho, LimitKind.RENYI, x)


def von_neumann_entropy(rho) -> float:
    return classical_limit_entropy(rho, LimitKind.VON_NEUMANN)


def schatten_norm(rho, q: float) -> float:
    """``(tr rho^q)^(1/q)``, strictly convex on density operators for ``q > 1``."""
    w = spectrum_of(rho)
    w = w[w > 0]
    return float(np.sum(w**q) ** (1.0 / q))
