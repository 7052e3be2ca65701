"""The (p2, p3) region of two-qubit states and the 2D separability curve."""
from __future__ import annotations

import enum
import math
from typing import NamedTuple

from .config import DEFAULT
from .errors import DomainError

SQRT2 = math.sqrt(2.0)
SQRT3 = math.sqrt(3.0)


class MomentPair(NamedTuple):
    p2: float
    p3: float


class Class2D(str, enum.Enum):
    CERTIFIED_ENTANGLED = "CertifiedEntangled"
    INCONCLUSIVE = "Inconclusive"
    INFEASIBLE = "Infeasible"


def _check_p2(p2: float, band: float = 1e-12) -> None:
    if not (0.25 - band <= p2 <= 1.0 + band):
        raise DomainError(f"p2 must lie in [1/4, 1], got {p2!r}")


def _pow32(x: float) -> float:
    # absorbs -1e-16 rounding at p2 = 1/4
    x = max(0.0, x)
    return x * math.sqrt(x)


def f_bounds(p2: float) -> tuple[float, float]:
    """``f_pm(p2) = [3(6 p2 - 1) pm sqrt3 (4 p2 - 1)^(3/2)] / 24``."""
    _check_p2(p2)
    base = 3.0 * (6.0 * p2 - 1.0)
    wing = SQRT3 * _pow32(4.0 * p2 - 1.0)
    return (base - wing) / 24.0, (base + wing) / 24.0


def phi4(p2: float) -> float:
    """Dividing curve between separable-compatible and entangled-only pairs."""
    _check_p2(p2)
    if p2 >= 0.5:
        return (3.0 * p2 - 1.0) / 2.0
    if p2 >= 1.0 / 3.0:
        return (2.0 * (9.0 * p2 - 2.0) - SQRT2 * _pow32(3.0 * p2 - 1.0)) / 18.0
    return f_bounds(p2)[0]


def in_region_A(pair, band: float = DEFAULT.region) -> bool:
    p2, p3 = pair
    if not (0.25 - band <= p2 <= 1.0 + band):
        return False
    lo, hi = f_bounds(min(1.0, max(0.25, p2)))
    return lo - band <= p3 <= hi + band


def classify_2d(pair, band: float = DEFAULT.region) -> Class2D:
    """Entanglement certificate from (p2, p3) alone: ``p3 < phi4(p2)``."""
    if not in_region_A(pair, band):
        return Class2D.INFEASIBLE
    p2, p3 = pair
    if p3 < phi4(min(1.0, max(0.25, p2))) - band:
        return Class2D.CERTIFIED_ENTANGLED
    return Class2D.INCONCLUSIVE
