"""PT-moments, Newton's identities and spectrum reconstruction.

The eigenvalues of a 4x4 Hermitian matrix are recovered from its trace
powers: power sums -> elementary symmetric polynomials -> roots of the
characteristic quartic.  The same path turns a measured moment vector
into the spectrum of the partial transpose.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .config import DEFAULT
from .errors import DomainError, InconsistentMomentsError, InternalConsistencyError, ValidationError
from .polyroots import solve_quartic_monic


@dataclass(frozen=True)
class PTMomentVector:
    """Power sums ``p_k = Tr[(rho^Gamma)^k]`` for k = 1..4."""

    p1: float
    p2: float
    p3: float
    p4: float

    def __post_init__(self):
        if abs(self.p1 - 1.0) > DEFAULT.trace:
            raise ValidationError(f"p1 must equal 1, got {self.p1!r}")

    @classmethod
    def from_sequence(cls, values: Sequence[float]) -> "PTMomentVector":
        if len(values) != 4:
            raise ValidationError(f"moment vector needs 4 entries, got {len(values)}")
        return cls(*(float(v) for v in values))

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.p1, self.p2, self.p3, self.p4)

    def to_json(self) -> dict:
        return {"p": list(self.as_tuple())}

    @classmethod
    def from_json(cls, obj: dict) -> "PTMomentVector":
        try:
            values = obj["p"]
        except (KeyError, TypeError):
            raise ValidationError('moment JSON must be an object with field "p"') from None
        return cls.from_sequence(values)


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues of the partial transpose, descending."""

    lambda1: float
    lambda2: float
    lambda3: float
    lambda4: float

    def __iter__(self):
        return iter((self.lambda1, self.lambda2, self.lambda3, self.lambda4))

    def as_tuple(self) -> tuple[float, float, float, float]:
        return tuple(self)

    def validate(self, tol: float = DEFAULT.psd) -> None:
        vals = self.as_tuple()
        if any(a < b for a, b in zip(vals, vals[1:])):
            raise ValidationError("spectrum not in descending order")
        if abs(sum(vals) - 1.0) > tol:
            raise ValidationError(f"spectrum sums to {sum(vals)!r}, not 1")
        if self.lambda1 > 1.0 + tol or self.lambda4 < -0.5 - tol:
            raise ValidationError("eigenvalue outside [-1/2, 1]")
        if self.lambda3 < -tol:
            raise ValidationError("more than one negative eigenvalue")


@dataclass(frozen=True)
class SymmetricFunctions:
    e1: float
    e2: float
    e3: float
    e4: float

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.e1, self.e2, self.e3, self.e4)


def _as_array(gamma) -> np.ndarray:
    return np.asarray(getattr(gamma, "matrix", gamma), dtype=complex)


def trace_powers(m: np.ndarray, tol: float = DEFAULT.imag_trace) -> tuple[float, float, float, float]:
    """``Tr m^k`` for k = 1..4; imaginary residues above ``tol`` are an error."""
    m2 = m @ m
    traces = (np.trace(m), np.trace(m2), np.trace(m2 @ m), np.trace(m2 @ m2))
    worst = max(abs(t.imag) for t in traces)
    if worst > tol:
        raise InternalConsistencyError(f"imaginary trace residue {worst:.3e}; input not Hermitian")
    return tuple(float(t.real) for t in traces)


def pt_moments(gamma) -> PTMomentVector:
    """Moments of a partial transpose (or any unit-trace Hermitian 4x4)."""
    return PTMomentVector(*trace_powers(_as_array(gamma)))


def werner_moments(w: float) -> PTMomentVector:
    if not 0.0 <= w <= 1.0:
        raise DomainError(f"Werner weight must lie in [0, 1], got {w!r}")
    w2 = w * w
    return PTMomentVector(
        1.0,
        (1.0 + 3.0 * w2) / 4.0,
        (-6.0 * w2 * w + 9.0 * w2 + 1.0) / 16.0,
        (21.0 * w2 * w2 - 24.0 * w2 * w + 18.0 * w2 + 1.0) / 64.0,
    )


def bell_diagonal_moments(t) -> PTMomentVector:
    from .qstate import BellDiagonalParams

    if not isinstance(t, BellDiagonalParams):
        t = BellDiagonalParams(*t)
    t1, t2, t3 = t.t1, t.t2, t.t3
    sq = t1 * t1 + t2 * t2 + t3 * t3
    prod = t1 * t2 * t3
    quart = t1 ** 4 + t2 ** 4 + t3 ** 4
    cross = t1 * t1 * t2 * t2 + t1 * t1 * t3 * t3 + t2 * t2 * t3 * t3
    return PTMomentVector(
        1.0,
        (1.0 + sq) / 4.0,
        (1.0 + 6.0 * prod + 3.0 * sq) / 16.0,
        (1.0 + 24.0 * prod + 6.0 * sq + quart + 6.0 * cross) / 64.0,
    )


def _newton(p1, p2, p3, p4):
    e1 = p1
    e2 = (e1 * p1 - p2) / 2.0
    e3 = (e2 * p1 - e1 * p2 + p3) / 3.0
    e4 = (e3 * p1 - e2 * p2 + e1 * p3 - p4) / 4.0
    return e1, e2, e3, e4


def elementary_symmetric(p: PTMomentVector) -> SymmetricFunctions:
    """Newton's identities ``k e_k = sum_i (-1)^(i-1) e_(k-i) p_i``."""
    return SymmetricFunctions(*_newton(*p.as_tuple()))


def det_from_moments(p: PTMomentVector) -> float:
    """``det(rho^Gamma) = (3 p2^2 - 6 p2 + 8 p3 - 6 p4 + 1) / 24``."""
    return (3.0 * p.p2 * p.p2 - 6.0 * p.p2 + 8.0 * p.p3 - 6.0 * p.p4 + 1.0) / 24.0


def _partitions(items: list[int]):
    """All set partitions of ``items`` (15 for four roots)."""
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _partitions(rest):
        yield [[first]] + part
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]


def _refine(values: list[complex], mults: list[int], sums: Sequence[float], steps: int = 4) -> list[complex]:
    # Newton on sum_j m_j c_j^k = p_k, k = 1..len(values); the Jacobian is a
    # scaled Vandermonde matrix, regular while the cluster values differ
    c = np.array(values, dtype=complex)
    m = np.array(mults, dtype=float)
    ks = np.arange(1, len(c) + 1)
    target = np.asarray(sums[:len(c)], dtype=float)
    for _ in range(steps):
        resid = (m * c[None, :] ** ks[:, None]).sum(axis=1) - target
        jac = ks[:, None] * m[None, :] * c[None, :] ** (ks[:, None] - 1)
        try:
            step = np.linalg.solve(jac, resid)
        except np.linalg.LinAlgError:
            break
        if not np.all(np.isfinite(step)):
            break
        c = c - step
    return list(c)


def _merge_blocks(roots: list[complex], blocks: list[list[int]], sums: Sequence[float]) -> list[complex]:
    """Give each block one common value, fitted to the power sums (the
    members of a repeated root are individually inaccurate)."""
    means = [sum(roots[k] for k in g) / len(g) for g in blocks]
    values = _refine(means, [len(g) for g in blocks], sums)
    out = list(roots)
    for g, v in zip(blocks, values):
        for k in g:
            out[k] = v
    return out


def _power_sum_misfit(roots: list[complex], targets: Sequence[float]) -> float:
    return max(abs(sum(r ** k for r in roots) - t) for k, t in enumerate(targets, start=1))


_BLOCK_SPREAD = 1e-3


def _real_roots_from_power_sums(sums: Sequence[float], imag_tol: float) -> tuple[float, ...]:
    e1, e2, e3, e4 = _newton(*sums)
    raw = solve_quartic_monic(-e1, e2, -e3, e4)
    scale = max(1.0, max(abs(r) for r in raw))
    best = raw
    best_score = max(max(abs(r.imag) for r in raw), _power_sum_misfit(raw, sums))
    # a repeated root comes back as a cluster of size ~ eps^(1/k); try every
    # grouping of nearby roots into a repeated value
    for blocks in _partitions(list(range(len(raw)))):
        if len(blocks) == len(raw):
            continue
        if any(abs(raw[i] - raw[j]) > _BLOCK_SPREAD * scale for g in blocks for i in g for j in g):
            continue
        cand = _merge_blocks(raw, blocks, sums)
        score = max(max(abs(r.imag) for r in cand), _power_sum_misfit(cand, sums))
        if score < best_score:
            best, best_score = cand, score
    worst_imag = max(abs(r.imag) for r in best)
    if worst_imag > imag_tol * scale:
        raise InconsistentMomentsError(
            f"moments inconsistent with any two-qubit state (imaginary root part {worst_imag:.3e})"
        )
    return tuple(sorted((r.real for r in best), reverse=True))


def eigvalsh4(matrix) -> tuple[float, float, float, float]:
    """Eigenvalues of a 4x4 Hermitian matrix, descending (LAPACK; the
    trace-power route loses accuracy at clustered eigenvalues)."""
    m = _as_array(matrix)
    if m.shape != (4, 4):
        raise ValidationError(f"expected a 4x4 matrix, got shape {m.shape}")
    return tuple(float(v) for v in np.linalg.eigvalsh(m)[::-1])


def reconstruct_spectrum(p: PTMomentVector, validate: bool = True) -> Spectrum:
    """Spectrum of rho^Gamma from its four moments (roots of the quartic
    ``x^4 - e1 x^3 + e2 x^2 - e3 x + e4``)."""
    spec = Spectrum(*_real_roots_from_power_sums(p.as_tuple(), DEFAULT.imag_root))
    if validate:
        try:
            spec.validate()
        except ValidationError as exc:
            raise InconsistentMomentsError(f"moments inconsistent with any two-qubit state: {exc}") from None
    return spec


def negativity(spec: Spectrum) -> float:
    """``N = max(0, -2 lambda_min)``."""
    return max(0.0, -2.0 * min(spec))


def _nc_lower(c: float) -> float:
    return math.sqrt((1.0 - c) ** 2 + c * c) - (1.0 - c)


def concurrence_interval(n: float, tol: float = 1e-12) -> tuple[float, float]:
    """Concurrences compatible with negativity ``n`` for two qubits.

    From ``sqrt((1-C)^2 + C^2) - (1-C) <= N <= C``: the lower end is ``n``
    and the upper end solves the left inequality with equality (bisection;
    the left side is increasing in C on [0, 1]).
    """
    if not 0.0 <= n <= 1.0:
        raise DomainError(f"negativity must lie in [0, 1], got {n!r}")
    lo, hi = 0.0, 1.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if _nc_lower(mid) < n:
            lo = mid
        else:
            hi = mid
    upper = hi if n > 0.0 else 0.0
    return n, min(1.0, upper)
