"""Two-qubit density matrices and their partial transpose.

Basis order is |00>, |01>, |10>, |11>; the transpose acts on the second
qubit (B).  Transposing A instead gives the same spectrum up to a unitary,
so the moments do not depend on the choice.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .config import DEFAULT
from .errors import DomainError, ValidationError
from .moments import eigvalsh4

SIGMA = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)

SINGLET = np.array([0, 1, -1, 0], dtype=complex) / math.sqrt(2.0)


def _check_shape(m: np.ndarray) -> None:
    if m.shape != (4, 4):
        raise ValidationError(f"matrix must be 4x4, got shape {m.shape}")


def _check_hermitian_trace(m: np.ndarray, tol=DEFAULT) -> None:
    _check_shape(m)
    if not np.all(np.isfinite(m)):
        raise ValidationError("matrix has non-finite entries")
    dev = float(np.max(np.abs(m - m.conj().T)))
    if dev > tol.hermitian:
        raise ValidationError(f"not Hermitian (max |m - m^dagger| = {dev:.3e})")
    tr = np.trace(m)
    if abs(tr - 1.0) > tol.trace:
        raise ValidationError(f"trace is {tr.real:.12g}, not 1")


class DensityMatrix:
    """Validated two-qubit state: Hermitian, unit trace, PSD (within bands)."""

    __slots__ = ("matrix",)

    def __init__(self, matrix, tol=DEFAULT):
        m = np.array(matrix, dtype=complex)
        _check_hermitian_trace(m, tol)
        lam_min = min(eigvalsh4(m))
        if lam_min < -tol.psd:
            raise ValidationError(f"not positive semidefinite (min eigenvalue {lam_min:.3e})")
        m.setflags(write=False)
        self.matrix = m

    def __repr__(self):
        return f"DensityMatrix({self.matrix.tolist()!r})"

    def to_json(self) -> dict:
        return {"matrix": [[[float(z.real), float(z.imag)] for z in row] for row in self.matrix]}

    @classmethod
    def from_json(cls, obj) -> "DensityMatrix":
        return cls(parse_matrix_json(obj))

    @classmethod
    def load(cls, path) -> "DensityMatrix":
        with open(Path(path)) as fh:
            return cls.from_json(json.load(fh))


class PartialTranspose:
    """rho^Gamma: Hermitian with unit trace, possibly one negative eigenvalue."""

    __slots__ = ("matrix",)

    def __init__(self, matrix, tol=DEFAULT):
        m = np.array(matrix, dtype=complex)
        _check_hermitian_trace(m, tol)
        m.setflags(write=False)
        self.matrix = m

    def eigenvalues(self) -> tuple[float, float, float, float]:
        return eigvalsh4(self.matrix)

    def check_spectrum(self, tol: float = DEFAULT.psd) -> None:
        """Eigenvalues in [-1/2, 1] with at most one below zero."""
        lam = self.eigenvalues()
        if lam[0] > 1.0 + tol or lam[3] < -0.5 - tol:
            raise ValidationError(f"eigenvalue outside [-1/2, 1]: {lam}")
        if lam[2] < -tol:
            raise ValidationError(f"more than one negative eigenvalue: {lam}")


def parse_matrix_json(obj) -> np.ndarray:
    """Read ``{"matrix": [[[re, im], ...] x4] x4}``."""
    if not isinstance(obj, dict) or "matrix" not in obj:
        raise ValidationError('state JSON must be an object with field "matrix"')
    rows = obj["matrix"]
    if not isinstance(rows, list) or len(rows) != 4:
        raise ValidationError("field matrix: expected 4 rows")
    out = np.zeros((4, 4), dtype=complex)
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != 4:
            raise ValidationError(f"field matrix[{i}]: expected 4 columns")
        for j, entry in enumerate(row):
            if (not isinstance(entry, list) or len(entry) != 2
                    or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in entry)):
                raise ValidationError(f"field matrix[{i}][{j}]: expected [re, im] numbers")
            out[i, j] = complex(entry[0], entry[1])
    return out


def transpose_b(m: np.ndarray) -> np.ndarray:
    """Swap the B indices: ``out[(a,b),(a',b')] = m[(a,b'),(a',b)]``."""
    return np.asarray(m).reshape(2, 2, 2, 2).transpose(0, 3, 2, 1).reshape(4, 4)


def partial_transpose(rho) -> PartialTranspose:
    if isinstance(rho, (DensityMatrix, PartialTranspose)):
        m = rho.matrix
    else:
        m = np.array(rho, dtype=complex)
        _check_hermitian_trace(m)
    return PartialTranspose(transpose_b(m))


def make_werner(w: float) -> DensityMatrix:
    """``w |psi-><psi-| + (1 - w) I/4``."""
    if not 0.0 <= w <= 1.0:
        raise DomainError(f"Werner weight must lie in [0, 1], got {w!r}")
    m = w * np.outer(SINGLET, SINGLET.conj()) + (1.0 - w) * np.eye(4) / 4.0
    return DensityMatrix(m)


@dataclass(frozen=True)
class BellDiagonalParams:
    t1: float
    t2: float
    t3: float

    def __post_init__(self):
        failed = [label for label, val in zip(self._labels(), self.constraint_values()) if val < -1e-12]
        if failed:
            raise DomainError("Bell-diagonal constraints violated: " + "; ".join(failed))

    @staticmethod
    def _labels():
        return ("1 - t1 - t2 - t3 >= 0", "1 - t1 + t2 + t3 >= 0",
                "1 + t1 - t2 + t3 >= 0", "1 + t1 + t2 - t3 >= 0")

    def constraint_values(self) -> tuple[float, float, float, float]:
        t1, t2, t3 = self.t1, self.t2, self.t3
        return (1 - t1 - t2 - t3, 1 - t1 + t2 + t3, 1 + t1 - t2 + t3, 1 + t1 + t2 - t3)

    def pt_eigenvalues(self) -> tuple[float, float, float, float]:
        t1, t2, t3 = self.t1, self.t2, self.t3
        return ((1 + t1 - t2 - t3) / 4, (1 - t1 + t2 - t3) / 4,
                (1 + t1 + t2 + t3) / 4, (1 - t1 - t2 + t3) / 4)


def make_bell_diagonal(t) -> DensityMatrix:
    """``(I + sum_i t_i sigma_i (x) sigma_i) / 4``."""
    if not isinstance(t, BellDiagonalParams):
        t = BellDiagonalParams(*t)
    m = np.eye(4, dtype=complex)
    for ti, s in zip((t.t1, t.t2, t.t3), SIGMA):
        m = m + ti * np.kron(s, s)
    return DensityMatrix(m / 4.0)


def is_bell_separable(t) -> bool:
    if not isinstance(t, BellDiagonalParams):
        t = BellDiagonalParams(*t)
    return abs(t.t1) + abs(t.t2) + abs(t.t3) <= 1.0 + 1e-12


_MAX_REDRAWS = 16


def _ginibre(seed: int, index: int, sub: int) -> np.ndarray:
    # counter-based stream: key = seed, counter words carry (sub, index)
    bitgen = np.random.Philox(key=seed & (2**64 - 1),
                              counter=[0, 0, sub, index & (2**64 - 1)])
    g = np.random.Generator(bitgen).standard_normal((2, 4, 4))
    return g[0] + 1j * g[1]


def sample_random_state(seed: int, index: int) -> DensityMatrix:
    """Hilbert-Schmidt random state ``G G^dagger / Tr(G G^dagger)``.

    The draw depends only on ``(seed, index)``, so grids of samples can be
    produced in any order or in parallel.
    """
    for sub in range(_MAX_REDRAWS):
        g = _ginibre(seed, index, sub)
        m = g @ g.conj().T
        tr = np.trace(m).real
        if tr >= 1e-12:
            m = m / tr
            m = 0.5 * (m + m.conj().T)
            return DensityMatrix(m)
    raise RuntimeError("degenerate Ginibre draws exhausted")  # pragma: no cover
