"""Closed-form cubic and quartic root finding.

The cubic solver follows the case split of the Cardano/trigonometric
theorem for ``t**3 + p*t + q``: the sign of ``p`` and of

    Delta_c = (q/2)**2 + (p/3)**3

decides between one real root, a simple-plus-double pair, three distinct
real roots (cosine form), or a triple root.  General monic cubics are
shifted to depressed form; the quartic solver is Ferrari's method with the
resolvent cubic handled by :func:`solve_cubic`.  Both solvers first rescale
x by a power of two so that the roots are of order one, and the quartic
falls back to companion matrix eigenvalues when those fit better.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .config import DEFAULT
from .errors import DomainError

ONE_REAL = "one-real"
SIMPLE_DOUBLE = "simple-plus-double"
THREE_DISTINCT = "three-distinct"
TRIPLE = "triple"



@dataclass(frozen=True)
class DepressedCubic:
    """Coefficients of ``t**3 + p*t + q``."""

    p: float
    q: float

    def __post_init__(self):
        if not (math.isfinite(self.p) and math.isfinite(self.q)):
            raise DomainError(f"non-finite cubic coefficients p={self.p!r}, q={self.q!r}")

    def __call__(self, t: float) -> float:
        return (t * t + self.p) * t + self.q


@dataclass(frozen=True)
class CubicRoots:
    """Real roots in descending order plus the case tag.

    ``delta`` is ``(q/2)**2 + (p/3)**3`` of the depressed form.  For the
    one-real case ``complex_pair`` holds the two nonreal roots; for the
    simple-plus-double case ``double_root`` names the repeated one.
    """

    case: str
    roots: tuple[float, ...]
    delta: float
    complex_pair: Optional[tuple[complex, complex]] = None
    double_root: Optional[float] = None

    @property
    def all_real(self) -> bool:
        return self.case != ONE_REAL

    def as_complex(self) -> list[complex]:
        """All three roots with multiplicity."""
        if self.case == ONE_REAL:
            return [complex(self.roots[0]), *self.complex_pair]
        if self.case == TRIPLE:
            return [complex(self.roots[0])] * 3
        if self.case == SIMPLE_DOUBLE:
            return [complex(r) for r in self.roots] + [complex(self.double_root)]
        return [complex(r) for r in self.roots]

    def real_parts(self) -> tuple[float, float, float]:
        """Three reals in descending order; a nonreal pair contributes its
        real part twice.  Used where a marginally complex pair must still be
        compared against bounds."""
        vals = sorted((z.real for z in self.as_complex()), reverse=True)
        return vals[0], vals[1], vals[2]


def cubic_delta(p: float, q: float) -> float:
    return (q / 2.0) ** 2 + (p / 3.0) ** 3


def delta_scale(p: float, q: float) -> float:
    """Natural magnitude of Delta_c: both terms are degree 6 in root size."""
    return max(abs(p / 3.0) ** 3, (q / 2.0) ** 2)


def _cbrt(x: float) -> float:
    return math.copysign(abs(x) ** (1.0 / 3.0), x)


def _one_real(p: float, q: float, delta: float) -> tuple[float, tuple[complex, complex]]:
    # u_- + u_+ with u_+ * u_- = -p/3; take the larger-magnitude branch for u
    a = -q / 2.0
    sq = math.sqrt(max(delta, 0.0))
    u = _cbrt(a + math.copysign(sq, a) if a != 0.0 else sq)
    v = -p / (3.0 * u) if u != 0.0 else _cbrt(a - sq)
    r = u + v
    half_im = math.sqrt(3.0) / 2.0 * (u - v)
    pair = (complex(-r / 2.0, half_im), complex(-r / 2.0, -half_im))
    return r, pair


def _make(case, roots, delta, pair=None, double=None) -> CubicRoots:
    return CubicRoots(case, tuple(roots), delta, pair, double)


def solve_depressed_cubic(c: DepressedCubic, band: float = DEFAULT.cubic_band) -> CubicRoots:
    """Real roots of ``t**3 + p*t + q`` by the Cardano case split.

    Near ``Delta_c == 0`` (``|Delta_c| <= band * scale``) the simple and
    double roots come from ``3q/p`` and ``-3q/(2p)`` so that boundary inputs
    land exactly on the double-root formulas.
    """
    p, q = c.p, c.q
    delta = cubic_delta(p, q)
    scale = delta_scale(p, q)
    if scale == 0.0:
        return _make(TRIPLE, (0.0,), 0.0)
    if p < 0.0 and abs(delta) <= band * scale:
        simple = 3.0 * q / p
        double = -1.5 * q / p
        return _make(SIMPLE_DOUBLE, sorted((simple, double), reverse=True), delta, double=double)
    if p < 0.0 and delta < 0.0:
        m = math.sqrt(-p / 3.0)
        arg = (-q / 2.0) / (m * m * m)
        theta = math.acos(min(1.0, max(-1.0, arg)))
        x0 = 2.0 * m * math.cos(theta / 3.0)
        x1 = 2.0 * m * math.cos((theta + 2.0 * math.pi) / 3.0)
        x2 = 2.0 * m * math.cos((theta + 4.0 * math.pi) / 3.0)
        # r_+ = x0, r_0 = x2, r_- = x1
        return _make(THREE_DISTINCT, (x0, x2, x1), delta)
    if p == 0.0:
        r = _cbrt(-q)
        pair = (complex(-r / 2.0, math.sqrt(3.0) / 2.0 * r), complex(-r / 2.0, -math.sqrt(3.0) / 2.0 * r))
        return _make(ONE_REAL, (r,), delta, pair)
    r, pair = _one_real(p, q, delta)
    return _make(ONE_REAL, (r,), delta, pair)


def _root_scale(*coeffs) -> float:
    """Exponent e such that 2**e is near the root magnitude of a monic polynomial whose
    coefficients (highest first after the leading 1) are ``coeffs``."""
    size = max((abs(c) ** (1.0 / k) for k, c in enumerate(coeffs, start=1) if c != 0.0), default=0.0)
    if size == 0.0 or not math.isfinite(size):
        return 0
    return math.frexp(size)[1]


def _cubic_value(a2, a1, a0, x):
    return ((x + a2) * x + a1) * x + a0


def _cubic_deriv(a2, a1, x):
    return (3.0 * x + 2.0 * a2) * x + a1


def cubic_residual_scale(a2: float, a1: float, a0: float) -> float:
    return max(1.0, abs(a2) ** 3, abs(a1) ** 1.5, abs(a0))


def _polish(a2, a1, a0, x, others):
    f = _cubic_value(a2, a1, a0, x)
    d = _cubic_deriv(a2, a1, x)
    if d == 0.0 or f == 0.0:
        return x
    step = f / d
    gap = min((abs(x - o) for o in others), default=math.inf)
    if abs(step) >= 0.5 * gap:
        return x
    y = x - step
    return y if abs(_cubic_value(a2, a1, a0, y)) < abs(f) else x


def solve_cubic(a2: float, a1: float, a0: float, band: float = DEFAULT.cubic_band) -> CubicRoots:
    """Roots of ``x**3 + a2*x**2 + a1*x + a0`` via the shift ``x = t - a2/3``.

    Simple real roots get one guarded Newton step on the unshifted cubic.
    """
    e = _root_scale(a2, a1, a0)
    if e != 0:
        # solve for x / 2**e, which has roots of order one
        r = solve_cubic(math.ldexp(a2, -e), math.ldexp(a1, -2 * e), math.ldexp(a0, -3 * e), band)
        up = lambda x: math.ldexp(x, e)
        pair = None if r.complex_pair is None else tuple(complex(up(z.real), up(z.imag)) for z in r.complex_pair)
        double = None if r.double_root is None else up(r.double_root)
        return _make(r.case, tuple(up(x) for x in r.roots), math.ldexp(r.delta, 6 * e), pair, double)
    shift = a2 / 3.0
    p = a1 - a2 * shift
    q = (2.0 * a2 * a2 * a2) / 27.0 - a2 * a1 / 3.0 + a0
    dep = solve_depressed_cubic(DepressedCubic(p, q), band)
    if dep.case == TRIPLE:
        return _make(TRIPLE, (-shift,), dep.delta)
    if dep.case == SIMPLE_DOUBLE:
        double = dep.double_root - shift
        simple = _polish(a2, a1, a0, dep.roots[0] + dep.roots[1] - dep.double_root - shift, (double,))
        return _make(SIMPLE_DOUBLE, sorted((simple, double), reverse=True), dep.delta, double=double)
    if dep.case == ONE_REAL:
        r = dep.roots[0] - shift
        r = _polish(a2, a1, a0, r, ())
        pair = tuple(z - shift for z in dep.complex_pair)
        return _make(ONE_REAL, (r,), dep.delta, pair)
    xs = [t - shift for t in dep.roots]
    polished = [_polish(a2, a1, a0, x, [o for j, o in enumerate(xs) if j != i]) for i, x in enumerate(xs)]
    return _make(THREE_DISTINCT, sorted(polished, reverse=True), dep.delta)


@dataclass(frozen=True)
class Deflation:
    """Quotient ``x**2 + b*x + c`` of a cubic by ``x - gamma`` and its roots."""

    b: float
    c: float
    roots: tuple[complex, complex]
    is_complex: bool


def deflate_by_root(a2: float, a1: float, a0: float, gamma: float, tol: float = 1e-8) -> Deflation:
    """Divide out a known real root.

    The quotient is ``x**2 + (a2 + gamma)*x - a0/gamma``, which needs
    ``a0 != 0`` (so that ``gamma != 0``).
    """
    if a0 == 0.0:
        raise DomainError("deflation needs a0 != 0")
    res = _cubic_value(a2, a1, a0, gamma)
    if abs(res) > tol * cubic_residual_scale(a2, a1, a0):
        raise DomainError(f"gamma={gamma!r} is not a root (residual {res:.3e})")
    b = a2 + gamma
    c = -a0 / gamma
    inner = (a2 * gamma + gamma * gamma) ** 2 + 4.0 * a0 * gamma
    head = -(a2 + gamma) * gamma
    if inner >= 0.0:
        sq = math.sqrt(inner)
        r1 = (head + sq) / (2.0 * gamma)
        r2 = (head - sq) / (2.0 * gamma)
        lo, hi = sorted((r1, r2))
        return Deflation(b, c, (complex(hi), complex(lo)), False)
    sq = math.sqrt(-inner)
    re = head / (2.0 * gamma)
    im = abs(sq / (2.0 * gamma))
    return Deflation(b, c, (complex(re, im), complex(re, -im)), True)


def _quadratic(b: complex, c: complex) -> tuple[complex, complex]:
    """Roots of ``y**2 + b*y + c`` without cancellation."""
    disc = cmath.sqrt(b * b - 4.0 * c)
    if (b.conjugate() * disc).real >= 0:
        big = -(b + disc) / 2.0
    else:
        big = -(b - disc) / 2.0
    if big == 0:
        return 0j, 0j
    return big, c / big


def _quartic_value(c3, c2, c1, c0, x):
    return (((x + c3) * x + c2) * x + c1) * x + c0


def _quartic_deriv(c3, c2, c1, x):
    return ((4.0 * x + 3.0 * c3) * x + 2.0 * c2) * x + c1


def quartic_residual_scale(c3, c2, c1, c0) -> float:
    return max(1.0, abs(c3) ** 4, abs(c2) ** 2, abs(c1) ** (4.0 / 3.0), abs(c0))


def solve_quartic_monic(c3: float, c2: float, c1: float, c0: float, newton_steps: int = 2) -> list[complex]:
    """Four complex roots of ``x**4 + c3*x**3 + c2*x**2 + c1*x + c0`` (Ferrari)."""
    for v in (c3, c2, c1, c0):
        if not math.isfinite(v):
            raise DomainError("non-finite quartic coefficient")
    e = _root_scale(c3, c2, c1, c0)
    if e != 0:
        roots = solve_quartic_monic(math.ldexp(c3, -e), math.ldexp(c2, -2 * e), math.ldexp(c1, -3 * e),
                                    math.ldexp(c0, -4 * e), newton_steps)
        return [complex(math.ldexp(z.real, e), math.ldexp(z.imag, e)) for z in roots]
    shift = c3 / 4.0
    c3sq = c3 * c3
    a = c2 - 3.0 * c3sq / 8.0
    b = c1 - c3 * c2 / 2.0 + c3sq * c3 / 8.0
    c = c0 - c3 * c1 / 4.0 + c3sq * c2 / 16.0 - 3.0 * c3sq * c3sq / 256.0

    big = max(abs(a), abs(b) ** (2.0 / 3.0), abs(c) ** 0.5)
    if abs(b) <= 1e-14 * max(big, 1e-300) ** 1.5 or b == 0.0:
        # biquadratic in y**2
        z1, z2 = _quadratic(complex(a), complex(c))
        w1, w2 = cmath.sqrt(z1), cmath.sqrt(z2)
        ys = [w1, -w1, w2, -w2]
    else:
        # resolvent in u = alpha^2 = 2m - a; its product of roots is b^2 > 0,
        # so a positive root exists, and solving for u directly keeps its
        # relative accuracy when it is small
        res = solve_cubic(2.0 * a, a * a - 4.0 * c, -b * b, band=0.0)
        u = max(res.roots[0], 0.0)
        m = (u + a) / 2.0
        alpha = complex(math.sqrt(u))
        if alpha == 0:
            z1, z2 = _quadratic(complex(a), complex(c))
            w1, w2 = cmath.sqrt(z1), cmath.sqrt(z2)
            ys = [w1, -w1, w2, -w2]
        else:
            k = b / (2.0 * alpha)
            ys = [*_quadratic(-alpha, m + k), *_quadratic(alpha, m - k)]

    roots = []
    for y in ys:
        x = y - shift
        for _ in range(newton_steps):
            f = _quartic_value(c3, c2, c1, c0, x)
            d = _quartic_deriv(c3, c2, c1, x)
            if d == 0 or f == 0:
                break
            nx = x - f / d
            if abs(_quartic_value(c3, c2, c1, c0, nx)) < abs(f):
                x = nx
            else:
                break
        roots.append(complex(x))
    # Ferrari is not backward stable near multiple roots; fall back to the
    # companion matrix eigenvalues when they fit the polynomial better
    worst = max(abs(_quartic_value(c3, c2, c1, c0, z)) for z in roots)
    if worst > 1e-13 * quartic_residual_scale(c3, c2, c1, c0):
        alt = [complex(z) for z in np.roots([1.0, c3, c2, c1, c0])]
        if max(abs(_quartic_value(c3, c2, c1, c0, z)) for z in alt) < worst:
            roots = alt
    roots.sort(key=lambda z: (-z.real, -z.imag))
    return roots


def cubic_discriminant(a2, a1, a0):
    """Standard discriminant of ``x**3 + a2*x**2 + a1*x + a0`` (works on arrays).

    Equals ``-108 * Delta_c``; nonnegative iff all roots are real.
    """
    return 18.0 * a2 * a1 * a0 - 4.0 * a2 ** 3 * a0 + a2 * a2 * a1 * a1 - 4.0 * a1 ** 3 - 27.0 * a0 * a0


def cubic_real_parts(a2, a1, a0):
    """Vectorized companion of :func:`solve_cubic` for arrays of monic cubics.

    Returns ``(hi, mid, lo)``: the three roots in descending order when all
    are real, otherwise the real root and twice the real part of the nonreal
    pair, sorted.  Arrays broadcast.
    """
    a2, a1, a0 = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (a2, a1, a0)))
    shift = a2 / 3.0
    p = a1 - a2 * shift
    q = 2.0 * a2 ** 3 / 27.0 - a2 * a1 / 3.0 + a0
    delta = (q / 2.0) ** 2 + (p / 3.0) ** 3
    trig = (p < 0.0) & (delta <= 0.0)

    m = np.sqrt(np.where(trig, -p / 3.0, 1.0))
    arg = np.clip(np.where(trig, (-q / 2.0) / m ** 3, 0.0), -1.0, 1.0)
    theta = np.arccos(arg)
    t0 = 2.0 * m * np.cos(theta / 3.0)
    t1 = 2.0 * m * np.cos((theta + 2.0 * np.pi) / 3.0)
    t2 = 2.0 * m * np.cos((theta + 4.0 * np.pi) / 3.0)

    sq = np.sqrt(np.where(trig, 0.0, np.maximum(delta, 0.0)))
    half = -q / 2.0
    u = np.cbrt(half + np.where(half >= 0.0, sq, -sq))
    safe_u = np.where(u == 0.0, 1.0, u)
    v = np.where(u == 0.0, np.cbrt(half - sq), -p / (3.0 * safe_u))
    r = u + v
    pair = -r / 2.0

    hi = np.where(trig, t0, np.maximum(r, pair)) - shift
    lo = np.where(trig, t1, np.minimum(r, pair)) - shift
    mid = np.where(trig, t2, pair) - shift
    return hi, mid, lo
