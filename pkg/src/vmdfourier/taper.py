"""Degree-5 boundary-matching tapers and compactly supported approximants.

On the right-hand interval ``[m, m + 1/m]`` the taper is the quintic

    h(x) = (x - (m + 1/m))**3 * p(x),   p(x) = c0 + c1 (x-m) + c2 (x-m)**2

with ``p(m) = -a0 m^3``, ``p'(m) = -3 a0 m^4 - a1 m^3`` and
``p''(m) = -12 a0 m^5 - 6 a1 m^4 - a2 m^3``.  Evaluation goes through the
equivalent quintic Hermite blend in the local coordinate
``t = m (x - m)``, which reproduces the six boundary values to rounding
even for ``m`` in the thousands; the factored form above is kept as
``eval_factored`` for cross-checks.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from numpy.polynomial import Polynomial as P

from .errors import CapabilityError, DomainError
from .funcmodel import FunctionDescriptor, check_finite

__all__ = [
    "SIGN_THRESHOLD",
    "TaperPolynomial",
    "Approximant",
    "build_taper",
    "build_approximant",
    "eval_approximant",
    "taper_table",
]

#: h''' keeps one sign on the taper interval only above this m (asymptotic claim)
SIGN_THRESHOLD = math.sqrt(72.0 / 19.0)

# quintic Hermite basis on [0, 1]: value, slope, curvature at 0; flat at 1
_H = (
    P([1, 0, 0, -10, 15, -6]),
    P([0, 1, 0, -6, 8, -3]),
    P([0, 0, 0.5, -1.5, 1.5, -0.5]),
)
_HD = [[h.deriv(d) for d in range(4)] for h in _H]


@dataclass(frozen=True)
class TaperPolynomial:
    """Quintic taper matching ``(a0, a1, a2)`` at ``+m`` (right) or ``-m`` (left).

    ``a0, a1, a2`` are the boundary data in the caller's frame.  A left
    taper is the mirror image ``h_left(x) = h_right(-x)`` of the right taper
    built from ``(a0, -a1, a2)``; ``p_coeffs`` always refer to that right frame.
    """

    m: float
    side: str
    a0: float
    a1: float
    a2: float
    p_coeffs: tuple

    @property
    def frame_data(self):
        s = 1.0 if self.side == "right" else -1.0
        return self.a0, s * self.a1, self.a2

    @property
    def interval(self):
        lo, hi = self.m, self.m + 1.0 / self.m
        return (lo, hi) if self.side == "right" else (-hi, -lo)

    def _blend(self, t, order):
        b0, b1, b2 = self.frame_data
        m = self.m
        w = (b0, b1 / m, b2 / m**2)
        out = w[0] * _HD[0][order](t) + w[1] * _HD[1][order](t) + w[2] * _HD[2][order](t)
        return out * m**order

    def eval_local(self, u, order: int = 0):
        """``order``-th derivative at offset ``u in [0, 1/m]`` from ``m``, right frame.

        Offsets are exact at both ends, so this is the form to use when
        checking boundary conditions.
        """
        t = np.asarray(u, dtype=float) * self.m
        return self._blend(t, order)

    def __call__(self, x, order: int = 0):
        x = np.asarray(x, dtype=float)
        if self.side == "right":
            return self._blend((x - self.m) * self.m, order)
        return (-1.0) ** order * self._blend((-x - self.m) * self.m, order)

    def eval_factored(self, x):
        """``(x-(m+1/m))**3 p(x)`` straight from the stored coefficients (right frame)."""
        x = np.asarray(x, dtype=float)
        c0, c1, c2 = self.p_coeffs
        u = x - self.m
        return (u - 1.0 / self.m) ** 3 * (c0 + c1 * u + c2 * u * u)

    def sup_bound(self) -> float:
        """``16|a0| + 7|a1| + |a2|``."""
        return 16 * abs(self.a0) + 7 * abs(self.a1) + abs(self.a2)

    def _local_poly(self, order):
        b0, b1, b2 = self.frame_data
        m = self.m
        return (b0 * _HD[0][order] + (b1 / m) * _HD[1][order] + (b2 / m**2) * _HD[2][order]) * m**order

    def sup_abs(self) -> float:
        """Exact ``max |h|`` over the interval from the critical points."""
        p = self._local_poly(0)
        cands = [0.0, 1.0] + [r.real for r in p.deriv().roots() if abs(r.imag) < 1e-12 and 0 < r.real < 1]
        return float(max(abs(p(c)) for c in cands))

    def third_derivative_sign_changes(self):
        """Local offsets ``u in (0, 1/m)`` where ``h'''`` changes sign."""
        q = self._local_poly(3)
        if np.all(q.coef == 0):
            return []
        roots = q.roots()
        out = []
        for r in roots:
            if abs(r.imag) > 1e-12 or not 0 < r.real < 1:
                continue
            # a double root of the quadratic touches zero without crossing
            if np.isclose(q.deriv()(r.real), 0.0, atol=1e-12 * max(1.0, np.abs(q.coef).max())):
                continue
            out.append(float(r.real) / self.m)
        return sorted(out)

    def abs_third_derivative_integral(self) -> float:
        """Exact ``integral |h'''|`` over the taper interval (piecewise polynomial)."""
        q = self._local_poly(3)
        knots = [0.0] + [u * self.m for u in self.third_derivative_sign_changes()] + [1.0]
        Q = q.integ()
        total = sum(abs(Q(b) - Q(a)) for a, b in zip(knots[:-1], knots[1:]))
        # d/dx = m d/dt, so integral over x picks up a 1/m
        return float(total) / self.m


def build_taper(m: float, a0: float, a1: float, a2: float, side: str = "right") -> TaperPolynomial:
    """Construct the quintic taper for boundary data ``(a0, a1, a2)``.

    Raises :class:`DomainError` for ``m <= sqrt(72/19)``, below which the
    single-sign property of ``h'''`` is not even claimed.
    """
    if side not in ("right", "left"):
        raise DomainError(f"side must be 'right' or 'left', got {side!r}")
    m = float(m)
    if not m > SIGN_THRESHOLD:
        raise DomainError(
            f"m={m!r} must exceed sqrt(72/19)={SIGN_THRESHOLD:.6f}, the threshold of the h''' sign guarantee"
        )
    b0, b1, b2 = float(a0), float(a1), float(a2)
    if side == "left":
        b1 = -b1
    p0 = -b0 * m**3
    p1 = -3 * b0 * m**4 - b1 * m**3
    p2 = -12 * b0 * m**5 - 6 * b1 * m**4 - b2 * m**3
    return TaperPolynomial(m, side, float(a0), float(a1), float(a2), (p0, p1, 0.5 * p2))


@dataclass(frozen=True)
class Approximant:
    """``f`` on ``[-m, m]``, quintic tapers on ``m <= |x| <= m + 1/m``, zero beyond."""

    base: FunctionDescriptor
    m: int
    right_taper: TaperPolynomial
    left_taper: TaperPolynomial
    D_const: float
    C3_const: Optional[float]

    @property
    def support(self) -> float:
        return self.m + 1.0 / self.m

    @property
    def knots(self):
        s = self.support
        return (-s, -float(self.m), float(self.m), s)

    def __call__(self, x, order: int = 0):
        return eval_approximant(self, x, order)


def build_approximant(f: FunctionDescriptor, m: int) -> Approximant:
    missing = []
    if f.deriv1 is None:
        missing.append("deriv1")
    if f.deriv2 is None:
        missing.append("deriv2")
    for i, label in enumerate(("|f|_inf", "|f'|_inf", "|f''|_inf")):
        if f.sup_norms[i] is None:
            missing.append(label)
    if missing:
        raise CapabilityError(f"{f.name}: build_approximant needs {', '.join(missing)}")
    if int(m) != m or m < 2:
        raise DomainError(f"m must be an integer >= 2, got {m!r}")
    m = int(m)
    pts = np.array([m, -m], dtype=float)
    vals = [check_finite(fn(pts), pts, f.name) for fn in (f.eval, f.deriv1, f.deriv2)]
    right = build_taper(m, vals[0][0], vals[1][0], vals[2][0], "right")
    left = build_taper(m, vals[0][1], vals[1][1], vals[2][1], "left")
    n0, n1, n2, n3 = f.sup_norms
    D = 16 * n0 + 7 * n1 + n2
    C3 = None if n3 is None else (2 + 2 * n3) / math.sqrt(2 * math.pi)
    return Approximant(f, m, right, left, float(D), C3)


def eval_approximant(fm: Approximant, x, order: int = 0):
    """Piecewise value (or derivative up to order 2 inside the tapers) of ``f_m``."""
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 0
    x = np.atleast_1d(x)
    out = np.zeros_like(x)
    m = float(fm.m)
    s = fm.support
    inner = np.abs(x) <= m
    if np.any(inner):
        fn = fm.base.derivative_evaluator(order)
        if fn is None:
            raise CapabilityError(f"{fm.base.name}: derivative of order {order} unavailable")
        out[inner] = fn(x[inner])
    r = (x > m) & (x < s)
    if np.any(r):
        out[r] = fm.right_taper(x[r], order)
    l_ = (x < -m) & (x > -s)
    if np.any(l_):
        out[l_] = fm.left_taper(x[l_], order)
    return out[0] if scalar else out


def taper_table(taper: TaperPolynomial, samples: int):
    """Rows ``(x, h, h', h'', h''')`` on ``samples`` equispaced points of the interval."""
    if samples < 2:
        raise DomainError("samples must be at least 2")
    u = np.linspace(0.0, 1.0 / taper.m, int(samples))
    if taper.side == "right":
        x = taper.m + u
        cols = [taper.eval_local(u, d) for d in range(4)]
    else:
        x = -(taper.m + u[::-1])
        cols = [(-1.0) ** d * taper.eval_local(u[::-1], d) for d in range(4)]
    return np.column_stack([x] + cols)
