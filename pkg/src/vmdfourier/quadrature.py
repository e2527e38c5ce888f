"""Fourier transforms of slowly decaying functions and their inversion.

``transform_conditional`` evaluates

    F(f)(k) = (2*pi)**-0.5 * lim_{r->inf} integral_{-r}^{r} f(y) exp(-i k y) dy

for functions whose tails are monotone beyond a core radius ``E``.  Each
tail of ``f(y) cos(ky)`` and ``f(y) sin(ky)`` is cut at the zeros of the
trigonometric factor into half periods of length ``pi/|k|``; the segment
integrals then form an alternating series with decreasing magnitudes.  The
series is summed with repeated averaging (Euler's transform), and the
remainder bound comes from the observed sign pattern of the differences.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np

from .errors import CapabilityError, CertificationError, DomainError, EvaluationError
from .funcmodel import DecayReport, FunctionDescriptor, OscillationReport, classify_decay
from .integrate import integrate, integrate_intervals
from .taper import Approximant

__all__ = [
    "TransformResult",
    "SegmentationPlan",
    "plan_segments",
    "plan_from_radius",
    "transform_conditional",
    "transform_absolute",
    "transform_truncated",
    "inverse_transform",
    "sweep",
    "INV_SQRT_2PI",
    "EPS0",
]

INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)
#: half-width of the excluded neighbourhood of k = 0 in the inverse transform
EPS0 = 1e-8

_FIRST_BLOCK = 64
_MAX_EULER_ORDER = 10


@dataclass(frozen=True)
class TransformResult:
    """One transform value with its error certificate.

    ``tail_bound`` bounds the truncation of the infinite tails;
    ``quad_error`` estimates discretisation and rounding error of the
    finite integrals.  ``error_bound`` is their sum.
    """

    k: float
    value: complex
    tail_bound: float
    segments_used: int
    core_bound_Nk: Optional[float] = None
    quad_error: float = 0.0

    @property
    def error_bound(self) -> float:
        return self.tail_bound + self.quad_error


@dataclass(frozen=True)
class SegmentationPlan:
    core_radius_E: float
    K: float
    half_period: float
    n_k: int
    m_k: int
    max_segments: int

    @property
    def cos_start(self) -> float:
        """First zero of ``cos(|k| y)`` at or beyond ``E``."""
        return (0.5 + self.n_k) * self.half_period

    @property
    def sin_start(self) -> float:
        """First zero of ``sin(|k| y)`` at or beyond ``E``."""
        return self.m_k * self.half_period


def _least_index(offset, h, E):
    # least n >= 0 with (offset + n) * h >= E
    n = max(0, math.ceil(E / h - offset))
    while n > 0 and (offset + n - 1) * h >= E:
        n -= 1
    while (offset + n) * h < E:
        n += 1
    return n


def plan_from_radius(E: float, K: float, k: float, max_segments: int = 10**6) -> SegmentationPlan:
    if k == 0:
        raise DomainError("the conditional transform is defined for k != 0")
    h = math.pi / abs(k)
    return SegmentationPlan(float(E), float(K), h, _least_index(0.5, h, E), _least_index(0.0, h, E),
                            int(max_segments))


def plan_segments(osc: OscillationReport, k: float, max_segments: int = 10**6) -> SegmentationPlan:
    """Half-period grid for frequency ``k``.

    ``n_k`` is the least ``n >= 0`` with ``pi/(2|k|) + n pi/|k| >= E`` and
    ``m_k`` the least with ``n pi/|k| >= E``.
    """
    return plan_from_radius(osc.core_radius_E, osc.core_max_K, k, max_segments)


def _alternating_sum(v, err):
    """Sum ``sum_j (-1)**j v[j]`` continued to infinity.

    ``v`` holds same-signed segment integrals with non-increasing
    magnitudes.  Returns ``(estimate, truncation_bound, noise_limited)``.
    """
    M = v.size
    signs = np.where(np.arange(M) % 2 == 0, 1.0, -1.0)
    floor = 4.0 * err
    sig = np.abs(v) > floor
    if np.any(sig):
        vs = v[sig]
        if not (np.all(vs > 0) or np.all(vs < 0)):
            j = int(np.flatnonzero(sig)[np.argmax(np.sign(vs) != np.sign(vs[0]))])
            raise CertificationError(f"tail segment {j} changes sign; tail is not monotone")
        idx = np.flatnonzero(sig)
        a = np.abs(v)
        for j in idx:
            if j + 3 < M and sig[j + 3] and a[j] <= a[j + 1] <= a[j + 2] <= a[j + 3]:
                raise CertificationError(
                    f"segment magnitudes non-decreasing over segments {j}..{j + 3}; "
                    "monotone-tail assumption violated"
                )

    if not sig[-1]:
        # tail already below the quadrature noise; monotone decay bounds the rest
        return math.fsum(signs * v), float(abs(v[-1]) + floor[-1]), True

    sigma = 1.0 if v[-1] > 0 else -1.0
    z = sigma * v
    w0 = M // 2
    window = z[w0:]
    delta = float(np.max(err[w0:]))
    diffs = [window]
    for _ in range(_MAX_EULER_ORDER + 1):
        diffs.append(diffs[-1][:-1] - diffs[-1][1:])

    best = None
    for p in range(_MAX_EULER_ORDER + 1):
        N = M - p - 2
        if N < w0:
            break
        ok = all(np.all(diffs[r] >= -(2.0**r) * delta) for r in range(1, p + 2))
        if not ok:
            break
        i = N - w0
        D = [diffs[r][i] for r in range(p + 1)]
        trunc = abs(D[p]) / 2.0 ** (p + 1)
        noise = (2.0 ** (p + 1) + p + 1) * delta
        rem = math.fsum(D[r] / 2.0 ** (r + 1) for r in range(p + 1))
        est = math.fsum(signs[:N] * v[:N]) + (1.0 if N % 2 == 0 else -1.0) * sigma * rem
        if best is None or trunc + noise < best[1]:
            best = (est, trunc + noise, trunc <= noise)
    if best is None:
        raise CertificationError("tail differences are not monotone; cannot certify the remainder")
    return best


def _tail(fy, start, h, target, max_segments):
    """Alternating tail ``sum_j (-1)**j h int_0^1 fy(start + h (j + t)) sin(pi t) dt``.

    Returns ``(estimate, bound, quad_error, segments, exhausted)``; ``exhausted``
    is set when more segments cannot lower the bound.
    """
    vals = np.empty(0)
    errs = np.empty(0)
    M = min(_FIRST_BLOCK, max_segments)

    def integrand(u):
        frac = u - np.floor(u)
        y = start + h * u
        out = fy(y) * np.sin(np.pi * frac)
        if not np.all(np.isfinite(out)):
            bad = np.asarray(y)[~np.isfinite(out)][0]
            raise EvaluationError(f"f is not finite at y={float(bad)!r}", where=float(bad))
        return out * h

    while True:
        j0 = vals.size
        js = np.arange(j0, M, dtype=float)
        v, e, _ = integrate_intervals(integrand, js, js + 1.0, rtol=1e-13, max_rounds=12)
        vals = np.concatenate([vals, v])
        errs = np.concatenate([errs, e])
        est, bound, noise_limited = _alternating_sum(vals, errs)
        if bound <= target or noise_limited or M >= max_segments:
            return est, bound, float(np.sum(errs)), M, noise_limited or M >= max_segments
        M = min(2 * M, max_segments)


def _core_edges(R, h, knots):
    # widths capped by half a period and, away from 0, growing geometrically
    pos = [0.0]
    while pos[-1] < R:
        x = pos[-1]
        pos.append(min(R, x + min(0.5 * h, max(1.0, 0.5 * x))))
    pos = np.array(pos)
    inner = [float(y) for y in knots if -R < y < R]
    return np.unique(np.concatenate([-pos[::-1], pos, inner]))


@lru_cache(maxsize=64)
def _default_decay(f: FunctionDescriptor) -> DecayReport:
    return classify_decay(f, 1e4, 400)


def core_bound(K: float, E: float, D: float, k: float) -> float:
    """A-priori bound ``4KE + 4D pi/(E|k|) + 4D(2/(E|k|) + 1/E)`` on the unnormalised transform."""
    ak = abs(k)
    return 4 * K * E + 4 * D * math.pi / (E * ak) + 4 * D * (2 / (E * ak) + 1 / E)


def transform_conditional(
    f: FunctionDescriptor,
    osc: OscillationReport,
    k: float,
    rel_tol: float = 1e-8,
    max_segments: int = 10**6,
    *,
    abs_tol: float = 0.0,
    decay: Optional[DecayReport] = None,
) -> TransformResult:
    """Conditionally convergent transform of a function with monotone tails.

    The core ``[-A, A]`` (cosine part) and ``[-B, B]`` (sine part), where
    ``A, B`` are the first half-period zeros beyond ``E``, are integrated
    adaptively with forced knots at the breakpoints.  Each of the four
    tails is summed as an alternating series until its remainder bound
    drops below ``max(abs_tol, rel_tol*|F(k)|)/4`` or ``max_segments``
    segments are used.
    """
    k = float(k)
    if k == 0:
        raise DomainError("transform defined for k != 0")
    if osc.kind != "non_oscillatory":
        raise CapabilityError(
            f"{f.name}: tails are {osc.kind}; use transform_absolute on an approximant instead"
        )
    plan = plan_segments(osc, k, max_segments)
    h = plan.half_period
    ak = abs(k)
    sk = 1.0 if k > 0 else -1.0
    A, B = plan.cos_start, plan.sin_start

    def fx(y):
        return f.eval(y)

    rtol_core = min(1e-12, rel_tol * 1e-2)
    core_c, err_c = integrate(lambda y: fx(y) * np.cos(k * y), _core_edges(A, h, osc.breakpoints),
                              rtol=rtol_core)
    core_s, err_s = integrate(lambda y: fx(y) * np.sin(k * y), _core_edges(B, h, osc.breakpoints),
                              rtol=rtol_core)
    if not (math.isfinite(core_c) and math.isfinite(core_s)):
        raise EvaluationError(f"{f.name}: non-finite core integral at k={k!r}")

    right = fx
    left = lambda y: fx(-y)  # noqa: E731
    # (function, start, coefficient on sum (-1)^j v_j, contributes to cos?)
    tails = [
        (right, A, -((-1.0) ** plan.n_k), True),
        (left, A, -((-1.0) ** plan.n_k), True),
        (right, B, sk * (-1.0) ** plan.m_k, False),
        (left, B, -sk * (-1.0) ** plan.m_k, False),
    ]
    results = [None] * 4
    scale = math.hypot(core_c, core_s)
    for _ in range(4):
        target = max(abs_tol / INV_SQRT_2PI, rel_tol * scale) / 4.0
        for i, (fn, start, coef, _) in enumerate(tails):
            r = results[i]
            if r is None or (r[1] > target and not r[4]):
                est, bound, qerr, M, final = _tail(fn, start, h, target, max_segments)
                results[i] = (coef * est, bound, qerr, M, final)
        C = core_c + sum(r[0] for r, t in zip(results, tails) if t[3])
        S = core_s + sum(r[0] for r, t in zip(results, tails) if not t[3])
        new_scale = math.hypot(C, S)
        if new_scale >= 0.5 * scale:
            break
        scale = new_scale

    value = complex(C, -S) * INV_SQRT_2PI
    tail_bound = sum(r[1] for r in results) * INV_SQRT_2PI
    quad_error = (err_c + err_s + sum(r[2] for r in results)) * INV_SQRT_2PI
    segments = sum(r[3] for r in results)
    D = (decay or _default_decay(f)).constant_C
    Nk = core_bound(osc.core_max_K, osc.core_radius_E, D, k)
    return TransformResult(k, value, float(tail_bound), int(segments), float(Nk), float(quad_error))


def _absolute_edges(knots, k, inner_width=1.0):
    h = math.pi / abs(k) if k != 0 else math.inf
    width = h / 4 if abs(k) > 1 else inner_width
    out = []
    for lo, hi in zip(knots[:-1], knots[1:]):
        n = max(1, int(math.ceil((hi - lo) / width)))
        out.append(np.linspace(lo, hi, n + 1)[:-1])
    out.append(np.array([knots[-1]]))
    return np.concatenate(out)


def transform_absolute(fm: Approximant, k: float, rel_tol: float = 1e-10) -> TransformResult:
    """Transform of a compactly supported approximant (proper integral).

    Panels are forced at ``+-m`` and ``+-(m + 1/m)`` and kept narrower than
    a quarter period when ``|k| > 1``.  ``tail_bound`` is zero; the
    quadrature error estimate is reported in ``quad_error``.
    """
    k = float(k)
    edges = _absolute_edges(list(fm.knots), k)
    val, err = integrate(lambda x: fm(x) * np.exp(-1j * k * x), edges, rtol=min(rel_tol, 1e-10))
    if not np.isfinite(val):
        raise EvaluationError(f"{fm.base.name}: non-finite transform of f_m at k={k!r}")
    return TransformResult(k, complex(val) * INV_SQRT_2PI, 0.0, 0, None, err * INV_SQRT_2PI)


def transform_truncated(f: FunctionDescriptor, k: float, r: float, rel_tol: float = 1e-10,
                        decay: Optional[DecayReport] = None) -> TransformResult:
    """``(2 pi)**-0.5 * integral_{-r}^{r} f e^{-iky}`` for absolutely integrable ``f``.

    The tail bound ``2C/((q-1) r**(q-1))`` uses the decay envelope
    ``C/|y|**q`` with ``q = 2``; functions of only very moderate decrease
    are rejected since their tails are not absolutely integrable.
    """
    decay = decay or _default_decay(f)
    if decay.class_exponent < 2:
        raise CapabilityError(f"{f.name}: truncated transform needs moderate decrease")
    if not r > 1:
        raise DomainError("cutoff r must exceed 1")
    k = float(k)
    knots = [-r, r]
    edges = _absolute_edges(knots, k)
    val, err = integrate(lambda x: f.eval(x) * np.exp(-1j * k * x), edges, rtol=min(rel_tol, 1e-10))
    tail = 2.0 * decay.constant_C / r
    return TransformResult(k, complex(val) * INV_SQRT_2PI, tail * INV_SQRT_2PI, 0, None, err * INV_SQRT_2PI)


def inverse_transform(g, x, n: float, rel_tol: float = 1e-8, *, abs_tol: float = 0.0, eps0: float = EPS0,
                      return_error: bool = False):
    """Truncated inverse transform ``(2 pi)**-0.5 int_{|k|<=n} g(k) e^{ikx} dk``.

    ``g`` must accept arrays of frequencies.  The neighbourhood
    ``(-eps0, eps0)`` of ``k = 0`` is replaced by a midpoint patch built
    from ``g(+-eps0)``.  Panels are aligned to the integers so that repeated
    calls with different ``n`` reuse the same nodes (useful with a cached
    ``g``).  ``x`` may be scalar or array.
    """
    if not n > eps0:
        raise DomainError(f"n must exceed eps0={eps0!r}")
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    top = float(n)
    inner = [float(v) for v in range(1, int(math.floor(top)) + 1) if v < top]
    edges = np.array([eps0] + inner + [top])

    def checked(ks):
        vals = np.asarray(g(ks), dtype=complex)
        if not np.all(np.isfinite(vals)):
            bad = np.asarray(ks)[~np.isfinite(vals)][0]
            raise EvaluationError(f"g is not finite at k={float(bad)!r}", where=float(bad))
        return vals

    patch_vals = checked(np.array([-eps0, eps0]))
    out = np.empty(xs.size, dtype=complex)
    errs = np.empty(xs.size)
    for i, xv in enumerate(xs):
        pos, e1 = integrate(lambda ks: checked(ks) * np.exp(1j * ks * xv), edges,
                            rtol=rel_tol, atol=abs_tol / 2)
        neg, e2 = integrate(lambda ks: checked(-ks) * np.exp(-1j * ks * xv), edges,
                            rtol=rel_tol, atol=abs_tol / 2)
        patch = eps0 * (patch_vals[0] + patch_vals[1])
        out[i] = (pos + neg + patch) * INV_SQRT_2PI
        errs[i] = (e1 + e2) * INV_SQRT_2PI
    if np.ndim(x) == 0:
        out, errs = out[0], float(errs[0])
    return (out, errs) if return_error else out


def sweep(f: FunctionDescriptor, osc: OscillationReport, ks, rel_tol: float = 1e-8,
          max_segments: int = 10**6, *, abs_tol: float = 0.0, workers: int = 1):
    """Conditional transforms over a frequency grid, in grid order."""
    decay = _default_decay(f)

    def one(k):
        return transform_conditional(f, osc, k, rel_tol, max_segments, abs_tol=abs_tol, decay=decay)

    ks = [float(k) for k in ks]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            return list(ex.map(one, ks))
    return [one(k) for k in ks]
