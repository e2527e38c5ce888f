"""Measured checks of decay, convergence, inversion and isometry claims.

Every check returns both the measured quantity and the bound it is held
against, so a report can be audited without rerunning it.  Constants that
the analysis only asserts to exist (decay constants, convergence
constants) are measured on finite grids and reported as such.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import quadrature
from .errors import CapabilityError, DomainError, EvaluationError, VMDError
from .funcmodel import DecayReport, FunctionDescriptor, OscillationReport, classify_decay, detect_breakpoints
from .integrate import integrate
from .quadrature import EPS0, INV_SQRT_2PI
from .taper import Approximant, build_approximant

__all__ = [
    "Check",
    "DecayFit",
    "ConvergenceStudy",
    "VerificationReport",
    "FunctionProfile",
    "profile",
    "check_transform_decay",
    "check_approximant_decay",
    "check_uniform_convergence",
    "check_inversion",
    "check_plancherel",
    "check_derivative_route",
    "CachedTransform",
    "run_suite",
    "SUITES",
    "SLOPE_SLACK",
    "MONOTONE_SLACK",
]

#: allowed excess of a fitted log-log slope over its target
SLOPE_SLACK = 0.3
#: relative slack when requiring a sequence of errors to be non-increasing
MONOTONE_SLACK = 0.1

SCAN_RADIUS = 50.0
SCAN_STEP = 0.01
DECAY_GRID_MAX = 1e4
DECAY_GRID_POINTS = 400


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    measured: float
    bound: float
    details: dict = field(default_factory=dict)

    def to_dict(self):
        return {
            "name": self.name,
            "pass": bool(self.passed),
            "measured": _json_float(self.measured),
            "bound": _json_float(self.bound),
            "details": _jsonable(self.details),
        }


@dataclass(frozen=True)
class DecayFit:
    """Power-law fit ``|F(k)| <~ G/|k|**q`` over a frequency grid."""

    k_min: float
    k_max: float
    fitted_G: float
    target_q: float
    slope: float
    passed: bool
    details: dict = field(default_factory=dict)


@dataclass(frozen=True)
class ConvergenceStudy:
    """Sup-norm distance between ``F(f)`` and ``F(f_m)`` as ``m`` grows."""

    ms: tuple
    sup_errors: tuple
    k0: float
    fitted_rate: float
    constant_E_k0: float
    passed: bool
    details: dict = field(default_factory=dict)


@dataclass(frozen=True)
class VerificationReport:
    function_name: str
    checks: tuple
    skipped: tuple = ()

    @property
    def overall_pass(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self):
        return {
            "function": self.function_name,
            "checks": [c.to_dict() for c in sorted(self.checks, key=lambda c: c.name)],
            "skipped": [{"name": n, "reason": r} for n, r in self.skipped],
            "overall_pass": self.overall_pass,
        }


def _json_float(v):
    if v is None:
        return None
    v = float(v)
    if math.isnan(v):
        return "nan"
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return v


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return _json_float(obj)
    if isinstance(obj, complex):
        return [_json_float(obj.real), _json_float(obj.imag)]
    return obj


# ---------------------------------------------------------------------------
# function profiles and cached transforms


@dataclass(frozen=True)
class FunctionProfile:
    osc: OscillationReport
    decay: DecayReport


def profile(f: FunctionDescriptor) -> FunctionProfile:
    """Breakpoint scan on ``[-50, 50]`` and decay fit up to ``|x| = 1e4``."""
    return FunctionProfile(
        detect_breakpoints(f, SCAN_RADIUS, SCAN_STEP),
        classify_decay(f, DECAY_GRID_MAX, DECAY_GRID_POINTS),
    )


class CachedTransform:
    """Vectorised, memoised ``k -> F(f)(k)`` for a real function.

    Only ``k > 0`` is evaluated; negative frequencies use conjugate
    symmetry ``F(-k) = conj(F(k))``.  Each distinct frequency is computed
    once, so quadratures over nested ranges share work.
    """

    def __init__(self, f: FunctionDescriptor, prof: Optional[FunctionProfile] = None,
                 rel_tol: float = 1e-8, abs_tol: float = 0.0, max_segments: int = 10**6):
        self.f = f
        self.max_segments = max_segments
        self.prof = prof or profile(f)
        self.rel_tol = rel_tol
        self.abs_tol = abs_tol
        self._cache: dict = {}

    def result(self, k: float) -> quadrature.TransformResult:
        k = abs(float(k))
        r = self._cache.get(k)
        if r is None:
            r = quadrature.transform_conditional(
                self.f, self.prof.osc, k, self.rel_tol, self.max_segments, abs_tol=self.abs_tol, decay=self.prof.decay
            )
            self._cache[k] = r
        return r

    def __call__(self, ks):
        ks = np.asarray(ks, dtype=float)
        out = np.empty(ks.shape, dtype=complex)
        for idx, k in np.ndenumerate(ks):
            v = self.result(k).value
            out[idx] = v if k > 0 else v.conjugate()
        return out

    def error_bound(self, ks):
        ks = np.asarray(ks, dtype=float)
        return np.array([self.result(k).error_bound for k in ks.ravel()]).reshape(ks.shape)

    @property
    def results(self):
        return list(self._cache.values())

    def max_error_bound(self) -> float:
        return max((r.error_bound for r in self._cache.values()), default=0.0)


# ---------------------------------------------------------------------------
# decay fits


def _slope(ks, mags, bounds):
    """Least-squares slope of ``log|F|`` against ``log|k|`` on resolved samples."""
    ks = np.abs(np.asarray(ks, dtype=float))
    mags = np.asarray(mags, dtype=float)
    ok = (mags > np.asarray(bounds)) & (mags > 0)
    if np.count_nonzero(ok) < 2 or np.ptp(np.log(ks[ok])) == 0:
        return -math.inf, int(np.count_nonzero(ok))
    return float(np.polyfit(np.log(ks[ok]), np.log(mags[ok]), 1)[0]), int(np.count_nonzero(ok))


def _fit(ks, values, bounds, q, extra_bound=None, details=None):
    ks = np.asarray(ks, dtype=float)
    mags = np.abs(np.asarray(values))
    bounds = np.asarray(bounds, dtype=float)
    env = np.abs(ks) ** q * (mags + bounds)
    G = float(np.max(env)) if env.size else 0.0
    slope, used = _slope(ks, mags, bounds)
    passed = math.isfinite(G) and slope <= -q + SLOPE_SLACK
    if extra_bound is not None:
        passed = passed and G <= extra_bound
    d = dict(details or {})
    d.update(resolved_points=used, grid_points=int(ks.size), argmax_k=float(ks[int(np.argmax(env))]) if env.size else None)
    return DecayFit(float(np.min(np.abs(ks))), float(np.max(np.abs(ks))), G, float(q), slope, bool(passed), d)


def check_transform_decay(f: FunctionDescriptor, osc: OscillationReport, k_grid: Sequence[float],
                          target_q: float = 2.0, rel_tol: float = 1e-8,
                          decay: Optional[DecayReport] = None) -> DecayFit:
    """Fit the decay of ``F(f)`` on ``k_grid`` against ``G/|k|**target_q``.

    ``fitted_G`` is the largest ``|k|**q (|F(k)| + error bound)`` on the
    grid.  The slope is fitted on samples whose magnitude exceeds their
    error bound; if fewer than two are resolved the transform is below the
    noise floor on the whole grid and the slope is reported as ``-inf``.
    A failed transform evaluation fails the check and records the frequency.
    """
    ks = np.asarray(list(k_grid), dtype=float)
    if ks.size == 0:
        raise DomainError("empty frequency grid")
    if np.any(np.abs(ks) < 1):
        raise DomainError("decay fits need |k| >= 1 on the whole grid")
    decay = decay or classify_decay(f, DECAY_GRID_MAX, DECAY_GRID_POINTS)
    values, bounds = [], []
    for k in ks:
        try:
            r = quadrature.transform_conditional(f, osc, k, rel_tol, decay=decay)
        except VMDError as exc:
            return DecayFit(float(np.min(np.abs(ks))), float(np.max(np.abs(ks))), math.inf, float(target_q),
                            math.nan, False, {"failed_k": float(k), "error": f"{type(exc).__name__}: {exc}"})
        values.append(r.value)
        bounds.append(r.error_bound)
    return _fit(ks, values, bounds, target_q)


def check_approximant_decay(fm: Approximant, k_grid: Sequence[float], rel_tol: float = 1e-10) -> DecayFit:
    """Fit ``|F(f_m)(k)| <~ G/|k|**3`` and compare ``G`` with ``C3 * m``."""
    if fm.C3_const is None:
        raise CapabilityError(f"{fm.base.name}: approximant has no C3 constant")
    ks = np.asarray(list(k_grid), dtype=float)
    if ks.size == 0:
        raise DomainError("empty frequency grid")
    if np.any(np.abs(ks) <= 1):
        raise DomainError("approximant decay needs |k| > 1 on the whole grid")
    rs = [quadrature.transform_absolute(fm, k, rel_tol) for k in ks]
    limit = fm.C3_const * fm.m
    return _fit(ks, [r.value for r in rs], [r.error_bound for r in rs], 3, extra_bound=limit,
                details={"m": fm.m, "C3_times_m": limit})


# ---------------------------------------------------------------------------
# convergence of the approximating sequence


def _non_increasing(errors, floors=None, slack=MONOTONE_SLACK):
    errors = list(errors)
    floors = list(floors) if floors is not None else [0.0] * len(errors)
    return all(b <= (1 + slack) * a + fb for a, b, fb in zip(errors[:-1], errors[1:], floors[1:]))


def _rate(ms, errors):
    ms = np.asarray(ms, dtype=float)
    errors = np.asarray(errors, dtype=float)
    ok = errors > 0
    if np.count_nonzero(ok) < 2:
        return -math.inf
    return float(np.polyfit(np.log(ms[ok]), np.log(errors[ok]), 1)[0])


def check_uniform_convergence(f: FunctionDescriptor, ms: Sequence[int], k0: float, k_grid: Sequence[float],
                              rel_tol: float = 1e-8, prof: Optional[FunctionProfile] = None) -> ConvergenceStudy:
    """Sup over ``k_grid`` of ``|F(f)(k) - F(f_m)(k)|`` for each ``m``.

    Passes when the fitted rate (slope of log error against log m) is at
    most ``-1 + 0.3`` and the errors are non-increasing within 10%.
    ``constant_E_k0`` is the largest ``m * sup_error`` over the run.
    """
    ms = [int(m) for m in ms]
    if not ms or any(b <= a for a, b in zip(ms[:-1], ms[1:])):
        raise DomainError("ms must be a non-empty increasing list")
    ks = np.asarray(list(k_grid), dtype=float)
    if ks.size == 0 or np.any(np.abs(ks) < k0):
        raise DomainError(f"frequency grid must be non-empty with |k| >= k0={k0!r}")
    F = CachedTransform(f, prof, rel_tol)
    exact = F(ks)
    exact_err = F.error_bound(ks)
    sup_errors, floors = [], []
    for m in ms:
        fm = build_approximant(f, m)
        rs = [quadrature.transform_absolute(fm, k) for k in ks]
        diff = np.abs(exact - np.array([r.value for r in rs]))
        sup_errors.append(float(np.max(diff)))
        floors.append(float(np.max(exact_err + np.array([r.error_bound for r in rs]))))
    rate = _rate(ms, sup_errors)
    E = max(m * e for m, e in zip(ms, sup_errors))
    passed = rate <= -1 + SLOPE_SLACK and _non_increasing(sup_errors, floors)
    return ConvergenceStudy(tuple(ms), tuple(sup_errors), float(k0), rate, float(E), bool(passed),
                            {"noise_floor": floors, "m_times_error": [m * e for m, e in zip(ms, sup_errors)]})


# ---------------------------------------------------------------------------
# inversion and isometry


def check_inversion(f: FunctionDescriptor, x_grid: Sequence[float], n_list: Sequence[int],
                    rel_tol: float = 1e-8, prof: Optional[FunctionProfile] = None,
                    transform: Optional[CachedTransform] = None) -> Check:
    """Pointwise error of the truncated inverse transform of ``F(f)``.

    For each cutoff ``n`` the approximant index ``m = floor(n**1.5)`` is
    recorded, the inverse transform over ``[-n, n]`` is evaluated on
    ``x_grid`` and compared with ``f``.  Passes when the error sequence is
    non-increasing (10% slack plus the numerical error of each run) and
    the last error is at most ``1e-2``.
    """
    xs = np.asarray(list(x_grid), dtype=float)
    n_list = [int(n) for n in n_list]
    if xs.size == 0 or not n_list:
        raise DomainError("x_grid and n_list must be non-empty")
    F = transform or CachedTransform(f, prof, rel_tol, abs_tol=1e-13)
    fx = f(xs)
    errors, floors, worst_x = [], [], []
    for n in n_list:
        vals, qerr = quadrature.inverse_transform(F, xs, n, rel_tol, abs_tol=1e-12, return_error=True)
        e = np.abs(vals.real - fx)
        errors.append(float(np.max(e)))
        worst_x.append(float(xs[int(np.argmax(e))]))
        # transform errors integrated over [-n, n] plus the inverse quadrature estimate
        floors.append(float(2 * n * F.max_error_bound() * INV_SQRT_2PI + np.max(qerr)))
    final_tol = 1e-2
    passed = _non_increasing(errors, floors) and errors[-1] <= final_tol
    return Check(
        "inversion", bool(passed), errors[-1], final_tol,
        {
            "n": n_list,
            "m": [int(math.floor(n**1.5)) for n in n_list],
            "max_errors": errors,
            "worst_x": worst_x,
            "noise_floor": floors,
            "transform_evaluations": len(F.results),
        },
    )


def _l2_norm_sq(f: FunctionDescriptor, decay: DecayReport):
    q = decay.class_exponent
    X = 1e4 if q >= 2 else 1e6
    pos = np.concatenate([np.linspace(0.0, 1.0, 5), np.geomspace(1.0, X, 200)[1:]])
    edges = np.concatenate([-pos[::-1], pos[1:]])
    val, err = integrate(lambda x: f(x) ** 2, edges, rtol=1e-12)
    tail = 2 * decay.constant_C**2 / ((2 * q - 1) * X ** (2 * q - 1))
    return float(val), float(err + tail)


def _spectral_norm_sq(F: CachedTransform, R: float, rel_tol: float):
    """``int_{-R}^{R} |F|^2`` with the patch at 0 and the ``G/k^2`` tail beyond ``R``."""
    edges = np.concatenate([[EPS0], np.arange(1.0, math.floor(R) + 1)])
    if edges[-1] < R:
        edges = np.append(edges, R)
    val, err = integrate(lambda ks: np.abs(F(ks)) ** 2, edges, rtol=rel_tol, atol=1e-14)
    patch = 2 * EPS0 * abs(F.result(EPS0).value) ** 2
    ks = np.array(sorted(k for k in F._cache if 1 <= k <= R))
    G = float(np.max(ks**2 * (np.abs(F(ks)) + F.error_bound(ks)))) if ks.size else 0.0
    tail = 2 * G**2 / (3 * R**3)
    # |F|^2 error from the transform values themselves
    vals_err = 2 * R * 2 * max((abs(r.value) * r.error_bound for r in F.results), default=0.0)
    return 2 * val + patch, 2 * err + tail + vals_err, G


def check_plancherel(f: FunctionDescriptor, r_list: Sequence[float], rel_tol: float = 1e-8,
                     prof: Optional[FunctionProfile] = None) -> Check:
    """Compare ``||F(f)||_2`` over ``[-R, R]`` (plus tail) with ``||f||_2``.

    Passes when, at the largest ``R``, the norms differ by at most the
    combined error budget plus ``1e-3 * ||f||_2``.
    """
    r_list = sorted(float(r) for r in r_list)
    if not r_list or r_list[0] <= 1:
        raise DomainError("r_list must be non-empty with every R > 1")
    prof = prof or profile(f)
    nf2, ef2 = _l2_norm_sq(f, prof.decay)
    F = CachedTransform(f, prof, rel_tol, abs_tol=1e-13)
    nf = math.sqrt(max(nf2, 0.0))
    discrepancies, budgets, norms = [], [], []
    for R in r_list:
        nF2, eF2, G = _spectral_norm_sq(F, R, rel_tol)
        nF = math.sqrt(max(nF2, 0.0))
        # |a - b| = |a^2 - b^2| / (a + b)
        denom = nF + nf
        budget = (ef2 + eF2) / denom if denom > 0 else 0.0
        discrepancies.append(abs(nF - nf))
        budgets.append(budget)
        norms.append(nF)
    bound = budgets[-1] + 1e-3 * nf
    passed = discrepancies[-1] <= bound
    return Check(
        "plancherel", bool(passed), discrepancies[-1], bound,
        {"R": r_list, "norm_f": nf, "norm_F": norms, "discrepancy": discrepancies, "budget": budgets,
         "fitted_G": G},
    )


def check_derivative_route(f: FunctionDescriptor, k_grid: Sequence[float], rel_tol: float = 1e-8,
                           cutoff: float = 2000.0) -> Check:
    """Check ``F(f')(k) = i k F(f)(k)`` or, for oscillatory ``f'``, the bound ``|k||F(f')| <= R``.

    With non-oscillatory ``f`` and ``f'`` both transforms are conditional
    and the identity must hold within their error bounds plus
    ``10 * rel_tol`` relative.  When ``f'`` oscillates with breakpoint gap
    ``delta``, ``F(f')`` is computed as a truncated absolute integral over
    ``[-cutoff, cutoff]`` and ``|k| (|F(f')| + bound)`` is compared with
    ``R = 4 pi (C + D) / delta``, where ``C = sup|f'|`` and ``D`` is the
    decay constant of ``f'``.
    """
    if f.deriv1 is None:
        raise CapabilityError(f"{f.name}: derivative route needs deriv1")
    ks = np.asarray(list(k_grid), dtype=float)
    if ks.size == 0 or np.any(ks == 0):
        raise DomainError("frequency grid must be non-empty and exclude 0")
    fp = f.derivative()
    prof_p = profile(fp)
    if prof_p.osc.kind == "oscillatory":
        delta = prof_p.osc.delta
        C = f.norm(1)
        if C is None:
            C = float(np.max(np.abs(fp(np.linspace(-SCAN_RADIUS, SCAN_RADIUS, 20001)))))
        D = prof_p.decay.constant_C
        R = 4 * math.pi * (C + D) / delta
        rs = [quadrature.transform_truncated(fp, k, cutoff, decay=prof_p.decay) for k in ks]
        measured = max(abs(k) * (abs(r.value) + r.error_bound) for k, r in zip(ks, rs))
        return Check(
            "derivative_route", bool(measured <= R), measured, R,
            {"mode": "oscillatory_bound", "C": C, "D": D, "delta": delta, "cutoff": cutoff,
             "k": ks.tolist()},
        )
    if prof_p.osc.kind != "non_oscillatory":
        raise CapabilityError(f"{f.name}: oscillation of f' is {prof_p.osc.kind}")
    prof = profile(f)
    worst, worst_ratio, worst_k = 0.0, -math.inf, None
    budgets = []
    for k in ks:
        a = quadrature.transform_conditional(fp, prof_p.osc, k, rel_tol, decay=prof_p.decay)
        b = quadrature.transform_conditional(f, prof.osc, k, rel_tol, decay=prof.decay)
        rhs = 1j * k * b.value
        gap = abs(a.value - rhs)
        budget = a.error_bound + abs(k) * b.error_bound + 10 * rel_tol * max(abs(a.value), abs(rhs))
        budgets.append(budget)
        ratio = gap / budget if budget > 0 else (0.0 if gap == 0 else math.inf)
        if ratio > worst_ratio:
            worst, worst_ratio, worst_k = gap, ratio, float(k)
    idx = [float(k) for k in ks].index(worst_k)
    return Check(
        "derivative_route", bool(worst_ratio <= 1), worst, budgets[idx],
        {"mode": "identity", "worst_k": worst_k, "worst_ratio": worst_ratio, "k": ks.tolist()},
    )


# ---------------------------------------------------------------------------
# suites


DECAY_GRID = tuple(float(k) for k in np.geomspace(2, 64, 16))
CONVERGENCE_GRID = tuple(s * float(k) for k in np.geomspace(1, 32, 48) for s in (-1, 1))
INVERSION_X = (-3.0, -1.0, -0.5, 0.0, 0.5, 1.0, 3.0)
INVERSION_N = (4, 8, 16, 32)
PLANCHEREL_R = (8.0, 16.0, 32.0)
DERIVATIVE_GRID = (-5.0, -2.0, -1.0, 1.0, 2.0, 5.0)
OSC_DERIVATIVE_GRID = tuple(float(k) for k in np.geomspace(4, 64, 5))
APPROXIMANT_M = 20
CONVERGENCE_MS = (5, 10, 20, 40)

SUITES = ("all", "decay", "approximant", "convergence", "inversion", "plancherel", "derivative")


def _decay_check(f, prof, rel_tol):
    fit = check_transform_decay(f, prof.osc, DECAY_GRID, 2.0, rel_tol, prof.decay)
    return Check("transform_decay", fit.passed, fit.slope, -fit.target_q + SLOPE_SLACK,
                 {"fitted_G": fit.fitted_G, "target_q": fit.target_q, "k_min": fit.k_min,
                  "k_max": fit.k_max, **fit.details})


def _approximant_check(f, prof, rel_tol):
    fm = build_approximant(f, APPROXIMANT_M)
    fit = check_approximant_decay(fm, DECAY_GRID)
    return Check("approximant_decay", fit.passed, fit.fitted_G, fit.details["C3_times_m"],
                 {"slope": fit.slope, "target_q": 3.0, "k_min": fit.k_min, "k_max": fit.k_max, **fit.details})


def _convergence_check(f, prof, rel_tol):
    st = check_uniform_convergence(f, CONVERGENCE_MS, 1.0, CONVERGENCE_GRID, rel_tol, prof)
    return Check("uniform_convergence", st.passed, st.fitted_rate, -1 + SLOPE_SLACK,
                 {"ms": list(st.ms), "sup_errors": list(st.sup_errors), "constant_E_k0": st.constant_E_k0,
                  "k0": st.k0, **st.details})


def _inversion_check(f, prof, rel_tol):
    return check_inversion(f, INVERSION_X, INVERSION_N, rel_tol, prof)


def _plancherel_check(f, prof, rel_tol):
    return check_plancherel(f, PLANCHEREL_R, rel_tol, prof)


def _derivative_check(f, prof, rel_tol):
    if f.deriv1 is None:
        raise CapabilityError(f"{f.name}: no first derivative")
    fp_kind = detect_breakpoints(f.derivative(), SCAN_RADIUS, SCAN_STEP).kind
    grid = OSC_DERIVATIVE_GRID if fp_kind == "oscillatory" else DERIVATIVE_GRID
    return check_derivative_route(f, grid, rel_tol)


_SUITE_CHECKS = {
    "decay": (_decay_check, True),
    "approximant": (_approximant_check, False),
    "convergence": (_convergence_check, True),
    "inversion": (_inversion_check, True),
    "plancherel": (_plancherel_check, True),
    "derivative": (_derivative_check, False),
}


def run_suite(f: FunctionDescriptor, suite: str = "all", rel_tol: float = 1e-8) -> VerificationReport:
    """Run one named check, or all of them, and collect a report.

    Checks whose preconditions ``f`` does not meet (for example a
    conditional transform of an oscillatory function, or a missing third
    derivative) are listed under ``skipped`` with the reason instead of
    being reported as passed.  An evaluation failure inside a check is
    recorded as a failed check; a certification failure propagates so
    callers can tell "checks failed" from "could not certify".
    """
    if suite not in SUITES:
        raise DomainError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
    names = [s for s in _SUITE_CHECKS] if suite == "all" else [suite]
    prof = profile(f)
    checks, skipped = [], []
    for name in names:
        fn, needs_conditional = _SUITE_CHECKS[name]
        if needs_conditional and prof.osc.kind != "non_oscillatory":
            skipped.append((name, f"conditional transform needs non-oscillatory tails, found {prof.osc.kind}"))
            continue
        try:
            checks.append(fn(f, prof, rel_tol))
        except CapabilityError as exc:
            skipped.append((name, str(exc)))
        except EvaluationError as exc:
            checks.append(Check(name, False, math.nan, math.nan, {"error": f"{type(exc).__name__}: {exc}"}))
    return VerificationReport(f.name, tuple(checks), tuple(skipped))
