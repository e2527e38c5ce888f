"""Acceptance suite: one PASS/FAIL line per criterion.

All criteria are evaluated once per session (criterion 9 re-checks every
transform evaluated by criteria 2-8, so they share a recorder).  Each test
prints its line directly to the terminal and then asserts the outcome.

Run on its own with ``pytest tests/test_acceptance.py -v``.
"""
from __future__ import annotations

import math
import subprocess
import sys
import time
from dataclasses import dataclass
from functools import lru_cache
from unittest import mock

import numpy as np
import pytest

from vmdfourier import quadrature
from vmdfourier.corpus import get_function
from vmdfourier.funcmodel import detect_breakpoints
from vmdfourier.taper import SIGN_THRESHOLD, build_approximant, build_taper
from vmdfourier.verify import (
    check_inversion,
    check_plancherel,
    check_transform_decay,
    check_uniform_convergence,
    profile,
)

REL_TOL = 1e-8


@dataclass
class Outcome:
    passed: bool
    summary: str
    seconds: float


class Recorder:
    """Wraps the transform entry points and keeps every call with its result."""

    def __init__(self):
        self.conditional = []
        self.absolute = []
        self._cond = quadrature.transform_conditional
        self._abs = quadrature.transform_absolute

    def conditional_wrapper(self, f, osc, k, rel_tol=1e-8, max_segments=10**6, **kw):
        r = self._cond(f, osc, k, rel_tol, max_segments, **kw)
        self.conditional.append(((f, osc, k, rel_tol, max_segments, kw), r))
        return r

    def absolute_wrapper(self, fm, k, rel_tol=1e-10):
        r = self._abs(fm, k, rel_tol)
        self.absolute.append(((fm, k, rel_tol), r))
        return r

    def patches(self):
        return (
            mock.patch.object(quadrature, "transform_conditional", self.conditional_wrapper),
            mock.patch.object(quadrature, "transform_absolute", self.absolute_wrapper),
        )


def _timed(fn, limit):
    t0 = time.perf_counter()
    passed, summary = fn()
    dt = time.perf_counter() - t0
    if dt > limit:
        passed = False
        summary += f"; runtime {dt:.1f}s exceeds {limit:.0f}s"
    return Outcome(passed, summary, dt)


# ---------------------------------------------------------------------------
# criteria


def criterion_1():
    """Taper exactness over 1000 random draws."""
    rng = np.random.default_rng(1)
    n = 1000
    ms = rng.uniform(2, 1000, n)
    coefs = rng.uniform(-1, 1, (n, 3))
    bc_fail = sup_fail = int_fail = sign_fail = 0
    worst_int = 0.0
    for m, (a0, a1, a2) in zip(ms, coefs):
        t = build_taper(m, a0, a1, a2)
        w = 1.0 / m
        scale = max(abs(a0), abs(a1), abs(a2))
        for order, want in enumerate((a0, a1, a2)):
            got0 = float(t.eval_local(0.0, order))
            got1 = float(t.eval_local(w, order))
            if abs(got0 - want) > 1e-10 * max(abs(want), 1e-300) and abs(got0 - want) > 1e-10 * scale:
                bc_fail += 1
            if abs(got1) > 1e-10 * scale * m**order:
                bc_fail += 1
        x = np.linspace(m, m + w, 1000)
        if np.max(np.abs(t(x))) > t.sup_bound():
            sup_fail += 1
        dev = abs(t.abs_third_derivative_integral() - abs(a2))
        worst_int = max(worst_int, dev)
        if dev > 1e-8:
            int_fail += 1
        if m > SIGN_THRESHOLD and t.third_derivative_sign_changes():
            sign_fail += 1
    passed = bc_fail == sup_fail == int_fail == sign_fail == 0
    return passed, (
        f"boundary failures {bc_fail}/6000, sup-bound failures {sup_fail}/{n}, "
        f"|int|h'''| - |a2|| > 1e-8 in {int_fail}/{n} (worst {worst_int:.3g}), "
        f"h''' changes sign in {sign_fail}/{n}"
    )


def criterion_2():
    f = get_function("runge")
    osc = detect_breakpoints(f, 50, 0.01)
    worst = -math.inf
    bad = []
    for k in (0.5, 1.0, 2.0, 5.0, 10.0):
        r = quadrature.transform_conditional(f, osc, k, REL_TOL)
        err = abs(r.value - math.sqrt(math.pi / 2) * math.exp(-abs(k)))
        allowed = r.tail_bound + 1e-6
        worst = max(worst, err / allowed)
        if err > allowed:
            bad.append(k)
    return not bad, f"max |F - closed form|/(tail_bound + 1e-6) = {worst:.3g}; failing k: {bad or 'none'}"


def criterion_3():
    bad, worst = [], 0.0
    for name in ("runge", "odd_vmd"):
        f = get_function(name)
        fp = f.derivative()
        osc, osc_p = detect_breakpoints(f, 50, 0.01), detect_breakpoints(fp, 50, 0.01)
        for k in (-5.0, -2.0, -1.0, 1.0, 2.0, 5.0):
            a = quadrature.transform_conditional(fp, osc_p, k, REL_TOL)
            b = quadrature.transform_conditional(f, osc, k, REL_TOL)
            rhs = 1j * k * b.value
            budget = a.error_bound + abs(k) * b.error_bound + 10 * REL_TOL * max(abs(a.value), abs(rhs))
            gap = abs(a.value - rhs)
            worst = max(worst, gap / budget)
            if gap > budget:
                bad.append((name, k))
    return not bad, f"max gap/budget = {worst:.3g}; failing: {bad or 'none'}"


def criterion_4():
    f = get_function("odd_vmd")
    prof = profile(f)
    fit = check_transform_decay(f, prof.osc, np.geomspace(2, 64, 16), 2.0, REL_TOL, prof.decay)
    passed = fit.slope <= -1.7 and math.isfinite(fit.fitted_G)
    return passed, f"slope {fit.slope:.3f} (need <= -1.7), fitted_G {fit.fitted_G:.4g}"


def criterion_5():
    ks = np.geomspace(2, 64, 64)
    lines, passed = [], True
    for name in ("runge", "odd_vmd", "gauss", "osc_deriv", "osc_antideriv"):
        f = get_function(name)
        sups, limits = [], []
        for m in (5, 10, 20):
            fm = build_approximant(f, m)
            vals = np.array([abs(quadrature.transform_absolute(fm, k).value) for k in ks])
            sups.append(float(np.max(ks**3 * vals)))
            limits.append(fm.C3_const * m)
        bound_ok = all(s <= lim for s, lim in zip(sups, limits))
        growth_ok = all(sups[i + 1] / sups[i] <= 1.2 * (m2 / m1)
                        for i, (m1, m2) in enumerate(((5, 10), (10, 20))))
        passed &= bound_ok and growth_ok
        status = "ok" if bound_ok and growth_ok else "FAIL"
        lines.append(
            f"{name}[{status}] sup " + "/".join(f"{s:.3g}" for s in sups)
            + " vs C3*m " + "/".join(f"{v:.3g}" for v in limits)
        )
    return passed, "; ".join(lines)


def criterion_6():
    f = get_function("runge")
    grid = [s * k for k in np.geomspace(1, 32, 48) for s in (-1, 1)]
    st = check_uniform_convergence(f, (5, 10, 20, 40), 1.0, grid, REL_TOL)
    scaled = [m * e for m, e in zip(st.ms, st.sup_errors)]
    ratio = max(scaled) / min(scaled)
    decreasing = all(b < a for a, b in zip(st.sup_errors[:-1], st.sup_errors[1:]))
    passed = ratio <= 3 and decreasing
    return passed, (
        f"m*sup_error = {', '.join(f'{v:.4g}' for v in scaled)} (max/min {ratio:.2f}, need <= 3); "
        f"strictly decreasing: {decreasing}; fitted rate {st.fitted_rate:.2f}"
    )


def criterion_7():
    xs = [0.0, 0.5, -0.5, 1.0, -1.0, 3.0, -3.0]
    parts, passed = [], True
    for name in ("runge", "odd_vmd"):
        c = check_inversion(get_function(name), xs, [4, 8, 16, 32], REL_TOL)
        passed &= c.passed
        parts.append(f"{name} errors " + ", ".join(f"{e:.3g}" for e in c.details["max_errors"])
                     + f" [{'ok' if c.passed else 'FAIL'}]")
    return passed, "; ".join(parts)


def criterion_8():
    c = check_plancherel(get_function("runge"), [8, 16, 32], REL_TOL)
    return c.passed, (
        f"||f||^2 = {c.details['norm_f'] ** 2:.12f}, ||F||^2 = {c.details['norm_F'][-1] ** 2:.12f} "
        f"(pi/2 = {math.pi / 2:.12f}); |diff| {c.measured:.3g} <= {c.bound:.3g}"
    )


def criterion_9(rec: Recorder):
    n_cond, n_abs = len(rec.conditional), len(rec.absolute)
    if n_cond == 0:
        return False, "no transform evaluations were recorded"
    bad, strict_bad, worst = 0, 0, 0.0
    for (f, osc, k, rel_tol, max_seg, kw), coarse in rec.conditional:
        fine = rec._cond(f, osc, k, rel_tol / 10, max_seg, **kw)
        diff = abs(fine.value - coarse.value)
        allowed = coarse.error_bound + 10 * rel_tol * abs(coarse.value)
        worst = max(worst, diff / allowed if allowed > 0 else (0.0 if diff == 0 else math.inf))
        bad += diff > allowed
        strict_bad += diff > coarse.tail_bound + 10 * rel_tol * abs(coarse.value)
    for (fm, k, rel_tol), coarse in rec.absolute:
        fine = rec._abs(fm, k, rel_tol / 10)
        diff = abs(fine.value - coarse.value)
        allowed = coarse.error_bound + 10 * rel_tol * abs(coarse.value)
        worst = max(worst, diff / allowed if allowed > 0 else (0.0 if diff == 0 else math.inf))
        bad += diff > allowed
        strict_bad += diff > coarse.tail_bound + 10 * rel_tol * abs(coarse.value)
    return bad == 0, (
        f"{n_cond} conditional + {n_abs} absolute evaluations re-run at rel_tol/10; "
        f"violations of (tail + quadrature bound + 10 rel_tol |F|): {bad} (worst ratio {worst:.3g}); "
        f"against the truncation bound alone: {strict_bad}"
    )


def criterion_10():
    cmd = [sys.executable, "-m", "vmdfourier.cli", "verify", "--function", "runge", "--suite", "all"]
    runs = [subprocess.run(cmd, capture_output=True, timeout=600) for _ in range(2)]
    same = runs[0].stdout == runs[1].stdout and len(runs[0].stdout) > 0
    codes = [r.returncode for r in runs]
    return same, f"byte-identical: {same} ({len(runs[0].stdout)} bytes); exit codes {codes}"


LIMITS = {1: 10, 2: 30, 3: 60, 4: 120, 5: 180, 6: 180, 7: 300, 8: 60, 9: 600, 10: 600}
TITLES = {
    1: "taper exactness",
    2: "closed-form transform pair",
    3: "derivative identity",
    4: "G/k^2 decay",
    5: "Cm/k^3 approximant decay",
    6: "uniform convergence",
    7: "everywhere inversion",
    8: "Plancherel",
    9: "certificate honesty",
    10: "CLI determinism",
}


@lru_cache(maxsize=1)
def evaluate_all():
    out = {1: _timed(criterion_1, LIMITS[1])}
    rec = Recorder()
    p1, p2 = rec.patches()
    with p1, p2:
        for i, fn in ((2, criterion_2), (3, criterion_3), (4, criterion_4), (5, criterion_5),
                      (6, criterion_6), (7, criterion_7), (8, criterion_8)):
            out[i] = _timed(fn, LIMITS[i])
    out[9] = _timed(lambda: criterion_9(rec), LIMITS[9])
    out[10] = _timed(criterion_10, LIMITS[10])
    return out


@pytest.mark.parametrize("number", sorted(TITLES))
def test_criterion(number, capsys):
    o = evaluate_all()[number]
    line = f"ACCEPTANCE {number:>2} {TITLES[number]:<28} {'PASS' if o.passed else 'FAIL'} ({o.seconds:.1f}s): {o.summary}"
    with capsys.disabled():
        print("\n" + line)
    assert o.passed, line


if __name__ == "__main__":  # pragma: no cover
    for number, o in sorted(evaluate_all().items()):
        print(f"ACCEPTANCE {number:>2} {TITLES[number]:<28} {'PASS' if o.passed else 'FAIL'} "
              f"({o.seconds:.1f}s): {o.summary}")
