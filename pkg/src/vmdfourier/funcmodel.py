"""Test-function descriptors and numerical decay/oscillation classification.

A :class:`FunctionDescriptor` bundles a real function with optional
derivative evaluators, sup-norm bounds and a closed-form transform used as
an oracle.  :func:`classify_decay` decides whether ``|f(x)| <= C/|x|`` or
``C/|x|**2`` holds on a sample grid, and :func:`detect_breakpoints` locates
the points where ``f`` stops being monotone.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Optional

import numpy as np

from .errors import CapabilityError, DomainError, EvaluationError

__all__ = [
    "FunctionDescriptor",
    "DecayReport",
    "OscillationReport",
    "classify_decay",
    "detect_breakpoints",
    "check_finite",
    "DECAY_SLACK",
    "BISECTION_WIDTH",
]

#: slack on fitted decay exponents when assigning a decay class
DECAY_SLACK = 0.1
#: final bracket width of breakpoint refinement
BISECTION_WIDTH = 1e-10

Real = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class FunctionDescriptor:
    """A real function ``f`` with optional derivatives and analytic metadata.

    Evaluators must accept numpy arrays and act elementwise.  ``sup_norms``
    holds ``(|f|_inf, |f'|_inf, |f''|_inf, |f'''|_inf)``; unknown entries
    are ``None``.
    """

    name: str
    eval: Real
    deriv1: Optional[Real] = None
    deriv2: Optional[Real] = None
    deriv3: Optional[Real] = None
    sup_norms: tuple = (None, None, None, None)
    closed_form_transform: Optional[Callable[[np.ndarray], np.ndarray]] = None
    metadata: dict = field(default_factory=dict, compare=False)

    def __call__(self, x):
        return self.eval(np.asarray(x, dtype=float))

    def derivative_evaluator(self, order: int) -> Optional[Real]:
        if order == 0:
            return self.eval
        return (self.deriv1, self.deriv2, self.deriv3)[order - 1]

    def norm(self, order: int) -> Optional[float]:
        return self.sup_norms[order]

    def derivative(self) -> "FunctionDescriptor":
        """Descriptor of ``f'``, shifting every derivative down one order."""
        if self.deriv1 is None:
            raise CapabilityError(f"{self.name}: deriv1 is required to form f'")
        cf = None
        if self.closed_form_transform is not None:
            g = self.closed_form_transform
            cf = lambda k, g=g: 1j * np.asarray(k) * g(k)
        norms = tuple(self.sup_norms[1:]) + (None,)
        return FunctionDescriptor(
            name=f"{self.name}'",
            eval=self.deriv1,
            deriv1=self.deriv2,
            deriv2=self.deriv3,
            deriv3=None,
            sup_norms=norms,
            closed_form_transform=cf,
            metadata=dict(self.metadata),
        )

    def scaled(self, alpha: float) -> "FunctionDescriptor":
        """Descriptor of ``alpha * f``."""
        a = float(alpha)

        def mul(fn):
            return None if fn is None else (lambda x, fn=fn: a * fn(x))

        norms = tuple(None if s is None else abs(a) * s for s in self.sup_norms)
        cf = mul(self.closed_form_transform)
        return replace(
            self,
            name=f"{a!r}*{self.name}",
            eval=mul(self.eval),
            deriv1=mul(self.deriv1),
            deriv2=mul(self.deriv2),
            deriv3=mul(self.deriv3),
            sup_norms=norms,
            closed_form_transform=cf,
        )


@dataclass(frozen=True)
class DecayReport:
    decay_class: str  # very_moderate | moderate | faster | none
    constant_C: float
    exponent_p: float
    grid_max_abs_x: float

    @property
    def class_exponent(self) -> int:
        return 2 if self.decay_class in ("moderate", "faster") else 1

    def bound(self, x):
        """Envelope ``C/|x|**p_class`` valid for ``|x| > 1``."""
        return self.constant_C / np.abs(x) ** self.class_exponent


@dataclass(frozen=True)
class OscillationReport:
    breakpoints: tuple
    kind: str  # non_oscillatory | oscillatory | undetermined
    delta: Optional[float]
    core_radius_E: float
    core_max_K: float


def check_finite(values, xs, name="f"):
    """Raise :class:`EvaluationError` naming the first non-finite sample."""
    values = np.asarray(values)
    bad = ~np.isfinite(values)
    if np.any(bad):
        x0 = float(np.asarray(xs).ravel()[np.argmax(bad.ravel())])
        raise EvaluationError(f"{name} is not finite at x={x0!r}", where=x0)
    return values


def classify_decay(f: FunctionDescriptor, grid_max: float, grid_points: int) -> DecayReport:
    """Fit the power-law decay of ``f`` and assign the decay class.

    The exponent is the least-squares slope of ``log|f|`` against
    ``-log|x|`` over ``grid_max/10 <= |x| <= grid_max``.  Samples are
    geometric on ``1 < |x| <= grid_max`` on both sides.
    """
    if not grid_max > 1:
        raise DomainError(f"grid_max must exceed 1, got {grid_max!r}")
    if grid_points < 2:
        raise DomainError("grid_points must be at least 2")
    pos = np.geomspace(1.0, grid_max, int(grid_points) + 1)[1:]
    xs = np.concatenate([-pos[::-1], pos])
    core = np.linspace(-1.0, 1.0, 65)
    check_finite(f(core), core, f.name)
    vals = check_finite(f(xs), xs, f.name)
    absf = np.abs(vals)
    absx = np.abs(xs)

    sel = (absx >= grid_max / 10) & (absf > 1e-300)
    if np.count_nonzero(sel) >= 2 and np.ptp(absx[sel]) > 0:
        slope = np.polyfit(-np.log(absx[sel]), np.log(absf[sel]), 1)[0]
        p = float(slope)
    else:
        p = math.inf

    if p >= 3:
        cls = "faster"
    elif p >= 2 - DECAY_SLACK:
        cls = "moderate"
    elif p >= 1 - DECAY_SLACK:
        cls = "very_moderate"
    else:
        cls = "none"
    q = 2 if cls in ("moderate", "faster") else 1
    C = float(np.max(absx**q * absf)) if absf.size else 0.0
    return DecayReport(cls, C, p, float(grid_max))


def _refine(d1, lo, hi, slo):
    lo = lo.copy()
    hi = hi.copy()
    for _ in range(200):
        if not np.any(hi - lo > BISECTION_WIDTH):
            break
        mid = 0.5 * (lo + hi)
        sm = np.sign(d1(mid))
        exact = sm == 0
        left = (sm != slo) & ~exact
        hi = np.where(left | exact, mid, hi)
        lo = np.where(~left | exact, mid, lo)
    return 0.5 * (lo + hi)


def detect_breakpoints(f: FunctionDescriptor, scan_radius: float, step: float) -> OscillationReport:
    """Locate sign changes of ``f'`` on ``[-scan_radius, scan_radius]``.

    Brackets come from consecutive nonzero samples of ``f'`` with opposite
    signs and are bisected to width ``BISECTION_WIDTH``.  Zero samples of
    ``f'`` are skipped, so a double root such as ``x = 0`` for ``x**3`` is
    not reported.  A run of two or more zero samples between opposite
    signs cannot be located and makes the report ``undetermined``.
    """
    if f.deriv1 is None:
        raise CapabilityError(f"{f.name}: detect_breakpoints needs deriv1")
    if not (scan_radius > 0 and step > 0):
        raise DomainError("scan_radius and step must be positive")
    if not step < scan_radius / 10:
        raise DomainError("step must be below scan_radius/10")

    n = int(round(2 * scan_radius / step)) + 1
    xs = np.linspace(-scan_radius, scan_radius, n)
    d = check_finite(f.deriv1(xs), xs, f"{f.name}'")
    s = np.sign(d)
    nz = np.flatnonzero(s)
    undetermined = False
    brackets = []
    for i, j in zip(nz[:-1], nz[1:]):
        if s[i] != s[j]:
            if j - i > 2:
                undetermined = True
            brackets.append((i, j))

    if brackets:
        lo = np.array([xs[i] for i, _ in brackets])
        hi = np.array([xs[j] for _, j in brackets])
        slo = np.array([s[i] for i, _ in brackets])
        ys = _refine(f.deriv1, lo, hi, slo)
        # a zero sample sitting exactly on the root
        for idx, (i, j) in enumerate(brackets):
            if j - i == 2:
                ys[idx] = xs[i + 1]
        ys = np.unique(ys)
    else:
        ys = np.empty(0)

    outer = 0.8 * scan_radius
    outer_change = bool(np.any(np.abs(ys) > outer))
    gaps = np.diff(ys)
    delta = float(gaps.min()) if gaps.size else None

    if undetermined:
        kind = "undetermined"
    elif not outer_change:
        kind = "non_oscillatory"
    elif delta is not None:
        kind = "oscillatory"
    else:
        kind = "undetermined"

    E = max(1.0, 1.1 * float(np.max(np.abs(ys)))) if ys.size else 1.0
    core = np.linspace(-E, E, max(2001, int(math.ceil(2 * E / step)) + 1))
    core = np.concatenate([core, ys[np.abs(ys) <= E]])
    K = float(np.max(np.abs(check_finite(f(core), core, f.name))))
    return OscillationReport(tuple(float(y) for y in ys), kind, delta, E, K)
