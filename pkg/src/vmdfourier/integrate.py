"""Vectorised adaptive Gauss-Legendre integration over many intervals.

Every panel is integrated with a 20-point and a 10-point Gauss-Legendre
rule; ``|Q20 - Q10|`` serves as a (pessimistic) error estimate for Q20.
Panels are bisected until each meets its share of the tolerance, and all
panels of one refinement round share a single vectorised evaluation.
"""
from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

__all__ = ["integrate_intervals", "integrate", "EPS"]

EPS = np.finfo(float).eps


@lru_cache(maxsize=None)
def _rule(n):
    x, w = np.polynomial.legendre.leggauss(n)
    return x, w


def integrate_intervals(func, a, b, *, atol=0.0, rtol=1e-10, max_rounds=48, min_width=0.0,
                        max_panels=1 << 17):
    """Integrate ``func`` over each ``[a[i], b[i]]``.

    ``func`` maps a 1-D array of abscissae to values (real or complex) of
    the same length.  An interval ``i`` is accepted piecewise once each of
    its panels satisfies ``err <= max(atol_i * w/width_i, rtol * Q_abs)``
    where ``atol_i`` is ``atol`` (scalar or per interval) and ``Q_abs`` is
    the panel integral of ``|func|``.  Refinement stops once a round would
    exceed ``max_panels``; the remaining panels are accepted with their
    error estimates.

    Returns ``(values, errors, abs_values)``: per-interval integrals, error
    estimates (including a rounding floor) and integrals of ``|func|``.
    """
    a = np.atleast_1d(np.asarray(a, dtype=float))
    b = np.atleast_1d(np.asarray(b, dtype=float))
    nint = a.size
    atol = np.broadcast_to(np.asarray(atol, dtype=float), (nint,))
    width0 = b - a

    x20, w20 = _rule(20)
    x10, w10 = _rule(10)
    nodes = np.concatenate([x20, x10])

    owner = np.arange(nint)
    pa, pb = a.copy(), b.copy()
    vals_dtype = np.dtype(float)
    errs = np.zeros(nint)
    absv = np.zeros(nint)
    acc_parts = []

    for rnd in range(max_rounds + 1):
        if pa.size == 0:
            break
        mid = 0.5 * (pa + pb)
        half = 0.5 * (pb - pa)
        xs = mid[:, None] + half[:, None] * nodes[None, :]
        fx = np.asarray(func(xs.ravel())).reshape(xs.shape)
        q20 = half * (fx[:, :20] @ w20)
        q10 = half * (fx[:, 20:] @ w10)
        qa = half * (np.abs(fx[:, :20]) @ w20)
        e = np.abs(q20 - q10)
        share = atol[owner] * np.where(width0[owner] > 0, (pb - pa) / width0[owner], 1.0)
        ok = (e <= np.maximum(share, rtol * qa)) | (rnd == max_rounds) | (2 * pa.size > max_panels)
        ok |= (pb - pa) <= np.maximum(min_width, 64 * EPS * np.maximum(np.abs(pa), np.abs(pb)))
        vals_dtype = np.result_type(q20.dtype, vals_dtype)
        acc_parts.append((owner[ok], q20[ok], e[ok], qa[ok]))
        bad = ~ok
        if not np.any(bad):
            break
        oa, ob, oo = pa[bad], pb[bad], owner[bad]
        om = 0.5 * (oa + ob)
        pa = np.concatenate([oa, om])
        pb = np.concatenate([om, ob])
        owner = np.concatenate([oo, oo])

    o = np.concatenate([p[0] for p in acc_parts])
    q = np.concatenate([p[1] for p in acc_parts])
    e = np.concatenate([p[2] for p in acc_parts])
    qa = np.concatenate([p[3] for p in acc_parts])
    order = np.argsort(o, kind="stable")
    o, q, e, qa = o[order], q[order], e[order], qa[order]
    bounds = np.searchsorted(o, np.arange(nint + 1))
    out = np.zeros(nint, dtype=vals_dtype)
    for i in range(nint):
        sl = slice(bounds[i], bounds[i + 1])
        if np.iscomplexobj(q):
            out[i] = complex(math.fsum(q[sl].real), math.fsum(q[sl].imag))
        else:
            out[i] = math.fsum(q[sl])
    np.add.at(errs, o, e)
    np.add.at(absv, o, qa)
    errs += 32 * EPS * absv
    return out, errs, absv


def integrate(func, edges, *, atol=0.0, rtol=1e-10, **kw):
    """Integral of ``func`` over ``[edges[0], edges[-1]]`` with forced knots at ``edges``.

    Returns ``(value, error_estimate)``.  ``atol`` is split across the
    panels in proportion to their width.
    """
    edges = np.asarray(edges, dtype=float)
    a, b = edges[:-1], edges[1:]
    total = float(edges[-1] - edges[0]) or 1.0
    v, e, _ = integrate_intervals(func, a, b, atol=atol * (b - a) / total, rtol=rtol, **kw)
    if np.iscomplexobj(v):
        val = complex(math.fsum(v.real), math.fsum(v.imag))
    else:
        val = math.fsum(v)
    return val, float(np.sum(e))
