"""Built-in test functions with derivatives, sup norms and transform pairs.

Transforms use the unitary convention
``F(f)(k) = (2*pi)**-0.5 * integral f(y) exp(-i k y) dy``.
"""
from __future__ import annotations

import numpy as np
from scipy.special import exp1

from .errors import UnknownFunctionError
from .funcmodel import FunctionDescriptor

__all__ = ["CORPUS", "get_function", "zero_function", "corpus_names"]

_SQ = np.sqrt(np.pi / 2)
_R2 = np.sqrt(2.0)


def _up(v):
    # sup norms are stored as upper bounds; nudge sampled maxima upward
    return float(v) * (1 + 1e-12)


def _runge():
    def f(x):
        return 1.0 / (1.0 + x * x)

    def d1(x):
        return -2.0 * x / (1.0 + x * x) ** 2

    def d2(x):
        return 2.0 * (3.0 * x * x - 1.0) / (1.0 + x * x) ** 3

    def d3(x):
        return -24.0 * x * (x * x - 1.0) / (1.0 + x * x) ** 4

    return FunctionDescriptor(
        "runge", f, d1, d2, d3,
        sup_norms=(1.0, _up(9 / (8 * np.sqrt(3))), 2.0, _up(4.668559284155214)),
        closed_form_transform=lambda k: _SQ * np.exp(-np.abs(k)) + 0j,
        metadata={"parity": "even", "analytic_at_infinity": True},
    )


def _odd_vmd():
    def f(x):
        x2 = x * x
        return x * x2 / (1.0 + x2 * x2)

    def d1(x):
        x4 = x**4
        return x * x * (3.0 - x4) / (1.0 + x4) ** 2

    def d2(x):
        x4 = x**4
        return 2.0 * x * (x4 * x4 - 12.0 * x4 + 3.0) / (1.0 + x4) ** 3

    def d3(x):
        x4 = x**4
        return -6.0 * (x * x - 1.0) * (x * x + 1.0) * (x4 * x4 - 30.0 * x4 + 1.0) / (1.0 + x4) ** 4

    def F(k):
        k = np.asarray(k, dtype=float)
        a = np.abs(k) / _R2
        return -1j * np.sign(k) * _SQ * np.exp(-a) * np.cos(a)

    return FunctionDescriptor(
        "odd_vmd", f, d1, d2, d3,
        sup_norms=(_up(0.5698767642386945), _up(0.8800862965230436),
                   _up(2.014593096246771), _up(11.866304505992797)),
        closed_form_transform=F,
        metadata={"parity": "odd", "analytic_at_infinity": True},
    )


def _gauss():
    def f(x):
        return np.exp(-0.5 * x * x)

    def d1(x):
        return -x * np.exp(-0.5 * x * x)

    def d2(x):
        return (x * x - 1.0) * np.exp(-0.5 * x * x)

    def d3(x):
        return x * (3.0 - x * x) * np.exp(-0.5 * x * x)

    return FunctionDescriptor(
        "gauss", f, d1, d2, d3,
        sup_norms=(1.0, _up(np.exp(-0.5)), 1.0, _up(1.3801190461607493)),
        closed_form_transform=lambda k: np.exp(-0.5 * np.asarray(k, dtype=float) ** 2) + 0j,
        metadata={"parity": "even", "analytic_at_infinity": False},
    )


def _osc_parts(x):
    s, c = np.sin(x), np.cos(x)
    q = 1.0 + x * x
    return s, c, q


def _osc_deriv():
    def f(x):
        return np.sin(x) / (1.0 + x * x)

    def d1(x):
        s, c, q = _osc_parts(x)
        return (q * c - 2.0 * x * s) / q**2

    def d2(x):
        s, c, q = _osc_parts(x)
        return -(x**4 * s + 4 * x**3 * c - 4 * x**2 * s + 4 * x * c + 3 * s) / q**3

    def d3(x):
        s, c, q = _osc_parts(x)
        return -(x**6 * c - 6 * x**5 * s - 15 * x**4 * c + 12 * x**3 * s
                 - 9 * x**2 * c - 30 * x * s + 7 * c) / q**4

    def F(k):
        k = np.asarray(k, dtype=float)
        return -0.5j * _SQ * (np.exp(-np.abs(k - 1)) - np.exp(-np.abs(k + 1)))

    return FunctionDescriptor(
        "osc_deriv", f, d1, d2, d3,
        sup_norms=(_up(0.43741415827901003), 1.0, _up(1.6915361621298175), 7.0),
        closed_form_transform=F,
        metadata={"parity": "odd", "analytic_at_infinity": False},
    )


def _sin_tail_integral(x):
    """``integral_x^inf sin(t)/(1+t^2) dt`` for ``x >= 0`` via complex E1."""
    x = np.asarray(x, dtype=float)

    def J(a):
        return np.exp(1j * a) * exp1(-1j * (x - a))

    return ((J(1j) - J(-1j)) / 2j).imag


def _osc_antideriv():
    """Even antiderivative of ``sin(x)/(1+x^2)`` vanishing at infinity."""
    base = _osc_deriv()

    def f(x):
        return -_sin_tail_integral(np.abs(x))

    def F(k):
        k = np.asarray(k, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            return -(_SQ / (2 * k)) * (np.exp(-np.abs(k - 1)) - np.exp(-np.abs(k + 1))) + 0j

    return FunctionDescriptor(
        "osc_antideriv", f, base.eval, base.deriv1, base.deriv2,
        sup_norms=(_up(0.6467611227791303), base.sup_norms[0], base.sup_norms[1], base.sup_norms[2]),
        closed_form_transform=F,
        metadata={"parity": "even", "analytic_at_infinity": False},
    )


def zero_function() -> FunctionDescriptor:
    def z(x):
        return np.zeros_like(np.asarray(x, dtype=float))

    return FunctionDescriptor(
        "zero", z, z, z, z,
        sup_norms=(0.0, 0.0, 0.0, 0.0),
        closed_form_transform=lambda k: np.zeros_like(np.asarray(k, dtype=float)) + 0j,
        metadata={"parity": "even", "analytic_at_infinity": True},
    )


CORPUS = {
    "runge": _runge,
    "odd_vmd": _odd_vmd,
    "gauss": _gauss,
    "osc_deriv": _osc_deriv,
    "osc_antideriv": _osc_antideriv,
    "zero": zero_function,
}


def corpus_names():
    return sorted(CORPUS)


def get_function(name: str) -> FunctionDescriptor:
    try:
        return CORPUS[name]()
    except KeyError:
        raise UnknownFunctionError(
            f"unknown function {name!r}; corpus: {', '.join(corpus_names())}"
        ) from None
