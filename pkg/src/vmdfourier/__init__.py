"""Fourier transforms of slowly decaying functions with certified error bounds.

Submodules:

``funcmodel``
    function descriptors, decay classification, breakpoint detection
``corpus``
    named test functions with closed-form transforms
``taper``
    quintic boundary-matching tapers and compactly supported approximants
``quadrature``
    conditional, absolute and inverse transforms
``verify``
    measured checks of decay, convergence, inversion and isometry
``cli``
    command-line front end
"""
from .corpus import corpus_names, get_function
from .errors import (
    CapabilityError,
    CertificationError,
    DomainError,
    EvaluationError,
    ParseError,
    UnknownFunctionError,
    VMDError,
)
from .funcmodel import DecayReport, FunctionDescriptor, OscillationReport, classify_decay, detect_breakpoints
from .quadrature import (
    TransformResult,
    inverse_transform,
    plan_segments,
    transform_absolute,
    transform_conditional,
)
from .taper import Approximant, TaperPolynomial, build_approximant, build_taper

__version__ = "0.1.0"

__all__ = [
    "Approximant",
    "CapabilityError",
    "CertificationError",
    "DecayReport",
    "DomainError",
    "EvaluationError",
    "FunctionDescriptor",
    "OscillationReport",
    "ParseError",
    "TaperPolynomial",
    "TransformResult",
    "UnknownFunctionError",
    "VMDError",
    "build_approximant",
    "build_taper",
    "classify_decay",
    "corpus_names",
    "detect_breakpoints",
    "get_function",
    "inverse_transform",
    "plan_segments",
    "transform_absolute",
    "transform_conditional",
]
