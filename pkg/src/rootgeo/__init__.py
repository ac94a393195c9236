"""Exact root geometry of recursive polynomial sequences.

A type (0,1) sequence is ``W_n = a*W_{n-1} + (b*x + c)*W_{n-2}`` with
``W_0 = 1`` and ``W_1 = t*(x - r)``.  Roots are isolated in exact rational
brackets, landmarks are exact rationals or quadratic surds, and the
interlacing and limit statements about the zero sets are checked mechanically.
"""

from .errors import *  # noqa: F401,F403
from .geometry import (
    Landmarks,
    angle_side_test,
    classify_case,
    compute_landmarks,
    convergence_report,
    eventual_sign_test,
    isolate_general,
    isolate_roots_interlaced,
    sign_at_xB,
    sign_at_xDelta,
    sign_at_xg,
)
from .harness import (
    check_interlacing,
    verify_appendix_A,
    verify_conjecture,
    verify_criterion_step,
    verify_limits,
    verify_theorem_bounds,
    verify_theorem_RR,
)
from .poly import DensePoly
from .roots import IsolatedRoot, RootSet, count_real_roots, isolate_roots_bisection, sturm_chain
from .sequences import (
    ConstantRecurrenceSpec,
    RecurrenceSpec,
    closed_form_constant,
    eval_sequence_at,
    generate,
    generate_degree3,
    normalize,
)
from .surd import QuadraticSurd, surd_sign

__version__ = "0.1.0"
