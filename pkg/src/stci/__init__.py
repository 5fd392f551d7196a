"""Explicit set-theoretic complete intersection equations for recursive
extensions of monomial curves, with independent verification oracles."""

from .equations import (
    BuildDiagnostics,
    EquationSystem,
    NotPolynomialError,
    SpliceSpec,
    build_f1,
    build_fi,
    build_general_splice,
    build_system,
    find_valid_n,
    rational_normal_splice,
    splice_from_pair,
)
from .polyring import Poly, bi_degree, evaluate, graded_pieces, to_latex, to_text
from .semigroup import (
    CurveSpec,
    DecompositionPair,
    PositiveDecomposition,
    SelectionPolicy,
    SignedDecomposition,
    enumerate_curves,
    enumerate_decompositions,
    normalize_decomposition,
    proposition_theta,
    select_decomposition,
    to_signed,
    validate_curve,
)
from .verify import FiniteFieldConfig, VerificationReport, full_verify

__version__ = "0.1.0"
