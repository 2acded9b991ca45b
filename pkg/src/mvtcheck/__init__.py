"""Numerical verification of Rolle's theorem and the Mean Value Theorem.

Parse a function of x, check continuity/differentiability on an interval,
and locate a point c where f'(c) equals the secant slope::

    from mvtcheck import Interval, parse, verify_mvt

    result = verify_mvt(parse("sin(x)"), Interval(0.0, 1.5707963267948966))
"""

from .expr import (
    Binary,
    Call,
    Constant,
    DomainError,
    Expr,
    LexError,
    Neg,
    ParseError,
    Token,
    TokenKind,
    UnknownIdentifier,
    Variable,
    compile_evaluator,
    evaluate,
    format_expr,
    parse,
    tokenize,
)
from .numeric import (
    BisectionState,
    Bracket,
    Interval,
    MaxIterationsExceeded,
    SamplePoint,
    bisect,
    bracket_sign_change,
    central_difference,
    sample,
)
from .calculus import (
    SmoothnessReport,
    Verdict,
    Witness,
    WitnessKind,
    analyze_smoothness,
    differentiate,
    simplify,
)
from .theorem import (
    Applicable,
    Config,
    Method,
    MvtResult,
    NotApplicable,
    Reason,
    Unknown,
    secant_slope,
    verify_mvt,
    verify_rolle,
)

__version__ = "0.1.0"

__all__ = [
    "Applicable",
    "Binary",
    "BisectionState",
    "Bracket",
    "Call",
    "Config",
    "Constant",
    "DomainError",
    "Expr",
    "Interval",
    "LexError",
    "MaxIterationsExceeded",
    "Method",
    "MvtResult",
    "Neg",
    "NotApplicable",
    "ParseError",
    "Reason",
    "SamplePoint",
    "SmoothnessReport",
    "Token",
    "TokenKind",
    "Unknown",
    "UnknownIdentifier",
    "Variable",
    "Verdict",
    "Witness",
    "WitnessKind",
    "analyze_smoothness",
    "bisect",
    "bracket_sign_change",
    "central_difference",
    "compile_evaluator",
    "differentiate",
    "evaluate",
    "format_expr",
    "parse",
    "sample",
    "secant_slope",
    "simplify",
    "tokenize",
    "verify_mvt",
    "verify_rolle",
]
