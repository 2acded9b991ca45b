"""Verification pipeline for the Mean Value Theorem and Rolle's special case.

Checks applicability (continuity on [a,b], differentiability on (a,b)),
computes the secant slope m = (f(b) - f(a)) / (b - a), and locates a point
c in (a, b) with f'(c) = m by sign-change bracketing and bisection.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .calculus import SmoothnessReport, Verdict, analyze_smoothness, differentiate
from .expr import DomainError, Expr, compile_evaluator, evaluate
from .numeric import (
    DEFAULT_MAX_ITER,
    Interval,
    MaxIterationsExceeded,
    _first_bracket,
    _opposite_or_zero,
    bisect,
    sample,
)

__all__ = [
    "Config",
    "Method",
    "Reason",
    "MvtResult",
    "Applicable",
    "NotApplicable",
    "Unknown",
    "secant_slope",
    "verify_mvt",
    "verify_rolle",
]

_GOLDEN_STEPS = 64
_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True, slots=True)
class Config:
    """Numerical policy for the verification pipeline.

    eps_c      target bracket width for the bisection stage
    eps_res    acceptance tolerance on the residual |f'(c) - m|
    samples    uniform sample count for smoothness and root scans
    fd_step    step for finite-difference cross-checks of the derivative
    eps_rolle  relative tolerance on |f(a) - f(b)| in Rolle mode
    """

    eps_c: float = 1e-10
    eps_res: float = 1e-8
    samples: int = 1024
    fd_step: float = 1e-5
    eps_rolle: float = 1e-12

    def __post_init__(self):
        for name in ("eps_c", "eps_res", "fd_step", "eps_rolle"):
            if not getattr(self, name) > 0.0:
                raise ValueError(f"{name} must be positive")
        if self.samples < 2:
            raise ValueError("samples must be at least 2")


class Method(Enum):
    BRACKET_BISECT = "bracket_bisect"
    DEGENERATE_CONSTANT = "degenerate_constant"
    RESIDUAL_MIN = "residual_min"


class Reason(Enum):
    NOT_CONTINUOUS = "not_continuous"
    NOT_DIFFERENTIABLE = "not_differentiable"
    UNDEFINED = "undefined"
    ROLLE_PRECONDITION_FAILED = "rolle_precondition_failed"


class MvtResult:
    """Base class of the verification outcome variants."""

    __slots__ = ()


@dataclass(frozen=True, slots=True)
class Applicable(MvtResult):
    c: float
    m: float
    f_prime_at_c: float
    residual: float
    iterations: int
    method: Method


@dataclass(frozen=True, slots=True)
class NotApplicable(MvtResult):
    reason: Reason
    witness: float | None = None


@dataclass(frozen=True, slots=True)
class Unknown(MvtResult):
    detail: str


def secant_slope(f: Expr, iv: Interval) -> float:
    """Average rate of change (f(b) - f(a)) / (b - a).

    Raises DomainError when f is undefined at an endpoint.
    """
    return (evaluate(f, iv.b) - evaluate(f, iv.a)) / (iv.b - iv.a)


def verify_mvt(f: Expr, iv: Interval, cfg: Config | None = None) -> MvtResult:
    """Verify the Mean Value Theorem for ``f`` on ``iv``.

    Returns Applicable with a point c in (a,b) where |f'(c) - m| is within
    tolerance, NotApplicable with a reason and witness when a precondition
    fails, or Unknown when neither can be established.
    """
    return _pipeline(f, iv, cfg or Config(), None)


def verify_rolle(f: Expr, iv: Interval, cfg: Config | None = None) -> MvtResult:
    """Verify Rolle's theorem: requires f(a) = f(b), then seeks f'(c) = 0.

    Runs the Mean Value Theorem pipeline with the slope forced to exactly
    zero, Rolle's theorem being the m = 0 special case.
    """
    cfg = cfg or Config()
    try:
        fa = evaluate(f, iv.a)
        fb = evaluate(f, iv.b)
    except DomainError as err:
        return NotApplicable(Reason.UNDEFINED, err.point)
    if abs(fa - fb) > cfg.eps_rolle * max(1.0, abs(fa), abs(fb)):
        return NotApplicable(Reason.ROLLE_PRECONDITION_FAILED)
    return _pipeline(f, iv, cfg, 0.0)


def _witness_point(report: SmoothnessReport, iv: Interval, interior: bool) -> float | None:
    for w in report.witnesses:
        if not interior or iv.contains_open(w.point):
            return w.point
    if report.witnesses:
        return report.witnesses[0].point
    return None


def _pipeline(f: Expr, iv: Interval, cfg: Config, m_forced: float | None) -> MvtResult:
    report = analyze_smoothness(f, iv, cfg)
    if report.continuous_on_closed is Verdict.NO:
        return NotApplicable(Reason.NOT_CONTINUOUS, _witness_point(report, iv, False))
    if report.continuous_on_closed is Verdict.UNKNOWN:
        return Unknown("continuity on the closed interval could not be confirmed")
    if report.differentiable_on_open is Verdict.NO:
        return NotApplicable(Reason.NOT_DIFFERENTIABLE, _witness_point(report, iv, True))
    if report.differentiable_on_open is Verdict.UNKNOWN:
        return Unknown("differentiability on the open interval could not be confirmed")

    if m_forced is None:
        try:
            m = secant_slope(f, iv)
        except DomainError as err:
            return NotApplicable(Reason.UNDEFINED, err.point)
    else:
        m = m_forced

    deriv = compile_evaluator(differentiate(f))

    def g(t: float) -> float:
        return deriv(t) - m

    # the theorem promises c strictly inside (a,b): inset by half a step
    step = iv.width / cfg.samples
    inner = Interval(iv.a + 0.5 * step, iv.b - 0.5 * step)
    pts = sample(g, inner, cfg.samples)
    valid = [p for p in pts if p.error is None]
    if not valid:
        return Unknown("derivative undefined at every interior sample point")

    if max(abs(p.value) for p in valid) <= cfg.eps_res:
        # f' == m everywhere at sample resolution: any interior point
        # works, the midpoint is deterministic and symmetric
        c = 0.5 * (iv.a + iv.b)
        try:
            fpc = deriv(c)
        except DomainError:
            fpc = None
        if fpc is not None and abs(fpc - m) <= cfg.eps_res:
            return Applicable(c, m, fpc, abs(fpc - m), 0, Method.DEGENERATE_CONSTANT)

    br = _first_bracket(pts)
    if br is not None:
        try:
            root, state = bisect(g, br, cfg.eps_c, DEFAULT_MAX_ITER)
            c, fpc, residual, extra = _tighten_residual(deriv, m, root, state, cfg)
        except (DomainError, MaxIterationsExceeded):
            return Unknown("bisection failed inside the located bracket")
        if residual <= cfg.eps_res:
            return Applicable(c, m, fpc, residual, state.iterations + extra, Method.BRACKET_BISECT)
        return Unknown(
            f"sign change located but residual {residual:.3e} stays above tolerance"
        )

    best_idx = min(
        (i for i, p in enumerate(pts) if p.error is None),
        key=lambda i: abs(pts[i].value),
    )
    lo = pts[best_idx - 1].x if best_idx > 0 else inner.a
    hi = pts[best_idx + 1].x if best_idx + 1 < len(pts) else inner.b
    c, fpc, residual, steps = _golden_min(
        deriv, m, lo, hi, pts[best_idx].x, pts[best_idx].value
    )
    if residual <= cfg.eps_res:
        return Applicable(c, m, fpc, residual, steps, Method.RESIDUAL_MIN)
    return Unknown(
        f"no sign change at sample resolution; smallest residual {residual:.3e} exceeds tolerance"
    )


def _tighten_residual(deriv, m, root, state, cfg, max_extra=DEFAULT_MAX_ITER):
    """Keep halving the final bracket until the residual meets eps_res.

    Bisection to width eps_c bounds |c - root| but not |f'(c) - m|; for
    steep derivatives a few extra halvings are needed before the soundness
    bound holds.  Stops at the binary64 resolution floor.
    """
    fpc = deriv(root)
    residual = abs(fpc - m)
    left, right = state.c_left, state.c_right
    g_left = deriv(left) - m
    extra = 0
    while residual > cfg.eps_res and extra < max_extra:
        mid = 0.5 * (left + right)
        if mid <= left or mid >= right:
            break
        dm = deriv(mid)
        extra += 1
        gm = dm - m
        if abs(gm) < residual:
            root, fpc, residual = mid, dm, abs(gm)
        if gm == 0.0:
            break
        if _opposite_or_zero(g_left, gm):
            right = mid
        else:
            left, g_left = mid, gm
    return root, fpc, residual, extra


def _golden_min(deriv, m, lo, hi, seed_x, seed_g):
    """Golden-section shrink of |f'(t) - m| around the best sample."""
    best_t, best_fp, best_res = seed_x, seed_g + m, abs(seed_g)

    def probe(t):
        nonlocal best_t, best_fp, best_res
        try:
            fp = deriv(t)
        except DomainError:
            return math.inf
        r = abs(fp - m)
        if r < best_res:
            best_t, best_fp, best_res = t, fp, r
        return r

    h = hi - lo
    x1 = hi - _INVPHI * h
    x2 = lo + _INVPHI * h
    r1 = probe(x1)
    r2 = probe(x2)
    steps = 0
    while steps < _GOLDEN_STEPS and hi - lo > 0.0:
        if r1 <= r2:
            hi, x2, r2 = x2, x1, r1
            h = hi - lo
            x1 = hi - _INVPHI * h
            r1 = probe(x1)
        else:
            lo, x1, r1 = x1, x2, r2
            h = hi - lo
            x2 = lo + _INVPHI * h
            r2 = probe(x2)
        steps += 1
    # recompute at the winner so residual == |f_prime_at_c - m| holds exactly
    best_fp = deriv(best_t)
    return best_t, best_fp, abs(best_fp - m), steps
