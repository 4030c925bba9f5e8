"""Best unbiased estimation under convex losses.

Competitors of ``T`` are the statistics ``S = T + H`` with ``H`` unbiased for
zero. :func:`check_ubue` samples such competitors and compares risks;
:func:`check_derivative_implication` is the exact test that ``H`` unbiased
for zero implies ``λ'(T) H`` is too.
"""

from __future__ import annotations

import math
import random
from bisect import bisect_right
from math import lcm
from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg
from .characterize import Decision
from .model import e0_basis, in_e0, to_float

KINDS = ("square", "power4", "exponential", "custom-table")


class UnsupportedLossError(ValueError):
    pass


@dataclass(frozen=True)
class LossSpec:
    """A θ-free convex loss ``λ(t)``.

    ``square`` is t², ``power4`` is t⁴ + t², ``exponential`` is eᵗ, and
    ``custom-table`` interpolates the given ``(t, λ(t))`` points linearly,
    extending the end segments beyond the table.
    """

    kind: str = "square"
    table: tuple = ()

    def __post_init__(self):
        if self.kind not in KINDS:
            raise UnsupportedLossError(f"unknown loss {self.kind!r}")
        if self.kind == "custom-table":
            pts = sorted(self.table)
            if len(pts) < 2 or len({t for t, _ in pts}) != len(pts):
                raise ValueError("custom loss needs at least two points with distinct t")
            slopes = [(b[1] - a[1]) / (b[0] - a[0]) for a, b in zip(pts, pts[1:])]
            if any(s2 < s1 for s1, s2 in zip(slopes, slopes[1:])):
                raise ValueError("custom loss table is not convex")
            object.__setattr__(self, "table", tuple(pts))

    @property
    def rational(self) -> bool:
        """Whether the loss maps rationals to rationals."""
        if self.kind == "custom-table":
            return all(not isinstance(v, float) for pt in self.table for v in pt)
        return self.kind != "exponential"

    @property
    def differentiable(self) -> bool:
        return self.kind != "custom-table"

    def __call__(self, t):
        if self.kind == "square":
            return t * t
        if self.kind == "power4":
            return t ** 4 + t * t
        if self.kind == "exponential":
            return math.exp(t)
        pts = self.table
        i = min(max(bisect_right([p[0] for p in pts], t) - 1, 0), len(pts) - 2)
        (t0, v0), (t1, v1) = pts[i], pts[i + 1]
        return v0 + (v1 - v0) * (t - t0) / (t1 - t0)

    def derivative(self, t):
        if self.kind == "square":
            return 2 * t
        if self.kind == "power4":
            return 4 * t ** 3 + 2 * t
        if self.kind == "exponential":
            return math.exp(t)
        raise UnsupportedLossError("custom-table losses have no derivative")


def _working_model(m, loss):
    base = m.base
    if base.arithmetic.exact and not loss.rational:
        return to_float(base), True
    return base, False


def _e0(m, downgraded):
    # Exact basis first, converted afterwards, so competitors stay in E0 up to rounding.
    basis = e0_basis(m.base)
    return [tuple(float(h) for h in H) for H in basis] if downgraded else basis


def risk(m, T, loss: LossSpec, theta: int):
    """``Σ_x λ(T(x)) p_{θ,x}``; exponential loss is evaluated in floats."""
    base, _ = _working_model(m, loss)
    T = [float(t) for t in T] if not base.arithmetic.exact else base.statistic(T)
    row = base.rows[theta]
    return sum((loss(t) * p for t, p in zip(T, row)), base.zero())


@dataclass
class RiskReport:
    theta_labels: tuple
    risk_T: list
    competitors: list = field(default_factory=list)
    margin: object = None
    holds: bool = True
    violating: int | None = None
    seed: int = 42
    directions: int = 100
    radius: object = 1
    arithmetic: str = "rational"
    downgraded: bool = False

    def __bool__(self):
        return self.holds

    def to_json(self) -> dict:
        fmt = linalg.format_scalar
        return {
            "decision": "yes" if self.holds else "no",
            "arithmetic": self.arithmetic,
            "arithmetic_downgraded": self.downgraded,
            "seed": self.seed,
            "directions": self.directions,
            "radius": fmt(self.radius),
            "margin": None if self.margin is None else fmt(self.margin),
            "violating_competitor": self.violating,
            "risk_T": {lab: fmt(r) for lab, r in zip(self.theta_labels, self.risk_T)},
            "competitors": [
                {
                    "kind": c["kind"],
                    "coefficients": [fmt(v) for v in c["coefficients"]],
                    "risk": {lab: fmt(r) for lab, r in zip(self.theta_labels, c["risk"])},
                }
                for c in self.competitors
            ],
        }


def _risks(base, T, loss):
    vals = [loss(t) for t in T]
    z = base.zero()
    return [sum((v * p for v, p in zip(vals, row)), z) for row in base.rows]


class _IntRisks:
    """Exact risks of polynomial losses on Python integers.

    Each statistic is brought to one common denominator ``D`` and each pmf
    row to its own, so a risk costs integer multiply-adds and one Fraction.
    """

    def __init__(self, base, loss, basis):
        self.kind = loss.kind
        self.rows = []
        for row in base.rows:
            q = lcm(*(p.denominator for p in row))
            self.rows.append(([p.numerator * (q // p.denominator) for p in row], q))
        self.basis = []
        for H in basis:
            d = lcm(*(h.denominator for h in H))
            self.basis.append(([h.numerator * (d // h.denominator) for h in H], d))

    def combine(self, T, c):
        """Numerators and common denominator of ``T + Σ c_i H_i``."""
        dens = [ci.denominator * d for ci, (_, d) in zip(c, self.basis)]
        D = lcm(*(t.denominator for t in T), *dens)
        N = [t.numerator * (D // t.denominator) for t in T]
        for ci, den, (H, _) in zip(c, dens, self.basis):
            if ci:
                f = ci.numerator * (D // den)
                N = [a + f * h for a, h in zip(N, H)]
        return N, D

    def risks(self, N, D):
        """Unreduced ``(numerator, denominator)`` pairs, one per parameter."""
        if self.kind == "square":
            vals, scale = [a * a for a in N], D * D
        else:
            D2 = D * D
            vals, scale = [a * a * (a * a + D2) for a in N], D2 * D2
        return [(sum(v * p for v, p in zip(vals, row) if p), q * scale) for row, q in self.rows]


def _coefficients(rng, k, radius, exact):
    """Random coefficient vector with largest entry ``radius`` in absolute value."""
    raw = [rng.gauss(0.0, 1.0) for _ in range(k)]
    top = max(abs(v) for v in raw) or 1.0
    if exact:
        # dyadic rationals keep the denominators small
        q = [round(v * 1024) for v in raw]
        top_q = max(abs(v) for v in q) or 1
        num, den = radius.numerator, radius.denominator * top_q
        return [Fraction(v * num, den) for v in q]
    return [v * radius / top for v in raw]


def check_ubue(m, T, loss: LossSpec | None = None, directions: int = 100,
               radius=1, seed: int = 42, tolerance: float = linalg.DEFAULT_TOLERANCE) -> RiskReport:
    """Compare the risk of ``T`` with competitors ``T + Σ c_i H_i``.

    Competitors are ``directions`` random coefficient vectors over the basis
    of unbiased estimators of zero, scaled so the largest coefficient is
    ``radius``, followed by axis probes: ``±radius`` along each basis vector
    and, for each parameter, the step along each basis vector minimizing the
    second moment there. Slack is zero for rational losses on exact models,
    and ``tolerance`` relative to the risk of ``T`` otherwise.
    """
    loss = loss or LossSpec("square")
    base, downgraded = _working_model(m, loss)
    exact = base.arithmetic.exact
    T = base.statistic([float(t) for t in T] if not exact else T)
    if exact:
        radius = Fraction(str(radius)) if isinstance(radius, float) else Fraction(radius)
    else:
        radius = float(radius)
    basis = _e0(m, downgraded)
    rT = _risks(base, T, loss)
    report = RiskReport(base.theta_labels, rT, seed=seed, directions=directions, radius=radius,
                        arithmetic=base.arithmetic.name, downgraded=downgraded)
    if not basis:
        return report
    k, n = len(basis), base.n_samples
    rng = random.Random(seed)
    cands = []
    for _ in range(directions):
        cands.append(("random", _coefficients(rng, k, radius, exact)))
    zero = base.zero()
    for i in range(k):
        for sgn in (1, -1):
            c = [zero] * k
            c[i] = sgn * radius
            cands.append(("axis", c))
    for i, H in enumerate(basis):
        for row in base.rows:
            num = sum((t * h * p for t, h, p in zip(T, H, row)), zero)
            den = sum((h * h * p for h, p in zip(H, row)), zero)
            if num != 0 and den != 0:
                c = [zero] * k
                c[i] = -num / den
                cands.append(("line-search", c))
    fast = _IntRisks(base, loss, basis) if exact and loss.kind in ("square", "power4") else None
    margin = None
    if fast is not None:
        # exact comparisons by cross-multiplication; the margin is the least gap
        pairs_T = [(r.numerator, r.denominator) for r in rT]
        best = None
        for idx, (kind, c) in enumerate(cands):
            pairs_S = fast.risks(*fast.combine(T, c))
            report.competitors.append({"kind": kind, "coefficients": c,
                                       "risk": [Fraction(a, b) for a, b in pairs_S]})
            for (ta, tb), (sa, sb) in zip(pairs_T, pairs_S):
                gap = (sa * tb - ta * sb, sb * tb)
                if best is None or gap[0] * best[1] < best[0] * gap[1]:
                    best = gap
                if gap[0] < 0 and report.holds:
                    report.holds = False
                    report.violating = idx
        report.margin = Fraction(*best)
        return report
    for idx, (kind, c) in enumerate(cands):
        S = [T[x] + sum((c[i] * basis[i][x] for i in range(k)), zero) for x in range(n)]
        rS = _risks(base, S, loss)
        report.competitors.append({"kind": kind, "coefficients": c, "risk": rS})
        for a, b in zip(rT, rS):
            gap = b - a
            margin = gap if margin is None or gap < margin else margin
            slack = 0 if exact else tolerance * max(1.0, abs(a))
            if gap < -slack and report.holds:
                report.holds = False
                report.violating = idx
    report.margin = margin
    return report


def check_derivative_implication(m, T, loss: LossSpec):
    """Whether ``λ'(T) H`` is unbiased for zero for every basis vector ``H``."""
    if not loss.differentiable:
        raise UnsupportedLossError(f"{loss.kind} loss has no derivative")
    base, downgraded = _working_model(m, loss)
    exact = base.arithmetic.exact
    T = base.statistic([float(t) for t in T] if not exact else T)
    D = [loss.derivative(t) for t in T]
    for H in _e0(m, downgraded):
        DH = tuple(d * h for d, h in zip(D, H))
        if not in_e0(base, DH):
            return Decision(False, tuple(x for x, h in enumerate(H) if h != 0),
                            "λ'(T)·H is not unbiased for zero")
    return Decision(True)


__all__ = [
    "KINDS",
    "LossSpec",
    "RiskReport",
    "UnsupportedLossError",
    "check_derivative_implication",
    "check_ubue",
    "risk",
]
