"""Building UMVUEs: block-constant solves, conditional expectation, Rao-Blackwell."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg
from .characterize import (
    conditional_ratios,
    group_levels,
    is_complete,
    is_sufficient,
    is_umvue,
    sigma0,
)
from .linalg import Matrix
from .model import as_clean, expectation, likelihoods, null_samples, variance

FOUND = "found"
NO_UNBIASED_ESTIMATOR = "no_unbiased_estimator"
NO_UMVUE_EXISTS = "no_umvue_exists"


class NotSufficientError(ValueError):
    pass


class PreconditionError(ValueError):
    pass


@dataclass(frozen=True)
class ConstructionResult:
    status: str
    statistic: tuple | None = None

    @property
    def found(self) -> bool:
        return self.status == FOUND


def construct_umvue(m, b) -> ConstructionResult:
    """UMVUE of the expectation function ``b``, if one exists.

    Solves for one value per non-null block of the finest UMVUE partition;
    null blocks get 0. Targets outside the range of the pmf matrix have no
    unbiased estimator at all.
    """
    cm = as_clean(m)
    base = cm.base
    b = base.expectation_fn(b)
    if linalg.solve(base.P, b) is None:
        return ConstructionResult(NO_UNBIASED_ESTIMATOR)
    part = sigma0(cm)
    nulls = {blk for blk in part.null_singletons}
    live = [blk for blk in part.blocks if blk not in nulls]
    cols = likelihoods(base)
    zero = base.zero()
    masses = []
    for blk in live:
        acc = [zero] * base.n_theta
        for x in blk:
            acc = [a + v for a, v in zip(acc, cols[x])]
        masses.append(tuple(acc))
    if live:
        coef = linalg.solve(Matrix.from_columns(masses, base.arithmetic, nrows=base.n_theta), b)
    else:
        coef = () if all(base.arithmetic.is_zero(v, 1) for v in b) else None
    if coef is None:
        return ConstructionResult(NO_UMVUE_EXISTS)
    T = [zero] * base.n_samples
    for c, blk in zip(coef, live):
        for x in blk:
            T[x] = c
    return ConstructionResult(FOUND, tuple(T))


def conditional_expectation(m, S, T) -> tuple:
    """``E(S | T)`` as a statistic, the same for every parameter.

    Each level is evaluated under every parameter giving it positive mass and
    the results must agree; otherwise ``T`` is not sufficient and the
    disagreeing parameter pair is reported. All-null levels get 0.
    """
    base = m.base
    S = base.statistic(S)
    T = base.statistic(T)
    arith = base.arithmetic
    if not is_sufficient(base, T):
        raise NotSufficientError("T is not sufficient")
    out = [base.zero()] * base.n_samples
    first = {}
    for g, th, ratios in conditional_ratios(base, T):
        val = sum((S[x] * r for x, r in zip(g, ratios)), base.zero())
        key = tuple(g)
        if key in first:
            th0, v0 = first[key]
            if not arith.equal(val, v0, max(1, abs(v0))):
                raise NotSufficientError(
                    f"conditional expectation on level {[base.sample_labels[x] for x in g]} "
                    f"differs between theta {base.theta_labels[th0]!r} and {base.theta_labels[th]!r}")
            continue
        first[key] = (th, val)
        for x in g:
            out[x] = val
    return tuple(out)


def rao_blackwellize(m, S, T) -> tuple:
    """Conditional expectation of ``S`` given sufficient ``T``, with its guarantees checked."""
    base = m.base
    S = base.statistic(S)
    ST = conditional_expectation(base, S, T)
    arith = base.arithmetic
    for a, c in zip(expectation(base, ST), expectation(base, S)):
        if not arith.equal(a, c, max(1, abs(c))):
            raise AssertionError("Rao-Blackwellization changed the expectation")
    for th in range(base.n_theta):
        vs, vst = variance(base, S, th), variance(base, ST, th)
        if vst > vs and not arith.equal(vst, vs, max(1, abs(vs))):
            raise AssertionError(f"variance increased at theta {base.theta_labels[th]!r}")
    return ST


@dataclass
class FunctionOfStatisticReport:
    """Outcome of the complete-sufficient-statistic check on one model."""

    functions_tested: int
    failing_functions: list = field(default_factory=list)
    blocks_refine_levels: bool = True
    levels_refine_blocks: bool = True

    @property
    def passed(self) -> bool:
        return not self.failing_functions and self.blocks_refine_levels and self.levels_refine_blocks

    def to_json(self) -> dict:
        return {
            "decision": "yes" if self.passed else "no",
            "functions_tested": self.functions_tested,
            "failing_functions": [[str(v) for v in u] for u in self.failing_functions],
            "blocks_refine_levels": self.blocks_refine_levels,
            "levels_refine_blocks": self.levels_refine_blocks,
        }


def check_proposition5(m, S, functions=None, n_random: int = 20, seed: int = 0) -> FunctionOfStatisticReport:
    """Check that UMVUEs are exactly the functions of a complete sufficient ``S``.

    (a) every ``u(S)`` passes the UMVUE test, for ``u`` from ``functions``
    (maps given as value tables over the levels of ``S``) plus ``n_random``
    random integer-valued maps; (b) off the null samples, the finest UMVUE
    partition coincides with the level sets of ``S``.
    """
    cm = as_clean(m)
    base = cm.base
    S = base.statistic(S)
    if not is_sufficient(base, S):
        raise PreconditionError("S is not sufficient")
    if not is_complete(base, S):
        raise PreconditionError("S is not complete")
    levels = group_levels(S, base.arithmetic)
    rng = random.Random(seed)
    tables = [list(u) for u in (functions or [])]
    tables.append([S[g[0]] for g in levels])
    for _ in range(n_random):
        tables.append([Fraction(rng.randint(-3, 3)) for _ in levels])
    report = FunctionOfStatisticReport(functions_tested=len(tables))
    for u in tables:
        if len(u) != len(levels):
            raise ValueError("function table must give one value per level of S")
        stat = [None] * base.n_samples
        for val, g in zip(u, levels):
            for x in g:
                stat[x] = val if base.arithmetic.exact else float(val)
        if not is_umvue(cm, stat):
            report.failing_functions.append(tuple(u))
    nulls = null_samples(base)
    live_levels = [frozenset(g) - nulls for g in levels]
    live_levels = {g for g in live_levels if g}
    blocks = {frozenset(b) for b in sigma0(cm).blocks if not set(b) <= nulls}
    report.blocks_refine_levels = all(any(b <= g for g in live_levels) for b in blocks)
    report.levels_refine_blocks = all(any(g <= b for b in blocks) for g in live_levels)
    return report


__all__ = [
    "FOUND",
    "NO_UMVUE_EXISTS",
    "NO_UNBIASED_ESTIMATOR",
    "ConstructionResult",
    "NotSufficientError",
    "PreconditionError",
    "FunctionOfStatisticReport",
    "check_proposition5",
    "conditional_expectation",
    "construct_umvue",
    "rao_blackwellize",
]
