"""Explicit model matrices for the worked examples and the coin-tossing families."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from . import linalg
from .model import StatModel, expectation, likelihoods, variance

P1_ROWS = (("1/3", "1/3", "1/3", "0"), ("1/6", "1/3", "1/2", "0"))
P2_ROWS = (("1/2", "1/4", "1/4", "0"), ("2/3", "1/3", "0", "0"))


def example1(which: str = "P1") -> StatModel:
    """The two 2x4 matrices over samples ``1..4`` and parameters ``1, 2``."""
    rows = {"P1": P1_ROWS, "P2": P2_ROWS}.get(which.upper())
    if rows is None:
        raise ValueError(f"unknown example matrix {which!r}; expected P1 or P2")
    return StatModel.from_rows(rows)


def _grid(values):
    grid = tuple(Fraction(v) if not isinstance(v, str) else linalg.parse_rational(v) for v in values)
    if len(set(grid)) != len(grid):
        raise ValueError("theta grid values must be distinct")
    if not grid:
        raise ValueError("theta grid is empty")
    return grid


@dataclass(frozen=True)
class BernoulliSpec:
    n: int
    theta_grid: tuple = field(default=())

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be at least 1")
        grid = _grid(self.theta_grid)
        if any(not 0 < t < 1 for t in grid):
            raise ValueError("Bernoulli parameters must lie strictly inside (0, 1)")
        object.__setattr__(self, "theta_grid", grid)


@dataclass(frozen=True)
class BetaBernoulliSpec:
    n: int
    c: Fraction
    theta_grid: tuple = field(default=())

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be at least 1")
        c = linalg.parse_rational(self.c) if isinstance(self.c, str) else Fraction(self.c)
        if c <= 0:
            raise ValueError("c must be positive")
        grid = _grid(self.theta_grid)
        if any(not -c < t < c for t in grid):
            raise ValueError("theta values must lie strictly inside (-c, c)")
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "theta_grid", grid)


def _samples(n):
    xs = list(product((0, 1), repeat=n))
    return xs, ["".join(map(str, x)) for x in xs], tuple(Fraction(sum(x)) for x in xs)


def bernoulli(spec: BernoulliSpec) -> tuple[StatModel, tuple]:
    """n Bernoulli(θ) trials over ``{0,1}^n`` in lexicographic order, and the success count."""
    xs, labels, T = _samples(spec.n)
    rows = [[th ** int(t) * (1 - th) ** (spec.n - int(t)) for t in T] for th in spec.theta_grid]
    return StatModel.from_rows(rows, [str(t) for t in spec.theta_grid], labels), T


def pochhammer(a, k: int):
    """Rising factorial ``a (a+1) ... (a+k-1)``, with ``(a)_0 = 1``."""
    out = Fraction(1) if isinstance(a, (int, Fraction)) else 1.0
    for i in range(k):
        out *= a + i
    return out


def beta_bernoulli(spec: BetaBernoulliSpec) -> tuple[StatModel, tuple]:
    """Beta(c+θ, c−θ) mixture of n Bernoulli trials, evaluated exactly.

    ``p_θ(x) = (c+θ)_t (c−θ)_{n−t} / (2c)_n`` with ``t`` the success count.
    """
    n, c = spec.n, spec.c
    xs, labels, T = _samples(n)
    norm = pochhammer(2 * c, n)
    rows = []
    for th in spec.theta_grid:
        rows.append([pochhammer(c + th, int(t)) * pochhammer(c - th, n - int(t)) / norm for t in T])
    model = StatModel.from_rows(rows, [str(t) for t in spec.theta_grid], labels)
    for i, r in enumerate(model.rows):
        if sum(r) != 1:
            raise AssertionError(f"row {i} of the beta-Bernoulli model sums to {sum(r)}")
    return model, T


@dataclass
class Example3Report:
    spec: BetaBernoulliSpec
    representative_rank: int
    rank_full: bool
    # per-theta rows: theta, E(T/n), (c+θ)/(2c), Var(T/n), Var(p), closed form,
    # Var(T/n) - Var(p), Var(T/n) - m(1-m)/n
    rows: list = field(default_factory=list)

    @property
    def mean_ok(self) -> bool:
        return all(r["mean"] == r["mean_formula"] for r in self.rows)

    @property
    def overdispersion_as_stated_ok(self) -> bool:
        """``Var(T/n) − Var(p)`` equals the closed form at every grid point."""
        return all(r["var_minus_var_p"] == r["overdispersion_formula"] for r in self.rows)

    @property
    def binomial_excess_ok(self) -> bool:
        """Excess of ``Var(T/n)`` over the binomial variance equals the closed form."""
        return all(r["binomial_excess"] == r["overdispersion_formula"] for r in self.rows)

    def to_json(self) -> dict:
        s = linalg.format_scalar
        return {
            "n": self.spec.n,
            "c": s(self.spec.c),
            "representative_rank": self.representative_rank,
            "rank_full": self.rank_full,
            "mean_ok": self.mean_ok,
            "overdispersion_as_stated_ok": self.overdispersion_as_stated_ok,
            "binomial_excess_ok": self.binomial_excess_ok,
            "per_theta": [{k: s(v) for k, v in r.items()} for r in self.rows],
        }


def verify_example3_claims(spec: BetaBernoulliSpec) -> Example3Report:
    """Rank of one likelihood per success count, mean, and over-dispersion per θ.

    Two over-dispersion quantities are compared with
    ``((n−1)/n)(c²−θ²)/(4c²(2c+1))``: ``Var(T/n) − Var(p)`` with ``p`` the
    Beta-distributed success probability, and ``Var(T/n) − m(1−m)/n`` with
    ``m = (c+θ)/(2c)``, the excess over a binomial with the same mean. Only
    the second is an identity; the first equals ``E[p(1−p)]/n``.
    """
    n, c = spec.n, spec.c
    if len(spec.theta_grid) < n + 1:
        raise ValueError(f"theta grid needs at least {n + 1} points, got {len(spec.theta_grid)}")
    model, T = beta_bernoulli(spec)
    cols = likelihoods(model)
    reps = [cols[[int(t) for t in T].index(k)] for k in range(n + 1)]
    r = linalg.rank(linalg.Matrix.from_columns(reps, nrows=model.n_theta))
    report = Example3Report(spec, r, r == n + 1)
    Tn = [t / n for t in T]
    for i, th in enumerate(spec.theta_grid):
        a, b = c + th, c - th
        mean = expectation(model, Tn)[i]
        var_tn = variance(model, Tn, i)
        var_p = a * b / ((a + b) ** 2 * (a + b + 1))
        m = (c + th) / (2 * c)
        report.rows.append({
            "theta": th,
            "mean": mean,
            "mean_formula": m,
            "var_T_over_n": var_tn,
            "var_p": var_p,
            "overdispersion_formula": Fraction(n - 1, n) * (c * c - th * th) / (4 * c * c * (2 * c + 1)),
            "var_minus_var_p": var_tn - var_p,
            "binomial_excess": var_tn - m * (1 - m) / n,
        })
    return report


__all__ = [
    "BernoulliSpec",
    "BetaBernoulliSpec",
    "Example3Report",
    "bernoulli",
    "beta_bernoulli",
    "example1",
    "pochhammer",
    "verify_example3_claims",
]
