"""Finite statistical models given by a probability matrix.

Row ``θ`` of the matrix is the pmf of ``P_θ`` over the samples; column ``x``
is the likelihood function of sample ``x``. Statistics and expectation
functions are plain tuples aligned with the sample and parameter labels.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import linalg
from .linalg import EXACT, Arithmetic, Matrix


class ModelError(ValueError):
    """A model violates its invariants; ``violations`` lists each problem."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


@dataclass(frozen=True)
class StatModel:
    theta_labels: tuple
    sample_labels: tuple
    P: Matrix

    @classmethod
    def from_rows(cls, rows, theta_labels=None, sample_labels=None, arithmetic=None):
        P = Matrix.from_rows(rows, arithmetic)
        if theta_labels is None:
            theta_labels = [str(i + 1) for i in range(P.nrows)]
        if sample_labels is None:
            sample_labels = [str(j + 1) for j in range(P.ncols)]
        if len(theta_labels) != P.nrows:
            raise ModelError([f"{len(theta_labels)} theta labels for {P.nrows} pmf rows"])
        if len(sample_labels) != P.ncols:
            raise ModelError([f"{len(sample_labels)} sample labels for {P.ncols} columns"])
        return cls(tuple(theta_labels), tuple(sample_labels), P)

    @property
    def arithmetic(self) -> Arithmetic:
        return self.P.arithmetic

    @property
    def rows(self) -> tuple:
        return self.P.rows

    @property
    def n_theta(self) -> int:
        return self.P.nrows

    @property
    def n_samples(self) -> int:
        return self.P.ncols

    @property
    def base(self) -> "StatModel":
        return self

    def zero(self):
        return Fraction(0) if self.arithmetic.exact else 0.0

    def coerce_vector(self, values, length, what="statistic"):
        if len(values) != length:
            raise ValueError(f"{what} has {len(values)} values, model needs {length}")
        return tuple(self.arithmetic.coerce(v) for v in values)

    def statistic(self, values) -> tuple:
        return self.coerce_vector(values, self.n_samples)

    def expectation_fn(self, values) -> tuple:
        return self.coerce_vector(values, self.n_theta, "expectation function")


@dataclass(frozen=True)
class CleanModel:
    """A model together with indices of an independent spanning set of pmf rows."""

    base: StatModel
    theta0: tuple

    @property
    def arithmetic(self) -> Arithmetic:
        return self.base.arithmetic

    @property
    def P0(self) -> Matrix:
        return self.base.P.select_rows(self.theta0)

    @property
    def n_samples(self) -> int:
        return self.base.n_samples

    @property
    def sample_labels(self) -> tuple:
        return self.base.sample_labels

    @property
    def theta_labels(self) -> tuple:
        return tuple(self.base.theta_labels[i] for i in self.theta0)

    def statistic(self, values) -> tuple:
        return self.base.statistic(values)


def validate(m: StatModel) -> StatModel:
    """Check the model invariants; raise :class:`ModelError` listing every violation."""
    problems = []
    if m.n_theta < 1:
        problems.append("empty parameter axis")
    if m.n_samples < 1:
        problems.append("empty sample axis")
    for what, labels in (("theta", m.theta_labels), ("sample", m.sample_labels)):
        seen = set()
        for lab in labels:
            if lab in seen:
                problems.append(f"duplicate {what} label {lab!r}")
            seen.add(lab)
    arith = m.arithmetic
    for i, row in enumerate(m.rows):
        for j, v in enumerate(row):
            if v < 0:
                problems.append(
                    f"negative probability {v} at theta {m.theta_labels[i]!r}, "
                    f"sample {m.sample_labels[j]!r}")
        s = sum(row, m.zero())
        if arith.exact:
            bad = s != 1
        else:
            bad = abs(s - 1) > arith.tolerance * m.n_samples
        if bad and m.n_samples:
            problems.append(f"row {m.theta_labels[i]!r} sums to {s}, not 1")
    if problems:
        raise ModelError(problems)
    return m


def as_clean(m) -> CleanModel:
    return m if isinstance(m, CleanModel) else clean(m)


def clean(m) -> CleanModel:
    """Keep the earliest pmf rows forming a basis of the row space."""
    if isinstance(m, CleanModel):
        base = m.base
    else:
        base = m
    theta0 = tuple(linalg.extract_basis(base.rows, base.arithmetic))
    return CleanModel(base, theta0)


def likelihood(m, x: int) -> tuple:
    """Column ``x`` of the pmf matrix, restricted to the kept rows for a clean model."""
    P = m.P0 if isinstance(m, CleanModel) else m.P
    if not 0 <= x < P.ncols:
        raise IndexError(f"sample index {x} out of range 0..{P.ncols - 1}")
    return P.column(x)


def likelihoods(m) -> list[tuple]:
    P = m.P0 if isinstance(m, CleanModel) else m.P
    return P.columns()


def null_samples(m) -> frozenset:
    """Samples with probability zero under every parameter."""
    P = m.base.P
    scale = P.scale()
    arith = P.arithmetic
    return frozenset(x for x, col in enumerate(P.columns())
                     if all(arith.is_zero(v, scale) for v in col))


def e0_basis(m) -> list[tuple]:
    """Basis of the unbiased estimators of zero: the null space of the pmf matrix."""
    return linalg.null_space_basis(m.base.P)


def expectation(m, T) -> tuple:
    """``b(θ) = Σ_x T(x) p_{θ,x}`` for every parameter."""
    base = m.base
    T = base.statistic(T)
    return linalg.matvec(base.P, T)


def variance(m, T, theta: int):
    base = m.base
    T = base.statistic(T)
    row = base.rows[theta]
    z = base.zero()
    first = sum((t * p for t, p in zip(T, row)), z)
    second = sum((t * t * p for t, p in zip(T, row)), z)
    return second - first * first


def in_e0(m, H) -> bool:
    """Whether ``P H = 0`` (within the relative tolerance in float mode)."""
    base = m.base
    b = linalg.matvec(base.P, H)
    arith = base.arithmetic
    if arith.exact:
        return all(v == 0 for v in b)
    scale = base.P.scale() * max((abs(h) for h in H), default=0.0) * base.n_samples
    return all(abs(v) <= arith.tolerance * scale for v in b)


def restrict(m: StatModel, theta_indices) -> StatModel:
    """Sub-model on a subset of parameters (used for cleaning checks)."""
    idx = tuple(theta_indices)
    return StatModel(tuple(m.theta_labels[i] for i in idx), m.sample_labels, m.P.select_rows(idx))


def to_float(m, tolerance=None) -> StatModel:
    """Float copy of a model (identity for float models unless a tolerance is given)."""
    base = m.base
    if not base.arithmetic.exact and tolerance is None:
        return base
    arith = linalg.approx(linalg.DEFAULT_TOLERANCE if tolerance is None else tolerance)
    rows = [[float(v) for v in r] for r in base.rows]
    return StatModel(base.theta_labels, base.sample_labels, Matrix.from_rows(rows, arith))


__all__ = [
    "EXACT",
    "CleanModel",
    "ModelError",
    "StatModel",
    "as_clean",
    "clean",
    "e0_basis",
    "expectation",
    "in_e0",
    "likelihood",
    "likelihoods",
    "null_samples",
    "restrict",
    "to_float",
    "validate",
    "variance",
]
