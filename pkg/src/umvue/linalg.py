"""Dense linear algebra over two arithmetic modes.

Exact mode works over ``fractions.Fraction``; ranks and pivot columns come
from fraction-free elimination on an integer-scaled copy of the matrix.
Approx mode works over ``float`` with a relative rank tolerance: a value is
treated as zero when ``|v| <= tolerance * scale``, where ``scale`` is the
largest absolute entry of the matrix under consideration.

Vectors are plain tuples. Matrices are :class:`Matrix` instances or any
sequence of equal-length rows.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Integral, Rational

from . import kernels

DEFAULT_TOLERANCE = 1e-9


class MixedArithmeticError(TypeError):
    """Exact and floating entries appear in the same matrix."""


class NoCircuitError(ValueError):
    """A circuit was requested from a linearly independent family."""


@dataclass(frozen=True)
class Arithmetic:
    """Arithmetic mode: exact rationals, or floats with a relative tolerance."""

    exact: bool = True
    tolerance: float = 0.0

    def __post_init__(self):
        if self.tolerance < 0:
            raise ValueError("tolerance must be nonnegative")
        if self.exact and self.tolerance != 0:
            raise ValueError("exact arithmetic takes no tolerance")

    @property
    def name(self) -> str:
        return "rational" if self.exact else "float"

    def coerce(self, value):
        """Convert one entry into this mode's scalar type."""
        if self.exact:
            if type(value) is Fraction:
                return value
            if isinstance(value, float):
                raise MixedArithmeticError(f"float entry {value!r} in exact arithmetic")
            if isinstance(value, str):
                return parse_rational(value)
            if isinstance(value, (Integral, Rational)):
                return Fraction(value)
            raise TypeError(f"cannot use {value!r} as a rational")
        if type(value) is float:
            return value
        if isinstance(value, Fraction):
            raise MixedArithmeticError(f"rational entry {value} in float arithmetic")
        if isinstance(value, str):
            return float(parse_rational(value))
        return float(value)

    def is_zero(self, value, scale=1) -> bool:
        if self.exact:
            return value == 0
        return abs(value) <= self.tolerance * scale

    def equal(self, a, b, scale=1) -> bool:
        return self.is_zero(a - b, scale)


EXACT = Arithmetic()


def approx(tolerance: float = DEFAULT_TOLERANCE) -> Arithmetic:
    return Arithmetic(exact=False, tolerance=tolerance)


def parse_rational(text: str) -> Fraction:
    """Parse ``"a/b"`` or ``"a"`` with decimal integers and ``b > 0``."""
    s = text.strip()
    num, sep, den = s.partition("/")
    try:
        n = int(num)
        d = int(den) if sep else 1
    except ValueError:
        raise ValueError(f"not a rational literal: {text!r}") from None
    if sep and (not den.strip().isdigit() or d <= 0):
        raise ValueError(f"denominator must be a positive integer: {text!r}")
    return Fraction(n, d)


def format_scalar(value) -> str | float:
    """Serialize a scalar: ``"a/b"`` (or ``"a"``) for rationals, float unchanged."""
    if isinstance(value, Fraction):
        return str(value)
    return float(value)


def infer_arithmetic(values) -> Arithmetic:
    """Infer the mode of a collection of entries; ints fit either mode."""
    has_float = has_frac = False
    for v in values:
        tv = type(v)
        if tv is Fraction:
            has_frac = True
        elif tv is float or isinstance(v, float):
            has_float = True
        elif isinstance(v, Fraction):
            has_frac = True
    if has_float and has_frac:
        raise MixedArithmeticError("matrix mixes rational and float entries")
    return approx() if has_float else EXACT


@dataclass(frozen=True)
class Matrix:
    """Rectangular grid of scalars in a single arithmetic mode."""

    rows: tuple
    ncols: int
    arithmetic: Arithmetic = EXACT
    row_labels: tuple | None = field(default=None, compare=False)
    col_labels: tuple | None = field(default=None, compare=False)

    @classmethod
    def from_rows(cls, rows, arithmetic=None, ncols=None, row_labels=None, col_labels=None):
        rows = [list(r) for r in rows]
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        for i, r in enumerate(rows):
            if len(r) != ncols:
                raise ValueError(f"row {i} has {len(r)} entries, expected {ncols}")
        if arithmetic is None:
            arithmetic = infer_arithmetic(v for r in rows for v in r)
        body = tuple(tuple(arithmetic.coerce(v) for v in r) for r in rows)
        if row_labels is not None and len(row_labels) != len(body):
            raise ValueError("row labels do not match row count")
        if col_labels is not None and len(col_labels) != ncols:
            raise ValueError("column labels do not match column count")
        return cls(
            body,
            ncols,
            arithmetic,
            None if row_labels is None else tuple(row_labels),
            None if col_labels is None else tuple(col_labels),
        )

    @classmethod
    def from_columns(cls, columns, arithmetic=None, nrows=None):
        columns = [tuple(c) for c in columns]
        if nrows is None:
            nrows = len(columns[0]) if columns else 0
        rows = [[c[i] for c in columns] for i in range(nrows)]
        return cls.from_rows(rows, arithmetic, ncols=len(columns))

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def column(self, j) -> tuple:
        return tuple(r[j] for r in self.rows)

    def columns(self) -> list[tuple]:
        return [self.column(j) for j in range(self.ncols)]

    def transpose(self) -> "Matrix":
        rows = tuple(self.column(j) for j in range(self.ncols))
        return Matrix(rows, self.nrows, self.arithmetic, self.col_labels, self.row_labels)

    def select_rows(self, indices) -> "Matrix":
        labels = None if self.row_labels is None else tuple(self.row_labels[i] for i in indices)
        return Matrix(tuple(self.rows[i] for i in indices), self.ncols, self.arithmetic,
                      labels, self.col_labels)

    def scale(self) -> float:
        """Largest absolute entry; the reference for relative tolerances."""
        return max((abs(v) for r in self.rows for v in r), default=0)

    def __matmul__(self, vec):
        return matvec(self, vec)


def as_matrix(m, arithmetic=None) -> Matrix:
    if isinstance(m, Matrix):
        if arithmetic is not None and arithmetic != m.arithmetic:
            raise MixedArithmeticError("matrix arithmetic differs from the requested mode")
        return m
    return Matrix.from_rows(m, arithmetic)


def matvec(m: Matrix, vec) -> tuple:
    if len(vec) != m.ncols:
        raise ValueError(f"vector of length {len(vec)} against {m.ncols} columns")
    zero = Fraction(0) if m.arithmetic.exact else 0.0
    return tuple(sum((a * b for a, b in zip(r, vec)), zero) for r in m.rows)


def matmul(a: Matrix, b: Matrix) -> Matrix:
    if a.ncols != b.nrows:
        raise ValueError("inner dimensions differ")
    cols = b.columns()
    rows = tuple(tuple(sum((x * y for x, y in zip(r, c)), Fraction(0) if a.arithmetic.exact else 0.0)
                       for c in cols) for r in a.rows)
    return Matrix(rows, b.ncols, a.arithmetic)


def _pivots(m: Matrix) -> list[int]:
    if m.nrows == 0 or m.ncols == 0:
        return []
    if m.arithmetic.exact:
        return list(kernels.rational_pivots(m.rows, m.ncols))
    return list(kernels.float_pivots(m.rows, m.ncols, m.arithmetic.tolerance))


def rank(m, arithmetic=None) -> int:
    """Dimension of the column space (0 for an empty matrix)."""
    return len(_pivots(as_matrix(m, arithmetic)))


def pivot_columns(m, arithmetic=None) -> list[int]:
    """Indices of the greedy left-to-right basis among the columns of ``m``."""
    return _pivots(as_matrix(m, arithmetic))


def rref(m, arithmetic=None) -> tuple[list[list], list[int]]:
    """Reduced row echelon form and pivot columns (Gauss-Jordan).

    Exact mode is lossless. Approx mode uses partial pivoting and zeroes
    entries under the relative tolerance of the input matrix.
    """
    m = as_matrix(m, arithmetic)
    arith = m.arithmetic
    a = [list(r) for r in m.rows]
    nr, nc = m.nrows, m.ncols
    scale = m.scale()
    pivots = []
    r = 0
    for c in range(nc):
        if r == nr:
            break
        if arith.exact:
            p = next((i for i in range(r, nr) if a[i][c] != 0), None)
        else:
            p = max(range(r, nr), key=lambda i: abs(a[i][c]))
            if arith.is_zero(a[p][c], scale):
                p = None
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        piv = a[r][c]
        a[r] = [v / piv for v in a[r]]
        for i in range(nr):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
                a[i][c] = 0 * f
        pivots.append(c)
        r += 1
    return a, pivots


def null_space_basis(m, arithmetic=None) -> list[tuple]:
    """Basis of ``{h : m h = 0}`` in reduced form.

    One vector per free column, in column order: the free variable is set to
    one, the other free variables to zero, and the pivot variables read off
    the reduced echelon form. A ``0 x n`` matrix yields the ``n`` unit vectors.
    """
    m = as_matrix(m, arithmetic)
    one = Fraction(1) if m.arithmetic.exact else 1.0
    zero = one * 0
    red, pivots = rref(m)
    pivot_set = set(pivots)
    basis = []
    for f in range(m.ncols):
        if f in pivot_set:
            continue
        h = [zero] * m.ncols
        h[f] = one
        for row_idx, pc in enumerate(pivots):
            h[pc] = -red[row_idx][f]
        basis.append(tuple(h))
    return basis


def _vectors_matrix(vectors, arithmetic) -> Matrix:
    vectors = [tuple(v) for v in vectors]
    if not vectors:
        return Matrix((), 0, arithmetic or EXACT)
    n = len(vectors[0])
    if any(len(v) != n for v in vectors):
        raise ValueError("vectors have different lengths")
    return Matrix.from_columns(vectors, arithmetic, nrows=n)


def extract_basis(vectors, arithmetic=None) -> list[int]:
    """Greedy left-to-right basis: index ``i`` is kept iff ``vectors[i]`` is not
    in the span of the vectors kept before it."""
    if not vectors:
        return []
    return pivot_columns(_vectors_matrix(vectors, arithmetic))


def is_independent(vectors, arithmetic=None) -> bool:
    return len(extract_basis(vectors, arithmetic)) == len(vectors)


def find_circuit(vectors, arithmetic=None) -> list[int]:
    """Indices of a minimal dependent subfamily.

    Starts from the whole family and deletes, in index order, every element
    whose removal keeps the remaining family dependent.
    """
    vectors = [tuple(v) for v in vectors]
    if not vectors:
        raise NoCircuitError("no circuit: empty family")
    mat = _vectors_matrix(vectors, arithmetic)
    arith = mat.arithmetic

    def dependent(idx):
        return len(extract_basis([vectors[i] for i in idx], arith)) < len(idx)

    current = list(range(len(vectors)))
    if not dependent(current):
        raise NoCircuitError("no circuit: family is linearly independent")
    for i in range(len(vectors)):
        trial = [j for j in current if j != i]
        if trial and dependent(trial):
            current = trial
    return current


def subspace_sum_dim(families, arithmetic=None) -> int:
    """Dimension of the sum of the spans of several vector families."""
    allv = [tuple(v) for fam in families for v in fam]
    return len(extract_basis(allv, arithmetic)) if allv else 0


def same_span(a, b, arithmetic=None) -> bool:
    """Subspace equality by the double rank check rank(a) = rank(b) = rank(a + b)."""
    ra = len(extract_basis(a, arithmetic)) if a else 0
    rb = len(extract_basis(b, arithmetic)) if b else 0
    rab = subspace_sum_dim([a, b], arithmetic)
    return ra == rb == rab


def solve(m, rhs, arithmetic=None) -> tuple | None:
    """A solution of ``m x = rhs`` with free variables zero, or ``None``."""
    m = as_matrix(m, arithmetic)
    arith = m.arithmetic
    if len(rhs) != m.nrows:
        raise ValueError("right-hand side length differs from row count")
    rhs = [arith.coerce(v) for v in rhs]
    aug = Matrix(tuple(r + (b,) for r, b in zip(m.rows, rhs)), m.ncols + 1, arith)
    if m.nrows == 0:
        zero = Fraction(0) if arith.exact else 0.0
        return tuple([zero] * m.ncols)
    red, pivots = rref(aug)
    if m.ncols in pivots:
        return None
    zero = Fraction(0) if arith.exact else 0.0
    x = [zero] * m.ncols
    for row_idx, pc in enumerate(pivots):
        x[pc] = red[row_idx][m.ncols]
    x = tuple(x)
    if not arith.exact:
        resid = matvec(m, x)
        scale = max(aug.scale(), 1.0)
        if any(abs(a - b) > arith.tolerance * scale * max(1.0, max(map(abs, x), default=0))
               for a, b in zip(resid, rhs)):
            return None
    return x


def inverse(m, arithmetic=None) -> Matrix:
    """Inverse of a square nonsingular matrix."""
    m = as_matrix(m, arithmetic)
    n = m.nrows
    if m.ncols != n:
        raise ValueError("matrix is not square")
    arith = m.arithmetic
    one = Fraction(1) if arith.exact else 1.0
    zero = one * 0
    aug = Matrix(tuple(r + tuple(one if i == j else zero for j in range(n))
                       for i, r in enumerate(m.rows)), 2 * n, arith)
    red, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ValueError("matrix is singular")
    return Matrix(tuple(tuple(r[n:]) for r in red), n, arith)
