"""Exact linear algebra over the rationals.

Scalars are :class:`fractions.Fraction` values (always stored reduced, with a
positive denominator).  Matrices are immutable dense row-major
:class:`RationalMatrix` objects; vectors handed around internally are plain
tuples of fractions.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DimensionMismatch, SingularMatrix, TensorFormatError

Rational = Fraction
Vector = tuple  # tuple[Fraction, ...]

ZERO = Fraction(0)
ONE = Fraction(1)


# -----------------------------------------------------------------------------
# scalars
# -----------------------------------------------------------------------------
def to_rational(value) -> Fraction:
    """Coerce an int, Fraction or rational string ("p/q", "p") to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TensorFormatError(f"not a rational: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        try:
            num, sep, den = text.partition("/")
            if sep:
                return Fraction(int(num), int(den))
            return Fraction(int(text))
        except (ValueError, ZeroDivisionError) as exc:
            raise TensorFormatError(f"not a rational string: {value!r}") from exc
    raise TensorFormatError(f"not a rational: {value!r}")


def format_rational(q: Fraction) -> str:
    """Canonical string form: "p/q", or "p" when the denominator is 1."""
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


# -----------------------------------------------------------------------------
# matrices
# -----------------------------------------------------------------------------
class RationalMatrix:
    """Immutable dense matrix of Fractions."""

    __slots__ = ("_rows", "rows", "cols")

    def __init__(self, data: Iterable[Iterable], cols: int | None = None):
        rows = tuple(tuple(to_rational(x) for x in row) for row in data)
        if rows:
            width = len(rows[0])
            if any(len(r) != width for r in rows):
                raise DimensionMismatch("ragged matrix rows")
            if cols is not None and cols != width:
                raise DimensionMismatch("column count does not match data")
        else:
            width = cols or 0
        self._rows = rows
        self.rows = len(rows)
        self.cols = width

    @classmethod
    def _wrap(cls, rows: tuple, cols: int) -> "RationalMatrix":
        # trusted constructor: rows already tuples of Fractions
        m = object.__new__(cls)
        m._rows = rows
        m.rows = len(rows)
        m.cols = cols
        return m

    @classmethod
    def zeros(cls, rows: int, cols: int | None = None) -> "RationalMatrix":
        cols = rows if cols is None else cols
        return cls._wrap(tuple((ZERO,) * cols for _ in range(rows)), cols)

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls._wrap(
            tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n)), n
        )

    @classmethod
    def column(cls, values: Sequence) -> "RationalMatrix":
        return cls._wrap(tuple((to_rational(v),) for v in values), 1)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], rows: int | None = None) -> "RationalMatrix":
        columns = [tuple(to_rational(v) for v in c) for c in columns]
        if not columns:
            return cls.zeros(rows or 0, 0)
        return cls._wrap(tuple(zip(*columns)), len(columns))

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, idx):
        r, c = idx
        return self._rows[r][c]

    def row(self, r: int) -> tuple:
        return self._rows[r]

    def col(self, c: int) -> tuple:
        return tuple(row[c] for row in self._rows)

    def to_rows(self) -> tuple:
        return self._rows

    def to_lists(self) -> list[list[Fraction]]:
        return [list(r) for r in self._rows]

    def to_strings(self) -> list[list[str]]:
        return [[format_rational(x) for x in r] for r in self._rows]

    def flat(self) -> tuple:
        """Entries of a row or column vector as a flat tuple."""
        if self.cols == 1:
            return tuple(r[0] for r in self._rows)
        if self.rows == 1:
            return self._rows[0]
        raise DimensionMismatch("flat() needs a row or column vector")

    def transpose(self) -> "RationalMatrix":
        if self.rows == 0:
            return RationalMatrix.zeros(self.cols, 0)
        return RationalMatrix._wrap(tuple(zip(*self._rows)), self.rows)

    @property
    def T(self) -> "RationalMatrix":
        return self.transpose()

    def is_zero(self) -> bool:
        return all(x == 0 for r in self._rows for x in r)

    def __eq__(self, other) -> bool:
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        return self.shape == other.shape and self._rows == other._rows

    def __hash__(self) -> int:
        return hash((self.shape, self._rows))

    def __repr__(self) -> str:
        return f"RationalMatrix({self.to_strings()})"

    def _check_same_shape(self, other):
        if self.shape != other.shape:
            raise DimensionMismatch(f"shape {self.shape} vs {other.shape}")

    def __add__(self, other: "RationalMatrix") -> "RationalMatrix":
        self._check_same_shape(other)
        return RationalMatrix._wrap(
            tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self._rows, other._rows)),
            self.cols,
        )

    def __sub__(self, other: "RationalMatrix") -> "RationalMatrix":
        self._check_same_shape(other)
        return RationalMatrix._wrap(
            tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(self._rows, other._rows)),
            self.cols,
        )

    def __neg__(self) -> "RationalMatrix":
        return self.scale(-1)

    def scale(self, c) -> "RationalMatrix":
        c = to_rational(c)
        return RationalMatrix._wrap(tuple(tuple(c * x for x in r) for r in self._rows), self.cols)

    def __matmul__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.cols != other.rows:
            raise DimensionMismatch(f"cannot multiply {self.shape} by {other.shape}")
        other_cols = list(zip(*other._rows)) if other.rows else [()] * other.cols
        out = []
        for r in self._rows:
            nz = [(k, a) for k, a in enumerate(r) if a]
            out.append(tuple(sum((a * col[k] for k, a in nz), ZERO) for col in other_cols))
        return RationalMatrix._wrap(tuple(out), other.cols)

    def __pow__(self, e: int) -> "RationalMatrix":
        if not self.is_square:
            raise DimensionMismatch("power of a non-square matrix")
        result = RationalMatrix.identity(self.rows)
        base = self
        while e:
            if e & 1:
                result = result @ base
            base = base @ base
            e >>= 1
        return result

    def apply(self, v: Sequence) -> tuple:
        """Matrix times a plain vector."""
        if len(v) != self.cols:
            raise DimensionMismatch("vector length does not match column count")
        return tuple(sum((a * b for a, b in zip(r, v) if a and b), ZERO) for r in self._rows)

    def trace(self) -> Fraction:
        return sum((self._rows[i][i] for i in range(min(self.rows, self.cols))), ZERO)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "RationalMatrix":
        return RationalMatrix._wrap(
            tuple(tuple(self._rows[r][c] for c in cols) for r in rows), len(cols)
        )

    def hstack(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.rows != other.rows:
            raise DimensionMismatch("hstack needs equal row counts")
        return RationalMatrix._wrap(
            tuple(a + b for a, b in zip(self._rows, other._rows)), self.cols + other.cols
        )


def as_matrix(m) -> RationalMatrix:
    return m if isinstance(m, RationalMatrix) else RationalMatrix(m)


# -----------------------------------------------------------------------------
# elimination kernels (plain lists; shared by the public operations)
# -----------------------------------------------------------------------------
def _rref_in_place(a: list[list[Fraction]], ncols: int, pivot_limit: int | None = None) -> list[int]:
    """Gauss-Jordan on a list of row lists; returns the pivot columns."""
    pivots = []
    limit = ncols if pivot_limit is None else pivot_limit
    r = 0
    nrows = len(a)
    for c in range(limit):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if a[i][c] != 0), None)
        if p is None:
            continue
        if p != r:
            a[r], a[p] = a[p], a[r]
        pr = a[r]
        inv = 1 / pr[c]
        if inv != 1:
            pr = a[r] = [x * inv for x in pr]
        nz = [j for j in range(c, ncols) if pr[j] != 0]
        for i in range(nrows):
            if i != r:
                f = a[i][c]
                if f != 0:
                    row = a[i]
                    for j in nz:
                        row[j] -= f * pr[j]
        pivots.append(c)
        r += 1
    return pivots


def span_basis(vectors: Iterable[Sequence], dim: int) -> list[tuple]:
    """Canonical (rref) basis of the span of ``vectors`` in a ``dim``-space."""
    a = [[to_rational(x) for x in v] for v in vectors]
    if not a:
        return []
    pivots = _rref_in_place(a, dim)
    return [tuple(a[i]) for i in range(len(pivots))]


def rank_of(vectors: Iterable[Sequence], dim: int) -> int:
    return len(span_basis(vectors, dim))


def kernel_basis(rows: Sequence[Sequence], ncols: int) -> list[tuple]:
    """Canonical free-variable basis of {v : rows . v = 0}."""
    a = [[to_rational(x) for x in r] for r in rows]
    pivots = _rref_in_place(a, ncols) if a else []
    pivot_set = set(pivots)
    basis = []
    for f in range(ncols):
        if f in pivot_set:
            continue
        v = [ZERO] * ncols
        v[f] = ONE
        for r, p in enumerate(pivots):
            v[p] = -a[r][f]
        basis.append(tuple(v))
    return basis


def coordinates(basis: Sequence[Sequence], v: Sequence) -> tuple | None:
    """Coefficients c with sum c_i basis_i = v, or None when v is outside the span.

    ``basis`` must be linearly independent.
    """
    k = len(basis)
    dim = len(v)
    # augmented system: columns = basis vectors, rhs = v
    a = [[basis[j][i] for j in range(k)] + [to_rational(v[i])] for i in range(dim)]
    pivots = _rref_in_place(a, k + 1, pivot_limit=k)
    if len(pivots) < k:
        raise SingularMatrix("basis vectors are dependent")
    for i in range(k, dim):
        if a[i][k] != 0:
            return None
    return tuple(a[i][k] for i in range(k))


def complete_basis(partial: Sequence[Sequence], candidates: Sequence[Sequence], dim: int) -> list[tuple]:
    """Greedily pick candidates (in order) that are independent of ``partial``.

    Returns only the chosen candidates.
    """
    chosen = []
    current = span_basis(partial, dim)
    for cand in candidates:
        trial = span_basis(list(current) + [cand], dim)
        if len(trial) > len(current):
            chosen.append(tuple(to_rational(x) for x in cand))
            current = trial
    return chosen


# -----------------------------------------------------------------------------
# public operations
# -----------------------------------------------------------------------------
def rref(m) -> tuple[RationalMatrix, list[int], int]:
    """Reduced row-echelon form, pivot columns and rank."""
    m = as_matrix(m)
    a = [list(r) for r in m.to_rows()]
    pivots = _rref_in_place(a, m.cols)
    return RationalMatrix._wrap(tuple(tuple(r) for r in a), m.cols), pivots, len(pivots)


def nullspace(m) -> list[RationalMatrix]:
    m = as_matrix(m)
    return [RationalMatrix.column(v) for v in kernel_basis(m.to_rows(), m.cols)]


def invert(m) -> RationalMatrix:
    m = as_matrix(m)
    if not m.is_square:
        raise DimensionMismatch("only square matrices can be inverted")
    n = m.rows
    a = [list(r) + [ONE if i == j else ZERO for j in range(n)] for i, r in enumerate(m.to_rows())]
    pivots = _rref_in_place(a, 2 * n, pivot_limit=n)
    if len(pivots) < n:
        raise SingularMatrix(f"matrix has rank {len(pivots)} < {n}")
    return RationalMatrix._wrap(tuple(tuple(r[n:]) for r in a), n)


class RationalPolynomial:
    """Polynomial with Fraction coefficients, ``coefficients[d]`` multiplies t**d."""

    __slots__ = ("coefficients",)

    def __init__(self, coefficients: Iterable):
        coeffs = [to_rational(c) for c in coefficients]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        self.coefficients = tuple(coeffs)

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coefficients) - 1

    def is_zero(self) -> bool:
        return not self.coefficients

    def __call__(self, x):
        acc = ZERO
        for c in reversed(self.coefficients):
            acc = acc * x + c
        return acc

    def __eq__(self, other) -> bool:
        if isinstance(other, RationalPolynomial):
            return self.coefficients == other.coefficients
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coefficients)

    def __repr__(self) -> str:
        return f"RationalPolynomial({[format_rational(c) for c in self.coefficients]})"

    def __mul__(self, other: "RationalPolynomial") -> "RationalPolynomial":
        if self.is_zero() or other.is_zero():
            return RationalPolynomial([])
        out = [ZERO] * (len(self.coefficients) + len(other.coefficients) - 1)
        for i, a in enumerate(self.coefficients):
            for j, b in enumerate(other.coefficients):
                out[i + j] += a * b
        return RationalPolynomial(out)

    def divide_linear(self, root) -> tuple["RationalPolynomial", Fraction]:
        """Synthetic division by (t - root): quotient and remainder."""
        root = to_rational(root)
        quotient = []
        acc = ZERO
        for c in reversed(self.coefficients):
            acc = acc * root + c
            quotient.append(acc)
        remainder = quotient.pop() if quotient else ZERO
        return RationalPolynomial(reversed(quotient)), remainder

    def evaluate_matrix(self, m: RationalMatrix) -> RationalMatrix:
        """Horner evaluation at a square matrix."""
        n = m.rows
        acc = RationalMatrix.zeros(n)
        eye = RationalMatrix.identity(n)
        for c in reversed(self.coefficients):
            acc = acc @ m + eye.scale(c)
        return acc


def char_poly(m) -> RationalPolynomial:
    """det(tI - M) by the Faddeev-LeVerrier recursion (exact in characteristic 0)."""
    m = as_matrix(m)
    if not m.is_square:
        raise DimensionMismatch("characteristic polynomial needs a square matrix")
    n = m.rows
    coeffs = [ZERO] * (n + 1)
    coeffs[n] = ONE
    eye = RationalMatrix.identity(n)
    mk = RationalMatrix.zeros(n)
    for k in range(1, n + 1):
        mk = m @ mk + eye.scale(coeffs[n - k + 1])
        coeffs[n - k] = -(m @ mk).trace() / k
    return RationalPolynomial(coeffs)


def _divisors(a: int) -> list[int]:
    a = abs(a)
    small, large = [], []
    d = 1
    while d * d <= a:
        if a % d == 0:
            small.append(d)
            if d * d != a:
                large.append(a // d)
        d += 1
    return small + large[::-1]


def rational_roots(p: RationalPolynomial) -> list[tuple[Fraction, int]]:
    """All rational roots with multiplicities.

    Order: 0 first (if a root), then candidates by increasing absolute value,
    the positive sign before the negative one.
    """
    if p.is_zero():
        raise ValueError("the zero polynomial has no finite root set")
    roots = []
    coeffs = list(p.coefficients)
    zero_mult = 0
    while coeffs and coeffs[0] == 0:
        coeffs.pop(0)
        zero_mult += 1
    if zero_mult:
        roots.append((ZERO, zero_mult))
    rest = RationalPolynomial(coeffs)
    if rest.degree < 1:
        return roots
    lcm = 1
    for c in rest.coefficients:
        lcm = lcm * c.denominator // math.gcd(lcm, c.denominator)
    ints = [int(c * lcm) for c in rest.coefficients]
    g = 0
    for c in ints:
        g = math.gcd(g, c)
    ints = [c // g for c in ints]
    candidates = sorted(
        {Fraction(num, den) for num in _divisors(ints[0]) for den in _divisors(ints[-1])}
    )
    for cand in candidates:
        for root in (cand, -cand):
            if rest.degree < 1:
                break
            mult = 0
            while rest.degree >= 1:
                q, r = rest.divide_linear(root)
                if r != 0:
                    break
                rest = q
                mult += 1
            if mult:
                roots.append((root, mult))
    return roots


def splits_over_q(p: RationalPolynomial) -> bool:
    return sum(m for _, m in rational_roots(p)) == p.degree


def generalized_eigenspace(m, lam) -> list[RationalMatrix]:
    """Canonical basis of ker((M - lam I)^n)."""
    m = as_matrix(m)
    if not m.is_square:
        raise DimensionMismatch("generalized eigenspace needs a square matrix")
    n = m.rows
    if n == 0:
        return []
    shifted = m - RationalMatrix.identity(n).scale(lam)
    return nullspace(shifted ** n)
