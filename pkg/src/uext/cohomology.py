"""Trivial-coefficient cochain complex of A^n_W and one-dimensional extensions.

    d_p w(a_1, ..., a_{p+1}) = sum_{k=1}^{p} (-1)^k w(a_1, ..., a_k * a_{k+1}, ..., a_{p+1})

with d_0 = 0.  Degree-2 data is handled as symmetric matrices R^{ij}; a
symmetric R is a cocycle iff

    sum_s (R^{is} W^{jk}_s - R^{js} W^{ik}_s) = 0   for all i, j, k,

and the coboundaries are spanned by the row matrices W_(k).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .comm_algebra import CommAlgebra
from .errors import CoboundaryNotCocycle, DimensionMismatch, NotCocycle
from .exact_linalg import ZERO, RationalMatrix, format_rational, kernel_basis, span_basis, to_rational
from .tensor_core import BasisChange, ExtensionTensor, row_matrix, transform

MAX_DEGREE = 5


# -----------------------------------------------------------------------------
# general cochains
# -----------------------------------------------------------------------------
@dataclass(frozen=True)
class Cochain:
    """A p-linear form on A^n, stored densely in lexicographic index order."""

    p: int
    n: int
    values: tuple

    def __post_init__(self):
        if self.p < 0 or self.p > MAX_DEGREE:
            raise DimensionMismatch(f"cochain degree must lie in 0..{MAX_DEGREE}")
        expected = self.n ** self.p
        if len(self.values) != expected:
            raise DimensionMismatch(f"degree {self.p} cochain needs {expected} values")
        object.__setattr__(self, "values", tuple(to_rational(v) for v in self.values))

    @classmethod
    def zero(cls, p: int, n: int) -> "Cochain":
        return cls(p, n, (ZERO,) * n ** p)

    @classmethod
    def from_function(cls, p: int, n: int, fn) -> "Cochain":
        """``fn`` receives a tuple of 1-based basis indices."""
        return cls(p, n, tuple(fn(idx) for idx in itertools.product(range(1, n + 1), repeat=p)))

    def __call__(self, *idx: int) -> Fraction:
        pos = 0
        for i in idx:
            pos = pos * self.n + (i - 1)
        return self.values[pos]

    def is_zero(self) -> bool:
        return not any(self.values)


def coboundary(a: CommAlgebra, omega: Cochain) -> Cochain:
    n = a.n
    if omega.n != n:
        raise DimensionMismatch("cochain dimension does not match the algebra")
    p = omega.p
    if p + 1 > MAX_DEGREE:
        raise DimensionMismatch(f"coboundary of degree {p} exceeds the degree cap")
    if p == 0:
        return Cochain.zero(1, n)
    w = a.tensor
    products = {
        (i, j): [(s, v) for s in range(1, n + 1) if (v := w.coeff(i, j, s))]
        for i in range(1, n + 1) for j in range(1, n + 1)
    }

    def value(idx):
        total = ZERO
        for k in range(p):
            sign = -1 if k % 2 == 0 else 1  # (-1)^(k+1) for 0-based k
            head, tail = idx[:k], idx[k + 2:]
            for s, v in products[(idx[k], idx[k + 1])]:
                total += sign * v * omega(*head, s, *tail)
        return total

    return Cochain.from_function(p + 1, n, value)


# -----------------------------------------------------------------------------
# symmetric degree-2 data
# -----------------------------------------------------------------------------
def sym_pairs(n: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(1, n + 1) for j in range(i, n + 1)]


def sym_coords(m: RationalMatrix) -> tuple:
    return tuple(m[i - 1, j - 1] for i, j in sym_pairs(m.rows))


def sym_matrix(coords: Sequence, n: int) -> RationalMatrix:
    rows = [[ZERO] * n for _ in range(n)]
    for (i, j), c in zip(sym_pairs(n), coords):
        rows[i - 1][j - 1] = rows[j - 1][i - 1] = to_rational(c)
    return RationalMatrix(rows)


def _cocycle_rows(w: ExtensionTensor) -> list[list[Fraction]]:
    n = w.n
    pairs = sym_pairs(n)
    pos = {pq: t for t, pq in enumerate(pairs)}
    rows = []
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            for k in range(1, n + 1):
                row = [ZERO] * len(pairs)
                for s in range(1, n + 1):
                    a, b = w.coeff(j, k, s), w.coeff(i, k, s)
                    if a:
                        row[pos[(min(i, s), max(i, s))]] += a
                    if b:
                        row[pos[(min(j, s), max(j, s))]] -= b
                if any(row):
                    rows.append(row)
    return rows


def is_symmetric(m: RationalMatrix) -> bool:
    return m.is_square and m == m.transpose()


def is_cocycle(w: ExtensionTensor, r: RationalMatrix) -> bool:
    n = w.n
    if r.shape != (n, n) or not is_symmetric(r):
        return False
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            for k in range(1, n + 1):
                total = ZERO
                for s in range(1, n + 1):
                    total += r[i - 1, s - 1] * w.coeff(j, k, s) - r[j - 1, s - 1] * w.coeff(i, k, s)
                if total:
                    return False
    return True


@dataclass(frozen=True)
class Cocycle2:
    R: RationalMatrix

    def __post_init__(self):
        r = self.R if isinstance(self.R, RationalMatrix) else RationalMatrix(self.R)
        object.__setattr__(self, "R", r)
        if not is_symmetric(r):
            raise NotCocycle("cocycle matrix must be symmetric")

    @classmethod
    def of(cls, w: ExtensionTensor, r) -> "Cocycle2":
        c = cls(r)
        if not is_cocycle(w, c.R):
            raise NotCocycle("matrix violates the cocycle condition for this tensor")
        return c


def cocycle_space2(w: ExtensionTensor) -> list[RationalMatrix]:
    n = w.n
    m = len(sym_pairs(n))
    return [sym_matrix(v, n) for v in kernel_basis(_cocycle_rows(w), m)]


def coboundary_space2(w: ExtensionTensor) -> list[RationalMatrix]:
    n = w.n
    vecs = [sym_coords(row_matrix(w, k)) for k in range(1, n + 1)]
    return [sym_matrix(v, n) for v in span_basis(vecs, len(sym_pairs(n)))]


@dataclass
class H2Report:
    dim_Z2: int
    dim_B2: int
    dim_H2: int
    representatives: list = field(default_factory=list)
    coboundary_basis: list = field(default_factory=list)
    cocycle_basis: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "dim_Z2": self.dim_Z2,
            "dim_B2": self.dim_B2,
            "dim_H2": self.dim_H2,
            "representatives": [m.to_strings() for m in self.representatives],
            "coboundary_basis": [m.to_strings() for m in self.coboundary_basis],
        }


def _reduce_mod(v: tuple, basis: list[tuple]) -> tuple:
    """Clear the pivot coordinates of an rref ``basis`` from ``v``."""
    v = list(v)
    for b in basis:
        p = next(t for t, x in enumerate(b) if x)
        if v[p]:
            f = v[p]
            v = [x - f * y for x, y in zip(v, b)]
    return tuple(v)


def h2(w: ExtensionTensor) -> H2Report:
    """Second cohomology with canonical representatives.

    Representatives are the rref basis of Z^2 reduced modulo the rref basis
    of B^2, which does not depend on how Z^2 was spanned.
    """
    n = w.n
    dim = len(sym_pairs(n))
    z = cocycle_space2(w)
    b = coboundary_space2(w)
    for m in b:
        if not is_cocycle(w, m):
            raise CoboundaryNotCocycle(f"coboundary {m} fails the cocycle condition")
    b_vecs = [sym_coords(m) for m in b]
    z_vecs = span_basis([sym_coords(m) for m in z], dim)
    reduced = [_reduce_mod(v, b_vecs) for v in z_vecs]
    reps = span_basis([v for v in reduced if any(v)], dim)
    if len(reps) != len(z) - len(b):
        raise CoboundaryNotCocycle("coboundary space is not contained in the cocycle space")
    return H2Report(
        len(z), len(b), len(reps),
        [sym_matrix(v, n) for v in reps], b, z,
    )


def extend_with_cocycle(w: ExtensionTensor, r) -> ExtensionTensor:
    """Adjoin e^{n+1} with e^i . e^j = sum_k W^{ij}_k e^k + R^{ij} e^{n+1}."""
    mat = r.R if isinstance(r, Cocycle2) else (r if isinstance(r, RationalMatrix) else RationalMatrix(r))
    if mat.shape != (w.n, w.n):
        raise DimensionMismatch(f"cocycle must be {w.n}x{w.n}")
    if not is_cocycle(w, mat):
        raise NotCocycle("matrix violates the cocycle condition for this tensor")
    n = w.n
    entries = dict(w.items())
    for i in range(1, n + 1):
        for j in range(i, n + 1):
            v = mat[i - 1, j - 1]
            if v:
                entries[(i, j, n + 1)] = v
    return ExtensionTensor(n + 1, entries, w.labeling)


def enumerate_extensions(w: ExtensionTensor) -> list[ExtensionTensor]:
    """One extension per H^2 representative; the trivial one when H^2 = 0."""
    report = h2(w)
    if not report.representatives:
        return [extend_with_cocycle(w, RationalMatrix.zeros(w.n))]
    return [extend_with_cocycle(w, r) for r in report.representatives]


def coboundary_shear(w: ExtensionTensor, coefficients: Sequence) -> BasisChange:
    """Basis change trivializing the extension by R = sum_s lambda^s W_(s).

    New basis vectors: e^k + lambda^k e^{n+1} (k <= n) and e^{n+1}.
    """
    n = w.n
    if len(coefficients) != n:
        raise DimensionMismatch("need one coefficient per basis element")
    cols = []
    for k in range(n):
        col = [ZERO] * (n + 1)
        col[k] = to_rational(1)
        col[n] = to_rational(coefficients[k])
        cols.append(col)
    cols.append([ZERO] * n + [to_rational(1)])
    return BasisChange.from_columns(cols)


def scaling_equivalent(w1: ExtensionTensor, w2: ExtensionTensor) -> tuple | None:
    """Diagnostic: find d with W2 = transform(W1, diag(d)), else None.

    Scales are propagated in index order (each output index takes its scale
    from the first product landing on it, otherwise 1), which is exhaustive
    for canonical solvable tensors with one generator per free scale but
    not in general.
    """
    if w1.n != w2.n or set(w1.entries) != set(w2.entries):
        return None
    n = w1.n
    d: list[Fraction | None] = [None] * (n + 1)
    for k in range(1, n + 1):
        for (i, j, kk), v in w1.items():
            if kk == k and i < k and j < k and d[i] is not None and d[j] is not None:
                d[k] = d[i] * d[j] * v / w2.coeff(i, j, k)
                break
        if d[k] is None:
            d[k] = Fraction(1)
    diag = tuple(d[1:])
    change = BasisChange(RationalMatrix(
        [[diag[i] if i == j else 0 for j in range(n)] for i in range(n)]
    ))
    if transform(w1, change).same_structure(w2):
        return diag
    return None


def format_matrix(m: RationalMatrix) -> str:
    return "[" + "; ".join(" ".join(format_rational(x) for x in row) for row in m.to_rows()) + "]"
