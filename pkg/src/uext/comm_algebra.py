"""The commutative associative algebra attached to an extension tensor.

The product is e^i * e^j = sum_s W^{ij}_s e^s.  A tensor is valid exactly
when this product is commutative and associative, and the slice matrices
are then the regular representation of the basis elements.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DimensionMismatch, NoUnit, NotNilpotent, UextError
from .exact_linalg import (
    ONE,
    ZERO,
    RationalMatrix,
    _rref_in_place,
    RationalPolynomial,
    char_poly,
    complete_basis,
    coordinates,
    kernel_basis,
    rational_roots,
    span_basis,
    to_rational,
)
from .tensor_core import (
    SOLVABLE,
    BasisChange,
    ExtensionTensor,
    _TensorBase,
    format_rational,
    is_canonical_solvable,
    slice_matrix,
    tensor_to_json,
    transform,
    validate,
)


class InvalidTensor(UextError):
    """The tensor does not define a commutative associative algebra."""


@dataclass(frozen=True)
class AlgElement:
    coords: tuple

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(to_rational(c) for c in self.coords))

    @classmethod
    def basis(cls, n: int, i: int) -> "AlgElement":
        """The basis element e^i (1-based)."""
        return cls(tuple(ONE if s == i else ZERO for s in range(1, n + 1)))

    @classmethod
    def zero(cls, n: int) -> "AlgElement":
        return cls((ZERO,) * n)

    def __len__(self) -> int:
        return len(self.coords)

    def __add__(self, other: "AlgElement") -> "AlgElement":
        return AlgElement(tuple(a + b for a, b in zip(self.coords, other.coords, strict=True)))

    def __sub__(self, other: "AlgElement") -> "AlgElement":
        return AlgElement(tuple(a - b for a, b in zip(self.coords, other.coords, strict=True)))

    def __rmul__(self, c) -> "AlgElement":
        c = to_rational(c)
        return AlgElement(tuple(c * a for a in self.coords))

    def is_zero(self) -> bool:
        return not any(self.coords)


class CommAlgebra:
    """A^n_W for a valid tensor W."""

    def __init__(self, tensor: ExtensionTensor, check: bool = True):
        if check:
            report = validate(tensor, max_violations=1)
            if not report.valid:
                raise InvalidTensor(f"tensor is not valid: {report.violations[:1]}")
        self.tensor = tensor
        self.n = tensor.n
        self._slices = None

    @property
    def slices(self) -> list[RationalMatrix]:
        if self._slices is None:
            self._slices = [slice_matrix(self.tensor, i) for i in range(1, self.n + 1)]
        return self._slices

    def element(self, coords: Sequence) -> AlgElement:
        if len(coords) != self.n:
            raise DimensionMismatch(f"expected {self.n} coordinates, got {len(coords)}")
        return AlgElement(tuple(coords))

    def e(self, i: int) -> AlgElement:
        return AlgElement.basis(self.n, i)

    def __repr__(self) -> str:
        return f"CommAlgebra({self.tensor!r})"


def _product(n: int, coeff, x: Sequence, y: Sequence) -> tuple:
    z = [ZERO] * n
    for i in range(n):
        if not x[i]:
            continue
        for j in range(n):
            if not y[j]:
                continue
            c = x[i] * y[j]
            for s in range(n):
                w = coeff(i + 1, j + 1, s + 1)
                if w:
                    z[s] += c * w
    return tuple(z)


def multiply(a: CommAlgebra, x: AlgElement, y: AlgElement) -> AlgElement:
    if len(x) != a.n or len(y) != a.n:
        raise DimensionMismatch("element length does not match algebra dimension")
    return AlgElement(_product(a.n, a.tensor.coeff, x.coords, y.coords))


def regular_rep(a: CommAlgebra, x: AlgElement) -> RationalMatrix:
    """Matrix of y -> x * y; column j is x * e^j."""
    if len(x) != a.n:
        raise DimensionMismatch("element length does not match algebra dimension")
    n = a.n
    acc = RationalMatrix.zeros(n)
    for i, c in enumerate(x.coords):
        if c:
            acc = acc + a.slices[i].scale(c)
    return acc


def basis_products_ok(w: _TensorBase) -> tuple[bool, tuple | None]:
    """Check commutativity and associativity of e^i * e^j on all basis triples.

    Works directly on raw coefficients, so asymmetric input is handled.
    The witness is ``("commutative", (i, j))`` or ``("associative", (i, j, l))``.
    """
    n = w.n
    rng = range(1, n + 1)
    for i in rng:
        for j in rng:
            if i < j and any(w.coeff(i, j, k) != w.coeff(j, i, k) for k in rng):
                return False, ("commutative", (i, j))
    prod = {
        (i, j): [w.coeff(i, j, k) for k in rng] for i in rng for j in rng
    }
    for i in rng:
        for j in rng:
            ij = prod[(i, j)]
            for l in rng:
                jl = prod[(j, l)]
                for m in rng:
                    lhs = sum((c * w.coeff(k, l, m) for k, c in enumerate(ij, 1) if c), ZERO)
                    rhs = sum((c * w.coeff(i, k, m) for k, c in enumerate(jl, 1) if c), ZERO)
                    if lhs != rhs:
                        return False, ("associative", (i, j, l))
    return True, None


# -----------------------------------------------------------------------------
# filtration, nilpotency, unit
# -----------------------------------------------------------------------------
def power_filtration(a: CommAlgebra) -> list[list[tuple]]:
    """Bases of A, A^2, A^3, ... until the layer is zero or stops shrinking."""
    n = a.n
    layer = span_basis([AlgElement.basis(n, i).coords for i in range(1, n + 1)], n)
    layers = [layer]
    while layer:
        products = [s.apply(v) for v in layer for s in a.slices]
        nxt = span_basis(products, n)
        layers.append(nxt)
        if len(nxt) == len(layer):
            break
        layer = nxt
    return layers


def is_nilpotent(a: CommAlgebra) -> tuple[bool, int | None]:
    """(True, m) with the least m such that A^m = 0, else (False, None)."""
    layers = power_filtration(a)
    if layers[-1]:
        return False, None
    return True, len(layers)


def find_unit(a: CommAlgebra) -> AlgElement | None:
    n = a.n
    # unknown u: sum_i u_i W^{ij}_k = delta_jk for all j, k
    rows = []
    for j in range(1, n + 1):
        for k in range(1, n + 1):
            rows.append([a.tensor.coeff(i, j, k) for i in range(1, n + 1)] + [ONE if j == k else ZERO])
    pivots = _rref_in_place(rows, n + 1, pivot_limit=n)
    if any(rows[r][n] != 0 for r in range(len(pivots), len(rows))):
        return None
    if len(pivots) < n:
        # a consistent system with free variables cannot occur (units are unique)
        raise AssertionError("unit equations are underdetermined")
    u = [ZERO] * n
    for r, p in enumerate(pivots):
        u[p] = rows[r][n]
    return AlgElement(tuple(u))


# -----------------------------------------------------------------------------
# canonical form
# -----------------------------------------------------------------------------
def canonicalize(a: CommAlgebra) -> tuple[BasisChange, ExtensionTensor]:
    """Basis adapted to A > A^2 > A^3 > ... > 0, giving canonical solvable form.

    Each layer contributes the earliest vectors of its rref basis that are
    independent modulo the next deeper layer.
    """
    layers = power_filtration(a)
    if layers[-1]:
        raise NotNilpotent("algebra is not nilpotent (power filtration does not reach 0)")
    n = a.n
    columns = []
    for t in range(len(layers) - 1):
        columns.extend(complete_basis(layers[t + 1], layers[t], n))
    change = BasisChange.from_columns(columns)
    canonical = transform(a.tensor, change).with_labeling(SOLVABLE)
    if not is_canonical_solvable(canonical):
        raise AssertionError("filtration-adapted basis did not give canonical form")
    return change, canonical


# -----------------------------------------------------------------------------
# splitting into ideals
# -----------------------------------------------------------------------------
@dataclass
class SplitReport:
    blocks: list  # list of (dimension, ExtensionTensor)
    change: BasisChange
    complete: bool
    history: list = field(default_factory=list)

    @property
    def dims(self) -> list[int]:
        return [d for d, _ in self.blocks]

    def block_ranges(self) -> list[range]:
        out, start = [], 1
        for d, _ in self.blocks:
            out.append(range(start, start + d))
            start += d
        return out

    def to_json(self) -> dict:
        return {
            "blocks": [{"dim": d, "tensor": tensor_to_json(t)} for d, t in self.blocks],
            "change": self.change.A.to_strings(),
            "complete": self.complete,
            "history": self.history,
        }


def _restrict(m: RationalMatrix, basis: list[tuple]) -> RationalMatrix:
    cols = []
    for b in basis:
        c = coordinates(basis, m.apply(b))
        if c is None:
            raise AssertionError("subspace is not invariant")
        cols.append(c)
    return RationalMatrix.from_columns(cols)


def _refine(m: RationalMatrix, basis: list[tuple]) -> tuple[list[list[tuple]], bool]:
    """Split an invariant subspace by the generalized eigenspaces of ``m``.

    Returns the parts (global coordinates) and whether the restricted
    characteristic polynomial split over Q.
    """
    d = len(basis)
    r = _restrict(m, basis)
    p = char_poly(r)
    roots = rational_roots(p)
    covered = sum(mult for _, mult in roots)
    if len(roots) == 1 and covered == d:
        return [basis], True
    parts = []
    eye = RationalMatrix.identity(d)
    rest = p
    for lam, mult in roots:
        shifted = (r - eye.scale(lam)) ** d
        local = kernel_basis(shifted.to_rows(), d)
        parts.append(local)
        for _ in range(mult):
            rest, _rem = rest.divide_linear(lam)
    if covered < d:
        local = kernel_basis(rest.evaluate_matrix(r).to_rows(), d)
        parts.append(local)
    out = [
        [tuple(sum((c * b[t] for c, b in zip(vec, basis) if c), ZERO) for t in range(len(basis[0])))
         for vec in local]
        for local in parts
    ]
    return out, covered == d


def split(a: CommAlgebra, slices: Iterable[int] | None = None) -> SplitReport:
    """Common refinement of the generalized eigenspaces of the slice matrices.

    ``slices`` restricts (and orders) the slice indices used for refining;
    by default all of 1..n are used in increasing order.  ``history`` lists
    the block dimensions after each refining slice.
    """
    n = a.n
    order = list(range(1, n + 1)) if slices is None else list(slices)
    blocks = [[AlgElement.basis(n, i).coords for i in range(1, n + 1)]]
    complete = True
    history = [[n]]
    for i in order:
        m = a.slices[i - 1]
        new_blocks = []
        for basis in blocks:
            parts, ok = _refine(m, basis)
            complete = complete and ok
            new_blocks.extend(parts)
        blocks = new_blocks
        history.append([len(b) for b in blocks])
    columns = [v for b in blocks for v in b]
    change = BasisChange.from_columns(columns)
    moved = transform(a.tensor, change)
    out_blocks = []
    start = 1
    for b in blocks:
        d = len(b)
        lo, hi = start, start + d - 1
        entries = {}
        for (i, j, k), v in moved.items():
            inside = [lo <= x <= hi for x in (i, j, k)]
            if inside[0] and inside[1] and inside[2]:
                entries[(i - lo + 1, j - lo + 1, k - lo + 1)] = v
            elif inside[0] != inside[1] or (inside[0] and not inside[2]):
                raise AssertionError("generalized eigenspaces are not ideals")
        out_blocks.append((d, ExtensionTensor(d, entries, SOLVABLE)))
        start += d
    return SplitReport(out_blocks, change, complete, history)


def unit_first_change(a: CommAlgebra) -> BasisChange:
    """Basis change putting the unit first and an ideal complement after it.

    The complement is the kernel of a character (an algebra map A -> Q),
    found as a common eigenvector of the transposed slices; deunitize then
    applies cleanly to the transformed tensor.
    """
    u = find_unit(a)
    if u is None:
        raise NoUnit("algebra has no unit")
    n = a.n
    space = [AlgElement.basis(n, i).coords for i in range(1, n + 1)]
    for s in a.slices:
        st = s.transpose()
        r = _restrict(st, space)
        roots = rational_roots(char_poly(r))
        if not roots:
            raise UextError("no rational character: transposed slices have no rational eigenvalue")
        lam = roots[0][0]
        d = len(space)
        local = kernel_basis((r - RationalMatrix.identity(d).scale(lam)).to_rows(), d)
        space = [
            tuple(sum((c * b[t] for c, b in zip(vec, space) if c), ZERO) for t in range(n))
            for vec in local
        ]
    phi = space[0]
    scale = sum((p * x for p, x in zip(phi, u.coords)), ZERO)
    phi = tuple(p / scale for p in phi)
    complement = kernel_basis([phi], n)
    return BasisChange.from_columns([u.coords] + complement)
