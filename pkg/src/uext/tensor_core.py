"""Extension tensors W^{ij}_k and the operations acting on them.

Internal indices always run over 1..n.  The ``labeling`` attribute only
changes how indices are displayed and written to files: the semisimple
convention shows internal index ``i`` as ``i - 1`` so that the unit reads 0.

Matrix conventions
------------------
* ``slice_matrix(W, i)[k-1, j-1] = W^{ij}_k``: column ``j`` holds the
  coordinates of e^i * e^j, i.e. the slice is the left-multiplication
  operator of e^i.
* ``row_matrix(W, k)[i-1, j-1] = W^{ij}_k``.
* A :class:`BasisChange` stores ``A`` whose *columns* are the new basis
  vectors written in the old basis.  Slices then transform by similarity,
  ``A^-1 X A``.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Mapping

from .errors import (
    AsymmetricTensor,
    ComplementNotClosed,
    DimensionMismatch,
    IndexOutOfRange,
    NoUnit,
    NotCanonical,
    TensorFormatError,
)
from .exact_linalg import ONE, ZERO, RationalMatrix, format_rational, invert, to_rational

SOLVABLE = "solvable"
SEMISIMPLE = "semisimple"
LABELINGS = (SOLVABLE, SEMISIMPLE)
TENSOR_FORMAT = "uext-tensor-v1"


def _debug() -> bool:
    return os.environ.get("UEXT_DEBUG", "") not in ("", "0")


def _check_labeling(labeling: str) -> str:
    if labeling not in LABELINGS:
        raise TensorFormatError(f"unknown labeling {labeling!r}")
    return labeling


class _TensorBase:
    """Shared read access for symmetric and raw tensors."""

    n: int
    labeling: str

    def coeff(self, i: int, j: int, k: int) -> Fraction:
        raise NotImplementedError

    @property
    def offset(self) -> int:
        """Amount subtracted from internal indices for display."""
        return 1 if self.labeling == SEMISIMPLE else 0

    def label(self, *indices: int) -> tuple[int, ...]:
        return tuple(i - self.offset for i in indices)

    def dense(self) -> list[list[list[Fraction]]]:
        """0-based nested lists d[i][j][k] = W^{i+1,j+1}_{k+1}."""
        n = self.n
        d = [[[ZERO] * n for _ in range(n)] for _ in range(n)]
        for (i, j, k), v in self.raw_items():
            d[i - 1][j - 1][k - 1] = v
        return d

    def raw_items(self):
        raise NotImplementedError


class ExtensionTensor(_TensorBase):
    """Symmetric (2,1) tensor stored sparsely with i <= j."""

    __slots__ = ("n", "labeling", "_entries")

    def __init__(self, n: int, entries: Mapping | Iterable = (), labeling: str = SOLVABLE):
        if n < 1:
            raise DimensionMismatch("tensor dimension must be at least 1")
        self.n = n
        self.labeling = _check_labeling(labeling)
        items = entries.items() if isinstance(entries, Mapping) else entries
        store: dict[tuple[int, int, int], Fraction] = {}
        for (i, j, k), v in items:
            for idx in (i, j, k):
                if not 1 <= idx <= n:
                    raise IndexOutOfRange(f"index {idx} outside 1..{n}")
            v = to_rational(v)
            key = (min(i, j), max(i, j), k)
            if key in store and store[key] != v:
                raise AsymmetricTensor(
                    f"conflicting values for ({i},{j},{k}): {store[key]} vs {v}"
                )
            store[key] = v
        self._entries = {key: v for key, v in sorted(store.items()) if v != 0}

    @classmethod
    def zero(cls, n: int, labeling: str = SOLVABLE) -> "ExtensionTensor":
        return cls(n, {}, labeling)

    @classmethod
    def from_dense(cls, d, labeling: str = SOLVABLE) -> "ExtensionTensor":
        """Build from nested lists d[i][j][k] (0-based); symmetry is enforced."""
        n = len(d)
        entries = {}
        for i in range(n):
            for j in range(i, n):
                for k in range(n):
                    a, b = d[i][j][k], d[j][i][k]
                    if a != b:
                        raise AsymmetricTensor(f"dense data not symmetric at {(i + 1, j + 1, k + 1)}")
                    if a:
                        entries[(i + 1, j + 1, k + 1)] = a
        return cls(n, entries, labeling)

    def coeff(self, i: int, j: int, k: int) -> Fraction:
        if i > j:
            i, j = j, i
        return self._entries.get((i, j, k), ZERO)

    @property
    def entries(self) -> dict[tuple[int, int, int], Fraction]:
        """Stored (i <= j) nonzero entries, sorted by (i, j, k)."""
        return dict(self._entries)

    def items(self):
        return self._entries.items()

    def raw_items(self):
        for (i, j, k), v in self._entries.items():
            yield (i, j, k), v
            if i != j:
                yield (j, i, k), v

    def with_labeling(self, labeling: str) -> "ExtensionTensor":
        return ExtensionTensor(self.n, self._entries, labeling)

    def is_zero(self) -> bool:
        return not self._entries

    def __eq__(self, other) -> bool:
        if not isinstance(other, ExtensionTensor):
            return NotImplemented
        return (self.n, self.labeling, self._entries) == (other.n, other.labeling, other._entries)

    def same_structure(self, other: "ExtensionTensor") -> bool:
        """Equality ignoring the display labeling."""
        return self.n == other.n and self._entries == other._entries

    def __hash__(self) -> int:
        return hash((self.n, self.labeling, tuple(self._entries.items())))

    def __repr__(self) -> str:
        body = ", ".join(f"{i}{j}->{k}: {format_rational(v)}" for (i, j, k), v in self._entries.items())
        return f"ExtensionTensor(n={self.n}, {self.labeling}, {{{body}}})"


class RawTensor(_TensorBase):
    """Unsymmetrized tensor data exactly as supplied by a file.

    Only used for diagnostics (validate, jacobi_check, basis product checks)
    on input that may violate symmetry.
    """

    __slots__ = ("n", "labeling", "_entries")

    def __init__(self, n: int, entries: Mapping, labeling: str = SOLVABLE):
        if n < 1:
            raise DimensionMismatch("tensor dimension must be at least 1")
        self.n = n
        self.labeling = _check_labeling(labeling)
        store = {}
        for (i, j, k), v in entries.items():
            for idx in (i, j, k):
                if not 1 <= idx <= n:
                    raise IndexOutOfRange(f"index {idx} outside 1..{n}")
            v = to_rational(v)
            if v != 0:
                store[(i, j, k)] = v
        self._entries = dict(sorted(store.items()))

    @classmethod
    def from_tensor(cls, w: ExtensionTensor) -> "RawTensor":
        return cls(w.n, dict(w.raw_items()), w.labeling)

    def coeff(self, i: int, j: int, k: int) -> Fraction:
        return self._entries.get((i, j, k), ZERO)

    def raw_items(self):
        return self._entries.items()

    def with_entry(self, i: int, j: int, k: int, value) -> "RawTensor":
        entries = dict(self._entries)
        entries[(i, j, k)] = to_rational(value)
        return RawTensor(self.n, entries, self.labeling)

    def symmetrized(self) -> ExtensionTensor:
        """Strict conversion; raises AsymmetricTensor on any conflict."""
        for (i, j, k), v in self._entries.items():
            if self.coeff(j, i, k) != v:
                raise AsymmetricTensor(
                    f"W^{{{i}{j}}}_{k} = {v} but W^{{{j}{i}}}_{k} = {self.coeff(j, i, k)}"
                )
        return ExtensionTensor(self.n, {key: v for key, v in self._entries.items() if key[0] <= key[1]},
                               self.labeling)

    def __repr__(self) -> str:
        return f"RawTensor(n={self.n}, {len(self._entries)} entries)"


# -----------------------------------------------------------------------------
# basis changes
# -----------------------------------------------------------------------------
@dataclass(frozen=True)
class BasisChange:
    """Invertible change of basis; columns of ``A`` are the new basis vectors."""

    A: RationalMatrix
    A_inv: RationalMatrix = field(default=None, repr=False)

    def __post_init__(self):
        a = self.A if isinstance(self.A, RationalMatrix) else RationalMatrix(self.A)
        object.__setattr__(self, "A", a)
        if not a.is_square:
            raise DimensionMismatch("basis change must be square")
        if self.A_inv is None:
            object.__setattr__(self, "A_inv", invert(a))

    @classmethod
    def identity(cls, n: int) -> "BasisChange":
        eye = RationalMatrix.identity(n)
        return cls(eye, eye)

    @classmethod
    def from_columns(cls, vectors) -> "BasisChange":
        return cls(RationalMatrix.from_columns(vectors))

    @property
    def n(self) -> int:
        return self.A.rows

    def inverse(self) -> "BasisChange":
        return BasisChange(self.A_inv, self.A)

    def then(self, other: "BasisChange") -> "BasisChange":
        """Apply self first, then ``other`` (expressed in self's new basis)."""
        return BasisChange(self.A @ other.A, other.A_inv @ self.A_inv)


# -----------------------------------------------------------------------------
# validation
# -----------------------------------------------------------------------------
@dataclass
class ValidationReport:
    symmetric: bool
    commuting: bool
    violations: list = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return self.symmetric and self.commuting and not self.violations


def validate(w: _TensorBase, max_violations: int | None = None) -> ValidationReport:
    """Check symmetry and pairwise commutation of the slice matrices.

    Violations are ``(kind, index_tuple, lhs, rhs)`` in internal indices:
    ``("symmetric", (i, j, k), W^{ij}_k, W^{ji}_k)`` for i < j and
    ``("commuting", (i, s, q, p), sum_k W^{sk}_i W^{qp}_k, sum_k W^{qk}_i W^{sp}_k)``
    for s < q.
    """
    n = w.n
    d = w.dense()
    violations = []
    symmetric = True
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(n):
                if d[i][j][k] != d[j][i][k]:
                    symmetric = False
                    violations.append(("symmetric", (i + 1, j + 1, k + 1), d[i][j][k], d[j][i][k]))
    # slices[s][i][p] = W^{sp}_i (row = output index)
    slices = [[[d[s][p][i] for p in range(n)] for i in range(n)] for s in range(n)]
    commuting = True
    for s in range(n):
        for q in range(s + 1, n):
            S, Q = slices[s], slices[q]
            for i in range(n):
                srow = [(k, a) for k, a in enumerate(S[i]) if a]
                qrow = [(k, a) for k, a in enumerate(Q[i]) if a]
                for p in range(n):
                    lhs = sum((a * Q[k][p] for k, a in srow), ZERO)
                    rhs = sum((a * S[k][p] for k, a in qrow), ZERO)
                    if lhs != rhs:
                        commuting = False
                        violations.append(("commuting", (i + 1, s + 1, q + 1, p + 1), lhs, rhs))
            if max_violations is not None and len(violations) >= max_violations:
                return ValidationReport(symmetric, commuting, violations)
    return ValidationReport(symmetric, commuting, violations)


def is_valid(w: _TensorBase) -> bool:
    return validate(w, max_violations=1).valid


# -----------------------------------------------------------------------------
# matrix views
# -----------------------------------------------------------------------------
def _check_index(w: _TensorBase, i: int) -> None:
    if not 1 <= i <= w.n:
        raise IndexOutOfRange(f"index {i} outside 1..{w.n}")


def slice_matrix(w: _TensorBase, i: int) -> RationalMatrix:
    _check_index(w, i)
    n = w.n
    return RationalMatrix._wrap(
        tuple(tuple(w.coeff(i, j, k) for j in range(1, n + 1)) for k in range(1, n + 1)), n
    )


def row_matrix(w: _TensorBase, k: int) -> RationalMatrix:
    _check_index(w, k)
    n = w.n
    return RationalMatrix._wrap(
        tuple(tuple(w.coeff(i, j, k) for j in range(1, n + 1)) for i in range(1, n + 1)), n
    )


# -----------------------------------------------------------------------------
# transformations
# -----------------------------------------------------------------------------
def transform(w: ExtensionTensor, change: BasisChange) -> ExtensionTensor:
    """Rewrite W in the basis given by the columns of ``change.A``.

    W'^{ab}_c = sum_{i,j,k} A[i,a] A[j,b] A_inv[c,k] W^{ij}_k
    """
    n = w.n
    if change.n != n:
        raise DimensionMismatch(f"basis change is {change.n}x{change.n}, tensor has n={n}")
    a = change.A.to_rows()
    ainv = change.A_inv.to_rows()
    d = w.dense()
    rng = range(n)
    # contract the first index
    t1 = [[[ZERO] * n for _ in rng] for _ in rng]
    for i in rng:
        for ap in rng:
            c = a[i][ap]
            if c:
                for j in rng:
                    src, dst = d[i][j], t1[ap][j]
                    for k in rng:
                        if src[k]:
                            dst[k] += c * src[k]
    # second index
    t2 = [[[ZERO] * n for _ in rng] for _ in rng]
    for ap in rng:
        for j in rng:
            src = t1[ap][j]
            if not any(src):
                continue
            for bp in rng:
                c = a[j][bp]
                if c:
                    dst = t2[ap][bp]
                    for k in rng:
                        if src[k]:
                            dst[k] += c * src[k]
    # third (lower) index
    out = [[[ZERO] * n for _ in rng] for _ in rng]
    for ap in rng:
        for bp in range(ap, n):
            src = t2[ap][bp]
            nz = [(k, v) for k, v in enumerate(src) if v]
            if not nz:
                continue
            dst = out[ap][bp]
            for cp in rng:
                row = ainv[cp]
                dst[cp] = sum((row[k] * v for k, v in nz), ZERO)
    entries = {
        (ap + 1, bp + 1, cp + 1): out[ap][bp][cp]
        for ap in rng for bp in range(ap, n) for cp in rng if out[ap][bp][cp]
    }
    result = ExtensionTensor(n, entries, w.labeling)
    if _debug() and is_valid(w) and not is_valid(result):
        raise AssertionError("basis change destroyed tensor validity")
    return result


def is_canonical_solvable(w: _TensorBase) -> bool:
    return all(k > max(i, j) for (i, j, k), _ in w.raw_items())


def reduce(w: ExtensionTensor, k: int) -> ExtensionTensor:
    """Quotient by the top ``k`` filtration layers: keep indices 1..n-k."""
    if not 1 <= k < w.n:
        raise DimensionMismatch(f"reduction depth {k} outside 1..{w.n - 1}")
    if not is_canonical_solvable(w):
        raise NotCanonical("reduction needs a tensor in canonical solvable form")
    m = w.n - k
    return ExtensionTensor(
        m, {key: v for key, v in w.items() if max(key) <= m}, w.labeling
    )


def unitize(w: ExtensionTensor) -> ExtensionTensor:
    """Adjoin a unit as the new internal index 1."""
    n = w.n + 1
    entries = {(1, j, j): ONE for j in range(1, n + 1)}
    for (i, j, k), v in w.items():
        entries[(i + 1, j + 1, k + 1)] = v
    return ExtensionTensor(n, entries, SEMISIMPLE)


def has_unit_at_first(w: _TensorBase) -> bool:
    n = w.n
    return all(
        w.coeff(1, j, k) == (ONE if j == k else ZERO)
        for j in range(1, n + 1) for k in range(1, n + 1)
    )


def deunitize(w: ExtensionTensor) -> ExtensionTensor:
    """Drop the unit at internal index 1 and shift the other indices down.

    The remaining basis vectors must span a subalgebra; otherwise the
    dropped unit components would be silently lost, and
    ComplementNotClosed is raised.
    """
    if not has_unit_at_first(w):
        raise NoUnit("internal index 1 is not a unit")
    if w.n < 2:
        raise DimensionMismatch("cannot remove the unit of a 1-dimensional algebra")
    entries = {}
    for (i, j, k), v in w.items():
        if i == 1:
            continue
        if k == 1:
            raise ComplementNotClosed(
                f"e^{i} * e^{j} has a unit component; pick a complement that is an ideal"
            )
        entries[(i - 1, j - 1, k - 1)] = v
    return ExtensionTensor(w.n - 1, entries, SOLVABLE)


def abelian_tail_depth(w: ExtensionTensor) -> int:
    """Largest k such that span(e^{n-k+1}, ..., e^n) multiplies to zero with itself."""
    if not is_canonical_solvable(w):
        raise NotCanonical("abelian tail depth needs canonical solvable form")
    return min([w.n] + [w.n - i for (i, _j, _k) in w.entries])


def direct_sum(*tensors: ExtensionTensor, labeling: str = SOLVABLE) -> ExtensionTensor:
    entries = {}
    shift = 0
    for t in tensors:
        for (i, j, k), v in t.items():
            entries[(i + shift, j + shift, k + shift)] = v
        shift += t.n
    return ExtensionTensor(shift, entries, labeling)


# -----------------------------------------------------------------------------
# file format
# -----------------------------------------------------------------------------
def tensor_to_json(w: _TensorBase) -> dict:
    off = w.offset
    items = w.items() if isinstance(w, ExtensionTensor) else w.raw_items()
    return {
        "format": TENSOR_FORMAT,
        "n": w.n,
        "labeling": w.labeling,
        "entries": [
            {"i": i - off, "j": j - off, "k": k - off, "value": format_rational(v)}
            for (i, j, k), v in items
        ],
    }


def _parse_entries(obj: dict) -> tuple[int, str, dict]:
    if not isinstance(obj, dict) or obj.get("format") != TENSOR_FORMAT:
        raise TensorFormatError(f"expected format {TENSOR_FORMAT!r}")
    n = obj.get("n")
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise TensorFormatError("'n' must be a positive integer")
    labeling = obj.get("labeling", SOLVABLE)
    if labeling not in LABELINGS:
        raise TensorFormatError(f"unknown labeling {labeling!r}")
    off = 1 if labeling == SEMISIMPLE else 0
    raw = {}
    for e in obj.get("entries", []):
        try:
            key = (int(e["i"]) + off, int(e["j"]) + off, int(e["k"]) + off)
            value = to_rational(e["value"])
        except (KeyError, TypeError, ValueError) as exc:
            raise TensorFormatError(f"bad entry {e!r}") from exc
        if key in raw:
            raise TensorFormatError(f"duplicate entry for {tuple(x - off for x in key)}")
        for idx in key:
            if not 1 <= idx <= n:
                raise TensorFormatError(f"entry {e!r} has an index out of range")
        raw[key] = value
    return n, labeling, raw


def tensor_from_json(obj: dict) -> ExtensionTensor:
    """Strict loader: conflicting (i,j,k)/(j,i,k) values raise AsymmetricTensor."""
    return raw_tensor_from_json(obj).symmetrized()


def raw_tensor_from_json(obj: dict) -> RawTensor:
    """Lenient loader that keeps asymmetric data for diagnostics.

    A one-sided entry (i, j, k) with no (j, i, k) partner is read as
    symmetric, so files listing only i <= j load as ordinary tensors.
    """
    n, labeling, raw = _parse_entries(obj)
    full = dict(raw)
    for (i, j, k), v in raw.items():
        full.setdefault((j, i, k), v)
    return RawTensor(n, full, labeling)


def dumps_tensor(w: _TensorBase) -> str:
    return json.dumps(tensor_to_json(w), indent=1) + "\n"


def write_tensor(path, w: _TensorBase) -> None:
    Path(path).write_text(dumps_tensor(w), encoding="utf-8")


def _load_json(path) -> dict:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise TensorFormatError(f"{path}: invalid JSON ({exc})") from exc


def read_tensor(path) -> ExtensionTensor:
    return tensor_from_json(_load_json(path))


def read_raw_tensor(path) -> RawTensor:
    return raw_tensor_from_json(_load_json(path))
