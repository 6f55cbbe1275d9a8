"""Finite-dimensional carrier Lie algebras and the extension bracket on G^n.

The extension of a carrier G by a tensor W is the space G^n with bracket

    ([x, y]_W)_s = sum_{i,j} W^{ij}_s [x_i, y_j].
"""

from __future__ import annotations

import json
import os
import re
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from .errors import CapExceeded, DimensionMismatch, NotLieAlgebra, TensorFormatError, UnknownPreset
from .exact_linalg import ZERO, format_rational, to_rational
from .tensor_core import _TensorBase

LIE_FORMAT = "uext-lie-v1"
DEFAULT_MAX_DIM = 24


def max_dim_cap() -> int:
    return int(os.environ.get("UEXT_MAX_N", DEFAULT_MAX_DIM))


class LieAlgebra:
    """Structure constants c^k_{ij} (1-based), stored for i < j only."""

    def __init__(self, dim: int, constants: dict, name: str = "", check: bool = True):
        if dim < 1:
            raise DimensionMismatch("carrier dimension must be positive")
        self.dim = dim
        self.name = name
        store = {}
        for (i, j, k), v in constants.items():
            v = to_rational(v)
            for idx in (i, j, k):
                if not 1 <= idx <= dim:
                    raise DimensionMismatch(f"index {idx} outside 1..{dim}")
            if i == j:
                if v:
                    raise NotLieAlgebra(f"[e{i}, e{i}] must vanish")
                continue
            if i > j:
                i, j, v = j, i, -v
            if (i, j, k) in store and store[(i, j, k)] != v:
                raise NotLieAlgebra(f"constants for ({i},{j},{k}) are not antisymmetric")
            if v:
                store[(i, j, k)] = v
        self._c = dict(sorted(store.items()))
        # bracket table: (i, j) -> sparse result {k: value}
        self._table: dict[tuple[int, int], dict[int, Fraction]] = {}
        for (i, j, k), v in self._c.items():
            self._table.setdefault((i, j), {})[k] = v
            self._table.setdefault((j, i), {})[k] = -v
        if check:
            witness = self.jacobi_witness()
            if witness is not None:
                raise NotLieAlgebra(f"Jacobi identity fails on basis triple {witness}")

    def c(self, i: int, j: int, k: int) -> Fraction:
        return self._table.get((i, j), {}).get(k, ZERO)

    @property
    def constants(self) -> dict:
        return dict(self._c)

    def basis_bracket(self, i: int, j: int) -> dict[int, Fraction]:
        return self._table.get((i, j), {})

    def bracket(self, x: Sequence, y: Sequence) -> tuple:
        d = self.dim
        if len(x) != d or len(y) != d:
            raise DimensionMismatch("carrier vector has wrong length")
        out = [ZERO] * d
        for (i, j), res in self._table.items():
            a, b = x[i - 1], y[j - 1]
            if a and b:
                for k, v in res.items():
                    out[k - 1] += a * b * v
        return tuple(out)

    def jacobi_witness(self) -> tuple | None:
        d = self.dim
        for i in range(1, d + 1):
            for j in range(i + 1, d + 1):
                for k in range(j + 1, d + 1):
                    for l in range(1, d + 1):
                        total = ZERO
                        for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
                            for m, v in self.basis_bracket(a, b).items():
                                total += v * self.c(m, c, l)
                        if total:
                            return (i, j, k)
        return None

    def __repr__(self) -> str:
        return f"LieAlgebra({self.name or 'custom'}, dim={self.dim})"


def _gl2() -> dict:
    # basis E11, E12, E21, E22 -> 1..4; bracket = matrix commutator
    units = [(0, 0), (0, 1), (1, 0), (1, 1)]

    def mat(a):
        r, c = units[a]
        return {(r, c): 1}

    def mul(p, q):
        out = {}
        for (r1, c1), v1 in p.items():
            for (r2, c2), v2 in q.items():
                if c1 == r2:
                    out[(r1, c2)] = out.get((r1, c2), 0) + v1 * v2
        return out

    consts = {}
    for a in range(4):
        for b in range(a + 1, 4):
            pq, qp = mul(mat(a), mat(b)), mul(mat(b), mat(a))
            for key in set(pq) | set(qp):
                v = pq.get(key, 0) - qp.get(key, 0)
                if v:
                    consts[(a + 1, b + 1, units.index(key) + 1)] = v
    return consts


def preset_algebra(name: str) -> LieAlgebra:
    """Named carriers: sl2, so3, heis3, gl2 and abelian-k (k <= 8)."""
    if name == "sl2":
        # H, E, F
        return LieAlgebra(3, {(1, 2, 2): 2, (1, 3, 3): -2, (2, 3, 1): 1}, "sl2")
    if name == "so3":
        return LieAlgebra(3, {(1, 2, 3): 1, (2, 3, 1): 1, (3, 1, 2): 1}, "so3")
    if name == "heis3":
        return LieAlgebra(3, {(1, 2, 3): 1}, "heis3")
    if name == "gl2":
        return LieAlgebra(4, _gl2(), "gl2")
    m = re.fullmatch(r"abelian-(\d+)", name)
    if m and 1 <= int(m.group(1)) <= 8:
        return LieAlgebra(int(m.group(1)), {}, name)
    raise UnknownPreset(name)


PRESETS = ("sl2", "so3", "heis3", "gl2") + tuple(f"abelian-{k}" for k in range(1, 9))


def load_lie(path) -> LieAlgebra:
    try:
        obj = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise TensorFormatError(f"{path}: invalid JSON ({exc})") from exc
    return lie_from_json(obj, name=Path(path).stem)


def lie_from_json(obj: dict, name: str = "custom") -> LieAlgebra:
    if not isinstance(obj, dict) or obj.get("format") != LIE_FORMAT:
        raise TensorFormatError(f"expected format {LIE_FORMAT!r}")
    dim = obj.get("dim")
    if not isinstance(dim, int) or dim < 1:
        raise TensorFormatError("'dim' must be a positive integer")
    consts = {}
    for e in obj.get("c", []):
        try:
            i, j, k = int(e["i"]), int(e["j"]), int(e["k"])
            v = to_rational(e["value"])
        except (KeyError, TypeError, ValueError) as exc:
            raise TensorFormatError(f"bad constant {e!r}") from exc
        if i >= j:
            raise TensorFormatError(f"constants must be stored with i < j, got {e!r}")
        if (i, j, k) in consts:
            raise TensorFormatError(f"duplicate constant {(i, j, k)}")
        consts[(i, j, k)] = v
    return LieAlgebra(dim, consts, name)


def lie_to_json(lie: LieAlgebra) -> dict:
    return {
        "format": LIE_FORMAT,
        "dim": lie.dim,
        "c": [
            {"i": i, "j": j, "k": k, "value": format_rational(v)}
            for (i, j, k), v in lie.constants.items()
        ],
    }


# -----------------------------------------------------------------------------
# the extended algebra G^n_W
# -----------------------------------------------------------------------------
ExtElement = list  # n carrier vectors


def _check_parts(w: _TensorBase, lie: LieAlgebra, x: Sequence) -> None:
    if len(x) != w.n:
        raise DimensionMismatch(f"expected {w.n} components, got {len(x)}")
    for part in x:
        if len(part) != lie.dim:
            raise DimensionMismatch("component has wrong carrier dimension")


def extension_bracket(w: _TensorBase, lie: LieAlgebra, x: Sequence, y: Sequence) -> list[tuple]:
    _check_parts(w, lie, x)
    _check_parts(w, lie, y)
    n = w.n
    out = [[ZERO] * lie.dim for _ in range(n)]
    for (i, j, s), v in w.raw_items():
        xi, yj = x[i - 1], y[j - 1]
        if not any(xi) or not any(yj):
            continue
        br = lie.bracket(xi, yj)
        target = out[s - 1]
        for t, b in enumerate(br):
            if b:
                target[t] += v * b
    return [tuple(p) for p in out]


def _structure(w: _TensorBase, lie: LieAlgebra) -> dict:
    """Sparse structure constants of G^n_W on the basis (slot, carrier index).

    Basis vector (a, b) has flat position (a - 1) * dim + (b - 1).
    """
    d = lie.dim
    table: dict[tuple[int, int], dict[int, Fraction]] = {}
    for (i, j, s), v in w.raw_items():
        for (p, q), res in lie._table.items():
            key = ((i - 1) * d + p - 1, (j - 1) * d + q - 1)
            slot = table.setdefault(key, {})
            for k, c in res.items():
                pos = (s - 1) * d + k - 1
                slot[pos] = slot.get(pos, ZERO) + v * c
    for key in list(table):
        table[key] = {k: v for k, v in table[key].items() if v}
        if not table[key]:
            del table[key]
    return table


@dataclass
class JacobiReport:
    holds: bool
    antisymmetric: bool
    witness: tuple | None = None  # ((slot, carrier), ...) of the first failure, internal slots
    triples: int = 0  # basis triples covered


def jacobi_check(w: _TensorBase, lie: LieAlgebra, max_dim: int | None = None) -> JacobiReport:
    """Brute-force antisymmetry and Jacobi identity on all basis triples of G^n_W.

    When the bracket is antisymmetric the Jacobiator is alternating, so the
    first failing triple in lexicographic order is sorted; only a < b < c
    is evaluated.
    """
    cap = max_dim_cap() if max_dim is None else max_dim
    size = w.n * lie.dim
    if size > cap:
        raise CapExceeded(f"n * dim = {size} exceeds the cap {cap}")
    d = lie.dim

    def label(pos: int) -> tuple[int, int]:
        return (pos // d + 1, pos % d + 1)

    table = _structure(w, lie)
    empty: dict = {}
    for a in range(size):
        if table.get((a, a)):
            return JacobiReport(False, False, (label(a), label(a)), 0)
        for b in range(a + 1, size):
            ab, ba = table.get((a, b), empty), table.get((b, a), empty)
            if any(ab.get(k, ZERO) != -ba.get(k, ZERO) for k in set(ab) | set(ba)):
                return JacobiReport(False, False, (label(a), label(b)), 0)

    def bracket_vec(vec: dict, c: int) -> dict:
        out: dict[int, Fraction] = {}
        for m, v in vec.items():
            for k, u in table.get((m, c), empty).items():
                out[k] = out.get(k, ZERO) + v * u
        return out

    for a in range(size):
        for b in range(a + 1, size):
            ab = table.get((a, b), empty)
            for c in range(b + 1, size):
                bc = table.get((b, c), empty)
                ca = table.get((c, a), empty)
                if not (ab or bc or ca):
                    continue
                total: dict[int, Fraction] = {}
                for vec, z in ((ab, c), (bc, a), (ca, b)):
                    for k, v in bracket_vec(vec, z).items():
                        total[k] = total.get(k, ZERO) + v
                if any(total.values()):
                    return JacobiReport(False, True, (label(a), label(b), label(c)), size ** 3)
    return JacobiReport(True, True, None, size ** 3)
