"""Commutative monoid tables (E- and SE-functions) and the named tensor families.

A table ``f`` on labels 0..n encodes a product e^i * e^j = e^{f(i, j)}.
E-functions only need symmetry and associativity.  SE-functions add an
absorbing zero label (f(i, 0) = 0) and strictly growing nonzero products
(f(i, j) != 0 implies f(i, j) > max(i, j)); their tensor lives on labels
1..n with the zero label factored out.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator

from .errors import CapExceeded, DimensionMismatch, InvalidTable, TensorFormatError
from .exact_linalg import ONE, to_rational
from .tensor_core import SEMISIMPLE, SOLVABLE, ExtensionTensor

E_KIND = "E"
SE_KIND = "SE"
MONOID_FORMAT = "uext-monoid-v1"
DEFAULT_SE_CAP = 6


@dataclass(frozen=True)
class MonoidTable:
    """f(i, j) = table[i][j] on labels 0..n."""

    n: int
    table: tuple
    kind: str = E_KIND

    def __post_init__(self):
        if self.kind not in (E_KIND, SE_KIND):
            raise InvalidTable(f"unknown kind {self.kind!r}")
        rows = tuple(tuple(int(x) for x in r) for r in self.table)
        size = self.n + 1
        if self.n < 0 or len(rows) != size or any(len(r) != size for r in rows):
            raise InvalidTable(f"table must be {size}x{size}")
        if any(not 0 <= x <= self.n for r in rows for x in r):
            raise InvalidTable("table values must be labels 0..n")
        object.__setattr__(self, "table", rows)

    def f(self, i: int, j: int) -> int:
        return self.table[i][j]

    @classmethod
    def from_function(cls, n: int, fn, kind: str = E_KIND) -> "MonoidTable":
        return cls(n, tuple(tuple(fn(i, j) for j in range(n + 1)) for i in range(n + 1)), kind)

    def to_json(self) -> dict:
        return {"format": MONOID_FORMAT, "kind": self.kind, "n": self.n,
                "table": [list(r) for r in self.table]}


def validate_efunction(t: MonoidTable) -> bool:
    f = t.table
    labels = range(t.n + 1)
    for i in labels:
        for j in labels:
            if f[i][j] != f[j][i]:
                return False
    for i in labels:
        for j in labels:
            fij = f[i][j]
            for k in labels:
                if f[i][f[j][k]] != f[fij][k]:
                    return False
    return True


def validate_sefunction(t: MonoidTable) -> bool:
    f = t.table
    labels = range(t.n + 1)
    if any(f[i][0] != 0 for i in labels):
        return False
    for i in labels:
        for j in labels:
            if f[i][j] != 0 and f[i][j] <= max(i, j):
                return False
    return validate_efunction(t)


def is_valid_table(t: MonoidTable) -> bool:
    return validate_sefunction(t) if t.kind == SE_KIND else validate_efunction(t)


def monoid_to_tensor(t: MonoidTable) -> ExtensionTensor:
    """W^{ij}_k = delta_k^{f(i,j)}.

    E kind: all n+1 labels, internal index = label + 1, semisimple display.
    SE kind: labels 1..n with the f = 0 products sent to zero.
    """
    if not is_valid_table(t):
        raise InvalidTable(f"table is not a valid {t.kind}-function")
    if t.kind == E_KIND:
        entries = {
            (i + 1, j + 1, t.f(i, j) + 1): ONE
            for i in range(t.n + 1) for j in range(i, t.n + 1)
        }
        return ExtensionTensor(t.n + 1, entries, SEMISIMPLE)
    if t.n < 1:
        raise DimensionMismatch("the SE table on I_0 has an empty quotient algebra")
    entries = {
        (i, j, t.f(i, j)): ONE
        for i in range(1, t.n + 1) for j in range(i, t.n + 1) if t.f(i, j)
    }
    return ExtensionTensor(t.n, entries, SOLVABLE)


# -----------------------------------------------------------------------------
# named families
# -----------------------------------------------------------------------------
def zp_additive(p: int) -> MonoidTable:
    if p < 2:
        raise DimensionMismatch("p must be at least 2")
    return MonoidTable.from_function(p - 1, lambda i, j: (i + j) % p, E_KIND)


def zp_multiplicative(p: int) -> MonoidTable:
    if p < 2:
        raise DimensionMismatch("p must be at least 2")
    return MonoidTable.from_function(p - 1, lambda i, j: (i * j) % p, E_KIND)


def leibnitz_table(n: int, strict: bool = False) -> MonoidTable:
    """f_L(i, j) = i + j when i + j <= n (``strict``: i + j < n), else 0."""
    if n < 0:
        raise DimensionMismatch("n must be non-negative")

    def f(i, j):
        if i == 0 or j == 0:
            return 0
        s = i + j
        return s if (s < n if strict else s <= n) else 0

    return MonoidTable.from_function(n, f, SE_KIND)


def abelian_extension_table(n: int, pairs: Iterable[tuple[int, int]]) -> MonoidTable:
    """f(i, j) = n on the swap-closure of ``pairs``, 0 elsewhere."""
    closed = set()
    for i, j in pairs:
        if not (1 <= i <= n - 1 and 1 <= j <= n - 1):
            raise InvalidTable(f"pair {(i, j)} must lie in 1..{n - 1}")
        closed |= {(i, j), (j, i)}
    return MonoidTable.from_function(n, lambda i, j: n if (i, j) in closed else 0, SE_KIND)


def trivial_extension_table(t: MonoidTable, n: int) -> MonoidTable:
    """Embed an SE table on I_k into I_n (n > k), zero outside I_k x I_k."""
    if n <= t.n:
        raise DimensionMismatch("target must be larger than the source table")
    k = t.n
    return MonoidTable.from_function(n, lambda i, j: t.f(i, j) if i <= k and j <= k else 0, SE_KIND)


def leibnitz(n: int, l1=1) -> ExtensionTensor:
    """W^{ij}_k = l1 when k = i + j <= n."""
    if n < 1:
        raise DimensionMismatch("n must be at least 1")
    l1 = to_rational(l1)
    return ExtensionTensor(n, {
        (i, j, i + j): l1 for i in range(1, n + 1) for j in range(i, n + 1) if i + j <= n
    }, SOLVABLE)


def lambda_family(n: int, l1, l2) -> ExtensionTensor:
    """Unit at label 0; l1 on i + j <= n - 1 and l2 on i + j = n (labels 1..n)."""
    if n < 2:
        raise DimensionMismatch("n must be at least 2")
    l1, l2 = to_rational(l1), to_rational(l2)
    entries = {(1, j, j): ONE for j in range(1, n + 2)}
    for i in range(1, n + 1):
        for j in range(i, n + 1):
            s = i + j
            if s <= n - 1:
                entries[(i + 1, j + 1, s + 1)] = l1
            elif s == n:
                entries[(i + 1, j + 1, s + 1)] = l2
    return ExtensionTensor(n + 1, entries, SEMISIMPLE)


def crmhd(beta) -> ExtensionTensor:
    """Unit at label 0 and W^{12}_3 = W^{21}_3 = -beta (labels 0..3)."""
    beta = to_rational(beta)
    entries = {(1, j, j): ONE for j in range(1, 5)}
    entries[(2, 3, 4)] = -beta
    return ExtensionTensor(4, entries, SEMISIMPLE)


# -----------------------------------------------------------------------------
# restriction and census
# -----------------------------------------------------------------------------
def restrict_se(t: MonoidTable) -> MonoidTable:
    """Zero the products that reach the top label n and drop label n."""
    if t.kind != SE_KIND or not validate_sefunction(t):
        raise InvalidTable("restriction needs a valid SE table")
    if t.n < 1:
        raise DimensionMismatch("cannot restrict the table on I_0")
    n = t.n
    return MonoidTable.from_function(
        n - 1, lambda i, j: 0 if t.f(i, j) == n else t.f(i, j), SE_KIND
    )


def se_cap() -> int:
    env = os.environ.get("UEXT_MAX_N")
    return int(env) if env else DEFAULT_SE_CAP


@dataclass
class SECensus:
    n: int
    tables: list = field(default_factory=list)

    @property
    def count(self) -> int:
        return len(self.tables)

    def to_jsonl(self) -> str:
        return "".join(json.dumps(t.to_json(), separators=(",", ":")) + "\n" for t in self.tables)


def _touching(n: int, i: int, j: int) -> list[tuple[int, int, int]]:
    """Triples of labels 1..n whose associativity check can read cell (i, j)."""
    hit = {i, j}
    labels = range(1, n + 1)
    return [(a, b, c) for a in labels for b in labels for c in labels
            if a in hit or b in hit or c in hit]


def _iter_se(n: int) -> Iterator[MonoidTable]:
    free = [(i, j) for i in range(1, n) for j in range(i, n)]
    f = [[0] * (n + 1) for _ in range(n + 1)]
    known = [[True] * (n + 1) for _ in range(n + 1)]
    for i, j in free:
        known[i][j] = known[j][i] = False
    # only triples reading the newly placed cell can change status
    triples = [_touching(n, i, j) for i, j in free]

    def consistent(pos: int) -> bool:
        for a, b, c in triples[pos]:
            if known[a][b] and known[b][c]:
                ab, bc = f[a][b], f[b][c]
                if known[a][bc] and known[ab][c] and f[a][bc] != f[ab][c]:
                    return False
        return True

    def place(pos: int):
        if pos == len(free):
            yield MonoidTable(n, tuple(tuple(r) for r in f), SE_KIND)
            return
        i, j = free[pos]
        for v in [0] + list(range(max(i, j) + 1, n + 1)):
            f[i][j] = f[j][i] = v
            known[i][j] = known[j][i] = True
            if consistent(pos):
                yield from place(pos + 1)
        f[i][j] = f[j][i] = 0
        known[i][j] = known[j][i] = False

    yield from place(0)


def relabel(t: MonoidTable, perm: tuple) -> MonoidTable:
    """Table of the monoid with label i renamed perm[i] (perm[0] must be 0)."""
    inv = [0] * (t.n + 1)
    for i, p in enumerate(perm):
        inv[p] = i
    return MonoidTable.from_function(t.n, lambda i, j: perm[t.f(inv[i], inv[j])], t.kind)


def _se_relabelings(t: MonoidTable) -> Iterator[tuple]:
    """Permutations (perm[0] = 0) under which t stays an SE-function."""
    n = t.n
    nonzero = [(i, j, t.f(i, j)) for i in range(1, n + 1) for j in range(i, n + 1) if t.f(i, j)]
    perm = [0] * (n + 1)
    used = [False] * (n + 1)

    def ok(upto: int) -> bool:
        for i, j, k in nonzero:
            if max(i, j, k) == upto and perm[k] <= max(perm[i], perm[j]):
                return False
        return True

    def go(x: int):
        if x > n:
            yield tuple(perm)
            return
        for v in range(1, n + 1):
            if not used[v]:
                perm[x], used[v] = v, True
                if ok(x):
                    yield from go(x + 1)
                used[v] = False

    yield from go(1)


def iso_canonical(t: MonoidTable) -> tuple:
    """Least table among relabelings that are still SE-functions."""
    n, f = t.n, t.table
    best = None
    for perm in _se_relabelings(t):
        inv = [0] * (n + 1)
        for i, p in enumerate(perm):
            inv[p] = i
        g = tuple(tuple(perm[f[inv[i]][inv[j]]] for j in range(n + 1)) for i in range(n + 1))
        if best is None or g < best:
            best = g
    return best


def enumerate_se(n: int, iso_reduce: bool = False) -> SECensus:
    """All SE-functions on I_n, in lexicographic order of the free entries."""
    cap = se_cap()
    if n > cap:
        raise CapExceeded(f"n = {n} exceeds the census cap {cap}")
    if n < 0:
        raise DimensionMismatch("n must be non-negative")
    tables = list(_iter_se(n))
    if iso_reduce:
        seen, kept = set(), []
        for t in tables:
            key = iso_canonical(t)
            if key not in seen:
                seen.add(key)
                kept.append(t)
        tables = kept
    return SECensus(n, tables)


# -----------------------------------------------------------------------------
# files
# -----------------------------------------------------------------------------
def monoid_from_json(obj: dict) -> MonoidTable:
    if not isinstance(obj, dict) or obj.get("format") != MONOID_FORMAT:
        raise TensorFormatError(f"expected format {MONOID_FORMAT!r}")
    try:
        return MonoidTable(int(obj["n"]), tuple(tuple(r) for r in obj["table"]), obj.get("kind", E_KIND))
    except (KeyError, TypeError, ValueError) as exc:
        raise TensorFormatError(f"bad monoid file: {exc}") from exc


def read_monoid(path) -> MonoidTable:
    try:
        obj = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise TensorFormatError(f"{path}: invalid JSON ({exc})") from exc
    return monoid_from_json(obj)


def dumps_monoid(t: MonoidTable) -> str:
    return json.dumps(t.to_json()) + "\n"
