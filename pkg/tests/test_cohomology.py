import itertools
from fractions import Fraction as F

import pytest

from conftest import random_rational, random_valid_tensor
from oracles import is_invariant_form
from uext.cohomology import (
    Cochain,
    Cocycle2,
    coboundary,
    coboundary_shear,
    coboundary_space2,
    cocycle_space2,
    enumerate_extensions,
    extend_with_cocycle,
    h2,
    is_cocycle,
    scaling_equivalent,
)
from uext.comm_algebra import CommAlgebra
from uext.errors import DimensionMismatch, NotCocycle
from uext.exact_linalg import RationalMatrix, rank_of
from uext.monoid_gen import crmhd, leibnitz
from uext.tensor_core import ExtensionTensor, row_matrix, transform


def E(n, *pairs):
    rows = [[0] * n for _ in range(n)]
    for i, j in pairs:
        rows[i - 1][j - 1] = rows[j - 1][i - 1] = 1
    return RationalMatrix(rows)


def random_cochain(rng, p, n):
    return Cochain(p, n, [random_rational(rng) for _ in range(n ** p)])


def test_coboundary_low_degrees():
    a = CommAlgebra(leibnitz(2))
    assert coboundary(a, Cochain(0, 2, [F(5)])).is_zero()
    alpha = Cochain(1, 2, [F(3), F(7)])
    d = coboundary(a, alpha)
    # (x, y) -> -alpha(x * y) = -alpha_2 W_(2)
    expected = row_matrix(leibnitz(2), 2).scale(-7)
    assert [[d(i, j) for j in (1, 2)] for i in (1, 2)] == expected.to_lists()
    assert coboundary(a, d).is_zero()


def test_d_squared_vanishes(rng):
    for _ in range(8):
        w = random_valid_tensor(rng, 3)
        a = CommAlgebra(w)
        for p in range(3):
            omega = random_cochain(rng, p, w.n)
            assert coboundary(a, coboundary(a, omega)).is_zero()


def test_cochain_bounds():
    with pytest.raises(DimensionMismatch):
        Cochain(6, 1, [0])
    with pytest.raises(DimensionMismatch):
        Cochain(1, 2, [0])
    with pytest.raises(DimensionMismatch):
        coboundary(CommAlgebra(leibnitz(2)), Cochain(5, 2, [0] * 32))


def test_cocycle_space_examples():
    assert len(cocycle_space2(ExtensionTensor.zero(2))) == 3
    z = cocycle_space2(leibnitz(2))
    assert len(z) == 2
    assert set(z) == {E(2, (1, 1)), E(2, (1, 2))}


def test_coboundary_space_examples():
    assert coboundary_space2(ExtensionTensor.zero(3)) == []
    assert coboundary_space2(leibnitz(2)) == [E(2, (1, 1))]
    assert len(coboundary_space2(leibnitz(3))) == 2


def test_h2_examples():
    r = h2(ExtensionTensor.zero(2))
    assert (r.dim_Z2, r.dim_B2, r.dim_H2) == (3, 0, 3)
    r = h2(leibnitz(2))
    assert (r.dim_Z2, r.dim_B2, r.dim_H2) == (2, 1, 1)
    assert r.representatives == [E(2, (1, 2))]


def test_crmhd_cocycles_against_scan():
    """Z^2 of CRMHD: scan symmetric {-1, 0, 1} matrices with the invariance oracle."""
    w = crmhd(1)
    d = [[[int(x) for x in row] for row in plane] for plane in w.dense()]
    n = w.n
    cells = [(i, j) for i in range(n) for j in range(i, n)]
    products = {(x, y): [s for s in range(n) if d[x][y][s]] for x in range(n) for y in range(n)}

    def invariant(r):
        # R(e_x e_y, e_z) = R(e_x, e_y e_z) with integer data, early exit
        for x, y, z in itertools.product(range(n), repeat=3):
            left = sum(d[x][y][s] * r[s][z] for s in products[(x, y)])
            right = sum(d[y][z][s] * r[x][s] for s in products[(y, z)])
            if left != right:
                return False
        return True

    found = []
    for values in itertools.product((-1, 0, 1), repeat=len(cells)):
        r = [[0] * n for _ in range(n)]
        for (i, j), v in zip(cells, values):
            r[i][j] = r[j][i] = v
        if invariant(r):
            found.append([v for row in r for v in row])
    rank = rank_of(found, n * n)
    report = h2(w)
    assert report.dim_Z2 == rank == 4
    assert (report.dim_B2, report.dim_H2) == (4, 0)


def test_cocycles_match_invariance_oracle(rng):
    for _ in range(15):
        w = random_valid_tensor(rng, 4)
        d = w.dense()
        for z in cocycle_space2(w):
            assert is_invariant_form(d, z.to_lists())
        for k in range(1, w.n + 1):
            assert is_cocycle(w, row_matrix(w, k))
            assert is_invariant_form(d, row_matrix(w, k).to_lists())


def test_non_cocycle_rejected():
    with pytest.raises(NotCocycle):
        Cocycle2.of(leibnitz(2), E(2, (2, 2)))
    with pytest.raises(NotCocycle):
        Cocycle2(RationalMatrix([[0, 1], [0, 0]]))
    with pytest.raises(NotCocycle):
        extend_with_cocycle(leibnitz(2), E(2, (2, 2)))


def test_h2_bookkeeping(rng):
    for _ in range(15):
        w = random_valid_tensor(rng, 4)
        r = h2(w)
        assert r.dim_H2 == r.dim_Z2 - r.dim_B2
        for rep in r.representatives:
            assert is_cocycle(w, rep)


def test_extend_examples():
    assert extend_with_cocycle(leibnitz(2), E(2, (1, 2))) == leibnitz(3)
    trivial = extend_with_cocycle(leibnitz(2), RationalMatrix.zeros(2))
    assert trivial.n == 3 and trivial.entries == leibnitz(2).entries


def test_coboundary_extension_is_trivial(rng):
    for _ in range(10):
        w = random_valid_tensor(rng, 4)
        lam = [random_rational(rng) for _ in range(w.n)]
        r = RationalMatrix.zeros(w.n)
        for s, c in enumerate(lam, start=1):
            r = r + row_matrix(w, s).scale(c)
        ext = extend_with_cocycle(w, r)
        trivial = extend_with_cocycle(w, RationalMatrix.zeros(w.n))
        assert transform(ext, coboundary_shear(w, lam)) == trivial


def test_enumerate_extensions_examples():
    exts = enumerate_extensions(ExtensionTensor.zero(1))
    assert exts == [leibnitz(2)]
    assert enumerate_extensions(leibnitz(2)) == [leibnitz(3)]
    assert len(enumerate_extensions(ExtensionTensor.zero(2))) == 3


def test_scaling_equivalence_diagnostic():
    assert scaling_equivalent(leibnitz(3), leibnitz(3)) == (1, 1, 1)
    assert scaling_equivalent(leibnitz(3, 2), leibnitz(3)) == (1, 2, 4)
    assert scaling_equivalent(leibnitz(3), ExtensionTensor.zero(3)) is None
