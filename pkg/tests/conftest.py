import os
import random
from fractions import Fraction

import pytest

os.environ.setdefault("UEXT_DEBUG", "1")

from uext.cohomology import cocycle_space2, extend_with_cocycle  # noqa: E402
from uext.errors import SingularMatrix  # noqa: E402
from uext.exact_linalg import RationalMatrix, invert  # noqa: E402
from uext.tensor_core import BasisChange, ExtensionTensor, direct_sum, transform, unitize  # noqa: E402


def random_rational(rng: random.Random, span: int = 3) -> Fraction:
    return Fraction(rng.randint(-span, span), rng.choice([1, 1, 1, 2, 3]))


def random_invertible(rng: random.Random, n: int) -> BasisChange:
    while True:
        a = RationalMatrix([[rng.randint(-2, 2) for _ in range(n)] for _ in range(n)])
        try:
            return BasisChange(a, invert(a))
        except SingularMatrix:
            continue


def random_extension_chain(rng: random.Random, n: int) -> ExtensionTensor:
    """Grow from the 1-dimensional zero tensor by random cocycle extensions."""
    w = ExtensionTensor.zero(1)
    while w.n < n:
        zs = cocycle_space2(w)
        r = RationalMatrix.zeros(w.n)
        for z in zs:
            r = r + z.scale(random_rational(rng))
        w = extend_with_cocycle(w, r)
    return w


def random_valid_tensor(rng: random.Random, max_n: int = 4) -> ExtensionTensor:
    """A valid tensor of dimension <= max_n built from several generators."""
    kind = rng.choice(["chain", "chain", "unitized", "sum", "moved"])
    if kind == "unitized" and max_n >= 2:
        return unitize(random_extension_chain(rng, rng.randint(1, max_n - 1)))
    if kind == "sum" and max_n >= 2:
        a = rng.randint(1, max_n - 1)
        b = rng.randint(1, max_n - a)
        left = random_valid_tensor(rng, a) if rng.random() < 0.5 else random_extension_chain(rng, a)
        return direct_sum(left, random_extension_chain(rng, b))
    if kind == "moved":
        w = random_valid_tensor(rng, max_n) if rng.random() < 0.3 else random_extension_chain(rng, rng.randint(1, max_n))
        return transform(w, random_invertible(rng, w.n))
    return random_extension_chain(rng, rng.randint(1, max_n))


@pytest.fixture
def rng():
    return random.Random(20261016)


def pytest_terminal_summary(terminalreporter):
    module = __import__("sys").modules.get("test_acceptance")
    if module is None or not module.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in module.summary_lines():
        terminalreporter.write_line(line)
