import random
from fractions import Fraction
from pathlib import Path

import pytest

from hoinv.invariants import ActionSpec
from hoinv.linalg import RationalMatrix

DATA = Path(__file__).resolve().parents[1] / "src" / "hoinv" / "data"


def jordan_rows(m):
    return [[int(i == j or j == i + 1) for j in range(m)] for i in range(m)]


def jordan_action(m):
    return ActionSpec.build({"t": jordan_rows(m)})


def trivial_action(d, labels=("a", "b")):
    return ActionSpec.build({l: [[int(i == j) for j in range(d)] for i in range(d)] for l in labels})


def swap_action():
    return ActionSpec.build({"t": [[0, 1], [1, 0]]})


def random_invertible(rng, d):
    while True:
        m = RationalMatrix.from_rows([[rng.randint(-2, 2) for _ in range(d)] for _ in range(d)])
        if m.determinant() != 0:
            return m


def random_unipotent(rng, d):
    return RationalMatrix.from_rows(
        [[1 if i == j else (rng.choice([0, 0, 1, -1, 2, Fraction(1, 2)]) if j > i else 0) for j in range(d)]
         for i in range(d)]
    )


def random_finite_order(rng, d):
    perm = list(range(d))
    rng.shuffle(perm)
    return RationalMatrix.from_rows(
        [[(rng.choice([1, -1]) if rng.random() < 0.3 else 1) if perm[i] == j else 0 for j in range(d)]
         for i in range(d)]
    )


def random_action(rng, max_dim=6, max_gens=3):
    """Generators unipotent or finite order, conjugated by one random rational change of basis."""
    d = rng.randint(1, max_dim)
    c = random_invertible(rng, d)
    ci = c.inverse()
    gens = {}
    for i in range(rng.randint(1, max_gens)):
        base = random_unipotent(rng, d) if rng.random() < 0.6 else random_finite_order(rng, d)
        gens["abc"[i]] = c @ base @ ci
    return ActionSpec.build(gens)


def schreier_words(labels, modulus, rng):
    """Generators of the kernel of a surjection F(labels) -> Z/modulus (a finite-index subgroup)."""
    images = {l: rng.randrange(modulus) for l in labels}
    unit = labels[0]
    images[unit] = 1
    words = []
    for j in range(modulus):
        for x in labels:
            k = (j + images[x]) % modulus
            w = [(unit, 1)] * j + [(x, 1)] + [(unit, -1)] * k
            words.append(w)
    return words


@pytest.fixture
def rng():
    return random.Random(20261015)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
