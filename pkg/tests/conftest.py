"""Shared corpus builders for the test suite."""

import subprocess
import sys
from fractions import Fraction
from itertools import combinations, product

import pytest

from regdims import HypothesisClass, gen_cantor, gen_cube, gen_random, gen_unique


def run_cli(*args, cwd=None):
    return subprocess.run([sys.executable, "-m", "regdims.cli", *args],
                          capture_output=True, text=True, cwd=cwd)

GRID5 = tuple(Fraction(k, 4) for k in range(5))
GAMMAS = (Fraction(1, 8), Fraction(1, 4), Fraction(1, 2))


def exhaustive_classes(n_points, labels, max_hyps):
    """Every hypothesis class over the label grid with at most max_hyps rows."""
    rows = sorted(product(labels, repeat=n_points))
    for size in range(1, max_hyps + 1):
        for combo in combinations(rows, size):
            yield HypothesisClass(n_points, combo)


def random_corpus(specs):
    """Deterministic random classes; specs = [(n_points, n_hyps, denom, seed)]."""
    return [gen_random(*spec) for spec in specs]


@pytest.fixture(scope="session")
def small_corpus():
    """A spread of small classes used by dimension property tests."""
    classes = [
        gen_cube(2),
        gen_cube(3),
        gen_unique(2),
        gen_cantor(2, Fraction(1, 5)).cls,
        gen_cantor(3, Fraction(1, 5)).cls,
    ]
    classes += random_corpus([
        (2, 3, 4, 11), (2, 5, 4, 12), (3, 4, 4, 13), (3, 6, 4, 14),
        (3, 5, 2, 15), (4, 4, 4, 16), (4, 6, 2, 17), (1, 4, 4, 18),
        (5, 7, 4, 19),
    ])
    return classes
