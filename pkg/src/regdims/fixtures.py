"""Deterministic generators for the benchmark hypothesis classes, plus the
good/bad empirical-risk-minimizer pair over the indicator-times-value family.

The indicator family ("cantor") assigns each subset A of the domain the
hypothesis f(A) * 1[x in A] with pairwise-distinct levels f(A) strictly
between the scale and 1; the concrete level formula replaces an
existence-only mapping with a reproducible enumeration.  The single-example
family ("unique") separates every pair of hypotheses at every point, so one
labeled example pins down the target.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

from .core import (ConfigError, ContractViolation, HypothesisClass,
                   LabeledSample, ensure_open_unit)
from .rng import SplitMix64


@dataclass(frozen=True)
class CantorFixture:
    """Indicator-family class together with its subset bookkeeping."""

    cls: HypothesisClass
    d: int
    gamma: Fraction
    level_of: dict      # frozenset(A) -> Fraction, the non-zero value
    subset_of: dict     # hypothesis index -> frozenset(A)


@dataclass(frozen=True)
class FixtureSpec:
    """Declarative fixture description; generation is a pure function of it."""

    kind: str
    d: Optional[int] = None
    gamma: Optional[Fraction] = None
    n_points: int = 3
    n_hyps: int = 4
    denom: int = 4
    seed: int = 0

    @staticmethod
    def from_json_dict(data: dict) -> "FixtureSpec":
        from .core import parse_rational

        try:
            return FixtureSpec(
                kind=str(data["kind"]),
                d=int(data["d"]) if "d" in data else None,
                gamma=parse_rational(data["gamma"]) if "gamma" in data else None,
                n_points=int(data.get("n_points", 3)),
                n_hyps=int(data.get("n_hyps", 4)),
                denom=int(data.get("denom", 4)),
                seed=int(data.get("seed", 0)),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"malformed fixture spec: {exc}") from exc

    def build(self) -> tuple:
        """Returns (class, cantor bookkeeping or None)."""
        if self.kind == "cantor":
            if self.d is None or self.gamma is None:
                raise ConfigError("cantor fixture needs d and gamma")
            fixture = gen_cantor(self.d, self.gamma)
            return fixture.cls, fixture
        if self.kind == "unique":
            if self.d is None:
                raise ConfigError("unique fixture needs d")
            return gen_unique(self.d), None
        if self.kind == "cube":
            if self.d is None:
                raise ConfigError("cube fixture needs d")
            return gen_cube(self.d), None
        if self.kind == "random":
            return gen_random(self.n_points, self.n_hyps, self.denom,
                              self.seed), None
        raise ConfigError(f"unknown fixture kind {self.kind!r}")


def cantor_level(A: frozenset, d: int, gamma: Fraction) -> Fraction:
    """Level f(A) = gamma + (1-gamma) * (rank+1) / (2**d + 2), rank being the
    binary encoding of A; distinct across subsets and strictly inside
    (gamma, 1)."""
    rank = sum(1 << i for i in A)
    return gamma + (1 - gamma) * Fraction(rank + 1, 2 ** d + 2)


def gen_cantor(d: int, gamma: Fraction) -> CantorFixture:
    if d < 1:
        raise ConfigError("d must be >= 1")
    gamma = ensure_open_unit(Fraction(gamma))
    rows, names = [], []
    level_of, subset_of = {}, {}
    for rank in range(2 ** d):
        A = frozenset(i for i in range(d) if (rank >> i) & 1)
        level = cantor_level(A, d, gamma)
        row = [level if i in A else Fraction(0) for i in range(d)]
        rows.append(row)
        names.append("A={" + ",".join(map(str, sorted(A))) + "}")
        level_of[A] = level
        subset_of[rank] = A
    cls = HypothesisClass(d, rows, names)
    return CantorFixture(cls, d, gamma, level_of, subset_of)


def cantor_half_slice(fixture: CantorFixture) -> HypothesisClass:
    """Subclass restricted to subsets of size floor(d/2); the all-zero
    function is consistent with its all-zero samples yet lies outside it,
    which is the improperness witness."""
    size = fixture.d // 2
    rows, names = [], []
    for idx, A in fixture.subset_of.items():
        if len(A) == size:
            rows.append(fixture.cls.rows[idx])
            names.append(fixture.cls.names[idx])
    return HypothesisClass(fixture.d, rows, names)


def gen_unique(d: int) -> HypothesisClass:
    """2**d hypotheses over d points, pairwise distinct at every point:
    h_b(x_j) = (3/4) b_j + (1/8) sum_k b_k 2^-k."""
    if d < 1:
        raise ConfigError("d must be >= 1")
    rows, names = [], []
    for code in range(2 ** d):
        bits = [(code >> k) & 1 for k in range(d)]
        fingerprint = Fraction(1, 8) * sum(Fraction(b, 2 ** k)
                                           for k, b in enumerate(bits))
        row = [Fraction(3, 4) * bits[j] + fingerprint for j in range(d)]
        rows.append(row)
        names.append("b=" + "".join(map(str, bits)))
    return HypothesisClass(d, rows, names)


def gen_cube(n: int) -> HypothesisClass:
    """All 2**n zero/one label rows over n points."""
    if n < 1:
        raise ConfigError("n must be >= 1")
    rows = [[Fraction((code >> i) & 1) for i in range(n)] for code in range(2 ** n)]
    names = [f"b={code:0{n}b}" for code in range(2 ** n)]
    return HypothesisClass(n, rows, names)


def gen_random(n_points: int, n_hyps: int, denom: int, seed: int) -> HypothesisClass:
    """Seeded class with labels k/denom; rows are drawn until n_hyps distinct
    ones accumulate."""
    if min(n_points, n_hyps, denom) < 1:
        raise ConfigError("all parameters must be positive")
    if (denom + 1) ** n_points < n_hyps:
        raise ConfigError("label grid too small for that many distinct rows")
    rng = SplitMix64(seed).spawn(n_points, n_hyps, denom)
    rows: list = []
    seen = set()
    while len(rows) < n_hyps:
        row = tuple(Fraction(rng.next_below(denom + 1), denom)
                    for _ in range(n_points))
        if row not in seen:
            seen.add(row)
            rows.append(row)
    return HypothesisClass(n_points, rows)


# ---------------------------------------------------------------------------
# The ERM pair for the indicator family
# ---------------------------------------------------------------------------


def _identify(fixture: CantorFixture, pairs) -> Optional[tuple]:
    """Row pinned down by a non-zero label, if the sample has one."""
    for x, y in pairs:
        if y != 0:
            for idx, row in enumerate(fixture.cls.rows):
                if row[x] == y:
                    return fixture.cls.rows[idx]
            raise ContractViolation(f"label {y} at point {x} fits no hypothesis")
    return None


def erm_pair(kind: str, fixture: CantorFixture) -> Callable:
    """Empirical risk minimizers for the indicator family.

    ``good`` returns the all-zero function on all-zero samples and otherwise
    the uniquely identified hypothesis; ``bad`` answers all-zero samples
    with the hypothesis supported on the complement of the seen points, an
    equally valid minimizer with far worse sample complexity.
    """
    if not isinstance(fixture, CantorFixture):
        raise ConfigError("erm_pair needs a cantor fixture")
    zero_row = fixture.cls.rows[0]
    if any(v != 0 for v in zero_row):
        raise ConfigError("fixture lost its all-zero hypothesis")

    def good(sample: LabeledSample) -> tuple:
        hit = _identify(fixture, sample.pairs)
        return hit if hit is not None else zero_row

    def bad(sample: LabeledSample) -> tuple:
        hit = _identify(fixture, sample.pairs)
        if hit is not None:
            return hit
        seen = {x for x, _ in sample.pairs}
        complement = frozenset(range(fixture.d)) - seen
        level = fixture.level_of[complement]
        return tuple(level if i in complement else Fraction(0)
                     for i in range(fixture.d))

    if kind == "good":
        return good
    if kind == "bad":
        return bad
    raise ConfigError(f"kind must be 'good' or 'bad', got {kind!r}")
