"""Exact-arithmetic label domain, losses, hypothesis classes and risk.

Labels and scales are :class:`fractions.Fraction` values in [0, 1] and every
comparison against a scale is exact, so shattering checks that hinge on strict
inequalities never wobble.  Hypothesis classes are finite sets of full label
rows over a finite domain; projections, distributions and risk evaluation are
all computed in closed form over that finite structure.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence, Union

from .rng import SplitMix64, TWO64

Rational = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)
HALF = Fraction(1, 2)


class ConfigError(ValueError):
    """Malformed input: bad rationals, bad files, bad parameters."""


class ContractViolation(RuntimeError):
    """A runtime precondition failed (non-realizable sample, weak-learning
    failure, adversary playing an unrealizable label)."""


def ensure_unit(value: Fraction, what: str = "value") -> Fraction:
    if not (ZERO <= value <= ONE):
        raise ConfigError(f"{what} {value} outside [0, 1]")
    return value


def ensure_open_unit(value: Fraction, what: str = "scale") -> Fraction:
    if not (ZERO < value < ONE):
        raise ConfigError(f"{what} {value} outside (0, 1)")
    return value


def parse_rational(text: str) -> Fraction:
    """Parse a reduced-fraction string like ``"3/4"`` or ``"1"``."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"bad rational {text!r}: {exc}") from exc


def format_rational(value: Fraction) -> str:
    return f"{value.numerator}/{value.denominator}" if value.denominator != 1 else str(value.numerator)


# ---------------------------------------------------------------------------
# Losses
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LossFn:
    """Symmetric loss vanishing on the diagonal with a c-approximate
    triangle inequality.

    ``power = 1`` is the absolute loss (c = 1); ``power = p`` is
    ``|y1 - y2|**p`` with c = 2**(p-1), which follows from convexity of
    ``t**p`` on the split ``|a-b| <= |a-c| + |c-b|``.
    """

    power: int = 1

    def __post_init__(self):
        if self.power < 1:
            raise ConfigError("loss power must be a positive integer")

    @property
    def kind(self) -> str:
        return "absolute" if self.power == 1 else f"power-{self.power}"

    @property
    def approx_constant(self) -> Fraction:
        return Fraction(2 ** (self.power - 1))

    def __call__(self, y1: Fraction, y2: Fraction) -> Fraction:
        return abs(y1 - y2) ** self.power


ABSOLUTE_LOSS = LossFn(1)


def loss_eval(loss: LossFn, y1: Fraction, y2: Fraction) -> Fraction:
    """Exact loss between two labels in [0, 1]."""
    ensure_unit(y1, "label")
    ensure_unit(y2, "label")
    return loss(y1, y2)


# ---------------------------------------------------------------------------
# Hypothesis classes and projections
# ---------------------------------------------------------------------------

Row = tuple  # tuple[Fraction, ...]


@dataclass(frozen=True)
class HypothesisClass:
    """Finite class of full label rows over a finite domain.

    Rows are deduplicated on construction: projections and dimensions are
    set-level notions, so duplicates carry no information.
    """

    domain_size: int
    rows: tuple
    names: tuple

    def __init__(self, domain_size: int, labels: Iterable[Sequence[Fraction]],
                 names: Optional[Sequence[str]] = None):
        if domain_size <= 0:
            raise ConfigError("domain_size must be positive")
        rows: list = []
        kept_names: list = []
        seen = set()
        labels = list(labels)
        if names is not None and len(names) != len(labels):
            raise ConfigError("names and labels length mismatch")
        for idx, raw in enumerate(labels):
            row = tuple(Fraction(v) for v in raw)
            if len(row) != domain_size:
                raise ConfigError(f"row {idx} has length {len(row)}, expected {domain_size}")
            for v in row:
                ensure_unit(v, "label")
            if row in seen:
                continue
            seen.add(row)
            rows.append(row)
            kept_names.append(names[idx] if names is not None else f"h{len(rows) - 1}")
        if not rows:
            raise ConfigError("hypothesis class must be non-empty")
        object.__setattr__(self, "domain_size", domain_size)
        object.__setattr__(self, "rows", tuple(rows))
        object.__setattr__(self, "names", tuple(kept_names))

    def __len__(self) -> int:
        return len(self.rows)

    def value(self, hyp: int, point: int) -> Fraction:
        return self.rows[hyp][point]

    def labels_at(self, point: int) -> tuple:
        """Sorted distinct label values realized at a point."""
        return tuple(sorted({row[point] for row in self.rows}))

    def to_json_dict(self) -> dict:
        return {
            "domain_size": self.domain_size,
            "labels": [[format_rational(v) for v in row] for row in self.rows],
            "names": list(self.names),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True, separators=(",", ":")) + "\n"

    @staticmethod
    def from_json_dict(data: dict) -> "HypothesisClass":
        try:
            domain_size = int(data["domain_size"])
            labels = [[parse_rational(v) for v in row] for row in data["labels"]]
        except (KeyError, TypeError) as exc:
            raise ConfigError(f"malformed class object: {exc}") from exc
        names = data.get("names")
        return HypothesisClass(domain_size, labels, names)

    @staticmethod
    def from_json(text: str) -> "HypothesisClass":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"bad JSON: {exc}") from exc
        return HypothesisClass.from_json_dict(data)


@dataclass(frozen=True)
class ProjectedClass:
    """Distinct label rows a class induces on a point sequence.

    The sequence may repeat points (tuple semantics); rows are stored in
    lexicographic order so downstream tie-breaks are reproducible.
    """

    points: tuple
    rows: tuple


def project(H: HypothesisClass, points: Sequence[int]) -> ProjectedClass:
    """Projection of the class onto a non-empty point sequence."""
    points = tuple(points)
    if not points:
        raise ConfigError("empty projection sequence")
    for p in points:
        if not (0 <= p < H.domain_size):
            raise ConfigError(f"point index {p} out of range")
    rows = sorted({tuple(row[p] for p in points) for row in H.rows})
    return ProjectedClass(points, tuple(rows))


# ---------------------------------------------------------------------------
# Samples and distributions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LabeledSample:
    """Sequence of (point index, exact label) pairs."""

    pairs: tuple

    def __init__(self, pairs: Iterable):
        norm = tuple((int(x), Fraction(y)) for x, y in pairs)
        for _, y in norm:
            ensure_unit(y, "label")
        object.__setattr__(self, "pairs", norm)

    def __len__(self) -> int:
        return len(self.pairs)

    def points(self) -> tuple:
        return tuple(x for x, _ in self.pairs)

    def labels(self) -> tuple:
        return tuple(y for _, y in self.pairs)


def consistent_hypotheses(H: HypothesisClass, sample: LabeledSample) -> tuple:
    """Indices of hypotheses matching every pair exactly (the version space)."""
    out = []
    for idx, row in enumerate(H.rows):
        if all(row[x] == y for x, y in sample.pairs):
            out.append(idx)
    return tuple(out)


def is_realizable(H: HypothesisClass, sample: LabeledSample) -> bool:
    return bool(consistent_hypotheses(H, sample))


@dataclass(frozen=True)
class FiniteDistribution:
    """Exact rational weights over point indices, summing to one."""

    weights: tuple

    def __init__(self, weights: Iterable[Fraction]):
        w = tuple(Fraction(v) for v in weights)
        if not w:
            raise ConfigError("distribution needs at least one point")
        if any(v < 0 for v in w):
            raise ConfigError("negative weight")
        if sum(w) != 1:
            raise ConfigError(f"weights sum to {sum(w)}, expected 1")
        object.__setattr__(self, "weights", w)

    @staticmethod
    def uniform(n: int) -> "FiniteDistribution":
        return FiniteDistribution([Fraction(1, n)] * n)

    def __len__(self) -> int:
        return len(self.weights)

    def sample_point(self, rng: SplitMix64) -> int:
        """Draw a point index; u = k/2^64 against exact cumulative weights."""
        u = Fraction(rng.next_u64(), TWO64)
        acc = ZERO
        for idx, w in enumerate(self.weights):
            acc += w
            if u < acc:
                return idx
        return len(self.weights) - 1  # u landed in residual zero-mass tail

    def sample_points(self, rng: SplitMix64, m: int) -> tuple:
        return tuple(self.sample_point(rng) for _ in range(m))


Predictor = Union[Sequence[Fraction], Callable[[int], Fraction]]


def _predict(predictor: Predictor, point: int) -> Fraction:
    if callable(predictor):
        return Fraction(predictor(point))
    return Fraction(predictor[point])


def exact_risk(target_row: Sequence[Fraction], predictor: Predictor,
               dist: FiniteDistribution, loss: LossFn = ABSOLUTE_LOSS,
               cutoff: Optional[Fraction] = None) -> Fraction:
    """Exact expected loss, or exact mass of points with loss > cutoff."""
    total = ZERO
    for point, weight in enumerate(dist.weights):
        if weight == 0:
            continue
        val = loss(Fraction(target_row[point]), _predict(predictor, point))
        if cutoff is None:
            total += weight * val
        elif val > cutoff:
            total += weight
    return total


# ---------------------------------------------------------------------------
# Guarantee translation
# ---------------------------------------------------------------------------


def _ceil_sqrt(value: Fraction) -> Fraction:
    """Smallest convenient rational >= sqrt(value); exact when value is a
    rational square.  Uses ceil(isqrt) on p*q over denominator q, which keeps
    the Markov direction of the translation valid."""
    from math import isqrt

    p, q = value.numerator, value.denominator
    s = isqrt(p * q)
    if s * s == p * q:
        return Fraction(s, q)
    return Fraction(s + 1, q)


def translate_guarantee(direction: str, eps: Fraction) -> tuple:
    """Translate between cut-off and expected-loss guarantees.

    ``"cutoff->expected"``: returns the cut-off pair (eps/2, eps/2); a
    learner meeting it has expected loss at most
    eps/2 + (1 - eps/2) * (eps/2) <= eps.

    ``"expected->cutoff"``: an expected-loss bound eps implies, by Markov,
    the cut-off pair (r, r) for any rational r >= sqrt(eps); the returned r
    is the integer-sqrt ceiling (exact when eps is a rational square).
    """
    eps = Fraction(eps)
    if not (ZERO < eps < ONE):
        raise ConfigError(f"eps {eps} outside (0, 1)")
    if direction == "cutoff->expected":
        return (eps / 2, eps / 2)
    if direction == "expected->cutoff":
        r = _ceil_sqrt(eps)
        return (r, r)
    raise ConfigError(f"unknown direction {direction!r}")


def expected_bound_from_cutoff(eps_cut: Fraction, gamma: Fraction) -> Fraction:
    """Expected absolute loss implied by Pr[loss > gamma] <= eps_cut."""
    return eps_cut + (1 - eps_cut) * gamma
