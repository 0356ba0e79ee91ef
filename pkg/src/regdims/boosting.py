"""Median boosting of real-valued weak learners, quantile aggregation,
the approximate-pseudo-metric aggregation rule, and compression-based
generalization accounting.

Boosting coefficients are the one place where irrational values appear
(they involve natural logs); they are carried as floats, stored as their
exact binary rationals, and the distribution update is snapped back to
exact rationals at denominator 2**64 with explicit renormalization.  All
cutoff comparisons that decide correctness stay exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence

from .core import (ABSOLUTE_LOSS, ConfigError, ContractViolation,
                   HypothesisClass, LabeledSample, LossFn, is_realizable)
from .dimensions import oig_dim
from .oig import oig_predict
from .rng import SplitMix64, TWO64

# Stand-in for an infinite coefficient during compression replay: large
# enough to dominate any sum of finite coefficients (those are bounded by
# 0.5*ln(2**64) ~ 22.2 per round), small enough to keep exp() finite on the
# +1-weight side.
_ALPHA_CAP = 1.0e6


# ---------------------------------------------------------------------------
# Weighted median and quantiles
# ---------------------------------------------------------------------------


def _check_values_weights(values: Sequence[Fraction], weights) -> tuple:
    if not values:
        raise ConfigError("empty value list")
    if len(values) != len(weights):
        raise ConfigError("values and weights length mismatch")
    w = [Fraction(x) for x in weights]
    if any(v < 0 for v in w):
        raise ConfigError("negative weight")
    total = sum(w)
    if total == 0:
        raise ConfigError("weights sum to zero")
    return [Fraction(v) for v in values], w, total


def weighted_median(values: Sequence[Fraction], weights) -> Fraction:
    """Smallest value with strictly less than half the weight above it."""
    vals, w, total = _check_values_weights(values, weights)
    for y in sorted(set(vals)):
        above = sum(wi for vi, wi in zip(vals, w) if vi > y)
        if 2 * above < total:
            return y
    raise AssertionError("unreachable: the maximum always qualifies")


def weighted_quantile(values: Sequence[Fraction], weights, theta: Fraction,
                      side: str) -> Fraction:
    """Upper/lower weighted quantile at level 1/2 - theta.

    ``plus``: smallest value with weight-above strictly below (1/2 - theta)
    of the total; ``minus``: largest value with weight-below strictly below
    the same threshold.  At theta = 1/2 the defining set can be empty; the
    extreme member value is returned as the natural limit.
    """
    theta = Fraction(theta)
    if not (0 <= theta <= Fraction(1, 2)):
        raise ConfigError(f"theta {theta} outside [0, 1/2]")
    vals, w, total = _check_values_weights(values, weights)
    threshold = (Fraction(1, 2) - theta) * total
    if side == "plus":
        ordered = sorted(set(vals))
        for y in ordered:
            above = sum(wi for vi, wi in zip(vals, w) if vi > y)
            if above < threshold:
                return y
        return ordered[-1]
    if side == "minus":
        ordered = sorted(set(vals), reverse=True)
        for y in ordered:
            below = sum(wi for vi, wi in zip(vals, w) if vi < y)
            if below < threshold:
                return y
        return ordered[-1]
    raise ConfigError(f"side must be 'plus' or 'minus', got {side!r}")


# ---------------------------------------------------------------------------
# Predictors and ensembles
# ---------------------------------------------------------------------------


class OIGWeakHypothesis:
    """Orientation-based predictor trained on a stored sub-sample.

    Fully determined by the class, the scale, and the training pairs, which
    is what lets compression replay it from kept examples alone.
    """

    def __init__(self, H: HypothesisClass, train: LabeledSample, gamma: Fraction):
        self.H = H
        self.train = train
        self.gamma = gamma
        self._cache: dict = {}

    def __call__(self, x: int) -> Fraction:
        got = self._cache.get(x)
        if got is None:
            got = oig_predict(self.H, self.train, x, self.gamma)
            self._cache[x] = got
        return got


@dataclass(frozen=True)
class WeightedEnsemble:
    members: tuple          # predictors, callable on point indices
    coefficients: tuple     # non-negative Fractions, at least one positive
    subsets: tuple          # training sub-samples behind the members

    def __post_init__(self):
        if len(self.members) != len(self.coefficients):
            raise ConfigError("members and coefficients length mismatch")
        if not self.members:
            raise ConfigError("empty ensemble")
        if all(c == 0 for c in self.coefficients):
            raise ConfigError("ensemble needs a positive coefficient")

    def predictions(self, x: int) -> list:
        return [h(x) for h in self.members]

    def predict_median(self, x: int) -> Fraction:
        return weighted_median(self.predictions(x), self.coefficients)


# ---------------------------------------------------------------------------
# Weak learner wrapper
# ---------------------------------------------------------------------------


def _sample_index(weights: list, total: Fraction, rng: SplitMix64) -> int:
    u = Fraction(rng.next_u64(), TWO64) * total
    acc = Fraction(0)
    for idx, w in enumerate(weights):
        acc += w
        if u < acc:
            return idx
    return len(weights) - 1


def make_oig_weak_learner(H: HypothesisClass, gamma: Fraction,
                          beta: Fraction, subset_size: Optional[int] = None,
                          retries: int = 64,
                          loss: LossFn = ABSOLUTE_LOSS) -> Callable:
    """Weak learner drawing its training subset i.i.d. from the supplied
    distribution over the sample.

    The subset has exactly ``oig_dim + 1`` points (with replacement) unless
    overridden.  Draws are retried until the weighted cutoff error is below
    min(1/2 - beta, (1 - gamma)/2): the first bound is the weak-learning
    contract, the second keeps the boosting coefficient positive (the
    multiplicative update makes progress only when the weighted edge
    exceeds gamma).  The one-inclusion guarantee makes the error at most
    1/3 in expectation, so a compliant draw appears quickly at sane scales.
    """
    gamma = Fraction(gamma)
    beta = Fraction(beta)
    if not (0 < beta < Fraction(1, 2)):
        raise ConfigError(f"beta {beta} outside (0, 1/2)")
    if subset_size is None:
        subset_size = oig_dim(H, gamma).value + 1
    threshold = min(Fraction(1, 2) - beta, (1 - gamma) / 2)

    def learn(sample: LabeledSample, weights: list, rng: SplitMix64):
        total = sum(weights)
        for _ in range(retries):
            idxs = [_sample_index(weights, total, rng) for _ in range(subset_size)]
            train = LabeledSample([sample.pairs[i] for i in idxs])
            hyp = OIGWeakHypothesis(H, train, gamma)
            err = sum(w for (x, y), w in zip(sample.pairs, weights)
                      if loss(hyp(x), y) > gamma)
            if err < threshold * total:
                return hyp
        raise ContractViolation(
            f"weak learning failure: no draw reached weighted error < {threshold} "
            f"in {retries} tries")

    learn.subset_size = subset_size
    learn.beta = beta
    return learn


# ---------------------------------------------------------------------------
# MedBoost
# ---------------------------------------------------------------------------


def _snap_distribution(raw: list) -> list:
    """Round non-negative float masses to rationals at denominator 2**64 and
    renormalize exactly by dumping the residual on the heaviest entry."""
    total = sum(raw)
    if total <= 0:
        raise ContractViolation("distribution update collapsed to zero mass")
    snapped = [Fraction(round(p / total * TWO64), TWO64) for p in raw]
    residual = 1 - sum(snapped)
    if residual != 0:
        top = max(range(len(snapped)), key=lambda i: snapped[i])
        snapped[top] += residual
        if snapped[top] < 0:
            raise ContractViolation("distribution renormalization failed")
    return snapped


def _alpha(w_plus: Fraction, w_minus: Fraction, gamma: Fraction) -> float:
    return 0.5 * math.log(((1 - gamma) * w_plus) / ((1 + gamma) * w_minus))


def medboost_train(sample: LabeledSample, weak_learner: Callable,
                   gamma: Fraction, beta: Fraction, T: Optional[int] = None,
                   rng: Optional[SplitMix64] = None,
                   H: Optional[HypothesisClass] = None,
                   loss: LossFn = ABSOLUTE_LOSS) -> WeightedEnsemble:
    """Boost a weak learner into an ensemble whose weighted median has no
    cutoff-gamma mistakes on the training sample.

    Per round: cutoff signs w_i = 1 - 2*[loss > gamma], coefficient
    alpha_t = 0.5*log((1-gamma) W+ / ((1+gamma) W-)), multiplicative update
    with exact renormalization.  A round with W- = 0 returns T copies of its
    hypothesis with unit coefficients and stops.  T defaults to
    4 * ceil(ln m / theta^2) with theta = 2*beta.
    """
    gamma = Fraction(gamma)
    beta = Fraction(beta)
    if not (0 < beta < Fraction(1, 2)):
        raise ConfigError(f"beta {beta} outside (0, 1/2)")
    if H is not None and not is_realizable(H, sample):
        raise ContractViolation("sample not realizable")
    m = len(sample)
    if m == 0:
        raise ConfigError("empty training sample")
    if rng is None:
        rng = SplitMix64(0)
    if T is None:
        theta = 2 * beta
        T = 4 * math.ceil(math.log(m) / float(theta * theta)) if m > 1 else 4
    if T < 1:
        raise ConfigError("T must be positive")
    weights = [Fraction(1, m)] * m
    members, coeffs, subsets = [], [], []
    for t in range(1, T + 1):
        hyp = weak_learner(sample, weights, rng)
        signs = [1 if loss(hyp(x), y) <= gamma else -1 for x, y in sample.pairs]
        w_minus = sum(w for w, s in zip(weights, signs) if s < 0)
        w_plus = sum(w for w, s in zip(weights, signs) if s > 0)
        if 2 * w_minus >= (1 - 2 * beta):
            raise ContractViolation(
                f"weak learning failure at round {t}: weighted error {w_minus}")
        if w_minus == 0:
            train = getattr(hyp, "train", None)
            return WeightedEnsemble(members=(hyp,) * T,
                                    coefficients=(Fraction(1),) * T,
                                    subsets=(train,))
        alpha = _alpha(w_plus, w_minus, gamma)
        if alpha <= 0:
            raise ContractViolation(
                f"weak learning failure at round {t}: weighted edge "
                f"{w_plus - w_minus} does not exceed gamma")
        members.append(hyp)
        coeffs.append(Fraction(alpha))
        subsets.append(getattr(hyp, "train", None))
        raw = [float(w) * math.exp(-alpha * s) for w, s in zip(weights, signs)]
        weights = _snap_distribution(raw)
    return WeightedEnsemble(tuple(members), tuple(coeffs), tuple(subsets))


def ensemble_guarantee_check(ensemble: WeightedEnsemble, sample: LabeledSample,
                             gamma: Fraction, theta: Fraction,
                             loss: LossFn = ABSOLUTE_LOSS) -> bool:
    """True iff both theta/2-quantiles of the ensemble stay within gamma of
    every training label."""
    gamma = Fraction(gamma)
    half_theta = Fraction(theta) / 2
    for x, y in sample.pairs:
        preds = ensemble.predictions(x)
        q_plus = weighted_quantile(preds, ensemble.coefficients, half_theta, "plus")
        q_minus = weighted_quantile(preds, ensemble.coefficients, half_theta, "minus")
        if max(loss(q_plus, y), loss(q_minus, y)) > gamma:
            return False
    return True


def aggregate_general(ensemble: WeightedEnsemble, x: int, gamma: Fraction,
                      c: Fraction, loss: LossFn = ABSOLUTE_LOSS) -> Fraction:
    """Aggregation rule valid for c-approximate pseudo-metric losses.

    Returns the first member prediction with at least 2/3 of the weight
    within loss gamma/(2c) of it; when no prediction concentrates that
    much, falls back to the weighted median.
    """
    c = Fraction(c)
    if c < 1:
        raise ConfigError(f"approximation constant {c} below 1")
    radius = Fraction(gamma) / (2 * c)
    preds = ensemble.predictions(x)
    total = sum(ensemble.coefficients)
    for cand in preds:
        mass = sum(w for p, w in zip(preds, ensemble.coefficients)
                   if loss(p, cand) <= radius)
        if 3 * mass >= 2 * total:
            return cand
    return weighted_median(preds, ensemble.coefficients)


# ---------------------------------------------------------------------------
# Sample compression
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CompressionScheme:
    """Kept examples plus the deterministic reconstruction map.

    The kept tuple is ordered (that ordering is the side information) and
    consists of fixed-size blocks, one per boosting round, so the block
    structure is recoverable from the length alone.
    """

    H: HypothesisClass
    gamma: Fraction
    block_size: int
    kept: tuple

    @property
    def size(self) -> int:
        return len(self.kept)

    def reconstruct(self):
        return reconstruct_from_kept(self.H, self.gamma, self.block_size, self.kept)


def reconstruct_from_kept(H: HypothesisClass, gamma: Fraction, block_size: int,
                          kept: tuple, loss: LossFn = ABSOLUTE_LOSS):
    """Deterministic predictor from an ordered kept tuple.

    Splits the tuple into per-round blocks, rebuilds each round's
    orientation predictor from its block, and replays the boosting weight
    computation with the kept tuple standing in for the training sample.
    A replay round with zero weighted error gets the capped coefficient,
    which dominates every finite one, mirroring the early-exit rule without
    consuming the remaining blocks.
    """
    gamma = Fraction(gamma)
    if not kept:
        empty = LabeledSample([])
        base = OIGWeakHypothesis(H, empty, gamma)
        return base
    if len(kept) % block_size:
        raise ConfigError("kept tuple length is not a multiple of the block size")
    blocks = [kept[i:i + block_size] for i in range(0, len(kept), block_size)]
    members = [OIGWeakHypothesis(H, LabeledSample(block), gamma) for block in blocks]
    m = len(kept)
    weights = [Fraction(1, m)] * m
    coeffs = []
    for hyp in members:
        signs = [1 if loss(hyp(x), y) <= gamma else -1 for x, y in kept]
        w_minus = sum(w for w, s in zip(weights, signs) if s < 0)
        w_plus = sum(w for w, s in zip(weights, signs) if s > 0)
        if w_minus == 0 or w_plus == 0:
            # Uniform signs: the multiplicative update rescales every entry
            # by the same factor, so renormalization leaves weights as-is.
            alpha = _ALPHA_CAP if w_minus == 0 else 0.0
            coeffs.append(Fraction(alpha))
            continue
        alpha = max(_alpha(w_plus, w_minus, gamma), 0.0)
        coeffs.append(Fraction(alpha))
        raw = [float(w) * math.exp(-alpha * s) for w, s in zip(weights, signs)]
        weights = _snap_distribution(raw)
    if all(cf == 0 for cf in coeffs):
        coeffs = [Fraction(1)] * len(members)
    return WeightedEnsemble(tuple(members), tuple(coeffs),
                            tuple(LabeledSample(b) for b in blocks)).predict_median


def _consistent(predict: Callable, sample: LabeledSample, gamma: Fraction,
                loss: LossFn) -> bool:
    return all(loss(predict(x), y) <= gamma for x, y in sample.pairs)


def compress(H: HypothesisClass, sample: LabeledSample, weak_learner: Callable,
             gamma: Fraction, theta: Fraction, rng: SplitMix64,
             max_rounds: int = 64, loss: LossFn = ABSOLUTE_LOSS) -> CompressionScheme:
    """Compress a realizable sample to the union of weak-learner training
    blocks whose replayed ensemble is cutoff-consistent on the whole sample.

    Rounds are added one at a time; after each, the scheme is reconstructed
    from the kept tuple alone and checked against the full sample, so the
    stored scheme always satisfies the consistency invariant.
    """
    gamma = Fraction(gamma)
    if not is_realizable(H, sample):
        raise ContractViolation("sample not realizable")
    block = weak_learner.subset_size
    kept: list = []

    def scheme() -> CompressionScheme:
        return CompressionScheme(H, gamma, block, tuple(kept))

    if _consistent(reconstruct_from_kept(H, gamma, block, ()), sample, gamma, loss):
        return scheme()

    m = len(sample)
    weights = [Fraction(1, m)] * m
    for _ in range(max_rounds):
        hyp = weak_learner(sample, weights, rng)
        kept.extend(hyp.train.pairs)
        predict = reconstruct_from_kept(H, gamma, block, tuple(kept))
        if _consistent(predict, sample, gamma, loss):
            return scheme()
        signs = [1 if loss(hyp(x), y) <= gamma else -1 for x, y in sample.pairs]
        w_minus = sum(w for w, s in zip(weights, signs) if s < 0)
        w_plus = sum(w for w, s in zip(weights, signs) if s > 0)
        # A zero-error round makes the replay give its block the capped
        # coefficient, so the consistency check above cannot have failed.
        assert w_minus > 0, "replay inconsistent after a zero-error round"
        alpha = max(_alpha(w_plus, w_minus, gamma), 0.0)
        raw = [float(w) * math.exp(-alpha * s) for w, s in zip(weights, signs)]
        weights = _snap_distribution(raw)
    raise ContractViolation(f"compression did not reach consistency in "
                            f"{max_rounds} rounds")


def compression_bound(k: int, m: int, delta) -> Fraction:
    """Generalization bound (k log m + log(1/delta)) / (m - k), natural log.

    The value involves logarithms, so it is evaluated in floating point and
    returned as the exact binary rational of that evaluation.
    """
    if not 0 <= k < m:
        raise ConfigError(f"need 0 <= k < m, got k={k}, m={m}")
    d = float(delta)
    if not 0 < d < 1:
        raise ConfigError(f"delta {delta} outside (0, 1)")
    return Fraction((k * math.log(m) + math.log(1.0 / d)) / (m - k))
