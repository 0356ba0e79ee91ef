"""PAC sampling experiments with exact risk scoring.

Monte-Carlo enters only through sample drawing; every drawn predictor is
scored by closed-form risk over the finite domain, which sharpens the
statistical tests that acceptance runs at desk scale.  Reports aggregate
deterministically: repetitions are keyed by (size, repetition index) and
reduced in sorted order.
"""

from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

from .core import (ABSOLUTE_LOSS, ConfigError, FiniteDistribution,
                   HypothesisClass, LabeledSample, LossFn, exact_risk,
                   format_rational, parse_rational)
from .fixtures import CantorFixture, erm_pair
from .oig import oig_predict
from .rng import SplitMix64


@dataclass(frozen=True)
class ExperimentConfig:
    learner: str
    sizes: tuple
    gamma: Fraction
    epsilon: Fraction
    delta: Fraction
    repetitions: int
    seed: int
    target: int = 0
    distribution: Optional[tuple] = None   # None means uniform

    def __post_init__(self):
        if self.repetitions < 1:
            raise ConfigError("repetitions must be >= 1")
        for name in ("gamma", "epsilon", "delta"):
            v = getattr(self, name)
            if not (0 <= v <= 1):
                raise ConfigError(f"{name} {v} outside [0, 1]")
        if not self.sizes:
            raise ConfigError("at least one sample size required")


@dataclass(frozen=True)
class ReportRow:
    learner: str
    m: int
    mean_risk: Fraction
    q_risk: Fraction
    fail_rate: Fraction


@dataclass(frozen=True)
class ExperimentReport:
    rows: tuple

    def to_json_dict(self) -> dict:
        out = []
        for r in self.rows:
            out.append({
                "learner": r.learner,
                "m": r.m,
                "mean_risk": format_rational(r.mean_risk),
                "mean_risk_decimal": float(r.mean_risk),
                "q_risk": format_rational(r.q_risk),
                "q_risk_decimal": float(r.q_risk),
                "fail_rate": format_rational(r.fail_rate),
                "fail_rate_decimal": float(r.fail_rate),
            })
        return {"rows": out}


def make_learner(name: str, H: HypothesisClass, gamma: Fraction,
                 fixture: Optional[CantorFixture] = None) -> Callable:
    """Learner registry: sample -> predictor (full row or point callable)."""
    if name == "erm":
        def first_consistent(sample: LabeledSample):
            for row in H.rows:
                if all(row[x] == y for x, y in sample.pairs):
                    return row
            raise ConfigError("sample not realizable by the class")
        return first_consistent
    if name in ("good_erm", "bad_erm"):
        if fixture is None:
            raise ConfigError(f"learner {name!r} needs a cantor fixture")
        return erm_pair(name.split("_")[0], fixture)
    if name == "oig":
        def orientation_learner(sample: LabeledSample):
            return lambda x: oig_predict(H, sample, x, gamma)
        return orientation_learner
    raise ConfigError(f"unknown learner {name!r}")


def _quantile_index(count: int, delta: Fraction) -> int:
    """0-based order statistic of the empirical (1 - delta)-quantile."""
    rank = (1 - delta) * count
    idx = -((-rank.numerator) // rank.denominator)  # ceil
    return min(max(idx - 1, 0), count - 1)


def run_pac_experiment(H: HypothesisClass, cfg: ExperimentConfig,
                       fixture: Optional[CantorFixture] = None,
                       loss: LossFn = ABSOLUTE_LOSS,
                       threads: int = 1) -> ExperimentReport:
    """Draw seeded samples, train, and score with exact cutoff risk."""
    dist = (FiniteDistribution(cfg.distribution) if cfg.distribution is not None
            else FiniteDistribution.uniform(H.domain_size))
    if len(dist) != H.domain_size:
        raise ConfigError("distribution length does not match the domain")
    if not (0 <= cfg.target < len(H.rows)):
        raise ConfigError(f"target index {cfg.target} out of range")
    learner = make_learner(cfg.learner, H, cfg.gamma, fixture)
    target_row = H.rows[cfg.target]
    root = SplitMix64(cfg.seed)

    def one(m: int, rep: int) -> Fraction:
        rng = root.spawn(m, rep)
        points = dist.sample_points(rng, m)
        sample = LabeledSample([(x, target_row[x]) for x in points])
        predictor = learner(sample)
        return exact_risk(target_row, predictor, dist, loss, cutoff=cfg.gamma)

    rows = []
    for m in sorted(cfg.sizes):
        reps = range(cfg.repetitions)
        if threads > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                risks = list(pool.map(lambda r: one(m, r), reps))
        else:
            risks = [one(m, r) for r in reps]
        risks_sorted = sorted(risks)
        mean = sum(risks, Fraction(0)) / cfg.repetitions
        q_risk = risks_sorted[_quantile_index(cfg.repetitions, cfg.delta)]
        failures = sum(1 for r in risks if r > cfg.epsilon)
        rows.append(ReportRow(cfg.learner, m, mean, q_risk,
                              Fraction(failures, cfg.repetitions)))
    return ExperimentReport(tuple(rows))


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------

_CSV_HEADER = ["learner", "m", "mean_risk", "mean_risk_decimal", "q_risk",
               "q_risk_decimal", "fail_rate", "fail_rate_decimal"]


def emit_report(report: ExperimentReport, fmt: str) -> bytes:
    if fmt == "json":
        return (json.dumps(report.to_json_dict(), sort_keys=True,
                           separators=(",", ":")) + "\n").encode()
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(_CSV_HEADER)
        for entry in report.to_json_dict()["rows"]:
            writer.writerow([entry[c] for c in _CSV_HEADER])
        return buf.getvalue().encode()
    raise ConfigError(f"unknown report format {fmt!r}")


def parse_report(data: bytes) -> ExperimentReport:
    try:
        obj = json.loads(data.decode())
        rows = tuple(ReportRow(str(r["learner"]), int(r["m"]),
                               parse_rational(r["mean_risk"]),
                               parse_rational(r["q_risk"]),
                               parse_rational(r["fail_rate"]))
                     for r in obj["rows"])
    except (KeyError, TypeError, json.JSONDecodeError) as exc:
        raise ConfigError(f"malformed report: {exc}") from exc
    return ExperimentReport(rows)
