"""Command-line entry point.

Subcommands: ``gen`` (fixture classes), ``dims`` (dimension reports),
``oig`` (single orientation-based prediction), ``boost`` (boost + compress +
generalization accounting), ``online`` (match transcripts), ``pac``
(sampling experiments), ``report`` (report format conversion).

Exit codes: 0 on success, 2 on configuration errors, 3 on contract
violations (non-realizable samples, weak-learning failure, an adversary
playing an unrealizable label).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import boosting, dimensions, online
from .core import (ConfigError, ContractViolation, FiniteDistribution,
                   HypothesisClass, LabeledSample, exact_risk,
                   format_rational, parse_rational, project)
from .experiment import (ExperimentConfig, emit_report, parse_report,
                         run_pac_experiment)
from .fixtures import FixtureSpec
from .oig import build_oig, oig_predict, orient_minmax
from .rng import SplitMix64


def _write(args, payload: str) -> None:
    if args.out:
        Path(args.out).write_text(payload)
    else:
        sys.stdout.write(payload)


def _load_class(path: str) -> HypothesisClass:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read class file {path}: {exc}") from exc
    return HypothesisClass.from_json(text)


def _parse_sample(text: str) -> LabeledSample:
    pairs = []
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        try:
            idx, label = item.split(":")
            pairs.append((int(idx), parse_rational(label)))
        except ValueError as exc:
            raise ConfigError(f"bad sample entry {item!r}") from exc
    return LabeledSample(pairs)


# ---------------------------------------------------------------------------
# Subcommand handlers
# ---------------------------------------------------------------------------


def _cmd_gen(args) -> None:
    spec = FixtureSpec(kind=args.kind, d=args.d,
                       gamma=parse_rational(args.gamma) if args.gamma else None,
                       n_points=args.n_points, n_hyps=args.n_hyps,
                       denom=args.denom, seed=args.seed)
    cls, _ = spec.build()
    _write(args, cls.to_json())


def _cmd_dims(args) -> None:
    cls = _load_class(args.class_file)
    gamma = parse_rational(args.gamma) if args.gamma else None
    report = dimensions.compute_dimension(cls, args.kind, gamma, args.witness)
    _write(args, json.dumps(report.to_json_dict(), sort_keys=True,
                            separators=(",", ":")) + "\n")


def _cmd_oig(args) -> None:
    cls = _load_class(args.class_file)
    gamma = parse_rational(args.gamma)
    sample = _parse_sample(args.sample) if args.sample else LabeledSample([])
    prediction = oig_predict(cls, sample, args.test, gamma)
    graph = build_oig(project(cls, sample.points() + (args.test,)))
    _, max_out = orient_minmax(graph, gamma)
    payload = {
        "prediction": format_rational(prediction),
        "prediction_decimal": float(prediction),
        "max_outdegree": max_out,
    }
    _write(args, json.dumps(payload, sort_keys=True, separators=(",", ":")) + "\n")


def _cmd_boost(args) -> None:
    cls = _load_class(args.class_file)
    gamma = parse_rational(args.gamma)
    beta = parse_rational(args.beta) if args.beta else gamma / 2
    m = args.sample_size
    rng = SplitMix64(args.seed)
    dist = FiniteDistribution.uniform(cls.domain_size)
    target = rng.next_below(len(cls.rows))
    points = dist.sample_points(rng, m)
    sample = LabeledSample([(x, cls.rows[target][x]) for x in points])
    weak = boosting.make_oig_weak_learner(cls, gamma, beta)
    theta = 2 * beta
    scheme = boosting.compress(cls, sample, weak, gamma, theta, rng)
    predictor = scheme.reconstruct()
    k = scheme.size
    bound = (boosting.compression_bound(k, m, parse_rational(args.delta))
             if k < m else None)
    risk = exact_risk(cls.rows[target], predictor, dist, cutoff=gamma)
    payload = {
        "m": m,
        "target": cls.names[target],
        "scheme_size": k,
        "rounds": k // scheme.block_size if scheme.block_size else 0,
        "block_size": scheme.block_size,
        "compression_bound": float(bound) if bound is not None else None,
        "risk": format_rational(risk),
        "risk_decimal": float(risk),
        "bound_holds": (risk <= bound) if bound is not None else None,
    }
    _write(args, json.dumps(payload, sort_keys=True, separators=(",", ":")) + "\n")


def _make_learner(spec: str):
    if spec == "soa":
        return online.SOALearner()
    if spec == "midpoint":
        return online.MidpointLearner()
    if spec.startswith("constant:"):
        return online.ConstantLearner(parse_rational(spec.split(":", 1)[1]))
    raise ConfigError(f"unknown learner {spec!r}")


def _make_adversary(spec: str, cls: HypothesisClass):
    if spec == "tree":
        return online.TreeAdversary(cls)
    if spec.startswith("script:"):
        path = spec.split(":", 1)[1]
        try:
            rounds = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read script {path}: {exc}") from exc
        return online.ScriptAdversary([(int(x), parse_rational(y))
                                       for x, y in rounds])
    raise ConfigError(f"unknown adversary {spec!r}")


def _cmd_online(args) -> None:
    cls = _load_class(args.class_file)
    learner = _make_learner(args.learner)
    adversary = _make_adversary(args.adversary, cls)
    transcript = online.play_match(cls, learner, adversary, args.rounds)
    summary = transcript.to_json_dict()
    summary["learner"] = getattr(learner, "name", args.learner)
    summary["adversary"] = args.adversary
    payload = transcript.to_csv() + json.dumps(summary, sort_keys=True,
                                               separators=(",", ":")) + "\n"
    _write(args, payload)


def _cmd_pac(args) -> None:
    try:
        raw = json.loads(Path(args.config).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {args.config}: {exc}") from exc
    fixture = None
    if "class_file" in raw:
        cls = _load_class(raw["class_file"])
    elif "fixture" in raw:
        cls, fixture = FixtureSpec.from_json_dict(raw["fixture"]).build()
    else:
        raise ConfigError("config needs class_file or fixture")
    try:
        dist = raw.get("distribution", "uniform")
        cfg = ExperimentConfig(
            learner=raw["learner"],
            sizes=tuple(int(v) for v in raw["sizes"]),
            gamma=parse_rational(raw["gamma"]),
            epsilon=parse_rational(raw["epsilon"]),
            delta=parse_rational(raw["delta"]),
            repetitions=int(raw.get("repetitions", 1)),
            seed=int(raw.get("seed", args.seed)),
            target=int(raw.get("target", 0)),
            distribution=None if dist == "uniform"
            else tuple(parse_rational(w) for w in dist),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"malformed config: {exc}") from exc
    report = run_pac_experiment(cls, cfg, fixture, threads=args.threads)
    _write(args, emit_report(report, args.format).decode())


def _cmd_report(args) -> None:
    try:
        data = Path(args.infile).read_bytes()
    except OSError as exc:
        raise ConfigError(f"cannot read report {args.infile}: {exc}") from exc
    report = parse_report(data)
    _write(args, emit_report(report, args.format).decode())


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="regdims",
        description="Scaled dimensions and learners for realizable regression "
                    "on finite hypothesis classes.")
    parser.add_argument("--seed", type=int, default=0, help="global seed")
    parser.add_argument("--threads", type=int, default=1,
                        help="worker threads for experiment repetitions")
    parser.add_argument("--out", help="write output to this file instead of stdout")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        # accepted after the subcommand too; SUPPRESS keeps the global value
        # when the flag is absent
        p.add_argument("--seed", type=int, default=argparse.SUPPRESS)
        p.add_argument("--out", default=argparse.SUPPRESS)

    p = sub.add_parser("gen", help="generate a fixture class file")
    add_common(p)
    p.add_argument("--kind", required=True,
                   choices=["cantor", "unique", "cube", "random"])
    p.add_argument("--d", type=int, help="dimension parameter for cantor/unique/cube")
    p.add_argument("--gamma", help="scale for the cantor fixture")
    p.add_argument("--n-points", type=int, default=3, dest="n_points")
    p.add_argument("--n-hyps", type=int, default=4, dest="n_hyps")
    p.add_argument("--denom", type=int, default=4)
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("dims", help="compute a dimension report")
    add_common(p)
    p.add_argument("--class", dest="class_file", required=True)
    p.add_argument("--gamma", help="scale (not used by kind=online)")
    p.add_argument("--kind", required=True,
                   choices=["fat", "natarajan", "graph", "ds", "oig", "online"])
    p.add_argument("--witness", action="store_true")
    p.set_defaults(func=_cmd_dims)

    p = sub.add_parser("oig", help="orientation-based prediction")
    add_common(p)
    p.add_argument("--class", dest="class_file", required=True)
    p.add_argument("--gamma", required=True)
    p.add_argument("--sample", default="", help='pairs "i:p/q,j:p/q,..."')
    p.add_argument("--test", type=int, required=True)
    p.set_defaults(func=_cmd_oig)

    p = sub.add_parser("boost", help="boost, compress, and score")
    add_common(p)
    p.add_argument("--class", dest="class_file", required=True)
    p.add_argument("--gamma", required=True)
    p.add_argument("--beta", help="weak-learner margin (default gamma/2)")
    p.add_argument("--sample-size", type=int, required=True, dest="sample_size")
    p.add_argument("--delta", default="1/20")
    p.set_defaults(func=_cmd_boost)

    p = sub.add_parser("online", help="play an online match")
    add_common(p)
    p.add_argument("--class", dest="class_file", required=True)
    p.add_argument("--learner", default="soa",
                   help="soa | constant:p/q | midpoint")
    p.add_argument("--adversary", default="tree", help="tree | script:FILE")
    p.add_argument("--rounds", type=int, default=32)
    p.set_defaults(func=_cmd_online)

    p = sub.add_parser("pac", help="run a PAC sampling experiment")
    add_common(p)
    p.add_argument("--config", required=True)
    p.add_argument("--format", default="csv", choices=["csv", "json"])
    p.set_defaults(func=_cmd_pac)

    p = sub.add_parser("report", help="convert a JSON report")
    add_common(p)
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--format", default="csv", choices=["csv", "json"])
    p.set_defaults(func=_cmd_report)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except ContractViolation as exc:
        print(f"contract violation: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
