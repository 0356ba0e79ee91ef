"""Acceptance suite.

One test per criterion; each prints a single pass/fail line.  Tolerances are
pinned here, in code, from the criterion statements:

 1. dimension ops == brute-force enumerators on the small-class corpus
 2. benchmark fixture dimension values, exact
 3. leave-one-out error <= min-max out-degree / n, exact, all n <= 6
 4. exact average cutoff error of the orientation learner <= 1/3
 5. boosting quantile guarantee on 200 seeded runs, T = ceil(16 ln m)
 6. compression bound failure rate <= delta + 3 sigma over 2000 sims
 7. online loss sandwich on the exhaustive three-point family
 8. per-round dimension decrease on every greedy-learner transcript
 9. good/bad empirical-minimizer gap at m = 30 vs m = 11
10. byte-identical CLI reruns under a fixed seed
"""

import json
import math
from fractions import Fraction
from itertools import combinations_with_replacement
from math import comb

import pytest

from conftest import exhaustive_classes, run_cli

from regdims import (ExperimentConfig, LabeledSample,
                     SOALearner, TreeAdversary, build_oig, compress,
                     compression_bound, ensemble_guarantee_check, gen_cantor,
                     gen_cube, gen_random, gen_unique, loo_error,
                     make_oig_weak_learner, medboost_train, oig_dim,
                     online_value, orient_minmax, play_match, project,
                     run_pac_experiment)
from regdims.core import FiniteDistribution, exact_risk
from regdims.dimensions import compute_dimension
from regdims.online import (ConstantLearner, MidpointLearner, _DimCache,
                            exhaustive_soa_max_loss)
from regdims.oracles import brute_force_dim, brute_force_online_dim
from regdims.rng import SplitMix64

F = Fraction
GAMMAS = (F(1, 8), F(1, 4), F(1, 2))
SCALED_KINDS = ("fat", "natarajan", "graph", "ds", "oig")


def _report(num: int, name: str, violations: list, detail: str = "") -> None:
    status = "PASS" if not violations else f"FAIL ({len(violations)} violations)"
    print(f"[acceptance {num}] {name}: {status}{detail}")
    assert not violations, f"criterion {num} ({name}): {violations[:5]}"


# -------------------------------------------------------------------------
# 1. Dimension oracle equivalence
# -------------------------------------------------------------------------

# The stated family (up to 4 points, 6 hypotheses, quarter-grid labels) is
# astronomically large, so the corpus realizes it as every class over the
# 1-2 point coarse grid plus seeded random classes spanning the full bounds.
RANDOM_SPECS = [
    (2, 3, 4, 121), (2, 4, 4, 122), (2, 5, 4, 123), (2, 6, 4, 124),
    (3, 3, 4, 125), (3, 4, 4, 126), (3, 5, 4, 127), (3, 6, 4, 128),
    (4, 3, 4, 129), (4, 4, 4, 130), (4, 5, 4, 131), (4, 6, 4, 132),
    (4, 6, 4, 133), (3, 6, 4, 134), (2, 6, 4, 135), (4, 4, 4, 136),
]


def test_criterion_1_dimension_oracle_equivalence():
    corpus = list(exhaustive_classes(1, (F(0), F(1, 2), F(1)), 3))
    corpus += list(exhaustive_classes(2, (F(0), F(1, 2), F(1)), 3))
    corpus += [gen_random(*spec) for spec in RANDOM_SPECS]
    violations = []
    for ci, H in enumerate(corpus):
        for gamma in GAMMAS:
            for kind in SCALED_KINDS:
                op = compute_dimension(H, kind, gamma).value
                oracle = brute_force_dim(H, kind, gamma)
                if op != oracle:
                    violations.append((ci, kind, str(gamma), op, oracle))
        if len(H.rows) <= 4:
            # explicit game-tree enumeration is feasible up to 4 hypotheses
            if online_value(H) != brute_force_online_dim(H):
                violations.append((ci, "online"))
    _report(1, "dimension oracle equivalence", violations,
            f" [{len(corpus)} classes x {len(GAMMAS)} scales]")


# -------------------------------------------------------------------------
# 2. Benchmark fixture values
# -------------------------------------------------------------------------


def test_criterion_2_fixture_dimension_values():
    violations = []
    for d in (2, 3, 4):
        C = gen_cantor(d, F(1, 5))
        nat = compute_dimension(C.cls, "natarajan", F(1, 5)).value
        gr = compute_dimension(C.cls, "graph", F(1, 5)).value
        if nat != 1:
            violations.append(("cantor-nat", d, nat))
        if gr != d:
            violations.append(("cantor-graph", d, gr))
    for d in (2, 3, 4):
        fat = compute_dimension(gen_unique(d), "fat", F(1, 4)).value
        if fat != d:
            violations.append(("unique-fat", d, fat))
    oig_values = [compute_dimension(gen_unique(d), "oig", F(1, 4)).value
                  for d in (2, 3, 4, 5)]
    if len(set(oig_values)) != 1 or oig_values[0] > 2:
        violations.append(("unique-oig-not-constant", oig_values))
    _report(2, "benchmark fixture values", violations,
            f" [unique oig constant at {oig_values[0]}]")


# -------------------------------------------------------------------------
# 3 & 4. Orientation learner bounds
# -------------------------------------------------------------------------

LOO_FIXTURES = [
    ("cube2", gen_cube(2), F(1, 2)),
    ("cube3", gen_cube(3), F(1, 2)),
    ("unique2", gen_unique(2), F(1, 4)),
    ("unique3", gen_unique(3), F(1, 4)),
    ("cantor2", gen_cantor(2, F(1, 5)).cls, F(1, 5)),
    ("cantor3", gen_cantor(3, F(1, 5)).cls, F(1, 5)),
    ("rand35", gen_random(3, 5, 4, 21), F(1, 4)),
    ("rand26", gen_random(2, 6, 4, 22), F(1, 4)),
]


def test_criterion_3_leave_one_out_bound():
    violations = []
    for name, H, gamma in LOO_FIXTURES:
        for n in range(1, 7):
            for S in combinations_with_replacement(range(H.domain_size), n):
                _, max_out = orient_minmax(build_oig(project(H, S)), gamma)
                for h_star in range(len(H.rows)):
                    err = loo_error(H, S, h_star, gamma)
                    if err > F(max_out, n):
                        violations.append((name, S, h_star, err, max_out))
    _report(3, "leave-one-out bound", violations,
            f" [{len(LOO_FIXTURES)} fixtures, n <= 6]")


def _multiset_weight(S: tuple, n: int, domain: int) -> int:
    """Number of uniform n-tuples realizing the multiset."""
    weight, rest = 1, n
    for p in range(domain):
        k = S.count(p)
        weight *= comb(rest, k)
        rest -= k
    return weight


def test_criterion_4_weak_learner_threshold():
    violations = []
    details = []
    for name, H, gamma in LOO_FIXTURES:
        n = oig_dim(H, gamma).value + 1
        num, den = F(0), 0
        for S in combinations_with_replacement(range(H.domain_size), n):
            w = _multiset_weight(S, n, H.domain_size)
            for h_star in range(len(H.rows)):
                num += w * loo_error(H, S, h_star, gamma)
                den += w
        avg = num / den
        details.append(f"{name}:{avg}")
        if avg > F(1, 3):
            violations.append((name, n, avg))
    _report(4, "weak-learner threshold", violations, f" [{'; '.join(details[:4])}]")


# -------------------------------------------------------------------------
# 5. Boosting quantile guarantee
# -------------------------------------------------------------------------

BOOST_CONFIGS = [
    ("cantor3", lambda: gen_cantor(3, F(1, 5)).cls, F(1, 5), F(1, 10)),
    ("cantor2", lambda: gen_cantor(2, F(1, 5)).cls, F(1, 5), F(1, 10)),
    ("unique2", lambda: gen_unique(2), F(1, 4), F(1, 8)),
    ("unique3", lambda: gen_unique(3), F(1, 4), F(1, 8)),
    ("cube2", lambda: gen_cube(2), F(1, 4), F(1, 8)),
    ("cube3", lambda: gen_cube(3), F(1, 4), F(1, 8)),
    ("rand1", lambda: gen_random(3, 5, 4, 205), F(1, 4), F(1, 8)),
    ("rand2", lambda: gen_random(2, 4, 4, 206), F(1, 4), F(1, 8)),
]
BOOST_SIZES = (8, 12, 16, 24, 32, 48, 64)


def test_criterion_5_medboost_guarantee():
    fixtures = [(name, build(), gamma, beta)
                for name, build, gamma, beta in BOOST_CONFIGS]
    weak_learners = {name: make_oig_weak_learner(H, gamma, beta)
                     for name, H, gamma, beta in fixtures}
    violations = []
    for i in range(200):
        name, H, gamma, beta = fixtures[i % len(fixtures)]
        m = BOOST_SIZES[i % len(BOOST_SIZES)]
        rng = SplitMix64(1000 + i)
        dist = FiniteDistribution.uniform(H.domain_size)
        target = H.rows[rng.next_below(len(H.rows))]
        sample = LabeledSample([(x, target[x])
                                for x in dist.sample_points(rng, m)])
        T = math.ceil(16 * math.log(m))
        try:
            ensemble = medboost_train(sample, weak_learners[name], gamma,
                                      beta, T, rng)
        except Exception as exc:  # any failure counts against the criterion
            violations.append((i, name, m, repr(exc)))
            continue
        if not ensemble_guarantee_check(ensemble, sample, gamma, 2 * beta):
            violations.append((i, name, m, "guarantee"))
    _report(5, "medboost guarantee (200 runs)", violations)


# -------------------------------------------------------------------------
# 6. Compression generalization
# -------------------------------------------------------------------------

COMPRESS_FIXTURES = [
    ("cantor3", lambda: gen_cantor(3, F(1, 5)).cls, F(1, 5), F(1, 10), 32),
    ("cube2", lambda: gen_cube(2), F(1, 4), F(1, 8), 32),
]
SIMS = 2000
DELTAS = (0.05, 0.1)


def test_criterion_6_compression_generalization():
    violations = []
    details = []
    for name, build, gamma, beta, m in COMPRESS_FIXTURES:
        H = build()
        dist = FiniteDistribution.uniform(H.domain_size)
        weak = make_oig_weak_learner(H, gamma, beta)
        failures = {d: 0 for d in DELTAS}
        for seed in range(SIMS):
            rng = SplitMix64(seed)
            target = H.rows[rng.next_below(len(H.rows))]
            sample = LabeledSample([(x, target[x])
                                    for x in dist.sample_points(rng, m)])
            scheme = compress(H, sample, weak, gamma, 2 * beta, rng)
            risk = exact_risk(target, scheme.reconstruct(), dist, cutoff=gamma)
            for d in DELTAS:
                if scheme.size >= m or risk > compression_bound(scheme.size, m, d):
                    failures[d] += 1
        for d in DELTAS:
            rate = failures[d] / SIMS
            tol = d + 3 * math.sqrt(d * (1 - d) / SIMS)
            details.append(f"{name}@{d}:{rate:.4f}<= {tol:.4f}")
            if rate > tol:
                violations.append((name, d, rate, tol))
    _report(6, "compression generalization", violations,
            f" [{details[0]}; {details[2]}]")


# -------------------------------------------------------------------------
# 7 & 8. Online sandwich and dimension decrease
# -------------------------------------------------------------------------


def _online_family():
    """Exhaustive classes over {0, 1/2, 1}^3 with up to 4 hypotheses, plus
    seeded quarter-grid classes for label variety."""
    yield from exhaustive_classes(3, (F(0), F(1, 2), F(1)), 4)
    for s in range(40):
        yield gen_random(3, 4, 4, 400 + s)


@pytest.fixture(scope="module")
def online_family_results():
    upper, lower, decrease = [], [], []
    count = 0
    for H in _online_family():
        count += 1
        dim = online_value(H)
        try:
            # asserts the per-round dimension decrease internally
            worst = exhaustive_soa_max_loss(H, check_decrease=True)
        except AssertionError:
            decrease.append(("exhaustive", H.rows))
            continue
        if worst > dim:
            upper.append((H.rows, worst, dim))
        cache = _DimCache(H)
        for learner in (SOALearner(), ConstantLearner(F(0)), MidpointLearner()):
            transcript = play_match(H, learner, TreeAdversary(H), 16)
            if transcript.cumulative_loss < dim / 2:
                lower.append((H.rows, learner.name))
            if isinstance(learner, SOALearner):
                mask = (1 << len(H.rows)) - 1
                for r in transcript.rounds:
                    child = 0
                    for idx in range(len(H.rows)):
                        if (mask >> idx) & 1 and H.rows[idx][r.x] == r.y_star:
                            child |= 1 << idx
                    if cache.value(child) > cache.value(mask) - r.loss:
                        decrease.append(("tree-match", H.rows, r))
                    mask = child
    return count, upper, lower, decrease


def test_criterion_7_online_sandwich(online_family_results):
    count, upper, lower, _ = online_family_results
    _report(7, "online loss sandwich", upper + lower, f" [{count} classes]")


def test_criterion_8_dimension_decrease(online_family_results):
    count, _, _, decrease = online_family_results
    _report(8, "per-round dimension decrease", decrease, f" [{count} classes]")


# -------------------------------------------------------------------------
# 9. Empirical-minimizer gap
# -------------------------------------------------------------------------


def test_criterion_9_erm_gap():
    d, eps, delta, gamma = 8, F(1, 10), F(1, 20), F(1, 5)
    trials = 500
    fixture = gen_cantor(d, gamma)
    heavy_first = (1 - 2 * eps,) + (2 * eps / (d - 1),) * (d - 1)
    slack = 3 * math.sqrt(float(delta) * (1 - float(delta)) / trials)
    m_good = math.ceil((1 / eps) * math.log(1 / delta))
    m_bad = int((d - 1) / (6 * eps))
    assert m_good == 30 and m_bad == 11
    # disjoint-from-heavy-point target whose mass just exceeds eps
    target_subset = frozenset({1, 2, 3, 4})
    target_good = next(i for i, A in fixture.subset_of.items()
                       if A == target_subset)
    good = run_pac_experiment(fixture.cls, ExperimentConfig(
        learner="good_erm", sizes=(m_good,), gamma=gamma, epsilon=eps,
        delta=delta, repetitions=trials, seed=90, target=target_good,
        distribution=heavy_first), fixture)
    bad = run_pac_experiment(fixture.cls, ExperimentConfig(
        learner="bad_erm", sizes=(m_bad,), gamma=gamma, epsilon=eps,
        delta=delta, repetitions=trials, seed=91, target=0,
        distribution=heavy_first), fixture)
    good_rate = float(good.rows[0].fail_rate)
    bad_rate = float(bad.rows[0].fail_rate)
    violations = []
    if good_rate > float(delta) + slack:
        violations.append(("good", good_rate))
    if bad_rate <= float(delta) + slack:
        violations.append(("bad", bad_rate))
    _report(9, "empirical-minimizer gap", violations,
            f" [good fail {good_rate:.3f} <= {float(delta) + slack:.3f} < "
            f"bad fail {bad_rate:.3f}]")


# -------------------------------------------------------------------------
# 10. CLI determinism
# -------------------------------------------------------------------------


def test_criterion_10_cli_determinism(tmp_path):
    cube = tmp_path / "cube.json"
    assert run_cli("--out", str(cube), "gen", "--kind", "cube", "--d", "2").returncode == 0
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({
        "fixture": {"kind": "cantor", "d": 3, "gamma": "1/5"},
        "learner": "bad_erm", "sizes": [3, 6], "gamma": "1/5",
        "epsilon": "1/10", "delta": "1/20", "repetitions": 25, "seed": 13,
    }))
    report_json = tmp_path / "report.json"
    assert run_cli("--out", str(report_json), "pac", "--config", str(cfg),
                   "--format", "json").returncode == 0
    invocations = [
        ("gen-random", ["--seed", "7", "gen", "--kind", "random",
                        "--n-points", "3", "--n-hyps", "5", "--denom", "4"]),
        ("dims", ["dims", "--class", str(cube), "--kind", "oig",
                  "--gamma", "1/2", "--witness"]),
        ("oig", ["oig", "--class", str(cube), "--gamma", "1/2",
                 "--sample", "0:0", "--test", "1"]),
        ("boost", ["--seed", "11", "boost", "--class", str(cube),
                   "--gamma", "1/4", "--sample-size", "12"]),
        ("online", ["online", "--class", str(cube), "--learner", "soa",
                    "--adversary", "tree", "--rounds", "8"]),
        ("pac", ["pac", "--config", str(cfg), "--format", "csv"]),
        ("report", ["report", "--in", str(report_json), "--format", "csv"]),
    ]
    violations = []
    for name, argv in invocations:
        first = run_cli(*argv)
        second = run_cli(*argv)
        if first.returncode != 0 or first.stdout != second.stdout:
            violations.append((name, first.returncode))
    _report(10, "cli determinism", violations, f" [{len(invocations)} commands]")
