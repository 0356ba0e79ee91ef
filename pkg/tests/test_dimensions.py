from fractions import Fraction

import pytest

from regdims import (ConfigError, HypothesisClass, ds_dim, fat_dim, gen_cantor,
                     gen_cube, gen_random, gen_unique, graph_dim, natarajan_dim,
                     oig_dim, online_dim, online_value, verify_witness)
from regdims.dimensions import compute_dimension
from regdims.oracles import brute_force_dim, brute_force_online_dim

F = Fraction
GAMMAS = (F(1, 8), F(1, 4), F(1, 2))


class TestFatDim:
    def test_unique_fixture_value(self):
        # Every sign pattern of values above 3/4 vs below 1/4 is realized.
        for d in (2, 3):
            assert fat_dim(gen_unique(d), F(1, 4)).value == d

    def test_two_far_constants(self):
        H = HypothesisClass(2, [[F(1, 10)] * 2, [F(9, 10)] * 2])
        assert fat_dim(H, F(3, 10)).value == 1
        assert brute_force_dim(H, "fat", F(3, 10)) == 1

    def test_singleton(self):
        H = HypothesisClass(2, [[F(1, 2), F(1, 2)]])
        assert fat_dim(H, F(1, 4)).value == 0

    def test_gamma_validation(self):
        with pytest.raises(ConfigError):
            fat_dim(gen_cube(2), F(0))


class TestNatarajanDim:
    def test_cantor_fixture_value(self):
        C = gen_cantor(3, F(1, 5))
        assert natarajan_dim(C.cls, F(1, 5)).value == 1

    def test_full_cube(self):
        H = gen_cube(3)
        assert natarajan_dim(H, F(1, 2)).value == 3
        assert brute_force_dim(H, "natarajan", F(1, 2)) == 3

    def test_constant_class(self):
        H = HypothesisClass(2, [[F(1, 3), F(1, 3)]])
        assert natarajan_dim(H, F(1, 8)).value == 0


class TestGraphDim:
    def test_cantor_fixture_value(self):
        C = gen_cantor(3, F(1, 5))
        assert graph_dim(C.cls, F(1, 5)).value == 3

    def test_cube(self):
        H = gen_cube(2)
        report = graph_dim(H, F(1, 2), want_witness=True)
        assert report.value == 2
        assert report.witness["f"] is not None

    def test_constant_class(self):
        H = HypothesisClass(2, [[F(1, 3), F(1, 3)]])
        assert graph_dim(H, F(1, 8)).value == 0


class TestDsDim:
    def test_cube(self):
        assert ds_dim(gen_cube(2), F(1, 2)).value == 2

    def test_singleton(self):
        H = HypothesisClass(2, [[F(0), F(1)]])
        assert ds_dim(H, F(1, 4)).value == 0

    def test_contains_natarajan_cube(self):
        C = gen_cantor(2, F(1, 5))
        assert ds_dim(C.cls, F(1, 5)).value >= natarajan_dim(C.cls, F(1, 5)).value
        assert ds_dim(C.cls, F(1, 5)).value == brute_force_dim(C.cls, "ds", F(1, 5))


class TestOigDim:
    def test_two_constants(self):
        H = HypothesisClass(1, [[F(0)], [F(1)]])
        assert oig_dim(H, F(1, 2)).value == 1

    def test_cube(self):
        assert oig_dim(gen_cube(2), F(1, 2)).value == 2

    def test_singleton(self):
        H = HypothesisClass(2, [[F(0), F(1)]])
        assert oig_dim(H, F(1, 4)).value == 0

    def test_unique_dimension_stays_constant(self):
        # The scale-sensitive dimensions can grow with d; this one must not.
        for d in (2, 3, 4):
            assert oig_dim(gen_unique(d), F(1, 4)).value <= 2


class TestOnlineDim:
    def test_two_constants_single_point(self):
        H = HypothesisClass(1, [[F(0)], [F(1)]])
        assert online_value(H) == 1

    def test_singleton(self):
        assert online_value(HypothesisClass(2, [[F(0), F(1)]])) == 0

    def test_cube_three(self):
        assert online_value(gen_cube(3)) == 3

    def test_matches_tree_enumeration_small(self):
        for seed in range(6):
            H = gen_random(3, 4, 4, seed)
            assert online_value(H) == brute_force_online_dim(H)
        for seed in (51, 52, 53):  # five-hypothesis classes on three points
            H = gen_random(3, 5, 4, seed)
            assert online_value(H) == brute_force_online_dim(H)


class TestOracleAgreement:
    KINDS = ("fat", "natarajan", "graph", "ds", "oig")

    def test_small_random_corpus(self):
        specs = [(2, 3, 4, 1), (2, 4, 4, 2), (3, 4, 4, 3), (3, 3, 2, 4)]
        for spec in specs:
            H = gen_random(*spec)
            for gamma in GAMMAS:
                for kind in self.KINDS:
                    op = compute_dimension(H, kind, gamma).value
                    assert op == brute_force_dim(H, kind, gamma), (spec, kind, gamma)


class TestProperties:
    def test_scale_monotonicity(self, small_corpus):
        for H in small_corpus:
            for kind in ("fat", "natarajan", "graph", "ds", "oig"):
                values = [compute_dimension(H, kind, g).value for g in GAMMAS]
                assert values == sorted(values, reverse=True), (kind, values)

    def test_containment(self, small_corpus):
        for H in small_corpus:
            for gamma in GAMMAS:
                nat = natarajan_dim(H, gamma).value
                assert nat <= graph_dim(H, gamma).value
                assert nat <= ds_dim(H, gamma).value

    def test_witnesses_verify(self, small_corpus):
        for H in small_corpus[:8]:
            for gamma in (F(1, 4), F(1, 2)):
                for kind in ("fat", "natarajan", "graph", "ds", "oig"):
                    report = compute_dimension(H, kind, gamma, want_witness=True)
                    if report.value > 0:
                        assert verify_witness(H, report), (kind, gamma, report)
            report = online_dim(H, want_witness=True)
            if report.value > 0:
                assert verify_witness(H, report)

    def test_random_single_hypothesis_all_zero(self):
        H = gen_random(3, 1, 4, 5)
        assert online_value(H) == 0
        for gamma in GAMMAS:
            for kind in ("fat", "natarajan", "graph", "ds", "oig"):
                assert compute_dimension(H, kind, gamma).value == 0

    def test_containment_on_seeded_hundred(self):
        """Natarajan cubes witness graph and DS shattering, so the
        containments hold across a hundred seeded classes."""
        for seed in range(100):
            H = gen_random(2 + seed % 2, 3 + seed % 3, 4, 500 + seed)
            for gamma in GAMMAS:
                nat = natarajan_dim(H, gamma).value
                assert nat <= graph_dim(H, gamma).value
                assert nat <= ds_dim(H, gamma).value


class TestReportSerialization:
    def test_json_shape(self):
        report = fat_dim(gen_cube(2), F(1, 2), want_witness=True)
        data = report.to_json_dict()
        assert data["kind"] == "fat" and data["value"] == 2
        assert data["gamma"] == "1/2"
        assert "witness" in data

    def test_online_report(self):
        data = online_dim(gen_cube(2)).to_json_dict()
        assert data["kind"] == "online" and data["value"] == "2"
        assert "gamma" not in data

    def test_unknown_kind_rejected(self):
        with pytest.raises(ConfigError):
            compute_dimension(gen_cube(2), "nope", F(1, 2))
        with pytest.raises(ConfigError):
            compute_dimension(gen_cube(2), "fat", None)
