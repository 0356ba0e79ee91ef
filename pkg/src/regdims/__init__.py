"""Scaled combinatorial dimensions and optimal learners for realizable
regression on finite hypothesis classes, with exact rational arithmetic."""

from .core import (ABSOLUTE_LOSS, ConfigError, ContractViolation,
                   FiniteDistribution, HypothesisClass, LabeledSample, LossFn,
                   ProjectedClass, exact_risk, loss_eval, parse_rational,
                   project, translate_guarantee)
from .dimensions import (DimensionReport, compute_dimension, ds_dim, fat_dim,
                         graph_dim, natarajan_dim, oig_dim, online_dim,
                         online_value, verify_witness)
from .oig import build_oig, loo_error, oig_predict, orient_minmax
from .boosting import (CompressionScheme, WeightedEnsemble, aggregate_general,
                       compress, compression_bound, ensemble_guarantee_check,
                       make_oig_weak_learner, medboost_train, weighted_median,
                       weighted_quantile)
from .online import (GameTranscript, SOALearner, TreeAdversary, VersionSpace,
                     adversary_respond, build_adversary_tree, play_match,
                     soa_predict, soa_update)
from .fixtures import (CantorFixture, cantor_half_slice, erm_pair, gen_cantor,
                       gen_cube, gen_random, gen_unique)
from .experiment import (ExperimentConfig, ExperimentReport, emit_report,
                         parse_report, run_pac_experiment)

__version__ = "0.1.0"
