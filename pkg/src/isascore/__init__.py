"""Security-awareness scoring for smartphone users.

Measures behavioral criteria from three data sources (mobile-agent event
logs, passive packet captures, and questionnaires), combines them into
per-attack-class awareness scores, partitions the population into awareness
levels, and validates the scores against social-engineering challenge
outcomes.
"""

from .catalog import CATALOG, CRITERION_IDS, Criterion, DataSource, Polarity, criteria_for
from .ahp import PairwiseMatrix, derive_weights, load_pairwise_matrix
from .models import AttackClass, AwarenessModel, load_model, save_model, uniform_model
from .scoring import (
    AwarenessLevel,
    IsaScore,
    Level,
    MeasurementVector,
    PopulationStats,
    build_measurement_vectors,
    compute_isa_score,
    normalize_population,
    partition_levels,
    population_stats,
)
from .reputation import ReputationDb, Verdict, load_reputation_db, lookup_domain
from .questionnaire import QuestionMap, ResponseSheet, load_question_map, parse_responses
from .evaluation import (
    Challenge,
    ChallengeOutcome,
    ContingencyTable,
    EvaluationReport,
    Result,
    chi_square_test,
    evaluate_data_source,
    pearson_correlation,
    success_rate,
)
from .synth import SynthSpec, generate_synthetic_population, write_dataset

__version__ = "0.1.0"

__all__ = [
    "AttackClass",
    "AwarenessLevel",
    "AwarenessModel",
    "CATALOG",
    "CRITERION_IDS",
    "Challenge",
    "ChallengeOutcome",
    "ContingencyTable",
    "Criterion",
    "DataSource",
    "EvaluationReport",
    "IsaScore",
    "Level",
    "MeasurementVector",
    "PairwiseMatrix",
    "Polarity",
    "PopulationStats",
    "QuestionMap",
    "ReputationDb",
    "ResponseSheet",
    "Result",
    "SynthSpec",
    "Verdict",
    "build_measurement_vectors",
    "chi_square_test",
    "compute_isa_score",
    "criteria_for",
    "derive_weights",
    "evaluate_data_source",
    "generate_synthetic_population",
    "load_model",
    "load_pairwise_matrix",
    "load_question_map",
    "load_reputation_db",
    "lookup_domain",
    "normalize_population",
    "parse_responses",
    "partition_levels",
    "pearson_correlation",
    "population_stats",
    "save_model",
    "success_rate",
    "uniform_model",
    "write_dataset",
]
