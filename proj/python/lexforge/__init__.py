"""Sentiment lexicon induction over wordnet-style ontologies."""

from ._core import (
    LexforgeError,
    Ontology,
    Vocabulary,
    __version__,
    expand,
    fleiss_kappa,
    pmi,
    polarity_components,
    predict_centroid,
    predict_knn,
    read_lexicon,
    run_pipeline,
    score_labels,
    select_seeds,
    strongly_connected_components,
    tokenize,
    validate_config,
)

__all__ = [
    "LexforgeError",
    "Ontology",
    "Vocabulary",
    "__version__",
    "expand",
    "fleiss_kappa",
    "pmi",
    "polarity_components",
    "predict_centroid",
    "predict_knn",
    "read_lexicon",
    "run_pipeline",
    "score_labels",
    "select_seeds",
    "strongly_connected_components",
    "tokenize",
    "validate_config",
]
