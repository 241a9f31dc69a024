"""Learning platform: sentence encoding, features, models, registry."""

from .features import cosine, featurize, sentence_features
from .knn import KnnModel, KnnRow, recount_df
from .registry import Learner, register_learner, registered_learners, select_learner
from .sentence import (ProofStateView, Sentence, encode_formula, encode_state,
                       encode_term, tactic_expr_sentence)
from .views import (TacticView, local_variables, make_view, remap_locals,
                    substitute, tactic_sentence)

__all__ = [
    "KnnModel", "KnnRow", "Learner", "ProofStateView", "Sentence", "TacticView",
    "cosine", "encode_formula", "encode_state", "encode_term", "featurize",
    "local_variables", "make_view", "recount_df", "register_learner",
    "registered_learners", "remap_locals", "select_learner", "sentence_features",
    "substitute", "tactic_expr_sentence", "tactic_sentence",
]
