"""Tactic language, interpreter and recording."""

from .interpreter import (DEFAULT_FUEL, ExecutionOutcome, Success, TacticRecord,
                          decompose_and_record, execute, first_success)
from .state import FormHyp, Judgment, ProofState, TypeHyp, fresh_variant, taken_names
from .tactic_parser import parse_tactic
from .tactics import (Alt, Apply, Assumption, Auto, Call, Destruct, Exact, Fail,
                      FEqual, Induction, Intro, Intros, MatchGoal, Reflexivity,
                      Repeat, Rewrite, SearchFailing, Seq, Simpl, Solve, Symmetry,
                      flatten_seq, print_tactic, references, rename_references,
                      seq_list)

__all__ = [
    "Alt", "Apply", "Assumption", "Auto", "Call", "DEFAULT_FUEL", "Destruct",
    "Exact", "ExecutionOutcome", "FEqual", "Fail", "FormHyp", "Induction",
    "Intro", "Intros", "Judgment", "MatchGoal", "ProofState", "Reflexivity",
    "Repeat", "Rewrite", "SearchFailing", "Seq", "Simpl", "Solve", "Success",
    "Symmetry", "TacticRecord", "TypeHyp", "decompose_and_record", "execute",
    "first_success", "flatten_seq", "fresh_variant", "parse_tactic",
    "print_tactic", "references", "rename_references", "seq_list", "taken_names",
]
