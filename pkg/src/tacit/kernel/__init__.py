"""Trusted core: terms, declarations, normalization, matching, checking."""

from .decls import (ConstructorDecl, Environment, FixpointFn, InductivePredicate,
                    InductiveType, MatchBranch, Notations, PredicateRule, declare,
                    declare_tactic, check_formula, fixpoint_equation, infer_type,
                    set_notation, spine)
from .derivation import (CheckResult, Derivation, FormHyp, Judgment, TypeHyp,
                         check_derivation)
from .matching import match_first_order
from .normalize import (find_redex, normalize, normalize_formula,
                        normalize_formula_steps)
from .terms import (App, Con, Eq, Forall, Formula, Hole, Implies, Pred, Term,
                    Var, all_names, check_name, formula_free_vars, replace_at,
                    subst_formula, subst_term, subtree_at, term_free_vars)

__all__ = [
    "App", "CheckResult", "Con", "ConstructorDecl", "Derivation", "Environment",
    "Eq", "FixpointFn", "Forall", "FormHyp", "Formula", "Hole", "Implies",
    "InductivePredicate", "InductiveType", "Judgment", "MatchBranch",
    "Notations", "Pred", "PredicateRule", "Term", "TypeHyp", "Var",
    "all_names", "check_derivation", "check_formula", "check_name", "declare",
    "declare_tactic", "find_redex", "fixpoint_equation", "formula_free_vars",
    "infer_type", "match_first_order", "normalize", "normalize_formula",
    "normalize_formula_steps", "replace_at", "set_notation", "spine",
    "subst_formula", "subst_term", "subtree_at", "term_free_vars",
]
