"""Uniform tree encoding of syntax for learning.

Every object handed to a learner (terms, formulas, whole proof states,
tactics) becomes a Sentence: a rooted tree of string labels. Formula
constructors map to fixed labels (forall, implies, eq, predicate and
function names); variables become `var:<name>`; a typed hypothesis is a
single node labeled with its type.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..engine import tactics as T
from ..kernel.derivation import FormHyp, Judgment, TypeHyp
from ..kernel.terms import App, Con, Eq, Forall, Hole, Implies, Pred, Var


@dataclass(frozen=True)
class Sentence:
    label: str
    children: tuple = ()

    def __post_init__(self):
        if not self.label:
            raise ValueError("sentence labels must be nonempty")


@dataclass(frozen=True)
class ProofStateView:
    hyps: tuple  # of (id, Sentence)
    goal: Sentence

    def hyp_ids(self):
        return [h for h, _ in self.hyps]


def encode_term(t) -> Sentence:
    if isinstance(t, Var):
        return Sentence(f"var:{t.name}")
    if isinstance(t, (Con, App)):
        return Sentence(t.name, tuple(encode_term(a) for a in t.args))
    if isinstance(t, Hole):
        return Sentence("_" if t.name is None else f"?{t.name}")
    raise TypeError(f"not a term: {t!r}")


def encode_formula(f) -> Sentence:
    if isinstance(f, Eq):
        return Sentence("eq", (encode_term(f.lhs), encode_term(f.rhs)))
    if isinstance(f, Pred):
        return Sentence(f.name, tuple(encode_term(a) for a in f.args))
    if isinstance(f, Implies):
        return Sentence("implies", (encode_formula(f.antecedent),
                                    encode_formula(f.consequent)))
    if isinstance(f, Forall):
        return Sentence("forall", (Sentence(f"var:{f.var}"),
                                   Sentence(f.ty or "_"),
                                   encode_formula(f.body)))
    if isinstance(f, Hole):
        return Sentence("_" if f.name is None else f"?{f.name}")
    raise TypeError(f"not a formula: {f!r}")


def encode_hyp(item) -> Sentence:
    if isinstance(item, TypeHyp):
        return Sentence(item.ty)
    if isinstance(item, FormHyp):
        return encode_formula(item.formula)
    raise TypeError(f"not a hypothesis item: {item!r}")


def encode_state(state: Judgment) -> ProofStateView:
    return ProofStateView(tuple((h, encode_hyp(item)) for h, item in state.hyps),
                          encode_formula(state.goal))


def _ref_node(name: str) -> Sentence:
    return Sentence(f"var:{name}")


def tactic_expr_sentence(t) -> Sentence:
    if isinstance(t, T.Intro):
        return Sentence("intro", (_ref_node(t.name),) if t.name else ())
    if isinstance(t, T.Intros):
        return Sentence("intros")
    if isinstance(t, T.Apply):
        return Sentence("apply", (_ref_node(t.ref),))
    if isinstance(t, T.Rewrite):
        return Sentence("rewrite", (Sentence("rl" if t.reverse else "lr"),
                                    _ref_node(t.ref)))
    if isinstance(t, T.Reflexivity):
        return Sentence("reflexivity")
    if isinstance(t, T.Symmetry):
        return Sentence("symmetry")
    if isinstance(t, T.Assumption):
        return Sentence("assumption")
    if isinstance(t, T.FEqual):
        return Sentence("f_equal")
    if isinstance(t, T.Simpl):
        return Sentence("simpl")
    if isinstance(t, T.Induction):
        return Sentence("induction", (_ref_node(t.var),))
    if isinstance(t, T.Destruct):
        return Sentence("destruct", (_ref_node(t.var),))
    if isinstance(t, T.Auto):
        return Sentence("auto")
    if isinstance(t, T.Fail):
        return Sentence("fail")
    if isinstance(t, T.Exact):
        return Sentence("exact", (_ref_node(t.ref),))
    if isinstance(t, T.Seq):
        return Sentence("seq", (tactic_expr_sentence(t.first),
                                tactic_expr_sentence(t.second)))
    if isinstance(t, T.Alt):
        return Sentence("alt", (tactic_expr_sentence(t.left),
                                tactic_expr_sentence(t.right)))
    if isinstance(t, T.Solve):
        return Sentence("solve", (tactic_expr_sentence(t.inner),))
    if isinstance(t, T.Repeat):
        return Sentence("repeat", (tactic_expr_sentence(t.inner),))
    if isinstance(t, T.Call):
        return Sentence("call", (Sentence(t.name),))
    if isinstance(t, T.MatchGoal):
        arms = tuple(Sentence("arm", (encode_formula(p), tactic_expr_sentence(b)))
                     for p, b in t.arms)
        return Sentence("match_goal", arms)
    if isinstance(t, T.SearchFailing):
        return Sentence("search_failing",
                        tuple(tactic_expr_sentence(x) for x in t.cache))
    raise TypeError(f"not a tactic: {t!r}")
