"""Proof states and fresh-name generation.

A proof state is a kernel judgment: named hypotheses (typed variables
or assumed formulas) plus a goal formula.
"""

from __future__ import annotations

from ..kernel.derivation import FormHyp, Judgment, TypeHyp
from ..kernel.terms import all_names

ProofState = Judgment


def taken_names(state: Judgment) -> set:
    taken = set(state.hyp_ids())
    all_names(state.goal, taken)
    for _, item in state.hyps:
        if isinstance(item, FormHyp):
            all_names(item.formula, taken)
        else:
            taken.add(item.ty)
    return taken


def fresh_variant(base: str, taken) -> str:
    """base, base0, base1, ... first one not taken."""
    if base not in taken:
        return base
    i = 0
    while f"{base}{i}" in taken:
        i += 1
    return f"{base}{i}"


__all__ = ["FormHyp", "Judgment", "ProofState", "TypeHyp", "fresh_variant",
           "taken_names"]
