"""Guarded normalization of terms.

A fixpoint application unfolds only when its decreasing argument has a
constructor head; the match then reduces and normalization recurses.
The structural-descent check on declarations makes this terminating, and
orthogonality makes the normal form unique, so two implementations are
kept: a fast recursive evaluator and a single-step tracer whose steps
justify `simpl` inside derivations. Tests assert they agree.
"""

from __future__ import annotations

from .decls import Environment
from .terms import (App, Con, Eq, Forall, Implies, Pred, Var, node_children,
                    replace_at, subst_term)


def normalize(env: Environment, t):
    """Unique normal form of a well-typed term."""
    if isinstance(t, Var):
        return t
    if isinstance(t, Con):
        return Con(t.name, tuple(normalize(env, a) for a in t.args))
    if isinstance(t, App):
        args = tuple(normalize(env, a) for a in t.args)
        fp = env.fixpoints[t.name]
        dec = args[fp.dec_index]
        if isinstance(dec, Con):
            branch = _branch_for(fp, dec.name)
            mapping = {p[0]: a for i, (p, a) in enumerate(zip(fp.params, args))
                       if i != fp.dec_index}
            mapping.update(dict(zip(branch.binders, dec.args)))
            return normalize(env, subst_term(branch.rhs, mapping))
        return App(t.name, args)
    raise TypeError(f"not a term: {t!r}")


def _branch_for(fp, con_name):
    for b in fp.branches:
        if b.con == con_name:
            return b
    raise KeyError(con_name)


def normalize_formula(env: Environment, f):
    """Normalize every term inside a formula, including under binders."""
    if isinstance(f, Eq):
        return Eq(normalize(env, f.lhs), normalize(env, f.rhs), f.ty)
    if isinstance(f, Pred):
        return Pred(f.name, tuple(normalize(env, a) for a in f.args))
    if isinstance(f, Implies):
        return Implies(normalize_formula(env, f.antecedent),
                       normalize_formula(env, f.consequent))
    if isinstance(f, Forall):
        return Forall(f.var, f.ty, normalize_formula(env, f.body))
    raise TypeError(f"not a formula: {f!r}")


def _is_redex(env, t):
    if not isinstance(t, App):
        return False
    fp = env.fixpoints[t.name]
    return isinstance(t.args[fp.dec_index], Con)


def find_redex(env: Environment, x, path=()):
    """Pre-order position of the first reducible redex, or None."""
    if _is_redex(env, x):
        return path
    if isinstance(x, (Con, App, Eq, Pred, Implies, Forall)):
        for i, child in enumerate(node_children(x)):
            found = find_redex(env, child, path + (i,))
            if found is not None:
                return found
    return None


def reduce_step(env: Environment, formula, path):
    """One unfolding at `path`; returns (new_formula, fix, con, inst).

    `inst` instantiates the binders of `fixpoint_equation(env, fix, con)`,
    so each step is exactly one rewrite with a defining equation.
    """
    from .terms import subtree_at

    t = subtree_at(formula, path)
    fp = env.fixpoints[t.name]
    dec = t.args[fp.dec_index]
    branch = _branch_for(fp, dec.name)
    mapping = {p[0]: a for i, (p, a) in enumerate(zip(fp.params, t.args))
               if i != fp.dec_index}
    mapping.update(dict(zip(branch.binders, dec.args)))
    new_term = subst_term(branch.rhs, mapping)
    return replace_at(formula, path, new_term), t.name, dec.name, mapping


def normalize_formula_steps(env: Environment, formula):
    """Normal form plus the step trace (path, fix, con, inst) per unfold."""
    steps = []
    current = formula
    while True:
        path = find_redex(env, current)
        if path is None:
            return current, steps
        new, fix, con, inst = reduce_step(env, current, path)
        steps.append((path, fix, con, inst, current))
        current = new
