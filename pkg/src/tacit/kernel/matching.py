"""First-order matching of terms and formulas.

A pattern variable is a Var whose name is not fixed, or a Hole (`_`
anonymous, `?x` named and non-linear). Matching is purely syntactic and
one-sided: only the pattern contains variables to solve for.
"""

from __future__ import annotations

from .terms import App, Con, Eq, Forall, Hole, Implies, Pred, Var


def match_first_order(pattern, subject, fixed_vars=frozenset()):
    """Substitution over the pattern's variables, or None.

    Variables listed in `fixed_vars` match only themselves. Named holes
    bind under their own name; anonymous holes match anything.
    """
    subst: dict = {}
    if _match(pattern, subject, fixed_vars, subst):
        return subst
    return None


def _match(p, s, fixed, subst) -> bool:
    if isinstance(p, Hole):
        if p.name is None:
            return True
        if p.name in subst:
            return subst[p.name] == s
        subst[p.name] = s
        return True
    if isinstance(p, Var):
        if p.name in fixed:
            return isinstance(s, Var) and s.name == p.name
        if p.name in subst:
            return subst[p.name] == s
        subst[p.name] = s
        return True
    if isinstance(p, (Con, App)):
        return (type(p) is type(s) and p.name == s.name
                and len(p.args) == len(s.args)
                and all(_match(a, b, fixed, subst)
                        for a, b in zip(p.args, s.args)))
    if isinstance(p, Eq):
        return (isinstance(s, Eq)
                and (p.ty == "" or p.ty == s.ty)
                and _match(p.lhs, s.lhs, fixed, subst)
                and _match(p.rhs, s.rhs, fixed, subst))
    if isinstance(p, Pred):
        return (isinstance(s, Pred) and p.name == s.name
                and len(p.args) == len(s.args)
                and all(_match(a, b, fixed, subst)
                        for a, b in zip(p.args, s.args)))
    if isinstance(p, Implies):
        return (isinstance(s, Implies)
                and _match(p.antecedent, s.antecedent, fixed, subst)
                and _match(p.consequent, s.consequent, fixed, subst))
    if isinstance(p, Forall):
        # binder names are significant; the bound name becomes rigid inside
        return (isinstance(s, Forall) and p.var == s.var
                and (p.ty == "" or p.ty == s.ty)
                and _match(p.body, s.body, fixed | {p.var}, subst))
    raise TypeError(f"cannot match {p!r}")
