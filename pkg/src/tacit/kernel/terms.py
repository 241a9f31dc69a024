"""First-order terms and formulas.

Terms are binder-free: variables, constructor applications and function
(fixpoint) applications. Formulas are equations, inductive-predicate
applications, implications and universal quantification over object terms.
Everything is an immutable value; structural equality doubles as
alpha-insensitive equality only for quantifier-free formulas (binder names
are significant, which is all the engine needs).
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..errors import IllTyped

# Identifiers: ASCII letters, digits, _ and ', plus Unicode subscript
# digits so the source scripts can use names like ls1 or sl_cons1.
_SUBSCRIPTS = "₀₁₂₃₄₅₆₇₈₉"
NAME_RE = re.compile(rf"[A-Za-z_][A-Za-z0-9_'{_SUBSCRIPTS}]*\Z")


def check_name(text: str) -> str:
    if not isinstance(text, str) or not NAME_RE.match(text):
        raise IllTyped(f"invalid identifier: {text!r}")
    return text


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Con:
    """Constructor application."""

    name: str
    args: tuple = ()


@dataclass(frozen=True)
class App:
    """Fixpoint-function application."""

    name: str
    args: tuple = ()


@dataclass(frozen=True)
class Hole:
    """Pattern wildcard: `_` (anonymous) or `?x` (named, non-linear)."""

    name: str | None = None


Term = Var | Con | App


@dataclass(frozen=True)
class Eq:
    lhs: object
    rhs: object
    ty: str  # "" in patterns means: match any equation type


@dataclass(frozen=True)
class Pred:
    name: str
    args: tuple = ()


@dataclass(frozen=True)
class Implies:
    antecedent: object
    consequent: object


@dataclass(frozen=True)
class Forall:
    var: str
    ty: str
    body: object


Formula = Eq | Pred | Implies | Forall


def is_term(x) -> bool:
    return isinstance(x, (Var, Con, App))


def is_formula(x) -> bool:
    return isinstance(x, (Eq, Pred, Implies, Forall))


def term_free_vars(t, acc=None) -> set:
    if acc is None:
        acc = set()
    if isinstance(t, Var):
        acc.add(t.name)
    elif isinstance(t, (Con, App)):
        for a in t.args:
            term_free_vars(a, acc)
    return acc


def formula_free_vars(f) -> set:
    if isinstance(f, Eq):
        return term_free_vars(f.lhs) | term_free_vars(f.rhs)
    if isinstance(f, Pred):
        out = set()
        for a in f.args:
            term_free_vars(a, out)
        return out
    if isinstance(f, Implies):
        return formula_free_vars(f.antecedent) | formula_free_vars(f.consequent)
    if isinstance(f, Forall):
        return formula_free_vars(f.body) - {f.var}
    raise TypeError(f"not a formula: {f!r}")


def all_names(x, acc=None) -> set:
    """Every identifier occurring anywhere (free, bound, heads)."""
    if acc is None:
        acc = set()
    if isinstance(x, Var):
        acc.add(x.name)
    elif isinstance(x, (Con, App)):
        acc.add(x.name)
        for a in x.args:
            all_names(a, acc)
    elif isinstance(x, Eq):
        all_names(x.lhs, acc)
        all_names(x.rhs, acc)
    elif isinstance(x, Pred):
        acc.add(x.name)
        for a in x.args:
            all_names(a, acc)
    elif isinstance(x, Implies):
        all_names(x.antecedent, acc)
        all_names(x.consequent, acc)
    elif isinstance(x, Forall):
        acc.add(x.var)
        all_names(x.body, acc)
    return acc


def subst_term(t, mapping: dict):
    if isinstance(t, Var):
        return mapping.get(t.name, t)
    if isinstance(t, Con):
        return Con(t.name, tuple(subst_term(a, mapping) for a in t.args))
    if isinstance(t, App):
        return App(t.name, tuple(subst_term(a, mapping) for a in t.args))
    if isinstance(t, Hole):
        return t
    raise TypeError(f"not a term: {t!r}")


def subst_formula(f, mapping: dict):
    """Simultaneous substitution of free variables; capture is rejected."""
    if not mapping:
        return f
    if isinstance(f, Eq):
        return Eq(subst_term(f.lhs, mapping), subst_term(f.rhs, mapping), f.ty)
    if isinstance(f, Pred):
        return Pred(f.name, tuple(subst_term(a, mapping) for a in f.args))
    if isinstance(f, Implies):
        return Implies(subst_formula(f.antecedent, mapping),
                       subst_formula(f.consequent, mapping))
    if isinstance(f, Forall):
        inner = {k: v for k, v in mapping.items() if k != f.var}
        for v in inner.values():
            if f.var in term_free_vars(v):
                raise IllTyped(f"substitution would capture bound {f.var}")
        return Forall(f.var, f.ty, subst_formula(f.body, inner))
    raise TypeError(f"not a formula: {f!r}")


# Tree paths address subformulas/subterms by child index:
#   Eq: 0 lhs, 1 rhs; Pred/Con/App: argument index; Implies: 0, 1;
#   Forall: 0 body. A path used for rewriting ends at a term node.

def node_children(x):
    if isinstance(x, Eq):
        return (x.lhs, x.rhs)
    if isinstance(x, (Pred, Con, App)):
        return x.args
    if isinstance(x, Implies):
        return (x.antecedent, x.consequent)
    if isinstance(x, Forall):
        return (x.body,)
    if isinstance(x, (Var, Hole)):
        return ()
    raise TypeError(f"no children: {x!r}")


def subtree_at(x, path):
    for i in path:
        kids = node_children(x)
        if i < 0 or i >= len(kids):
            return None
        x = kids[i]
    return x


def replace_at(x, path, new):
    if not path:
        return new
    i, rest = path[0], path[1:]
    kids = node_children(x)
    if i < 0 or i >= len(kids):
        raise IllTyped(f"bad path {path} into {x!r}")
    repl = replace_at(kids[i], rest, new)
    if isinstance(x, Eq):
        return Eq(repl if i == 0 else x.lhs, repl if i == 1 else x.rhs, x.ty)
    if isinstance(x, Pred):
        return Pred(x.name, x.args[:i] + (repl,) + x.args[i + 1:])
    if isinstance(x, (Con, App)):
        return type(x)(x.name, x.args[:i] + (repl,) + x.args[i + 1:])
    if isinstance(x, Implies):
        return Implies(repl if i == 0 else x.antecedent,
                       repl if i == 1 else x.consequent)
    if isinstance(x, Forall):
        return Forall(x.var, x.ty, repl)
    raise TypeError(f"cannot replace in: {x!r}")


def binders_along(x, path):
    """(var, ty) pairs of the Forall nodes traversed by `path`."""
    out = []
    for i in path:
        if isinstance(x, Forall):
            out.append((x.var, x.ty))
        x = node_children(x)[i]
    return out
