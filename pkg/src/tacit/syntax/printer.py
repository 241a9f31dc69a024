"""Display of terms and formulas, honoring the active notations.

Printing is deterministic; the environment decides whether [], ::, ++
and decimal numerals are used. The printed forms feed the UI, the
suggestion lists and the learner's tactic keys, so stability matters.
"""

from __future__ import annotations

from ..kernel.decls import Environment
from ..kernel.terms import App, Con, Eq, Forall, Hole, Implies, Pred, Var

# term levels: 1 infix (:: ++), 2 application, 3 atom
# formula levels: 0 forall, 1 implication, 2 eq/pred


def _numeral(env: Environment | None, t) -> str | None:
    if env is None or "nat" not in env.types:
        return None
    count = 0
    while isinstance(t, Con) and t.name == "S" and len(t.args) == 1 \
            and env.constructor_owner.get("S") == "nat":
        count += 1
        t = t.args[0]
    if isinstance(t, Con) and t.name == "O" and not t.args \
            and env.constructor_owner.get("O") == "nat":
        return str(count)
    return None


def print_term(env: Environment | None, t, level: int = 1) -> str:
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Hole):
        return "_" if t.name is None else f"?{t.name}"
    noted = env.notations if env is not None else None
    if isinstance(t, Con):
        num = _numeral(env, t)
        if num is not None:
            return num
        if noted and t.name == noted.nil_con and not t.args:
            return "[]"
        if noted and t.name == noted.cons_con and len(t.args) == 2:
            s = f"{print_term(env, t.args[0], 2)} :: {print_term(env, t.args[1], 1)}"
            return f"({s})" if level > 1 else s
    if isinstance(t, App) and noted and t.name == noted.append_fn and len(t.args) == 2:
        s = f"{print_term(env, t.args[0], 2)} ++ {print_term(env, t.args[1], 1)}"
        return f"({s})" if level > 1 else s
    if isinstance(t, (Con, App)):
        if not t.args:
            return t.name
        s = t.name + " " + " ".join(print_term(env, a, 3) for a in t.args)
        return f"({s})" if level > 2 else s
    raise TypeError(f"not a term: {t!r}")


def print_formula(env: Environment | None, f, level: int = 0) -> str:
    if isinstance(f, Hole):
        return "_" if f.name is None else f"?{f.name}"
    if isinstance(f, Eq):
        s = f"{print_term(env, f.lhs, 1)} = {print_term(env, f.rhs, 1)}"
        return s  # equations need no parens below implication arrows
    if isinstance(f, Pred):
        s = f.name if not f.args else \
            f.name + " " + " ".join(print_term(env, a, 3) for a in f.args)
        return s
    if isinstance(f, Implies):
        a = print_formula(env, f.antecedent, 2)
        if isinstance(f.antecedent, (Implies, Forall)):
            a = f"({a})"
        s = f"{a} -> {print_formula(env, f.consequent, 1)}"
        return f"({s})" if level > 1 else s
    if isinstance(f, Forall):
        binders = []
        body = f
        while isinstance(body, Forall):
            binders.append(body.var)
            body = body.body
        s = f"forall {' '.join(binders)}, {print_formula(env, body, 0)}"
        return f"({s})" if level > 0 else s
    raise TypeError(f"not a formula: {f!r}")


def print_hypothesis(env: Environment | None, name: str, item) -> str:
    from ..kernel.derivation import TypeHyp

    if isinstance(item, TypeHyp):
        return f"{name} : {item.ty}"
    return f"{name} : {print_formula(env, item.formula)}"


def print_judgment(env: Environment | None, j) -> str:
    lines = [print_hypothesis(env, h, item) for h, item in j.hyps]
    lines.append("=" * 28)
    lines.append(print_formula(env, j.goal))
    return "\n".join(lines)
