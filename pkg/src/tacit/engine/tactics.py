"""Tactic expressions and their canonical printed form.

The grammar, bit for bit: `;` sequences (left-associative, loosest),
`+` alternation (binds tighter than `;`), `solve [ t ]`, `repeat t`,
`match goal with | |- pattern => t | ... end`, parentheses, and the
atomic tactics in proof-script surface syntax. A bare identifier calls
a named tactic definition. parse(print(t)) == t for every well-formed
expression.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..kernel.decls import Environment
from ..syntax.printer import print_formula


@dataclass(frozen=True)
class Intro:
    name: str | None = None


@dataclass(frozen=True)
class Intros:
    pass


@dataclass(frozen=True)
class Apply:
    ref: str


@dataclass(frozen=True)
class Rewrite:
    ref: str
    reverse: bool = False


@dataclass(frozen=True)
class Reflexivity:
    pass


@dataclass(frozen=True)
class Symmetry:
    pass


@dataclass(frozen=True)
class Assumption:
    pass


@dataclass(frozen=True)
class FEqual:
    pass


@dataclass(frozen=True)
class Simpl:
    pass


@dataclass(frozen=True)
class Induction:
    var: str


@dataclass(frozen=True)
class Destruct:
    var: str


@dataclass(frozen=True)
class Auto:
    pass


@dataclass(frozen=True)
class Fail:
    pass


@dataclass(frozen=True)
class Exact:
    ref: str


@dataclass(frozen=True)
class Seq:
    first: object
    second: object


@dataclass(frozen=True)
class Alt:
    left: object
    right: object


@dataclass(frozen=True)
class Solve:
    inner: object


@dataclass(frozen=True)
class Repeat:
    inner: object


@dataclass(frozen=True)
class Call:
    name: str


@dataclass(frozen=True)
class MatchGoal:
    arms: tuple  # of (goal pattern Formula|Hole, body TacticExpr)


@dataclass(frozen=True)
class SearchFailing:
    """Reconstruction cache; executable only as a document command."""

    cache: tuple  # of TacticExpr


TacticExpr = object

# printing levels: 0 seq, 1 alt, 2 atom
_ATOMIC_WORDS = {
    Intros: "intros", Reflexivity: "reflexivity", Symmetry: "symmetry",
    Assumption: "assumption", FEqual: "f_equal", Simpl: "simpl",
    Auto: "auto", Fail: "fail",
}


def print_tactic(t, env: Environment | None = None, level: int = 0) -> str:
    kind = type(t)
    if kind in _ATOMIC_WORDS:
        return _ATOMIC_WORDS[kind]
    if isinstance(t, Intro):
        return f"intro {t.name}" if t.name else "intro"
    if isinstance(t, Apply):
        return f"apply {t.ref}"
    if isinstance(t, Rewrite):
        return f"rewrite <- {t.ref}" if t.reverse else f"rewrite {t.ref}"
    if isinstance(t, Induction):
        return f"induction {t.var}"
    if isinstance(t, Destruct):
        return f"destruct {t.var}"
    if isinstance(t, Exact):
        return f"exact {t.ref}"
    if isinstance(t, Call):
        return t.name
    if isinstance(t, Seq):
        s = f"{print_tactic(t.first, env, 0)}; {print_tactic(t.second, env, 1)}"
        return f"({s})" if level > 0 else s
    if isinstance(t, Alt):
        s = f"{print_tactic(t.left, env, 1)} + {print_tactic(t.right, env, 2)}"
        return f"({s})" if level > 1 else s
    if isinstance(t, Solve):
        return f"solve [{print_tactic(t.inner, env, 0)}]"
    if isinstance(t, Repeat):
        return f"repeat {print_tactic(t.inner, env, 2)}"
    if isinstance(t, MatchGoal):
        arms = " ".join(
            f"| |- {print_formula(env, pat)} => {print_tactic(body, env, 0)}"
            for pat, body in t.arms)
        return f"match goal with {arms} end"
    if isinstance(t, SearchFailing):
        inner = "; ".join(print_tactic(x, env, 1) for x in t.cache)
        return f"search failing ({inner})"
    raise TypeError(f"not a tactic: {t!r}")


def seq_list(tactics) -> object:
    """Left-associated `;` chain of a nonempty tactic list."""
    it = iter(tactics)
    out = next(it)
    for t in it:
        out = Seq(out, t)
    return out


def flatten_seq(t) -> list:
    if isinstance(t, Seq):
        return flatten_seq(t.first) + flatten_seq(t.second)
    return [t]


def references(t) -> list[str]:
    """Hypothesis-or-lemma reference positions, left to right.

    These are the positions eligible for local-variable substitution:
    apply/rewrite/exact references and induction/destruct variables.
    """
    if isinstance(t, (Apply, Rewrite, Exact)):
        return [t.ref]
    if isinstance(t, Induction):
        return [t.var]
    if isinstance(t, Destruct):
        return [t.var]
    if isinstance(t, Seq):
        return references(t.first) + references(t.second)
    if isinstance(t, Alt):
        return references(t.left) + references(t.right)
    if isinstance(t, (Solve, Repeat)):
        return references(t.inner)
    if isinstance(t, MatchGoal):
        out = []
        for _, body in t.arms:
            out.extend(references(body))
        return out
    if isinstance(t, SearchFailing):
        out = []
        for x in t.cache:
            out.extend(references(x))
        return out
    return []


def rename_references(t, mapping: dict):
    """Rename reference occurrences; structure is otherwise preserved."""
    if isinstance(t, Apply):
        return Apply(mapping.get(t.ref, t.ref))
    if isinstance(t, Rewrite):
        return Rewrite(mapping.get(t.ref, t.ref), t.reverse)
    if isinstance(t, Exact):
        return Exact(mapping.get(t.ref, t.ref))
    if isinstance(t, Induction):
        return Induction(mapping.get(t.var, t.var))
    if isinstance(t, Destruct):
        return Destruct(mapping.get(t.var, t.var))
    if isinstance(t, Seq):
        return Seq(rename_references(t.first, mapping),
                   rename_references(t.second, mapping))
    if isinstance(t, Alt):
        return Alt(rename_references(t.left, mapping),
                   rename_references(t.right, mapping))
    if isinstance(t, Solve):
        return Solve(rename_references(t.inner, mapping))
    if isinstance(t, Repeat):
        return Repeat(rename_references(t.inner, mapping))
    if isinstance(t, MatchGoal):
        return MatchGoal(tuple((p, rename_references(b, mapping))
                               for p, b in t.arms))
    if isinstance(t, SearchFailing):
        return SearchFailing(tuple(rename_references(x, mapping) for x in t.cache))
    return t
