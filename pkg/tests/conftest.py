import shutil
from pathlib import Path

import pytest

from tacit.document import compile_file, execute_command, new_session, split_commands
from tacit.kernel import (App, Con, ConstructorDecl, Environment, FixpointFn,
                          InductivePredicate, InductiveType, MatchBranch, Pred,
                          PredicateRule, Var, declare, declare_tactic,
                          set_notation)
from tacit.search import SearchBudget

REPO = Path(__file__).resolve().parent.parent
FIXTURES = REPO / "fixtures"


@pytest.fixture(scope="session")
def corpus(tmp_path_factory):
    """Fixture sources plus compiled units in a scratch corpus root."""
    root = tmp_path_factory.mktemp("corpus")
    for name in ("prelude.tac", "lists.tac", "arith.tac"):
        shutil.copy(FIXTURES / name, root / name)
    for name in ("prelude", "lists", "arith"):
        compile_file(str(root / f"{name}.tac"), str(root / f"{name}.tco"),
                     corpus_root=str(root))
    return root


def run_script(session, text, stop_before=None):
    """Execute commands of a script; optionally stop before a prefix match."""
    for cmd, _, _ in split_commands(text):
        if stop_before is not None and cmd.startswith(stop_before):
            break
        session = execute_command(session, cmd).session
    return session


@pytest.fixture(scope="session")
def lists_source():
    return (FIXTURES / "lists.tac").read_text()


@pytest.fixture(scope="session")
def session_after_concat_nil_r(corpus, lists_source):
    """Fixture session learned through concat_nil_r's manual proof."""
    session = new_session(corpus_root=str(corpus),
                          budget=SearchBudget(seconds=None))
    return run_script(session, lists_source, stop_before="Lemma concat_assoc")


@pytest.fixture(scope="session")
def session_before_dec2(corpus, lists_source):
    """Everything before dec2: both concat lemmas, sublist, ex1, ex2."""
    session = new_session(corpus_root=str(corpus),
                          budget=SearchBudget(seconds=None))
    return run_script(session, lists_source, stop_before="Lemma dec2")


def make_list_env() -> Environment:
    """nat + list + concat + sublist + solve_sublist, built via the kernel."""
    from tacit.engine import parse_tactic

    env = Environment()
    env = declare(env, InductiveType("nat", (ConstructorDecl("O"),
                                             ConstructorDecl("S", ("nat",)))))
    env = declare(env, InductiveType("list", (ConstructorDecl("nil"),
                                              ConstructorDecl("cons", ("nat", "list")))))
    env = set_notation(env, "[]", "nil")
    env = set_notation(env, "::", "cons")
    env = declare(env, FixpointFn(
        "concat", (("ls1", "list"), ("ls2", "list")), 0, "list",
        (MatchBranch("nil", (), Var("ls2")),
         MatchBranch("cons", ("x", "ls1p"),
                     Con("cons", (Var("x"), App("concat", (Var("ls1p"), Var("ls2")))))))))
    env = set_notation(env, "++", "concat")
    env = declare(env, InductivePredicate("sublist", ("list", "list"), (
        PredicateRule("sl_nil", (), (), Pred("sublist", (Con("nil"), Con("nil")))),
        PredicateRule("sl_cons1", (("ls1", "list"), ("ls2", "list"), ("n", "nat")),
                      (Pred("sublist", (Var("ls1"), Var("ls2"))),),
                      Pred("sublist", (Var("ls1"), Con("cons", (Var("n"), Var("ls2")))))),
        PredicateRule("sl_cons2", (("ls1", "list"), ("ls2", "list"), ("n", "nat")),
                      (Pred("sublist", (Var("ls1"), Var("ls2"))),),
                      Pred("sublist", (Con("cons", (Var("n"), Var("ls1"))),
                                       Con("cons", (Var("n"), Var("ls2")))))),
    )))
    body = parse_tactic(
        "solve [match goal with"
        " | |- sublist [] [] => apply sl_nil"
        " | |- sublist (_ :: _) [] => fail"
        " | |- sublist _ _ => (apply sl_cons1 + apply sl_cons2); solve_sublist"
        " | |- _ => solve [auto] end]", env)
    return declare_tactic(env, "solve_sublist", body)


@pytest.fixture(scope="session")
def list_env():
    return make_list_env()


def num(n: int):
    t = Con("O")
    for _ in range(n):
        t = Con("S", (t,))
    return t


def natlist(*xs: int):
    t = Con("nil")
    for x in reversed(xs):
        t = Con("cons", (num(x), t))
    return t


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
