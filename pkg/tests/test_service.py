"""Service: CLI entry points, bench harness, HTTP session API."""

import json
import time

import pytest
from click.testing import CliRunner
from fastapi.testclient import TestClient

from conftest import FIXTURES
from tacit.search import SearchBudget
from tacit.service.bench import bench_file, report_csv, report_json
from tacit.service.cli import main as cli_main
from tacit.service.server import create_app


@pytest.fixture()
def client(corpus):
    app = create_app(str(corpus), budget=SearchBudget(seconds=None))
    return TestClient(app)


def test_cli_compile_deterministic(tmp_path, corpus):
    import shutil
    for f in corpus.iterdir():
        if f.suffix == ".tac":
            shutil.copy(f, tmp_path / f.name)
    runner = CliRunner()
    out1 = tmp_path / "p1.tco"
    assert runner.invoke(cli_main, ["compile", str(tmp_path / "prelude.tac"),
                                    "-o", str(out1)]).exit_code == 0
    # lists requires prelude.tco under its own name
    (tmp_path / "prelude.tco").write_bytes(out1.read_bytes())
    r1 = runner.invoke(cli_main, ["compile", str(tmp_path / "lists.tac"),
                                  "-o", str(tmp_path / "l1.tco")])
    r2 = runner.invoke(cli_main, ["compile", str(tmp_path / "lists.tac"),
                                  "-o", str(tmp_path / "l2.tco")])
    assert r1.exit_code == 0 and r2.exit_code == 0
    assert (tmp_path / "l1.tco").read_bytes() == (tmp_path / "l2.tco").read_bytes()


def test_cli_check_reports_errors(tmp_path):
    bad = tmp_path / "bad.tac"
    bad.write_text("Inductive t := | c : missing -> t.\n")
    result = CliRunner().invoke(cli_main, ["check", str(bad)])
    assert result.exit_code == 1
    assert "error" in result.output


def test_bench_rows_shape_and_reports(corpus, tmp_path):
    report = bench_file(str(corpus / "lists.tac"), corpus_root=str(corpus),
                        budget=SearchBudget(nodes=2000, seconds=None))
    assert report.lemmas == 5
    rows = {r.lemma: r for r in report.rows}
    # the first lemma has an empty preceding database
    assert not rows["concat_nil_r"].found
    assert rows["concat_nil_r"].expansions <= 1
    assert rows["concat_assoc"].found
    assert rows["dec2"].found
    payload = json.loads(report_json(report))
    assert payload[-1]["success_fraction"] == report.fraction
    csv_text = report_csv(report)
    assert csv_text.splitlines()[0] == "lemma,found,expansions,elapsed,trace,proof_len"
    assert len(csv_text.splitlines()) == 6


def test_bench_whole_file_flag(corpus):
    report = bench_file(str(corpus / "lists.tac"), corpus_root=str(corpus),
                        budget=SearchBudget(nodes=2000, seconds=None),
                        whole_file=True)
    rows = {r.lemma: r for r in report.rows}
    # with the whole file as database even the first lemma is reachable
    assert rows["concat_nil_r"].found


def test_http_session_lifecycle(client):
    r = client.post("/sessions", json={})
    sid = r.json()["id"]
    r = client.post(f"/sessions/{sid}/command", json={"text": "Require lists."})
    assert r.status_code == 200 and r.json()["ok"]
    r = client.get(f"/sessions/{sid}/state")
    body = r.json()
    assert body["position"] == 1 and body["records"] == 22
    assert client.get("/sessions/nope/state").status_code == 404
    assert client.delete(f"/sessions/{sid}").status_code == 200
    assert client.get(f"/sessions/{sid}/state").status_code == 404


def test_http_error_codes(client):
    sid = client.post("/sessions", json={}).json()["id"]
    r = client.post(f"/sessions/{sid}/command", json={"text": "Lemma ( x."})
    assert r.status_code == 400
    r = client.post(f"/sessions/{sid}/command", json={"text": "intros."})
    assert r.status_code == 409
    r = client.post(f"/sessions/{sid}/undo", json={"k": 5})
    assert r.status_code == 409
    r = client.post(f"/sessions/{sid}/undo", json={"k": 0})
    assert r.json()["position"] == 0


def test_http_suggest_and_proof_state(client, lists_source):
    sid = client.post("/sessions", json={}).json()["id"]
    for cmd in ["Require lists.",
                "Lemma t : ∀ ls, (ls ++ []) ++ [] = ls.", "Proof."]:
        assert client.post(f"/sessions/{sid}/command",
                           json={"text": cmd}).status_code == 200
    empty_db_like = client.get(f"/sessions/{sid}/suggest").json()
    assert empty_db_like["suggestions"][0]["tactic"] == "intros"
    r = client.post(f"/sessions/{sid}/command", json={"text": "intros."})
    body = r.json()
    assert body["display"]["hyps"] == ["ls : list"]
    assert body["proof_state"]["hyps"][0][0] == "ls"


def test_http_suggest_empty_on_fresh_session(client):
    sid = client.post("/sessions", json={}).json()["id"]
    for cmd in ["Require prelude.",
                "Lemma t : forall (n : nat), n = n.", "Proof."]:
        client.post(f"/sessions/{sid}/command", json={"text": cmd})
    assert client.get(f"/sessions/{sid}/suggest").json() == {"suggestions": []}


def test_http_search_job_flow(client):
    sid = client.post("/sessions", json={}).json()["id"]
    for cmd in ["Require lists.",
                "Lemma t : ∀ ls, (ls ++ []) ++ [] = ls.", "Proof."]:
        client.post(f"/sessions/{sid}/command", json={"text": cmd})
    job = client.post(f"/sessions/{sid}/search", json={"nodes": 4000}).json()["job"]
    for _ in range(200):
        body = client.get(f"/sessions/{sid}/search/{job}").json()
        if body["status"] != "running":
            break
        time.sleep(0.02)
    assert body["status"] == "found"
    assert body["reconstruction"].startswith("search failing (")
    assert body["trace"].startswith(".")
    assert client.get(f"/sessions/{sid}/search/zzz").status_code == 404
    # the job ran on a snapshot: the session itself is unchanged
    assert client.get(f"/sessions/{sid}/state").json()["position"] == 3


def test_http_search_command_records(client):
    sid = client.post("/sessions", json={}).json()["id"]
    for cmd in ["Require lists.",
                "Lemma t : ∀ ls, (ls ++ []) ++ [] = ls.", "Proof."]:
        client.post(f"/sessions/{sid}/command", json={"text": cmd})
    r = client.post(f"/sessions/{sid}/command", json={"text": "search."})
    assert r.status_code == 200
    assert r.json()["reconstruction"].startswith("search failing (")
    r = client.post(f"/sessions/{sid}/command", json={"text": "Qed."})
    assert r.status_code == 200


def test_http_stepping_digest_equals_compiled(client, corpus, lists_source):
    from tacit.document import canonical_json, parse_unit
    import hashlib

    sid = client.post("/sessions", json={}).json()["id"]
    from tacit.document import split_commands
    for cmd, _, _ in split_commands(lists_source):
        r = client.post(f"/sessions/{sid}/command", json={"text": cmd})
        assert r.status_code == 200, cmd
    digest = client.get(f"/sessions/{sid}/state").json()["records_digest"]
    unit = parse_unit((corpus / "lists.tco").read_bytes())
    want = hashlib.sha256(canonical_json(list(unit.records))).hexdigest()
    assert digest == want


def test_session_create_with_file_body(client, lists_source):
    r = client.post("/sessions", json={"file": lists_source})
    sid = r.json()["id"]
    body = client.get(f"/sessions/{sid}/state").json()
    assert body["records"] == 22
    assert "dec2" in body["lemmas"]


def test_http_second_search_conflicts_and_delete_cancels(client):
    sid = client.post("/sessions", json={}).json()["id"]
    for cmd in ["Require lists.",
                "Lemma hard : ∀ ls₁ ls₂ ls₃, (ls₁ ++ ls₂) ++ ls₃ = ls₂ ++ (ls₁ ++ ls₃).",
                "Proof."]:
        assert client.post(f"/sessions/{sid}/command",
                           json={"text": cmd}).status_code == 200
    # a large unprovable-at-budget search keeps the job running long enough
    job = client.post(f"/sessions/{sid}/search",
                      json={"nodes": 2_000_000, "seconds": 30}).json()["job"]
    body = client.get(f"/sessions/{sid}/search/{job}").json()
    assert body["status"] == "running"
    assert client.post(f"/sessions/{sid}/search", json={}).status_code == 409
    assert client.delete(f"/sessions/{sid}").status_code == 200
    assert client.get(f"/sessions/{sid}/search/{job}").status_code == 404


def test_bench_rows_are_prefix_determined(corpus, lists_source):
    """A row equals an independent search from a fresh prefix session."""
    from tacit.document import new_session, execute_command, split_commands
    from tacit.search import search as run_search
    from tacit.engine import Judgment
    from tacit.document.vernacular import parse_command, LemmaCmd

    budget = SearchBudget(nodes=2000, seconds=None)
    report = bench_file(str(corpus / "lists.tac"), corpus_root=str(corpus),
                        budget=budget)
    row = {r.lemma: r for r in report.rows}["concat_assoc"]

    session = new_session(corpus_root=str(corpus), budget=budget)
    statement = None
    for cmd_text, _, _ in split_commands(lists_source):
        cmd = parse_command(cmd_text, session.state.env)
        if isinstance(cmd, LemmaCmd) and cmd.name == "concat_assoc":
            statement = cmd.statement
            break
        session = execute_command(session, cmd_text).session
    outcome = run_search(session.state.env, session.learner,
                         session.state.model, Judgment((), statement), budget)
    assert (outcome.found, outcome.expansions, outcome.trace) == \
        (row.found, row.expansions, row.trace)


def test_cli_bench_writes_reports(tmp_path, corpus):
    import shutil
    for f in corpus.iterdir():
        shutil.copy(f, tmp_path / f.name)
    out = tmp_path / "report.json"
    result = CliRunner().invoke(cli_main, [
        "bench", str(tmp_path / "lists.tac"), "--nodes", "2000",
        "--seconds", "0", "--out", str(out)])
    assert result.exit_code == 0, result.output
    payload = json.loads(out.read_text())
    rows = {r["lemma"]: r for r in payload[:-1]}
    assert rows["concat_assoc"]["found"] is True
    assert (tmp_path / "report.csv").exists()
