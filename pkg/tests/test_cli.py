import json

import pytest
from click.testing import CliRunner

from treelaw.cli import main


@pytest.fixture
def run():
    runner = CliRunner()

    def invoke(*args, env=None):
        return runner.invoke(main, [str(a) for a in args], env=env)

    return invoke


def test_demo_kappa_exits_one_with_both_sides(run):
    res = run("demo-kappa", "--json")
    assert res.exit_code == 1
    data = json.loads(res.output)
    assert data["left"] == ["a(c,c)", "a(d,d)", "b(c,c)", "b(d,d)"]
    assert len(data["right"]) == 8 and not data["equal"]


def test_laws_pass_for_linear_trees(run):
    res = run("laws", "--monad", "T", "--samples", "20", "--seed", "1")
    assert res.exit_code == 0, res.output
    assert "dist.mult: 20/20 pass" in res.output


def test_laws_fail_for_non_linear_trees_with_witness(run):
    res = run("laws", "--monad", "Tx", "--samples", "5")
    assert res.exit_code == 1
    assert "FAIL dist.mult #0" in res.output


def test_laws_json_lines_are_deterministic(run):
    a = run("laws", "--monad", "U", "--samples", "10", "--seed", "7", "--json").output
    b = run("laws", "--monad", "U", "--samples", "10", "--seed", "7", "--json").output
    assert a == b
    assert all(json.loads(line)["pass"] for line in a.splitlines())


def test_laws_usage_errors(run):
    assert run("laws").exit_code == 2
    assert run("laws", "--monad", "Q").exit_code == 2
    assert run("laws", "--monad", "T", "--suite", "sel").exit_code == 2


def test_subst_io_and_oi(run, fixtures):
    io = json.loads(run("subst", "io", fixtures / "subst" / "z1z0.json", "--json").output)
    oi = json.loads(run("subst", "oi", fixtures / "subst" / "z1z0.json", "--json").output)
    assert len(io["images"]) == 2 and len(oi["images"]) == 4


@pytest.mark.parametrize("name", ["cd", "infeasible", "dup"])
def test_subst_solve_fixtures(run, fixtures, name):
    path = fixtures / "subst" / f"solver_{name}.json"
    res = run("subst", "solve", path, "--json")
    assert res.exit_code == 0
    assert json.loads(res.output) == json.loads(path.read_text())["expected"]


def test_sort_error_reports_file_and_line(run, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{\n "substitution": {\n  "z1": {"sort": ["x0"], "trees": ["a(x0,x1)"]}\n },\n "tree": "z1(c)"\n}\n')
    res = run("subst", "io", bad)
    assert res.exit_code == 2
    assert f"{bad}:3:" in res.output


def test_malformed_json_is_an_input_error(run, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{\n  \"tree\": \n")
    res = run("pihat", bad)
    assert res.exit_code == 2 and f"{bad}:3" in res.output


def test_dist_and_pihat(run, tmp_path):
    d = tmp_path / "d.json"
    d.write_text(json.dumps({"poset": {"elements": {"c": 0, "d": 0}, "order": [["c", "d"]]},
                             "tree": "a({c,d},{d})"}))
    assert json.loads(run("dist", d, "--json").output) == {"mins": ["a(c,d)"]}
    p = tmp_path / "p.json"
    p.write_text(json.dumps({"tree": "{a(x0,x0),b(x0,x0)}({c,d})"}))
    assert len(json.loads(run("pihat", p, "--json").output)["trees"]) == 8


def test_regex_member_verdicts(run, fixtures):
    E, R = fixtures / "regex" / "E.json", fixtures / "regex" / "R.json"
    res = run("regex", "member", E, fixtures / "trees" / "a_loop.json")
    assert res.exit_code == 0 and res.output.strip() == "true"
    res = run("regex", "member", R, "b(c,c)")
    assert res.exit_code == 0 and res.output.strip() == "false"
    assert run("regex", "member", R, "b(c,c)", "--exit-verdict").exit_code == 1


def test_regex_compile_writes_automaton(run, fixtures, tmp_path):
    out = tmp_path / "E.aut.json"
    res = run("regex", "compile", fixtures / "regex" / "E.json", "-o", out)
    assert res.exit_code == 0
    assert json.loads(out.read_text())["states"]
    assert json.loads(res.output)["size"]["states"] == len(json.loads(out.read_text())["states"])


def test_regex_from_automaton_prints_stats(run, fixtures):
    res = run("regex", "from-automaton", fixtures / "automata" / "infbranch.json")
    assert res.exit_code == 0
    data = json.loads(res.output)
    assert data["stats"]["dagNodes"] > 0 and "regex" in data


def test_emptiness(run, fixtures):
    res = run("regex", "empty", fixtures / "automata" / "none.json")
    assert res.exit_code == 0 and res.output.strip() == "true"
    res = run("auto", "empty", fixtures / "automata" / "contains_a.json", "--json")
    data = json.loads(res.output)
    assert data["verdict"] is False and "a" in data["witness"]
    assert run("regex", "empty", fixtures / "regex" / "E.json", "--exit-verdict").exit_code == 1


def test_auto_member_bad_term(run, fixtures):
    assert run("auto", "member", fixtures / "automata" / "contains_a.json", "a(c").exit_code == 2


def test_size_cap_from_environment(run, tmp_path):
    p = tmp_path / "p.json"
    p.write_text(json.dumps({"tree": "{a(x0,x0),b(x0,x0)}({c,d})"}))
    res = run("pihat", p, env={"TREELAW_SIZE_CAP": "3"})
    assert res.exit_code == 2 and "error" in res.output
    assert run("pihat", p, env={"TREELAW_SIZE_CAP": "nonsense"}).exit_code == 2
