import json


from lwaamc.cli import run_cli

HOLDS_ARGS = ["--formula", "G F p", "--gen", "random:seed=1,states=4,props=1,branch=2"]


def run(capsys, *argv):
    code = run_cli(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def stats_of(out: str) -> dict:
    values = {}
    for line in out.splitlines():
        if "=" in line:
            key, _, value = line.partition("=")
            values[key] = value
    return values


class TestVerdictRuns:
    def test_random_model_matches_oracle_rerun(self, capsys):
        code, out, _ = run(capsys, *HOLDS_ARGS)
        assert code in (0, 1)
        oracle_code, oracle_out, _ = run(capsys, *HOLDS_ARGS, "--oracle")
        assert oracle_code == code
        assert "source=oracle" in oracle_out

    def test_dining_deadlock_counterexample(self, capsys):
        code, out, err = run(
            capsys,
            "--formula",
            "(G F hasFork_1 && G F hasFork_2) -> G F eat_1",
            "--gen",
            "dining:n=2,variant=deadlock",
            "--validate-ce",
        )
        assert code == 1
        assert "verdict=violated" in out
        assert "loop:" in out
        assert "counterexample_valid=true" in out
        assert err == ""
        # lasso states are printed as .kts-style lines
        loop_lines = out.split("loop:\n", 1)[1]
        assert loop_lines.startswith("state ")
        assert "{hasFork_1 hasFork_2}" in loop_lines

    def test_holding_run_prints_stats(self, capsys):
        code, out, _ = run(
            capsys, "--formula", "G F eat_1 || true", "--gen", "dining:n=2,variant=fair"
        )
        assert code == 0
        values = stats_of(out)
        assert values["verdict"] == "holds"
        assert int(values["nodes_seen"]) > 0
        assert float(values["elapsed_ms"]) >= 0

    def test_stats_json(self, capsys):
        code, out, _ = run(capsys, *HOLDS_ARGS, "--stats", "json")
        assert code in (0, 1)
        payload = json.loads(out.splitlines()[1])
        assert set(payload) == {
            "nodes_seen",
            "scc_count",
            "max_dfs_depth",
            "max_scc_stack",
            "elapsed_ms",
        }

    def test_stats_none(self, capsys):
        code, out, _ = run(capsys, "--formula", "true", "--gen", "dining:n=2", "--stats", "none")
        assert code == 0
        assert out.strip() == "verdict=holds"


class TestModelSources:
    def test_kts_file(self, capsys, tmp_path):
        model = tmp_path / "alt.kts"
        model.write_text("props p\ninit 0\nstate 0 {p} -> 1\nstate 1 {} -> 0\n")
        code, out, _ = run(capsys, "--formula", "G F p", "--model", str(model))
        assert code == 0

    def test_deadlock_completion_flag(self, capsys, tmp_path):
        model = tmp_path / "dead.kts"
        model.write_text("props p\ninit 0\nstate 0 {p} ->\n")
        code, _, err = run(capsys, "--formula", "G p", "--model", str(model))
        assert code == 2 and "deadlock" in err
        code, _, _ = run(
            capsys, "--formula", "G p", "--model", str(model), "--complete-deadlocks"
        )
        assert code == 0

    def test_model_and_gen_conflict(self, capsys, tmp_path):
        model = tmp_path / "x.kts"
        model.write_text("props p\ninit 0\nstate 0 {p} -> 0\n")
        code, _, _ = run(
            capsys, "--formula", "p", "--model", str(model), "--gen", "dining:n=2"
        )
        assert code == 2

    def test_missing_model_source(self, capsys):
        code, _, err = run(capsys, "--formula", "p")
        assert code == 2
        assert "error:" in err


class TestInputErrors:
    def test_syntax_error(self, capsys):
        code, out, err = run(capsys, "--formula", "p U", "--gen", "dining:n=2")
        assert code == 2
        assert out == ""
        assert "syntax error" in err

    def test_unknown_generator(self, capsys):
        code, _, err = run(capsys, "--formula", "p", "--gen", "towers:n=2")
        assert code == 2 and "unknown generator" in err

    def test_malformed_generator_args(self, capsys):
        code, _, err = run(capsys, "--formula", "p", "--gen", "dining:n=two")
        assert code == 2 and "integer" in err

    def test_missing_generator_key(self, capsys):
        code, _, err = run(capsys, "--formula", "p", "--gen", "random:seed=1")
        assert code == 2 and "states" in err

    def test_unknown_generator_key(self, capsys):
        code, _, err = run(capsys, "--formula", "p", "--gen", "dining:n=2,m=3")
        assert code == 2 and "unknown arguments" in err

    def test_formula_prop_not_in_model(self, capsys):
        code, _, err = run(capsys, "--formula", "G zed", "--gen", "dining:n=2")
        assert code == 2 and "zed" in err

    def test_unreadable_model(self, capsys):
        code, _, err = run(capsys, "--formula", "p", "--model", "/nonexistent.kts")
        assert code == 2 and "cannot read model" in err


def test_node_budget_exit_code(capsys):
    code, _, err = run(
        capsys,
        "--formula",
        "F allcrit",
        "--gen",
        "semaphore:n=2",
        "--max-nodes",
        "3",
    )
    assert code == 3
    assert "budget" in err


def test_dump_automaton(capsys):
    code, out, _ = run(
        capsys, "--formula", "G F p", "--gen", "random:seed=1,states=2,props=1",
        "--dump-automaton",
    )
    assert code in (0, 1)
    assert 'loc 0 "G !p": -p -> {0}' in out
    assert "[cofinal]" in out


class TestSatisfiability:
    def test_contradiction_unsatisfiable(self, capsys):
        code, out, _ = run(capsys, "--formula", "G p && F !p", "--check-satisfiability")
        assert code == 0
        assert "unsatisfiable" in out

    def test_liveness_satisfiable_with_witness(self, capsys):
        code, out, _ = run(capsys, "--formula", "G F p && G F !p", "--check-satisfiability")
        assert code == 1
        assert out.startswith("satisfiable")
        assert "loop:" in out

    def test_props_flag_extends_universe(self, capsys):
        code, _, _ = run(
            capsys, "--formula", "F p", "--check-satisfiability", "--props", "p,q"
        )
        assert code == 1

    def test_rejects_model_source(self, capsys):
        code, _, err = run(
            capsys, "--formula", "p", "--check-satisfiability", "--gen", "dining:n=2"
        )
        assert code == 2
