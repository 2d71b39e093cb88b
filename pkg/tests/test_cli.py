import json
import os
import subprocess
import sys
from pathlib import Path

from steinberg_ext.cli import parse_and_dispatch, render_table
from steinberg_ext.extengine import ExtTable, ModulePiece

SRC_DIR = Path(__file__).resolve().parent.parent / "src"


def run_cli(capsys, *argv):
    code = parse_and_dispatch(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_ext_both_methods(capsys):
    code, out, _ = run_cli(capsys, "ext", "--type", "A2", "--I", "0", "--J", "1",
                           "--ring", "q=3,d=5", "--method", "both")
    assert code == 0
    data = json.loads(out)
    assert data["table"] == {"2": {"rank": 1, "torsion": []}}
    assert data["query"]["ring"] == "q=3,d=5"
    assert data["query"]["I"] == [0] and data["query"]["J"] == [1]


def test_ext_center_rank(capsys):
    code, out, _ = run_cli(capsys, "ext", "--type", "A2", "--I", "0", "--J", "1",
                           "--ring", "Q", "--method", "both", "--center-rank", "1")
    assert code == 0
    assert json.loads(out)["table"] == {"2": {"rank": 1, "torsion": []},
                                        "3": {"rank": 1, "torsion": []}}


def test_check_ring_reports_failure_with_exit_zero(capsys):
    code, out, _ = run_cli(capsys, "check-ring", "--type", "A1", "--ring", "q=3,d=2")
    assert code == 0
    data = json.loads(out)
    assert data["bon"] is False
    assert data["witness"]["bon_failing_exponent"] == 1
    assert data["witness"]["bon_failing_factor"] == 0  # 1 - q is 0 mod 2


def test_check_ring_theta_acknowledgment(capsys):
    code, out, _ = run_cli(capsys, "check-ring", "--type", "A2", "--ring", "Q",
                           "--assume-theta")
    assert code == 0
    data = json.loads(out)
    assert data["theta_assumed"] is True
    assert "acknowledged" in data["notes"]


def test_verify_all_pairs_b2_rationals(capsys):
    code, out, _ = run_cli(capsys, "verify", "--type", "B2", "--ring", "Q", "--all-pairs")
    assert code == 0
    lines = out.strip().splitlines()
    assert all(line.startswith("PASS") for line in lines[:-1])
    assert "0 failed" in lines[-1]
    # 16 pairs appear in the sweep
    assert sum("ext-methods" in line for line in lines) == 16


def test_verify_bad_ring_exits_three(capsys):
    code, out, err = run_cli(capsys, "verify", "--type", "A1", "--ring", "q=3,d=2",
                             "--all-pairs")
    assert code == 3
    assert "ring-assumption error" in err
    assert out == ""


def test_ext_induced_strata_bad_ring_exits_three(capsys):
    code, _, err = run_cli(capsys, "ext-induced", "--type", "A1", "--I", "", "--J", "",
                           "--ring", "q=3,d=2", "--method", "strata")
    assert code == 3
    assert "ring-assumption" in err


def test_verification_mismatch_exits_one(capsys, monkeypatch):
    import steinberg_ext.extengine as eng

    honest = eng.total_degree
    monkeypatch.setattr(eng, "total_degree",
                        lambda *args: honest(*args) + 1)
    code, out, err = run_cli(capsys, "ext", "--type", "A2", "--I", "0", "--J", "1",
                             "--ring", "Q", "--method", "both")
    assert code == 1
    assert out == ""
    assert "verification failure" in err


def test_usage_errors(capsys):
    assert run_cli(capsys, "bogus")[0] == 2
    assert run_cli(capsys, "ext", "--type", "A2", "--bogus")[0] == 2
    assert run_cli(capsys, "ext", "--type", "H9", "--ring", "Q")[0] == 2
    assert run_cli(capsys, "ext", "--type", "A2", "--I", "5", "--ring", "Q")[0] == 2
    assert run_cli(capsys, "ext", "--type", "A2", "--ring", "q=6,d=5")[0] == 2


def test_tsv_rendering():
    empty = render_table(ExtTable({}), "tsv", {}, "closed_form")
    assert empty == "degree\trank\ttorsion\n"
    two = render_table(ExtTable({2: ModulePiece(1), 1: ModulePiece(1)}), "tsv", {},
                       "closed_form")
    assert two == "degree\trank\ttorsion\n1\t1\t-\n2\t1\t-\n"


def test_deterministic_bytes(capsys):
    args = ("ext", "--type", "B2", "--I", "0", "--J", "0,1", "--ring", "q=3,d=23",
            "--method", "both")
    _, first, _ = run_cli(capsys, *args)
    _, second, _ = run_cli(capsys, *args)
    assert first == second


def test_cohomology_objects(capsys):
    code, out, _ = run_cli(capsys, "cohomology", "--type", "A2", "--I", "0",
                           "--ring", "Q", "--method", "both")
    assert code == 0
    assert json.loads(out)["table"] == {"1": {"rank": 1, "torsion": []}}

    code, out, _ = run_cli(capsys, "cohomology", "--type", "A2", "--object", "trivial",
                           "--center-rank", "2", "--ring", "Q")
    assert code == 0
    assert json.loads(out)["table"] == {"0": {"rank": 1, "torsion": []},
                                        "1": {"rank": 2, "torsion": []},
                                        "2": {"rank": 1, "torsion": []}}

    code, out, _ = run_cli(capsys, "cohomology", "--type", "A3", "--object", "induced",
                           "--I", "0,1", "--ring", "Q")
    assert code == 0
    assert json.loads(out)["table"] == {"0": {"rank": 1, "torsion": []},
                                        "1": {"rank": 1, "torsion": []}}


def test_ext_vi_both_methods(capsys):
    code, out, _ = run_cli(capsys, "ext-vi", "--type", "A2", "--I", "0", "--J", "1",
                           "--ring", "Q", "--method", "both")
    assert code == 0
    assert json.loads(out)["table"] == {"1": {"rank": 1, "torsion": []},
                                        "2": {"rank": 1, "torsion": []}}


def test_ext_induced_strata_good_ring(capsys):
    code, out, _ = run_cli(capsys, "ext-induced", "--type", "A2", "--I", "0,1",
                           "--J", "0", "--ring", "q=3,d=23", "--method", "strata")
    assert code == 0
    assert json.loads(out)["table"] == {"0": {"rank": 1, "torsion": []},
                                        "1": {"rank": 1, "torsion": []}}


def test_dcosets_json_and_tsv(capsys):
    code, out, _ = run_cli(capsys, "dcosets", "--type", "A2", "--I", "0", "--J", "0",
                           "--ring", "q=3,d=5")
    assert code == 0
    data = json.loads(out)
    assert [r["length"] for r in data["reps"]] == [0, 1]
    assert data["reps"][0]["surviving"] is True
    assert data["reps"][0]["certificate"] is None
    assert data["reps"][1]["certificate"]["exponent"] == 1

    code, out, _ = run_cli(capsys, "dcosets", "--type", "A2", "--I", "0", "--J", "0",
                           "--format", "tsv")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "length\tgamma_exp\tdelta_exp\tlevi\tsurviving"
    assert len(lines) == 3


def test_zelevinsky(capsys):
    code, out, _ = run_cli(capsys, "zelevinsky", "--k", "3", "--I", "0", "--J", "1")
    assert code == 0
    data = json.loads(out)
    assert data["theta_roundtrip_ok"] is True
    assert data["sk_orientations_surjective"] is True
    assert data["table"] == {"2": {"rank": 1, "torsion": []},
                             "3": {"rank": 1, "torsion": []}}
    assert data["orientation_I"] == [True, False]

    code, out, _ = run_cli(capsys, "zelevinsky", "--k", "8")
    assert code == 0
    data = json.loads(out)
    assert data["theta_roundtrip_ok"] is True
    assert data["sk_orientations_surjective"] is None


def test_dump_complex(capsys):
    code, out, _ = run_cli(capsys, "ext", "--type", "A1", "--I", "", "--J", "0",
                           "--ring", "Q", "--method", "complex_built", "--dump-complex")
    assert code == 0
    data = json.loads(out)
    assert "complexes" in data and data["complexes"]
    assert all(set(c) == {"ranks", "differentials", "labels"} for c in data["complexes"])


def test_cache_dir_used(tmp_path, capsys):
    code, first, _ = run_cli(capsys, "dcosets", "--type", "B2", "--I", "0", "--J", "1",
                             "--cache-dir", str(tmp_path))
    assert code == 0
    cache_files = list(tmp_path.glob("weyl_*.bin"))
    assert len(cache_files) == 1
    code, second, _ = run_cli(capsys, "dcosets", "--type", "B2", "--I", "0", "--J", "1",
                              "--cache-dir", str(tmp_path))
    assert code == 0 and first == second


def test_cache_env_var_overrides(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("STEINBERG_EXT_CACHE_DIR", str(tmp_path))
    code, _, _ = run_cli(capsys, "dcosets", "--type", "A2", "--I", "", "--J", "")
    assert code == 0
    assert list(tmp_path.glob("weyl_A2.bin"))


def test_parallel_same_bytes(capsys):
    args = ("verify", "--type", "A2", "--ring", "Q", "--all-pairs")
    _, serial, _ = run_cli(capsys, *args)
    _, parallel, _ = run_cli(capsys, *args, "--parallel", "2")
    assert serial == parallel


def test_module_entrypoint_subprocess():
    env = dict(os.environ)
    env["PYTHONPATH"] = str(SRC_DIR) + os.pathsep + env.get("PYTHONPATH", "")
    proc = subprocess.run(
        [sys.executable, "-m", "steinberg_ext", "ext", "--type", "A1", "--I", "0",
         "--J", "0", "--ring", "Q"],
        capture_output=True, text=True, env=env)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["table"] == {"0": {"rank": 1, "torsion": []}}
