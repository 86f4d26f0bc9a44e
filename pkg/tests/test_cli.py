"""Command line behavior, run in-process through main(argv)."""

import json
import shutil
import subprocess

import pytest

from letterseal.cli import main

from helpers import KAT_FILE, PACKET_FILE


def run_cli(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_demo_vdr_walks_epochs(capsys):
    code, out, _ = run_cli(capsys, "demo", "--protocol", "vdr", "--seed", "5")
    assert code == 0
    lines = [l for l in out.splitlines() if "epoch=" in l]
    assert len(lines) == 6
    stages = [(l.split("epoch=")[1].split()[0], l.split("j=")[1].split()[0])
              for l in lines]
    assert stages == [("0", "0"), ("0", "1"), ("1", "0"),
                      ("1", "1"), ("2", "0"), ("2", "1")]
    assert all(l.endswith("roundtrip ok") for l in lines)


def test_demo_v2_counter_progression(capsys):
    code, out, _ = run_cli(capsys, "demo", "--protocol", "v2", "--seed", "5")
    assert code == 0
    ctrs = [l.split("ctr=")[1].split()[0]
            for l in out.splitlines() if "ctr=" in l]
    assert ctrs == ["0", "1", "2", "3", "4", "5"]


def test_demo_v1_runs(capsys):
    code, out, _ = run_cli(capsys, "demo", "--protocol", "v1",
                           "--iterations", "3", "--seed", "5")
    assert code == 0
    assert out.count("roundtrip ok") == 3


def test_demo_output_is_seed_stable(capsys):
    _, first, _ = run_cli(capsys, "demo", "--protocol", "vdr", "--seed", "9")
    _, second, _ = run_cli(capsys, "demo", "--protocol", "vdr", "--seed", "9")
    assert first == second


def test_demo_json_lines(capsys):
    code, out, _ = run_cli(capsys, "demo", "--protocol", "vdr", "--seed", "5",
                           "--format", "json-lines")
    assert code == 0
    records = [json.loads(l) for l in out.splitlines()]
    assert [r["type"] for r in records[:2]] == ["register", "register"]
    msgs = [r for r in records if r["type"] == "message"]
    assert [r["stage"] for r in msgs] == [
        [0, 0], [0, 1], [1, 0], [1, 1], [2, 0], [2, 1]]
    assert all(r["roundtrip"] == "ok" for r in msgs)


def test_demo_zero_messages_rejected(capsys):
    code, _, err = run_cli(capsys, "demo", "--iterations", "0")
    assert code == 2
    assert "at least one" in err


def test_seed_env_fallback(capsys, monkeypatch):
    monkeypatch.setenv("LETTERSEAL_SEED", "9")
    _, via_env, _ = run_cli(capsys, "demo", "--protocol", "v2")
    monkeypatch.delenv("LETTERSEAL_SEED")
    _, via_flag, _ = run_cli(capsys, "demo", "--protocol", "v2", "--seed", "9")
    assert via_env == via_flag


def test_bad_seed_exits_2(capsys, monkeypatch):
    code, _, err = run_cli(capsys, "demo", "--seed", "-1")
    assert code == 2 and "u64" in err
    monkeypatch.setenv("LETTERSEAL_SEED", "not-a-number")
    code, _, err = run_cli(capsys, "demo")
    assert code == 2


def test_attack_text_verdict(capsys):
    code, out, _ = run_cli(capsys, "attack", "kci_v2", "--seed", "3")
    assert code == 0
    assert "verdict: as expected" in out
    assert "succeeded:          yes  (expected yes)" in out
    assert "freshness violated: yes  (expected yes)" in out


def test_attack_all_names_exit_zero(capsys):
    for name in ("replay_v2", "replay_vdr", "kci_vdr_postratchet",
                 "fs_v2", "fs_vdr", "pcs_vdr"):
        code, out, _ = run_cli(capsys, "attack", name, "--seed", "1")
        assert code == 0, name


def test_attack_json_record(capsys):
    code, out, _ = run_cli(capsys, "attack", "replay_vdr", "--seed", "2",
                           "--format", "json-lines")
    assert code == 0
    rec = json.loads(out)
    assert rec["as_expected"] is True
    assert rec["details"]["duplicate_rejections"] == 2


def test_attack_output_is_seed_stable(capsys):
    _, a, _ = run_cli(capsys, "attack", "fs_v2", "--seed", "4",
                      "--format", "json-lines")
    _, b, _ = run_cli(capsys, "attack", "fs_v2", "--seed", "4",
                      "--format", "json-lines")
    assert a == b


def test_unknown_attack_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["attack", "noop"])
    assert exc.value.code == 2


def test_bench_json_lines(capsys):
    code, out, _ = run_cli(capsys, "bench", "--iterations", "100",
                           "--format", "json-lines")
    assert code == 0
    records = [json.loads(l) for l in out.splitlines()]
    rows = [r for r in records if r["type"] == "bench_row"]
    costs = [r for r in records if r["type"] == "op_cost"]
    assert len(rows) == 5 and len(costs) == 15
    assert all(r["count_per_message"] == r["pinned"] for r in costs)


def test_bench_iteration_floor(capsys):
    code, _, err = run_cli(capsys, "bench", "--iterations", "50")
    assert code == 2
    assert ">= 100" in err


def test_vectors_out_and_check(capsys, tmp_path):
    path = tmp_path / "v.txt"
    code, out, _ = run_cli(capsys, "vectors", "--out", str(path))
    assert code == 0 and "wrote 12 vectors" in out
    assert path.read_text() == KAT_FILE.read_text()
    code, out, _ = run_cli(capsys, "vectors", "--check", str(path))
    assert code == 0
    assert "12 vectors, 0 mismatches" in out


def test_vectors_check_flags_corruption(capsys, tmp_path):
    lines = KAT_FILE.read_text().splitlines()
    first = lines[0].split()
    first[-1] = ("00" + first[-1][2:])
    if first[-1] == lines[0].split()[-1]:  # already started with 00
        first[-1] = "ff" + first[-1][2:]
    bad = tmp_path / "bad.txt"
    bad.write_text("\n".join([" ".join(first), *lines[1:]]) + "\n")
    code, out, _ = run_cli(capsys, "vectors", "--check", str(bad))
    assert code == 1
    assert "MISMATCH" in out
    assert "1 mismatches" in out


def test_parse_fixture_file(capsys):
    code, out, _ = run_cli(capsys, "parse", str(PACKET_FILE))
    assert code == 0
    assert "UserE2EE" in out and "BotPlaintext" in out
    assert "kid_a=11 kid_b=12" in out


def test_parse_garbage_and_empty(capsys, tmp_path):
    garbage = tmp_path / "g.txt"
    garbage.write_text("zz\n")
    code, out, _ = run_cli(capsys, "parse", str(garbage))
    assert code == 1 and "PARSE ERROR" in out
    empty = tmp_path / "e.txt"
    empty.write_text("# nothing here\n\n")
    code, _, err = run_cli(capsys, "parse", str(empty))
    assert code == 1 and "no packets found" in err
    code, _, err = run_cli(capsys, "parse", str(tmp_path / "missing.txt"))
    assert code == 1


def test_console_script_installed():
    exe = shutil.which("letterseal")
    assert exe, "console script not on PATH"
    proc = subprocess.run([exe, "vectors", "--check", str(KAT_FILE)],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "0 mismatches" in proc.stdout
