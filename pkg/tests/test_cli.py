import json

import pytest

from aigopt.aig import from_aiger, to_aiger
from aigopt.cli import (
    EXIT_BOUND_VIOLATION,
    EXIT_INCOMPLETE_STORE,
    EXIT_OK,
    EXIT_UPPER_BOUND,
    EXIT_USAGE,
    main,
)
from aigopt.store import load_store
from aigopt.synthesis import opt_size
from aigopt.truthtable import parse_hex


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_synth_exact_single_minterm(capsys, tmp_path):
    store = tmp_path / "s.jsonl"
    code, out, err = run(
        capsys, "synth", "0x0001", "-n", "4", "--store", str(store)
    )
    assert code == EXIT_OK
    doc = json.loads(out)
    assert doc["schema"] == "aigopt.synth/1"
    assert doc["size"] == 3
    assert doc["status"] == "exact"
    assert "size 3" in err
    assert load_store(store).best["0x0001"].size == 3


def test_synth_constant(capsys):
    code, out, _ = run(capsys, "synth", "0x0000", "-n", "4")
    assert code == EXIT_OK
    assert json.loads(out)["size"] == 0


def test_synth_xor(capsys):
    code, out, _ = run(capsys, "synth", "0x6", "-n", "2")
    assert code == EXIT_OK
    doc = json.loads(out)
    assert doc["size"] == 3
    witness = from_aiger(doc["witness_aag"])
    assert witness.evaluate() == parse_hex("0x6", 2)


def test_synth_usage_error(capsys):
    code, _, err = run(capsys, "synth", "0xzz", "-n", "4")
    assert code == EXIT_USAGE
    assert "error" in err


def test_synth_inconclusive_exit(capsys):
    code, out, _ = run(capsys, "synth", "0x6", "-n", "2", "--max-gates", "2")
    assert code == EXIT_UPPER_BOUND
    assert json.loads(out)["error"] == "inconclusive"


def test_synth_cnf_export(capsys, tmp_path):
    out_dir = tmp_path / "cnf"
    code, out, _ = run(
        capsys,
        "synth", "0x6", "-n", "2",
        "--backend", "cnf-export", "--max-gates", "3",
        "--cnf-dir", str(out_dir),
    )
    assert code == EXIT_OK
    doc = json.loads(out)
    assert len(doc["files"]) == 3
    text = (out_dir / "0x6_n2_k3.cnf").read_text()
    assert text.startswith("c aigopt")
    assert "p cnf" in text


def test_classify_counts(capsys):
    code, out, err = run(capsys, "classify", "-n", "3")
    assert code == EXIT_OK
    doc = json.loads(out)
    assert doc["count"] == 14
    assert len(doc["classes"]) == 14
    assert "14 NPN classes" in err


def test_classify_csv(capsys):
    code, out, _ = run(capsys, "classify", "-n", "2", "--format", "csv")
    assert code == EXIT_OK
    lines = out.strip().splitlines()
    assert lines[0] == "class_index,canon,orbit_size"
    assert len(lines) == 5


def test_oracle_then_graph_and_verify(capsys, tmp_path):
    store = tmp_path / "oracle2.jsonl"
    code, out, _ = run(capsys, "oracle", "-n", "2", "--store", str(store))
    assert code == EXIT_OK
    doc = json.loads(out)
    assert doc["functions"] == 16
    assert len(load_store(store).best) == 16

    code, out, _ = run(capsys, "graph", "-n", "2", "--store", str(store))
    assert code == EXIT_OK
    doc = json.loads(out)
    assert doc["exact_edge_total"] == doc["edge_total"]
    assert doc["edge_total"] >= 1
    assert doc["max_delta"] <= 2

    code, out, _ = run(capsys, "verify", "-n", "2", "--store", str(store))
    assert code == EXIT_OK
    doc = json.loads(out)
    assert doc["holds"] is True
    assert doc["bound"] == 2

    code, out, err = run(capsys, "report", "-n", "2", "--store", str(store))
    assert code == EXIT_OK
    assert "|delta|" in out
    assert "mean |delta|" in err


def test_graph_csv_edges(capsys, tmp_path):
    store = tmp_path / "oracle1.jsonl"
    run(capsys, "oracle", "-n", "1", "--store", str(store))
    code, out, _ = run(
        capsys, "graph", "-n", "1", "--store", str(store), "--format", "csv"
    )
    assert code == EXIT_OK
    lines = out.strip().splitlines()
    assert lines[0] == "class_a,class_b,delta,multiplicity"
    assert lines[1].startswith("0x0,0x1,0,")


def test_graph_incomplete_store(capsys, tmp_path):
    store = tmp_path / "partial.jsonl"
    run(capsys, "synth", "0x0001", "-n", "4", "--store", str(store))
    code, out, _ = run(capsys, "graph", "-n", "4", "--store", str(store))
    assert code == EXIT_INCOMPLETE_STORE
    doc = json.loads(out)
    assert doc["error"] == "incomplete-store"
    assert len(doc["missing"]) == 221


def test_graph_requires_store(capsys, tmp_path, monkeypatch):
    monkeypatch.delenv("AIGOPT_STORE", raising=False)
    code, _, err = run(capsys, "graph", "-n", "2")
    assert code == EXIT_USAGE
    assert "store" in err


def test_store_env_var(capsys, tmp_path, monkeypatch):
    store = tmp_path / "env.jsonl"
    monkeypatch.setenv("AIGOPT_STORE", str(store))
    code, _, _ = run(capsys, "oracle", "-n", "1")
    assert code == EXIT_OK
    assert store.exists()


def test_repair_flip_and_back(capsys, tmp_path):
    witness = opt_size(parse_hex("0x0080", 4)).witness
    src = tmp_path / "c.aag"
    src.write_text(to_aiger(witness))

    code, out, _ = run(
        capsys, "repair", str(src), "--flip", "8",
        "-o", str(tmp_path / "r1.aag"),
    )
    assert code == EXIT_OK
    doc = json.loads(out)
    assert doc["target_tt"] == "0x0180"
    assert doc["output_size"] <= 7
    assert doc["bound"] == 7
    repaired = from_aiger((tmp_path / "r1.aag").read_text())
    assert repaired.evaluate() == parse_hex("0x0180", 4)

    code, out, _ = run(
        capsys, "repair", str(tmp_path / "r1.aag"), "--flip", "8",
        "-o", str(tmp_path / "r2.aag"),
    )
    assert code == EXIT_OK
    back = from_aiger((tmp_path / "r2.aag").read_text())
    assert back.evaluate() == parse_hex("0x0080", 4)


def test_repair_multi_target(capsys, tmp_path):
    witness = opt_size(parse_hex("0x0080", 4)).witness
    src = tmp_path / "c.aag"
    src.write_text(to_aiger(witness))
    code, out, _ = run(
        capsys, "repair", str(src), "--target", "0x0181",
        "-o", str(tmp_path / "r.aag"),
    )
    assert code == EXIT_OK
    doc = json.loads(out)
    assert doc["flips"] == 2
    assert doc["bound"] == 3 + 8


def test_repair_flip_out_of_range(capsys, tmp_path):
    witness = opt_size(parse_hex("0x8", 2)).witness
    src = tmp_path / "c.aag"
    src.write_text(to_aiger(witness))
    code, _, err = run(capsys, "repair", str(src), "--flip", "99")
    assert code == EXIT_USAGE
    assert "out of range" in err


def test_repair_default_output_path(capsys, tmp_path):
    witness = opt_size(parse_hex("0x8", 2)).witness
    src = tmp_path / "c.aag"
    src.write_text(to_aiger(witness))
    code, out, _ = run(capsys, "repair", str(src), "--flip", "0")
    assert code == EXIT_OK
    assert (tmp_path / "c.repaired.aag").exists()


def test_campaign_small(capsys, tmp_path):
    store = tmp_path / "campaign2.jsonl"
    code, out, _ = run(
        capsys, "synth", "0x0", "-n", "2", "--campaign", "--store", str(store)
    )
    assert code == EXIT_OK
    doc = json.loads(out)
    assert doc["classes"] == 4
    assert doc["new_exact"] == 4
    # resume: everything already done
    code, out, _ = run(
        capsys, "synth", "0x0", "-n", "2", "--campaign", "--store", str(store)
    )
    doc = json.loads(out)
    assert doc["skipped_exact"] == 4
    assert doc["new_exact"] == 0


def test_usage_exit_code(capsys):
    assert main(["nonsense"]) == EXIT_USAGE


def test_output_reparses_under_schema(capsys, tmp_path):
    """Machine output is JSON with a schema tag on every subcommand."""
    store = tmp_path / "s.jsonl"
    for argv in (
        ["synth", "0x8", "-n", "2", "--store", str(store)],
        ["classify", "-n", "2"],
        ["oracle", "-n", "2", "--store", str(store)],
        ["graph", "-n", "2", "--store", str(store)],
        ["verify", "-n", "2", "--store", str(store)],
    ):
        code = main(argv)
        out = capsys.readouterr().out
        doc = json.loads(out)
        assert doc["schema"].startswith("aigopt.")
        assert code == EXIT_OK