import dataclasses
import json

import pytest

from sendov import cli, variational


@pytest.fixture
def cand_file(tmp_path, converged):
    def write(n, **changes):
        params = dataclasses.replace(converged[n][1], **changes)
        path = tmp_path / f"cand{n}.json"
        path.write_text(params.to_json())
        return path
    return write


def test_table(tmp_path, capsys):
    out = tmp_path / "table.json"
    assert cli.main(["table", "--out", str(out)]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 10
    assert "0.7290857513" in lines[1]
    doc = json.loads(out.read_text())
    assert [r["n"] for r in doc["rows"]] == [8, 9, 12, 13, 14, 15, 19, 20, 26]
    assert all(r["pass"] for r in doc["rows"])


def test_table_corrupt_seed_file(tmp_path):
    bad = tmp_path / "seeds.json"
    bad.write_text('{"solutions": [{"n": 8, "beta": "x"}]}')
    assert cli.main(["table", "--seeds", str(bad), "--out", str(tmp_path / "t.json")]) == 2


def test_table_tight_tolerance_fails(tmp_path, capsys):
    code = cli.main(["table", "--tolerance", "1e-13", "--out", str(tmp_path / "t.json")])
    assert code == 1
    assert "first failing row: n=8" in capsys.readouterr().err


def test_verify_n26(tmp_path, cand_file):
    report = tmp_path / "r.json"
    assert cli.main(["verify", "--in", str(cand_file(26)), "--report", str(report)]) == 0
    doc = json.loads(report.read_text())
    assert doc["overall"] is True


def test_verify_beta_half(tmp_path, cand_file):
    report = tmp_path / "r.json"
    assert cli.main(["verify", "--in", str(cand_file(8, beta=0.5)), "--out", str(report)]) == 1
    props = {p["id"]: p for p in json.loads(report.read_text())["properties"]}
    assert props["C"]["pass"] is False


@pytest.mark.parametrize("content", ["", "not json", '{"n": 8}'])
def test_verify_bad_input(tmp_path, content):
    path = tmp_path / "c.json"
    path.write_text(content)
    assert cli.main(["verify", "--in", str(path)]) == 2


def test_verify_missing_file(tmp_path):
    assert cli.main(["verify", "--in", str(tmp_path / "nope.json")]) == 2


@pytest.mark.parametrize("n", [8, 9])
def test_derivcheck(n, capsys):
    assert cli.main(["derivcheck", "--n", str(n)]) == 0
    assert "FAIL" not in capsys.readouterr().out


def test_derivcheck_fault_injection(monkeypatch, cand_file):
    real = variational.sensitivity

    def flipped(*args, **kw):
        s = real(*args, **kw)
        return dataclasses.replace(s, dz_dbeta=-s.dz_dbeta)

    monkeypatch.setattr(variational, "sensitivity", flipped)
    assert cli.main(["derivcheck", "--in", str(cand_file(8))]) == 1


def test_probe(tmp_path, cand_file):
    out = tmp_path / "stats.json"
    code = cli.main(["probe", "--in", str(cand_file(8)), "--samples", "2000",
                     "--scale", "1e-3", "--rng-seed", "5", "--out", str(out)])
    assert code == 0
    doc = json.loads(out.read_text())
    assert set(doc) >= {"count", "scale", "admissible", "improvements", "max_dQ", "dP",
                        "margin", "rng_seed"}
    assert doc["improvements"] == 0 and doc["count"] == 2000


def test_construct(tmp_path):
    out, log = tmp_path / "c.jsonl", tmp_path / "log.jsonl"
    assert cli.main(["construct", "--n", "8", "--jitter", "2", "--out", str(out),
                     "--log", str(log)]) == 0
    recs = [json.loads(line) for line in out.read_text().splitlines()]
    assert recs and recs[0]["n"] == 8
    assert len(log.read_text().splitlines()) == 3
    # emitted candidates feed straight back into verify
    single = tmp_path / "one.json"
    single.write_text(json.dumps(recs[0]))
    assert cli.main(["verify", "--in", str(single), "--out", str(tmp_path / "r.json")]) == 0


def test_usage_errors():
    assert cli.main(["bogus"]) == 2
    assert cli.main(["verify"]) == 2
    assert cli.main(["probe"]) == 2
