import csv
import json
import math
import subprocess
import sys

import pytest

from suspflow.cli import main
from suspflow.formats import SftFileError, parse_sft, sft_to_dict

GOLDEN = {"alphabet_size": 2, "matrix": [[1, 1], [1, 0]]}
FULL3 = {"alphabet_size": 3, "forbidden_words": []}
FIXED = {"alphabet_size": 2, "matrix": [[1, 0], [0, 0]]}
TWO = {"alphabet_size": 4, "forbidden_words": [[i, j] for i in range(4) for j in range(4)
                                               if (i < 2) != (j < 2)]}
EMPTY = {"alphabet_size": 2, "matrix": [[0, 1], [0, 0]]}


@pytest.fixture
def sft_file(tmp_path):
    def make(obj, name="y.json"):
        p = tmp_path / name
        p.write_text(obj if isinstance(obj, str) else json.dumps(obj, indent=1))
        return p
    return make


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def test_entropy_golden(sft_file, tmp_path, capsys):
    out = tmp_path / "out"
    assert main(["entropy", "--input", str(sft_file(GOLDEN)), "--out", str(out), "--n-max", "10"]) == 0
    summary = json.loads((out / "entropy.json").read_text())
    assert summary["entropy"] == pytest.approx(0.4812118, abs=1e-7)
    assert len(summary["components"]) == 1
    rows = read_csv(out / "language.csv")
    assert [int(r["count"]) for r in rows[:4]] == [2, 3, 5, 8]
    assert "h = log lambda" in capsys.readouterr().out


def test_entropy_full_shift(sft_file, tmp_path):
    out = tmp_path / "out"
    assert main(["entropy", "--input", str(sft_file(FULL3)), "--out", str(out)]) == 0
    assert json.loads((out / "entropy.json").read_text())["entropy"] == pytest.approx(math.log(3), abs=1e-12)


def test_malformed_file(sft_file, tmp_path, capsys):
    bad = sft_file('{\n  "alphabet_size": 2,\n  "matrix": [[1, 1], [1 0]]\n}')
    assert main(["entropy", "--input", str(bad), "--out", str(tmp_path / "o")]) == 2
    assert f"{bad}:3:" in capsys.readouterr().err
    assert not (tmp_path / "o").exists()


def test_schema_error_line(sft_file, capsys):
    bad = sft_file('{\n  "alphabet_size": 2,\n  "matrix": [[1, 1]]\n}')
    assert main(["entropy", "--input", str(bad)]) == 2
    assert ":3: matrix must be" in capsys.readouterr().err


def test_missing_file(tmp_path):
    assert main(["entropy", "--input", str(tmp_path / "nope.json")]) == 2


def test_empty_shift(sft_file, tmp_path):
    assert main(["entropy", "--input", str(sft_file(EMPTY)), "--out", str(tmp_path / "o")]) == 3
    assert main(["verify", "--input", str(sft_file(EMPTY)), "--out", str(tmp_path / "o")]) == 3


@pytest.mark.parametrize("cmd", ["verify", "report"])
def test_zero_entropy(cmd, sft_file, tmp_path, capsys):
    assert main([cmd, "--input", str(sft_file(FIXED)), "--out", str(tmp_path / "o")]) == 4
    assert "positive entropy" in capsys.readouterr().err


def test_verify_golden(sft_file, tmp_path, capsys):
    out = tmp_path / "out"
    code = main(["verify", "--input", str(sft_file(GOLDEN)), "--out", str(out), "--oracle",
                 "--n-max", "30", "--r-max", "50"])
    lines = capsys.readouterr().out.splitlines()
    assert code == 0
    assert all(line.startswith("[PASS]") for line in lines)
    assert any("brute-force" in line for line in lines)
    q = read_csv(out / "q.csv")
    assert float(q[0]["Q_r"]) == pytest.approx(math.exp(-2.5) / 2, rel=1e-12)
    part = read_csv(out / "partition.csv")
    assert list(part[0]) == ["n", "c", "log_Zn", "P_n", "lower_bound", "upper_bound"]
    assert len(part) == 30
    assert list(read_csv(out / "aj.csv")[0]) == ["j", "block_n", "a_j", "a_j_minus_h"]
    assert list(read_csv(out / "root.csv")[0]) == ["iteration", "c_lo", "c_hi"]
    roof = json.loads((out / "roof.json").read_text())
    assert roof["c"] == 2.5 and roof["beta"] == {"1": 1}


def test_verify_two_components(sft_file, tmp_path):
    assert main(["verify", "--input", str(sft_file(TWO)), "--out", str(tmp_path / "o"),
                 "--n-max", "20", "--r-max", "40"]) == 0


def test_report(sft_file, tmp_path):
    out = tmp_path / "out"
    assert main(["report", "--input", str(sft_file(TWO)), "--out", str(out), "--n-max", "20"]) == 0
    rep = json.loads((out / "report.json").read_text())
    assert rep["multiplicity"] == 2
    assert "MME multiplicity: 2" in (out / "report.txt").read_text()


def test_deterministic_outputs(sft_file, tmp_path):
    f = sft_file(GOLDEN)
    for name in ("a", "b"):
        assert main(["verify", "--input", str(f), "--out", str(tmp_path / name), "--n-max", "15",
                     "--r-max", "30"]) == 0
        assert main(["report", "--input", str(f), "--out", str(tmp_path / name), "--n-max", "15"]) == 0
    for p in sorted((tmp_path / "a").iterdir()):
        assert p.read_bytes() == (tmp_path / "b" / p.name).read_bytes()


def test_lemma(capsys):
    assert main(["lemma", "--n", "3", "--k", "2", "--values", "1,2,3,4,5,6"]) == 0
    assert "holds=True" in capsys.readouterr().out
    assert main(["lemma", "--n", "2", "--k", "1", "--values", "1,10,10"]) == 1
    assert main(["lemma", "--n", "5", "--k", "1", "--values", "1,2"]) == 2
    assert main(["lemma", "--n", "4", "--k", "4", "--seed", "3"]) == 0


def test_bad_arguments():
    with pytest.raises(SystemExit):
        main(["verify", "--input", "x.json", "--alpha", "1.5"])


def test_module_entry_point(sft_file, tmp_path):
    proc = subprocess.run([sys.executable, "-m", "suspflow.cli", "entropy", "--input",
                           str(sft_file(GOLDEN)), "--out", str(tmp_path / "o")],
                          capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr


def test_parse_round_trip():
    sft = parse_sft(json.dumps({"alphabet_size": 2, "forbidden_words": [[1, 1, 1]]}))
    assert parse_sft(json.dumps(sft_to_dict(sft))) == sft


@pytest.mark.parametrize("text", ['[]', '{"alphabet_size": 2}',
                                  '{"alphabet_size": 0, "forbidden_words": []}',
                                  '{"alphabet_size": 2, "forbidden_words": [[3]]}'])
def test_parse_errors(text):
    with pytest.raises(SftFileError):
        parse_sft(text)
