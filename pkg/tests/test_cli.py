import csv
import io
import json
from fractions import Fraction

import pytest

from orthosmith.cli import run
from orthosmith.core import is_scaled_orthogonal, matrix_from_json

Q5 = {"n": 2, "ring": "Q", "entries": [["3/5", "4/5"], ["4/5", "-3/5"]]}


def invoke(*argv):
    out = io.StringIO()
    code = run(list(argv), out=out)
    return code, out.getvalue()


def lines(text):
    return [json.loads(s) for s in text.splitlines() if s.strip()]


@pytest.fixture
def mfile(tmp_path):
    def write(obj, name="m.json"):
        p = tmp_path / name
        p.write_text(obj if isinstance(obj, str) else json.dumps(obj))
        return str(p)
    return write


def test_snf(mfile):
    code, text = invoke("snf", "--matrix", mfile({"n": 2, "ring": "Z", "entries": [[3, 4], [4, -3]]}))
    assert code == 0
    payload = lines(text)[0]
    assert payload["d"] == [1, 25] and payload["D_ideal"] == [1, 25]


def test_snf_gaussian(mfile):
    code, text = invoke("snf", "--ring", "Zi", "--matrix", mfile(Q5))
    assert code == 0 and lines(text)[0]["d"] == [[1, 0], [25, 0]]


def test_prob_orthogonal(mfile):
    code, text = invoke("prob", "--matrix", mfile(Q5))
    payload = lines(text)[0]
    assert code == 0
    assert payload["value"]["num"] == "1" and payload["value"]["den"] == "25"
    assert payload["level"] == 5 and payload["orthogonal"] is True
    assert payload["factors"] == [{"i": 1, "j": 1, "num": "1", "den": "25"}]


@pytest.mark.parametrize("ring, ensemble, expected", [
    ("Zi", "symmetric", Fraction(1, 625)),
    ("Z", "asymmetric", Fraction(1, 25)),
    ("Zi", "hermitian", Fraction(1, 25)),
])
def test_prob_variants(mfile, ring, ensemble, expected):
    code, text = invoke("prob", "--matrix", mfile(Q5), "--ring", ring, "--ensemble", ensemble)
    v = lines(text)[0]["value"]
    assert code == 0 and Fraction(int(v["num"]), int(v["den"])) == expected


def test_prob_integral_needs_modulus(mfile):
    path = mfile({"n": 2, "ring": "Z", "entries": [[2, 0], [0, 3]]})
    assert invoke("prob", "--matrix", path)[0] == 1
    code, text = invoke("prob", "--matrix", path, "--modulus", "6")
    assert code == 0 and lines(text)[0]["value"]["den"] == "6"


@pytest.mark.parametrize("cmd, ell, count", [("enum-o2", 5, 16), ("enum-o2", 3, 0),
                                             ("enum-o3", 3, 192), ("enum-o3", 4, 0)])
def test_enum_roundtrip(cmd, ell, count):
    code, text = invoke(cmd, "--level", str(ell))
    assert code == 0
    mats = lines(text)
    assert len(mats) == count
    for obj in mats:
        Q, ring = matrix_from_json(obj)
        assert ring == "Q"
        assert is_scaled_orthogonal(Q.map(lambda x: int(x * ell)), ell)


def test_enum_bad_level():
    assert invoke("enum-o3", "--level", "0")[0] == 2


def test_expect():
    code, text = invoke("expect", "--n", "3", "--level", "3")
    e = lines(text)[0]["expectation"]
    assert code == 0 and (e["num"], e["den"]) == ("64", "9")
    assert invoke("expect", "--n", "2", "--level", "1")[0] == 2


def test_bounds():
    code, text = invoke("bounds", "--max", "5")
    payload = lines(text)[0]
    assert code == 0
    assert round(payload["bound2"], 5) == 0.11368 and round(payload["bound3"], 5) == 0.29573
    assert payload["partial_sums"]["2"]["num"] == "2" and payload["partial_sums"]["2"]["den"] == "25"


def test_figure_stdout_and_file(tmp_path):
    code, text = invoke("figure", "--n", "2", "--max", "30")
    rows = list(csv.DictReader(io.StringIO(text)))
    assert code == 0
    assert rows[0]["level"] == "5"
    assert (rows[0]["expectation_num"], rows[0]["expectation_den"]) == ("16", "25")
    out = tmp_path / "fig.csv"
    assert invoke("figure", "--n", "2", "--max", "30", "--out", str(out))[0] == 0
    assert out.read_text() == text


def test_verify_exhaustive(mfile):
    code, text = invoke("verify", "exhaustive", "--matrix", mfile(Q5))
    payload = lines(text)[0]
    assert code == 0 and payload["agree"] and payload["oracle"]["den"] == "25"
    code, text = invoke("verify", "exhaustive", "--matrix", mfile(Q5), "--ring", "Zi",
                        "--modulus", "5")
    assert code == 0 and lines(text)[0]["agree"]


def test_verify_exhaustive_too_large(mfile):
    path = mfile({"n": 3, "ring": "Z", "entries": [[1, 0, 0], [0, 1, 0], [0, 0, 1]]})
    code, _ = invoke("verify", "exhaustive", "--matrix", path, "--modulus", "50",
                     "--ensemble", "asymmetric")
    assert code == 2


def test_verify_mc(mfile):
    args = ("verify", "mc", "--matrix", mfile(Q5), "--samples", "200000", "--seed", "1",
            "--k", "25000")
    code, text = invoke(*args)
    payload = lines(text)[0]
    assert code == 0 and abs(payload["z"]) < 5
    assert invoke(*args)[1] == text


def test_verify_sample_n():
    code, text = invoke("verify", "sample-n", "--n", "2", "--level", "5", "--samples", "5000",
                        "--seed", "3")
    payload = lines(text)[0]
    assert code == 0 and payload["all_divisible"] and payload["divisor"] == 8
    assert payload["k"] == 25_000


def test_threads_env_override(monkeypatch):
    argv = ("verify", "sample-n", "--n", "3", "--level", "3", "--samples", "3000", "--seed", "4")
    base = invoke("--threads", "1", *argv)[1]
    monkeypatch.setenv("ORTHOSMITH_THREADS", "3")
    assert invoke("--threads", "1", *argv)[1] == base
    monkeypatch.setenv("ORTHOSMITH_THREADS", "lots")
    assert invoke(*argv)[0] == 1


@pytest.mark.parametrize("content", [
    "{not json",
    {"n": 2, "ring": "Z", "entries": [[1, 2, 3], [4, 5, 6]]},
    {"n": 2, "ring": "Q", "entries": [["1/0", "0"], ["0", "1"]]},
    {"n": 2, "ring": "Z"},
    [1, 2, 3],
])
def test_malformed_input_exits_1(mfile, content):
    path = mfile(content)
    for cmd in ("snf", "prob"):
        assert invoke(cmd, "--matrix", path)[0] == 1


def test_missing_file_and_usage_errors(tmp_path):
    assert invoke("snf", "--matrix", str(tmp_path / "nope.json"))[0] == 1
    assert invoke("frobnicate")[0] == 1
    assert invoke("expect", "--n", "4", "--level", "3")[0] == 1


def test_mc_rejects_non_orthogonal(mfile):
    path = mfile({"n": 2, "ring": "Q", "entries": [["1/2", "1/2"], ["0", "1"]]})
    code, _ = invoke("verify", "mc", "--matrix", path, "--samples", "10", "--seed", "1", "--k", "4")
    assert code == 1
