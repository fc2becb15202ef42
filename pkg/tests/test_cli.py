import io as _io
import json
import subprocess
import sys

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from shiftpoly import errors, io
from shiftpoly.cli import run
from shiftpoly.poly import Poly
from shiftpoly.shiftop import PointMultiset, ShiftCombo


def call(*argv):
    buf = _io.StringIO()
    code = run(list(argv), stdout=buf)
    return code, json.loads(buf.getvalue())


@pytest.fixture
def files(tmp_path):
    def write(name, doc):
        path = tmp_path / name
        path.write_text(json.dumps(doc))
        return str(path)

    def line(p, vals, mult=None):
        return {"p": p, "n": 1, "points": [{"coords": [v], "mult": (mult or {}).get(v, 1)} for v in vals]}

    return {
        "A012": write("A012.json", line(5, [0, 1, 2])),
        "A01": write("A01.json", line(5, [0, 1])),
        "A0": write("A0.json", line(5, [0])),
        "B01_7": write("B01_7.json", line(7, [0, 1])),
        "diag": write("diag.json", {"p": 3, "n": 2, "points": [{"coords": [c, c]} for c in range(3)]}),
        "cap": write("cap.json", {"p": 3, "n": 2, "points": [{"coords": c} for c in ([0, 0], [0, 1], [1, 0], [1, 1])]}),
        "F32": write("F32.json", {"p": 3, "n": 2, "points": [{"coords": [a, b]} for a in range(3) for b in range(3)]}),
        "combo": write(
            "combo.json",
            {"p": 5, "n": 1, "terms": [{"coords": [0], "coeff": 1}, {"coords": [1], "coeff": -2}, {"coords": [2], "coeff": 1}]},
        ),
        "xy": write("xy.json", {"p": 5, "n": 2, "terms": [{"exps": [1, 1], "coeff": 1}]}),
        "fam": write("fam.json", {"p": 3, "n": 1, "k": 3, "tuples": [[[1], [1], [1]]]}),
        "bad_json": write("bad.json", "not an object"),
        "bad_p": write("bad_p.json", {"p": 4, "n": 1, "points": [{"coords": [0]}]}),
    }


def test_degree_set(files):
    code, doc = call("degree", "--set", files["A012"])
    assert code == 0 and doc["ok"] and doc["result"]["deg"] == 2
    assert doc["meta"]["p"] == 5 and doc["meta"]["n"] == 1 and "version" in doc["meta"]


def test_degree_combo_and_bound(files):
    code, doc = call("degree", "--combo", files["combo"])
    assert code == 0 and doc["result"] == {"deg": 2, "leading": [{"alpha": [2], "coeff": 2}]}
    code, doc = call("degree", "--combo", files["combo"], "--bound", "1")
    assert code == 3 and doc["result"] == {"bound_exhausted": 1}


def test_delta_and_construct(files):
    code, doc = call("delta", "--set", files["A01"], "--d", "1")
    assert code == 0 and doc["result"]["dim"] == 1
    code, doc = call("construct", "--set", files["A01"], "--d", "1")
    assert code == 0
    assert io.load_combo(doc["result"]).coeffs[((0,), (0,))] != 0
    code, doc = call("construct", "--set", files["A01"], "--d", "2")
    assert code == 2 and not doc["ok"]


def test_reduce_and_annihilate(files):
    code, doc = call("reduce", "--combo", files["combo"], "--i", "1")
    assert code == 0
    assert io.load_combo(doc["result"]).coeffs == {((1,), (0,)): 3, ((2,), (0,)): 2}
    code, doc = call("reduce", "--combo", files["combo"], "--i", "1", "--eps", "2")
    assert code == 0 and all(t["coords"] != [2] for t in doc["result"]["terms"])


def test_cns(files):
    code, doc = call("cns", "--poly", files["xy"], "--alpha", "1,1", "--families", files["A01"], files["A01"])
    assert code == 0 and doc["result"] == {"point": [1, 1], "r": [0, 0]}


def test_cd_and_hp(files):
    code, doc = call("cd", "--set", files["A01"], files["A01"])
    assert code == 0 and doc["result"]["certificate_rank"] == 2
    code, doc = call("hp", "--set", files["A01"], files["A0"], "--d", "2")
    assert code == 0 and doc["result"]["lacunary"]["holds"]
    code, doc = call("cd", "--set", files["A01"], files["B01_7"])
    assert code == 2


def test_capset(files):
    code, doc = call("capset", "verify", "--set", files["cap"], "--supports")
    assert code == 0 and doc["result"]["cap"] and doc["result"]["supports"]["outside_plus"] <= 3
    code, doc = call("capset", "verify", "--set", files["diag"])
    assert code == 1 and not doc["ok"]
    code, doc = call("capset", "bound", "--n", "2", "--p", "3")
    assert doc["result"]["statement_bound"] == "9" and doc["result"]["proof_bound"] == "6"


def test_sumfree(files):
    code, doc = call("sumfree", "verify", "--family", files["fam"])
    assert code == 0 and doc["result"]["sum_free"]
    code, doc = call("sumfree", "bound", "--n", "2", "--p", "3", "--k", "3")
    assert code == 0 and doc["result"]["bound"] == "9"


def test_kakeya(files):
    code, doc = call("kakeya", "verify", "--set", files["F32"])
    assert code == 0 and doc["result"]["missing"] == []
    code, doc = call("kakeya", "verify", "--set", files["diag"])
    assert code == 1 and len(doc["result"]["missing"]) == 3
    code, doc = call("kakeya", "span", "--set", files["F32"], "--d", "2")
    assert code == 0 and doc["result"]["delta_dim"] == 3
    code, doc = call("kakeya", "multspan", "--q", "2", "--n", "2", "--ell", "2")
    assert code == 0 and doc["result"]["matrix_shape"] == [6, 4]
    code, doc = call("kakeya", "multspan", "--q", "13", "--n", "3", "--ell", "13")
    assert code == 3


def test_bounds_and_gamma():
    code, doc = call("bounds", "kakeya", "--n", "2", "--q", "5")
    assert doc["result"]["binom"] == "15" and doc["result"]["mult_bound"] == {"num": "625", "den": "81"}
    code, doc = call("gamma", "--p", "3", "--k", "3")
    assert code == 0 and doc["result"]["value"].startswith("2.755104")


def test_input_errors(files):
    assert call("degree", "--set", files["bad_json"])[0] == 2
    assert call("degree", "--set", files["bad_p"])[0] == 2
    assert call("degree", "--set", "/nonexistent.json")[0] == 2


def test_human_output(files):
    buf = _io.StringIO()
    assert run(["degree", "--set", files["A012"], "--human"], stdout=buf) == 0
    assert "deg" in buf.getvalue()


def test_selftest_and_entry_point():
    code, doc = call("selftest")
    assert code == 0 and all(c["ok"] for c in doc["result"]["checks"])
    out = subprocess.run([sys.executable, "-m", "shiftpoly", "bounds", "capset", "--n", "1", "--p", "3"], capture_output=True, text=True)
    assert out.returncode == 0 and json.loads(out.stdout)["result"]["proof_bound"] == "2"


# ---------------------------------------------------------------------------
# schema round trips


@st.composite
def polys(draw):
    p = draw(st.sampled_from([2, 3, 5, 7]))
    n = draw(st.integers(0, 3))
    terms = draw(st.dictionaries(st.tuples(*[st.integers(0, 5)] * n), st.integers(-20, 20), max_size=5))
    return Poly(p, n, terms)


@st.composite
def combos(draw):
    p = draw(st.sampled_from([2, 3, 5]))
    n = draw(st.integers(1, 3))
    pts = draw(st.lists(st.tuples(*[st.integers(0, p - 1)] * n), min_size=1, max_size=4, unique=True))
    A = PointMultiset(p, n, {a: draw(st.integers(1, 3)) for a in pts})
    vals = draw(st.lists(st.integers(0, p - 1), min_size=A.dim(), max_size=A.dim()))
    return ShiftCombo.from_values(A, vals)


@settings(max_examples=100)
@given(polys())
def test_poly_round_trip(f):
    doc = io.dump_poly(f)
    assert io.load_poly(doc) == f
    assert io.canonical_dumps(io.dump_poly(io.load_poly(json.loads(io.canonical_dumps(doc))))) == io.canonical_dumps(doc)


@settings(max_examples=100)
@given(combos())
def test_combo_and_multiset_round_trip(l):
    assert io.load_combo(io.dump_combo(l)) == l
    assert io.load_multiset(io.dump_multiset(l.base)) == l.base


def test_schema_rejections():
    with pytest.raises(errors.InvalidInput):
        io.load_poly({"p": 5, "n": 1, "terms": [{"exps": [1]}]})
    with pytest.raises(errors.InvalidInput):
        io.load_multiset({"p": 5, "n": 1, "points": [{"coords": [0]}, {"coords": [5]}]})
    with pytest.raises(errors.InvalidInput):
        io.load_combo({"p": 5, "n": 1, "terms": [{"coords": [0], "beta": [-1], "coeff": 1}]})
    with pytest.raises(errors.InvalidInput):
        io.load_family({"p": 3, "n": 1, "k": 3, "tuples": [[[0], [0]]]})
