import csv
import io
import json
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from torickit import formats, validate
from torickit.cli import EXIT_INVALID, EXIT_OK, EXIT_PARSE, EXIT_UNSUPPORTED, main
from torickit.errors import ParseError

from conftest import DATA, GOLDEN


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def fan_rays_cones(f):
    return set(f.rays), {frozenset(f.rays[i] for i in c) for c in f.max_cones}


class TestFormats:
    def test_fan_round_trip(self, tmp_path):
        f = formats.read_fan(DATA / "f1.json")
        p = tmp_path / "f.json"
        formats.write_atomic(p, formats.dumps(formats.fan_to_doc(f)))
        assert formats.read_fan(p) == f

    def test_divisor_relative_fan(self):
        d = formats.read_divisor(DATA / "p2_d3.json")
        assert d.coeffs == (0, 0, 1) and d.fan == formats.read_fan(DATA / "p2.json")
        doc = formats.divisor_to_doc(d)
        assert formats.divisor_from_doc(doc) == d

    def test_polytope(self):
        P = formats.read_polytope(DATA / "square.json")
        assert formats.polytope_from_doc(formats.polytope_to_doc(P)).vertices == P.vertices

    def test_parse_errors(self, tmp_path):
        with pytest.raises(ParseError, match="rays"):
            formats.read_fan(DATA / "bad_entry.json")
        p = tmp_path / "broken.json"
        p.write_text('{\n  "rank": 2,\n  "rays": [[1, 0]\n')
        with pytest.raises(ParseError, match=r"broken.json:\d+:\d+"):
            formats.read_fan(p)
        with pytest.raises(ParseError):
            formats.fan_from_doc({"rank": 2, "rays": [[1, 0, 0]], "max_cones": [[0]]})
        with pytest.raises(ParseError):
            formats.fan_from_doc({"rank": 2, "rays": [[1, 0]]})
        with pytest.raises(ParseError):
            formats.fan_from_doc({"rank": True, "rays": [[1, 0]], "max_cones": [[0]]})

    def test_rational(self):
        assert formats.rational(Fraction(3, 7)) == "3/7"
        assert formats.rational(Fraction(4, 2)) == "2"
        assert formats.rational(-5) == "-5"

    @settings(max_examples=50, deadline=None)
    @given(st.recursive(st.none() | st.booleans() | st.integers() | st.text(max_size=5), lambda c: st.lists(c, max_size=4) | st.dictionaries(st.text(max_size=4), c, max_size=4), max_leaves=20))
    def test_dumps_is_json(self, doc):
        text = formats.dumps(doc)
        assert text.endswith("\n")
        assert json.loads(text) == doc


class TestExitCodes:
    def test_ok(self, capsys):
        code, out, _ = run(capsys, "check", "--fan", DATA / "p2.json")
        assert code == EXIT_OK and json.loads(out)["valid"]

    def test_parse(self, capsys):
        code, _, err = run(capsys, "check", "--fan", DATA / "bad_entry.json")
        assert code == EXIT_PARSE and "parse error" in err
        code, _, _ = run(capsys, "check", "--fan", DATA / "missing.json")
        assert code == EXIT_PARSE

    def test_invalid(self, capsys):
        code, out, _ = run(capsys, "check", "--fan", DATA / "bad_overlap.json")
        doc = json.loads(out)
        assert code == EXIT_INVALID and not doc["valid"] and doc["problems"]
        code, _, err = run(capsys, "dual", "--fan", DATA / "bad_overlap.json")
        assert code == EXIT_INVALID and "invalid fan" in err

    def test_unsupported(self, capsys):
        code, _, err = run(capsys, "classify-contact", "--fan", DATA / "p2.json")
        assert code == EXIT_UNSUPPORTED and "odd dimension" in err
        code, _, _ = run(capsys, "ptbundle", 0)
        assert code == EXIT_UNSUPPORTED

    @pytest.mark.parametrize("tol", ["1e-2", "0", "1e-16", "nan"])
    def test_tolerance_range(self, capsys, tol):
        with pytest.raises(SystemExit) as exc:
            main(["moment", "--divisor", str(DATA / "p2_d3.json"), "--tolerance", tol])
        assert exc.value.code == 2
        capsys.readouterr()

    def test_negative_samples(self, capsys):
        with pytest.raises(SystemExit):
            main(["moment", "--divisor", str(DATA / "p2_d3.json"), "--samples", "-1"])
        capsys.readouterr()


class TestCommands:
    @pytest.mark.parametrize("name", ["p1", "p2", "p1xp1", "f1", "p3", "p112"])
    def test_check_golden(self, capsys, tmp_path, name):
        out = tmp_path / "r.json"
        code, _, _ = run(capsys, "check", "--fan", DATA / f"{name}.json", "--out", out)
        assert code == EXIT_OK
        assert out.read_text() == (GOLDEN / f"check_{name}.json").read_text()

    def test_moment_zero_samples(self, capsys):
        code, out, err = run(capsys, "moment", "--divisor", DATA / "p2_d3.json", "--samples", 0)
        rows = list(csv.reader(io.StringIO(out)))
        assert code == EXIT_OK
        assert rows[0] == ["point_id", "type", "mu_1", "mu_2", "inside", "chart_cone"]
        assert len(rows) == 8 and all(r[1] == "distinguished" and r[4] == "true" for r in rows[1:])
        rep = json.loads(err)
        assert rep["points"] == 7 and rep["vertices_attained"] and rep["seed"] == 0

    def test_moment_out(self, capsys, tmp_path):
        p = tmp_path / "m.csv"
        code, out, _ = run(capsys, "moment", "--divisor", DATA / "p1xp1_11.json", "--samples", 50, "--seed", 4, "--out", p)
        rep = json.loads(out)
        assert code == EXIT_OK and rep["inside_fraction"] == 1.0 and rep["coeffs"] == [1, 0, 1, 0]
        assert len(p.read_text().splitlines()) == 1 + 9 + 50

    def test_moment_contact_default(self, capsys):
        code, out, err = run(capsys, "moment", "--fan", DATA / "p3.json", "--samples", 10)
        assert code == EXIT_OK and json.loads(err)["vertices_attained"]

    def test_divisor(self, capsys):
        code, out, _ = run(capsys, "divisor", "--divisor", DATA / "p2_d3.json")
        doc = json.loads(out)
        assert code == EXIT_OK
        assert doc["ample"] and doc["very_ample"] and doc["basepoint_free"] and doc["bounded"]
        assert doc["lattice_point_count"] == 3
        assert sorted(map(tuple, doc["vertices"])) == [("0", "0"), ("0", "1"), ("1", "0")]

    def test_classify_contact(self, capsys, tmp_path):
        code, out, _ = run(capsys, "classify-contact", "--fan", DATA / "p3.json")
        doc = json.loads(out)
        assert code == EXIT_OK and doc["verdict"] == "projective space" and doc["index"] == 2
        assert doc["isomorphic_to"] == "P^3" and len(doc["witness_matrix"]) == 3
        code, out, _ = run(capsys, "classify-contact", "--fan", DATA / "p1xp2.json")
        doc = json.loads(out)
        assert doc == {"verdict": "no contact structure", "index": None, "isomorphic_to": None, "witness_matrix": None}

    def test_hilbert(self, capsys):
        code, out, _ = run(capsys, "hilbert", "--fan", DATA / "a1.json")
        cone = json.loads(out)["cones"][0]
        assert code == EXIT_OK
        assert cone["hilbert_basis"] == [[0, 1], [1, 0], [2, -1]]
        assert cone["relations"] == ["Y1*Y3 - Y2^2"]

    def test_dual(self, capsys):
        code, out, _ = run(capsys, "dual", "--fan", DATA / "a1.json")
        assert json.loads(out)["cones"][0]["dual"] == [[0, 1], [2, -1]]

    @pytest.mark.parametrize(
        "argv",
        [
            ["wps", 1, 1, 2],
            ["wps", 1, 2, 3],
            ["ptbundle", 2],
            ["ptbundle", 3],
            ["product", "--fan", DATA / "p1.json", "--fan", DATA / "p2.json"],
            ["polytope-fan", "--polytope", DATA / "square.json"],
            ["resolve2d", "--fan", DATA / "a1.json"],
        ],
    )
    def test_emitted_fans_round_trip(self, capsys, tmp_path, argv):
        p = tmp_path / "out.json"
        code, _, _ = run(capsys, *argv, "--out", p)
        assert code == EXIT_OK
        f = formats.read_fan(p)
        assert validate(f).ok
        again = tmp_path / "again.json"
        formats.write_atomic(again, formats.dumps(formats.fan_to_doc(f)))
        assert again.read_text() == p.read_text()
        code, out, _ = run(capsys, "check", "--fan", p)
        assert code == EXIT_OK and json.loads(out)["valid"]

    def test_product_needs_two(self, capsys):
        code, _, _ = run(capsys, "product", "--fan", DATA / "p1.json")
        assert code == EXIT_PARSE

    def test_resolve2d_smooth(self, capsys, tmp_path):
        p = tmp_path / "r.json"
        run(capsys, "resolve2d", "--fan", DATA / "a1.json", "--out", p)
        f = formats.read_fan(p)
        assert f.is_smooth()
        assert fan_rays_cones(f)[0] == {(1, 0), (1, 1), (1, 2)}
