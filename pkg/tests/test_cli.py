import json
import subprocess
import sys

import pytest

from pix.certificates import SCHEMA, CertificateBundle, regenerate, verify_bundle, write_atomic
from pix.cli import main

from conftest import GOLDEN

BUNDLES = sorted(p.name for p in GOLDEN.glob("*.json") if not p.name.startswith("trace"))


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out + out.err


def test_admissible_exit_codes(capsys):
    assert run(capsys, "admissible", "2", "1", "2")[0] == 0
    code, out = run(capsys, "admissible", "1", "2", "8")
    assert code == 1 and "violated" in out
    with pytest.raises(SystemExit) as exc:
        main(["admissible", "2", "x", "2"])
    assert exc.value.code == 2


def test_derive_writes_trace(tmp_path, capsys):
    out = tmp_path / "t.json"
    code, text = run(capsys, "derive", "4", "1", "2", "--trace", str(out))
    assert code == 0 and "I(Y) = 2" in text
    steps = json.loads(out.read_text())
    assert isinstance(steps, list)
    assert all(set(s) == {"claim", "kind", "operands", "justification_tag"} for s in steps)
    assert {s["kind"] for s in steps} <= {"divides", "equals", "parity", "assumption"}
    assert run(capsys, "derive", "3", "2", "4")[0] == 1


def test_forge_and_verify(tmp_path, capsys):
    out = tmp_path / "c1.json"
    code, text = run(capsys, "forge", "case1", "--b", "1", "--c", "2", "--a", "-3", "--out", str(out))
    assert code == 0 and "(P, I) = (1, 1)" in text
    assert run(capsys, "verify", str(out))[0] == 0
    code, text = run(capsys, "forge", "case1", "--b", "1", "--c", "2", "--a", "1", "--out", str(out))
    assert code == 1 and "degenerate parameter" in text
    assert [p.name for p in tmp_path.iterdir()] == ["c1.json"]


def test_verify_missing_file(capsys, tmp_path):
    assert run(capsys, "verify", str(tmp_path / "nope.json"))[0] == 2


def test_verify_schema_mismatch(capsys, tmp_path):
    p = tmp_path / "b.json"
    p.write_text(json.dumps({"version": "pix/0"}))
    code, text = run(capsys, "verify", str(p))
    assert code == 1 and "schema mismatch" in text
    p.write_text("{not json")
    assert run(capsys, "verify", str(p))[0] == 1


def test_pipeline(capsys, tmp_path):
    out = tmp_path / "p.json"
    code, text = run(capsys, "pipeline", "4", "3", "3", "--b", "1", "--c", "2", "--out", str(out))
    assert code == 0 and "case i" in text
    b = CertificateBundle.loads(out.read_text())
    assert b.conclusions == {"genus": "4", "period": "3", "index": "3"}
    assert run(capsys, "pipeline", "3", "2", "4", "--b", "1", "--c", "2")[0] == 1


def test_localtest(capsys):
    code, text = run(capsys, "localtest", "--coeffs", "1,0,0,0,0,0,1", "--p", "3")
    assert code == 0 and "yes" in text
    code, text = run(capsys, "localtest", "--coeffs", "2 0 0 0 0 0 3", "--p", "3")
    assert code == 1 and "no" in text


def test_console_script_entry_point():
    r = subprocess.run([sys.executable, "-m", "pix.cli", "admissible", "2", "2", "2"], capture_output=True, text=True)
    assert r.returncode == 0


def test_atomic_write_replaces(tmp_path):
    p = tmp_path / "x.json"
    write_atomic(p, "a")
    write_atomic(p, "b")
    assert p.read_text() == "b" and len(list(tmp_path.iterdir())) == 1


@pytest.mark.parametrize("name", BUNDLES)
def test_golden_round_trip_and_regeneration(name):
    text = (GOLDEN / name).read_text()
    b = CertificateBundle.loads(text)
    assert b.version == SCHEMA
    assert b.dumps() == text
    assert regenerate(b).dumps() == text


@pytest.mark.parametrize("name", BUNDLES)
def test_golden_verifies(name):
    assert verify_bundle(CertificateBundle.loads((GOLDEN / name).read_text())) == []


def _set(path):
    def mutate(d):
        node = d
        for k in path[:-2]:
            node = node[k]
        node[path[-2]] = path[-1]
    return mutate


MUTATIONS = {
    "alpha replaced by a residue": ("case2_b1_c2.json", _set(["artifacts", "params", "alpha", "4"]), "alpha nonresidue"),
    "pi shifted": ("case2_b1_c2.json", _set(["artifacts", "params", "pi", "120123"]), "pi"),
    "modulus changed": ("case2_b1_c2.json", _set(["artifacts", "params", "modulus", "M", "120121"]), "modulus"),
    "period claim": ("case2_b1_c2.json", _set(["conclusions", "period", "1"]), "conclusions"),
    "witness moved": (
        "case2_b1_c2.json",
        lambda d: d["artifacts"]["deficiency_report"]["certificates"][20]["data"]["witness"].update(z="1"),
        "witness",
    ),
    "deficiency flag dropped": (
        "case2_b1_c2.json",
        lambda d: d["artifacts"]["deficiency_report"]["certificates"][-1].update(deficient=False),
        "deficient",
    ),
    "model coefficient": ("case1_b1_c2.json", _set(["artifacts", "model", "coefficients", 0, "-61"]), "divergence"),
    "divisor identity": (
        "case3_b1_c2.json",
        lambda d: d["artifacts"]["divisor_certificate"]["sigma_D_minus_D"][0].update(multiplicity="2"),
        "divisor identity",
    ),
    "trace conclusion": (
        "pipeline_4_1_2.json",
        lambda d: d["artifacts"]["derivation_trace"]["steps"][-1].update(operands=["I_Y", "1"]),
        "trace",
    ),
    "schema version": ("case1_b1_c2.json", _set(["version", "pix/2"]), "schema"),
}


@pytest.mark.parametrize("label", sorted(MUTATIONS))
def test_mutation_is_rejected(label, tmp_path, capsys):
    name, mutate, needle = MUTATIONS[label]
    data = json.loads((GOLDEN / name).read_text())
    mutate(data)
    p = tmp_path / name
    p.write_text(json.dumps(data))
    code, text = run(capsys, "verify", str(p))
    assert code != 0
    assert needle in text


def test_trace_golden_is_reproduced_and_checks(tmp_path, capsys):
    from pix.tracecheck import check_trace

    out = tmp_path / "trace.json"
    assert run(capsys, "derive", "4", "1", "2", "--trace", str(out))[0] == 0
    assert out.read_text() == (GOLDEN / "trace_4_1_2.json").read_text()
    env = check_trace(json.loads(out.read_text()))
    assert (env["P_Y"], env["I_Y"], env["g_Y"]) == (1, 2, 4)
