import json
import os
import subprocess
import sys

import pytest

from qsi.cli import run
from qsi.fixtures import A3, K2, L1
from qsi.io import quiver_to_json


@pytest.fixture
def files(tmp_path):
    def put(name, data):
        p = tmp_path / name
        p.write_text(json.dumps(data))
        return str(p)

    return {
        "k2": put("k2.json", quiver_to_json(K2)),
        "l1": put("l1.json", quiver_to_json(L1)),
        "a3": put("a3.json", quiver_to_json(A3)),
        "phi_a": put("phi_a.json", {"source": {"1": 1}, "target": {"2": 1}, "entries": [["a"]]}),
        "phi_ab": put("phi_ab.json", {"source": {"1": 1}, "target": {"2": 2}, "entries": [["a", "b"]]}),
        "phi_loop": put("phi_loop.json", {"source": {"1": 1}, "target": {"1": 1}, "entries": [["e_1 + l"]]}),
        "phi_pivot": put("phi_pivot.json", {"source": {"1": 1, "2": 1}, "target": {"2": 2},
                                            "entries": [["a", "b"], ["e_2", "0"]]}),
        "s1": put("s1.json", {"dims": {"1": 1, "2": 0}, "maps": {"a": [], "b": []}}),
        "r10": put("r10.json", {"dims": {"1": 1, "2": 1}, "maps": {"a": [["1"]], "b": [["0"]]}}),
        "r01": put("r01.json", {"dims": {"1": 1, "2": 1}, "maps": {"a": [["0"]], "b": [["1"]]}}),
        "p10": put("p10.json", {"a": [["1"]], "b": [["0"]]}),
        "p21": put("p21.json", {"a": [["1"], ["0"]], "b": [["0"], ["1"]]}),
        "bad": put("bad.json", {"vertices": ["1"], "arrows": [{"id": "a", "from": "1", "to": "9"}]}),
        "dir": str(tmp_path),
    }


def ok(argv):
    code, out = run(argv)
    assert code == 0, out
    return out


def test_det(files):
    out = ok(["det", "--quiver", files["k2"], "--alpha", "1:2,2:2", "--map", files["phi_a"]])
    assert "P = x[a,1,1]*x[a,2,2] - x[a,1,2]*x[a,2,1]" in out
    assert "weight: 1:-1,2:1" in out and "semi-invariance: ok" in out


def test_det_non_square_is_input_error(files):
    code, out = run(["det", "--quiver", files["k2"], "--alpha", "1:1,2:2", "--map", files["phi_a"]])
    assert code == 1 and out.startswith("error:") and "non-square" in out


def test_component_and_trace(files):
    out = ok(["component", "--quiver", files["k2"], "--alpha", "1:2,2:1", "--map", files["phi_ab"],
              "--degree", "a:1"])
    assert "component = 0" in out
    out = ok(["trace", "--quiver", files["l1"], "--alpha", "1:2", "--cycle", "l"])
    assert "Tr = x[l,1,1] + x[l,2,2]" in out and "certificate identity: ok" in out


def test_weight_space(files):
    out = ok(["weight-space", "--quiver", files["l1"], "--alpha", "1:2", "--degree", "l:2"])
    assert "dimension: 2" in out


def test_span_check_equal(files):
    out = ok(["span-check", "--quiver", files["k2"], "--alpha", "1:2,2:2", "--degree", "a:1,b:1",
              "--strategy", "A"])
    assert "oracle=1 span=1 EQUAL" in out


def test_span_check_failure_exit_code(files):
    code, out = run(["span-check", "--quiver", files["l1"], "--alpha", "1:2", "--degree", "l:2",
                     "--strategy", "B", "--limit", "1"])
    assert code == 2 and "PROPER" in out and "verification failed" in out


def test_gamma(files):
    out = ok(["gamma", "--quiver", files["k2"], "--alpha", "1:2,2:2", "--show-poly"])
    assert "admissible Gamma: 1" in out and "check: ok" in out
    out = ok(["gamma", "--quiver", files["l1"], "--alpha", "1:1", "--degree", "l:2"])
    assert "polarized arrows: l_1:1->1,l_2:1->1" in out


def test_polarize_and_restitute(files):
    out = ok(["polarize", "--quiver", files["l1"], "--alpha", "1:1", "--degree", "l:2", "--poly", "x[l,1,1]^2"])
    assert "polarized = 2*x[l_1,1,1]*x[l_2,1,1]" in out
    out = ok(["restitute", "--quiver", files["l1"], "--alpha", "1:1", "--degree", "l:2",
              "--poly", "2*x[l_1,1,1]*x[l_2,1,1]"])
    assert "restituted = 2*x[l,1,1]^2" in out


def test_hom_ext(files):
    out = ok(["hom", "--quiver", files["k2"], "--rep", files["r10"], "--to", files["r01"]])
    assert "dim Hom = 0" in out
    out = ok(["ext", "--quiver", files["k2"], "--rep", files["r10"], "--to", files["r10"]])
    assert "dim Hom = 1; dim Ext = 1" in out and "presentation route: Hom = 1, Ext = 1" in out


def test_present_and_minimize(files):
    out = ok(["present", "--quiver", files["k2"], "--rep", files["s1"], "--minimize"])
    assert "AddMap([1] -> [2,2]: [a, b])" in out and "status: Injective" in out
    out = ok(["minimize", "--quiver", files["k2"], "--map", files["phi_pivot"]])
    assert "cancelled pivots: 2:1" in out and "AddMap([1] -> [2]: [b])" in out


def test_prb_and_perp(files):
    out = ok(["prb", "--quiver", files["k2"], "--rep", files["s1"], "--beta", "1:2,2:1"])
    assert "P_R,beta = x[a,1,1]*x[b,2,1] - x[a,2,1]*x[b,1,1]" in out
    out = ok(["perp", "--quiver", files["k2"], "--rep", files["s1"], "--beta", "1:2,2:1",
              "--point", files["p21"], "--cross-validate"])
    assert "det R_p(phi) != 0: yes" in out and "Hom = 0, Ext = 0" in out
    out = ok(["perp", "--quiver", files["l1"], "--map", files["phi_loop"], "--beta", "1:1", "--point", "origin"])
    assert "det R_p(phi) != 0: yes" in out


def test_semistable(files):
    out = ok(["semistable", "--quiver", files["k2"], "--beta", "1:1,2:1", "--point", files["p10"], "--workers", "1"])
    assert out.startswith("WITNESS") and "value at point: 1" in out and "T = cok: dims 1:1,2:1" in out
    out = ok(["semistable", "--quiver", files["k2"], "--beta", "1:1,2:1", "--point", "origin",
              "--max-len", "2", "--max-mult", "3", "--limit", "200", "--workers", "1"])
    assert out.startswith("UNDETERMINED") and "inconclusive" in out


def test_json_and_output(files):
    out = ok(["weight-space", "--quiver", files["l1"], "--alpha", "1:2", "--degree", "l:1", "--json"])
    assert json.loads(out)["dimension"] == 1
    target = os.path.join(files["dir"], "report.txt")
    assert ok(["weight-space", "--quiver", files["l1"], "--alpha", "1:2", "--degree", "l:1",
               "--output", target]) == ""
    with open(target) as fh:
        assert "dimension: 1" in fh.read()


def test_input_errors(files):
    code, out = run(["det", "--quiver", files["bad"], "--alpha", "1:1", "--map", files["phi_a"]])
    assert code == 1 and "error:" in out
    code, out = run(["weight-space", "--quiver", files["k2"], "--alpha", "1=2", "--degree", "a:1"])
    assert code == 1
    code, out = run(["weight-space", "--quiver", os.path.join(files["dir"], "missing.json"),
                     "--alpha", "1:1", "--degree", "a:1"])
    assert code == 1


def test_worker_count_does_not_change_output(files, monkeypatch):
    argv = ["span-check", "--quiver", files["l1"], "--alpha", "1:2", "--degree", "l:2",
            "--strategy", "B", "--max-len", "2", "--max-mult", "2", "--limit", "300"]
    one = run(argv + ["--workers", "1"])
    two = run(argv + ["--workers", "2"])
    monkeypatch.setenv("QSI_THREADS", "2")
    assert one == two == run(argv)
    assert one[0] == 0 and "EQUAL" in one[1]


def test_console_entry_point(files):
    proc = subprocess.run([sys.executable, "-m", "qsi.cli", "weight-space", "--quiver", files["k2"],
                           "--alpha", "1:1,2:1", "--degree", "a:1,b:1"], capture_output=True, text=True)
    assert proc.returncode == 0 and "dimension: 1" in proc.stdout
    proc = subprocess.run([sys.executable, "-m", "qsi.cli", "weight-space", "--quiver", files["bad"],
                           "--alpha", "1:1", "--degree", "a:1"], capture_output=True, text=True)
    assert proc.returncode == 1 and proc.stderr.startswith("error:")
