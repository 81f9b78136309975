import json

import pytest

from boolnet_forge.cli import main
from boolnet_forge.graph import network_from_json, network_to_json
from boolnet_forge.lipschitz import ripple_adder
from boolnet_forge.quant import DEMO_WEIGHTS, dot_relu_network


def _run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def _write(path, obj):
    path.write_text(json.dumps(obj))
    return path


@pytest.fixture
def real_net(tmp_path):
    doc = network_to_json(dot_relu_network())
    doc["params"] = DEMO_WEIGHTS
    return _write(tmp_path / "g1.json", doc)


def test_validate_ok_and_broken(tmp_path, capsys):
    good = _write(tmp_path / "adder.json", network_to_json(ripple_adder(2)))
    code, out, _ = _run(capsys, "validate", good)
    assert code == 0 and json.loads(out)["ok"]

    doc = network_to_json(ripple_adder(1))
    twin = dict(doc["vertices"][0])
    twin["name"] = "twin"
    doc["vertices"].append(twin)
    bad = _write(tmp_path / "bad.json", doc)
    code, out, err = _run(capsys, "validate", bad)
    assert code == 1
    assert "s0" in out + err


def test_usage_errors_exit_one(tmp_path, capsys):
    assert _run(capsys, "adder")[0] == 1
    assert _run(capsys, "adder", "--n", "2", "--bogus")[0] == 1
    assert _run(capsys, "validate", tmp_path / "missing.json")[0] == 1
    assert _run(capsys, "bnn", "compile", "--table", "011")[0] == 1
    assert _run(capsys, "bnn", "lower", "--w", "1,1", "--c", "5")[0] == 1


def test_adder_command(capsys):
    code, out, _ = _run(capsys, "adder", "--n", "2")
    assert code == 0 and json.loads(out)["min_constant"] == "1/1"
    code, out, _ = _run(capsys, "adder", "--n", "2", "--leaf", "carry-pass")
    assert json.loads(out)["min_constant"] == "4/1"


def test_lipschitz_command(tmp_path, capsys):
    net = _write(tmp_path / "adder.json", network_to_json(ripple_adder(1)))
    code, out, _ = _run(capsys, "lipschitz", net, "--d", "L1: bin[1] | bin[1] | bit", "--e", "L1: bin[2]", "--k", "1")
    doc = json.loads(out)
    assert code == 0 and doc["is_k_lipschitz"] is True


def test_enumerate_pairs_and_determinism(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    code, out, _ = _run(capsys, "decouple", "enumerate", "--k", "2", "--out", a, "--jobs", "1")
    assert code == 0 and out.splitlines()[0] == "pairs: 376"
    _run(capsys, "decouple", "enumerate", "--k", "2", "--out", b, "--jobs", "2")
    lines = a.read_text().splitlines()
    assert lines[0] == "f1_bits_s,f1_bits_t,f0_bits_s,f0_bits_t"
    assert len(lines) == 377
    assert a.read_bytes() == b.read_bytes()

    code, out, _ = _run(capsys, "decouple", "biclique", "--pairs", a)
    doc = json.loads(out)
    assert code == 0 and doc["size"] == [6, 10]
    bic = _write(tmp_path / "b.json", doc)
    code, out, _ = _run(capsys, "decouple", "verify", "--biclique", bic)
    assert code == 0 and json.loads(out)["verified"]
    assert _run(capsys, "decouple", "biclique", "--pairs", a, "--size", "10,6")[0] == 1


def test_bnn_commands(tmp_path, capsys):
    code, out, _ = _run(capsys, "bnn", "gadgets")
    assert code == 0 and out.splitlines()[-1] == "verified"
    code, out, _ = _run(capsys, "bnn", "compile", "--table", "0110", "--out", tmp_path / "x.json")
    assert code == 0 and "equivalence: verified (4 assignments)" in out
    code, out, _ = _run(capsys, "bnn", "lower", "--w", "+1,-1,+1", "--c", "1")
    assert code == 0 and "equivalence: verified (8 assignments)" in out


def test_quantize_synth_commute(tmp_path, capsys, real_net):
    g2, g3 = tmp_path / "g2.json", tmp_path / "g3.json"
    assert _run(capsys, "quantize", "--net", real_net, "--format", "4,2", "--out", g2)[0] == 0
    assert _run(capsys, "synth", "--net", g2, "--out", g3)[0] == 0
    code, out, _ = _run(capsys, "commute", "--g2", g2, "--g3", g3)
    doc = json.loads(out)
    assert code == 0 and doc["commutes"] and doc["assignments"] == 256

    small = tmp_path / "g3s.json"
    code, out, _ = _run(capsys, "simplify", "--net", g3, "--out", small)
    counts = json.loads(out)
    assert counts["vertices_after"] <= counts["vertices_before"]
    assert _run(capsys, "commute", "--g2", g2, "--g3", small)[0] == 0

    code, out, _ = _run(capsys, "estimate", "--a", real_net, "--b", g2, "--n", "200", "--seed", "1")
    assert code == 0 and 0 <= json.loads(out)["estimate"] < 0.5


def test_guard_exits_two(tmp_path, capsys, real_net):
    g2, g3 = tmp_path / "g2.json", tmp_path / "g3.json"
    _run(capsys, "quantize", "--net", real_net, "--format", "11,0", "--out", g2)
    _run(capsys, "synth", "--net", g2, "--out", g3)
    code, _, err = _run(capsys, "commute", "--g2", g2, "--g3", g3)
    assert code == 2 and "refused" in err


def test_export_dot_and_roundtrip(tmp_path, capsys):
    net = ripple_adder(2)
    src = _write(tmp_path / "adder.json", network_to_json(net))
    dot = tmp_path / "adder.dot"
    assert _run(capsys, "export-dot", src, "--out", dot)[0] == 0
    assert _run(capsys, "validate", dot)[0] == 0
    code, out, _ = _run(capsys, "adder", "--n", "2", "--out", tmp_path / "again.json")
    assert network_from_json(json.loads((tmp_path / "again.json").read_text())) == net


def test_outputs_are_byte_identical(tmp_path, capsys):
    outs = []
    for name in ("one", "two"):
        path = tmp_path / f"{name}.json"
        _run(capsys, "bnn", "compile", "--table", "00010111", "--out", path)
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]


def test_eval_command(tmp_path, capsys, real_net):
    inputs = _write(tmp_path / "in.json", {"x": 1.0, "y": 1.0})
    code, out, _ = _run(capsys, "eval", real_net, "--inputs", inputs)
    assert code == 0 and json.loads(out)["d"] == pytest.approx(0.5)
