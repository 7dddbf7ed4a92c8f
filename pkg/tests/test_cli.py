import json

import numpy as np
import pytest
from numpy.testing import assert_allclose

from dilations import jsonio, matcore as mc
from dilations.channels import Dilation, MixedUnitaryDecomposition, amplitude_damping
from dilations.cli import run
from dilations.thermal import gibbs

I2 = np.eye(2)


def write(tmp_path, name, obj):
    path = tmp_path / name
    jsonio.dump(obj, path)
    return str(path)


def dilation_file(tmp_path, name, U, env, ds, de):
    return write(tmp_path, name, jsonio.dilation_to_json(Dilation(U, env, ds, de)))


def matrix_file(tmp_path, name, m):
    return write(tmp_path, name, jsonio.matrix_to_json(m))


def output(capsys):
    return json.loads(capsys.readouterr().out)


def test_verify_catalytic_cnot(tmp_path, capsys):
    path = dilation_file(tmp_path, "d.json", mc.CNOT, I2 / 2, 2, 2)
    assert run(["verify", "catalytic", "--dilation", path]) == 0
    out = output(capsys)
    assert out["passed"] and out["structural"]["passed"]


def test_verify_catalytic_swap_witness(tmp_path, capsys):
    path = dilation_file(tmp_path, "swap.json", mc.swap(2), I2 / 2, 2, 2)
    assert run(["verify", "catalytic", "--dilation", path]) == 1
    w = output(capsys)["witness"]
    assert w["residual"] == "marginal_residual"
    assert w["value"] == pytest.approx(np.sqrt(3) / 4)
    assert w["threshold"] == 1e-9
    assert w["block"]["rows"] == 4


def test_build_schur_then_verify(tmp_path, capsys):
    x = write(tmp_path, "x.json", {"n": 3, "x": [[1, 0.5, 0], [0.5, 1, 0.5], [0, 0.5, 1]]})
    dil = str(tmp_path / "dil.json")
    assert run(["build", "schur", "--matrix", x, "--out", dil]) == 0
    assert output(capsys)["report"]["passed"]
    assert run(["verify", "catalytic", "--dilation", dil]) == 0


def test_batch_ordering(tmp_path, capsys):
    batch = tmp_path / "batch"
    batch.mkdir()
    dilation_file(batch, "b_swap.json", mc.swap(2), I2 / 2, 2, 2)
    dilation_file(batch, "a_cnot.json", mc.CNOT, I2 / 2, 2, 2)
    assert run(["verify", "catalytic", "--batch", str(batch)]) == 1
    rows = output(capsys)["results"]
    assert [r["file"] for r in rows] == ["a_cnot.json", "b_swap.json"]
    assert [r["passed"] for r in rows] == [True, False]


def test_verify_equilibrating(tmp_path, capsys):
    w = np.diag([0.7, 0.3])
    d = dilation_file(tmp_path, "d.json", mc.swap(2), w, 2, 2)
    assert run(["verify", "equilibrating", "--dilation", d, "--state", matrix_file(tmp_path, "w.json", w)]) == 0
    s = matrix_file(tmp_path, "s.json", np.diag([0.9, 0.1]))
    capsys.readouterr()
    assert run(["verify", "equilibrating", "--dilation", d, "--state", s]) == 1
    assert output(capsys)["witness"]["value"] == pytest.approx(0.2)


def test_verify_thermal(tmp_path, capsys):
    H = np.diag([0.0, 1.0])
    w, _ = gibbs(H, 0.5)
    d = dilation_file(tmp_path, "d.json", mc.swap(2), w, 2, 2)
    h = matrix_file(tmp_path, "h.json", H)
    assert run(["verify", "thermal", "--dilation", d, "--h-sys", h, "--h-env", h, "--beta", "0.5"]) == 0
    capsys.readouterr()
    assert run(["verify", "thermal", "--dilation", d, "--h-sys", h, "--h-env", h, "--beta", "0.9"]) == 1
    assert output(capsys)["witness"]["residual"] == "gibbs_environment"


def test_thermal_requires_beta(tmp_path):
    d = dilation_file(tmp_path, "d.json", np.eye(4), I2 / 2, 2, 2)
    assert run(["verify", "thermal", "--dilation", d, "--h-sys", d, "--h-env", d]) == 2


def test_verify_dual(tmp_path, capsys):
    assert run(["verify", "dual", "--unitary", matrix_file(tmp_path, "s.json", mc.swap(2)),
                "--dims", "2", "2"]) == 0
    capsys.readouterr()
    assert run(["verify", "dual", "--unitary", matrix_file(tmp_path, "c.json", mc.CNOT),
                "--dims", "2", "2"]) == 1
    assert output(capsys)["witness"]["value"] == pytest.approx(1.0)


def test_verify_multipartite(tmp_path, capsys):
    w = np.diag([0.6, 0.4])
    files = [matrix_file(tmp_path, f"w{k}.json", w) for k in range(3)]
    U = matrix_file(tmp_path, "u.json", np.kron(mc.swap(2), I2))
    assert run(["verify", "multipartite", "--unitary", U, "--states", *files]) == 0


def test_verify_robust(tmp_path, capsys):
    H = np.diag([0.0, 1.0])
    w, _ = gibbs(H, 0.8)
    swap_cb = np.kron(I2, mc.swap(2))
    U = swap_cb  # catalyst and bath exchange identical Gibbs states
    files = dict(unitary=matrix_file(tmp_path, "u.json", U), w=matrix_file(tmp_path, "w.json", w))
    args = ["verify", "robust", "--unitary", files["unitary"], "--omega-a", files["w"],
            "--tau-c", files["w"], "--omega-b", files["w"], "--omega-c", files["w"], "--beta", "0.8"]
    assert run(args) == 0
    tau = matrix_file(tmp_path, "t.json", w + 1e-3 * np.diag([1.0, -1.0]))
    args[args.index("--tau-c") + 1] = tau
    capsys.readouterr()
    assert run(args) == 1
    assert output(capsys)["witness"]["value"] == pytest.approx(1e-3)


def test_build_mixed_unitary_and_gibbs(tmp_path, capsys):
    dec = write(tmp_path, "dec.json", jsonio.decomposition_to_json(
        MixedUnitaryDecomposition([0.7, 0.3], [I2, mc.PAULI_X])))
    assert run(["build", "mixed-unitary", "--decomposition", dec]) == 0
    dil = jsonio.dilation_from_json(output(capsys))
    assert_allclose(dil.omega_env, np.diag([0.7, 0.3]))
    h = matrix_file(tmp_path, "h.json", np.diag([0.0, 1.0]))
    assert run(["build", "gibbs", "--hamiltonian", h, "--beta", "1.0"]) == 0
    rho = jsonio.matrix_from_json(output(capsys))
    assert_allclose(rho, np.diag([1, np.exp(-1)]) / (1 + np.exp(-1)))


def test_decompose_and_search(tmp_path, capsys):
    d = dilation_file(tmp_path, "d.json", mc.CNOT, I2 / 2, 2, 2)
    hb = matrix_file(tmp_path, "hb.json", np.array([[1, 1], [1, -1]]) / np.sqrt(2))
    assert run(["decompose", "factorizable", "--dilation", d, "--basis", hb]) == 0
    out = output(capsys)
    assert out["average_residual"] < 1e-9 and len(out["components"]) == 2
    assert run(["search", "extremality", "--dilation", d]) == 0
    assert output(capsys)["result"] == "NOT_EXTREMAL"


def test_classify(tmp_path, capsys):
    ch = write(tmp_path, "ad.json", jsonio.channel_to_json(amplitude_damping(0.3)))
    assert run(["classify", "--channel", ch]) == 0
    assert set(output(capsys)["status"].values()) == {"CERTIFIED_OUT"}
    d = dilation_file(tmp_path, "d.json", mc.CNOT, I2 / 2, 2, 2)
    assert run(["classify", "--dilation", d]) == 0
    assert output(capsys)["status"]["CAT"] == "CERTIFIED_IN"


def test_random_deterministic(tmp_path, capsys):
    assert run(["random", "unitary", "--dim", "3", "--seed", "5"]) == 0
    a = capsys.readouterr().out
    assert run(["random", "unitary", "--dim", "3", "--seed", "5"]) == 0
    assert capsys.readouterr().out == a
    assert mc.is_unitary(jsonio.matrix_from_json(json.loads(a)))
    assert run(["random", "schur", "--n", "4", "--rank", "2"]) == 0
    assert json.loads(capsys.readouterr().out)["n"] == 4


def test_input_errors(tmp_path, capsys):
    assert run(["frobnicate"]) == 2
    assert run(["verify", "catalytic", "--dilation", str(tmp_path / "missing.json")]) == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(["verify", "catalytic", "--dilation", str(bad)]) == 2
    nonunitary = write(tmp_path, "nu.json", {"dim_sys": 2, "dim_env": 2,
                                              "unitary": jsonio.matrix_to_json(np.ones((4, 4))),
                                              "env_state": jsonio.matrix_to_json(I2 / 2)})
    assert run(["verify", "catalytic", "--dilation", nonunitary]) == 2
