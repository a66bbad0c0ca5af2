import json
import math

import numpy as np
import pytest

from convexinfo import cli
from convexinfo.errors import ValidationError


@pytest.fixture()
def square_file(tmp_path):
    path = tmp_path / "square.json"
    path.write_text(json.dumps({"kind": "regular_polygon", "n": 4}))
    return str(path)


@pytest.fixture()
def quad_file(tmp_path):
    path = tmp_path / "quad.json"
    path.write_text(json.dumps({"kind": "custom_polytope",
                                "vertices": [[1, 0], [-1, 0], [0, 1], [0, -2]]}))
    return str(path)


@pytest.fixture()
def ensemble_file(tmp_path):
    path = tmp_path / "zero_plus.json"
    doc = {"weights": [0.5, 0.5],
           "states": [[[[1, 0], [0, 0]], [[0, 0], [0, 0]]],
                      [[[0.5, 0], [0.5, 0]], [[0.5, 0], [0.5, 0]]]]}
    path.write_text(json.dumps(doc))
    return str(path)


@pytest.fixture()
def rho_file(tmp_path):
    path = tmp_path / "rho.json"
    path.write_text(json.dumps([[[0.7, 0], [0, 0]], [[0, 0], [0.3, 0]]]))
    return str(path)


def run(capsys, argv):
    code = cli.main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_entropy_value(capsys):
    code, out, _ = run(capsys, ["entropy", "--pair", "shannon", "--p", "0.5,0.5"])
    assert code == 0
    doc = json.loads(out)
    assert doc["value"] == pytest.approx(math.log(2), abs=1e-9)


def test_entropy_bits_flag(capsys):
    code, out, _ = run(capsys, ["entropy", "--pair", "shannon", "--p", "0.5,0.5", "--bits"])
    assert json.loads(out)["value"] == pytest.approx(1.0, abs=1e-9)


def test_entropy_general_on_model(capsys, quad_file):
    code, out, _ = run(capsys, ["entropy", "--model", quad_file, "--state", "0,0",
                                "--general"])
    assert code == 0
    doc = json.loads(out)
    assert doc["spectral_entropy"] == pytest.approx(0.636514, abs=1e-5)
    assert doc["frame_entropy"] == pytest.approx(0.636514, abs=1e-5)
    assert doc["argmin_frame"] == [2, 3]


def test_spectrum_square_center(capsys, square_file):
    code, out, _ = run(capsys, ["spectrum", "--model", square_file, "--state", "0,0"])
    assert code == 0
    doc = json.loads(out)
    assert doc["exists"] is True
    assert doc["weights"] == [0.5, 0.5]


def test_spectrum_no_majorant_plain_and_strict(capsys, quad_file):
    code, out, _ = run(capsys, ["spectrum", "--model", quad_file, "--state", "0.4,0.25"])
    assert code == 0
    assert json.loads(out)["exists"] is False
    code, out, err = run(capsys, ["spectrum", "--model", quad_file,
                                  "--state", "0.4,0.25", "--strict"])
    assert code == 3
    assert out == ""
    assert "majorant" in err


def test_qentropy_min_search(capsys, rho_file):
    argv = ["qentropy", "--rho", rho_file, "--min-search", "--budget", "200",
            "--seed", "7"]
    code, out, _ = run(capsys, argv)
    assert code == 0
    doc = json.loads(out)
    assert doc["value"] == pytest.approx(0.610864, abs=1e-6)
    assert doc["search_value"] == pytest.approx(doc["value"], abs=1e-9)


def test_majorize_classical(capsys):
    code, out, _ = run(capsys, ["majorize", "--p", "0.5,0.5", "--q", "1,0"])
    assert json.loads(out)["majorized"] is True
    code, out, _ = run(capsys, ["majorize", "--p", "0.6,0.4", "--q", "0.5,0.5"])
    assert json.loads(out)["majorized"] is False


def test_majorize_on_model(capsys, square_file):
    code, out, _ = run(capsys, ["majorize", "--model", square_file,
                                "--state", "0,0", "--other", "1,0"])
    assert json.loads(out) == {"majorized": True, "defined": True}


def test_majorize_undefined_spectrum(capsys, quad_file):
    argv = ["majorize", "--model", quad_file, "--state", "0,0", "--other", "0.4,0.25"]
    code, out, _ = run(capsys, argv)
    assert code == 0
    assert json.loads(out) == {"majorized": None, "defined": False}
    code, _, err = run(capsys, argv + ["--strict"])
    assert code == 3


def test_frames_square(capsys, square_file):
    code, out, _ = run(capsys, ["frames", "--model", square_file])
    doc = json.loads(out)
    assert [f["vertices"] for f in doc["frames"]] == [[0, 2], [1, 3]]


def test_holevo(capsys, ensemble_file):
    code, out, _ = run(capsys, ["holevo", "--ensemble", ensemble_file])
    doc = json.loads(out)
    assert doc["chi"] == pytest.approx(0.4164955307, abs=1e-9)
    assert doc["hx"] == pytest.approx(math.log(2), abs=1e-9)
    assert doc["strict_gap"] is True


def test_holevo_bits(capsys, ensemble_file):
    code, out, _ = run(capsys, ["holevo", "--ensemble", ensemble_file, "--bits"])
    doc = json.loads(out)
    assert doc["chi"] == pytest.approx(0.6008760367, abs=1e-9)


def test_separable_pr_box_and_product(capsys, tmp_path, square_file):
    from convexinfo import ProductSpace, build_model, pr_box
    square = build_model("regular_polygon", n=4)
    ps = ProductSpace(square, square)
    box_path = tmp_path / "box.json"
    box_path.write_text(json.dumps({"table": [list(r) for r in pr_box(ps).as_array()]}))
    code, out, _ = run(capsys, ["separable", "--model-a", square_file,
                                "--model-b", square_file, "--joint", str(box_path)])
    doc = json.loads(out)
    assert doc["separable"] is False
    assert doc["max_member"] is True
    assert doc["classification"] == "entangled"

    prod_path = tmp_path / "prod.json"
    table = np.outer(square.vertex_array()[0], square.vertex_array()[1])
    prod_path.write_text(json.dumps([list(r) for r in table]))
    code, out, _ = run(capsys, ["separable", "--model-a", square_file,
                                "--model-b", square_file, "--joint", str(prod_path)])
    doc = json.loads(out)
    assert doc["separable"] is True
    assert doc["witness"] == [{"a": 0, "b": 1, "weight": 1.0}]


def test_sweep_csv(capsys):
    code, out, _ = run(capsys, ["sweep", "--family", "renyi", "--grid", "0.5:0.9:5",
                                "--p", "0.5,0.3,0.2"])
    lines = out.strip().split("\n")
    assert lines[0] == "parameter,value"
    assert len(lines) == 6
    for line in lines[1:]:
        parameter, value = line.split(",")
        float(parameter), float(value)


def test_validation_errors_exit_2(capsys, square_file):
    code, _, err = run(capsys, ["entropy", "--pair", "shannon", "--p", "0.5,0.6"])
    assert code == 2 and "error" in err
    code, _, err = run(capsys, ["entropy", "--pair", "renyi:1.0", "--p", "0.5,0.5"])
    assert code == 2
    code, _, err = run(capsys, ["entropy", "--pair", "shannon", "--p", "a,b"])
    assert code == 2 and "--p" in err
    code, _, err = run(capsys, ["spectrum", "--model", square_file, "--state", "5,5"])
    assert code == 2
    code, _, err = run(capsys, ["sweep", "--family", "renyi", "--grid", "bad",
                                "--p", "0.5,0.5"])
    assert code == 2 and "--grid" in err


def test_usage_error_exits_2(capsys):
    with pytest.raises(SystemExit) as err:
        cli.main(["spectrum"])  # missing required flags
    assert err.value.code == 2


def test_deterministic_output(capsys, square_file, rho_file):
    outputs = set()
    for _ in range(5):
        _, out, _ = run(capsys, ["spectrum", "--model", square_file, "--state", "0,0"])
        outputs.add(out)
        _, out2, _ = run(capsys, ["qentropy", "--rho", rho_file, "--min-search",
                                  "--budget", "150", "--seed", "9"])
        outputs.add(out2)
    assert len(outputs) == 2


def test_round12_rejects_non_finite():
    with pytest.raises(ValidationError):
        cli._round12(float("inf"))
    with pytest.raises(ValidationError):
        cli._round12({"x": float("nan")})


def test_custom_pair_file(capsys, tmp_path):
    xs = list(np.linspace(0.0, 1.0, 2001))
    desc = {
        "regime": "h-increasing/phi-concave",
        "phi": {"x": xs, "y": [-x * math.log(x) if x > 0 else 0.0 for x in xs]},
        "h": {"x": [0.0, math.log(16)], "y": [0.0, math.log(16)]},
        "name": "tabulated",
    }
    path = tmp_path / "pair.json"
    path.write_text(json.dumps(desc))
    code, out, _ = run(capsys, ["entropy", "--pair-file", str(path), "--p", "0.5,0.5"])
    assert code == 0
    assert json.loads(out)["value"] == pytest.approx(math.log(2), abs=1e-5)


def test_holevo_with_povm_file(capsys, tmp_path, ensemble_file):
    povm_path = tmp_path / "povm.json"
    povm_path.write_text(json.dumps([
        [[[1, 0], [0, 0]], [[0, 0], [0, 0]]],
        [[[0, 0], [0, 0]], [[0, 0], [1, 0]]],
    ]))
    code, out, _ = run(capsys, ["holevo", "--ensemble", ensemble_file,
                                "--povm", str(povm_path)])
    doc = json.loads(out)
    assert doc["accessible"] == pytest.approx(0.215761, abs=1e-5)
    assert doc["accessible"] <= doc["chi"] + 1e-9


def test_entropy_general_handles_missing_spectrum(capsys, quad_file):
    argv = ["entropy", "--model", quad_file, "--state", "0.4,0.25", "--general"]
    code, out, _ = run(capsys, argv)
    assert code == 0
    doc = json.loads(out)
    assert doc["spectral_entropy"] is None
    assert doc["frame_entropy"] > 0.0
    code, _, err = run(capsys, argv + ["--strict"])
    assert code == 3


def test_lp_debug_subcommand(capsys, tmp_path):
    path = tmp_path / "lp.json"
    path.write_text(json.dumps({
        "objective": [1.0],
        "constraints": [[[1.0], "<=", 3.0]],
        "maximize": True,
    }))
    code, out, _ = run(capsys, ["lp", "--file", str(path)])
    assert code == 0
    doc = json.loads(out)
    assert doc["status"] == "optimal"
    assert doc["value"] == 3.0
