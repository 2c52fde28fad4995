import json
from importlib import resources

import jsonschema
import pytest

from glmg.cli import main


def run(tmp_path, *argv):
    out = tmp_path / "out.dat"
    code = main(list(argv) + ["--out", str(out)])
    return code, out


@pytest.fixture(scope="module")
def output_schema():
    text = resources.files("glmg.schemas").joinpath("output.schema.json").read_text()
    return json.loads(text)


def validate(path, schema):
    payload = json.loads(path.read_text())
    jsonschema.validate(payload, schema)
    return payload


class TestEntropyCommand:
    def test_exact_row(self, tmp_path):
        code, out = run(tmp_path, "entropy", "--m", "1", "--h", "0", "--N", "4", "--L", "2")
        assert code == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "quantity,mode,q,value,flag"
        s_row = lines[1].split(",")
        assert s_row[0] == "von_neumann" and s_row[1] == "exact"
        assert float(s_row[3]) == pytest.approx(0.867563, abs=1e-6)

    def test_zero_block(self, tmp_path):
        code, out = run(tmp_path, "entropy", "--m", "1", "--h", "0", "--N", "4", "--L", "0")
        assert code == 0
        assert float(out.read_text().splitlines()[1].split(",")[3]) == 0.0

    def test_bad_q_exits_2(self, tmp_path):
        code, _ = run(tmp_path, "entropy", "--m", "1", "--h", "0", "--N", "4",
                      "--L", "2", "--q", "0")
        assert code == 2

    def test_json_validates(self, tmp_path, output_schema):
        code, out = run(tmp_path, "entropy", "--m", "2", "--h", "0.2,0.2",
                        "--L", "1000", "--alpha", "0.5", "--format", "json")
        assert code == 0
        payload = validate(out, output_schema)
        vn = [r for r in payload["rows"] if r["quantity"] == "von_neumann"][0]
        assert vn["value"] == pytest.approx(7.3315, abs=5e-5)

    def test_model_file(self, tmp_path):
        cfg = tmp_path / "model.json"
        cfg.write_text(json.dumps({"m": 1, "c": [1.0], "h": [0.0],
                                   "coupling": {"scheme": "constant",
                                                "params": {"value": 1.0}}}))
        code, out = run(tmp_path, "entropy", "--model", str(cfg), "--N", "4", "--L", "2")
        assert code == 0


class TestSpectrumCommand:
    def test_csv(self, tmp_path):
        code, out = run(tmp_path, "spectrum", "--m", "1", "--h", "0", "--N", "4", "--L", "2")
        assert code == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "L1,lambda"
        assert len(lines) == 4

    def test_json_validates(self, tmp_path, output_schema):
        code, out = run(tmp_path, "spectrum", "--m", "2", "--h", "0,0", "--N", "6",
                        "--L", "3", "--format", "json")
        assert code == 0
        payload = validate(out, output_schema)
        assert len(payload["entries"]) == 7

    def test_missing_args_exit_2(self, tmp_path):
        code, _ = run(tmp_path, "spectrum", "--m", "1", "--h", "0")
        assert code == 2

    def test_support_cap_exit_3(self, tmp_path):
        code, _ = run(tmp_path, "spectrum", "--m", "3", "--h", "0,0,0",
                      "--N", "4000", "--L", "2000")
        assert code == 3


class TestPhaseCommand:
    def test_strip_point(self, tmp_path):
        code, out = run(tmp_path, "phase", "--m", "2", "--c", "1,1", "--h", "2,2")
        assert code == 0
        row = out.read_text().splitlines()[1].split(",")
        assert int(row[2]) == 1
        assert float(row[3]) == pytest.approx(0.5, abs=1e-10)

    def test_json_validates(self, tmp_path, output_schema):
        code, out = run(tmp_path, "phase", "--m", "2", "--c", "1,1", "--h", "3,0",
                        "--format", "json")
        assert code == 0
        payload = validate(out, output_schema)
        assert payload["k"] == 2 and payload["active_face"] == [1]


class TestScanCommand:
    def test_small_grid(self, tmp_path, output_schema):
        code, out = run(tmp_path, "scan", "--m", "2", "--c", "1,1", "--L", "1000",
                        "--grid", "0:3:3", "--format", "json")
        assert code == 0
        payload = validate(out, output_schema)
        assert len(payload["rows"]) == 4
        by_field = {tuple(r[:2]): r for r in payload["rows"]}
        assert by_field[(3.0, 0.0)][-1] == 0.0  # wedge row


class TestDiagCommand:
    def test_json_validates(self, tmp_path, output_schema):
        code, out = run(tmp_path, "diag", "--m", "1", "--h", "0", "--N", "4",
                        "--format", "json")
        assert code == 0
        payload = validate(out, output_schema)
        assert payload["ground_state"]["is_dicke"] is True
        assert payload["ground_sector"] == [2, 2]

    def test_cap_exit_3(self, tmp_path):
        code, _ = run(tmp_path, "diag", "--m", "1", "--h", "0", "--N", "40")
        assert code == 3


class TestFigureCommands:
    def test_relerr_single_block(self, tmp_path):
        out = tmp_path / "row.csv"
        code = main(["fig-relerr", "--L", "60", "--out", str(out)])
        assert code == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "L,S_exact,S_asym,rel_error"
        assert len(lines) == 2
        assert (tmp_path / "row.png").exists()

    def test_relerr_no_plot(self, tmp_path):
        out = tmp_path / "row.csv"
        code = main(["fig-relerr", "--L", "60", "--out", str(out), "--no-plot"])
        assert code == 0
        assert not (tmp_path / "row.png").exists()

    def test_surface_small_grid(self, tmp_path):
        out = tmp_path / "surf.csv"
        code = main(["fig-surface", "--grid=-2:2:0.5", "--out", str(out)])
        assert code == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "h1,h2,k,n1,n2,n3,S"
        assert len(lines) == 1 + 81
        assert (tmp_path / "surf.png").exists()

    def test_surface_reference_row(self, tmp_path):
        out = tmp_path / "surf.csv"
        code = main(["fig-surface", "--grid", "1:1:1", "--out", str(out), "--no-plot"])
        assert code == 0
        row = out.read_text().splitlines()[1].split(",")
        assert float(row[-1]) == pytest.approx(4.1797, abs=5e-5)


class TestDeterminism:
    def test_byte_identical_reruns(self, tmp_path):
        blobs = []
        for name in ("a", "b"):
            out = tmp_path / f"{name}.csv"
            assert main(["scan", "--m", "2", "--c", "1,1", "--L", "500",
                         "--grid=-1:1:0.2", "--out", str(out)]) == 0
            blobs.append(out.read_bytes())
        assert blobs[0] == blobs[1]

    def test_json_reruns(self, tmp_path):
        blobs = []
        for name in ("a", "b"):
            out = tmp_path / f"{name}.json"
            assert main(["entropy", "--m", "1", "--h", "0.1", "--N", "20", "--L", "10",
                         "--alpha", "0.5", "--format", "json", "--out", str(out)]) == 0
            blobs.append(out.read_bytes())
        assert blobs[0] == blobs[1]


class TestThreadsEnv:
    def test_env_controls_scan(self, tmp_path, monkeypatch):
        out1 = tmp_path / "serial.csv"
        main(["scan", "--m", "2", "--c", "1,1", "--L", "500",
              "--grid=-1:1:0.5", "--out", str(out1)])
        monkeypatch.setenv("GLMG_THREADS", "3")
        out2 = tmp_path / "threaded.csv"
        main(["scan", "--m", "2", "--c", "1,1", "--L", "500",
              "--grid=-1:1:0.5", "--out", str(out2)])
        assert out1.read_bytes() == out2.read_bytes()
