import json

import pytest

from fmpsim.cli import main
from fmpsim.scene_io import save_scene
from fmpsim.testkit import mirror_scene, random_scene


@pytest.fixture(autouse=True)
def _no_ambient_config(monkeypatch):
    monkeypatch.delenv("FMP_CONFIG", raising=False)


def _scene_file(tmp_path, name, payload):
    path = tmp_path / name
    path.write_text(json.dumps(payload) if not isinstance(payload, str) else payload)
    return str(path)


SINGLE = {"objects": [{"id": 1, "label": "cup", "bbox": [0, 0, 10, 10]}]}
NESTED = {"objects": [
    {"id": 1, "label": "outer", "bbox": [0, 0, 10, 10]},
    {"id": 2, "label": "inner", "bbox": [2.5, 2.5, 7.5, 7.5]},
]}
PAIR = {"objects": [
    {"id": 1, "label": "a", "bbox": [0, 0, 10, 10]},
    {"id": 2, "label": "b", "bbox": [30, 5, 42, 18]},
]}


class TestDescribe:
    def test_single_object_row(self, tmp_path, capsys):
        path = _scene_file(tmp_path, "one.json", SINGLE)
        assert main(["describe", path]) == 0
        assert capsys.readouterr().out == "1,1,SA/CE,1.000\n"

    def test_nested_asymmetry_rows(self, tmp_path, capsys):
        path = _scene_file(tmp_path, "nested.json", NESTED)
        assert main(["describe", path]) == 0
        out = capsys.readouterr().out.splitlines()
        assert "2,1,IN/CE,1.000" in out
        assert "1,2,LG/CE,1.000" in out

    def test_json_format(self, tmp_path, capsys):
        path = _scene_file(tmp_path, "nested.json", NESTED)
        assert main(["describe", path, "--format", "json"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["ids"] == [1, 2]
        cells = {(c["c"], c["r"]): c["descriptors"] for c in doc["cells"]}
        assert cells[(2, 1)] == {"IN/CE": 1.0}

    def test_missing_file_exit_2(self, tmp_path, capsys):
        assert main(["describe", str(tmp_path / "nope.json")]) == 2
        assert "no such file" in capsys.readouterr().err

    def test_degenerate_box_exit_2_names_object(self, tmp_path, capsys):
        path = _scene_file(tmp_path, "deg.json", {
            "objects": [{"id": 3, "label": "flatcup", "bbox": [1, 1, 1, 9]}],
        })
        assert main(["describe", path]) == 2
        assert "flatcup" in capsys.readouterr().err


class TestCompare:
    def test_self_compare_scalar(self, tmp_path, capsys):
        path = _scene_file(tmp_path, "p.json", PAIR)
        assert main(["compare", path, path]) == 0
        assert capsys.readouterr().out == "1.000\n"

    def test_mirror_with_symx(self, tmp_path, capsys):
        scene = random_scene(3, 5)
        a = tmp_path / "a.json"
        b = tmp_path / "b.json"
        save_scene(scene, a)
        save_scene(mirror_scene(scene, "vertical", x0=33.0), b)
        assert main(["compare", str(a), str(b), "--mode", "symx"]) == 0
        assert capsys.readouterr().out == "1.000\n"

    def test_disjoint_ids_exit_3(self, tmp_path, capsys):
        a = _scene_file(tmp_path, "a.json", PAIR)
        b = _scene_file(tmp_path, "b.json", {"objects": [
            {"id": 8, "label": "a", "bbox": [0, 0, 10, 10]},
            {"id": 9, "label": "b", "bbox": [30, 5, 42, 18]},
        ]})
        assert main(["compare", a, b]) == 3

    def test_json_format_carries_breakdown(self, tmp_path, capsys):
        path = _scene_file(tmp_path, "p.json", PAIR)
        assert main(["compare", path, path, "--format", "json"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["measure"] == 1.0
        assert doc["n0"] == 2 and len(doc["pairs"]) == 4

    def test_csv_format(self, tmp_path, capsys):
        path = _scene_file(tmp_path, "p.json", PAIR)
        assert main(["compare", path, path, "--format", "csv"]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == "i,j,d,d_prime,s_loc,s_or,s"
        assert len(lines) == 5

    def test_malformed_scene_exit_2(self, tmp_path, capsys):
        a = _scene_file(tmp_path, "a.json", PAIR)
        b = _scene_file(tmp_path, "b.json", "{not json")
        assert main(["compare", a, b]) == 2

    def test_scalar_output_parses_into_unit_interval(self, tmp_path, capsys):
        a = tmp_path / "a.json"
        b = tmp_path / "b.json"
        save_scene(random_scene(1, 4), a)
        save_scene(random_scene(2, 4), b)
        assert main(["compare", str(a), str(b)]) == 0
        value = float(capsys.readouterr().out)
        assert 0.0 <= value <= 1.0

    def test_determinism(self, tmp_path, capsys):
        a = tmp_path / "a.json"
        b = tmp_path / "b.json"
        save_scene(random_scene(5, 6), a)
        save_scene(random_scene(6, 6), b)
        argv = ["compare", str(a), str(b), "--format", "json"]
        assert main(argv) == 0
        first = capsys.readouterr().out
        assert main(argv) == 0
        assert capsys.readouterr().out == first


class TestMatrix:
    def test_identical_scenes_all_ones(self, tmp_path, capsys):
        paths = [_scene_file(tmp_path, f"s{i}.json", PAIR) for i in range(3)]
        assert main(["matrix", *paths]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == ",s0,s1,s2"
        assert lines[1] == "s0,1.000,1.000,1.000"
        assert lines[2] == "s1,,1.000,1.000"
        assert lines[3] == "s2,,,1.000"

    def test_directory_argument(self, tmp_path, capsys):
        for i in range(3):
            _scene_file(tmp_path, f"s{i}.json", PAIR)
        assert main(["matrix", str(tmp_path)]) == 0
        assert capsys.readouterr().out.splitlines()[0] == ",s0,s1,s2"

    def test_malformed_file_becomes_na(self, tmp_path, capsys):
        good = [_scene_file(tmp_path, f"g{i}.json", PAIR) for i in range(2)]
        bad = _scene_file(tmp_path, "broken.json", "{oops")
        assert main(["matrix", *good, bad]) == 0
        out = capsys.readouterr()
        lines = out.out.splitlines()
        assert lines[0] == ",broken,g0,g1"
        assert lines[1] == "broken,NA,NA,NA"
        assert lines[2] == "g0,,1.000,1.000"
        assert "broken" in out.err

    def test_all_failed_exit_2(self, tmp_path, capsys):
        bad = [_scene_file(tmp_path, f"b{i}.json", "{oops") for i in range(2)]
        assert main(["matrix", *bad]) == 2

    def test_single_path_exit_2(self, tmp_path, capsys):
        path = _scene_file(tmp_path, "only.json", PAIR)
        assert main(["matrix", path]) == 2

    def test_mirror_pair_under_symx(self, tmp_path, capsys):
        scene = random_scene(11, 5)
        a = tmp_path / "a.json"
        b = tmp_path / "m.json"
        save_scene(scene, a)
        save_scene(mirror_scene(scene, "vertical", x0=-3.0), b)
        assert main(["matrix", str(a), str(b), "--mode", "symx"]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[1].split(",")[2] == "1.000"


class TestValidate:
    def test_default_configuration_ok(self, capsys):
        assert main(["validate"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc == {"ok": True, "violations": []}

    def test_partition_gap_exit_4(self, tmp_path, capsys):
        from fmpsim.membership import FuzzyPartition

        knots = FuzzyPartition.default().to_named("x")
        knots["el"][0] = -1.20  # break the interlock with cl
        cfg = _scene_file(tmp_path, "cfg.json", {"partition_x": knots})
        assert main(["validate", cfg]) == 4
        doc = json.loads(capsys.readouterr().out)
        assert doc["ok"] is False
        assert any("coverage gap" in v for v in doc["violations"])

    def test_mm_diagonal_override_exit_4(self, tmp_path, capsys):
        from fmpsim.comparison import build_matching_matrices

        mm_or = [list(row) for row in build_matching_matrices().mm_or]
        mm_or[0][0] = 0.9
        cfg = _scene_file(tmp_path, "cfg.json", {"mm_or": mm_or})
        assert main(["validate", cfg]) == 4
        doc = json.loads(capsys.readouterr().out)
        assert any("diagonal must be 1" in v for v in doc["violations"])

    def test_bad_config_json_exit_2(self, tmp_path):
        cfg = _scene_file(tmp_path, "cfg.json", "{nope")
        assert main(["validate", cfg]) == 2

    def test_bad_threshold_exit_2(self, tmp_path):
        cfg = _scene_file(tmp_path, "cfg.json", {"threshold": 1.5})
        assert main(["validate", cfg]) == 2


class TestConfigPlumbing:
    def test_env_var_supplies_config(self, tmp_path, capsys, monkeypatch):
        scene = random_scene(13, 4)
        a = tmp_path / "a.json"
        b = tmp_path / "b.json"
        save_scene(scene, a)
        save_scene(mirror_scene(scene, "vertical", x0=9.0), b)
        cfg = _scene_file(tmp_path, "cfg.json", {"mode": "sym_x"})
        monkeypatch.setenv("FMP_CONFIG", cfg)
        assert main(["compare", str(a), str(b)]) == 0
        assert capsys.readouterr().out == "1.000\n"

    def test_flags_override_config(self, tmp_path, capsys, monkeypatch):
        scene = random_scene(13, 4)
        a = tmp_path / "a.json"
        save_scene(scene, a)
        cfg = _scene_file(tmp_path, "cfg.json", {"format": "json"})
        monkeypatch.setenv("FMP_CONFIG", cfg)
        assert main(["compare", str(a), str(a), "--format", "scalar"]) == 0
        assert capsys.readouterr().out == "1.000\n"

    def test_config_partition_override_used(self, tmp_path, capsys):
        # a partition whose edge plateau is wildly shifted still validates
        # scene self-similarity at 1.0 through the full pipeline
        from fmpsim.membership import FuzzyPartition

        knots = FuzzyPartition.default().to_named("x")
        cfg = _scene_file(tmp_path, "cfg.json", {
            "partition_x": knots,
            "partition_y": dict(zip(
                ("fa", "na", "ca", "ea", "ia", "ib", "eb", "cb", "nb", "fb"),
                knots.values(),
            )),
        })
        a = _scene_file(tmp_path, "a.json", PAIR)
        assert main(["--config", cfg, "compare", a, a]) == 0
        assert capsys.readouterr().out == "1.000\n"


class TestGen:
    def test_gen_writes_parseable_scene(self, tmp_path):
        out = tmp_path / "gen.json"
        assert main(["gen", "--seed", "5", "--count", "4",
                     "--out", str(out)]) == 0
        from fmpsim.scene_io import parse_scene

        scene = parse_scene(out)
        assert len(scene) == 4
        assert scene == random_scene(5, 4)

    def test_gen_stdout_deterministic(self, capsys):
        assert main(["gen", "--seed", "2", "--count", "3"]) == 0
        first = capsys.readouterr().out
        assert main(["gen", "--seed", "2", "--count", "3"]) == 0
        assert capsys.readouterr().out == first
