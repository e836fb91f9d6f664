import json

import pytest

from gbig.cli import run


GEN_ARGS = ["--num-subgraphs", "4", "--subgraph-size", "10",
            "--edge-prob", "0.3", "--seed", "1"]


@pytest.fixture(scope="module")
def workdir(tmp_path_factory):
    """Bundle + checkpoint shared by the CLI tests."""
    d = tmp_path_factory.mktemp("cli")
    assert run(["generate", "--out", str(d / "bundle")] + GEN_ARGS) == 0
    assert run(["train", "--bundle", str(d / "bundle"),
                "--checkpoint", str(d / "model.json"),
                "--epochs", "50", "--hidden-dim", "16"]) == 0
    return d


class TestPipeline:
    def test_generate_train_evaluate(self, workdir, tmp_path):
        out = tmp_path / "results.json"
        code = run(["evaluate", "--bundle", str(workdir / "bundle"),
                    "--checkpoint", str(workdir / "model.json"),
                    "--out", str(out)])
        assert code == 0
        obj = json.loads(out.read_text())
        assert len(obj["results"]) == 4
        assert obj["config"]["threshold"] == 0.8

    def test_evaluate_deterministic(self, workdir, tmp_path):
        outs = []
        for name in ("a.json", "b.json"):
            out = tmp_path / name
            assert run(["evaluate", "--bundle", str(workdir / "bundle"),
                        "--checkpoint", str(workdir / "model.json"),
                        "--methods", "ig-gaussian,gb-ig",
                        "--out", str(out)]) == 0
            outs.append(out.read_bytes())
        assert outs[0] == outs[1]

    def test_explain_writes_attribution(self, workdir, tmp_path):
        bundle_masks = json.loads((workdir / "bundle" / "masks.json").read_text())
        target = bundle_masks["test"][0]
        out = tmp_path / "attr.json"
        code = run(["explain", "--bundle", str(workdir / "bundle"),
                    "--checkpoint", str(workdir / "model.json"),
                    "--target", str(target), "--method", "gb-ig",
                    "--out", str(out)])
        assert code == 0
        obj = json.loads(out.read_text())
        assert obj["target"] == target
        assert obj["method"] == "gb-ig"
        assert obj["mask_nodes"]
        assert all(0.0 <= s <= 1.0 for s in obj["node_scores"].values())


class TestExitCodes:
    def test_unknown_flag_is_usage_error(self, capsys):
        with pytest.raises(SystemExit) as exc:
            run(["generate", "--frobnicate"])
        assert exc.value.code == 2

    def test_missing_bundle_is_domain_error(self, tmp_path, capsys):
        code = run(["train", "--bundle", str(tmp_path / "nope"),
                    "--checkpoint", str(tmp_path / "w.json")])
        assert code == 1
        assert "error" in capsys.readouterr().err

    def test_bad_method_name(self, workdir, tmp_path, capsys):
        code = run(["evaluate", "--bundle", str(workdir / "bundle"),
                    "--checkpoint", str(workdir / "model.json"),
                    "--methods", "saliency",
                    "--out", str(tmp_path / "r.json")])
        assert code == 1

    def test_generate_rejects_bad_params(self, tmp_path, capsys):
        code = run(["generate", "--out", str(tmp_path / "b"),
                    "--subgraph-size", "2"])
        assert code == 1
