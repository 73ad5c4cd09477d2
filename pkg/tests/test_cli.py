import json
import subprocess
import sys

import pytest
from hypothesis import given, settings, strategies as st

from izansatz import cli
from izansatz.algebra import from_json_obj
from izansatz.engine_1d import fg_1d


@pytest.fixture(autouse=True)
def cache_dir(tmp_path, monkeypatch):
    monkeypatch.setenv(cli.CACHE_ENV, str(tmp_path / "cache"))
    return tmp_path / "cache"


def run(args, capsys):
    code = cli.main(args)
    return code, capsys.readouterr().out


def test_compute_2d_tilde_latex(capsys, tmp_path):
    code, out = run(["compute", "--model", "2d", "--genus", "2", "--form", "tilde", "--latex",
                     "--out", str(tmp_path)], capsys)
    assert code == 0
    assert "7/1440*It2^3" in out and r"\frac{7}{1440} \tilde{I}_{2}^{3}" in out
    assert (tmp_path / "2d-g2-tilde.tex").exists()


def test_compute_genus_zero(capsys):
    code, out = run(["compute", "--model", "1d", "--genus", "0", "--order", "4"], capsys)
    assert code == 0 and out.strip() == "1/2*I0^2 - 1/2*I0^2*I1 + 1/6*I0^3*I2"


def test_compute_eval_n(capsys):
    code, out = run(["compute", "--model", "hmm", "--genus", "2", "--eval-N", "1"], capsys)
    assert code == 0 and out.strip() == fg_1d(2).to_text()


def test_compute_fat_by_order(capsys):
    code, out = run(["compute", "--model", "hmm-fat", "--order", "2"], capsys)
    assert code == 0 and out.strip() == "1/12*v^2*I3 + 1/6*v^3*I2^2"


@pytest.mark.parametrize("args", [
    ["compute", "--model", "1d", "--genus", "-1"],
    ["compute", "--model", "1d", "--genus", "1", "--form", "tilde"],
    ["compute", "--model", "1d"],
    ["compute", "--model", "1d", "--genus", "2", "--eval-N", "2"],
    ["transform", "--what", "i0", "--max-deg", "0"],
    ["transform", "--what", "ghost", "--n", "0"],
])
def test_usage_errors(args, capsys):
    assert cli.main(args) == 2


def test_argparse_errors_exit_two():
    with pytest.raises(SystemExit) as exc:
        cli.main(["compute", "--model", "5d", "--genus", "2"])
    assert exc.value.code == 2


def test_transform(capsys):
    assert run(["transform", "--what", "i0", "--max-deg", "3"], capsys) == (0, "t0 + t0*t1 + t0*t1^2 + 1/2*t0^2*t2\n")
    assert run(["transform", "--what", "t", "--n", "1", "--at-i0-zero"], capsys) == (0, "I1\n")
    code, out = run(["transform", "--what", "ghost", "--n", "1", "--max-deg", "2"], capsys)
    assert code == 0 and out.strip() == "t0^2"


def test_verify_exit_codes(capsys, tmp_path):
    assert cli.main(["verify", "--suite", "tables", "--report", str(tmp_path / "r.json")]) == 0
    assert json.loads((tmp_path / "r.json").read_text())["pass"] is True
    assert cli.main(["verify", "--suite", "homogeneity"]) == 0
    assert cli.main(["verify", "--suite", "tables", "--plant-mutation"]) == 1
    assert cli.main(["verify", "--suite", "homogeneity", "--plant-mutation"]) == 1


def test_curve(capsys):
    code, out = run(["curve", "--model", "hmm-fat", "--coords", "i", "--orders=-4..1",
                     "--max-var", "2", "--fat-order", "1"], capsys)
    assert code == 0 and "-3: v*tH^2" in out


def test_artifacts_are_byte_identical(tmp_path, capsys):
    a, b = tmp_path / "a", tmp_path / "b"
    for out in (a, b):
        assert cli.main(["compute", "--model", "hmm", "--genus", "3", "--form", "tilde", "--out", str(out)]) == 0
        assert cli.main(["compute", "--model", "2d", "--genus", "3", "--out", str(out), "--no-cache"]) == 0
    for name in ("hmm-g3-tilde.json", "2d-g3-poly.json"):
        assert (a / name).read_bytes() == (b / name).read_bytes()


@settings(max_examples=100, deadline=None)
@given(st.sampled_from(sorted(cli.ENGINES)), st.integers(2, 4))
def test_cache_agrees_with_recomputation(model, g):
    cache = cli.Cache.default()
    first = cli.free_energy(model, g, cache)
    hit = cache.get(model, g)
    assert hit is not None and hit == first == cli.ENGINES[model](g)


def test_cache_is_keyed_by_engine_version(cache_dir):
    c1 = cli.Cache(cache_dir, "aaaa")
    c1.put("1d", 2, fg_1d(2))
    assert cli.Cache(cache_dir, "bbbb").get("1d", 2) is None
    stored = json.loads(c1.path("1d", 2).read_text())
    assert from_json_obj(stored["value"]) == fg_1d(2)


def test_module_entry_point():
    done = subprocess.run([sys.executable, "-m", "izansatz", "compute", "--model", "1d", "--genus", "2"],
                          capture_output=True, text=True)
    assert done.returncode == 0 and done.stdout.strip() == "1/8*v^2*I3 + 5/24*v^3*I2^2"
