import csv
import json
import os
import subprocess
from pathlib import Path

import pytest

BIN = os.environ.get("RELMIX_BIN", "relmix")
FIX = Path(os.environ.get("RELMIX_FIXTURES", Path(__file__).resolve().parents[1] / "fixtures"))
CLI = FIX / "cli"
OPEN = ["--min-terms", "0", "--min-links", "0"]


def run(*args, env=None):
    e = dict(os.environ)
    e.pop("RELMIX_CACHE_DIR", None)
    if env:
        e.update(env)
    return subprocess.run([BIN, *map(str, args)], capture_output=True, text=True, env=e, timeout=300)


def resources():
    return ["--wordnet-dir", FIX / "wordnet", "--ngrams-uni", CLI / "unigrams.tsv",
            "--ngrams-bi", CLI / "bigrams.tsv", "--testset", CLI / "testset.tsv", *OPEN]


@pytest.fixture(scope="module")
def built(tmp_path_factory):
    out = tmp_path_factory.mktemp("index")
    r = run("build-index", "--dump", CLI / "dump.xml", "--out-dir", out, *OPEN)
    assert r.returncode == 0, r.stderr
    assert "concepts=8" in r.stdout
    return out / "index.bin"


def read_csv(path):
    lines = path.read_text().splitlines()
    assert lines[0].startswith("# config_hash=")
    return list(csv.DictReader(lines[1:]))


def test_unknown_flag_prints_usage_and_exits_2():
    r = run("eval", "--no-such-flag")
    assert r.returncode == 2
    assert "Usage" in r.stderr or "Usage" in r.stdout


def test_no_subcommand_exits_2():
    assert run().returncode == 2


def test_missing_input_is_one_error_line(tmp_path):
    r = run("eval", "--testset", tmp_path / "absent.tsv", "--index", tmp_path / "absent.bin")
    assert r.returncode == 1
    lines = r.stderr.strip().splitlines()
    assert len(lines) == 1
    assert lines[0].startswith("relmix: error: missing-input: ")
    assert "absent" in lines[0]


def test_missing_dump(tmp_path):
    r = run("build-index", "--dump", tmp_path / "none.xml", "--out-dir", tmp_path)
    assert r.returncode == 1
    assert r.stderr.startswith("relmix: error: missing-input: ")


def test_build_is_reproducible(built, tmp_path):
    r = run("build-index", "--dump", CLI / "dump.xml", "--index", tmp_path / "again.bin", *OPEN)
    assert r.returncode == 0, r.stderr
    assert (tmp_path / "again.bin").read_bytes() == built.read_bytes()
    assert (tmp_path / "again.bin.counts").read_text() == Path(str(built) + ".counts").read_text()


def test_cache_dir_is_used(tmp_path):
    cache = tmp_path / "cache"
    args = ["build-index", "--dump", CLI / "dump.xml", "--index", tmp_path / "i.bin", *OPEN]
    first = run(*args, env={"RELMIX_CACHE_DIR": str(cache)})
    second = run(*args, env={"RELMIX_CACHE_DIR": str(cache)})
    assert first.returncode == 0 and second.returncode == 0
    assert "cache=hit" not in first.stdout
    assert "cache=hit" in second.stdout
    assert any(cache.iterdir())


def test_measure(built):
    r = run("measure", "dog", "cat", "--index", built, *resources())
    assert r.returncode == 0, r.stderr
    values = dict(line.split("=", 1) for line in r.stdout.split())
    assert float(values["wnp"]) == pytest.approx(1 / 3)
    assert float(values["colloc"]) == pytest.approx(2 * 40 / (2500 + 2200))
    assert float(values["cxi"]) == pytest.approx(2 * 40 / 4700 + 0.55 * 2 * 25 / 4700)
    assert 0 < float(values["esa"]) <= 1
    assert float(values["ewc"]) == pytest.approx(float(values["esa"]))


def test_index_mismatch_needs_force(built, tmp_path):
    args = ["eval", "--index", built, "--testset", CLI / "testset.tsv", "--out-dir", tmp_path]
    r = run(*args)
    assert r.returncode == 1
    errors = [l for l in r.stderr.splitlines() if l.startswith("relmix: error: ")]
    assert len(errors) == 1
    assert errors[0].startswith("relmix: error: config-mismatch: ")
    assert run(*args, "--force").returncode == 0


def test_eval_artifacts(built, tmp_path):
    r = run("eval", "--index", built, *resources(), "--out-dir", tmp_path)
    assert r.returncode == 0, r.stderr
    assert r.stdout.startswith("rho=")
    for name in ["stability.csv", "removal_curve.csv", "lowess.csv", "lowess.svg", "removal_curve.svg",
                 "manifest.json", "run.config"]:
        assert (tmp_path / name).is_file(), name
    stab = read_csv(tmp_path / "stability.csv")
    assert len(stab) == 13
    assert stab[0]["pair"] == "oak/pine"
    curve = read_csv(tmp_path / "removal_curve.csv")
    assert [int(row["k"]) for row in curve] == list(range(11))
    assert float(curve[0]["rho"]) == pytest.approx(float(r.stdout.split()[0].split("=")[1]))
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert len(manifest["config_hash"]) == 16


def test_eval_dedupe(built, tmp_path):
    r = run("eval", "--index", built, *resources(), "--dedupe", "--out-dir", tmp_path)
    assert r.returncode == 0, r.stderr
    assert "pairs=12" in r.stdout


def test_gold_measure_is_perfect(built, tmp_path):
    r = run("eval", "--index", built, *resources(), "--measure", "gold", "--out-dir", tmp_path)
    assert r.returncode == 0, r.stderr
    assert float(r.stdout.split()[0].split("=")[1]) == pytest.approx(1.0)


def test_stability_and_removal_commands(built, tmp_path):
    assert run("stability", "--index", built, *resources(), "--out-dir", tmp_path).returncode == 0
    assert len(read_csv(tmp_path / "stability.csv")) == 13
    assert run("removal-curve", "--index", built, *resources(), "--out-dir", tmp_path).returncode == 0
    assert len(read_csv(tmp_path / "removal_curve.csv")) == 11


def test_tune_never_worse_and_reusable(built, tmp_path):
    r = run("tune", "--index", built, *resources(), "--seed", "3", "--out-dir", tmp_path)
    assert r.returncode == 0, r.stderr
    first = r.stdout.splitlines()[0].split()
    rho, initial = float(first[0].split("=")[1]), float(first[1].split("=")[1])
    assert rho >= initial
    params = tmp_path / "params.txt"
    assert params.is_file()
    again = run("eval", "--index", built, *resources(), "--params", params, "--out-dir", tmp_path / "e")
    assert again.returncode == 0, again.stderr
    assert float(again.stdout.split()[0].split("=")[1]) == pytest.approx(rho, abs=1e-12)
    same = run("tune", "--index", built, *resources(), "--seed", "3", "--out-dir", tmp_path / "t2")
    assert (tmp_path / "t2" / "params.txt").read_text() == params.read_text()


def test_svr_eval(built, tmp_path):
    r = run("svr-eval", "--index", built, *resources(), "--out-dir", tmp_path)
    assert r.returncode == 0, r.stderr
    rows = read_csv(tmp_path / "predictions.csv")
    assert len(rows) == 13
    assert set(rows[0]) == {"w1", "w2", "gold", "prediction"}
    assert (tmp_path / "model.txt").is_file()
    again = run("svr-eval", "--index", built, *resources(), "--out-dir", tmp_path / "b")
    assert (tmp_path / "b" / "predictions.csv").read_text() == (tmp_path / "predictions.csv").read_text()


def test_index_stats(built, tmp_path):
    export = tmp_path / "index.txt"
    r = run("index-stats", "--index", built, "--export", export, *OPEN)
    assert r.returncode == 0, r.stderr
    assert "8" in r.stdout
    line = export.read_text().splitlines()[0]
    term, postings = line.split("\t")
    assert all(":" in p for p in postings.split(","))
