import hashlib
import json
import subprocess
import sys

import pytest

from hclf import io
from hclf.cli import main
from hclf.curve import places_at_level

from conftest import corpus_specs, example_curves, labels, load


def write_spec(tmp_path, label):
    spec = next(s for s in corpus_specs() if s["label"] == label)
    path = tmp_path / f"{label}.json"
    path.write_text(json.dumps(spec))
    return path


def run(args, tmp_path, name="out.jsonl"):
    out = tmp_path / name
    code = main(list(args) + ["--out", str(out)])
    lines = out.read_text().splitlines() if out.exists() else []
    return code, [json.loads(l) for l in lines], out


def digest(path):
    return hashlib.sha256(path.read_bytes()).hexdigest()


def test_spec_round_trip():
    for s in corpus_specs():
        C, base = io.curve_from_spec(s)
        s2 = io.curve_to_spec(C, base)
        C2, base2 = io.curve_from_spec(s2)
        assert C2 == C and base2 == base
        for n in (1, 2):
            for P in places_at_level(C, n, 1) + places_at_level(C, n, 2):
                assert io.place_from_json(C, io.place_to_json(C, P), n) == P


@pytest.mark.parametrize("bad", [
    {"p": 4, "a": 1, "f": [1, 0, 0, 0, 0, 1]},
    {"p": 3, "a": 1, "f": [0, 0, 0, 0, 0, 0, 1]},
    {"p": 3, "a": 1},
    {"p": 3, "a": 2, "f": [7, 0, 0, 0, 0, 1]},
    {"p": 3, "a": 2, "modulus": [2, 2, 1], "f": [1, 2, 0, 0, 0, 1]},
    {"p": 3, "a": 1, "f": [1, 2, 0, 0, 0, 1], "d1": [{"u": [0, 1], "v": [0], "mult": 1}]},
])
def test_bad_specs(bad):
    with pytest.raises(io.SpecError):
        io.curve_from_spec(bad)


def test_zeta_and_exit_codes(tmp_path, cache_env):
    path = write_spec(tmp_path, labels("genus2")[0])
    code, recs, _ = run(["zeta", "--curve", str(path)], tmp_path)
    assert code == 0
    r = recs[0]
    assert list(r)[:2] == ["schema_version", "command"]
    assert sum(r["numerator"]) == r["jacobian_order"]
    assert main(["zeta", "--curve", str(tmp_path / "missing.json")]) == 2
    assert main(["zeta"]) == 2
    assert main(["census", "--curve", str(path), "--n", "0"]) == 2
    assert main(["zeta", "--curve", str(path), "--n", "2", "--cap", "5"]) == 0
    assert main(["census", "--curve", str(path), "--n", "2", "--cap", "5"]) == 2


def test_lfun_records(tmp_path, cache_env):
    path = write_spec(tmp_path, labels("genus2")[0])
    code, recs, _ = run(["lfun", "--curve", str(path), "--n", "1", "--all-chars", "--euler"], tmp_path)
    C, base = load(labels("genus2")[0])
    assert code == 0
    assert len(recs) == int(__import__("hclf.curve", fromlist=["x"]).jacobian_order(C, 1))
    assert all(r["euler_agrees"] for r in recs)
    assert "denominator" in recs[0] and "denominator" not in recs[1]
    assert set(recs[1]) >= {"curve", "n", "character", "coeffs"}
    assert set(recs[1]["coeffs"][0]) == {"order", "coeffs"}


def test_product_and_figure(tmp_path, cache_env):
    path = write_spec(tmp_path, labels("genus2")[0])
    fig = tmp_path / "roots.png"
    code, recs, _ = run(["lfun", "--curve", str(path), "--product", "--figure", str(fig)], tmp_path)
    assert code == 0 and recs[-1]["passed"] and fig.stat().st_size > 0
    fig2 = tmp_path / "census.png"
    code, recs, _ = run(["census", "--curve", str(path), "--figure", str(fig2)], tmp_path, "c.jsonl")
    assert code == 0 and fig2.stat().st_size > 0


def test_workers_determinism(tmp_path):
    path = write_spec(tmp_path, labels("genus2")[2])
    outs = []
    for w in ("1", "2", "3"):
        code, _, out = run(["census", "--curve", str(path), "--n", "2", "--workers", w, "--no-cache"],
                           tmp_path, f"w{w}.jsonl")
        assert code == 0
        outs.append(digest(out))
    assert len(set(outs)) == 1


def test_cache_reproduces_fresh(tmp_path):
    """Fresh processes: cold cache, warm cache and no cache give identical bytes."""
    path = write_spec(tmp_path, labels("genus2")[3])
    cache = tmp_path / "cache"
    digests = []
    for i, extra in enumerate([["--cache-dir", str(cache)], ["--cache-dir", str(cache)], ["--no-cache"]]):
        out = tmp_path / f"run{i}.jsonl"
        subprocess.run([sys.executable, "-m", "hclf.cli", "census", "--curve", str(path), "--n", "2",
                        "--out", str(out)] + extra, check=True)
        digests.append(digest(out))
    assert len(set(digests)) == 1
    files = list(cache.rglob("*.json"))
    assert len(files) == 3  # d = 0, 1, 2
    assert not list(cache.rglob("*.tmp"))


def test_cache_rejects_mismatched_entry(tmp_path):
    C, base = load(labels("genus2")[3])
    cache = io.CensusCache(tmp_path)
    key = io.census_key(C, base, 1, 1)
    cache.put(key, (99,), [1, 2, 3])
    assert cache.get(key, (5,)) is None
    assert io.census_key(C, base, 1, 1) != io.census_key(C, base, 2, 1)


def test_recover_cli(tmp_path, cache_env):
    found, _ = example_curves()
    spec = io.curve_to_spec(found[0].model)
    path = tmp_path / "ex.json"
    path.write_text(json.dumps(spec))
    code, recs, _ = run(["recover", "--curve", str(path), "--n", "1"], tmp_path)
    assert code == 0 and recs[0]["size"] == 2 and recs[0]["passed"]
    code, recs, _ = run(["recover", "--curve", str(write_spec(tmp_path, labels("genus2")[1])),
                         "--shuffle"], tmp_path, "s.jsonl")
    assert code == 1 and not recs[0]["passed"]


def test_isom_and_twist_spec(tmp_path, cache_env):
    found, fams = example_curves()
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    a.write_text(json.dumps(io.curve_to_spec(fams[0][0])))
    b.write_text(json.dumps(io.curve_to_spec(fams[0][1])))
    code, recs, _ = run(["isom", "--curve", str(a), "--curve2", str(b)], tmp_path)
    assert code == 0 and recs[0]["isomorphic"]


def test_console_script_help():
    res = subprocess.run([sys.executable, "-m", "hclf.cli", "--help"], capture_output=True, text=True)
    assert res.returncode == 0
    for cmd in ("zeta", "census", "lfun", "recover", "cross-check", "twist", "search-example",
                "isom", "artin-check"):
        assert cmd in res.stdout
