import json
import shutil

import jsonschema
import pytest

from hkbench.invariants import maximal_spec
from hkbench.workbench.cache import CacheMiss, CrossEngineDisagreement, LengthCache, encode_record
from hkbench.workbench.cli import main
from hkbench.workbench.ringfile import RingFileError, dumps, load_ring_file, loads
from hkbench.workbench.suite import (
    SCHEMA_PATH,
    CorpusEntry,
    SuiteConfig,
    csv_rows,
    discover,
    report_ok,
    run_suite,
    strip_volatile,
)

SCHEMA = json.loads(SCHEMA_PATH.read_text())

REGULAR = """name = plane
p = 3
vars = x y
run.qmax = 27
"""


def test_ringfile_roundtrip(corpus_dir):
    for path in sorted(corpus_dir.glob("*.ring")):
        rf = load_ring_file(path)
        text = dumps(rf)
        again = loads(text, str(path))
        assert dumps(again) == text
        assert again.ring.key() == rf.ring.key()
        assert again.run == rf.run


@pytest.mark.parametrize("text,line,col,msg", [
    ("name = a\np = 4\nvars = x\n", 2, 5, "modulus not prime"),
    ("name = a\np = 5\nvars = x y\nrelations = \"x^2 + y\"\n", 4, 14, "homogeneous"),
    ("name = a\np = 5\nvars = x y\nrelations = \"x^2 + * y\"\n", 4, 20, ""),
    ("name = a\np = 5\nvars = x\nbogus = 1\n", 4, 1, "unknown key"),
    ("name = a\np = 5\nvars = x\np = 7\n", 4, 1, "duplicate key"),
    ("name = a\np = 5\nvars = x y\nflags = domain\nrelations = x*y\n", 4, None, "domain"),
    ("name = a\np = 5\nvars = x y z\nrelations = \"x^2+y^2+z^2\"\nreduction = y\n", 5, 13, "dim R = 2"),
])
def test_ringfile_errors(text, line, col, msg):
    with pytest.raises(RingFileError) as info:
        loads(text, "t.ring")
    err = info.value
    assert err.line == line
    if col is not None:
        assert err.column == col
    assert msg in str(err)
    assert str(err).startswith(f"t.ring:{line}:")


def test_inconsistent_toric_rejected(corpus_dir):
    text = (corpus_dir / "quadric2_p5.ring").read_text().replace('"x + 3*y"', '"x + 4*y"')
    with pytest.raises(RingFileError, match="toric description inconsistent"):
        loads(text)


def test_cache_corruption_and_recompute(tmp_path):
    path = tmp_path / "c.log"
    c = LengthCache(path)
    for q, L in [(1, 1), (3, 13), (9, 121)]:
        c.put(("r", "m", q, "toric"), L)
    data = path.read_bytes().splitlines(keepends=True)
    # flip one digit in the second record and truncate the third
    bad = data[1].replace(b'"length":13', b'"length":14')
    path.write_bytes(data[0] + bad + data[2][:-5])
    c2 = LengthCache(path)
    assert [r.offset for r in c2.stats.corrupt] == [len(data[0]), len(data[0]) + len(bad)]
    assert c2.get(("r", "m", 1, "toric")) == 1 and c2.get(("r", "m", 3, "toric")) is None
    assert c2.get_or_compute(("r", "m", 3, "toric"), lambda: 13) == 13
    assert c2.stats.computed == 1


def test_cache_cross_engine_disagreement(tmp_path):
    c = LengthCache()
    c.put(("r", "m", 5, "toric"), 37)
    c.put(("r", "m", 5, "linalg"), 37)
    with pytest.raises(CrossEngineDisagreement):
        c.put(("r", "m", 5, "groebner"), 38)
    path = tmp_path / "c.log"
    path.write_bytes(encode_record({"ring": "r", "ideal": "m", "q": 5, "engine": "toric", "length": 37})
                     + encode_record({"ring": "r", "ideal": "m", "q": 5, "engine": "linalg", "length": 36}))
    with pytest.raises(CrossEngineDisagreement):
        LengthCache(path)


def test_cache_replay(tmp_path):
    c = LengthCache(tmp_path / "c.log")
    c.put(("r", "m", 5, "toric"), 37)
    r = LengthCache(tmp_path / "c.log", replay=True)
    assert r.get_or_compute(("r", "m", 5, "toric"), lambda: 0) == 37
    with pytest.raises(CacheMiss):
        r.get_or_compute(("r", "m", 25, "toric"), lambda: 0)


def test_empty_corpus(tmp_path):
    report = run_suite(discover(tmp_path))
    jsonschema.validate(report, SCHEMA)
    assert report["entries"] == [] and report_ok(report)


def test_regular_entry_and_determinism(tmp_path):
    (tmp_path / "plane.ring").write_text(REGULAR)
    corpus = discover(tmp_path)
    cache = LengthCache(tmp_path / "c.log")
    a = run_suite(corpus, SuiteConfig(seed=3), cache)
    b = run_suite(corpus, SuiteConfig(seed=3), LengthCache(tmp_path / "c.log"))
    jsonschema.validate(a, SCHEMA)
    assert strip_volatile(a) == strip_volatile(b)
    assert b["cache"]["computed"] == 0
    e = a["entries"][0]
    assert e["profile"]["e_hk"] == 1.0 and e["profile"]["s"] == 1.0
    assert not e["unexpected_failures"] and report_ok(a)
    assert ("plane", "m", 27, 729, 1.0) in csv_rows(a)


def test_corrupted_entry(corpus_dir):
    report = run_suite([CorpusEntry(str(corpus_dir / "corrupted_a1.ring"))])
    e = report["entries"][0]
    assert e["expected_failures"] == ["hl-upper", "ratio-upper", "sandwich-upper"]
    assert e["unexpected_failures"] == [] and report_ok(report)


def test_cli_exit_codes(tmp_path, capsys, corpus_dir):
    ring = tmp_path / "plane.ring"
    ring.write_text(REGULAR)
    assert main(["hk", str(ring), "--qmax", "9"]) == 0
    assert "81" in capsys.readouterr().out
    assert main(["fsig", str(ring), "--qmax", "9", "--json"]) == 0
    assert json.loads(capsys.readouterr().out)["s"] == 1.0
    assert main(["mult", str(corpus_dir / "quadric2_p5.ring")]) == 0
    assert "e = 2" in capsys.readouterr().out
    assert main(["zigzag", "--dmax", "6"]) == 0
    assert "61" in capsys.readouterr().out
    assert main(["zigzag", "--dmax", "65"]) == 2
    assert main(["bounds", str(ring), "--suite", "sandwich"]) == 0

    bad = tmp_path / "bad.ring"
    bad.write_text("name = a\np = 4\nvars = x\n")
    assert main(["hk", str(bad)]) == 2
    assert "bad.ring:2:5: modulus not prime" in capsys.readouterr().err
    assert main(["hk", str(ring), "--engine", "toric"]) == 2

    # a corrupted ring without its expected failures listed makes the run fail
    d = tmp_path / "corp"
    d.mkdir()
    src = (corpus_dir / "corrupted_a1.ring").read_text()
    (d / "c.ring").write_text("\n".join(l for l in src.splitlines() if "expect_fail" not in l) + "\n")
    out = tmp_path / "rep.json"
    assert main(["corpus", "run", str(d), "--out", str(out)]) == 1
    rep = json.loads(out.read_text())
    jsonschema.validate(rep, SCHEMA)
    assert rep["summary"]["unexpected_failures"] == 3
    assert (tmp_path / "rep.csv").exists()
    shutil.copy(corpus_dir / "corrupted_a1.ring", d / "c.ring")
    assert main(["corpus", "run", str(d), "--out", str(out)]) == 0


def test_cli_cross_engine_abort(tmp_path, capsys):
    ring = tmp_path / "plane.ring"
    ring.write_text(REGULAR)
    R = loads(REGULAR).ring
    log = tmp_path / "c.log"
    log.write_bytes(encode_record({"ring": R.key(), "ideal": maximal_spec(R).key(), "q": 3, "engine": "toric", "length": 10}))
    assert main(["--cache", str(log), "hk", str(ring), "--qmax", "9", "--engine", "groebner"]) == 3
    assert "disagreement" in capsys.readouterr().err


def test_replay_from_cache_reproduces_verdicts(tmp_path, corpus_dir):
    corpus = [CorpusEntry(str(corpus_dir / "quadric2_p5.ring")), CorpusEntry(str(corpus_dir / "regular2.ring"))]
    a = run_suite(corpus, SuiteConfig(), LengthCache(tmp_path / "c.log"))
    b = run_suite(corpus, SuiteConfig(), LengthCache(tmp_path / "c.log", replay=True))
    assert strip_volatile(a) == strip_volatile(b)
    assert b["cache"]["computed"] == 0 and b["cache"]["hits"] > 0


def test_regular_three_variables(tmp_path):
    (tmp_path / "r.ring").write_text("name = r3\np = 2\nvars = x y z\n")
    rep = run_suite(discover(tmp_path))
    e = rep["entries"][0]
    assert e["profile"]["e_hk"] == 1.0
    assert all(v["status"] in ("pass", "skipped-hypotheses") for v in e["verdicts"])
    assert any(v["status"] == "pass" for v in e["verdicts"])
