import io
import os
import re

import pytest

from oruga import CORPUS_DIR
from oruga.cli import main
from oruga.dsl import load_files, parse_document, pretty_print

from conftest import ALL_FILES, FLAGSHIP_FILES, GAUSS_FILES, GOLDEN, CORE_FILES

UPDATE = os.environ.get("ORUGA_UPDATE_GOLDEN") == "1"


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main([str(a) for a in argv], out, err)
    return code, out.getvalue(), err.getvalue()


def golden(name, text):
    path = GOLDEN / name
    if UPDATE:
        path.write_text(text, encoding="utf-8")
    assert text == path.read_text(encoding="utf-8")


FLAGSHIP = ["transfer", *FLAGSHIP_FILES, "--construction", "sum123", "--relation", "rep",
            "--sought-type", "arr", "--target-space", "dotDiagrams", "--assume", "disj"]
GAUSS = ["transfer", *GAUSS_FILES, "--construction", "gauss", "--relation", "rep",
         "--sought-type", "dotDiag", "--target-space", "dotDiagrams", "--assume", "disj"]

GOLDEN_RUNS = {
    "check_core.txt": ["check", *CORE_FILES],
    "closure_arithT.txt": ["closure", *CORE_FILES, "--type-system", "arithT"],
    "match_con_pat.txt": ["match", *ALL_FILES, "--construction", "con", "--pattern", "pat"],
    "match_anchored.txt": ["match", *CORE_FILES, "--construction", "con", "--pattern", "plusJoin.source",
                           "--prefix", "--anchor", "t=t1"],
    "transfer_flagship.txt": FLAGSHIP,
    "transfer_gauss.txt": GAUSS,
    "con.dot": ["export-dot", *CORE_FILES, "--construction", "con"],
    "rotated.dot": ["export-dot", *CORE_FILES, "--construction", "rotated"],
}


@pytest.mark.parametrize("name", sorted(GOLDEN_RUNS))
def test_golden_outputs(name):
    code, out, _ = run(*GOLDEN_RUNS[name])
    assert code == 0
    golden(name, out)


def test_wire_format_golden():
    golden("corpus.oruga", pretty_print(load_files(ALL_FILES)))
    golden("gauss_corpus.oruga", pretty_print(load_files(GAUSS_FILES)))


def test_closure_contents():
    code, out, _ = run("closure", *CORE_FILES, "--type-system", "arithT")
    lines = out.splitlines()
    assert code == 0 and lines == sorted(lines)
    for pair in ("plus <= binOp", "plus <= plus", "1plus2 <= numExp", "numeral <= numExp"):
        assert pair in lines
    assert "binOp <= plus" not in lines


def test_one_type_closure(tmp_path):
    f = tmp_path / "one.oruga"
    f.write_text("typeSystem t = types a\n")
    assert run("closure", f, "--type-system", "t")[:2] == (0, "a <= a\n")
    assert run("closure", f, "--type-system", "nope")[0] == 2


def test_subtype_cycle_exits_1(tmp_path):
    text = (CORPUS_DIR / "arith.oruga").read_text()
    text = text.replace("plus < binOp", "binOp < plus, plus < binOp")
    f = tmp_path / "cyc.oruga"
    f.write_text(text)
    code, _, err = run("check", f)
    assert code == 1 and "SubtypeCycle" in err and "cyc.oruga:" in err


def test_usage_and_io_errors(tmp_path):
    assert run("check", tmp_path / "missing.oruga")[0] == 2
    assert run()[0] == 2
    assert run("frobnicate")[0] == 2
    assert run(*FLAGSHIP, "--max-depth", "0")[0] == 2
    assert run("match", *CORE_FILES, "--construction", "nope", "--pattern", "con")[0] == 2


def test_match_failures():
    code, out, _ = run("match", *CORE_FILES, "--construction", "con", "--pattern", "plusJoin.source")
    assert (code, out) == (1, "no match\n")
    assert run("match", *ALL_FILES, "--construction", "con", "--pattern", "pat", "--anchor", "f=t1")[0] == 1


def test_transfer_single_numeral():
    code, out, _ = run("transfer", *FLAGSHIP_FILES, "--construction", "one", "--relation", "rep",
                       "--sought-type", "arr", "--target-space", "dotDiagrams")
    assert code == 0
    assert out.splitlines()[-1].startswith("1 results")
    deriv = out.split("--- derivation\n")[1].split("--- assumptions")[0]
    assert deriv.strip().count("\n") == 0  # depth 1: one line


def test_transfer_dot_sought_type_and_dot_file(tmp_path):
    dot = tmp_path / "r.dot"
    args = [a if a != "arr" else "dotDiag" for a in FLAGSHIP]
    code, out, _ = run(*args, "--dot", dot)
    assert code == 0 and "join[" in out
    assert dot.read_text().startswith("digraph")


def test_transfer_no_result():
    code, out, err = run(*FLAGSHIP[:-2])  # without --assume disj
    assert code == 1 and out == "0 results, 5 expansions, limit-hit: no\n"
    assert "NoApplicableSchema" in err
    code, out, err = run(*FLAGSHIP, "--max-expansions", "2")
    assert code == 1 and out.endswith("limit-hit: yes\n") and "limit" in err


def test_transfer_single_construction_rejects_pair():
    code, out, err = run(*GAUSS, "--single-construction")
    assert code == 1 and out.startswith("0 results")


def _printed_constructions(out):
    return re.findall(r"^construction .*?(?=^---|^construction |\Z)", out, flags=re.M | re.S)


@pytest.mark.parametrize("argv", [FLAGSHIP, GAUSS], ids=["flagship", "gauss"])
def test_transfer_output_reparses(argv):
    code, out, _ = run(*argv)
    blocks = _printed_constructions(out)
    assert blocks
    dots = (CORPUS_DIR / "dots.oruga").read_text()
    doc = parse_document(dots + "\n" + "\n".join(blocks))
    printed = [d.name for d in doc.of_kind("construction") if d.name != "rotated"]
    assert printed == [f"result{i}_{j}" for i, j in re.findall(r"^construction result(\d+)_(\d+)", out, re.M)]


def test_entry_point_module():
    import subprocess
    import sys
    r = subprocess.run([sys.executable, "-m", "oruga.cli", "check", *map(str, CORE_FILES)],
                       capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout.startswith("ok:")
