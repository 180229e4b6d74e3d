import io
import json
import subprocess
import sys

import pytest

from treeideals.cli import run
from treeideals.trees import FiniteTreeApprox, cylinder_tree, full_tree, truncate


def call(*argv):
    buf = io.StringIO()
    code = run(list(argv), buf)
    return code, buf.getvalue()


def test_classify_cylinder():
    code, out = call("classify", "--tree", "cylinder:0", "--depth", "5", "--width", "5")
    assert code == 0
    rows = {line.split()[0]: line.split()[1] for line in out.splitlines()[1:] if line.strip()}
    assert rows["laver"] == "confirmed-at-depth"
    assert rows["complete-laver"] == "refuted"


def test_classify_json_flag_either_side():
    a = call("--json", "classify", "--tree", "binary", "--depth", "3")
    b = call("classify", "--tree", "binary", "--depth", "3", "--json")
    assert a == b and a[0] == 0
    data = json.loads(a[1])
    assert {v["kind"] for v in data["verdicts"]} >= {"sacks", "miller"}


def test_fuse_table_and_json():
    code, out = call("fuse", "--stages", "3")
    assert code == 0 and "false" not in out
    code, out = call("--json", "fuse", "--stages", "3")
    data = json.loads(out)
    assert code == 0 and [c["stage"] for c in data["certificates"]] == [1, 2, 3]
    assert all("/" in c["lhs"] for c in data["certificates"])


def test_decimal_flag_marks_approximations():
    _, out = call("--decimal", "fuse", "--stages", "2")
    assert "~0." in out


def test_gdelta_rows():
    code, out = call("gdelta", "--tree", "full", "--mode", "miller", "--stages", "6")
    assert code == 0
    rows = [line for line in out.splitlines() if line.strip().endswith(("true", "false"))]
    assert rows and all(r.strip().endswith("true") for r in rows)


def test_oracle_avoid_prints_json():
    code, out = call("oracle", "avoid", "--tree", "full", "--kind", "complete-laver", "--set", "cylinder:0")
    data = json.loads(out)
    assert code == 0 and data["outcome"] == "disjoint-witness"
    F = FiniteTreeApprox.from_dict(data["subtree"])
    assert all(t[0] != 0 for t in F.nodes if t)


def test_oracle_exhausted_exits_nonzero():
    code, out = call("oracle", "avoid", "--tree", "cylinder:0", "--kind", "laver", "--set", "cylinder:0")
    assert code == 1 and json.loads(out)["outcome"] == "exhausted"


def test_oracle_sigma_and_bernstein():
    assert call("oracle", "sigma", "--N", "3")[0] == 0
    code, out = call("--json", "oracle", "bernstein", "--set", "cylinder:0", "--tree", "full")
    assert code == 0 and json.loads(out) == [{"tree": "full", "hit": True, "miss": False}]


def test_adtree_and_embed():
    code, out = call("adtree", "--depth", "2", "--width", "2", "--json")
    data = json.loads(out)
    assert code == 0 and data["truncation"]["nodes"][:3] == [[], [0], [1]]
    code, out = call("embed", "1,0,0")
    assert code == 0 and "true" in out


def test_sumset_example():
    code, out = call("--json", "sumset", "--interval", "0,1/4", "--interval", "1/8,1/2", "--add", "0,1/8")
    data = json.loads(out)
    assert code == 0 and data["measure"] == "1/2"
    assert data["sums"][0]["measure"] == "5/8"


def test_json_round_trip_of_truncation():
    for T in (full_tree(), cylinder_tree(3)):
        F = truncate(T, 2, 3)
        assert FiniteTreeApprox.from_dict(json.loads(json.dumps(F.to_dict()))) == F


@pytest.mark.parametrize("argv", [
    ["classify", "--tree", "nonsense"],
    ["classify", "--depth", "0"],
    ["fuse", "--mode", "sacks"],
    ["oracle", "avoid", "--kind", "laver", "--set", "bogus:1"],
    ["sumset", "--interval", "1,0"],
    [],
])
def test_parse_errors_exit_two(argv, capsys):
    with pytest.raises(SystemExit) as info:
        run(argv, io.StringIO())
    assert info.value.code == 2


def test_domain_errors_exit_two():
    with pytest.raises(SystemExit) as info:
        run(["fuse", "--tree", "binary"], io.StringIO())
    assert info.value.code == 2


def test_construction_error_exits_one(monkeypatch):
    from treeideals import cli
    from treeideals.errors import ConstructionError

    def boom(args, pr):
        raise ConstructionError("no successor fits", word=(0,), stage=2)

    monkeypatch.setitem(cli.HANDLERS, "fuse", boom)
    code, out = call("fuse")
    assert code == 1 and out.startswith("error:")


def test_suite_same_seed_same_bytes():
    a = call("--json", "suite", "--seed", "7", "--trials", "10")
    b = call("--json", "suite", "--seed", "7", "--trials", "10")
    assert a == b and a[0] == 0
    assert json.loads(a[1])["seed"] == 7


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "treeideals", "embed", "0,0"], capture_output=True, text=True)
    assert proc.returncode == 0 and "f(d)   = [0, 0]" in proc.stdout
