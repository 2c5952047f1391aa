import json

import numpy as np
import pytest

from diskpath import PointSet, build_explicit_graph
from diskpath.cli import generate_points, main, read_instance


def run(args):
    return main([str(a) for a in args])


def test_gen_single_point(tmp_path):
    out = tmp_path / "one.txt"
    assert run(["gen", "-n", 1, "--out", out]) == 0
    assert read_instance(out).shape == (1, 2)


def test_gen_deterministic(tmp_path):
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    for out in (a, b):
        assert run(["gen", "-n", 200, "--seed", 7, "--density", 12, "--out", out]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_gen_density_hits_target_degree(tmp_path):
    out = tmp_path / "inst.txt"
    assert run(["gen", "-n", 1000, "--density", 10, "--seed", 3, "--out", out]) == 0
    pts = read_instance(out)
    g = build_explicit_graph(PointSet(pts, 0))
    mean_degree = 2.0 * g.edge_count / 1000.0
    assert 5.0 <= mean_degree <= 20.0


def test_gen_clusters(tmp_path):
    out = tmp_path / "c.txt"
    assert run(["gen", "-n", 500, "--distribution", "clusters", "--seed", 1, "--out", out]) == 0
    assert read_instance(out).shape == (500, 2)


def test_instance_roundtrip(tmp_path):
    src = tmp_path / "r.txt"
    rng = np.random.default_rng(9)
    pts = rng.uniform(-5, 5, (50, 2))
    with open(src, "w") as fh:
        fh.write("# comment line\n\n")
        for x, y in pts:
            fh.write(f"{float(x)!r} {float(y)!r}\n")
    back = read_instance(src)
    assert np.array_equal(back, pts)  # bitwise round trip


def test_instance_parse_errors(tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("1.0 2.0 3.0\n")
    with pytest.raises(ValueError):
        read_instance(bad)
    empty = tmp_path / "empty.txt"
    empty.write_text("# nothing\n")
    with pytest.raises(ValueError):
        read_instance(empty)


def test_solve_exact_chain_csv(tmp_path):
    inst = tmp_path / "chain.txt"
    inst.write_text("0 0\n0.8 0\n1.6 0\n")
    out = tmp_path / "res.csv"
    assert run(["solve-exact", inst, "--out", out]) == 0
    assert out.read_text().splitlines() == ["index,dist,pred", "0,0,", "1,0.8,0", "2,1.6,1"]


def test_solve_disconnected_inf_rows(tmp_path):
    inst = tmp_path / "d.txt"
    inst.write_text("0 0\n50 50\n")
    out = tmp_path / "res.csv"
    assert run(["solve-exact", inst, "--out", out]) == 0
    assert out.read_text().splitlines()[2] == "1,inf,"


def test_solve_json_format(tmp_path):
    inst = tmp_path / "chain.txt"
    inst.write_text("0 0\n0.8 0\n")
    out = tmp_path / "res.json"
    assert run(["solve-approx", inst, "--eps", 0.5, "--format", "json", "--out", out]) == 0
    doc = json.loads(out.read_text())
    assert doc["meta"]["mode"] == "approx"
    assert doc["meta"]["eps"] == 0.5
    assert doc["vertices"][1] == {"index": 1, "dist": 0.8, "pred": 0}


def test_solve_deterministic_output(tmp_path):
    inst = tmp_path / "i.txt"
    assert run(["gen", "-n", 300, "--seed", 11, "--out", inst]) == 0
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run(["solve-exact", inst, "--source", 5, "--out", a]) == 0
    assert run(["solve-exact", inst, "--source", 5, "--out", b]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_oracle_verb_matches_exact(tmp_path):
    inst = tmp_path / "i.txt"
    assert run(["gen", "-n", 200, "--seed", 2, "--out", inst]) == 0
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run(["oracle", inst, "--out", a]) == 0
    assert run(["solve-exact", inst, "--out", b]) == 0
    da = [line.split(",")[1] for line in a.read_text().splitlines()[1:]]
    db = [line.split(",")[1] for line in b.read_text().splitlines()[1:]]
    for x, y in zip(da, db):
        assert float(x) == pytest.approx(float(y), rel=1e-9, abs=1e-12)


def test_bad_source_exits_nonzero(tmp_path, capsys):
    inst = tmp_path / "i.txt"
    inst.write_text("0 0\n")
    assert run(["solve-exact", inst, "--source", 4]) == 1
    assert "error" in capsys.readouterr().err


def test_missing_file_exits_nonzero(tmp_path):
    assert run(["solve-exact", tmp_path / "nope.txt"]) == 1


def test_eps_zero_is_usage_error(tmp_path):
    inst = tmp_path / "i.txt"
    inst.write_text("0 0\n")
    with pytest.raises(SystemExit) as exc:
        run(["solve-approx", inst, "--eps", 0])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        run(["compare", inst, "--eps", 0])
    assert exc.value.code == 2


def test_compare_passes_on_sound_instance(tmp_path, capsys):
    inst = tmp_path / "i.txt"
    assert run(["gen", "-n", 250, "--seed", 4, "--out", inst]) == 0
    assert run(["compare", inst, "--eps", 0.1, "--source", 3]) == 0
    assert "ok" in capsys.readouterr().out


def test_compare_detects_injected_fault(tmp_path, monkeypatch, capsys):
    # break the solver: skip the cell-correction pass entirely
    import diskpath.exact as exact_mod

    inst = tmp_path / "i.txt"
    assert run(["gen", "-n", 300, "--seed", 5, "--out", inst]) == 0
    monkeypatch.setattr(
        exact_mod, "pull_update", lambda *a, **k: np.empty(0, dtype=np.int64)
    )
    assert run(["compare", inst, "--eps", 0.1]) == 1
    assert "failure" in capsys.readouterr().out


def test_bench_csv_shape(tmp_path):
    out = tmp_path / "bench.csv"
    assert run(
        ["bench", "--sizes", "200,400", "--reps", 2, "--seed", 1, "--out", out]
    ) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "kind,n,rep,seconds,ratio"
    runs = [l for l in lines if l.startswith("run,")]
    summaries = [l for l in lines if l.startswith("summary,")]
    assert len(runs) == 4 and len(summaries) == 2
    # 400 doubles 200: the second summary carries a ratio
    assert summaries[1].split(",")[4] != ""


def test_bench_rejects_unsorted_sizes(tmp_path):
    assert run(["bench", "--sizes", "400,200", "--reps", 1]) == 1


def test_generate_points_shapes():
    assert generate_points(7, "uniform", 5.0, 0).shape == (7, 2)
    assert generate_points(7, "clusters", 5.0, 0).shape == (7, 2)
