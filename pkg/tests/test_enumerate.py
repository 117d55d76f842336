import itertools
import json
import os

import pytest

from sparsekit.enumerate import (CapExceeded, EnumFilter, enumerate_graphs, exhaustive_verify,
                                 extremal_search, report_csv)
from sparsekit.graph import BipartiteGraph, canonical_form, canonical_form_labelled


def brute_classes(flt, oriented=False):
    n = flt.n
    out = set()
    for rows in itertools.product(range(1 << n), repeat=n):
        g = BipartiteGraph(tuple(rows), n)
        if flt.accepts(g):
            out.add(canonical_form_labelled(g) if oriented else canonical_form(g))
    return out


@pytest.mark.parametrize("n", [1, 2, 3])
def test_counts_match_brute_force(n):
    flt = EnumFilter(n)
    got = [canonical_form(g) for g in enumerate_graphs(flt)]
    assert len(got) == len(set(got))
    assert set(got) == brute_classes(flt)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_oriented_counts_match_brute_force(n):
    flt = EnumFilter(n, quotient_swap=False)
    got = [canonical_form_labelled(g) for g in enumerate_graphs(flt)]
    assert len(got) == len(set(got))
    assert set(got) == brute_classes(flt, oriented=True)


def test_filtered_counts_n4():
    flt = EnumFilter(4, require_c4_free=True, require_connected=True)
    got = [canonical_form(g) for g in enumerate_graphs(flt)]
    assert set(got) == brute_classes(flt) and len(got) == len(set(got))
    flt = EnumFilter(4, edge_range=(6, 7), min_degree_range=(1, 4), max_degree_range=(0, 2))
    got = [canonical_form(g) for g in enumerate_graphs(flt)]
    assert set(got) == brute_classes(flt)


def test_known_totals():
    # balanced bipartite classes up to side swap, n = 0..3
    assert [sum(1 for _ in enumerate_graphs(EnumFilter(n))) for n in range(4)] == [1, 2, 6, 26]


def test_shards_and_workers_do_not_change_output(tmp_path):
    flt = EnumFilter(5, require_c4_free=True)
    base = [g.adj for g in enumerate_graphs(flt)]
    assert [g.adj for g in enumerate_graphs(flt, shards=3)] == base
    assert [g.adj for g in enumerate_graphs(flt, shards=3, workers=2)] == base
    ck = tmp_path / "ck"
    assert [g.adj for g in enumerate_graphs(flt, shards=2, checkpoint_dir=str(ck))] == base
    files = sorted(os.listdir(ck))
    assert len(files) == 2
    state = json.loads((ck / files[0]).read_text())
    assert state["done"] > 0
    # resuming from finished checkpoints gives the same answer
    assert [g.adj for g in enumerate_graphs(flt, shards=2, checkpoint_dir=str(ck))] == base


def test_checkpoint_resume_from_partial(tmp_path):
    flt = EnumFilter(4)
    base = [g.adj for g in enumerate_graphs(flt)]
    list(enumerate_graphs(flt, checkpoint_dir=str(tmp_path)))
    (f,) = tmp_path.iterdir()
    state = json.loads(f.read_text())
    # pretend the run stopped halfway: keep only what the first parents produced
    half = state["done"] // 2
    from sparsekit.enumerate import _children, _finish, _levels
    parents = _levels(flt, flt.n - 1)
    found = [r for p in parents[:half] for r in _children(p, flt) if _finish(r, flt) is not None]
    f.write_text(json.dumps({"done": half, "found": found}))
    assert [g.adj for g in enumerate_graphs(flt, checkpoint_dir=str(tmp_path))] == base


def test_env_cache_dir(tmp_path, monkeypatch):
    monkeypatch.setenv("SPARSEKIT_CACHE_DIR", str(tmp_path))
    list(enumerate_graphs(EnumFilter(3)))
    assert any(tmp_path.iterdir())


def test_cap_and_bad_filters():
    with pytest.raises(CapExceeded):
        list(enumerate_graphs(EnumFilter(8)))
    with pytest.raises(ValueError):
        EnumFilter(3, edge_range=(5, 2))
    with pytest.raises(ValueError):
        EnumFilter(-1)
    with pytest.raises(CapExceeded):
        exhaustive_verify(6, "perm")


def test_extremal_search():
    best, wits = extremal_search(EnumFilter.exact(3, 6), "perm")
    assert best == 2 and len(wits) == 2   # C6, and K2 + C4
    best, wits = extremal_search(EnumFilter.exact(3, 6, require_c4_free=True), "perm")
    assert best == 2 and [canonical_form(w) for w in wits] == [canonical_form(wits[0])]
    best, _ = extremal_search(EnumFilter(3), "det")
    assert best == 2


def test_exhaustive_small():
    rep = exhaustive_verify(3, "perm")
    assert rep["ok"] and not rep["violations"]
    assert rep["certified"] == rep["certify_attempted"] > 0
    assert all(set(w["components"]) <= {"K2", "C6"} for w in rep["equality_witnesses"])
    csv_text = report_csv(rep)
    assert csv_text.splitlines()[0].startswith("n,k,classes")
    rep = exhaustive_verify(3, "det", certify_all=False)
    assert rep["totals"]["3"] == {"classes": 26, "oriented_classes": 36}
