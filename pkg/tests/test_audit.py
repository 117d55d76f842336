import json
import random

import pytest

from sparsekit.alpha import C1, ONE, alpha_pow
from sparsekit.atlas import make
from sparsekit.audit import (CaseTag, HypothesisViolated, NotAC4, NotDisconnected, NotType1,
                             NotType2, UnknownCase, audit_cofactor, audit_det_c4,
                             audit_det_witnesses, audit_deg2_path3, audit_disconnection,
                             audit_type1, audit_type2, certify, parity_analysis, recheck,
                             target_bound)
from sparsekit.enumerate import EnumFilter, enumerate_graphs
from sparsekit.graph import BipartiteGraph, VertexKind, classify_vertex, cycle, graph_j
from sparsekit.linalg import permanent_ryser


def perm(g):
    return permanent_ryser(g.to_biadjacency())


def first_of_kind(g, kind):
    for x in g.vertices():
        if classify_vertex(g, x).kind is kind:
            return x
    return None


def test_cofactor_terms_sum():
    h = make("heawood").graph
    terms = audit_cofactor(h, (0, 0))
    assert len(terms) == 3 and sum(terms) == 24


def test_type1_expansion():
    g = make("type1_split_single").graph
    x = first_of_kind(g, VertexKind.TYPE_I)
    res = audit_type1(g, x)
    assert res.holds and sum(res.terms) == res.value
    with pytest.raises(NotType1):
        audit_type1(graph_j(), (1, "a"))


def test_type2_expansion():
    j = graph_j()
    res = audit_type2(j, (1, "a"))
    assert res.value == 3 and res.holds
    assert res.weights == [alpha_pow(-2), alpha_pow(-5)]
    with pytest.raises(NotType2):
        audit_type2(j, (0, "h0"))


def test_deg2_path3():
    # hexagon with a long chord path: three consecutive degree-2 vertices
    g = BipartiteGraph.from_edges(
        ["h0", "h2", "h4", "p1", "p3"], ["h1", "h3", "h5", "p0", "p2"],
        [("h0", "h1"), ("h2", "h1"), ("h2", "h3"), ("h4", "h3"), ("h4", "h5"), ("h0", "h5"),
         ("h0", "p0"), ("p1", "p0"), ("p1", "p2"), ("p3", "p2"), ("p3", "h3")])
    r = audit_deg2_path3(g, (1, "p0"), (0, "p1"), (1, "p2"))
    assert r.holds and r.perm == perm(g)
    with pytest.raises(HypothesisViolated):
        audit_deg2_path3(cycle(10), (0, 0), (1, 1), (0, 1))


def test_det_c4_reduction():
    g = BipartiteGraph.from_edges(["u", "u1", "w"], ["v1", "v2", "z"],
                                  [("u", "v1"), ("u", "v2"), ("u1", "v1"), ("u1", "v2"),
                                   ("u1", "z"), ("w", "z"), ("w", "v1")])
    r = audit_det_c4(g, ((0, "u"), (1, "v1"), (0, "u1"), (1, "v2")))
    assert r["det"] == r["det_reduced"] and r["k_reduced"] == r["k"] - 2
    with pytest.raises(NotAC4):
        audit_det_c4(g, ((0, "w"), (1, "v1"), (0, "u1"), (1, "v2")))


def test_det_witness_rows():
    rows = audit_det_witnesses()
    assert [r["det"] for r in rows] == [5, 4, 5, 6]
    assert all(r["holds"] and r["below_c1"] for r in rows)


def test_parity_analysis_against_matchings():
    rng = random.Random(7)
    flt = EnumFilter(5, require_connected=True, require_c4_free=True)
    graphs = [g for g in enumerate_graphs(flt)]
    checked = 0
    for g in rng.sample(graphs, 60):
        vs = g.vertices()
        for _ in range(4):
            dele = rng.sample(vs, rng.randint(1, 3))
            h = g.delete_vertices(dele, allow_unbalanced=True)
            comps = h.components()
            if len(comps) < 2:
                continue
            pr = parity_analysis(g, comps)
            p = perm(g)
            if pr.infeasible:
                assert p == 0
                continue
            for a, b in pr.forbidden:
                assert perm(g.delete_edge(a, b)) == p
            for a, b in pr.forced:
                assert perm(g.delete_vertices([a, b])) == p
            checked += 1
    assert checked > 20


def test_disconnection_gadgets():
    cases = {
        "type1_split_single": ("type1-disc", VertexKind.TYPE_I),
        "type2_pair_even": ("type2-disc1", VertexKind.TYPE_II),
        "type2_pair_odd": ("type2-disc1", VertexKind.TYPE_II),
    }
    for gid, (claim, kind) in cases.items():
        g = make(gid).graph
        hits = 0
        for x in g.vertices():
            vc = classify_vertex(g, x)
            if vc.kind is not kind:
                continue
            for y in ((vc.y1, vc.y2) if kind is VertexKind.TYPE_I else (vc.y1,)):
                try:
                    r = audit_disconnection(g, [x, y], claim)
                except NotDisconnected:
                    continue
                assert r.holds and r.reproduced
                assert r.perm == r.perm_after
                hits += 1
        assert hits, gid


def test_disconnection_rejects_bad_hosts():
    with pytest.raises(HypothesisViolated):
        audit_disconnection(graph_j(), [(1, "a"), (0, "b")], "type2-disc1")
    with pytest.raises(UnknownCase):
        audit_disconnection(make("heawood").graph, [], "no-such-claim")
    with pytest.raises(NotDisconnected):
        audit_disconnection(make("heawood").graph, [(0, 0), (1, 0)], "first-step-disc")


def test_target_bound():
    assert target_bound(cycle(6)) == ONE
    assert target_bound(graph_j()) == 3 * alpha_pow(-5)
    assert target_bound(cycle(8)) == C1
    assert target_bound(make("heawood").graph) == ONE


def test_certify_heawood_and_recheck():
    cert = certify(make("heawood").graph, "perm", "heawood")
    assert cert.verdict
    st = cert.stats()
    assert st["failed"] == 0 and st["nodes"] > 1
    chk = recheck(cert.to_json())
    assert chk["verdict"] and chk["agrees"] and not chk["problems"]


def test_certify_j_is_named_leaf():
    cert = certify(graph_j(), "perm", "j")
    assert cert.root.tag is CaseTag.LEAF
    assert cert.verdict


def test_certify_rejects_c4():
    with pytest.raises(HypothesisViolated):
        certify(cycle(4), "perm")
    cert = certify(cycle(4), "det")
    assert cert.verdict


def test_recheck_catches_tampering():
    doc = certify(make("heawood").graph, "perm").to_dict()
    bad = json.loads(json.dumps(doc))
    bad["root"]["value"] += 1
    assert not recheck(bad)["verdict"]
    bad = json.loads(json.dumps(doc))
    kid = bad["root"]["children"][0]
    kid["graph"]["rows"][0] = "0"
    chk = recheck(bad)
    assert not chk["verdict"] and chk["problems"]


@pytest.mark.parametrize("n", [2, 3, 4])
def test_certify_det_mode_small(n):
    for g in enumerate_graphs(EnumFilter(n, require_connected=True)):
        cert = certify(g, "det")
        assert cert.verdict and recheck(cert)["verdict"]


def test_certify_high_degree_gadgets():
    seen = set()
    for gid in ("maxdeg5_pair_case1_even", "maxdeg5_bridge_odd", "maxdeg4_pair_case1_even"):
        cert = certify(make(gid).graph, "perm", gid)
        chk = recheck(cert)
        assert cert.verdict and chk["verdict"] and chk["agrees"], gid
        seen |= set(cert.stats()["tags"])
    assert {"MaxDeg4", "MaxDeg5", "DisconnectionParity", "ThreeRegular"} <= seen
