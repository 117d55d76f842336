import pytest

from sparsekit.atlas import make
from sparsekit.audit import HypothesisViolated, UnknownCase
from sparsekit.claims import CLAIMS, claim_table, default_supply, run_claim


def test_table_lists_every_claim():
    ids = [r["id"] for r in claim_table()]
    assert ids == list(CLAIMS)
    assert {"det-62", "det-64", "det-65a", "det-65b", "det-c4"} <= set(ids)


@pytest.mark.parametrize("cid", [c for c in CLAIMS])
def test_every_claim_holds_on_default_supply(cid):
    rep = run_claim(cid)
    assert rep["verdict"], [r for r in rep["results"] if not r["holds"]][:3]
    assert rep["vacuous"] == (rep["instances"] == 0)


@pytest.mark.parametrize("cid", ["claim-2-3-3", "type1-disc", "type2-disc1", "type2-disc2",
                                 "type2-forb1", "det-c4", "det-62", "first-step-disc"])
def test_claims_with_instances(cid):
    assert run_claim(cid)["instances"] > 0


def test_disconnection_reports_reproduce_the_bound():
    for cid in ("type1-disc", "type2-disc1", "type2-disc2", "first-step-disc"):
        for r in run_claim(cid)["results"]:
            assert r["reproduced"], r


def test_explicit_graph_supply():
    rep = run_claim("first-step-disc", [("fs", make("first_step_case3").graph)])
    assert rep["graphs"] == 1 and rep["instances"] > 0 and rep["verdict"]
    with pytest.raises(HypothesisViolated):
        run_claim("type1-disc", [("c4", make("c(4)").graph)])
    with pytest.raises(UnknownCase):
        run_claim("no-such-claim")


def test_default_supply_kinds():
    c4free = default_supply("c4free", 4)
    assert all(g.is_c4_free() for _, g in c4free)
    assert len(default_supply("witness")) < len(c4free)


def test_certificate_claims_on_degree4_gadgets():
    sup = [(i, make(i).graph) for i in ("maxdeg4_pair_case1_even", "maxdeg4_bridge_even")]
    for cid in ("claim-23-23", "claim-2-3-4", "claim-23-24", "claim-22-23"):
        rep = run_claim(cid, sup)
        assert rep["verdict"] and rep["instances"] > 0, cid


def test_min_degree3_disconnection_gadgets():
    for cid in ("g1-disc", "g2-disc", "d5-g1-disc", "d5-g2-disc"):
        rep = run_claim(cid)
        cases = {(r["case"], r["parity"]) for r in rep["results"]}
        assert rep["verdict"] and all(r["reproduced"] for r in rep["results"]), cid
        assert len(cases) >= 2, (cid, cases)


def test_forbidden_children_cannot_occur():
    # a host whose deletion leaves K2, C6 or J has n <= 6, and every
    # connected C4-free class of that size is in the supply
    for cid in ("type1-forb", "type2-forb2", "first-step-forb"):
        rep = run_claim(cid, n_max=6)
        assert rep["vacuous"] and rep["verdict"], cid
