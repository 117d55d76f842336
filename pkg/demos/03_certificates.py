"""
Certificate trees
=================

certify() replays the case analysis on one graph and records, at every node,
the case applied, the children it reduces to and the exact values.  recheck()
re-derives everything from the JSON alone with a different permanent engine.
"""

import json

from sparsekit.atlas import make
from sparsekit.audit import certify, recheck

cert = certify(make("heawood").graph, "perm", "heawood")
print("verdict:", cert.verdict)
print("stats:", cert.stats())


def show(node, depth=0, limit=3):
    print("  " * depth + f"{node.tag.value:20} n={node.graph.v() // 2 if node.graph.balanced else '-'}"
          f" f={node.f.decimal(4)} target={node.target.decimal(4)} bound={node.bound.decimal(4)}")
    if depth < limit:
        for c in node.children:
            show(c, depth + 1, limit)


show(cert.root)

text = cert.to_json()
print("JSON size:", len(text), "bytes")
chk = recheck(text)
print("recheck:", chk["verdict"], "nodes:", chk["nodes"], "problems:", chk["problems"])

# Tampering with any stored value is caught.
doc = json.loads(text)
doc["root"]["children"][0]["value"] += 1
print("tampered recheck:", recheck(doc)["verdict"])

# A graph with a degree-4 vertex whose deletion disconnects it.
g = make("maxdeg4_pair_case1_even").graph
c = certify(g, "perm", "maxdeg4_pair_case1_even")
print("degree-4 gadget:", c.verdict, c.stats()["tags"])
