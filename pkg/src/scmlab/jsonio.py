"""JSON codecs for SCMs and family parameters.

SCM document shape:

    {"n": 3,
     "variables": [
        {"id": 0, "parents": [], "gate": "BERN_SOURCE",
         "noise": {"support": [0, 1], "probs": ["1/2", "1/2"]}},
        ...]}

Probabilities are "num/den" strings so documents stay exact. Loading
validates the SCM and raises InvalidScmError with the full issue list.
Parameter documents: {"n", "root", "parent"} for trees (keys of `parent`
are strings, a JSON restriction), {"m", "edges"} for layer graphs,
{"m", "bits"} for hidden strings.
"""

from __future__ import annotations

from .errors import InvalidScmError, OracleFormatError
from .families import BipartiteGraph, HiddenString, RootedTree
from .rational import frac_parse, frac_str
from .scm_core import Mechanism, NoiseDist, Scm, validate


def scm_to_json(scm: Scm) -> dict:
    variables = []
    for i, mech in enumerate(scm.mechanisms):
        variables.append(
            {
                "id": i,
                "parents": list(mech.parents),
                "gate": mech.gate,
                "noise": {
                    "support": list(mech.noise.support),
                    "probs": [frac_str(p) for p in mech.noise.probs],
                },
            }
        )
    return {"n": scm.n, "variables": variables}


def scm_from_json(doc: dict) -> Scm:
    try:
        n = int(doc["n"])
        raw_variables = doc["variables"]
        by_id = {int(v["id"]): v for v in raw_variables}
        if sorted(by_id) != list(range(n)) or len(raw_variables) != n:
            raise InvalidScmError(
                [f"BAD_SHAPE: variable ids {sorted(by_id)} are not 0..{n - 1}"]
            )
        mechanisms = []
        for i in range(n):
            v = by_id[i]
            noise = NoiseDist(
                tuple(int(s) for s in v["noise"]["support"]),
                tuple(frac_parse(p) for p in v["noise"]["probs"]),
            )
            mechanisms.append(
                Mechanism(str(v["gate"]), tuple(int(p) for p in v["parents"]), noise)
            )
    except (KeyError, TypeError, ValueError, OracleFormatError) as exc:
        raise InvalidScmError([f"BAD_SHAPE: malformed document: {exc}"]) from None
    scm = Scm(n, tuple(mechanisms))
    issues = validate(scm)
    if issues:
        raise InvalidScmError(issues)
    return scm


def tree_to_json(tree: RootedTree) -> dict:
    return {
        "n": tree.n,
        "root": tree.root,
        "parent": {str(v): p for v, p in sorted(tree.parent.items())},
    }


def tree_from_json(doc: dict) -> RootedTree:
    tree = RootedTree(
        int(doc["n"]),
        int(doc["root"]),
        {int(v): int(p) for v, p in doc["parent"].items()},
    )
    tree.check()
    return tree


def graph_to_json(graph: BipartiteGraph) -> dict:
    return {"m": graph.m, "edges": sorted([i, j] for i, j in graph.edges)}


def graph_from_json(doc: dict) -> BipartiteGraph:
    graph = BipartiteGraph(
        int(doc["m"]), frozenset((int(i), int(j)) for i, j in doc["edges"])
    )
    graph.check()
    return graph


def string_to_json(hidden: HiddenString) -> dict:
    return {"m": hidden.m, "bits": hidden.bits}


def string_from_json(doc: dict) -> HiddenString:
    hidden = HiddenString(int(doc["m"]), str(doc["bits"]))
    hidden.check()
    return hidden


_PARAM_CODECS = {
    "tree": (tree_to_json, tree_from_json),
    "bipartite": (graph_to_json, graph_from_json),
    "xor": (string_to_json, string_from_json),
}


def param_to_json(kind: str, param) -> dict:
    return _PARAM_CODECS[kind][0](param)


def param_from_json(kind: str, doc: dict):
    return _PARAM_CODECS[kind][1](doc)
