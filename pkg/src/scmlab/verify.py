"""Exhaustive family verification.

Each family instance gets a suite of named checks, every one computed by
full enumeration in exact arithmetic: the shared lower-rung law, the
higher-rung distinctness, decoder round-trips over the whole parameter
space, and the cross-rung consistency properties (counterfactual blocks
marginalize to the matching interventional laws; the observational
component embeds verbatim in INT1). A suite passes only if every check
passes on every parameter.
"""

from __future__ import annotations

from dataclasses import dataclass

from .decoders import graph_from_int1, string_from_cf1, tree_from_int1
from .errors import BadRangeError
from .families import BIPARTITE, TREE, XOR, Family
from .oracle import (
    CF1,
    INT1,
    INT_ALL,
    OBS,
    AnswerOracle,
    compute_oracle,
    extract_obs,
    marginal,
    serialize,
)
from .rational import HALF
from .scm_core import ExactDist


@dataclass(frozen=True)
class CheckResult:
    """One named check over a whole family instance."""

    name: str
    passed: bool
    details: dict


def expected_two_point(n: int) -> ExactDist:
    """The shared tree/bipartite observational law: all-zeros or all-ones."""
    return ExactDist(n, {"0" * n: HALF, "1" * n: HALF})


def expected_uniform(n: int) -> ExactDist:
    weight = HALF**n
    return ExactDist(n, {format(v, f"0{n}b"): weight for v in range(1 << n)})


def obs_bytes(dist: ExactDist) -> bytes:
    """Canonical bytes of a bare observational law, for equality checks."""
    return serialize(AnswerOracle(OBS, dist.n_bits, (("obs", dist),)))


def _marginal_consistency(n: int, obs_dist, int1, cf1) -> bool:
    """Factual block must be the observational law; each world block must
    be the matching single-variable interventional law."""
    for i in range(n):
        triple = cf1.component(f"cf i={i}")
        if marginal(triple, range(n)) != obs_dist:
            return False
        if marginal(triple, range(n, 2 * n)) != int1.component(f"do i={i} b=0"):
            return False
        if marginal(triple, range(2 * n, 3 * n)) != int1.component(f"do i={i} b=1"):
            return False
    return True


def _obs_embedding(obs_oracle, int1) -> bool:
    """The OBS oracle must be recoverable from INT1 and appear verbatim
    as its leading serialized block."""
    if serialize(extract_obs(int1)) != serialize(obs_oracle):
        return False
    obs_body = serialize(obs_oracle).split(b"\n", 1)[1]
    int1_body = serialize(int1).split(b"\n", 1)[1]
    return int1_body.startswith(obs_body)


def verify_family(family: Family) -> list[CheckResult]:
    """Run the family's full suite; exhaustive over its parameter space."""
    if family.kind in (TREE, BIPARTITE):
        decoder = tree_from_int1 if family.kind == TREE else graph_from_int1
        return _verify_two_point_family(family, decoder)
    if family.kind == XOR:
        return _verify_xor(family)
    raise BadRangeError(f"unknown family {family.kind!r}")


def _verify_two_point_family(family: Family, decoder) -> list[CheckResult]:
    expected_obs = obs_bytes(expected_two_point(family.n_vars()))
    obs_set: set[bytes] = set()
    int1_set: set[bytes] = set()
    count = 0
    round_trips = 0
    marginals_ok = True
    embeddings_ok = True
    for param in family.parameters():
        count += 1
        scm = family.build(param)
        obs_oracle = compute_oracle(scm, OBS)
        int1 = compute_oracle(scm, INT1)
        cf1 = compute_oracle(scm, CF1)
        obs_set.add(serialize(obs_oracle))
        int1_set.add(serialize(int1))
        if decoder(int1) == param:
            round_trips += 1
        marginals_ok &= _marginal_consistency(
            scm.n, obs_oracle.components[0][1], int1, cf1
        )
        embeddings_ok &= _obs_embedding(obs_oracle, int1)
    return [
        CheckResult(
            "observational-identical",
            obs_set == {expected_obs},
            {"parameters": count, "distinct_laws": len(obs_set)},
        ),
        CheckResult(
            "int1-all-distinct",
            len(int1_set) == count,
            {"parameters": count, "distinct_oracles": len(int1_set)},
        ),
        CheckResult(
            "decoder-round-trip",
            round_trips == count,
            {"parameters": count, "recovered": round_trips},
        ),
        CheckResult(
            "counterfactual-marginal-consistency",
            marginals_ok,
            {"parameters": count},
        ),
        CheckResult(
            "observational-component-embeds",
            embeddings_ok,
            {"parameters": count},
        ),
    ]


def _verify_xor(family: Family) -> list[CheckResult]:
    expected_obs = obs_bytes(expected_uniform(family.n_vars()))
    obs_set: set[bytes] = set()
    int1_set: set[bytes] = set()
    int_all_set: set[bytes] = set()
    cf1_set: set[bytes] = set()
    count = 0
    round_trips = 0
    marginals_ok = True
    embeddings_ok = True
    for hidden in family.parameters():
        count += 1
        scm = family.build(hidden)
        obs_oracle = compute_oracle(scm, OBS)
        int1 = compute_oracle(scm, INT1)
        cf1 = compute_oracle(scm, CF1)
        obs_set.add(serialize(obs_oracle))
        int1_set.add(serialize(int1))
        int_all_set.add(serialize(compute_oracle(scm, INT_ALL)))
        cf1_set.add(serialize(cf1))
        if string_from_cf1(cf1) == hidden:
            round_trips += 1
        marginals_ok &= _marginal_consistency(
            scm.n, obs_oracle.components[0][1], int1, cf1
        )
        embeddings_ok &= _obs_embedding(obs_oracle, int1)
    return [
        CheckResult(
            "observational-identical-uniform",
            obs_set == {expected_obs},
            {"parameters": count, "distinct_laws": len(obs_set)},
        ),
        CheckResult(
            "int1-identical",
            len(int1_set) == 1,
            {"parameters": count, "distinct_oracles": len(int1_set)},
        ),
        CheckResult(
            "int-all-identical",
            len(int_all_set) == 1,
            {"parameters": count, "distinct_oracles": len(int_all_set)},
        ),
        CheckResult(
            "cf1-all-distinct",
            len(cf1_set) == count,
            {"parameters": count, "distinct_oracles": len(cf1_set)},
        ),
        CheckResult(
            "decoder-round-trip",
            round_trips == count,
            {"parameters": count, "recovered": round_trips},
        ),
        CheckResult(
            "counterfactual-marginal-consistency",
            marginals_ok,
            {"parameters": count},
        ),
        CheckResult(
            "observational-component-embeds",
            embeddings_ok,
            {"parameters": count},
        ),
    ]


def all_passed(results: list[CheckResult]) -> bool:
    return all(r.passed for r in results)
