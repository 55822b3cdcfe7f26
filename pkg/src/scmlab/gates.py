"""Finite gate-schema library for binary structural equations.

A gate maps k parent bits plus one exogenous noise symbol to an output bit.
Arity contracts: COPY and NEG take exactly one parent, BERN_SOURCE takes
none, the rest accept any arity (AND of nothing is 1, OR of nothing is 0,
PARITY of nothing is 0). XOR_NOISE and BERN_SOURCE are the only schemas
that read the noise symbol, which must itself be a bit.
"""

from .errors import ArityMismatchError

CONST0 = "CONST0"
CONST1 = "CONST1"
COPY = "COPY"
NEG = "NEG"
AND = "AND"
OR = "OR"
PARITY = "PARITY"
XOR_NOISE = "XOR_NOISE"
BERN_SOURCE = "BERN_SOURCE"

ALL_GATES = frozenset(
    {CONST0, CONST1, COPY, NEG, AND, OR, PARITY, XOR_NOISE, BERN_SOURCE}
)

# schemas whose output depends on the noise symbol
NOISE_READING = frozenset({XOR_NOISE, BERN_SOURCE})

# gate -> required arity; None means any arity is fine
_FIXED_ARITY = {COPY: 1, NEG: 1, BERN_SOURCE: 0}


def arity_issue(gate: str, k: int) -> str | None:
    """Describe the arity violation for `gate` with k parents, if any."""
    if gate not in ALL_GATES:
        return f"unknown gate {gate!r}"
    want = _FIXED_ARITY.get(gate)
    if want is not None and k != want:
        return f"{gate} takes exactly {want} parent(s), got {k}"
    return None


def eval_gate(gate: str, inputs, noise: int) -> int:
    """Evaluate one structural equation; returns 0 or 1."""
    if gate == COPY:
        if len(inputs) != 1:
            raise ArityMismatchError(f"COPY takes 1 parent, got {len(inputs)}")
        return inputs[0]
    if gate == AND:
        return 0 if 0 in inputs else 1
    if gate == BERN_SOURCE:
        if len(inputs) != 0:
            raise ArityMismatchError(f"BERN_SOURCE takes no parents, got {len(inputs)}")
        if noise not in (0, 1):
            raise ValueError(f"BERN_SOURCE needs a bit-valued noise symbol, got {noise}")
        return noise
    if gate == XOR_NOISE:
        if noise not in (0, 1):
            raise ValueError(f"XOR_NOISE needs a bit-valued noise symbol, got {noise}")
        acc = noise
        for b in inputs:
            acc ^= b
        return acc
    if gate == CONST0:
        return 0
    if gate == CONST1:
        return 1
    if gate == OR:
        return 1 if 1 in inputs else 0
    if gate == PARITY:
        acc = 0
        for b in inputs:
            acc ^= b
        return acc
    if gate == NEG:
        if len(inputs) != 1:
            raise ArityMismatchError(f"NEG takes 1 parent, got {len(inputs)}")
        return 1 - inputs[0]
    raise ValueError(f"unknown gate {gate!r}")
