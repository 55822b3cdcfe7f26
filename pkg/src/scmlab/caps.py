"""Desk-scale enumeration guardrails.

Each cap has a default sized so every exhaustive sweep finishes in minutes
on one core. Environment variables of the same name override the defaults;
reports embed the active snapshot so runs stay reproducible.
"""

import os

_DEFAULTS = {
    # max number of exogenous enumeration points per distribution
    "SCMLAB_SUPPORT_CAP": 2**24,
    # int_all enumerates 3^n mutilations
    "SCMLAB_INTALL_NMAX": 12,
    # n^(n-1) rooted labeled trees
    "SCMLAB_TREE_NMAX": 7,
    # 2^(m*m) layer graphs
    "SCMLAB_GRAPH_MMAX": 3,
    # exhaustive oracle-equality accounting per trial
    "SCMLAB_NFL_MMAX": 3,
}


def cap(name: str) -> int:
    """Return the cap named `name`, honoring an environment override."""
    if name not in _DEFAULTS:
        raise KeyError(name)
    raw = os.environ.get(name)
    if raw is not None:
        return int(raw)
    return _DEFAULTS[name]


def all_caps() -> dict[str, int]:
    """Snapshot of every active cap, for embedding in reports."""
    return {name: cap(name) for name in sorted(_DEFAULTS)}
