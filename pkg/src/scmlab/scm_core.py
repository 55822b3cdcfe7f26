"""Binary acyclic SCMs with finite rational noise, evaluated exactly.

A model has n binary endogenous variables, one mechanism each: a gate
schema applied to parent variables plus a local exogenous noise symbol
drawn from a finite support with rational probabilities. Distributions
are computed by enumerating the full product of noise supports and
carrying `fractions.Fraction` weights, so every probability is exact and
equality claims are bit-exact, never approximate.

Outcomes are '0'/'1' strings with variable 0 leftmost: outcome[k] is the
value of variable k.
"""

from __future__ import annotations

import heapq
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from . import gates
from .caps import cap
from .errors import (
    BadPositionError,
    CycleError,
    NTooLargeError,
    SupportTooLargeError,
)
from .rational import ONE, ZERO


@dataclass(frozen=True)
class NoiseDist:
    """Finite-support exogenous noise.

    `support` holds distinct integer symbols; `probs[k]` is the exact
    probability of `support[k]`. A valid distribution has positive
    probabilities summing to exactly 1; `validate` on the enclosing SCM
    reports violations rather than this constructor raising.
    """

    support: tuple[int, ...]
    probs: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "support", tuple(int(s) for s in self.support))
        object.__setattr__(self, "probs", tuple(Fraction(p) for p in self.probs))

    @staticmethod
    def constant(symbol: int = 0) -> "NoiseDist":
        return NoiseDist((symbol,), (ONE,))

    @staticmethod
    def bernoulli(p) -> "NoiseDist":
        p = Fraction(p)
        if p == 0:
            return NoiseDist.constant(0)
        if p == 1:
            return NoiseDist.constant(1)
        return NoiseDist((0, 1), (ONE - p, p))


@dataclass(frozen=True)
class Mechanism:
    """One structural equation: gate schema, parent indices, local noise."""

    gate: str
    parents: tuple[int, ...]
    noise: NoiseDist

    def __post_init__(self):
        object.__setattr__(self, "parents", tuple(int(p) for p in self.parents))


@dataclass(frozen=True)
class Scm:
    """n binary variables with one mechanism each; parent graph acyclic."""

    n: int
    mechanisms: tuple[Mechanism, ...]

    def __post_init__(self):
        object.__setattr__(self, "mechanisms", tuple(self.mechanisms))


@dataclass(frozen=True)
class Intervention:
    """A hard do(): forces each listed variable to a constant bit.

    `assignments` is (variable, bit) pairs sorted by variable index;
    empty means intervene on nothing.
    """

    assignments: tuple[tuple[int, int], ...]

    @staticmethod
    def of(mapping) -> "Intervention":
        items = sorted(dict(mapping).items())
        return Intervention(tuple((int(v), int(b)) for v, b in items))

    def as_dict(self) -> dict[int, int]:
        return dict(self.assignments)

    def variables(self) -> tuple[int, ...]:
        return tuple(v for v, _ in self.assignments)

    def bits(self) -> str:
        return "".join(str(b) for _, b in self.assignments)


EMPTY_INTERVENTION = Intervention(())


@dataclass(frozen=True)
class ExactDist:
    """Sparse exact distribution over length-`n_bits` outcome strings.

    Only positive-mass outcomes are stored. Construction checks the
    invariants (keys are bit strings of the right length, masses are
    positive and sum to exactly 1), so an ExactDist in hand is trusted.
    """

    n_bits: int
    mass: dict[str, Fraction]

    def __post_init__(self):
        total = ZERO
        for outcome, weight in self.mass.items():
            if len(outcome) != self.n_bits or outcome.strip("01"):
                raise ValueError(f"bad outcome key {outcome!r} for n_bits={self.n_bits}")
            if not isinstance(weight, Fraction) or weight <= 0:
                raise ValueError(f"mass of {outcome!r} must be a positive Fraction")
            total += weight
        if total != 1:
            raise ValueError(f"masses sum to {total}, expected 1")

    def p(self, outcome: str) -> Fraction:
        """Exact probability of one outcome (0 if absent)."""
        return self.mass.get(outcome, ZERO)

    def prob_bit(self, position: int, bit: int) -> Fraction:
        """Exact marginal probability that `position` carries `bit`."""
        if not 0 <= position < self.n_bits:
            raise BadPositionError(f"position {position} outside [0, {self.n_bits})")
        want = "1" if bit else "0"
        return sum(
            (w for k, w in self.mass.items() if k[position] == want), ZERO
        )

    def outcomes(self) -> list[str]:
        """Positive-mass outcomes in ascending order."""
        return sorted(self.mass)


def validate(scm: Scm) -> list[str]:
    """Check every SCM invariant; return the violations (empty = valid).

    Issue strings are prefixed with a stable code: BAD_SHAPE (variable and
    mechanism counts disagree), BAD_GATE (unknown schema or broken arity
    contract), BAD_PARENT (index out of range or duplicated), BAD_NOISE
    (malformed noise distribution), CYCLE (parent graph has a cycle).
    """
    issues: list[str] = []
    if scm.n < 1:
        issues.append(f"BAD_SHAPE: n must be at least 1, got {scm.n}")
    if len(scm.mechanisms) != scm.n:
        issues.append(
            f"BAD_SHAPE: {len(scm.mechanisms)} mechanisms for {scm.n} variables"
        )
    for i, mech in enumerate(scm.mechanisms):
        arity_problem = gates.arity_issue(mech.gate, len(mech.parents))
        if arity_problem:
            issues.append(f"BAD_GATE: variable {i}: {arity_problem}")
        seen: set[int] = set()
        for p in mech.parents:
            if not 0 <= p < scm.n:
                issues.append(f"BAD_PARENT: variable {i} lists parent {p} outside [0, {scm.n})")
            elif p in seen:
                issues.append(f"BAD_PARENT: variable {i} lists parent {p} twice")
            seen.add(p)
        issues.extend(_noise_issues(i, mech))
    try:
        topo_order(scm)
    except CycleError as exc:
        issues.append(f"CYCLE: {exc}")
    return issues


def _noise_issues(i: int, mech: Mechanism) -> list[str]:
    noise = mech.noise
    issues = []
    if len(noise.support) == 0:
        issues.append(f"BAD_NOISE: variable {i}: empty support")
        return issues
    if len(set(noise.support)) != len(noise.support):
        issues.append(f"BAD_NOISE: variable {i}: duplicate support symbols")
    if len(noise.probs) != len(noise.support):
        issues.append(
            f"BAD_NOISE: variable {i}: {len(noise.probs)} probs for "
            f"{len(noise.support)} symbols"
        )
        return issues
    if any(p <= 0 for p in noise.probs):
        issues.append(f"BAD_NOISE: variable {i}: probabilities must be positive")
    total = sum(noise.probs, ZERO)
    if total != 1:
        issues.append(f"BAD_NOISE: variable {i}: probabilities sum to {total}, not 1")
    if mech.gate in gates.NOISE_READING and not set(noise.support) <= {0, 1}:
        issues.append(
            f"BAD_NOISE: variable {i}: {mech.gate} needs a bit-valued support, "
            f"got {noise.support}"
        )
    return issues


def topo_order(scm: Scm) -> list[int]:
    """Parents-first evaluation order, ties broken by ascending index.

    Raises CycleError when the parent graph is not acyclic.
    """
    n = scm.n
    parents = [set(m.parents) for m in scm.mechanisms]
    children: list[list[int]] = [[] for _ in range(n)]
    indegree = [0] * n
    for v, ps in enumerate(parents):
        for p in ps:
            if 0 <= p < n:
                children[p].append(v)
                indegree[v] += 1
    ready = [v for v in range(n) if indegree[v] == 0]
    heapq.heapify(ready)
    order: list[int] = []
    while ready:
        v = heapq.heappop(ready)
        order.append(v)
        for c in children[v]:
            indegree[c] -= 1
            if indegree[c] == 0:
                heapq.heappush(ready, c)
    if len(order) != n:
        stuck = sorted(set(range(n)) - set(order))
        raise CycleError(f"variables {stuck} form a cycle")
    return order


def _enumerate_exogenous(scm: Scm, support_cap: int):
    """Yield (symbols, weight) over the product of noise supports.

    `symbols[v]` is the noise symbol for variable v; `weight` is the exact
    product probability. Single-point supports are fixed up front so the
    loop only iterates over genuinely random noise.
    """
    sizes = [len(m.noise.support) for m in scm.mechanisms]
    total = math.prod(sizes)
    if total > support_cap:
        raise SupportTooLargeError(
            f"noise support product {total} exceeds cap {support_cap}"
        )
    base = [m.noise.support[0] for m in scm.mechanisms]
    varying = [v for v, size in enumerate(sizes) if size > 1]
    if not varying:
        yield tuple(base), ONE
        return
    supports = [scm.mechanisms[v].noise.support for v in varying]
    probs = [scm.mechanisms[v].noise.probs for v in varying]
    for picks in itertools.product(*(range(len(s)) for s in supports)):
        symbols = list(base)
        weight = ONE
        for slot, k in enumerate(picks):
            symbols[varying[slot]] = supports[slot][k]
            weight *= probs[slot][k]
        yield tuple(symbols), weight


def _evaluate(mechanisms, order, symbols) -> list[int]:
    """Run the mechanisms in topological order; return the value vector."""
    values = [0] * len(mechanisms)
    for v in order:
        mech = mechanisms[v]
        values[v] = gates.eval_gate(
            mech.gate, [values[p] for p in mech.parents], symbols[v]
        )
    return values


def _bits(values) -> str:
    return "".join("1" if b else "0" for b in values)


def observational(scm: Scm, support_cap: int | None = None) -> ExactDist:
    """Exact joint distribution of the n variables.

    Enumerates every point of the exogenous product, evaluates the
    mechanisms in topological order, and merges identical outcomes.
    """
    limit = cap("SCMLAB_SUPPORT_CAP") if support_cap is None else support_cap
    order = topo_order(scm)
    acc: dict[str, Fraction] = {}
    for symbols, weight in _enumerate_exogenous(scm, limit):
        key = _bits(_evaluate(scm.mechanisms, order, symbols))
        if key in acc:
            acc[key] += weight
        else:
            acc[key] = weight
    return ExactDist(scm.n, acc)


def apply_do(scm: Scm, intervention: Intervention) -> Scm:
    """Mutilate: replace each intervened mechanism with a parentless constant."""
    forced = intervention.as_dict()
    for v, b in forced.items():
        if not 0 <= v < scm.n:
            raise BadPositionError(f"intervened variable {v} outside [0, {scm.n})")
        if b not in (0, 1):
            raise ValueError(f"intervention value for variable {v} must be a bit, got {b}")
    mechanisms = list(scm.mechanisms)
    for v, b in forced.items():
        gate = gates.CONST1 if b else gates.CONST0
        mechanisms[v] = Mechanism(gate, (), NoiseDist.constant())
    return Scm(scm.n, tuple(mechanisms))


def interventional(
    scm: Scm, intervention: Intervention, support_cap: int | None = None
) -> ExactDist:
    """Exact joint under do(): the observational law of the mutilated SCM."""
    return observational(apply_do(scm, intervention), support_cap)


def counterfactual_triple(
    scm: Scm, i: int, support_cap: int | None = None
) -> ExactDist:
    """Joint law of (factual, do(X_i=0) world, do(X_i=1) world).

    All three worlds share the same exogenous draw, which is what makes
    this a counterfactual rather than three independent runs. The result
    is one distribution over 3n-bit outcomes: factual block first, then
    the do(X_i=0) world, then the do(X_i=1) world.
    """
    if not 0 <= i < scm.n:
        raise BadPositionError(f"variable {i} outside [0, {scm.n})")
    limit = cap("SCMLAB_SUPPORT_CAP") if support_cap is None else support_cap
    order = topo_order(scm)
    scm0 = apply_do(scm, Intervention.of({i: 0}))
    scm1 = apply_do(scm, Intervention.of({i: 1}))
    order0 = topo_order(scm0)
    order1 = topo_order(scm1)
    acc: dict[str, Fraction] = {}
    for symbols, weight in _enumerate_exogenous(scm, limit):
        factual = _evaluate(scm.mechanisms, order, symbols)
        world0 = _evaluate(scm0.mechanisms, order0, symbols)
        world1 = _evaluate(scm1.mechanisms, order1, symbols)
        key = _bits(factual) + _bits(world0) + _bits(world1)
        if key in acc:
            acc[key] += weight
        else:
            acc[key] = weight
    return ExactDist(3 * scm.n, acc)


def all_interventions(n: int):
    """Yield every hard intervention on n variables, empty set first.

    Order: by target-set size, then the set lexicographically, then the
    forced bits in binary order. 3^n interventions in total.
    """
    for k in range(n + 1):
        for subset in itertools.combinations(range(n), k):
            for values in itertools.product((0, 1), repeat=k):
                yield Intervention(tuple(zip(subset, values)))


def int_all(
    scm: Scm, n_cap: int | None = None, support_cap: int | None = None
) -> tuple[tuple[Intervention, ExactDist], ...]:
    """Exact joint under every one of the 3^n hard interventions."""
    limit = cap("SCMLAB_INTALL_NMAX") if n_cap is None else n_cap
    if scm.n > limit:
        raise NTooLargeError(f"int_all on n={scm.n} exceeds cap {limit}")
    out = []
    for iv in all_interventions(scm.n):
        out.append((iv, interventional(scm, iv, support_cap)))
    return tuple(out)
