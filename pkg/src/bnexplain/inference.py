"""Exact observational and interventional inference by variable elimination.

The central object is :class:`ExactEngine`, whose :meth:`ExactEngine.query`
answers one conditional (optionally post-intervention) distribution query per
call and counts how many times it ran. The module-level functions wrap a
throwaway engine for one-off use; explainers accept an engine so call counts
and cross-checking behave consistently across a whole tree construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from . import factors as fa
from .errors import ImpossibleEvidenceError
from .network import Network, check_assignment, merge_assignments, mutilate

Assignment = Mapping[str, str]


@dataclass(frozen=True)
class QueryResult:
    """Normalized distribution over the query targets plus the evidence mass.

    ``distribution`` has scope in declaration order and sums to one whenever
    ``evidence_probability`` is positive.
    """

    distribution: fa.Factor
    evidence_probability: float


class ExactEngine:
    """Sum-product variable elimination over the network's CPT factors.

    Elimination order is chosen by the min-degree heuristic with declaration
    order breaking ties. The ``calls`` counter increments once per query and
    exists purely as a diagnostic (complexity tests read it); results are pure
    functions of the arguments.
    """

    def __init__(self) -> None:
        self.calls = 0

    def query(
        self,
        net: Network,
        targets: Sequence[str] = (),
        observed: Assignment | None = None,
        do: Assignment | None = None,
    ) -> QueryResult:
        """Distribution over ``targets`` given observations, after interventions.

        Interventions are applied first (graph surgery), then the observations
        condition the post-intervention distribution.

        Raises:
            ImpossibleEvidenceError: ``targets`` nonempty and p(observed) = 0.
        """
        self.calls += 1
        observed = check_assignment(net, observed or {})
        for t in targets:
            net.index(t)
            if t in observed:
                raise ValueError(f"query target {t!r} is already observed")
        if do:
            net_q = mutilate(net, do)
            observed = check_assignment(net_q, observed)  # reject do/observed overlap upstream
        else:
            net_q = net

        work = []
        for v in net_q.variables:
            f = fa.from_cpt(net_q, v.name)
            for var in observed:
                if var in f.scope:
                    f = fa.reduce_var(f, var, net_q.state_index(var, observed[var]))
            work.append(f)

        keep = set(targets)
        to_eliminate = {v.name for v in net_q.variables if v.name not in keep and v.name not in observed}
        while to_eliminate:
            var = min(to_eliminate, key=lambda u: (self._degree(work, u), net_q.index(u)))
            touching = [f for f in work if var in f.scope]
            work = [f for f in work if var not in f.scope]
            if touching:
                prod = touching[0]
                for f in touching[1:]:
                    prod = fa.multiply(prod, f, net_q)
                work.append(fa.marginalize(prod, var))
            to_eliminate.discard(var)

        result = fa.unit_factor()
        for f in work:
            result = fa.multiply(result, f, net_q)
        z = float(result.values.sum())
        if targets:
            if z <= 0.0:
                raise ImpossibleEvidenceError("conditioning event has probability zero")
            dist = fa.Factor(result.scope, result.values / z)
        else:
            dist = fa.unit_factor()
        return QueryResult(distribution=dist, evidence_probability=z)

    @staticmethod
    def _degree(work: list[fa.Factor], var: str) -> int:
        nbrs: set[str] = set()
        for f in work:
            if var in f.scope:
                nbrs.update(f.scope)
        nbrs.discard(var)
        return len(nbrs)

    def probability(
        self,
        net: Network,
        event: Assignment,
        observed: Assignment | None = None,
        do: Assignment | None = None,
    ) -> float:
        """p(event | observed) after interventions ``do``.

        An empty event has probability one. Bindings shared between event and
        observations must agree; an observed set of probability zero raises
        :class:`ImpossibleEvidenceError`.
        """
        event = check_assignment(net, event)
        observed = check_assignment(net, observed or {})
        if do:
            for var in do:
                if var in event or var in observed:
                    raise ValueError(f"variable {var!r} is both intervened and conditioned on")
        joint = merge_assignments(event, observed)
        if observed:
            denom = self.query(net, (), observed, do).evidence_probability
            if denom <= 0.0:
                raise ImpossibleEvidenceError("conditioning event has probability zero")
        else:
            denom = 1.0
        numer = self.query(net, (), joint, do).evidence_probability
        return numer / denom


# -- module-level operations ------------------------------------------------------


def _engine(engine: ExactEngine | None) -> ExactEngine:
    return engine if engine is not None else ExactEngine()


def joint_probability(net: Network, full: Assignment) -> float:
    """Chain-rule product over all CPT entries for a full assignment."""
    full = check_assignment(net, full)
    missing = [v.name for v in net.variables if v.name not in full]
    if missing:
        raise ValueError(f"assignment leaves variables unbound: {', '.join(missing)}")
    p = 1.0
    for v in net.variables:
        f = fa.from_cpt(net, v.name)
        coords = tuple(net.state_index(u, full[u]) for u in f.scope)
        p *= float(f.values[coords])
    return p


def event_probability(
    net: Network,
    event: Assignment,
    given: Assignment | None = None,
    *,
    engine: ExactEngine | None = None,
) -> float:
    """p(event | given), the prior of the event when ``given`` is empty."""
    return _engine(engine).probability(net, event, given)


def query_distribution(
    net: Network,
    targets: Sequence[str],
    given: Assignment | None = None,
    *,
    engine: ExactEngine | None = None,
) -> QueryResult:
    return _engine(engine).query(net, targets, given)


def conditional_mutual_information(
    net: Network,
    x: str,
    y: str,
    context: Assignment | None = None,
    *,
    engine: ExactEngine | None = None,
) -> float:
    """Conditional mutual information I(x ; y | context) in bits.

    Computed from the exact posterior joint of (x, y); zero-probability cells
    contribute zero. Nonnegative up to rounding and symmetric in x and y.
    """
    if x == y:
        raise ValueError("mutual information needs two distinct variables")
    context = check_assignment(net, context or {})
    for v in (x, y):
        if v in context:
            raise ValueError(f"variable {v!r} appears in the conditioning context")
    qr = _engine(engine).query(net, (x, y), context)
    values = qr.distribution.values
    if qr.distribution.scope[0] != x:
        values = values.T
    px = values.sum(axis=1)
    py = values.sum(axis=0)
    mask = values > 0.0
    denom = np.outer(px, py)
    return float(np.sum(values[mask] * np.log2(values[mask] / denom[mask])))


def mpe(
    net: Network,
    evidence: Assignment,
    *,
    engine: ExactEngine | None = None,
) -> tuple[dict[str, str], float]:
    """Most probable completion of the unobserved variables given evidence.

    Runs max-product elimination in reverse declaration order and tracks the
    per-variable argmax tables, so the traceback yields the completion that is
    lexicographically smallest (by declaration order, then state order) among
    all maximizers. Returns the completion and its posterior probability.
    """
    evidence = check_assignment(net, evidence)
    eng = _engine(engine)
    p_evidence = eng.query(net, (), evidence).evidence_probability
    if p_evidence <= 0.0:
        raise ImpossibleEvidenceError("evidence has probability zero")
    free = [v.name for v in net.variables if v.name not in evidence]
    if not free:
        return {}, 1.0

    work = []
    for v in net.variables:
        f = fa.from_cpt(net, v.name)
        for var in evidence:
            if var in f.scope:
                f = fa.reduce_var(f, var, net.state_index(var, evidence[var]))
        work.append(f)

    traceback: dict[str, tuple[tuple[str, ...], np.ndarray]] = {}
    for var in reversed(free):
        touching = [f for f in work if var in f.scope]
        work = [f for f in work if var not in f.scope]
        prod = touching[0]
        for f in touching[1:]:
            prod = fa.multiply(prod, f, net)
        maxed, arg = fa.max_out(prod, var)
        traceback[var] = (maxed.scope, arg)
        work.append(maxed)

    best_joint = 1.0
    for f in work:
        best_joint *= float(f.values)

    completion: dict[str, str] = {}
    for var in free:
        scope, arg = traceback[var]
        coords = tuple(net.state_index(u, completion[u]) for u in scope)
        completion[var] = net.domain(var)[int(arg[coords])]
    return completion, best_joint / p_evidence
