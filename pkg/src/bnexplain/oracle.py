"""Brute-force reference implementations by full-joint enumeration.

Everything here recomputes probabilistic and information-theoretic quantities
from an explicitly materialized joint table, with no factor elimination and no
graph surgery, so it can serve as an independent check of the query engine at
desk scale. It ships with the package (not only the tests) and backs the
CLI's ``--oracle-check`` flag through :class:`CheckedEngine`.
"""

from __future__ import annotations

import math
import weakref
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from . import factors as fa
from .errors import ImpossibleEvidenceError, OracleDivergenceError, StateSpaceError
from .inference import ExactEngine, QueryResult
from .network import Network, check_assignment, merge_assignments, topological_order

Assignment = Mapping[str, str]

DEFAULT_CELL_CAP = 2**20


@dataclass(frozen=True, eq=False)
class JointTable:
    """Full joint distribution, one cell per complete assignment.

    ``scope`` lists all network variables in topological order; ``values`` has
    one axis per variable in that order.
    """

    scope: tuple[str, ...]
    values: np.ndarray


def enumerate_joint(
    net: Network, do: Assignment | None = None, cap: int = DEFAULT_CELL_CAP
) -> JointTable:
    """Materialize the (post-intervention) joint by truncated factorization.

    Each cell is the product of CPT entries over non-intervened variables,
    zeroed wherever an intervened variable deviates from its forced value.

    Raises:
        StateSpaceError: the table would exceed ``cap`` cells.
    """
    do = check_assignment(net, do or {})
    scope = topological_order(net)
    cards = [len(net.domain(v)) for v in scope]
    cells = math.prod(cards)
    if cells > cap:
        raise StateSpaceError(f"joint table would need {cells} cells (cap {cap})")

    position = {v: i for i, v in enumerate(scope)}
    joint = np.ones(tuple(cards))
    for v in scope:
        if v in do:
            column = np.zeros(cards[position[v]])
            column[net.state_index(v, do[v])] = 1.0
            term = fa.Factor((v,), column)
        else:
            term = fa.from_cpt(net, v)
        axes: list[object] = [None] * len(scope)
        for u in term.scope:
            axes[position[u]] = slice(None)
        order = sorted(range(len(term.scope)), key=lambda i: position[term.scope[i]])
        joint = joint * term.values.transpose(order)[tuple(axes)]
    return JointTable(scope, joint)


def _slicer(table: JointTable, net: Network, bound: Assignment) -> tuple:
    return tuple(
        net.state_index(v, bound[v]) if v in bound else slice(None) for v in table.scope
    )


def oracle_query(
    table: JointTable, net: Network, event: Assignment, given: Assignment | None = None
) -> float:
    """p(event | given) by masked summation over the joint table.

    Pure summation semantics: an event that contradicts the conditioning has
    an empty match set and probability zero (point conditioning therefore
    yields only 0 or 1).
    """
    event = check_assignment(net, event)
    given = check_assignment(net, given or {})
    denom = float(table.values[_slicer(table, net, given)].sum()) if given else 1.0
    if denom <= 0.0:
        raise ImpossibleEvidenceError("conditioning event has probability zero")
    try:
        joint = merge_assignments(event, given)
    except ValueError:
        return 0.0
    return float(table.values[_slicer(table, net, joint)].sum()) / denom


class OracleEngine:
    """Enumeration-backed engine with the same query surface as ExactEngine.

    Joint tables are cached per (network, intervention set), so repeated
    queries against the same post-intervention distribution stay cheap.
    """

    def __init__(self, cap: int = DEFAULT_CELL_CAP) -> None:
        self.calls = 0
        self.cap = cap
        self._cache: weakref.WeakKeyDictionary[Network, dict] = weakref.WeakKeyDictionary()

    def _table(self, net: Network, do: Assignment | None) -> JointTable:
        key = tuple(sorted((do or {}).items()))
        per_net = self._cache.setdefault(net, {})
        if key not in per_net:
            per_net[key] = enumerate_joint(net, do, self.cap)
        return per_net[key]

    def query(
        self,
        net: Network,
        targets: Sequence[str] = (),
        observed: Assignment | None = None,
        do: Assignment | None = None,
    ) -> QueryResult:
        self.calls += 1
        observed = check_assignment(net, observed or {})
        for t in targets:
            net.index(t)
            if t in observed:
                raise ValueError(f"query target {t!r} is already observed")
        table = self._table(net, do)
        block = table.values[_slicer(table, net, observed)]
        kept = [v for v in table.scope if v not in observed]
        drop = tuple(i for i, v in enumerate(kept) if v not in set(targets))
        marginal = block.sum(axis=drop) if drop else block
        z = float(marginal.sum()) if targets else float(block.sum())
        if targets:
            if z <= 0.0:
                raise ImpossibleEvidenceError("conditioning event has probability zero")
            remaining = [v for v in kept if v in set(targets)]
            order = sorted(range(len(remaining)), key=lambda i: net.index(remaining[i]))
            dist = fa.Factor(
                tuple(remaining[i] for i in order), marginal.transpose(order) / z
            )
        else:
            dist = fa.unit_factor()
        return QueryResult(distribution=dist, evidence_probability=z)

    def probability(
        self,
        net: Network,
        event: Assignment,
        observed: Assignment | None = None,
        do: Assignment | None = None,
    ) -> float:
        event = check_assignment(net, event)
        observed = check_assignment(net, observed or {})
        if do:
            for var in do:
                if var in event or var in observed:
                    raise ValueError(f"variable {var!r} is both intervened and conditioned on")
        self.calls += 1
        return oracle_query(self._table(net, do), net, event, observed)


class CheckedEngine:
    """Runs every query on two engines and insists they agree.

    Wraps a primary engine (normally :class:`ExactEngine`) and a reference
    (normally :class:`OracleEngine`); any probability differing by more than
    ``tolerance`` raises :class:`OracleDivergenceError`. Results returned are
    always the primary's.
    """

    def __init__(self, primary=None, reference=None, tolerance: float = 1e-9) -> None:
        self.primary = primary if primary is not None else ExactEngine()
        self.reference = reference if reference is not None else OracleEngine()
        self.tolerance = tolerance

    @property
    def calls(self) -> int:
        return self.primary.calls

    def _agree(self, kind: str, a: float, b: float) -> None:
        if abs(a - b) > self.tolerance:
            raise OracleDivergenceError(
                f"{kind} diverges from the enumeration oracle: {a!r} vs {b!r}"
            )

    def query(self, net, targets=(), observed=None, do=None) -> QueryResult:
        got = self.primary.query(net, targets, observed, do)
        want = self.reference.query(net, targets, observed, do)
        self._agree("evidence probability", got.evidence_probability, want.evidence_probability)
        if targets:
            if got.distribution.scope != want.distribution.scope:
                raise OracleDivergenceError(
                    f"distribution scopes differ: {got.distribution.scope} vs {want.distribution.scope}"
                )
            gap = float(np.max(np.abs(got.distribution.values - want.distribution.values)))
            if gap > self.tolerance:
                raise OracleDivergenceError(
                    f"distribution diverges from the enumeration oracle by {gap!r}"
                )
        return got

    def probability(self, net, event, observed=None, do=None) -> float:
        got = self.primary.probability(net, event, observed, do)
        want = self.reference.probability(net, event, observed, do)
        self._agree("probability", got, want)
        return got


# -- direct formula expansions over the enumerated joint ---------------------------
#
# These mirror the engine-side measures term by term but draw every probability
# from oracle_query, giving the test suite a second, independent route.


def oracle_event_probability(
    net: Network, event: Assignment, given: Assignment | None = None
) -> float:
    return oracle_query(enumerate_joint(net), net, event, given)


def oracle_interventional_probability(
    net: Network,
    event: Assignment,
    observed: Assignment | None = None,
    do: Assignment | None = None,
) -> float:
    return oracle_query(enumerate_joint(net, do), net, event, observed)


def oracle_conditional_mutual_information(
    net: Network, x: str, y: str, context: Assignment | None = None
) -> float:
    """Literal expansion: sum_x p(x|z) sum_y p(y|x,z) log2 p(y|x,z)/p(y|z)."""
    context = dict(context or {})
    table = enumerate_joint(net)
    total = 0.0
    for xs in net.domain(x):
        p_x = oracle_query(table, net, {x: xs}, context)
        if p_x <= 0.0:
            continue
        for ys in net.domain(y):
            p_y_given_x = oracle_query(table, net, {y: ys}, {**context, x: xs})
            p_y = oracle_query(table, net, {y: ys}, context)
            if p_y_given_x > 0.0:
                total += p_x * p_y_given_x * math.log2(p_y_given_x / p_y)
    return total


def _oracle_forced_event(net, event, observed, do, source):
    """p(source | observed, do) and p(event | observed, do(source=s), do) per state."""
    base = enumerate_joint(net, do)
    p_source = [oracle_query(base, net, {source: s}, observed) for s in net.domain(source)]
    p_event = {}
    for i, s in enumerate(net.domain(source)):
        if p_source[i] > 0.0:
            forced = enumerate_joint(net, {**(do or {}), source: s})
            p_event[i] = oracle_query(forced, net, event, observed)
    return p_source, p_event


def oracle_information_flow(
    net: Network,
    source: str,
    target: str,
    do: Assignment | None = None,
    observed: Assignment | None = None,
) -> float:
    observed = dict(observed or {})
    base = enumerate_joint(net, do)
    p_source = [oracle_query(base, net, {source: s}, observed) for s in net.domain(source)]
    dists = {}
    for i, s in enumerate(net.domain(source)):
        if p_source[i] > 0.0:
            forced = enumerate_joint(net, {**(do or {}), source: s})
            dists[i] = [oracle_query(forced, net, {target: t}, observed) for t in net.domain(target)]
    total = 0.0
    for j in range(len(net.domain(target))):
        mixture = sum(p_source[i] * dists[i][j] for i in dists)
        for i in dists:
            if dists[i][j] > 0.0:
                total += p_source[i] * dists[i][j] * math.log2(dists[i][j] / mixture)
    return total


def oracle_flow_to_state(
    net: Network,
    source: str,
    explanandum: Assignment,
    observed: Assignment | None = None,
    do: Assignment | None = None,
) -> float:
    observed = dict(observed or {})
    p_e = oracle_query(enumerate_joint(net, do), net, explanandum, observed)
    if p_e <= 0.0:
        raise ImpossibleEvidenceError("explanandum has probability zero in this context")
    p_source, p_event = _oracle_forced_event(net, explanandum, observed, do, source)
    mixture = sum(p_source[i] * p_event[i] for i in p_event)
    total = 0.0
    for i, v in p_event.items():
        if v > 0.0:
            total += (p_source[i] * v / p_e) * math.log2(v / mixture)
    return total


def oracle_pointwise_flow(
    net: Network,
    source: str,
    state: str,
    explanandum: Assignment,
    observed_rest: Assignment | None = None,
    do: Assignment | None = None,
) -> float:
    observed_rest = dict(observed_rest or {})
    p_source, p_event = _oracle_forced_event(net, explanandum, observed_rest, do, source)
    mixture = sum(p_source[i] * p_event[i] for i in p_event)
    if mixture <= 0.0:
        raise ImpossibleEvidenceError("explanandum has probability zero in this context")
    hit = net.state_index(source, state)
    numer = p_event.get(hit)
    if numer is None:
        forced = enumerate_joint(net, {**(do or {}), source: state})
        numer = oracle_query(forced, net, explanandum, observed_rest)
    if numer <= 0.0:
        return float("-inf")
    return math.log2(numer / mixture)


def oracle_mpe(net: Network, evidence: Assignment) -> tuple[dict[str, str], float]:
    """Argmax over all completions, first maximum in declaration-lex order."""
    import itertools

    evidence = check_assignment(net, evidence)
    table = enumerate_joint(net)
    p_evidence = (
        float(table.values[_slicer(table, net, evidence)].sum()) if evidence else 1.0
    )
    if p_evidence <= 0.0:
        raise ImpossibleEvidenceError("evidence has probability zero")
    free = [v.name for v in net.variables if v.name not in evidence]
    if not free:
        return {}, 1.0
    best, best_p = None, -1.0
    for combo in itertools.product(*(net.domain(v) for v in free)):
        full = dict(evidence)
        full.update(zip(free, combo))
        p = float(table.values[_slicer(table, net, full)])
        if p > best_p:
            best, best_p = dict(zip(free, combo)), p
    return best, best_p / p_evidence
