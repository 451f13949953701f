"""Discrete causal Bayesian network data model.

A :class:`Network` is an immutable DAG of discrete variables, each carrying a
conditional probability table (CPT) given its graph parents. All invariants
(shapes, row sums, acyclicity) are checked at construction time, so query code
downstream can rely on them without re-validating.

Variable declaration order is significant: it is preserved verbatim and used
as the deterministic tie-breaker by every argmax in the package.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .errors import NetworkValidationError

ROW_SUM_TOLERANCE = 1e-9


@dataclass(frozen=True)
class Variable:
    """A named discrete variable with an ordered domain of state labels."""

    name: str
    states: tuple[str, ...]


@dataclass(frozen=True)
class Cpt:
    """Conditional probability table p(child | parents).

    Rows enumerate parent-state combinations in lexicographic order over the
    declared parent order with the LAST parent varying fastest; columns
    enumerate child states in domain order. Every row sums to one.
    """

    child: str
    parents: tuple[str, ...]
    table: tuple[tuple[float, ...], ...]


def _check_label(kind: str, label: object) -> str:
    if not isinstance(label, str) or not label:
        raise NetworkValidationError(f"{kind} must be a nonempty string, got {label!r}")
    if label.strip() != label:
        raise NetworkValidationError(f"{kind} {label!r} has leading/trailing whitespace")
    if "=" in label or "," in label:
        raise NetworkValidationError(f"{kind} {label!r} may not contain '=' or ','")
    return label


class Network:
    """Validated, immutable causal Bayesian network.

    Args:
        variables: variables in declaration order.
        cpts: one :class:`Cpt` per variable, keyed by variable name. Edges of
            the graph are implied by the CPT parent lists.
        name: optional display name carried through serialization.

    Raises:
        NetworkValidationError: on any structural violation (unknown parents,
            bad table shape, row sums off by more than ``ROW_SUM_TOLERANCE``,
            or a directed cycle).
    """

    def __init__(self, variables: Sequence[Variable], cpts: Mapping[str, Cpt], name: str = ""):
        self.name = name
        self.variables: tuple[Variable, ...] = tuple(variables)
        self._index: dict[str, int] = {}
        self._domains: dict[str, tuple[str, ...]] = {}
        for pos, var in enumerate(self.variables):
            _check_label("variable name", var.name)
            if var.name in self._index:
                raise NetworkValidationError(f"duplicate variable {var.name!r}")
            states = tuple(var.states)
            if len(states) < 2:
                raise NetworkValidationError(f"variable {var.name!r} needs at least 2 states")
            seen = set()
            for s in states:
                _check_label(f"state of {var.name!r}", s)
                if s in seen:
                    raise NetworkValidationError(f"duplicate state {s!r} in variable {var.name!r}")
                seen.add(s)
            self._index[var.name] = pos
            self._domains[var.name] = states

        self.cpts: dict[str, Cpt] = {}
        for var in self.variables:
            if var.name not in cpts:
                raise NetworkValidationError(f"missing CPT for variable {var.name!r}")
            self.cpts[var.name] = self._check_cpt(cpts[var.name])
        for extra in set(cpts) - set(self._index):
            raise NetworkValidationError(f"CPT given for unknown variable {extra!r}")

        self._parents = {v: self.cpts[v].parents for v in self._index}
        self._children: dict[str, tuple[str, ...]] = {v: () for v in self._index}
        kids: dict[str, list[str]] = {v: [] for v in self._index}
        for child, parents in self._parents.items():
            for p in parents:
                kids[p].append(child)
        for v in self._index:
            self._children[v] = tuple(sorted(kids[v], key=self._index.__getitem__))

        self._topological = self._toposort()

    def _check_cpt(self, cpt: Cpt) -> Cpt:
        var = cpt.child
        seen_parents = set()
        for p in cpt.parents:
            if p not in self._index:
                raise NetworkValidationError(f"CPT of {var!r} names unknown parent {p!r}")
            if p == var or p in seen_parents:
                raise NetworkValidationError(f"CPT of {var!r} repeats parent {p!r}")
            seen_parents.add(p)
        n_rows = math.prod(len(self._domains[p]) for p in cpt.parents)
        n_cols = len(self._domains[var])
        if len(cpt.table) != n_rows:
            raise NetworkValidationError(
                f"CPT of {var!r} has {len(cpt.table)} rows, expected {n_rows}"
            )
        for i, row in enumerate(cpt.table):
            if len(row) != n_cols:
                raise NetworkValidationError(
                    f"CPT of {var!r}, row {i}: {len(row)} entries, expected {n_cols}"
                )
            for p in row:
                if not (0.0 <= p <= 1.0):
                    raise NetworkValidationError(f"CPT of {var!r}, row {i}: entry {p!r} not in [0,1]")
            if abs(sum(row) - 1.0) > ROW_SUM_TOLERANCE:
                raise NetworkValidationError(
                    f"CPT of {var!r}, row {i} sums to {sum(row)!r}, expected 1"
                )
        return cpt

    def _toposort(self) -> tuple[str, ...]:
        placed: list[str] = []
        done: set[str] = set()
        pending = [v.name for v in self.variables]
        while pending:
            for name in pending:
                if all(p in done for p in self._parents[name]):
                    placed.append(name)
                    done.add(name)
                    pending.remove(name)
                    break
            else:
                raise NetworkValidationError(
                    "cycle detected among variables: " + ", ".join(sorted(pending))
                )
        return tuple(placed)

    # -- read-only structure --------------------------------------------------

    def __contains__(self, var: str) -> bool:
        return var in self._index

    def index(self, var: str) -> int:
        """Declaration position of a variable (also the tie-break key)."""
        try:
            return self._index[var]
        except KeyError:
            raise NetworkValidationError(f"unknown variable {var!r}") from None

    def domain(self, var: str) -> tuple[str, ...]:
        self.index(var)
        return self._domains[var]

    def state_index(self, var: str, state: str) -> int:
        try:
            return self._domains[var].index(state)
        except (KeyError, ValueError):
            raise NetworkValidationError(f"unknown state {state!r} for variable {var!r}") from None

    def parents(self, var: str) -> tuple[str, ...]:
        self.index(var)
        return self._parents[var]

    def children(self, var: str) -> tuple[str, ...]:
        self.index(var)
        return self._children[var]

    @property
    def edges(self) -> frozenset[tuple[str, str]]:
        return frozenset((p, c) for c in self._index for p in self._parents[c])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Network):
            return NotImplemented
        return (
            self.name == other.name
            and self.variables == other.variables
            and self.cpts == other.cpts
        )

    # equality is by value, hashing stays by identity (used for per-object caches)
    __hash__ = object.__hash__

    def __repr__(self) -> str:
        return f"Network({self.name!r}, {len(self.variables)} variables, {len(self.edges)} edges)"


# -- assignments ---------------------------------------------------------------
#
# Assignments (evidence, explananda, interventions) are plain mappings from
# variable name to state label. The helpers below validate them against a
# network and merge role sets, rejecting conflicting bindings.


def check_assignment(net: Network, assignment: Mapping[str, str]) -> dict[str, str]:
    """Validate bindings against the network, returned in declaration order."""
    for var, state in assignment.items():
        net.state_index(var, state)
    return {v.name: assignment[v.name] for v in net.variables if v.name in assignment}


def merge_assignments(*assignments: Mapping[str, str]) -> dict[str, str]:
    """Union of bindings; a variable bound to two different states is an error."""
    merged: dict[str, str] = {}
    for a in assignments:
        for var, state in a.items():
            if merged.get(var, state) != state:
                raise ValueError(
                    f"conflicting bindings for {var!r}: {merged[var]!r} vs {state!r}"
                )
            merged[var] = state
    return merged


# -- graph operations ------------------------------------------------------------


def topological_order(net: Network) -> tuple[str, ...]:
    """Parents-before-children order, ties broken by declaration order."""
    return net._topological


def reachable(net: Network, source: str, target: str, blocked: Iterable[str] = ()) -> bool:
    """True iff a directed path source -> ... -> target avoids ``blocked`` interior nodes."""
    net.index(source)
    net.index(target)
    if source == target:
        raise ValueError("source and target must differ")
    stop = {v for v in blocked if v not in (source, target)}
    for v in stop:
        net.index(v)
    stack, seen = [source], {source}
    while stack:
        for child in net.children(stack.pop()):
            if child == target:
                return True
            if child not in seen and child not in stop:
                seen.add(child)
                stack.append(child)
    return False


def mutilate(net: Network, do: Mapping[str, str]) -> Network:
    """Network after interventions: truncated factorization.

    Every intervened variable loses its incoming edges and its CPT becomes a
    point mass on the forced state; all other CPTs are untouched. The input
    network is never modified.
    """
    do = check_assignment(net, do)
    if not do:
        return net
    cpts = dict(net.cpts)
    for var, state in do.items():
        hit = net.state_index(var, state)
        row = tuple(1.0 if i == hit else 0.0 for i in range(len(net.domain(var))))
        cpts[var] = Cpt(child=var, parents=(), table=(row,))
    return Network(net.variables, cpts, name=net.name)
