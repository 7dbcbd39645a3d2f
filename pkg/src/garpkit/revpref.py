"""Direct and transitive revealed-preference relations, and the e-GARP test.

At efficiency ``e[t]`` observation ``t`` weakly reveals preference over the
bundle of observation ``s`` when ``costs[t][s] <= e[t] * costs[t][t]``: the
other bundle was affordable inside the deflated budget, yet ``x[t]`` was
bought.  The strict relation uses ``<``.  The transitive closure chains weak
steps (paths of length >= 1; no free reflexive step, so at ``e[t] < 1`` an
observation is not revealed preferred to itself by fiat).

e-GARP holds when no bundle is transitively revealed preferred to one that
is strictly revealed preferred back to it, i.e. there is no weak cycle
containing a strict step.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .model import (
    CrossMatrix,
    Dataset,
    EfficiencyVector,
    coerce_efficiency,
    cross_expenditures,
    leq,
    lt,
)


@dataclass(frozen=True, eq=False)
class RevealedRelation:
    """Boolean T-by-T matrices: direct weak, direct strict, weak closure."""

    weak: np.ndarray
    strict: np.ndarray
    closure: np.ndarray


@dataclass(frozen=True)
class CycleWitness:
    """A violating revealed-preference cycle.

    Attributes:
        indices: 0-based observation indices ``(t1, ..., tk, t1)`` with the
            first index repeated at the end; every consecutive pair is weakly
            related.
        strict_edge: position ``i`` such that the step from ``indices[i]`` to
            ``indices[i+1]`` is strict.
    """

    indices: tuple[int, ...]
    strict_edge: int


@dataclass(frozen=True)
class GarpVerdict:
    holds: bool
    witness: Optional[CycleWitness]


def relation_matrices(cm: CrossMatrix, e_values, rel_tol: float, exact: bool):
    """Weak/strict comparison matrices against deflated own expenditures."""
    n = len(cm.costs)
    if exact:
        weak = np.zeros((n, n), dtype=bool)
        strict = np.zeros((n, n), dtype=bool)
        for t in range(n):
            budget = e_values[t] * cm.costs[t][t]
            row = cm.costs[t]
            for s in range(n):
                weak[t, s] = row[s] <= budget
                strict[t, s] = row[s] < budget
        return weak, strict
    costs = cm.cost_array
    budgets = np.array([float(v) for v in e_values]) * np.diag(costs)
    rhs = budgets[:, None]
    margin = rel_tol * np.maximum(np.abs(costs), np.abs(rhs))
    weak = costs <= rhs + margin
    strict = costs < rhs - margin
    return weak, strict


def transitive_closure(weak: np.ndarray) -> np.ndarray:
    """All-pairs reachability by chains of length >= 1 (Warshall)."""
    closure = weak.copy()
    for k in range(closure.shape[0]):
        closure |= closure[:, k : k + 1] & closure[k : k + 1, :]
    return closure


def direct_relations(dataset: Dataset, e=1) -> RevealedRelation:
    """Build the weak/strict relations and the weak closure at efficiency e.

    ``e`` may be a scalar, a sequence with one entry per observation, or an
    :class:`EfficiencyVector`.
    """
    ev = coerce_efficiency(e, dataset)
    cm = cross_expenditures(dataset)
    weak, strict = relation_matrices(cm, ev.values, dataset.rel_tol, dataset.exact)
    return RevealedRelation(weak=weak, strict=strict, closure=transitive_closure(weak))


def _violation_mask(rel: RevealedRelation) -> np.ndarray:
    # (t, s) violates when t is (transitively) revealed preferred to s while
    # s is directly *strictly* revealed preferred to t.
    return rel.closure & rel.strict.T


def _minimal_cycle(rel: RevealedRelation) -> CycleWitness:
    """Minimal-length violating cycle; deterministic tie-breaking.

    For every violating pair (t, s) -- closure t->s plus strict s->t -- the
    candidate cycle is a shortest weak path from t to s closed by the strict
    edge.  Among minimal-length cycles the lexicographically smallest
    rotation starting at its lowest index is returned.
    """
    pairs = np.argwhere(_violation_mask(rel))
    weak = rel.weak
    n = weak.shape[0]
    by_source: dict[int, list[int]] = {}
    for t, s in pairs:
        by_source.setdefault(int(t), []).append(int(s))

    best: tuple[int, tuple[int, ...]] | None = None
    for t, targets in sorted(by_source.items()):
        # BFS over the weak digraph from t; neighbours scanned in index
        # order so parents (and hence paths) are deterministic.
        parent = {t: -1}
        dist = {t: 0}
        queue = deque([t])
        while queue:
            node = queue.popleft()
            for nxt in np.flatnonzero(weak[node]):
                nxt = int(nxt)
                if nxt not in dist:
                    dist[nxt] = dist[node] + 1
                    parent[nxt] = node
                    queue.append(nxt)
        for s in targets:
            assert s in dist, "closure asserts a weak path that BFS cannot find"
            path = [s]
            while path[-1] != t:
                path.append(parent[path[-1]])
            path.reverse()  # t ... s, then the strict edge s->t closes it
            pivot = path.index(min(path))
            ring = path[pivot:] + path[:pivot]
            candidate = (len(path) + 1, tuple(ring + [ring[0]]))
            if best is None or candidate < best:
                best = candidate
    assert best is not None, "witness requested for a passing dataset"
    indices = best[1]
    strict_positions = [
        i for i in range(len(indices) - 1) if rel.strict[indices[i], indices[i + 1]]
    ]
    return CycleWitness(indices=indices, strict_edge=strict_positions[0])


def check_e_garp(dataset: Dataset, e=1, *, witness: bool = True) -> GarpVerdict:
    """Test e-GARP; on failure optionally return a minimal violating cycle."""
    rel = direct_relations(dataset, e)
    if not _violation_mask(rel).any():
        return GarpVerdict(holds=True, witness=None)
    return GarpVerdict(holds=False, witness=_minimal_cycle(rel) if witness else None)


def validate_witness(dataset: Dataset, e, w: CycleWitness) -> bool:
    """Re-check a witness against freshly built direct relations."""
    rel = direct_relations(dataset, e)
    idx = w.indices
    if len(idx) < 2 or idx[0] != idx[-1]:
        return False
    steps = list(zip(idx[:-1], idx[1:]))
    if not all(rel.weak[a, b] for a, b in steps):
        return False
    a, b = steps[w.strict_edge]
    return bool(rel.strict[a, b])
