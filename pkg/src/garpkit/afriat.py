"""Constructive solution of the Afriat inequalities and utility recovery.

Given a dataset passing e-GARP, this module produces numbers ``phi[t]`` and
``lam[t] > 0`` with

    phi[s] <= phi[t] + lam[t] * (costs[t][s] - e[t] * costs[t][t])

for every ordered pair, and evaluates the induced utility

    U(x) = min_t  phi[t] + lam[t] * (p[t] . x - e[t] * costs[t][t]),

a minimum of strictly increasing affine functions: continuous, concave, and
strictly increasing.  At ``e = (1, ..., 1)`` it satisfies ``U(x[t]) = phi[t]``.

Construction (no LP solver, works unchanged in exact rational arithmetic):

1. Group observations into equivalence classes of mutual transitive weak
   revealed preference.  Inside a class every direct weak link has exactly
   zero affordability slack (otherwise the class would contain a violating
   cycle), so one shared utility level per class is consistent.
2. Order classes so that every weak link points from an earlier class to a
   later one (most-preferred first; deterministic tie-break by smallest
   member index).  Because links never point from later to earlier classes,
   the slack from any observation toward an earlier class is strictly
   positive.
3. Walk the classes in that order.  Each class level is the minimum of
   ``phi[t] + lam[t] * slack[t][s]`` over already-placed observations ``t``
   and members ``s`` (0 for the first class); each member's ``lam`` is then
   the smallest value >= 1 satisfying every inequality toward the
   already-placed, higher levels.  Bounds in either direction only ever
   reference quantities fixed earlier, so one pass suffices.

The construction is followed by a mandatory check of all T^2 inequalities:
exact on the exact lane; on the float lane with relative slack 1e-9 scaled
by the lam-weighted expenditure terms, so that breakpoint wobble at the
1e-12 comparison tolerance cannot trip it no matter how large ``lam`` is.
The post-condition, not the construction, is the contract.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import (
    AfriatInfeasibleError,
    AfriatVerificationError,
    DimensionMismatchError,
)
from .model import (
    Dataset,
    EfficiencyVector,
    Number,
    coerce_efficiency,
    cross_expenditures,
)
from .revpref import _minimal_cycle, _violation_mask, direct_relations

#: Relative slack allowed by the float-lane post-hoc inequality check.
CHECK_RTOL = 1e-9


@dataclass(frozen=True)
class AfriatSolution:
    """Utility levels and marginal utility weights, one pair per observation."""

    phi: tuple[Number, ...]
    lam: tuple[Number, ...]
    efficiency: EfficiencyVector


def _classes_in_order(closure: np.ndarray) -> list[list[int]]:
    """Mutual-reachability classes, most-preferred first, deterministic."""
    n = closure.shape[0]
    mutual = closure & closure.T
    labels = [-1] * n
    classes: list[list[int]] = []
    for t in range(n):
        if labels[t] >= 0:
            continue
        members = [s for s in range(n) if s == t or mutual[t, s]]
        for s in members:
            labels[s] = len(classes)
        classes.append(members)

    k = len(classes)
    # Edge a->b when some member of a is revealed preferred to a member of b.
    edge = [[False] * k for _ in range(k)]
    for a in range(k):
        for b in range(k):
            if a != b and any(closure[t, s] for t in classes[a] for s in classes[b]):
                edge[a][b] = True
    placed = [False] * k
    order: list[list[int]] = []
    for _ in range(k):
        ready = [
            a for a in range(k)
            if not placed[a] and not any(edge[b][a] and not placed[b] for b in range(k))
        ]
        assert ready, "class preference graph has a cycle"
        pick = min(ready, key=lambda a: classes[a][0])
        placed[pick] = True
        order.append(classes[pick])
    return order


def solve_afriat(dataset: Dataset, e=1) -> AfriatSolution:
    """Solve the Afriat inequalities at efficiency ``e``.

    Raises:
        AfriatInfeasibleError: e-GARP fails; carries the violating cycle.
        AfriatVerificationError: internal guard, never expected on valid
            input -- the constructed numbers failed the T^2 recheck.
    """
    ev = coerce_efficiency(e, dataset)
    rel = direct_relations(dataset, ev)
    if _violation_mask(rel).any():
        raise AfriatInfeasibleError(_minimal_cycle(rel))

    cm = cross_expenditures(dataset)
    n = dataset.n_observations
    zero: Number = Fraction(0) if dataset.exact else 0.0
    one: Number = Fraction(1) if dataset.exact else 1.0
    slack = [
        [cm.costs[t][s] - ev[t] * cm.costs[t][t] for s in range(n)]
        for t in range(n)
    ]

    phi: list[Number | None] = [None] * n
    lam: list[Number | None] = [None] * n
    done: list[int] = []
    for members in _classes_in_order(rel.closure):
        if done:
            level = min(phi[t] + lam[t] * slack[t][s] for t in done for s in members)
        else:
            level = zero
        for s in members:
            phi[s] = level
        for t in members:
            bound = one
            for s in done:
                if phi[s] > level:
                    # No weak link points to an earlier class, so this slack
                    # is strictly positive and the bound is well defined.
                    needed = (phi[s] - level) / slack[t][s]
                    if needed > bound:
                        bound = needed
            lam[t] = bound
        done.extend(members)

    solution = AfriatSolution(phi=tuple(phi), lam=tuple(lam), efficiency=ev)
    _verify_inequalities(solution, dataset)
    return solution


def _verify_inequalities(solution: AfriatSolution, dataset: Dataset) -> None:
    residual = worst_residual(solution, dataset)
    if residual > 0:
        raise AfriatVerificationError(
            f"constructed numbers violate an inequality by {residual!r}"
        )


def worst_residual(solution: AfriatSolution, dataset: Dataset) -> Number:
    """Largest violation of the T^2 inequality system; <= 0 means verified.

    Exact lane: raw residuals.  Float lane: residuals minus a tolerance of
    ``CHECK_RTOL`` times the magnitude of the terms involved (including the
    lam-weighted expenditures, so amplified rounding noise stays covered).
    """
    cm = cross_expenditures(dataset)
    ev = solution.efficiency
    n = dataset.n_observations
    worst: Number = Fraction(0) if dataset.exact else 0.0
    for t in range(n):
        own = ev[t] * cm.costs[t][t]
        for s in range(n):
            margin = solution.phi[s] - solution.phi[t] - solution.lam[t] * (
                cm.costs[t][s] - own
            )
            if not dataset.exact:
                scale = max(
                    1.0,
                    abs(solution.phi[s]),
                    abs(solution.phi[t]),
                    solution.lam[t] * (cm.costs[t][s] + own),
                )
                margin -= CHECK_RTOL * scale
            if margin > worst:
                worst = margin
    return worst


def evaluate_utility(solution: AfriatSolution, dataset: Dataset, bundle) -> Number:
    """Evaluate the recovered utility at one bundle.

    On the exact lane, float coordinates are taken at their exact binary
    value, so sampled points can be certified without rounding.
    """
    if len(bundle) != dataset.n_goods:
        raise DimensionMismatchError(
            f"bundle has {len(bundle)} coordinates, dataset has {dataset.n_goods} goods"
        )
    cm = cross_expenditures(dataset)
    ev = solution.efficiency
    if dataset.exact:
        coords = [v if isinstance(v, Fraction) else Fraction(v) for v in bundle]
    else:
        coords = [float(v) for v in bundle]
    best: Number | None = None
    for t in range(dataset.n_observations):
        spend = sum(p * c for p, c in zip(dataset.prices[t], coords))
        term = solution.phi[t] + solution.lam[t] * (spend - ev[t] * cm.costs[t][t])
        if best is None or term < best:
            best = term
    return best


def utility_profile(solution: AfriatSolution, dataset: Dataset) -> tuple[np.ndarray, np.ndarray]:
    """Float affine decomposition ``U(x) = min(offsets + X @ gradients.T)``.

    Returns (gradients, offsets) with gradients[t] = lam[t] * p[t].  Used by
    vectorised samplers; exact-lane data is mirrored to float64.
    """
    cm = cross_expenditures(dataset)
    lam = np.array([float(v) for v in solution.lam])
    phi = np.array([float(v) for v in solution.phi])
    evs = np.array([float(v) for v in solution.efficiency])
    own = evs * np.diag(cm.cost_array)
    gradients = lam[:, None] * dataset.price_array
    offsets = phi - lam * own
    return gradients, offsets


def evaluate_utility_batch(solution: AfriatSolution, dataset: Dataset,
                           points: np.ndarray) -> np.ndarray:
    """Vectorised float evaluation of the recovered utility at many points."""
    gradients, offsets = utility_profile(solution, dataset)
    return (points @ gradients.T + offsets).min(axis=1)
