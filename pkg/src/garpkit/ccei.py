"""Critical cost efficiency: the supremum of budget deflators passing e-GARP.

The index is ``sup { e in (0, 1] : uniform e-GARP holds }``.  Shrinking every
budget by a common factor only removes revealed-preference links, so the
passing set is downward closed and the verdict, viewed as a function of e,
flips exactly once.  The flip can only happen at a cross-expenditure ratio
``costs[t][s] / costs[t][t]`` (that is where individual links switch on), so
the supremum is always one of those breakpoints and can be computed exactly.

Attainment is genuinely two-sided and is reported, not assumed:

* the verdict can fail just *above* a breakpoint only (a strict link turns
  weak exactly at its own ratio) -- then the supremum passes e-GARP and
  ``attained`` is True;
* a weak link switching on exactly *at* its ratio can complete a cycle
  through an already-strict link, making the verdict fail at the breakpoint
  while passing everywhere below -- then the supremum itself violates e-GARP
  and ``attained`` is False.

Both cases agree with binary search on the verdict, which converges to the
same flip point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isfinite
from typing import Optional

from .errors import InvalidToleranceError
from .model import Dataset, Number, cross_expenditures
from .revpref import (
    CycleWitness,
    _minimal_cycle,
    _violation_mask,
    relation_matrices,
    transitive_closure,
)


@dataclass(frozen=True)
class CceiResult:
    """Exact efficiency index plus audit trail.

    Attributes:
        value: the supremum, as a ``Fraction`` (exact lane) or float.
        attained: whether uniform e-GARP holds at ``value`` itself.
        witness_above: violating cycle at ``witness_probe`` (None when the
            dataset passes GARP outright).
        witness_probe: the efficiency at which ``witness_above`` was found;
            the midpoint to the next breakpoint above ``value``, or 1 when
            the flip happens at 1 itself.
        breakpoints: sorted candidate ratios in (0, 1], including 1.
    """

    value: Number
    attained: bool
    witness_above: Optional[CycleWitness]
    witness_probe: Optional[Number]
    breakpoints: tuple[Number, ...]


def _probe_value(dataset: Dataset, e_scalar) -> Number:
    # Bisection probes arrive as floats; on the exact lane they are dyadic
    # rationals, so Fraction(float) keeps the whole verdict exact.
    if dataset.exact and isinstance(e_scalar, float):
        return Fraction(e_scalar)
    return e_scalar


def _uniform_holds(dataset: Dataset, cm, e_scalar) -> bool:
    """Fast verdict at a uniform efficiency, no witness construction."""
    n = dataset.n_observations
    weak, strict = relation_matrices(
        cm, [_probe_value(dataset, e_scalar)] * n, dataset.rel_tol, dataset.exact
    )
    closure = transitive_closure(weak)
    return not (closure & strict.T).any()


def _witnessed_failure(dataset: Dataset, cm, e_scalar) -> CycleWitness:
    from .revpref import RevealedRelation

    n = dataset.n_observations
    weak, strict = relation_matrices(
        cm, [_probe_value(dataset, e_scalar)] * n, dataset.rel_tol, dataset.exact
    )
    rel = RevealedRelation(weak=weak, strict=strict, closure=transitive_closure(weak))
    assert _violation_mask(rel).any(), "witness requested at a passing efficiency"
    return _minimal_cycle(rel)


def _candidates(dataset: Dataset) -> list[Number]:
    cm = cross_expenditures(dataset)
    one: Number = Fraction(1) if dataset.exact else 1.0
    found = {one}
    for row in cm.ratios:
        for r in row:
            if 0 < r <= 1:
                found.add(r)
    return sorted(found)


def ccei_exact(dataset: Dataset) -> CceiResult:
    """Exact critical cost efficiency via breakpoint search.

    Binary search over the sorted breakpoints finds the boundary pair
    (last passing candidate, first failing candidate); a single probe at
    their midpoint decides whether the flip happens just above the passing
    candidate (attained) or exactly at the failing one (not attained).
    """
    cm = cross_expenditures(dataset)
    cands = _candidates(dataset)
    one = cands[-1]
    if _uniform_holds(dataset, cm, one):
        return CceiResult(
            value=one,
            attained=True,
            witness_above=None,
            witness_probe=None,
            breakpoints=tuple(cands),
        )
    # The smallest breakpoint always passes: below it no relation is strict.
    lo, hi = 0, len(cands) - 1  # invariant: cands[lo] passes, cands[hi] fails
    assert _uniform_holds(dataset, cm, cands[0]), "smallest breakpoint must pass"
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if _uniform_holds(dataset, cm, cands[mid]):
            lo = mid
        else:
            hi = mid
    passing, failing = cands[lo], cands[hi]
    midpoint = (passing + failing) / 2
    if _uniform_holds(dataset, cm, midpoint):
        # Open interval below `failing` passes: supremum not attained.
        value, attained = failing, False
        if hi + 1 < len(cands):
            probe = (failing + cands[hi + 1]) / 2
        else:
            probe = one  # flip at 1: nothing above 1 to probe
    else:
        value, attained = passing, True
        probe = midpoint
    witness = _witnessed_failure(dataset, cm, probe)
    return CceiResult(
        value=value,
        attained=attained,
        witness_above=witness,
        witness_probe=probe,
        breakpoints=tuple(cands),
    )


def ccei_binary_search(dataset: Dataset, tol: float = 1e-9) -> float:
    """Critical cost efficiency by bisection of the verdict on [0, 1].

    Maintains a passing lower endpoint (0 is vacuous: with every budget
    deflated toward nothing, no relation survives) and a failing upper
    endpoint, halving until the bracket is narrower than ``tol``.  Returns
    the bracket midpoint, which is within ``tol`` of the exact supremum.
    """
    if not (isinstance(tol, (int, float)) and isfinite(tol)) or tol <= 0:
        raise InvalidToleranceError(f"tolerance must be positive and finite, got {tol!r}")
    cm = cross_expenditures(dataset)
    if _uniform_holds(dataset, cm, Fraction(1) if dataset.exact else 1.0):
        return 1.0
    lo, hi = 0.0, 1.0
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if _uniform_holds(dataset, cm, mid):
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2
