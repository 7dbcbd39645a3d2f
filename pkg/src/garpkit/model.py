"""Expenditure dataset model, validation, and cross-expenditure arithmetic.

A dataset is a finite list of market observations: at observation ``t`` the
consumer faced strictly positive prices ``p[t]`` and bought the nonnegative,
nonzero bundle ``x[t]``.  Everything downstream (revealed-preference
relations, efficiency indices, utility recovery) is driven by the T-by-T
cross-expenditure matrix ``costs[t][s] = p[t] . x[s]`` and by order
comparisons against deflated own expenditures ``e[t] * costs[t][t]``.

Two arithmetic lanes are supported:

* exact lane -- every entry is a ``fractions.Fraction``.  Decimal strings
  such as ``"0.8"`` are parsed without binary rounding, so breakpoint ties
  (for example ``4 == 0.8 * 5``) are decided exactly.  Comparisons carry no
  tolerance.
* float lane -- entries are ``float`` and order comparisons treat values
  within a relative tolerance (default 1e-12) as equal.  This keeps verdicts
  stable for large data where exact rationals are too slow, while still
  recognising ties that differ only by rounding noise.

The lane is chosen at validation time and travels with the ``Dataset``; all
other modules read it from there.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction
from functools import cached_property, lru_cache
from math import isfinite
from typing import Sequence, Union

import numpy as np

from .errors import (
    LengthMismatchError,
    NegativeBundleError,
    NonpositivePriceError,
    ShapeMismatchError,
    ZeroBundleError,
)

Number = Union[Fraction, float]

#: Relative tolerance used for float-lane order comparisons.
DEFAULT_FLOAT_RTOL = 1e-12


def leq(lhs: Number, rhs: Number, rel_tol: float = 0.0) -> bool:
    """Tolerant ``lhs <= rhs``.

    With ``rel_tol == 0`` this is an exact comparison (the exact lane).  With
    a positive tolerance, values within ``rel_tol * max(|lhs|, |rhs|)`` of
    each other count as equal, so a knife-edge tie never degrades into a
    strict inequality because of rounding.
    """
    if rel_tol == 0.0:
        return lhs <= rhs
    return lhs <= rhs + rel_tol * max(abs(lhs), abs(rhs))


def lt(lhs: Number, rhs: Number, rel_tol: float = 0.0) -> bool:
    """Tolerant ``lhs < rhs``; strict counterpart of :func:`leq`.

    ``lt(a, b, tol)`` implies ``leq(a, b, tol)``, and ``not leq(a, b, tol)``
    implies ``lt(b, a, tol)``, mirroring the exact-order relationships.
    """
    if rel_tol == 0.0:
        return lhs < rhs
    return lhs < rhs - rel_tol * max(abs(lhs), abs(rhs))


def _to_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        if not isfinite(value):
            raise ValueError(f"non-finite entry {value!r}")
        # Exact binary value of the float; callers with decimal intent
        # should pass strings instead.
        return Fraction(value)
    if isinstance(value, (int, str, Decimal)):
        return Fraction(value)
    raise TypeError(f"cannot interpret {value!r} as a rational number")


def _to_float(value) -> float:
    out = float(value)
    if not isfinite(out):
        raise ValueError(f"non-finite entry {value!r}")
    return out


def _coerce_table(rows, exact: bool) -> tuple[tuple[Number, ...], ...]:
    convert = _to_fraction if exact else _to_float
    return tuple(tuple(convert(v) for v in row) for row in rows)


def _contains_float(rows) -> bool:
    return any(isinstance(v, float) for row in rows for v in row)


@dataclass(frozen=True)
class Dataset:
    """A validated expenditure dataset.

    Attributes:
        prices: T rows of L strictly positive prices.
        bundles: T rows of L nonnegative quantities, no row entirely zero.
        exact: True when entries are ``Fraction`` (exact lane).
        rel_tol: relative tolerance for order comparisons; 0.0 on the exact
            lane.
    """

    prices: tuple[tuple[Number, ...], ...]
    bundles: tuple[tuple[Number, ...], ...]
    exact: bool
    rel_tol: float

    @property
    def n_observations(self) -> int:
        return len(self.prices)

    @property
    def n_goods(self) -> int:
        return len(self.prices[0])

    @cached_property
    def price_array(self) -> np.ndarray:
        """Float64 mirror of the prices (used by vectorised code paths)."""
        return np.array([[float(v) for v in row] for row in self.prices])

    @cached_property
    def bundle_array(self) -> np.ndarray:
        """Float64 mirror of the bundles."""
        return np.array([[float(v) for v in row] for row in self.bundles])


def validate_dataset(prices, bundles, *, exact: bool | None = None,
                     rel_tol: float = DEFAULT_FLOAT_RTOL) -> Dataset:
    """Validate raw price/bundle tables and build a :class:`Dataset`.

    Args:
        prices: sequence of T price rows, each with L entries.  Entries may
            be ints, floats, decimal strings, ``Decimal`` or ``Fraction``.
        bundles: sequence of T bundle rows with the same shape.
        exact: force the exact lane (True) or the float lane (False).  When
            None the lane is inferred: exact unless any entry is a float.
        rel_tol: float-lane comparison tolerance; ignored on the exact lane.

    Raises:
        ShapeMismatchError: tables are empty, ragged, or of different shape.
        NonpositivePriceError: a price entry is <= 0.
        NegativeBundleError: a bundle entry is < 0.
        ZeroBundleError: some bundle row is all zeros.
    """
    price_rows = [tuple(row) for row in prices]
    bundle_rows = [tuple(row) for row in bundles]
    if not price_rows or not bundle_rows:
        raise ShapeMismatchError("at least one observation is required")
    if len(price_rows) != len(bundle_rows):
        raise ShapeMismatchError(
            f"{len(price_rows)} price rows vs {len(bundle_rows)} bundle rows"
        )
    width = len(price_rows[0])
    if width == 0:
        raise ShapeMismatchError("at least one good is required")
    for t, (p_row, x_row) in enumerate(zip(price_rows, bundle_rows)):
        if len(p_row) != width or len(x_row) != width:
            raise ShapeMismatchError(f"row {t} does not have {width} entries")

    if exact is None:
        exact = not (_contains_float(price_rows) or _contains_float(bundle_rows))

    try:
        price_table = _coerce_table(price_rows, exact)
        bundle_table = _coerce_table(bundle_rows, exact)
    except (ValueError, TypeError) as err:
        raise ShapeMismatchError(str(err)) from err

    zero = Fraction(0) if exact else 0.0
    for t, row in enumerate(price_table):
        for i, v in enumerate(row):
            if not v > zero:
                raise NonpositivePriceError(t, i)
    for t, row in enumerate(bundle_table):
        for i, v in enumerate(row):
            if v < zero:
                raise NegativeBundleError(t, i)
        if all(v == zero for v in row):
            raise ZeroBundleError(t)

    return Dataset(
        prices=price_table,
        bundles=bundle_table,
        exact=exact,
        rel_tol=0.0 if exact else float(rel_tol),
    )


@dataclass(frozen=True, eq=False)
class CrossMatrix:
    """Cross expenditures and their ratios for one dataset.

    ``costs[t][s]`` is the cost of bundle ``s`` at the prices of observation
    ``t``; ``ratios[t][s] = costs[t][s] / costs[t][t]`` is that cost as a
    share of the expenditure actually incurred at ``t``.  The diagonal of
    ``ratios`` is identically 1.
    """

    costs: tuple[tuple[Number, ...], ...]
    ratios: tuple[tuple[Number, ...], ...]

    @cached_property
    def cost_array(self) -> np.ndarray:
        return np.array([[float(v) for v in row] for row in self.costs])

    @cached_property
    def ratio_array(self) -> np.ndarray:
        return np.array([[float(v) for v in row] for row in self.ratios])


@lru_cache(maxsize=128)
def cross_expenditures(dataset: Dataset) -> CrossMatrix:
    """Compute (and cache) the cross-expenditure matrix of ``dataset``.

    Strictly positive everywhere: prices are positive and bundles nonzero.
    On the exact lane every entry is a ``Fraction``; on the float lane the
    products are accumulated in float64.
    """
    if dataset.exact:
        costs = tuple(
            tuple(sum(p * x for p, x in zip(p_row, x_row))
                  for x_row in dataset.bundles)
            for p_row in dataset.prices
        )
        ratios = tuple(
            tuple(row[s] / row[t] for s in range(dataset.n_observations))
            for t, row in enumerate(costs)
        )
        return CrossMatrix(costs=costs, ratios=ratios)
    cost_arr = dataset.price_array @ dataset.bundle_array.T
    ratio_arr = cost_arr / np.diag(cost_arr)[:, None]
    return CrossMatrix(
        costs=tuple(tuple(row) for row in cost_arr.tolist()),
        ratios=tuple(tuple(row) for row in ratio_arr.tolist()),
    )


@dataclass(frozen=True)
class EfficiencyVector:
    """Per-observation budget deflators, each in (0, 1]."""

    values: tuple[Number, ...]

    def __iter__(self):
        return iter(self.values)

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, idx: int) -> Number:
        return self.values[idx]


def _efficiency_entry(value, exact: bool) -> Number:
    if exact:
        if isinstance(value, float):
            # A float efficiency against exact data is read through its
            # shortest decimal form, so 0.8 means 4/5 rather than the binary
            # neighbour of 0.8.  Pass a string or Fraction to be explicit.
            return Fraction(repr(value))
        return Fraction(value)
    return float(Fraction(value)) if isinstance(value, str) else float(value)


def coerce_efficiency(e, dataset: Dataset) -> EfficiencyVector:
    """Normalise ``e`` into an :class:`EfficiencyVector` for ``dataset``.

    Accepts an existing vector, a scalar (broadcast to every observation),
    or a sequence with one entry per observation.  Entries must satisfy
    0 < e <= 1; the bounds are checked exactly in both lanes.

    Raises:
        LengthMismatchError: a sequence of the wrong length was given.
        ValueError: an entry is outside (0, 1].
    """
    n = dataset.n_observations
    if isinstance(e, EfficiencyVector):
        raw = list(e.values)
    elif isinstance(e, (int, float, str, Fraction, Decimal)):
        raw = [e] * n
    else:
        raw = list(e)
    if len(raw) != n:
        raise LengthMismatchError(
            f"efficiency vector has {len(raw)} entries for {n} observations"
        )
    values = tuple(_efficiency_entry(v, dataset.exact) for v in raw)
    for v in values:
        if not (0 < v <= 1):
            raise ValueError(f"efficiency coefficient {v!r} is outside (0, 1]")
    return EfficiencyVector(values)
