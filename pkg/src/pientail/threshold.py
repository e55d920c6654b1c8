"""The critical confidence threshold of a premise set against an antecedent.

Fix premises and a conclusion antecedent X0.  For multipliers ``lambda``
on the probability simplex, every transaction type Z not containing all of
X0 yields the ratio

    (sum of lambda over premises witnessed by Z)
    -------------------------------------------------
    (sum of lambda over premises covered by Z)

with 0/0 read as 0.  The critical threshold is the smallest worst-case
ratio any choice of multipliers can achieve.  Its role: the structural
combination conditions plus ``gamma`` at or above the critical threshold
of some premise subset characterise entailment for every ``gamma``
strictly between 0 and 1.

Whether a given ``gamma`` is at or above the critical threshold is a
single exact LP feasibility question (``feasible_at``), so decisions never
depend on any numeric tolerance; bisection with ``feasible_at`` merely
reports a bracket for the value itself, which is in general irrational.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import lp
from .entailment import (
    EntailmentQuery,
    EntailmentVerdict,
    Regime,
    _certificate_violation,
    _combination_conditions,
    _nonempty_subsets,
    _query_rows,
    _tautology_verdict,
    lp_counterexample,
    signature_rows,
)
from .homogeneity import ImplicationSet
from .model import (
    AttrSet,
    CoverStatus,
    DEFAULT_ENUMERATION_CAP,
    PartialImplication,
    UniverseMismatchError,
    as_rational,
)


@dataclass(frozen=True)
class ThresholdBracket:
    """An enclosing interval for the critical threshold.

    ``multipliers`` is a simplex point feasible at ``upper``; ``lower`` is
    0 exactly when the critical threshold is 0, and otherwise a value at
    which no multipliers exist.
    """

    lower: Fraction
    upper: Fraction
    tolerance: Fraction
    multipliers: tuple[Fraction, ...]

    @property
    def midpoint(self) -> Fraction:
        return (self.lower + self.upper) / 2


@dataclass(frozen=True)
class _RatioRow:
    """Premise index sets of one signature: who is witnessed, who is covered."""

    witnessed: tuple[int, ...]
    covered: tuple[int, ...]


def _ratio_rows(
    premises: ImplicationSet, antecedent: AttrSet, max_attrs: int
) -> list[_RatioRow]:
    """Distinct (witnessed, covered) premise patterns over transaction
    types that do not contain all of ``antecedent``."""
    if premises.universe != antecedent.universe:
        raise UniverseMismatchError("premises and antecedent universes differ")
    if len(premises) < 1:
        raise ValueError("critical threshold needs at least one premise")
    probe = PartialImplication(antecedent, antecedent.universe.empty())
    rows = signature_rows(
        [probe, *premises],
        premises.universe,
        extra=antecedent,
        max_attrs=max_attrs,
    )
    seen: set[tuple[CoverStatus, ...]] = set()
    out: list[_RatioRow] = []
    for row in rows:
        if row.statuses[0] is not CoverStatus.NOT_COVERED:
            continue
        rest = row.statuses[1:]
        if rest in seen:
            continue
        seen.add(rest)
        out.append(
            _RatioRow(
                witnessed=tuple(
                    i for i, s in enumerate(rest) if s is CoverStatus.WITNESSED
                ),
                covered=tuple(
                    i for i, s in enumerate(rest) if s is not CoverStatus.NOT_COVERED
                ),
            )
        )
    return out


def _feasible(rows: list[_RatioRow], k: int, gamma: Fraction) -> tuple[Fraction, ...] | None:
    """Simplex multipliers whose worst ratio over ``rows`` is at most ``gamma``."""
    constraints = [
        lp.Constraint(
            coeffs=tuple([Fraction(1)] * k),
            relation=lp.Relation.EQ,
            rhs=Fraction(1),
        )
    ]
    for row in rows:
        coeffs = [Fraction(0)] * k
        for i in row.covered:
            coeffs[i] -= gamma
        for i in row.witnessed:
            coeffs[i] += 1
        constraints.append(
            lp.Constraint(
                coeffs=tuple(coeffs), relation=lp.Relation.LE, rhs=Fraction(0)
            )
        )
    return lp.feasible(constraints, k)


def feasible_at(
    gamma: Fraction | int | str,
    premises: ImplicationSet,
    antecedent: AttrSet,
    max_attrs: int = DEFAULT_ENUMERATION_CAP,
) -> tuple[Fraction, ...] | None:
    """Multipliers witnessing that the critical threshold is at most
    ``gamma``, or None when ``gamma`` lies strictly below it.

    The feasible set only grows with ``gamma``, and the infimum defining
    the critical threshold is attained, so this single feasibility test
    decides the comparison exactly.
    """
    g = as_rational(gamma)
    if not 0 <= g <= 1:
        raise ValueError(f"gamma must lie in [0, 1], got {g}")
    rows = _ratio_rows(premises, antecedent, max_attrs)
    return _feasible(rows, len(premises), g)


def max_ratio(
    multipliers: Sequence[Fraction],
    premises: ImplicationSet,
    antecedent: AttrSet,
    max_attrs: int = DEFAULT_ENUMERATION_CAP,
) -> Fraction:
    """Worst-case witnessed/covered ratio of fixed simplex multipliers.

    Ratios with zero denominator count as 0, and with no eligible
    transaction types at all (empty ``antecedent`` is the only such case)
    the maximum is 0 by convention.
    """
    lams = [as_rational(lam) for lam in multipliers]
    if len(lams) != len(premises):
        raise ValueError("need one multiplier per premise")
    if any(lam < 0 for lam in lams):
        raise ValueError("multipliers must be nonnegative")
    if sum(lams) != 1:
        raise ValueError("multipliers must sum to 1")
    best = Fraction(0)
    for row in _ratio_rows(premises, antecedent, max_attrs):
        den = sum(lams[i] for i in row.covered)
        if den == 0:
            continue
        num = sum(lams[i] for i in row.witnessed)
        ratio = num / den
        if ratio > best:
            best = ratio
    return best


def critical_threshold(
    premises: ImplicationSet,
    antecedent: AttrSet,
    tolerance: Fraction | int | str = Fraction(1, 100_000),
    max_attrs: int = DEFAULT_ENUMERATION_CAP,
) -> ThresholdBracket:
    """Bracket the critical threshold to within ``tolerance`` by bisection.

    Every probe is an exact feasibility test, so the bracket is certain:
    multipliers exist at ``upper`` and (unless the value is exactly 0,
    which is detected exactly) none exist at ``lower``.
    """
    tol = as_rational(tolerance)
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    rows = _ratio_rows(premises, antecedent, max_attrs)
    k = len(premises)
    at_zero = _feasible(rows, k, Fraction(0))
    if at_zero is not None:
        return ThresholdBracket(
            lower=Fraction(0), upper=Fraction(0), tolerance=tol, multipliers=at_zero
        )
    lower = Fraction(0)
    upper = Fraction(1)
    at_upper = _feasible(rows, k, upper)
    assert at_upper is not None, "every ratio is at most 1"
    while upper - lower > tol:
        mid = (lower + upper) / 2
        at_mid = _feasible(rows, k, mid)
        if at_mid is None:
            lower = mid
        else:
            upper = mid
            at_upper = at_mid
    return ThresholdBracket(
        lower=lower, upper=upper, tolerance=tol, multipliers=at_upper
    )


def decide_general(
    query: EntailmentQuery, max_attrs: int = DEFAULT_ENUMERATION_CAP
) -> EntailmentVerdict:
    """Decide entailment for any threshold strictly between 0 and 1.

    The entailment holds exactly when the conclusion is trivial or some
    nonempty premise subset satisfies the structural combination
    conditions and has critical threshold at most ``gamma``; in that case
    the feasibility multipliers of the subset, padded with zeros,
    certify the full entailment.  Subsets are scanned in increasing
    bitmask order and the first success is reported.
    """
    if query.k < 1:
        raise ValueError("general decider needs at least one premise")
    if not 0 < query.gamma < 1:
        raise ValueError(
            f"general decider needs gamma strictly between 0 and 1, got {query.gamma}"
        )
    if query.conclusion.consequent <= query.conclusion.antecedent:
        return _tautology_verdict(query)
    x0 = query.conclusion.antecedent
    for indices in _nonempty_subsets(query.k):
        if not _combination_conditions(query, indices):
            continue
        sub = query.premises.subset(indices)
        lams = feasible_at(query.gamma, sub, x0, max_attrs)
        if lams is None:
            continue
        certificate = [Fraction(0)] * query.k
        for lam, i in zip(lams, indices):
            certificate[i] = lam
        rows = _query_rows(query, max_attrs)
        if _certificate_violation(rows, query.gamma, certificate) is not None:
            raise RuntimeError("subset multipliers fail the full constraint system")
        return EntailmentVerdict(
            holds=True,
            regime=Regime.GENERAL_GAMMA_STAR,
            certificate=tuple(certificate),
        )
    return EntailmentVerdict(
        holds=False,
        regime=Regime.GENERAL_GAMMA_STAR,
        counterexample=lp_counterexample(query, max_attrs),
    )
