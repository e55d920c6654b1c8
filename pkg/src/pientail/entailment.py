"""Deciding entailment between partial implications at a confidence threshold.

The question: given premises ``X1 -> Y1, ..., Xk -> Yk`` and a conclusion
``X0 -> Y0``, does every dataset that satisfies all premises at confidence
``gamma`` also satisfy the conclusion at ``gamma``?

Each transaction type Z induces a linear constraint through the weights of
``model.weight`` (witness ``1 - gamma``, violator ``-gamma``, else 0), and
the whole question is linear-programming duality:

* the entailment holds exactly when there are multipliers ``lambda >= 0``,
  one per premise, with ``sum_i lambda_i * w_Z(premise_i) <= w_Z(conclusion)``
  for every Z - a certificate that can be re-checked independently;
* otherwise the corresponding primal program is unbounded, and scaling a
  rational recession ray to integers yields a finite counterexample
  dataset that satisfies every premise and breaks the conclusion.

Transactions only matter through their cover pattern against the k+1 rules
involved, so the ``2**n`` transaction types collapse to at most ``3**(k+1)``
distinct constraint signatures before any program is built.

Besides the LP route, this module implements direct structural tests that
decide the same question without solving programs in the regimes where
that is possible: at most one premise (threshold-independent), exactly two
premises at ``gamma >= 1/2``, ``gamma < 1/k``, and ``gamma >= (k-1)/k``.
The remaining band is handled in ``threshold`` via the critical-threshold
characterisation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Sequence

from . import lp
from .homogeneity import ImplicationSet, enforces_homogeneity
from .model import (
    AttrSet,
    AttributeCapError,
    AttributeUniverse,
    CoverStatus,
    DEFAULT_ENUMERATION_CAP,
    Dataset,
    PartialImplication,
    UniverseMismatchError,
    as_rational,
    bit_positions,
    satisfies,
)

# Beyond this many premises the subset search of the critical-threshold
# characterisation stops paying off and auto dispatch falls back to the LP.
GENERAL_PREMISE_CAP = 12


class Regime(Enum):
    """Which decision route produced a verdict."""

    TAUTOLOGY = "tautology"
    ONE_PREMISE = "one-premise"
    TWO_PREMISE = "two-premise"
    LOW_GAMMA = "low-gamma"
    HIGH_GAMMA = "high-gamma"
    GENERAL_GAMMA_STAR = "general-gamma-star"
    LP_DIRECT = "lp-direct"


class Method(Enum):
    """Dispatch policy for ``decide``."""

    AUTO = "auto"
    LP = "lp"
    CHARACTERIZATION = "charact"


@dataclass(frozen=True)
class EntailmentQuery:
    """Premises, conclusion, and the confidence threshold they share."""

    premises: ImplicationSet
    conclusion: PartialImplication
    gamma: Fraction

    def __post_init__(self) -> None:
        if self.premises.universe != self.conclusion.universe:
            raise UniverseMismatchError("premises and conclusion universes differ")
        g = as_rational(self.gamma)
        if not 0 <= g <= 1:
            raise ValueError(f"gamma must lie in [0, 1], got {g}")
        object.__setattr__(self, "gamma", g)

    @property
    def k(self) -> int:
        return len(self.premises)

    @property
    def universe(self) -> AttributeUniverse:
        return self.premises.universe

    def with_premises(self, indices: Sequence[int]) -> EntailmentQuery:
        return EntailmentQuery(
            self.premises.subset(indices), self.conclusion, self.gamma
        )


@dataclass(frozen=True)
class EntailmentVerdict:
    """Outcome of a decision, always carrying a checkable witness.

    ``certificate`` (when the entailment holds) lists one multiplier per
    premise; ``counterexample`` (when it fails) is a dataset satisfying
    every premise and violating the conclusion.
    """

    holds: bool
    regime: Regime
    certificate: tuple[Fraction, ...] | None = None
    counterexample: Dataset | None = None


@dataclass(frozen=True)
class ConstraintSignature:
    """Cover pattern of one transaction type against conclusion and premises.

    Index 0 refers to the conclusion, index i >= 1 to premise i.  Indices
    in neither set are not covered.
    """

    witnessed: frozenset[int]
    violated: frozenset[int]


@dataclass(frozen=True)
class SignatureRow:
    """One distinct signature plus the first transaction realising it."""

    statuses: tuple[CoverStatus, ...]
    witness: AttrSet

    def signature(self) -> ConstraintSignature:
        return ConstraintSignature(
            witnessed=frozenset(
                i for i, s in enumerate(self.statuses) if s is CoverStatus.WITNESSED
            ),
            violated=frozenset(
                i for i, s in enumerate(self.statuses) if s is CoverStatus.VIOLATED
            ),
        )


def signature_rows(
    implications: Sequence[PartialImplication],
    universe: AttributeUniverse,
    extra: AttrSet | None = None,
    max_attrs: int = DEFAULT_ENUMERATION_CAP,
) -> list[SignatureRow]:
    """Distinct cover patterns over all transaction types, with witnesses.

    Only subsets of the attributes occurring in ``implications`` (plus
    ``extra``) are enumerated; any other transaction realises the same
    pattern as its restriction to those attributes.  Rows appear in the
    order their first witness arises when transaction bitmasks are
    enumerated in increasing order, which keeps every downstream
    "first found" answer deterministic.
    """
    occ = extra.bits if extra is not None else 0
    for imp in implications:
        if imp.universe != universe:
            raise UniverseMismatchError("implication belongs to a different universe")
        occ |= imp.span.bits
    width = occ.bit_count()
    if width > max_attrs:
        raise AttributeCapError(
            f"{width} occurring attributes exceed the enumeration cap of {max_attrs}"
        )
    positions = bit_positions(occ)
    place = {p: i for i, p in enumerate(positions)}

    def compress(bits: int) -> int:
        out = 0
        for p in bit_positions(bits):
            out |= 1 << place[p]
        return out

    def expand(small: int) -> int:
        out = 0
        for i in bit_positions(small):
            out |= 1 << positions[i]
        return out

    pairs = [
        (compress(imp.antecedent.bits), compress(imp.span.bits))
        for imp in implications
    ]
    seen: dict[tuple[int, ...], int] = {}
    order: list[tuple[int, ...]] = []
    for z in range(1 << width):
        code = []
        for x, xy in pairs:
            if z & x != x:
                code.append(0)
            elif z & xy == xy:
                code.append(2)
            else:
                code.append(1)
        key = tuple(code)
        if key not in seen:
            seen[key] = z
            order.append(key)
    status_by_code = {
        0: CoverStatus.NOT_COVERED,
        1: CoverStatus.VIOLATED,
        2: CoverStatus.WITNESSED,
    }
    return [
        SignatureRow(
            statuses=tuple(status_by_code[c] for c in key),
            witness=AttrSet(universe, expand(seen[key])),
        )
        for key in order
    ]


def _status_weight(status: CoverStatus, gamma: Fraction) -> Fraction:
    if status is CoverStatus.WITNESSED:
        return 1 - gamma
    if status is CoverStatus.VIOLATED:
        return -gamma
    return Fraction(0)


def _query_rows(query: EntailmentQuery, max_attrs: int) -> list[SignatureRow]:
    return signature_rows(
        [query.conclusion, *query.premises],
        query.universe,
        max_attrs=max_attrs,
    )


def decide_lp(
    query: EntailmentQuery, max_attrs: int = DEFAULT_ENUMERATION_CAP
) -> EntailmentVerdict:
    """Decide by linear programming, for any ``gamma`` in [0, 1].

    One variable per distinct constraint signature; minimising the
    conclusion weight subject to nonnegative premise weights is bounded
    (at zero) exactly when the entailment holds.  Boundedness hands back
    the premise multipliers through the row duals; unboundedness hands
    back a rational ray that integer scaling turns into a counterexample
    dataset.  Both witnesses are re-verified before being returned.
    """
    rows = _query_rows(query, max_attrs)
    gamma = query.gamma
    k = query.k
    weights = [
        [_status_weight(s, gamma) for s in row.statuses] for row in rows
    ]
    program = lp.LinearProgram(
        num_vars=len(rows),
        objective=tuple(w[0] for w in weights),
        constraints=tuple(
            lp.Constraint(
                coeffs=tuple(w[i] for w in weights),
                relation=lp.Relation.GE,
                rhs=Fraction(0),
            )
            for i in range(1, k + 1)
        ),
    )
    outcome = lp.solve(program)
    if isinstance(outcome, lp.Optimal):
        if outcome.value != 0:
            raise RuntimeError("homogeneous program with a nonzero optimum")
        certificate = outcome.row_duals
        assert certificate is not None and len(certificate) == k
        violation = _certificate_violation(rows, gamma, certificate)
        if violation is not None:
            raise RuntimeError("extracted multipliers fail their own constraints")
        return EntailmentVerdict(
            holds=True, regime=Regime.LP_DIRECT, certificate=certificate
        )
    assert isinstance(outcome, lp.Unbounded)
    counterexample = _dataset_from_ray(query, rows, outcome.ray)
    return EntailmentVerdict(
        holds=False, regime=Regime.LP_DIRECT, counterexample=counterexample
    )


def _dataset_from_ray(
    query: EntailmentQuery,
    rows: list[SignatureRow],
    ray: tuple[Fraction, ...],
) -> Dataset:
    """Scale a rational recession ray to the smallest integer multiple and
    re-verify that the resulting dataset is a genuine counterexample."""
    scale = math.lcm(*(component.denominator for component in ray))
    counts = [int(component * scale) for component in ray]
    shrink = math.gcd(*counts)
    if shrink > 1:
        counts = [c // shrink for c in counts]
    data = Dataset(
        query.universe,
        {
            row.witness: count
            for row, count in zip(rows, counts)
            if count
        },
    )
    for premise in query.premises:
        if not satisfies(data, premise, query.gamma):
            raise RuntimeError("counterexample fails a premise on re-verification")
    if satisfies(data, query.conclusion, query.gamma):
        raise RuntimeError("counterexample satisfies the conclusion")
    return data


def lp_counterexample(
    query: EntailmentQuery, max_attrs: int = DEFAULT_ENUMERATION_CAP
) -> Dataset:
    """Counterexample dataset for a non-entailment (raises if it holds)."""
    verdict = decide_lp(query, max_attrs)
    if verdict.holds:
        raise RuntimeError("no counterexample: the entailment holds")
    assert verdict.counterexample is not None
    return verdict.counterexample


@dataclass(frozen=True)
class CertificateViolation:
    """A constraint broken by a claimed certificate, with its witness."""

    signature: ConstraintSignature
    witness: AttrSet
    lhs: Fraction
    rhs: Fraction


def _certificate_violation(
    rows: list[SignatureRow],
    gamma: Fraction,
    multipliers: Sequence[Fraction],
) -> CertificateViolation | None:
    for row in rows:
        rhs = _status_weight(row.statuses[0], gamma)
        lhs = Fraction(0)
        for lam, status in zip(multipliers, row.statuses[1:]):
            if status is CoverStatus.WITNESSED:
                lhs += lam * (1 - gamma)
            elif status is CoverStatus.VIOLATED:
                lhs -= lam * gamma
        if lhs > rhs:
            return CertificateViolation(
                signature=row.signature(), witness=row.witness, lhs=lhs, rhs=rhs
            )
    return None


def find_certificate_violation(
    query: EntailmentQuery,
    multipliers: Sequence[Fraction],
    max_attrs: int = DEFAULT_ENUMERATION_CAP,
) -> CertificateViolation | None:
    """First constraint signature (in enumeration order) broken by
    ``multipliers``, or None when they certify the entailment."""
    lams = [as_rational(lam) for lam in multipliers]
    if len(lams) != query.k:
        raise ValueError("need one multiplier per premise")
    if any(lam < 0 for lam in lams):
        raise ValueError("multipliers must be nonnegative")
    rows = _query_rows(query, max_attrs)
    return _certificate_violation(rows, query.gamma, lams)


def check_certificate(
    query: EntailmentQuery,
    multipliers: Sequence[Fraction],
    max_attrs: int = DEFAULT_ENUMERATION_CAP,
) -> bool:
    """Do ``multipliers`` certify the entailment over every transaction type?"""
    return find_certificate_violation(query, multipliers, max_attrs) is None


def _zeros(k: int) -> tuple[Fraction, ...]:
    return tuple([Fraction(0)] * k)


def _tautology_verdict(query: EntailmentQuery) -> EntailmentVerdict:
    """Verdict for queries decided without looking at the premises:
    trivial conclusions and ``gamma = 0`` always hold; with no premises,
    anything else fails on the single-transaction dataset ``{X0}``."""
    if query.gamma == 0 or query.conclusion.consequent <= query.conclusion.antecedent:
        return EntailmentVerdict(
            holds=True, regime=Regime.TAUTOLOGY, certificate=_zeros(query.k)
        )
    assert query.k == 0
    data = Dataset(query.universe, {query.conclusion.antecedent: 1})
    assert not satisfies(data, query.conclusion, query.gamma)
    return EntailmentVerdict(
        holds=False, regime=Regime.TAUTOLOGY, counterexample=data
    )


def _single_premise_entails(
    premise: PartialImplication, conclusion: PartialImplication
) -> bool:
    """Threshold-independent test for entailment from one premise: the
    premise antecedent sits inside the conclusion antecedent, and the
    premise span covers everything the conclusion mentions."""
    return (
        premise.antecedent <= conclusion.antecedent
        and conclusion.span <= premise.span
    )


def decide_one_premise(
    query: EntailmentQuery, max_attrs: int = DEFAULT_ENUMERATION_CAP
) -> EntailmentVerdict:
    """Decide a query with at most one premise by containment tests alone.

    For ``gamma`` strictly between 0 and 1 the verdict does not depend on
    ``gamma``.  The boundary values are delegated to the LP route.
    """
    if query.k > 1:
        raise ValueError(f"one-premise decider got {query.k} premises")
    if not 0 < query.gamma < 1:
        return decide_lp(query, max_attrs)
    if query.conclusion.consequent <= query.conclusion.antecedent:
        return _tautology_verdict(query)
    if query.k == 0:
        return _tautology_verdict(query)
    if _single_premise_entails(query.premises[0], query.conclusion):
        return EntailmentVerdict(
            holds=True, regime=Regime.ONE_PREMISE, certificate=(Fraction(1),)
        )
    return EntailmentVerdict(
        holds=False,
        regime=Regime.ONE_PREMISE,
        counterexample=lp_counterexample(query, max_attrs),
    )


def decide_low_gamma(
    query: EntailmentQuery, max_attrs: int = DEFAULT_ENUMERATION_CAP
) -> EntailmentVerdict:
    """Decide for thresholds below ``1/k``, where premises cannot combine:
    the entailment holds only if some single premise (or none) suffices."""
    k = query.k
    if k < 1:
        raise ValueError("low-gamma decider needs at least one premise")
    if query.gamma == 0:
        return _tautology_verdict(query)
    if query.gamma * k >= 1:
        raise ValueError(
            f"low-gamma decider needs gamma < 1/{k}, got {query.gamma}"
        )
    if query.conclusion.consequent <= query.conclusion.antecedent:
        return _tautology_verdict(query)
    for i, premise in enumerate(query.premises):
        if _single_premise_entails(premise, query.conclusion):
            certificate = list(_zeros(k))
            certificate[i] = Fraction(1)
            return EntailmentVerdict(
                holds=True, regime=Regime.LOW_GAMMA, certificate=tuple(certificate)
            )
    return EntailmentVerdict(
        holds=False,
        regime=Regime.LOW_GAMMA,
        counterexample=lp_counterexample(query, max_attrs),
    )


def decide_two_premise(
    query: EntailmentQuery, max_attrs: int = DEFAULT_ENUMERATION_CAP
) -> EntailmentVerdict:
    """Decide a two-premise query at ``gamma >= 1/2`` by inclusion tests.

    Beyond the trivial and single-premise escapes, both premises combine
    exactly when each antecedent is inside the other premise's span, both
    antecedents are inside the conclusion antecedent, the conclusion
    antecedent is inside the union of spans, and the conclusion consequent
    is inside the conclusion antecedent joined with either consequent.
    Thresholds below 1/2 are routed to the low-gamma decider; 0 and 1 to
    their usual handlers.
    """
    if query.k != 2:
        raise ValueError(f"two-premise decider got {query.k} premises")
    if query.gamma == 0:
        return _tautology_verdict(query)
    if query.gamma == 1:
        return decide_lp(query, max_attrs)
    if query.gamma < Fraction(1, 2):
        return decide_low_gamma(query, max_attrs)
    if query.conclusion.consequent <= query.conclusion.antecedent:
        return _tautology_verdict(query)
    for i, premise in enumerate(query.premises):
        if _single_premise_entails(premise, query.conclusion):
            certificate = list(_zeros(2))
            certificate[i] = Fraction(1)
            return EntailmentVerdict(
                holds=True, regime=Regime.TWO_PREMISE, certificate=tuple(certificate)
            )
    first, second = query.premises
    x0 = query.conclusion.antecedent
    y0 = query.conclusion.consequent
    combined = (
        first.antecedent <= second.span
        and second.antecedent <= first.span
        and first.antecedent <= x0
        and second.antecedent <= x0
        and x0 <= first.span | second.span
        and y0 <= x0 | first.consequent
        and y0 <= x0 | second.consequent
    )
    if combined:
        half = Fraction(1, 2)
        return EntailmentVerdict(
            holds=True, regime=Regime.TWO_PREMISE, certificate=(half, half)
        )
    return EntailmentVerdict(
        holds=False,
        regime=Regime.TWO_PREMISE,
        counterexample=lp_counterexample(query, max_attrs),
    )


def _combination_conditions(
    query: EntailmentQuery, indices: Sequence[int]
) -> bool:
    """Structural conditions for a premise subset to carry the conclusion:
    the subset enforces homogeneity, its antecedents sit inside the
    conclusion antecedent, which sits inside the union of its spans, and
    the conclusion consequent is covered by the conclusion antecedent plus
    every consequent in the subset."""
    x0 = query.conclusion.antecedent
    y0 = query.conclusion.consequent
    ante_union = query.universe.empty()
    span_union = query.universe.empty()
    cons_common = query.universe.full()
    for i in indices:
        premise = query.premises[i]
        ante_union |= premise.antecedent
        span_union |= premise.span
        cons_common &= premise.consequent
    if not (ante_union <= x0 and x0 <= span_union):
        return False
    if not y0 <= x0 | cons_common:
        return False
    return enforces_homogeneity(query.premises.subset(indices))


def _nonempty_subsets(k: int) -> list[tuple[int, ...]]:
    return [
        tuple(i for i in range(k) if mask >> i & 1)
        for mask in range(1, 1 << k)
    ]


def decide_high_gamma(
    query: EntailmentQuery, max_attrs: int = DEFAULT_ENUMERATION_CAP
) -> EntailmentVerdict:
    """Decide for thresholds at or above ``(k-1)/k``.

    In this band a premise subset carries the conclusion exactly when the
    structural combination conditions hold for it, and uniform multipliers
    over the subset certify the entailment.  Subsets are scanned in
    increasing bitmask order, so the reported certificate is deterministic.
    """
    k = query.k
    if k < 1:
        raise ValueError("high-gamma decider needs at least one premise")
    if query.gamma == 0:
        return _tautology_verdict(query)
    if query.gamma == 1:
        return decide_lp(query, max_attrs)
    if query.gamma * k < k - 1:
        raise ValueError(
            f"high-gamma decider needs gamma >= {k - 1}/{k}, got {query.gamma}"
        )
    if query.conclusion.consequent <= query.conclusion.antecedent:
        return _tautology_verdict(query)
    for indices in _nonempty_subsets(k):
        if _combination_conditions(query, indices):
            share = Fraction(1, len(indices))
            certificate = list(_zeros(k))
            for i in indices:
                certificate[i] = share
            return EntailmentVerdict(
                holds=True, regime=Regime.HIGH_GAMMA, certificate=tuple(certificate)
            )
    return EntailmentVerdict(
        holds=False,
        regime=Regime.HIGH_GAMMA,
        counterexample=lp_counterexample(query, max_attrs),
    )


def decide(
    query: EntailmentQuery,
    method: Method = Method.AUTO,
    max_attrs: int = DEFAULT_ENUMERATION_CAP,
) -> EntailmentVerdict:
    """Decide an entailment query.

    ``Method.LP`` always runs the LP route.  ``Method.AUTO`` picks the
    cheapest decision route that covers the query, falling back to the LP
    for boundary thresholds and for premise counts where the subset search
    would explode.  ``Method.CHARACTERIZATION`` insists on a structural
    route and therefore rejects the boundary thresholds 0 and 1, which
    only the LP route covers.
    """
    if method is Method.LP:
        return decide_lp(query, max_attrs)
    k = query.k
    if method is Method.CHARACTERIZATION:
        if not 0 < query.gamma < 1:
            raise ValueError(
                "structural deciders cover only thresholds strictly between 0 and 1"
            )
        if k == 0 or query.conclusion.consequent <= query.conclusion.antecedent:
            return _tautology_verdict(query)
        if k == 1:
            return decide_one_premise(query, max_attrs)
        if query.gamma * k < 1:
            return decide_low_gamma(query, max_attrs)
        if k == 2:
            return decide_two_premise(query, max_attrs)
        if query.gamma * k >= k - 1:
            return decide_high_gamma(query, max_attrs)
        from .threshold import decide_general

        return decide_general(query, max_attrs=max_attrs)

    # AUTO
    if (
        query.gamma == 0
        or k == 0
        or query.conclusion.consequent <= query.conclusion.antecedent
    ):
        return _tautology_verdict(query)
    if query.gamma == 1:
        return decide_lp(query, max_attrs)
    if k == 1:
        return decide_one_premise(query, max_attrs)
    if query.gamma * k < 1:
        return decide_low_gamma(query, max_attrs)
    if query.gamma * k >= k - 1:
        return decide_high_gamma(query, max_attrs)
    if k > GENERAL_PREMISE_CAP:
        return decide_lp(query, max_attrs)
    from .threshold import decide_general

    return decide_general(query, max_attrs=max_attrs)


@dataclass(frozen=True)
class ProperEntailmentResult:
    """Whether a held entailment needs all of its premises.

    ``minimal_premises`` lists 0-based indices of an inclusion-minimal
    entailing premise subset (None when the entailment fails); the
    entailment is proper when that subset is everything.
    """

    holds: bool
    proper: bool
    minimal_premises: tuple[int, ...] | None


def properly_entails(
    query: EntailmentQuery,
    method: Method = Method.AUTO,
    max_attrs: int = DEFAULT_ENUMERATION_CAP,
) -> ProperEntailmentResult:
    """Decide the query and greedily shrink the premise set while it still
    entails.  Entailing subsets are upward closed, so single-removal
    passes reach an inclusion-minimal subset, and the entailment is proper
    exactly when no single premise can be dropped."""
    verdict = decide(query, method, max_attrs)
    if not verdict.holds:
        return ProperEntailmentResult(holds=False, proper=False, minimal_premises=None)
    kept = list(range(query.k))
    for i in list(kept):
        trial = [j for j in kept if j != i]
        if decide(query.with_premises(trial), method, max_attrs).holds:
            kept = trial
    return ProperEntailmentResult(
        holds=True,
        proper=len(kept) == query.k,
        minimal_premises=tuple(kept),
    )


def prune(
    rules: ImplicationSet,
    gamma: Fraction | int | str,
    method: Method = Method.AUTO,
    max_attrs: int = DEFAULT_ENUMERATION_CAP,
) -> ImplicationSet:
    """Drop rules entailed by the others at ``gamma``, scanning in order.

    Each rule is tested against all rules kept so far plus all rules not
    yet visited; because entailment is reflexive, monotone, and transitive
    at a fixed threshold, the surviving set still entails everything that
    was dropped.
    """
    g = as_rational(gamma)
    kept: list[int] = []
    n = len(rules)
    for i in range(n):
        others = kept + list(range(i + 1, n))
        query = EntailmentQuery(
            rules.subset(others), rules[i], g
        )
        if not decide(query, method, max_attrs).holds:
            kept.append(i)
    return rules.subset(kept)
