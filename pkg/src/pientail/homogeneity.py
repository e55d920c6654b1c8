"""Homogeneity of rule sets, decided through Horn closures.

A set of partial implications *enforces homogeneity* when every
transaction that violates none of the rules is all-or-nothing about them:
it either witnesses every rule or covers none of them.  Equivalently (and
this is what makes the property cheap to decide), treating the rules as
classical implications, the closure of each antecedent must reach every
attribute occurring in the set.  A brute-force check over all transaction
types is kept alongside as an oracle for tests.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

from .model import (
    AttrSet,
    AttributeUniverse,
    AttributeCapError,
    DEFAULT_ENUMERATION_CAP,
    PartialImplication,
    UniverseMismatchError,
    bit_positions,
)


@dataclass(frozen=True)
class ImplicationSet:
    """An ordered set of partial implications over one universe."""

    universe: AttributeUniverse
    implications: tuple[PartialImplication, ...]

    def __post_init__(self) -> None:
        for imp in self.implications:
            if imp.universe != self.universe:
                raise UniverseMismatchError(
                    "implication belongs to a different universe"
                )

    @staticmethod
    def of(implications: Sequence[PartialImplication], universe: AttributeUniverse | None = None) -> ImplicationSet:
        if universe is None:
            if not implications:
                raise ValueError("universe required for an empty implication set")
            universe = implications[0].universe
        return ImplicationSet(universe, tuple(implications))

    def __len__(self) -> int:
        return len(self.implications)

    def __iter__(self) -> Iterator[PartialImplication]:
        return iter(self.implications)

    def __getitem__(self, index: int) -> PartialImplication:
        return self.implications[index]

    @property
    def occurring(self) -> AttrSet:
        """All attributes mentioned by some rule."""
        bits = 0
        for imp in self.implications:
            bits |= imp.span.bits
        return AttrSet(self.universe, bits)

    def subset(self, indices: Sequence[int]) -> ImplicationSet:
        return ImplicationSet(
            self.universe, tuple(self.implications[i] for i in indices)
        )

    def __str__(self) -> str:
        return "\n".join(str(imp) for imp in self.implications)


def horn_closure(start: AttrSet, rules: ImplicationSet) -> AttrSet:
    """Forward-chaining closure of ``start`` under the rules read classically.

    Repeatedly adds the consequent of any rule whose antecedent is already
    present, until nothing changes.
    """
    if start.universe != rules.universe:
        raise UniverseMismatchError("start set and rules universes differ")
    closed = start.bits
    pairs = [(imp.antecedent.bits, imp.consequent.bits) for imp in rules]
    changed = True
    while changed:
        changed = False
        for ante, cons in pairs:
            if closed & ante == ante and closed | cons != closed:
                closed |= cons
                changed = True
    return AttrSet(start.universe, closed)


def enforces_homogeneity(rules: ImplicationSet) -> bool:
    """Does every rule's antecedent classically derive all occurring attributes?

    This closure condition is equivalent to the transaction-level
    definition of homogeneity; ``brute_force_homogeneity`` checks the
    latter directly.
    """
    everything = rules.occurring
    return all(everything <= horn_closure(imp.antecedent, rules) for imp in rules)


def brute_force_homogeneity(
    rules: ImplicationSet, max_attrs: int = DEFAULT_ENUMERATION_CAP
) -> bool:
    """Transaction-level homogeneity check by exhaustive enumeration.

    Walks every subset of the occurring attributes and tests the defining
    property: a transaction violating no rule either witnesses all rules
    or covers none.  Exponential in the number of occurring attributes;
    exists as an independent oracle for the closure-based test.
    """
    occ = rules.occurring.bits
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

    pairs = [
        (compress(imp.antecedent.bits), compress(imp.span.bits)) for imp in rules
    ]
    for z in range(1 << width):
        covered = 0
        witnessed = 0
        violates = False
        for x, xy in pairs:
            if z & x == x:
                covered += 1
                if z & xy == xy:
                    witnessed += 1
                else:
                    violates = True
                    break
        if violates:
            continue
        if covered and witnessed < len(pairs):
            return False
    return True


def two_premise_nicety(first: PartialImplication, second: PartialImplication) -> bool:
    """Homogeneity specialised to a pair of rules.

    A pair enforces homogeneity exactly when each antecedent is contained
    in the other rule's span.
    """
    if first.universe != second.universe:
        raise UniverseMismatchError("implications belong to different universes")
    return first.antecedent <= second.span and second.antecedent <= first.span
