"""Attribute universes, partial implications, and transaction multisets.

Attributes live in a fixed, ordered universe and are mapped to bit
positions, so attribute sets are plain integer bitmasks and all the set
algebra is machine arithmetic.  Everything that feeds a decision
(confidence comparisons, constraint weights, thresholds) is an exact
``fractions.Fraction``; floats are refused at the boundary so that no
approximation can leak into a verdict.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Iterator, Mapping

Rational = Fraction

# Decision procedures enumerate one constraint per transaction type, i.e.
# up to 2**n rows for n attributes.  The hard cap bounds the universe a
# problem instance may declare; the soft cap bounds how many attributes a
# single enumeration may touch and can be raised per call up to the hard cap.
HARD_ATTRIBUTE_CAP = 24
DEFAULT_ENUMERATION_CAP = 20


class UniverseMismatchError(ValueError):
    """Raised when values built against different universes are combined."""


class AttributeCapError(RuntimeError):
    """Raised when an operation would enumerate more attributes than allowed."""


def as_rational(value: Fraction | int | str) -> Fraction:
    """Coerce ``value`` to an exact ``Fraction``.

    Floats are rejected rather than converted: a binary float that "looks
    like" 0.57 is not 57/100, and silently accepting it would poison every
    exact comparison downstream.
    """
    if isinstance(value, float):
        raise TypeError(
            f"refusing float {value!r}; pass a Fraction, int, or string "
            f"such as '57/100'"
        )
    return Fraction(value)


def bit_positions(bits: int) -> list[int]:
    """Positions of the set bits of ``bits``, ascending."""
    out = []
    pos = 0
    while bits:
        if bits & 1:
            out.append(pos)
        bits >>= 1
        pos += 1
    return out


@dataclass(frozen=True)
class AttributeUniverse:
    """An ordered collection of distinct attribute names.

    The order fixes the bit position of each attribute and is preserved in
    every textual rendering (transactions print their attributes in
    universe order, not insertion order).
    """

    names: tuple[str, ...]

    def __post_init__(self) -> None:
        if not isinstance(self.names, tuple):
            object.__setattr__(self, "names", tuple(self.names))
        for name in self.names:
            if not name or any(ch.isspace() for ch in name):
                raise ValueError(f"invalid attribute name {name!r}")
        if len(set(self.names)) != len(self.names):
            raise ValueError("duplicate attribute names")
        if len(self.names) > HARD_ATTRIBUTE_CAP:
            raise AttributeCapError(
                f"{len(self.names)} attributes exceed the hard cap of "
                f"{HARD_ATTRIBUTE_CAP}"
            )

    @cached_property
    def _positions(self) -> dict[str, int]:
        return {name: i for i, name in enumerate(self.names)}

    @property
    def size(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self._positions[name]
        except KeyError:
            raise KeyError(f"unknown attribute {name!r}") from None

    def attrs(self, *names: str) -> AttrSet:
        """Build the attribute set containing exactly ``names``."""
        bits = 0
        for name in names:
            bits |= 1 << self.index(name)
        return AttrSet(self, bits)

    def empty(self) -> AttrSet:
        return AttrSet(self, 0)

    def full(self) -> AttrSet:
        return AttrSet(self, (1 << self.size) - 1)


@dataclass(frozen=True)
class AttrSet:
    """A subset of an attribute universe, stored as a bitmask."""

    universe: AttributeUniverse
    bits: int

    def __post_init__(self) -> None:
        if not 0 <= self.bits < (1 << self.universe.size):
            raise ValueError(f"bitmask {self.bits:#x} outside universe")

    def _check(self, other: AttrSet) -> None:
        if self.universe != other.universe:
            raise UniverseMismatchError(
                "attribute sets belong to different universes"
            )

    def __or__(self, other: AttrSet) -> AttrSet:
        self._check(other)
        return AttrSet(self.universe, self.bits | other.bits)

    def __and__(self, other: AttrSet) -> AttrSet:
        self._check(other)
        return AttrSet(self.universe, self.bits & other.bits)

    def __sub__(self, other: AttrSet) -> AttrSet:
        self._check(other)
        return AttrSet(self.universe, self.bits & ~other.bits)

    def __le__(self, other: AttrSet) -> bool:
        """Subset test."""
        self._check(other)
        return self.bits & other.bits == self.bits

    def __lt__(self, other: AttrSet) -> bool:
        """Proper subset test."""
        return self <= other and self.bits != other.bits

    def __contains__(self, name: str) -> bool:
        return bool(self.bits >> self.universe.index(name) & 1)

    def __len__(self) -> int:
        return self.bits.bit_count()

    def __bool__(self) -> bool:
        return self.bits != 0

    @property
    def is_empty(self) -> bool:
        return self.bits == 0

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(self.universe.names[i] for i in bit_positions(self.bits))

    def __iter__(self) -> Iterator[str]:
        return iter(self.names)

    def __str__(self) -> str:
        return " ".join(self.names)

    def __repr__(self) -> str:
        return f"AttrSet({{{', '.join(self.names)}}})"


@dataclass(frozen=True)
class PartialImplication:
    """A rule ``antecedent -> consequent`` between attribute sets.

    The rule is read probabilistically: among transactions containing the
    antecedent, at least a gamma fraction also contain the consequent.
    Either side may be empty.
    """

    antecedent: AttrSet
    consequent: AttrSet

    def __post_init__(self) -> None:
        if self.antecedent.universe != self.consequent.universe:
            raise UniverseMismatchError(
                "antecedent and consequent belong to different universes"
            )

    @property
    def universe(self) -> AttributeUniverse:
        return self.antecedent.universe

    @property
    def span(self) -> AttrSet:
        """Union of antecedent and consequent: the attributes a witness must carry."""
        return self.antecedent | self.consequent

    def __str__(self) -> str:
        return f"{self.antecedent} -> {self.consequent}".strip()

    def __repr__(self) -> str:
        return f"PartialImplication({self})"


class CoverStatus(Enum):
    """How a transaction relates to one partial implication."""

    NOT_COVERED = 0  # transaction misses part of the antecedent
    VIOLATED = 1     # antecedent present, some consequent attribute absent
    WITNESSED = 2    # antecedent and consequent both present

    def __repr__(self) -> str:  # shorter in test diffs
        return self.name


def cover_status(transaction: AttrSet, implication: PartialImplication) -> CoverStatus:
    """Classify ``transaction`` against ``implication``."""
    transaction._check(implication.antecedent)
    z = transaction.bits
    x = implication.antecedent.bits
    if z & x != x:
        return CoverStatus.NOT_COVERED
    xy = x | implication.consequent.bits
    if z & xy == xy:
        return CoverStatus.WITNESSED
    return CoverStatus.VIOLATED


def weight(
    transaction: AttrSet,
    implication: PartialImplication,
    gamma: Fraction | int | str,
) -> Fraction:
    """Signed contribution of one copy of ``transaction`` to the rule's margin.

    A witness pushes the rule toward satisfaction by ``1 - gamma``, a
    violator pulls it down by ``gamma``, and an uncovered transaction is
    neutral.  A dataset satisfies the rule at ``gamma`` exactly when the
    multiplicity-weighted sum of these contributions is nonnegative.
    """
    g = as_rational(gamma)
    if not 0 <= g <= 1:
        raise ValueError(f"gamma must lie in [0, 1], got {g}")
    status = cover_status(transaction, implication)
    if status is CoverStatus.WITNESSED:
        return 1 - g
    if status is CoverStatus.VIOLATED:
        return -g
    return Fraction(0)


class Dataset:
    """A multiset of transactions over a shared universe.

    Stored as a mapping from transaction to multiplicity; absent
    transactions have multiplicity zero, and zero entries are dropped on
    construction so that equality is well defined.
    """

    __slots__ = ("universe", "_mult")

    def __init__(
        self,
        universe: AttributeUniverse,
        multiplicities: Mapping[AttrSet, int] | None = None,
    ) -> None:
        self.universe = universe
        mult: dict[AttrSet, int] = {}
        for transaction, count in (multiplicities or {}).items():
            if transaction.universe != universe:
                raise UniverseMismatchError(
                    "transaction belongs to a different universe"
                )
            if not isinstance(count, int) or count < 0:
                raise ValueError(f"multiplicity must be a nonnegative int, got {count!r}")
            if count:
                mult[transaction] = mult.get(transaction, 0) + count
        self._mult = mult

    def multiplicity(self, transaction: AttrSet) -> int:
        return self._mult.get(transaction, 0)

    def transactions(self) -> list[AttrSet]:
        """Distinct transactions with positive multiplicity, in bitmask order."""
        return sorted(self._mult, key=lambda t: t.bits)

    def items(self) -> list[tuple[AttrSet, int]]:
        return [(t, self._mult[t]) for t in self.transactions()]

    def total(self) -> int:
        """Total number of transactions, counting multiplicity."""
        return sum(self._mult.values())

    def __len__(self) -> int:
        return len(self._mult)

    def __bool__(self) -> bool:
        return bool(self._mult)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Dataset):
            return NotImplemented
        return self.universe == other.universe and self._mult == other._mult

    def __repr__(self) -> str:
        inner = ", ".join(f"{{{t}}}: {m}" for t, m in self.items())
        return f"Dataset({inner})"


def support(dataset: Dataset, attrs: AttrSet) -> int:
    """Number of transactions in ``dataset`` containing all of ``attrs``."""
    if dataset.universe != attrs.universe:
        raise UniverseMismatchError("dataset and attribute set universes differ")
    bits = attrs.bits
    return sum(
        count for t, count in dataset._mult.items() if t.bits & bits == bits
    )


def satisfies(
    dataset: Dataset,
    implication: PartialImplication,
    gamma: Fraction | int | str,
) -> bool:
    """Does ``dataset`` satisfy ``implication`` at confidence ``gamma``?

    True when the antecedent never occurs, or when the fraction of
    antecedent-carrying transactions that also carry the consequent is at
    least ``gamma``.  Computed with exact arithmetic.
    """
    g = as_rational(gamma)
    if not 0 <= g <= 1:
        raise ValueError(f"gamma must lie in [0, 1], got {g}")
    if dataset.universe != implication.universe:
        raise UniverseMismatchError("dataset and implication universes differ")
    ante = support(dataset, implication.antecedent)
    if ante == 0:
        return True
    both = support(dataset, implication.span)
    return Fraction(both, ante) >= g
