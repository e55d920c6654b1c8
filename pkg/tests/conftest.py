"""Shared fixtures: the two worked examples used throughout the suite."""

from fractions import Fraction

import pytest

import pientail as pt
from pientail.cli import build_universe, scan_rule, scan_rules


def make_query(premises_text: str, conclusion_text: str, gamma) -> pt.EntailmentQuery:
    """Build a query from rule-file syntax, sharing one universe."""
    parsed = scan_rules(premises_text)
    conclusion = scan_rule(conclusion_text)
    universe = build_universe(
        [
            *(group for rule in parsed for group in (rule.lhs, rule.rhs)),
            conclusion.lhs,
            conclusion.rhs,
        ]
    )
    premises = pt.ImplicationSet(
        universe,
        tuple(
            pt.PartialImplication(universe.attrs(*rule.lhs), universe.attrs(*rule.rhs))
            for rule in parsed
        ),
    )
    return pt.EntailmentQuery(
        premises=premises,
        conclusion=pt.PartialImplication(
            universe.attrs(*conclusion.lhs), universe.attrs(*conclusion.rhs)
        ),
        gamma=Fraction(gamma),
    )


@pytest.fixture
def pair_query():
    """Two rules sharing an antecedent against a recombined conclusion;
    entails exactly for thresholds in [1/2, 1)."""
    return make_query("A -> B C\nA -> B D", "A C D -> B", Fraction(1, 2))


@pytest.fixture
def cycle_query():
    """Three rules forming a cycle; the conclusion holds exactly from the
    critical threshold (about 0.56984) upward."""
    return make_query(
        "B -> A C H\nC -> A D\nD -> A B", "B C D H -> A", Fraction(57, 100)
    )


@pytest.fixture
def cycle_premises(cycle_query):
    return cycle_query.premises


@pytest.fixture
def cycle_antecedent(cycle_query):
    return cycle_query.conclusion.antecedent
