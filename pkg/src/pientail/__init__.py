"""Exact reasoning about partial implications at a confidence threshold.

The package decides whether a set of partial implications (association
rules with a confidence parameter) entails another one over all datasets,
producing either multiplier certificates or counterexample datasets, and
builds on that to check homogeneity of rule sets, bracket critical
thresholds, and prune redundant rules.  All arithmetic is exact.
"""

from .model import (
    AttrSet,
    AttributeCapError,
    AttributeUniverse,
    CoverStatus,
    Dataset,
    PartialImplication,
    Rational,
    UniverseMismatchError,
    as_rational,
    cover_status,
    satisfies,
    support,
    weight,
)
from .homogeneity import (
    ImplicationSet,
    brute_force_homogeneity,
    enforces_homogeneity,
    horn_closure,
    two_premise_nicety,
)
from .entailment import (
    ConstraintSignature,
    EntailmentQuery,
    EntailmentVerdict,
    Method,
    ProperEntailmentResult,
    Regime,
    check_certificate,
    decide,
    decide_high_gamma,
    decide_low_gamma,
    decide_lp,
    decide_one_premise,
    decide_two_premise,
    find_certificate_violation,
    properly_entails,
    prune,
)
from .threshold import (
    ThresholdBracket,
    critical_threshold,
    decide_general,
    feasible_at,
    max_ratio,
)
from .oracle import (
    RandomInstanceSpec,
    grid_min_max,
    random_implication_set,
    random_query,
    search_counterexample,
)
from .cli import parse_gamma, parse_rules, run

__version__ = "0.1.0"

__all__ = [
    "AttrSet",
    "AttributeCapError",
    "AttributeUniverse",
    "ConstraintSignature",
    "CoverStatus",
    "Dataset",
    "EntailmentQuery",
    "EntailmentVerdict",
    "ImplicationSet",
    "Method",
    "PartialImplication",
    "ProperEntailmentResult",
    "RandomInstanceSpec",
    "Rational",
    "Regime",
    "ThresholdBracket",
    "UniverseMismatchError",
    "as_rational",
    "brute_force_homogeneity",
    "check_certificate",
    "cover_status",
    "critical_threshold",
    "decide",
    "decide_general",
    "decide_high_gamma",
    "decide_low_gamma",
    "decide_lp",
    "decide_one_premise",
    "decide_two_premise",
    "enforces_homogeneity",
    "feasible_at",
    "find_certificate_violation",
    "grid_min_max",
    "horn_closure",
    "max_ratio",
    "parse_gamma",
    "parse_rules",
    "properly_entails",
    "prune",
    "random_implication_set",
    "random_query",
    "run",
    "satisfies",
    "search_counterexample",
    "support",
    "two_premise_nicety",
    "weight",
]
