"""Assumption-based argumentation reasoner.

Frameworks couple rules over sentences with defeasible assumptions, their
contraries and a preference preorder.  The package answers acceptance and
enumeration queries for the preference-free preferred semantics and the
preference-aware admissible/complete semantics, via candidate-and-check
loops on an incremental search engine, with an exhaustive oracle and a
benchmark generator for validation.
"""

from .benchgen import GenParams, gen_framework
from .derivation import (
    AttackKind,
    attacks_singleton_plus,
    closure,
    pref_closure,
    set_attacks_plus,
    triggered_reach,
    undefeated_set,
)
from .engine import Condition, Exclusion, Model, Session, add_exclusion, new_session, solve
from .framework import (
    DuplicateRuleWarning,
    Framework,
    ParseError,
    PrefRelation,
    Rule,
    Sentence,
    contrary_of,
    parse_framework,
    pref_close,
    serialize_framework,
    validate,
)
from .oracle import oracle_attacks_plus, oracle_derives, oracle_extensions, oracle_leafsets
from .plus import (
    AbstractionMode,
    credulous_adm_plus,
    credulous_com_plus,
    defends_target_plus,
    enumerate_plus,
    is_admissible_plus,
    prune_holds,
)
from .preferred import (
    RunStats,
    canonical_family,
    check_complete,
    enumerate_preferred,
    skeptical_preferred,
)

__version__ = "0.1.0"

__all__ = [
    "AbstractionMode",
    "AttackKind",
    "Condition",
    "DuplicateRuleWarning",
    "Exclusion",
    "Framework",
    "GenParams",
    "Model",
    "ParseError",
    "PrefRelation",
    "Rule",
    "RunStats",
    "Sentence",
    "Session",
    "add_exclusion",
    "attacks_singleton_plus",
    "canonical_family",
    "check_complete",
    "closure",
    "contrary_of",
    "credulous_adm_plus",
    "credulous_com_plus",
    "defends_target_plus",
    "enumerate_plus",
    "enumerate_preferred",
    "gen_framework",
    "is_admissible_plus",
    "new_session",
    "oracle_attacks_plus",
    "oracle_derives",
    "oracle_extensions",
    "oracle_leafsets",
    "parse_framework",
    "pref_close",
    "pref_closure",
    "prune_holds",
    "serialize_framework",
    "set_attacks_plus",
    "skeptical_preferred",
    "solve",
    "triggered_reach",
    "undefeated_set",
    "validate",
]
