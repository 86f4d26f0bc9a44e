"""Adversarial key-exchange harness: game, predicates, scripted attacks."""

from .attacks import (
    EXPECTED,
    AttackReport,
    KeyClosure,
    attack_names,
    run_attack,
)
from .freshness import (
    fresh_asym,
    fresh_ee,
    fresh_el,
    fresh_for,
    fresh_initial,
    fresh_ll,
    fresh_st,
    fresh_sym,
    fresh_v2,
    fresh_vdr,
    match_sessions,
    matching_sessions,
    valid_vdr,
)
from .game import (
    ACCEPT,
    ACTIVE,
    PROTO_V2,
    PROTO_VDR,
    REJECT,
    Game,
    QueryTrace,
    SessionRecord,
    v2_snapshot_pms,
)

__all__ = [
    "ACCEPT",
    "ACTIVE",
    "AttackReport",
    "EXPECTED",
    "Game",
    "KeyClosure",
    "PROTO_V2",
    "PROTO_VDR",
    "QueryTrace",
    "REJECT",
    "SessionRecord",
    "attack_names",
    "fresh_asym",
    "fresh_ee",
    "fresh_el",
    "fresh_for",
    "fresh_initial",
    "fresh_ll",
    "fresh_st",
    "fresh_sym",
    "fresh_v2",
    "fresh_vdr",
    "match_sessions",
    "matching_sessions",
    "run_attack",
    "v2_snapshot_pms",
    "valid_vdr",
]
