"""Freshness and matching predicates, evaluated post hoc over a game.

Every function here is pure: it reads recorded flags and transcripts and
returns a verdict, with no side effects on the game. The salted-hash
predicate is a flat conjunction; the ratchet family is recursive over the
stage lattice, with each sub-predicate separately callable so truth tables
can pin each clause on its own.
"""

from __future__ import annotations

from ..linevdr import ROLE_INITIATOR, ROLE_RESPONDER
from .game import ACCEPT, Game, SessionRecord


def match_sessions(a: SessionRecord, b: SessionRecord, s) -> bool:
    """Opposite roles, and a's transcript up to stage s is a prefix-subset
    of b's: every message a recorded at a stage <= s appears identically at
    the same stage in b. A session missing the final message still matches
    its peer; the peer that sent the dropped message does not match back."""
    if a.role == b.role:
        return False
    for t, msg in a.transcript.items():
        if t <= s and b.transcript.get(t) != msg:
            return False
    return True


def matching_sessions(game: Game, rec: SessionRecord, s) -> list[SessionRecord]:
    return [r for r in game.sessions.values()
            if r is not rec and match_sessions(rec, r, s)]


# ---------------------------------------------------------------------------
# Salted-hash protocol predicate
# ---------------------------------------------------------------------------

def fresh_v2(game: Game, tested: tuple) -> bool:
    """False iff the owner's or partner's long-term key was revealed, the
    tested stage key was revealed, or any session between the tested pair
    (either direction) had its state revealed at any stage; the state holds
    the pre-master secret, which derives every stage key."""
    u, i, s = tested
    rec = game.sessions[(u, i)]
    if game.rev_ltk.get(u) or game.rev_ltk.get(rec.pid):
        return False
    if rec.rev_sesskey.get(s):
        return False
    for r in game.sessions.values():
        same_pair = ((r.owner == u and r.pid == rec.pid)
                     or (r.owner == rec.pid and r.pid == u))
        if same_pair and any(r.rev_state.values()):
            return False
    return True


# ---------------------------------------------------------------------------
# Ratchet protocol predicate family
# ---------------------------------------------------------------------------

def valid_vdr(game: Game, u: int, i: int, s) -> bool:
    """Tested stage accepted, its key unrevealed here and at every
    matching session."""
    rec = game.sessions[(u, i)]
    if rec.status.get(s) != ACCEPT:
        return False
    if rec.rev_sesskey.get(s):
        return False
    return all(not r.rev_sesskey.get(s)
               for r in matching_sessions(game, rec, s))


def fresh_ll(game: Game, u: int, i: int) -> bool:
    rec = game.sessions[(u, i)]
    return not game.rev_ltk.get(u) and not game.rev_ltk.get(rec.pid)


def fresh_el(game: Game, u: int, i: int) -> bool:
    """Initiator ephemeral and responder long-term key both unrevealed,
    viewed from whichever side is being tested."""
    rec = game.sessions[(u, i)]
    if rec.role == ROLE_INITIATOR:
        return (not rec.rev_rand.get((0, 0))
                and not game.rev_ltk.get(rec.pid))
    return (all(not r.rev_rand.get((0, 0))
                for r in matching_sessions(game, rec, (0, 0)))
            and not game.rev_ltk.get(u))


def fresh_initial(game: Game, u: int, i: int) -> bool:
    return fresh_ll(game, u, i) or fresh_el(game, u, i)


def fresh_st(game: Game, u: int, i: int, s) -> bool:
    rec = game.sessions[(u, i)]
    if rec.rev_state.get(s):
        return False
    return all(not r.rev_state.get(s)
               for r in matching_sessions(game, rec, s))


def fresh_ee(game: Game, u: int, i: int, s) -> bool:
    """Neither epoch ephemeral revealed. The selector picks which of the
    two adjacent epochs is 'ours': b = (role == initiator) xor (x even);
    we check our rand at [x-b, 0] and the partner's at [x-(1-b), 0]."""
    x = s[0]
    rec = game.sessions[(u, i)]
    b = 1 if ((rec.role == ROLE_INITIATOR) ^ (x % 2 == 0)) else 0
    if rec.rev_rand.get((x - b, 0)):
        return False
    other = (x - (1 - b), 0)
    return all(not r.rev_rand.get(other)
               for r in matching_sessions(game, rec, (x, 0)))


def fresh_asym(game: Game, u: int, i: int, s) -> bool:
    """Fresh ephemerals this epoch, or a clean prior stage chained down to
    a fresh base."""
    x = s[0]
    if fresh_ee(game, u, i, (x, 0)):
        return True
    prior = (fresh_asym(game, u, i, (x - 1, 0)) if x > 1
             else fresh_initial(game, u, i))
    return fresh_st(game, u, i, (x - 1, 0)) and prior


def fresh_sym(game: Game, u: int, i: int, s) -> bool:
    x, y = s
    if y == 0:
        return fresh_asym(game, u, i, s) if x >= 1 else fresh_initial(game, u, i)
    return (fresh_st(game, u, i, (x, y - 1))
            and fresh_sym(game, u, i, (x, y - 1)))


def fresh_vdr(game: Game, tested: tuple) -> bool:
    u, i, s = tested
    if not valid_vdr(game, u, i, s):
        return False
    x, y = s
    if (x, y) == (0, 0):
        return fresh_initial(game, u, i)
    if y == 0:
        return fresh_asym(game, u, i, s)
    return fresh_sym(game, u, i, s)


def fresh_for(game: Game, tested: tuple) -> bool:
    """Dispatch on the game's protocol."""
    from .game import PROTO_V2

    return fresh_v2(game, tested) if game.protocol == PROTO_V2 \
        else fresh_vdr(game, tested)
