"""Multi-stage key-indistinguishability game over the sealing protocols.

The challenger owns all parties and sessions; the adversary drives them
through six oracles (Send, RevSessKey, RevLongTermKey, RevRand, RevState,
Test) and wins by guessing the challenge bit. Freshness predicates are
evaluated post hoc over the recorded flags, never enforced inline, so a
script may deliberately violate them and the report says so afterwards.

Stage mapping. The salted-hash protocol treats every encrypted message as
one stage with session key k_e; stages are 1-indexed integers and a session
is unidirectional (the initiator's stages are its sends, the responder's
its receives). The ratchet protocol uses (epoch, index) pairs, ordered
lexicographically, and one session covers both directions.

Determinism. A game seeded with s derives one stream per party
(fork b"party-<u>" of fork b"protocol") plus a challenger stream
(fork b"game") for the bit b and the b=1 random key, so every oracle
response is a pure function of (seed, query sequence).
"""

from __future__ import annotations

import hashlib
import struct
from dataclasses import dataclass, field

from .. import crypto_suite as cs
from ..directory_server import KeyDirectory
from ..errors import (
    LettersealError,
    ParseError,
    StageNotAccepted,
    StageUnknown,
)
from ..linev2 import SessionV2, v2_derive_key, v2_encrypt, v2_decrypt, v2_establish
from ..linevdr import (
    ROLE_INITIATOR,
    ROLE_RESPONDER,
    RatchetState,
    vdr_decrypt,
    vdr_encrypt,
    vdr_init_sender,
    vdr_lazy_init_receiver,
)
from ..wire import EnvelopeV2, EnvelopeVDR, decode_envelope, encode_envelope

PROTO_V2 = "v2"
PROTO_VDR = "vdr"

ACTIVE = "active"
ACCEPT = "accept"
REJECT = "reject"


class _KeyObserver:
    """Collects (stage, message key, direction) events from ratchet ops."""

    def __init__(self):
        self.events: list[tuple[tuple[int, int], bytes, str]] = []

    def on_message_key(self, stage, mk, direction):
        self.events.append((stage, bytes(mk), direction))

    def drain(self):
        out, self.events = self.events, []
        return out


@dataclass
class SessionRecord:
    owner: int
    index: int
    role: str
    pid: int
    peerpk: cs.GroupElement
    protocol: str
    status: dict = field(default_factory=dict)       # stage -> ACCEPT|REJECT
    key: dict = field(default_factory=dict)          # stage -> SymmetricKey
    rand_log: dict = field(default_factory=dict)     # stage -> bytes drawn
    state_snap: dict = field(default_factory=dict)   # stage -> snapshot bytes
    transcript: dict = field(default_factory=dict)   # stage -> envelope bytes
    plaintexts: dict = field(default_factory=dict)   # stage -> decrypted bytes
    rev_sesskey: dict = field(default_factory=dict)  # stage -> bool
    rev_rand: dict = field(default_factory=dict)
    rev_state: dict = field(default_factory=dict)
    replay_events: list = field(default_factory=list)
    v2: SessionV2 | None = None
    vdr: RatchetState | None = None
    observer: _KeyObserver = field(default_factory=_KeyObserver)

    def next_stage_v2(self) -> int:
        return len(self.status) + 1


class QueryTrace:
    """Replayable line log of every oracle invocation and its response."""

    def __init__(self):
        self.lines: list[str] = []

    def add(self, oracle: str, detail: str, response: str) -> None:
        self.lines.append(f"{oracle} {detail} -> {response}")

    def export(self) -> str:
        return "\n".join(self.lines) + ("\n" if self.lines else "")

    def __contains__(self, needle: str) -> bool:
        return any(needle in line for line in self.lines)


def _digest(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()[:16]


def _fmt_stage(s) -> str:
    return f"{s[0]},{s[1]}" if isinstance(s, tuple) else str(s)


class Game:
    """One seeded experiment instance; single-threaded by contract."""

    def __init__(self, protocol: str, n_parties: int = 2, seed: int = 0):
        if protocol not in (PROTO_V2, PROTO_VDR):
            raise ValueError(f"unknown protocol {protocol!r}")
        self.protocol = protocol
        self.n_parties = n_parties
        root = cs.SeededRng(seed)
        proto_rng = root.fork(b"protocol")
        self.game_rng = root.fork(b"game")
        self.b = self.game_rng.token(1)[0] & 1
        self.tested: tuple | None = None
        self.trace = QueryTrace()
        self.directory = KeyDirectory()
        self.party_rng: dict[int, cs.SeededRng] = {}
        self.parties: dict[int, tuple[cs.GroupScalar, cs.GroupElement]] = {}
        self.kids: dict[int, int] = {}
        self.rev_ltk: dict[int, bool] = {}
        self.sessions: dict[tuple[int, int], SessionRecord] = {}
        for u in range(1, n_parties + 1):
            rng_u = proto_rng.fork(b"party-%d" % u)
            sk, pk = cs.dh_keygen(rng_u)
            self.party_rng[u] = rng_u
            self.parties[u] = (sk, pk)
            self.kids[u] = self.directory.register(pk, f"party-{u}")
            self.rev_ltk[u] = False

    # -- Send ---------------------------------------------------------------

    def oracle_send(self, u: int, i: int, m):
        key = (u, i)
        if key not in self.sessions:
            if (isinstance(m, tuple) and len(m) == 2
                    and m[1] in (ROLE_INITIATOR, ROLE_RESPONDER)):
                self._activate(u, i, pid=m[0], role=m[1])
                self.trace.add("Send", f"u={u} i={i} activate pid={m[0]} role={m[1]}", "ok")
                return None
            raise StageUnknown(f"no session ({u},{i}); first Send must activate")
        rec = self.sessions[key]
        if isinstance(m, tuple) and m and m[0] == "encrypt":
            _, ctype, pt = m
            out = self._send_encrypt(rec, ctype, pt)
            self.trace.add("Send", f"u={u} i={i} encrypt ctype={ctype} pt#{_digest(pt)}",
                           f"env#{_digest(out)}")
            return out
        if isinstance(m, (bytes, bytearray)):
            raw = bytes(m)
            stage, verdict = self._send_deliver(rec, raw)
            self.trace.add("Send", f"u={u} i={i} deliver env#{_digest(raw)}",
                           f"stage={_fmt_stage(stage)} {verdict}")
            return None
        raise ValueError(f"unrecognized Send payload: {type(m).__name__}")

    def _activate(self, u: int, i: int, pid: int, role: str) -> None:
        peerpk = self.directory.lookup(self.kids[pid])
        sk_u, _ = self.parties[u]
        rec = SessionRecord(owner=u, index=i, role=role, pid=pid,
                            peerpk=peerpk, protocol=self.protocol)
        if self.protocol == PROTO_V2:
            rec.v2 = v2_establish(sk_u, peerpk,
                                  kid_self=self.kids[u], kid_peer=self.kids[pid],
                                  sid=f"party-{u}", rid=f"party-{pid}")
        elif role == ROLE_INITIATOR:
            rng = self.party_rng[u]
            mark = rng.mark()
            rec.vdr = vdr_init_sender(sk_u, peerpk, rng,
                                      kid_self=self.kids[u], kid_peer=self.kids[pid])
            rec.vdr.observer = rec.observer
            rec.rand_log[(0, 0)] = rng.draws_since(mark)  # epoch-0 ephemeral
        # a ratchet responder stays stateless until its first delivery
        self.sessions[(u, i)] = rec

    def _send_encrypt(self, rec: SessionRecord, ctype: int, pt: bytes) -> bytes:
        rng = self.party_rng[rec.owner]
        mark = rng.mark()
        if rec.protocol == PROTO_V2:
            env = v2_encrypt(rec.v2, ctype, pt, rng)
            stage = rec.next_stage_v2()
            rec.status[stage] = ACCEPT
            rec.key[stage] = v2_derive_key(rec.v2.pms, env.salt)
            rec.rand_log[stage] = rng.draws_since(mark)
            raw = encode_envelope(env)
            rec.transcript[stage] = raw
            rec.state_snap[stage] = _v2_snapshot(rec.v2)
            return raw
        env = vdr_encrypt(rec.vdr, ctype, pt, rng)
        raw = encode_envelope(env)
        for stage, mk, _direction in rec.observer.drain():
            rec.status[stage] = ACCEPT
            rec.key[stage] = cs.SymmetricKey(mk)
            rec.transcript[stage] = raw
            rec.rand_log[stage] = rec.rand_log.get(stage, b"") + rng.draws_since(mark)
            rec.state_snap[stage] = _vdr_snapshot(rec.vdr)
        return raw

    def _send_deliver(self, rec: SessionRecord, raw: bytes):
        try:
            env = decode_envelope(raw)
        except ParseError as exc:
            stage = self._reject_stage(rec, raw)
            self._mark_reject(rec, stage, raw, f"parse: {exc}")
            return stage, "reject"
        if rec.protocol == PROTO_V2:
            return self._deliver_v2(rec, env, raw)
        return self._deliver_vdr(rec, env, raw)

    def _reject_stage(self, rec: SessionRecord, raw: bytes):
        if rec.protocol == PROTO_V2:
            return rec.next_stage_v2()
        try:
            env = decode_envelope(raw)
            return (env.i_index, env.j_index)
        except (ParseError, AttributeError):
            return (0xFFFFFFFF, len(rec.replay_events))

    def _mark_reject(self, rec, stage, raw, reason: str) -> None:
        if stage in rec.status:
            rec.replay_events.append((stage, reason))
            return
        rec.status[stage] = REJECT
        rec.transcript[stage] = raw

    def _deliver_v2(self, rec: SessionRecord, env, raw: bytes):
        stage = rec.next_stage_v2()
        if not isinstance(env, EnvelopeV2):
            self._mark_reject(rec, stage, raw, "wrong envelope family")
            return stage, "reject"
        try:
            pt = v2_decrypt(rec.v2, env)
        except LettersealError as exc:
            self._mark_reject(rec, stage, raw, type(exc).__name__)
            return stage, "reject"
        rec.status[stage] = ACCEPT
        rec.key[stage] = v2_derive_key(rec.v2.pms, env.salt)
        rec.transcript[stage] = raw
        rec.plaintexts[stage] = pt
        rec.state_snap[stage] = _v2_snapshot(rec.v2)
        return stage, "accept"

    def _deliver_vdr(self, rec: SessionRecord, env, raw: bytes):
        if not isinstance(env, EnvelopeVDR):
            stage = (0xFFFFFFFF, len(rec.replay_events))
            self._mark_reject(rec, stage, raw, "wrong envelope family")
            return stage, "reject"
        stage = (env.i_index, env.j_index)
        rng = self.party_rng[rec.owner]
        sk_u, _ = self.parties[rec.owner]
        mark = rng.mark()
        fresh_state = None
        try:
            if rec.vdr is None:
                if rec.role != ROLE_RESPONDER:
                    raise StageUnknown("initiator session has no receive chain yet")
                fresh_state = vdr_lazy_init_receiver(
                    sk_u, rec.peerpk, env,
                    kid_self=self.kids[rec.owner], kid_peer=self.kids[rec.pid])
                fresh_state.observer = rec.observer
                pt = vdr_decrypt(fresh_state, env, rng)
            else:
                pt = vdr_decrypt(rec.vdr, env, rng)
        except LettersealError as exc:
            rec.observer.drain()
            self._mark_reject(rec, stage, raw, type(exc).__name__)
            return stage, "reject"
        if fresh_state is not None:
            rec.vdr = fresh_state
        for ev_stage, mk, _direction in rec.observer.drain():
            rec.status[ev_stage] = ACCEPT
            rec.key[ev_stage] = cs.SymmetricKey(mk)
            rec.transcript[ev_stage] = raw
            rec.plaintexts[ev_stage] = pt
            rec.state_snap[ev_stage] = _vdr_snapshot(rec.vdr)
        # a decrypt that opened a new epoch sampled the reply ephemeral
        draws = rng.draws_since(mark)
        if draws:
            eph_stage = (rec.vdr.i_s, 0)
            rec.rand_log[eph_stage] = draws + rec.rand_log.get(eph_stage, b"")
        return stage, "accept"

    # -- Reveal oracles -----------------------------------------------------

    def _session(self, u: int, i: int) -> SessionRecord:
        try:
            return self.sessions[(u, i)]
        except KeyError:
            raise StageUnknown(f"no session ({u},{i})") from None

    def oracle_rev_sesskey(self, u: int, i: int, s) -> cs.SymmetricKey:
        rec = self._session(u, i)
        if rec.status.get(s) != ACCEPT:
            raise StageNotAccepted(f"stage {_fmt_stage(s)} of ({u},{i}) not accepted")
        rec.rev_sesskey[s] = True
        self.trace.add("RevSessKey", f"u={u} i={i} s={_fmt_stage(s)}",
                       f"key#{_digest(rec.key[s])}")
        return rec.key[s]

    def oracle_rev_ltk(self, u: int) -> cs.GroupScalar:
        self.rev_ltk[u] = True
        sk, _ = self.parties[u]
        self.trace.add("RevLongTermKey", f"u={u}", f"sk#{_digest(sk)}")
        return sk

    def oracle_rev_rand(self, u: int, i: int, s) -> bytes:
        rec = self._session(u, i)
        if s not in rec.rand_log:
            raise StageUnknown(f"no randomness at stage {_fmt_stage(s)} of ({u},{i})")
        rec.rev_rand[s] = True
        self.trace.add("RevRand", f"u={u} i={i} s={_fmt_stage(s)}",
                       f"rand#{_digest(rec.rand_log[s])}")
        return rec.rand_log[s]

    def oracle_rev_state(self, u: int, i: int, s) -> bytes:
        rec = self._session(u, i)
        if s not in rec.state_snap:
            raise StageUnknown(f"no snapshot at stage {_fmt_stage(s)} of ({u},{i})")
        rec.rev_state[s] = True
        self.trace.add("RevState", f"u={u} i={i} s={_fmt_stage(s)}",
                       f"snap#{_digest(rec.state_snap[s])}")
        return rec.state_snap[s]

    # -- Test ---------------------------------------------------------------

    def oracle_test(self, u: int, i: int, s) -> cs.SymmetricKey | None:
        if self.tested is not None:
            self.trace.add("Test", f"u={u} i={i} s={_fmt_stage(s)}", "refused")
            return None
        rec = self._session(u, i)
        if rec.status.get(s) != ACCEPT:
            self.trace.add("Test", f"u={u} i={i} s={_fmt_stage(s)}", "refused")
            return None
        self.tested = (u, i, s)
        k0 = rec.key[s]
        k1 = cs.SymmetricKey(self.game_rng.token(32))
        k = k0 if self.b == 0 else k1
        self.trace.add("Test", f"u={u} i={i} s={_fmt_stage(s)}", f"key#{_digest(k)}")
        return k


def _v2_snapshot(sess: SessionV2) -> bytes:
    """Everything the party stores: the pre-master secret and the counter."""
    return bytes(sess.pms) + struct.pack(">I", sess.ctr)


def v2_snapshot_pms(snapshot: bytes) -> cs.SharedSecret:
    return cs.SharedSecret(snapshot[:32])


def _vdr_snapshot(st: RatchetState) -> bytes:
    from ..linevdr import vdr_export_state

    return vdr_export_state(st)
