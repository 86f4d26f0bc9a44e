"""Double-ratchet sealing: combined ephemeral-static initial secret,
per-message symmetric ratchet, alternating asymmetric ratchet, bounded
catch-up cache, and consumed-index replay defense.

Index conventions. i counts asymmetric epochs, j messages within a chain.
The initiator owns even epochs, the responder odd ones. The receiver
ratchets its receiving chain when an envelope opens a new epoch, and builds
the reply chain (fresh ephemeral, i_s = i_r + 1) right after the first
successful decrypt of that epoch. Decryption is transactional: state
mutates only after the AEAD tag verifies, so forged envelopes cannot
desynchronize a session or poison the skipped-key cache.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field

from . import crypto_suite as cs
from .errors import (
    NotInitialized,
    ParseError,
    ReplayRejected,
    SkipLimit,
    StaleEpoch,
)
from .wire import VERS_VDR, EnvelopeVDR

MAX_SKIP = 256

ROLE_INITIATOR = "initiator"
ROLE_RESPONDER = "responder"

_SNAPSHOT_MAGIC = b"VDR1"


@dataclass
class RatchetState:
    role: str
    rk: cs.SymmetricKey
    self_ltk: cs.GroupScalar
    peer_ltk_pub: cs.GroupElement
    kid_self: int
    kid_peer: int
    ck_send: cs.SymmetricKey | None = None
    ck_recv: cs.SymmetricKey | None = None
    i_s: int = 0
    j_s: int = 0
    i_r: int = 0
    j_r: int = 0
    self_eph_secret: cs.GroupScalar | None = None
    self_eph_pub: cs.GroupElement | None = None
    peer_eph_pub: cs.GroupElement | None = None
    skipped: dict[tuple[int, int], cs.SymmetricKey] = field(default_factory=dict)
    consumed: set[tuple[int, int]] = field(default_factory=set)
    # transient notification hook for harnesses; never serialized
    observer: object | None = None


def build_ad_vdr(kid_sender: int, kid_receiver: int, vers: int, ctype: int,
                 eph_pub: bytes, j_index: int) -> bytes:
    """Associated data: kids, vers, ctype, sender ephemeral, symmetric index.

    No sender/receiver identity strings here; the ephemeral takes over the
    binding role they played in the salted-hash design.
    """
    return struct.pack(">IIBB", kid_sender, kid_receiver, vers, ctype) + \
        bytes(eph_pub) + struct.pack(">I", j_index)


def _notify_message_key(st: RatchetState, stage: tuple[int, int],
                        mk: cs.SymmetricKey, direction: str) -> None:
    if st.observer is not None:
        st.observer.on_message_key(stage, mk, direction)


def vdr_init_sender(self_ltk: cs.GroupScalar, peer_ltk_pub: cs.GroupElement,
                    rng: cs.SeededRng, kid_self: int, kid_peer: int) -> RatchetState:
    """Initiator setup: root and first sending chain from
    KDF(dh(ephemeral, peer) || dh(static, peer))."""
    eph_secret, eph_pub = cs.dh_keygen(rng)
    ikm = cs.dh(eph_secret, peer_ltk_pub) + cs.dh(self_ltk, peer_ltk_pub)
    rk, ck_send = cs.kdf_root(ikm, cs.ZERO_SALT)
    return RatchetState(
        role=ROLE_INITIATOR, rk=rk, ck_send=ck_send,
        self_ltk=self_ltk, peer_ltk_pub=peer_ltk_pub,
        kid_self=kid_self, kid_peer=kid_peer,
        self_eph_secret=eph_secret, self_eph_pub=eph_pub,
    )


def vdr_lazy_init_receiver(self_ltk: cs.GroupScalar,
                           peer_ltk_pub: cs.GroupElement,
                           env: EnvelopeVDR,
                           kid_self: int, kid_peer: int) -> RatchetState:
    """Responder setup from the first incoming envelope; mirrors the
    initiator derivation through DH symmetry. Does not decrypt: call
    vdr_decrypt next and discard this state if that fails, since a tampered
    ephemeral yields garbage keys that only the AEAD tag can expose."""
    if env.i_index != 0:
        raise StaleEpoch(
            f"lazy receiver init needs an epoch-0 envelope, got epoch {env.i_index}")
    ikm = cs.dh(self_ltk, cs.GroupElement(env.eph_pub)) + \
        cs.dh(self_ltk, peer_ltk_pub)
    rk, ck_recv = cs.kdf_root(ikm, cs.ZERO_SALT)
    return RatchetState(
        role=ROLE_RESPONDER, rk=rk, ck_recv=ck_recv,
        self_ltk=self_ltk, peer_ltk_pub=peer_ltk_pub,
        kid_self=kid_self, kid_peer=kid_peer,
        peer_eph_pub=cs.GroupElement(env.eph_pub),
        i_s=1,  # reply epoch; chain material arrives with the first decrypt
    )


def vdr_encrypt(st: RatchetState, ctype: int, m: bytes,
                rng: cs.SeededRng) -> EnvelopeVDR:
    if st.ck_send is None:
        raise NotInitialized("no sending chain; decrypt the peer's flight first")
    stage = (st.i_s, st.j_s)
    mk, st.ck_send = cs.kdf_chain(st.ck_send)
    nonce_material = struct.pack(">I", st.i_s) + rng.token(4)
    nonce = cs.AeadNonce(nonce_material + b"\x00" * 4)
    ad = build_ad_vdr(st.kid_self, st.kid_peer, VERS_VDR, ctype,
                      st.self_eph_pub, st.j_s)
    ciphertext = cs.aead_seal(mk, nonce, m, ad)
    env = EnvelopeVDR(ctype=ctype, ciphertext=ciphertext,
                      nonce_material=nonce_material,
                      kid_sender=st.kid_self, kid_receiver=st.kid_peer,
                      eph_pub=st.self_eph_pub, j_index=st.j_s)
    st.j_s += 1
    _notify_message_key(st, stage, mk, "send")
    return env


def vdr_decrypt(st: RatchetState, env: EnvelopeVDR,
                rng: cs.SeededRng) -> bytes:
    """Catch-up decryption with replay defense; see module docstring for the
    step order. rng feeds the reply-chain ephemeral generated after the
    first successful decrypt of a new epoch."""
    stage = (env.i_index, env.j_index)
    if stage in st.consumed:
        raise ReplayRejected(f"message key for {stage} already consumed")

    use_cached = stage in st.skipped
    ratcheted = False
    skipped_add: dict[tuple[int, int], cs.SymmetricKey] = {}

    if use_cached:
        mk = st.skipped[stage]
        rk_new, ck_new = st.rk, st.ck_recv
        i_r_new, j_r_new = st.i_r, st.j_r
    else:
        if env.i_index > st.i_r:
            if st.self_eph_secret is None:
                raise StaleEpoch("no local ephemeral to ratchet against")
            shared = cs.dh(st.self_eph_secret, cs.GroupElement(env.eph_pub))
            rk_new, ck_new = cs.kdf_root(shared, st.rk)
            i_r_new, j_r_new = env.i_index, 0
            ratcheted = True
        elif env.i_index == st.i_r and st.ck_recv is not None:
            rk_new, ck_new = st.rk, st.ck_recv
            i_r_new, j_r_new = st.i_r, st.j_r
            if env.j_index < j_r_new:
                raise StaleEpoch(
                    f"index {stage} behind receive chain, no cached key")
        else:
            raise StaleEpoch(
                f"epoch {env.i_index} has no live chain (current {st.i_r}), "
                "no cached key")
        if env.j_index - j_r_new > MAX_SKIP:
            raise SkipLimit(
                f"gap {env.j_index - j_r_new} exceeds MAX_SKIP={MAX_SKIP}")
        while j_r_new < env.j_index:
            mk_skip, ck_new = cs.kdf_chain(ck_new)
            skipped_add[(i_r_new, j_r_new)] = mk_skip
            j_r_new += 1
        mk, ck_new = cs.kdf_chain(ck_new)
        j_r_new += 1

    nonce = cs.AeadNonce(env.nonce_material + b"\x00" * 4)
    ad = build_ad_vdr(env.kid_sender, env.kid_receiver, env.vers, env.ctype,
                      env.eph_pub, env.j_index)
    # raises AuthFailure with all state untouched
    plaintext = cs.aead_open(mk, nonce, env.ciphertext, ad)

    st.consumed.add(stage)
    if use_cached:
        del st.skipped[stage]
    else:
        st.rk, st.ck_recv = rk_new, ck_new
        st.i_r, st.j_r = i_r_new, j_r_new
        st.skipped.update(skipped_add)
        while len(st.skipped) > MAX_SKIP:
            del st.skipped[next(iter(st.skipped))]
        if ratcheted:
            st.peer_eph_pub = cs.GroupElement(env.eph_pub)
        if ratcheted or st.ck_send is None:
            eph_secret, eph_pub = cs.dh_keygen(rng)
            st.rk, st.ck_send = cs.kdf_root(
                cs.dh(eph_secret, cs.GroupElement(env.eph_pub)), st.rk)
            st.self_eph_secret, st.self_eph_pub = eph_secret, eph_pub
            st.i_s, st.j_s = st.i_r + 1, 0
    _notify_message_key(st, stage, mk, "recv")
    return plaintext


# ---------------------------------------------------------------------------
# Snapshot codec (the RevState compromise surface)
# ---------------------------------------------------------------------------

def _opt(flag_bit: int, value: bytes | None, flags: int,
         parts: list[bytes]) -> int:
    if value is not None:
        flags |= flag_bit
        parts.append(bytes(value))
    return flags


def vdr_export_state(st: RatchetState) -> bytes:
    """Complete, lossless snapshot. Holds everything the party holds,
    long-term secret included; consumed message keys are simply not here
    because the state never retains them."""
    opt_parts: list[bytes] = []
    flags = 0
    flags = _opt(0x01, st.ck_send, flags, opt_parts)
    flags = _opt(0x02, st.ck_recv, flags, opt_parts)
    flags = _opt(0x04, st.self_eph_secret, flags, opt_parts)
    flags = _opt(0x08, st.self_eph_pub, flags, opt_parts)
    flags = _opt(0x10, st.peer_eph_pub, flags, opt_parts)
    parts = [
        _SNAPSHOT_MAGIC,
        bytes([0 if st.role == ROLE_INITIATOR else 1, flags]),
        st.rk,
        *opt_parts,
        struct.pack(">IIII", st.i_s, st.j_s, st.i_r, st.j_r),
        st.self_ltk,
        st.peer_ltk_pub,
        struct.pack(">II", st.kid_self, st.kid_peer),
        struct.pack(">H", len(st.skipped)),
    ]
    for (i, j), key in st.skipped.items():
        parts.append(struct.pack(">II", i, j) + key)
    parts.append(struct.pack(">I", len(st.consumed)))
    for i, j in sorted(st.consumed):
        parts.append(struct.pack(">II", i, j))
    return b"".join(parts)


def vdr_import_state(snapshot: bytes) -> RatchetState:
    from .wire import _Reader

    r = _Reader(snapshot)
    if r.take(4, "snapshot magic") != _SNAPSHOT_MAGIC:
        raise ParseError("not a ratchet snapshot (bad magic)")
    role = ROLE_INITIATOR if r.u8("role") == 0 else ROLE_RESPONDER
    flags = r.u8("flags")
    rk = cs.SymmetricKey(r.take(32, "rk"))

    def opt(bit: int, name: str, ctor):
        return ctor(r.take(32, name)) if flags & bit else None

    ck_send = opt(0x01, "ck_send", cs.SymmetricKey)
    ck_recv = opt(0x02, "ck_recv", cs.SymmetricKey)
    self_eph_secret = opt(0x04, "self_eph_secret", cs.GroupScalar)
    self_eph_pub = opt(0x08, "self_eph_pub", cs.GroupElement)
    peer_eph_pub = opt(0x10, "peer_eph_pub", cs.GroupElement)
    i_s, j_s, i_r, j_r = struct.unpack(">IIII", r.take(16, "indices"))
    self_ltk = cs.GroupScalar(r.take(32, "self_ltk"))
    peer_ltk_pub = cs.GroupElement(r.take(32, "peer_ltk_pub"))
    kid_self, kid_peer = struct.unpack(">II", r.take(8, "kids"))
    skipped: dict[tuple[int, int], cs.SymmetricKey] = {}
    for _ in range(r.u16("skipped count")):
        i, j = struct.unpack(">II", r.take(8, "skipped index"))
        skipped[(i, j)] = cs.SymmetricKey(r.take(32, "skipped key"))
    consumed = set()
    for _ in range(r.u32("consumed count")):
        consumed.add(struct.unpack(">II", r.take(8, "consumed index")))
    r.expect_end("snapshot")
    return RatchetState(
        role=role, rk=rk, ck_send=ck_send, ck_recv=ck_recv,
        i_s=i_s, j_s=j_s, i_r=i_r, j_r=j_r,
        self_eph_secret=self_eph_secret, self_eph_pub=self_eph_pub,
        peer_eph_pub=peer_eph_pub, self_ltk=self_ltk,
        peer_ltk_pub=peer_ltk_pub, kid_self=kid_self, kid_peer=kid_peer,
        skipped=skipped, consumed=consumed,
    )
