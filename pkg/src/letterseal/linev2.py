"""Second-generation sealing: static-static DH, salted SHA-256 key
derivation, AES-GCM with a counter-prefixed nonce and AD-bound metadata.

Deliberately preserved properties: decryption is stateless, so replays of a
valid envelope are accepted, and revealing the pre-master secret
retroactively opens every recorded message (no forward secrecy). Counters
run per direction, both starting at zero, so cross-direction nonce
collisions are possible.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field

from . import crypto_suite as cs
from .errors import CounterExhausted, KidMismatch
from .wire import VERS_V2, EnvelopeV2

_CTR_MAX = 2**32 - 1


@dataclass
class SessionV2:
    """Mutable sending/receiving context; one owner per instance."""

    pms: cs.SharedSecret
    kid_self: int
    kid_peer: int
    sid: str
    rid: str
    ctr: int = 0
    vers: int = VERS_V2
    # associated data is constant per (session, ctype); built once
    ad_cache: dict = field(default_factory=dict, repr=False, compare=False)


def v2_establish(self_secret: cs.GroupScalar, peer_public: cs.GroupElement,
                 kid_self: int, kid_peer: int, sid: str, rid: str) -> SessionV2:
    return SessionV2(pms=cs.dh(self_secret, peer_public),
                     kid_self=kid_self, kid_peer=kid_peer, sid=sid, rid=rid)


def v2_derive_key(pms: cs.SharedSecret, salt: bytes) -> cs.SymmetricKey:
    if len(salt) != 16:
        raise ValueError(f"v2 salt must be 16 bytes, got {len(salt)}")
    return cs.SymmetricKey(cs._digest_kdf_raw(pms, salt, b"Key"))


def v2_build_nonce(ctr: int, rand32: bytes) -> tuple[cs.AeadNonce, bytes]:
    """8 bytes of material (counter ++ random), zero-padded to 96 bits."""
    if len(rand32) != 4:
        raise ValueError("rand32 must be 4 bytes (32 bits)")
    material = struct.pack(">I", ctr) + rand32
    return cs.AeadNonce(material + b"\x00" * 4), material


def build_ad_v2(rid: str, sid: str, kid_sender: int, kid_receiver: int,
                vers: int, ctype: int) -> bytes:
    """Associated data: rid, sid, both kids, vers, ctype, pinned layout."""
    rid_b = rid.encode()
    sid_b = sid.encode()
    return b"".join([
        struct.pack(">H", len(rid_b)), rid_b,
        struct.pack(">H", len(sid_b)), sid_b,
        struct.pack(">IIBB", kid_sender, kid_receiver, vers, ctype),
    ])


def v2_encrypt(s: SessionV2, ctype: int, m: bytes, rng: cs.SeededRng) -> EnvelopeV2:
    if s.ctr >= _CTR_MAX:
        raise CounterExhausted(f"send counter at {s.ctr}")
    draw = rng.token(20)  # 16-byte salt and the 32-bit nonce half, one draw
    salt = draw[:16]
    k_e = v2_derive_key(s.pms, salt)
    nonce, material = v2_build_nonce(s.ctr, draw[16:])
    ad = s.ad_cache.get(ctype)
    if ad is None:
        ad = build_ad_v2(s.rid, s.sid, s.kid_self, s.kid_peer, s.vers, ctype)
        s.ad_cache[ctype] = ad
    ciphertext = cs.aead_seal(k_e, nonce, m, ad)
    s.ctr += 1
    return EnvelopeV2(ctype=ctype, salt=salt, ciphertext=ciphertext,
                      nonce_material=material, kid_sender=s.kid_self,
                      kid_receiver=s.kid_peer, sid=s.sid, rid=s.rid)


def v2_decrypt(s: SessionV2, e: EnvelopeV2) -> bytes:
    """Stateless open: rederives the key from the envelope, keeps no record
    of seen nonces, so the identical envelope decrypts any number of times."""
    if e.kid_receiver != s.kid_self:
        raise KidMismatch(
            f"envelope for kid {e.kid_receiver}, this session holds {s.kid_self}")
    k_e = v2_derive_key(s.pms, e.salt)
    nonce = cs.AeadNonce(e.nonce_material + b"\x00" * 4)
    # memo over every AD input (vers is pinned to 2 by the envelope ctor);
    # exact for forged headers too, since the key covers all fields
    memo = (e.rid, e.sid, e.kid_sender, e.kid_receiver, e.ctype)
    ad = s.ad_cache.get(memo)
    if ad is None:
        if len(s.ad_cache) > 64:
            s.ad_cache.clear()
        ad = build_ad_v2(e.rid, e.sid, e.kid_sender, e.kid_receiver, e.vers, e.ctype)
        s.ad_cache[memo] = ad
    return cs.aead_open(k_e, nonce, e.ciphertext, ad)
