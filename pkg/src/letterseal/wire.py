"""Bit-exact codecs for protocol envelopes and observed packet shapes.

The field *lists* come from the protocols; the byte layout here is pinned by
this library so golden fixtures are reproducible: all integers big-endian,
variable fields length-prefixed (u16 for short identity strings, u32 for
ciphertexts), fixed fields raw. Envelope version bytes are 1, 2 and 3;
packets start with a distinct magic byte (0xA0 user, 0xA1 bot) so the two
families cannot be confused.
"""

from __future__ import annotations

import enum
import struct
from dataclasses import dataclass, field

from .errors import Ambiguous, ChunkCountError, ParseError

VERS_V1 = 1
VERS_V2 = 2
VERS_VDR = 3

MAGIC_USER_PACKET = 0xA0
MAGIC_BOT_PACKET = 0xA1

# from, to, to_type, id, created_time, delivered_time, has_content,
# content_type, e2ee_version, seq, session_id
_PACKET_HEADER = struct.Struct(">qqBqqqBBBqq")


class PacketClass(enum.Enum):
    UserE2EE = "user-e2ee"
    BotPlaintext = "bot-plaintext"


# ---------------------------------------------------------------------------
# Envelope types
# ---------------------------------------------------------------------------

@dataclass(slots=True)
class EnvelopeV1:
    """CBC+MAC envelope: vers, ctype, salt, C, tag, key ids."""

    ctype: int
    salt: bytes
    ciphertext: bytes
    tag: bytes
    kid_sender: int
    kid_receiver: int
    vers: int = VERS_V1

    def __post_init__(self):
        if self.vers != VERS_V1:
            raise ValueError(f"EnvelopeV1 vers must be 1, got {self.vers}")
        if len(self.salt) != 8:
            raise ValueError("EnvelopeV1 salt must be 8 bytes")
        if len(self.tag) != 16:
            raise ValueError("EnvelopeV1 tag must be 16 bytes")
        if not self.ciphertext or len(self.ciphertext) % 16:
            raise ValueError("EnvelopeV1 ciphertext must be a positive multiple of 16")
        _check_u8(self.ctype, "ctype")
        _check_u32(self.kid_sender, "kid_sender")
        _check_u32(self.kid_receiver, "kid_receiver")


@dataclass(slots=True)
class EnvelopeV2:
    """AES-GCM envelope with identity strings and an 8-byte nonce seed."""

    ctype: int
    salt: bytes
    ciphertext: bytes
    nonce_material: bytes
    kid_sender: int
    kid_receiver: int
    sid: str
    rid: str
    vers: int = VERS_V2

    def __post_init__(self):
        if self.vers != VERS_V2:
            raise ValueError(f"EnvelopeV2 vers must be 2, got {self.vers}")
        if len(self.salt) != 16:
            raise ValueError("EnvelopeV2 salt must be 16 bytes")
        if len(self.nonce_material) != 8:
            raise ValueError("EnvelopeV2 nonce_material must be 8 bytes")
        if len(self.ciphertext) < 16:
            raise ValueError("EnvelopeV2 ciphertext must include the 16-byte tag")
        _check_u8(self.ctype, "ctype")
        _check_u32(self.kid_sender, "kid_sender")
        _check_u32(self.kid_receiver, "kid_receiver")
        # utf-8 expands at most 4x, so short strings need no encode pass
        if ((len(self.sid) > 0x3FFF and len(self.sid.encode()) > 0xFFFF)
                or (len(self.rid) > 0x3FFF and len(self.rid.encode()) > 0xFFFF)):
            raise ValueError("identity strings exceed u16 length prefix")

    @property
    def counter(self) -> int:
        return int.from_bytes(self.nonce_material[:4], "big")


@dataclass(slots=True)
class EnvelopeVDR:
    """Ratchet envelope: carries the sender ephemeral and both chain indices.

    The asymmetric index i rides in the first four bytes of nonce_material
    (the counter slot); only j gets a dedicated field.
    """

    ctype: int
    ciphertext: bytes
    nonce_material: bytes
    kid_sender: int
    kid_receiver: int
    eph_pub: bytes
    j_index: int
    vers: int = VERS_VDR

    def __post_init__(self):
        if self.vers != VERS_VDR:
            raise ValueError(f"EnvelopeVDR vers must be 3, got {self.vers}")
        if len(self.eph_pub) != 32:
            raise ValueError("EnvelopeVDR eph_pub must be 32 bytes")
        if len(self.nonce_material) != 8:
            raise ValueError("EnvelopeVDR nonce_material must be 8 bytes")
        if len(self.ciphertext) < 16:
            raise ValueError("EnvelopeVDR ciphertext must include the 16-byte tag")
        _check_u8(self.ctype, "ctype")
        _check_u32(self.kid_sender, "kid_sender")
        _check_u32(self.kid_receiver, "kid_receiver")
        _check_u32(self.j_index, "j_index")

    @property
    def i_index(self) -> int:
        return int.from_bytes(self.nonce_material[:4], "big")


Envelope = EnvelopeV1 | EnvelopeV2 | EnvelopeVDR


def _check_u8(value: int, name: str) -> None:
    if not 0 <= value <= 0xFF:
        raise ValueError(f"{name} out of u8 range: {value}")


def _check_u32(value: int, name: str) -> None:
    if not 0 <= value <= 0xFFFFFFFF:
        raise ValueError(f"{name} out of u32 range: {value}")


# ---------------------------------------------------------------------------
# Envelope codec
# ---------------------------------------------------------------------------

def encode_envelope(env: Envelope) -> bytes:
    if isinstance(env, EnvelopeV1):
        return b"".join([
            struct.pack(">BB", env.vers, env.ctype),
            env.salt,
            struct.pack(">II", env.kid_sender, env.kid_receiver),
            struct.pack(">I", len(env.ciphertext)),
            env.ciphertext,
            env.tag,
        ])
    if isinstance(env, EnvelopeV2):
        sid = env.sid.encode()
        rid = env.rid.encode()
        return b"".join([
            struct.pack(">BB", env.vers, env.ctype),
            env.salt,
            struct.pack(">H", len(sid)), sid,
            struct.pack(">H", len(rid)), rid,
            struct.pack(">II", env.kid_sender, env.kid_receiver),
            env.nonce_material,
            struct.pack(">I", len(env.ciphertext)),
            env.ciphertext,
        ])
    if isinstance(env, EnvelopeVDR):
        return b"".join([
            struct.pack(">BB", env.vers, env.ctype),
            struct.pack(">II", env.kid_sender, env.kid_receiver),
            env.eph_pub,
            struct.pack(">I", env.j_index),
            env.nonce_material,
            struct.pack(">I", len(env.ciphertext)),
            env.ciphertext,
        ])
    raise TypeError(f"not an envelope: {type(env).__name__}")


class _Reader:
    """Cursor over a byte buffer; every failure names the field being read."""

    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def take(self, n: int, fieldname: str) -> bytes:
        if self.pos + n > len(self.data):
            raise ParseError(
                f"truncated while reading {fieldname}: "
                f"need {n} bytes at offset {self.pos}, have {len(self.data) - self.pos}")
        chunk = self.data[self.pos:self.pos + n]
        self.pos += n
        return chunk

    def u8(self, fieldname: str) -> int:
        return self.take(1, fieldname)[0]

    def u16(self, fieldname: str) -> int:
        return struct.unpack(">H", self.take(2, fieldname))[0]

    def u32(self, fieldname: str) -> int:
        return struct.unpack(">I", self.take(4, fieldname))[0]

    def lp16(self, fieldname: str) -> bytes:
        return self.take(self.u16(fieldname + " length"), fieldname)

    def lp32(self, fieldname: str) -> bytes:
        return self.take(self.u32(fieldname + " length"), fieldname)

    def utf8(self, raw: bytes, fieldname: str) -> str:
        try:
            return raw.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"{fieldname} is not valid UTF-8") from exc

    def expect_end(self, what: str) -> None:
        if self.pos != len(self.data):
            raise ParseError(
                f"{len(self.data) - self.pos} trailing bytes after {what}")


def decode_envelope(data: bytes) -> Envelope:
    r = _Reader(data)
    vers = r.u8("vers")
    try:
        if vers == VERS_V1:
            env = EnvelopeV1(
                ctype=r.u8("ctype"),
                salt=r.take(8, "salt"),
                kid_sender=r.u32("kid_sender"),
                kid_receiver=r.u32("kid_receiver"),
                ciphertext=r.lp32("ciphertext"),
                tag=r.take(16, "tag"),
            )
        elif vers == VERS_V2:
            ctype = r.u8("ctype")
            salt = r.take(16, "salt")
            sid = r.utf8(r.lp16("sid"), "sid")
            rid = r.utf8(r.lp16("rid"), "rid")
            env = EnvelopeV2(
                ctype=ctype, salt=salt, sid=sid, rid=rid,
                kid_sender=r.u32("kid_sender"),
                kid_receiver=r.u32("kid_receiver"),
                nonce_material=r.take(8, "nonce_material"),
                ciphertext=r.lp32("ciphertext"),
            )
        elif vers == VERS_VDR:
            env = EnvelopeVDR(
                ctype=r.u8("ctype"),
                kid_sender=r.u32("kid_sender"),
                kid_receiver=r.u32("kid_receiver"),
                eph_pub=r.take(32, "eph_pub"),
                j_index=r.u32("j_index"),
                nonce_material=r.take(8, "nonce_material"),
                ciphertext=r.lp32("ciphertext"),
            )
        else:
            raise ParseError(f"unknown version byte {vers}")
    except ValueError as exc:
        raise ParseError(f"invariant violated while decoding: {exc}") from exc
    r.expect_end(f"envelope v{vers}")
    return env


# ---------------------------------------------------------------------------
# Packet types (observed transport shapes)
# ---------------------------------------------------------------------------

@dataclass(slots=True)
class PacketMeta:
    """User-conversation packet: metadata header plus opaque chunk list."""

    from_: int
    to: int
    to_type: int
    id: int
    created_time: int
    delivered_time: int
    has_content: bool
    content_type: int
    e2ee_version: int
    seq: int
    session_id: int
    chunks: tuple[bytes, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if len(self.chunks) > 0xFF:
            raise ValueError("chunk count exceeds u8")
        _check_u8(self.to_type, "to_type")
        _check_u8(self.content_type, "content_type")
        _check_u8(self.e2ee_version, "e2ee_version")


@dataclass(slots=True)
class BotPacket:
    """Bot-conversation packet: same header, plaintext body, no chunks."""

    from_: int
    to: int
    to_type: int
    id: int
    created_time: int
    delivered_time: int
    has_content: bool
    content_type: int
    e2ee_version: int
    seq: int
    session_id: int
    bot_tag2: bytes = b""
    bot_origin: str = ""
    bot_check: bool = False
    bot_track: str = ""
    text: str = ""

    def __post_init__(self):
        _check_u8(self.to_type, "to_type")
        _check_u8(self.content_type, "content_type")
        _check_u8(self.e2ee_version, "e2ee_version")


Packet = PacketMeta | BotPacket

_HEADER_FIELDS = ("from_", "to", "to_type", "id", "created_time",
                  "delivered_time", "has_content", "content_type",
                  "e2ee_version", "seq", "session_id")


def _pack_header(p: Packet) -> bytes:
    vals = [getattr(p, f) for f in _HEADER_FIELDS]
    vals[6] = 1 if vals[6] else 0  # has_content as u8
    return _PACKET_HEADER.pack(*vals)


def _unpack_header(r: _Reader) -> dict:
    raw = r.take(_PACKET_HEADER.size, "packet header")
    vals = list(_PACKET_HEADER.unpack(raw))
    vals[6] = bool(vals[6])
    return dict(zip(_HEADER_FIELDS, vals))


def encode_packet(p: Packet) -> bytes:
    if isinstance(p, PacketMeta):
        parts = [bytes([MAGIC_USER_PACKET]), _pack_header(p),
                 bytes([len(p.chunks)])]
        for chunk in p.chunks:
            parts.append(struct.pack(">I", len(chunk)))
            parts.append(chunk)
        return b"".join(parts)
    if isinstance(p, BotPacket):
        origin = p.bot_origin.encode()
        track = p.bot_track.encode()
        text = p.text.encode()
        return b"".join([
            bytes([MAGIC_BOT_PACKET]), _pack_header(p),
            struct.pack(">H", len(p.bot_tag2)), p.bot_tag2,
            struct.pack(">H", len(origin)), origin,
            bytes([1 if p.bot_check else 0]),
            struct.pack(">H", len(track)), track,
            struct.pack(">I", len(text)), text,
        ])
    raise TypeError(f"not a packet: {type(p).__name__}")


def decode_packet(data: bytes) -> Packet:
    r = _Reader(data)
    magic = r.u8("packet magic")
    if magic == MAGIC_USER_PACKET:
        header = _unpack_header(r)
        count = r.u8("chunk count")
        chunks = tuple(r.lp32(f"chunk[{i}]") for i in range(count))
        r.expect_end("user packet")
        return PacketMeta(chunks=chunks, **header)
    if magic == MAGIC_BOT_PACKET:
        header = _unpack_header(r)
        p = BotPacket(
            bot_tag2=r.lp16("bot_tag2"),
            bot_origin=r.utf8(r.lp16("bot_origin"), "bot_origin"),
            bot_check=bool(r.u8("bot_check")),
            bot_track=r.utf8(r.lp16("bot_track"), "bot_track"),
            text=r.utf8(r.lp32("text"), "text"),
            **header,
        )
        r.expect_end("bot packet")
        return p
    raise ParseError(f"unknown packet magic byte 0x{magic:02X}")


def parse_chunks(chunks) -> tuple[bytes, bytes, bytes, int, int]:
    """Positional chunk decomposition: salt, ciphertext, nonce seed, key ids."""
    if len(chunks) != 5:
        raise ChunkCountError(f"expected 5 chunks, got {len(chunks)}")
    salt, ciphertext, nonce_material, kid_a_raw, kid_b_raw = chunks
    if len(salt) != 16:
        raise ParseError(f"salt chunk must be 16 bytes, got {len(salt)}")
    if len(ciphertext) < 16:
        raise ParseError("ciphertext chunk shorter than the 16-byte tag")
    if len(nonce_material) != 8:
        raise ParseError(
            f"nonce_material chunk must be 8 bytes, got {len(nonce_material)}")
    if len(kid_a_raw) != 4 or len(kid_b_raw) != 4:
        raise ParseError("kid chunks must be 4 bytes each")
    return (bytes(salt), bytes(ciphertext), bytes(nonce_material),
            int.from_bytes(kid_a_raw, "big"), int.from_bytes(kid_b_raw, "big"))


def classify_packet(p: Packet) -> PacketClass:
    """Partition a decoded packet by content: chunked vs plaintext bot body."""
    has_chunks = bool(getattr(p, "chunks", ()))
    has_bot_text = hasattr(p, "bot_check") and bool(getattr(p, "text", ""))
    if has_chunks and has_bot_text:
        raise Ambiguous("packet carries both chunks and a bot text body")
    if has_chunks:
        return PacketClass.UserE2EE
    if has_bot_text:
        return PacketClass.BotPlaintext
    raise Ambiguous("packet carries neither chunks nor a bot text body")
