"""Primitive layer: X25519, SHA-256, HKDF/HMAC-SHA256, AES-256 GCM/CBC/ECB.

All operations are pure functions of their inputs. The only stateful object
is :class:`SeededRng`, an injectable deterministic byte source that logs its
draws so a test harness can replay and reveal randomness. An optional
counting scope (:func:`count_ops`) tallies DH-class, KDF-class and AEAD
operations for the benchmark instrumentation; a DH-class operation is any
X25519 scalar multiplication, key generation included.
"""

from __future__ import annotations

import hashlib
import hmac as _hmac
import threading
from contextlib import contextmanager
from dataclasses import dataclass

from cryptography.exceptions import InvalidTag
from cryptography.hazmat.primitives import padding as _padding
from cryptography.hazmat.primitives.asymmetric.x25519 import (
    X25519PrivateKey,
    X25519PublicKey,
)
from cryptography.hazmat.primitives.ciphers import Cipher, algorithms, modes
from cryptography.hazmat.primitives.ciphers.aead import AESGCM

from .errors import AuthFailure, DhError, PaddingError

ROOT_KDF_INFO = b"LINEvDR-root"
ZERO_SALT = b"\x00" * 32


class _FixedBytes(bytes):
    SIZE = 0

    def __new__(cls, data):
        self = super().__new__(cls, data)
        if len(self) != cls.SIZE:
            raise ValueError(
                f"{cls.__name__} must be {cls.SIZE} bytes, got {len(self)}")
        return self


class GroupScalar(_FixedBytes):
    """32-byte X25519 secret scalar, stored in clamped form by dh_keygen."""
    SIZE = 32


class GroupElement(_FixedBytes):
    """32-byte X25519 public group element."""
    SIZE = 32


class SharedSecret(_FixedBytes):
    """32-byte Diffie-Hellman output."""
    SIZE = 32


class SymmetricKey(_FixedBytes):
    """32-byte symmetric key (root, chain, message, or session key)."""
    SIZE = 32


class Digest(_FixedBytes):
    """32-byte SHA-256 output."""
    SIZE = 32


class AeadNonce(_FixedBytes):
    """12-byte AES-GCM nonce; built only by the protocol nonce builders."""
    SIZE = 12


# ---------------------------------------------------------------------------
# Operation counting for benchmark instrumentation
# ---------------------------------------------------------------------------

@dataclass
class OpCounts:
    dh: int = 0
    kdf: int = 0
    aead: int = 0


_counter_scopes = threading.local()
# scopes open across all threads; lets _bump skip the thread-local lookup
# on the hot path when nobody is counting
_scope_gate = 0
_gate_lock = threading.Lock()


@contextmanager
def count_ops():
    """Collect DH/KDF/AEAD operation counts for the enclosed calls."""
    global _scope_gate
    counts = OpCounts()
    stack = getattr(_counter_scopes, "stack", None)
    if stack is None:
        stack = _counter_scopes.stack = []
    stack.append(counts)
    with _gate_lock:
        _scope_gate += 1
    try:
        yield counts
    finally:
        stack.pop()
        with _gate_lock:
            _scope_gate -= 1


def _bump(field: str) -> None:
    if not _scope_gate:
        return
    stack = getattr(_counter_scopes, "stack", None)
    if stack:
        for counts in stack:
            setattr(counts, field, getattr(counts, field) + 1)


# ---------------------------------------------------------------------------
# Seeded randomness
# ---------------------------------------------------------------------------

class SeededRng:
    """Deterministic byte source: SHA-256 in counter mode over a seed.

    Every draw is appended to ``log`` so a harness can attribute and reveal
    per-stage randomness after the fact.
    """

    def __init__(self, seed: int | bytes):
        if isinstance(seed, int):
            seed = seed.to_bytes(max(1, (seed.bit_length() + 7) // 8), "big")
        self._state = hashlib.sha256(b"letterseal-rng" + seed).digest()
        self._counter = 0
        self.log: list[bytes] = []

    @classmethod
    def from_entropy(cls) -> "SeededRng":
        import secrets

        return cls(secrets.token_bytes(32))

    def token(self, n: int) -> bytes:
        if n <= 32:
            out = hashlib.sha256(
                self._state + self._counter.to_bytes(8, "big")).digest()[:n]
            self._counter += 1
        else:
            out = b""
            while len(out) < n:
                out += hashlib.sha256(
                    self._state + self._counter.to_bytes(8, "big")).digest()
                self._counter += 1
            out = out[:n]
        self.log.append(out)
        return out

    def fork(self, label: bytes) -> "SeededRng":
        """Independent child stream, domain-separated by label."""
        return SeededRng(hashlib.sha256(self._state + b"fork" + label).digest())

    def mark(self) -> int:
        return len(self.log)

    def draws_since(self, mark: int) -> bytes:
        return b"".join(self.log[mark:])


# ---------------------------------------------------------------------------
# Diffie-Hellman
# ---------------------------------------------------------------------------

def clamp_scalar(raw: bytes) -> GroupScalar:
    b = bytearray(raw)
    b[0] &= 248
    b[31] &= 127
    b[31] |= 64
    return GroupScalar(bytes(b))


def dh_keygen(rng: SeededRng) -> tuple[GroupScalar, GroupElement]:
    """Fresh X25519 key pair from the injected randomness source."""
    _bump("dh")
    scalar = clamp_scalar(rng.token(32))
    pub = X25519PrivateKey.from_private_bytes(scalar).public_key()
    return scalar, GroupElement(pub.public_bytes_raw())


def dh_to_public(secret: GroupScalar) -> GroupElement:
    pub = X25519PrivateKey.from_private_bytes(secret).public_key()
    return GroupElement(pub.public_bytes_raw())


def dh(secret: GroupScalar, peer: GroupElement) -> SharedSecret:
    """X25519 exchange; rejects the all-zero output of low-order points."""
    _bump("dh")
    try:
        shared = X25519PrivateKey.from_private_bytes(secret).exchange(
            X25519PublicKey.from_public_bytes(peer))
    except ValueError as exc:
        raise DhError(str(exc)) from exc
    if shared == b"\x00" * 32:
        raise DhError("all-zero shared secret (low-order peer point)")
    return SharedSecret(shared)


# ---------------------------------------------------------------------------
# Hashing and key derivation
# ---------------------------------------------------------------------------

def hash(data: bytes) -> Digest:  # noqa: A001 - module-scoped name is the contract
    return Digest(hashlib.sha256(data).digest())


def _digest_kdf_raw(secret: bytes, salt: bytes, label: bytes) -> bytes:
    # shared body so callers can wrap the output in their own key type
    # without paying for an intermediate Digest
    _bump("kdf")
    return hashlib.sha256(secret + salt + label).digest()


def digest_kdf(secret: bytes, salt: bytes, label: bytes) -> Digest:
    """Hash-based derivation SHA-256(secret || salt || label); KDF-class."""
    return Digest(_digest_kdf_raw(secret, salt, label))


def kdf_root(ikm: bytes, salt: bytes) -> tuple[SymmetricKey, SymmetricKey]:
    """HKDF-SHA256 (extract with salt, expand 64 bytes) -> (root, chain)."""
    if not ikm:
        raise ValueError("kdf_root requires non-empty input key material")
    _bump("kdf")
    prk = _hmac.new(salt if salt else ZERO_SALT, ikm, hashlib.sha256).digest()
    t1 = _hmac.new(prk, ROOT_KDF_INFO + b"\x01", hashlib.sha256).digest()
    t2 = _hmac.new(prk, t1 + ROOT_KDF_INFO + b"\x02", hashlib.sha256).digest()
    return SymmetricKey(t1), SymmetricKey(t2)


def kdf_chain(ck: SymmetricKey) -> tuple[SymmetricKey, SymmetricKey]:
    """One symmetric ratchet step -> (message key, next chain key)."""
    _bump("kdf")
    mk = _hmac.new(ck, b"\x01", hashlib.sha256).digest()
    next_ck = _hmac.new(ck, b"\x02", hashlib.sha256).digest()
    return SymmetricKey(mk), SymmetricKey(next_ck)


# ---------------------------------------------------------------------------
# AEAD and block-cipher modes
# ---------------------------------------------------------------------------

def aead_seal(key: SymmetricKey, nonce: AeadNonce, plaintext: bytes,
              ad: bytes) -> bytes:
    """AES-256-GCM; returns ciphertext with the 16-byte tag appended."""
    _bump("aead")
    return AESGCM(key).encrypt(nonce, plaintext, ad)


def aead_open(key: SymmetricKey, nonce: AeadNonce, ciphertext_and_tag: bytes,
              ad: bytes) -> bytes:
    if len(ciphertext_and_tag) < 16:
        raise AuthFailure("ciphertext shorter than the GCM tag")
    _bump("aead")
    try:
        return AESGCM(key).decrypt(nonce, ciphertext_and_tag, ad)
    except InvalidTag as exc:
        raise AuthFailure("GCM tag verification failed") from exc


def cbc_encrypt(key: SymmetricKey, iv16: bytes, plaintext: bytes) -> bytes:
    if len(iv16) != 16:
        raise ValueError("CBC IV must be 16 bytes")
    padder = _padding.PKCS7(128).padder()
    data = padder.update(plaintext) + padder.finalize()
    enc = Cipher(algorithms.AES(key), modes.CBC(iv16)).encryptor()
    return enc.update(data) + enc.finalize()


def cbc_decrypt(key: SymmetricKey, iv16: bytes, ciphertext: bytes) -> bytes:
    if len(iv16) != 16:
        raise ValueError("CBC IV must be 16 bytes")
    if not ciphertext or len(ciphertext) % 16:
        raise PaddingError("CBC ciphertext must be a positive block multiple")
    dec = Cipher(algorithms.AES(key), modes.CBC(iv16)).decryptor()
    data = dec.update(ciphertext) + dec.finalize()
    unpadder = _padding.PKCS7(128).unpadder()
    try:
        return unpadder.update(data) + unpadder.finalize()
    except ValueError as exc:
        raise PaddingError("malformed PKCS#7 padding") from exc


def ecb_encrypt_block(key: SymmetricKey, block16: bytes) -> bytes:
    if len(block16) != 16:
        raise ValueError("ECB block must be exactly 16 bytes")
    enc = Cipher(algorithms.AES(key), modes.ECB()).encryptor()
    return enc.update(block16) + enc.finalize()
