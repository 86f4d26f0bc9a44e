"""Shared builders for the test suite: keypairs, sessions, golden fixtures.

The golden builder is deliberately deterministic end to end; the frozen
file under data/ was produced by write_golden_file() and must never be
regenerated casually, since every byte of it is asserted against.
"""

from pathlib import Path

from letterseal import crypto_suite as cs
from letterseal.linev1 import v1_establish, v1_encrypt
from letterseal.linev2 import v2_establish, v2_encrypt
from letterseal.linevdr import (
    vdr_decrypt,
    vdr_encrypt,
    vdr_init_sender,
    vdr_lazy_init_receiver,
)
from letterseal.wire import encode_envelope

DATA_DIR = Path(__file__).parent / "data"
GOLDEN_FILE = DATA_DIR / "golden_envelopes.txt"
KAT_FILE = DATA_DIR / "kat_vectors.txt"
PACKET_FILE = DATA_DIR / "packet_fixtures.txt"

GOLDEN_SEED = 20260815


def keypairs(seed: int):
    """Two long-term keypairs plus the per-party rngs that continue
    drawing after keygen, so callers replay one deterministic world."""
    root = cs.SeededRng(seed)
    a_rng = root.fork(b"alice")
    b_rng = root.fork(b"bob")
    a_sk, a_pk = cs.dh_keygen(a_rng)
    b_sk, b_pk = cs.dh_keygen(b_rng)
    return a_sk, a_pk, b_sk, b_pk, a_rng, b_rng


def v1_pair(seed: int):
    a_sk, a_pk, b_sk, b_pk, a_rng, b_rng = keypairs(seed)
    sa = v1_establish(a_sk, b_pk, kid_self=11, kid_peer=12)
    sb = v1_establish(b_sk, a_pk, kid_self=12, kid_peer=11)
    return sa, sb, a_rng, b_rng


def v2_pair(seed: int):
    a_sk, a_pk, b_sk, b_pk, a_rng, b_rng = keypairs(seed)
    sa = v2_establish(a_sk, b_pk, kid_self=11, kid_peer=12,
                      sid="alice", rid="bob")
    sb = v2_establish(b_sk, a_pk, kid_self=12, kid_peer=11,
                      sid="bob", rid="alice")
    return sa, sb, a_rng, b_rng


def vdr_pair(seed: int):
    """Initiator state plus the materials the responder needs for its
    lazy init once the opening envelope exists."""
    a_sk, a_pk, b_sk, b_pk, a_rng, b_rng = keypairs(seed)
    sta = vdr_init_sender(a_sk, b_pk, a_rng, kid_self=11, kid_peer=12)
    return sta, (b_sk, a_pk), a_rng, b_rng


def vdr_receiver(materials, first_env):
    b_sk, a_pk = materials
    return vdr_lazy_init_receiver(b_sk, a_pk, first_env,
                                  kid_self=12, kid_peer=11)


def golden_payload(name: str) -> bytes:
    family, _, index = name.partition("-")
    return f"golden {family} message {index}".encode()


def golden_envelope_lines() -> list[str]:
    """Eleven seeded envelopes spanning all three families; the ratchet
    block walks epochs 0..2 so both ratchet directions are pinned."""
    sa1, _, a1_rng, _ = v1_pair(GOLDEN_SEED)
    lines = []
    for k in range(3):
        env = v1_encrypt(sa1, k, golden_payload(f"v1-{k}"), a1_rng)
        lines.append(f"v1-{k} {encode_envelope(env).hex()}")

    sa2, _, a2_rng, _ = v2_pair(GOLDEN_SEED)
    for k in range(3):
        env = v2_encrypt(sa2, k, golden_payload(f"v2-{k}"), a2_rng)
        lines.append(f"v2-{k} {encode_envelope(env).hex()}")

    sta, mats, a_rng, b_rng = vdr_pair(GOLDEN_SEED)
    e00 = vdr_encrypt(sta, 0, golden_payload("vdr-0-0"), a_rng)
    e01 = vdr_encrypt(sta, 1, golden_payload("vdr-0-1"), a_rng)
    stb = vdr_receiver(mats, e00)
    vdr_decrypt(stb, e00, b_rng)
    vdr_decrypt(stb, e01, b_rng)
    e10 = vdr_encrypt(stb, 0, golden_payload("vdr-1-0"), b_rng)
    e11 = vdr_encrypt(stb, 1, golden_payload("vdr-1-1"), b_rng)
    vdr_decrypt(sta, e10, a_rng)
    vdr_decrypt(sta, e11, a_rng)
    e20 = vdr_encrypt(sta, 0, golden_payload("vdr-2-0"), a_rng)
    vdr_decrypt(stb, e20, b_rng)
    for name, env in (("vdr-0-0", e00), ("vdr-0-1", e01), ("vdr-1-0", e10),
                      ("vdr-1-1", e11), ("vdr-2-0", e20)):
        lines.append(f"{name} {encode_envelope(env).hex()}")
    return lines


def golden_text() -> str:
    header = "# seeded envelope bytes; regenerate only on a wire format change\n"
    return header + "\n".join(golden_envelope_lines()) + "\n"


def parse_golden_file() -> dict[str, bytes]:
    out = {}
    for line in GOLDEN_FILE.read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        name, hexpart = line.split()
        out[name] = bytes.fromhex(hexpart)
    return out


def write_golden_file() -> None:
    GOLDEN_FILE.write_text(golden_text())
