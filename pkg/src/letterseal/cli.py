"""Command line front end: demos, attack scenarios, benchmarks, vectors.

Five subcommands: `demo` runs a seeded two-party conversation through the
in-process directory and relay, `attack` executes one scripted adversary
and exits zero only when the outcome matches the pinned expectation,
`bench` prints the timing and operation-count report, `vectors` emits or
checks the known-answer file, and `parse` decodes hex packet fixtures.

All output under a fixed seed is byte-stable except bench timing numbers.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import crypto_suite as cs
from .bench import MIN_ITERATIONS, PINNED_COUNTS, format_report, run_bench
from .directory_server import Honest, KeyDirectory, Relay
from .errors import LettersealError, ParseError
from .kat import check_file, format_vectors, canonical_vectors
from .linev1 import v1_decrypt, v1_encrypt, v1_establish
from .linev2 import v2_decrypt, v2_encrypt, v2_establish
from .linevdr import (
    vdr_decrypt,
    vdr_encrypt,
    vdr_init_sender,
    vdr_lazy_init_receiver,
)
from .mske import EXPECTED, attack_names, run_attack
from .wire import (
    EnvelopeV2,
    EnvelopeVDR,
    PacketMeta,
    classify_packet,
    decode_envelope,
    decode_packet,
    encode_envelope,
    parse_chunks,
)

_SEED_ENV = "LETTERSEAL_SEED"


def _resolve_seed(value: int | None) -> int:
    if value is None:
        value = int(os.environ.get(_SEED_ENV, "0"), 0)
    if not 0 <= value < 2**64:
        raise ValueError(f"seed must fit in u64, got {value}")
    return value


def _jsonable(value):
    if isinstance(value, bytes):
        return value.hex()
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, set, frozenset)):
        return [_jsonable(v) for v in value]
    if isinstance(value, (str, int, float, bool)) or value is None:
        return value
    return str(value)


def _emit(record: dict, fmt: str, text: str) -> None:
    if fmt == "json-lines":
        print(json.dumps(_jsonable(record), sort_keys=True))
    else:
        print(text)


# ---------------------------------------------------------------------------
# demo
# ---------------------------------------------------------------------------

def cmd_demo(protocol: str, messages: int, seed: int, fmt: str) -> int:
    """Two parties, one relay. v1/v2 stream one direction so the counter
    progression is visible; vdr alternates sender every two messages so
    each turn opens a fresh epoch."""
    rng = cs.SeededRng(seed)
    alice_rng = rng.fork(b"demo-alice")
    bob_rng = rng.fork(b"demo-bob")
    directory = KeyDirectory()
    relay = Relay(behavior=Honest())

    ska, pka = cs.dh_keygen(alice_rng)
    skb, pkb = cs.dh_keygen(bob_rng)
    kid_a = directory.register(pka, "alice")
    kid_b = directory.register(pkb, "bob")
    for kid, owner in ((kid_a, "alice"), (kid_b, "bob")):
        _emit({"type": "register", "kid": kid, "owner": owner}, fmt,
              f"registered {owner} under kid {kid}")

    if protocol in ("v1", "v2"):
        establish = v1_establish if protocol == "v1" else v2_establish
        sa = establish(ska, directory.lookup(kid_b), kid_self=kid_a,
                       kid_peer=kid_b, sid="alice", rid="bob")
        sb = establish(skb, directory.lookup(kid_a), kid_self=kid_b,
                       kid_peer=kid_a, sid="bob", rid="alice")
        for k in range(messages):
            pt = f"hello {k:02d}".encode()
            if protocol == "v1":
                env = v1_encrypt(sa, 0, pt, alice_rng)
            else:
                env = v2_encrypt(sa, 0, pt, alice_rng)
            wire_bytes = relay.relay(encode_envelope(env))[0]
            received = decode_envelope(wire_bytes)
            got = (v1_decrypt(sb, received) if protocol == "v1"
                   else v2_decrypt(sb, received))
            ok = got == pt
            stage = received.counter if isinstance(received, EnvelopeV2) else k
            label = "ctr" if protocol == "v2" else "msg"
            _emit({"type": "message", "ordinal": k, "sender": "alice",
                   "stage": stage, "size": len(wire_bytes),
                   "roundtrip": "ok" if ok else "FAIL"}, fmt,
                  f"alice -> bob  {label}={stage}  "
                  f"{len(wire_bytes)} wire bytes  "
                  f"roundtrip {'ok' if ok else 'FAIL'}")
            if not ok:
                return 1
        return 0

    # vdr: alternate sender every two messages, one epoch per turn
    alice = vdr_init_sender(ska, directory.lookup(kid_b), alice_rng,
                            kid_self=kid_a, kid_peer=kid_b)
    bob = None
    for k in range(messages):
        sender_is_alice = (k // 2) % 2 == 0
        if sender_is_alice:
            env = vdr_encrypt(alice, 0, f"hello {k:02d}".encode(), alice_rng)
        else:
            env = vdr_encrypt(bob, 0, f"hello {k:02d}".encode(), bob_rng)
        wire_bytes = relay.relay(encode_envelope(env))[0]
        received = decode_envelope(wire_bytes)
        assert isinstance(received, EnvelopeVDR)
        if sender_is_alice and bob is None:
            bob = vdr_lazy_init_receiver(skb, directory.lookup(kid_a),
                                         received, kid_self=kid_b,
                                         kid_peer=kid_a)
        receiver, receiver_rng = ((bob, bob_rng) if sender_is_alice
                                  else (alice, alice_rng))
        got = vdr_decrypt(receiver, received, receiver_rng)
        ok = got == f"hello {k:02d}".encode()
        sender = "alice" if sender_is_alice else "bob"
        target = "bob" if sender_is_alice else "alice"
        _emit({"type": "message", "ordinal": k, "sender": sender,
               "stage": [received.i_index, received.j_index],
               "size": len(wire_bytes),
               "roundtrip": "ok" if ok else "FAIL"}, fmt,
              f"{sender} -> {target}  epoch={received.i_index} "
              f"j={received.j_index}  {len(wire_bytes)} wire bytes  "
              f"roundtrip {'ok' if ok else 'FAIL'}")
        if not ok:
            return 1
    return 0


# ---------------------------------------------------------------------------
# attack
# ---------------------------------------------------------------------------

def cmd_attack(name: str, seed: int, fmt: str) -> int:
    report = run_attack(name, seed=seed)
    expected = EXPECTED[name]
    got = (report.succeeded, report.violated_freshness)
    as_expected = got == expected

    def yn(flag: bool) -> str:
        return "yes" if flag else "no"

    record = {
        "type": "attack_report",
        "name": report.name,
        "seed": seed,
        "succeeded": report.succeeded,
        "violated_freshness": report.violated_freshness,
        "expected_succeeded": expected[0],
        "expected_violated": expected[1],
        "as_expected": as_expected,
        "queries": len(report.trace),
        "details": report.details,
    }
    if fmt == "json-lines":
        print(json.dumps(_jsonable(record), sort_keys=True))
    else:
        print(f"attack {report.name} (seed {seed})")
        print(f"  succeeded:          {yn(report.succeeded)}"
              f"  (expected {yn(expected[0])})")
        print(f"  freshness violated: {yn(report.violated_freshness)}"
              f"  (expected {yn(expected[1])})")
        print(f"  oracle queries:     {len(report.trace)}")
        for key in sorted(report.details):
            print(f"  {key}: {_jsonable(report.details[key])}")
        print(f"  verdict: {'as expected' if as_expected else 'UNEXPECTED'}")
    return 0 if as_expected else 1


# ---------------------------------------------------------------------------
# bench
# ---------------------------------------------------------------------------

def cmd_bench(iterations: int, seed: int, fmt: str) -> int:
    report = run_bench(iterations=iterations, seed=seed)
    if fmt == "json-lines":
        for row in report["rows"]:
            print(json.dumps(_jsonable({
                "type": "bench_row", "scenario": row.scenario,
                "e2e_avg_us": round(row.e2e_avg, 3),
                "enc_avg_us": round(row.enc_avg, 3),
                "dec_avg_us": round(row.dec_avg, 3),
                "stddev_us": round(row.stddev, 3),
                "iterations": row.iterations,
            }), sort_keys=True))
        for scenario, rows in report["op_costs"].items():
            for r in rows:
                print(json.dumps(_jsonable({
                    "type": "op_cost", "scenario": scenario, "op": r.op,
                    "count_per_message": r.count_per_message,
                    "unit_cost_us": round(r.unit_cost, 3),
                    "pinned": PINNED_COUNTS[scenario][r.op],
                }), sort_keys=True))
    else:
        print(format_report(report))
    return 0


# ---------------------------------------------------------------------------
# vectors / parse
# ---------------------------------------------------------------------------

def cmd_vectors(out: str | None, check: str | None, fmt: str) -> int:
    if out is not None:
        vectors = canonical_vectors()
        with open(out, "w") as fh:
            fh.write(format_vectors(vectors))
        _emit({"type": "vectors_written", "path": out,
               "count": len(vectors)}, fmt,
              f"wrote {len(vectors)} vectors to {out}")
        return 0
    results = check_file(check)
    bad = 0
    for name, ok in results:
        bad += 0 if ok else 1
        _emit({"type": "vector", "name": name, "ok": ok}, fmt,
              f"{name:20s} {'OK' if ok else 'MISMATCH'}")
    _emit({"type": "vectors_checked", "total": len(results),
           "mismatches": bad}, fmt,
          f"{len(results)} vectors, {bad} mismatches")
    return 0 if bad == 0 else 1


def cmd_parse(path: str, fmt: str) -> int:
    failures = 0
    with open(path) as fh:
        lines = fh.read().splitlines()
    ordinal = 0
    for line in lines:
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        ordinal += 1
        try:
            packet = decode_packet(bytes.fromhex(line))
            cls = classify_packet(packet)
        except (LettersealError, ValueError) as exc:
            failures += 1
            _emit({"type": "parse_error", "ordinal": ordinal,
                   "error": str(exc)}, fmt,
                  f"packet {ordinal}: PARSE ERROR: {exc}")
            continue
        record = {"type": "packet", "ordinal": ordinal,
                  "class": cls.name,
                  "from": packet.from_, "to": packet.to,
                  "id": packet.id, "seq": packet.seq,
                  "e2ee_version": packet.e2ee_version,
                  "content_type": packet.content_type}
        lines_out = [f"packet {ordinal}: {cls.name}",
                     f"  from={packet.from_} to={packet.to} id={packet.id} "
                     f"seq={packet.seq} e2ee_version={packet.e2ee_version} "
                     f"content_type={packet.content_type}"]
        if isinstance(packet, PacketMeta):
            record["chunks"] = [len(c) for c in packet.chunks]
            lines_out.append(
                "  chunks: " + ", ".join(str(len(c)) for c in packet.chunks))
            if len(packet.chunks) == 5:
                salt, ct, nonce_seed, kid_a, kid_b = parse_chunks(packet.chunks)
                record["chunk_fields"] = {
                    "salt": salt, "ciphertext_len": len(ct),
                    "nonce_material": nonce_seed,
                    "kid_a": kid_a, "kid_b": kid_b}
                lines_out.append(
                    f"  salt={salt.hex()} ciphertext={len(ct)}B "
                    f"nonce_material={nonce_seed.hex()} "
                    f"kid_a={kid_a} kid_b={kid_b}")
        else:
            record["text"] = packet.text
            record["bot_origin"] = packet.bot_origin
            lines_out.append(f"  origin={packet.bot_origin!r} "
                             f"text={packet.text!r}")
        _emit(record, fmt, "\n".join(lines_out))
    if ordinal == 0:
        print(f"no packets found in {path}", file=sys.stderr)
        return 1
    return 0 if failures == 0 else 1


# ---------------------------------------------------------------------------
# argument wiring
# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="letterseal",
        description="Sealed-messaging protocols, attack scenarios and "
                    "benchmarks.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, iterations_default=None):
        p.add_argument("--seed", type=lambda v: int(v, 0), default=None,
                       help=f"u64 seed (default: ${_SEED_ENV} or 0)")
        p.add_argument("--format", choices=("text", "json-lines"),
                       default="text")
        if iterations_default is not None:
            p.add_argument("--iterations", type=int,
                           default=iterations_default)

    p_demo = sub.add_parser("demo", help="seeded two-party conversation")
    p_demo.add_argument("--protocol", choices=("v1", "v2", "vdr"),
                        default="vdr")
    common(p_demo, iterations_default=6)

    p_attack = sub.add_parser("attack", help="run one scripted adversary")
    p_attack.add_argument("name", choices=attack_names())
    common(p_attack)

    p_bench = sub.add_parser("bench", help="timing and op-count report")
    common(p_bench, iterations_default=MIN_ITERATIONS)

    p_vec = sub.add_parser("vectors", help="emit or check KAT vectors")
    group = p_vec.add_mutually_exclusive_group(required=True)
    group.add_argument("--out", help="write canonical vectors to this path")
    group.add_argument("--check", help="verify a vector file bit for bit")
    common(p_vec)

    p_parse = sub.add_parser("parse", help="decode hex packet fixtures")
    p_parse.add_argument("path")
    common(p_parse)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        seed = _resolve_seed(getattr(args, "seed", None))
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        if args.command == "demo":
            if args.iterations < 1:
                print("error: demo needs at least one message",
                      file=sys.stderr)
                return 2
            return cmd_demo(args.protocol, args.iterations, seed, args.format)
        if args.command == "attack":
            return cmd_attack(args.name, seed, args.format)
        if args.command == "bench":
            if args.iterations < MIN_ITERATIONS:
                print(f"error: bench needs --iterations >= {MIN_ITERATIONS}",
                      file=sys.stderr)
                return 2
            return cmd_bench(args.iterations, seed, args.format)
        if args.command == "vectors":
            return cmd_vectors(args.out, args.check, args.format)
        if args.command == "parse":
            return cmd_parse(args.path, args.format)
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    raise AssertionError(f"unhandled command {args.command}")


if __name__ == "__main__":
    sys.exit(main())
