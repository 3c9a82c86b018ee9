"""Command-line driver: prove, verify, interactive sessions, self-tests
and benchmarks.

Exit codes: 0 success/accept, 1 proof rejected, 2 usage or validation
error, 3 I/O error, 4 session failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from mith import bench as bench_mod
from mith import harness
from mith import protocol as proto
from mith import session as session_mod
from mith.circuit import (
    Statement, parse_circuit, parse_statement, parse_witness,
    statement_circuit_path, statement_hash,
)
from mith.commit import scheme_by_name
from mith.errors import CircuitError, CircuitParseError, MithError, ProofError, SessionError
from mith.field import RandomSource, preset_modulus

EXIT_OK = 0
EXIT_REJECT = 1
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_SESSION = 4


def _read(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        raise _IOFailure(f"cannot read {path}: {e}") from None


def _read_bytes(path: str) -> bytes:
    try:
        with open(path, "rb") as fh:
            return fh.read()
    except OSError as e:
        raise _IOFailure(f"cannot read {path}: {e}") from None


def _write_bytes(path: str, data: bytes) -> None:
    try:
        with open(path, "wb") as fh:
            fh.write(data)
    except OSError as e:
        raise _IOFailure(f"cannot write {path}: {e}") from None


class _IOFailure(Exception):
    pass


def _load_statement(args) -> Statement:
    stmt_text = _read(args.statement)
    circuit_path = args.circuit or statement_circuit_path(stmt_text)
    if circuit_path is None:
        raise CircuitError(
            "statement file has no 'circuit' line; pass --circuit")
    if not os.path.isabs(circuit_path) and args.circuit is None:
        circuit_path = os.path.join(os.path.dirname(args.statement) or ".",
                                    circuit_path)
    circuit = parse_circuit(_read(circuit_path))
    return parse_statement(stmt_text, circuit)


def _rng_from(args) -> RandomSource:
    if args.seed is not None and not args.insecure_seed:
        raise MithError("--seed requires --insecure-seed (test use only)")
    return RandomSource(args.seed)


def _endpoint(spec: str) -> tuple[str, int]:
    host, _, port = spec.rpartition(":")
    return host or "127.0.0.1", int(port)


def cmd_prove(args) -> int:
    s = _load_statement(args)
    w = parse_witness(_read(args.witness), s.circuit)
    if args.reps < 1:
        print("error: --reps must be at least 1", file=sys.stderr)
        return EXIT_USAGE
    scheme = scheme_by_name(args.scheme, s.circuit.modulus.p)
    rng = _rng_from(args)
    import time
    t0 = time.perf_counter()
    if args.mode == "session":
        if not args.connect:
            print("error: session mode needs --connect host:port", file=sys.stderr)
            return EXIT_USAGE
        host, port = _endpoint(args.connect)
        transport = session_mod.connect(host, port, args.timeout)
        try:
            verdict = session_mod.prover_session(
                transport, s, w, args.reps, scheme, rng)
        finally:
            transport.close()
        elapsed = (time.perf_counter() - t0) * 1000
        print(f"reps={args.reps} scheme={args.scheme} mode=session "
              f"time={elapsed:.1f}ms verdict={'accept' if verdict else 'reject'}")
        return EXIT_OK if verdict else EXIT_REJECT
    proof = proto.prove_repeated(w, s, args.reps, rng, scheme, mode="derived")
    blob = proto.serialize_proof(proof, s.circuit)
    if not args.out:
        print("error: --out is required unless --mode session", file=sys.stderr)
        return EXIT_USAGE
    _write_bytes(args.out, blob)
    elapsed = (time.perf_counter() - t0) * 1000
    print(f"reps={args.reps} scheme={args.scheme} mode=derived "
          f"bytes={len(blob)} time={elapsed:.1f}ms "
          f"soundness<={proto.soundness_bound(args.reps):.3g}")
    print("note: derived (hash-based) challenges extend the interactive "
          "protocol; the proven bounds cover the interactive modes")
    return EXIT_OK


def cmd_verify(args) -> int:
    s = _load_statement(args)
    if args.mode == "session":
        if not args.listen:
            print("error: session mode needs --listen host:port", file=sys.stderr)
            return EXIT_USAGE
        host, port = _endpoint(args.listen)
        rng = _rng_from(args)
        transport = session_mod.listen_once(host, port, args.timeout)
        try:
            verdict = session_mod.verifier_session(transport, s, args.reps, rng)
        finally:
            transport.close()
        print(f"session verdict: {'accept' if verdict else 'reject'}")
        return EXIT_OK if verdict else EXIT_REJECT
    if not args.proof:
        print("error: --proof is required unless --mode session", file=sys.stderr)
        return EXIT_USAGE
    blob = _read_bytes(args.proof)
    try:
        proof = proto.parse_proof(blob, s.circuit)
    except (ProofError, MithError) as e:
        print(f"reject: malformed proof: {e}")
        return EXIT_REJECT
    if args.verbose:
        scheme = scheme_by_name(proof.scheme, s.circuit.modulus.p)
        digest_ok = proof.stmt_hash == statement_hash(s)
        print(f"statement hash match: {digest_ok}")
        blobs = [proto.serialize_commitment_msg(t.commitment, scheme)
                 for t in proof.transcripts]
        for k, t in enumerate(proof.transcripts):
            st = proto.VerifierState(s, t.commitment, t.challenge, scheme)
            ok = proto.verifier_check(st, t.response, scheme)
            ch_ok = (proof.challenge_mode != "derived"
                     or t.challenge == proto.derive_challenge(proof.stmt_hash, k, blobs))
            print(f"  repetition {k}: challenge {t.challenge} "
                  f"check={'ok' if ok else 'FAIL'} "
                  f"challenge-source={'ok' if ch_ok else 'FAIL'}")
    verdict = proto.verify_repeated(s, proof)
    if proof.challenge_mode == "derived":
        print("challenge mode: derived (hash-based; outside the proven "
              "interactive bounds)")
    print("accept" if verdict else "reject")
    return EXIT_OK if verdict else EXIT_REJECT


def cmd_selftest(args) -> int:
    rng_seed = args.seed
    if rng_seed is not None and not args.insecure_seed:
        raise MithError("--seed requires --insecure-seed (test use only)")
    scale = 0.05 if args.quick else 1.0
    reports = harness.run_all(seed=rng_seed, scale=scale)
    for r in reports:
        print(r.line())
    if args.json:
        doc = {"reports": [r.to_dict() for r in reports],
               "all_pass": all(r.verdict == "pass" for r in reports)}
        _write_bytes(args.json, json.dumps(doc, indent=2).encode())
        print(f"wrote {args.json}")
    ok = all(r.verdict == "pass" for r in reports)
    print("selftest:", "PASS" if ok else "FAIL")
    return EXIT_OK if ok else EXIT_REJECT


def cmd_bench(args) -> int:
    rng = RandomSource(args.seed if args.seed is not None else 7)
    rows = []
    if args.kernels:
        rows += bench_mod.bench_kernels(rng)
    else:
        preset = os.environ.get("MITH_FIELD_PRESET")
        if preset:
            m = preset_modulus(preset)
            rows += bench_mod.bench_primitives(m, rng)
            from mith.corpus import bench_circuit_a, bench_circuit_b
            for circuit in (bench_circuit_a(), bench_circuit_b()):
                for scheme_name in ("prf", "pedersen"):
                    rows.append(bench_mod.bench_mith(circuit, rng, scheme_name))
        else:
            rows += bench_mod.standard_bench(rng, quick=args.quick)
    print(bench_mod.format_rows(rows))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="mith",
        description="Zero-knowledge proofs for arithmetic circuits by "
                    "emulating a 5-party computation in the head.")
    sub = ap.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None,
                        help="deterministic randomness (test use only)")
    common.add_argument("--insecure-seed", action="store_true",
                        help="acknowledge that a fixed seed voids security")

    p = sub.add_parser("prove", parents=[common], help="produce a proof")
    p.add_argument("--circuit", help="circuit file (.arith)")
    p.add_argument("--statement", required=True, help="statement file")
    p.add_argument("--witness", required=True, help="witness file")
    p.add_argument("--out", help="proof output path")
    p.add_argument("--reps", type=int, default=40,
                   help="repetitions (default 40, soundness <= 0.0148)")
    p.add_argument("--scheme", choices=["prf", "pedersen"], default="prf")
    p.add_argument("--mode", choices=["derived", "session"], default="derived")
    p.add_argument("--connect", help="verifier endpoint host:port")
    p.add_argument("--timeout", type=float, default=30.0)
    p.set_defaults(func=cmd_prove)

    v = sub.add_parser("verify", parents=[common], help="check a proof")
    v.add_argument("--circuit", help="circuit file (.arith)")
    v.add_argument("--statement", required=True)
    v.add_argument("--proof", help="proof file to verify")
    v.add_argument("--mode", choices=["offline", "session"], default="offline")
    v.add_argument("--listen", help="bind endpoint host:port")
    v.add_argument("--reps", type=int, default=40,
                   help="expected repetitions (session mode)")
    v.add_argument("--timeout", type=float, default=30.0)
    v.add_argument("--verbose", action="store_true",
                   help="print per-repetition verdicts")
    v.set_defaults(func=cmd_verify)

    st = sub.add_parser("selftest", parents=[common],
                        help="run the full experiment harness")
    st.add_argument("--quick", action="store_true",
                    help="reduced trial counts")
    st.add_argument("--json", help="also write a machine-readable report")
    st.set_defaults(func=cmd_selftest)

    b = sub.add_parser("bench", parents=[common], help="run benchmarks")
    b.add_argument("--kernels", action="store_true",
                   help="compare compiled and pure kernel backends")
    b.add_argument("--quick", action="store_true")
    b.set_defaults(func=cmd_bench)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CircuitParseError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (CircuitError, MithError) as e:
        if isinstance(e, SessionError):
            print(f"session error: {e}", file=sys.stderr)
            return EXIT_SESSION
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except _IOFailure as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
