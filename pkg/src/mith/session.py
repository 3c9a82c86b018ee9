"""Interactive 3-pass execution over a reliable byte stream.

Framing: 4-byte big-endian payload length, 1-byte message type, payload.
Phases advance strictly HELLO -> COMMIT -> CHALLENGE -> RESPONSE ->
RESULT; any out-of-order or unknown frame aborts the session.  The
verifier draws its challenges only after the full COMMIT payload has
arrived.  Repetitions are batched, one frame per phase, so a session is
three round trips regardless of sigma.

The CHALLENGE payload carries a SHA-256 digest of the COMMIT payload the
verifier received, ahead of the sigma challenge bytes; the prover aborts
on mismatch.  Without that echo a bit flipped in flight inside one of
the three unopened commitments would go unnoticed, since the verifier
only ever opens two of the five.
"""

from __future__ import annotations

import hashlib
import socket
from dataclasses import dataclass

from mith import mpc
from mith import protocol as proto
from mith.circuit import Statement, Witness, statement_hash
from mith.commit import scheme_by_byte, scheme_by_name
from mith.errors import MithError, ProofError, SessionError
from mith.field import RandomSource
from mith.sss import PARTY_PAIRS

MSG_HELLO = 0x01
MSG_COMMIT = 0x02
MSG_CHALLENGE = 0x03
MSG_RESPONSE = 0x04
MSG_RESULT = 0x05
MSG_ERROR = 0x7F

_KNOWN_TYPES = {MSG_HELLO, MSG_COMMIT, MSG_CHALLENGE, MSG_RESPONSE,
                MSG_RESULT, MSG_ERROR}

MAX_PAYLOAD = 1 << 24
PROTOCOL_VERSION = 0x01
DEFAULT_TIMEOUT = 30.0

ERR_HASH_MISMATCH = 1
ERR_BAD_FRAME = 2
ERR_PHASE = 3
ERR_INTERNAL = 4


@dataclass(frozen=True)
class Frame:
    msg_type: int
    payload: bytes


def encode_frame(f: Frame) -> bytes:
    if len(f.payload) > MAX_PAYLOAD:
        raise SessionError(
            f"payload of {len(f.payload)} bytes exceeds the "
            f"{MAX_PAYLOAD}-byte cap", "encode")
    if f.msg_type not in _KNOWN_TYPES:
        raise SessionError(f"unknown frame type {f.msg_type:#x}", "encode")
    return len(f.payload).to_bytes(4, "big") + bytes([f.msg_type]) + f.payload


class Transport:
    """Ordered reliable byte stream with a deadline; binds to a socket."""

    def __init__(self, sock: socket.socket, timeout: float = DEFAULT_TIMEOUT):
        self._sock = sock
        self._sock.settimeout(timeout)

    def send_all(self, data: bytes) -> None:
        try:
            self._sock.sendall(data)
        except OSError as e:
            raise SessionError(f"send failed: {e}", "transport") from None

    def recv_exactly(self, n: int) -> bytes:
        chunks = []
        got = 0
        while got < n:
            try:
                chunk = self._sock.recv(n - got)
            except socket.timeout:
                raise SessionError("timed out waiting for peer", "transport") from None
            except OSError as e:
                raise SessionError(f"receive failed: {e}", "transport") from None
            if not chunk:
                raise SessionError("connection closed mid-frame", "transport")
            chunks.append(chunk)
            got += len(chunk)
        return b"".join(chunks)

    def close(self) -> None:
        self._sock.close()


def decode_frame(transport: Transport) -> Frame:
    """Read exactly one frame (5 + length bytes) from the stream."""
    header = transport.recv_exactly(5)
    length = int.from_bytes(header[:4], "big")
    if length > MAX_PAYLOAD:
        raise SessionError(f"frame length {length} exceeds cap", "decode")
    msg_type = header[4]
    if msg_type not in _KNOWN_TYPES:
        raise SessionError(f"unknown frame type {msg_type:#x}", "decode")
    payload = transport.recv_exactly(length) if length else b""
    return Frame(msg_type, payload)


def _send(transport: Transport, msg_type: int, payload: bytes) -> None:
    transport.send_all(encode_frame(Frame(msg_type, payload)))


def _send_error(transport: Transport, code: int, message: str) -> None:
    try:
        _send(transport, MSG_ERROR,
              code.to_bytes(2, "big") + message.encode("utf-8"))
    except SessionError:
        pass


def _expect(transport: Transport, msg_type: int, phase: str) -> bytes:
    frame = decode_frame(transport)
    if frame.msg_type == MSG_ERROR:
        code = int.from_bytes(frame.payload[:2], "big")
        text = frame.payload[2:].decode("utf-8", "replace")
        raise SessionError(f"peer error {code}: {text}", phase)
    if frame.msg_type != msg_type:
        raise SessionError(
            f"expected frame type {msg_type:#x}, got {frame.msg_type:#x}", phase)
    return frame.payload


def _hello_payload(scheme_byte: int, reps: int, digest: bytes) -> bytes:
    return (bytes([PROTOCOL_VERSION, scheme_byte])
            + reps.to_bytes(4, "big") + digest)


def _parse_hello(payload: bytes, phase: str):
    if len(payload) != 38:
        raise SessionError(f"hello payload must be 38 bytes, got {len(payload)}", phase)
    if payload[0] != PROTOCOL_VERSION:
        raise SessionError(f"unsupported protocol version {payload[0]}", phase)
    return payload[1], int.from_bytes(payload[2:6], "big"), payload[6:]


def prover_session(transport: Transport, s: Statement, w: Witness, reps: int,
                   scheme=None, rng: RandomSource | None = None) -> bool:
    """Drive the prover side; returns the verifier's verdict."""
    if reps < 1:
        raise MithError("repetition count must be at least 1")
    scheme = scheme or scheme_by_name("prf")
    rng = rng or RandomSource()
    digest = statement_hash(s)
    c = s.circuit

    _send(transport, MSG_HELLO, _hello_payload(scheme.scheme_byte, reps, digest))
    ack_scheme, ack_reps, ack_digest = _parse_hello(
        _expect(transport, MSG_HELLO, "hello"), "hello")
    if (ack_scheme, ack_reps, ack_digest) != (scheme.scheme_byte, reps, digest):
        _send_error(transport, ERR_HASH_MISMATCH, "hello parameter mismatch")
        raise SessionError("peer acknowledged different parameters", "hello")

    states = []
    blobs = []
    for _ in range(reps):
        rp = proto.random_prover_rand(rng, c, scheme)
        st, cm = proto.prover_commit(rp, w, s, scheme)
        states.append(st)
        blobs.append(proto.serialize_commitment_msg(cm, scheme))
    commit_payload = b"".join(blobs)
    _send(transport, MSG_COMMIT, commit_payload)

    ch_payload = _expect(transport, MSG_CHALLENGE, "challenge")
    if len(ch_payload) != 32 + reps:
        raise SessionError("malformed challenge payload", "challenge")
    if ch_payload[:32] != hashlib.sha256(commit_payload).digest():
        _send_error(transport, ERR_BAD_FRAME,
                    "commit payload digest mismatch")
        raise SessionError(
            "verifier echoed a different commit payload", "challenge")
    challenge_bytes = ch_payload[32:]
    if any(b >= proto.N_CHALLENGES for b in challenge_bytes):
        raise SessionError("challenge byte out of range", "challenge")
    out = []
    for k, b in enumerate(challenge_bytes):
        resp = proto.prover_respond(states[k], PARTY_PAIRS[b])
        for view, opening in (resp.first, resp.second):
            out.append(proto.serialize_response_block(c, view, opening, scheme))
    _send(transport, MSG_RESPONSE, b"".join(out))

    result = _expect(transport, MSG_RESULT, "result")
    if len(result) != 1 or result[0] > 1:
        raise SessionError("malformed result payload", "result")
    return bool(result[0])


def verifier_session(transport: Transport, s: Statement, reps: int,
                     rng: RandomSource | None = None,
                     capture: list | None = None) -> bool:
    """Drive the verifier side; challenges are drawn only after the full
    COMMIT payload has arrived.  Malformed proof data rejects (verdict
    False); protocol violations raise.  When capture is a list, the
    accepted frames are also assembled into a transcript-mode Proof and
    appended to it."""
    if reps < 1:
        raise MithError("repetition count must be at least 1")
    rng = rng or RandomSource()
    digest = statement_hash(s)
    c = s.circuit

    scheme_byte, peer_reps, peer_digest = _parse_hello(
        _expect(transport, MSG_HELLO, "hello"), "hello")
    if peer_digest != digest:
        _send_error(transport, ERR_HASH_MISMATCH, "statement hash mismatch")
        raise SessionError("peer proves a different statement", "hello")
    if peer_reps != reps:
        _send_error(transport, ERR_PHASE, "repetition count mismatch")
        raise SessionError(
            f"peer wants {peer_reps} repetitions, we want {reps}", "hello")
    try:
        scheme = scheme_by_byte(scheme_byte, c.modulus.p)
    except MithError as e:
        _send_error(transport, ERR_BAD_FRAME, str(e))
        raise SessionError(str(e), "hello") from None
    _send(transport, MSG_HELLO, _hello_payload(scheme_byte, reps, digest))

    commit_payload = _expect(transport, MSG_COMMIT, "commit")
    commit_digest = hashlib.sha256(commit_payload).digest()
    rd = mpc._Reader(commit_payload)
    verdict = True
    msgs = []
    try:
        for _ in range(reps):
            commitments = tuple(
                scheme.parse_commitment(rd.take(rd.u32())) for _ in range(5))
            msgs.append(proto.CommitmentMsg(commitments))
        if not rd.done():
            raise ProofError("trailing bytes in commit payload")
    except (ProofError, MithError):
        # Malformed proof data: finish the session with a reject verdict.
        _send(transport, MSG_CHALLENGE, commit_digest + bytes(reps))
        _expect(transport, MSG_RESPONSE, "response")
        _send(transport, MSG_RESULT, b"\x00")
        return False

    # Commit phase fully received: only now draw the challenges.
    challenge_idx = [rng.randbelow(proto.N_CHALLENGES) for _ in range(reps)]
    _send(transport, MSG_CHALLENGE, commit_digest + bytes(challenge_idx))

    resp_payload = _expect(transport, MSG_RESPONSE, "response")
    rd = mpc._Reader(resp_payload)
    transcripts = []
    try:
        for k in range(reps):
            ch = PARTY_PAIRS[challenge_idx[k]]
            pairs = []
            for _ in range(2):
                view = mpc.decode_view(c, rd.take(rd.u32()))
                opening = scheme.parse_opening(rd.take(rd.u32()))
                pairs.append((view, opening))
            transcripts.append(proto.Transcript(
                msgs[k], ch, proto.Response(pairs[0], pairs[1])))
        if not rd.done():
            raise ProofError("trailing bytes in response payload")
    except (ProofError, MithError):
        verdict = False
        transcripts = []

    if verdict:
        for t in transcripts:
            st = proto.VerifierState(s, t.commitment, t.challenge, scheme)
            if not proto.verifier_check(st, t.response, scheme):
                verdict = False
                break

    if capture is not None and transcripts:
        capture.append(proto.Proof(scheme.name, "transcript", digest,
                                   tuple(transcripts)))
    _send(transport, MSG_RESULT, b"\x01" if verdict else b"\x00")
    return verdict


# ---------------------------------------------------------------------------
# TCP endpoints


def connect(host: str, port: int, timeout: float = DEFAULT_TIMEOUT) -> Transport:
    try:
        sock = socket.create_connection((host, port), timeout=timeout)
    except OSError as e:
        raise SessionError(f"connect to {host}:{port} failed: {e}", "connect") from None
    return Transport(sock, timeout)


def listen_once(host: str, port: int, timeout: float = DEFAULT_TIMEOUT) -> Transport:
    """Accept a single connection and hand back its transport."""
    srv = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    srv.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
    try:
        srv.bind((host, port))
        srv.listen(1)
        srv.settimeout(timeout)
        conn, _ = srv.accept()
    except OSError as e:
        raise SessionError(f"listen on {host}:{port} failed: {e}", "listen") from None
    finally:
        srv.close()
    return Transport(conn, timeout)
