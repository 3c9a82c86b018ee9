"""Commitment schemes over canonically encoded party views.

Two instantiations: an HMAC-SHA256 commitment (one digest per view,
opening = the 32-byte key) and an element-wise Pedersen commitment in a
prime-order subgroup of Z_P* (one group element per view field element,
opening = the blinder vector).  The asymmetry is deliberate: the PRF
scheme hashes the whole encoded view at once, Pedersen pays a pair of
group exponentiations per element.
"""

from __future__ import annotations

import hmac
import hashlib
from dataclasses import dataclass
from typing import Sequence

from mith.errors import MithError
from mith.field import RandomSource, is_probable_prime

PRF_KEY_LEN = 32
DIGEST_LEN = 32


def prf_commit(key: bytes, message: bytes) -> tuple[bytes, bytes]:
    """Commitment = HMAC-SHA256(key, message); opening = key."""
    if len(key) != PRF_KEY_LEN:
        raise MithError(f"PRF commit key must be {PRF_KEY_LEN} bytes")
    return hmac.new(key, message, hashlib.sha256).digest(), key


def prf_verify(message: bytes, commitment: bytes, opening: bytes) -> bool:
    if len(opening) != PRF_KEY_LEN or len(commitment) != DIGEST_LEN:
        return False
    return hmac.compare_digest(
        hmac.new(opening, message, hashlib.sha256).digest(), commitment)


@dataclass(frozen=True)
class PedersenParams:
    """Schnorr-style subgroup: generators g, h of prime order q in Z_P*."""

    group_prime: int
    order: int
    g: int
    h: int

    def __post_init__(self):
        P, q, g, h = self.group_prime, self.order, self.g, self.h
        if not is_probable_prime(P):
            raise MithError("Pedersen group prime P is not prime")
        if not is_probable_prime(q):
            raise MithError("Pedersen subgroup order q is not prime")
        if (P - 1) % q != 0:
            raise MithError("Pedersen order q does not divide P-1")
        for name, x in (("g", g), ("h", h)):
            if not 1 < x < P:
                raise MithError(f"Pedersen generator {name} out of range")
            if pow(x, q, P) != 1:
                raise MithError(f"Pedersen generator {name} does not have order q")
        if g == h:
            raise MithError("Pedersen generators must be distinct")

    @property
    def element_bytes(self) -> int:
        return (self.group_prime.bit_length() + 7) // 8

    @classmethod
    def from_text(cls, text: str) -> "PedersenParams":
        vals = [int(v) for v in text.split()]
        if len(vals) != 4:
            raise MithError("Pedersen params file needs 4 decimals: P q g h")
        return cls(*vals)

    def to_text(self) -> str:
        return f"{self.group_prime}\n{self.order}\n{self.g}\n{self.h}\n"


def pedersen_commit(params: PedersenParams, blinders: Sequence[int],
                    msg: Sequence[int]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Element-wise c_i = g^m_i * h^r_i mod P; opening = blinders."""
    if len(blinders) != len(msg):
        raise MithError(
            f"need one blinder per element: {len(blinders)} vs {len(msg)}")
    P, q = params.group_prime, params.order
    for v in msg:
        if not 0 <= v < q:
            raise MithError(f"committed value {v} not below group order")
    cs = tuple(
        pow(params.g, v, P) * pow(params.h, r % q, P) % P
        for v, r in zip(msg, blinders)
    )
    return cs, tuple(r % q for r in blinders)


def pedersen_verify(params: PedersenParams, msg: Sequence[int],
                    commitment: Sequence[int], opening: Sequence[int]) -> bool:
    if len(msg) != len(commitment) or len(msg) != len(opening):
        return False
    try:
        recomputed, _ = pedersen_commit(params, opening, msg)
    except MithError:
        return False
    return tuple(commitment) == recomputed


# Shipped parameter sets.  The 64-bit group is deliberately tiny so tests
# can cross-check exponentiation against a naive oracle; the 257-bit group
# has q > 2^256 so any shipped field preset fits.  Neither is hardened for
# production use.
TEST_GROUP_64 = PedersenParams(
    group_prime=4294967387,
    order=2147483693,
    g=4,
    h=9,
)

BENCH_GROUP_257 = PedersenParams(
    group_prime=95644265710023177419869633617176211886801007333819105896591964390536245082832459,
    order=115792089237316195423570985008687907853269984665640564039457584007913129640233,
    g=31928947829963435951804009826220012569408962358774800608384794276299486007020642,
    h=83411703274934786478899154415020041077440611362202044731496127736458924436078967,
)


def group_for_modulus(p: int) -> PedersenParams:
    """Smallest shipped group whose order fits the committed field."""
    if p <= TEST_GROUP_64.order:
        return TEST_GROUP_64
    if p <= BENCH_GROUP_257.order:
        return BENCH_GROUP_257
    raise MithError(
        f"no shipped Pedersen group fits modulus of {p.bit_length()} bits; "
        "load custom params")


# ---------------------------------------------------------------------------
# View-level scheme objects used by the proof protocol.  The PRF scheme
# commits to the view's canonical byte encoding; Pedersen commits to its
# field-element sequence.


class PrfScheme:
    name = "prf"
    scheme_byte = 0x01

    def keygen(self, rng: RandomSource, n_elements: int) -> bytes:
        return rng.bytes(PRF_KEY_LEN)

    def commit_view(self, key, view_bytes: bytes, elements: Sequence[int]):
        return prf_commit(key, view_bytes)

    def verify_view(self, view_bytes: bytes, elements: Sequence[int],
                    commitment, opening) -> bool:
        return prf_verify(view_bytes, commitment, opening)

    def dummy_commitment(self, key, encoded_len: int, n_elements: int):
        return prf_commit(key, bytes(encoded_len))[0]

    def serialize_commitment(self, c) -> bytes:
        return c

    def parse_commitment(self, data: bytes):
        if len(data) != DIGEST_LEN:
            raise MithError("PRF commitment must be 32 bytes")
        return data

    def serialize_opening(self, o) -> bytes:
        return o

    def parse_opening(self, data: bytes):
        if len(data) != PRF_KEY_LEN:
            raise MithError("PRF opening must be 32 bytes")
        return data


class PedersenScheme:
    name = "pedersen"
    scheme_byte = 0x02

    def __init__(self, params: PedersenParams):
        self.params = params

    def keygen(self, rng: RandomSource, n_elements: int) -> tuple[int, ...]:
        return tuple(rng.randbelow(self.params.order) for _ in range(n_elements))

    def commit_view(self, key, view_bytes: bytes, elements: Sequence[int]):
        return pedersen_commit(self.params, key, elements)

    def verify_view(self, view_bytes: bytes, elements: Sequence[int],
                    commitment, opening) -> bool:
        return pedersen_verify(self.params, elements, commitment, opening)

    def dummy_commitment(self, key, encoded_len: int, n_elements: int):
        return pedersen_commit(self.params, key, (0,) * n_elements)[0]

    def serialize_commitment(self, c) -> bytes:
        w = self.params.element_bytes
        out = [len(c).to_bytes(4, "big")]
        out += [v.to_bytes(w, "big") for v in c]
        return b"".join(out)

    def parse_commitment(self, data: bytes):
        w = self.params.element_bytes
        if len(data) < 4:
            raise MithError("truncated Pedersen commitment")
        n = int.from_bytes(data[:4], "big")
        if len(data) != 4 + n * w:
            raise MithError("Pedersen commitment length mismatch")
        vals = tuple(
            int.from_bytes(data[4 + k * w:4 + (k + 1) * w], "big") for k in range(n))
        if any(not 0 < v < self.params.group_prime for v in vals):
            raise MithError("Pedersen commitment element out of range")
        return vals

    def serialize_opening(self, o) -> bytes:
        w = (self.params.order.bit_length() + 7) // 8
        out = [len(o).to_bytes(4, "big")]
        out += [v.to_bytes(w, "big") for v in o]
        return b"".join(out)

    def parse_opening(self, data: bytes):
        w = (self.params.order.bit_length() + 7) // 8
        if len(data) < 4:
            raise MithError("truncated Pedersen opening")
        n = int.from_bytes(data[:4], "big")
        if len(data) != 4 + n * w:
            raise MithError("Pedersen opening length mismatch")
        return tuple(
            int.from_bytes(data[4 + k * w:4 + (k + 1) * w], "big") for k in range(n))


def scheme_by_name(name: str, modulus_p: int | None = None):
    if name == "prf":
        return PrfScheme()
    if name == "pedersen":
        return PedersenScheme(group_for_modulus(modulus_p))
    raise MithError(f"unknown commitment scheme {name!r}")


def scheme_by_byte(b: int, modulus_p: int | None = None):
    if b == PrfScheme.scheme_byte:
        return PrfScheme()
    if b == PedersenScheme.scheme_byte:
        return PedersenScheme(group_for_modulus(modulus_p))
    raise MithError(f"unknown commitment scheme byte {b:#x}")
