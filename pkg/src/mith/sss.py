"""Shamir secret sharing for 5 parties with threshold 2.

Party i's share is the degree-2 polynomial s + a1*x + a2*x^2 evaluated
at x = i, for i in 1..5.  Reconstruction always interpolates all five
points with degree-4 weights, so it is total on F^5 and also recovers
the secret of the degree-4 product sharings that appear inside the
multiplication subprotocol.
"""

from __future__ import annotations

from dataclasses import dataclass

from mith.errors import FieldError
from mith.field import FieldElement, Modulus, RandomSource

N_PARTIES = 5
THRESHOLD = 2
PARTY_IDS = (1, 2, 3, 4, 5)

# All 10 unordered challenge pairs in lexicographic order.
PARTY_PAIRS = tuple(
    (i, j) for i in PARTY_IDS for j in PARTY_IDS if i < j
)


@dataclass(frozen=True)
class ShareRandomness:
    """Degree-1 and degree-2 coefficients of one sharing polynomial."""

    a1: FieldElement
    a2: FieldElement


@dataclass(frozen=True)
class Sharing:
    """One share per party, in party order 1..5."""

    shares: tuple[FieldElement, ...]

    def __post_init__(self):
        if len(self.shares) != N_PARTIES:
            raise FieldError(f"sharing needs {N_PARTIES} shares, got {len(self.shares)}")

    def __getitem__(self, pid: int) -> FieldElement:
        return self.shares[pid - 1]

    @property
    def modulus(self) -> Modulus:
        return self.shares[0].modulus

    def values(self) -> tuple[int, ...]:
        return tuple(s.value for s in self.shares)

    def to_bytes(self) -> bytes:
        """Five fixed-width element encodings in party order."""
        return b"".join(s.to_bytes() for s in self.shares)

    @classmethod
    def from_bytes(cls, m: Modulus, data: bytes) -> "Sharing":
        w = m.byte_length
        if len(data) != N_PARTIES * w:
            raise FieldError(
                f"sharing encoding must be {N_PARTIES * w} bytes, got {len(data)}")
        return cls(tuple(
            m.from_bytes(data[k * w:(k + 1) * w]) for k in range(N_PARTIES)))


def random_share_randomness(rng: RandomSource, m: Modulus) -> ShareRandomness:
    return ShareRandomness(rng.field_element(m), rng.field_element(m))


def share(s: FieldElement, r: ShareRandomness) -> Sharing:
    m = s.modulus
    vals = m.ops.share5(s.value, r.a1.value, r.a2.value, m.p)
    return Sharing(tuple(FieldElement(v, m) for v in vals))


def reconstruct(sh: Sharing) -> FieldElement:
    m = sh.modulus
    v = m.ops.dot5(m.recon_weights, sh.values(), m.p)
    return FieldElement(v, m)


def public_encoding(v: FieldElement) -> Sharing:
    """Constant sharing of a public value."""
    return Sharing((v,) * N_PARTIES)


def pub_reconstruct(pid: int, sh: FieldElement) -> FieldElement:
    return sh


def share_sim(rng: RandomSource, corrupt: tuple[int, int], m: Modulus) -> tuple[FieldElement, FieldElement]:
    """Simulated pair of shares for two corrupt parties.

    For any secret, the joint share distribution of any two parties is
    uniform on F^2, so two independent uniform draws are a perfect
    simulation.
    """
    i, j = corrupt
    if i == j:
        raise FieldError("corrupt parties must be distinct")
    return rng.field_element(m), rng.field_element(m)
