"""Prime-field arithmetic, interpolation and randomness sources.

Field elements are immutable and fully reduced; mixing elements of
different moduli raises FieldError.  Serialization is fixed-width
big-endian with width ceil(bits(p)/8).
"""

from __future__ import annotations

import hashlib
import secrets

from mith import _core
from mith.errors import FieldError

# Small primes for quick trial division before Miller-Rabin.
_SMALL_PRIMES = (
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61,
    67, 71, 73, 79, 83, 89, 97, 101, 103, 107, 109, 113, 127, 131, 137,
    139, 149, 151, 157, 163, 167, 173, 179, 181, 191, 193, 197, 199,
)

# Below this bound the listed witness set is a deterministic primality proof.
_DETERMINISTIC_BOUND = 3317044064679887385961981
_DETERMINISTIC_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def _miller_rabin_round(n: int, a: int, d: int, r: int) -> bool:
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(r - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def is_probable_prime(n: int, rounds: int = 64) -> bool:
    """Miller-Rabin with error probability below 4^-rounds."""
    if n < 2:
        return False
    for q in _SMALL_PRIMES:
        if n == q:
            return True
        if n % q == 0:
            return False
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    if n < _DETERMINISTIC_BOUND:
        bases = _DETERMINISTIC_BASES
    else:
        bases = [2] + [secrets.randbelow(n - 3) + 2 for _ in range(rounds - 1)]
    return all(_miller_rabin_round(n, a, d, r) for a in bases)


class Modulus:
    """A prime modulus p >= 11, primality-checked at construction."""

    __slots__ = ("p", "byte_length", "ops", "recon_weights")

    def __init__(self, p: int):
        if p < 11:
            raise FieldError(f"modulus must be at least 11, got {p}")
        if p % 2 == 0 or not is_probable_prime(p):
            raise FieldError(f"modulus {p} is not an odd prime")
        self.p = p
        self.byte_length = (p.bit_length() + 7) // 8
        self.ops = _core.ops_for(p)
        # Degree-4 recombination weights at 0 for evaluation points 1..5.
        self.recon_weights = self.ops.lagrange_weights((1, 2, 3, 4, 5), p)

    def element(self, value: int) -> FieldElement:
        return FieldElement(value % self.p, self)

    def zero(self) -> FieldElement:
        return FieldElement(0, self)

    def one(self) -> FieldElement:
        return FieldElement(1, self)

    def from_bytes(self, data: bytes) -> FieldElement:
        if len(data) != self.byte_length:
            raise FieldError(
                f"expected {self.byte_length} bytes, got {len(data)}")
        v = int.from_bytes(data, "big")
        if v >= self.p:
            raise FieldError("encoded value exceeds modulus")
        return FieldElement(v, self)

    def __eq__(self, other):
        return isinstance(other, Modulus) and other.p == self.p

    def __hash__(self):
        return hash(self.p)

    def __repr__(self):
        return f"Modulus({self.p})"


class FieldElement:
    """Immutable value in [0, p) tied to its modulus."""

    __slots__ = ("value", "modulus")

    def __init__(self, value: int, modulus: Modulus):
        object.__setattr__(self, "value", value)
        object.__setattr__(self, "modulus", modulus)

    def __setattr__(self, name, val):
        raise AttributeError("FieldElement is immutable")

    def _check(self, other: FieldElement) -> None:
        if not isinstance(other, FieldElement):
            raise TypeError(f"expected FieldElement, got {type(other).__name__}")
        if other.modulus.p != self.modulus.p:
            raise FieldError(
                f"modulus mismatch: {self.modulus.p} vs {other.modulus.p}")

    def __add__(self, other: FieldElement) -> FieldElement:
        self._check(other)
        m = self.modulus
        return FieldElement(m.ops.addmod(self.value, other.value, m.p), m)

    def __sub__(self, other: FieldElement) -> FieldElement:
        self._check(other)
        m = self.modulus
        return FieldElement(m.ops.submod(self.value, other.value, m.p), m)

    def __mul__(self, other: FieldElement) -> FieldElement:
        self._check(other)
        m = self.modulus
        return FieldElement(m.ops.mulmod(self.value, other.value, m.p), m)

    def __neg__(self) -> FieldElement:
        return FieldElement((-self.value) % self.modulus.p, self.modulus)

    def inverse(self) -> FieldElement:
        if self.value == 0:
            raise FieldError("zero has no inverse")
        m = self.modulus
        return FieldElement(m.ops.invmod(self.value, m.p), m)

    def __eq__(self, other):
        return (isinstance(other, FieldElement)
                and other.value == self.value
                and other.modulus.p == self.modulus.p)

    def __hash__(self):
        return hash((self.value, self.modulus.p))

    def __repr__(self):
        return f"FieldElement({self.value} mod {self.modulus.p})"

    def to_bytes(self) -> bytes:
        return self.value.to_bytes(self.modulus.byte_length, "big")


def lagrange_at_zero(points: list[tuple[FieldElement, FieldElement]]) -> FieldElement:
    """P(0) for the unique degree-(n-1) polynomial through n <= 5 points.

    X-coordinates must be pairwise distinct and nonzero.
    """
    if not 1 <= len(points) <= 5:
        raise FieldError(f"need 1..5 points, got {len(points)}")
    m = points[0][0].modulus
    xs = []
    ys = []
    for x, y in points:
        if x.modulus.p != m.p or y.modulus.p != m.p:
            raise FieldError("interpolation points mix moduli")
        if x.value == 0:
            raise FieldError("interpolation point at zero")
        xs.append(x.value)
        ys.append(y.value)
    if len(set(xs)) != len(xs):
        raise FieldError("duplicate interpolation x-coordinate")
    return FieldElement(m.ops.lagrange_at_zero(tuple(xs), tuple(ys), m.p), m)


class RandomSource:
    """Uniform byte source.

    Unseeded: OS entropy.  Seeded: a deterministic SHA-256 counter
    stream, so distinct seeds give independent replayable streams.
    Instances are single-owner; use one per execution strand.
    """

    def __init__(self, seed: int | bytes | None = None):
        if seed is None:
            self._key = None
        else:
            if isinstance(seed, int):
                seed = seed.to_bytes((seed.bit_length() + 7) // 8 or 1, "big", signed=False)
            self._key = hashlib.sha256(b"mith-rng" + seed).digest()
            self._counter = 0
            self._buf = b""

    def bytes(self, n: int) -> bytes:
        if self._key is None:
            return secrets.token_bytes(n)
        while len(self._buf) < n:
            block = hashlib.sha256(
                self._key + self._counter.to_bytes(8, "big")).digest()
            self._counter += 1
            self._buf += block
        out, self._buf = self._buf[:n], self._buf[n:]
        return out

    def randbelow(self, bound: int) -> int:
        """Uniform in [0, bound) by rejection on fixed-width draws."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        nbytes = (bound.bit_length() + 7) // 8
        mask = (1 << bound.bit_length()) - 1
        while True:
            v = int.from_bytes(self.bytes(nbytes), "big") & mask
            if v < bound:
                return v

    def field_element(self, modulus: Modulus) -> FieldElement:
        return FieldElement(self.randbelow(modulus.p), modulus)


# Shipped presets: tiny field for exhaustive tests, the two desk-scale
# benchmark fields, and a 256-bit prime.
FIELD_PRESETS = {
    "p11": 11,
    "p97": 97,
    "p101": 101,
    "p256": 2**256 - 189,
}


def preset_modulus(name: str) -> Modulus:
    try:
        return Modulus(FIELD_PRESETS[name])
    except KeyError:
        raise FieldError(
            f"unknown field preset {name!r} (choose from {sorted(FIELD_PRESETS)})"
        ) from None
