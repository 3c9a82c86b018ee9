"""Circuit and statement corpora for tests, self-tests and benchmarks."""

from __future__ import annotations

import itertools
import random

from mith.circuit import (
    Addition, Circuit, Constant, Gate, Multiplication, PInput, SInput,
    SMultiplication, Statement, Topology, Witness, eval_plain, gate_ids,
    iter_gates, validate_circuit,
)
from mith.field import FieldElement, Modulus


def _count_gates(root: Gate) -> int:
    return len(gate_ids(root))


def _circuit(root: Gate, m: Modulus, n_public: int, n_secret: int) -> Circuit:
    c = Circuit(Topology(n_public, n_secret, _count_gates(root)), root, m)
    validate_circuit(c)
    return c


def identity_circuit(m: Modulus) -> Circuit:
    """Passes the single secret wire through a unit scalar gate (the
    topology requires at least one gate, so a bare wire is not a circuit)."""
    root = SMultiplication(2, Constant(1, m.one()), SInput(0))
    return _circuit(root, m, 0, 1)


def square_plus_one_circuit(m: Modulus) -> Circuit:
    """w0^2 + 1; over F_11 its image misses several field values, which
    makes it the canonical source of false statements."""
    root = Addition(3, Multiplication(2, SInput(0), SInput(0)),
                    Constant(1, m.one()))
    return _circuit(root, m, 0, 1)


def bench_circuit_a(m: Modulus | None = None) -> Circuit:
    """w0^2 + w1^2 + c1 + c2 over F_101: 7 gates of which 2 are
    multiplications (gates = const/add/mul/smul nodes; inputs excluded)."""
    m = m or Modulus(101)
    root = Addition(7,
                    Addition(6,
                             Addition(5,
                                      Multiplication(3, SInput(0), SInput(0)),
                                      Multiplication(4, SInput(1), SInput(1))),
                             Constant(1, m.element(5))),
                    Constant(2, m.element(7)))
    return _circuit(root, m, 0, 2)


def bench_circuit_b(m: Modulus | None = None) -> Circuit:
    """w0^3 + w1^2 + 2*w0 + c1 + c2 over F_97: 11 gates of which 3 are
    multiplications, same counting rule as bench_circuit_a."""
    m = m or Modulus(97)
    cube = Multiplication(2, Multiplication(1, SInput(0), SInput(0)), SInput(0))
    square = Multiplication(3, SInput(1), SInput(1))
    scaled = SMultiplication(5, Constant(4, m.element(2)), SInput(0))
    root = Addition(11,
                    Addition(10,
                             Addition(9, Addition(8, cube, square), scaled),
                             Constant(6, m.element(3))),
                    Constant(7, m.element(9)))
    return _circuit(root, m, 0, 2)


# ---------------------------------------------------------------------------
# Random circuits


def _random_public_tree(rnd: random.Random, m: Modulus, n_public: int,
                        depth: int, gid: itertools.count) -> Gate:
    if depth <= 0 or rnd.random() < 0.4:
        if n_public and rnd.random() < 0.5:
            return PInput(rnd.randrange(n_public))
        return Constant(next(gid), m.element(rnd.randrange(m.p)))
    kind = rnd.choice(("add", "smul"))
    left = _random_public_tree(rnd, m, n_public, depth - 1, gid)
    right = _random_public_tree(rnd, m, n_public, depth - 1, gid)
    if kind == "add":
        return Addition(next(gid), left, right)
    return SMultiplication(next(gid), left, right)


def _random_tree(rnd: random.Random, m: Modulus, n_public: int, n_secret: int,
                 depth: int, gid: itertools.count) -> Gate:
    if depth <= 0 or rnd.random() < 0.25:
        roll = rnd.random()
        if roll < 0.5:
            return SInput(rnd.randrange(n_secret))
        if roll < 0.75 and n_public:
            return PInput(rnd.randrange(n_public))
        return Constant(next(gid), m.element(rnd.randrange(m.p)))
    kind = rnd.choice(("add", "add", "mul", "mul", "smul"))
    if kind == "smul":
        left = _random_public_tree(rnd, m, n_public, depth - 1, gid)
        right = _random_tree(rnd, m, n_public, n_secret, depth - 1, gid)
        return SMultiplication(next(gid), left, right)
    left = _random_tree(rnd, m, n_public, n_secret, depth - 1, gid)
    right = _random_tree(rnd, m, n_public, n_secret, depth - 1, gid)
    if kind == "add":
        return Addition(next(gid), left, right)
    return Multiplication(next(gid), left, right)


def random_circuit(rnd: random.Random, m: Modulus, n_public: int = 1,
                   n_secret: int = 1, max_depth: int = 4) -> Circuit:
    """Random valid circuit that reads at least one secret wire."""
    while True:
        gid = itertools.count(1)
        root = _random_tree(rnd, m, n_public, n_secret, max_depth, gid)
        if not any(isinstance(g, SInput) for g in iter_gates(root)):
            continue
        if _count_gates(root) < 1:
            continue
        return _circuit(root, m, n_public, n_secret)


def random_instance(rnd: random.Random, c: Circuit) -> tuple[Statement, Witness]:
    """Statement/witness pair with target = the true evaluation."""
    m = c.modulus
    pubs = tuple(m.element(rnd.randrange(m.p))
                 for _ in range(c.topology.n_public))
    w = Witness(tuple(m.element(rnd.randrange(m.p))
                      for _ in range(c.topology.n_secret)))
    s = Statement(c, pubs, m.element(0))
    target = eval_plain(s, w)
    return Statement(c, pubs, target), w


def golden_corpus(m: Modulus, count: int = 20,
                  seed: int = 2024) -> list[tuple[Statement, Witness]]:
    """Deterministic mixed corpus: handcrafted plus seeded random circuits."""
    rnd = random.Random(seed)
    pairs: list[tuple[Statement, Witness]] = []
    for c in (identity_circuit(m), square_plus_one_circuit(m)):
        pairs.append(random_instance(rnd, c))
    while len(pairs) < count:
        c = random_circuit(rnd, m,
                           n_public=rnd.randrange(3),
                           n_secret=rnd.randrange(1, 3),
                           max_depth=rnd.randrange(2, 5))
        pairs.append(random_instance(rnd, c))
    return pairs


def circuit_image(c: Circuit, public_inputs: tuple[FieldElement, ...]) -> set[int]:
    """Every value the circuit can output, over all witnesses (exhaustive;
    only feasible for small p^n_secret)."""
    m = c.modulus
    n = c.topology.n_secret
    if m.p ** n > 300_000:
        raise ValueError("witness space too large to enumerate")
    s = Statement(c, public_inputs, m.element(0))
    out = set()
    for combo in itertools.product(range(m.p), repeat=n):
        w = Witness(tuple(m.element(v) for v in combo))
        out.add(eval_plain(s, w).value)
    return out


def impossible_statement(c: Circuit,
                         public_inputs: tuple[FieldElement, ...] = ()) -> Statement:
    """Statement whose target is provably outside the circuit's image,
    verified by exhausting the witness space."""
    m = c.modulus
    image = circuit_image(c, public_inputs)
    for v in range(m.p):
        if v not in image:
            return Statement(c, public_inputs, m.element(v))
    raise ValueError("circuit is surjective; no unsatisfiable target exists")
