"""In-the-head 5-party BGW evaluation of arithmetic circuits.

The prover runs all five parties itself: addition, constants and scalar
multiplication are local; each multiplication gate reshares the parties'
degree-4 product shares with fresh degree-2 polynomials and recombines
them with the degree-4 interpolation weights; after the root gate the
output sharing is re-randomized with five fresh sharings of zero and
publicly opened.

A party's view records its inputs, its own polynomial coefficients and
every value it received: the incoming resharing column at each
multiplication gate, and at the opening both the incoming zero-share
contributions and the broadcast refreshed output shares.  Views are
self-contained: `out_messages` recomputes everything a party sent from
its view alone, which is what pairwise consistency checks against.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from mith.errors import MithError, ProofError
from mith.field import FieldElement, Modulus, RandomSource
from mith.circuit import (
    Addition, Circuit, Constant, Gate, Multiplication, PInput, SInput,
    SMultiplication, Statement, eval_public, mul_gate_ids,
)
from mith.sss import (
    N_PARTIES, PARTY_IDS, ShareRandomness, Sharing, public_encoding,
    random_share_randomness, reconstruct, share,
)

# Marker gate id for the refresh randomness slot in view encodings; real
# gate ids are circuit-local and far smaller.
REFRESH_SLOT = 0xFFFFFFFF


@dataclass(frozen=True)
class GateRandomness:
    """Full randomness bundle for one execution: five resharing
    polynomials per messaging multiplication gate plus five zero-sharing
    polynomials for the output refresh."""

    mul: dict[int, tuple[ShareRandomness, ...]]
    refresh: tuple[ShareRandomness, ...]


@dataclass(frozen=True)
class ViewRandomness:
    """One party's slice: its own polynomial per multiplication gate and
    its own zero-sharing polynomial for the refresh."""

    mul: dict[int, ShareRandomness]
    refresh: ShareRandomness


@dataclass(frozen=True)
class TraceNode:
    """Incoming messages at one circuit node, children in (left, right)
    order.  Multiplication nodes carry the 5-value incoming column;
    every other node is message-free."""

    payload: tuple[FieldElement, ...]
    children: tuple["TraceNode", ...]


@dataclass(frozen=True)
class OpenTrace:
    """Incoming data at the refresh-and-open stage: the five zero-share
    contributions received and the five broadcast refreshed shares."""

    zin: tuple[FieldElement, ...]
    bcast: tuple[FieldElement, ...]


@dataclass(frozen=True)
class View:
    public_inputs: tuple[FieldElement, ...]
    secret_shares: tuple[FieldElement, ...]
    randomness: ViewRandomness
    trace: TraceNode
    open_trace: OpenTrace


@dataclass(frozen=True)
class OutMessages:
    """Everything one party sent, recomputed from its view: the outgoing
    resharing row per multiplication gate, the outgoing zero-share row,
    and the broadcast refreshed share."""

    mul: dict[int, tuple[FieldElement, ...]]
    open_z: tuple[FieldElement, ...]
    open_bcast: FieldElement


@dataclass(frozen=True)
class ExecutionResult:
    views: tuple[View, ...]
    outputs: tuple[FieldElement, ...]


def random_gate_randomness(rng: RandomSource, c: Circuit) -> GateRandomness:
    mul = {
        gid: tuple(random_share_randomness(rng, c.modulus) for _ in PARTY_IDS)
        for gid in mul_gate_ids(c)
    }
    refresh = tuple(random_share_randomness(rng, c.modulus) for _ in PARTY_IDS)
    return GateRandomness(mul, refresh)


def randomness_slice(pid: int, rand: GateRandomness) -> ViewRandomness:
    return ViewRandomness(
        {gid: rs[pid - 1] for gid, rs in rand.mul.items()},
        rand.refresh[pid - 1],
    )


def _empty_trace(g: Gate) -> TraceNode:
    if isinstance(g, (Addition, Multiplication, SMultiplication)):
        return TraceNode((), (_empty_trace(g.left), _empty_trace(g.right)))
    return TraceNode((), ())


# ---------------------------------------------------------------------------
# Honest execution


def run_protocol(s: Statement, input_sharings: Sequence[Sharing],
                 rand: GateRandomness) -> ExecutionResult:
    """Execute the full protocol; returns all five views and outputs."""
    c = s.circuit
    m = c.modulus
    p, ops, lam = m.p, m.ops, m.recon_weights
    topo = c.topology
    if len(input_sharings) != topo.n_secret:
        raise MithError(
            f"need {topo.n_secret} input sharings, got {len(input_sharings)}")
    needed = mul_gate_ids(c)
    missing = [g for g in needed if g not in rand.mul]
    if missing:
        raise MithError(f"missing randomness for gate ids {missing}")

    def fe(v: int) -> FieldElement:
        return FieldElement(v, m)

    def walk(g: Gate):
        """Returns (share tuple, per-party trace nodes)."""
        if isinstance(g, PInput):
            v = s.public_inputs[g.wire].value
            return (v,) * 5, [TraceNode((), ())] * 5
        if isinstance(g, SInput):
            return input_sharings[g.wire].values(), [TraceNode((), ())] * 5
        if isinstance(g, Constant):
            return (g.value.value,) * 5, [TraceNode((), ())] * 5
        if isinstance(g, SMultiplication):
            scalar = eval_public(g.left, s.public_inputs, m).value
            ltr = _empty_trace(g.left)
            rsh, rtr = walk(g.right)
            sh = tuple(ops.mulmod(scalar, v, p) for v in rsh)
            return sh, [TraceNode((), (ltr, rtr[q])) for q in range(5)]
        lsh, ltr = walk(g.left)
        rsh, rtr = walk(g.right)
        if isinstance(g, Addition):
            sh = tuple(ops.addmod(a, b, p) for a, b in zip(lsh, rsh))
            return sh, [TraceNode((), (ltr[q], rtr[q])) for q in range(5)]
        # Multiplication: reshare-and-recombine degree reduction.
        rs = rand.mul[g.gid]
        b1 = tuple(r.a1.value for r in rs)
        b2 = tuple(r.a2.value for r in rs)
        rows, out = ops.mul_gate5(lsh, rsh, b1, b2, lam, p)
        nodes = [
            TraceNode(tuple(fe(rows[k][q]) for k in range(5)),
                      (ltr[q], rtr[q]))
            for q in range(5)
        ]
        return out, nodes

    root_sh, trees = walk(c.root)

    c1 = tuple(r.a1.value for r in rand.refresh)
    c2 = tuple(r.a2.value for r in rand.refresh)
    zrows, refreshed = ops.refresh5(root_sh, c1, c2, p)
    y = fe(ops.dot5(lam, refreshed, p))
    bcast = tuple(fe(v) for v in refreshed)
    views = []
    for q in range(5):
        open_tr = OpenTrace(tuple(fe(zrows[k][q]) for k in range(5)), bcast)
        views.append(View(
            public_inputs=tuple(s.public_inputs),
            secret_shares=tuple(sh[PARTY_IDS[q]] for sh in input_sharings),
            randomness=randomness_slice(PARTY_IDS[q], rand),
            trace=trees[q],
            open_trace=open_tr,
        ))
    return ExecutionResult(tuple(views), (y,) * 5)


# ---------------------------------------------------------------------------
# Message-free gate operations on whole sharings (used directly by tests
# and benchmarks; run_protocol inlines the same arithmetic).


def gate_add(a: Sharing, b: Sharing) -> Sharing:
    return Sharing(tuple(x + y for x, y in zip(a.shares, b.shares)))


def gate_const(v: FieldElement) -> Sharing:
    return public_encoding(v)


def gate_smul(scalar_sharing: Sharing, sh: Sharing) -> Sharing:
    scalar = scalar_sharing.shares[0]
    if any(s != scalar for s in scalar_sharing.shares):
        raise MithError("scalar sharing is not a public (constant) encoding")
    return Sharing(tuple(scalar * v for v in sh.shares))


def gate_mul(l: Sharing, r: Sharing,
             rs: tuple[ShareRandomness, ...]) -> tuple[Sharing, tuple]:
    """BGW multiplication; returns the output sharing and the 5x5 message
    matrix (rows[k][q] = what party k+1 sent to party q+1)."""
    m = l.modulus
    b1 = tuple(x.a1.value for x in rs)
    b2 = tuple(x.a2.value for x in rs)
    rows, out = m.ops.mul_gate5(l.values(), r.values(), b1, b2,
                                m.recon_weights, m.p)
    fe_rows = tuple(tuple(FieldElement(v, m) for v in row) for row in rows)
    return Sharing(tuple(FieldElement(v, m) for v in out)), fe_rows


def refresh_and_open(sh: Sharing, rs: tuple[ShareRandomness, ...]):
    """Re-randomize then publicly open; returns (refreshed sharing,
    broadcast shares, output)."""
    m = sh.modulus
    c1 = tuple(x.a1.value for x in rs)
    c2 = tuple(x.a2.value for x in rs)
    _, refreshed = m.ops.refresh5(sh.values(), c1, c2, m.p)
    out = Sharing(tuple(FieldElement(v, m) for v in refreshed))
    return out, out.shares, reconstruct(out)


# ---------------------------------------------------------------------------
# View replay: everything below recomputes a party's run from its view
# alone and must never trust any other data.


def _valid_randomness(c: Circuit, r: ViewRandomness) -> bool:
    m = c.modulus
    if set(r.mul) != set(mul_gate_ids(c)):
        return False
    for sr in list(r.mul.values()) + [r.refresh]:
        if sr.a1.modulus != m or sr.a2.modulus != m:
            return False
    return True


def _valid_trace(c: Circuit, v: View) -> bool:
    m = c.modulus

    def ok(g: Gate, t: TraceNode, public: bool) -> bool:
        if isinstance(g, Multiplication) and not public:
            if len(t.payload) != 5:
                return False
        elif t.payload != ():
            return False
        if any(x.modulus != m for x in t.payload):
            return False
        if isinstance(g, (Addition, Multiplication, SMultiplication)):
            if len(t.children) != 2:
                return False
            lpub = public or isinstance(g, SMultiplication)
            return ok(g.left, t.children[0], lpub) and ok(g.right, t.children[1], public)
        return t.children == ()

    if not ok(c.root, v.trace, False):
        return False
    ot = v.open_trace
    if len(ot.zin) != 5 or len(ot.bcast) != 5:
        return False
    return all(x.modulus == m for x in ot.zin + ot.bcast)


def valid_view(c: Circuit, v: View) -> bool:
    """Shape and field-membership check; no consistency semantics."""
    return (len(v.public_inputs) == c.topology.n_public
            and len(v.secret_shares) == c.topology.n_secret
            and all(x.modulus == c.modulus
                    for x in v.public_inputs + v.secret_shares)
            and _valid_randomness(c, v.randomness)
            and _valid_trace(c, v))


def _replay(c: Circuit, pid: int, v: View):
    """Recompute pid's wire shares and outgoing rows from its view.
    Returns (root_share, mul_rows, out_z, out_bcast) as ints."""
    m = c.modulus
    p, ops = m.p, m.ops
    lam = m.recon_weights
    idx = pid - 1
    mul_rows: dict[int, tuple[int, ...]] = {}

    def walk(g: Gate, t: TraceNode) -> int:
        if isinstance(g, PInput):
            return v.public_inputs[g.wire].value
        if isinstance(g, SInput):
            return v.secret_shares[g.wire].value
        if isinstance(g, Constant):
            return g.value.value
        if isinstance(g, SMultiplication):
            scalar = eval_public(g.left, v.public_inputs, m).value
            return ops.mulmod(scalar, walk(g.right, t.children[1]), p)
        l = walk(g.left, t.children[0])
        r = walk(g.right, t.children[1])
        if isinstance(g, Addition):
            return ops.addmod(l, r, p)
        rnd = v.randomness.mul[g.gid]
        d = ops.mulmod(l, r, p)
        mul_rows[g.gid] = ops.share5(d, rnd.a1.value, rnd.a2.value, p)
        col = tuple(x.value for x in t.payload)
        return ops.dot5(lam, col, p)

    root = walk(c.root, v.trace)
    rr = v.randomness.refresh
    out_z = ops.share5(0, rr.a1.value, rr.a2.value, p)
    zsum = 0
    for x in v.open_trace.zin:
        zsum = ops.addmod(zsum, x.value, p)
    out_bcast = ops.addmod(root, zsum, p)
    return root, mul_rows, out_z, out_bcast


def out_messages(c: Circuit, pid: int, v: View) -> OutMessages | None:
    """All messages pid sent, recomputed from v; None if v is malformed."""
    if not valid_view(c, v):
        return None
    m = c.modulus
    _, mul_rows, out_z, out_bcast = _replay(c, pid, v)
    return OutMessages(
        {gid: tuple(FieldElement(x, m) for x in row)
         for gid, row in mul_rows.items()},
        tuple(FieldElement(x, m) for x in out_z),
        FieldElement(out_bcast, m),
    )


def local_output(c: Circuit, pid: int, v: View) -> FieldElement | None:
    """pid's protocol output recomputed from its view; None if malformed.

    Reconstructs from the recorded broadcast with pid's own slot replaced
    by its recomputed refreshed share."""
    if not valid_view(c, v):
        return None
    m = c.modulus
    _, _, _, own = _replay(c, pid, v)
    vals = list(x.value for x in v.open_trace.bcast)
    vals[pid - 1] = own
    return FieldElement(m.ops.dot5(m.recon_weights, tuple(vals), m.p), m)


def _mul_payloads(c: Circuit, v: View) -> dict[int, tuple[FieldElement, ...]]:
    """Incoming column per messaging multiplication gate id."""
    out: dict[int, tuple[FieldElement, ...]] = {}

    def walk(g: Gate, t: TraceNode, public: bool):
        if isinstance(g, Multiplication) and not public:
            out[g.gid] = t.payload
        if isinstance(g, (Addition, Multiplication, SMultiplication)):
            walk(g.left, t.children[0], public or isinstance(g, SMultiplication))
            walk(g.right, t.children[1], public)

    walk(c.root, v.trace, False)
    return out


def _sent_to(om: OutMessages, q: int):
    """Project outgoing rows onto receiver q: (per-gid value, z, bcast)."""
    return ({gid: row[q - 1] for gid, row in om.mul.items()},
            om.open_z[q - 1], om.open_bcast)


def consistent_views(c: Circuit, x: Sequence[FieldElement],
                     vi: View, vj: View, i: int, j: int) -> bool:
    """Pairwise view consistency for distinct parties i and j.

    Checks shapes, that both views carry the public input x, that each
    view's own recorded slots match its own recomputation, and that the
    messages implicit in each view equal the ones recorded by the other.
    """
    if i == j:
        raise MithError("consistency is defined for distinct parties")
    if not (valid_view(c, vi) and valid_view(c, vj)):
        return False
    if vi.public_inputs != tuple(x) or vj.public_inputs != tuple(x):
        return False
    om_i = out_messages(c, i, vi)
    om_j = out_messages(c, j, vj)

    for pid, v, om in ((i, vi, om_i), (j, vj, om_j)):
        # Own slots must match own recomputation (view-internal coherence).
        payloads = _mul_payloads(c, v)
        sent, z, bc = _sent_to(om, pid)
        for gid, col in payloads.items():
            if col[pid - 1] != sent[gid]:
                return False
        if v.open_trace.zin[pid - 1] != z or v.open_trace.bcast[pid - 1] != bc:
            return False

    for (a, va, om_b, b) in ((i, vi, om_j, j), (j, vj, om_i, i)):
        # What a recorded from b must equal what b's view says it sent.
        payloads = _mul_payloads(c, va)
        sent, z, bc = _sent_to(om_b, a)
        for gid, col in payloads.items():
            if col[b - 1] != sent[gid]:
                return False
        if va.open_trace.zin[b - 1] != z or va.open_trace.bcast[b - 1] != bc:
            return False
    return True


def rerun_from_views(c: Circuit, x: Sequence[FieldElement],
                     views: Sequence[View]) -> ExecutionResult | None:
    """Re-execute from the inputs and randomness recorded in five views.

    The honest execution they claim to come from, if any; compare its
    views against the originals to settle global consistency.
    """
    if len(views) != N_PARTIES or not all(valid_view(c, v) for v in views):
        return None
    m = c.modulus
    sharings = [
        Sharing(tuple(views[q].secret_shares[w] for q in range(5)))
        for w in range(c.topology.n_secret)
    ]
    rand = GateRandomness(
        {gid: tuple(views[q].randomness.mul[gid] for q in range(5))
         for gid in mul_gate_ids(c)},
        tuple(views[q].randomness.refresh for q in range(5)),
    )
    stmt = Statement(c, tuple(x), m.zero())
    return run_protocol(stmt, sharings, rand)


# ---------------------------------------------------------------------------
# 2-privacy simulator


def _interp_eval(pts: Sequence[tuple[int, int]], at: int, p: int, ops) -> int:
    """Evaluate the unique polynomial through pts at x=at (generic nodes)."""
    acc = 0
    for k, (xk, yk) in enumerate(pts):
        num, den = 1, 1
        for l, (xl, _) in enumerate(pts):
            if l != k:
                num = ops.mulmod(num, ops.submod(at, xl, p), p)
                den = ops.mulmod(den, ops.submod(xk, xl, p), p)
        acc = ops.addmod(acc, ops.mulmod(yk, ops.mulmod(num, ops.invmod(den, p), p), p), p)
    return acc


def mpc_simulate(c: Circuit, x: Sequence[FieldElement],
                 corrupt: tuple[int, int],
                 corrupt_shares: Sequence[tuple[FieldElement, FieldElement]],
                 y: FieldElement, rng: RandomSource) -> tuple[View, View]:
    """Simulate the joint view of two corrupt parties without the witness.

    Incoming messages from honest parties are sampled uniformly; the
    honest broadcast shares are fixed so the opened sharing interpolates
    to y.  The returned views are mutually consistent and both report
    local output y.
    """
    i, j = corrupt
    if i == j:
        raise MithError("corrupt parties must be distinct")
    m = c.modulus
    p, ops, lam = m.p, m.ops, m.recon_weights

    def fe(v: int) -> FieldElement:
        return FieldElement(v, m)

    own_mul: dict[int, dict[int, ShareRandomness]] = {i: {}, j: {}}

    def walk(g: Gate):
        """Returns ({i: share, j: share}, {i: node, j: node})."""
        if isinstance(g, PInput):
            v = x[g.wire].value
            return {i: v, j: v}, {i: TraceNode((), ()), j: TraceNode((), ())}
        if isinstance(g, SInput):
            si, sj = corrupt_shares[g.wire]
            return {i: si.value, j: sj.value}, {i: TraceNode((), ()), j: TraceNode((), ())}
        if isinstance(g, Constant):
            v = g.value.value
            return {i: v, j: v}, {i: TraceNode((), ()), j: TraceNode((), ())}
        if isinstance(g, SMultiplication):
            scalar = eval_public(g.left, tuple(x), m).value
            ltr = _empty_trace(g.left)
            rsh, rtr = walk(g.right)
            sh = {q: ops.mulmod(scalar, rsh[q], p) for q in (i, j)}
            return sh, {q: TraceNode((), (ltr, rtr[q])) for q in (i, j)}
        lsh, ltr = walk(g.left)
        rsh, rtr = walk(g.right)
        if isinstance(g, Addition):
            sh = {q: ops.addmod(lsh[q], rsh[q], p) for q in (i, j)}
            return sh, {q: TraceNode((), (ltr[q], rtr[q])) for q in (i, j)}
        # Multiplication: corrupt parties' rows are computed honestly from
        # their product shares; honest incoming values are uniform.
        cols = {i: [0] * 5, j: [0] * 5}
        for q in (i, j):
            rnd = random_share_randomness(rng, m)
            own_mul[q][g.gid] = rnd
            d = ops.mulmod(lsh[q], rsh[q], p)
            row = ops.share5(d, rnd.a1.value, rnd.a2.value, p)
            cols[i][q - 1] = row[i - 1]
            cols[j][q - 1] = row[j - 1]
        for k in PARTY_IDS:
            if k not in (i, j):
                cols[i][k - 1] = rng.randbelow(p)
                cols[j][k - 1] = rng.randbelow(p)
        sh = {q: ops.dot5(lam, tuple(cols[q]), p) for q in (i, j)}
        nodes = {
            q: TraceNode(tuple(fe(v) for v in cols[q]), (ltr[q], rtr[q]))
            for q in (i, j)
        }
        return sh, nodes

    root, trees = walk(c.root)

    own_refresh = {q: random_share_randomness(rng, m) for q in (i, j)}
    zin = {i: [0] * 5, j: [0] * 5}
    for q in (i, j):
        rnd = own_refresh[q]
        row = ops.share5(0, rnd.a1.value, rnd.a2.value, p)
        zin[i][q - 1] = row[i - 1]
        zin[j][q - 1] = row[j - 1]
    for k in PARTY_IDS:
        if k not in (i, j):
            zin[i][k - 1] = rng.randbelow(p)
            zin[j][k - 1] = rng.randbelow(p)

    u = {q: root[q] for q in (i, j)}
    for q in (i, j):
        for v in zin[q]:
            u[q] = ops.addmod(u[q], v, p)
    # Fix honest broadcasts so the degree-2 opened sharing hits y.
    pts = ((0, y.value), (i, u[i]), (j, u[j]))
    bvals = [0] * 5
    bvals[i - 1], bvals[j - 1] = u[i], u[j]
    for k in PARTY_IDS:
        if k not in (i, j):
            bvals[k - 1] = _interp_eval(pts, k, p, ops)
    bcast = tuple(fe(v) for v in bvals)

    views = {}
    for q in (i, j):
        views[q] = View(
            public_inputs=tuple(x),
            secret_shares=tuple(cs[0 if q == i else 1] for cs in corrupt_shares),
            randomness=ViewRandomness(own_mul[q], own_refresh[q]),
            trace=trees[q],
            open_trace=OpenTrace(tuple(fe(v) for v in zin[q]), bcast),
        )
    return views[i], views[j]


# ---------------------------------------------------------------------------
# Canonical view encoding (commitments are computed over these bytes, so
# the layout is bit-exact: tag 0x56, public inputs, secret shares,
# randomness entries in ascending gate-id order with the refresh slot
# last, trace payloads in circuit post-order, then the open-stage data;
# field elements are fixed-width big-endian, list counts 4-byte
# big-endian).

VIEW_TAG = 0x56


def _post_order_payloads(c: Circuit, v: View) -> list[tuple[FieldElement, ...]]:
    out = []

    def walk(g: Gate, t: TraceNode):
        if isinstance(g, (Addition, Multiplication, SMultiplication)):
            walk(g.left, t.children[0])
            walk(g.right, t.children[1])
        out.append(t.payload)

    walk(c.root, v.trace)
    return out


def encode_view(c: Circuit, v: View) -> bytes:
    def u32(n: int) -> bytes:
        return n.to_bytes(4, "big")

    parts = [bytes([VIEW_TAG])]
    parts.append(u32(len(v.public_inputs)))
    parts += [e.to_bytes() for e in v.public_inputs]
    parts.append(u32(len(v.secret_shares)))
    parts += [e.to_bytes() for e in v.secret_shares]
    entries = sorted(v.randomness.mul.items()) + [(REFRESH_SLOT, v.randomness.refresh)]
    parts.append(u32(len(entries)))
    for gid, sr in entries:
        parts.append(u32(gid))
        parts.append(sr.a1.to_bytes())
        parts.append(sr.a2.to_bytes())
    for payload in _post_order_payloads(c, v):
        parts.append(u32(len(payload)))
        parts += [e.to_bytes() for e in payload]
    parts.append(u32(len(v.open_trace.zin)))
    parts += [e.to_bytes() for e in v.open_trace.zin]
    parts.append(u32(len(v.open_trace.bcast)))
    parts += [e.to_bytes() for e in v.open_trace.bcast]
    return b"".join(parts)


def view_elements(c: Circuit, v: View) -> list[int]:
    """The view's field elements in encoding order (the Pedersen message)."""
    out = [e.value for e in v.public_inputs]
    out += [e.value for e in v.secret_shares]
    for _, sr in sorted(v.randomness.mul.items()) + [(REFRESH_SLOT, v.randomness.refresh)]:
        out += [sr.a1.value, sr.a2.value]
    for payload in _post_order_payloads(c, v):
        out += [e.value for e in payload]
    out += [e.value for e in v.open_trace.zin]
    out += [e.value for e in v.open_trace.bcast]
    return out


def view_element_count(c: Circuit) -> int:
    n_mul = len(mul_gate_ids(c))
    topo = c.topology
    return topo.n_public + topo.n_secret + 2 * (n_mul + 1) + 5 * n_mul + 10


def encoded_view_length(c: Circuit) -> int:
    n_mul = len(mul_gate_ids(c))
    n_nodes = sum(1 for _ in _iter_all_nodes(c.root))
    w = c.modulus.byte_length
    return (1 + 4 + 4 + 4            # tag + pub/sec counts + rand count
            + 4 * (n_mul + 1)        # rand entry gids
            + 4 * n_nodes + 4 + 4    # per-node and open counts
            + w * view_element_count(c))


def _iter_all_nodes(g: Gate):
    if isinstance(g, (Addition, Multiplication, SMultiplication)):
        yield from _iter_all_nodes(g.left)
        yield from _iter_all_nodes(g.right)
    yield g


class _Reader:
    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def take(self, n: int) -> bytes:
        if self.pos + n > len(self.data):
            raise ProofError("truncated view encoding")
        out = self.data[self.pos:self.pos + n]
        self.pos += n
        return out

    def u32(self) -> int:
        return int.from_bytes(self.take(4), "big")

    def fe(self, m: Modulus) -> FieldElement:
        v = int.from_bytes(self.take(m.byte_length), "big")
        if v >= m.p:
            raise ProofError("view field element exceeds modulus")
        return FieldElement(v, m)

    def done(self) -> bool:
        return self.pos == len(self.data)


def decode_view(c: Circuit, data: bytes) -> View:
    """Strict inverse of encode_view; raises ProofError on any deviation."""
    m = c.modulus
    rd = _Reader(data)
    if rd.take(1)[0] != VIEW_TAG:
        raise ProofError("bad view tag")
    if rd.u32() != c.topology.n_public:
        raise ProofError("public input count mismatch")
    pubs = tuple(rd.fe(m) for _ in range(c.topology.n_public))
    if rd.u32() != c.topology.n_secret:
        raise ProofError("secret share count mismatch")
    secs = tuple(rd.fe(m) for _ in range(c.topology.n_secret))
    gids = mul_gate_ids(c)
    if rd.u32() != len(gids) + 1:
        raise ProofError("randomness entry count mismatch")
    mul_r: dict[int, ShareRandomness] = {}
    for gid in gids:
        if rd.u32() != gid:
            raise ProofError("randomness gate id mismatch")
        mul_r[gid] = ShareRandomness(rd.fe(m), rd.fe(m))
    if rd.u32() != REFRESH_SLOT:
        raise ProofError("missing refresh randomness slot")
    refresh_r = ShareRandomness(rd.fe(m), rd.fe(m))

    # Post-order read mirroring _post_order_payloads.
    def read_tree(g: Gate, public: bool) -> TraceNode:
        if isinstance(g, (Addition, Multiplication, SMultiplication)):
            lpub = public or isinstance(g, SMultiplication)
            left = read_tree(g.left, lpub)
            right = read_tree(g.right, public)
            n = rd.u32()
            want = 5 if isinstance(g, Multiplication) and not public else 0
            if n != want:
                raise ProofError("trace payload arity mismatch")
            payload = tuple(rd.fe(m) for _ in range(n))
            return TraceNode(payload, (left, right))
        if rd.u32() != 0:
            raise ProofError("leaf trace payload must be empty")
        return TraceNode((), ())

    trace = read_tree(c.root, False)
    if rd.u32() != 5:
        raise ProofError("open-stage zero-share count mismatch")
    zin = tuple(rd.fe(m) for _ in range(5))
    if rd.u32() != 5:
        raise ProofError("broadcast count mismatch")
    bcast = tuple(rd.fe(m) for _ in range(5))
    if not rd.done():
        raise ProofError("trailing bytes after view")
    return View(pubs, secs, ViewRandomness(mul_r, refresh_r), trace,
                OpenTrace(zin, bcast))
