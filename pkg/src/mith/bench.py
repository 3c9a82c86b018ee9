"""Microbenchmarks: primitive operations, end-to-end proof runs with both
commitment schemes, and compiled-vs-pure kernel comparison."""

from __future__ import annotations

import random
import time
from dataclasses import dataclass

from mith import _core, mpc
from mith import protocol as proto
from mith.commit import BENCH_GROUP_257, TEST_GROUP_64, PedersenScheme, scheme_by_name
from mith.corpus import bench_circuit_a, bench_circuit_b, random_instance
from mith.field import Modulus, RandomSource, preset_modulus
from mith.sss import share, reconstruct, random_share_randomness


@dataclass
class BenchRow:
    section: str
    name: str
    cells: dict[str, float]  # column -> milliseconds


def _time_ms(fn, min_duration: float = 0.05, max_iters: int = 20000) -> float:
    """Average wall-clock milliseconds per call."""
    fn()  # warm up
    iters = 0
    start = time.perf_counter()
    while True:
        fn()
        iters += 1
        elapsed = time.perf_counter() - start
        if elapsed >= min_duration or iters >= max_iters:
            return elapsed * 1000.0 / iters


def bench_primitives(m: Modulus, rng: RandomSource) -> list[BenchRow]:
    label = f"field {m.p.bit_length()} bits" if m.p.bit_length() > 16 else f"field {m.p}"
    rows = []
    sr = random_share_randomness(rng, m)
    x = rng.field_element(m)
    sh = share(x, sr)
    rows.append(BenchRow(label, "Shamir share", {
        "rand": _time_ms(lambda: random_share_randomness(rng, m)),
        "share": _time_ms(lambda: share(x, sr)),
        "reconstruct": _time_ms(lambda: reconstruct(sh)),
    }))
    sh2 = share(rng.field_element(m), sr)
    rows.append(BenchRow(label, "BGW addition", {
        "protocol": _time_ms(lambda: mpc.gate_add(sh, sh2)),
    }))
    scalar = mpc.gate_const(rng.field_element(m))
    rows.append(BenchRow(label, "BGW scalar mult", {
        "protocol": _time_ms(lambda: mpc.gate_smul(scalar, sh)),
    }))
    mul_rand = tuple(random_share_randomness(rng, m) for _ in range(5))
    rows.append(BenchRow(label, "BGW multiplication", {
        "rand": _time_ms(lambda: tuple(random_share_randomness(rng, m) for _ in range(5))),
        "protocol": _time_ms(lambda: mpc.gate_mul(sh, sh2, mul_rand)),
    }))

    # Commitments over a view-sized message of this field.
    c = bench_circuit_a(m) if m.p == 101 else None
    if c is None:
        # Synthesize a message of a typical view size for other fields.
        elements = [rng.randbelow(m.p) for _ in range(24)]
        blob = b"".join(v.to_bytes(m.byte_length, "big") for v in elements)
    else:
        inst, w = random_instance(random.Random(0), c)
        rp = proto.random_prover_rand(rng, c, scheme_by_name("prf"))
        st, _ = proto.prover_commit(rp, w, inst, scheme_by_name("prf"))
        blob = mpc.encode_view(c, st.views[0])
        elements = mpc.view_elements(c, st.views[0])

    prf = scheme_by_name("prf")
    key = prf.keygen(rng, len(elements))
    com, op = prf.commit_view(key, blob, elements)
    rows.append(BenchRow(label, "HMAC-SHA256 commitment", {
        "commit": _time_ms(lambda: prf.commit_view(key, blob, elements)),
        "verify": _time_ms(lambda: prf.verify_view(blob, elements, com, op)),
    }))
    group = TEST_GROUP_64 if m.p <= TEST_GROUP_64.order else BENCH_GROUP_257
    ped = PedersenScheme(group)
    pkey = ped.keygen(rng, len(elements))
    pcom, pop = ped.commit_view(pkey, blob, elements)
    rows.append(BenchRow(label, "Pedersen commitment", {
        "rand": _time_ms(lambda: ped.keygen(rng, len(elements))),
        "commit": _time_ms(lambda: ped.commit_view(pkey, blob, elements)),
        "verify": _time_ms(lambda: ped.verify_view(blob, elements, pcom, pop)),
    }))
    return rows


def bench_mith(circuit, rng: RandomSource, scheme_name: str) -> BenchRow:
    """End-to-end columns for one proof run on a benchmark circuit."""
    m = circuit.modulus
    inst, w = random_instance(random.Random(1), circuit)
    scheme = scheme_by_name(scheme_name, m.p)
    rp = proto.random_prover_rand(rng, circuit, scheme)
    st, cm = proto.prover_commit(rp, w, inst, scheme)
    vst, ch = proto.verifier_challenge(rng, inst, cm)
    resp = proto.prover_respond(st, ch)

    n_mul = len(mpc.mul_gate_ids(circuit))
    name = (f"MitH ({circuit.topology.n_gates} gates, {n_mul} MUL) "
            f"[{scheme_name}]")

    def commit_only():
        proto.prover_commit(rp, w, inst, scheme)

    def check_only():
        proto.verifier_check(vst, resp, scheme)

    return BenchRow(f"field {m.p}", name, {
        "rand": _time_ms(lambda: proto.random_prover_rand(rng, circuit, scheme)),
        "protocol": _time_ms(lambda: mpc.run_protocol(
            inst, [share(v, r) for v, r in zip(w.secret_inputs, rp.input_r)],
            rp.mpc)),
        "commit": _time_ms(commit_only),
        "verify": _time_ms(check_only),
    })


def bench_kernels(rng: RandomSource) -> list[BenchRow]:
    """Same kernel workload on every available backend."""
    m = Modulus(101)
    rows = []
    saved = m.ops
    sh = tuple(rng.randbelow(m.p) for _ in range(5))
    sh2 = tuple(rng.randbelow(m.p) for _ in range(5))
    b1 = tuple(rng.randbelow(m.p) for _ in range(5))
    b2 = tuple(rng.randbelow(m.p) for _ in range(5))
    for backend in _core.backends():
        cells = {
            "share5": _time_ms(lambda: backend.share5(7, 3, 5, m.p)),
            "dot5": _time_ms(lambda: backend.dot5(m.recon_weights, sh, m.p)),
            "mul_gate5": _time_ms(
                lambda: backend.mul_gate5(sh, sh2, b1, b2, m.recon_weights, m.p)),
            "refresh5": _time_ms(lambda: backend.refresh5(sh, b1, b2, m.p)),
        }
        # Whole-protocol run with this backend selected for the modulus.
        m.ops = backend
        c = bench_circuit_a(m)
        inst, w = random_instance(random.Random(2), c)
        scheme = scheme_by_name("prf")
        rp = proto.random_prover_rand(rng, c, scheme)
        sharings = [share(v, r) for v, r in zip(w.secret_inputs, rp.input_r)]
        cells["protocol"] = _time_ms(lambda: mpc.run_protocol(inst, sharings, rp.mpc))
        m.ops = saved
        rows.append(BenchRow("kernels (field 101)", backend.BACKEND, cells))
    return rows


def format_rows(rows: list[BenchRow]) -> str:
    columns = ["rand", "share", "reconstruct", "protocol", "commit", "verify",
               "share5", "dot5", "mul_gate5", "refresh5"]
    used = [c for c in columns if any(c in r.cells for r in rows)]
    name_w = max(len(r.name) for r in rows) + 2
    sect_w = max(len(r.section) for r in rows) + 2
    header = " " * (sect_w + name_w) + "".join(f"{c:>14}" for c in used)
    lines = [header, "-" * len(header)]
    last_section = None
    for r in rows:
        sect = r.section if r.section != last_section else ""
        last_section = r.section
        cells = "".join(
            f"{r.cells[c]:>14.4f}" if c in r.cells else " " * 14 for c in used)
        lines.append(f"{sect:<{sect_w}}{r.name:<{name_w}}{cells}")
    return "\n".join(lines) + "\n(times in ms)"


def standard_bench(rng: RandomSource | None = None,
                   quick: bool = False) -> list[BenchRow]:
    rng = rng or RandomSource(7)
    rows = []
    fields = [preset_modulus("p256")] if quick else [
        preset_modulus("p256"), preset_modulus("p101")]
    for m in fields:
        rows += bench_primitives(m, rng)
    for circuit in (bench_circuit_a(), bench_circuit_b()):
        for scheme_name in ("prf", "pedersen"):
            rows.append(bench_mith(circuit, rng, scheme_name))
    return rows
