"""Executable security games with statistical or exhaustive verdicts.

Each experiment runs a concrete adversary against the real protocol and
compares an empirical rate to a reference bound.  Soundness uses the
canonical one-bad-pair cheater: an execution doctored so exactly one
pair of views is inconsistent, whose acceptance therefore coincides,
trial by trial, with the challenge avoiding that pair.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dfield
from typing import Callable, Sequence

from mith import mpc
from mith import protocol as proto
from mith.circuit import Statement, Witness
from mith.commit import prf_commit, prf_verify, scheme_by_name
from mith.corpus import golden_corpus, impossible_statement, square_plus_one_circuit
from mith.errors import MithError
from mith.field import FieldElement, Modulus, RandomSource
from mith.sss import PARTY_PAIRS, ShareRandomness, share, share_sim
from mith.stats import binomial_tolerance, chi2_homogeneity

ALPHA = 0.001


@dataclass
class ExperimentReport:
    """Outcome of one experiment; the verdict re-derives from the numbers.

    kind: two_sided  |rate - bound| <= tolerance
          upper      rate <= bound + tolerance
          lower      rate >= bound - tolerance
    """

    name: str
    trials: int
    successes: int
    bound: float
    tolerance: float
    kind: str = "two_sided"
    detail: str = ""
    rate: float = dfield(init=False)
    verdict: str = dfield(init=False)

    def __post_init__(self):
        if not 0 <= self.successes <= self.trials:
            raise MithError("successes must lie in [0, trials]")
        self.rate = self.successes / self.trials if self.trials else 0.0
        if self.kind == "two_sided":
            ok = abs(self.rate - self.bound) <= self.tolerance
        elif self.kind == "upper":
            ok = self.rate <= self.bound + self.tolerance
        elif self.kind == "lower":
            ok = self.rate >= self.bound - self.tolerance
        else:
            raise MithError(f"unknown experiment kind {self.kind!r}")
        self.verdict = "pass" if ok else "fail"

    def line(self) -> str:
        extra = f"  [{self.detail}]" if self.detail else ""
        return (f"[{self.verdict:4}] {self.name}: rate {self.rate:.6f} "
                f"vs bound {self.bound:.6f} +/-{self.tolerance:.6f} "
                f"({self.successes}/{self.trials}){extra}")

    def to_dict(self) -> dict:
        return {
            "name": self.name, "trials": self.trials,
            "successes": self.successes, "rate": self.rate,
            "bound": self.bound, "tolerance": self.tolerance,
            "kind": self.kind, "verdict": self.verdict, "detail": self.detail,
        }


def _sub_rng(seed, label: str) -> RandomSource:
    if seed is None:
        return RandomSource()
    return RandomSource(f"{seed}/{label}".encode())


# ---------------------------------------------------------------------------
# Completeness


def run_completeness(corpus: Sequence[tuple[Statement, Witness]],
                     trials: int, rng: RandomSource,
                     scheme=None, reps: int = 1) -> ExperimentReport:
    """Honest prover against honest verifier; must never reject."""
    scheme = scheme or scheme_by_name("prf")
    ok = 0
    for t in range(trials):
        s, w = corpus[t % len(corpus)]
        accept = True
        for _ in range(reps):
            rp = proto.random_prover_rand(rng, s.circuit, scheme)
            st, cm = proto.prover_commit(rp, w, s, scheme)
            vst, ch = proto.verifier_challenge(rng, s, cm)
            resp = proto.prover_respond(st, ch)
            if not proto.verifier_check(vst, resp, scheme):
                accept = False
                break
        ok += accept
    return ExperimentReport("completeness", trials, ok, 1.0, 0.0,
                            detail=f"reps={reps}")


# ---------------------------------------------------------------------------
# Soundness: canonical cheating provers


class OneBadPairCheater:
    """Commits a doctored honest-style execution for a false statement.

    The refresh contribution from bad_pair[0] to bad_pair[1] is shifted so
    the opened sharing reconstructs to the (unreachable) target; every
    view is internally coherent, all other pairs stay consistent, and the
    verifier accepts exactly when the challenge avoids bad_pair.
    """

    def __init__(self, s: Statement, w_guess: Witness,
                 bad_pair: tuple[int, int], rng: RandomSource, scheme=None):
        self.scheme = scheme or scheme_by_name("prf")
        self.statement = s
        self.bad_pair = bad_pair
        c = s.circuit
        m = c.modulus
        i0, j0 = bad_pair
        sharings = [
            share(v, ShareRandomness(rng.field_element(m), rng.field_element(m)))
            for v in w_guess.secret_inputs
        ]
        rand = mpc.random_gate_randomness(rng, c)
        result = mpc.run_protocol(s, sharings, rand)
        y = result.outputs[0]
        if y == s.target:
            raise MithError("statement is satisfied; nothing to cheat about")
        lam_j0 = FieldElement(m.recon_weights[j0 - 1], m)
        delta = (s.target - y) * lam_j0.inverse()
        self.views = []
        for q in range(5):
            v = result.views[q]
            bcast = list(v.open_trace.bcast)
            bcast[j0 - 1] = bcast[j0 - 1] + delta
            zin = list(v.open_trace.zin)
            if q == j0 - 1:
                zin[i0 - 1] = zin[i0 - 1] + delta
            self.views.append(mpc.View(
                v.public_inputs, v.secret_shares, v.randomness, v.trace,
                mpc.OpenTrace(tuple(zin), tuple(bcast))))
        self._encoded = [mpc.encode_view(c, v) for v in self.views]
        self._elements = [mpc.view_elements(c, v) for v in self.views]
        self._n_el = mpc.view_element_count(c)

    def commit(self, rng: RandomSource):
        commitments = []
        openings = []
        for q in range(5):
            key = self.scheme.keygen(rng, self._n_el)
            com, op = self.scheme.commit_view(
                key, self._encoded[q], self._elements[q])
            commitments.append(com)
            openings.append(op)
        return proto.CommitmentMsg(tuple(commitments)), tuple(openings)

    def respond(self, openings, ch: tuple[int, int]) -> proto.Response:
        i, j = ch
        return proto.Response((self.views[i - 1], openings[i - 1]),
                              (self.views[j - 1], openings[j - 1]))


class GarbageCheater:
    """Commits honest-looking digests it cannot open; never accepted."""

    def __init__(self, s: Statement, rng: RandomSource, scheme=None):
        self.scheme = scheme or scheme_by_name("prf")
        self.statement = s
        self.bad_pair = None
        c = s.circuit
        m = c.modulus
        # Honest execution for an arbitrary witness, so the views are
        # well-formed; the commitments below just do not match them.
        w = Witness(tuple(m.element(k + 1) for k in range(c.topology.n_secret)))
        sharings = [
            share(v, ShareRandomness(rng.field_element(m), rng.field_element(m)))
            for v in w.secret_inputs
        ]
        self.views = mpc.run_protocol(
            s, sharings, mpc.random_gate_randomness(rng, c)).views
        self._n_el = mpc.view_element_count(c)
        self._enc_len = mpc.encoded_view_length(c)

    def commit(self, rng: RandomSource):
        commitments = tuple(
            self.scheme.dummy_commitment(
                self.scheme.keygen(rng, self._n_el), self._enc_len, self._n_el)
            for _ in range(5))
        openings = tuple(self.scheme.keygen(rng, self._n_el) for _ in range(5))
        return proto.CommitmentMsg(commitments), openings

    def respond(self, openings, ch):
        i, j = ch
        return proto.Response((self.views[i - 1], openings[i - 1]),
                              (self.views[j - 1], openings[j - 1]))


def run_soundness(cheater, trials: int, rng: RandomSource,
                  reps: int = 1, tolerance: float | None = None) -> ExperimentReport:
    """3-pass game against a cheating prover on a false statement.

    With the canonical cheater the per-trial accept event must equal
    "every challenge avoided the bad pair"; any divergence fails the
    experiment outright.
    """
    s = cheater.statement
    scheme = cheater.scheme
    per_run = 1 - 1 / proto.N_CHALLENGES
    bound = per_run ** reps
    if tolerance is None:
        tolerance = binomial_tolerance(bound, trials)
    wins = 0
    exact = True
    for _ in range(trials):
        accept = True
        avoided = True
        for _ in range(reps):
            cm, openings = cheater.commit(rng)
            vst, ch = proto.verifier_challenge(rng, s, cm)
            resp = cheater.respond(openings, ch)
            if not proto.verifier_check(vst, resp, scheme):
                accept = False
            if cheater.bad_pair is not None and ch == cheater.bad_pair:
                avoided = False
        wins += accept
        if cheater.bad_pair is not None and accept != avoided:
            exact = False
    detail = f"reps={reps}"
    if cheater.bad_pair is not None:
        detail += ", accept==challenge-avoids-bad-pair" if exact else ", PER-TRIAL MISMATCH"
    rep = ExperimentReport(f"soundness(reps={reps})", trials, wins,
                           bound if cheater.bad_pair else 0.0,
                           tolerance, kind="two_sided" if cheater.bad_pair else "upper",
                           detail=detail)
    if cheater.bad_pair is not None and not exact:
        rep.verdict = "fail"
    return rep


def canonical_false_statement(m: Modulus | None = None) -> tuple[Statement, Witness]:
    """w0^2 + 1 over F_11 with a target outside its image, plus the
    witness guess the cheater runs with."""
    m = m or Modulus(11)
    c = square_plus_one_circuit(m)
    s = impossible_statement(c)
    return s, Witness((m.element(3),))


# ---------------------------------------------------------------------------
# Zero-knowledge


def run_zk(s: Statement, w: Witness, distinguisher: Callable,
           trials: int, rng: RandomSource, scheme=None,
           tolerance: float | None = None) -> ExperimentReport:
    """Feed the distinguisher real or simulated transcripts on a balanced
    coin schedule; its advantage |rate - 1/2| must stay within tolerance."""
    scheme = scheme or scheme_by_name("prf")
    if tolerance is None:
        tolerance = binomial_tolerance(0.5, trials)
    correct = 0
    for t in range(trials):
        real = t % 2 == 0
        if real:
            rp = proto.random_prover_rand(rng, s.circuit, scheme)
            st, cm = proto.prover_commit(rp, w, s, scheme)
            vst, ch = proto.verifier_challenge(rng, s, cm)
            resp = proto.prover_respond(st, ch)
            verdict = proto.verifier_check(vst, resp, scheme)
            tr = proto.Transcript(cm, ch, resp)
        else:
            def honest_verifier(s_, cm_):
                return PARTY_PAIRS[rng.randbelow(proto.N_CHALLENGES)]
            tr = proto.zk_simulate(s, honest_verifier, rng=rng, scheme=scheme)
            vst = proto.VerifierState(s, tr.commitment, tr.challenge, scheme)
            verdict = proto.verifier_check(vst, tr.response, scheme)
        guess_real = distinguisher(s, verdict, tr)
        correct += (guess_real == real)
    return ExperimentReport(f"zk({getattr(distinguisher, 'label', 'D')})",
                            trials, correct, 0.5, tolerance)


def challenge_only_distinguisher(s, verdict, tr) -> bool:
    """Sees only the challenge; its marginals are identical in both worlds."""
    return PARTY_PAIRS.index(tr.challenge) % 2 == 0


challenge_only_distinguisher.label = "challenge-only"


def validity_distinguisher(s, verdict, tr) -> bool:
    """Claims "real" exactly when the transcript passes verification, the
    one observable a simulator failure would break."""
    return verdict


validity_distinguisher.label = "validity"


def byte_histogram_distinguisher(s, verdict, tr) -> bool:
    """Parity-of-popcount over the opened views' encodings."""
    c = s.circuit
    blob = mpc.encode_view(c, tr.response.first[0]) + mpc.encode_view(c, tr.response.second[0])
    bits = sum(bin(b).count("1") for b in blob)
    return bits % 2 == 0


byte_histogram_distinguisher.label = "byte-histogram"


# ---------------------------------------------------------------------------
# Secret-sharing privacy


def run_sss_privacy(trials: int, rng: RandomSource,
                    m_small: Modulus | None = None,
                    m_large: Modulus | None = None) -> ExperimentReport:
    """Exhaustive equality of corrupt-pair share distributions on F_11 for
    every pair and two fixed secrets, then a chi-square sanity run on the
    larger field."""
    m = m_small or Modulus(11)
    checks = 0
    ok = 0
    for (i, j) in PARTY_PAIRS:
        dists = []
        for secret in (3, 8):
            seen = []
            for a1 in range(m.p):
                for a2 in range(m.p):
                    sh = share(m.element(secret),
                               ShareRandomness(m.element(a1), m.element(a2)))
                    seen.append((sh[i].value, sh[j].value))
            dists.append(sorted(seen))
        checks += 1
        uniform = dists[0] == sorted(
            (a, b) for a in range(m.p) for b in range(m.p))
        ok += (dists[0] == dists[1] and uniform)

    # Larger field: simulated pairs vs real pairs, homogeneity per coordinate.
    ml = m_large or Modulus(97)
    bins = 16
    real = [0] * bins
    sim = [0] * bins
    for _ in range(trials):
        sh = share(ml.element(5), ShareRandomness(
            rng.field_element(ml), rng.field_element(ml)))
        real[(sh[2].value * bins) // ml.p] += 1
        a, b = share_sim(rng, (2, 4), ml)
        sim[(a.value * bins) // ml.p] += 1
    _, pval = chi2_homogeneity(real, sim)
    checks += 1
    ok += (pval >= ALPHA)
    return ExperimentReport("sss-2-privacy", checks, ok, 1.0, 0.0,
                            detail=f"exhaustive pairs + chi2 p={pval:.4f}")


# ---------------------------------------------------------------------------
# MPC privacy


def _pair_projection(c, vi, vj, honest: int) -> tuple[int, ...]:
    """Small tuple of view coordinates used for histogram comparison."""
    cols = mpc._mul_payloads(c, vi)
    first_col = next(iter(cols.values())) if cols else None
    return (
        vi.secret_shares[0].value if vi.secret_shares else 0,
        vj.secret_shares[0].value if vj.secret_shares else 0,
        first_col[honest - 1].value if first_col else 0,
        vi.open_trace.zin[honest - 1].value,
        vi.open_trace.bcast[honest - 1].value,
    )


def run_mpc_privacy(trials: int, rng: RandomSource,
                    s: Statement | None = None,
                    w: Witness | None = None) -> ExperimentReport:
    """Real corrupt-pair views vs simulator output, compared coordinate by
    coordinate with two-sample chi-square tests."""
    if s is None:
        m = Modulus(11)
        c = square_plus_one_circuit(m)
        w = Witness((m.element(3),))
        s = Statement(c, (), m.element(10))
    c = s.circuit
    m = c.modulus
    corrupt = (2, 4)
    honest = 5
    n_coords = 5
    real_counts = [[0] * m.p for _ in range(n_coords)]
    sim_counts = [[0] * m.p for _ in range(n_coords)]
    for _ in range(trials):
        sharings = [
            share(v, ShareRandomness(rng.field_element(m), rng.field_element(m)))
            for v in w.secret_inputs
        ]
        res = mpc.run_protocol(s, sharings, mpc.random_gate_randomness(rng, c))
        pr = _pair_projection(c, res.views[corrupt[0] - 1],
                              res.views[corrupt[1] - 1], honest)
        cs = [share_sim(rng, corrupt, m) for _ in range(c.topology.n_secret)]
        vi, vj = mpc.mpc_simulate(c, s.public_inputs, corrupt, cs,
                                  res.outputs[0], rng)
        ps = _pair_projection(c, vi, vj, honest)
        for k in range(n_coords):
            real_counts[k][pr[k]] += 1
            sim_counts[k][ps[k]] += 1
    ok = 0
    pvals = []
    for k in range(n_coords):
        _, pval = chi2_homogeneity(real_counts[k], sim_counts[k])
        pvals.append(pval)
        ok += (pval >= ALPHA)
    return ExperimentReport("mpc-2-privacy", n_coords, ok, 1.0, 0.0,
                            detail="p=" + ",".join(f"{p:.3f}" for p in pvals))


# ---------------------------------------------------------------------------
# Commitment games


def run_binding(trials: int, rng: RandomSource) -> ExperimentReport:
    """Random-search double-opening attacker; one win is a SHA-256
    HMAC collision."""
    wins = 0
    for _ in range(trials):
        m1, k1 = rng.bytes(8), rng.bytes(32)
        m2, k2 = rng.bytes(8), rng.bytes(32)
        if m1 == m2:
            continue
        c1, _ = prf_commit(k1, m1)
        if prf_verify(m2, c1, k2):
            wins += 1
    return ExperimentReport("binding", trials, wins, 0.0, 0.0, kind="upper")


def run_hiding(trials: int, rng: RandomSource,
               attacker: str = "histogram",
               tolerance: float | None = None) -> ExperimentReport:
    """Left-right hiding game; the attacker guesses which of two fixed
    messages was committed under a fresh key."""
    m0, m1 = b"left-message", b"right-message"
    if tolerance is None:
        tolerance = binomial_tolerance(0.5, trials)
    hist0 = [0] * 256
    train = 2048
    for _ in range(train):
        c, _ = prf_commit(rng.bytes(32), m0)
        hist0[c[0]] += 1

    def guess(c: bytes) -> int.__class__:
        if attacker == "random":
            return rng.randbelow(2)
        # Histogram attacker: byte more typical of m0's training histogram.
        return 0 if hist0[c[0]] * 256 >= train else 1

    correct = 0
    for t in range(trials):
        b = t % 2
        c, _ = prf_commit(rng.bytes(32), m1 if b else m0)
        correct += (guess(c) == b)
    return ExperimentReport(f"hiding({attacker})", trials, correct, 0.5,
                            tolerance)


# ---------------------------------------------------------------------------
# Full suite


def run_all(seed: int | None = None, scale: float = 1.0) -> list[ExperimentReport]:
    """Every experiment at its default trial counts (scaled)."""
    def n(x: int) -> int:
        return max(10, int(x * scale))

    m11 = Modulus(11)
    reports = []

    corpus = golden_corpus(m11, 20)
    reports.append(run_completeness(
        corpus, n(400), _sub_rng(seed, "completeness")))

    s_false, w_guess = canonical_false_statement(m11)
    rng_s = _sub_rng(seed, "soundness")
    cheater = OneBadPairCheater(s_false, w_guess, (1, 2), rng_s)
    reports.append(run_soundness(cheater, n(10_000), rng_s))
    # 6000 trials put the 3-sigma band for 0.9^10 inside +/-0.02.
    reports.append(run_soundness(cheater, n(6_000), rng_s, reps=10,
                                 tolerance=0.02 if scale >= 1 else None))
    garbage = GarbageCheater(s_false, rng_s)
    reports.append(run_soundness(garbage, n(200), rng_s))

    s_zk, w_zk = corpus[1]
    rng_z = _sub_rng(seed, "zk")
    for d in (challenge_only_distinguisher, validity_distinguisher,
              byte_histogram_distinguisher):
        reports.append(run_zk(s_zk, w_zk, d, n(2_000), rng_z))

    reports.append(run_sss_privacy(n(10_000), _sub_rng(seed, "sss")))
    reports.append(run_mpc_privacy(n(4_000), _sub_rng(seed, "mpcpriv")))
    reports.append(run_binding(n(100_000), _sub_rng(seed, "binding")))
    rng_h = _sub_rng(seed, "hiding")
    reports.append(run_hiding(n(100_000), rng_h, attacker="random"))
    reports.append(run_hiding(n(10_000), rng_h, attacker="histogram",
                              tolerance=0.02 if scale >= 1 else None))
    return reports
