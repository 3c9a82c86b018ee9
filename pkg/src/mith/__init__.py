"""MPC-in-the-head zero-knowledge proofs for arithmetic circuits.

A prover emulates a 5-party semi-honest BGW evaluation of the circuit
"in the head", commits to every party's view, and opens the two views a
verifier picks; repetition drives the soundness error of 9/10 per run
down geometrically.
"""

__version__ = "0.1.0"
