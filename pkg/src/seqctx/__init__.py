"""Exact tools for sequential-transformation contextuality.

Modules: ``qsim`` (single-qubit phase-gate resource), ``boolfn``
(distance to affine functions), ``gf2`` (affine GF(2) ontologies),
``parity`` (non-contextual AND realisations), ``fraction`` (contextual
fraction by exact LP), ``tbqc`` (protocol runs and the failure bound).
"""
from .boolfn import AffineFn, BoolFn, distance, nu_bruteforce, nu_fwht
from .fraction import EmpiricalModel, cf, decompose, is_strongly_contextual, ncf
from .gf2 import GF2AffineMap, OnticState, Partition, cnot_gate, compose, not_gate
from .parity import NCAssignment, evaluate_contexts, exhaustive_search, parity_check
from .qsim import ResourceSpec
from .tbqc import Protocol, and_protocol, run, sweep_noise, verify_bound

__version__ = "0.1.0"
