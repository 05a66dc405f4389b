"""Deterministic seed derivation for parallel and batched sampling.

Every independent unit of work (a spectrum replicate, a quadrature node,
a path batch) owns a child stream derived from ``(root seed, tag, *indices)``
through :class:`numpy.random.SeedSequence` spawn keys.  The derivation never
depends on worker count or scheduling, so merged results are reproducible
for any parallel layout.
"""

import numpy as np

# Stream namespaces; values are arbitrary but frozen (changing them changes
# every sampled number).
TAG_NOISE = 1
TAG_GBE = 2
TAG_FK_TRACE = 3
TAG_FK_COV = 4
TAG_ENSEMBLE = 5
TAG_REFERENCE = 6
TAG_RIGIDITY_EVAL = 7
TAG_PROBE = 8


def child_seed_sequence(root_seed, tag, *indices):
    """SeedSequence for the work unit ``(tag, *indices)`` under ``root_seed``."""
    return np.random.SeedSequence(root_seed, spawn_key=(tag, *indices))


def derive_rng(root_seed, tag, *indices):
    """Fresh Generator for the work unit ``(tag, *indices)`` under ``root_seed``."""
    return np.random.default_rng(child_seed_sequence(root_seed, tag, *indices))


def spawn_rngs(rng, n):
    """n child Generators split deterministically from an existing Generator."""
    return rng.spawn(n)
