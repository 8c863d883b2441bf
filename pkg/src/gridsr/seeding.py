"""Named substreams derived from a single root seed.

Every random consumer in the package draws from ``substream(seed, *names)``
so that adding a new consumer never perturbs the draws of existing ones.
"""

from __future__ import annotations

import hashlib

import numpy as np

_MASK = (1 << 63) - 1


def _name_key(name: str) -> int:
    digest = hashlib.blake2b(name.encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "little")


def substream(seed: int, *names: str) -> np.random.Generator:
    """Return a Generator keyed by (seed, names); independent per name path."""
    entropy = [int(seed) & _MASK] + [_name_key(n) for n in names]
    return np.random.default_rng(np.random.SeedSequence(entropy))
