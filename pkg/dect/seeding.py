"""Named random substreams derived from a single experiment seed.

Every consumer of randomness asks for a stream by name (``"data"``, ``"init"``,
``"shuffle"``, ...). Streams with different names are statistically
independent, and the same ``(seed, name)`` pair always yields the same stream,
regardless of the order in which streams are requested.
"""

import numpy as np

from .hash import fnv1a

DATA = "data"
INIT = "init"
SHUFFLE = "shuffle"


def substream(seed: int, name: str) -> np.random.Generator:
    """Create the generator for substream ``name`` of ``seed``."""
    sequence = np.random.SeedSequence(entropy=int(seed), spawn_key=(fnv1a(name.encode()),))
    return np.random.default_rng(sequence)


def subseed(seed: int, name: str) -> int:
    """Derive a plain integer seed for APIs that want one."""
    return int(substream(seed, name).integers(0, 2**31 - 1))
