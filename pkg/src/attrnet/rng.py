"""Deterministic random streams.

Every stochastic routine in this package draws from a Philox4x64-10
counter-based generator (numpy's ``np.random.Philox``) keyed directly with a
64-bit unsigned seed: key words ``[seed, 0]``, counter starting at zero.
Uniform doubles are produced the numpy way, ``(x >> 11) * 2**-53`` from each
64-bit output word.  Because Philox is a published, stateless cipher and the
double mapping is fixed, any implementation of Philox4x64-10 can reproduce
the streams, and therefore the sampled graphs, bit for bit.

Independent streams for replications are derived with SplitMix64: the seed
for replication ``r`` under master seed ``m`` is the ``(r+1)``-th output of a
SplitMix64 sequence started at state ``m``.  Nested derivations chain the
same rule.

The first outputs of both primitives are frozen in ``tests/test_rng.py`` as a
reference sequence.
"""

import numpy as np

from .errors import ModelError

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def check_seed(seed) -> int:
    """Validate and return a 64-bit unsigned seed."""
    seed = int(seed)
    if not 0 <= seed <= _MASK64:
        raise ModelError(f"seed must be a 64-bit unsigned integer, got {seed}")
    return seed


def splitmix64(state: int) -> int:
    """SplitMix64 finalizer applied to ``state`` (one output word)."""
    z = (state + _GOLDEN) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def derive_seed(master: int, index: int) -> int:
    """Seed for the ``index``-th child stream of ``master``.

    Equals the ``(index+1)``-th output of SplitMix64 started at ``master``,
    so children are mutually independent draws from the mixer.
    """
    master = check_seed(master)
    if index < 0:
        raise ModelError(f"stream index must be nonnegative, got {index}")
    return splitmix64((master + index * _GOLDEN) & _MASK64)


def derive_path(master: int, *indices: int) -> int:
    """Chain ``derive_seed`` along a path of stream indices."""
    seed = check_seed(master)
    for index in indices:
        seed = derive_seed(seed, index)
    return seed


def generator(seed: int) -> np.random.Generator:
    """Philox4x64-10 generator keyed with ``seed`` (counter starts at 0)."""
    return np.random.Generator(np.random.Philox(key=check_seed(seed)))
