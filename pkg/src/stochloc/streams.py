"""Deterministic per-chain random streams.

Every chain owns its own generator, keyed by (base seed, chain index) through a
fixed 64-bit mixing function.  Results are therefore independent of how chains
are grouped into blocks or fanned across workers.
"""

from __future__ import annotations

import numpy as np

_MASK64 = (1 << 64) - 1


def splitmix64(z: int) -> int:
    """One round of the SplitMix64 mixer (public-domain constants)."""
    z = (z + 0x9E3779B97F4A7C15) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (z ^ (z >> 31)) & _MASK64


def hash64(seed: int, index: int) -> int:
    """Derived stream key: splitmix64(seed XOR splitmix64(index + 1))."""
    return splitmix64((seed & _MASK64) ^ splitmix64((index + 1) & _MASK64))


def chain_stream(seed: int, index: int) -> np.random.Generator:
    """Generator for chain `index` under `seed` (PCG64 keyed by hash64)."""
    return np.random.Generator(np.random.PCG64(hash64(seed, index)))


def block_sizes(n_chains: int, per_chain_bytes: float, cap_bytes: float = 1.5e8) -> list[int]:
    """Split `n_chains` into contiguous blocks whose noise buffers stay under `cap_bytes`.

    The split depends only on the arguments, never on the machine, so block
    boundaries (and hence all derived float reductions) are reproducible.
    """
    if n_chains <= 0:
        return []
    block = max(1, int(cap_bytes // max(per_chain_bytes, 1.0)))
    block = min(block, n_chains)
    sizes = [block] * (n_chains // block)
    if n_chains % block:
        sizes.append(n_chains % block)
    return sizes
