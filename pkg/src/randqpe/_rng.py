"""Seed derivation: one 64-bit master value, splitmix-style stream expansion."""

from __future__ import annotations

import numpy as np

_M64 = (1 << 64) - 1


def splitmix64(z: int) -> int:
    z = (z + 0x9E3779B97F4A7C15) & _M64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _M64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _M64
    return (z ^ (z >> 31)) & _M64


def derive_rng(master_seed: int, stream: int = 0) -> np.random.Generator:
    """Independent generator for (master, stream); stable across worker counts."""
    return np.random.Generator(np.random.PCG64(splitmix64((master_seed ^ stream) & _M64)))
