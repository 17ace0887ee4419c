"""Counter-based random streams keyed by (seed, module, index).

Every randomized routine asks for its own stream so that parallel or
reordered execution reproduces the same numbers.
"""
from __future__ import annotations

import zlib
from fractions import Fraction

import numpy as np

_MASK64 = (1 << 64) - 1


def stream(seed: int, module: str, index: int = 0) -> np.random.Generator:
    key = [seed & _MASK64, zlib.crc32(module.encode("utf-8"))]
    counter = [0, 0, index & _MASK64, 0]
    return np.random.Generator(np.random.Philox(key=key, counter=counter))


def dyadic(gen: np.random.Generator, bits: int = 53) -> Fraction:
    """Uniform exact dyadic rational in [0, 1) with the given number of bits."""
    if bits <= 63:
        n = int(gen.integers(0, 1 << bits))
    else:
        hi = int(gen.integers(0, 1 << 32))
        lo = int(gen.integers(0, 1 << (bits - 32)))
        n = (hi << (bits - 32)) | lo
    return Fraction(n, 1 << bits)
