"""Seeded random streams.

Every stream is a numpy ``Generator`` over PCG64 (O'Neill's permuted
congruential generator, 128-bit state, 64-bit output), so a seed yields the
same sequence on every platform.  Independent sub-streams are derived as
``seed XOR h(key)`` where ``h`` is the first 8 bytes of BLAKE2b over the
UTF-8 key, read big-endian.
"""

from __future__ import annotations

import hashlib
import secrets

import numpy as np

MASK64 = (1 << 64) - 1

# open-interval uniforms: (k + 0.5) / 2**53 never hits 0 or 1
_U_BITS = 53
_U_SCALE = float(1 << _U_BITS)


def stable_hash(key: str) -> int:
    return int.from_bytes(hashlib.blake2b(key.encode("utf-8"), digest_size=8).digest(), "big")


def derive_seed(seed: int, key: str) -> int:
    return (seed & MASK64) ^ stable_hash(key)


def make_rng(seed: int, key: str | None = None) -> np.random.Generator:
    s = seed & MASK64 if key is None else derive_seed(seed, key)
    return np.random.Generator(np.random.PCG64(s))


def random_seed() -> int:
    return secrets.randbits(63)


def open_uniform(rng: np.random.Generator, size=None):
    """Uniform draws strictly inside (0, 1)."""
    k = rng.integers(0, 1 << _U_BITS, size=size, dtype=np.int64)
    return (k + 0.5) / _U_SCALE
