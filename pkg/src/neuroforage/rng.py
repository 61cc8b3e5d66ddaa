"""Deterministic seed derivation.

Every source of randomness in the package is a numpy Generator seeded
through :func:`derive_seed`. A run's master seed plus a named path of
labels/indices hashes to a child seed, so results never depend on call
order, scheduling, or ambient entropy, and any subcomputation can be
reproduced in isolation from its path.
"""

from __future__ import annotations

import hashlib

import numpy as np


def derive_seed(*path: int | str) -> int:
    """Hash a derivation path to a 64-bit seed.

    Components may be ints or strings; the encoding keeps them
    distinguishable (derive_seed(1, "2") != derive_seed(12)).
    """
    h = hashlib.sha256()
    for part in path:
        if isinstance(part, bool) or not isinstance(part, (int, str)):
            raise TypeError(f"seed path components must be int or str, got {part!r}")
        token = f"i{part}" if isinstance(part, int) else f"s{part}"
        h.update(token.encode("utf-8"))
        h.update(b"\x00")
    return int.from_bytes(h.digest()[:8], "big")


def generator(*path: int | str) -> np.random.Generator:
    """A fresh Generator seeded from the derivation path."""
    return np.random.default_rng(derive_seed(*path))
