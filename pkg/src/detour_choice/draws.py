"""Standard normal draws for simulated likelihood.

Halton dimension ``i`` uses the ``i``-th prime as base. The first
``skip`` points of each sequence are discarded, the remaining
``n_obs * n_draws`` points are dealt to observations in consecutive
blocks and mapped through the inverse normal CDF.
"""
from __future__ import annotations

import numpy as np
from scipy.special import ndtri

PRIMES = (
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71,
    73, 79, 83, 89, 97, 101, 103, 107, 109, 113, 127, 131, 137, 139, 149, 151,
    157, 163, 167, 173, 179, 181, 191, 193, 197, 199, 211, 223, 227, 229, 233,
    239, 241, 251, 257, 263, 269, 271, 277, 281, 283, 293, 307, 311,
)
MAX_DIMS = len(PRIMES)
DRAW_TYPES = ("halton", "pseudo_random")


def halton_sequence(n: int, base: int, skip: int = 10) -> np.ndarray:
    """Radical inverse of the integers ``skip + 1, ..., skip + n`` in ``base``."""
    idx = np.arange(skip + 1, skip + n + 1, dtype=np.int64)
    out = np.zeros(n)
    f = 1.0 / base
    while np.any(idx > 0):
        out += f * (idx % base)
        idx //= base
        f /= base
    return out


def make_draws(n_obs: int, n_draws: int, n_dims: int, draw_type: str = "halton",
               seed: int = 0, skip: int = 10) -> np.ndarray:
    """Draw tensor of shape ``(n_obs, n_draws, n_dims)``."""
    if n_obs < 1 or n_draws < 1 or n_dims < 0:
        raise ValueError("draw tensor sizes must be positive")
    if n_dims > MAX_DIMS:
        raise ValueError(f"at most {MAX_DIMS} Halton dimensions are available, got {n_dims}")
    if draw_type == "halton":
        out = np.empty((n_obs, n_draws, n_dims))
        for d in range(n_dims):
            u = halton_sequence(n_obs * n_draws, PRIMES[d], skip)
            out[:, :, d] = ndtri(u).reshape(n_obs, n_draws)
        return out
    if draw_type in ("pseudo_random", "random"):
        rng = np.random.default_rng(seed)
        return rng.standard_normal((n_obs, n_draws, n_dims))
    raise ValueError(f"unknown draw type {draw_type!r}; expected one of {DRAW_TYPES}")
