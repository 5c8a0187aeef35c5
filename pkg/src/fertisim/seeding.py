"""Stateless deterministic pseudo-random values derived from integer keys.

Everything in the simulator that looks random (per-plant growth jitter,
irrigation response lag) is a pure function of the scenario seed plus a
context key, so trajectories are reproducible bit-for-bit and independent
of call order.
"""

from __future__ import annotations

_MASK64 = (1 << 64) - 1


def _mix(x: int) -> int:
    # splitmix64 finalizer
    x &= _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return x ^ (x >> 31)


def unit_hash(*parts: int) -> float:
    """Map integer keys to a reproducible float in [0, 1)."""
    acc = 0
    for p in parts:
        acc = _mix((acc ^ (int(p) & _MASK64)) + 0x9E3779B97F4A7C15)
    return (acc >> 11) * 2.0**-53
