"""Compiled inner loop for walk-based position proposals.

Mirrors :func:`anthill.rng.random_walk` followed by :func:`anthill.rng.scale_walk`
exactly (same draw order, same floating-point expression), but only keeps the
running min, max and the entry at the requested step.
"""
import numba
import numpy as np

from .rng import GOLDEN_GAMMA

_GAMMA = np.uint64(GOLDEN_GAMMA)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_HALF = np.uint64(1 << 52)  # (z >> 11) > 2**52  <=>  uniform > 0.5


@numba.njit(cache=True)
def scaled_walk_entries(state, lo, hi, t, n_steps):
    """One walk of ``n_steps`` per coordinate, min-max scaled into
    ``[lo[i], hi[i]]``; returns the entries at step ``t`` and the new state."""
    n = lo.shape[0]
    out = np.empty(n)
    for i in range(n):
        pos = 0
        mn = 0
        mx = 0
        val = 0
        for k in range(1, n_steps + 1):
            state = state + _GAMMA
            z = state
            z = (z ^ (z >> np.uint64(30))) * _M1
            z = (z ^ (z >> np.uint64(27))) * _M2
            z = z ^ (z >> np.uint64(31))
            if (z >> np.uint64(11)) > _HALF:
                pos += 1
            else:
                pos -= 1
            if pos < mn:
                mn = pos
            elif pos > mx:
                mx = pos
            if k == t:
                val = pos
        a = lo[i]
        b = hi[i]
        if mx == mn:
            out[i] = 0.5 * (a + b)
        else:
            y = (float(val) - float(mn)) / (float(mx) - float(mn)) * (b - a) + a
            out[i] = min(max(y, a), b)
    return out, state


def walk_entries(stream, lo, hi, t, n_steps):
    """Python-facing wrapper that advances ``stream`` in place."""
    # the state must reach the kernel as uint64; a Python int would be typed
    # int64 and silently promote the arithmetic to float
    out, state = scaled_walk_entries(np.uint64(stream.state), lo, hi, t, n_steps)
    stream.state = int(state)
    return out
