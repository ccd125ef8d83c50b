"""Unscrambled Sobol sequences (Gray-code order, Joe-Kuo direction numbers)."""

import numpy as np

from ._joe_kuo import JOE_KUO
from .exceptions import DimensionUnsupported

BITS = 52
MAX_DIM = 1 + len(JOE_KUO)


def _direction_numbers(dim):
    """Integer direction numbers ``V[j, i]`` scaled to ``BITS`` bits."""
    V = np.zeros((dim, BITS), dtype=np.uint64)
    for i in range(BITS):
        V[0, i] = 1 << (BITS - 1 - i)
    for j in range(1, dim):
        _, s, a, m_init = JOE_KUO[j - 1]
        m = list(m_init)
        for i in range(s, BITS):
            new = m[i - s] ^ (m[i - s] << s)
            for k in range(1, s):
                if (a >> (s - 1 - k)) & 1:
                    new ^= m[i - k] << k
            m.append(new)
        for i in range(BITS):
            V[j, i] = m[i] << (BITS - 1 - i)
    return V


class SobolSequence:
    """Stateful generator; ``next_index`` is the index of the next point.

    Index 0 is the all-zeros point.  Points are produced in Gray-code order,
    which yields the same set as natural order for every power-of-two block.
    """

    def __init__(self, dim, skip=0):
        if not 1 <= dim <= MAX_DIM:
            raise DimensionUnsupported(f"Sobol dimension must be in [1, {MAX_DIM}], got {dim}")
        if skip < 0:
            raise ValueError("skip must be >= 0")
        self.dim = int(dim)
        self._V = _direction_numbers(self.dim)
        self._state = np.zeros(self.dim, dtype=np.uint64)
        self.next_index = 0
        self.fast_forward(skip)

    def fast_forward(self, n):
        # Gray code of the target index gives the state directly.
        target = self.next_index + int(n)
        if target >= 2**BITS:
            raise ValueError("Sobol index exhausted")
        gray = target ^ (target >> 1)
        state = np.zeros(self.dim, dtype=np.uint64)
        i = 0
        while gray:
            if gray & 1:
                state ^= self._V[:, i]
            gray >>= 1
            i += 1
        self._state = state
        self.next_index = target
        return self

    def draw(self, count):
        out = np.empty((count, self.dim))
        scale = 1.0 / float(2**BITS)
        for r in range(count):
            out[r] = self._state.astype(np.float64) * scale
            n = self.next_index
            # position of the lowest zero bit of n
            c = (~n & (n + 1)).bit_length() - 1
            if c >= BITS:
                raise ValueError("Sobol index exhausted")
            self._state = self._state ^ self._V[:, c]
            self.next_index = n + 1
        return out


def sobol_points(dimension, count, skip=1):
    """Points ``skip+1 .. skip+count`` (1-based) of the Sobol sequence.

    With the default ``skip=1`` the all-zeros origin is dropped.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    return SobolSequence(dimension, skip=skip).draw(count)
