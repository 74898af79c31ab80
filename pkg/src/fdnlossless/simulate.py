"""Sample-by-sample FDN engine built on ring-buffer delay lines."""

from __future__ import annotations

import numpy as np

from .model import DimensionError, DomainError, FdnSystem, as_delays


class DelayLineBank:
    """One FIFO per delay line; line ``i`` always holds exactly ``m[i]`` complex samples.

    All lines share a flat buffer. ``pos[i]`` points at the oldest sample of
    line ``i``, which is also where the newest sample is written after it is read.
    """

    def __init__(self, m):
        self.m = as_delays(m)
        self.offsets = np.concatenate(([0], np.cumsum(self.m)[:-1]))
        self.buffer = np.zeros(int(self.m.sum()), dtype=complex)
        self.pos = np.zeros(self.m.size, dtype=np.int64)

    @property
    def N(self) -> int:
        return self.m.size

    def copy(self) -> DelayLineBank:
        other = DelayLineBank(self.m)
        other.buffer[:] = self.buffer
        other.pos[:] = self.pos
        return other

    def outputs(self) -> np.ndarray:
        """Current delay outputs ``s_i(n)``."""
        return self.buffer[self.offsets + self.pos]

    def line(self, i: int) -> np.ndarray:
        """Contents of line ``i``, oldest first."""
        a = self.offsets[i]
        seg = self.buffer[a : a + self.m[i]]
        return np.roll(seg, -int(self.pos[i]))

    def push(self, values: np.ndarray) -> None:
        self.buffer[self.offsets + self.pos] = values
        self.pos += 1
        self.pos[self.pos == self.m] = 0


def tick(sys: FdnSystem, bank: DelayLineBank, x: complex) -> complex:
    """Advance one sample in place and return the output ``y(n)``."""
    if bank.N != sys.N or not np.array_equal(bank.m, sys.m):
        raise DimensionError("delay line bank does not match the system delays")
    s = bank.outputs()
    y = sys.c @ s + sys.d * x
    bank.push(sys.A @ s + sys.b * x)
    return complex(y)


def run(sys: FdnSystem, x, bank: DelayLineBank | None = None) -> np.ndarray:
    """Process an input sequence, starting from ``bank`` or from silence."""
    bank = DelayLineBank(sys.m) if bank is None else bank
    if bank.N != sys.N or not np.array_equal(bank.m, sys.m):
        raise DimensionError("delay line bank does not match the system delays")
    x = np.asarray(x, dtype=complex)
    y = np.empty(x.size, dtype=complex)
    A, b, c, d = sys.A, sys.b, sys.c, sys.d
    idx_base = bank.offsets
    for n in range(x.size):
        idx = idx_base + bank.pos
        s = bank.buffer[idx]
        y[n] = c @ s + d * x[n]
        bank.buffer[idx] = A @ s + b * x[n]
        bank.pos += 1
        bank.pos[bank.pos == bank.m] = 0
    return y


def render_ir(sys: FdnSystem, length: int) -> np.ndarray:
    """Impulse response of length ``length`` from zero initial state."""
    if length < 1:
        raise DomainError("impulse response length must be >= 1")
    x = np.zeros(length, dtype=complex)
    x[0] = 1.0
    return run(sys, x)


def weighted_energy(bank: DelayLineBank, e) -> float:
    """Stored energy ``sum_i (1/e_i) sum |s|^2`` over the samples held in line ``i``."""
    e = np.asarray(e, dtype=float)
    if e.size != bank.N:
        raise DimensionError(f"weight vector has length {e.size}, bank has {bank.N} lines")
    if np.any(e <= 0):
        raise DomainError("energy weights must be positive")
    line_energy = np.add.reduceat(np.abs(bank.buffer) ** 2, bank.offsets)
    return float(np.sum(line_energy / e))
