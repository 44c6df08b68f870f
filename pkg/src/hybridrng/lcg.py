"""32-bit linear congruential generators with modulus 2**32.

Three classic parameter sets are built in.  Output words are formed by
stepping twice and concatenating the top 16 bits of each new state, first
step in the high half, which hides the short periods of the low-order bits.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._kernels import lcg_states, lcg_words, output_view

MASK32 = 0xFFFFFFFF


@dataclass(frozen=True)
class Lcg32Config:
    name: str
    multiplier: int
    addend: int

    def __post_init__(self):
        for field in ("multiplier", "addend"):
            value = getattr(self, field)
            if not 0 <= value <= MASK32:
                raise ValueError(f"{field} must fit in 32 bits, got {value}")


SUPER_DUPER = Lcg32Config("superduper", 69069, 1)
GLIBC = Lcg32Config("glibc", 1103515245, 12345)
BORLAND = Lcg32Config("borland", 22695477, 1)

BUILTIN = {c.name: c for c in (SUPER_DUPER, GLIBC, BORLAND)}

DEFAULT_SEED = 1


def get_config(name: str) -> Lcg32Config:
    try:
        return BUILTIN[name]
    except KeyError:
        raise ValueError(
            f"unknown LCG {name!r}; choose one of {', '.join(BUILTIN)}"
        ) from None


def lookup_config(multiplier: int, addend: int) -> Lcg32Config:
    """Return the built-in config with these constants, or a ``custom`` one."""
    for config in BUILTIN.values():
        if (config.multiplier, config.addend) == (multiplier, addend):
            return config
    return Lcg32Config("custom", multiplier, addend)


def lcg_step(state: int, config: Lcg32Config) -> int:
    return (config.multiplier * state + config.addend) & MASK32


def lcg_next_u32(state: int, config: Lcg32Config) -> tuple[int, int]:
    """Advance twice and return ``(word, new_state)``."""
    first = lcg_step(state, config)
    second = lcg_step(first, config)
    return (first & 0xFFFF0000) | (second >> 16), second


def bit_period(config: Lcg32Config, seed: int, bit_index: int, max_steps: int):
    """Smallest period of one bit of the raw state sequence, starting at *seed*.

    Returns ``None`` when no period up to *max_steps* exists.  Bit ``b`` only
    depends on the state modulo ``2**(b+1)``, so agreement over that many
    states plus the candidate shift is conclusive; the window is capped at
    ``2**20`` states for high bits, where the answer becomes a strong
    heuristic rather than a proof.
    """
    if max_steps < 2:
        raise ValueError("max_steps must be at least 2")
    if not 0 <= bit_index <= 31:
        raise ValueError("bit_index must be in 0..31")
    window = min(1 << (bit_index + 1), 1 << 20)
    states = np.empty(window + max_steps, dtype=np.uint32)
    states[0] = seed & MASK32
    states[1:] = raw_states(config, seed, len(states) - 1)
    bits = (states >> np.uint32(bit_index)) & np.uint32(1)
    for p in range(1, max_steps + 1):
        if np.array_equal(bits[:window], bits[p : p + window]):
            return p
    return None


def raw_states(config: Lcg32Config, seed: int, steps: int) -> np.ndarray:
    """The *steps* states following *seed*."""
    out = np.empty(steps, dtype=np.uint32)
    lcg_states(seed & MASK32, config.multiplier, config.addend, out)
    return out


class Lcg32Generator:
    """Stateful word source over one LCG.

    With ``raw=True`` every step emits its full 32-bit state instead of the
    two-step high-bit concatenation.
    """

    kind = "lcg"

    def __init__(self, config: Lcg32Config = SUPER_DUPER, seed: int = DEFAULT_SEED,
                 raw: bool = False):
        self.config = config
        self.state = seed & MASK32
        self.raw = raw
        self.steps = 0

    @property
    def descriptor(self) -> dict:
        return {"kind": "lcg-raw" if self.raw else "lcg", "lcg": self.config.name,
                "k": "", "n": ""}

    def next_u32(self) -> int:
        if self.raw:
            self.state = lcg_step(self.state, self.config)
            self.steps += 1
            return self.state
        word, self.state = lcg_next_u32(self.state, self.config)
        self.steps += 2
        return word

    def fill(self, count: int, out=None) -> np.ndarray:
        out = output_view(count, out)
        if count <= 0:
            return out
        kernel = lcg_states if self.raw else lcg_words
        self.state = int(kernel(self.state, self.config.multiplier, self.config.addend, out))
        self.steps += count if self.raw else 2 * count
        return out
