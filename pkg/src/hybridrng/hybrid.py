"""Combined SHA-256 / LCG generator.

A buffer of ``k`` cryptographic words (the *size*) is XORed against
successive LCG output words: output ``t`` uses buffer slot ``t mod k``, and
after ``n`` full passes (the *repetition*) the buffer is refilled with the
next ``k`` words of the SHA-256 counter stream.  Refills are lazy: the
buffer is replaced when the word after a completed generation is requested.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np

from ._kernels import hybrid_words, output_view
from .crypto_source import MAX_U64, WORDS_PER_BLOCK, CounterBlockSource
from .lcg import (
    DEFAULT_SEED,
    GLIBC,
    MASK32,
    SUPER_DUPER,
    Lcg32Config,
    Lcg32Generator,
    lcg_next_u32,
    lookup_config,
)

# Repetition presets; compare them with `hybridrng sweep` over the same n values.
PRESETS = {"conservative": 16, "balanced": 128, "fast": 256}
DEFAULT_PRESET = "balanced"


def default_size(config: Lcg32Config) -> int:
    """Buffer size with the best measured quality for each built-in LCG."""
    return 32 if config.name == GLIBC.name else 16


@dataclass(frozen=True)
class HybridParams:
    size: int
    repetition: int

    def __post_init__(self):
        for field in ("size", "repetition"):
            value = getattr(self, field)
            if not isinstance(value, (int, np.integer)) or isinstance(value, bool):
                raise TypeError(f"{field} must be an integer")
            if not 1 <= value <= MASK32:
                raise ValueError(f"{field} must be in 1..2**32-1, got {value}")

    @property
    def generation(self) -> int:
        """Output words produced per buffer of cryptographic words."""
        return self.size * self.repetition

    @classmethod
    def preset(cls, name: str, config: Lcg32Config = SUPER_DUPER) -> "HybridParams":
        try:
            n = PRESETS[name]
        except KeyError:
            raise ValueError(
                f"unknown preset {name!r}; choose one of {', '.join(PRESETS)}"
            ) from None
        return cls(default_size(config), n)


class HybridGenerator:
    kind = "hybrid"

    def __init__(self, params: HybridParams, lcg_config: Lcg32Config = SUPER_DUPER,
                 lcg_seed: int = DEFAULT_SEED, stream_id: int = 0):
        self.params = params
        self.crypto = CounterBlockSource(stream_id)
        self.lcg = Lcg32Generator(lcg_config, lcg_seed)
        self.buffer = self.crypto.fill(params.size)
        self.passes = 0
        self.pos = 0

    @property
    def stream_id(self) -> int:
        return self.crypto.stream_id

    @property
    def descriptor(self) -> dict:
        return {"kind": "hybrid", "lcg": self.lcg.config.name,
                "k": self.params.size, "n": self.params.repetition}

    def _refill(self) -> None:
        self.buffer = self.crypto.fill(self.params.size)
        self.passes = 0
        self.pos = 0

    def next_u32(self) -> int:
        k = self.params.size
        if self.passes == self.params.repetition:
            self._refill()
        word, self.lcg.state = lcg_next_u32(self.lcg.state, self.lcg.config)
        self.lcg.steps += 2
        out = int(self.buffer[self.pos]) ^ word
        self.pos += 1
        if self.pos == k:
            self.pos = 0
            self.passes += 1
        return out

    def fill(self, count: int, out=None) -> np.ndarray:
        """Bulk equivalent of *count* calls to :meth:`next_u32`."""
        out = output_view(count, out)
        if count <= 0:
            return out
        k = self.params.size
        n = self.params.repetition
        left_in_generation = (n - self.passes) * k - self.pos
        refills = -(-max(count - left_in_generation, 0) // (k * n))
        crypto = self.crypto.fill(refills * k)
        lcg = self.lcg
        self.passes, self.pos, state = hybrid_words(
            out, self.buffer, crypto, k, n, self.passes, self.pos,
            lcg.state, lcg.config.multiplier, lcg.config.addend)
        lcg.state = int(state)
        lcg.steps += 2 * count
        return out

    # checkpointing -------------------------------------------------------

    _HEAD = struct.Struct(">IIQQI")
    _TAIL = struct.Struct(">IIIII")

    def checkpoint(self) -> bytes:
        """Serialize the full generator state; see ``docs/checkpoint.md``."""
        k = self.params.size
        head = self._HEAD.pack(k, self.params.repetition, self.crypto.stream_id,
                               self.crypto.counter, self.crypto.index)
        body = struct.pack(f">{k}I", *(int(w) for w in self.buffer))
        tail = self._TAIL.pack(self.passes, self.pos, self.lcg.state,
                               self.lcg.config.multiplier, self.lcg.config.addend)
        return head + body + tail

    @classmethod
    def from_checkpoint(cls, data: bytes) -> "HybridGenerator":
        hs, ts = cls._HEAD.size, cls._TAIL.size
        if len(data) < hs + ts:
            raise ValueError("checkpoint too short")
        k, n, stream_id, counter, index = cls._HEAD.unpack_from(data)
        if len(data) != hs + 4 * k + ts:
            raise ValueError(f"checkpoint length {len(data)} does not match size {k}")
        buffer = np.frombuffer(data, dtype=">u4", count=k, offset=hs).astype(np.uint32)
        passes, pos, state, multiplier, addend = cls._TAIL.unpack_from(data, hs + 4 * k)
        if not (passes <= n and pos < k and (passes < n or pos == 0)):
            raise ValueError("inconsistent pass/position counters")

        gen = cls.__new__(cls)
        gen.params = HybridParams(k, n)
        gen.crypto = CounterBlockSource(stream_id)
        gen.crypto.restore(counter, index)
        gen.lcg = Lcg32Generator(lookup_config(multiplier, addend), state)
        gen.buffer = buffer
        gen.passes = passes
        gen.pos = pos
        return gen


def new_hybrid(params: HybridParams, lcg_config: Lcg32Config = SUPER_DUPER,
               lcg_seed: int = DEFAULT_SEED, stream_id: int = 0) -> HybridGenerator:
    return HybridGenerator(params, lcg_config, lcg_seed, stream_id)


def reference_combine(params: HybridParams, crypto_words, lcg_words) -> list[int]:
    """Straight-line version of the combining schedule, for cross-checking."""
    k, n = params.size, params.repetition
    total = len(lcg_words)
    generations = -(-total // (k * n))
    if len(crypto_words) < k * generations:
        raise ValueError(
            f"need {k * generations} crypto words for {total} outputs, got {len(crypto_words)}"
        )
    result = []
    t = 0
    for g in range(generations):
        buffer = crypto_words[g * k : (g + 1) * k]
        for _ in range(n):
            for j in range(k):
                if t == total:
                    return result
                result.append(int(buffer[j]) ^ int(lcg_words[t]))
                t += 1
    return result


def expected_hash_calls(params: HybridParams, words: int) -> int:
    """SHA-256 invocations needed by a fresh generator to emit *words* words."""
    generations = max(1, -(-words // params.generation))
    return -(-generations * params.size // WORDS_PER_BLOCK)


def make_parallel_streams(params: HybridParams, lcg_config: Lcg32Config,
                          base_lcg_seed: int, base_stream_id: int,
                          count: int) -> list[HybridGenerator]:
    """Generators with consecutive stream ids and consecutive LCG seeds."""
    if count < 1:
        raise ValueError("count must be at least 1")
    if base_stream_id < 0 or base_stream_id + count - 1 > MAX_U64:
        raise ValueError("stream ids would wrap past 2**64-1")
    return [
        HybridGenerator(params, lcg_config, (base_lcg_seed + j) & MASK32, base_stream_id + j)
        for j in range(count)
    ]


def pure_sha_generator(stream_id: int = 0) -> CounterBlockSource:
    return CounterBlockSource(stream_id)


def pure_lcg_generator(config: Lcg32Config = SUPER_DUPER, seed: int = DEFAULT_SEED,
                       raw: bool = False) -> Lcg32Generator:
    return Lcg32Generator(config, seed, raw=raw)
