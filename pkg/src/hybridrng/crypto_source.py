"""Counter-mode SHA-256 word source.

Block ``i`` of stream ``s`` is ``SHA-256(s || i)`` with both fields as
8-byte big-endian integers; ``i`` counts from 1.  Each digest yields eight
32-bit words, read as big-endian from the digest bytes in order.
"""

from __future__ import annotations

import hashlib
import struct

import numpy as np

from ._kernels import output_view, sha256_counter_blocks

MAX_U64 = (1 << 64) - 1
WORDS_PER_BLOCK = 8

_BLOCK = struct.Struct(">8I")


def sha256(message: bytes) -> bytes:
    return hashlib.sha256(message).digest()


def derive_message(stream_id: int, counter: int) -> bytes:
    if not 0 <= stream_id <= MAX_U64:
        raise ValueError(f"stream_id out of 64-bit range: {stream_id}")
    if not 1 <= counter <= MAX_U64:
        raise ValueError(f"counter must be in 1..2**64-1, got {counter}")
    return stream_id.to_bytes(8, "big") + counter.to_bytes(8, "big")


def block_words(digest: bytes) -> tuple[int, ...]:
    return _BLOCK.unpack(digest)


class CounterBlockSource:
    """Word-at-a-time and bulk view over one SHA-256 counter stream.

    ``counter`` is the next block index to hash, so ``counter - 1`` is also
    the number of hash invocations performed so far.
    """

    kind = "sha"

    def __init__(self, stream_id: int = 0):
        if not 0 <= stream_id <= MAX_U64:
            raise ValueError(f"stream_id out of 64-bit range: {stream_id}")
        self.stream_id = stream_id
        self.counter = 1
        self.block: tuple[int, ...] = ()
        self.index = WORDS_PER_BLOCK

    @property
    def hash_calls(self) -> int:
        return self.counter - 1

    @property
    def descriptor(self) -> dict:
        return {"kind": "sha", "lcg": "", "k": "", "n": ""}

    def next_block(self) -> tuple[int, ...]:
        self.block = block_words(sha256(derive_message(self.stream_id, self.counter)))
        self.counter += 1
        self.index = 0
        return self.block

    def next_u32(self) -> int:
        if self.index == WORDS_PER_BLOCK:
            self.next_block()
        word = self.block[self.index]
        self.index += 1
        return word

    def fill(self, count: int, out=None) -> np.ndarray:
        """The next *count* words of the stream, as ``uint32``.

        When *out* is given the words are written into its first *count*
        slots and that view is returned.
        """
        out = output_view(count, out)
        if count <= 0:
            return out
        head = min(WORDS_PER_BLOCK - self.index, count)
        out[:head] = self.block[self.index : self.index + head]
        self.index += head
        rest = count - head
        if rest == 0:
            return out
        nblocks = -(-rest // WORDS_PER_BLOCK)
        first = self.counter
        last = first + nblocks - 1
        if last > MAX_U64:
            raise OverflowError("counter exhausted for this stream")
        if last < 1 << 63:
            words = np.empty(WORDS_PER_BLOCK * nblocks, dtype=np.uint32)
            sha256_counter_blocks(self.stream_id >> 32, self.stream_id & 0xFFFFFFFF,
                                  first, nblocks, words)
        else:
            # the compiled path keeps counters in a signed 64-bit register
            digests = b"".join(sha256(derive_message(self.stream_id, i))
                               for i in range(first, last + 1))
            words = np.frombuffer(digests, dtype=">u4").astype(np.uint32)
        out[head:] = words[:rest]
        self.counter = last + 1
        self.block = tuple(int(w) for w in words[-WORDS_PER_BLOCK:])
        self.index = rest - WORDS_PER_BLOCK * (nblocks - 1)
        return out

    def restore(self, counter: int, index: int) -> None:
        """Reposition to a checkpointed ``(counter, index)`` pair."""
        if not 1 <= counter <= MAX_U64 + 1:
            raise ValueError(f"bad counter {counter}")
        if not 0 <= index <= WORDS_PER_BLOCK:
            raise ValueError(f"bad block index {index}")
        if counter == 1:
            if index != WORDS_PER_BLOCK:
                raise ValueError("a source that never hashed must have index 8")
            self.block = ()
        else:
            self.block = block_words(sha256(derive_message(self.stream_id, counter - 1)))
        self.counter = counter
        self.index = index
