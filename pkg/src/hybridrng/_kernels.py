"""Compiled inner loops for bulk generation.

The LCG loops keep state in int64 masked back to 32 bits, which stops numba
from promoting mixed signed/unsigned expressions to float.  The per-word
Python paths elsewhere in the package are the reference these loops are
tested against.
"""

import numpy as np
from numba import njit, uint32

M32 = 0xFFFFFFFF
HI16 = 0xFFFF0000


def output_view(count, out=None):
    """A ``uint32`` array of length *count*, carved from *out* when given."""
    count = max(count, 0)
    if out is None:
        return np.empty(count, dtype=np.uint32)
    if out.dtype != np.uint32 or out.ndim != 1 or out.size < count:
        raise ValueError("out must be a 1-D uint32 array with room for count words")
    return out[:count]

_K = np.array([
    0x428a2f98, 0x71374491, 0xb5c0fbcf, 0xe9b5dba5, 0x3956c25b, 0x59f111f1, 0x923f82a4, 0xab1c5ed5,
    0xd807aa98, 0x12835b01, 0x243185be, 0x550c7dc3, 0x72be5d74, 0x80deb1fe, 0x9bdc06a7, 0xc19bf174,
    0xe49b69c1, 0xefbe4786, 0x0fc19dc6, 0x240ca1cc, 0x2de92c6f, 0x4a7484aa, 0x5cb0a9dc, 0x76f988da,
    0x983e5152, 0xa831c66d, 0xb00327c8, 0xbf597fc7, 0xc6e00bf3, 0xd5a79147, 0x06ca6351, 0x14292967,
    0x27b70a85, 0x2e1b2138, 0x4d2c6dfc, 0x53380d13, 0x650a7354, 0x766a0abb, 0x81c2c92e, 0x92722c85,
    0xa2bfe8a1, 0xa81a664b, 0xc24b8b70, 0xc76c51a3, 0xd192e819, 0xd6990624, 0xf40e3585, 0x106aa070,
    0x19a4c116, 0x1e376c08, 0x2748774c, 0x34b0bcb5, 0x391c0cb3, 0x4ed8aa4a, 0x5b9cca4f, 0x682e6ff3,
    0x748f82ee, 0x78a5636f, 0x84c87814, 0x8cc70208, 0x90befffa, 0xa4506ceb, 0xbef9a3f7, 0xc67178f2,
], dtype=np.uint32)

_H0 = np.array([
    0x6a09e667, 0xbb67ae85, 0x3c6ef372, 0xa54ff53a,
    0x510e527f, 0x9b05688c, 0x1f83d9ab, 0x5be0cd19,
], dtype=np.uint32)


@njit(cache=True, inline="always")
def _rotr(x, n):
    return uint32((x >> uint32(n)) | (x << uint32(32 - n)))


@njit(cache=True)
def sha256_counter_blocks(sid_hi, sid_lo, first, nblocks, out):
    """Digest words of SHA-256(stream_id || counter) for counters first..first+nblocks-1.

    The 16-byte message always pads to a single 64-byte block, so one
    compression per counter suffices.  ``out`` receives 8 words per block.
    This loop works in native uint32 so rotations compile to single
    instructions.
    """
    w = np.empty(64, dtype=np.uint32)
    for b in range(nblocks):
        ctr = first + b
        w[0] = sid_hi
        w[1] = sid_lo
        w[2] = (ctr >> 32) & M32
        w[3] = ctr & M32
        w[4] = 0x80000000
        for i in range(5, 15):
            w[i] = 0
        w[15] = 128  # message length in bits
        for i in range(16, 64):
            x = w[i - 15]
            y = w[i - 2]
            s0 = _rotr(x, 7) ^ _rotr(x, 18) ^ uint32(x >> uint32(3))
            s1 = _rotr(y, 17) ^ _rotr(y, 19) ^ uint32(y >> uint32(10))
            w[i] = uint32(w[i - 16] + s0 + w[i - 7] + s1)
        a = _H0[0]
        bb = _H0[1]
        c = _H0[2]
        d = _H0[3]
        e = _H0[4]
        f = _H0[5]
        g = _H0[6]
        h = _H0[7]
        for i in range(64):
            t1 = uint32(h + (_rotr(e, 6) ^ _rotr(e, 11) ^ _rotr(e, 25))
                        + ((e & f) ^ (uint32(~e) & g)) + _K[i] + w[i])
            t2 = uint32((_rotr(a, 2) ^ _rotr(a, 13) ^ _rotr(a, 22))
                        + ((a & bb) ^ (a & c) ^ (bb & c)))
            h = g
            g = f
            f = e
            e = uint32(d + t1)
            d = c
            c = bb
            bb = a
            a = uint32(t1 + t2)
        o = 8 * b
        out[o] = _H0[0] + a
        out[o + 1] = _H0[1] + bb
        out[o + 2] = _H0[2] + c
        out[o + 3] = _H0[3] + d
        out[o + 4] = _H0[4] + e
        out[o + 5] = _H0[5] + f
        out[o + 6] = _H0[6] + g
        out[o + 7] = _H0[7] + h


@njit(cache=True)
def lcg_words(state, a, c, out):
    """Two steps per word, high 16 bits of each; returns the final state."""
    x = state
    for i in range(out.size):
        x = (a * x + c) & M32
        y = (a * x + c) & M32
        out[i] = (x & HI16) | (y >> 16)
        x = y
    return x


@njit(cache=True)
def lcg_states(state, a, c, out):
    x = state
    for i in range(out.size):
        x = (a * x + c) & M32
        out[i] = x
    return x


@njit(cache=True)
def hybrid_words(out, buffer, crypto, k, n, passes, pos, state, a, c):
    """Fused LCG + XOR schedule.

    ``crypto`` holds exactly the words for every refill this call performs;
    the last refill is left in ``buffer``.  Returns ``(passes, pos, state)``.
    """
    ci = 0
    x = state
    t = 0
    total = out.size
    while t < total:
        if passes == n:
            for j in range(k):
                buffer[j] = crypto[ci + j]
            ci += k
            passes = 0
        stop = min(k, pos + total - t)
        for j in range(pos, stop):
            x = (a * x + c) & M32
            y = (a * x + c) & M32
            out[t] = buffer[j] ^ ((x & HI16) | (y >> 16))
            x = y
            t += 1
        pos = stop
        if pos == k:
            pos = 0
            passes += 1
    return passes, pos, x
