"""Hybrid SHA-256 / LCG random number generators with tunable quality and speed."""

from .crypto_source import CounterBlockSource, derive_message, sha256
from .hybrid import (
    PRESETS,
    HybridGenerator,
    HybridParams,
    make_parallel_streams,
    new_hybrid,
    pure_lcg_generator,
    pure_sha_generator,
    reference_combine,
)
from .lcg import BORLAND, GLIBC, SUPER_DUPER, Lcg32Config, Lcg32Generator

__version__ = "0.1.0"
