"""Wall-clock throughput measurements over generator factories.

Each trial builds a fresh generator and draws the requested number of words
in fixed-size chunks, folding every chunk into a running 32-bit XOR so the
work cannot be skipped.  One warm-up trial runs first and is discarded.

Times are wall-clock.  When several configurations are compared their
trials run round-robin (see :func:`measure_interleaved`).  A trial whose
wall time exceeds the process CPU time by more than ``PREEMPT_TOLERANCE``
was descheduled by something else on the machine; it is discarded and rerun
(at most ``trials`` extra times), and the count of discarded trials is kept
on the record.  After all rounds, a
trial slower than ``SPIKE_TOLERANCE`` times the fastest trial of the same
configuration is also redone, within the same retry allowance.
"""

from __future__ import annotations

import csv
import gc
import statistics
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .hybrid import HybridParams, new_hybrid
from .lcg import DEFAULT_SEED, Lcg32Config

DEFAULT_WORDS = 1 << 23
CI_WORDS = 1 << 21
DEFAULT_TRIALS = 20
MIN_WORDS = 1 << 20
MIN_TRIALS = 3
CHUNK = 1 << 18
PREEMPT_TOLERANCE = 0.05
SPIKE_TOLERANCE = 1.25

CSV_COLUMNS = ("kind", "lcg", "k", "n", "words", "trials", "mean_seconds", "throughput", "sink")


@dataclass
class BenchRecord:
    kind: str
    lcg: str
    k: object
    n: object
    words: int
    trials: int
    seconds: list[float] = field(default_factory=list)
    sink: int = 0
    rejected: int = 0

    @property
    def mean_seconds(self) -> float:
        return statistics.fmean(self.seconds)

    @property
    def throughput(self) -> float:
        return self.words / self.mean_seconds

    def row(self) -> list:
        return [self.kind, self.lcg, self.k, self.n, self.words, self.trials,
                f"{self.mean_seconds:.6f}", f"{self.throughput:.1f}", f"0x{self.sink:08x}"]


def _produce(gen, words: int, chunk: int) -> int:
    # one reused chunk buffer keeps allocator page faults out of the timing
    buf = np.empty(min(chunk, words), dtype=np.uint32)
    sink = np.uint32(0)
    left = words
    while left:
        m = min(chunk, left)
        sink ^= np.bitwise_xor.reduce(gen.fill(m, buf))
        left -= m
    return int(sink)


def _timed_trial(factory, words: int, chunk: int) -> tuple[float, float, int]:
    cpu_start = time.process_time()
    start = time.perf_counter()
    gen = factory()
    sink = _produce(gen, words, chunk)
    wall = time.perf_counter() - start
    return wall, time.process_time() - cpu_start, sink


def _new_record(factory, words: int, trials: int) -> BenchRecord:
    desc = factory().descriptor
    return BenchRecord(desc["kind"], desc["lcg"], desc["k"], desc["n"], words, trials)


def _check_sizes(words: int, trials: int) -> None:
    if words < MIN_WORDS:
        raise ValueError(f"words must be at least 2**20, got {words}")
    if trials < MIN_TRIALS:
        raise ValueError(f"trials must be at least {MIN_TRIALS}, got {trials}")


def _accepted_trial(factory, record: BenchRecord, chunk: int) -> None:
    """Run trials until one is not preempted (or the retry allowance is spent)."""
    while True:
        wall, cpu, sink = _timed_trial(factory, record.words, chunk)
        if wall - cpu > PREEMPT_TOLERANCE * wall and record.rejected < record.trials:
            record.rejected += 1
            continue
        record.seconds.append(wall)
        record.sink = sink
        return


def _rerun_spikes(factory, record: BenchRecord, chunk: int) -> None:
    # host-level steal shows up as CPU time inside a VM, so the preemption
    # check cannot see it; a trial far slower than its siblings is redone
    while record.rejected < record.trials:
        worst = max(record.seconds)
        if worst <= SPIKE_TOLERANCE * min(record.seconds):
            return
        record.seconds.remove(worst)
        record.rejected += 1
        _accepted_trial(factory, record, chunk)


def measure_interleaved(factories, words: int = CI_WORDS, trials: int = MIN_TRIALS,
                        chunk: int = CHUNK) -> list[BenchRecord]:
    """Time several factories with their trials interleaved round-robin.

    A burst of outside load then lands on neighbouring configurations alike
    instead of inflating a single one, which keeps comparisons between the
    records meaningful on a shared machine.
    """
    _check_sizes(words, trials)
    factories = list(factories)
    records = [_new_record(f, words, trials) for f in factories]
    gc_was_enabled = gc.isenabled()
    gc.disable()
    try:
        for f in factories:
            _timed_trial(f, words, chunk)  # warm-up
        for _ in range(trials):
            for f, record in zip(factories, records):
                _accepted_trial(f, record, chunk)
        for f, record in zip(factories, records):
            _rerun_spikes(f, record, chunk)
    finally:
        if gc_was_enabled:
            gc.enable()
    return records


def measure_throughput(factory, words: int = DEFAULT_WORDS, trials: int = DEFAULT_TRIALS,
                       chunk: int = CHUNK) -> BenchRecord:
    """Time *trials* runs of ``factory()`` producing *words* words each."""
    return measure_interleaved([factory], words, trials, chunk)[0]


def sweep_repetition(lcg_config: Lcg32Config, k: int, repetitions, words: int = CI_WORDS,
                     trials: int = MIN_TRIALS, seed: int = DEFAULT_SEED,
                     stream_id: int = 0) -> list[BenchRecord]:
    repetitions = list(repetitions)
    if not repetitions:
        raise ValueError("repetitions must be nonempty")
    if repetitions != sorted(repetitions):
        raise ValueError("repetitions must be ascending")
    factories = [lambda p=HybridParams(k, n): new_hybrid(p, lcg_config, seed, stream_id)
                 for n in repetitions]
    return measure_interleaved(factories, words, trials)


@dataclass
class ParallelRecord:
    streams: int
    words: int
    trials: int
    seconds: list[float] = field(default_factory=list)

    @property
    def mean_seconds(self) -> float:
        return statistics.fmean(self.seconds)

    @property
    def total_throughput(self) -> float:
        return self.streams * self.words / self.mean_seconds

    @property
    def per_stream_throughput(self) -> float:
        return self.words / self.mean_seconds


def measure_parallel(factories, words: int = CI_WORDS, trials: int = MIN_TRIALS,
                     chunk: int = CHUNK) -> ParallelRecord:
    """Run one factory per thread concurrently; each trial waits for all streams."""
    if trials < MIN_TRIALS:
        raise ValueError(f"trials must be at least {MIN_TRIALS}, got {trials}")
    factories = list(factories)
    record = ParallelRecord(len(factories), words, trials)
    with ThreadPoolExecutor(max_workers=len(factories)) as pool:
        for i in range(trials + 1):
            start = time.perf_counter()
            list(pool.map(lambda f: _produce(f(), words, chunk), factories))
            if i:
                record.seconds.append(time.perf_counter() - start)
    return record


def write_bench_csv(records, out=None) -> None:
    if out is None or out == "-":
        _write_rows(records, sys.stdout)
    elif hasattr(out, "write"):
        _write_rows(records, out)
    else:
        with open(out, "w", newline="") as fh:
            _write_rows(records, fh)


def _write_rows(records, fh) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in records:
        writer.writerow(r.row())
