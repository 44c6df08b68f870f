"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 runtime failure, 3 battery incomplete.
"""

from __future__ import annotations

import argparse
import csv
import os
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import bench
from .hybrid import (
    DEFAULT_PRESET,
    PRESETS,
    HybridParams,
    new_hybrid,
    pure_lcg_generator,
    pure_sha_generator,
)
from .lcg import BUILTIN, DEFAULT_SEED, MASK32, get_config
from .stattests import DEFAULT_ALPHA, load_manifest, run_battery, write_battery_csv

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_RUNTIME = 2
EXIT_INCOMPLETE = 3

REPORT_DIR_ENV = "HYBRIDRNG_REPORT_DIR"
DEFAULT_REPORT_DIR = "reports"
GEN_CHUNK = 1 << 16
SWEEP_COLUMNS = ("k", "n", "failure_count", "mean_seconds")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def parse_count(text: str) -> int:
    """Parse ``123``, ``2^21``, ``2**21`` or ``1<<21``."""
    t = text.strip().replace("**", "^")
    try:
        if "^" in t:
            base, exp = t.split("^")
            value = int(base) ** int(exp)
        elif "<<" in t:
            base, shift = t.split("<<")
            value = int(base) << int(shift)
        else:
            value = int(t)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a count: {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"count must be non-negative: {text!r}")
    return value


def parse_word_count(text: str):
    if text.strip().lower() in ("inf", "infinite", "unlimited"):
        return None
    return parse_count(text)


def parse_list(text: str) -> list[int]:
    try:
        return [parse_count(part) for part in text.split(",") if part.strip()]
    except argparse.ArgumentTypeError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of counts: {text!r}") from None


@dataclass
class RunConfig:
    subcommand: str
    kind: str = "hybrid"
    lcg: str = "superduper"
    k: int | None = None
    n: int | None = None
    preset: str = DEFAULT_PRESET
    seed: int = DEFAULT_SEED
    stream: int = 0
    words: int | None = None
    out: str | None = None
    alpha: float = DEFAULT_ALPHA
    trials: int = bench.MIN_TRIALS
    raw_states: bool = False
    report: str | None = None
    manifest: str | None = None
    parallel: int = 0
    k_list: tuple = ()
    n_list: tuple = ()

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        fields = {name: getattr(args, name) for name in cls.__dataclass_fields__
                  if hasattr(args, name)}
        config = cls(**fields)
        config.validate()
        return config

    def validate(self) -> None:
        if self.lcg not in BUILTIN:
            raise UsageError(f"unknown --lcg {self.lcg!r}")
        if self.kind == "hybrid":
            k, n = self.hybrid_size()
            if k < 1 or n < 1:
                raise UsageError("hybrid generators need --k >= 1 and --n >= 1")
        if not 0 < self.alpha < 0.5:
            raise UsageError("--alpha must be in (0, 0.5)")
        if self.raw_states and self.kind == "hybrid":
            raise UsageError("--raw-states only applies to --kind lcg")

    def hybrid_size(self) -> tuple[int, int]:
        base = HybridParams.preset(self.preset, get_config(self.lcg))
        k = self.k if self.k is not None else base.size
        n = self.n if self.n is not None else base.repetition
        return k, n

    def factory(self, stream_offset: int = 0):
        """Zero-argument constructor for the configured generator."""
        config = get_config(self.lcg)
        seed = (self.seed + stream_offset) & MASK32
        stream = self.stream + stream_offset
        if self.kind == "sha":
            return lambda: pure_sha_generator(stream)
        if self.kind == "lcg":
            return lambda: pure_lcg_generator(config, seed, raw=self.raw_states)
        params = HybridParams(*self.hybrid_size())
        return lambda: new_hybrid(params, config, seed, stream)


def report_dir() -> Path:
    return Path(os.environ.get(REPORT_DIR_ENV, DEFAULT_REPORT_DIR))


def _report_path(config: RunConfig, stem: str) -> str:
    if config.report:
        return config.report
    directory = report_dir()
    directory.mkdir(parents=True, exist_ok=True)
    return str(directory / f"{stem}.csv")


def _stem(config: RunConfig, prefix: str) -> str:
    if config.kind == "sha":
        return f"{prefix}_sha_s{config.stream}"
    if config.kind == "lcg":
        raw = "raw" if config.raw_states else ""
        return f"{prefix}_lcg{raw}_{config.lcg}"
    k, n = config.hybrid_size()
    return f"{prefix}_hybrid_{config.lcg}_k{k}_n{n}"


# subcommands ---------------------------------------------------------------

def cmd_gen(config: RunConfig) -> int:
    """Write raw little-endian 32-bit words, no header."""
    gen = config.factory()()
    remaining = config.words
    if config.out in (None, "-"):
        sink = sys.stdout.buffer
        close = False
    else:
        sink = open(config.out, "wb")
        close = True
    try:
        while remaining is None or remaining > 0:
            m = GEN_CHUNK if remaining is None else min(GEN_CHUNK, remaining)
            sink.write(gen.fill(m).astype("<u4", copy=False).tobytes())
            if remaining is not None:
                remaining -= m
        sink.flush()
    except BrokenPipeError:
        # downstream tester stopped reading; that is the normal end of an unbounded stream
        sys.stdout = None
        return EXIT_OK
    finally:
        if close:
            sink.close()
    return EXIT_OK


def cmd_test(config: RunConfig) -> int:
    words = config.words if config.words is not None else 1 << 22
    manifest = load_manifest(config.manifest) if config.manifest else None
    report = run_battery(config.factory()(), words, config.alpha, manifest)
    path = _report_path(config, _stem(config, "battery"))
    write_battery_csv(report, path)
    print(report.summary())
    print(f"report: {path}")
    return EXIT_OK if report.complete else EXIT_INCOMPLETE


def cmd_bench(config: RunConfig) -> int:
    words = config.words if config.words is not None else bench.DEFAULT_WORDS
    if config.parallel:
        # same offsets as make_parallel_streams: stream id and seed both advance by j
        factories = [config.factory(j) for j in range(config.parallel)]
        rec = bench.measure_parallel(factories, words, config.trials)
        print(f"streams={rec.streams} words_per_stream={rec.words} trials={rec.trials} "
              f"mean_seconds={rec.mean_seconds:.6f}")
        print(f"per_stream_throughput={rec.per_stream_throughput:.1f} "
              f"total_throughput={rec.total_throughput:.1f}")
        return EXIT_OK
    record = bench.measure_throughput(config.factory(), words, config.trials)
    path = _report_path(config, _stem(config, "bench"))
    bench.write_bench_csv([record], path)
    bench.write_bench_csv([record], sys.stdout)
    return EXIT_OK


def cmd_sweep(config: RunConfig) -> int:
    if not config.k_list or not config.n_list:
        raise UsageError("sweep needs nonempty --k and --n lists")
    if min(config.k_list) < 1 or min(config.n_list) < 1:
        raise UsageError("sweep sizes and repetitions must be >= 1")
    words = config.words if config.words is not None else bench.CI_WORDS
    lcg = get_config(config.lcg)
    manifest = load_manifest(config.manifest) if config.manifest else None
    rows = []
    complete = True
    for k in config.k_list:
        for n in config.n_list:
            params = HybridParams(k, n)
            battery = run_battery(new_hybrid(params, lcg, config.seed, config.stream),
                                  words, config.alpha, manifest)
            complete &= battery.complete
            timing = bench.measure_throughput(
                lambda p=params: new_hybrid(p, lcg, config.seed, config.stream),
                max(words, bench.MIN_WORDS), config.trials)
            rows.append((k, n, battery.failure_count, f"{timing.mean_seconds:.6f}"))
    path = _report_path(config, f"sweep_{config.lcg}")
    with open(path, "w", newline="") as fh:
        _write_sweep(rows, fh)
    _write_sweep(rows, sys.stdout)
    return EXIT_OK if complete else EXIT_INCOMPLETE


def _write_sweep(rows, fh) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(SWEEP_COLUMNS)
    writer.writerows(rows)


COMMANDS = {"gen": cmd_gen, "test": cmd_test, "bench": cmd_bench, "sweep": cmd_sweep}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hybridrng",
                     description="Hybrid SHA-256/LCG random number generators.")
    sub = parser.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    def generator_flags(p, with_kind=True):
        if with_kind:
            p.add_argument("--kind", choices=("sha", "lcg", "hybrid"), default="hybrid")
        p.add_argument("--lcg", choices=sorted(BUILTIN), default="superduper")
        p.add_argument("--preset", choices=sorted(PRESETS), default=DEFAULT_PRESET,
                       help="binds (k, n); explicit --k/--n override")
        p.add_argument("--seed", type=parse_count, default=DEFAULT_SEED)
        p.add_argument("--stream", type=parse_count, default=0)
        if with_kind:
            p.add_argument("--k", type=parse_count, help="size: buffered crypto words")
            p.add_argument("--n", type=parse_count, help="repetition: passes per buffer")
            p.add_argument("--raw-states", action="store_true",
                           help="lcg only: emit raw 32-bit states, one step per word")

    p = sub.add_parser("gen", help="write a raw little-endian word stream")
    generator_flags(p)
    p.add_argument("--words", type=parse_word_count, default=None,
                   help="word count (e.g. 2^20) or 'inf' for an unbounded stream")
    p.add_argument("--out", help="output file (default: stdout)")

    p = sub.add_parser("test", help="run the statistical battery")
    generator_flags(p)
    p.add_argument("--words", type=parse_count, help="sample size (default 2^22)")
    p.add_argument("--alpha", type=float, default=DEFAULT_ALPHA)
    p.add_argument("--report", help="battery CSV path")
    p.add_argument("--manifest", help="alternate battery manifest (JSON)")

    p = sub.add_parser("bench", help="measure throughput")
    generator_flags(p)
    p.add_argument("--words", type=parse_count, help="words per trial (default 2^23)")
    p.add_argument("--trials", type=parse_count, default=bench.DEFAULT_TRIALS)
    p.add_argument("--parallel", type=parse_count, default=0,
                   help="benchmark this many streams on as many threads")
    p.add_argument("--report", help="bench CSV path")

    p = sub.add_parser("sweep", help="failure counts and timings over a (k, n) grid")
    generator_flags(p, with_kind=False)
    p.add_argument("--k", dest="k_list", type=parse_list, required=True)
    p.add_argument("--n", dest="n_list", type=parse_list, required=True)
    p.add_argument("--words", type=parse_count, help="words per battery and trial (default 2^21)")
    p.add_argument("--trials", type=parse_count, default=bench.MIN_TRIALS)
    p.add_argument("--alpha", type=float, default=DEFAULT_ALPHA)
    p.add_argument("--report", help="sweep CSV path")
    p.add_argument("--manifest", help="alternate battery manifest (JSON)")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = RunConfig.from_args(args)
        return COMMANDS[config.subcommand](config)
    except UsageError as exc:
        print(f"hybridrng: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, ValueError, OverflowError) as exc:
        print(f"hybridrng: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
