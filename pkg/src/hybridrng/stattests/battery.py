"""Fixed battery of test instances driven by a versioned manifest."""

from __future__ import annotations

import csv
import json
import sys
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources

import numpy as np

from .checks import (
    DEFAULT_ALPHA,
    TestReport,
    birthday_spacings,
    gap_test,
    lag_autocorrelation,
    monobit,
    monobit_from_count,
    runs_test,
    serial_pairs_chisq,
)

CSV_COLUMNS = ("test_name", "params", "statistic", "p_value", "verdict")


@lru_cache(maxsize=1)
def default_manifest() -> dict:
    text = resources.files(__package__).joinpath("manifest.json").read_text()
    return json.loads(text)


def load_manifest(path) -> dict:
    with open(path) as fh:
        manifest = json.load(fh)
    for key in ("version", "min_words", "instances"):
        if key not in manifest:
            raise ValueError(f"manifest missing {key!r}")
    return manifest


@dataclass
class BatteryReport:
    descriptor: dict
    n_words: int
    alpha: float
    manifest_version: int
    reports: list[TestReport] = field(default_factory=list)
    complete: bool = True
    error: str | None = None

    @property
    def failure_count(self) -> int:
        return sum(not r.passed for r in self.reports)

    def failures(self) -> list[TestReport]:
        return [r for r in self.reports if not r.passed]

    def summary(self) -> str:
        desc = " ".join(f"{k}={v}" for k, v in self.descriptor.items() if v != "")
        lines = [f"battery v{self.manifest_version}: {desc} words={self.n_words} alpha={self.alpha:g}"]
        for r in self.reports:
            lines.append(f"  {r.verdict:4}  {r.test_name:22} p={r.p_value:.4g}")
        status = "complete" if self.complete else f"INCOMPLETE ({self.error})"
        lines.append(f"failure_count: {self.failure_count} / {len(self.reports)} [{status}]")
        return "\n".join(lines)


def _run_instance(spec: dict, words: np.ndarray, alpha: float) -> TestReport:
    test = spec["test"]
    params = dict(spec.get("params", {}))
    source = spec.get("input", "words")

    if source == "all_bits":
        if test != "monobit":
            raise ValueError("all_bits input is only supported for monobit")
        ones = int(np.bitwise_count(words).sum(dtype=np.int64))
        report = monobit_from_count(ones, 32 * words.size, alpha)
    elif source.startswith("bit:"):
        bit = int(source[4:])
        bits = ((words >> np.uint32(bit)) & np.uint32(1)).astype(np.uint8)
        if test == "monobit":
            report = monobit(bits, alpha)
        elif test == "runs":
            report = runs_test(bits, alpha)
        else:
            raise ValueError(f"test {test!r} does not take bit input")
        report.params = {"bit": bit, **report.params}
    elif test == "serial_pairs":
        report = serial_pairs_chisq(words, params["bits_per_cell"], params.get("shift"), alpha)
    elif test == "gap":
        report = gap_test(words, (params["a"], params["b"]), params.get("max_gap"), alpha)
    elif test == "birthday_spacings":
        m = params["m"]
        reps = params.get("reps")
        sample = words if reps is None else words[: m * reps]
        report = birthday_spacings(sample, m, params["d"], alpha)
    elif test == "lag_autocorrelation":
        report = lag_autocorrelation(words, params["lag"], alpha)
    else:
        raise ValueError(f"unknown test {test!r}")
    report.test_name = spec["name"]
    return report


def run_battery_on_words(words, alpha: float = DEFAULT_ALPHA, manifest: dict | None = None,
                         descriptor: dict | None = None) -> BatteryReport:
    manifest = manifest or default_manifest()
    words = np.asarray(words, dtype=np.uint32)
    battery = BatteryReport(descriptor or {}, int(words.size), alpha, manifest["version"])
    if words.size < manifest["min_words"]:
        battery.complete = False
        battery.error = f"need at least {manifest['min_words']} words, got {words.size}"
        return battery
    for spec in manifest["instances"]:
        try:
            battery.reports.append(_run_instance(spec, words, alpha))
        except (ValueError, KeyError) as exc:
            battery.complete = False
            battery.error = f"{spec.get('name', '?')}: {exc}"
            break
    return battery


def run_battery(source, n_words: int, alpha: float = DEFAULT_ALPHA,
                manifest: dict | None = None) -> BatteryReport:
    """Draw *n_words* from ``source.fill`` once and run every manifest instance."""
    words = source.fill(n_words)
    return run_battery_on_words(words, alpha, manifest, dict(source.descriptor))


def write_battery_csv(report: BatteryReport, out=None) -> None:
    """Write one row per test instance; *out* is a path, a text file, or stdout."""
    if out is None or out == "-":
        _write_rows(report, sys.stdout)
        return
    if hasattr(out, "write"):
        _write_rows(report, out)
        return
    with open(out, "w", newline="") as fh:
        _write_rows(report, fh)


def _write_rows(report: BatteryReport, fh) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in report.reports:
        writer.writerow([r.test_name, r.params_text(), repr(r.statistic),
                         repr(r.p_value), r.verdict])
