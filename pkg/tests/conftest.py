"""Shared independent oracles.

These deliberately avoid the package's compiled kernels: LCG words come from
plain integer arithmetic and crypto words from hashlib.
"""

import hashlib

import pytest

M32 = 0xFFFFFFFF


def oracle_lcg_words(a, c, seed, count):
    x = seed & M32
    out = []
    for _ in range(count):
        x1 = (a * x + c) % 2**32
        x2 = (a * x1 + c) % 2**32
        out.append((x1 & 0xFFFF0000) | (x2 >> 16))
        x = x2
    return out


def oracle_sha_words(stream_id, count):
    out = []
    counter = 1
    while len(out) < count:
        digest = hashlib.sha256(stream_id.to_bytes(8, "big") + counter.to_bytes(8, "big")).digest()
        out.extend(int.from_bytes(digest[i:i + 4], "big") for i in range(0, 32, 4))
        counter += 1
    return out[:count]


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)


@pytest.fixture
def report_dir(tmp_path, monkeypatch):
    monkeypatch.setenv("HYBRIDRNG_REPORT_DIR", str(tmp_path / "reports"))
    return tmp_path / "reports"
