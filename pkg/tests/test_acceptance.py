"""Acceptance criteria, one check per criterion.

Each check prints a single ``PASS``/``FAIL`` line with its measured values
and wall time.  Under pytest the lines are repeated in the terminal summary;
running this file directly prints them and exits nonzero on any failure.
"""

import hashlib
import subprocess
import sys
import time

import numpy as np
import pytest
from scipy import stats

from hybridrng.bench import CI_WORDS, measure_interleaved
from hybridrng.hybrid import (
    HybridParams,
    expected_hash_calls,
    make_parallel_streams,
    new_hybrid,
    pure_lcg_generator,
    pure_sha_generator,
    reference_combine,
)
from hybridrng.lcg import BUILTIN, GLIBC, SUPER_DUPER, Lcg32Generator, bit_period, lcg_step
from hybridrng.crypto_source import sha256
from hybridrng.stattests import (
    default_manifest,
    monobit_from_count,
    run_battery,
    run_battery_on_words,
    serial_pairs_chisq,
)

from conftest import ACCEPTANCE_LINES, oracle_lcg_words, oracle_sha_words

ALPHA = 1e-3
CRITERIA = {}


def criterion(num, title, budget):
    def register(fn):
        CRITERIA[num] = (title, budget, fn)
        return fn
    return register


def run_criterion(num):
    title, budget, fn = CRITERIA[num]
    start = time.perf_counter()
    ok, detail = fn()
    elapsed = time.perf_counter() - start
    ok = ok and elapsed < budget
    line = (f"criterion {num:2d} {'PASS' if ok else 'FAIL'}  {title}: {detail} "
            f"[{elapsed:.2f}s, budget {budget:g}s]")
    print(line)
    ACCEPTANCE_LINES.append(line)
    return ok


@criterion(1, "SHA-256 known answers", 1)
def check_sha_vectors():
    empty = sha256(b"").hex()
    abc = sha256(b"abc").hex()
    ok = (empty == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
          and abc == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad")
    return ok, f"empty={empty[:8]}.. abc={abc[:8]}.."


@criterion(2, "LCG known answers", 1)
def check_lcg_values():
    s1 = lcg_step(1, SUPER_DUPER)
    s2 = lcg_step(s1, SUPER_DUPER)
    word = Lcg32Generator(SUPER_DUPER, 1).next_u32()
    bulk = int(Lcg32Generator(SUPER_DUPER, 1).fill(1)[0])
    oracle = oracle_lcg_words(69069, 1, 1, 1)[0]
    g1 = lcg_step(1, GLIBC)
    ok = (s1, s2, word, bulk, oracle, g1) == (69070, 475628535, 0x00011C59, 0x00011C59,
                                              0x00011C59, 1103527590)
    return ok, f"superduper states {s1},{s2} word 0x{word:08X}; glibc state {g1}"


@criterion(3, "low-bit periods are 2^(b+1)", 1)
def check_bit_periods():
    bad = []
    for name, config in BUILTIN.items():
        for seed in (1, 12345):
            # plain-integer oracle alongside the library search
            x, seq = seed, []
            for _ in range(256):
                x = (config.multiplier * x + config.addend) % 2**32
                seq.append(x)
            seq = np.array([seed] + seq, dtype=np.uint64)
            for b in range(5):
                p = 1 << (b + 1)
                found = bit_period(config, seed, b, 4 * p)
                bits = (seq >> np.uint64(b)) & np.uint64(1)
                exact = np.array_equal(bits[:-p], bits[p:]) and not any(
                    np.array_equal(bits[: -q], bits[q:]) for q in range(1, p))
                if found != p or not exact:
                    bad.append((name, seed, b, found))
    return not bad, f"30 (lcg, seed, bit) cases, mismatches={bad}"


@criterion(4, "combiner equals reference schedule", 10)
def check_combiner():
    words = 10_000
    lcg = oracle_lcg_words(SUPER_DUPER.multiplier, SUPER_DUPER.addend, 1, words)
    mismatches = []
    for k in (1, 2, 3, 4, 16):
        for n in (1, 2, 3, 8, 256):
            params = HybridParams(k, n)
            crypto = oracle_sha_words(0, k * -(-words // (k * n)))
            want = reference_combine(params, crypto, lcg)
            gen = new_hybrid(params, SUPER_DUPER, 1, 0)
            got = [gen.next_u32() for _ in range(words)]
            bulk = new_hybrid(params, SUPER_DUPER, 1, 0).fill(words).tolist()
            schedule = reference_combine(params, crypto, [0] * words)
            recovered = [a ^ b for a, b in zip(got, schedule)]
            if got != want or bulk != want or recovered != lcg:
                mismatches.append((k, n))
    return not mismatches, f"25 (k, n) pairs x {words} words, mismatches={mismatches}"


@criterion(5, "hash invocations match closed form", 5)
def check_hash_economy():
    triples = [(1, 1, 0), (1, 1, 1), (1, 1, 100), (8, 1, 8), (8, 1, 9), (3, 5, 16),
               (3, 5, 17), (16, 16, 256), (16, 16, 257), (16, 128, 10_000),
               (32, 128, 100_000), (16, 16384, 1 << 20), (7, 3, 1000)]
    bad = []
    for k, n, w in triples:
        params = HybridParams(k, n)
        per_word = new_hybrid(params)
        for _ in range(min(w, 2000)):
            per_word.next_u32()
        bulk = new_hybrid(params)
        bulk.fill(w)
        if (bulk.crypto.hash_calls != expected_hash_calls(params, w)
                or per_word.crypto.hash_calls != expected_hash_calls(params, min(w, 2000))):
            bad.append((k, n, w))
    return not bad, f"{len(triples)} (k, n, W) triples, mismatches={bad}"


CALIBRATION_STREAMS = range(1000, 1200)


@criterion(6, "battery calibrated on 200 SHA streams", 600)
def check_calibration():
    manifest = default_manifest()
    words = manifest["min_words"]
    pvals = {spec["name"]: [] for spec in manifest["instances"]}
    incomplete = 0
    for sid in CALIBRATION_STREAMS:
        report = run_battery_on_words(pure_sha_generator(sid).fill(words), ALPHA, manifest)
        incomplete += not report.complete
        for r in report.reports:
            pvals[r.test_name].append(r.p_value)
    ks = {name: stats.kstest(p, "uniform").pvalue for name, p in pvals.items()}
    worst = min(ks, key=ks.get)
    ok = incomplete == 0 and all(len(p) == 200 for p in pvals.values()) and ks[worst] >= ALPHA
    return ok, f"{len(ks)} tests, min KS p={ks[worst]:.3g} ({worst})"


@criterion(7, "quality ordering at 2^22 words", 900)
def check_quality_ordering():
    w = 1 << 22
    counts = {}
    for label, gen in [("lcg_raw", pure_lcg_generator(SUPER_DUPER, raw=True)),
                       ("sha", pure_sha_generator(0)),
                       ("k16n16", new_hybrid(HybridParams(16, 16))),
                       ("k16n16384", new_hybrid(HybridParams(16, 1 << 14)))]:
        report = run_battery(gen, w, ALPHA)
        counts[label] = report.failure_count if report.complete else None
    ok = (None not in counts.values() and counts["lcg_raw"] >= 3 and counts["sha"] == 0
          and counts["k16n16"] == 0 and counts["k16n16384"] >= counts["k16n16"])
    return ok, "failures " + " ".join(f"{k}={v}" for k, v in counts.items())


@criterion(8, "speed trend over repetition", 600)
def check_speed_trend():
    # baselines share the interleaved rounds with the sweep so all ratios
    # compare trials taken under the same machine conditions
    reps = [2**i for i in range(15)]
    hybrids = [lambda p=HybridParams(16, n): new_hybrid(p, SUPER_DUPER, 1, 0) for n in reps]
    lcg, sha, *recs = measure_interleaved([pure_lcg_generator, pure_sha_generator, *hybrids],
                                          CI_WORDS, 3)
    t = [r.mean_seconds for r in recs]
    worst = max(b / a for a, b in zip(t, t[1:]))
    fast = min(r.throughput for r in recs if r.n >= 256) / lcg.throughput
    slow = sha.mean_seconds / lcg.mean_seconds
    ok = worst <= 1.10 and fast >= 0.8 and slow >= 2
    if not ok:
        steps = ", ".join(f"{b / a:.3f}" for a, b in zip(t, t[1:]))
        return ok, (f"step ratios [{steps}], n>=256 vs LCG {fast:.3f}, SHA/LCG {slow:.1f}, "
                    f"reruns {sum(r.rejected for r in recs)}")
    return ok, (f"worst step ratio {worst:.3f} (<=1.10), n>=256 vs LCG {fast:.3f} (>=0.8), "
                f"SHA/LCG time {slow:.1f} (>=2); n=1 {t[0]:.4f}s n=16384 {t[-1]:.4f}s")


# recorded on x86_64 Linux; a second platform should reproduce it byte for byte
GEN_DIGEST = "27db13f0de2a54f935094a0779f1f45de751eaa04d3c538288bf33e5ae862205"


@criterion(9, "gen output reproducible", 60)
def check_reproducibility():
    cmd = [sys.executable, "-m", "hybridrng", "gen", "--kind", "hybrid", "--words", "4096"]
    runs = [subprocess.run(cmd, capture_output=True, check=True).stdout for _ in range(2)]
    params = HybridParams.preset("balanced")
    lcg = oracle_lcg_words(SUPER_DUPER.multiplier, SUPER_DUPER.addend, 1, 4096)
    want = reference_combine(params, oracle_sha_words(0, 32), lcg)
    oracle_bytes = np.array(want, dtype="<u4").tobytes()
    digest = hashlib.sha256(runs[0]).hexdigest()
    ok = runs[0] == runs[1] == oracle_bytes and digest == GEN_DIGEST
    return ok, f"{len(runs[0])} bytes, identical runs, sha256 {digest[:16]}.."


@criterion(10, "parallel streams distinct and individually sound", 300)
def check_parallel():
    streams = make_parallel_streams(HybridParams.preset("balanced"), SUPER_DUPER, 1, 0, 16)
    heads = []
    failures = []
    for j, gen in enumerate(streams):
        words = gen.fill(1 << 20)
        heads.append(words[:16])
        mono = monobit_from_count(int(np.bitwise_count(words).sum()), 32 * words.size, ALPHA)
        serial = serial_pairs_chisq(words, 8, alpha=ALPHA)
        if not (mono.passed and serial.passed):
            failures.append(j)
    distinct = all(not np.array_equal(heads[i], heads[j])
                   for i in range(16) for j in range(i + 1, 16))
    return distinct and not failures, f"pairwise distinct={distinct}, streams failing={failures}"


@pytest.mark.parametrize("num", sorted(CRITERIA))
def test_criterion(num):
    assert run_criterion(num)


if __name__ == "__main__":
    results = [run_criterion(num) for num in sorted(CRITERIA)]
    sys.exit(0 if all(results) else 1)
