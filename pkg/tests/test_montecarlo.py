import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rnl_lab.errors import DomainError, ValidationError
from rnl_lab.model import JointDistribution, correlation
from rnl_lab.montecarlo import (
    BLOCK_SIZE,
    CountRecord,
    block_uniforms,
    discrimination_power,
    estimate,
    merge_records,
    sample_pairs,
)

UNIFORM = JointDistribution.uniform()

# first raw words of Philox4x64 keyed by SeedSequence(0, spawn_key=(0, 0))
REFERENCE_RAW = [0xCF6C1E6A4FFD2AEF, 0x8BCEEB4DDE6A1D0F, 0x7B50C368FE3C2836, 0x76146B163206439E]


def test_reference_vectors():
    raw = np.random.Philox(np.random.SeedSequence(0, spawn_key=(0, 0))).random_raw(4)
    assert [int(x) for x in raw] == REFERENCE_RAW
    expected = [(r >> 11) / 2.0**53 for r in REFERENCE_RAW]
    assert block_uniforms(0, 0, 4).tolist() == expected


def test_pinned_records():
    assert sample_pairs(UNIFORM, 1000, 12345) == CountRecord(234, 260, 254, 252, seed=12345)
    j = JointDistribution(0.375, 0.125, 0.125, 0.375)
    assert sample_pairs(j, 200_000, 7) == CountRecord(74927, 25065, 25032, 74976, seed=7)


def test_deterministic_distribution():
    rec = sample_pairs(JointDistribution(1, 0, 0, 0), 1000, 3)
    assert rec.counts() == {"pp": 1000, "pm": 0, "mp": 0, "mm": 0}
    rec = sample_pairs(JointDistribution(0, 0, 0, 1), 1000, 3)
    assert rec.mm == 1000


def test_uniform_counts_within_binomial_bound():
    N = 10**6
    rec = sample_pairs(UNIFORM, N, 99)
    bound = 5 * math.sqrt(N * 0.25 * 0.75)
    assert rec.N == N
    for n in rec.counts().values():
        assert abs(n - N / 4) <= bound


def test_same_inputs_same_record():
    j = JointDistribution(0.1, 0.2, 0.3, 0.4)
    assert sample_pairs(j, 5000, 42) == sample_pairs(j, 5000, 42)
    assert sample_pairs(j, 5000, 42) != sample_pairs(j, 5000, 43)
    assert sample_pairs(j, 5000, 42, stream=1) != sample_pairs(j, 5000, 42)


def test_worker_count_does_not_change_record():
    j = JointDistribution(0.4, 0.1, 0.2, 0.3)
    N = 3 * BLOCK_SIZE + 17
    assert sample_pairs(j, N, 5, workers=1) == sample_pairs(j, N, 5, workers=4)


def test_sampling_errors():
    with pytest.raises(DomainError):
        sample_pairs(UNIFORM, 0, 1)
    with pytest.raises(DomainError):
        sample_pairs(UNIFORM, 10, -1)
    with pytest.raises(ValidationError):
        sample_pairs(JointDistribution(0.5, 0.5, 0.5, 0.5), 10, 1)


def test_estimate_examples():
    e = estimate(CountRecord(500, 0, 0, 500))
    assert (e.E_hat, e.stderr) == (1.0, 0.0)
    e = estimate(CountRecord(250, 250, 250, 250))
    assert e.E_hat == 0.0
    assert e.stderr == pytest.approx(1 / math.sqrt(1000), rel=1e-15)
    assert estimate(CountRecord(600, 150, 150, 100)).E_hat == pytest.approx(0.4, abs=1e-15)
    assert e.frequencies == {"pp": 0.25, "pm": 0.25, "mp": 0.25, "mm": 0.25}


def test_discrimination_examples():
    assert discrimination_power(1, 0, 10_000) == pytest.approx(100, rel=1e-12)
    assert discrimination_power(0.3, 0.3, 50) == 0
    assert discrimination_power(0.5, 0, 10_000) == pytest.approx(37.796447300922723, rel=1e-12)
    assert discrimination_power(1, -1, 10) == math.inf


def test_record_json_round_trip():
    rec = sample_pairs(UNIFORM, 100, 8)
    d = rec.to_dict()
    assert set(d) == {"seed", "N", "counts"}
    assert CountRecord.from_dict(d) == rec
    with pytest.raises(ValidationError):
        CountRecord.from_dict({**d, "N": 101})


@given(st.lists(st.integers(1, 5000), min_size=1, max_size=5), st.integers(0, 2**64 - 1))
@settings(max_examples=25, deadline=None)
def test_merge_equals_pooled_estimator(sizes, seed):
    j = JointDistribution(0.3, 0.2, 0.1, 0.4)
    recs = [sample_pairs(j, n, (seed + i) % 2**64) for i, n in enumerate(sizes)]
    merged = merge_records(recs)
    assert merged.N == sum(sizes)
    signed = sum((r.pp + r.mm - r.pm - r.mp) for r in recs)
    assert estimate(merged).E_hat == signed / merged.N


@pytest.mark.parametrize("seed", [1, 2, 3, 4, 5])
@pytest.mark.parametrize(
    "j",
    [JointDistribution(0.3, 0.2, 0.1, 0.4), JointDistribution(0.45, 0.05, 0.05, 0.45), UNIFORM],
)
def test_estimator_consistency(j, seed):
    e = estimate(sample_pairs(j, 100_000, seed))
    assert abs(e.E_hat - correlation(j)) <= 4.5 * e.stderr
