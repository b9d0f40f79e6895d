"""Seeded coincidence-count simulation and correlation estimates.

Random stream
-------------
Uniform draws come from NumPy's ``Philox`` (4x64, 10 rounds) counter-based
bit generator, whose raw output stream NumPy keeps stable across releases.
The N draws of one record are cut into fixed blocks of ``BLOCK_SIZE``.
Block ``k`` of stream ``s`` under seed ``seed`` is keyed by
``SeedSequence(seed, spawn_key=(s, k))``.  Each raw 64-bit word ``r``
becomes ``u = (r >> 11) * 2**-53`` in [0, 1) and selects the first outcome
in the order (++, +-, -+, --) whose cumulative probability exceeds ``u``.

Because blocks depend only on (seed, stream, block index), a record is the
same whether its blocks are drawn sequentially or by any number of workers.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ValidationError
from .model import PAIR_KEYS, JointDistribution, check_distribution

BLOCK_SIZE = 1 << 16
_U64_MAX = (1 << 64) - 1


@dataclass(frozen=True)
class CountRecord:
    pp: int
    pm: int
    mp: int
    mm: int
    seed: int | None = None

    @property
    def N(self) -> int:
        return self.pp + self.pm + self.mp + self.mm

    def counts(self) -> dict[str, int]:
        return dict(zip(PAIR_KEYS, (self.pp, self.pm, self.mp, self.mm)))

    def to_dict(self) -> dict:
        return {"seed": self.seed, "N": self.N, "counts": self.counts()}

    @classmethod
    def from_dict(cls, d: dict) -> "CountRecord":
        counts = d["counts"]
        rec = cls(*(int(counts[k]) for k in PAIR_KEYS), seed=d.get("seed"))
        if "N" in d and int(d["N"]) != rec.N:
            raise ValidationError(f"counts sum to {rec.N}, record says N={d['N']}")
        return rec


@dataclass(frozen=True)
class EstimateReport:
    E_hat: float
    stderr: float
    frequencies: dict[str, float]

    def to_dict(self) -> dict:
        return {"E_hat": self.E_hat, "stderr": self.stderr, "frequencies": dict(self.frequencies)}


def _check_seed(seed: int) -> None:
    if not (isinstance(seed, (int, np.integer)) and 0 <= seed <= _U64_MAX):
        raise DomainError(f"seed must be an unsigned 64-bit integer, got {seed!r}")


def block_uniforms(seed: int, block: int, size: int, stream: int = 0) -> np.ndarray:
    ss = np.random.SeedSequence(int(seed), spawn_key=(int(stream), int(block)))
    raw = np.random.Philox(ss).random_raw(size)
    return (raw >> np.uint64(11)).astype(np.float64) * 2.0**-53


def _block_counts(thresholds: np.ndarray, seed: int, block: int, size: int, stream: int) -> np.ndarray:
    u = block_uniforms(seed, block, size, stream)
    idx = np.searchsorted(thresholds, u, side="right")
    return np.bincount(idx, minlength=4)


def sample_pairs(
    J: JointDistribution, N: int, seed: int, *, stream: int = 0, workers: int = 1
) -> CountRecord:
    """Draw N independent pairs from J; deterministic in (J, N, seed, stream)."""
    check_distribution(J)
    if not isinstance(N, (int, np.integer)) or N < 1:
        raise DomainError(f"N must be a positive integer, got {N!r}")
    _check_seed(seed)
    p = J.values()
    thresholds = np.array([p[0], p[0] + p[1], p[0] + p[1] + p[2]])
    n_blocks = -(-N // BLOCK_SIZE)
    sizes = [min(BLOCK_SIZE, N - k * BLOCK_SIZE) for k in range(n_blocks)]

    def job(k: int) -> np.ndarray:
        return _block_counts(thresholds, seed, k, sizes[k], stream)

    if workers > 1 and n_blocks > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(job, range(n_blocks)))
    else:
        parts = [job(k) for k in range(n_blocks)]
    total = np.sum(parts, axis=0)
    return CountRecord(*(int(x) for x in total), seed=int(seed))


def merge_records(records: list[CountRecord]) -> CountRecord:
    """Pool records by count addition (the merged record carries no seed)."""
    if not records:
        raise DomainError("nothing to merge")
    return CountRecord(
        sum(r.pp for r in records),
        sum(r.pm for r in records),
        sum(r.mp for r in records),
        sum(r.mm for r in records),
    )


def estimate(record: CountRecord) -> EstimateReport:
    N = record.N
    if N < 1:
        raise DomainError("cannot estimate from an empty record")
    E_hat = ((record.pp + record.mm) - (record.pm + record.mp)) / N
    stderr = math.sqrt(max(0.0, 1.0 - E_hat * E_hat) / N)
    freqs = {k: n / N for k, n in record.counts().items()}
    return EstimateReport(E_hat, stderr, freqs)


def discrimination_power(E1: float, E2: float, N: int) -> float:
    """Separation of two correlation values, in standard errors, at N pairs each."""
    if N < 1:
        raise DomainError(f"N must be positive, got {N!r}")
    diff = abs(E1 - E2)
    var = max(0.0, 1 - E1 * E1) / N + max(0.0, 1 - E2 * E2) / N
    if var == 0:
        return 0.0 if diff == 0 else math.inf
    return diff / math.sqrt(var)
