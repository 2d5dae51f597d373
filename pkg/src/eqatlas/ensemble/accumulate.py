"""Mergeable Monte Carlo statistics."""

from __future__ import annotations

import copy
import math
from dataclasses import dataclass, field

import numpy as np


@dataclass
class Histogram:
    edges: np.ndarray
    counts: np.ndarray

    @classmethod
    def empty(cls, edges) -> "Histogram":
        edges = np.asarray(edges, dtype=float)
        return cls(edges, np.zeros(edges.size - 1, dtype=np.int64))

    def add(self, values) -> None:
        c, _ = np.histogram(np.asarray(values, dtype=float), bins=self.edges)
        self.counts += c

    def update(self, other: "Histogram") -> None:
        if not np.array_equal(self.edges, other.edges):
            raise ValueError("cannot merge histograms with different bin edges")
        self.counts += other.counts


@dataclass
class TrialAccumulator:
    """Order-independent statistics over Monte Carlo trials.

    * ``log_sums``: running ``log(sum(exp(v)))`` per key,
    * ``counters``: integer tallies,
    * ``histograms``: binned counts with fixed edges,
    * ``moments``: ``(n, mean, M2)`` triples merged with Chan's update,
    * ``samples``: raw per-trial values keyed by trial index.

    Integer parts merge exactly; floating parts merge associatively and
    commutatively up to rounding. Runs that need bit-for-bit agreement fold
    accumulators in a fixed order (see ``run_trials_parallel``).
    """

    trial_count: int = 0
    log_sums: dict = field(default_factory=dict)
    counters: dict = field(default_factory=dict)
    histograms: dict = field(default_factory=dict)
    moments: dict = field(default_factory=dict)
    samples: dict = field(default_factory=dict)

    # -- recording -------------------------------------------------------

    def add_log(self, key: str, value: float) -> None:
        cur = self.log_sums.get(key, -math.inf)
        self.log_sums[key] = float(np.logaddexp(cur, value))

    def count(self, key: str, k: int = 1) -> None:
        self.counters[key] = self.counters.get(key, 0) + int(k)

    def histogram(self, key: str, edges, values) -> None:
        h = self.histograms.get(key)
        if h is None:
            h = self.histograms[key] = Histogram.empty(edges)
        h.add(values)

    def observe(self, key: str, x: float) -> None:
        n, mean, m2 = self.moments.get(key, (0, 0.0, 0.0))
        n += 1
        d = x - mean
        mean += d / n
        m2 += d * (x - mean)
        self.moments[key] = (n, mean, m2)

    def record(self, key: str, trial: int, value) -> None:
        self.samples.setdefault(key, {})[int(trial)] = value

    # -- merging ---------------------------------------------------------

    def update(self, other: "TrialAccumulator") -> "TrialAccumulator":
        """Merge ``other`` into ``self`` in place and return ``self``."""
        self.trial_count += other.trial_count
        for k, v in other.log_sums.items():
            self.log_sums[k] = float(np.logaddexp(self.log_sums.get(k, -math.inf), v))
        for k, v in other.counters.items():
            self.counters[k] = self.counters.get(k, 0) + v
        for k, h in other.histograms.items():
            if k in self.histograms:
                self.histograms[k].update(h)
            else:
                self.histograms[k] = Histogram(h.edges.copy(), h.counts.copy())
        for k, (nb, mb, sb) in other.moments.items():
            na, ma, sa = self.moments.get(k, (0, 0.0, 0.0))
            n = na + nb
            if nb == 0:
                continue
            if na == 0:
                self.moments[k] = (nb, mb, sb)
                continue
            d = mb - ma
            self.moments[k] = (n, (na * ma + nb * mb) / n, sa + sb + d * d * na * nb / n)
        for k, d in other.samples.items():
            mine = self.samples.setdefault(k, {})
            clash = mine.keys() & d.keys()
            if clash:
                raise ValueError(f"trial indices recorded twice for {k!r}: {sorted(clash)[:5]}")
            mine.update(d)
        return self

    def merge(self, other: "TrialAccumulator") -> "TrialAccumulator":
        return copy.deepcopy(self).update(other)

    # -- reading ---------------------------------------------------------

    def mean(self, key: str) -> float:
        n, mean, _ = self.moments.get(key, (0, math.nan, 0.0))
        return mean if n else math.nan

    def variance(self, key: str) -> float:
        n, _, m2 = self.moments.get(key, (0, 0.0, 0.0))
        return m2 / (n - 1) if n > 1 else math.nan

    def sample_array(self, key: str) -> np.ndarray:
        d = self.samples.get(key, {})
        return np.array([d[i] for i in sorted(d)], dtype=float)

    def to_dict(self) -> dict:
        """JSON-ready form with keys and trial indices sorted."""
        return {
            "trial_count": self.trial_count,
            "log_sums": {k: self.log_sums[k] for k in sorted(self.log_sums)},
            "counters": {k: self.counters[k] for k in sorted(self.counters)},
            "histograms": {
                k: {"edges": self.histograms[k].edges.tolist(), "counts": self.histograms[k].counts.tolist()}
                for k in sorted(self.histograms)
            },
            "moments": {k: list(self.moments[k]) for k in sorted(self.moments)},
            "samples": {
                k: [[i, _plain(self.samples[k][i])] for i in sorted(self.samples[k])]
                for k in sorted(self.samples)
            },
        }

    @classmethod
    def from_dict(cls, d: dict) -> "TrialAccumulator":
        acc = cls(trial_count=int(d["trial_count"]))
        acc.log_sums = {k: float(v) for k, v in d["log_sums"].items()}
        acc.counters = {k: int(v) for k, v in d["counters"].items()}
        acc.histograms = {
            k: Histogram(np.asarray(v["edges"], float), np.asarray(v["counts"], np.int64))
            for k, v in d["histograms"].items()
        }
        acc.moments = {k: (int(v[0]), float(v[1]), float(v[2])) for k, v in d["moments"].items()}
        acc.samples = {k: {int(i): val for i, val in rows} for k, rows in d["samples"].items()}
        return acc


def _plain(v):
    if isinstance(v, np.ndarray):
        return v.tolist()
    if isinstance(v, (np.floating, np.integer, np.bool_)):
        return v.item()
    return v
