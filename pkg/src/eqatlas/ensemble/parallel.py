"""Deterministic fan-out of independent trials over worker processes.

Trials are cut into chunks of a fixed size that does not depend on the
worker count. Each chunk is reduced into its own accumulator and the parent
folds chunk results in chunk order, so the floating-point reduction tree is
the same for one worker or many and the merged result is bit-identical.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from concurrent.futures.process import BrokenProcessPool
from typing import Callable, Sequence

from ..errors import DomainError, TrialFailedError
from .accumulate import TrialAccumulator

# task(trial, acc) records whatever it measures for one trial into acc
Task = Callable[[int, TrialAccumulator], None]

DEFAULT_CHUNK = 64
MAX_CHUNKS = 1024


def _chunks(trials: Sequence[int], size: int) -> list[list[int]]:
    trials = list(trials)
    return [trials[i : i + size] for i in range(0, len(trials), size)]


def _run_chunk(task: Task, chunk: Sequence[int]) -> TrialAccumulator:
    acc = TrialAccumulator()
    for t in chunk:
        task(t, acc)
        acc.trial_count += 1
    return acc


def _rerun_chunk(task: Task, chunk: Sequence[int]) -> TrialAccumulator:
    # second attempt in the parent, one trial at a time so a persistent
    # failure can be pinned to its trial index
    acc = TrialAccumulator()
    for t in chunk:
        try:
            task(t, acc)
        except Exception as exc:  # noqa: BLE001
            raise TrialFailedError(t, exc) from exc
        acc.trial_count += 1
    return acc


def run_trials_parallel(
    task: Task,
    trials: int | Sequence[int],
    workers: int = 1,
    chunk_size: int | None = None,
) -> TrialAccumulator:
    """Run ``task`` on every trial index and merge the results.

    ``trials`` is a count (indices ``0..trials-1``) or an explicit index
    list. ``task`` must be picklable when ``workers > 1``. A chunk that
    raises, or whose worker dies, is retried once in the parent; if it fails
    again the run stops with :class:`TrialFailedError` naming the trial.

    The default chunk size is ``max(64, ceil(trials / 1024))``; it depends on
    the number of trials only, never on ``workers``.
    """
    if isinstance(trials, int):
        if trials < 0:
            raise DomainError(f"trials must be >= 0, got {trials}")
        trials = range(trials)
    if workers < 1:
        raise DomainError(f"workers must be >= 1, got {workers}")
    if chunk_size is None:
        chunk_size = max(DEFAULT_CHUNK, -(-len(trials) // MAX_CHUNKS))
    if chunk_size < 1:
        raise DomainError(f"chunk_size must be >= 1, got {chunk_size}")
    chunks = _chunks(trials, chunk_size)
    total = TrialAccumulator()
    if not chunks:
        return total

    if workers == 1 or len(chunks) == 1:
        for c in chunks:
            try:
                part = _run_chunk(task, c)
            except Exception:  # noqa: BLE001
                part = _rerun_chunk(task, c)
            total.update(part)
        return total

    results: list[TrialAccumulator | None] = [None] * len(chunks)
    try:
        with ProcessPoolExecutor(max_workers=min(workers, len(chunks))) as pool:
            futures = [pool.submit(_run_chunk, task, c) for c in chunks]
            for i, f in enumerate(futures):
                try:
                    results[i] = f.result()
                except BrokenProcessPool:
                    break
                except Exception:  # noqa: BLE001
                    results[i] = None
    except BrokenProcessPool:
        pass
    for i, c in enumerate(chunks):
        if results[i] is None:
            results[i] = _rerun_chunk(task, c)
        total.update(results[i])
    return total


__all__ = ["run_trials_parallel", "DEFAULT_CHUNK", "Task"]
