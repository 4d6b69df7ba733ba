"""Sweep records, CSV/JSON serialisation and the thread-count knob."""
from __future__ import annotations

import io
import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Callable, Iterable, Sequence

from . import __version__

THREADS_ENV = "CVKS_THREADS"


@dataclass(frozen=True)
class SweepRecord:
    sweep_parameter: float
    value: float
    correlators: tuple[float, ...] | None = None
    oracle_value: float | None = None
    abs_error: float | None = None
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        if (self.oracle_value is None) != (self.abs_error is None):
            raise ValueError("abs_error must be present exactly when oracle_value is")
        if self.correlators is not None and len(self.correlators) != 6:
            raise ValueError("expected six correlators")

    def to_dict(self):
        return asdict(self)


def thread_count() -> int:
    raw = os.environ.get(THREADS_ENV)
    if raw is None:
        return min(8, os.cpu_count() or 1)
    n = int(raw)
    if n < 1:
        raise ValueError(f"{THREADS_ENV} must be a positive integer")
    return n


def parallel_map(fn: Callable, items: Iterable, threads: int | None = None) -> list:
    """Order-preserving map over independent work items."""
    items = list(items)
    threads = thread_count() if threads is None else threads
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def fmt(x) -> str:
    """17 significant digits; empty cell for missing values."""
    if x is None:
        return ""
    return format(float(x), ".17g")


def csv_text(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(fmt(v) for v in row) + "\n")
    return buf.getvalue()


def json_text(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, allow_nan=False) + "\n"


def run_metadata(seed=None, run_id=None) -> dict:
    return {"run_id": run_id, "seed": seed, "version": __version__}
