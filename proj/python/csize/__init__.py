"""Concurrent sets with a linearizable, wait-free size()."""

from ._csize import (
    Set,
    check_history,
    key_range_for,
    run_bench,
    run_stress,
    table_size_for,
)

__all__ = [
    "Set",
    "check_history",
    "key_range_for",
    "run_bench",
    "run_stress",
    "table_size_for",
]
