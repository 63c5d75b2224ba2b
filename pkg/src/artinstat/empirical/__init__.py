"""Unconditional verification: orders mod p, tallies and splitting counts."""
from .sieve import DEFAULT_SEGMENT, powmod, process_segment
from .tally import (
    DEFAULT_XI_GRID,
    ComparisonReport,
    ComparisonRow,
    EmpiricalTally,
    OrderProfile,
    OrderRecord,
    clear_profile_cache,
    compare,
    empirical_densities,
    order_profile,
    primes_in_universe,
    splitting_count,
    stream_orders,
    tally_from_profile,
    tally_to_table,
)

__all__ = [
    "DEFAULT_SEGMENT",
    "DEFAULT_XI_GRID",
    "ComparisonReport",
    "ComparisonRow",
    "EmpiricalTally",
    "OrderProfile",
    "OrderRecord",
    "clear_profile_cache",
    "compare",
    "empirical_densities",
    "order_profile",
    "powmod",
    "primes_in_universe",
    "process_segment",
    "splitting_count",
    "stream_orders",
    "tally_from_profile",
    "tally_to_table",
]
