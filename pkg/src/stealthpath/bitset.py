"""Region sets as plain int bitmasks.

Bit i set means region i is a member. Python ints give us arbitrary width,
cheap union/intersection, popcount via int.bit_count, and hashability for
search-state keys.
"""

from __future__ import annotations

from typing import Iterable, Iterator


def mask_from_indices(indices: Iterable[int]) -> int:
    mask = 0
    for i in indices:
        mask |= 1 << int(i)  # numpy ints would wrap past bit 63
    return mask


def iter_bits(mask: int) -> Iterator[int]:
    """Yield set-bit positions in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def bit_indices(mask: int) -> list[int]:
    return list(iter_bits(mask))
