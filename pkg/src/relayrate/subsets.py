"""Bitmask helpers for subsets of users.

Users are labelled 1..L in everything a person reads or writes and bit
``l - 1`` of an integer mask internally.
"""

from __future__ import annotations

from collections.abc import Iterable, Iterator

from .errors import BitOutOfRangeError, TooManyUsersError

MAX_USERS = 20


def check_num_users(num_users: int) -> int:
    if not 1 <= num_users <= MAX_USERS:
        raise TooManyUsersError(f"number of users must lie in [1, {MAX_USERS}], got {num_users}")
    return num_users


def full_mask(num_users: int) -> int:
    return (1 << num_users) - 1


def check_mask(mask: int, num_users: int) -> int:
    if mask < 0 or mask >> num_users:
        raise BitOutOfRangeError(f"subset mask {mask:#x} has bits outside users 1..{num_users}")
    return mask


def complement(mask: int, num_users: int) -> int:
    return full_mask(num_users) ^ mask


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def mask_of(users: Iterable[int], num_users: int | None = None) -> int:
    """Mask for a collection of 1-indexed user labels."""
    mask = 0
    for u in users:
        u = int(u)
        if u < 1 or (num_users is not None and u > num_users):
            bound = num_users if num_users is not None else "L"
            raise BitOutOfRangeError(f"user {u} outside [1, {bound}]")
        mask |= 1 << (u - 1)
    return mask


def users_of(mask: int) -> list[int]:
    out = []
    u = 1
    while mask:
        if mask & 1:
            out.append(u)
        mask >>= 1
        u += 1
    return out


def bits_of(mask: int) -> list[int]:
    """0-indexed bit positions set in ``mask``."""
    return [u - 1 for u in users_of(mask)]


def submasks(mask: int, proper: bool = False) -> Iterator[int]:
    """All submasks of ``mask`` including 0, in decreasing numeric order."""
    sub = mask
    while True:
        if not (proper and sub == mask):
            yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def ordered_subsets(num_users: int, include_full: bool = True) -> list[int]:
    """Nonempty masks sorted by (cardinality, mask value)."""
    top = full_mask(num_users)
    masks = range(1, top + 1 if include_full else top)
    return sorted(masks, key=lambda m: (popcount(m), m))


def format_subset(mask: int) -> str:
    return "{" + ",".join(str(u) for u in users_of(mask)) + "}"
