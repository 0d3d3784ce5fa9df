"""Bit-codes of finite sets of naturals and the Cantor pairing bijection.

A finite set {k_0, ..., k_r} is coded by the natural sum(2**k_i); the empty
set is coded by 0.  Decoding reads off the set bits.  Pairing is the Cantor
bijection pair(m, n) = (m+n)(m+n+1)/2 + n with exact inverses.  Everything is
arbitrary precision: codes like 2**200 appear routinely one application level
up, so all values are plain Python ints.
"""

from __future__ import annotations

from math import isqrt
from typing import Iterable, Iterator


def encode_finset(elements: Iterable[int]) -> int:
    """Code of a finite set of naturals; duplicates are harmless."""
    code = 0
    for k in elements:
        if k < 0:
            raise ValueError(f"not a natural: {k}")
        code |= 1 << k
    return code


def decode_finset(n: int) -> frozenset[int]:
    """The set of bit positions set in n."""
    return frozenset(iter_bits(n))


def iter_bits(n: int) -> Iterator[int]:
    """Bit positions of n in ascending order."""
    if n < 0:
        raise ValueError(f"not a natural: {n}")
    while n:
        low = n & -n
        yield low.bit_length() - 1
        n ^= low


def subset_code(n: int, m: int) -> bool:
    """True iff the set coded by n is a subset of the set coded by m."""
    return n & m == n


def pair(m: int, n: int) -> int:
    """Cantor pairing (m+n)(m+n+1)/2 + n."""
    s = m + n
    return s * (s + 1) // 2 + n


_UNPAIR_MEMO: dict[int, tuple[int, int]] = {}


def unpair(z: int) -> tuple[int, int]:
    """Exact inverse of pair.  Memoized: enumeration decodes the same pair
    codes very many times."""
    got = _UNPAIR_MEMO.get(z)
    if got is None:
        s = (isqrt(8 * z + 1) - 1) // 2
        n = z - s * (s + 1) // 2
        got = _UNPAIR_MEMO[z] = (s - n, n)
    return got


def proj0(z: int) -> int:
    return unpair(z)[0]


def proj1(z: int) -> int:
    return unpair(z)[1]


def is_power_of_two(n: int) -> bool:
    return n > 0 and n & (n - 1) == 0


def singleton_exponent(n: int) -> int | None:
    """k such that n codes the singleton {k}, i.e. n == 2**k; None otherwise."""
    if is_power_of_two(n):
        return n.bit_length() - 1
    return None
