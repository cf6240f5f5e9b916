"""Compact immutable sets of source indices, backed by a bitmask."""

from __future__ import annotations

from typing import Iterable, Iterator


class SourceSet:
    """An immutable set of source indices 0..M-1 stored as an integer bitmask.

    Decoding sets, outage subsets and interference sets are all small subsets
    of the M sources, so a bitmask keeps set algebra and subset enumeration
    cheap. Iteration order is ascending index, which fixes the deterministic
    enumeration order used by the tie-breaking rules.
    """

    __slots__ = ("mask",)

    def __init__(self, mask: int = 0):
        if mask < 0:
            raise ValueError(f"negative bitmask: {mask}")
        object.__setattr__(self, "mask", mask)

    def __setattr__(self, name, value):
        raise AttributeError("SourceSet is immutable")

    @classmethod
    def from_indices(cls, indices: Iterable[int]) -> "SourceSet":
        mask = 0
        for i in indices:
            if i < 0:
                raise ValueError(f"negative source index: {i}")
            mask |= 1 << i
        return cls(mask)

    @classmethod
    def single(cls, index: int) -> "SourceSet":
        return cls(1 << index)

    @classmethod
    def full(cls, m: int) -> "SourceSet":
        """The set of all M sources."""
        return cls((1 << m) - 1)

    def indices(self) -> tuple[int, ...]:
        return tuple(self)

    def __contains__(self, index: int) -> bool:
        return bool(self.mask >> index & 1)

    def __iter__(self) -> Iterator[int]:
        mask = self.mask
        while mask:
            low = mask & -mask
            yield low.bit_length() - 1
            mask ^= low

    def __len__(self) -> int:
        return bin(self.mask).count("1")

    def __bool__(self) -> bool:
        return self.mask != 0

    def __eq__(self, other) -> bool:
        return isinstance(other, SourceSet) and self.mask == other.mask

    def __hash__(self) -> int:
        return hash(self.mask)

    def __or__(self, other: "SourceSet") -> "SourceSet":
        return SourceSet(self.mask | other.mask)

    def __and__(self, other: "SourceSet") -> "SourceSet":
        return SourceSet(self.mask & other.mask)

    def __sub__(self, other: "SourceSet") -> "SourceSet":
        return SourceSet(self.mask & ~other.mask)

    def intersects(self, other: "SourceSet") -> bool:
        return bool(self.mask & other.mask)

    def issubset(self, other: "SourceSet") -> bool:
        return self.mask & ~other.mask == 0

    def complement(self, m: int) -> "SourceSet":
        """Complement with respect to the full set of M sources."""
        return SourceSet(((1 << m) - 1) & ~self.mask)

    def __repr__(self) -> str:
        return f"SourceSet({{{', '.join(map(str, self))}}})"
