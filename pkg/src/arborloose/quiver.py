"""The linear quiver Q = A_{n+2} and bit-encoded sets of its morphisms.

Objects are ``0..size-1``; object 0 is the appended initial object and
object 1 is the root of A_{n+1}.  Q is thin: there is exactly one morphism
``a -> b`` when ``a <= b`` and none otherwise, so a morphism *is* its pair
of endpoints.

Every morphism has a fixed index, row-major over the upper triangle
(``(0,0), (0,1), ..., (0,size-1), (1,1), ...``).  A :class:`MorphismSet`
stores membership as an ``int`` bitmask over those indices; every module
uses the same encoding.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Iterator, NamedTuple

from arborloose.errors import CompositionError, DomainError


class Morphism(NamedTuple):
    source: int
    target: int

    @property
    def is_identity(self) -> bool:
        return self.source == self.target

    def __str__(self) -> str:
        return f"{self.source}->{self.target}"


@dataclass(frozen=True)
class LinearQuiver:
    """Thin category on the total order ``0 < 1 < ... < size-1``."""

    size: int

    def __post_init__(self):
        if self.size < 2:
            raise DomainError(f"quiver needs at least 2 objects, got {self.size}")

    @property
    def n(self) -> int:
        return self.size - 2

    @property
    def objects(self) -> range:
        return range(self.size)

    @cached_property
    def morphisms(self) -> tuple[Morphism, ...]:
        return tuple(
            Morphism(a, b) for a in range(self.size) for b in range(a, self.size)
        )

    @cached_property
    def _index(self) -> dict[tuple[int, int], int]:
        return {m: i for i, m in enumerate(self.morphisms)}

    @property
    def num_morphisms(self) -> int:
        return self.size * (self.size + 1) // 2

    def index(self, a: int, b: int) -> int:
        try:
            return self._index[(a, b)]
        except KeyError:
            raise DomainError(f"{a}->{b} is not a morphism of A_{self.size}") from None

    def bit(self, a: int, b: int) -> int:
        return 1 << self.index(a, b)

    def has(self, a: int, b: int) -> bool:
        return 0 <= a <= b < self.size

    def morphism(self, a: int, b: int) -> Morphism:
        if not self.has(a, b):
            raise DomainError(f"{a}->{b} is not a morphism of A_{self.size}")
        return Morphism(a, b)

    @cached_property
    def identity_mask(self) -> int:
        mask = 0
        for a in range(self.size):
            mask |= self.bit(a, a)
        return mask

    @cached_property
    def full_mask(self) -> int:
        return (1 << self.num_morphisms) - 1

    @cached_property
    def non_identity_mask(self) -> int:
        return self.full_mask & ~self.identity_mask

    def morphism_set(self, pairs: Iterable[tuple[int, int]] = ()) -> MorphismSet:
        mask = 0
        for a, b in pairs:
            mask |= self.bit(a, b)
        return MorphismSet(self.size, mask)

    def identities(self) -> MorphismSet:
        return MorphismSet(self.size, self.identity_mask)


def make_quiver(n: int) -> LinearQuiver:
    """Q = A_{n+2} for the ambient parameter ``n >= 1``."""
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    return LinearQuiver(n + 2)


def compose(Q: LinearQuiver, f: tuple[int, int], g: tuple[int, int]) -> Morphism:
    """``g ∘ f``: first ``f``, then ``g``."""
    a, b = Q.morphism(*f)
    b2, c = Q.morphism(*g)
    if b != b2:
        raise CompositionError(f"cannot compose {a}->{b} then {b2}->{c}")
    return Morphism(a, c)


def all_morphisms(Q: LinearQuiver, include_identities: bool = True) -> MorphismSet:
    mask = Q.full_mask if include_identities else Q.non_identity_mask
    return MorphismSet(Q.size, mask)


@lru_cache(maxsize=None)
def quiver_of_size(size: int) -> LinearQuiver:
    return LinearQuiver(size)


@dataclass(frozen=True, eq=False)
class MorphismSet:
    size: int
    mask: int = 0

    @property
    def quiver(self) -> LinearQuiver:
        return quiver_of_size(self.size)

    def __eq__(self, other) -> bool:
        if not isinstance(other, MorphismSet):
            return NotImplemented
        return self.size == other.size and self.mask == other.mask

    def __hash__(self) -> int:
        return hash((self.size, self.mask))

    def __contains__(self, m) -> bool:
        a, b = m
        Q = self.quiver
        return Q.has(a, b) and bool(self.mask >> Q.index(a, b) & 1)

    def __iter__(self) -> Iterator[Morphism]:
        mask = self.mask
        for i, m in enumerate(self.quiver.morphisms):
            if mask >> i & 1:
                yield m

    def __len__(self) -> int:
        return self.mask.bit_count()

    def _check(self, other: MorphismSet):
        if other.size != self.size:
            raise DomainError("morphism sets live on different quivers")

    def __or__(self, other: MorphismSet) -> MorphismSet:
        self._check(other)
        return MorphismSet(self.size, self.mask | other.mask)

    def __and__(self, other: MorphismSet) -> MorphismSet:
        self._check(other)
        return MorphismSet(self.size, self.mask & other.mask)

    def __sub__(self, other: MorphismSet) -> MorphismSet:
        self._check(other)
        return MorphismSet(self.size, self.mask & ~other.mask)

    def __le__(self, other: MorphismSet) -> bool:
        self._check(other)
        return self.mask & ~other.mask == 0

    def __ge__(self, other: MorphismSet) -> bool:
        self._check(other)
        return other.mask & ~self.mask == 0

    def non_identities(self) -> MorphismSet:
        return MorphismSet(self.size, self.mask & self.quiver.non_identity_mask)

    def with_identities(self) -> MorphismSet:
        return MorphismSet(self.size, self.mask | self.quiver.identity_mask)

    def pairs(self) -> list[tuple[int, int]]:
        return [tuple(m) for m in self]

    def __str__(self) -> str:
        return format_morphisms(self)


_TOKEN = re.compile(r"^(\d+)->(\d+)$")


def parse_morphism(text: str) -> tuple[int, int]:
    token = re.sub(r"\s+", "", text)
    match = _TOKEN.match(token)
    if match is None:
        raise DomainError(f"malformed morphism {text!r}; expected 'a->b'")
    return int(match.group(1)), int(match.group(2))


def parse_morphism_list(
    Q: LinearQuiver, text: str, allow_identities: bool = True
) -> MorphismSet:
    """Parse ``"a->b, c->d"`` (whitespace-insensitive, empty allowed)."""
    pairs = []
    for token in text.split(","):
        if not token.strip():
            continue
        a, b = parse_morphism(token)
        if not Q.has(a, b):
            raise DomainError(f"{a}->{b} is not a morphism of A_{Q.size} (need 0 <= a <= b <= {Q.size - 1})")
        if a == b and not allow_identities:
            raise DomainError(
                f"identity {a}->{b} given; puncture sets contain non-identity morphisms only"
            )
        pairs.append((a, b))
    return Q.morphism_set(pairs)


def format_morphisms(W: Iterable[tuple[int, int]]) -> str:
    return ",".join(f"{a}->{b}" for a, b in sorted(W))
