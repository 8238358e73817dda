"""2-out-of-6 closure of morphism sets of the linear quiver.

In a thin linear category a composable triple ``a -f-> b -g-> c -h-> d`` is
just a chain ``a <= b <= c <= d``; ``gf = (a,c)`` and ``hg = (b,d)``.  The
closure rule is therefore

    (a,c), (b,d) in W   ==>   (a,b), (b,c), (c,d), (a,d) in W

over all quadruples ``a <= b <= c <= d``.  With identities seeded, the
2-out-of-3 consequences are instances of the same rule (take ``b = c`` or a
degenerate end).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator

import numpy as np

from arborloose.errors import CapacityError, DomainError, ModelViolation
from arborloose.quiver import LinearQuiver, Morphism, MorphismSet

BRUTE_FORCE_MAX_SIZE = 7


@dataclass(frozen=True, eq=False)
class ClosedMorphismSet(MorphismSet):
    """A 2-out-of-6 closed set together with the set it was generated from.

    ``levels`` maps each member to the saturation pass that first produced it
    (0 for members of the seed ``W ∪ identities``); ``witness`` maps members
    added later to the quadruple ``(a, b, c, d)`` that forced them.
    """

    provenance: MorphismSet | None = None
    passes: int = 0
    levels: dict = field(default_factory=dict, repr=False)
    witness: dict = field(default_factory=dict, repr=False)

    def as_set(self) -> MorphismSet:
        return MorphismSet(self.size, self.mask)


def quadruples(size: int) -> Iterator[tuple[int, int, int, int]]:
    """All ``a <= b <= c <= d`` in lexicographic order."""
    return itertools.combinations_with_replacement(range(size), 4)


@lru_cache(maxsize=None)
def _rules(size: int) -> tuple[tuple[int, int, tuple[int, int, int, int]], ...]:
    """(premise mask, conclusion mask, quadruple) per quadruple."""
    Q = LinearQuiver(size)
    rules = []
    for a, b, c, d in quadruples(size):
        premise = Q.bit(a, c) | Q.bit(b, d)
        conclusion = Q.bit(a, b) | Q.bit(b, c) | Q.bit(c, d) | Q.bit(a, d)
        if conclusion & ~premise:
            rules.append((premise, conclusion, (a, b, c, d)))
    return tuple(rules)


def _validate(Q: LinearQuiver, W: MorphismSet):
    if W.size != Q.size:
        raise DomainError(f"morphism set lives on A_{W.size}, quiver is A_{Q.size}")
    if W.mask & ~Q.full_mask:
        raise DomainError("morphism set has bits outside the quiver")


def closure_2of6(Q: LinearQuiver, W: MorphismSet) -> ClosedMorphismSet:
    """Least 2-out-of-6 closed superset of ``W ∪ identities``.

    Each pass applies every rule to the set produced by the previous pass,
    so pass ``i`` reproduces the level ``W_i`` of the iterative construction.
    ``passes`` counts every full scan, including the final one that adds
    nothing.
    """
    _validate(Q, W)
    rules = _rules(Q.size)
    current = W.mask | Q.identity_mask
    levels = {m: 0 for m in MorphismSet(Q.size, current)}
    witness: dict[Morphism, tuple[int, int, int, int]] = {}
    passes = 0
    while True:
        passes += 1
        new = current
        for premise, conclusion, quad in rules:
            if current & premise == premise and conclusion & ~new:
                for m in MorphismSet(Q.size, conclusion & ~new):
                    levels[m] = passes
                    witness[m] = quad
                new |= conclusion
        if new == current:
            break
        current = new
    return ClosedMorphismSet(
        Q.size, current, provenance=W, passes=passes, levels=levels, witness=witness
    )


def is_two_of_six_closed(Q: LinearQuiver, W: MorphismSet) -> bool:
    _validate(Q, W)
    mask = W.mask
    if mask & Q.identity_mask != Q.identity_mask:
        return False
    for a, b, c, d in quadruples(Q.size):
        if (a, c) in W and (b, d) in W:
            if not all(m in W for m in ((a, b), (b, c), (c, d), (a, d))):
                return False
    return True


def _check_capacity(Q: LinearQuiver):
    if Q.size > BRUTE_FORCE_MAX_SIZE:
        raise CapacityError(
            f"exhaustive subset enumeration is capped at {BRUTE_FORCE_MAX_SIZE} objects "
            f"(2^21 subsets); got {Q.size}"
        )


@lru_cache(maxsize=None)
def _closed_table(size: int) -> np.ndarray:
    """Masks of every 2-out-of-6 closed set, by filtering all supersets of the identities.

    Deliberately independent of the saturation code: closedness is tested
    straight from the definition, one composable triple at a time, vectorized
    over all candidate subsets.
    """
    Q = LinearQuiver(size)
    free_bits = [i for i, m in enumerate(Q.morphisms) if not m.is_identity]
    codes = np.arange(1 << len(free_bits), dtype=np.int64)
    masks = np.full(codes.shape, Q.identity_mask, dtype=np.int64)
    for j, bit in enumerate(free_bits):
        masks |= ((codes >> j) & 1) << bit

    def member(a, b):
        return (masks >> Q.index(a, b)) & 1 == 1

    ok = np.ones(codes.shape, dtype=bool)
    for a in range(size):
        for b in range(a, size):
            for c in range(b, size):
                for d in range(c, size):
                    # f=(a,b), g=(b,c), h=(c,d); gf=(a,c), hg=(b,d), hgf=(a,d)
                    fires = member(a, c) & member(b, d)
                    holds = member(a, b) & member(b, c) & member(c, d) & member(a, d)
                    ok &= ~fires | holds
    return masks[ok]


def enumerate_closed_sets(Q: LinearQuiver) -> Iterator[ClosedMorphismSet]:
    """Every 2-out-of-6 closed set exactly once, ordered by its non-identity subset code."""
    _check_capacity(Q)
    for mask in _closed_table(Q.size):
        S = MorphismSet(Q.size, int(mask))
        yield ClosedMorphismSet(Q.size, S.mask, provenance=S)


def count_closed_sets(Q: LinearQuiver) -> int:
    _check_capacity(Q)
    return len(_closed_table(Q.size))


def brute_force_minimal_closed_superset(Q: LinearQuiver, W: MorphismSet) -> ClosedMorphismSet:
    """Oracle for :func:`closure_2of6` by exhaustive enumeration.

    Takes every closed subset containing ``W ∪ identities``; their
    intersection and the smallest one by cardinality must coincide.
    """
    _validate(Q, W)
    _check_capacity(Q)
    table = _closed_table(Q.size)
    need = np.int64(W.mask | Q.identity_mask)
    supersets = table[(table & need) == need]
    if len(supersets) == 0:
        raise ModelViolation("the full morphism set is closed, so some superset must exist")
    meet = int(np.bitwise_and.reduce(supersets))
    counts = np.array([int(m).bit_count() for m in supersets])
    smallest = int(supersets[int(np.argmin(counts))])
    if meet != smallest:
        raise ModelViolation(
            f"intersection of closed supersets ({meet:#x}) is not the minimal one ({smallest:#x})"
        )
    return ClosedMorphismSet(Q.size, meet, provenance=W)
