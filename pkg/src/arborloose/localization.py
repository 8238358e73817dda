"""Explicit model of the localization Q[W̄⁻¹] by zigzags.

A morphism ``a -> b`` is a class of diagrams ``a -> m <- m0 -> b`` whose
backward arrow ``(m0, m)`` lies in the closed set W̄.  Because Q is thin the
diagram is determined by the pair ``(m, m0)``.  Two zigzags are identified
when one maps to the other componentwise (``m <= m'`` and ``m0 <= m0'``);
the commuting squares are automatic.  Classes are the connected components
of that relation.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from typing import NamedTuple

from arborloose.closure import ClosedMorphismSet, closure_2of6, is_two_of_six_closed
from arborloose.errors import CompositionError, DomainError, ModelViolation
from arborloose.quiver import LinearQuiver, MorphismSet

log = logging.getLogger(__name__)


class Zigzag(NamedTuple):
    apex: int
    pivot: int

    def __str__(self) -> str:
        return f"{self.apex}/{self.pivot}"


@dataclass(frozen=True)
class LocMorphism:
    source: int
    target: int
    class_id: int
    rep: Zigzag

    def __str__(self) -> str:
        return f"[{self.source}->{self.rep.apex}<-{self.rep.pivot}->{self.target}]"


class UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x: int, y: int):
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            # smaller root wins so that the representative is deterministic
            if ry < rx:
                rx, ry = ry, rx
            self.parent[ry] = rx


def valid_zigzags(size: int, wbar: MorphismSet, a: int, b: int) -> list[Zigzag]:
    """All ``(m, m0)`` with ``a <= m``, ``m0 <= m``, ``m0 <= b`` and ``(m0, m)`` in W̄, sorted."""
    return [
        Zigzag(m, m0)
        for m in range(a, size)
        for m0 in range(0, min(m, b) + 1)
        if (m0, m) in wbar
    ]


def zigzag_classes(size: int, wbar: MorphismSet, a: int, b: int) -> list[list[Zigzag]]:
    """Equivalence classes of zigzags ``a -> b``, each sorted, ordered by least member."""
    zz = valid_zigzags(size, wbar, a, b)
    uf = UnionFind(len(zz))
    for i, j in itertools.combinations(range(len(zz)), 2):
        (m, m0), (k, k0) = zz[i], zz[j]
        if (m <= k and m0 <= k0) or (k <= m and k0 <= m0):
            uf.union(i, j)
    groups: dict[int, list[Zigzag]] = {}
    for i, z in enumerate(zz):
        groups.setdefault(uf.find(i), []).append(z)
    return sorted((sorted(g) for g in groups.values()), key=lambda g: g[0])


def compose_zigzags(wbar: MorphismSet, first: Zigzag, second: Zigzag) -> tuple[Zigzag, int]:
    """Compose ``first: a -> b`` then ``second: b -> c``; returns (zigzag, case).

    Case 1 (``m0 <= n0``) keeps ``first``'s span, case 2 (``m <= n``) keeps
    ``second``'s, case 3 joins them through the arrow ``(n0, m)``, which W̄
    contains by 2-out-of-6 applied to ``n0 <= m0 <= n <= m``.  When both 1 and
    2 apply, the two answers are related and the caller checks they agree.
    """
    m, m0 = first
    n, n0 = second
    if m0 <= n0:
        return Zigzag(m, m0), 1
    if m <= n:
        return Zigzag(n, n0), 2
    if (n0, m) not in wbar:
        raise ModelViolation(f"case-3 composite needs {n0}->{m} in the closed set")
    return Zigzag(m, n0), 3


@dataclass
class LocalizedCategory:
    size: int
    wbar: MorphismSet
    classes: dict[tuple[int, int], list[list[Zigzag]]]
    provenance: MorphismSet | None = None
    table: dict[tuple[int, int, int, int, int], int] = field(default_factory=dict, repr=False)
    _class_of: dict[tuple[int, int, Zigzag], int] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        for (a, b), groups in self.classes.items():
            for cid, group in enumerate(groups):
                for z in group:
                    self._class_of[(a, b, z)] = cid

    @property
    def objects(self) -> range:
        return range(self.size)

    def hom(self, a: int, b: int) -> list[LocMorphism]:
        return [LocMorphism(a, b, cid, g[0]) for cid, g in enumerate(self.classes[(a, b)])]

    def hom_size(self, a: int, b: int) -> int:
        return len(self.classes[(a, b)])

    def hom_size_matrix(self) -> list[list[int]]:
        return [[self.hom_size(a, b) for b in self.objects] for a in self.objects]

    @property
    def max_hom_size(self) -> int:
        return max(len(g) for g in self.classes.values())

    def class_of(self, a: int, b: int, z: Zigzag) -> LocMorphism:
        try:
            cid = self._class_of[(a, b, Zigzag(*z))]
        except KeyError:
            raise DomainError(f"{z} is not a valid zigzag {a} -> {b}") from None
        return LocMorphism(a, b, cid, self.classes[(a, b)][cid][0])

    def identity(self, a: int) -> LocMorphism:
        return self.class_of(a, a, Zigzag(a, a))

    def image(self, a: int, b: int) -> LocMorphism:
        """Image of ``a -> b`` under Q -> Q[W̄⁻¹]: the zigzag ``a -> a <- a -> b``."""
        if not 0 <= a <= b < self.size:
            raise DomainError(f"{a}->{b} is not a morphism of Q")
        return self.class_of(a, b, Zigzag(a, a))

    def inverse_of_image(self, a: int, b: int) -> LocMorphism:
        """``b -> b <- a -> a``, the formal inverse of ``a -> b`` in W̄."""
        if (a, b) not in self.wbar:
            raise DomainError(f"{a}->{b} is not inverted")
        return self.class_of(b, a, Zigzag(b, a))

    def _compose_reps(self, a: int, b: int, c: int, x: Zigzag, y: Zigzag) -> int:
        z, case = compose_zigzags(self.wbar, x, y)
        cid = self._class_of[(a, c, z)]
        if case == 1 and x.apex <= y.apex:
            other = self._class_of[(a, c, y)]
            if other != cid:
                raise ModelViolation(f"composition cases 1 and 2 disagree on {x} then {y}")
        return cid

    def compose(self, phi: LocMorphism, psi: LocMorphism) -> LocMorphism:
        """``psi ∘ phi`` (``phi`` first)."""
        if phi.target != psi.source:
            raise CompositionError(f"cannot compose {phi} then {psi}")
        a, b, c = phi.source, phi.target, psi.target
        key = (a, b, c, phi.class_id, psi.class_id)
        cid = self.table.get(key)
        if cid is None:
            cid = self._compose_reps(a, b, c, phi.rep, psi.rep)
            self.table[key] = cid
        return LocMorphism(a, c, cid, self.classes[(a, c)][cid][0])

    def is_iso(self, phi: LocMorphism) -> bool:
        a, b = phi.source, phi.target
        id_a, id_b = self.identity(a), self.identity(b)
        return any(
            self.compose(phi, psi) == id_a and self.compose(psi, phi) == id_b
            for psi in self.hom(b, a)
        )

    def inverse(self, phi: LocMorphism) -> LocMorphism | None:
        a, b = phi.source, phi.target
        for psi in self.hom(b, a):
            if self.compose(phi, psi) == self.identity(a) and self.compose(psi, phi) == self.identity(b):
                return psi
        return None

    def non_identity_classes(self) -> list[LocMorphism]:
        out = []
        for a in self.objects:
            for b in self.objects:
                out.extend(phi for phi in self.hom(a, b) if a != b or phi != self.identity(a))
        return out

    # -- verification -------------------------------------------------

    def verify(self) -> dict[str, int]:
        """Check well-definedness, associativity and unit laws exhaustively.

        Fills the whole composition table.  Returns the number of checks of
        each kind; raises :class:`ModelViolation` on the first failure.
        """
        objs = self.objects
        counts = {"well_defined": 0, "associative": 0, "unital": 0}
        for a, b, c in itertools.product(objs, repeat=3):
            for i, gi in enumerate(self.classes[(a, b)]):
                for j, gj in enumerate(self.classes[(b, c)]):
                    results = {self._compose_reps(a, b, c, x, y) for x in gi for y in gj}
                    if len(results) != 1:
                        raise ModelViolation(
                            f"composition {a}->{b}->{c} of classes {i},{j} is not well defined: {sorted(results)}"
                        )
                    self.table[(a, b, c, i, j)] = results.pop()
                    counts["well_defined"] += 1
        for a, b in itertools.product(objs, repeat=2):
            for phi in self.hom(a, b):
                if self.compose(self.identity(a), phi) != phi or self.compose(phi, self.identity(b)) != phi:
                    raise ModelViolation(f"unit law fails at {phi}")
                counts["unital"] += 1
        for a, b, c, d in itertools.product(objs, repeat=4):
            for f in self.hom(a, b):
                for g in self.hom(b, c):
                    gf = self.compose(f, g)
                    for h in self.hom(c, d):
                        if self.compose(gf, h) != self.compose(f, self.compose(g, h)):
                            raise ModelViolation(f"associativity fails at {f}, {g}, {h}")
                        counts["associative"] += 1
        return counts


def hom_set(Q: LinearQuiver, wbar: MorphismSet, a: int, b: int) -> list[LocMorphism]:
    if not is_two_of_six_closed(Q, wbar):
        raise DomainError("localize at a 2-out-of-6 closed set; close it first")
    if not (0 <= a < Q.size and 0 <= b < Q.size):
        raise DomainError(f"objects must lie in 0..{Q.size - 1}")
    return [
        LocMorphism(a, b, cid, g[0]) for cid, g in enumerate(zigzag_classes(Q.size, wbar, a, b))
    ]


def build_localized_category(
    Q: LinearQuiver, wbar: MorphismSet, verify: bool = True
) -> LocalizedCategory:
    if not is_two_of_six_closed(Q, wbar):
        raise DomainError("localize at a 2-out-of-6 closed set; close it first")
    classes = {
        (a, b): zigzag_classes(Q.size, wbar, a, b) for a in Q.objects for b in Q.objects
    }
    provenance = wbar.provenance if isinstance(wbar, ClosedMorphismSet) else None
    lc = LocalizedCategory(Q.size, MorphismSet(Q.size, wbar.mask), classes, provenance)
    if verify:
        counts = lc.verify()
        log.debug("localization verified: %s", counts)
    return lc


def localize(Q: LinearQuiver, W: MorphismSet, verify: bool = True) -> LocalizedCategory:
    """Close ``W`` first, then localize; both sets are kept on the result."""
    wbar = closure_2of6(Q, W)
    lc = build_localized_category(Q, wbar, verify=verify)
    lc.provenance = W
    return lc


def compose_loc(lc: LocalizedCategory, phi: LocMorphism, psi: LocMorphism) -> LocMorphism:
    return lc.compose(phi, psi)


def is_iso(lc: LocalizedCategory, phi: LocMorphism) -> bool:
    return lc.is_iso(phi)


def iso_image_set(Q: LinearQuiver, wbar: MorphismSet, lc: LocalizedCategory | None = None) -> MorphismSet:
    """Morphisms of Q whose image in Q[W̄⁻¹] is invertible, found by table search."""
    if lc is None:
        lc = build_localized_category(Q, wbar, verify=False)
    return Q.morphism_set(m for m in Q.morphisms if lc.is_iso(lc.image(*m)))


def to_dot(lc: LocalizedCategory, name: str = "localization") -> str:
    lines = [f"digraph {name} {{", "  rankdir=LR;"]
    lines += [f"  {v};" for v in lc.objects]
    for phi in lc.non_identity_classes():
        lines.append(f'  {phi.source} -> {phi.target} [label="{phi.rep}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
