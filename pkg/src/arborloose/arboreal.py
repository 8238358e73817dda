"""Cells of the linear arboreal link and the looseness decision.

An m-cell of the link of A_{n+1} is indexed by the set of complement
regions whose closures meet along it; regions are the objects of Q, so an
m-cell is an ``(n-m+1)``-element subset of ``{0, ..., n+1}``.  Top cells are
2-subsets ``{a, b}`` and correspond to the morphisms ``a -> b``.

A cell ``{a, b}`` is loose exactly when ``a -> b`` lies in the 2-out-of-6
closure of the puncture set, and the link is loose exactly when its sheaf
category vanishes, i.e. when the closure is everything.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import asdict, dataclass, field
from math import comb
from typing import Iterable, Mapping

from arborloose.closure import closure_2of6
from arborloose.errors import DomainError, ModelViolation
from arborloose.localization import LocalizedCategory, build_localized_category
from arborloose.modcat import SkeletonReport, skeleton
from arborloose.quiver import LinearQuiver, Morphism, MorphismSet, format_morphisms, make_quiver


@dataclass(frozen=True, order=True)
class Cell:
    vertices: tuple[int, ...]
    n: int

    def __post_init__(self):
        if list(self.vertices) != sorted(set(self.vertices)):
            raise DomainError(f"cell vertices must be distinct and sorted, got {self.vertices}")
        if not 2 <= len(self.vertices) <= self.n + 1:
            raise DomainError(f"a cell of the n={self.n} link has 2..{self.n + 1} vertices, got {len(self.vertices)}")

    @property
    def dimension(self) -> int:
        return self.n - len(self.vertices) + 1

    @property
    def is_top(self) -> bool:
        return len(self.vertices) == 2

    def __str__(self) -> str:
        return "{" + ",".join(map(str, self.vertices)) + "}"


@dataclass(frozen=True)
class ArborealComplex:
    n: int
    cells: tuple[Cell, ...]

    @property
    def quiver(self) -> LinearQuiver:
        return make_quiver(self.n)

    def cells_of_dimension(self, m: int) -> list[Cell]:
        return [c for c in self.cells if c.dimension == m]

    def counts(self) -> dict[int, int]:
        return {m: len(self.cells_of_dimension(m)) for m in range(self.n)}

    def top_cells(self) -> list[Cell]:
        return self.cells_of_dimension(self.n - 1)

    @staticmethod
    def is_face(face: Cell, cell: Cell) -> bool:
        """``face`` lies in the closure of ``cell``: more regions meet along it."""
        return face != cell and set(cell.vertices) <= set(face.vertices)

    def faces(self, cell: Cell, dimension: int | None = None) -> list[Cell]:
        return [
            f for f in self.cells
            if self.is_face(f, cell) and (dimension is None or f.dimension == dimension)
        ]

    def euler_characteristic(self) -> int:
        return sum((-1) ** m * k for m, k in self.counts().items())

    @staticmethod
    def region_label(v: int) -> str:
        if v == 0:
            return "unbounded"
        return f"U_v{v - 1}"

    def to_dot(self) -> str:
        """Hasse diagram of the face poset, edges from a cell to its codimension-1 faces."""
        lines = ["digraph faces {", "  rankdir=BT;"]
        name = {c: "c" + "_".join(map(str, c.vertices)) for c in self.cells}
        for c in self.cells:
            lines.append(f'  {name[c]} [label="{c} dim {c.dimension}"];')
        for c in self.cells:
            for f in self.faces(c, c.dimension - 1):
                lines.append(f"  {name[f]} -> {name[c]};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def cell_complex(n: int) -> ArborealComplex:
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    cells = tuple(
        Cell(S, n)
        for k in range(2, n + 2)
        for S in itertools.combinations(range(n + 2), k)
    )
    return ArborealComplex(n, cells)


def expected_cell_count(n: int, m: int) -> int:
    return comb(n + 2, n - m + 1)


def top_cell_morphism(S: Iterable[int]) -> Morphism:
    vertices = sorted(S)
    if len(vertices) != 2 or vertices[0] == vertices[1]:
        raise DomainError(f"a top cell is a 2-element vertex set, got {sorted(S)}")
    return Morphism(vertices[0], vertices[1])


def morphism_top_cell(f: tuple[int, int]) -> frozenset[int]:
    a, b = f
    if not a < b:
        raise DomainError(f"only non-identity morphisms a->b with a<b label top cells, got {a}->{b}")
    return frozenset((a, b))


@dataclass(frozen=True)
class PuncturedLink:
    complex: ArborealComplex
    W: MorphismSet
    empty_cells: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        if self.W.mask & self.complex.quiver.identity_mask:
            raise DomainError("puncture sets contain no identities")

    def is_punctured(self, cell: Cell) -> bool:
        return tuple(cell.vertices) in self.W


def ingest_closed_set(n: int, flags: Mapping[tuple[int, int], str]) -> PuncturedLink:
    """Puncture set from per-top-cell intersection flags.

    ``flags[(a, b)]`` says whether the closed set meets cell ``{a, b}`` in the
    whole cell (``"full"``) or a proper subset (``"proper"``; ``"empty"`` is
    accepted and counts as proper).
    """
    cx = cell_complex(n)
    Q = cx.quiver
    wanted = {tuple(c.vertices) for c in cx.top_cells()}
    given = {tuple(sorted(k)) for k in flags}
    if len(given) != len(flags):
        raise DomainError("duplicate flags for a top cell")
    if given - wanted:
        raise DomainError(f"flags for unknown cells: {sorted(given - wanted)}")
    if wanted - given:
        raise DomainError(f"missing flags for cells: {sorted(wanted - given)}")
    pairs, empty = [], []
    for key, flag in flags.items():
        a, b = sorted(key)
        if flag not in ("full", "proper", "empty"):
            raise DomainError(f"flag for {{{a},{b}}} must be full|proper|empty, got {flag!r}")
        if flag != "full":
            pairs.append((a, b))
        if flag == "empty":
            empty.append((a, b))
    return PuncturedLink(cx, Q.morphism_set(pairs), tuple(sorted(empty)))


def parse_flag_file(text: str) -> dict[tuple[int, int], str]:
    """Lines ``a,b full|proper``; blank lines and ``#`` comments skipped."""
    flags: dict[tuple[int, int], str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            pair, flag = line.split()
            a, b = (int(x) for x in pair.split(","))
        except ValueError:
            raise DomainError(f"line {lineno}: expected 'a,b full|proper', got {raw!r}") from None
        key = (min(a, b), max(a, b))
        if key in flags:
            raise DomainError(f"line {lineno}: duplicate flag for cell {{{a},{b}}}")
        flags[key] = flag
    return flags


# -- looseness report ---------------------------------------------------------

REASON_PUNCTURED = "punctured"
REASON_CLOSURE = "closure"
REASON_NOT_IN_CLOSURE = "not-in-closure"


@dataclass(frozen=True)
class CellVerdict:
    morphism: str
    punctured: bool
    loose: bool
    reason: str
    level: int | None = None
    quadruple: tuple[int, int, int, int] | None = None


@dataclass(frozen=True)
class LooseReport:
    n: int
    W: str
    closure: str
    cells: tuple[CellVerdict, ...]
    loose: bool
    vanishing: bool
    saturation_passes: int
    dimension_warning: bool
    notes: tuple[str, ...] = field(default=())

    @property
    def loose_cells(self) -> list[str]:
        return [c.morphism for c in self.cells if c.loose]

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_dict(cls, data: dict) -> LooseReport:
        cells = tuple(
            CellVerdict(**{**c, "quadruple": tuple(c["quadruple"]) if c["quadruple"] else None})
            for c in data["cells"]
        )
        return cls(**{**data, "cells": cells, "notes": tuple(data["notes"])})

    @classmethod
    def from_json(cls, text: str) -> LooseReport:
        return cls.from_dict(json.loads(text))

    def table(self) -> str:
        lines = [f"{'cell':>8}  {'punctured':>9}  {'loose':>5}  reason"]
        for c in self.cells:
            a, b = c.morphism.split("->")
            why = c.reason
            if c.reason == REASON_CLOSURE:
                why += f" (pass {c.level}, quadruple {','.join(map(str, c.quadruple))})"
            lines.append(f"{'{' + a + ',' + b + '}':>8}  {str(c.punctured):>9}  {str(c.loose):>5}  {why}")
        lines.append(
            f"cells={len(self.cells)} loose={len(self.loose_cells)} "
            f"link_loose={str(self.loose).lower()} vanishing={str(self.vanishing).lower()}"
        )
        lines.extend(f"note: {note}" for note in self.notes)
        return "\n".join(lines) + "\n"


DIMENSION_NOTE = (
    "n < 3: loose Legendrians need dimension 2n-1 >= 5; verdicts below are combinatorial only"
)
CONVERSE_NOTE = (
    "non-loose verdicts rely on the converse direction (non-vanishing sheaf obstruction)"
)
EMPTY_NOTE = "cells disjoint from the closed set were treated as proper intersections"


def loose_report(n: int, W: MorphismSet, cross_check: bool = True, empty_cells: Iterable = ()) -> LooseReport:
    """Per-cell and global looseness for the link punctured along ``W``."""
    Q = make_quiver(n)
    if W.size != Q.size:
        raise DomainError(f"puncture set lives on A_{W.size}, expected A_{Q.size}")
    if W.mask & Q.identity_mask:
        raise DomainError("puncture sets contain no identities")
    wbar = closure_2of6(Q, W)
    verdicts = []
    for cell in cell_complex(n).top_cells():
        f = top_cell_morphism(cell.vertices)
        punctured = f in W
        if punctured:
            reason, level, quad = REASON_PUNCTURED, 0, None
        elif f in wbar:
            reason, level, quad = REASON_CLOSURE, wbar.levels[f], wbar.witness[f]
        else:
            reason, level, quad = REASON_NOT_IN_CLOSURE, None, None
        verdicts.append(CellVerdict(str(f), punctured, f in wbar, reason, level, quad))
    all_loose = all(v.loose for v in verdicts)
    vanishing = all_loose
    if cross_check:
        lc = build_localized_category(Q, wbar, verify=False)
        vanishing = skeleton(lc).vanishing
        if vanishing != all_loose:
            raise ModelViolation(
                f"all-cells-loose ({all_loose}) disagrees with sheaf vanishing ({vanishing})"
            )
    notes = []
    if n < 3:
        notes.append(DIMENSION_NOTE)
    if not all_loose:
        notes.append(CONVERSE_NOTE)
    if tuple(empty_cells):
        notes.append(EMPTY_NOTE)
    return LooseReport(
        n=n,
        W=format_morphisms(W),
        closure=format_morphisms(wbar),
        cells=tuple(verdicts),
        loose=all_loose,
        vanishing=vanishing,
        saturation_passes=wbar.passes,
        dimension_warning=n < 3,
        notes=tuple(notes),
    )


def report_for_link(link: PuncturedLink, cross_check: bool = True) -> LooseReport:
    return loose_report(link.complex.n, link.W, cross_check, link.empty_cells)


def sheaf_presentation(n: int, W: MorphismSet, verify: bool = True) -> tuple[LocalizedCategory, SkeletonReport]:
    """Localized category and its skeleton, presenting the sheaf category of the punctured link."""
    Q = make_quiver(n)
    if W.mask & Q.identity_mask:
        raise DomainError("puncture sets contain no identities")
    wbar = closure_2of6(Q, W)
    lc = build_localized_category(Q, wbar, verify=verify)
    lc.provenance = W
    return lc, skeleton(lc)
