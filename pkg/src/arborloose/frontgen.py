"""Planar fronts of arboreal links (n = 2) and a raster census of their complement.

The front of the link of a rooted tree with at most three vertices lives in
the (x, z)-plane: a flying-saucer unknot for the root, and for every other
vertex ``v`` a dome ``z = sum of chi(r_w)`` over the non-root ancestors ``w``
of ``v`` (``v`` included), supported on the Venn interval centred at ``v``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage

from arborloose.errors import DomainError

DEFAULT_EPS = 0.2
MIN_RESOLUTION = 256
MIN_FEATURE_PIXELS = 3.0


class ResolutionError(DomainError):
    """The raster is too coarse to keep some region open."""


# -- the bump function -------------------------------------------------------


def plateau_edge(eps, c0):
    """Right end of the flat part of chi.

    The Hermite piece on ``[edge, 1]`` joins ``(c0, slope 0)`` to
    ``(eps^2, slope -2 eps)``; it is monotone iff its length is at most
    ``1.5 (c0 - eps^2) / eps`` (Fritsch-Carlson with one zero slope).
    """
    edge = 1 - 3 * (c0 - eps * eps) / (2 * eps)
    return edge if edge > 0.1 else 0.1


def _check_bump(eps, c0):
    if not 0 < eps < 1:
        raise DomainError(f"eps must lie in (0, 1), got {eps}")
    if c0 <= eps * eps:
        raise DomainError(f"plateau value c0={c0} must exceed eps^2={eps * eps} for chi to be non-increasing")
    if c0 > 1:
        raise DomainError(f"chi takes values in [0, 1]; c0={c0} is too large")


def _chi_scalar(r, eps, c0, edge):
    # generic arithmetic: exact for Fraction inputs
    if r >= 1 + eps:
        return r * 0
    if r >= 1:
        return (1 + eps - r) ** 2
    if r <= edge:
        return c0 + r * 0
    h = 1 - edge
    t = (r - edge) / h
    return (
        (2 * t**3 - 3 * t**2 + 1) * c0
        + (-2 * t**3 + 3 * t**2) * eps * eps
        + (t**3 - t**2) * h * (-2 * eps)
    )


def bump_chi(r, eps=DEFAULT_EPS, c0=None):
    """Non-increasing C^1 bump: ``c0`` near 0, ``(1+eps-r)^2`` on ``[1, 1+eps]``, 0 beyond.

    Scalars go through plain arithmetic, so ``Fraction`` arguments give exact
    values; arrays are evaluated with numpy.
    """
    if c0 is None:
        c0 = 2 * eps * eps
    _check_bump(eps, c0)
    edge = plateau_edge(eps, c0)
    if np.ndim(r) == 0 and not isinstance(r, np.ndarray):
        if r < 0:
            raise DomainError("chi is defined for r >= 0")
        return _chi_scalar(r, eps, c0, edge)
    r = np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise DomainError("chi is defined for r >= 0")
    eps, c0, edge = float(eps), float(c0), float(edge)
    h = 1.0 - edge
    t = np.clip((r - edge) / h, 0.0, 1.0)
    hermite = (
        (2 * t**3 - 3 * t**2 + 1) * c0
        + (-2 * t**3 + 3 * t**2) * eps * eps
        + (t**3 - t**2) * h * (-2 * eps)
    )
    quad = (1 + eps - r) ** 2
    return np.where(r >= 1 + eps, 0.0, np.where(r >= 1, quad, np.where(r <= edge, c0, hermite)))


# -- trees and the Venn layout ---------------------------------------------


@dataclass(frozen=True)
class RootedTree:
    """Vertex 0 is the root; ``parents[v]`` is the parent of ``v`` (``None`` for the root)."""

    parents: tuple[int | None, ...]

    def __post_init__(self):
        if not self.parents or self.parents[0] is not None:
            raise DomainError("vertex 0 must be the root")
        for v, p in enumerate(self.parents[1:], 1):
            if p is None or not 0 <= p < v:
                raise DomainError(f"vertex {v} needs a parent among 0..{v - 1}, got {p}")

    @classmethod
    def parse(cls, text: str) -> RootedTree:
        """``"root;0;1"``: one entry per vertex, the root first."""
        tokens = [t.strip() for t in text.split(";")]
        if not tokens or tokens[0] != "root":
            raise DomainError(f"tree text must start with 'root', got {text!r}")
        try:
            parents = [None] + [int(t) for t in tokens[1:]]
        except ValueError:
            raise DomainError(f"malformed tree text {text!r}") from None
        return cls(tuple(parents))

    @property
    def size(self) -> int:
        return len(self.parents)

    def ancestors(self, v: int) -> list[int]:
        """``w <= v`` in the tree order, ``v`` included."""
        out = []
        while v is not None:
            out.append(v)
            v = self.parents[v]
        return out

    def is_linear(self) -> bool:
        return all(p == v - 1 for v, p in enumerate(self.parents[1:], 1))

    def __str__(self) -> str:
        return ";".join(["root"] + [str(p) for p in self.parents[1:]])


@dataclass(frozen=True)
class VennLayout:
    n: int
    centers: np.ndarray
    eps: float = DEFAULT_EPS

    @property
    def radius(self) -> float:
        return 1 + self.eps


def venn_layout(n: int, eps: float = DEFAULT_EPS) -> VennLayout:
    """``n`` centres at the vertices of a regular simplex in R^{n-1}, each at distance 1 from 0."""
    if n < 2:
        raise DomainError("the Venn diagram needs n >= 2")
    if not 0 < eps < 1:
        raise DomainError(f"eps must lie in (0, 1), got {eps}")
    E = np.eye(n) - 1.0 / n
    # orthonormal basis of the sum-zero hyperplane from e_i - e_{i+1}
    basis, _ = np.linalg.qr((np.eye(n)[:-1] - np.eye(n)[1:]).T)
    centers = E @ basis
    centers /= np.linalg.norm(centers, axis=1, keepdims=True)
    if n == 2 and centers[0, 0] > 0:
        centers = -centers
    return VennLayout(n, centers, eps)


# -- the front diagram ---------------------------------------------------------


@dataclass
class FrontDiagram:
    tree: RootedTree
    layout: VennLayout
    c0: float
    curves: dict[str, tuple[np.ndarray, np.ndarray]]
    saucer: dict[str, float]
    # (curve name, cell) -> x-interval removed from that curve
    gaps: dict[tuple[str, tuple[int, int]], tuple[float, float]] = field(default_factory=dict)

    @property
    def punctures(self) -> dict[tuple[int, int], tuple[float, float]]:
        return {cell: span for (_, cell), span in self.gaps.items()}

    @property
    def eps(self) -> float:
        return self.layout.eps

    def center(self, v: int) -> float:
        return float(self.layout.centers[v - 1, 0])

    def dome_height(self, v: int, x):
        x = np.asarray(x, dtype=float)
        total = np.zeros_like(x)
        for w in self.tree.ancestors(v):
            if w == 0:
                continue
            total = total + bump_chi(np.abs(x - self.center(w)), self.eps, self.c0)
        return total

    def dome_support(self, v: int) -> tuple[float, float]:
        c = self.center(v)
        return c - self.layout.radius, c + self.layout.radius

    def saucer_z(self, x) -> tuple[np.ndarray, np.ndarray]:
        s = self.saucer
        x = np.asarray(x, dtype=float)
        t = np.clip((np.abs(x) - s["flat"]) / (s["half_width"] - s["flat"]), 0, 1)
        lower = s["cusp"] * (3 * t**2 - 2 * t**3)
        u = np.clip(1 - (x / s["half_width"]) ** 2, 0, None)
        upper = s["cusp"] + (s["top"] - s["cusp"]) * u**1.5
        return lower, upper

    def inside_saucer(self, x: float, z: float) -> bool:
        if abs(x) >= self.saucer["half_width"]:
            return False
        lower, upper = self.saucer_z(x)
        return float(lower) < z < float(upper)

    def domes_over(self, x: float) -> list[int]:
        return [
            v for v in range(1, self.tree.size)
            if self.dome_support(v)[0] <= x <= self.dome_support(v)[1]
        ]

    def region_label(self, x: float, z: float) -> int | frozenset:
        """Complement region containing ``(x, z)``.

        Linear trees: the object of Q (0 = unbounded, ``j`` = region directly
        below dome ``v_j``, top region = number of vertices).  Other trees:
        the set of domes lying above the point, with ``-1`` for outside.
        """
        if not self.inside_saucer(x, z):
            return 0 if self.tree.is_linear() else frozenset({-1})
        domes = self.domes_over(x)
        if self.tree.is_linear():
            above = [v for v in domes if float(self.dome_height(v, x)) > z]
            return min(above) if above else self.tree.size
        return frozenset(v for v in domes if float(self.dome_height(v, x)) > z)

    def max_dome_height(self) -> float:
        top = 0.0
        for name, (_, zs) in self.curves.items():
            if name.startswith("dome"):
                top = max(top, float(zs.max()))
        return top

    def pieces(self) -> list[tuple[str, np.ndarray, np.ndarray]]:
        """Curves split at puncture gaps."""
        out = []
        for name, (xs, zs) in self.curves.items():
            keep = np.ones(len(xs), dtype=bool)
            for (cname, _), (lo, hi) in self.gaps.items():
                if cname == name:
                    keep &= ~((xs > lo) & (xs < hi))
            runs = np.flatnonzero(np.diff(np.concatenate([[0], keep.astype(int), [0]])))
            for start, stop in zip(runs[::2], runs[1::2]):
                if stop - start >= 2:
                    out.append((name, xs[start:stop], zs[start:stop]))
        return out

    def cell_samples(self) -> dict[tuple[int, int], list[tuple[str, float]]]:
        """Sample points of every curve grouped by the region pair they separate (linear trees)."""
        delta = 1e-6
        out: dict[tuple[int, int], list[tuple[str, float]]] = {}
        for name, (xs, zs) in self.curves.items():
            for x, z in zip(xs[1:-1], zs[1:-1]):
                below = self.region_label(float(x), float(z) - delta)
                above = self.region_label(float(x), float(z) + delta)
                if below != above:
                    key = tuple(sorted((below, above)))
                    out.setdefault(key, []).append((name, float(x)))
        return out


def _saucer_params(n: int, layout: VennLayout) -> dict[str, float]:
    extent = float(np.abs(layout.centers).max()) + layout.radius
    flat = extent + 0.5
    return {"flat": flat, "half_width": flat + 1.0, "cusp": 0.5, "top": n + 2.0}


def front_curves(
    tree: RootedTree | str,
    n: int = 2,
    punctures=(),
    eps: float = DEFAULT_EPS,
    c0: float | None = None,
    samples: int = 2001,
) -> FrontDiagram:
    """Sampled front of the link of ``tree``; punctured top cells become gaps."""
    if isinstance(tree, str):
        tree = RootedTree.parse(tree)
    if n != 2:
        raise DomainError("fronts are drawn exactly for n = 2 only; use venn_layout for n = 3")
    if tree.size > n + 1:
        raise DomainError(f"a tree with {tree.size} vertices needs n >= {tree.size - 1}")
    if c0 is None:
        c0 = 2 * eps * eps
    _check_bump(eps, c0)
    layout = venn_layout(n, eps)
    saucer = _saucer_params(n, layout)
    diagram = FrontDiagram(tree, layout, c0, {}, saucer)
    xs = np.linspace(-saucer["half_width"], saucer["half_width"], samples)
    lower, upper = diagram.saucer_z(xs)
    diagram.curves["saucer_lower"] = (xs, lower)
    diagram.curves["saucer_upper"] = (xs, upper)
    for v in range(1, tree.size):
        lo, hi = diagram.dome_support(v)
        dx = np.linspace(lo, hi, samples)
        diagram.curves[f"dome_{v}"] = (dx, diagram.dome_height(v, dx))
    punctures = [tuple(sorted(p)) for p in punctures]
    if punctures:
        _place_punctures(diagram, punctures)
    return diagram


def _place_punctures(diagram: FrontDiagram, punctures):
    if not diagram.tree.is_linear():
        raise DomainError("punctures are only placed on fronts of linear trees")
    samples = diagram.cell_samples()
    for a, b in punctures:
        if (a, b) not in samples:
            raise DomainError(f"no top cell {{{a},{b}}} in this front")
        points = samples[(a, b)]
        names = [name for name, _ in points]
        name = max(set(names), key=names.count)
        xs = sorted(x for nm, x in points if nm == name)
        mid = xs[len(xs) // 2]
        half = min(0.08, (xs[-1] - xs[0]) / 6) or 0.02
        diagram.gaps[(name, (a, b))] = (mid - half, mid + half)


# -- raster census -------------------------------------------------------------


def _z_warp(diagram: FrontDiagram, z):
    """Monotone piecewise-linear stretch giving the thin dome band half the rows."""
    band_lo, band_hi = -0.05, 1.25 * diagram.max_dome_height() + 0.05
    zmin, zmax = -0.5, diagram.saucer["top"] + 0.5
    return np.interp(z, [zmin, band_lo, band_hi, zmax], [0.0, 0.25, 0.75, 1.0])


def _x_warp(diagram: FrontDiagram, x):
    w = diagram.saucer["half_width"] + 0.5
    return (np.asarray(x) + w) / (2 * w)


def min_feature_pixels(diagram: FrontDiagram, resolution: int) -> float:
    """Thickness in raster rows of the thinnest region, measured at its thickest column."""
    xs = np.linspace(-diagram.saucer["half_width"], diagram.saucer["half_width"], 1501)
    thickest: dict[tuple[str, str], float] = {}
    for x in xs:
        lower, upper = diagram.saucer_z(x)
        heights = [("saucer_lower", float(lower)), ("saucer_upper", float(upper))]
        for v in diagram.domes_over(x):
            heights.append((f"dome_{v}", float(diagram.dome_height(v, x))))
        heights.sort(key=lambda t: t[1])
        rows = [float(_z_warp(diagram, z)) * resolution for _, z in heights]
        for (n1, _), (n2, _), r1, r2 in zip(heights, heights[1:], rows, rows[1:]):
            key = (n1, n2)
            thickest[key] = max(thickest.get(key, 0.0), r2 - r1)
    return min(thickest.values())


def rasterize(diagram: FrontDiagram, resolution: int) -> np.ndarray:
    """Boolean image, True on curve pixels; rows grow with z."""
    img = np.zeros((resolution, resolution), dtype=bool)
    for _, xs, zs in diagram.pieces():
        cols = _x_warp(diagram, xs) * (resolution - 1)
        rows = _z_warp(diagram, zs) * (resolution - 1)
        seg = np.hypot(np.diff(cols), np.diff(rows))
        steps = np.maximum(1, np.ceil(seg / 0.25)).astype(int)
        for c0, r0, c1, r1, k in zip(cols[:-1], rows[:-1], cols[1:], rows[1:], steps):
            t = np.linspace(0, 1, k + 1)
            cc = np.rint(c0 + t * (c1 - c0)).astype(int)
            rr = np.rint(r0 + t * (r1 - r0)).astype(int)
            img[rr, cc] = True
    return img


@dataclass(frozen=True)
class RegionCensus:
    bounded: int
    unbounded: int
    labels: dict
    resolution: int
    areas: tuple[int, ...]


def region_census(diagram: FrontDiagram, resolution: int = 512) -> RegionCensus:
    """Count complement components of the rasterized front (4-connected)."""
    if resolution < MIN_RESOLUTION:
        raise ResolutionError(f"resolution must be >= {MIN_RESOLUTION}, got {resolution}")
    thinnest = min_feature_pixels(diagram, resolution)
    if thinnest < MIN_FEATURE_PIXELS:
        raise ResolutionError(
            f"thinnest region spans {thinnest:.1f} rows at resolution {resolution}; raise the resolution"
        )
    img = rasterize(diagram, resolution)
    components, count = ndimage.label(~img, structure=ndimage.generate_binary_structure(2, 1))
    border = set(np.unique(np.concatenate([components[0], components[-1], components[:, 0], components[:, -1]])))
    border.discard(0)
    width = diagram.saucer["half_width"] + 0.5
    zgrid = np.linspace(-0.5, diagram.saucer["top"] + 0.5, 20001)
    zwarp = _z_warp(diagram, zgrid)
    labels = {}
    areas = []
    for k in range(1, count + 1):
        rr, cc = np.nonzero(components == k)
        areas.append(len(rr))
        if k in border:
            continue
        i = len(rr) // 2
        x = cc[i] / (resolution - 1) * 2 * width - width
        z = float(np.interp(rr[i] / (resolution - 1), zwarp, zgrid))
        labels[k] = diagram.region_label(float(x), z)
    return RegionCensus(count - len(border), len(border), labels, resolution, tuple(areas))


# -- SVG -------------------------------------------------------------------------

_COLORS = {"saucer_lower": "#222", "saucer_upper": "#222"}


def to_svg(diagram: FrontDiagram, width: int = 800, height: int = 500) -> str:
    pad = 20
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f"<!-- tree {diagram.tree}; dome band vertically stretched -->",
    ]
    for name, xs, zs in diagram.pieces():
        px = pad + _x_warp(diagram, xs) * (width - 2 * pad)
        py = height - pad - _z_warp(diagram, zs) * (height - 2 * pad)
        points = " ".join(f"{a:.2f},{b:.2f}" for a, b in zip(px, py))
        color = _COLORS.get(name, "#1f5fa8")
        parts.append(f'<polyline id="{name}" fill="none" stroke="{color}" stroke-width="1.5" points="{points}"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def venn_svg(layout: VennLayout, size: int = 500) -> str:
    """The Venn diagram itself: intervals for n = 2, circles for n = 3."""
    if layout.n not in (2, 3):
        raise DomainError("only planar Venn diagrams (n = 2, 3) are drawn")
    scale = size / (2 * (1 + layout.radius) + 0.5)
    mid = size / 2
    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">']
    for i, c in enumerate(layout.centers):
        cx = mid + scale * c[0]
        cy = mid - scale * (c[1] if layout.n == 3 else 0.0)
        if layout.n == 3:
            parts.append(
                f'<circle id="ball_{i + 1}" cx="{cx:.2f}" cy="{cy:.2f}" r="{scale * layout.radius:.2f}" '
                'fill="none" stroke="#1f5fa8" stroke-width="1.5"/>'
            )
        else:
            y = mid + 12 * i
            parts.append(
                f'<line id="ball_{i + 1}" x1="{cx - scale * layout.radius:.2f}" y1="{y:.2f}" '
                f'x2="{cx + scale * layout.radius:.2f}" y2="{y:.2f}" stroke="#1f5fa8" stroke-width="3"/>'
            )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def regular_simplex_check(layout: VennLayout) -> tuple[float, float]:
    """(spread of pairwise distances, max deviation of |centre| from 1)."""
    c = layout.centers
    d = [np.linalg.norm(c[i] - c[j]) for i in range(len(c)) for j in range(i + 1, len(c))]
    return (max(d) - min(d) if d else 0.0, float(np.abs(np.linalg.norm(c, axis=1) - 1).max()))

