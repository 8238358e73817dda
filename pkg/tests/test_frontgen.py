from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest

from arborloose.errors import DomainError
from arborloose.frontgen import (
    ResolutionError,
    RootedTree,
    bump_chi,
    front_curves,
    plateau_edge,
    region_census,
    regular_simplex_check,
    to_svg,
    venn_layout,
    venn_svg,
)

EPS = Fraction(1, 5)


def test_chi_values():
    assert bump_chi(1 + EPS, EPS) == 0
    assert bump_chi(Fraction(1), EPS) == EPS**2
    assert bump_chi(Fraction(0), EPS) == 2 * EPS**2
    assert bump_chi(5.0) == 0.0
    assert bump_chi(0.0) == pytest.approx(0.08)


def test_chi_monotone_and_c1():
    r = np.linspace(0, 1.5, 10_000)
    chi = bump_chi(r)
    assert np.all(np.diff(chi) <= 0)
    h = Fraction(1, 10**12)
    left = (bump_chi(Fraction(1), EPS) - bump_chi(1 - h, EPS)) / h
    right = (bump_chi(1 + h, EPS) - bump_chi(Fraction(1), EPS)) / h
    assert abs(float(left + 2 * EPS)) < 1e-9
    assert abs(float(right + 2 * EPS)) < 1e-9


def test_chi_array_matches_scalar():
    for r in (0.0, 0.5, 0.8, 0.95, 1.0, 1.1, 1.3):
        assert float(bump_chi(np.array([r]))[0]) == pytest.approx(float(bump_chi(r)), abs=1e-15)


def test_plateau_edge_default():
    assert plateau_edge(0.2, 0.08) == pytest.approx(0.7)


def test_chi_rejects_bad_parameters():
    with pytest.raises(DomainError):
        bump_chi(0.5, eps=0.2, c0=0.01)
    with pytest.raises(DomainError):
        bump_chi(-0.1)
    with pytest.raises(DomainError):
        bump_chi(0.5, eps=1.5)


def test_tree_parsing():
    assert RootedTree.parse("root;0;1").is_linear()
    assert not RootedTree.parse("root;0;0").is_linear()
    assert RootedTree.parse("root;0;1").ancestors(2) == [2, 1, 0]
    assert RootedTree.parse("root;0;0").ancestors(2) == [2, 0]
    for bad in ("0;1", "root;x", "root;1"):
        with pytest.raises(DomainError):
            RootedTree.parse(bad)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_venn_layout_regular(n):
    spread, deviation = regular_simplex_check(venn_layout(n))
    assert spread < 1e-12 and deviation < 1e-12


def test_linear_front_census():
    d = front_curves("root;0;1")
    for res in (512, 1024):
        c = region_census(d, res)
        assert (c.bounded, c.unbounded) == (3, 1)
        assert sorted(c.labels.values()) == [1, 2, 3]


def test_saucer_census():
    c = region_census(front_curves("root"), 512)
    assert (c.bounded, c.unbounded) == (1, 1)


def test_nonlinear_front_census():
    # crossing domes cut the saucer into four pieces: outside both, in either, in both
    c = region_census(front_curves("root;0;0"), 512)
    assert (c.bounded, c.unbounded) == (4, 1)
    assert sorted(map(sorted, c.labels.values())) == [[], [1], [1, 2], [2]]


def test_comparable_domes_do_not_touch():
    d = front_curves("root;0;1")
    lo, hi = d.dome_support(2)
    xs = np.linspace(lo, hi, 2001)[1:-1]
    assert np.min(d.dome_height(2, xs) - d.dome_height(1, xs)) > 0


def test_puncture_merges_regions():
    d = front_curves("root;0;1", punctures=[(1, 2)])
    assert (1, 2) in d.punctures
    c = region_census(d, 512)
    assert (c.bounded, c.unbounded) == (2, 1)


def test_puncture_validation():
    with pytest.raises(DomainError):
        front_curves("root;0;0", punctures=[(0, 1)])
    with pytest.raises(DomainError):
        front_curves("root;0;1", n=3)


def test_resolution_guard():
    d = front_curves("root;0;1")
    with pytest.raises(ResolutionError):
        region_census(d, 128)


def test_svg_output():
    svg = to_svg(front_curves("root;0;1"))
    assert svg.startswith("<svg") and svg.count("<polyline") == 4
    assert svg == to_svg(front_curves("root;0;1"))
    assert venn_svg(venn_layout(3)).count("<circle") == 3
