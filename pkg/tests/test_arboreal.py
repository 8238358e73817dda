from __future__ import annotations

import itertools

import pytest

from arborloose.arboreal import (
    CONVERSE_NOTE,
    DIMENSION_NOTE,
    EMPTY_NOTE,
    Cell,
    LooseReport,
    cell_complex,
    expected_cell_count,
    ingest_closed_set,
    loose_report,
    morphism_top_cell,
    parse_flag_file,
    report_for_link,
    sheaf_presentation,
    top_cell_morphism,
)
from arborloose.errors import DomainError
from arborloose.quiver import Morphism, make_quiver


def test_n2_counts():
    cx = cell_complex(2)
    assert cx.counts() == {0: 4, 1: 6}
    assert cx.euler_characteristic() == -2


def test_n3_counts():
    assert cell_complex(3).counts() == {0: 5, 1: 10, 2: 10}


@pytest.mark.parametrize("n", range(1, 9))
def test_counts_binomial(n):
    counts = cell_complex(n).counts()
    assert all(counts[m] == expected_cell_count(n, m) for m in range(n))


@pytest.mark.parametrize("n", range(2, 5))
def test_top_cells_have_n_vertices_in_closure(n):
    # at n = 1 the top cells are themselves the 0-cells
    cx = cell_complex(n)
    for top in cx.top_cells():
        assert len(cx.faces(top, 0)) == n


def test_face_relation_is_graded():
    cx = cell_complex(3)
    for c in cx.cells:
        for f in cx.faces(c):
            assert f.dimension < c.dimension
            assert all(g in cx.faces(c) for g in cx.faces(f))


def test_bad_cells():
    with pytest.raises(DomainError):
        Cell((2, 1), 3)
    with pytest.raises(DomainError):
        Cell((0,), 3)


def test_top_cell_labels():
    assert top_cell_morphism({0, 3}) == Morphism(0, 3)
    with pytest.raises(DomainError):
        top_cell_morphism([2, 2])
    for n in range(1, 7):
        for S in itertools.combinations(range(n + 2), 2):
            assert morphism_top_cell(top_cell_morphism(S)) == frozenset(S)


def _flags(n, proper):
    return {S: ("proper" if S in proper else "full") for S in itertools.combinations(range(n + 2), 2)}


def test_ingest():
    assert len(ingest_closed_set(3, _flags(3, set())).W) == 0
    everything = set(itertools.combinations(range(5), 2))
    assert len(ingest_closed_set(3, _flags(3, everything)).W) == 10
    assert ingest_closed_set(3, _flags(3, {(0, 2), (1, 3)})).W.pairs() == [(0, 2), (1, 3)]


def test_ingest_rejects_bad_input():
    flags = _flags(2, set())
    with pytest.raises(DomainError):
        ingest_closed_set(2, {k: v for k, v in flags.items() if k != (0, 1)})
    with pytest.raises(DomainError):
        ingest_closed_set(2, {**flags, (0, 1): "partial"})


def test_flag_file_and_empty_note():
    text = "# comment\n" + "\n".join(f"{a},{b} full" for a, b in itertools.combinations(range(4), 2))
    text = text.replace("0,2 full", "0,2 empty")
    report = report_for_link(ingest_closed_set(2, parse_flag_file(text)))
    assert report.W == "0->2"
    assert EMPTY_NOTE in report.notes
    with pytest.raises(DomainError):
        parse_flag_file("0,1\n")


def test_report_all_and_none():
    Q = make_quiver(3)
    everything = loose_report(3, Q.morphism_set(m for m in Q.morphisms if not m.is_identity))
    assert everything.loose and everything.vanishing and len(everything.loose_cells) == 10
    nothing = loose_report(3, Q.morphism_set())
    assert not nothing.loose and not nothing.vanishing and nothing.loose_cells == []
    assert CONVERSE_NOTE in nothing.notes


def test_report_two_overlapping():
    Q = make_quiver(3)
    report = loose_report(3, Q.morphism_set([(0, 2), (1, 3)]))
    loose = {tuple(map(int, c.split("->"))) for c in report.loose_cells}
    assert loose == set(itertools.combinations(range(4), 2))
    assert not report.vanishing and not report.loose
    assert len(report.cells) == 10 and not report.dimension_warning
    by_cell = {c.morphism: c for c in report.cells}
    assert by_cell["0->2"].reason == "punctured"
    assert by_cell["0->1"].reason == "closure" and by_cell["0->1"].quadruple == (0, 1, 2, 3)
    assert by_cell["0->4"].reason == "not-in-closure"


def test_dimension_warning():
    report = loose_report(2, make_quiver(2).morphism_set([(0, 2)]))
    assert report.dimension_warning and DIMENSION_NOTE in report.notes


def test_report_rejects_identities():
    Q = make_quiver(2)
    with pytest.raises(DomainError):
        loose_report(2, Q.morphism_set([(1, 1)]))


def test_json_round_trip():
    Q = make_quiver(3)
    report = loose_report(3, Q.morphism_set([(0, 2), (1, 3)]))
    text = report.to_json()
    back = LooseReport.from_json(text)
    assert back == report
    assert back.to_json() == text


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_report_consistency_exhaustive(n):
    # cross_check raises if the cell verdicts and the skeleton disagree
    Q = make_quiver(n)
    free = [m for m in Q.morphisms if not m.is_identity]
    step = 1 if n < 4 else 37
    for code in range(0, 1 << len(free), step):
        W = Q.morphism_set(m for j, m in enumerate(free) if code >> j & 1)
        loose_report(n, W, cross_check=True)


def test_sheaf_presentation():
    Q = make_quiver(2)
    lc, sk = sheaf_presentation(2, Q.morphism_set())
    assert lc.hom_size_matrix() == [[int(a <= b) for b in range(4)] for a in range(4)]
    lc, sk = sheaf_presentation(2, Q.morphism_set(m for m in Q.morphisms if not m.is_identity))
    assert sk.vanishing and len(sk.classes) == 1
    lc, sk = sheaf_presentation(2, Q.morphism_set([(0, 2)]))
    t = next(phi for phi in lc.hom(1, 1) if phi != lc.identity(1))
    assert lc.compose(t, t) == t
