from __future__ import annotations

import pytest

from arborloose.errors import CompositionError, DomainError
from arborloose.quiver import (
    Morphism,
    all_morphisms,
    compose,
    format_morphisms,
    make_quiver,
    parse_morphism_list,
)


@pytest.mark.parametrize("n, objects, arrows", [(2, 4, 6), (3, 5, 10), (4, 6, 15)])
def test_sizes(n, objects, arrows):
    Q = make_quiver(n)
    assert Q.size == objects
    assert list(Q.objects) == list(range(objects))
    assert len(all_morphisms(Q, False)) == arrows


def test_rejects_bad_n():
    with pytest.raises(DomainError):
        make_quiver(0)


def test_compose_examples(q2, q3):
    assert compose(q3, (0, 1), (1, 3)) == Morphism(0, 3)
    assert compose(q3, (2, 2), (2, 2)) == Morphism(2, 2)
    with pytest.raises(CompositionError):
        compose(q3, (1, 2), (3, 4))


def test_compose_rejects_backwards(q2):
    with pytest.raises(DomainError):
        compose(q2, (2, 1), (1, 3))


@pytest.mark.parametrize("n, include, count", [(2, True, 10), (2, False, 6), (1, False, 3)])
def test_all_morphisms(n, include, count):
    assert len(all_morphisms(make_quiver(n), include)) == count


@pytest.mark.parametrize("n", range(1, 7))
def test_category_laws(n):
    Q = make_quiver(n)
    arrows = list(all_morphisms(Q, True))
    for f in arrows:
        assert compose(Q, Q.morphism(f.source, f.source), f) == f
        assert compose(Q, f, Q.morphism(f.target, f.target)) == f
        for g in arrows:
            if g.source != f.target:
                continue
            fg = compose(Q, f, g)
            assert fg in all_morphisms(Q, True)
            for h in arrows:
                if h.source == g.target:
                    assert compose(Q, fg, h) == compose(Q, f, compose(Q, g, h))


def test_set_algebra(q2):
    A = q2.morphism_set([(0, 1), (1, 2)])
    B = q2.morphism_set([(1, 2), (2, 3)])
    assert (A | B).pairs() == [(0, 1), (1, 2), (2, 3)]
    assert (A & B).pairs() == [(1, 2)]
    assert (A - B).pairs() == [(0, 1)]
    assert A & B <= A and A | B >= B
    assert len(A.with_identities()) == 6
    assert A.with_identities().non_identities() == A


def test_parse_and_format(q3):
    W = parse_morphism_list(q3, " 0->2, 1 -> 3 ")
    assert W.pairs() == [(0, 2), (1, 3)]
    assert format_morphisms(W) == "0->2,1->3"
    assert parse_morphism_list(q3, "").pairs() == []
    with pytest.raises(DomainError):
        parse_morphism_list(q3, "1->1", allow_identities=False)
    for bad in ("0-2", "3->1", "0->9", "a->b"):
        with pytest.raises(DomainError):
            parse_morphism_list(q3, bad)
