from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from arborloose.closure import closure_2of6, enumerate_closed_sets
from arborloose.errors import CapacityError, DomainError
from arborloose.localization import build_localized_category
from arborloose.modcat import (
    Representation,
    enumerate_representations,
    family_size,
    forced_iso_representable,
    forced_iso_reps,
    forced_iso_reps_direct,
    is_invertible_mod_p,
    minimal_agreeing_dmax,
    rank_mod_p,
    representable_module,
    representable_modules,
    skeleton,
)
from arborloose.quiver import MorphismSet, make_quiver


def test_rank_mod_p():
    M = np.array([[1, 1], [1, 1]])
    assert rank_mod_p(M, 2) == 1
    assert rank_mod_p(np.array([[2, 0], [0, 1]]), 2) == 1
    assert rank_mod_p(np.array([[2, 0], [0, 1]]), 3) == 2
    assert is_invertible_mod_p(np.eye(3, dtype=np.int64), 5)
    assert is_invertible_mod_p(np.zeros((0, 0), dtype=np.int64), 2)
    assert not is_invertible_mod_p(np.zeros((1, 2), dtype=np.int64), 2)


def test_representation_validation():
    with pytest.raises(DomainError):
        Representation(2, (1, 1), (np.ones((1, 1), dtype=np.int64),))
    with pytest.raises(DomainError):
        Representation(2, (0, 1), (np.ones((1, 1), dtype=np.int64),))


def test_invertible_from_zero_forces_zero(q2):
    reps = list(enumerate_representations(q2, q2.morphism_set([(0, 1)]), 2, 1))
    assert reps and all(rho.dims[1] == 0 for rho in reps)


def test_unfiltered_count_n1():
    Q = make_quiver(1)
    reps = list(enumerate_representations(Q, Q.morphism_set(), 2, 1))
    # dims (0, d1, d2) with d1, d2 in {0, 1}; one 2^(d1*d2) choice of matrix
    assert len(reps) == sum(2 ** (d1 * d2) for d1 in (0, 1) for d2 in (0, 1)) == 5
    assert family_size(Q.size, 2, 1) == 5


def test_every_yielded_rep_inverts_w(q2):
    W = q2.morphism_set([(1, 3)])
    for rho in enumerate_representations(q2, W, 2, 2):
        assert rho.inverts(1, 3)


@pytest.mark.parametrize("pairs", [[(0, 1)], [(0, 2)], []])
def test_forced_examples(q2, pairs):
    W = q2.morphism_set(pairs)
    assert forced_iso_reps(q2, W, 2, 2).members == W.with_identities()


def test_census_matches_direct_enumeration(q2):
    for pairs in ([], [(0, 2)], [(1, 2), (2, 3)], [(0, 2), (1, 3)]):
        W = q2.morphism_set(pairs)
        fast, slow = forced_iso_reps(q2, W, 2, 1), forced_iso_reps_direct(q2, W, 2, 1)
        assert fast.members == slow.members
        assert fast.family_size == slow.family_size


def test_capacity_cap(q3):
    with pytest.raises(CapacityError):
        forced_iso_reps(q3, q3.morphism_set(), 2, 3)


def test_smallest_dmax(q3):
    assert minimal_agreeing_dmax(q3, q3.morphism_set([(0, 2), (1, 3)])) == 1


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 3), st.data())
def test_sandwich_and_dmax_monotone(n, data):
    Q = make_quiver(n)
    free = [m for m in Q.morphisms if not m.is_identity]
    W = Q.morphism_set(data.draw(st.lists(st.sampled_from(free), unique=True)))
    wbar = closure_2of6(Q, W)
    one, two = forced_iso_reps(Q, W, 2, 1).members, forced_iso_reps(Q, W, 2, 2).members
    assert wbar <= two <= one


def test_representables_without_inversion(q2):
    lc = build_localized_category(q2, q2.identities())
    for v in range(1, 4):
        assert representable_module(lc, v).dims == tuple(int(a >= v) for a in range(4))
    assert representable_module(lc, 0).dims == (0, 0, 0, 0)


def test_unreduced_dimension_counts_hom_set(q2):
    lc = build_localized_category(q2, q2.morphism_set([(0, 2)]).with_identities())
    assert representable_module(lc, 1, reduced=False).dims[1] == lc.hom_size(1, 1) == 2
    assert representable_module(lc, 1).dims[1] == 1


@pytest.mark.parametrize("n", [1, 2, 3])
def test_representables_invert_closed_set(n):
    Q = make_quiver(n)
    for S in enumerate_closed_sets(Q):
        lc = build_localized_category(Q, S.as_set(), verify=False)
        for reduced in (True, False):
            for rho in representable_modules(lc, reduced):
                assert all(rho.inverts(a, b) for a, b in S)
        assert forced_iso_representable(Q, S.as_set(), lc).members == S


def test_representable_trivial_cases(q2):
    full = MorphismSet(q2.size, q2.full_mask)
    assert forced_iso_representable(q2, full).members == full
    assert forced_iso_representable(q2, q2.identities()).members == q2.identities()
    with pytest.raises(DomainError):
        forced_iso_representable(q2, q2.morphism_set([(0, 1), (1, 2)]).with_identities())


def test_skeleton_examples(q3):
    full = build_localized_category(q3, MorphismSet(q3.size, q3.full_mask))
    rep = skeleton(full)
    assert rep.classes == ((0, 1, 2, 3, 4),) and rep.vanishing
    rep = skeleton(build_localized_category(q3, q3.identities()))
    assert rep.classes == tuple((v,) for v in range(5)) and not rep.vanishing
    wbar = closure_2of6(q3, q3.morphism_set([(0, 2), (1, 3)]))
    rep = skeleton(build_localized_category(q3, wbar.as_set()))
    assert rep.classes == ((0, 1, 2, 3), (4,)) and not rep.vanishing
    assert rep.class_of(2) == (0, 1, 2, 3)
