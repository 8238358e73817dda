"""Module-theoretic detection of inverted morphisms.

Two independent families of modules ``ρ`` with ``ρ(0) = 0``:

* every finite-field representation of Q with bounded dimensions that
  inverts W (a finite stand-in for "every module");
* the representable modules of the localized category, reduced so that the
  initial object goes to zero.

A morphism is *forced* by a family when every member sends it to an
invertible matrix.
"""

from __future__ import annotations

import itertools
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

import numpy as np

from arborloose.closure import closure_2of6, is_two_of_six_closed
from arborloose.errors import CapacityError, DomainError, ModelViolation
from arborloose.localization import LocalizedCategory, LocMorphism, build_localized_category
from arborloose.quiver import LinearQuiver, MorphismSet

log = logging.getLogger(__name__)

ENUMERATION_CAP = 10**8


# -- finite field linear algebra -------------------------------------------


def rank_mod_p(M: np.ndarray, p: int) -> int:
    """Rank over GF(p) by Gaussian elimination."""
    R = np.array(M, dtype=np.int64) % p
    rows, cols = R.shape
    rank = 0
    for col in range(cols):
        pivot = next((r for r in range(rank, rows) if R[r, col]), None)
        if pivot is None:
            continue
        R[[rank, pivot]] = R[[pivot, rank]]
        R[rank] = R[rank] * pow(int(R[rank, col]), -1, p) % p
        for r in range(rows):
            if r != rank and R[r, col]:
                R[r] = (R[r] - R[r, col] * R[rank]) % p
        rank += 1
        if rank == rows:
            break
    return rank


def is_invertible_mod_p(M: np.ndarray, p: int) -> bool:
    rows, cols = M.shape
    return rows == cols and rank_mod_p(M, p) == rows


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % q for q in range(2, int(p**0.5) + 1))


# -- representations -----------------------------------------------------------


@dataclass(frozen=True)
class Representation:
    """Degree-0 module of the linear quiver over GF(p).

    ``maps[i]`` is the matrix of the generating arrow ``i -> i+1`` with shape
    ``(dims[i+1], dims[i])``.
    """

    p: int
    dims: tuple[int, ...]
    maps: tuple[np.ndarray, ...]
    # unreduced representable modules are the only ones allowed off this
    zero_at_initial: bool = True

    def __post_init__(self):
        if self.zero_at_initial and self.dims[0] != 0:
            raise DomainError("the initial object must go to the zero space")
        if len(self.maps) != len(self.dims) - 1:
            raise DomainError("need one matrix per generating arrow")
        for i, M in enumerate(self.maps):
            if M.shape != (self.dims[i + 1], self.dims[i]):
                raise DomainError(f"arrow {i}->{i + 1} has shape {M.shape}, dims say {(self.dims[i + 1], self.dims[i])}")

    @property
    def size(self) -> int:
        return len(self.dims)

    def matrix(self, a: int, b: int) -> np.ndarray:
        M = np.eye(self.dims[a], dtype=np.int64)
        for i in range(a, b):
            M = self.maps[i] @ M % self.p
        return M

    def inverts(self, a: int, b: int) -> bool:
        return is_invertible_mod_p(self.matrix(a, b), self.p)

    def inverted_set(self) -> MorphismSet:
        Q = LinearQuiver(self.size)
        return Q.morphism_set(m for m in Q.morphisms if self.inverts(*m))


def _dimension_vectors(size: int, dmax: int) -> Iterator[tuple[int, ...]]:
    for rest in itertools.product(range(dmax + 1), repeat=size - 1):
        yield (0, *rest)


def _entries(dims: tuple[int, ...]) -> int:
    return sum(dims[i] * dims[i + 1] for i in range(len(dims) - 1))


def family_size(size: int, p: int, dmax: int) -> int:
    """Number of representations with all dimensions <= dmax (before filtering)."""
    return sum(p ** _entries(d) for d in _dimension_vectors(size, dmax))


def _check_family(Q: LinearQuiver, p: int, dmax: int):
    if not _is_prime(p):
        raise DomainError(f"p must be prime, got {p}")
    if dmax < 1:
        raise DomainError(f"dmax must be >= 1, got {dmax}")
    total = family_size(Q.size, p, dmax)
    if total > ENUMERATION_CAP:
        raise CapacityError(
            f"{total} representations for n={Q.n}, p={p}, dmax={dmax} exceeds {ENUMERATION_CAP}; "
            "lower dmax or n"
        )


def enumerate_representations(
    Q: LinearQuiver, W: MorphismSet, p: int = 2, dmax: int = 1
) -> Iterator[Representation]:
    """Every representation with dimensions <= dmax, ``ρ(0) = 0``, inverting all of ``W``.

    Matrices are enumerated row-major lexicographically per dimension vector.
    """
    _check_family(Q, p, dmax)
    for dims in _dimension_vectors(Q.size, dmax):
        if any(dims[a] != dims[b] for a, b in W):
            continue
        shapes = [(dims[i + 1], dims[i]) for i in range(Q.size - 1)]
        for flat in itertools.product(range(p), repeat=_entries(dims)):
            maps, k = [], 0
            for r, c in shapes:
                maps.append(np.array(flat[k : k + r * c], dtype=np.int64).reshape(r, c))
                k += r * c
            rho = Representation(p, dims, tuple(maps))
            if all(rho.inverts(a, b) for a, b in W):
                yield rho


# Fast path: the inverted-morphism mask of every representation in the
# unfiltered family, computed once per (size, p, dmax).  A representation is
# admissible for W exactly when its mask contains W, so any W's forced set is
# an AND over a filtered slice.  Matrices are tuples so products memoize.


@lru_cache(maxsize=None)
def _matrices(rows: int, cols: int, p: int) -> tuple[tuple[tuple[int, ...], ...], ...]:
    return tuple(
        tuple(tuple(flat[r * cols : (r + 1) * cols]) for r in range(rows))
        for flat in itertools.product(range(p), repeat=rows * cols)
    )


@lru_cache(maxsize=1 << 16)
def _mul(A: tuple, B: tuple, p: int, inner: int, cols: int) -> tuple:
    """``A @ B`` mod p; shapes are passed since empty tuples lose them."""
    return tuple(
        tuple(sum(A[i][k] * B[k][j] for k in range(inner)) % p for j in range(cols))
        for i in range(len(A))
    )


@lru_cache(maxsize=1 << 16)
def _invertible(A: tuple, n: int, p: int) -> bool:
    if n == 0:
        return True
    return rank_mod_p(np.array(A, dtype=np.int64).reshape(n, n), p) == n


def _identity(d: int) -> tuple:
    return tuple(tuple(int(i == j) for j in range(d)) for i in range(d))


def _masks_for_dims(args) -> list[int]:
    size, p, dims = args
    Q = LinearQuiver(size)
    id_mask = Q.identity_mask
    bits = {(a, b): Q.bit(a, b) for a, b in Q.morphisms}
    choices = [_matrices(dims[i + 1], dims[i], p) for i in range(size - 1)]
    out = []

    # products[a] is the matrix of a -> current object
    def walk(obj: int, products: list, mask: int):
        if obj == size - 1:
            out.append(mask)
            return
        nxt = obj + 1
        for A in choices[obj]:
            new_products = [_mul(A, P, p, dims[obj], dims[a]) for a, P in enumerate(products)] + [_identity(dims[nxt])]
            new_mask = mask
            for a, P in enumerate(new_products[:-1]):
                if dims[a] == dims[nxt] and _invertible(P, dims[nxt], p):
                    new_mask |= bits[(a, nxt)]
            walk(nxt, new_products, new_mask)

    walk(0, [_identity(dims[0])], id_mask)
    return out


def _workers() -> int:
    try:
        return max(1, int(os.environ.get("ARBORLOOSE_WORKERS", "1")))
    except ValueError:
        return 1


@lru_cache(maxsize=None)
def inversion_census(size: int, p: int, dmax: int) -> np.ndarray:
    """Inverted-morphism masks of every representation with dims <= dmax."""
    Q = LinearQuiver(size)
    _check_family(Q, p, dmax)
    jobs = [(size, p, d) for d in _dimension_vectors(size, dmax)]
    workers = _workers()
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            chunks = list(pool.map(_masks_for_dims, jobs))
    else:
        chunks = [_masks_for_dims(job) for job in jobs]
    return np.fromiter(itertools.chain.from_iterable(chunks), dtype=np.int64)


@dataclass(frozen=True)
class ForcedIsoSet:
    members: MorphismSet
    kind: str
    p: int = 2
    dmax: int | None = None
    family_size: int = 0


def forced_iso_reps(Q: LinearQuiver, W: MorphismSet, p: int = 2, dmax: int = 2) -> ForcedIsoSet:
    """Morphisms inverted by every bounded representation that inverts ``W``."""
    census = inversion_census(Q.size, p, dmax)
    need = np.int64(W.mask | Q.identity_mask)
    admissible = census[(census & need) == need]
    mask = int(np.bitwise_and.reduce(admissible)) if len(admissible) else Q.full_mask
    return ForcedIsoSet(MorphismSet(Q.size, mask), "reps", p, dmax, len(admissible))


def forced_iso_reps_direct(Q: LinearQuiver, W: MorphismSet, p: int = 2, dmax: int = 1) -> ForcedIsoSet:
    """Same as :func:`forced_iso_reps`, by streaming :func:`enumerate_representations`."""
    mask, count = Q.full_mask, 0
    for rho in enumerate_representations(Q, W, p, dmax):
        mask &= rho.inverted_set().mask
        count += 1
    return ForcedIsoSet(MorphismSet(Q.size, mask), "reps", p, dmax, count)


def minimal_agreeing_dmax(Q: LinearQuiver, W: MorphismSet, p: int = 2, max_dmax: int = 3) -> int | None:
    """Smallest dmax at which the bounded family forces exactly the closure of ``W``."""
    target = closure_2of6(Q, W)
    for dmax in range(1, max_dmax + 1):
        try:
            if forced_iso_reps(Q, W, p, dmax).members == target:
                return dmax
        except CapacityError:
            return None
    return None


# -- representable modules -------------------------------------------------


def factors_through_zero(lc: LocalizedCategory, phi: LocMorphism) -> bool:
    a, b = phi.source, phi.target
    return any(
        lc.compose(chi, psi) == phi for chi in lc.hom(a, 0) for psi in lc.hom(0, b)
    )


def representable_module(lc: LocalizedCategory, v: int, reduced: bool = True) -> Representation:
    """``a ↦ F₂[Hom(v, a)]`` with arrows acting by post-composition.

    With ``reduced`` the classes factoring through object 0 are quotiented out;
    they form a submodule (closed under post-composition), so the quotient has
    the surviving classes as a basis and the module vanishes at object 0.
    """
    basis = []
    for a in lc.objects:
        homs = lc.hom(v, a)
        if reduced:
            homs = [phi for phi in homs if not factors_through_zero(lc, phi)]
        basis.append(homs)
    maps = []
    for i in range(lc.size - 1):
        arrow = lc.image(i, i + 1)
        index = {phi: r for r, phi in enumerate(basis[i + 1])}
        M = np.zeros((len(basis[i + 1]), len(basis[i])), dtype=np.int64)
        for c, phi in enumerate(basis[i]):
            r = index.get(lc.compose(phi, arrow))
            if r is not None:
                M[r, c] = 1
        maps.append(M)
    dims = tuple(len(b) for b in basis)
    if reduced and dims[0] != 0:
        raise ModelViolation(f"representable module of {v} is nonzero at the initial object")
    return Representation(2, dims, tuple(maps), zero_at_initial=reduced)


def representable_modules(lc: LocalizedCategory, reduced: bool = True) -> list[Representation]:
    return [representable_module(lc, v, reduced) for v in lc.objects]


def forced_iso_representable(
    Q: LinearQuiver, wbar: MorphismSet, lc: LocalizedCategory | None = None
) -> ForcedIsoSet:
    """Morphisms inverted by every reduced representable module.

    This must equal W̄; a mismatch raises :class:`ModelViolation`.
    """
    if not is_two_of_six_closed(Q, wbar):
        raise DomainError("forced_iso_representable needs a 2-out-of-6 closed set")
    if lc is None:
        lc = build_localized_category(Q, wbar, verify=False)
    mask = Q.full_mask
    modules = representable_modules(lc)
    for rho in modules:
        mask &= rho.inverted_set().mask
    forced = MorphismSet(Q.size, mask)
    if forced != MorphismSet(Q.size, wbar.mask):
        raise ModelViolation(
            f"reduced representable modules force {forced}, closed set is {MorphismSet(Q.size, wbar.mask)}"
        )
    return ForcedIsoSet(forced, "representable", 2, None, len(modules))


# -- skeleton ----------------------------------------------------------------


@dataclass(frozen=True)
class SkeletonReport:
    classes: tuple[tuple[int, ...], ...]
    hom_sizes: tuple[tuple[int, ...], ...]
    vanishing: bool

    def class_of(self, v: int) -> tuple[int, ...]:
        return next(c for c in self.classes if v in c)


def skeleton(lc: LocalizedCategory) -> SkeletonReport:
    """Isomorphism classes of objects of the localized category.

    The module category vanishes when every object is isomorphic to the
    initial object; this is computed both from the iso search and from the
    closed set itself, and the two must agree.
    """
    parent = list(lc.objects)
    for a in lc.objects:
        for b in range(a + 1, lc.size):
            if parent[b] == b and any(lc.is_iso(phi) for phi in lc.hom(a, b)):
                parent[b] = parent[a]
    groups: dict[int, list[int]] = {}
    for v in lc.objects:
        groups.setdefault(parent[v], []).append(v)
    classes = tuple(tuple(g) for g in sorted(groups.values()))
    reps = [c[0] for c in classes]
    hom_sizes = tuple(tuple(lc.hom_size(a, b) for b in reps) for a in reps)
    by_iso = len(classes) == 1
    by_closure = lc.wbar.mask == LinearQuiver(lc.size).full_mask
    if by_iso != by_closure:
        raise ModelViolation(
            f"vanishing by isomorphism search ({by_iso}) disagrees with the closed set ({by_closure})"
        )
    return SkeletonReport(classes, hom_sizes, by_iso)
