"""Lifting problems, orthogonal complements and closure operators.

All queries go through a per-category lifting matrix computed once on first use;
complements are then intersections of its rows or columns as integer bitsets.
"""

import logging
from typing import List, Optional, Tuple

import numpy as np

from .errors import PushoutMissingError
from .fincat import FiniteCategory, MorphismClass, Ref, iter_bits, pushouts, retract_table

logger = logging.getLogger(__name__)


def squares(category: FiniteCategory, l: Ref, r: Ref) -> List[Tuple[int, int]]:
    """All commuting squares (top, bottom) from l to r: r∘top = bottom∘l."""
    li, ri = category.mor(l), category.mor(r)
    T = category.composites
    found = []
    for top in category.hom(category.dom[li], category.dom[ri]):
        for bottom in category.hom(category.cod[li], category.cod[ri]):
            if T[ri][top] == T[bottom][li]:
                found.append((top, bottom))
    return found


def diagonals(category: FiniteCategory, l: Ref, r: Ref, top: int, bottom: int) -> List[int]:
    """Fillers d of the square with d∘l = top and r∘d = bottom."""
    li, ri = category.mor(l), category.mor(r)
    T = category.composites
    return [d for d in category.hom(category.cod[li], category.dom[ri])
            if T[d][li] == top and T[ri][d] == bottom]


def _first_unfilled(category: FiniteCategory, l: int, r: int) -> Optional[Tuple[int, int]]:
    T = category.composites
    fillers = category.hom(category.cod[l], category.dom[r])
    for top in category.hom(category.dom[l], category.dom[r]):
        for bottom in category.hom(category.cod[l], category.cod[r]):
            if T[r][top] != T[bottom][l]:
                continue
            if not any(T[d][l] == top and T[r][d] == bottom for d in fillers):
                return (top, bottom)
    return None


def unfilled_square(category: FiniteCategory, l: Ref, r: Ref) -> Optional[Tuple[int, int]]:
    """The first square from l to r without a diagonal, or None if l lifts against r."""
    return _first_unfilled(category, category.mor(l), category.mor(r))


def lifting_matrix(category: FiniteCategory) -> np.ndarray:
    """Boolean matrix with ``[l, r]`` true iff l has the left lifting property against r."""
    return category.cached("lifting", lambda: _compute_lifting(category))


def _compute_lifting(category: FiniteCategory) -> np.ndarray:
    n = category.n_morphisms
    logger.debug(f"Computing lifting matrix for {category.name} ({n} morphisms)")
    matrix = np.ones((n, n), dtype=bool)
    for l in range(n):
        for r in range(n):
            if _first_unfilled(category, l, r) is not None:
                matrix[l, r] = False
    matrix.setflags(write=False)
    return matrix


def lifting_bitsets(category: FiniteCategory) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    """(rows, columns): rows[l] = bits of r that l lifts against; columns[r] = bits of such l."""
    def compute():
        matrix = lifting_matrix(category)
        n = category.n_morphisms
        rows = [0] * n
        columns = [0] * n
        for l, r in zip(*np.nonzero(matrix)):
            rows[int(l)] |= 1 << int(r)
            columns[int(r)] |= 1 << int(l)
        return tuple(rows), tuple(columns)
    return category.cached("lifting_bits", compute)


def lift_exists(category: FiniteCategory, l: Ref, r: Ref) -> bool:
    """True iff every square from l to r admits a diagonal filler."""
    return bool(lifting_matrix(category)[category.mor(l), category.mor(r)])


def right_complement(L: MorphismClass, within: Optional[MorphismClass] = None) -> MorphismClass:
    """L^☐: the morphisms with the right lifting property against every member of L.

    ``within`` restricts the result to a full subcategory's morphisms.
    """
    category = L.category
    rows, _ = lifting_bitsets(category)
    bits = category.full_mask if within is None else L.bits_of(within)
    for l in L:
        bits &= rows[l]
    return MorphismClass(category, bits)


def left_complement(R: MorphismClass, within: Optional[MorphismClass] = None) -> MorphismClass:
    """^☐R: the morphisms with the left lifting property against every member of R."""
    category = R.category
    _, columns = lifting_bitsets(category)
    bits = category.full_mask if within is None else R.bits_of(within)
    for r in R:
        bits &= columns[r]
    return MorphismClass(category, bits)


def lifts_against(L: MorphismClass, R: MorphismClass) -> bool:
    """True iff every member of L lifts against every member of R."""
    rows, _ = lifting_bitsets(L.category)
    target = L.bits_of(R)
    return all(rows[l] & target == target for l in L)


def lifting_failure(L: MorphismClass, R: MorphismClass) -> Optional[Tuple[int, int, int, int]]:
    """First (l, r, top, bottom) with no diagonal, scanning l then r in index order."""
    category = L.category
    rows, _ = lifting_bitsets(category)
    target = L.bits_of(R)
    for l in L:
        missing = target & ~rows[l]
        if missing:
            r = (missing & -missing).bit_length() - 1
            top, bottom = _first_unfilled(category, l, r)
            return (l, r, top, bottom)
    return None


def retract_closure(S: MorphismClass) -> MorphismClass:
    """Smallest superclass of S containing every retract of its members."""
    table = retract_table(S.category)
    bits = S.bits
    while True:
        grown = bits
        for g in iter_bits(bits):
            grown |= table[g]
        if grown == bits:
            return MorphismClass(S.category, bits)
        bits = grown


def is_retract_closed(S: MorphismClass) -> bool:
    return retract_closure(S) == S


def composition_closure(S: MorphismClass) -> MorphismClass:
    """Smallest superclass of S closed under composing composable members."""
    category = S.category
    T = category.composites
    bits = S.bits
    frontier = bits
    while frontier:
        added = 0
        for g in iter_bits(bits):
            for f in iter_bits(bits):
                if not (frontier >> g & 1 or frontier >> f & 1):
                    continue
                h = T[g][f]
                if h >= 0 and not bits >> h & 1:
                    added |= 1 << h
        bits |= added
        frontier = added
    return MorphismClass(category, bits)


def pushout_legs(I: MorphismClass) -> MorphismClass:
    """Every pushout of a member of I along any morphism out of its domain.

    For i: a→b and g: a→c, the pushout of i along g is the leg c→p of a universal cocone.
    Raises :class:`PushoutMissingError` naming the span when a pushout does not exist.
    """
    category = I.category
    bits = 0
    for i in I:
        a = category.dom[i]
        for g in range(category.n_morphisms):
            if category.dom[g] != a:
                continue
            cocones = pushouts(category, i, g)
            if not cocones:
                raise PushoutMissingError(
                    f"pushout of {category.label(i)} along {category.label(g)} does not exist",
                    witness=(category.label(i), category.label(g)))
            for _, _, v in cocones:
                bits |= 1 << v
    return MorphismClass(category, bits)


def cell_closure(I: MorphismClass) -> MorphismClass:
    """I-cell: identities and pushouts of members of I, closed under composition.

    Chains of composites stabilize in a finite category, so the transfinite composites
    reduce to this least fixed point. Identities count as the empty composite.
    """
    legs = pushout_legs(I)
    return composition_closure(I.category.identities() | legs)
