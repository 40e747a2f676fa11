"""Restricted-version families: dyadic window partitions and window splits.

Each construction takes an instance and returns a RestrictedFamily: a list of
labeled restricted versions whose windows, per vertex, exactly cover that
vertex's original window.  Solving every version and keeping the best answer
then loses at most a factor beta = len(versions).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .errors import PreconditionError
from .instance import TimeWindow, TwInstance, restrict, scale_times, window_stats
from .rational import HALF, ONE, ZERO, is_integral

# version labels are stable strings: "B<slot>_<level>" for dyadic versions,
# "B1".."B5" for the split constructions.


@dataclass(frozen=True)
class DyadicPiece:
    """One aligned power-of-two piece [lo, hi] of an integer interval.

    hi - lo = 2**level and lo is a multiple of 2**level.  slot is 1 for the
    first piece of its length inside the partition, 2 for the second; a
    partition never needs more than two pieces of any one length.
    """

    lo: int
    hi: int
    level: int
    slot: int


@dataclass(frozen=True)
class RestrictedFamily:
    """Labeled restricted versions of a base instance.

    base is the instance the version windows live in (the constructions that
    rescale time record the factor in `scale`; base = scale_times(original,
    scale)).  Version walks are valid on the original instance once their
    claim times are divided back by the factor, and claim orders transfer
    as-is.
    """

    base: TwInstance
    versions: Tuple[Tuple[str, TwInstance], ...]
    scale: Fraction = ONE

    @property
    def beta(self) -> int:
        return len(self.versions)

    def labels(self) -> List[str]:
        return [label for (label, _v) in self.versions]


# ----- dyadic partition ------------------------------------------------------

def dyadic_partition(lo: int, hi: int) -> List[DyadicPiece]:
    """Partition the integer interval [lo, hi] into disjoint aligned
    power-of-two pieces, at most two per length.

    Walks the classic recursion: peel unit pieces until both endpoints are
    even, then halve and recurse.  The result is ordered by position and has
    at most 2*ceil(log2(hi - lo)) pieces once hi - lo >= 2.
    """
    if not (isinstance(lo, int) and isinstance(hi, int)):
        raise PreconditionError("dyadic_partition needs integer endpoints")
    if lo >= hi:
        raise PreconditionError("dyadic_partition needs lo < hi, got [%s, %s]" % (lo, hi))
    front: List[Tuple[int, int, int]] = []
    back: List[Tuple[int, int, int]] = []
    level = 0
    while lo < hi:
        if lo % 2 == 1:
            front.append((lo << level, (lo + 1) << level, level))
            lo += 1
        if lo < hi and hi % 2 == 1:
            back.append(((hi - 1) << level, hi << level, level))
            hi -= 1
        if lo >= hi:
            break
        lo //= 2
        hi //= 2
        level += 1
    raw = sorted(front + back)
    seen_level: Dict[int, int] = {}
    pieces = []
    for (plo, phi, plevel) in raw:
        slot = seen_level.get(plevel, 0) + 1
        seen_level[plevel] = slot
        pieces.append(DyadicPiece(plo, phi, plevel, slot))
    return pieces


def dyadic_family(x: TwInstance) -> RestrictedFamily:
    """One restricted version per occupied (slot, level) pair of the dyadic
    partitions of all positive-reward windows.

    Windows must have integer endpoints.  Zero-length windows are excluded
    here (the fixed-time DP path handles them); the affected vertices are
    simply dropped from every version.
    """
    carriers = []
    dropped = []
    for v in x.positive_vertices():
        w = x.windows[v]
        if w.length == 0:
            dropped.append(v)
            continue
        if not (is_integral(w.release) and is_integral(w.deadline)):
            raise PreconditionError(
                "vertex %d: window [%s, %s] does not have integer endpoints"
                % (v, w.release, w.deadline))
        carriers.append(v)

    groups: Dict[Tuple[int, int], Dict[int, TimeWindow]] = {}
    for v in carriers:
        w = x.windows[v]
        for piece in dyadic_partition(int(w.release), int(w.deadline)):
            key = (piece.level, piece.slot)
            groups.setdefault(key, {})[v] = TimeWindow(Fraction(piece.lo), Fraction(piece.hi))

    versions = []
    for (level, slot) in sorted(groups):
        assignment: Dict[int, Optional[TimeWindow]] = {v: None for v in carriers + dropped}
        assignment.update(groups[(level, slot)])
        versions.append(("B%d_%d" % (slot, level), restrict(x, assignment)))
    return RestrictedFamily(x, tuple(versions))


# ----- scaling helper --------------------------------------------------------

def _scaled_for_splits(x: TwInstance, max_ratio: Optional[Fraction]) -> Tuple[TwInstance, Fraction, List[int]]:
    """Scale so the shortest positive window has length 1; returns the scaled
    instance, the factor, and the carrier vertices (positive reward, positive
    window length).  Zero-length windows are routed elsewhere and dropped."""
    stats = window_stats(x)
    if stats.l_min is None:
        raise PreconditionError("no positive-length windows to split")
    if max_ratio is not None and stats.l_ratio > max_ratio:
        raise PreconditionError(
            "window length ratio %s exceeds %s" % (stats.l_ratio, max_ratio))
    factor = ONE / stats.l_min
    scaled = scale_times(x, factor) if factor != 1 else x
    carriers = [v for v in scaled.positive_vertices() if scaled.windows[v].length > 0]
    return scaled, factor, carriers


def _family_from_maps(base: TwInstance, factor: Fraction, carriers: List[int],
                      labeled_maps: List[Tuple[str, Dict[int, TimeWindow]]]) -> RestrictedFamily:
    zeroed = [v for v in base.positive_vertices() if base.windows[v].length == 0]
    versions = []
    for label, mapping in labeled_maps:
        if not mapping:
            continue
        assignment: Dict[int, Optional[TimeWindow]] = {v: None for v in carriers + zeroed}
        assignment.update(mapping)
        versions.append((label, restrict(base, assignment)))
    return RestrictedFamily(base, tuple(versions), scale=factor)


# ----- three-way splits ------------------------------------------------------

def three_split_floor(x: TwInstance) -> RestrictedFamily:
    """Split for instances whose window lengths vary by at most 2.

    After scaling so the shortest window has length 1, each window [R, D] is
    cut at a = floor(R) + 1 (the smallest integer strictly above R) and
    b = ceil(D) - 1 (the greatest integer strictly below D).  B1 gets [R, a]
    (integral deadline), B2 the unit-length integer-aligned middle [a, b]
    when a < b, B3 gets [b, D] (integral release).  When a = b the middle is
    a single point and is dropped; when a = b + 1 (exactly the integral
    unit-length windows) the whole window goes to B1 only.
    """
    scaled, factor, carriers = _scaled_for_splits(x, Fraction(2))
    b1: Dict[int, TimeWindow] = {}
    b2: Dict[int, TimeWindow] = {}
    b3: Dict[int, TimeWindow] = {}
    for v in carriers:
        w = scaled.windows[v]
        a = Fraction(math.floor(w.release) + 1)
        b = Fraction(math.ceil(w.deadline) - 1)
        if a == b + 1:
            # integral release with length exactly 1; [R, a] is the window
            b1[v] = TimeWindow(w.release, a)
            continue
        b1[v] = TimeWindow(w.release, a)
        b3[v] = TimeWindow(b, w.deadline)
        if a < b:
            b2[v] = TimeWindow(a, b)
    return _family_from_maps(scaled, factor, carriers,
                             [("B1", b1), ("B2", b2), ("B3", b3)])


def three_split_ceil(x: TwInstance) -> RestrictedFamily:
    """Split for instances with any finite window-length ratio.

    After scaling so the shortest window has length 1, each window [R, D] is
    cut at a = ceil(R + 1) and b = floor(D - 1), clamped into the window.
    B1 = [R, min(a, D)] and B3 = [max(b, R), D] have lengths in [1, 2] and
    may overlap; B2 = [a, b] has integer endpoints and appears only when
    a < b.  Unioned per vertex the three cover [R, D] exactly.
    """
    scaled, factor, carriers = _scaled_for_splits(x, None)
    b1: Dict[int, TimeWindow] = {}
    b2: Dict[int, TimeWindow] = {}
    b3: Dict[int, TimeWindow] = {}
    for v in carriers:
        w = scaled.windows[v]
        a = Fraction(math.ceil(w.release + 1))
        b = Fraction(math.floor(w.deadline - 1))
        b1[v] = TimeWindow(w.release, min(a, w.deadline))
        b3[v] = TimeWindow(max(b, w.release), w.deadline)
        if a < b:
            b2[v] = TimeWindow(a, b)
    return _family_from_maps(scaled, factor, carriers,
                             [("B1", b1), ("B2", b2), ("B3", b3)])


def five_split(x: TwInstance) -> RestrictedFamily:
    """Split for free-endpoint instances whose window lengths vary by at
    most 2: cut every window at each interior multiple of one half.

    After scaling so the shortest window has length 1, each window yields
    between two and five pieces.  The first piece is always B1 and the last
    always B5; the (half-aligned, length-1/2) middles fill B2..B4 in order.
    """
    scaled, factor, carriers = _scaled_for_splits(x, Fraction(2))
    maps: List[Dict[int, TimeWindow]] = [{}, {}, {}, {}, {}]
    for v in carriers:
        w = scaled.windows[v]
        cuts = _half_grid_interior(w.release, w.deadline)
        bounds = [w.release] + cuts + [w.deadline]
        pieces = [TimeWindow(bounds[i], bounds[i + 1]) for i in range(len(bounds) - 1)]
        maps[0][v] = pieces[0]
        maps[4][v] = pieces[-1]
        for j, mid in enumerate(pieces[1:-1]):
            maps[1 + j][v] = mid
    labeled = [("B%d" % (i + 1), maps[i]) for i in range(5)]
    return _family_from_maps(scaled, factor, carriers, labeled)


def _half_grid_interior(lo: Fraction, hi: Fraction) -> List[Fraction]:
    """Multiples of 1/2 strictly between lo and hi, in order."""
    first = math.floor(lo * 2) + 1
    last = math.ceil(hi * 2) - 1
    return [Fraction(k, 2) for k in range(first, last + 1)]
