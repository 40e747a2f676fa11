"""Dynamic programs over modular instances.

A modular partition splits the positive-reward vertices into blocks with
time intervals that appear in order along the timeline; every member's
window must contain its block's interval.  Any feasible walk then collects
each block's vertices in one contiguous stretch, so the instance solves by
sequencing per-block point-to-point walks, which is what the three DPs
below do.  They differ in what the state tracks:

* solve_time_indexed   - (position, clock) -> best reward; integral data only
* solve_reward_indexed - (position, reward) -> earliest clock; any rationals
* solve_exact_pareto   - labels carry both, pruned to the Pareto frontier

The first two take a point-to-point orienteering oracle and inherit its
ratio; the third is exact and oracle-free.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .errors import InfeasibleInstanceError, PreconditionError
from .instance import ANCHORED, FREE, START_ONLY, TwInstance, WalkSolution, evaluate_walk
from .metric import Metric
from .oracles import (MonotoneOracle, OrienteeringOracle, WalkResult, pareto_profiles)
from .rational import ZERO, fraction_gcd, is_finite, is_integral


@dataclass(frozen=True)
class ModularBlock:
    members: frozenset  # vertex ids collected in this block
    release: Fraction  # block interval start
    deadline: Fraction  # block interval end


@dataclass(frozen=True)
class ModularPartition:
    blocks: tuple

    def __len__(self) -> int:
        return len(self.blocks)


def verify_modular(x: TwInstance, part: ModularPartition) -> List[str]:
    """Diagnostics for a claimed modular partition; empty list means valid.

    Checks interval sanity and ordering, member-window containment, and that
    every positive-reward vertex sits in exactly one block.  The start and
    end anchors are exempt from the coverage requirement (their reward, if
    any, can be picked up at the anchor visits), but when listed as members
    they are checked like anyone else.
    """
    problems: List[str] = []
    blocks = part.blocks
    for i, b in enumerate(blocks):
        if b.release > b.deadline:
            problems.append("block %d interval is reversed" % i)
        if b.release < 0 or b.deadline > x.budget:
            problems.append("block %d interval leaves [0, budget]" % i)
        for v in sorted(b.members):
            if not (0 <= v < x.n):
                problems.append("block %d lists unknown vertex %d" % (i, v))
                continue
            w = x.windows[v]
            if w.release > b.release or w.deadline < b.deadline:
                problems.append("vertex %d window does not contain block %d interval" % (v, i))
    for i in range(len(blocks) - 1):
        if blocks[i].deadline > blocks[i + 1].release:
            problems.append("blocks %d and %d are out of order" % (i, i + 1))
    counts: Dict[int, int] = {}
    for b in blocks:
        for v in b.members:
            counts[v] = counts.get(v, 0) + 1
    for v, c in sorted(counts.items()):
        if c > 1:
            problems.append("vertex %d appears in %d blocks" % (v, c))
    exempt = {v for v in (x.s, x.t) if v is not None}
    for v in range(x.n):
        if x.rewards[v] > 0 and v not in exempt and counts.get(v, 0) == 0:
            problems.append("positive-reward vertex %d is not covered by any block" % v)
    return problems


def blocks_from_identical_windows(x: TwInstance) -> ModularPartition:
    """Partition built by grouping positive-reward vertices with identical
    windows.  The result is only claimed, not checked; run verify_modular."""
    groups: Dict[Tuple[Fraction, Fraction], set] = {}
    for v in range(x.n):
        if x.rewards[v] > 0:
            w = x.windows[v]
            groups.setdefault((w.release, w.deadline), set()).add(v)
    blocks = [ModularBlock(frozenset(mem), r, d) for (r, d), mem in sorted(groups.items())]
    return ModularPartition(tuple(blocks))


def require_modular(x: TwInstance, part: ModularPartition):
    problems = verify_modular(x, part)
    if problems:
        raise PreconditionError("not a modular partition: " + problems[0])


def ensure_reachable_anchors(x: TwInstance):
    """Anchored instances where t cannot be reached from s in budget have no
    feasible walk at all."""
    if x.mode == ANCHORED:
        leg = x.metric.d[x.s][x.t]
        if not is_finite(leg) or leg > x.budget:
            raise InfeasibleInstanceError(
                "end anchor unreachable from start anchor within budget")


@dataclass
class DpResult:
    """Outcome of one modular solve.

    walk is re-evaluated on the instance itself, so its reward is what the
    solver actually certifies.  claimed is the DP's internal total (with an
    approximate oracle it can exceed walk.reward by up to the ratio).
    """

    walk: WalkSolution
    claimed: Fraction
    segments: tuple  # ((block_index, visit order), ...)


# ----- shared assembly -------------------------------------------------------

def assemble_walk(x: TwInstance, segments: List[Tuple[int, tuple]]) -> WalkSolution:
    """Turn per-block visit orders into one walk and evaluate it.

    Members are flagged at their first occurrence across the segments;
    anchors travel unflagged and, when they carry reward that no block
    covers, the best of the four flag combinations is kept.
    """
    covered = set()
    core: List[Tuple[int, bool]] = []
    for (_bi, order) in segments:
        for v in order:
            if v in covered:
                core.append((v, False))
            else:
                covered.add(v)
                core.append((v, True))

    combos: List[Tuple[bool, bool]] = [(False, False)]
    if x.s is not None and x.rewards[x.s] > 0 and x.s not in covered:
        combos += [(True, False)]
    if x.t is not None and x.rewards[x.t] > 0 and x.t not in covered:
        combos += [(c[0], True) for c in list(combos)]

    best: Optional[WalkSolution] = None
    for (fs, ft) in combos:
        order: List[Tuple[int, bool]] = []
        if x.s is not None:
            order.append((x.s, fs))
        order.extend(core)
        if x.t is not None:
            order.append((x.t, ft))
        sol = evaluate_walk(x, order)
        if sol.feasible and (best is None or sol.reward > best.reward):
            best = sol
    if best is None:
        # fall back to the bare anchor walk so callers always get an answer
        best = evaluate_walk(x, [(v, False) for v in (x.s, x.t) if v is not None])
    return best


def start_position(x: TwInstance):
    # position None means the walk has not started yet (free endpoints)
    if x.mode == FREE:
        return None
    return x.s


def entry_time(x: TwInstance, p, tau: Fraction, u: int, release: Fraction):
    """Earliest usable time at entry u of a block released at `release`,
    coming from position p at time tau.  None when u is unreachable."""
    if p is None:
        return release
    leg = x.metric.d[p][u]
    if not is_finite(leg):
        return None
    arr = tau + leg
    return arr if arr > release else release


def finishable(x: TwInstance, p, tau: Fraction) -> bool:
    if x.mode == ANCHORED:
        pos = x.s if p is None else p
        leg = x.metric.d[pos][x.t]
        return is_finite(leg) and tau + leg <= x.budget
    return True


def _block_eligible(x: TwInstance, b: ModularBlock) -> Dict[int, Fraction]:
    return {v: x.rewards[v] for v in sorted(b.members) if x.rewards[v] > 0}


def pos_key(p) -> tuple:
    return (p is not None, p if p is not None else -1)


# ----- time-indexed DP -------------------------------------------------------

def solve_time_indexed(x: TwInstance, part: ModularPartition,
                       oracle: OrienteeringOracle) -> DpResult:
    """Label DP over (position, clock) states, integral data only.

    Block entry times and oracle budgets stay integral, so the state space
    is finite without any rounding.  With an exact oracle this solves the
    modular instance exactly.
    """
    require_modular(x, part)
    ensure_reachable_anchors(x)
    _require_integral(x, part)
    mono = MonotoneOracle(oracle)

    # labels[p] = list of (time, reward, back) on the Pareto frontier
    labels: Dict[object, List[tuple]] = {start_position(x): [(ZERO, ZERO, None)]}

    for bi, b in enumerate(part.blocks):
        eligible = _block_eligible(x, b)
        if not eligible:
            continue
        new_labels = {p: list(ls) for p, ls in labels.items()}
        for p in sorted(labels, key=pos_key):
            for (tau, rew, back) in labels[p]:
                for u in sorted(eligible):
                    e = entry_time(x, p, tau, u, b.release)
                    if e is None or e > b.deadline:
                        continue
                    cap = b.deadline - e
                    for w in sorted(eligible):
                        seen = set()
                        for budget in _int_budgets(cap):
                            res = mono.query(x.metric, eligible, u, w, budget)
                            if not res.feasible or res.order in seen:
                                continue
                            seen.add(res.order)
                            entry = (e + res.duration, rew + res.reward,
                                     (p, tau, rew, bi, res.order, back))
                            push_label(new_labels.setdefault(w, []), entry)
        labels = new_labels

    return harvest_labels(x, labels)


def _int_budgets(cap: Fraction):
    if cap < 0:
        return []
    return [Fraction(b) for b in range(int(cap) + 1)]


def _require_integral(x: TwInstance, part: ModularPartition):
    ok = is_integral(x.budget)
    for row in x.metric.d:
        for v in row:
            if is_finite(v) and not is_integral(v):
                ok = False
    for b in part.blocks:
        if not (is_integral(b.release) and is_integral(b.deadline)):
            ok = False
    if not ok:
        raise PreconditionError(
            "time-indexed DP needs integral distances and block bounds; "
            "use solve_reward_indexed for rational data")


def push_label(frontier: List[tuple], entry: tuple):
    """Insert a (time, reward, back) label, keeping the frontier minimal:
    no label may be as late and as poor as another."""
    t, r = entry[0], entry[1]
    for (t2, r2, _b) in frontier:
        if t2 <= t and r2 >= r:
            return
    frontier[:] = [e for e in frontier if not (t <= e[0] and r >= e[1])]
    frontier.append(entry)
    frontier.sort(key=lambda e: (e[0], -e[1]))


def harvest_labels(x: TwInstance, labels) -> DpResult:
    """Pick the best finishable label and rebuild its segment list."""
    best = None
    for p in sorted(labels, key=pos_key):
        for entry in labels[p]:
            tau, rew = entry[0], entry[1]
            if not finishable(x, p, tau):
                continue
            key = (rew, -tau)
            if best is None or key > best[0]:
                best = (key, entry)
    if best is None:
        ensure_reachable_anchors(x)
        return DpResult(assemble_walk(x, []), ZERO, ())
    segments: List[Tuple[int, tuple]] = []
    back = best[1][2]
    while back is not None:
        (_p, _tau, _rew, bi, order, prev) = back
        segments.append((bi, order))
        back = prev
    segments.reverse()
    walk = assemble_walk(x, segments)
    claimed = best[1][1]
    return DpResult(walk, claimed, tuple(segments))


# ----- reward-indexed DP -----------------------------------------------------

def solve_reward_indexed(x: TwInstance, part: ModularPartition,
                         oracle: OrienteeringOracle) -> DpResult:
    """Label DP over (position, accumulated reward) -> earliest completion.

    Reward levels walk a grid of multiples of the gcd of the member rewards,
    so rational data needs no scaling.  Per (entry, exit, level) the block
    time is the leftmost achievable duration at which the oracle certifies
    the level, found by binary search; the oracle is wrapped to be monotone
    in its budget first, which keeps the search sound.

    With a ratio-a oracle the returned walk collects at least claimed / a,
    and claimed is at least the modular optimum.
    """
    require_modular(x, part)
    ensure_reachable_anchors(x)
    mono = MonotoneOracle(oracle)
    alpha = oracle.spec.ratio

    rewards = [x.rewards[v] for b in part.blocks for v in b.members if x.rewards[v] > 0]
    grain = fraction_gcd(rewards) if rewards else Fraction(1)

    # same (time, reward, back) labels; reward levels drive the transitions
    labels: Dict[object, List[tuple]] = {start_position(x): [(ZERO, ZERO, None)]}

    for bi, b in enumerate(part.blocks):
        eligible = _block_eligible(x, b)
        if not eligible:
            continue
        span = b.deadline - b.release
        total = sum(eligible.values(), ZERO)
        levels = _levels(total, grain)
        finder = _BlockTimes(x.metric, eligible, span, mono, alpha)
        new_labels = {p: list(ls) for p, ls in labels.items()}
        for p in sorted(labels, key=pos_key):
            for (tau, k, back) in labels[p]:
                for u in sorted(eligible):
                    e = entry_time(x, p, tau, u, b.release)
                    if e is None or e > b.deadline:
                        continue
                    cap = b.deadline - e
                    for w in sorted(eligible):
                        for level in levels:
                            found = finder.min_time(u, w, level)
                            if found is None or found.duration > cap:
                                continue
                            entry = (e + found.duration, k + level,
                                     (p, tau, k, bi, found.order, back))
                            push_label(new_labels.setdefault(w, []), entry)
        labels = new_labels

    return harvest_labels(x, labels)


def _levels(total: Fraction, grain: Fraction) -> List[Fraction]:
    levels = []
    k = grain
    while k <= total:
        levels.append(k)
        k += grain
    return levels


class _BlockTimes:
    """Binary search, per (entry, exit, level), for the leftmost achievable
    in-block duration the oracle certifies.  Durations come from the exact
    Pareto profile of the block's sub-metric, which contains the duration of
    every duration-minimal member walk, in particular the optimal one."""

    def __init__(self, metric: Metric, eligible: Dict[int, Fraction], span: Fraction,
                 mono: MonotoneOracle, alpha: Fraction):
        self.metric = metric
        self.eligible = eligible
        self.span = span
        self.mono = mono
        self.alpha = alpha
        self._grids: Dict[Tuple[int, int], List[Fraction]] = {}
        self._found: Dict[Tuple[int, int, Fraction], Optional[WalkResult]] = {}

    def _grid(self, u: int, w: int) -> List[Fraction]:
        key = (u, w)
        if key not in self._grids:
            profile = pareto_profiles(self.metric, self.eligible, u, w, self.span)
            self._grids[key] = [entry.duration for entry in profile.entries]
        return self._grids[key]

    def min_time(self, u: int, w: int, level: Fraction) -> Optional[WalkResult]:
        key = (u, w, level)
        if key in self._found:
            return self._found[key]
        grid = self._grid(u, w)
        lo, hi = 0, len(grid) - 1
        best: Optional[WalkResult] = None
        while lo <= hi:
            mid = (lo + hi) // 2
            res = self.mono.query(self.metric, self.eligible, u, w, grid[mid])
            if res.feasible and res.reward * self.alpha >= level:
                best = res
                hi = mid - 1
            else:
                lo = mid + 1
        self._found[key] = best
        return best


# ----- exact Pareto DP -------------------------------------------------------

def solve_exact_pareto(x: TwInstance, part: ModularPartition) -> DpResult:
    """Oracle-free exact solve: per-block Pareto profiles (every undominated
    duration/reward pair between each entry and exit) fed into the same
    label DP.  Exponential in the largest block, fine at desk scale."""
    require_modular(x, part)
    ensure_reachable_anchors(x)

    labels: Dict[object, List[tuple]] = {start_position(x): [(ZERO, ZERO, None)]}

    for bi, b in enumerate(part.blocks):
        eligible = _block_eligible(x, b)
        if not eligible:
            continue
        span = b.deadline - b.release
        profiles: Dict[Tuple[int, int], tuple] = {}
        for u in sorted(eligible):
            for w in sorted(eligible):
                profiles[(u, w)] = pareto_profiles(x.metric, eligible, u, w, span).entries
        new_labels = {p: list(ls) for p, ls in labels.items()}
        for p in sorted(labels, key=pos_key):
            for (tau, rew, back) in labels[p]:
                for u in sorted(eligible):
                    e = entry_time(x, p, tau, u, b.release)
                    if e is None or e > b.deadline:
                        continue
                    cap = b.deadline - e
                    for w in sorted(eligible):
                        for pe in profiles[(u, w)]:
                            if pe.duration > cap:
                                break
                            entry = (e + pe.duration, rew + pe.reward,
                                     (p, tau, rew, bi, pe.order, back))
                            push_label(new_labels.setdefault(w, []), entry)
        labels = new_labels

    return harvest_labels(x, labels)
