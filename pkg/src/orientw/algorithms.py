"""Composed approximation algorithms.

Each solver follows the same recipe: split the instance into restricted
versions whose optima together cover the original optimum, solve every
version through a structure that a modular or group DP handles, evaluate
each version's claims back on the original instance, and keep the best.
The reported bound is the sum of the per-version ratios, which by the
pigeonhole argument is a proven divisor: reward >= optimum / bound.

All solvers need waiting allowed; the no-wait policy only changes walk
evaluation, not the solvers.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .decompose import dyadic_family, five_split, three_split_ceil, three_split_floor
from .errors import PreconditionError
from .instance import (ANCHORED, FREE, START_ONLY, WAIT, TimeWindow, TwInstance,
                       WalkSolution, drop_vertices, evaluate_walk, restrict,
                       time_reversed, window_stats)
from .metric import Metric
from .modular import (assemble_walk, blocks_from_identical_windows,
                      ensure_reachable_anchors, entry_time, harvest_labels, pos_key,
                      push_label, solve_reward_indexed, start_position, verify_modular)
from .oracles import (EXACT_DEADLINE, EXACT_ORACLE, DeadlineOracle,
                      MonotoneDeadlineOracle, OrienteeringOracle)
from .rational import HALF, ONE, ZERO, floor_log2, is_finite, is_integral


@dataclass
class SolveReport:
    """What a solver hands back.

    walk is re-evaluated on the instance the caller passed in, so its reward
    is certified independently of any internal bookkeeping.  bound is the
    proven worst-case divisor for this run: walk.reward >= optimum / bound
    whenever the supplied oracles honor their declared ratios.
    """

    algorithm: str
    walk: WalkSolution
    version_rewards: tuple  # ((label, reward on the original instance), ...)
    beta: int  # number of restricted versions actually present
    alpha: Fraction  # declared ratio of the point-to-point oracle
    bound: Fraction
    elapsed: float = 0.0


def _require_wait(x: TwInstance):
    if x.wait_policy != WAIT:
        raise PreconditionError("solvers require the wait policy; "
                                "no-wait only changes walk evaluation")


def _claims_of(walk: WalkSolution) -> tuple:
    return tuple(v for (v, _t, c) in walk.schedule if c)


def _finish(x: TwInstance, claims) -> WalkSolution:
    segments = [(0, tuple(claims))] if claims else []
    return assemble_walk(x, segments)


def _length_split(x: TwInstance) -> Tuple[List[int], List[int]]:
    """Positive-reward vertices split by window length: fixed-instant ones
    go to the exact chain DP, the rest to the window decompositions."""
    zero: List[int] = []
    pos: List[int] = []
    for v in range(x.n):
        if x.rewards[v] > 0:
            (zero if x.windows[v].length == 0 else pos).append(v)
    return zero, pos


def _report(name: str, x: TwInstance, versions, alpha: Fraction) -> SolveReport:
    """Evaluate every version's claims on x; best one wins, bound sums up."""
    best: Optional[WalkSolution] = None
    rewards = []
    bound = ZERO
    for (label, claims, ratio) in versions:
        sol = _finish(x, claims)
        rewards.append((label, sol.reward))
        bound += ratio
        if best is None or sol.reward > best.reward:
            best = sol
    if best is None:
        best = _finish(x, ())
        bound = ONE
    return SolveReport(name, best, tuple(rewards), max(len(versions), 1), alpha, bound)


# ----- fixed-instant vertices ------------------------------------------------

def zero_window_dp(x: TwInstance) -> SolveReport:
    """Exact solver for instances whose positive-reward vertices all have
    zero-length windows: each must be hit at one fixed instant, so feasible
    claim sets are chains in a DAG ordered by time, and a longest-chain pass
    over vertices sorted by (instant, id) is exact."""
    _require_wait(x)
    ensure_reachable_anchors(x)
    nodes: List[Tuple[Fraction, int]] = []
    for v in range(x.n):
        if x.rewards[v] <= 0:
            continue
        w = x.windows[v]
        if w.length != 0:
            raise PreconditionError(
                "vertex %d has a positive-length window; this solver needs "
                "fixed visit instants" % v)
        nodes.append((w.release, v))
    nodes.sort()
    d = x.metric.d

    def entry_ok(i: int) -> bool:
        tv, v = nodes[i]
        if x.mode == FREE:
            return True
        leg = d[x.s][v]
        return is_finite(leg) and leg <= tv

    def exit_ok(i: int) -> bool:
        tv, v = nodes[i]
        if x.mode == ANCHORED:
            leg = d[v][x.t]
            return is_finite(leg) and tv + leg <= x.budget
        return True

    m = len(nodes)
    gain = [ZERO] * m
    back: List[Optional[int]] = [None] * m
    alive = [False] * m
    for i in range(m):
        ti, vi = nodes[i]
        if entry_ok(i):
            alive[i] = True
            gain[i] = x.rewards[vi]
        for j in range(i):
            if not alive[j]:
                continue
            tj, vj = nodes[j]
            leg = d[vj][vi]
            if not is_finite(leg) or tj + leg > ti:
                continue
            cand = gain[j] + x.rewards[vi]
            if not alive[i] or cand > gain[i]:
                alive[i] = True
                gain[i] = cand
                back[i] = j

    end = None
    for i in range(m):
        if alive[i] and exit_ok(i) and (end is None or gain[i] > gain[end]):
            end = i
    claims: List[int] = []
    while end is not None:
        claims.append(nodes[end][1])
        end = back[end]
    claims.reverse()
    walk = _finish(x, claims)
    return SolveReport("zero-window", walk, (("Z", walk.reward),), 1, ONE, ONE)


# ----- integral window endpoints ---------------------------------------------

def solve_integer_endpoints(x: TwInstance,
                            oracle: OrienteeringOracle = EXACT_ORACLE) -> SolveReport:
    """Anchored solver for integral window endpoints.

    When the windows of the positive-reward vertices already form a valid
    modular partition (identical windows per block, e.g. all lengths <= 1)
    the instance is solved directly.  Otherwise every window is cut into
    aligned power-of-two pieces, pieces of equal size and alignment class
    form one restricted version each, and every version is modular.
    """
    _require_wait(x)
    if x.mode != ANCHORED:
        raise PreconditionError("integer-endpoints solver needs both anchors")
    for v in x.positive_vertices():
        w = x.windows[v]
        if not (is_integral(w.release) and is_integral(w.deadline)):
            raise PreconditionError(
                "vertex %d window [%s, %s] has fractional endpoints" % (v, w.release, w.deadline))
    ensure_reachable_anchors(x)
    zero, pos = _length_split(x)
    versions = []
    if zero:
        rz = zero_window_dp(restrict(x, {v: None for v in pos}))
        versions.append(("Z", _claims_of(rz.walk), ONE))
    if pos:
        xp = restrict(x, {v: None for v in zero})
        direct = blocks_from_identical_windows(xp)
        if not verify_modular(xp, direct):
            res = solve_reward_indexed(xp, direct, oracle)
            versions.append(("direct", _claims_of(res.walk), oracle.spec.ratio))
        else:
            fam = dyadic_family(xp)
            for (label, ver) in fam.versions:
                part = blocks_from_identical_windows(ver)
                res = solve_reward_indexed(ver, part, oracle)
                versions.append((label, _claims_of(res.walk), oracle.spec.ratio))
    return _report("integer-endpoints", x, versions, oracle.spec.ratio)


# ----- release groups ---------------------------------------------------------

def _release_groups(x: TwInstance):
    """Positive-reward vertices grouped by a shared release; each group's
    windows must end by the next group's release."""
    grouped: Dict[Fraction, List[int]] = {}
    for v in range(x.n):
        if x.rewards[v] > 0:
            grouped.setdefault(x.windows[v].release, []).append(v)
    out = []
    for rel in sorted(grouped):
        members = sorted(grouped[rel])
        dmax = max(x.windows[v].deadline for v in members)
        out.append((rel, members, dmax))
    for i in range(len(out) - 1):
        if out[i][2] > out[i + 1][0]:
            raise PreconditionError(
                "windows released at %s overrun the next release" % out[i][0])
    return out


def _exit_candidates(x: TwInstance, eligible, u: int, e: Fraction):
    """(vertex, time) endpoints of every deadline-respecting claim sequence
    from u at time e.  The optimal pass through the group leaves from its
    last claim, so its exit state is in this set."""
    d = x.metric.d
    out = {(u, e)}
    members = sorted(eligible)
    if len(members) > 12:
        raise PreconditionError("release group too large for exact enumeration")

    def dfs(cur: int, t: Fraction, visited: set):
        for w in members:
            if w in visited:
                continue
            leg = d[cur][w]
            if not is_finite(leg):
                continue
            t2 = t + leg
            if t2 > eligible[w][1]:
                continue
            out.add((w, t2))
            visited.add(w)
            dfs(w, t2, visited)
            visited.discard(w)

    dfs(u, e, {u})
    return sorted(out)


def _release_group_solve(x: TwInstance, deadline_oracle: DeadlineOracle):
    """Label DP across release groups; the deadline oracle fills in the best
    walk between an entry vertex and each candidate exit state.  Exact when
    the oracle is exact."""
    ensure_reachable_anchors(x)
    groups = _release_groups(x)
    mono = MonotoneDeadlineOracle(deadline_oracle)
    labels: Dict[object, list] = {start_position(x): [(ZERO, ZERO, None)]}
    for gi, (rel, members, dmax) in enumerate(groups):
        eligible = {v: (x.rewards[v], x.windows[v].deadline) for v in members}
        new_labels = {p: list(ls) for p, ls in labels.items()}
        for p in sorted(labels, key=pos_key):
            for (tau, rew, backp) in labels[p]:
                for u in members:
                    e = entry_time(x, p, tau, u, rel)
                    if e is None or e > dmax:
                        continue
                    for (w, h) in _exit_candidates(x, eligible, u, e):
                        res = mono.query(x.metric, eligible, u, e, w, h)
                        if not res.feasible or res.reward <= 0:
                            continue
                        entry = (e + res.duration, rew + res.reward,
                                 (p, tau, rew, gi, res.order, backp))
                        push_label(new_labels.setdefault(w, []), entry)
        labels = new_labels
    return harvest_labels(x, labels)


# ----- window lengths within a factor two ------------------------------------

def solve_l_le_2(x: TwInstance, oracle: OrienteeringOracle = EXACT_ORACLE,
                 deadline_oracle: DeadlineOracle = EXACT_DEADLINE) -> SolveReport:
    """Anchored solver when positive window lengths agree within a factor 2.

    After scaling the shortest window to length 1, each window is cut at the
    first and last interior integers.  The middle version is modular (unit
    integer cells); the tail version groups by a shared release and the head
    version, run backwards in time, does too.
    """
    _require_wait(x)
    if x.mode != ANCHORED:
        raise PreconditionError("this solver needs both anchors")
    ensure_reachable_anchors(x)
    zero, pos = _length_split(x)
    versions = []
    if zero:
        rz = zero_window_dp(restrict(x, {v: None for v in pos}))
        versions.append(("Z", _claims_of(rz.walk), ONE))
    if pos:
        xp = restrict(x, {v: None for v in zero})
        fam = three_split_floor(xp)
        for (label, ver) in fam.versions:
            if label == "B2":
                part = blocks_from_identical_windows(ver)
                res = solve_reward_indexed(ver, part, oracle)
                versions.append((label, _claims_of(res.walk), oracle.spec.ratio))
            elif label == "B3":
                res = _release_group_solve(ver, deadline_oracle)
                versions.append((label, _claims_of(res.walk), deadline_oracle.spec.ratio))
            else:
                # B1 windows share deadlines per group; reversed in time they
                # share releases, which the same composition handles
                rev = time_reversed(ver)
                res = _release_group_solve(rev, deadline_oracle)
                claims = tuple(reversed(_claims_of(res.walk)))
                versions.append((label, claims, deadline_oracle.spec.ratio))
    return _report("l2", x, versions, oracle.spec.ratio)


# ----- general window lengths -------------------------------------------------

def solve_general(x: TwInstance, oracle: OrienteeringOracle = EXACT_ORACLE,
                  deadline_oracle: DeadlineOracle = EXACT_DEADLINE) -> SolveReport:
    """Anchored solver without any length restriction: cut each window at
    the outermost interior integers (after scaling), hand the head and tail
    versions to the factor-2 solver and the integral middle to the
    integer-endpoints solver."""
    _require_wait(x)
    if x.mode != ANCHORED:
        raise PreconditionError("this solver needs both anchors")
    ensure_reachable_anchors(x)
    zero, pos = _length_split(x)
    versions = []
    if zero:
        rz = zero_window_dp(restrict(x, {v: None for v in pos}))
        versions.append(("Z", _claims_of(rz.walk), ONE))
    if pos:
        xp = restrict(x, {v: None for v in zero})
        fam = three_split_ceil(xp)
        for (label, ver) in fam.versions:
            if label == "B2":
                sub = solve_integer_endpoints(ver, oracle)
            else:
                sub = solve_l_le_2(ver, oracle, deadline_oracle)
            versions.append((label, _claims_of(sub.walk), sub.bound))
    return _report("general", x, versions, oracle.spec.ratio)


# ----- free endpoints ----------------------------------------------------------

def _shift_version(base: TwInstance, ver: TwInstance, head: bool) -> TwInstance:
    """Move a head (or tail) version's windows onto the half-grid.

    A free walk can be delayed (or started earlier) by exactly one half
    unit, which maps any claim inside a head piece [r, h] into [h, h + 1/2]
    and any claim inside a tail piece [g, d] into [g - 1/2, g].  Both target
    windows stay inside the vertex's original window because, at this scale,
    every window is at least one unit long."""
    assignment: Dict[int, Optional[TimeWindow]] = {}
    for v in range(ver.n):
        if ver.rewards[v] > 0:
            w = ver.windows[v]
            if head:
                assignment[v] = TimeWindow(w.deadline, w.deadline + HALF)
            else:
                assignment[v] = TimeWindow(w.release - HALF, w.release)
        else:
            assignment[v] = None
    return restrict(base, assignment)


def solve_free_l_le_2(x: TwInstance,
                      oracle: OrienteeringOracle = EXACT_ORACLE) -> SolveReport:
    """Free-endpoint solver when positive window lengths agree within a
    factor 2: cut at the interior half-grid, keep the middle versions as-is
    (half-unit cells are modular), and shift the head and tail versions onto
    adjacent half-cells, which a free walk reaches by sliding half a unit."""
    _require_wait(x)
    if x.mode != FREE:
        raise PreconditionError("free-endpoint solver needs unanchored ends")
    zero, pos = _length_split(x)
    versions = []
    if zero:
        rz = zero_window_dp(restrict(x, {v: None for v in pos}))
        versions.append(("Z", _claims_of(rz.walk), ONE))
    if pos:
        xp = restrict(x, {v: None for v in zero})
        fam = five_split(xp)
        for (label, ver) in fam.versions:
            if label == "B1":
                mver = _shift_version(fam.base, ver, head=True)
            elif label == "B5":
                mver = _shift_version(fam.base, ver, head=False)
            else:
                mver = ver
            part = blocks_from_identical_windows(mver)
            res = solve_reward_indexed(mver, part, oracle)
            versions.append((label, _claims_of(res.walk), oracle.spec.ratio))
    return _report("free-l2", x, versions, oracle.spec.ratio)


def solve_free_general(x: TwInstance,
                       oracle: OrienteeringOracle = EXACT_ORACLE) -> SolveReport:
    """Free-endpoint solver without length restrictions: band the vertices
    by the power of two their window length falls in (relative to the
    shortest), then run the factor-2 free solver per band."""
    _require_wait(x)
    if x.mode != FREE:
        raise PreconditionError("free-endpoint solver needs unanchored ends")
    zero, pos = _length_split(x)
    versions = []
    if zero:
        rz = zero_window_dp(restrict(x, {v: None for v in pos}))
        versions.append(("Z", _claims_of(rz.walk), ONE))
    if pos:
        xp = restrict(x, {v: None for v in zero})
        stats = window_stats(xp)
        bands: Dict[int, List[int]] = {}
        for v in pos:
            j = floor_log2(xp.windows[v].length / stats.l_min)
            bands.setdefault(j, []).append(v)
        for j in sorted(bands):
            bver = drop_vertices(xp, set(bands[j]))
            sub = solve_free_l_le_2(bver, oracle)
            versions.append(("band%d" % j, _claims_of(sub.walk), sub.bound))
    return _report("free-general", x, versions, oracle.spec.ratio)


# ----- deadline-only reduction -------------------------------------------------

def reduce_deadline_to_tw(x: TwInstance) -> TwInstance:
    """Rewrite a deadline-only instance (all positive-reward releases zero)
    as a time-window instance whose window lengths agree within a factor 2.

    A new start vertex sits a runway of length d_max before the old one, so
    every visit lands after time d_max; with all deadlines shifted by d_max
    the window lengths fall in [d_max, 2 d_max].  Optimal rewards coincide:
    walks map both ways by shifting time by d_max.
    """
    if x.s is None:
        raise PreconditionError("deadline reduction needs a start anchor")
    for v in range(x.n):
        if x.rewards[v] > 0 and x.windows[v].release != 0:
            raise PreconditionError(
                "vertex %d has a nonzero release; not a deadline-only instance" % v)
    dmax = ZERO
    for v in range(x.n):
        if x.rewards[v] > 0 and x.windows[v].deadline > dmax:
            dmax = x.windows[v].deadline
    n2 = x.n + 1
    rows = []
    for i in range(x.n):
        out = x.metric.d[i][x.s]
        rows.append(tuple(x.metric.d[i]) + ((out + dmax) if is_finite(out) else out,))
    runway = []
    for j in range(x.n):
        leg = x.metric.d[x.s][j]
        runway.append((dmax + leg) if is_finite(leg) else leg)
    rows.append(tuple(runway) + (ZERO,))
    metric = Metric(x.metric.directed, n2, tuple(rows))
    windows = [TimeWindow(w.release, w.deadline + dmax) for w in x.windows]
    windows.append(TimeWindow(ZERO, x.budget + dmax))
    rewards = tuple(x.rewards) + (ZERO,)
    return TwInstance(metric, tuple(windows), rewards, x.n, x.t, x.budget + dmax,
                      x.wait_policy)


# ----- dispatch -----------------------------------------------------------------

def solve_auto(x: TwInstance, oracle: OrienteeringOracle = EXACT_ORACLE,
               deadline_oracle: DeadlineOracle = EXACT_DEADLINE) -> SolveReport:
    """Run every solver whose precondition the instance meets and keep the
    best report.  Start-anchored instances without an end anchor reduce to
    one anchored solve per candidate end vertex."""
    _require_wait(x)
    if x.mode == START_ONLY:
        return _auto_start_only(x, oracle, deadline_oracle)
    zero, pos = _length_split(x)
    reports: List[SolveReport] = []
    if not pos:
        reports.append(zero_window_dp(x))
    else:
        stats = window_stats(x)
        if x.mode == ANCHORED:
            if all(is_integral(x.windows[v].release) and is_integral(x.windows[v].deadline)
                   for v in pos):
                reports.append(solve_integer_endpoints(x, oracle))
            if stats.l_ratio is not None and stats.l_ratio <= 2:
                reports.append(solve_l_le_2(x, oracle, deadline_oracle))
            reports.append(solve_general(x, oracle, deadline_oracle))
        else:
            if stats.l_ratio is not None and stats.l_ratio <= 2:
                reports.append(solve_free_l_le_2(x, oracle))
            reports.append(solve_free_general(x, oracle))
    best = reports[0]
    for rep in reports[1:]:
        if rep.walk.reward > best.walk.reward:
            best = rep
    return best


def _auto_start_only(x: TwInstance, oracle: OrienteeringOracle,
                     deadline_oracle: DeadlineOracle) -> SolveReport:
    """A walk that may end anywhere ends somewhere: solve the anchored
    variant for every reachable end vertex and keep the best."""
    best: Optional[SolveReport] = None
    for t2 in range(x.n):
        leg = x.metric.d[x.s][t2]
        if not is_finite(leg) or leg > x.budget:
            continue
        x2 = TwInstance(x.metric, x.windows, x.rewards, x.s, t2, x.budget, x.wait_policy)
        sub = solve_auto(x2, oracle, deadline_oracle)
        order = [(v, c) for (v, _t, c) in sub.walk.schedule]
        sol = evaluate_walk(x, order)
        if not sol.feasible:
            continue
        rep = SolveReport(sub.algorithm, sol, sub.version_rewards, sub.beta,
                          sub.alpha, sub.bound)
        if best is None or rep.walk.reward > best.walk.reward:
            best = rep
    if best is None:
        raise PreconditionError("no end vertex is reachable from the start anchor")
    return best


def run_algorithm(name: str, x: TwInstance, oracle: OrienteeringOracle = EXACT_ORACLE,
                  deadline_oracle: DeadlineOracle = EXACT_DEADLINE) -> SolveReport:
    if name not in ALGORITHMS:
        raise PreconditionError("unknown algorithm %r" % name)
    return ALGORITHMS[name](x, oracle, deadline_oracle)


def _run_int(x, oracle, dl):
    return solve_integer_endpoints(x, oracle)


def _run_l2(x, oracle, dl):
    return solve_l_le_2(x, oracle, dl)


def _run_free_l2(x, oracle, dl):
    return solve_free_l_le_2(x, oracle)


def _run_free_general(x, oracle, dl):
    return solve_free_general(x, oracle)


def _run_zero(x, oracle, dl):
    return zero_window_dp(x)


ALGORITHMS = {
    "integer-endpoints": _run_int,
    "l2": _run_l2,
    "general": solve_general,
    "free-l2": _run_free_l2,
    "free-general": _run_free_general,
    "zero-window": _run_zero,
    "auto": solve_auto,
}
