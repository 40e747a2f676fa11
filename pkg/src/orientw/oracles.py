"""Point-to-point sub-problem oracles used inside the composition DPs.

Two query shapes: plain orienteering (visit as much eligible reward as
possible within a travel budget, no windows) and deadline walks (every
credited visit must happen by that vertex's deadline).  Exact branch-and-
bound implementations are the default at desk scale; a greedy insertion
heuristic and a layered deadline heuristic are provided as scalable
stand-ins with no proven ratio.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Tuple

from .errors import PreconditionError
from .metric import Metric
from .rational import INF, ONE, ZERO, floor_log2, is_finite


@dataclass(frozen=True)
class OracleSpec:
    """Declared contract of an oracle: reward >= optimum / ratio.

    guaranteed=False marks an empirical heuristic: the ratio field is then
    just a label and nothing in the framework relies on it.
    """

    name: str
    ratio: Fraction
    guaranteed: bool = True

    def __post_init__(self):
        if self.ratio < 1:
            raise PreconditionError("oracle ratio must be at least 1")


@dataclass
class OrienteeringQuery:
    """Walk from u to v of length at most budget; reward is the sum over
    distinct eligible vertices visited (u and v count when eligible)."""

    metric: Metric
    eligible: Dict[int, Fraction]
    u: int
    v: int
    budget: Fraction


@dataclass(frozen=True)
class WalkResult:
    """Oracle answer: the visit order, its metric length, and the reward it
    re-evaluates to.  An infeasible query yields the empty order."""

    order: tuple
    reward: Fraction
    duration: Fraction

    @property
    def feasible(self) -> bool:
        return bool(self.order)


INFEASIBLE_RESULT = WalkResult((), ZERO, ZERO)


def result_duration(metric: Metric, order) -> Fraction:
    total = ZERO
    for i in range(1, len(order)):
        step = metric.d[order[i - 1]][order[i]]
        if not is_finite(step):
            return INF
        total += step
    return total


def result_reward(eligible: Dict[int, Fraction], order) -> Fraction:
    return sum((eligible[v] for v in set(order) if v in eligible), ZERO)


@dataclass(frozen=True)
class OrienteeringOracle:
    spec: OracleSpec
    fn: Callable[[OrienteeringQuery], WalkResult]


def best_orienteering_walk(oracle: OrienteeringOracle, q: OrienteeringQuery) -> WalkResult:
    """Contract wrapper around an orienteering oracle.

    Handles the degenerate cases uniformly (u = v with budget >= 0 collects
    u's own reward; an unreachable endpoint is an infeasible result), then
    checks the returned walk against the query: endpoints, budget, and that
    reward/duration re-evaluate exactly.
    """
    if q.budget < 0:
        return INFEASIBLE_RESULT
    if q.u == q.v:
        base = WalkResult((q.u,), result_reward(q.eligible, (q.u,)), ZERO)
    else:
        leg = q.metric.d[q.u][q.v]
        if not is_finite(leg) or leg > q.budget:
            return INFEASIBLE_RESULT
        base = WalkResult((q.u, q.v), result_reward(q.eligible, (q.u, q.v)), leg)
    res = oracle.fn(q)
    if not res.feasible:
        return base
    if res.order[0] != q.u or res.order[-1] != q.v:
        raise PreconditionError("oracle %s returned a walk with wrong endpoints" % oracle.spec.name)
    dur = result_duration(q.metric, res.order)
    if dur != res.duration or dur > q.budget:
        raise PreconditionError("oracle %s returned a walk that does not fit its budget"
                                % oracle.spec.name)
    if result_reward(q.eligible, res.order) != res.reward:
        raise PreconditionError("oracle %s misreported its reward" % oracle.spec.name)
    if res.reward < base.reward:
        return base
    return res


def exact_orienteering(q: OrienteeringQuery) -> WalkResult:
    """Exact branch and bound over ordered subsets of eligible vertices.

    Admissible pruning only (a vertex is dropped once it cannot be reached
    and still allow reaching v in budget), so the first optimum found in
    ascending-id order is the lexicographically smallest one.  Intended for
    roughly a dozen eligible vertices.
    """
    d = q.metric.d
    u, v, budget = q.u, q.v, q.budget
    if u == v:
        direct: Tuple[int, ...] = (u,)
        base_dur = ZERO
    else:
        if not is_finite(d[u][v]) or d[u][v] > budget:
            return INFEASIBLE_RESULT
        direct = (u, v)
        base_dur = d[u][v]
    cand = sorted(w for w in q.eligible if w != u and w != v)
    base_reward = result_reward(q.eligible, direct)
    del base_dur

    best = [base_reward, direct]

    def dfs(cur: int, time: Fraction, used: List[int], acc: Fraction):
        avail = []
        for w in cand:
            if w in used:
                continue
            leg = d[cur][w]
            if not is_finite(leg):
                continue
            t2 = time + leg
            tail = d[w][v]
            if is_finite(tail) and t2 + tail <= budget:
                avail.append((w, t2))
        bound = acc + sum((q.eligible[w] for (w, _t) in avail), ZERO)
        if bound <= best[0]:
            return
        for (w, t2) in avail:
            acc2 = acc + q.eligible[w]
            used.append(w)
            if acc2 > best[0]:
                best[0] = acc2
                best[1] = (u,) + tuple(used) + (v,)
            dfs(w, t2, used, acc2)
            used.pop()

    dfs(u, ZERO, [], base_reward)
    order = tuple(best[1])
    return WalkResult(order, best[0], result_duration(q.metric, order))


def greedy_orienteering(q: OrienteeringQuery) -> WalkResult:
    """Cheapest-insertion heuristic: repeatedly insert the vertex with the
    best reward-per-detour at its cheapest feasible position.

    No approximation guarantee; kept as the scalable stand-in.  All ties
    break deterministically (smaller detour, then smaller vertex id, then
    leftmost position).
    """
    d = q.metric.d
    u, v, budget = q.u, q.v, q.budget
    if not is_finite(d[u][v]) or d[u][v] > budget:
        return INFEASIBLE_RESULT
    # u == v is the closed-walk case: both ends pinned to u, d[u][u] = 0
    order = [u, v]
    duration = d[u][v]
    remaining = sorted(w for w in q.eligible if w != u and w != v)
    while True:
        best_pick = None  # (w, pos, detour)
        for w in remaining:
            w_best = None
            for pos in range(len(order) - 1):
                a, b = order[pos], order[pos + 1]
                da, db = d[a][w], d[w][b]
                if not (is_finite(da) and is_finite(db)):
                    continue
                detour = da + db - d[a][b]
                if duration + detour > budget:
                    continue
                if w_best is None or detour < w_best[2]:
                    w_best = (w, pos, detour)
            if w_best is None:
                continue
            if best_pick is None or _ratio_better(q.eligible[w_best[0]], w_best[2],
                                                  q.eligible[best_pick[0]], best_pick[2]):
                best_pick = w_best
        if best_pick is None:
            break
        w, pos, detour = best_pick
        order.insert(pos + 1, w)
        duration += detour
        remaining.remove(w)
    if u == v and len(order) == 2:
        order = [u]  # nothing inserted, stay put
    return WalkResult(tuple(order), result_reward(q.eligible, order), duration)


def _ratio_better(r1: Fraction, d1: Fraction, r2: Fraction, d2: Fraction) -> bool:
    """Is reward r1 per detour d1 strictly better than r2 per d2?"""
    if d1 == 0 and d2 == 0:
        return r1 > r2
    if d1 == 0:
        return True
    if d2 == 0:
        return False
    return r1 * d2 > r2 * d1


EXACT_ORACLE = OrienteeringOracle(OracleSpec("exact", ONE), exact_orienteering)
GREEDY_ORACLE = OrienteeringOracle(OracleSpec("greedy", ONE, guaranteed=False), greedy_orienteering)

ORIENTEERING_ORACLES = {"exact": EXACT_ORACLE, "greedy": GREEDY_ORACLE}


class MonotoneOracle:
    """Per-solve cache that makes an oracle's reward monotone in the budget.

    Each query key remembers every probed budget; the answer for budget b is
    the best result seen at any probed budget <= b.  Confined to a single
    solve context so caching never leaks across instances.
    """

    def __init__(self, oracle: OrienteeringOracle):
        self.oracle = oracle
        self._probes: Dict[tuple, List[Tuple[Fraction, WalkResult]]] = {}

    @property
    def spec(self) -> OracleSpec:
        return self.oracle.spec

    def query(self, metric: Metric, eligible: Dict[int, Fraction], u: int, v: int,
              budget: Fraction) -> WalkResult:
        key = (id(metric), u, v, tuple(sorted(eligible.items())))
        probes = self._probes.setdefault(key, [])
        for (b, res) in probes:
            if b == budget:
                return res
        raw = best_orienteering_walk(self.oracle,
                                     OrienteeringQuery(metric, eligible, u, v, budget))
        best = raw
        for (b, res) in probes:
            if b <= budget and _result_better(res, best):
                best = res
        probes.append((budget, best))
        probes.sort(key=lambda br: br[0])
        # earlier probes never worsen later answers: refresh cached entries
        for i, (b, res) in enumerate(probes):
            if b >= budget and _result_better(best, res):
                probes[i] = (b, best)
        return best


def _result_better(a: WalkResult, b: WalkResult) -> bool:
    if a.reward != b.reward:
        return a.reward > b.reward
    if a.duration != b.duration:
        return a.duration < b.duration
    return a.order < b.order


# ----- deadline walks --------------------------------------------------------

@dataclass
class DeadlineQuery:
    """Walk starting at u at time t0; a visit to an eligible vertex counts
    iff it happens by that vertex's deadline.  end, when given, anchors the
    walk's final vertex; horizon bounds the walk's end time either way."""

    metric: Metric
    eligible: Dict[int, Tuple[Fraction, Fraction]]  # v -> (reward, deadline)
    u: int
    t0: Fraction
    end: Optional[int]
    horizon: Fraction


@dataclass(frozen=True)
class DeadlineOracle:
    spec: OracleSpec
    fn: Callable[[DeadlineQuery], WalkResult]


def best_deadline_walk(oracle: DeadlineOracle, q: DeadlineQuery) -> WalkResult:
    """Contract wrapper for deadline oracles; mirrors best_orienteering_walk.

    Durations in the result exclude t0: the walk occupies [t0, t0 + duration].
    """
    if q.horizon < q.t0:
        return INFEASIBLE_RESULT
    live = {v: rd for v, rd in q.eligible.items() if rd[1] >= q.t0}
    if q.end is not None and q.end != q.u:
        leg = q.metric.d[q.u][q.end]
        if not is_finite(leg) or q.t0 + leg > q.horizon:
            return INFEASIBLE_RESULT
    trimmed = DeadlineQuery(q.metric, live, q.u, q.t0, q.end, q.horizon)
    res = oracle.fn(trimmed)
    if not res.feasible:
        return _deadline_base(trimmed)
    if res.order[0] != q.u or (q.end is not None and res.order[-1] != q.end):
        raise PreconditionError("deadline oracle %s returned wrong endpoints" % oracle.spec.name)
    if result_duration(q.metric, res.order) != res.duration or q.t0 + res.duration > q.horizon:
        raise PreconditionError("deadline oracle %s overran its horizon" % oracle.spec.name)
    if _deadline_reward(q.metric, live, res.order, q.t0) != res.reward:
        raise PreconditionError("deadline oracle %s misreported its reward" % oracle.spec.name)
    base = _deadline_base(trimmed)
    return res if not _result_better(base, res) else base


def _deadline_base(q: DeadlineQuery) -> WalkResult:
    if q.end is None or q.end == q.u:
        order: Tuple[int, ...] = (q.u,)
    else:
        order = (q.u, q.end)
    dur = result_duration(q.metric, order)
    if not is_finite(dur) or q.t0 + dur > q.horizon:
        return INFEASIBLE_RESULT
    return WalkResult(order, _deadline_reward(q.metric, q.eligible, order, q.t0), dur)


def _deadline_reward(metric: Metric, eligible, order, t0: Fraction) -> Fraction:
    """Re-evaluate a deadline walk: credit each eligible vertex at its first
    visit time along the order."""
    reward = ZERO
    seen = set()
    time = t0
    for i, v in enumerate(order):
        if i:
            time += metric.d[order[i - 1]][v]
        if v in eligible and v not in seen and time <= eligible[v][1]:
            seen.add(v)
            reward += eligible[v][0]
    return reward


def exact_deadline(q: DeadlineQuery) -> WalkResult:
    """Exact branch and bound for deadline walks; same search shape as
    exact_orienteering with the per-vertex deadline added to the pruning.

    The end anchor's own credit depends on the final arrival time, so every
    candidate order is rescored exactly instead of trusting the running sum.
    """
    d = q.metric.d
    u, t0, horizon = q.u, q.t0, q.horizon

    def tail_ok(w: int, tw: Fraction) -> bool:
        if q.end is None:
            return tw <= horizon
        leg = d[w][q.end]
        return is_finite(leg) and tw + leg <= horizon

    if not tail_ok(u, t0):
        return INFEASIBLE_RESULT

    base = _deadline_base(q)
    # the end anchor may pay off as an early interior visit too (hit its
    # deadline, wander, come back), so it stays in the candidate pool
    cand = sorted(w for w in q.eligible if w != u)
    tail = () if q.end is None else (q.end,)
    # end credit is bounded by its reward; counting it in full keeps the
    # prune bound admissible even when the actual arrival misses the deadline
    end_bonus = ZERO
    if q.end is not None and q.end != u and q.end in q.eligible:
        end_bonus = q.eligible[q.end][0]
    u_credit = ZERO
    if u in q.eligible and t0 <= q.eligible[u][1]:
        u_credit = q.eligible[u][0]

    best = [base.reward, base.order]

    def consider(used: List[int]):
        order = (u,) + tuple(used) + tail
        rew = _deadline_reward(q.metric, q.eligible, order, t0)
        if rew > best[0]:
            best[0] = rew
            best[1] = order

    def dfs(cur: int, time: Fraction, used: List[int], acc: Fraction):
        avail = []
        for w in cand:
            if w in used:
                continue
            leg = d[cur][w]
            if not is_finite(leg):
                continue
            t2 = time + leg
            if t2 <= q.eligible[w][1] and tail_ok(w, t2):
                avail.append((w, t2))
        bound = acc + sum((q.eligible[w][0] for (w, _t) in avail), ZERO)
        if q.end not in used:
            bound += end_bonus
        if bound <= best[0]:
            return
        for (w, t2) in avail:
            acc2 = acc + q.eligible[w][0]
            used.append(w)
            consider(used)
            dfs(w, t2, used, acc2)
            used.pop()

    dfs(u, t0, [], u_credit)
    order = tuple(best[1])
    return WalkResult(order, _deadline_reward(q.metric, q.eligible, order, t0),
                      result_duration(q.metric, order))


def layered_deadline_fn(oracle: OrienteeringOracle):
    """Deadline heuristic: split eligible vertices into geometric deadline
    classes [2**j, 2**(j+1)), answer one orienteering query per class with
    budget 2**j - t0 (clamped to the horizon), and keep the best class."""

    def fn(q: DeadlineQuery) -> WalkResult:
        classes: Dict[Optional[int], Dict[int, Fraction]] = {}
        for v, (rew, dl) in q.eligible.items():
            j = floor_log2(dl) if dl > 0 else None
            classes.setdefault(j, {})[v] = rew
        best = _deadline_base(q)
        if not best.feasible:
            return best
        for j in sorted(classes, key=lambda k: (k is None, k)):
            members = classes[j]
            cutoff = min(Fraction(2) ** j, q.horizon) if j is not None else q.t0
            budget = cutoff - q.t0
            if budget < 0:
                continue
            ends = [q.end] if q.end is not None else sorted(set(members) | {q.u})
            for end in ends:
                res = best_orienteering_walk(
                    oracle, OrienteeringQuery(q.metric, members, q.u, end, budget))
                if not res.feasible:
                    continue
                scored = WalkResult(res.order,
                                    _deadline_reward(q.metric, q.eligible, res.order, q.t0),
                                    res.duration)
                if _result_better(scored, best):
                    best = scored
        return best

    return fn


EXACT_DEADLINE = DeadlineOracle(OracleSpec("exact", ONE), exact_deadline)


def layered_deadline_oracle(oracle: OrienteeringOracle) -> DeadlineOracle:
    return DeadlineOracle(OracleSpec("layered", ONE, guaranteed=False),
                          layered_deadline_fn(oracle))


def deadline_oracle_by_name(name: str, oracle: OrienteeringOracle) -> DeadlineOracle:
    if name == "exact":
        return EXACT_DEADLINE
    if name == "layered":
        return layered_deadline_oracle(oracle)
    raise PreconditionError("unknown deadline oracle %r" % name)


class MonotoneDeadlineOracle:
    """Horizon-monotone cache around a deadline oracle (per solve context)."""

    def __init__(self, oracle: DeadlineOracle):
        self.oracle = oracle
        self._probes: Dict[tuple, List[Tuple[Fraction, WalkResult]]] = {}

    @property
    def spec(self) -> OracleSpec:
        return self.oracle.spec

    def query(self, metric: Metric, eligible, u: int, t0: Fraction, end: Optional[int],
              horizon: Fraction) -> WalkResult:
        key = (id(metric), u, t0, end, tuple(sorted(eligible.items())))
        probes = self._probes.setdefault(key, [])
        for (h, res) in probes:
            if h == horizon:
                return res
        raw = best_deadline_walk(self.oracle,
                                 DeadlineQuery(metric, eligible, u, t0, end, horizon))
        best = raw
        for (h, res) in probes:
            if h <= horizon and _result_better(res, best):
                best = res
        probes.append((horizon, best))
        probes.sort(key=lambda hr: hr[0])
        for i, (h, res) in enumerate(probes):
            if h >= horizon and _result_better(best, res):
                probes[i] = (h, best)
        return best


# ----- Pareto profiles -------------------------------------------------------

@dataclass(frozen=True)
class ParetoEntry:
    duration: Fraction
    reward: Fraction
    order: tuple


@dataclass(frozen=True)
class ParetoProfile:
    """All non-dominated (duration, reward) pairs for u -> v walks within a
    horizon, strictly increasing in both coordinates, each with a witness."""

    entries: tuple


def pareto_profiles(metric: Metric, eligible: Dict[int, Fraction], u: int, v: int,
                    horizon: Fraction) -> ParetoProfile:
    """Exact profile by subset DP over eligible vertices (desk scale).

    Empty profile when v is unreachable from u within the horizon.
    """
    d = metric.d
    cand = sorted(w for w in eligible if w != u and w != v)
    m = len(cand)
    if m > 16:
        raise PreconditionError("pareto_profiles supports at most 16 eligible vertices")
    base_reward = result_reward(eligible, (u, v) if u != v else (u,))

    # dp[mask][i]: min duration of a walk u -> cand[i] visiting exactly mask
    dp: List[Dict[int, Fraction]] = [dict() for _ in range(1 << m)]
    parent: List[Dict[int, Optional[int]]] = [dict() for _ in range(1 << m)]
    for i, w in enumerate(cand):
        leg = d[u][w]
        if is_finite(leg):
            dp[1 << i][i] = leg
            parent[1 << i][i] = None
    for mask in range(1, 1 << m):
        for i, ti in sorted(dp[mask].items()):
            for j, w in enumerate(cand):
                bit = 1 << j
                if mask & bit:
                    continue
                leg = d[cand[i]][w]
                if not is_finite(leg):
                    continue
                t2 = ti + leg
                nm = mask | bit
                if j not in dp[nm] or t2 < dp[nm][j]:
                    dp[nm][j] = t2
                    parent[nm][j] = i

    raw: List[Tuple[Fraction, Fraction, tuple]] = []
    direct = d[u][v] if u != v else ZERO
    if is_finite(direct) and direct <= horizon:
        raw.append((direct, base_reward, (u, v) if u != v else (u,)))
    for mask in range(1, 1 << m):
        rew = base_reward + sum((eligible[cand[i]] for i in range(m) if mask & (1 << i)), ZERO)
        for i, ti in dp[mask].items():
            tail = d[cand[i]][v]
            if not is_finite(tail):
                continue
            total = ti + tail
            if total > horizon:
                continue
            seq = []
            mm, ii = mask, i
            while ii is not None:
                seq.append(cand[ii])
                pi = parent[mm][ii]
                mm &= ~(1 << ii)
                ii = pi
            order = (u,) + tuple(reversed(seq)) + (v,)
            raw.append((total, rew, order))

    raw.sort(key=lambda e: (e[0], -e[1], e[2]))
    entries = []
    best_rew = None
    for (dur, rew, order) in raw:
        if best_rew is not None and rew <= best_rew:
            continue
        entries.append(ParetoEntry(dur, rew, order))
        best_rew = rew
    return ParetoProfile(tuple(entries))
