"""Instance model for orienteering with per-vertex time windows.

A TwInstance bundles an exact metric, one window and one reward per vertex,
optional start/end anchors, a time budget, and the waiting policy.  Walks are
scored by evaluate_walk; brute_force_opt is the exact desk-scale oracle the
rest of the package is verified against.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence, Tuple

from .errors import ContainmentError, InfeasibleInstanceError, PreconditionError
from .metric import Metric
from .rational import INF, ZERO, as_fraction, is_finite

WAIT = "wait"
NO_WAIT = "no-wait"

# anchoring modes
ANCHORED = "anchored"      # s and t fixed; walk runs s at time 0 to t by T
START_ONLY = "start-only"  # s fixed, end free; everything done by time T
FREE = "free"              # both ends free; windows alone bound the walk


@dataclass(frozen=True)
class TimeWindow:
    release: Fraction
    deadline: Fraction

    def __post_init__(self):
        object.__setattr__(self, "release", as_fraction(self.release))
        object.__setattr__(self, "deadline", as_fraction(self.deadline))
        if self.release > self.deadline:
            raise PreconditionError(
                "window release %s exceeds deadline %s" % (self.release, self.deadline))

    @property
    def length(self) -> Fraction:
        return self.deadline - self.release

    def contains(self, other: "TimeWindow") -> bool:
        return self.release <= other.release and other.deadline <= self.deadline


@dataclass(frozen=True)
class TwInstance:
    """One problem instance.

    windows/rewards are indexed by vertex id.  s and t control the anchoring
    mode: both set (anchored), s only (start-only), neither (free endpoints).
    budget is the time horizon; every window deadline must stay within it.
    """

    metric: Metric
    windows: Tuple[TimeWindow, ...]
    rewards: Tuple[Fraction, ...]
    s: Optional[int]
    t: Optional[int]
    budget: Fraction
    wait_policy: str = WAIT

    def __post_init__(self):
        n = self.metric.n
        if len(self.windows) != n or len(self.rewards) != n:
            raise PreconditionError("windows/rewards must list one entry per vertex")
        object.__setattr__(self, "rewards", tuple(as_fraction(r) for r in self.rewards))
        object.__setattr__(self, "budget", as_fraction(self.budget))
        if any(r < 0 for r in self.rewards):
            raise PreconditionError("rewards must be nonnegative")
        if self.wait_policy not in (WAIT, NO_WAIT):
            raise PreconditionError("wait_policy must be %r or %r" % (WAIT, NO_WAIT))
        if self.s is None and self.t is not None:
            raise PreconditionError("an end anchor without a start anchor is not supported")
        for anchor in (self.s, self.t):
            if anchor is not None and not (0 <= anchor < n):
                raise PreconditionError("anchor vertex %r outside 0..%d" % (anchor, n - 1))
        if self.budget < 0:
            raise PreconditionError("budget must be nonnegative")
        for v, w in enumerate(self.windows):
            if w.release < 0:
                raise PreconditionError("vertex %d: window release %s is negative" % (v, w.release))
            if w.deadline > self.budget:
                raise PreconditionError(
                    "vertex %d: window deadline %s exceeds the budget %s"
                    % (v, w.deadline, self.budget))

    @property
    def n(self) -> int:
        return self.metric.n

    @property
    def mode(self) -> str:
        if self.s is None:
            return FREE
        if self.t is None:
            return START_ONLY
        return ANCHORED

    def positive_vertices(self) -> list:
        return [v for v in range(self.n) if self.rewards[v] > 0]


@dataclass(frozen=True)
class WindowStats:
    """Window-length statistics over the positive-reward vertices.

    Zero-length windows are excluded from l_min/l_max/l_ratio (they are
    solved by the fixed-time DP instead) but still count toward d_max.
    Fields are None when the relevant vertex set is empty.
    """

    l_min: Optional[Fraction]
    l_max: Optional[Fraction]
    l_ratio: Optional[Fraction]
    d_max: Optional[Fraction]


@dataclass(frozen=True)
class WalkSolution:
    """A scored walk: schedule of (vertex, time, collected) triples.

    Infeasible evaluations come back as a WalkSolution with feasible=False
    and the reason filled in, rather than as an exception.
    """

    schedule: tuple
    collected: frozenset
    reward: Fraction
    feasible: bool = True
    reason: Optional[str] = None

    @property
    def order(self) -> tuple:
        return tuple(v for (v, _t, _c) in self.schedule)

    @property
    def end_time(self) -> Fraction:
        return self.schedule[-1][1] if self.schedule else ZERO


def _infeasible(reason: str) -> WalkSolution:
    return WalkSolution((), frozenset(), ZERO, feasible=False, reason=reason)


def window_stats(x: TwInstance) -> WindowStats:
    lengths = []
    d_max = None
    for v in x.positive_vertices():
        w = x.windows[v]
        if d_max is None or w.deadline > d_max:
            d_max = w.deadline
        if w.length > 0:
            lengths.append(w.length)
    if not lengths:
        return WindowStats(None, None, None, d_max)
    l_min = min(lengths)
    l_max = max(lengths)
    return WindowStats(l_min, l_max, l_max / l_min, d_max)


def scale_times(x: TwInstance, c: Fraction) -> TwInstance:
    """Multiply all windows, the budget, and the metric by c > 0."""
    c = as_fraction(c)
    if c <= 0:
        raise PreconditionError("scale factor must be positive, got %s" % c)
    windows = tuple(TimeWindow(w.release * c, w.deadline * c) for w in x.windows)
    return replace(x, metric=x.metric.scaled(c), windows=windows, budget=x.budget * c)


def restrict(x: TwInstance, new_windows: Mapping[int, Optional[TimeWindow]]) -> TwInstance:
    """Restricted version of x: each mapped vertex gets a sub-window of its
    original window, or is dropped (None: reward zeroed, window kept).

    Raises ContainmentError naming the first offending vertex.
    """
    windows = list(x.windows)
    rewards = list(x.rewards)
    for v in sorted(new_windows):
        w = new_windows[v]
        if w is None:
            rewards[v] = ZERO
            continue
        if not x.windows[v].contains(w):
            raise ContainmentError(
                "vertex %d: window [%s, %s] escapes [%s, %s]"
                % (v, w.release, w.deadline, x.windows[v].release, x.windows[v].deadline))
        windows[v] = w
    return replace(x, windows=tuple(windows), rewards=tuple(rewards))


def drop_vertices(x: TwInstance, keep) -> TwInstance:
    """Zero out rewards outside `keep`; windows are left untouched."""
    keep = set(keep)
    rewards = tuple(r if v in keep else ZERO for v, r in enumerate(x.rewards))
    return replace(x, rewards=rewards)


def time_reversed(x: TwInstance, pivot: Optional[Fraction] = None) -> TwInstance:
    """Run time backwards around `pivot` (default: the budget).

    Windows [r, d] become [pivot - d, pivot - r], the metric is transposed,
    and the anchors swap roles.  Under the waiting-allowed policy this is
    reward-preserving for anchored instances.
    """
    if pivot is None:
        pivot = x.budget
    pivot = as_fraction(pivot)
    windows = tuple(TimeWindow(pivot - w.deadline, pivot - w.release) for w in x.windows)
    return replace(x, metric=x.metric.transposed(), windows=windows, s=x.t, t=x.s)


# ----- walk evaluation -------------------------------------------------------

def evaluate_walk(x: TwInstance, order: Sequence, times: Optional[Sequence] = None) -> WalkSolution:
    """Score a walk given as (vertex, collect_flag) pairs.

    Without explicit times the schedule is the earliest-feasible one: under
    the waiting policy, time(next) = max(time(prev) + d(prev, next), release)
    when next is flagged, else time(prev) + d(prev, next).  A flagged visit
    that still misses its window makes the walk infeasible under waiting
    (the caller should not have flagged it); under no-wait it is simply not
    credited.  With explicit times the gaps must cover the travel distances
    (exactly equal them under no-wait).
    """
    order = [(v, bool(flag)) for (v, flag) in order]
    if not order:
        if x.mode != FREE:
            return _infeasible("an anchored walk cannot be empty")
        return WalkSolution((), frozenset(), ZERO)
    if x.s is not None and order[0][0] != x.s:
        return _infeasible("walk must start at vertex %d" % x.s)
    if x.t is not None and order[-1][0] != x.t:
        return _infeasible("walk must end at vertex %d" % x.t)

    d = x.metric.d
    waiting = x.wait_policy == WAIT

    if times is None:
        sched_times = []
        for i, (v, flag) in enumerate(order):
            if i == 0:
                if x.mode == FREE:
                    t0 = max(ZERO, x.windows[v].release) if flag else ZERO
                else:
                    t0 = ZERO
                sched_times.append(t0)
                continue
            prev = order[i - 1][0]
            step = d[prev][v]
            if not is_finite(step):
                return _infeasible("no path from %d to %d" % (prev, v))
            arrived = sched_times[-1] + step
            if waiting and flag:
                arrived = max(arrived, x.windows[v].release)
            sched_times.append(arrived)
    else:
        if len(times) != len(order):
            return _infeasible("times must match the walk length")
        sched_times = [as_fraction(t) for t in times]
        first = sched_times[0]
        if x.mode == FREE:
            if first < 0:
                return _infeasible("walk cannot start before time 0")
        elif first != 0:
            return _infeasible("anchored walks start at time 0")
        for i in range(1, len(order)):
            step = d[order[i - 1][0]][order[i][0]]
            if not is_finite(step):
                return _infeasible("no path from %d to %d" % (order[i - 1][0], order[i][0]))
            gap = sched_times[i] - sched_times[i - 1]
            if waiting:
                if gap < step:
                    return _infeasible("gap %s shorter than travel %s at step %d" % (gap, step, i))
            elif gap != step:
                return _infeasible("no-wait gaps must equal travel exactly (step %d)" % i)

    collected = set()
    for (v, flag), tv in zip(order, sched_times):
        if not flag:
            continue
        w = x.windows[v]
        inside = w.release <= tv <= w.deadline
        if inside:
            collected.add(v)
        elif waiting:
            return _infeasible(
                "vertex %d flagged at time %s outside its window [%s, %s]"
                % (v, tv, w.release, w.deadline))

    end = sched_times[-1]
    if x.mode != FREE and end > x.budget:
        return _infeasible("walk ends at %s, after the budget %s" % (end, x.budget))

    schedule = tuple((v, tv, flag and v in collected and tv >= x.windows[v].release
                      and tv <= x.windows[v].deadline)
                     for (v, flag), tv in zip(order, sched_times))
    reward = sum((x.rewards[v] for v in collected), ZERO)
    return WalkSolution(schedule, frozenset(collected), reward)


# ----- exact search ----------------------------------------------------------

def brute_force_opt(x: TwInstance) -> WalkSolution:
    """Exact optimum by branch and bound over visit orders of collected
    subsets on the metric closure, using the earliest-feasible schedule rule.

    Only the waiting-allowed policy is supported; intended for n up to about
    twelve.  Ties break toward the lexicographically smallest visit order.
    Raises InfeasibleInstanceError for an anchored instance where t cannot
    be reached from s within the budget at all.
    """
    if x.wait_policy != WAIT:
        raise PreconditionError("brute_force_opt handles the waiting-allowed policy only")
    d = x.metric.d
    T = x.budget
    mode = x.mode

    if mode == ANCHORED:
        base = d[x.s][x.t]
        if not is_finite(base) or base > T:
            raise InfeasibleInstanceError(
                "cannot reach %d from %d within budget %s" % (x.t, x.s, T))

    rewards = x.rewards
    windows = x.windows

    def tail_ok(v: int, tv: Fraction) -> bool:
        # can the walk still finish after claiming v at time tv?
        if mode == ANCHORED:
            leg = d[v][x.t]
            return is_finite(leg) and tv + leg <= T
        if mode == START_ONLY:
            return tv <= T
        return True

    cand = []
    for v in x.positive_vertices():
        if mode == FREE:
            e = max(ZERO, windows[v].release)
        else:
            leg = d[x.s][v]
            if not is_finite(leg):
                continue
            e = max(leg, windows[v].release)
        if e <= windows[v].deadline and tail_ok(v, e):
            cand.append(v)
    cand.sort()

    best_reward = ZERO
    best_claims: tuple = ()

    def dfs(cur: Optional[int], now: Fraction, used: set, claims: list, acc: Fraction):
        nonlocal best_reward, best_claims
        avail = []
        for w in cand:
            if w in used:
                continue
            if cur is None:
                tw = max(ZERO, windows[w].release)
            else:
                leg = d[cur][w]
                if not is_finite(leg):
                    continue
                tw = max(now + leg, windows[w].release)
            if tw <= windows[w].deadline and tail_ok(w, tw):
                avail.append((w, tw))
        bound = acc + sum((rewards[w] for (w, _tw) in avail), ZERO)
        if bound <= best_reward:
            return
        for (w, tw) in avail:
            acc2 = acc + rewards[w]
            claims.append(w)
            if acc2 > best_reward:
                best_reward = acc2
                best_claims = tuple(claims)
            used.add(w)
            dfs(w, tw, used, claims, acc2)
            used.remove(w)
            claims.pop()

    if mode == FREE:
        dfs(None, ZERO, set(), [], ZERO)
    else:
        dfs(x.s, ZERO, set(), [], ZERO)

    return walk_from_claims(x, best_claims)


def walk_from_claims(x: TwInstance, claims: Iterable) -> WalkSolution:
    """Assemble and score the canonical walk that collects `claims` in order."""
    order = [(v, True) for v in claims]
    if x.s is not None:
        order.insert(0, (x.s, False))
    if x.t is not None:
        order.append((x.t, False))
    ws = evaluate_walk(x, order)
    return ws
