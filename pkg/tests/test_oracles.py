import itertools
import random
from fractions import Fraction as F

import pytest

from orientw import (EXACT_DEADLINE, EXACT_ORACLE, GREEDY_ORACLE,
                     DeadlineQuery, OracleSpec, OrienteeringOracle,
                     OrienteeringQuery, PreconditionError,
                     best_deadline_walk, best_orienteering_walk, is_finite,
                     layered_deadline_oracle, pareto_profiles)
from orientw.generate import random_metric
from orientw.oracles import (MonotoneDeadlineOracle, MonotoneOracle,
                             WalkResult, result_duration, result_reward)

from conftest import line_metric


# ----- straight-line enumeration, no pruning, used as the referee -----------------

def _all_walks(metric, eligible, u, v, budget):
    """Every visit order over every subset of the eligible vertices."""
    best = None
    pool = sorted(set(eligible) - {u, v})
    for k in range(len(pool) + 1):
        for combo in itertools.combinations(pool, k):
            for perm in itertools.permutations(combo):
                order = (u,) + perm + ((v,) if v != u or perm else ())
                if len(order) == 1:
                    order = (u,)
                dur = result_duration(metric, order)
                if not is_finite(dur) or dur > budget:
                    continue
                rew = result_reward(eligible, order)
                if best is None or rew > best[0]:
                    best = (rew, order, dur)
    return best


def _exact(metric, eligible, u, v, budget):
    return best_orienteering_walk(
        EXACT_ORACLE, OrienteeringQuery(metric, eligible, u, v, budget))


def test_exact_line4_frozen():
    m = line_metric(4)
    res = _exact(m, {1: F(1), 2: F(1)}, 0, 3, F(5))
    assert res.reward == F(2)
    assert res.order == (0, 1, 2, 3)
    assert res.duration == F(3)


def test_exact_matches_enumeration():
    rng = random.Random(7)
    for trial in range(40):
        n = rng.randint(2, 6)
        m = random_metric(rng, n, directed=(trial % 3 == 0), integral=(trial % 2 == 0))
        k = rng.randint(0, n)
        eligible = {v: F(rng.randint(1, 3)) for v in rng.sample(range(n), k)}
        u = rng.randrange(n)
        v = rng.randrange(n)
        budget = F(rng.randint(0, 10))
        res = _exact(m, eligible, u, v, budget)
        ref = _all_walks(m, eligible, u, v, budget)
        if ref is None:
            assert not res.feasible
        else:
            assert res.feasible
            assert res.reward == ref[0]
            assert res.duration <= budget


def test_contract_wrapper_guards():
    m = line_metric(4)
    assert not _exact(m, {1: F(1)}, 0, 3, F(-1)).feasible
    assert not _exact(m, {1: F(1)}, 0, 3, F(2)).feasible   # d(0,3)=3
    base = _exact(m, {}, 2, 2, F(0))
    assert base.feasible and base.order == (2,) and base.duration == F(0)
    hit = _exact(m, {2: F(5)}, 2, 2, F(0))
    assert hit.reward == F(5)


def test_contract_rejects_cheating_oracle():
    def cheat(q):
        return WalkResult((q.u, q.v), F(99), F(0))
    oracle = OrienteeringOracle(OracleSpec("cheat", F(1)), cheat)
    m = line_metric(4)
    with pytest.raises(PreconditionError):
        best_orienteering_walk(oracle, OrienteeringQuery(m, {1: F(1)}, 0, 3, F(5)))


def test_greedy_line4_frozen():
    m = line_metric(4)
    res = best_orienteering_walk(
        GREEDY_ORACLE, OrienteeringQuery(m, {1: F(1), 2: F(1)}, 0, 3, F(5)))
    assert res.order == (0, 1, 2, 3)
    assert res.reward == F(2)
    assert res.duration == F(3)


def test_greedy_closed_walk():
    m = line_metric(4)
    res = best_orienteering_walk(
        GREEDY_ORACLE, OrienteeringQuery(m, {0: F(1), 2: F(1)}, 1, 1, F(2)))
    assert res.feasible
    assert res.order[0] == 1 and res.order[-1] == 1
    assert res.reward == F(1)
    assert res.duration == F(2)
    # too tight to leave: parks at the start vertex
    stuck = best_orienteering_walk(
        GREEDY_ORACLE, OrienteeringQuery(m, {0: F(1), 2: F(1)}, 1, 1, F(1)))
    assert stuck.feasible
    assert stuck.order == (1,)
    assert stuck.reward == F(0)


def test_greedy_never_beats_exact_never_overruns():
    rng = random.Random(19)
    for trial in range(30):
        n = rng.randint(2, 6)
        m = random_metric(rng, n, integral=True)
        eligible = {v: F(rng.randint(1, 3)) for v in range(n) if rng.random() < 0.7}
        u = rng.randrange(n)
        v = rng.randrange(n)
        budget = F(rng.randint(0, 12))
        g = best_orienteering_walk(GREEDY_ORACLE, OrienteeringQuery(m, eligible, u, v, budget))
        e = _exact(m, eligible, u, v, budget)
        assert g.feasible == e.feasible
        if g.feasible:
            assert g.reward <= e.reward
            assert g.duration <= budget


def test_oracle_spec_validation():
    with pytest.raises(PreconditionError):
        OracleSpec("bad", F(1, 2))
    assert EXACT_ORACLE.spec.ratio == 1
    assert not GREEDY_ORACLE.spec.guaranteed


# ----- monotone wrapper -------------------------------------------------------

def test_monotone_wrapper_fixes_nonmonotone_fn():
    m = line_metric(4)
    # a deliberately erratic rule: returns nothing once the budget passes 3
    def erratic(q):
        if q.budget > F(3):
            return WalkResult((), F(0), F(0))
        return exact_fn(q)
    exact_fn = EXACT_ORACLE.fn
    oracle = OrienteeringOracle(OracleSpec("erratic", F(1), guaranteed=False), erratic)
    mono = MonotoneOracle(oracle)
    eligible = {1: F(1), 2: F(1)}
    small = mono.query(m, eligible, 0, 3, F(3))
    big = mono.query(m, eligible, 0, 3, F(5))
    assert small.reward == F(2)
    assert big.reward >= small.reward


def test_monotone_wrapper_caches_and_grows():
    m = line_metric(4)
    mono = MonotoneOracle(EXACT_ORACLE)
    eligible = {1: F(1), 2: F(1)}
    r1 = mono.query(m, eligible, 0, 3, F(3))
    r2 = mono.query(m, eligible, 0, 3, F(4))
    r3 = mono.query(m, eligible, 0, 3, F(3))
    assert r1.reward == r3.reward == F(2)
    assert r2.reward >= r1.reward


# ----- deadline oracle ----------------------------------------------------------

def _all_deadline_walks(metric, eligible, u, t0, end, horizon):
    """Referee for deadline queries: enumerate orders, score first visits."""
    from orientw.oracles import _deadline_reward
    pool = sorted(set(eligible) - {u})
    ends = [end] if end is not None else sorted(set(list(eligible) + [u]))
    best = None
    for k in range(len(pool) + 1):
        for combo in itertools.combinations(pool, k):
            for perm in itertools.permutations(combo):
                for w in ends:
                    order = (u,) + perm + ((w,) if w != u or perm else ())
                    if len(order) == 1:
                        order = (u,)
                    dur = result_duration(metric, order)
                    if not is_finite(dur) or (horizon is not None and t0 + dur > horizon):
                        continue
                    rew = _deadline_reward(metric, eligible, order, t0)
                    if best is None or rew > best[0]:
                        best = (rew, order)
    return best


def test_exact_deadline_matches_enumeration():
    rng = random.Random(23)
    for trial in range(30):
        n = rng.randint(2, 5)
        m = random_metric(rng, n, integral=True)
        eligible = {}
        for v in range(n):
            if rng.random() < 0.7:
                eligible[v] = (F(rng.randint(1, 3)), F(rng.randint(0, 8)))
        u = rng.randrange(n)
        t0 = F(rng.randint(0, 3))
        end = rng.randrange(n) if trial % 2 == 0 else None
        horizon = F(rng.randint(2, 12))
        q = DeadlineQuery(m, eligible, u, t0, end, horizon)
        res = best_deadline_walk(EXACT_DEADLINE, q)
        ref = _all_deadline_walks(m, eligible, u, t0, end, horizon)
        if ref is None:
            assert not res.feasible
        else:
            assert res.feasible, (trial, ref)
            assert res.reward == ref[0], (trial, res, ref)


def test_layered_deadline_stays_feasible_and_sane():
    rng = random.Random(31)
    layered = layered_deadline_oracle(EXACT_ORACLE)
    for trial in range(20):
        n = rng.randint(2, 5)
        m = random_metric(rng, n, integral=True)
        eligible = {v: (F(1), F(rng.randint(1, 8))) for v in range(n)
                    if rng.random() < 0.8}
        u = rng.randrange(n)
        t0 = F(rng.randint(0, 2))
        q = DeadlineQuery(m, eligible, u, t0, None, F(10))
        got = best_deadline_walk(layered, q)
        ref = best_deadline_walk(EXACT_DEADLINE, q)
        assert got.feasible == ref.feasible
        if got.feasible:
            assert got.reward <= ref.reward


def test_monotone_deadline_wrapper():
    m = line_metric(4)
    mono = MonotoneDeadlineOracle(EXACT_DEADLINE)
    eligible = {1: (F(1), F(4)), 2: (F(1), F(4))}
    r1 = mono.query(m, eligible, 0, F(0), 3, F(3))
    r2 = mono.query(m, eligible, 0, F(0), 3, F(6))
    assert r1.reward <= r2.reward
    assert r2.reward == F(2)


# ----- reward/duration frontier ----------------------------------------------------

def test_pareto_line4_frozen():
    m = line_metric(4)
    prof = pareto_profiles(m, {1: F(1), 2: F(1)}, 0, 3, F(10))
    got = [(e.duration, e.reward) for e in prof.entries]
    assert got == [(F(3), F(2))]


def test_pareto_frontier_is_strictly_monotone():
    rng = random.Random(41)
    for _ in range(20):
        n = rng.randint(2, 6)
        m = random_metric(rng, n, integral=False)
        eligible = {v: F(rng.randint(1, 3)) for v in range(n) if rng.random() < 0.6}
        u = rng.randrange(n)
        v = rng.randrange(n)
        prof = pareto_profiles(m, eligible, u, v, F(20))
        ent = prof.entries
        for a, b in zip(ent, ent[1:]):
            assert a.duration < b.duration
            assert a.reward < b.reward
        if ent:
            best = _exact(m, eligible, u, v, F(20))
            assert ent[-1].reward == best.reward


def test_pareto_empty_when_unreachable():
    from orientw import Graph, metric_closure
    g = Graph.build(False, 3, [(0, 1, F(1))])
    m = metric_closure(g)
    prof = pareto_profiles(m, {1: F(1)}, 0, 2, F(10))
    assert prof.entries == ()


def test_exact_frozen_small_queries():
    m = line_metric(4)
    got = best_orienteering_walk(
        EXACT_ORACLE, OrienteeringQuery(m, {1: F(1)}, 0, 3, F(3)))
    assert (got.order, got.reward, got.duration) == ((0, 1, 3), F(1), F(3))
    short = best_orienteering_walk(
        EXACT_ORACLE, OrienteeringQuery(m, {1: F(1), 2: F(1)}, 0, 3, F(2)))
    assert short.order == () and short.reward == 0


def test_greedy_with_nothing_to_collect():
    got = best_orienteering_walk(
        GREEDY_ORACLE, OrienteeringQuery(line_metric(4), {}, 0, 2, F(5)))
    assert got.order == (0, 2)
    assert got.reward == 0 and got.duration == F(2)


def test_deadline_frozen_query():
    q = DeadlineQuery(line_metric(4), {1: (F(1), F(1)), 2: (F(1), F(2))},
                      0, F(0), 3, F(5))
    got = best_deadline_walk(EXACT_DEADLINE, q)
    assert got.reward == F(2)
    assert got.order[0] == 0 and got.order[-1] == 3


def test_deadline_oracle_matches_brute_on_instances():
    from orientw import brute_force_opt
    from orientw.generate import gen_deadline_instance
    for seed in range(25):
        x = gen_deadline_instance(seed, n_low=4, n_high=6)
        eligible = {v: (x.rewards[v], x.windows[v].deadline)
                    for v in x.positive_vertices()}
        q = DeadlineQuery(x.metric, eligible, x.s, F(0), x.t, x.budget)
        got = best_deadline_walk(EXACT_DEADLINE, q)
        assert got.reward == brute_force_opt(x).reward, seed


def test_pareto_profile_with_no_eligible_vertices():
    p = pareto_profiles(line_metric(4), {}, 0, 2, F(5))
    assert [(e.duration, e.reward) for e in p.entries] == [(F(2), F(0))]
