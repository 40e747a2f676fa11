"""Shared builders for the test suite.

The four-vertex unit path shows up everywhere: it is the smallest instance
where ordering, windows and the budget all interact.
"""

from __future__ import annotations

from fractions import Fraction as F
from typing import Optional, Sequence, Tuple

import pytest

from orientw import (WAIT, Graph, Metric, TimeWindow, TwInstance,
                     metric_closure)


def line_metric(n: int = 4) -> Metric:
    edges = [(i, i + 1, F(1)) for i in range(n - 1)]
    return metric_closure(Graph.build(False, n, edges))


def window(a, b) -> TimeWindow:
    return TimeWindow(F(a), F(b))


def line4_instance(budget=F(5), windows: Optional[Sequence[TimeWindow]] = None,
                   rewards: Optional[Sequence[F]] = None, s: Optional[int] = 0,
                   t: Optional[int] = 3, policy: str = WAIT) -> TwInstance:
    if windows is None:
        windows = (window(0, 5), window(1, 2), window(2, 3), window(0, 5))
    if rewards is None:
        rewards = (F(1), F(1), F(1), F(1))
    return TwInstance(line_metric(4), tuple(windows), tuple(rewards),
                      s, t, F(budget), policy)


@pytest.fixture
def line4() -> TwInstance:
    return line4_instance()


def build_instance(n: int, edges, windows, rewards, s, t, budget,
                   directed: bool = False, policy: str = WAIT) -> TwInstance:
    edges = [(u, v, F(w)) for (u, v, w) in edges]
    metric = metric_closure(Graph.build(directed, n, edges))
    wins = tuple(window(a, b) for (a, b) in windows)
    rews = tuple(F(r) for r in rewards)
    return TwInstance(metric, wins, rews, s, t, F(budget), policy)
