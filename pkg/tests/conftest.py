"""Shared generators for the test suite.

Random objects are built from explicit ``random.Random`` instances so every
test is reproducible; nothing here depends on global RNG state.
"""

from __future__ import annotations

import random
from fractions import Fraction

from gptwb.numerics import dot
from gptwb.observables import Observable, observable
from gptwb.spaces import StateSpace


def random_observable(space: StateSpace, n_outcomes: int, rng: random.Random,
                      margin: float = 0.9) -> Observable:
    """Valid observable sampled around the uniform trivial one: directions are
    Gaussian, scaled so every vertex evaluation keeps a positivity margin."""
    k = n_outcomes
    dim = space.ambient_dim
    gs = [[rng.gauss(0.0, 1.0) for _ in range(dim)] for _ in range(k)]
    gbar = [sum(col) / k for col in zip(*gs)]
    dirs = [[a - b for a, b in zip(g, gbar)] for g in gs]
    worst = max((abs(float(dot(d, v))) for d in dirs for v in space.vertices),
                default=0.0)
    if worst == 0.0:
        return observable(space, [tuple(u * (1.0 / k) for u in space.unit)] * k)
    delta = margin * (1.0 / k) / worst
    effs = [tuple(u * (1.0 / k) + delta * dv for u, dv in zip(space.unit, d))
            for d in dirs]
    return observable(space, effs)


def random_rational_observable(space: StateSpace, n_outcomes: int,
                               rng: random.Random) -> Observable:
    """Observable with small-denominator rational effects (exact-backend safe)."""
    k = n_outcomes
    dim = space.ambient_dim
    gs = [[Fraction(rng.randint(-6, 6), rng.randint(1, 6)) for _ in range(dim)]
          for _ in range(k)]
    gbar = [sum(col) / k for col in zip(*gs)]
    dirs = [[a - b for a, b in zip(g, gbar)] for g in gs]
    worst = Fraction(0)
    for d in dirs:
        for v in space.vertices:
            val = abs(dot([Fraction(x) if not isinstance(x, Fraction) else x for x in d],
                          [Fraction(x) if not isinstance(x, Fraction) else x for x in v]))
            worst = max(worst, val)
    base = Fraction(1, k)
    delta = base / worst / 2 if worst > 0 else Fraction(0)
    effs = []
    for d in dirs:
        effs.append(tuple(base * space.ctx.scalar(u) + space.ctx.scalar(delta * dv)
                          for u, dv in zip(space.unit, d)))
    return observable(space, effs)


def random_stochastic(n: int, m: int, rng: random.Random) -> list[list[float]]:
    rows = []
    for _ in range(n):
        raw = [rng.random() + 1e-3 for _ in range(m)]
        s = sum(raw)
        rows.append([v / s for v in raw])
    return rows
