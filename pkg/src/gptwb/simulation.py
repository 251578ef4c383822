"""Simulation of observables: mixing plus classical post-processing.

Membership in the simulation closure of a finite simulator set is an LP after
the standard linearization M^(i) = p_i nu^(i): the sub-stochastic matrices
M^(i) and the weights p_i are jointly feasible iff the target is simulable.
The module also enumerates the extreme simulation-irreducible observables of
a polytopic space and implements the simulation-closed noise restrictions on
effects and observables.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

from .numerics import LPProblem, dot, lp_solve, rank, solve_unique
from .observables import (
    Observable,
    lambda_max_obs,
    minimally_sufficient,
    mix_observables,
    noise_content,
    observable,
    uniform_trivial,
)
from .postprocess import is_pp_clean
from .observables import is_extreme_clean
from .spaces import StateSpace, UnsupportedSpace, make_polygon, polygon_extreme_even


@dataclass(frozen=True)
class SimWitness:
    """weights p_i and per-simulator matrices M^(i) (rows sum to p_i) with
    target_x = sum_i sum_y M^(i)[y][x] * simulator_i_effect_y."""

    weights: tuple
    matrices: tuple  # one |Omega_i| x |Omega_target| matrix per simulator

    def postprocessings(self, ctx) -> tuple:
        """Recover nu^(i) = M^(i)/p_i for the simulators with positive weight."""
        out = []
        for p, m in zip(self.weights, self.matrices):
            if ctx.pos(p):
                out.append(tuple(tuple(v / p for v in row) for row in m))
            else:
                out.append(None)
        return tuple(out)


def is_simulable(target: Observable, simulators: Sequence[Observable]) -> Optional[SimWitness]:
    """LP membership of ``target`` in the simulation closure of ``simulators``."""
    if not simulators:
        raise ValueError("empty simulator list")
    space = target.space
    ctx = space.ctx
    dim = space.ambient_dim
    n_t = target.n_outcomes
    sizes = [b.n_outcomes for b in simulators]
    offsets = []
    off = 0
    for s in sizes:
        offsets.append(off)
        off += s * n_t
    p_off = off
    nvar = off + len(simulators)

    def idx(i: int, y: int, x: int) -> int:
        return offsets[i] + y * n_t + x

    prob = LPProblem(n=nvar, bounds=[(ctx.zero(), None)] * nvar)
    one = ctx.one()
    for i, b in enumerate(simulators):
        for y in range(sizes[i]):
            row = [ctx.zero()] * nvar
            for x in range(n_t):
                row[idx(i, y, x)] = one
            row[p_off + i] = -one
            prob.add_eq(row, ctx.zero())
    row = [ctx.zero()] * nvar
    for i in range(len(simulators)):
        row[p_off + i] = one
    prob.add_eq(row, one)
    for x in range(n_t):
        for c in range(dim):
            row = [ctx.zero()] * nvar
            for i, b in enumerate(simulators):
                for y in range(sizes[i]):
                    row[idx(i, y, x)] = b.effects[y][c]
            prob.add_eq(row, target.effects[x][c])
    res = lp_solve(prob, ctx)
    if not res.feasible:
        return None
    weights = tuple(res.x[p_off + i] for i in range(len(simulators)))
    matrices = tuple(
        tuple(tuple(res.x[idx(i, y, x)] for x in range(n_t)) for y in range(sizes[i]))
        for i in range(len(simulators)))
    return SimWitness(weights, matrices)


def verify_sim_witness(target: Observable, simulators: Sequence[Observable],
                       witness: SimWitness, tol: float | None = None) -> bool:
    """Re-substitute a witness: reconstruction and stochasticity within tolerance."""
    ctx = target.space.ctx
    tol = ctx.eps if tol is None else tol
    if abs(sum(witness.weights) - 1) > tol:
        return False
    for p, m, b in zip(witness.weights, witness.matrices, simulators):
        if p < -tol:
            return False
        for row in m:
            if any(v < -tol for v in row) or abs(sum(row) - p) > tol:
                return False
    for x in range(target.n_outcomes):
        acc = [ctx.zero()] * target.space.ambient_dim
        for m, b in zip(witness.matrices, simulators):
            for y, row in enumerate(m):
                acc = [a + row[x] * e for a, e in zip(acc, b.effects[y])]
        if any(abs(a - t) > max(tol, 1e-9) for a, t in zip(acc, target.effects[x])):
            return False
    return True


def is_simulation_irreducible(a: Observable) -> bool:
    """Indecomposable and equivalent to an extreme observable: check the
    minimally sufficient representative for cleanliness and extremality."""
    rep = minimally_sufficient(a)
    if not is_pp_clean(rep):
        return False
    return is_extreme_clean(rep)


def enumerate_irreducibles(space: StateSpace) -> tuple[Observable, ...]:
    """All extreme simulation-irreducible observables up to equivalence.

    Every candidate is a linearly independent set of dual-cone rays carrying a
    strictly positive solution of sum(c_i r_i) = u; subsets without a strictly
    positive solution are mixtures and are dropped.  Results are cached on the
    space.
    """
    if space.kind != "polytopic":
        raise UnsupportedSpace("irreducible enumeration needs a vertex representation")
    key = "irreducibles"
    if key in space._cache:
        return space._cache[key]
    ctx = space.ctx
    rays = space.dual_rays()
    d1 = space.ambient_dim
    columns = [r.direction for r in rays]
    found: list[Observable] = []
    # Equivalent observables have pairwise proportional effects, so they live
    # on identical ray sets; distinct ray subsets therefore never collide and
    # the subset enumeration needs no pairwise-equivalence dedup.
    for k in range(1, min(d1, len(rays)) + 1):
        for combo in itertools.combinations(range(len(rays)), k):
            dirs = [columns[i] for i in combo]
            if rank(dirs, ctx) < k:
                continue
            system = [[dirs[j][c] for j in range(k)] for c in range(d1)]
            coeff = solve_unique(system, space.unit, ctx)
            if coeff is None or not all(ctx.pos(c) for c in coeff):
                continue
            effects = tuple(tuple(c * x for x in dirs[j]) for j, c in enumerate(coeff))
            found.append(observable(space, effects))
    space._cache[key] = tuple(found)
    return space._cache[key]


# ------------------------------------------------------- effectively dichotomic
@dataclass(frozen=True)
class DichotomicVerdict:
    value: bool
    via: str  # "screen_a" | "screen_b" | "lp"
    witness: Optional[SimWitness] = None


def dichotomic_generators(space: StateSpace) -> tuple[Observable, ...]:
    """Generator set for the two-outcome simulation closure: one dichotomic
    observable (f, u-f) per nontrivial extreme effect f.

    Every dichotomic (e, u-e) is a mixture of these together with (u, o) and
    (o, u), and the latter two are post-processings of any generator, so the
    closure of this finite set equals the closure of all dichotomic
    observables on a polytopic space.
    """
    gens = []
    for f in space.extreme_effects():
        comp = tuple(u - x for u, x in zip(space.unit, f))
        gens.append(observable(space, (f, comp)))
    if not gens:
        gens.append(observable(space, (space.unit, space.zero_effect())))
    return tuple(gens)


def is_effectively_dichotomic(a: Observable) -> DichotomicVerdict:
    """Membership in the simulation closure of the two-outcome observables.

    Quick screens first: an outcome whose maximum is within 1 of the whole
    observable's max monotone makes the answer yes; a max monotone above 2
    makes it no.  Otherwise the generator-set LP decides.
    """
    space = a.space
    if space.kind != "polytopic":
        raise UnsupportedSpace("effectively-dichotomic test needs a vertex representation")
    ctx = space.ctx
    lmax = lambda_max_obs(a)
    per = [max(dot(e, v) for v in space.vertices) for e in a.effects]
    if any(ctx.le(lmax - m, ctx.one()) for m in per):
        return DichotomicVerdict(True, "screen_a")
    if ctx.gt(lmax, 2 * ctx.one()):
        return DichotomicVerdict(False, "screen_b")
    witness = is_simulable(a, dichotomic_generators(space))
    if witness is None:
        return DichotomicVerdict(False, "lp")
    return DichotomicVerdict(True, "lp", witness)


def ntomic_screen(a: Observable, n: int) -> str:
    """Sound screens for membership among effectively n-outcome observables
    (n >= 3): "yes", "no" or "inconclusive".  Exact decisions are only
    implemented for n = 2."""
    if n < 3:
        raise ValueError("use is_effectively_dichotomic for n = 2")
    if minimally_sufficient(a).n_outcomes <= n:
        return "yes"
    if a.space.ctx.gt(lambda_max_obs(a), n * a.space.ctx.one()):
        return "no"
    return "inconclusive"


# ------------------------------------------------------------- noise classes
def effect_in_noise_class(space: StateSpace, e: Sequence, t) -> bool:
    """Membership of e in {t e' + (1-t) p u : e' an effect, p in [0,1]}."""
    ctx = space.ctx
    t = ctx.scalar(t)
    if ctx.is_zero(t):
        vals = [dot(e, v) for v in space.vertices]
        return all(ctx.eq(v, vals[0]) for v in vals) and ctx.ge(vals[0], ctx.zero()) \
            and ctx.le(vals[0], ctx.one())
    dim = space.ambient_dim
    nvar = dim + 1  # e' coordinates and p
    p = LPProblem(n=nvar, bounds=[(None, None)] * dim + [(ctx.zero(), ctx.one())])
    for c in range(dim):
        row = [ctx.zero()] * nvar
        row[c] = t
        row[dim] = (ctx.one() - t) * space.unit[c]
        p.add_eq(row, ctx.scalar(e[c]))
    zero, one = ctx.zero(), ctx.one()
    for v in space.vertices:
        row = list(v) + [zero]
        p.add_ge(row, zero)
        p.add_ge([-x for x in v] + [zero], -one)
    return lp_solve(p, ctx).feasible


def effect_in_depolarized_class(space: StateSpace, e: Sequence, t) -> bool:
    """Membership of e in {t e' + (1-t) e'(s0) u}: on a point-symmetric space the
    center state forces the mixing coefficient, so the test is closed-form."""
    if not space.psym:
        raise UnsupportedSpace("depolarized class needs a point-symmetric embedding")
    ctx = space.ctx
    t = ctx.scalar(t)
    if ctx.is_zero(t):
        # degenerate family {p u}: same as the noise class at t = 0
        return effect_in_noise_class(space, e, 0)
    e_s0 = e[-1]  # value at the center (0, ..., 0, 1)
    eprime = tuple((x - (ctx.one() - t) * e_s0 * u) / t for x, u in zip(e, space.unit))
    return space.is_valid_effect(eprime)


def observable_in_noise_class(a: Observable, t) -> bool:
    """Membership of a in {t B + (1-t) T}: noise content at least 1 - t."""
    ctx = a.space.ctx
    return ctx.ge(noise_content(a).w_trivial, ctx.one() - ctx.scalar(t))


def range_in_effect_class(a: Observable, predicate: Callable[[Sequence], bool]) -> bool:
    """Every partial sum of effects (the observable's range) satisfies the
    effect predicate; the outcome set is capped at 16."""
    if a.n_outcomes > 16:
        raise ValueError("outcome set too large for range enumeration")
    ctx = a.space.ctx
    dim = a.space.ambient_dim
    for r in range(a.n_outcomes + 1):
        for combo in itertools.combinations(range(a.n_outcomes), r):
            acc = [ctx.zero()] * dim
            for i in combo:
                acc = [x + y for x, y in zip(acc, a.effects[i])]
            if not predicate(tuple(acc)):
                return False
    return True


def noise_class_gap_observable(t: float = 0.2) -> tuple[Observable, float]:
    """A hexagon observable whose range lies in the effect-level noise class at
    parameter t although the observable itself is not a noisy observable at t.

    The effects are A_k = t a_k + (1-t) (r/6) u with r = 1/2 and
    a_k = 0.4 (e_k + e_{k+2}) + 0.1 u built from the six extreme effects; the
    a_k sum to 3u, every partial sum stays inside the noise class with margin,
    and the noise content lands at (1-t) r + t sum_min < 1 - t.
    """
    space = make_polygon(6)
    r_total = 0.5
    ext = [polygon_extreme_even(6, k) for k in range(1, 7)]
    effects = []
    for k in range(6):
        a_k = tuple(0.8 * 0.5 * (x + y) + 0.1 * u
                    for x, y, u in zip(ext[k], ext[(k + 2) % 6], space.unit))
        effects.append(tuple(t * ax + (1 - t) * (r_total / 6) * u
                             for ax, u in zip(a_k, space.unit)))
    return observable(space, effects), t


def unambiguous_qubit_bounds(c) -> tuple[float, float]:
    """(best two-outcome-simulable success, unrestricted optimum) for
    unambiguous discrimination of two pure qubit states with overlap c."""
    c = float(c)
    if not 0.0 <= c <= 1.0:
        raise ValueError("overlap must lie in [0, 1]")
    return (1.0 - c * c) / 2.0, 1.0 - c
