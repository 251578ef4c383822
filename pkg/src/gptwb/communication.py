"""Communication matrices, ultraweak majorization and the monotone family.

A communication matrix is the row-stochastic outcome table of a
prepare-and-measure scenario.  Majorization D <= C (existence of row-stochastic
L, R with LCR = D) is decided by monotone screens, exact shortcuts for
identity-shaped endpoints, and an alternating-LP search that is sound for
"yes" (witnesses are re-verified) and honest about "inconclusive".
The nonnegative-rank and psd-rank monotones are reported as certified
intervals; the exact values are computationally hard in general.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .numerics import (
    LPProblem,
    count_orthogonal_rows,
    dot,
    is_row_stochastic,
    lp_solve,
    mat_mul,
    rank,
)
from .numerics import Context, DEFAULT
from .observables import Observable
from .spaces import StateSpace, UnsupportedSpace


@dataclass(frozen=True)
class CommMatrix:
    matrix: tuple            # row-stochastic rows
    states: Optional[tuple] = None
    observable: Optional[Observable] = None
    ctx: Context = DEFAULT

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.matrix), len(self.matrix[0]) if self.matrix else 0

    def row(self, i: int) -> tuple:
        return self.matrix[i]


def comm_matrix(rows: Sequence[Sequence], ctx: Context | None = None,
                states=None, observable=None) -> CommMatrix:
    ctx = ctx or DEFAULT
    mat = tuple(tuple(ctx.scalar(v) for v in row) for row in rows)
    if not is_row_stochastic(mat, ctx):
        raise ValueError("matrix is not row-stochastic")
    return CommMatrix(mat, states, observable, ctx)


def build_comm_matrix(states: Sequence[Sequence], m: Observable) -> CommMatrix:
    """Entry (i, j) is the probability of outcome j on state i."""
    space = m.space
    for s in states:
        if space.kind == "polytopic" and not space.contains_state(s):
            raise ValueError("state outside the state space")
    rows = tuple(tuple(dot(e, s) for e in m.effects) for s in states)
    return CommMatrix(rows, tuple(tuple(s) for s in states), m, space.ctx)


def identity_matrix(k: int, ctx: Context | None = None) -> CommMatrix:
    ctx = ctx or DEFAULT
    one, zero = ctx.one(), ctx.zero()
    return CommMatrix(tuple(tuple(one if i == j else zero for j in range(k))
                            for i in range(k)), ctx=ctx)


def uniform_matrix(n: int, m: int | None = None, ctx: Context | None = None) -> CommMatrix:
    ctx = ctx or DEFAULT
    m = n if m is None else m
    v = Fraction(1, m) if ctx.exact else 1.0 / m
    return CommMatrix(tuple(tuple(v for _ in range(m)) for _ in range(n)), ctx=ctx)


# ----------------------------------------------------------------- monotones
@dataclass(frozen=True)
class MonotoneReport:
    iota: int
    lambda_max: object
    lambda_min: object
    rank: int
    nn_rank: tuple[int, int]
    psd_rank: tuple[int, int]


def monotones(c: CommMatrix, *, seed: int = 0, search_upper: bool = True) -> MonotoneReport:
    ctx = c.ctx
    mat = c.matrix
    n, m = c.shape
    iota = count_orthogonal_rows(mat, ctx)
    lam_max = sum(max(row[j] for row in mat) for j in range(m))
    lam_min = -sum(min(row[j] for row in mat) for j in range(m))
    rk = rank(mat, ctx)
    nn_lo = max(rk, ctx.ceil(lam_max))
    nn_hi = nn_lo
    if search_upper:
        while nn_hi < min(n, m):
            if nonneg_factorization(c, nn_hi, seed=seed) is not None:
                break
            nn_hi += 1
    else:
        nn_hi = min(n, m)
    psd_lo = max(_ceil_sqrt(rk), ctx.ceil(lam_max))
    return MonotoneReport(iota, lam_max, lam_min, rk, (nn_lo, nn_hi), (psd_lo, nn_hi))


def _ceil_sqrt(k: int) -> int:
    r = int(k ** 0.5)
    while r * r < k:
        r += 1
    return r


def nonneg_factorization(c: CommMatrix, k: int, *, seed: int = 0,
                         restarts: int = 4, rounds: int = 12) -> Optional[tuple]:
    """Row-stochastic W (n x k), H (k x m) with W H = C within tolerance, or
    None when the alternating search fails (inconclusive, not a certificate)."""
    ctx = c.ctx
    n, m = c.shape
    if k >= min(n, m):
        k = min(n, m)
        if m <= n:
            return tuple(tuple(row) for row in c.matrix), identity_matrix(m, ctx).matrix
        return identity_matrix(n, ctx).matrix, tuple(tuple(row) for row in c.matrix)
    if k < 1:
        return None
    tol = ctx.eps if not ctx.exact else 0
    for attempt in range(restarts):
        rng = random.Random(seed * 1_000_003 + k * 1009 + attempt)
        if attempt == 0:
            # cluster seeding: assign rows cyclically
            w = [[1.0 if (i % k) == j else 0.0 for j in range(k)] for i in range(n)]
        else:
            w = []
            for _ in range(n):
                raw = [rng.random() for _ in range(k)]
                s = sum(raw)
                w.append([v / s for v in raw])
        prev = None
        for _ in range(rounds):
            h = _fit_right_stochastic(w, c.matrix, m)
            w = _fit_left_stochastic(h, c.matrix)
            err = _factor_error(w, h, c.matrix)
            if err <= max(tol, 1e-10):
                wq = tuple(tuple(ctx.scalar(v) for v in row) for row in w)
                hq = tuple(tuple(ctx.scalar(v) for v in row) for row in h)
                if _factor_error(wq, hq, c.matrix) <= max(tol, 1e-9):
                    return wq, hq
            if prev is not None and err > prev - 1e-12:
                break  # stagnated
            prev = err
    return None


def _factor_error(w, h, target) -> float:
    err = 0.0
    for i, row in enumerate(target):
        for j, tv in enumerate(row):
            acc = sum(w[i][t] * h[t][j] for t in range(len(h)))
            err = max(err, abs(float(acc - tv)))
    return err


def _fit_left_stochastic(h, target):
    """Best row-stochastic W for fixed H: the rows of W decouple, so minimize
    the max deviation with one small LP per row."""
    k = len(h)
    m = len(target[0]) if target else 0
    out = []
    for i in range(len(target)):
        p = LPProblem(n=k + 1, objective=[0] * k + [-1],
                      bounds=[(0, None)] * k + [(0, None)])
        p.add_eq([1] * k + [0], 1)
        for j in range(m):
            col = [float(h[t][j]) for t in range(k)]
            p.add_ge([-v for v in col] + [1], -float(target[i][j]))
            p.add_ge(col + [1], float(target[i][j]))
        res = lp_solve(p, DEFAULT)
        out.append([float(v) for v in res.x[:k]] if res.feasible else [1.0 / k] * k)
    return out


def _fit_right_stochastic(w, target, m: int):
    """Heuristic H step: fit each column by a tiny nonnegative LP (columns
    decouple once the row sums are relaxed), then renormalize the rows.  The
    following W step restores stochastic consistency; only the final verified
    error matters."""
    k = len(w[0]) if w else 0
    n = len(target)
    cols = []
    for j in range(m):
        p = LPProblem(n=k + 1, objective=[0] * k + [-1],
                      bounds=[(0, None)] * k + [(0, None)])
        for i in range(n):
            row = [float(w[i][t]) for t in range(k)]
            p.add_ge([-v for v in row] + [1], -float(target[i][j]))
            p.add_ge(row + [1], float(target[i][j]))
        res = lp_solve(p, DEFAULT)
        cols.append([float(v) for v in res.x[:k]] if res.feasible else [0.0] * k)
    h = [[cols[j][t] for j in range(m)] for t in range(k)]
    for t in range(k):
        s = sum(h[t])
        h[t] = [v / s for v in h[t]] if s > 0 else [1.0 / m] * m
    return h


# ------------------------------------------------------------ canonical form
def canonical_reduce(c: CommMatrix) -> CommMatrix:
    """Equivalent matrix with no zero columns, no positively proportional
    column pairs, and no row that is a convex mixture of the other rows."""
    ctx = c.ctx
    rows = [list(r) for r in c.matrix]
    changed = True
    while changed:
        changed = False
        # zero columns
        m = len(rows[0]) if rows else 0
        keep = [j for j in range(m) if any(not ctx.is_zero(r[j]) for r in rows)]
        if len(keep) < m:
            rows = [[r[j] for j in keep] for r in rows]
            changed = True
        # proportional columns: add the later one into the earlier
        m = len(rows[0]) if rows else 0
        merged = False
        for j1 in range(m):
            for j2 in range(j1 + 1, m):
                col1 = [r[j1] for r in rows]
                col2 = [r[j2] for r in rows]
                c_ratio = _column_ratio(col1, col2, ctx)
                if c_ratio is not None:
                    for r in rows:
                        r[j1] += r[j2]
                    rows = [[v for jj, v in enumerate(r) if jj != j2] for r in rows]
                    merged = changed = True
                    break
            if merged:
                break
        # mixture rows
        dropped = False
        for i in range(len(rows)):
            if len(rows) == 1:
                break
            if _is_mixture_of_others(rows, i, ctx):
                rows.pop(i)
                dropped = changed = True
                break
        if dropped:
            continue
    return CommMatrix(tuple(tuple(r) for r in rows), ctx=ctx)


def _column_ratio(col1, col2, ctx) -> Optional[object]:
    j = max(range(len(col1)), key=lambda i: abs(float(col1[i])))
    if ctx.is_zero(col1[j]):
        return None
    ratio = col2[j] / col1[j]
    if not ctx.pos(ratio):
        return None
    if all(ctx.eq(col2[i], ratio * col1[i]) for i in range(len(col1))):
        return ratio
    return None


def _is_mixture_of_others(rows, i: int, ctx) -> bool:
    others = [r for t, r in enumerate(rows) if t != i]
    n = len(others)
    p = LPProblem(n=n, bounds=[(ctx.zero(), None)] * n)
    p.add_eq([ctx.one()] * n, ctx.one())
    for j in range(len(rows[0])):
        p.add_eq([o[j] for o in others], rows[i][j])
    return lp_solve(p, ctx).feasible


# ------------------------------------------------------- ultraweak majorization
@dataclass(frozen=True)
class UltraweakResult:
    verdict: str                      # "yes" | "no" | "inconclusive"
    left: Optional[tuple] = None      # L with L C R = D
    right: Optional[tuple] = None
    violated: Optional[str] = None    # name of the violated monotone for "no"


def ultraweak_leq(d: CommMatrix, c: CommMatrix, *, seed: int = 0,
                  restarts: int = 5, rounds: int = 50) -> UltraweakResult:
    """Decide D <= C (ultraweak): monotone screens give certified "no",
    identity-shaped endpoints are decided exactly, and otherwise an
    alternating LP searches for row-stochastic witnesses L, R."""
    ctx = d.ctx
    md = monotones(d, seed=seed, search_upper=False)
    mc = monotones(c, seed=seed, search_upper=False)
    for name, dv, cv in [("iota", md.iota, mc.iota),
                         ("lambda_max", md.lambda_max, mc.lambda_max),
                         ("lambda_min", md.lambda_min, mc.lambda_min),
                         ("rank", md.rank, mc.rank)]:
        if ctx.gt(ctx.scalar(dv), ctx.scalar(cv)):
            return UltraweakResult("no", violated=name)
    if md.nn_rank[0] > mc.nn_rank[1]:
        return UltraweakResult("no", violated="nn_rank")

    if _is_identity(d, ctx):  # distinguishability shortcut
        k = d.shape[0]
        rows_idx = _orthogonal_row_set(c, k)
        if rows_idx is not None:
            left, right = _identity_witness(c, rows_idx, ctx)
            return UltraweakResult("yes", left, right)
        return UltraweakResult("no", violated="iota")
    if _is_identity(c, ctx):  # classical-capacity shortcut
        k = c.shape[0]
        fact = nonneg_factorization(d, k, seed=seed)
        if fact is not None:
            return UltraweakResult("yes", fact[0], fact[1])
        if md.nn_rank[0] > k:
            return UltraweakResult("no", violated="nn_rank")
        return UltraweakResult("inconclusive")

    n, m = d.shape
    j, k = c.shape
    for attempt in range(restarts):
        rng = random.Random(seed * 1_000_003 + attempt)
        if attempt == 0:
            right = [[1.0 / m] * m for _ in range(k)]
        else:
            right = []
            for _ in range(k):
                raw = [rng.random() for _ in range(m)]
                s = sum(raw)
                right.append([v / s for v in raw])
        prev = None
        for _ in range(rounds):
            cr = [[sum(float(c.matrix[a][y]) * right[y][b] for y in range(k))
                   for b in range(m)] for a in range(j)]
            left = _fit_left_stochastic(cr, d.matrix)
            lc = [[sum(left[a][i] * float(c.matrix[i][y]) for i in range(j))
                   for y in range(k)] for a in range(n)]
            right = _fit_right_stochastic(lc, d.matrix, m)
            err = _factor_error(lc, right, d.matrix)
            if err <= max(ctx.eps if not ctx.exact else 0, 1e-10):
                lq = tuple(tuple(ctx.scalar(v) for v in row) for row in left)
                rq = tuple(tuple(ctx.scalar(v) for v in row) for row in right)
                if verify_ultraweak_witness(d, c, lq, rq):
                    return UltraweakResult("yes", lq, rq)
            if prev is not None and err > prev - 1e-12:
                break
            prev = err
    return UltraweakResult("inconclusive")


def _is_identity(c: CommMatrix, ctx) -> bool:
    n, m = c.shape
    if n != m:
        return False
    one, zero = ctx.one(), ctx.zero()
    return all(ctx.eq(c.matrix[i][j], one if i == j else zero)
               for i in range(n) for j in range(m))


def _orthogonal_row_set(c: CommMatrix, k: int) -> Optional[tuple[int, ...]]:
    ctx = c.ctx
    supports = [frozenset(j for j, v in enumerate(row) if not ctx.is_zero(v))
                for row in c.matrix]
    for combo in itertools.combinations(range(len(supports)), k):
        ok = all(not (supports[a] & supports[b])
                 for a, b in itertools.combinations(combo, 2))
        if ok:
            return combo
    return None


def _identity_witness(c: CommMatrix, rows_idx: tuple[int, ...], ctx):
    n, m = c.shape
    k = len(rows_idx)
    one, zero = ctx.one(), ctx.zero()
    left = tuple(tuple(one if i == rows_idx[a] else zero for i in range(n))
                 for a in range(k))
    supports = [frozenset(j for j, v in enumerate(c.matrix[i]) if not ctx.is_zero(v))
                for i in rows_idx]
    right_rows = []
    for j in range(m):
        owner = next((b for b, sup in enumerate(supports) if j in sup), 0)
        right_rows.append(tuple(one if b == owner else zero for b in range(k)))
    return left, tuple(right_rows)


def verify_ultraweak_witness(d: CommMatrix, c: CommMatrix, left, right,
                             tol: float = 1e-9) -> bool:
    lcr = mat_mul(mat_mul(left, c.matrix), right)
    return (is_row_stochastic(left, d.ctx) and is_row_stochastic(right, d.ctx)
            and all(abs(float(a - b)) <= tol
                    for ra, rb in zip(lcr, d.matrix) for a, b in zip(ra, rb)))


# ------------------------------------------------------------ space dimensions
@dataclass(frozen=True)
class SpaceDims:
    d_op: int
    lambda_max: float
    d_lin: int
    d_cl_lo: int
    d_q_lo: int


def space_dims(space: StateSpace, *, seed: int = 0) -> SpaceDims:
    """Physical dimensions of a polytopic theory: perfect distinguishability,
    information storability, linear dimension, and certified lower bounds for
    the classical and quantum dimensions."""
    if space.kind != "polytopic":
        raise UnsupportedSpace("dimensions need a vertex representation")
    ctx = space.ctx
    d_lin = space.affine_dim + 1
    lam_max, lam_witness = _lambda_max_space(space)
    d_op = _operational_dim(space, lam_max)
    family = [identity_matrix(d_op, ctx)]
    if lam_witness is not None:
        family.append(lam_witness)
    family.extend(_full_rank_family(space))
    d_cl_lo = 1
    d_q_lo = 1
    for cm in family:
        rep = monotones(cm, seed=seed, search_upper=False)
        d_cl_lo = max(d_cl_lo, rep.nn_rank[0])
        d_q_lo = max(d_q_lo, rep.psd_rank[0])
    return SpaceDims(d_op, float(lam_max), d_lin, d_cl_lo, d_q_lo)


def _lambda_max_space(space: StateSpace):
    """Single LP: one effect per vertex, maximize the summed diagonal values.
    Grouping outcomes by their maximizing vertex loses nothing, so the optimum
    over this family equals the supremum over all observables.  Effects are
    parametrized as nonnegative combinations of the dual-cone rays, which
    makes positivity structural and keeps the LP small."""
    ctx = space.ctx
    rays = [r.direction for r in space.dual_rays()]
    n = space.n_vertices
    nr = len(rays)
    dim = space.ambient_dim
    nvar = n * nr
    zero = ctx.zero()
    obj = [zero] * nvar
    for i in range(n):
        for k in range(nr):
            obj[i * nr + k] = dot(rays[k], space.vertices[i])
    p = LPProblem(n=nvar, objective=obj, bounds=[(zero, None)] * nvar)
    for c in range(dim):
        row = [zero] * nvar
        for i in range(n):
            for k in range(nr):
                row[i * nr + k] = rays[k][c]
        p.add_eq(row, space.unit[c])
    res = lp_solve(p, ctx)
    if not res.feasible:
        raise RuntimeError("storability LP must be feasible")
    effects = []
    for i in range(n):
        acc = [zero] * dim
        for k in range(nr):
            w = res.x[i * nr + k]
            if not ctx.is_zero(w):
                acc = [a + w * rc for a, rc in zip(acc, rays[k])]
        effects.append(tuple(acc))
    witness = CommMatrix(tuple(tuple(dot(e, v) for e in effects) for v in space.vertices),
                         ctx=ctx)
    return res.value, witness


def _operational_dim(space: StateSpace, lam_max) -> int:
    ctx = space.ctx
    n = space.n_vertices
    best = 1
    eps = 0 if ctx.exact else ctx.eps
    cap = min(n, int(float(lam_max) + float(eps)))  # d_op <= lambda_max
    for k in range(2, cap + 1):
        found = False
        for combo in itertools.combinations(range(n), k):
            if _perfectly_distinguishable(space, combo):
                found = True
                break
        if found:
            best = k
        else:
            break
    return best


def _perfectly_distinguishable(space: StateSpace, vertex_idx: Sequence[int]) -> bool:
    ctx = space.ctx
    rays = [r.direction for r in space.dual_rays()]
    nr = len(rays)
    dim = space.ambient_dim
    k = len(vertex_idx)
    nvar = k * nr
    zero, one = ctx.zero(), ctx.one()
    p = LPProblem(n=nvar, bounds=[(zero, None)] * nvar)
    for c in range(dim):
        row = [zero] * nvar
        for i in range(k):
            for t in range(nr):
                row[i * nr + t] = rays[t][c]
        p.add_eq(row, space.unit[c])
    evals = [[dot(r, space.vertices[vi]) for r in rays] for vi in vertex_idx]
    for i in range(k):
        for t in range(k):
            row = [zero] * nvar
            for s in range(nr):
                row[i * nr + s] = evals[t][s]
            p.add_eq(row, one if t == i else zero)
    return lp_solve(p, ctx).feasible


def _full_rank_family(space: StateSpace) -> list[CommMatrix]:
    """Comm matrices with full linear rank: vertices against the enumerated
    irreducibles when available, otherwise a perturbed trivial observable."""
    from .simulation import enumerate_irreducibles

    out = []
    try:
        irr = enumerate_irreducibles(space)
    except UnsupportedSpace:
        irr = ()
    ctx = space.ctx
    target = space.affine_dim + 1
    for g in irr[:8]:
        cm = CommMatrix(tuple(tuple(dot(e, v) for e in g.effects) for v in space.vertices),
                        ctx=ctx)
        out.append(cm)
        if rank(cm.matrix, ctx) >= target:
            break
    if not out or all(rank(cm.matrix, ctx) < target for cm in out):
        cm = _perturbed_trivial_matrix(space)
        if cm is not None:
            out.append(cm)
    return out


def _perturbed_trivial_matrix(space: StateSpace) -> Optional[CommMatrix]:
    ctx = space.ctx
    d1 = space.ambient_dim
    n = space.n_vertices
    k = d1 + 1
    base = Fraction(1, k) if ctx.exact else 1.0 / k
    dirs = []
    for c in range(d1):
        e = [ctx.zero()] * d1
        e[c] = ctx.one()
        dirs.append(tuple(e))
    mean = tuple(sum(col) * (Fraction(1, k) if ctx.exact else 1.0 / k) for col in zip(*dirs, space.unit))
    cands = dirs + [space.unit]
    deltas = []
    for e in cands:
        dev = tuple(x - mx for x, mx in zip(e, mean))
        top = max(abs(float(dot(dev, v))) for v in space.vertices)
        deltas.append(top)
    top = max(deltas)
    if top == 0:
        return None
    scale = ctx.scalar(0.5) * (base / ctx.scalar(top))
    effects = []
    for e in cands:
        dev = tuple(x - mx for x, mx in zip(e, mean))
        effects.append(tuple(base * u + scale * dv for u, dv in zip(space.unit, dev)))
    rows = tuple(tuple(dot(e, v) for e in effects) for v in space.vertices)
    return CommMatrix(rows, ctx=ctx)
