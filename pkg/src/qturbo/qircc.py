"""Quantum irregular convolutional outer codes: subcode bank, mixing and weight search."""

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.optimize import linprog

from .channel import DomainError
from .clifford import decode_seed_integers
from .convolutional import ConvolutionalCode
from .exit import DEFAULT_GRID, ExitCurve, outer_curve
from .siso import DecodeFailure, SisoOutput

# (name, n, k, m, seed integers); rates 1/4, 1/3, 1/2, 2/3, 3/4 at memory 3, then memory 1
SUBCODES = (
    ("U1", 4, 1, 3, (9600, 691, 11713, 4863, 1013, 6907, 1125, 828, 10372, 6337, 5590, 11024, 12339, 3439)),
    ("U2", 3, 1, 3, (3968, 1463, 2596, 3451, 1134, 3474, 657, 686, 3113, 1866, 2608, 2570)),
    ("U3", 2, 1, 3, (848, 1000, 930, 278, 611, 263, 744, 260, 356, 880)),
    ("U4", 3, 2, 3, (529, 807, 253, 1950, 3979, 2794, 956, 1892, 3359, 2127, 3812, 1580)),
    ("U5", 4, 3, 3, (62, 6173, 4409, 12688, 7654, 10804, 1763, 15590, 6304, 3120, 2349, 1470, 9063, 4020)),
    ("U6", 4, 1, 1, (475, 194, 526, 422, 417, 988, 426, 611, 831, 84)),
    ("U7", 3, 1, 1, (26, 147, 149, 99, 112, 184, 64, 139)),
    ("U8", 2, 1, 1, (37, 55, 58, 35, 57, 54)),
    ("U9", 3, 2, 1, (57, 248, 99, 226, 37, 93, 244, 54)),
    ("U10", 4, 3, 1, (469, 634, 146, 70, 186, 969, 387, 398, 807, 452)),
)

WEIGHT_FLOOR = 1e-6
DESIGN_WEIGHTS = (0.0, 0.0, 0.0, 0.0, 0.168, 0.832, 0.0, 0.0, 0.0, 0.0)


class SizingError(ValueError):
    pass


class InfeasibleError(DomainError):
    """No weight vector opens the tunnel with the requested margin."""

    def __init__(self, msg, best_gap):
        super().__init__(msg)
        self.best_gap = best_gap


def subcode(q):
    name, n, k, m, ints = SUBCODES[q]
    return decode_seed_integers(ints, n, k, m, name=name)


@dataclass
class SubcodeBank:
    seeds: list
    curves: list | None = None

    @classmethod
    def default(cls):
        return cls([subcode(q) for q in range(len(SUBCODES))])

    def __len__(self):
        return len(self.seeds)

    @property
    def rates(self):
        return np.array([s.k / s.n for s in self.seeds])

    def with_curves(self, grid=DEFAULT_GRID, symbols=20000, seed=0):
        curves = [outer_curve(s, grid, symbols, seed, code=s.name) for s in self.seeds]
        return SubcodeBank(self.seeds, curves)


@dataclass
class WeightVector:
    rho: np.ndarray
    rates: np.ndarray

    def __post_init__(self):
        self.rho = np.asarray(self.rho, dtype=float)
        self.rates = np.asarray(self.rates, dtype=float)
        if self.rho.shape != self.rates.shape:
            raise ValueError("one weight per subcode is needed")
        if np.any(self.rho < 0) or np.any(self.rho > 1):
            raise ValueError("weights must lie in [0, 1]")

    @property
    def total(self):
        return float(self.rho.sum())

    @property
    def rate(self):
        return float(self.rho @ self.rates)

    @property
    def support(self):
        return [int(q) for q in np.flatnonzero(self.rho > 0)]

    def satisfies(self, R_Q, tol=1e-6):
        return abs(self.total - 1) <= tol and abs(self.rate - R_Q) <= tol and bool(np.all(self.rho >= 0))


def mixed_curve(bank, w):
    """Pointwise weighted sum of the subcode curves."""
    if bank.curves is None:
        raise ValueError("bank has no curves")
    grid = bank.curves[0].i_a
    for c in bank.curves[1:]:
        if not np.array_equal(c.i_a, grid):
            raise ValueError("subcode curves are sampled on different grids")
    ie = sum(r * c.i_e for r, c in zip(w.rho, bank.curves) if r > 0)
    return ExitCurve(grid, ie, code="qircc", samples=min(c.samples for c in bank.curves))


# --- weight optimization ------------------------------------------------------


def _simplex(z):
    """Projection onto the probability simplex (sort-based)."""
    u = np.sort(z)[::-1]
    css = np.cumsum(u) - 1.0
    k = np.nonzero(u * np.arange(1, z.size + 1) > css)[0][-1]
    return np.maximum(z - css[k] / (k + 1), 0.0)


def project_simplex_rate(x, r, R, tol=1e-13):
    """Euclidean projection of x onto {y >= 0, sum y = 1, y @ r = R}.

    The KKT point is y = simplex(x - lam * r); the rate of that point is
    non-increasing in lam, so lam is found by bisection.
    """
    x, r = np.asarray(x, dtype=float), np.asarray(r, dtype=float)
    if not r.min() - tol <= R <= r.max() + tol:
        raise ValueError(f"rate {R} is outside [{r.min()}, {r.max()}]")

    def rate(lam):
        y = _simplex(x - lam * r)
        return y @ r - R, y

    lo, hi = -1.0, 1.0
    while rate(lo)[0] < 0:
        lo *= 2
    while rate(hi)[0] > 0:
        hi *= 2
        if hi > 1e15:
            break
    y = rate(hi)[1]
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        h, y = rate(mid)
        if abs(h) <= tol or mid in (lo, hi):
            break
        lo, hi = (mid, hi) if h > 0 else (lo, mid)
    if abs(y @ r - R) > 1e-9:
        raise ValueError(f"rate {R} cannot be met on this support")
    return y


@dataclass
class Optimum:
    weights: WeightVector
    objective: float
    min_gap: float
    history: list = field(default_factory=list)


def curve_matrix(bank, inner):
    """(A, b, x): inverted subcode curves and inner curve on the inner grid.

    The shared end point I_A = 1 is left out.
    """
    ok = ~np.isnan(inner.i_e) & (inner.i_a < 1 - 1e-12)
    x = inner.i_a[ok]
    A = np.column_stack([c.inverse_at(x) for c in bank.curves])
    return A, inner.i_e[ok], x


def optimize_weights(bank, inner, R_Q, margin=1e-3, penalty=1e6, max_iter=20000):
    """Least-squares curve match of the mixed outer curve to ``inner``.

    Minimizes J = sum_i e_i^2 with e = b - A rho subject to sum rho = 1,
    rho @ r = R_Q and rho >= 0 by projected gradient descent. The open-tunnel
    condition e >= margin enters as a quadratic penalty, starting from a
    feasible point found by linear programming, and is re-checked at the end.
    ``history`` holds the penalized objective of every accepted iterate.
    Raises InfeasibleError when no weights qualify.
    """
    A, b, _ = curve_matrix(bank, inner)
    r = bank.rates
    Q = len(r)
    C = np.vstack([np.ones(Q), r])
    d = np.array([1.0, R_Q])

    # feasibility: maximize t subject to A rho + t <= b
    lp = linprog(
        np.r_[np.zeros(Q), -1.0],
        A_ub=np.column_stack([A, np.ones(len(b))]), b_ub=b,
        A_eq=np.column_stack([C, np.zeros(2)]), b_eq=d,
        bounds=[(0, None)] * Q + [(None, None)],
        method="highs",
    )
    if lp.status != 0:
        raise InfeasibleError(f"no weights reach rate {R_Q}", -np.inf)
    best_gap = -lp.fun
    if best_gap < margin:
        raise InfeasibleError(f"tunnel cannot open: best achievable gap {best_gap:.4g} < margin {margin:g}", best_gap)

    def objective(v):
        e = b - A @ v
        return float((e**2).sum() + penalty * (np.maximum(margin - e, 0.0) ** 2).sum())

    def gradient(v):
        e = b - A @ v
        return -2 * A.T @ e + 2 * penalty * A.T @ np.maximum(margin - e, 0.0)

    rho = project_simplex_rate(lp.x[:Q], r, R_Q)
    F = objective(rho)
    history = [F]
    step = 1.0 / max(2 * np.linalg.norm(A, 2) ** 2, 1e-12)
    for _ in range(max_iter):
        grad = gradient(rho)
        while True:
            cand = project_simplex_rate(rho - step * grad, r, R_Q)
            Fc = objective(cand)
            if Fc < F or step < 1e-16:
                break
            step /= 2
        if Fc >= F:
            break
        moved = np.abs(cand - rho).max()
        improvement = F - Fc
        rho, F = cand, Fc
        history.append(F)
        step *= 2
        if moved < 1e-8 or improvement < 1e-10:
            break

    # drop residues left by the iterative projection, then restore the equalities on the support
    support = rho > WEIGHT_FLOOR
    if not support.all():
        try:
            snapped = np.zeros(Q)
            snapped[support] = project_simplex_rate(rho[support], r[support], R_Q)
            rho = snapped
        except ValueError:
            pass  # the residues are needed to meet the rate; keep them
    e = b - A @ rho
    gap = float(e.min())
    if gap < margin - 1e-6:
        raise InfeasibleError(f"descent ended outside the open-tunnel region (gap {gap:.4g})", gap)
    return Optimum(WeightVector(np.minimum(rho, 1.0), r), float((e**2).sum()), gap, history)


# --- frames -------------------------------------------------------------------


def partition_frame(w, N, ns):
    """Split N coded qubits into per-subcode segments of whole trellis steps.

    Returns [(q, length)] for the active subcodes in bank order.
    """
    ns = [int(v) for v in ns]
    active = [q for q in range(len(ns)) if w.rho[q] > 0]
    if not active:
        raise SizingError("no active subcode")
    target = {q: w.rho[q] * N / ns[q] for q in active}
    blocks = {q: int(np.floor(target[q] + 1e-9)) for q in active}
    deficit = N - sum(blocks[q] * ns[q] for q in active)
    order = sorted(active, key=lambda q: (-(target[q] - blocks[q]), q))

    # smallest set of extra steps (largest remainder first) that fills the deficit exactly
    def fill(d):
        best = {0: []}
        for _ in range(d):
            nxt = dict(best)
            for total, used in best.items():
                for q in order:
                    t = total + ns[q]
                    if t <= d and t not in nxt:
                        nxt[t] = used + [q]
            if nxt == best:
                break
            best = nxt
            if d in best:
                break
        return best.get(d)

    extra = fill(deficit) if deficit >= 0 else None
    if extra is None:
        # give back one step of some subcode and retry
        for q in order[::-1]:
            if blocks[q] > 0:
                extra = fill(deficit + ns[q])
                if extra is not None:
                    blocks[q] -= 1
                    break
    if extra is None:
        raise SizingError(f"cannot split {N} qubits into whole steps of lengths {[ns[q] for q in active]}")
    for q in extra:
        blocks[q] += 1
    if any(blocks[q] == 0 for q in active):
        raise SizingError(f"frame of {N} qubits is too short for every active subcode")
    return [(q, blocks[q] * ns[q]) for q in active]


@dataclass(frozen=True, eq=False)
class IrregularCode:
    """Concatenation in time of independent subcode segments."""

    segments: tuple  # ((q, ConvolutionalCode), ...)

    @classmethod
    def build(cls, bank, w, N):
        parts = partition_frame(w, N, [s.n for s in bank.seeds])
        return cls(tuple((q, ConvolutionalCode(bank.seeds[q], length // bank.seeds[q].n)) for q, length in parts))

    @property
    def n_physical(self):
        return sum(c.n_physical for _, c in self.segments)

    @property
    def n_logical(self):
        return sum(c.n_logical for _, c in self.segments)

    @property
    def rate(self):
        return Fraction(self.n_logical, self.n_physical)

    def _bounds(self):
        p = lo = 0
        for _, c in self.segments:
            yield slice(p, p + c.n_physical), slice(lo, lo + c.n_logical)
            p += c.n_physical
            lo += c.n_logical

    def split(self, physical):
        logical, synds = [], []
        for (_, c), (sp, _) in zip(self.segments, self._bounds()):
            L, s = c.split(physical[sp])
            logical.append(L)
            synds.append(s)
        return np.concatenate(logical), synds

    def siso(self, prior_P, prior_L, synds):
        outs = []
        for i, ((q, c), (sp, sl), s) in enumerate(zip(self.segments, self._bounds(), synds)):
            try:
                outs.append(c.siso(prior_P[sp], prior_L[sl], s))
            except DecodeFailure as exc:
                exc.segment = i
                raise
        return SisoOutput(*(np.concatenate(parts) for parts in zip(*outs)))


def qircc_siso(bank, w, prior_P, prior_L, synds):
    code = IrregularCode.build(bank, w, len(prior_P))
    return code.siso(prior_P, prior_L, synds)
