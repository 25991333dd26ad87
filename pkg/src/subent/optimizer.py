"""Minimization of the ensemble entropy over extremal decompositions.

Decompositions of a rank-r state into n pure pieces are in bijection with
n x r isometries acting on the eigen-ensemble (see decomp.mixer_ensemble),
so the search space is the complex Stiefel manifold.  Isometries are
parametrized by Givens-rotation/phase angles plus column phases, and the
objective is minimized by multistart Nelder-Mead simplex descent with
deterministic per-restart seeding.  The inner loop is numba-compiled;
restart seeds come from a counter-based generator so runs are
reproducible bit for bit.

The module also carries the one-angle machinery for d = 3
permutation-invariant states: the scan of the cyclic-orbit objective over
its generating angle, location of the symmetry-breaking bifurcation in
fidelity, and a convexity profile for fidelity sweeps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numba import njit

from .decomp import ExtremalDecomposition, eigen_ensemble
from .errors import DomainError, FOutOfRange, NoBracket, NonUniformGrid, RankMismatch
from .qstate import DensityMatrix, SubalgebraSpec, as_matrix

# ---------------------------------------------------------------------------
# mixer parametrization
# ---------------------------------------------------------------------------


def givens_pairs(n: int, r: int) -> np.ndarray:
    """Row-index pairs (k, i), k < i, eliminating column k at row i."""
    out = [(k, i) for k in range(r) for i in range(k + 1, n)]
    return np.asarray(out, dtype=np.int64).reshape(-1, 2)


def parameter_count(n: int, r: int) -> int:
    """2 angles per Givens pair plus one phase per column: dim of the Stiefel manifold."""
    return 2 * (n * r - r * (r + 1) // 2) + r


@njit(cache=True)
def _build_mixer(params, n, r, pairs):
    m = np.zeros((n, r), dtype=np.complex128)
    npairs = pairs.shape[0]
    for k in range(r):
        ph = params[2 * npairs + k]
        m[k, k] = complex(np.cos(ph), np.sin(ph))
    idx = 2 * npairs - 2
    for q in range(npairs - 1, -1, -1):
        k = pairs[q, 0]
        i = pairs[q, 1]
        c = np.cos(params[idx])
        sn = np.sin(params[idx])
        ph = params[idx + 1]
        e_neg = complex(np.cos(ph), -np.sin(ph))
        e_pos = complex(np.cos(ph), np.sin(ph))
        for col in range(r):
            a = m[k, col]
            b = m[i, col]
            m[k, col] = c * a - e_neg * sn * b
            m[i, col] = e_pos * sn * a + c * b
        idx -= 2
    return m


def mixer_from_angles(params, n: int, r: int) -> np.ndarray:
    """Isometry built from Givens/phase angles; surjective onto n x r isometries."""
    params = np.ascontiguousarray(params, dtype=float)
    pairs = givens_pairs(n, r)
    if params.shape[0] != parameter_count(n, r):
        raise RankMismatch(
            f"{params.shape[0]} parameters, expected {parameter_count(n, r)} for {n}x{r}"
        )
    return _build_mixer(params, n, r, pairs)


# ---------------------------------------------------------------------------
# jitted objective and simplex descent
# ---------------------------------------------------------------------------


@njit(cache=True)
def _ensemble_entropy(params, basis, pairs, n, r, d_a, d_b, factor_mode):
    # basis: d x r columns eigvec_k * sqrt(mu_k); u_j = basis @ mixer[j, :]
    m = _build_mixer(params, n, r, pairs)
    d = basis.shape[0]
    total = 0.0
    u = np.empty(d, dtype=np.complex128)
    for j in range(n):
        for i in range(d):
            acc = complex(0.0, 0.0)
            for k in range(r):
                acc += basis[i, k] * m[j, k]
            u[i] = acc
        w = 0.0
        for i in range(d):
            w += u[i].real * u[i].real + u[i].imag * u[i].imag
        if w < 1e-15:
            continue
        if factor_mode:
            a = u.reshape(d_a, d_b)
            if d_a <= d_b:
                g = a @ a.conj().T
            else:
                g = a.conj().T @ a
            ev = np.linalg.eigvalsh(g)
            for i in range(ev.shape[0]):
                p = ev[i] / w
                if p > 1e-300:
                    total -= w * p * np.log(p)
        else:
            for i in range(d):
                p = (u[i].real * u[i].real + u[i].imag * u[i].imag) / w
                if p > 1e-300:
                    total -= w * p * np.log(p)
    return total


@njit(cache=True)
def _nelder_mead(x0, basis, pairs, n, r, d_a, d_b, factor_mode, maxiter, xatol, fatol, delta):
    npar = x0.shape[0]
    if npar > 8:
        # dimension-adaptive expansion/contraction/shrink coefficients
        chi = 1.0 + 2.0 / npar
        gamma = 0.75 - 1.0 / (2.0 * npar)
        sigma = 1.0 - 1.0 / npar
    else:
        chi = 2.0
        gamma = 0.5
        sigma = 0.5

    sim = np.empty((npar + 1, npar))
    fsim = np.empty(npar + 1)
    sim[0] = x0
    fsim[0] = _ensemble_entropy(x0, basis, pairs, n, r, d_a, d_b, factor_mode)
    for k in range(npar):
        y = x0.copy()
        if y[k] != 0.0:
            y[k] *= 1.0 + delta
        else:
            y[k] = 0.005 * delta
        sim[k + 1] = y
        fsim[k + 1] = _ensemble_entropy(y, basis, pairs, n, r, d_a, d_b, factor_mode)
    nfev = npar + 1

    it = 0
    hit_tol = False
    while it < maxiter:
        it += 1
        order = np.argsort(fsim)
        sim = sim[order]
        fsim = fsim[order]

        max_df = 0.0
        max_dx = 0.0
        for k in range(1, npar + 1):
            df = abs(fsim[k] - fsim[0])
            if df > max_df:
                max_df = df
            for jj in range(npar):
                dx = abs(sim[k, jj] - sim[0, jj])
                if dx > max_dx:
                    max_dx = dx
        if max_df <= fatol and max_dx <= xatol:
            hit_tol = True
            break

        xbar = np.zeros(npar)
        for k in range(npar):
            for jj in range(npar):
                xbar[jj] += sim[k, jj]
        xbar /= npar

        xr = 2.0 * xbar - sim[npar]
        fxr = _ensemble_entropy(xr, basis, pairs, n, r, d_a, d_b, factor_mode)
        nfev += 1
        shrink = False
        if fxr < fsim[0]:
            xe = (1.0 + chi) * xbar - chi * sim[npar]
            fxe = _ensemble_entropy(xe, basis, pairs, n, r, d_a, d_b, factor_mode)
            nfev += 1
            if fxe < fxr:
                sim[npar] = xe
                fsim[npar] = fxe
            else:
                sim[npar] = xr
                fsim[npar] = fxr
        elif fxr < fsim[npar - 1]:
            sim[npar] = xr
            fsim[npar] = fxr
        elif fxr < fsim[npar]:
            xc = (1.0 + gamma) * xbar - gamma * sim[npar]
            fxc = _ensemble_entropy(xc, basis, pairs, n, r, d_a, d_b, factor_mode)
            nfev += 1
            if fxc <= fxr:
                sim[npar] = xc
                fsim[npar] = fxc
            else:
                shrink = True
        else:
            xcc = (1.0 - gamma) * xbar + gamma * sim[npar]
            fxcc = _ensemble_entropy(xcc, basis, pairs, n, r, d_a, d_b, factor_mode)
            nfev += 1
            if fxcc < fsim[npar]:
                sim[npar] = xcc
                fsim[npar] = fxcc
            else:
                shrink = True
        if shrink:
            for k in range(1, npar + 1):
                sim[k] = sim[0] + sigma * (sim[k] - sim[0])
                fsim[k] = _ensemble_entropy(sim[k], basis, pairs, n, r, d_a, d_b, factor_mode)
            nfev += npar

    order = np.argsort(fsim)
    return sim[order[0]], fsim[order[0]], nfev, it, hit_tol


# ---------------------------------------------------------------------------
# configuration and result types
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class OptimizerConfig:
    """Knobs for minimize_objective.

    length is the ensemble size (defaults to d^2, the worst-case optimal
    length; anything down to the state rank is admissible).  max_iters is
    the per-restart simplex iteration budget (0 picks a dimension-scaled
    default).  Restart j is seeded with Philox(key=seed + j).
    """

    length: int = 0         # 0 = default d^2
    restarts: int = 32
    seed: int = 0
    tol: float = 1e-9
    max_iters: int = 0      # 0 = auto

    def __post_init__(self):
        if self.length < 0:
            raise DomainError(f"length {self.length} must be >= 1 (or 0 for default)")
        if self.restarts < 1:
            raise DomainError(f"restarts {self.restarts} must be >= 1")
        if not self.tol > 0:
            raise DomainError(f"tol {self.tol} must be positive")


@dataclass(frozen=True)
class OptimizationResult:
    value: float
    decomposition: ExtremalDecomposition
    converged: bool
    restart_spread: float
    best_restart: int = 0
    evaluations: int = 0
    restart_values: tuple = field(default_factory=tuple)


DEFAULT_CONFIG = OptimizerConfig()


def minimize_objective(rho, sub: SubalgebraSpec, cfg: OptimizerConfig | None = None) -> OptimizationResult:
    """Best extremal decomposition found for the ensemble-entropy objective.

    Runs cfg.restarts independent simplex descents from random angle
    vectors (restart j seeded with Philox(key=cfg.seed + j)), each polished
    by re-descending from its best point until the value stops improving.
    Ties within cfg.tol are broken by the lowest restart index.  The
    objective is nonnegative, so restarts stop early once a value at or
    below cfg.tol is found.  converged reflects whether any restart
    terminated inside the simplex tolerances rather than on the iteration
    budget.
    """
    cfg = cfg or DEFAULT_CONFIG
    m = as_matrix(rho)
    d = m.shape[0]
    sub.check_dim(d)

    mu, vecs = eigen_ensemble(m)
    r = len(mu)
    n = cfg.length if cfg.length else d * d
    if n < r:
        raise RankMismatch(f"ensemble length {n} below state rank {r}")

    basis = np.ascontiguousarray(vecs * np.sqrt(mu))
    pairs = givens_pairs(n, r)
    npar = parameter_count(n, r)
    factor_mode = sub.kind == "factor_a"
    d_a = sub.d_a if factor_mode else 1
    d_b = sub.d_b if factor_mode else 1

    round_cap = max(2000, 700 * npar)
    budget = cfg.max_iters if cfg.max_iters else 8 * round_cap
    fatol = min(cfg.tol, 1e-12)
    xatol = 1e-10
    kicks = 4 if npar > 40 else 0   # stall-escape perturbations, large searches only

    def run_restart(restart_index):
        # one multi-round descent; rounds rebuild the simplex at the best
        # point seen, and stalls on large problems get a random-angle kick
        rng = np.random.Generator(np.random.Philox(key=cfg.seed + restart_index))
        x = rng.uniform(0.0, 2.0 * math.pi, npar)
        fx = math.inf
        best_x = x
        kicks_left = kicks
        left = budget
        nfev_total = 0
        any_tol = False
        while left > 0:
            x, fnew, nfev, used, hit_tol = _nelder_mead(
                x, basis, pairs, n, r, d_a, d_b, factor_mode,
                min(left, round_cap), xatol, fatol, 0.05,
            )
            nfev_total += nfev
            left -= max(used, 1)
            any_tol = any_tol or hit_tol
            # progress smaller than 1e-5 of the value is a plateau
            improved = fnew < fx - max(1e-14, 1e-5 * abs(fnew))
            if fnew < fx:
                fx = fnew
                best_x = x
            if not improved:
                if kicks_left <= 0:
                    break
                kicks_left -= 1
                x = best_x + rng.normal(0.0, 0.3, npar)
        return fx, best_x, nfev_total, any_tol

    values = []
    best_value = math.inf
    best_params = None
    converged = False
    total_nfev = 0

    for j in range(cfg.restarts):
        fx, x, nfev, any_tol = run_restart(j)
        total_nfev += nfev
        converged = converged or any_tol
        values.append(fx)
        if fx < best_value:
            best_value = fx
            best_params = x
        if best_value <= cfg.tol:
            break  # objective is >= 0: already within tol of the infimum

    values_arr = np.asarray(values)
    winner = int(np.flatnonzero(values_arr <= values_arr.min() + cfg.tol)[0])
    if winner != int(np.argmin(values_arr)):
        # tie within tol: re-derive the winning parameters deterministically
        best_value, best_params, _, _ = run_restart(winner)

    from .decomp import mixer_ensemble

    mixer = _build_mixer(np.ascontiguousarray(best_params), n, r, pairs)
    dec = mixer_ensemble(m, mixer)
    return OptimizationResult(
        value=float(best_value),
        decomposition=dec,
        converged=converged,
        restart_spread=float(values_arr.max() - values_arr.min()),
        best_restart=winner,
        evaluations=total_nfev,
        restart_values=tuple(float(v) for v in values_arr),
    )


# ---------------------------------------------------------------------------
# one-angle scan for d = 3 permutation-invariant states
# ---------------------------------------------------------------------------

ORBIT_PERIOD = 2 * math.pi / 3   # cyclic shifts make the profile 2pi/3-periodic
THETA_MERGE = 1e-6
VALUE_MERGE = 1e-9


def orbit_objective(F: float, thetas) -> np.ndarray:
    """Ensemble entropy of the cyclic orbit generated at each angle."""
    if F < -1e-12 or F > 1 + 1e-12:
        raise FOutOfRange(f"fidelity {F!r} outside [0, 1]")
    F = min(max(F, 0.0), 1.0)
    t = np.atleast_1d(np.asarray(thetas, dtype=float))
    a = math.sqrt(3 * F)
    b = math.sqrt(1.5 * (1 - F))
    w = np.stack(
        [
            a + 2 * b * np.cos(t),
            a - 2 * b * np.cos(t - math.pi / 3),
            a - 2 * b * np.cos(t + math.pi / 3),
        ]
    ) / 3.0
    q = w * w
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(q > 0.0, -q * np.log(np.where(q > 0.0, q, 1.0)), 0.0)
    return terms.sum(axis=0)


def _golden_section(f, lo: float, hi: float, xtol: float = 1e-10):
    """Minimize f on [lo, hi]; returns (x, f(x)) at the interval midpoint."""
    invphi = (math.sqrt(5.0) - 1) / 2
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    while b - a > xtol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    x = (a + b) / 2
    return x, f(x)


@dataclass(frozen=True)
class ThetaProfile:
    """Scan of the orbit objective over the generating angle."""

    fidelity: float
    grid: np.ndarray
    values: np.ndarray
    minima: tuple     # ((theta, value), ...) global minimizers in [0, 2pi)

    @property
    def min_value(self) -> float:
        return self.minima[0][1]

    @property
    def minimizers(self) -> tuple:
        return tuple(t for t, _ in self.minima)

    def minimizers_mod_symmetry(self, period: float = ORBIT_PERIOD, tol: float = THETA_MERGE) -> tuple:
        """Distinct minimizing angles reduced modulo the orbit period."""
        reduced = sorted(t % period for t in self.minimizers)
        out = []
        for t in reduced:
            if out and (t - out[-1] <= tol or (period - t) + out[0] <= tol):
                continue
            out.append(t)
        return tuple(out)


def theta_scan(F: float, grid_size: int = 360) -> ThetaProfile:
    """Scan the orbit objective on a uniform angle grid and refine its minima.

    Each local minimum bracket is refined by golden section to 1e-10 in
    the angle; minimizers closer than 1e-6 are merged and only those whose
    value ties the global minimum within 1e-9 are reported.
    """
    if grid_size < 16:
        raise DomainError(f"grid_size {grid_size} below 16")
    if F < -1e-12 or F > 1 + 1e-12:
        raise FOutOfRange(f"fidelity {F!r} outside [0, 1]")
    F = min(max(F, 0.0), 1.0)

    grid = np.linspace(0.0, 2 * math.pi, grid_size, endpoint=False)
    values = orbit_objective(F, grid)

    if values.max() - values.min() < 1e-13:
        # flat profile (F = 1): a single representative minimum at theta = 0
        return ThetaProfile(F, grid, values, ((0.0, float(values[0])),))

    f = lambda t: float(orbit_objective(F, t)[0])
    h = 2 * math.pi / grid_size
    candidates = []
    for i in range(grid_size):
        left = values[i - 1]
        right = values[(i + 1) % grid_size]
        if values[i] <= left and values[i] <= right:
            t, v = _golden_section(f, grid[i] - h, grid[i] + h)
            candidates.append((t % (2 * math.pi), v))

    candidates.sort()
    merged = []
    for t, v in candidates:
        if merged and (t - merged[-1][0]) < THETA_MERGE:
            if v < merged[-1][1]:
                merged[-1] = (t, v)
            continue
        merged.append((t, v))
    if len(merged) > 1 and (2 * math.pi - merged[-1][0]) + merged[0][0] < THETA_MERGE:
        if merged[-1][1] < merged[0][1]:
            merged[0] = merged[-1]
        merged.pop()

    vmin = min(v for _, v in merged)
    minima = tuple((t, v) for t, v in merged if v <= vmin + VALUE_MERGE)
    return ThetaProfile(F, grid, values, minima)


def s_of_f(F: float, grid_size: int = 360):
    """Minimum of the orbit objective over the angle; returns (value, minimizers)."""
    profile = theta_scan(F, grid_size)
    return profile.min_value, list(profile.minimizers)


def _has_symmetric_minimizer(F: float, tol: float = 1e-5) -> bool:
    _, thetas = s_of_f(F)
    for t in thetas:
        t_mod = t % ORBIT_PERIOD
        if min(t_mod, ORBIT_PERIOD - t_mod) <= tol:
            return True
    return False


def find_bifurcation(f_lo: float, f_hi: float, tol_f: float = 1e-5) -> float:
    """Bisection on "the scan has a minimizer at theta = 0 (mod 2pi/3)".

    Locates the fidelity where the symmetric single-orbit minimizer splits
    into an asymmetric pair.  Raises NoBracket when both endpoints agree.
    """
    if not f_lo < f_hi:
        raise NoBracket(f"invalid bracket [{f_lo}, {f_hi}]")
    lo_sym = _has_symmetric_minimizer(f_lo)
    hi_sym = _has_symmetric_minimizer(f_hi)
    if lo_sym == hi_sym:
        raise NoBracket(
            f"predicate equal at both ends ({lo_sym}); no bifurcation in [{f_lo}, {f_hi}]"
        )
    lo, hi = f_lo, f_hi
    while hi - lo > tol_f:
        mid = 0.5 * (lo + hi)
        if _has_symmetric_minimizer(mid) == hi_sym:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def convexity_profile(f_grid, values) -> list[int]:
    """Indices where the centered second difference drops below -1e-9."""
    grid = np.asarray(f_grid, dtype=float).ravel()
    vals = np.asarray(values, dtype=float).ravel()
    if grid.shape != vals.shape or grid.shape[0] < 3:
        raise NonUniformGrid("need matching grids of at least 3 points")
    steps = np.diff(grid)
    if np.any(steps <= 0):
        raise NonUniformGrid("grid must be strictly increasing")
    h = steps[0]
    if np.max(np.abs(steps - h)) > 1e-8 * max(abs(h), 1e-30):
        raise NonUniformGrid("grid spacing is not uniform")
    d2 = vals[:-2] - 2 * vals[1:-1] + vals[2:]
    return [int(i) + 1 for i in np.flatnonzero(d2 < -1e-9)]
