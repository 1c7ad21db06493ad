"""Codebook constructors and optimizers.

Three families live here:

* the proposed sparse designs built on Schubert-cell sparsity patterns
  (a closed-form phase-only search when T = 2M, a parametric surrogate
  minimization otherwise),
* dense baselines: direct minimum-chordal-distance optimization on the
  product of Grassmannians (``optimize_manopt``) and the matrix-exponential
  map of QAM blocks (``build_expmap``),
* the two embedded (T, M) = (4, 2) reference tables (the normalized 5G NR
  rank-2 four-port codebook and the sparse counterpart), plus lossless JSON
  persistence.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .errors import (
    AlphabetExhausted,
    DimensionMismatch,
    InvalidConfig,
    NotStiefel,
    ParseError,
    TooFewCodewords,
)
from .grassmann import Codebook, Codeword, pairwise_gram_sq, validate_stiefel
from .linalg import _qr_positive, matexp_skew_hermitian
from .rng import substream
from .schubert import enumerate_patterns, matching_patterns, pair_codeword

#: phase quantization used by the standards-compatible discrete designs
QUARTER_GRID = (-np.pi / 2, 0.0, np.pi / 2, np.pi)

_DUPLICATE_TOL = 1e-6


def _wrap_phase(theta):
    """Wrap angles into (-pi, pi]."""
    th = np.asarray(theta, dtype=np.float64)
    w = th - 2 * np.pi * np.round(th / (2 * np.pi))
    return np.where(w <= -np.pi, np.pi, w)


@dataclass(frozen=True)
class PhaseAssignment:
    """One phase instance of a T = 2M sparsity pattern."""

    pattern_index: int
    thetas: tuple

    def __post_init__(self):
        object.__setattr__(
            self, "thetas", tuple(float(t) for t in _wrap_phase(self.thetas))
        )


@dataclass(frozen=True)
class OptimizerConfig:
    """Knobs shared by all iterative constructors.

    ``eps_schedule`` is the smoothing continuation for the log-sum-exp
    surrogate; it must be strictly decreasing and positive. ``phase_grid``
    switches the phase searches to a discrete alphabet.
    """

    eps_schedule: tuple = (1.0, 0.3, 0.1, 0.03, 0.01)
    max_iters: int = 300
    step_init: float = 1.0
    backtrack: float = 0.5
    restarts: int = 4
    seed: int = 0
    phase_grid: tuple | None = None
    expmap_scale: float = 0.5

    def __post_init__(self):
        eps = tuple(float(e) for e in self.eps_schedule)
        if not eps or any(e <= 0 for e in eps):
            raise InvalidConfig("eps_schedule must be nonempty and positive")
        if any(later >= earlier for earlier, later in zip(eps, eps[1:])):
            raise InvalidConfig("eps_schedule must be strictly decreasing")
        if self.max_iters < 1 or self.restarts < 1:
            raise InvalidConfig("max_iters and restarts must be >= 1")
        if not 0 < self.backtrack < 1:
            raise InvalidConfig("backtrack factor must lie in (0, 1)")
        if self.step_init <= 0 or self.expmap_scale <= 0:
            raise InvalidConfig("step_init and expmap_scale must be positive")
        grid = self.phase_grid
        if grid is not None:
            grid = tuple(float(g) for g in _wrap_phase(tuple(grid)))
            if len(set(grid)) != len(grid) or not grid:
                raise InvalidConfig("phase_grid must be nonempty without repeats")
        object.__setattr__(self, "eps_schedule", eps)
        object.__setattr__(self, "phase_grid", grid)


DEFAULT_CONFIG = OptimizerConfig()


# ---------------------------------------------------------------------------
# smooth surrogate for the minimum chordal distance
# ---------------------------------------------------------------------------

def _lse(z):
    m = float(np.max(z))
    return m + float(np.log(np.sum(np.exp(z - m))))


def smooth_mcd_objective(b: Codebook, epsilon: float) -> float:
    """log sum_{i<j} exp(-||Wi Wi^H - Wj Wj^H||_F / epsilon), stabilized."""
    if len(b) < 2:
        raise TooFewCodewords("surrogate needs at least two codewords")
    if epsilon <= 0:
        raise InvalidConfig("epsilon must be positive")
    stack = b.stack()
    s = pairwise_gram_sq(stack)
    iu, ju = np.triu_indices(len(b), k=1)
    d = np.sqrt(np.clip(2.0 * (b.M - s[iu, ju]), 0.0, None))
    return _lse(-d / epsilon)


def _surrogate_state(stack, eps):
    """Value, pair weights and distances of the surrogate at a Stiefel stack."""
    k, _, m = stack.shape
    gram = np.einsum("itm,jtn->ijmn", stack.conj(), stack)
    s = np.sum(np.abs(gram) ** 2, axis=(-2, -1))
    d = np.sqrt(np.clip(2.0 * (m - s), 0.0, None))
    iu, ju = np.triu_indices(k, 1)
    z = -d[iu, ju] / eps
    zmax = z.max()
    expz = np.exp(z - zmax)
    value = zmax + np.log(expz.sum())
    weights = np.zeros((k, k))
    weights[iu, ju] = expz / expz.sum()
    weights += weights.T
    return value, weights, d, gram, s


def _manopt_grad(stack, eps):
    """Surrogate value and Riemannian gradient on the product manifold."""
    value, weights, d, gram, s = _surrogate_state(stack, eps)
    coef = weights / (eps * np.maximum(d, 1e-12))
    np.fill_diagonal(coef, 0.0)
    rowsum = coef.sum(axis=1)
    # euclidean Wirtinger gradient: -(1/eps) sum_j w/d * (W_k - W_j (W_j^H W_k))
    term = np.einsum("kj,jtm,jkmn->ktn", coef, stack, gram)
    egrad = term - stack * rowsum[:, None, None]
    inner = np.einsum("ktm,ktn->kmn", stack.conj(), egrad)
    rgrad = egrad - np.einsum("ktm,kmn->ktn", stack, inner)
    return value, rgrad, s


def _mcd_from_gram_sq(s, m):
    k = s.shape[0]
    iu, ju = np.triu_indices(k, 1)
    return float(np.sqrt(max(0.0, m - float(s[iu, ju].max()))))


def optimize_manopt(t: int, m: int, size: int, cfg: OptimizerConfig = None) -> Codebook:
    """Riemannian descent of the smooth MCD surrogate on G(T, M)^size.

    Projected gradient with QR retraction and the epsilon continuation
    schedule; best of ``cfg.restarts`` random initializations by final MCD.
    The returned codebook is the best-MCD iterate seen, so its MCD never
    falls below that of its own initialization.
    """
    cfg = cfg or DEFAULT_CONFIG
    if size < 2 or not 1 <= m < t:
        raise InvalidConfig(f"need size >= 2 and 1 <= M < T, got {(t, m, size)}")
    best_mcd, best_stack = -1.0, None
    for r in range(cfg.restarts):
        rng = substream(cfg.seed, 0xA11, r)
        g = rng.standard_normal((size, t, m)) + 1j * rng.standard_normal((size, t, m))
        stack = _qr_positive(g)
        _, _, s = _manopt_grad(stack, cfg.eps_schedule[0])
        mcd = _mcd_from_gram_sq(s, m)
        if mcd > best_mcd:
            best_mcd, best_stack = mcd, stack.copy()
        for eps in cfg.eps_schedule:
            step = cfg.step_init
            value, rgrad, _ = _manopt_grad(stack, eps)
            stall = 0
            for _ in range(cfg.max_iters):
                gnorm2 = float(np.sum(np.abs(rgrad) ** 2))
                if gnorm2 < 1e-24:
                    break
                accepted = False
                while step > 1e-14:
                    cand = _qr_positive(stack - step * rgrad)
                    cand_value, cand_rgrad, cand_s = _manopt_grad(cand, eps)
                    if cand_value <= value - 1e-4 * step * gnorm2:
                        accepted = True
                        break
                    step *= cfg.backtrack
                if not accepted:
                    break
                stall = stall + 1 if value - cand_value < 1e-13 else 0
                stack, value, rgrad = cand, cand_value, cand_rgrad
                mcd = _mcd_from_gram_sq(cand_s, m)
                if mcd > best_mcd:
                    best_mcd, best_stack = mcd, stack.copy()
                step = min(step * 1.5, 100.0)
                if stall >= 3:
                    break
    meta = {
        "method": "manopt",
        "T": t,
        "M": m,
        "size": size,
        "seed": cfg.seed,
        "restarts": cfg.restarts,
        "eps_schedule": list(cfg.eps_schedule),
        "mcd": best_mcd,
    }
    return Codebook(tuple(Codeword(w) for w in best_stack), meta)


# ---------------------------------------------------------------------------
# phase-only search for the T = 2M family
# ---------------------------------------------------------------------------

def _phase_objective(th):
    """Pairwise matrix of sum_m sin^2((theta_i,m - theta_j,m)/2)."""
    diff = th[:, None, :] - th[None, :, :]
    return np.sum(np.sin(diff / 2.0) ** 2, axis=-1), diff


def _phase_min(th):
    f, _ = _phase_objective(th)
    k = th.shape[0]
    iu, ju = np.triu_indices(k, 1)
    return float(f[iu, ju].min())


def _optimize_phases_continuous(m, ell, cfg):
    best_val, best_th = -1.0, np.zeros((ell, m))
    for r in range(cfg.restarts):
        rng = substream(cfg.seed, 0xBEE, r)
        th = rng.uniform(-np.pi, np.pi, size=(ell, m))
        th[0] = 0.0  # gauge: first instance pinned, distances use differences only
        for eps in cfg.eps_schedule:
            step = cfg.step_init
            for _ in range(cfg.max_iters):
                f, diff = _phase_objective(th)
                iu, ju = np.triu_indices(ell, 1)
                z = -f[iu, ju] / eps
                zmax = z.max()
                expz = np.exp(z - zmax)
                value = zmax + np.log(expz.sum())
                weights = np.zeros((ell, ell))
                weights[iu, ju] = expz / expz.sum()
                weights += weights.T
                grad = -(0.5 / eps) * np.einsum("ij,ijm->im", weights, np.sin(diff))
                grad[0] = 0.0
                gnorm2 = float(np.sum(grad**2))
                if gnorm2 < 1e-24:
                    break
                accepted = False
                while step > 1e-14:
                    cand = th - step * grad
                    cand[0] = 0.0
                    fc, _ = _phase_objective(cand)
                    zc = -fc[iu, ju] / eps
                    zcm = zc.max()
                    cand_value = zcm + np.log(np.sum(np.exp(zc - zcm)))
                    if cand_value <= value - 1e-4 * step * gnorm2:
                        accepted = True
                        break
                    step *= cfg.backtrack
                if not accepted:
                    break
                th = cand
                step = min(step * 1.5, 100.0)
        val = _phase_min(th)
        if val > best_val + 1e-15:
            best_val, best_th = val, th.copy()
    return best_th


def _grid_points(grid, m):
    pts = np.array(list(itertools.product(grid, repeat=m)))
    f = np.sum(np.sin((pts[:, None, :] - pts[None, :, :]) / 2.0) ** 2, axis=-1)
    return pts, f


def _is_cyclic_grid(grid):
    g = np.sort(_wrap_phase(np.asarray(grid)))
    if g.size < 2:
        return True
    gaps = np.diff(np.concatenate([g, [g[0] + 2 * np.pi]]))
    return bool(np.allclose(gaps, 2 * np.pi / g.size, atol=1e-12))


def _greedy_subset(f, ell, start):
    chosen = [start]
    mind = np.full(f.shape[0], np.inf)
    while len(chosen) < ell:
        mind = np.minimum(mind, f[chosen[-1]])
        mind[chosen] = -np.inf
        chosen.append(int(np.argmax(mind)))
    return chosen


def _subset_min(f, idx):
    sub = f[np.ix_(idx, idx)]
    return float(sub[np.triu_indices(len(idx), 1)].min())


def _clique_of_size(adj, ell, fix_zero):
    """Lexicographically first clique of size ell, as a sorted index list."""
    n = len(adj)
    full = (1 << n) - 1

    def extend(chosen, cand):
        if len(chosen) == ell:
            return chosen
        c = cand
        while c:
            low = c & -c
            v = low.bit_length() - 1
            c ^= low
            if len(chosen) + 1 + bin(c & adj[v]).count("1") < ell:
                continue
            got = extend(chosen + [v], c & adj[v])
            if got:
                return got
        return None

    if fix_zero:
        return extend([0], adj[0])
    return extend([], full)


def _optimize_phases_discrete(m, ell, cfg):
    grid = cfg.phase_grid
    pts, f = _grid_points(grid, m)
    n = pts.shape[0]
    if ell > n:
        raise InvalidConfig(f"{ell} instances need more than the {n} grid points")
    if ell == 1:
        zero = np.nonzero(np.all(np.abs(pts) < 1e-12, axis=1))[0]
        return pts[zero[0] : zero[0] + 1] if zero.size else pts[:1]
    # exhaustive when the subset count is small, otherwise exact maximin via
    # descending-threshold clique search (greedy seeding gives a lower bound)
    if math.comb(n, ell) <= 300_000:
        iu, ju = np.triu_indices(ell, 1)
        best_val, best = -1.0, None
        for combo in itertools.combinations(range(n), ell):
            sub = f[np.ix_(combo, combo)]
            val = float(sub[iu, ju].min())
            if val > best_val + 1e-12:
                best_val, best = val, combo
        return pts[list(best)]
    best = _greedy_subset(f, ell, 0)
    best_val = _subset_min(f, best)
    fix_zero = _is_cyclic_grid(grid) and bool(np.all(np.abs(pts[0]) < 1e-12))
    values = np.unique(np.round(f[np.triu_indices(n, 1)], 12))[::-1]
    for t in values:
        if t <= best_val + 1e-12:
            break
        mask = f >= t - 1e-9
        np.fill_diagonal(mask, False)
        adj = [int(sum(1 << int(j) for j in np.nonzero(row)[0])) for row in mask]
        got = _clique_of_size(adj, ell, fix_zero)
        if got:
            best, best_val = sorted(got), t
            break
    return pts[list(best)]


def optimize_phases_2M(m: int, ell: int, cfg: OptimizerConfig = None) -> list:
    """Phase instances maximizing the minimum intra-pattern separation.

    Returns ``ell`` assignments of M phases each; the first instance is the
    all-zero gauge choice. Cross-pattern distances are phase-independent, so
    one optimized set serves every pattern.
    """
    cfg = cfg or DEFAULT_CONFIG
    if m < 2 or ell < 1:
        raise InvalidConfig(f"need M >= 2 and L >= 1, got M={m}, L={ell}")
    if ell == 1:
        th = np.zeros((1, m))
    elif cfg.phase_grid is not None:
        th = _optimize_phases_discrete(m, ell, cfg)
    else:
        th = _optimize_phases_continuous(m, ell, cfg)
    return [PhaseAssignment(0, tuple(row)) for row in th]


def build_sparse_2M(m: int, size: int, cfg: OptimizerConfig = None) -> Codebook:
    """Sparse codebook on G(2M, M) from the 1-factorization patterns.

    Each of the 2M - 1 patterns receives L = ceil(size / (2M - 1)) optimized
    phase instances (trailing patterns one fewer when size is not a
    multiple). Cross-pattern chordal distances are sqrt(M/2) by construction.
    """
    cfg = cfg or DEFAULT_CONFIG
    if m < 2 or size < 1:
        raise InvalidConfig(f"need M >= 2 and size >= 1, got M={m}, size={size}")
    patterns = matching_patterns(m)
    npat = len(patterns)
    ell = -(-size // npat)
    n_full = size - (ell - 1) * npat  # this many leading patterns carry L instances
    assignments = optimize_phases_2M(m, ell, cfg)
    words, used = [], []
    for pi, pat in enumerate(patterns):
        count = ell if pi < n_full else ell - 1
        for inst in range(count):
            words.append(pair_codeword(pat, assignments[inst].thetas))
            used.append(replace(assignments[inst], pattern_index=pi + 1))
    meta = {
        "method": "sparse2m",
        "T": 2 * m,
        "M": m,
        "size": size,
        "instances_per_pattern": ell,
        "seed": cfg.seed,
        "phase_grid": list(cfg.phase_grid) if cfg.phase_grid else None,
        "phases": [list(a.thetas) for a in assignments],
    }
    return Codebook(tuple(words), meta)


# ---------------------------------------------------------------------------
# general sparse construction (any T > M > 1)
# ---------------------------------------------------------------------------

def _general_stack(layout, phases):
    """Assemble the (size, T, M) stack for a phase matrix (size, s)."""
    size, t, m = len(layout["pattern"]), layout["T"], layout["M"]
    stack = np.zeros((size, t, m), dtype=np.complex128)
    vals = layout["amps"] * np.exp(1j * phases)
    stack[layout["widx"], layout["ridx"], layout["cidx"]] = vals
    return stack


def _general_layout(t, m, s, size, patterns):
    order = sorted(
        patterns,
        key=lambda p: (max(len(u) for u in p.supports) - min(len(u) for u in p.supports), p.supports),
    )
    chosen = [order[c % len(order)] for c in range(size)]
    widx, ridx, cidx, amps, free = [], [], [], [], []
    for w, pat in enumerate(chosen):
        for col, sup in enumerate(pat.supports):
            a = 1.0 / math.sqrt(len(sup))
            for k, row in enumerate(sup):
                widx.append(w)
                ridx.append(row - 1)
                cidx.append(col)
                amps.append(a)
                free.append(k > 0)  # pivot phases stay at the zero gauge
    # every pattern has exactly s entries, so the flat lists fold to (size, s)
    return {
        "T": t,
        "M": m,
        "pattern": chosen,
        "widx": np.array(widx).reshape(size, s),
        "ridx": np.array(ridx).reshape(size, s),
        "cidx": np.array(cidx).reshape(size, s),
        "amps": np.array(amps).reshape(size, s),
        "free": np.array(free, dtype=float).reshape(size, s),
    }


def _general_phase_grad(layout, phases, eps):
    stack = _general_stack(layout, phases)
    value, weights, d, gram, s = _surrogate_state(stack, eps)
    coef = weights / (eps * np.maximum(d, 1e-12))
    np.fill_diagonal(coef, 0.0)
    rowsum = coef.sum(axis=1)
    term = np.einsum("kj,jtm,jkmn->ktn", coef, stack, gram)
    egrad = term - stack * rowsum[:, None, None]
    # d/dtheta of F for W = amp * exp(j theta): -2 Im(conj(egrad) * W)
    gw = -2.0 * np.imag(
        egrad[layout["widx"], layout["ridx"], layout["cidx"]].conj()
        * stack[layout["widx"], layout["ridx"], layout["cidx"]]
    )
    gw = gw * layout["free"]
    return value, gw, s


def build_general_sparse(
    t: int,
    m: int,
    s: int,
    size: int,
    cfg: OptimizerConfig = None,
    patterns=None,
) -> Codebook:
    """Sparse codebook for arbitrary T > M > 1 and sparsity level s.

    Patterns are taken round-robin, most balanced column supports first (so
    s = 2M with T = 2M picks exactly the perfect-matching family), and the
    per-entry phases are tuned with the same smoothed min-distance surrogate
    used by the dense optimizer. Amplitudes stay equal within each column.
    """
    cfg = cfg or DEFAULT_CONFIG
    if not (t > m > 1) or not m <= s <= t or size < 2:
        raise InvalidConfig(f"need T > M > 1, M <= s <= T, size >= 2, got {(t, m, s, size)}")
    if patterns is None:
        patterns = enumerate_patterns(t, m, s)
    else:
        patterns = [p.to_sparsity() if hasattr(p, "to_sparsity") else p for p in patterns]
        if any(p.size != s or p.T != t or p.M != m for p in patterns):
            raise InvalidConfig("explicit patterns must match (T, M, s)")
    layout = _general_layout(t, m, s, size, patterns)
    free = layout["free"]

    def exact_mcd(phases):
        stack = _general_stack(layout, phases)
        return _mcd_from_gram_sq(pairwise_gram_sq(stack), m)

    best_val, best_ph = -1.0, np.zeros((size, s))
    for r in range(cfg.restarts):
        rng = substream(cfg.seed, 0xF0B, r)
        ph = rng.uniform(-np.pi, np.pi, size=(size, s)) * free if r else np.zeros((size, s))
        for eps in cfg.eps_schedule:
            step = cfg.step_init
            value, grad, _ = _general_phase_grad(layout, ph, eps)
            for _ in range(cfg.max_iters):
                gnorm2 = float(np.sum(grad**2))
                if gnorm2 < 1e-24:
                    break
                accepted = False
                while step > 1e-14:
                    cand = ph - step * grad
                    cand_value, cand_grad, _ = _general_phase_grad(layout, cand, eps)
                    if cand_value <= value - 1e-4 * step * gnorm2:
                        accepted = True
                        break
                    step *= cfg.backtrack
                if not accepted:
                    break
                ph, value, grad = cand, cand_value, cand_grad
                step = min(step * 1.5, 100.0)
        val = exact_mcd(ph)
        if val > best_val + 1e-15:
            best_val, best_ph = val, ph.copy()
    if cfg.phase_grid is not None:
        best_ph = _snap_to_grid(best_ph, cfg.phase_grid, free, exact_mcd)
        best_val = exact_mcd(best_ph)
    stack = _general_stack(layout, best_ph)
    meta = {
        "method": "sparse-general",
        "T": t,
        "M": m,
        "s": s,
        "size": size,
        "seed": cfg.seed,
        "phase_grid": list(cfg.phase_grid) if cfg.phase_grid else None,
        "mcd": best_val,
    }
    return Codebook(tuple(Codeword(w) for w in stack), meta)


def _snap_to_grid(phases, grid, free, exact_mcd):
    """Snap to the grid, then coordinate-ascent on the exact MCD."""
    g = np.asarray(grid)
    idx = np.argmin(np.abs(_wrap_phase(phases[..., None] - g)), axis=-1)
    ph = g[idx] * free
    best = exact_mcd(ph)
    improved = True
    passes = 0
    while improved and passes < 50:
        improved = False
        passes += 1
        for w, e in np.argwhere(free):
            cur = ph[w, e]
            for cand in g:
                if cand == cur:
                    continue
                ph[w, e] = cand
                val = exact_mcd(ph)
                if val > best + 1e-12:
                    best, cur, improved = val, cand, True
                else:
                    ph[w, e] = cur
    return ph


# ---------------------------------------------------------------------------
# exponential-map baseline
# ---------------------------------------------------------------------------

def expmap_codeword(theta: np.ndarray) -> Codeword:
    """Point exp([[0, Theta], [-Theta^H, 0]]) I_{T,M} for an M x (T-M) block."""
    th = np.asarray(theta, dtype=np.complex128)
    m, rest = th.shape
    t = m + rest
    a = np.zeros((t, t), dtype=np.complex128)
    a[:m, m:] = th
    a[m:, :m] = -th.conj().T
    return Codeword(matexp_skew_hermitian(a)[:, :m])


def build_expmap(t: int, m: int, size: int, cfg: OptimizerConfig = None) -> Codebook:
    """Exponential-map codebook with 4-QAM blocks, duplicate draws rejected."""
    cfg = cfg or DEFAULT_CONFIG
    if size < 2 or not 1 <= m < t:
        raise InvalidConfig(f"need size >= 2 and 1 <= M < T, got {(t, m, size)}")
    capacity = 4 ** (m * (t - m))
    if size > capacity:
        raise AlphabetExhausted(f"size {size} exceeds the {capacity} distinct QAM blocks")
    rng = substream(cfg.seed, 0xE1)
    words = []
    attempts = 0
    limit = max(1000, 200 * size)
    while len(words) < size:
        attempts += 1
        if attempts > limit:
            raise AlphabetExhausted(f"could not draw {size} distinct codewords")
        q = rng.integers(0, 4, size=(m, t - m))
        re = 1.0 - 2.0 * (q % 2)
        im = 1.0 - 2.0 * (q // 2)
        theta = cfg.expmap_scale * (re + 1j * im) / np.sqrt(2.0)
        cand = expmap_codeword(theta)
        dup = any(
            np.sqrt(max(0.0, m - np.sum(np.abs(w.matrix.conj().T @ cand.matrix) ** 2)))
            < _DUPLICATE_TOL
            for w in words
        )
        if not dup:
            words.append(cand)
    meta = {
        "method": "expmap",
        "T": t,
        "M": m,
        "size": size,
        "seed": cfg.seed,
        "scale": cfg.expmap_scale,
    }
    return Codebook(tuple(words), meta)


# ---------------------------------------------------------------------------
# embedded (4, 2) reference tables
# ---------------------------------------------------------------------------

_J = 1j

# normalized 5G NR four-port rank-2 table (22 entries); scale tag: 1, s=1/sqrt2, h=1/2
_NR_42 = [
    ("1", [[1, 0], [0, 1], [0, 0], [0, 0]]),
    ("1", [[1, 0], [0, 0], [0, 1], [0, 0]]),
    ("1", [[1, 0], [0, 0], [0, 0], [0, 1]]),
    ("1", [[0, 0], [1, 0], [0, 1], [0, 0]]),
    ("1", [[0, 0], [1, 0], [0, 0], [0, 1]]),
    ("1", [[0, 0], [0, 0], [1, 0], [0, 1]]),
    ("s", [[1, 0], [0, 1], [1, 0], [0, -_J]]),
    ("s", [[1, 0], [0, 1], [1, 0], [0, _J]]),
    ("s", [[1, 0], [0, 1], [-_J, 0], [0, 1]]),
    ("s", [[1, 0], [0, 1], [-_J, 0], [0, -1]]),
    ("s", [[1, 0], [0, 1], [-1, 0], [0, -_J]]),
    ("s", [[1, 0], [0, 1], [-1, 0], [0, _J]]),
    ("s", [[1, 0], [0, 1], [_J, 0], [0, 1]]),
    ("s", [[1, 0], [0, 1], [_J, 0], [0, -1]]),
    ("h", [[1, 1], [1, 1], [1, -1], [1, -1]]),
    ("h", [[1, 1], [1, 1], [_J, -_J], [_J, -_J]]),
    ("h", [[1, 1], [_J, _J], [1, -1], [_J, -_J]]),
    ("h", [[1, 1], [_J, _J], [_J, -_J], [-1, 1]]),
    ("h", [[1, 1], [-1, -1], [1, -1], [-1, 1]]),
    ("h", [[1, 1], [-1, -1], [_J, -_J], [-_J, _J]]),
    ("h", [[1, 1], [-_J, -_J], [1, -1], [-_J, _J]]),
    ("h", [[1, 1], [-_J, -_J], [_J, -_J], [1, -1]]),
]

# sparse counterpart: six 2-sparse selections plus sixteen matching-pattern entries
_PROP_42 = [
    ("1", [[1, 0], [0, 1], [0, 0], [0, 0]]),
    ("1", [[1, 0], [0, 0], [0, 1], [0, 0]]),
    ("1", [[1, 0], [0, 0], [0, 0], [0, 1]]),
    ("1", [[0, 0], [1, 0], [0, 1], [0, 0]]),
    ("1", [[0, 0], [1, 0], [0, 0], [0, 1]]),
    ("1", [[0, 0], [0, 0], [1, 0], [0, 1]]),
    ("s", [[1, 0], [0, 1], [-_J, 0], [0, 1]]),
    ("s", [[1, 0], [0, 1], [1, 0], [0, _J]]),
    ("s", [[1, 0], [0, 1], [1, 0], [0, -_J]]),
    ("s", [[1, 0], [0, 1], [-_J, 0], [0, -1]]),
    ("s", [[1, 0], [0, 1], [_J, 0], [0, -1]]),
    ("s", [[1, 0], [0, 1], [-1, 0], [0, _J]]),
    ("s", [[1, 0], [0, 1], [_J, 0], [0, 1]]),
    ("s", [[1, 0], [0, 1], [-1, 0], [0, -_J]]),
    ("s", [[1, 0], [-1, 0], [0, 1], [0, -1]]),
    ("s", [[1, 0], [_J, 0], [0, 1], [0, -_J]]),
    ("s", [[1, 0], [-_J, 0], [0, 1], [0, -_J]]),
    ("s", [[1, 0], [1, 0], [0, 1], [0, _J]]),
    ("s", [[1, 0], [0, 1], [0, -1], [-1, 0]]),
    ("s", [[1, 0], [0, 1], [0, -_J], [_J, 0]]),
    ("s", [[1, 0], [0, 1], [0, -_J], [-_J, 0]]),
    ("s", [[1, 0], [0, 1], [0, _J], [1, 0]]),
]

_SCALES = {"1": 1.0, "s": 1.0 / np.sqrt(2.0), "h": 0.5}


def _table_codebook(table, method):
    words = tuple(
        Codeword(np.array(rows, dtype=np.complex128) * _SCALES[tag])
        for tag, rows in table
    )
    return Codebook(words, {"method": method, "T": 4, "M": 2, "size": len(words)})


def nr_codebook_4_2() -> Codebook:
    """Normalized 5G NR four-port two-layer codebook (22 entries)."""
    return _table_codebook(_NR_42, "nr42")


def proposed_codebook_4_2() -> Codebook:
    """Sparse (4, 2) reference codebook (22 entries, MCD 1)."""
    return _table_codebook(_PROP_42, "prop42")


# ---------------------------------------------------------------------------
# JSON persistence
# ---------------------------------------------------------------------------

def _fmt17(x: float) -> str:
    return format(float(x), ".17g")


def _json_safe(obj):
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"meta value of type {type(obj)!r} is not JSON-serializable")


def save_codebook(b: Codebook, path) -> None:
    """Write a codebook as JSON with 17-significant-digit entries.

    Entries are row-major [re, im] pairs; field order and float formatting
    are canonical so identical codebooks produce identical bytes.
    """
    words = []
    for w in b.codewords:
        flat = ",".join(
            f"[{_fmt17(z.real)},{_fmt17(z.imag)}]" for z in w.matrix.reshape(-1)
        )
        words.append(f"[{flat}]")
    meta = json.dumps(b.meta, sort_keys=True, default=_json_safe)
    text = '{"T": %d, "M": %d, "codewords": [%s], "meta": %s}\n' % (
        b.T,
        b.M,
        ",".join(words),
        meta,
    )
    Path(path).write_text(text, encoding="utf-8")


def load_codebook(path) -> Codebook:
    """Read a codebook written by :func:`save_codebook`, validating shapes
    and Stiefel membership at tolerance 1e-8."""
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: {exc}") from exc
    if not isinstance(doc, dict) or not {"T", "M", "codewords"} <= set(doc):
        raise ParseError(f"{path}: missing required fields")
    t, m = doc["T"], doc["M"]
    if not (isinstance(t, int) and isinstance(m, int)):
        raise ParseError(f"{path}: T and M must be integers")
    words = []
    for i, flat in enumerate(doc["codewords"]):
        if len(flat) != t * m or any(len(pair) != 2 for pair in flat):
            raise DimensionMismatch(f"codeword {i + 1} does not hold {t}x{m} entries")
        arr = np.array([complex(re, im) for re, im in flat]).reshape(t, m)
        w = Codeword(arr)
        if not validate_stiefel(w):
            raise NotStiefel(f"codeword {i + 1} fails orthonormality at 1e-8")
        words.append(w)
    return Codebook(tuple(words), dict(doc.get("meta") or {}))
