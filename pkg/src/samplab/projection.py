"""2-D neighbor embeddings scored by Shepard diagram correlation.

The built-in embedder is a force-directed neighbor layout: a fuzzy k-NN graph
supplies attractive edges, negative sampling supplies repulsion, and a weak
elastic pull toward the PCA initialization keeps the global arrangement
stable (that pull is what makes distance ranks trustworthy on small data).
``min_dist`` reshapes the low-dimensional kernel and so controls how tightly
clusters condense. Any deterministic neighbor-preserving embedder can be
swapped in behind :func:`embed`.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.optimize import curve_fit
from scipy.stats import spearmanr

from .config import MIN_DIST_SWEEP, SDC_PAIR_CAP, SDC_PAIR_SEED
from .errors import InvalidParameterError
from .neighbors import NeighborIndex

GRID_NEIGHBORS = tuple(range(5, 14))

_EPOCHS = 200
_NEG_SAMPLES = 3
_ALPHA0 = 0.25
_ANCHOR = 0.12
_INIT_SCALE = 10.0


@dataclass(frozen=True)
class ProjectionCandidate:
    n_neighbors: int
    min_dist: float
    coords: np.ndarray
    sdc: float
    seed: int

    def to_payload(self) -> dict:
        return {
            "n_neighbors": self.n_neighbors,
            "min_dist": self.min_dist,
            "sdc": self.sdc,
            "coords": [[float(a), float(b)] for a, b in self.coords],
        }


@dataclass(frozen=True)
class ShepardPairSample:
    pairs: np.ndarray       # (m, 2) row positions, i < j
    high_d: np.ndarray      # (m,) distances in feature space
    low_d: np.ndarray       # (m,) distances in the embedding


@dataclass(frozen=True)
class SdcResult:
    value: float
    degenerate: bool = False


# ---------------------------------------------------------------------------
# Shepard diagram correlation

def sample_pair_positions(n: int, cap: int = SDC_PAIR_CAP,
                          seed: int = SDC_PAIR_SEED) -> np.ndarray:
    """(i, j) row pairs with i < j; all of them if they fit under the cap,
    otherwise a uniform fixed-seed sample without replacement."""
    total = n * (n - 1) // 2
    iu = np.triu_indices(n, 1)
    pairs = np.column_stack(iu)
    if total <= cap:
        return pairs
    rng = np.random.default_rng(seed)
    return pairs[rng.choice(total, size=cap, replace=False)]


def shepard_pairs(high: np.ndarray, low: np.ndarray,
                  cap: int = SDC_PAIR_CAP, seed: int = SDC_PAIR_SEED) -> ShepardPairSample:
    pairs = sample_pair_positions(high.shape[0], cap, seed)
    dh = np.sqrt(((high[pairs[:, 0]] - high[pairs[:, 1]]) ** 2).sum(axis=1))
    dl = np.sqrt(((low[pairs[:, 0]] - low[pairs[:, 1]]) ** 2).sum(axis=1))
    return ShepardPairSample(pairs, dh, dl)


def sdc(sample: ShepardPairSample) -> SdcResult:
    """Spearman rank correlation between high- and low-dimensional pair
    distances; constant inputs score 0 with the degenerate flag set."""
    if len(sample.high_d) < 2:
        raise InvalidParameterError("need at least 2 pairs for a correlation")
    if np.all(sample.high_d == sample.high_d[0]) or np.all(sample.low_d == sample.low_d[0]):
        return SdcResult(0.0, degenerate=True)
    rho = spearmanr(sample.high_d, sample.low_d).statistic
    return SdcResult(float(rho))


def score_embedding(high: np.ndarray, coords: np.ndarray) -> SdcResult:
    return sdc(shepard_pairs(high, coords))


# ---------------------------------------------------------------------------
# embedder internals

@lru_cache(maxsize=32)
def _kernel_coefficients(min_dist: float, spread: float = 1.0) -> tuple[float, float]:
    """Fit 1/(1 + a y^(2b)) to the target falloff implied by min_dist."""
    xv = np.linspace(0, 3 * spread, 300)
    yv = np.where(xv < min_dist, 1.0, np.exp(-(xv - min_dist) / spread))
    (a, b), _ = curve_fit(lambda x, a_, b_: 1.0 / (1.0 + a_ * x ** (2 * b_)),
                          xv, yv, p0=(1.0, 1.0), maxfev=10_000)
    return float(a), float(b)


def _fuzzy_graph(X: np.ndarray, k: int):
    """Symmetrized fuzzy k-NN edge list (i, j, weight) with i < j."""
    n = X.shape[0]
    index = NeighborIndex(X, np.arange(n))
    neigh = index.kneighbors(k)
    nd = np.sqrt(((X[:, None, :] - X[neigh]) ** 2).sum(axis=2))
    rho = nd[:, 0]
    target = np.log2(k) if k > 1 else 1.0
    w = np.empty_like(nd)
    for i in range(n):
        lo, hi = 1e-8, 1e4
        shifted = np.maximum(nd[i] - rho[i], 0.0)
        for _ in range(64):
            mid = 0.5 * (lo + hi)
            if np.exp(-shifted / mid).sum() > target:
                hi = mid
            else:
                lo = mid
        w[i] = np.exp(-shifted / hi)
    P = np.zeros((n, n))
    P[np.repeat(np.arange(n), k), neigh.ravel()] = w.ravel()
    S = P + P.T - P * P.T
    ii, jj = np.nonzero(np.triu(S, 1))
    return ii, jj, S[ii, jj]


def _pca_init(X: np.ndarray, seed: int) -> np.ndarray:
    """Deterministic 2-component projection, sign-fixed, scaled to the layout
    range; an index-keyed micro-jitter separates exact duplicate rows."""
    Xc = X - X.mean(axis=0)
    _, _, Vt = np.linalg.svd(Xc, full_matrices=False)
    comp = Vt[: min(2, Vt.shape[0])]
    for r in range(comp.shape[0]):
        m = int(np.argmax(np.abs(comp[r])))
        if comp[r, m] < 0:
            comp[r] = -comp[r]
    Y = Xc @ comp.T
    if Y.shape[1] < 2:
        Y = np.column_stack([Y, np.zeros(len(Y))])
    span = np.abs(Y).max()
    Y = Y / span * _INIT_SCALE if span > 0 else Y
    jitter = np.random.default_rng(seed).normal(scale=1e-4, size=Y.shape)
    return Y + jitter


def _layout(n, ii, jj, w, Y0, a, b, seed, epochs=_EPOCHS):
    rng = np.random.default_rng(seed)
    Y = Y0.copy()
    deg = np.bincount(ii, minlength=n) + np.bincount(jj, minlength=n)
    deg = np.maximum(deg, 1).astype(np.float64)
    for epoch in range(epochs):
        alpha = _ALPHA0 * (1.0 - epoch / epochs)
        d = Y[ii] - Y[jj]
        d2 = (d ** 2).sum(axis=1)
        attract = np.clip(-2 * a * b * d2 ** (b - 1) / (1 + a * d2 ** b), -4, 4)
        f = (attract * w)[:, None] * d
        upd = np.zeros_like(Y)
        for c in range(2):
            upd[:, c] += np.bincount(ii, -f[:, c], n)
            upd[:, c] += np.bincount(jj, f[:, c], n)
        for _ in range(_NEG_SAMPLES):
            rnd = rng.integers(0, n, size=len(ii))
            dn = Y[ii] - Y[rnd]
            dn2 = (dn ** 2).sum(axis=1)
            rep = np.clip(2 * b / ((0.001 + dn2) * (1 + a * dn2 ** b)), 0, 4)
            fr = (rep / _NEG_SAMPLES)[:, None] * dn
            for c in range(2):
                upd[:, c] += np.bincount(ii, fr[:, c], n)
        Y += alpha * (upd / deg[:, None])
        Y += alpha * _ANCHOR * (Y0 - Y)
    return Y


def embed(X: np.ndarray, n_neighbors: int, min_dist: float, seed: int) -> np.ndarray:
    """Deterministic 2-D embedding of the (normalized) feature matrix."""
    X = np.asarray(X, dtype=np.float64)
    n = X.shape[0]
    if n_neighbors >= n:
        raise InvalidParameterError(f"n_neighbors={n_neighbors} must be < train size {n}")
    if n_neighbors < 1:
        raise InvalidParameterError("n_neighbors must be >= 1")
    if not 0 <= min_dist < 1:
        raise InvalidParameterError(f"min_dist must be in [0, 1), got {min_dist}")
    ii, jj, w = _fuzzy_graph(X, n_neighbors)
    a, b = _kernel_coefficients(min_dist)
    return _layout(n, ii, jj, w, _pca_init(X, seed), a, b, seed)


def auto_min_dist(X: np.ndarray, n_neighbors: int, seed: int,
                  sweep=MIN_DIST_SWEEP) -> tuple[float, float]:
    """Sweep min_dist and keep the score argmax (ties to the smaller value)."""
    best = None
    X = np.asarray(X, dtype=np.float64)
    n = X.shape[0]
    if n_neighbors >= n:
        raise InvalidParameterError(f"n_neighbors={n_neighbors} must be < train size {n}")
    ii, jj, w = _fuzzy_graph(X, n_neighbors)
    init = _pca_init(X, seed)
    for md in sweep:
        a, b = _kernel_coefficients(md)
        coords = _layout(n, ii, jj, w, init, a, b, seed)
        score = score_embedding(X, coords).value
        if best is None or score > best[1] + 1e-12:
            best = (md, score, coords)
    return best[0], best[1]


def projection_grid(X: np.ndarray, seed: int,
                    n_neighbors_values=GRID_NEIGHBORS) -> list[ProjectionCandidate]:
    """One auto-tuned candidate per neighborhood size, ascending."""
    X = np.asarray(X, dtype=np.float64)
    n = X.shape[0]
    if n <= max(n_neighbors_values):
        raise InvalidParameterError(
            f"need more than {max(n_neighbors_values)} training instances, have {n}")
    out = []
    init = _pca_init(X, seed)
    for k in n_neighbors_values:
        ii, jj, w = _fuzzy_graph(X, k)
        best = None
        for md in MIN_DIST_SWEEP:
            a, b = _kernel_coefficients(md)
            coords = _layout(n, ii, jj, w, init, a, b, seed)
            score = score_embedding(X, coords).value
            if best is None or score > best.sdc + 1e-12:
                best = ProjectionCandidate(k, md, coords, score, seed)
        out.append(best)
    return out
