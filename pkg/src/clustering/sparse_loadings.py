"""
Sparse Loadings

Sparse approximations of the right singular vectors of a (standardized) data
matrix with an exact number s of nonzero entries. Each loading is the result
of a rank-1 alternating minimisation of ||X - u v^T||_F with soft thresholding
at the (s+1)-th largest magnitude; further loadings come from deflating the
residual matrix.

The solver works on the Gram matrix of the residual (z = X^T X v up to scale)
and runs every requested degree of sparsity as one batch. Rows whose
selection pattern has settled are finished by solving the fixed point of the
now linear update directly.
"""

import logging
from dataclasses import dataclass, field
from typing import Iterator, List, Literal, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import linalg

from ..exceptions import ConvergenceError, DegenerateResidualError, HCSVDError, ZeroMatrixError
from .config import (
    FIXED_POINT_AFTER,
    POWER_MAX_ITER,
    POWER_TOL,
    RESIDUAL_TOL,
    SPARSE_MAX_ITER,
    SPARSE_TOL,
    TIE_RTOL,
    ZERO_MATRIX_TOL,
)

logger = logging.getLogger(__name__)

InitMethod = Literal['eigh', 'power']

# Row outcomes of the alternating solver
_CONVERGED = 0
_SETTLED = 1        # support stable at the iteration cap, vector not within tol
_OSCILLATING = 2
_COLLAPSED = 3


@dataclass
class SparseLoading:
    """Unit-norm loading with `degree_s` selected entries and its quasi singular triple."""
    vector: np.ndarray
    support: Tuple[int, ...]
    quasi_singular_value: float
    left_vector: np.ndarray

    @property
    def degree_s(self) -> int:
        return len(self.support)


@dataclass
class DeflationState:
    """
    Residual matrices after `rank_extracted` rank-1 approximations were removed.

    Starts from one n x p matrix shared by every degree of sparsity; the first
    deflation gives each degree its own residual (a stack of shape m x n x p).
    """
    residual: np.ndarray
    rank_extracted: int = 0

    @property
    def frobenius_norm(self) -> Union[float, np.ndarray]:
        return np.linalg.norm(self.residual, axis=(-2, -1))

    @property
    def gram(self) -> np.ndarray:
        """X_r^T X_r (p x p while shared, m x p x p per degree afterwards)."""
        if self.residual.ndim == 2:
            return self.residual.T @ self.residual
        return np.matmul(self.residual.transpose(0, 2, 1), self.residual)

    def keep(self, rows: np.ndarray) -> None:
        """Drop the residuals of degrees that stopped."""
        if self.residual.ndim == 3:
            self.residual = self.residual[rows]

    def deflate(self, vectors: np.ndarray) -> np.ndarray:
        """
        X_r = X_{r-1} - sigma_r u_r v_r^T with sigma_r u_r = X_{r-1} v_r, one row of `vectors` per degree.

        Returns:
            The images X_{r-1} v_r (m x n), taken before deflation
        """
        if self.residual.ndim == 2:
            images = vectors @ self.residual.T
            self.residual = self.residual[None, :, :] - images[:, :, None] * vectors[:, None, :]
        else:
            images = np.matmul(self.residual, vectors[:, :, None])[:, :, 0]
            self.residual = self.residual - images[:, :, None] * vectors[:, None, :]
        self.rank_extracted += 1
        return images


@dataclass
class LoadingSequence:
    """Loadings from successive deflations. `degenerate` marks an early stop."""
    loadings: List[SparseLoading] = field(default_factory=list)
    degenerate: bool = False

    def __len__(self) -> int:
        return len(self.loadings)

    def __iter__(self) -> Iterator[SparseLoading]:
        return iter(self.loadings)

    def __getitem__(self, index: int) -> SparseLoading:
        return self.loadings[index]


# ---------------------------------------------------------------------------
# Dense initialisation
# ---------------------------------------------------------------------------

def _fix_signs(vectors: np.ndarray) -> np.ndarray:
    """Flip rows so their largest-magnitude entry is positive."""
    rows = np.arange(vectors.shape[0])
    lead = vectors[rows, np.argmax(np.abs(vectors), axis=1)]
    return np.where((lead < 0)[:, None], -vectors, vectors)


def _power_iteration(grams: np.ndarray, start: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(start, axis=1)
    v = np.where((norms > 0)[:, None], start / np.where(norms > 0, norms, 1.0)[:, None],
                 1.0 / np.sqrt(start.shape[1]))
    active = np.arange(v.shape[0])
    for _ in range(POWER_MAX_ITER):
        if not active.size:
            break
        w = np.matmul(grams[active], v[active][:, :, None])[:, :, 0]
        lengths = np.linalg.norm(w, axis=1)
        nonzero = lengths > 0
        w[nonzero] /= lengths[nonzero, None]
        w[~nonzero] = v[active][~nonzero]
        done = ~nonzero | (np.linalg.norm(w - v[active], axis=1) < POWER_TOL)
        v[active] = w
        active = active[~done]
    if active.size:
        logger.debug("Power iteration stopped at %d iterations without reaching tol=%g for %d rows",
                     POWER_MAX_ITER, POWER_TOL, active.size)
    return v


def _leading_vectors(grams: np.ndarray, method: InitMethod) -> np.ndarray:
    """Leading eigenvector of each Gram matrix, one row per matrix (one row for a single p x p gram)."""
    stack = grams[None] if grams.ndim == 2 else grams
    if method == 'power':
        start = np.sqrt(np.clip(np.diagonal(stack, axis1=1, axis2=2), 0.0, None))
        vectors = _power_iteration(stack, start)
    elif grams.ndim == 2:
        p = grams.shape[0]
        _, found = linalg.eigh(grams, subset_by_index=[p - 1, p - 1])
        vectors = found[:, 0][None, :]
    else:
        vectors = np.linalg.eigh(stack)[1][:, :, -1]
    return _fix_signs(vectors)


def leading_right_vector(x: np.ndarray, method: InitMethod = 'eigh') -> np.ndarray:
    """
    Dense leading right singular vector of x.

    Args:
        x: n x p matrix
        method: 'eigh' (LAPACK partial eigensolver on X^T X) or 'power'
            (power iteration from the vector of column norms)

    Returns:
        Unit p-vector whose largest-magnitude entry is positive
    """
    x = np.asarray(x, dtype=float)
    return _leading_vectors(x.T @ x, method)[0]


# ---------------------------------------------------------------------------
# Thresholding
# ---------------------------------------------------------------------------

def _threshold_rows(w: np.ndarray, degrees: np.ndarray):
    """
    Row-wise top-s soft threshold.

    Magnitudes within TIE_RTOL * max|w| of each other are tied, and tied
    entries are taken by smaller index. When a selected entry is tied with the
    threshold the row keeps its raw values on the selection.

    Returns:
        (thresholded rows, selection mask, index of the (s+1)-th entry or -1
        when s = p, raw-values flag per row)
    """
    m, p = w.shape
    rows = np.arange(m)
    a = np.abs(w)
    full = degrees >= p
    order = np.argsort(-a, axis=1, kind='stable')
    pivot = np.where(full, -1, order[rows, np.minimum(degrees, p - 1)])
    tau = np.where(full, 0.0, a[rows, pivot])
    eps = TIE_RTOL * a.max(axis=1)

    above = a > (tau + eps)[:, None]
    tied = ~above & (a >= (tau - eps)[:, None])
    need = degrees - above.sum(axis=1)
    mask = above | (tied & (np.cumsum(tied, axis=1) <= need[:, None]))
    raw = np.any(mask & ~above, axis=1)

    shrunk = np.sign(w) * np.maximum(a - tau[:, None], 0.0)
    values = np.where(raw[:, None], w, shrunk)
    return np.where(mask, values, 0.0), mask, pivot, raw


def soft_threshold_top(z: np.ndarray, s: int) -> Tuple[np.ndarray, Tuple[int, ...]]:
    """
    Keep the s largest-magnitude entries of z, shrunk by the (s+1)-th largest magnitude.

    A selected entry tied with the threshold would vanish; in that case the
    selected entries keep their raw values so the support stays intact.

    Returns:
        (thresholded vector, sorted support)
    """
    z = np.asarray(z, dtype=float)
    values, mask, _, _ = _threshold_rows(z[None, :], np.array([s]))
    return values[0], tuple(int(j) for j in np.flatnonzero(mask[0]))


# ---------------------------------------------------------------------------
# Alternating solver
# ---------------------------------------------------------------------------

def _matvec(grams: np.ndarray, v: np.ndarray) -> np.ndarray:
    if grams.ndim == 2:
        return v @ grams
    return np.matmul(grams, v[:, :, None])[:, :, 0]


def _fixed_point(gram: np.ndarray, v: np.ndarray, mask: np.ndarray, pivot: int, raw: bool,
                 s: int, tol: float) -> Optional[np.ndarray]:
    """
    Solve for the loading the iteration is heading to once its pattern is fixed.

    With the support, the signs and the (s+1)-th entry fixed, one update is the
    linear map v_S -> G_SS v_S - sign(w_S) |w_j| (w = G v, j the (s+1)-th
    entry), so its limit is the dominant eigenvector of that map. The result
    is accepted only if one more update reproduces it within tol.
    """
    support = np.flatnonzero(mask)
    w = gram @ v
    block = gram[np.ix_(support, support)]
    if pivot >= 0 and not raw:
        block = block - np.outer(np.sign(w[support]), np.sign(w[pivot]) * gram[pivot, support])

    values, vectors = np.linalg.eig(block)
    scale = np.abs(values).max()
    if scale == 0.0:
        return None
    admissible = np.flatnonzero((np.abs(values.imag) <= TIE_RTOL * scale) & (values.real > 0))
    if not admissible.size:
        return None
    y = vectors[:, admissible[np.argmax(values.real[admissible])]].real
    if y @ v[support] < 0:
        y = -y

    trial = np.zeros_like(v)
    trial[support] = y / np.linalg.norm(y)
    image, image_mask, _, _ = _threshold_rows((gram @ trial)[None, :], np.array([s]))
    length = np.linalg.norm(image)
    if length == 0.0 or not np.array_equal(image_mask[0], mask):
        return None
    image = image[0] / length
    if np.linalg.norm(image - trial) >= tol:
        return None
    return image


def _alternate(grams: np.ndarray, degrees: np.ndarray, start: np.ndarray,
               max_iter: int, tol: float) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Alternate z <- G v, v <- normalised top-s soft threshold of z for every row.

    A row converges when its support is unchanged and ||v_new - v_old|| < tol.

    Args:
        grams: One p x p Gram matrix shared by all rows, or one per row (m x p x p)
        degrees: Degree of sparsity per row
        start: Initial unit vectors (m x p)

    Returns:
        (vectors, support masks, outcome code per row)
    """
    m, p = start.shape
    v = start.copy()
    masks = np.zeros((m, p), dtype=bool)
    signs = np.zeros((m, p), dtype=np.int8)
    pivots = np.full(m, -2)
    raws = np.zeros(m, dtype=bool)
    moved_last = np.ones(m, dtype=bool)
    settled = np.zeros(m, dtype=int)
    tried = np.zeros(m, dtype=bool)
    status = np.full(m, _OSCILLATING)

    active = np.arange(m)
    g = grams
    for _ in range(max_iter):
        if not active.size:
            break
        new_v, new_mask, pivot, raw = _threshold_rows(_matvec(g, v[active]), degrees[active])
        length = np.linalg.norm(new_v, axis=1)
        collapsed = length == 0.0
        new_v[~collapsed] /= length[~collapsed, None]
        new_signs = np.sign(new_v).astype(np.int8)

        moved = np.any(new_mask != masks[active], axis=1)
        same = (~moved & np.all(new_signs == signs[active], axis=1)
                & (pivot == pivots[active]) & (raw == raws[active]))
        step = np.linalg.norm(new_v - v[active], axis=1)

        v[active] = new_v
        masks[active] = new_mask
        signs[active] = new_signs
        pivots[active] = pivot
        raws[active] = raw
        moved_last[active] = moved
        settled[active] = np.where(same, settled[active] + 1, 0)
        tried[active] = tried[active] & same

        done = ~moved & (step < tol)
        status[active[done]] = _CONVERGED
        status[active[collapsed]] = _COLLAPSED
        done |= collapsed

        for i in np.flatnonzero(~done & (settled[active] >= FIXED_POINT_AFTER) & ~tried[active]):
            row = active[i]
            tried[row] = True
            solved = _fixed_point(g if g.ndim == 2 else g[i], v[row], masks[row],
                                  int(pivots[row]), bool(raws[row]), int(degrees[row]), tol)
            if solved is not None:
                v[row] = solved
                status[row] = _CONVERGED
                done[i] = True

        if done.any():
            active = active[~done]
            if g.ndim == 3:
                g = g[~done]

    if active.size:
        status[active] = np.where(moved_last[active], _OSCILLATING, _SETTLED)
        logger.debug("%d of %d loadings reached %d iterations (%d with a stable support)",
                     active.size, m, max_iter, int(np.sum(~moved_last[active])))
    return v, masks, status


def _compact(x: np.ndarray) -> Tuple[np.ndarray, Optional[np.ndarray]]:
    """
    Replace a tall x by the triangular factor R of x = QR.

    Norms, Gram matrices and ||X v|| are unchanged; Q maps images back.
    """
    n, p = x.shape
    if n <= p:
        return x, None
    q, r = np.linalg.qr(x)
    return r, q


# ---------------------------------------------------------------------------
# Public solvers
# ---------------------------------------------------------------------------

def sparse_loading_grid(
    x: np.ndarray,
    k: int,
    degrees: Sequence[int],
    init: InitMethod = 'eigh',
    max_iter: int = SPARSE_MAX_ITER,
    tol: float = SPARSE_TOL,
) -> List[Union[LoadingSequence, HCSVDError]]:
    """
    First k sparse loadings of x for several degrees of sparsity at once.

    Each degree is handled exactly as sparse_loading_sequence would; a degree
    whose loading fails stops there without affecting the others.

    Args:
        x: n x p matrix (standardized data, or a correlation matrix)
        k: Loadings per degree, 1 <= k <= p
        degrees: Degrees of sparsity, each in [1, p]
        init: Dense initialisation method
        max_iter: Iteration cap of the alternating solver
        tol: Convergence tolerance on the loading

    Returns:
        One entry per degree: its LoadingSequence (flagged degenerate if the
        residual vanished early), or the ConvergenceError / ZeroMatrixError
        that stopped it
    """
    x = np.asarray(x, dtype=float)
    p = x.shape[1]
    degrees = np.asarray(list(degrees), dtype=int)
    if not 1 <= k <= p:
        raise ValueError(f"Number of loadings must lie in [1, {p}], got {k}")
    if degrees.size and (degrees.min() < 1 or degrees.max() > p):
        raise ValueError(f"Degrees of sparsity must lie in [1, {p}]")

    if np.linalg.norm(x) < ZERO_MATRIX_TOL:
        return [ZeroMatrixError("Cannot extract a loading from a zero matrix") for _ in degrees]

    outcomes: List[Union[LoadingSequence, HCSVDError]] = [LoadingSequence() for _ in degrees]
    factor, basis = _compact(x)
    state = DeflationState(residual=factor)
    live = np.arange(len(degrees))

    for rank in range(1, k + 1):
        if rank > 1:
            vanished = state.frobenius_norm < RESIDUAL_TOL
            for i in live[vanished]:
                logger.debug("Residual vanished after %d of %d loadings (s=%d)", rank - 1, k, degrees[i])
                outcomes[i].degenerate = True
            state.keep(~vanished)
            live = live[~vanished]
        if not live.size:
            break

        grams = state.gram
        start = _leading_vectors(grams, init)
        if start.shape[0] != live.size:
            start = np.repeat(start, live.size, axis=0)
        v, masks, status = _alternate(grams, degrees[live], start, max_iter, tol)

        failed = status >= _OSCILLATING
        for i, code in zip(live[failed], status[failed]):
            reason = ("support still oscillating" if code == _OSCILLATING
                      else "loading collapsed to zero")
            outcomes[i] = ConvergenceError(
                f"Sparse loading (s={degrees[i]}, rank={rank}) did not converge in {max_iter} iterations; {reason}"
            )
        if failed.any():
            state.keep(~failed)
            live, v, masks = live[~failed], v[~failed], masks[~failed]
            if not live.size:
                break

        v = _fix_signs(v)
        images = state.deflate(v)
        sigmas = np.linalg.norm(images, axis=1)
        for row, i in enumerate(live):
            u = images[row] / sigmas[row] if sigmas[row] > 0 else np.zeros_like(images[row])
            if basis is not None:
                u = basis @ u
            outcomes[i].loadings.append(SparseLoading(
                vector=v[row],
                support=tuple(int(j) for j in np.flatnonzero(masks[row])),
                quasi_singular_value=float(sigmas[row]),
                left_vector=u,
            ))
    return outcomes


def sparse_rank1(
    x: np.ndarray,
    s: int,
    max_iter: int = SPARSE_MAX_ITER,
    tol: float = SPARSE_TOL,
    init: InitMethod = 'eigh',
) -> SparseLoading:
    """
    First sparse loading of x with exactly s selected variables.

    Alternates u <- Xv/||Xv||, z <- X^T u, v <- normalised top-s soft threshold
    of z until the support is unchanged and ||v_new - v_old|| < tol.

    Args:
        x: n x p matrix (standardized data, or a correlation matrix)
        s: Degree of sparsity, 1 <= s <= p
        max_iter: Iteration cap
        tol: Convergence tolerance on the loading
        init: Dense initialisation method

    Returns:
        SparseLoading with its quasi singular value ||Xv|| and left vector

    Raises:
        ZeroMatrixError: if ||x||_F is numerically zero
        ConvergenceError: if the support still changes after max_iter
    """
    x = np.asarray(x, dtype=float)
    p = x.shape[1]
    if not 1 <= s <= p:
        raise ValueError(f"Degree of sparsity must lie in [1, {p}], got {s}")
    outcome = sparse_loading_grid(x, 1, [s], init=init, max_iter=max_iter, tol=tol)[0]
    if isinstance(outcome, HCSVDError):
        raise outcome
    return outcome[0]


def sparse_loading_sequence(
    x: np.ndarray,
    k: int,
    s: int,
    strict: bool = False,
    init: InitMethod = 'eigh',
) -> LoadingSequence:
    """
    First k sparse loadings of degree s via residual deflation.

    Args:
        x: n x p matrix
        k: Number of loadings, 1 <= k <= p
        s: Degree of sparsity, 1 <= s <= p-1
        strict: Raise DegenerateResidualError instead of returning a flagged sequence
        init: Dense initialisation method

    Returns:
        LoadingSequence (flagged degenerate if the residual vanished early)
    """
    x = np.asarray(x, dtype=float)
    p = x.shape[1]
    if not 1 <= k <= p:
        raise ValueError(f"Number of loadings must lie in [1, {p}], got {k}")
    if not 1 <= s <= max(p - 1, 1):
        raise ValueError(f"Degree of sparsity must lie in [1, {p - 1}], got {s}")

    outcome = sparse_loading_grid(x, k, [s], init=init)[0]
    if isinstance(outcome, HCSVDError):
        raise outcome
    if outcome.degenerate and strict:
        raise DegenerateResidualError(
            f"Residual vanished after {len(outcome)} of {k} loadings (s={s})", outcome.loadings
        )
    return outcome
