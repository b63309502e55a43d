"""Pure-numpy implementations of the hot kernels."""

import numpy as np


def trace_powers(corr: np.ndarray) -> tuple[float, float]:
    """Return (tr(C^2), tr(C^4)) for a symmetric matrix C.

    tr(C^4) is the squared Frobenius norm of C^2, so a single matrix
    product suffices.
    """
    sq = corr @ corr
    tr2 = float(np.trace(sq))
    tr4 = float(np.einsum("ij,ij->", sq, sq))
    return tr2, tr4


def offdiag_sums(corr: np.ndarray) -> tuple[float, float]:
    """Sum and sum of squares of the off-diagonal entries of a square matrix."""
    d = np.diagonal(corr)
    s1 = float(corr.sum() - d.sum())
    s2 = float(np.einsum("ij,ij->", corr, corr) - np.dot(d, d))
    return s1, s2


def pair_projector_traces(
    designs: np.ndarray, inv_grams: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Reduced projector traces for every unit pair.

    Parameters
    ----------
    designs : (n, k, T) array
        Per-unit design matrices X_r (rows are regressors over time).
    inv_grams : (n, k, k) array
        Precomputed (X_r X_r')^{-1}.

    Returns
    -------
    t2, t4 : (n, n) arrays
        t2[r, s] = tr(P_r P_s) and t4[r, s] = tr((P_r P_s)^2) where
        P_r = X_r'(X_r X_r')^{-1} X_r. Diagonals are filled too (they equal
        k) but callers only use r != s.
    """
    cross = np.einsum("rat,sbt->rsab", designs, designs)
    # m[r, s] = A_r @ (X_r X_s'); then Q[r, s] = m[r, s] @ m[s, r]
    m = np.einsum("rab,rsbc->rsac", inv_grams, cross)
    q = np.einsum("rsab,srbc->rsac", m, m)
    t2 = np.einsum("rsaa->rs", q)
    t4 = np.einsum("rsab,rsba->rs", q, q)
    return t2, t4
