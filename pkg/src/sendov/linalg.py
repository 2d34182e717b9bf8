"""Small dense linear algebra: one-sided Jacobi SVD and left null spaces."""

from __future__ import annotations

import math

import numpy as np

NULL_TOL = 1e-8


def jacobi_svd(A, tol: float = 1e-15, max_sweeps: int = 60):
    """One-sided (Hestenes) Jacobi SVD.

    Orthogonalizes the columns of ``A`` by plane rotations, so that
    ``A @ V = U * s`` with ``V`` orthogonal.  One singular value is returned
    per column of ``A`` (zeros included), sorted in descending order.

    Returns
    -------
    U : (rows, cols) array; columns with s == 0 are left zero
    s : (cols,) array
    V : (cols, cols) orthogonal array
    """
    W = np.array(A, dtype=float, copy=True)
    ncol = W.shape[1]
    V = np.eye(ncol)
    for _ in range(max_sweeps):
        rotated = False
        for i in range(ncol - 1):
            for j in range(i + 1, ncol):
                alpha = W[:, i] @ W[:, i]
                beta = W[:, j] @ W[:, j]
                gamma = W[:, i] @ W[:, j]
                if gamma == 0.0 or abs(gamma) <= tol * np.sqrt(alpha * beta):
                    continue
                rotated = True
                diff = float(beta - alpha)
                gamma = float(gamma)
                if abs(diff) > 1e150 * abs(gamma):
                    # zeta would overflow; t -> 1/(2 zeta)
                    t = gamma / diff
                else:
                    zeta = diff / (2.0 * gamma)
                    t = math.copysign(1.0, zeta) / (abs(zeta) + math.hypot(1.0, zeta))
                cs = 1.0 / math.sqrt(1.0 + t * t)
                sn = cs * t
                wi = W[:, i].copy()
                W[:, i] = cs * wi - sn * W[:, j]
                W[:, j] = sn * wi + cs * W[:, j]
                vi = V[:, i].copy()
                V[:, i] = cs * vi - sn * V[:, j]
                V[:, j] = sn * vi + cs * V[:, j]
        if not rotated:
            break
    s = np.sqrt(np.einsum("ij,ij->j", W, W))
    order = np.argsort(-s, kind="stable")
    s = s[order]
    W = W[:, order]
    V = V[:, order]
    U = np.zeros_like(W)
    nz = s > 0
    U[:, nz] = W[:, nz] / s[nz]
    return U, s, V


def singular_values(A) -> np.ndarray:
    return jacobi_svd(A)[1]


def left_null_space(E, tol: float = NULL_TOL) -> np.ndarray:
    """Orthonormal basis (as columns) of {c : c @ E = 0}.

    Runs the Jacobi iteration on E^T, whose column count equals the row
    count of E, so the full set of left singular vectors is available.
    """
    _, s, V = jacobi_svd(np.asarray(E, dtype=float).T)
    return V[:, s < tol]
