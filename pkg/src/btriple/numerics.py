"""Dense complex linear algebra and scalar analysis kernels.

Thin wrappers around numpy/scipy that normalize error behavior: singular
solves raise SingularMatrix instead of returning garbage, eigenvalue output
is deterministically ordered, and the Newton iteration keeps polishing past
its residual target so that multiple roots are still located to near machine
accuracy. Everything here is a pure function of its arguments.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg as sla

from .errors import DegenerateInput, NoConvergence, NotPositiveDefinite, SingularMatrix

# Relative pivot floor below which an LU factor is treated as singular.
_PIVOT_REL = 1e-14

# Largest matrix eig_dense will factor; above this, the caller picked the
# wrong tool.
_EIG_DIM_CAP = 4000


def solve_linear(a, b):
    """Solve a @ x = b by partial-pivot LU.

    Raises SingularMatrix when the factorization exposes a pivot smaller
    than 1e-14 times the largest entry of ``a``, which is how resolvent
    evaluations on top of an eigenvalue surface here. ``b`` may be a vector
    or a matrix of stacked right-hand sides.
    """
    a = np.asarray(a)
    b = np.asarray(b)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected square matrix, got shape {a.shape}")
    if a.shape[0] == 0:
        return np.zeros_like(b)
    scale = np.abs(a).max()
    if scale == 0.0:
        raise SingularMatrix("zero matrix is singular")
    lu, piv = sla.lu_factor(a)
    pivots = np.abs(np.diag(lu))
    if pivots.min() <= _PIVOT_REL * scale:
        raise SingularMatrix(
            f"pivot ratio {pivots.min() / scale:.3e} at or below {_PIVOT_REL:.0e}; "
            "system is singular to working precision"
        )
    return sla.lu_solve((lu, piv), b)


def eig_dense(a, return_vectors=False):
    """Eigenvalues of a dense square matrix, sorted by (real, imag).

    With ``return_vectors`` the matching right eigenvectors come back as
    columns. Refuses matrices larger than 4000x4000.
    """
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected square matrix, got shape {a.shape}")
    if a.shape[0] > _EIG_DIM_CAP:
        raise ValueError(f"matrix dimension {a.shape[0]} exceeds {_EIG_DIM_CAP}")
    try:
        if return_vectors:
            w, v = sla.eig(a)
        else:
            w = sla.eigvals(a)
    except sla.LinAlgError as exc:  # QR iteration cap exhausted
        raise NoConvergence(f"dense eigensolve did not converge: {exc}") from exc
    order = np.lexsort((w.imag, w.real))
    if return_vectors:
        return w[order], v[:, order]
    return w[order]


def smallest_singular_value(a):
    """Smallest singular value of a dense matrix."""
    a = np.asarray(a)
    if a.ndim != 2:
        raise ValueError(f"expected matrix, got shape {a.shape}")
    if min(a.shape) == 0:
        raise ValueError("empty matrix has no singular values")
    return float(sla.svdvals(a).min())


def herm_inv_sqrt(a):
    """Inverse square root of a Hermitian positive definite matrix.

    The input is symmetrized before the eigendecomposition so that tiny
    non-Hermitian rounding noise cannot leak into complex eigenvalues.
    Raises NotPositiveDefinite when the smallest eigenvalue is <= 0.
    """
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected square matrix, got shape {a.shape}")
    h = 0.5 * (a + a.conj().T)
    w, u = sla.eigh(h)
    if w.min() <= 0.0:
        raise NotPositiveDefinite(
            f"matrix is not positive definite (min eigenvalue {w.min():.3e})"
        )
    return (u * (1.0 / np.sqrt(w))) @ u.conj().T


def fit_log_slope(points):
    """Least-squares line through (log x, log y).

    ``points`` is a sequence of (x, y) pairs, all positive, at least three
    of them. Returns (slope, intercept, residual) where residual is the
    root-mean-square misfit in log-log coordinates. Raises DegenerateInput
    when every x coincides (no abscissa spread to fit against).
    """
    pts = np.asarray(list(points), dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] < 3:
        raise ValueError("need at least three (x, y) pairs")
    if np.any(pts <= 0.0):
        raise ValueError("all coordinates must be positive")
    lx = np.log(pts[:, 0])
    ly = np.log(pts[:, 1])
    if np.ptp(lx) == 0.0:
        raise DegenerateInput("all x values coincide; slope is undefined")
    slope, intercept = np.polyfit(lx, ly, 1)
    misfit = ly - (slope * lx + intercept)
    residual = float(np.sqrt(np.mean(misfit**2)))
    return float(slope), float(intercept), residual


def complex_newton(f, z0, tol, fprime=None, max_iter=50):
    """Newton iteration for a scalar holomorphic f.

    The derivative comes from ``fprime`` when given, otherwise from a
    central difference with step 1e-6 * max(1, |z|). Once the residual
    target |f(z)| <= tol is met the iteration keeps stepping while the step
    length still moves the position materially. That polish phase costs a
    handful of extra evaluations and is what makes multiple roots (where
    |f| <= tol is reached far from the root) come out accurate: Newton
    still contracts linearly there, halving the error per step.

    Raises NoConvergence if the residual target is never met within
    ``max_iter`` steps or the iteration degenerates.
    """
    z = complex(z0)
    hit_tol = False
    for _ in range(max_iter):
        fz = complex(f(z))
        if not np.isfinite(fz):
            raise NoConvergence(f"f({z}) is not finite")
        if abs(fz) <= tol:
            hit_tol = True
        if fprime is not None:
            df = complex(fprime(z))
        else:
            h = 1e-6 * max(1.0, abs(z))
            df = (complex(f(z + h)) - complex(f(z - h))) / (2.0 * h)
        if df == 0 or not np.isfinite(df):
            if hit_tol:
                return z
            raise NoConvergence("derivative vanished before reaching tolerance")
        step = fz / df
        if not np.isfinite(step):
            raise NoConvergence("step is not finite")
        z = z - step
        if hit_tol and abs(step) <= 1e-11 * max(1.0, abs(z)):
            return z
    if hit_tol and abs(complex(f(z))) <= tol:
        return z
    raise NoConvergence(f"no root within {max_iter} iterations (|f| = {abs(complex(f(z))):.3e})")
