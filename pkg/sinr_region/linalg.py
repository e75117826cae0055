"""
Dense small-matrix kernels: the psi column operator, LU determinant and
solve, characteristic polynomials and Perron eigenpairs of nonnegative
matrices.

Matrices are float64 ndarrays. Column and user indices are 0-based here.
"""

from __future__ import annotations

import warnings
from collections.abc import Iterable
from dataclasses import dataclass
from typing import Literal

import numpy as np
import scipy.linalg
from numpy.typing import ArrayLike, NDArray
from scipy.optimize import brentq

from sinr_region.config.models import DEFAULT_TOLERANCES, Tolerances
from sinr_region.exceptions import LinalgError, NegativeEntryError, SingularMatrixError
from sinr_region.logging import get_logger

logger = get_logger(__name__)

FloatArray = NDArray[np.float64]
PerronMethod = Literal["power", "nilpotent", "charpoly"]

# Smallest relative tolerance brentq accepts.
ROOT_RTOL = 4 * float(np.finfo(np.float64).eps)


def as_square(x: ArrayLike, *, name: str = "matrix") -> FloatArray:
    """
    Return x as a finite square float64 array.
    """
    X = np.asarray(x, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] != X.shape[1]:
        raise LinalgError(f"{name} must be square, got shape {X.shape}")
    if not np.all(np.isfinite(X)):
        raise LinalgError(f"{name} must be finite")
    return X


def psi(x: ArrayLike, y: ArrayLike, columns: Iterable[int]) -> FloatArray:
    """
    Add the vector y to every listed column of x; other columns are copied.
    """
    X = as_square(x)
    vector = np.asarray(y, dtype=np.float64)
    n = X.shape[0]
    if vector.shape != (n,):
        raise LinalgError(f"vector must have length {n}, got shape {vector.shape}")
    index = sorted(set(int(j) for j in columns))
    if index and (index[0] < 0 or index[-1] >= n):
        raise LinalgError(f"column index out of range 0..{n - 1}: {index}")
    result = X.copy()
    result[:, index] += vector[:, np.newaxis]
    return result


@dataclass(frozen=True, eq=False)
class LUFactorization:
    """
    Partial-pivoting LU factors as returned by LAPACK getrf.
    """

    lu: FloatArray
    piv: NDArray[np.int32]
    norm_inf: float

    @property
    def pivots(self) -> FloatArray:
        return np.diag(self.lu)

    def determinant(self) -> float:
        swaps = int(np.count_nonzero(self.piv != np.arange(self.piv.shape[0])))
        sign = -1.0 if swaps % 2 else 1.0
        return sign * float(np.prod(self.pivots))

    def is_singular(self, relative_pivot: float) -> bool:
        if self.norm_inf == 0.0:
            return True
        return bool(np.min(np.abs(self.pivots)) < relative_pivot * self.norm_inf)


def lu_factorize(x: ArrayLike) -> LUFactorization:
    X = as_square(x)
    if X.shape[0] == 0:
        raise LinalgError("matrix must not be empty")
    with warnings.catch_warnings():
        # Exactly singular input is reported through the pivots instead.
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(X, check_finite=False)
    return LUFactorization(lu=lu, piv=piv, norm_inf=float(np.max(np.sum(np.abs(X), axis=1))))


def determinant(x: ArrayLike) -> float:
    """
    Determinant from the LU pivots; singular input yields 0 or a tiny value.
    """
    return lu_factorize(x).determinant()


def solve(x: ArrayLike, b: ArrayLike, *, tolerances: Tolerances = DEFAULT_TOLERANCES) -> FloatArray:
    """
    Solve x p = b by LU with partial pivoting.
    """
    factors = lu_factorize(x)
    rhs = np.asarray(b, dtype=np.float64)
    if rhs.shape != (factors.lu.shape[0],):
        raise LinalgError(f"right-hand side must have length {factors.lu.shape[0]}, got shape {rhs.shape}")
    if factors.is_singular(tolerances.singular_pivot):
        smallest = float(np.min(np.abs(factors.pivots)))
        raise SingularMatrixError(f"matrix is singular to working precision (smallest pivot {smallest:.3e})")
    return scipy.linalg.lu_solve((factors.lu, factors.piv), rhs, check_finite=False)


def characteristic_polynomial(x: ArrayLike) -> FloatArray:
    """
    Coefficients of det(t I - x), highest degree first (Faddeev-LeVerrier).
    """
    X = as_square(x)
    n = X.shape[0]
    identity = np.eye(n)
    coefficients = [1.0]
    M = np.zeros_like(X)
    for k in range(1, n + 1):
        M = X @ M + coefficients[-1] * identity
        coefficients.append(-float(np.trace(X @ M)) / k)
    return np.asarray(coefficients)


def _last_sign_change(coefficients: FloatArray, grid: FloatArray) -> float | None:
    values = np.polyval(coefficients, grid)
    exact = np.flatnonzero(values == 0.0)
    changes = np.flatnonzero(np.sign(values[:-1]) * np.sign(values[1:]) < 0)
    best_exact = float(grid[exact[-1]]) if exact.size else None
    if not changes.size:
        return best_exact
    k = int(changes[-1])
    root = float(brentq(lambda t: float(np.polyval(coefficients, t)), grid[k], grid[k + 1], xtol=1e-15, rtol=ROOT_RTOL))
    return root if best_exact is None else max(root, best_exact)


def dominant_real_root(coefficients: ArrayLike, *, upper: float, samples: int = 4096) -> float | None:
    """
    Largest real root of a polynomial on [0, upper] by sign scan and bracketing.

    Roots of even multiplicity show no sign change; they are found as sign
    changes of a derivative at which the polynomial itself vanishes.
    """
    poly = np.asarray(coefficients, dtype=np.float64)
    if upper <= 0:
        return 0.0 if poly[-1] == 0.0 else None
    grid = np.linspace(0.0, upper, samples)
    magnitude = float(np.polyval(np.abs(poly), upper)) or 1.0
    best: float | None = None
    derivative = poly
    for _ in range(poly.shape[0] - 1):
        root = _last_sign_change(derivative, grid)
        if root is not None and abs(float(np.polyval(poly, root))) <= 1e-9 * magnitude:
            best = root if best is None else max(best, root)
        derivative = np.polyder(derivative)
    return best


@dataclass(frozen=True, eq=False)
class PerronResult:
    """
    Spectral radius and the matching nonnegative eigenvector (unit 1-norm).
    """

    lambda_star: float
    vector: FloatArray
    iterations: int
    converged: bool
    method: PerronMethod = "power"

    def residual(self, x: ArrayLike) -> float:
        X = np.asarray(x, dtype=np.float64)
        return float(np.max(np.abs(X @ self.vector - self.lambda_star * self.vector)))

    def is_positive(self) -> bool:
        return bool(np.all(self.vector > 0))


def check_nonnegative(x: ArrayLike) -> FloatArray:
    X = as_square(x)
    if np.any(X < 0):
        raise NegativeEntryError(f"matrix must be nonnegative, minimum entry is {float(X.min()):.3e}")
    return X


def is_nilpotent(x: ArrayLike) -> bool:
    """
    True when the support graph of a nonnegative matrix has no cycle.
    """
    reach = (np.asarray(x) > 0).astype(np.float64)
    n = reach.shape[0]
    length = 1
    while length < n:
        reach = np.minimum(reach @ reach, 1.0)
        length *= 2
    return not reach.any()


def spectral_radius(x: ArrayLike, *, tolerances: Tolerances = DEFAULT_TOLERANCES) -> PerronResult:
    """
    Spectral radius and Perron vector of a nonnegative matrix.

    Power iteration on x + s I with the Rayleigh quotient as the estimate.
    The shift s follows the running estimate, floored at power_shift times
    the largest entry, so eigenvalues on the spectral circle other than the
    radius itself are damped and periodic matrices converge.
    """
    X = check_nonnegative(x)
    n = X.shape[0]
    uniform = np.full(n, 1.0 / n)
    scale = float(X.max()) if n else 0.0
    if scale == 0.0 or is_nilpotent(X):
        return PerronResult(lambda_star=0.0, vector=uniform, iterations=0, converged=True, method="nilpotent")

    floor = tolerances.power_shift * scale
    v = uniform
    lam_prev = float("nan")
    lam = 0.0
    for iteration in range(1, tolerances.power_max_iter + 1):
        Xv = X @ v
        lam = float(v @ Xv) / float(v @ v)
        residual = float(np.max(np.abs(Xv - lam * v)))
        if abs(lam - lam_prev) <= tolerances.power_tol * abs(lam) and residual <= tolerances.residual_tol * max(
            1.0, lam
        ):
            return PerronResult(lambda_star=lam, vector=v, iterations=iteration, converged=True)
        shifted = Xv + max(floor, lam) * v
        v = shifted / shifted.sum()
        lam_prev = lam

    if n <= tolerances.charpoly_fallback_max_n:
        upper = float(np.max(X.sum(axis=1))) * (1.0 + 1e-9) + floor
        root = dominant_real_root(characteristic_polynomial(X), upper=upper, samples=tolerances.charpoly_samples)
        if root is not None:
            logger.warning("perron_unconverged", n=n, fallback="charpoly", estimate=lam, root=root)
            return PerronResult(
                lambda_star=root,
                vector=v,
                iterations=tolerances.power_max_iter,
                converged=False,
                method="charpoly",
            )

    logger.warning("perron_unconverged", n=n, fallback=None, estimate=lam)
    return PerronResult(lambda_star=lam, vector=v, iterations=tolerances.power_max_iter, converged=False)
