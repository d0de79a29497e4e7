"""One factorization per iteration, many right-hand sides.

Both arc-derivative systems share the KKT matrix, so the row-pivoted LU
computed for the first solve is reused verbatim for the second. Singular or
badly conditioned matrices get a diagonal shift on the Lagrangian-Hessian
block only (primal regularization), escalating by factors of ten.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla
from scipy.linalg import get_lapack_funcs

from .errors import ContractViolationError, FactorizationError
from .kkt import KktMatrix

Array = np.ndarray

_SQRT_EPS = float(np.sqrt(np.finfo(float).eps))


@dataclass
class Counters:
    """Instrumentation shared by one solve call.

    factorizations counts factorize() events (one per iteration); lu_sweeps
    counts raw LU decompositions including regularization retries.
    """

    factorizations: int = 0
    lu_sweeps: int = 0
    kkt_solves: int = 0
    lsq_solves: int = 0
    d3_calls: int = 0


@dataclass(frozen=True)
class RegPolicy:
    lambda0: float = 1e-8
    growth: float = 10.0
    lambda_max: float = 1e6
    rcond_min: float = _SQRT_EPS  # regularize when rcond drops below sqrt(eps)


@dataclass(frozen=True)
class KktFactorization:
    lu: Array
    piv: Array
    dim: int
    regularization_lambda: float
    condition_flag: str  # "ok" | "regularized"
    a_reg: Array = field(repr=False)  # regularized matrix, kept for residual checks


def _rcond_1norm(lu: Array, anorm: float) -> float:
    # LAPACK gecon estimates 1/cond_1 from the LU factors; 0.0 means singular
    gecon = get_lapack_funcs(("gecon",), (lu,))[0]
    rcond, info = gecon(lu, anorm, norm="1")
    if info != 0:
        return 0.0
    return float(rcond)


def factorize(a: KktMatrix, policy: RegPolicy = RegPolicy(),
              counters: Counters | None = None) -> KktFactorization:
    """LU-factorize the KKT matrix, shifting the hess_L block if needed.

    The shift lambda starts at policy.lambda0 and escalates by policy.growth
    while the estimated reciprocal condition stays below policy.rcond_min.
    When no rung of the ladder clears the threshold the best-conditioned
    usable factorization is returned anyway (the degeneracy then sits outside
    the shifted block, so a larger shift cannot repair it); only a matrix
    that stays numerically singular through lambda_max raises
    FactorizationError.
    """
    if counters is not None:
        counters.factorizations += 1
    dim = a.dim
    ladder = [0.0, policy.lambda0]
    while ladder[-1] < policy.lambda_max:
        ladder.append(min(ladder[-1] * policy.growth, policy.lambda_max))
    best = None
    best_rcond = 0.0
    for lam in ladder:
        m = a.a if lam == 0.0 else _shifted(a, lam)
        anorm = float(np.linalg.norm(m, 1))
        try:
            if counters is not None:
                counters.lu_sweeps += 1
            with warnings.catch_warnings():
                # a singular rung is handled by the ladder, not worth a warning
                warnings.simplefilter("ignore", sla.LinAlgWarning)
                lu, piv = sla.lu_factor(m)
            rcond = _rcond_1norm(lu, anorm) if anorm > 0.0 else 0.0
            usable = bool(np.all(np.isfinite(lu))) and rcond > 0.0
        except (sla.LinAlgError, ValueError):
            usable = False
        if not usable:
            continue
        flag = "ok" if lam == 0.0 else "regularized"
        if rcond >= policy.rcond_min:
            return KktFactorization(lu=lu, piv=piv, dim=dim,
                                    regularization_lambda=lam,
                                    condition_flag=flag, a_reg=m)
        if rcond > best_rcond:
            best_rcond = rcond
            best = KktFactorization(lu=lu, piv=piv, dim=dim,
                                    regularization_lambda=lam,
                                    condition_flag=flag, a_reg=m)
    if best is not None:
        return best
    raise FactorizationError(ladder[-1])


def _shifted(a: KktMatrix, lam: float) -> Array:
    m = a.a.copy()
    idx = np.arange(a.n)
    m[idx, idx] += lam
    return m


def solve(fac: KktFactorization, rhs: Array, counters: Counters | None = None) -> Array:
    rhs = np.asarray(rhs, dtype=float)
    if rhs.shape != (fac.dim,):
        raise ContractViolationError(f"rhs has shape {rhs.shape}, want ({fac.dim},)")
    if counters is not None:
        counters.kkt_solves += 1
    return sla.lu_solve((fac.lu, fac.piv), rhs)


def least_squares_y(jh: Array, r: Array, counters: Counters | None = None
                    ) -> tuple[Array, bool]:
    """Minimize ||jh @ y - r|| via pivoted orthogonal factorization.

    Returns (y, rank_deficient). Rank deficiency falls back to the
    minimum-norm solution, which gelsy produces directly.
    """
    jh = np.asarray(jh, dtype=float)
    r = np.asarray(r, dtype=float)
    if jh.ndim != 2 or jh.shape[0] != r.size:
        raise ContractViolationError("least_squares_y shapes disagree")
    if jh.shape[1] == 0:
        return np.zeros(0), False
    if counters is not None:
        counters.lsq_solves += 1
    # explicit threshold: the driver default can miss exactly dependent columns
    cond = np.finfo(float).eps * max(jh.shape)
    y, _, rank, _ = sla.lstsq(jh, r, cond=cond, lapack_driver="gelsy")
    return y, rank < jh.shape[1]
