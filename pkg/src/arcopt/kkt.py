"""KKT residual, merit function, dual measure, Jacobian, neighborhood margin.

The residual of the first-order conditions at v = (x, y, w, s, z) is

    k(v) = [ grad f - jac_h y - jac_g w   (r_L, n rows)
             h(x)                         (r_h, m rows)
             g(x) - s                     (r_g, p rows)
             w - z                        (r_wz, p rows)
             z .* s ]                     (r_comp, p rows)

and the merit function is phi(v) = ||k(v)||^2. Blocks are kept separate so
per-block identities stay testable; flattening order is fixed as above.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ContractViolationError, EvaluationError
from .model import Iterate, NlpProblem, eval_lagrangian_hessian

Array = np.ndarray


@dataclass(frozen=True)
class KktResidual:
    r_L: Array
    r_h: Array
    r_g: Array
    r_wz: Array
    r_comp: Array

    def flatten(self) -> Array:
        return np.concatenate([self.r_L, self.r_h, self.r_g, self.r_wz, self.r_comp])

    @property
    def merit(self) -> float:
        v = self.flatten()
        return float(v @ v)


@dataclass(frozen=True)
class KktMatrix:
    """Dense (n+m+3p) square Jacobian of k(v) with the displayed block layout.

    Row/column order (x, y, w, s, z):

        [ hess_L   -jac_h  -jac_g   0    0 ]
        [ jac_h^T    0       0      0    0 ]
        [ jac_g^T    0       0     -I    0 ]
        [   0        0       I      0   -I ]
        [   0        0       0      Z    S ]
    """

    a: Array
    n: int
    m: int
    p: int

    @property
    def dim(self) -> int:
        return self.n + self.m + 3 * self.p


def residual(prob: NlpProblem, v: Iterate) -> KktResidual:
    """Evaluate k(v); raises EvaluationError naming the offending block."""
    gf = prob.grad_f(v.x)
    r_L = gf - prob.jac_h(v.x) @ v.y - prob.jac_g(v.x) @ v.w
    r_h = prob.h_val(v.x)
    r_g = prob.g_val(v.x) - v.s
    r_wz = v.w - v.z
    r_comp = v.z * v.s
    res = KktResidual(r_L=r_L, r_h=r_h, r_g=r_g, r_wz=r_wz, r_comp=r_comp)
    for block in ("r_L", "r_h", "r_g", "r_wz", "r_comp"):
        if not np.all(np.isfinite(getattr(res, block))):
            raise EvaluationError(block)
    return res


def merit(res: KktResidual) -> float:
    return res.merit


def dual_measure(z: Array, s: Array) -> float:
    z = np.asarray(z, dtype=float)
    s = np.asarray(s, dtype=float)
    if z.size != s.size or z.size < 1:
        raise ContractViolationError("dual_measure needs matching p >= 1 vectors")
    return float(z @ s) / z.size


def jacobian(prob: NlpProblem, v: Iterate) -> KktMatrix:
    n, m, p = prob.n, prob.m, prob.p
    dim = n + m + 3 * p
    a = np.zeros((dim, dim))
    jh = prob.jac_h(v.x)
    jg = prob.jac_g(v.x)

    ix = slice(0, n)
    iy = slice(n, n + m)
    iw = slice(n + m, n + m + p)
    islk = slice(n + m + p, n + m + 2 * p)
    iz = slice(n + m + 2 * p, dim)

    a[ix, ix] = eval_lagrangian_hessian(prob, v.x, v.y, v.w)
    a[ix, iy] = -jh
    a[ix, iw] = -jg
    a[iy, ix] = jh.T
    a[iw, ix] = jg.T
    a[iw, islk] = -np.eye(p)
    a[islk, iw] = np.eye(p)
    a[islk, iz] = -np.eye(p)
    a[iz, islk] = np.diag(v.z)
    a[iz, iz] = np.diag(v.s)
    return KktMatrix(a=a, n=n, m=m, p=p)


@dataclass(frozen=True)
class NeighborhoodRef:
    """Run constants min(Z0 s0) and phi(v0) defining the retention set."""

    min_comp0: float
    phi0: float

    def __post_init__(self):
        if not (self.min_comp0 > 0.0 and self.phi0 > 0.0):
            raise ContractViolationError("neighborhood reference needs min(Z0 s0) > 0 and phi0 > 0")


def neighborhood_margin(res: KktResidual, comp: Array, ref: NeighborhoodRef) -> float:
    """m_hat = min(comp) - (1/2)(min_comp0/phi0) * phi; >= 0 keeps the iterate retained."""
    return margin_from_phi(res.merit, comp, ref)


def margin_from_phi(phi: float, comp: Array, ref: NeighborhoodRef) -> float:
    return float(np.min(comp)) - 0.5 * (ref.min_comp0 / ref.phi0) * phi
