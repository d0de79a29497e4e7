"""Search ellipse construction: right-hand sides, (vdot, vddot), evaluation.

The next iterate is searched along

    v(alpha) = v - vdot sin(alpha) + vddot (1 - cos(alpha)),  alpha in [0, pi/2],

whose derivatives at alpha = 0 match the first two derivatives of the
homotopy path from the current iterate to a KKT point. vdot solves
K vdot = k(v) - sigma mu e_bar and vddot solves K vddot = rhs2 with the same
matrix K = k'(v), where rhs2 depends on the chosen mode:

    full:       (-(D^3 L)[.,xd,xd] + 2 sum ydot_i hess_h_i xd
                                   + 2 sum wdot_i hess_g_i xd,
                 -[xd^T hess_h_i xd], -[xd^T hess_g_i xd], 0, -2 zdot.*sdot)
    third-free: same with the (D^3 L) term dropped
    naive:      (0, 0, 0, 0, -2 zdot.*sdot)

naive exists to reproduce a negative finding (it inflates iteration counts)
and is never a default.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ContractViolationError
from .kkt import KktResidual
from .linsys import Counters
from .model import (Iterate, NlpProblem, contract_hess_g, contract_hess_h,
                    d3_lagrangian_dir, quad_form_g, quad_form_h, split_v)

Array = np.ndarray

RHS_MODES = ("full", "third-free", "naive")


@dataclass(frozen=True)
class ArcState:
    """The pair (vdot, vddot) defining the ellipse, with its centering context."""

    vdot: Array
    vddot: Array
    sigma: float
    mu: float
    rhs_mode: str
    n: int
    m: int
    p: int

    def split_dot(self):
        return split_v(self.vdot, self.n, self.m, self.p)

    def split_ddot(self):
        return split_v(self.vddot, self.n, self.m, self.p)


def first_order_rhs(res: KktResidual, sigma: float, mu: float) -> Array:
    """Stacked rhs (r_L, r_h, r_g, r_wz, r_comp - sigma mu e)."""
    if not (0.0 <= sigma < 1.0):
        raise ContractViolationError(f"sigma={sigma} outside [0,1)")
    if mu < 0.0:
        raise ContractViolationError(f"mu={mu} negative")
    return np.concatenate([
        res.r_L, res.r_h, res.r_g, res.r_wz,
        res.r_comp - sigma * mu * np.ones_like(res.r_comp),
    ])


def second_order_rhs(prob: NlpProblem, v: Iterate, vdot: Array, mode: str,
                     counters: Counters | None = None) -> Array:
    """Build the variant rhs for the vddot system from a solved vdot."""
    if mode not in RHS_MODES:
        raise ContractViolationError(f"unknown rhs mode {mode!r}")
    n, m, p = prob.n, prob.m, prob.p
    xd, yd, wd, sd, zd = split_v(np.asarray(vdot, dtype=float), n, m, p)

    comp_row = -2.0 * zd * sd
    if mode == "naive":
        return np.concatenate([np.zeros(n), np.zeros(m), np.zeros(p),
                               np.zeros(p), comp_row])

    top = 2.0 * contract_hess_h(prob, v.x, yd, xd) + 2.0 * contract_hess_g(prob, v.x, wd, xd)
    if mode == "full":
        if counters is not None:
            counters.d3_calls += 1
        top = top - d3_lagrangian_dir(prob, v.x, v.y, v.w, xd)
    return np.concatenate([
        top,
        -quad_form_h(prob, v.x, xd),
        -quad_form_g(prob, v.x, xd),
        np.zeros(p),
        comp_row,
    ])


def eval_arc(v: Iterate, arc: ArcState, alpha: float) -> Iterate:
    """Point on the ellipse; alpha must lie in [0, pi/2].

    The sign convention makes the derivative at alpha = 0 equal to -vdot,
    mirroring the homotopy parameter running from t = 1 down to 0.
    """
    if not (0.0 <= alpha <= math.pi / 2 + 1e-15):
        raise ContractViolationError(f"alpha={alpha} outside [0, pi/2]")
    vec = v.stacked() - arc.vdot * math.sin(alpha) + arc.vddot * (1.0 - math.cos(alpha))
    return Iterate.from_stacked(vec, arc.n, arc.m, arc.p)


def complementarity_along_arc(i: int, v: Iterate, arc: ArcState, alpha: float) -> float:
    """Closed-form z_i(alpha) s_i(alpha), valid because rows 5 of both solves share Z, S.

    z_i s_i (1-sin a) + sigma mu sin a
      - (zdot_i sddot_i + zddot_i sdot_i) sin a (1-cos a)
      + (zddot_i sddot_i - zdot_i sdot_i) (1-cos a)^2
    """
    _, _, _, sd, zd = arc.split_dot()
    _, _, _, sdd, zdd = arc.split_ddot()
    sa = math.sin(alpha)
    ca = math.cos(alpha)
    return (
        v.z[i] * v.s[i] * (1.0 - sa)
        + arc.sigma * arc.mu * sa
        - (zd[i] * sdd[i] + zdd[i] * sd[i]) * sa * (1.0 - ca)
        + (zdd[i] * sdd[i] - zd[i] * sd[i]) * (1.0 - ca) ** 2
    )
