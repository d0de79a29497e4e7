"""Step-size bounds along the arc.

Four nested bounds are computed in order, each starting from the previous:

    alpha_tilde  largest angle keeping the positive blocks above delta1
                 times their current values (closed form, per component),
    alpha_bar    largest tested angle keeping g(x(alpha)) >= delta1 * s,
    alpha_check  merit decrease phi(v(a)) <= phi (1 - 2 rho (1-sigma) sin a) - delta2,
    alpha_hat    neighborhood margin m_hat(v(a)) >= 0,

so alpha_hat <= alpha_check <= alpha_bar <= alpha_tilde and the step is the
minimum, which is alpha_hat. The merit and margin bounds share one
backtracking sweep; conditions that cannot be verified continuously are
checked at the candidate plus eight equispaced interior samples.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .arc import ArcState, eval_arc
from .errors import ContractViolationError, EvaluationError, StepStallError
from .kkt import NeighborhoodRef, margin_from_phi, residual
from .model import Iterate, NlpProblem

Array = np.ndarray

ALPHA_FLOOR = 1e-12
HALF_PI = math.pi / 2.0


@dataclass
class StepBreakdown:
    alpha_tilde: float
    alpha_bar: float
    alpha_check: float
    alpha_hat: float
    alpha_k: float
    backtrack_count: int


def _positive_roots(a: float, b: float, c: float) -> list[float]:
    """Positive real roots of a t^2 + b t + c, computed in a cancellation-safe form."""
    roots: list[float] = []
    if a == 0.0:
        if b != 0.0:
            roots.append(-c / b)
    else:
        disc = b * b - 4.0 * a * c
        if disc >= 0.0:
            sq = math.sqrt(disc)
            q = -0.5 * (b + math.copysign(sq, b)) if b != 0.0 else 0.5 * sq
            if q != 0.0:
                roots.extend((q / a, c / q))
            else:  # b == 0 and c == 0
                roots.append(0.0)
    return [t for t in roots if t > 0.0]


def _alpha_component(c: float, cdot: float, cddot: float, delta1: float) -> float:
    # boundary of c - cdot sin(a) + cddot (1-cos(a)) >= delta1 c under t = tan(a/2)
    kappa = (1.0 - delta1) * c
    roots = _positive_roots(kappa + 2.0 * cddot, -2.0 * cdot, kappa)
    if not roots:
        return HALF_PI
    t = min(roots)
    if t > 1.0:  # crossing happens past pi/2
        return HALF_PI
    return 2.0 * math.atan(t)


def alpha_positivity(c: Array, cdot: Array, cddot: Array, delta1: float) -> float:
    """Largest alpha <= pi/2 with c(a) >= delta1 * c on [0, alpha], componentwise.

    c(a) = c - cdot sin(a) + cddot (1 - cos(a)). The per-component boundary is
    the smallest positive root of (kappa + 2 cddot) t^2 - 2 cdot t + kappa with
    kappa = (1 - delta1) c and t = tan(a/2); no root in (0, 1] means the whole
    quarter arc is safe.
    """
    c = np.atleast_1d(np.asarray(c, dtype=float))
    cdot = np.atleast_1d(np.asarray(cdot, dtype=float))
    cddot = np.atleast_1d(np.asarray(cddot, dtype=float))
    if not (0.0 <= delta1 < 1.0):
        raise ContractViolationError(f"delta1={delta1} outside [0,1)")
    if np.any(c <= 0.0):
        raise ContractViolationError("alpha_positivity needs c > 0 on entry")
    out = HALF_PI
    for i in range(c.size):
        out = min(out, _alpha_component(c[i], cdot[i], cddot[i], delta1))
    return out


def _phi_at(prob: NlpProblem, v: Iterate, arc: ArcState, alpha: float) -> float | None:
    """Merit at v(alpha); None when evaluation leaves the callbacks' domain."""
    try:
        with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
            return residual(prob, eval_arc(v, arc, alpha)).merit
    except (EvaluationError, FloatingPointError, OverflowError, ValueError):
        return None


def _backtrack(alpha_start: float, ok, condition: str, factor: float,
               detail=lambda: "") -> tuple[float, int]:
    alpha = alpha_start
    count = 0
    while not ok(alpha):
        alpha *= factor
        count += 1
        if alpha < ALPHA_FLOOR:
            raise StepStallError(condition, alpha, detail())
    return alpha, count


def alpha_feasibility(prob: NlpProblem, v: Iterate, arc: ArcState, s_ref: Array,
                      delta1: float, alpha_start: float,
                      factor: float = 0.8) -> tuple[float, int]:
    """Largest tested alpha <= alpha_start with g(x(a)) >= delta1 * s_ref.

    The inequality is verified at the candidate and at eight equispaced
    interior samples of (0, candidate].
    """
    floor_vec = delta1 * np.asarray(s_ref, dtype=float)

    def ok(alpha: float) -> bool:
        for j in range(1, 10):  # j=9 is the candidate itself
            va = eval_arc(v, arc, alpha * j / 9.0)
            try:
                with np.errstate(over="ignore", invalid="ignore"):
                    gv = prob.g_val(va.x)
            except (FloatingPointError, OverflowError, ValueError):
                return False
            if not np.all(np.isfinite(gv)) or np.any(gv < floor_vec):
                return False
        return True

    return _backtrack(alpha_start, ok, "constraint feasibility g(x(alpha))", factor)


def alpha_merit(prob: NlpProblem, v: Iterate, arc: ArcState, phi_current: float,
                rho: float, sigma: float, delta2: float, alpha_start: float,
                factor: float = 0.8) -> tuple[float, int]:
    """Largest tested alpha with phi(v(a)) <= phi (1 - 2 rho (1-sigma) sin a) - delta2."""
    if not (0.0 < rho < 0.5):
        raise ContractViolationError(f"rho={rho} outside (0, 1/2)")
    last_gap = [float("nan")]

    def ok(alpha: float) -> bool:
        phi_a = _phi_at(prob, v, arc, alpha)
        if phi_a is None:
            return False
        bound = phi_current * (1.0 - 2.0 * rho * (1.0 - sigma) * math.sin(alpha)) - delta2
        last_gap[0] = phi_a - bound
        return phi_a <= bound

    return _backtrack(alpha_start, ok, "merit decrease", factor,
                      detail=lambda: f"last phi gap {last_gap[0]:.3e}")


def alpha_neighborhood(prob: NlpProblem, v: Iterate, arc: ArcState,
                       ref: NeighborhoodRef, alpha_start: float,
                       factor: float = 0.8) -> tuple[float, int]:
    """Largest tested alpha keeping min(Z(a)s(a)) above its merit-scaled floor."""

    def ok(alpha: float) -> bool:
        va = eval_arc(v, arc, alpha)
        phi_a = _phi_at(prob, v, arc, alpha)
        if phi_a is None:
            return False
        return margin_from_phi(phi_a, va.z * va.s, ref) >= 0.0

    return _backtrack(alpha_start, ok, "neighborhood margin", factor)


def select_step(prob: NlpProblem, v: Iterate, arc: ArcState, ref: NeighborhoodRef,
                cfg) -> StepBreakdown:
    """Compose the four bounds; cfg supplies variant, delta1, delta2, rho, backtrack_factor.

    Variant 1 bounds positivity over (w, s, z); variants 2 and 3 over w only,
    since z(alpha) = w(alpha) on maintained iterates and s is replaced by the
    warm restart. The merit and neighborhood conditions are backtracked
    jointly so the accepted angle satisfies both.
    """
    _, _, wd, sd, zd = arc.split_dot()
    _, _, wdd, sdd, zdd = arc.split_ddot()
    factor = cfg.backtrack_factor

    alpha_tilde = alpha_positivity(v.w, wd, wdd, cfg.delta1)
    if cfg.variant == 1:
        alpha_tilde = min(alpha_tilde,
                          alpha_positivity(v.s, sd, sdd, cfg.delta1),
                          alpha_positivity(v.z, zd, zdd, cfg.delta1))

    alpha_bar, n_bar = alpha_feasibility(prob, v, arc, v.s, cfg.delta1,
                                         alpha_tilde, factor)

    phi_current = residual(prob, v).merit
    coef = 2.0 * cfg.rho * (1.0 - arc.sigma)
    alpha = alpha_bar
    alpha_check = None
    count = n_bar
    last_gap = float("nan")
    while True:
        phi_a = _phi_at(prob, v, arc, alpha)
        merit_ok = False
        if phi_a is not None:
            bound = phi_current * (1.0 - coef * math.sin(alpha)) - cfg.delta2
            last_gap = phi_a - bound
            merit_ok = phi_a <= bound
        if merit_ok and alpha_check is None:
            alpha_check = alpha
        if merit_ok:
            va = eval_arc(v, arc, alpha)
            if margin_from_phi(phi_a, va.z * va.s, ref) >= 0.0:
                alpha_hat = alpha
                break
        alpha *= factor
        count += 1
        if alpha < ALPHA_FLOOR:
            which = "merit decrease" if alpha_check is None else "neighborhood margin"
            raise StepStallError(which, alpha, f"last phi gap {last_gap:.3e}")
    if alpha_check is None:
        alpha_check = alpha_hat

    alpha_k = min(alpha_tilde, alpha_bar, alpha_check, alpha_hat)
    return StepBreakdown(alpha_tilde=alpha_tilde, alpha_bar=alpha_bar,
                         alpha_check=alpha_check, alpha_hat=alpha_hat,
                         alpha_k=alpha_k, backtrack_count=count)
