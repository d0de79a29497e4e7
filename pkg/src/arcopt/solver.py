"""Main iteration loop for the three arc-search variants.

Each iteration factorizes the KKT Jacobian once and solves two systems with
it: one for vdot (first-order, with centering) and one for vddot (variant
right-hand side). A step is selected along the resulting ellipse, then

    variant 1     moves the whole stacked point along the arc,
    variants 2,3  move (x, w) along the arc and warm-restart the rest:
                  s = g(x+), z = w+, y = argmin ||jac_h y - (grad f - jac_g w+)||.

Variant 1 and 2 build the full second-order right-hand side (third-order
directional terms included); variant 3 drops the third-order term and never
touches a third-order oracle.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field, replace

import numpy as np

from . import kkt
from .arc import ArcState, eval_arc, first_order_rhs, second_order_rhs
from .errors import (ContractViolationError, EvaluationError,
                     FactorizationError, InitializationError, StepStallError)
from .kkt import NeighborhoodRef, margin_from_phi
from .linsys import Counters, RegPolicy, factorize, least_squares_y, solve as lin_solve
from .model import Iterate, NlpProblem, eval_lagrangian_hessian, make_iterate
from .stepsize import ALPHA_FLOOR, StepBreakdown, select_step

Array = np.ndarray

CONVERGED = "Converged"
MAX_ITER = "MaxIter"
STALLED = "Stalled"
FACTORIZATION_FAILED = "FactorizationFailed"


@dataclass(frozen=True)
class SolverConfig:
    variant: int = 3
    epsilon: float = 1e-8
    max_iter: int = 500
    delta1: float = 0.01
    delta2: float = 0.0
    rho: float = 0.25
    sigma_bar: float = 1e-3
    sigma_cap_override: float | None = None
    backtrack_factor: float = 0.8
    reg: RegPolicy = field(default_factory=RegPolicy)
    rhs_mode: str | None = None  # None picks the variant default

    def __post_init__(self):
        if self.variant not in (1, 2, 3):
            raise ContractViolationError(f"variant must be 1, 2 or 3, got {self.variant}")
        if not self.epsilon > 0.0:
            raise ContractViolationError(f"epsilon={self.epsilon} must be > 0")
        if self.max_iter < 1:
            raise ContractViolationError("max_iter must be >= 1")
        if not (0.0 < self.rho < 0.5):
            raise ContractViolationError(f"rho={self.rho} outside (0, 1/2)")
        if not (0.0 < self.delta1 < 1.0):
            raise ContractViolationError(f"delta1={self.delta1} outside (0, 1)")
        if self.delta2 < 0.0:
            raise ContractViolationError(f"delta2={self.delta2} must be >= 0")
        if not (0.0 < self.backtrack_factor < 1.0):
            raise ContractViolationError("backtrack_factor must lie in (0, 1)")
        if not (0.0 <= self.sigma_bar < self.sigma_cap):
            raise ContractViolationError(
                f"sigma_bar={self.sigma_bar} outside [0, {self.sigma_cap})")
        if self.rhs_mode is not None and self.rhs_mode not in ("full", "third-free", "naive"):
            raise ContractViolationError(f"unknown rhs_mode {self.rhs_mode!r}")

    @property
    def sigma_cap(self) -> float:
        if self.sigma_cap_override is not None:
            return self.sigma_cap_override
        return 0.5 if self.variant == 1 else 0.125

    @property
    def effective_rhs_mode(self) -> str:
        if self.rhs_mode is not None:
            return self.rhs_mode
        return "full" if self.variant in (1, 2) else "third-free"


@dataclass
class IterationRecord:
    k: int
    phi: float
    mu: float
    sigma: float
    step: StepBreakdown
    alpha_accepted: float
    reg_lambda: float
    seconds: float
    factorizations: int
    kkt_solves: int
    lsq_solves: int
    d3_calls: int
    restart_retries: int = 0
    rank_deficient: bool = False


@dataclass
class SolveReport:
    problem: str
    variant: int
    status: str
    iterate: Iterate
    phi: float
    objective: float
    iterations: list[IterationRecord]
    counters: Counters
    seconds: float
    ref: NeighborhoodRef | None
    hess_min_eig: float  # diagnostic only: smallest eigenvalue of hess_L at exit
    message: str = ""

    @property
    def niter(self) -> int:
        return len(self.iterations)

    @property
    def converged(self) -> bool:
        return self.status == CONVERGED


def init_check(prob: NlpProblem, v0: Iterate) -> Iterate:
    """Validate or repair the initial point.

    Requires g(x0) > 0 (InitializationError naming the first bad component
    otherwise) and (w0, s0, z0) > 0; silently enforces z0 = w0.
    """
    g0 = prob.g_val(v0.x)
    for i, gi in enumerate(g0):
        if not gi > 0.0:
            raise InitializationError(i, float(gi))
    for nm, vec in (("w0", v0.w), ("s0", v0.s), ("z0", v0.z)):
        if np.any(np.asarray(vec) <= 0.0):
            raise ContractViolationError(f"{nm} must be strictly positive")
    if not np.array_equal(v0.w, v0.z):
        v0 = replace(v0, z=v0.w.copy())
    return v0


def select_sigma(phi: float, mu: float, p: int, cfg: SolverConfig) -> float:
    """Centering parameter: sigma_bar <= sigma < min(variant cap, phi p / mu^2).

    Mild centering 0.1 capped just below the bound; if that falls under
    sigma_bar, use sigma_bar itself unless half the cap is smaller.
    """
    cap = cfg.sigma_cap if mu == 0.0 else min(cfg.sigma_cap, phi * p / (mu * mu))
    sigma = min(0.1, 0.99 * cap)
    if sigma < cfg.sigma_bar:
        sigma = min(cfg.sigma_bar, 0.5 * cap)
    return sigma


def warm_restart(prob: NlpProblem, x_next: Array, w_next: Array,
                 counters: Counters | None = None) -> tuple[Array, Array, Array, bool]:
    """Post-step reset: s = g(x+), z = w+, y from the stationarity least squares."""
    s_next = prob.g_val(x_next)
    if np.any(s_next <= 0.0):
        raise ContractViolationError(
            "warm restart reached g(x) <= 0; feasibility bound should prevent this")
    z_next = np.asarray(w_next, dtype=float).copy()
    if prob.m == 0:
        return np.zeros(0), s_next, z_next, False
    r = prob.grad_f(x_next) - prob.jac_g(x_next) @ w_next
    y_next, rank_deficient = least_squares_y(prob.jac_h(x_next), r, counters)
    return y_next, s_next, z_next, rank_deficient


def iterate_once(prob: NlpProblem, v: Iterate, ref: NeighborhoodRef,
                 cfg: SolverConfig, counters: Counters, k: int = 0
                 ) -> tuple[Iterate, IterationRecord]:
    """One full iteration of the selected variant; v must be interior with phi > epsilon."""
    t0 = time.perf_counter()
    res = kkt.residual(prob, v)
    phi = res.merit
    mu = kkt.dual_measure(v.z, v.s)
    sigma = select_sigma(phi, mu, prob.p, cfg)

    fac = factorize(kkt.jacobian(prob, v), cfg.reg, counters)
    vdot = lin_solve(fac, first_order_rhs(res, sigma, mu), counters)
    rhs2 = second_order_rhs(prob, v, vdot, cfg.effective_rhs_mode, counters)
    vddot = lin_solve(fac, rhs2, counters)
    arc = ArcState(vdot=vdot, vddot=vddot, sigma=sigma, mu=mu,
                   rhs_mode=cfg.effective_rhs_mode, n=prob.n, m=prob.m, p=prob.p)

    step = select_step(prob, v, arc, ref, cfg)
    alpha = step.alpha_k
    retries = 0
    rank_deficient = False

    if cfg.variant == 1:
        va = eval_arc(v, arc, alpha)
        # z(alpha) = w(alpha) holds exactly in theory on maintained iterates;
        # copy w into z so the invariant survives factorization roundoff
        v_next = Iterate(x=va.x, y=va.y, w=va.w, s=va.s, z=va.w.copy())
        if np.any(v_next.w <= 0.0) or np.any(v_next.s <= 0.0):
            raise StepStallError("positivity after full-arc update", alpha)
    else:
        # warm restart can in principle raise phi or leave the neighborhood;
        # verify the restarted point and shrink alpha until both hold
        while True:
            va = eval_arc(v, arc, alpha)
            g_next = prob.g_val(va.x)
            if np.all(np.isfinite(g_next)) and np.all(g_next > 0.0) and np.all(va.w > 0.0):
                y1, s1, z1, rank_deficient = warm_restart(prob, va.x, va.w, counters)
                v_next = Iterate(x=va.x, y=y1, w=va.w, s=s1, z=z1)
                try:
                    res1 = kkt.residual(prob, v_next)
                except EvaluationError:
                    res1 = None
                if res1 is not None:
                    phi1 = res1.merit
                    if phi1 < phi and margin_from_phi(phi1, z1 * s1, ref) >= 0.0:
                        break
            alpha *= cfg.backtrack_factor
            retries += 1
            if alpha < ALPHA_FLOOR:
                raise StepStallError("post-restart acceptance", alpha)

    rec = IterationRecord(
        k=k, phi=phi, mu=mu, sigma=sigma, step=step, alpha_accepted=alpha,
        reg_lambda=fac.regularization_lambda,
        seconds=time.perf_counter() - t0,
        factorizations=counters.factorizations, kkt_solves=counters.kkt_solves,
        lsq_solves=counters.lsq_solves, d3_calls=counters.d3_calls,
        restart_retries=retries, rank_deficient=rank_deficient,
    )
    return v_next, rec, arc


def solve(prob: NlpProblem, v0: Iterate | Array, cfg: SolverConfig = SolverConfig(),
          observer=None) -> SolveReport:
    """Run the configured variant from v0 until phi <= epsilon, stall, or max_iter.

    v0 may be a bare x vector; missing blocks get the documented defaults
    (y = 0, w = z = ones, s = g(x)). All failure modes land in the report
    status, except a non-interior start which raises InitializationError.
    observer, if given, is called as observer(k, v, arc, v_next, record)
    after every accepted iteration.
    """
    if not isinstance(v0, Iterate):
        v0 = make_iterate(prob, np.asarray(v0, dtype=float))
    v = init_check(prob, v0)
    counters = Counters()
    t0 = time.perf_counter()

    res0 = kkt.residual(prob, v)
    phi = res0.merit
    records: list[IterationRecord] = []
    message = ""

    if phi <= cfg.epsilon:
        return _report(prob, cfg, CONVERGED, v, phi, records, counters,
                       time.perf_counter() - t0, None, message)

    ref = NeighborhoodRef(min_comp0=float(np.min(v.z * v.s)), phi0=phi)
    status = MAX_ITER
    for k in range(cfg.max_iter):
        phi = kkt.residual(prob, v).merit
        if phi <= cfg.epsilon:
            status = CONVERGED
            break
        # counters snapshot so the record carries per-iteration deltas
        before = Counters(**vars(counters))
        v_prev = v
        try:
            v, rec, arc = iterate_once(prob, v, ref, cfg, counters, k)
        except StepStallError as e:
            status = STALLED
            message = str(e)
            break
        except FactorizationError as e:
            status = FACTORIZATION_FAILED
            message = str(e)
            break
        except EvaluationError as e:
            status = STALLED
            message = f"evaluation failed at accepted iterate: {e}"
            break
        rec.factorizations -= before.factorizations
        rec.kkt_solves -= before.kkt_solves
        rec.lsq_solves -= before.lsq_solves
        rec.d3_calls -= before.d3_calls
        records.append(rec)
        if observer is not None:
            observer(k, v_prev, arc, v, rec)
    else:
        phi = kkt.residual(prob, v).merit
        if phi <= cfg.epsilon:
            status = CONVERGED

    phi = kkt.residual(prob, v).merit
    return _report(prob, cfg, status, v, phi, records, counters,
                   time.perf_counter() - t0, ref, message)


def _report(prob: NlpProblem, cfg: SolverConfig, status: str, v: Iterate,
            phi: float, records: list[IterationRecord], counters: Counters,
            seconds: float, ref: NeighborhoodRef | None, message: str) -> SolveReport:
    try:
        eigs = np.linalg.eigvalsh(eval_lagrangian_hessian(prob, v.x, v.y, v.w))
        min_eig = float(eigs[0])
    except np.linalg.LinAlgError:
        min_eig = float("nan")
    return SolveReport(
        problem=prob.name, variant=cfg.variant, status=status, iterate=v,
        phi=phi, objective=prob.f_val(v.x), iterations=records,
        counters=counters, seconds=seconds, ref=ref,
        hess_min_eig=min_eig, message=message,
    )
