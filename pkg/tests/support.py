"""Hand-sized problems with derivatives simple enough to check on paper."""

from __future__ import annotations

import numpy as np

from arcopt import Fn, NlpProblem, SolverConfig

Array = np.ndarray


def quad_fn() -> Fn:
    """f(x) = x1^2 + 2 x2^2 + x1 x2; all third derivatives vanish."""
    return Fn(
        value=lambda x: float(x[0] ** 2 + 2.0 * x[1] ** 2 + x[0] * x[1]),
        grad=lambda x: np.array([2.0 * x[0] + x[1], 4.0 * x[1] + x[0]]),
        hess=lambda x: np.array([[2.0, 1.0], [1.0, 4.0]]),
        d3=lambda x, d: np.zeros(2),
    )


def cubic_fn() -> Fn:
    """f(x) = x1^3 + x1^2 x2 with its exact third-order contraction."""
    return Fn(
        value=lambda x: float(x[0] ** 3 + x[0] ** 2 * x[1]),
        grad=lambda x: np.array([3.0 * x[0] ** 2 + 2.0 * x[0] * x[1], x[0] ** 2]),
        hess=lambda x: np.array([[6.0 * x[0] + 2.0 * x[1], 2.0 * x[0]],
                                 [2.0 * x[0], 0.0]]),
        d3=lambda x, d: np.array([6.0 * d[0] ** 2 + 4.0 * d[0] * d[1],
                                  2.0 * d[0] ** 2]),
    )


def parabola_eq_fn() -> Fn:
    """h(x) = x1 + x2^2 - 2."""
    return Fn(
        value=lambda x: float(x[0] + x[1] ** 2 - 2.0),
        grad=lambda x: np.array([1.0, 2.0 * x[1]]),
        hess=lambda x: np.array([[0.0, 0.0], [0.0, 2.0]]),
        d3=lambda x, d: np.zeros(2),
    )


def bilinear_ineq_fn() -> Fn:
    """g(x) = x1 x2 - 1/4 >= 0."""
    return Fn(
        value=lambda x: float(x[0] * x[1] - 0.25),
        grad=lambda x: np.array([x[1], x[0]]),
        hess=lambda x: np.array([[0.0, 1.0], [1.0, 0.0]]),
        d3=lambda x, d: np.zeros(2),
    )


def ring_problem() -> NlpProblem:
    """min x1^2 + 2 x2^2 + x1 x2  s.t.  x1 + x2^2 = 2,  x1 x2 >= 1/4.

    Quadratic objective, one curved equality, one bilinear inequality; every
    derivative through third order is written out by hand above, so the
    problem doubles as an oracle for residual, Jacobian and arc algebra.
    """
    return NlpProblem(n=2, m=1, p=1, f=quad_fn(),
                      h=(parabola_eq_fn(),), g=(bilinear_ineq_fn(),),
                      name="ring")


def curvy_problem() -> NlpProblem:
    """Same shape as ring but with nonvanishing third derivatives.

    min x1^3 + x1^2 x2  s.t.  x1^3 - x2 = 0,  x1 x2 >= 1/4.
    """
    h = Fn(
        value=lambda x: float(x[0] ** 3 - x[1]),
        grad=lambda x: np.array([3.0 * x[0] ** 2, -1.0]),
        hess=lambda x: np.array([[6.0 * x[0], 0.0], [0.0, 0.0]]),
        d3=lambda x, d: np.array([6.0 * d[0] ** 2, 0.0]),
    )
    return NlpProblem(n=2, m=1, p=1, f=cubic_fn(),
                      h=(h,), g=(bilinear_ineq_fn(),), name="curvy")


def entry_config(entry, variant: int = 3, **extra) -> SolverConfig:
    """SolverConfig carrying a benchmark entry's documented settings."""
    kw = dict(entry.config_overrides)
    if entry.eps_override is not None:
        kw.setdefault("epsilon", entry.eps_override)
    kw.update(extra)
    return SolverConfig(variant=variant, **kw)


def collect_arcs(prob, v0, cfg):
    """Solve and return (report, [(v, arc, v_next) per accepted iteration])."""
    from arcopt import solve

    triples = []

    def observer(k, v, arc, v_next, rec):
        triples.append((v, arc, v_next))

    report = solve(prob, v0, cfg, observer=observer)
    return report, triples
