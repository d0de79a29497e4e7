"""Positivity, feasibility, merit and neighborhood bounds on the step angle."""

from __future__ import annotations

import math

import numpy as np
import pytest

from arcopt import (ArcState, ContractViolationError, StepStallError,
                    alpha_positivity, eval_arc, residual, select_step)
from arcopt.kkt import margin_from_phi
from arcopt.model import make_iterate
from arcopt.problems.registry import get_problem
from arcopt.stepsize import (ALPHA_FLOOR, alpha_feasibility, alpha_merit,
                             alpha_neighborhood)
from support import collect_arcs, entry_config, ring_problem


def test_positivity_known_angles():
    # c(a) = 1 - sin a crosses 1/2 at a = pi/6
    assert alpha_positivity([1.0], [1.0], [0.0], 0.5) == pytest.approx(
        math.pi / 6, rel=1e-14)
    # c(a) = cos a crosses 1/2 at a = pi/3
    assert alpha_positivity([1.0], [0.0], [-1.0], 0.5) == pytest.approx(
        math.pi / 3, rel=1e-14)


def test_positivity_growing_component_allows_quarter_turn():
    assert alpha_positivity([1.0], [-1.0], [0.0], 0.5) == math.pi / 2
    assert alpha_positivity([2.0], [0.0], [0.0], 0.9) == math.pi / 2


def test_positivity_takes_componentwise_minimum():
    got = alpha_positivity([1.0, 1.0, 2.0], [1.0, 0.0, -1.0],
                           [0.0, -1.0, 0.0], 0.5)
    assert got == pytest.approx(math.pi / 6, rel=1e-14)


def test_positivity_guards():
    with pytest.raises(ContractViolationError):
        alpha_positivity([1.0, 0.0], [0.0, 0.0], [0.0, 0.0], 0.5)
    with pytest.raises(ContractViolationError):
        alpha_positivity([1.0], [0.0], [0.0], 1.0)
    with pytest.raises(ContractViolationError):
        alpha_positivity([1.0], [0.0], [0.0], -0.1)


def test_positivity_against_grid_scan():
    # Random component triples against a dense scan of the quarter turn;
    # the closed form must land within one grid step of the scanned boundary.
    rng = np.random.default_rng(1234)
    step = 1e-4
    grid = np.arange(0.0, np.pi / 2 + step, step)
    grid[-1] = np.pi / 2
    sin_g = np.sin(grid)
    omc_g = 1.0 - np.cos(grid)
    for _ in range(200):
        dim = int(rng.integers(1, 5))
        c = rng.uniform(0.05, 5.0, dim)
        scale = 10.0 ** rng.uniform(-1.0, 1.0)
        cdot = rng.normal(0.0, scale, dim)
        cddot = rng.normal(0.0, scale, dim)
        delta1 = rng.uniform(0.0, 0.9)
        got = alpha_positivity(c, cdot, cddot, delta1)
        vals = c[None, :] - np.outer(sin_g, cdot) + np.outer(omc_g, cddot)
        ok = np.all(vals >= delta1 * c[None, :] - 1e-12, axis=1)
        bad = np.flatnonzero(~ok)
        scanned = grid[-1] if bad.size == 0 else grid[max(bad[0] - 1, 0)]
        assert abs(got - scanned) <= step


def _still_arc(prob, v) -> ArcState:
    dim = prob.n + prob.m + 3 * prob.p
    return ArcState(vdot=np.zeros(dim), vddot=np.zeros(dim), sigma=0.1,
                    mu=1.0, rhs_mode="full", n=prob.n, m=prob.m, p=prob.p)


def test_feasibility_keeps_start_when_already_feasible():
    prob = ring_problem()
    v = make_iterate(prob, np.array([2.0, 1.0]))
    alpha, count = alpha_feasibility(prob, v, _still_arc(prob, v), v.s,
                                     0.01, math.pi / 2)
    assert alpha == math.pi / 2
    assert count == 0


def test_feasibility_backtracks_geometrically():
    prob = ring_problem()
    v = make_iterate(prob, np.array([2.0, 1.0]))
    dim = prob.n + prob.m + 3 * prob.p
    vdot = np.zeros(dim)
    vdot[:2] = [8.0, 8.0]  # drives x toward the infeasible quadrant
    arc = ArcState(vdot=vdot, vddot=np.zeros(dim), sigma=0.1, mu=1.0,
                   rhs_mode="full", n=prob.n, m=prob.m, p=prob.p)
    start = math.pi / 2
    alpha, count = alpha_feasibility(prob, v, arc, v.s, 0.01, start,
                                     factor=0.8)
    assert count > 0
    assert alpha == pytest.approx(start * 0.8**count, rel=1e-15)
    floor_vec = 0.01 * v.s
    for j in range(1, 10):
        gv = prob.g_val(eval_arc(v, arc, alpha * j / 9.0).x)
        assert np.all(gv >= floor_vec)
    # the rejected start dips below the floor at one of its nine samples
    start_ok = all(
        np.all(prob.g_val(eval_arc(v, arc, start * j / 9.0).x) >= floor_vec)
        for j in range(1, 10))
    assert not start_ok


def test_merit_stalls_on_motionless_arc():
    prob = ring_problem()
    v = make_iterate(prob, np.array([2.0, 1.0]))
    phi = residual(prob, v).merit
    with pytest.raises(StepStallError) as exc:
        alpha_merit(prob, v, _still_arc(prob, v), phi, rho=0.25, sigma=0.1,
                    delta2=0.0, alpha_start=1.0)
    assert exc.value.condition == "merit decrease"
    assert exc.value.alpha < ALPHA_FLOOR
    assert "phi gap" in str(exc.value)


def test_merit_rejects_bad_rho():
    prob = ring_problem()
    v = make_iterate(prob, np.array([2.0, 1.0]))
    for rho in (0.0, 0.5, -0.2):
        with pytest.raises(ContractViolationError):
            alpha_merit(prob, v, _still_arc(prob, v), 1.0, rho=rho,
                        sigma=0.1, delta2=0.0, alpha_start=1.0)


def test_select_step_bounds_nest_on_solver_arcs():
    for name, variant in [("HS16", 3), ("HS23", 1), ("HS80", 3),
                          ("HS32", 2)]:
        entry = get_problem(name)
        cfg = entry_config(entry, variant=variant)
        report, triples = collect_arcs(entry.problem,
                                       entry.initial_iterate(), cfg)
        assert report.converged
        assert triples
        for (v, arc, _), rec in zip(triples, report.iterations):
            got = select_step(entry.problem, v, arc, report.ref, cfg)
            assert got.alpha_hat <= got.alpha_check <= got.alpha_bar \
                <= got.alpha_tilde
            assert got.alpha_k == got.alpha_hat
            # accepted angle never exceeds the composed bound
            assert rec.alpha_accepted <= got.alpha_k * (1.0 + 1e-12)


def test_select_step_conditions_hold_at_returned_angle():
    entry = get_problem("HS16")
    cfg = entry_config(entry)
    report, triples = collect_arcs(entry.problem, entry.initial_iterate(),
                                   cfg)
    for v, arc, _ in triples:
        got = select_step(entry.problem, v, arc, report.ref, cfg)
        a = got.alpha_k
        phi = residual(entry.problem, v).merit
        va = eval_arc(v, arc, a)
        phi_a = residual(entry.problem, va).merit
        bound = phi * (1.0 - 2.0 * cfg.rho * (1.0 - arc.sigma) * math.sin(a))
        assert phi_a <= bound - cfg.delta2
        assert margin_from_phi(phi_a, va.z * va.s, report.ref) >= 0.0
        assert np.all(va.w >= cfg.delta1 * v.w)


def test_neighborhood_backtrack_returns_satisfying_angle():
    entry = get_problem("HS23")
    cfg = entry_config(entry)
    report, triples = collect_arcs(entry.problem, entry.initial_iterate(),
                                   cfg)
    v, arc, _ = triples[0]
    alpha, _ = alpha_neighborhood(entry.problem, v, arc, report.ref,
                                  alpha_start=math.pi / 2)
    va = eval_arc(v, arc, alpha)
    phi_a = residual(entry.problem, va).merit
    assert margin_from_phi(phi_a, va.z * va.s, report.ref) >= 0.0
