"""Configuration, initialization, warm restart and the main loop."""

from __future__ import annotations

import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal

from arcopt import (ContractViolationError, InitializationError, SolverConfig,
                    init_check, solve)
from arcopt.model import Iterate, linear_fn, make_iterate, NlpProblem
from arcopt.problems.registry import get_problem
from arcopt.solver import select_sigma, warm_restart
from support import (bilinear_ineq_fn, entry_config, quad_fn, ring_problem)


def test_config_rejects_out_of_range_fields():
    bad = [
        dict(variant=4),
        dict(epsilon=0.0),
        dict(epsilon=-1e-8),
        dict(max_iter=0),
        dict(rho=0.5),
        dict(rho=0.0),
        dict(delta1=0.0),
        dict(delta1=1.0),
        dict(delta2=-0.1),
        dict(backtrack_factor=1.0),
        dict(backtrack_factor=0.0),
        dict(variant=3, sigma_bar=0.125),  # must stay under the cap
        dict(rhs_mode="bogus"),
    ]
    for kw in bad:
        with pytest.raises(ContractViolationError):
            SolverConfig(**kw)


def test_config_sigma_cap_per_variant():
    assert SolverConfig(variant=1).sigma_cap == 0.5
    assert SolverConfig(variant=2).sigma_cap == 0.125
    assert SolverConfig(variant=3).sigma_cap == 0.125
    assert SolverConfig(variant=1, sigma_cap_override=0.3).sigma_cap == 0.3


def test_config_effective_rhs_mode():
    assert SolverConfig(variant=1).effective_rhs_mode == "full"
    assert SolverConfig(variant=2).effective_rhs_mode == "full"
    assert SolverConfig(variant=3).effective_rhs_mode == "third-free"
    assert SolverConfig(variant=3, rhs_mode="naive").effective_rhs_mode == "naive"
    assert SolverConfig(variant=1, rhs_mode="third-free").effective_rhs_mode \
        == "third-free"


def test_select_sigma_known_values():
    cfg = SolverConfig(variant=3)
    # cap = min(0.125, 1e6) leaves the mild default 0.1
    assert select_sigma(1.0, 1e-3, 1, cfg) == pytest.approx(0.1)
    # tight bound phi p / mu^2 = 1e-4 pushes sigma to half the cap
    assert select_sigma(1e-10, 1e-3, 1, cfg) == pytest.approx(5e-5)
    # mu = 0 falls back to the variant cap
    assert select_sigma(1.0, 0.0, 1, cfg) == pytest.approx(0.1)


def test_select_sigma_stays_inside_cap():
    rng = np.random.default_rng(17)
    for variant in (1, 2, 3):
        cfg = SolverConfig(variant=variant)
        for _ in range(200):
            phi = 10.0 ** rng.uniform(-12, 4)
            mu = 10.0 ** rng.uniform(-10, 2)
            p = int(rng.integers(1, 8))
            cap = min(cfg.sigma_cap, phi * p / (mu * mu))
            sigma = select_sigma(phi, mu, p, cfg)
            assert 0.0 < sigma < cap


def test_init_check_copies_w_into_z():
    prob = ring_problem()
    v0 = Iterate(x=np.array([2.0, 1.0]), y=np.zeros(1),
                 w=np.array([2.0]), s=np.array([1.75]), z=np.array([3.0]))
    v = init_check(prob, v0)
    assert_array_equal(v.z, [2.0])
    assert v.z is not v.w


def test_init_check_rejects_non_interior_start():
    prob = ring_problem()
    v0 = make_iterate(prob, np.array([2.0, 1.0]), s=np.array([1.0]))
    with pytest.raises(InitializationError) as exc:
        init_check(prob, Iterate(x=np.array([1.0, 0.0]), y=v0.y, w=v0.w,
                                 s=v0.s, z=v0.z))
    assert exc.value.component == 0
    assert exc.value.value == pytest.approx(-0.25)


def test_init_check_rejects_nonpositive_blocks():
    prob = ring_problem()
    base = make_iterate(prob, np.array([2.0, 1.0]))
    for block in ("w", "s", "z"):
        kw = dict(x=base.x, y=base.y, w=base.w, s=base.s, z=base.z)
        kw[block] = np.array([0.0])
        with pytest.raises(ContractViolationError):
            init_check(prob, Iterate(**kw))


def test_solve_accepts_bare_x():
    prob = ring_problem()
    from_x = solve(prob, np.array([2.0, 1.0]))
    from_v = solve(prob, make_iterate(prob, np.array([2.0, 1.0])))
    assert from_x.converged and from_v.converged
    assert from_x.niter == from_v.niter
    assert_array_equal(from_x.iterate.x, from_v.iterate.x)


def test_solve_returns_immediately_below_tolerance():
    prob = ring_problem()
    rep = solve(prob, np.array([2.0, 1.0]), SolverConfig(epsilon=1e30))
    assert rep.converged
    assert rep.niter == 0
    assert rep.ref is None
    assert rep.counters.factorizations == 0
    assert rep.counters.kkt_solves == 0


def test_solve_reports_max_iter():
    entry = get_problem("HS16")
    rep = solve(entry.problem, entry.initial_iterate(),
                entry_config(entry, max_iter=2))
    assert rep.status == "MaxIter"
    assert rep.niter == 2


def test_solve_converges_with_decreasing_merit():
    rep = solve(ring_problem(), np.array([2.0, 1.0]), SolverConfig())
    assert rep.converged
    assert rep.phi <= 1e-8
    phis = [r.phi for r in rep.iterations]
    assert all(a > b for a, b in zip(phis, phis[1:]))
    assert rep.phi < phis[-1]
    # one factorization and two solves with it per iteration
    assert rep.counters.factorizations == rep.niter
    assert rep.counters.kkt_solves == 2 * rep.niter
    for rec in rep.iterations:
        assert rec.factorizations == 1
        assert rec.kkt_solves == 2


def test_observer_sees_chained_iterates():
    seen = []

    def observer(k, v, arc, v_next, rec):
        seen.append((k, v, v_next, rec))

    rep = solve(ring_problem(), np.array([2.0, 1.0]), SolverConfig(),
                observer=observer)
    assert [k for k, *_ in seen] == list(range(rep.niter))
    for (_, _, v_next, _), (_, v, _, _) in zip(seen, seen[1:]):
        assert v is v_next
    assert seen[-1][2] is rep.iterate
    assert [rec.k for *_, rec in seen] == [r.k for r in rep.iterations]


def test_variant_one_keeps_z_equal_w():
    entry = get_problem("HS23")
    states = []
    rep = solve(entry.problem, entry.initial_iterate(),
                entry_config(entry, variant=1),
                observer=lambda k, v, arc, v_next, rec: states.append(v_next))
    assert rep.converged
    for v in states:
        assert_array_equal(v.z, v.w)


def test_warm_restart_values():
    prob = ring_problem()
    x = np.array([2.0, 1.0])
    w = np.array([0.7])
    y, s, z, deficient = warm_restart(prob, x, w)
    assert_allclose(s, prob.g_val(x))
    assert_array_equal(z, w)
    assert z is not w
    r = prob.grad_f(x) - prob.jac_g(x) @ w
    expected_y, *_ = np.linalg.lstsq(prob.jac_h(x), r, rcond=None)
    assert_allclose(y, expected_y, rtol=1e-12, atol=1e-12)
    assert deficient is False


def test_warm_restart_without_equalities():
    prob = NlpProblem(n=2, m=0, p=1, f=quad_fn(), h=(),
                      g=(bilinear_ineq_fn(),), name="no-eq")
    y, s, z, deficient = warm_restart(prob, np.array([2.0, 1.0]),
                                      np.array([0.5]))
    assert y.shape == (0,)
    assert deficient is False
    assert_allclose(s, [1.75])


def test_warm_restart_rejects_infeasible_point():
    prob = ring_problem()
    with pytest.raises(ContractViolationError):
        warm_restart(prob, np.array([1.0, 0.1]), np.array([0.5]))


def test_stall_status_carries_message():
    entry = get_problem("HS13")
    rep = solve(entry.problem, entry.initial_iterate(), entry_config(entry))
    assert rep.status == "Stalled"
    assert "stalled" in rep.message


def test_zero_equality_column_fails_factorization():
    # an identically-zero equality gradient leaves a zero column that no
    # amount of hessian-block regularization can repair
    prob = NlpProblem(n=2, m=1, p=1, f=quad_fn(),
                      h=(linear_fn(np.zeros(2), 0.0),),
                      g=(bilinear_ineq_fn(),), name="zero-eq")
    rep = solve(prob, np.array([2.0, 1.0]), SolverConfig())
    assert rep.status == "FactorizationFailed"
    assert "singular" in rep.message
    assert rep.niter == 0
