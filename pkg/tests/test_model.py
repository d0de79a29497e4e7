"""Evaluation layer: Fn bundles, problem assembly, derivative checking."""

from __future__ import annotations

import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal

from arcopt import (ContractViolationError, Fn, NlpProblem, build_problem,
                    check_derivatives, linear_fn, make_iterate)
from arcopt.model import (Iterate, contract_hess_g, contract_hess_h,
                          d3_fd_from_hessian, d3_lagrangian_dir,
                          eval_lagrangian_hessian, quad_form_g, quad_form_h,
                          split_v)
from support import cubic_fn, curvy_problem, quad_fn, ring_problem


def test_linear_fn_derivatives():
    a = np.array([2.0, -1.0, 0.5])
    fn = linear_fn(a, 3.0)
    x = np.array([1.0, 2.0, -4.0])
    assert fn.value(x) == 2.0 - 2.0 - 2.0 + 3.0
    assert_array_equal(fn.grad(x), a)
    assert_array_equal(fn.hess(x), np.zeros((3, 3)))
    assert_array_equal(fn.d3(x, np.ones(3)), np.zeros(3))


def test_linear_fn_grad_is_a_copy():
    fn = linear_fn(np.array([1.0, 2.0]), 0.0)
    g = fn.grad(np.zeros(2))
    g[0] = 99.0
    assert fn.grad(np.zeros(2))[0] == 1.0


def _bilinear() -> Fn:
    return ring_problem().g[0]


def test_problem_validation():
    f = quad_fn()
    ring = ring_problem()
    with pytest.raises(ContractViolationError):
        NlpProblem(n=1, m=1, p=1, f=f, h=(ring.h[0],), g=(ring.g[0],))  # needs n > m
    with pytest.raises(ContractViolationError):
        NlpProblem(n=2, m=0, p=0, f=f, h=(), g=())  # needs p >= 1
    with pytest.raises(ContractViolationError):
        NlpProblem(n=2, m=1, p=1, f=f, h=(), g=(ring.g[0],))  # len(h) != m


def test_problem_shape_guard():
    prob = ring_problem()
    with pytest.raises(ContractViolationError):
        prob.f_val(np.zeros(3))
    with pytest.raises(ContractViolationError):
        prob.d3f(np.zeros(2), np.zeros(3))


def test_jacobians_store_gradients_as_columns():
    prob = ring_problem()
    x = np.array([1.5, 0.5])
    jh = prob.jac_h(x)
    jg = prob.jac_g(x)
    assert jh.shape == (2, 1) and jg.shape == (2, 1)
    assert_allclose(jh[:, 0], [1.0, 1.0])        # grad(x1 + x2^2 - 2)
    assert_allclose(jg[:, 0], [0.5, 1.5])        # grad(x1 x2 - 1/4)


def test_equality_free_problem_has_empty_jacobian():
    prob = build_problem("box", 2, quad_fn(), lower=[0.0, 0.0])
    x = np.array([1.0, 1.0])
    assert prob.m == 0
    assert prob.jac_h(x).shape == (2, 0)
    assert prob.h_val(x).shape == (0,)


def test_build_problem_bound_row_order():
    """Inequality rows come out as [ineqs..., x_i - l_i ..., u_i - x_i ...]."""
    f = linear_fn(np.array([1.0, 0.0, 0.0]), 0.0)
    ineq = linear_fn(np.array([1.0, 1.0, 1.0]), -1.0)
    prob = build_problem("rows", 3, f, ineqs=[ineq],
                         lower=[0.5, None, -1.0], upper=[None, 2.0, 4.0])
    assert (prob.m, prob.p) == (0, 5)
    x = np.array([1.0, 1.5, 3.0])
    assert_allclose(prob.g_val(x), [4.5, 0.5, 4.0, 0.5, 1.0])


def test_build_problem_skips_infinite_bounds():
    prob = build_problem("inf", 2, quad_fn(),
                         lower=[-np.inf, 0.0], upper=[np.inf, None])
    assert prob.p == 1
    assert_allclose(prob.g_val(np.array([3.0, 2.0])), [2.0])


def test_make_iterate_defaults():
    prob = ring_problem()
    x = np.array([1.0, 1.0])
    v = make_iterate(prob, x)
    assert_array_equal(v.y, np.zeros(1))
    assert_array_equal(v.w, np.ones(1))
    assert_array_equal(v.z, v.w)
    assert_allclose(v.s, prob.g_val(x))


def test_make_iterate_z_follows_w():
    prob = ring_problem()
    x = np.array([1.0, 1.0])
    v = make_iterate(prob, x, w=np.array([7.0]))
    assert_array_equal(v.z, [7.0])
    v.w[0] = 1.0  # z was copied, not aliased
    assert v.z[0] == 7.0
    v2 = make_iterate(prob, x, w=np.array([7.0]), z=np.array([3.0]))
    assert_array_equal(v2.z, [3.0])


def test_stacked_round_trip():
    rng = np.random.default_rng(3)
    vec = rng.normal(size=2 + 1 + 3 * 1)
    v = Iterate.from_stacked(vec, 2, 1, 1)
    assert_array_equal(v.stacked(), vec)
    assert v.dims() == (2, 1, 1)
    x, y, w, s, z = split_v(vec, 2, 1, 1)
    assert_array_equal(x, vec[:2])
    assert_array_equal(z, vec[-1:])
    with pytest.raises(ContractViolationError):
        split_v(vec, 2, 2, 1)


def test_lagrangian_hessian_by_hand():
    prob = ring_problem()
    x = np.array([1.2, 0.8])
    expected = (np.array([[2.0, 1.0], [1.0, 4.0]])
                - 0.7 * np.array([[0.0, 0.0], [0.0, 2.0]])
                - 1.3 * np.array([[0.0, 1.0], [1.0, 0.0]]))
    got = eval_lagrangian_hessian(prob, x, np.array([0.7]), np.array([1.3]))
    assert_allclose(got, expected)
    with pytest.raises(ContractViolationError):
        eval_lagrangian_hessian(prob, x, np.zeros(2), np.array([1.0]))


def test_hessian_contractions_by_hand():
    prob = ring_problem()
    x = np.array([1.2, 0.8])
    xd = np.array([0.3, -0.4])
    assert_allclose(contract_hess_h(prob, x, np.array([2.0]), xd),
                    [0.0, 2.0 * 2.0 * (-0.4)])
    assert_allclose(contract_hess_g(prob, x, np.array([3.0]), xd),
                    [3.0 * (-0.4), 3.0 * 0.3])
    assert_allclose(quad_form_h(prob, x, xd), [2.0 * 0.16])
    assert_allclose(quad_form_g(prob, x, xd), [2.0 * 0.3 * (-0.4)])
    with pytest.raises(ContractViolationError):
        contract_hess_h(prob, x, np.zeros(2), xd)


def test_d3_oracle_matches_hessian_differencing():
    fn = cubic_fn()
    x = np.array([0.7, -1.1])
    rng = np.random.default_rng(11)
    for _ in range(5):
        d = rng.normal(size=2)
        assert_allclose(d3_fd_from_hessian(fn.hess, x, d), fn.d3(x, d),
                        rtol=0.0, atol=1e-7)
    assert_array_equal(d3_fd_from_hessian(fn.hess, x, np.zeros(2)), np.zeros(2))


def test_d3_lagrangian_combines_terms():
    prob = curvy_problem()
    x = np.array([0.9, 1.4])
    y = np.array([0.6])
    w = np.array([1.1])
    d = np.array([0.5, -0.2])
    # d3f = [6 d1^2 + 4 d1 d2, 2 d1^2], d3h = [6 d1^2, 0], d3g = 0
    expected = np.array([6 * 0.25 + 4 * 0.5 * (-0.2) - 0.6 * 6 * 0.25,
                         2 * 0.25])
    assert_allclose(d3_lagrangian_dir(prob, x, y, w, d), expected)


def test_fd_fallback_when_d3_absent():
    incomplete = Fn(value=cubic_fn().value, grad=cubic_fn().grad,
                    hess=cubic_fn().hess)
    prob = NlpProblem(n=2, m=0, p=1, f=incomplete,
                      h=(), g=(ring_problem().g[0],), name="nofull")
    assert not prob.has_third_order
    x = np.array([0.7, -1.1])
    d = np.array([0.4, 1.2])
    assert_allclose(prob.d3f(x, d), cubic_fn().d3(x, d), rtol=0.0, atol=1e-7)
    assert ring_problem().has_third_order


def test_check_derivatives_passes_consistent_problem():
    report = check_derivatives(curvy_problem(), np.array([0.9, 1.4]))
    assert report.passed
    # grad, symmetry, hess, d3 for each of f, h[0], g[0]
    assert len(report.entries) == 12
    assert all(e.max_rel_err <= report.tol3 for e in report.entries)
    text = str(report)
    assert "grad_f" in text and "d3_g[0]" in text and "ok" in text


def test_check_derivatives_catches_wrong_gradient():
    good = quad_fn()
    bad = Fn(value=good.value,
             grad=lambda x: good.grad(x) * 1.01,  # 1% error
             hess=good.hess, d3=good.d3)
    prob = NlpProblem(n=2, m=0, p=1, f=bad, h=(), g=(_bilinear(),), name="bad")
    report = check_derivatives(prob, np.array([1.0, 2.0]))
    assert not report.passed
    failing = [e.callback for e in report.entries if not e.ok]
    # the scaled gradient breaks both its own check and the Hessian cross-check
    assert failing == ["grad_f", "hess_f"]
    assert "FAIL" in str(report)


def test_check_derivatives_flags_asymmetric_hessian():
    good = quad_fn()
    bad = Fn(value=good.value, grad=good.grad,
             hess=lambda x: np.array([[2.0, 1.0], [1.5, 4.0]]), d3=good.d3)
    prob = NlpProblem(n=2, m=0, p=1, f=bad, h=(), g=(_bilinear(),), name="asym")
    report = check_derivatives(prob, np.array([1.0, 2.0]))
    notes = {e.callback: e.note for e in report.entries if not e.ok}
    assert "sym_f" in notes and notes["sym_f"] == "asymmetric"


def test_check_derivatives_reports_nonfinite_without_raising():
    good = quad_fn()
    bad = Fn(value=good.value,
             grad=lambda x: np.array([np.nan, 0.0]),
             hess=good.hess, d3=good.d3)
    prob = NlpProblem(n=2, m=0, p=1, f=bad, h=(), g=(_bilinear(),), name="nan")
    report = check_derivatives(prob, np.array([1.0, 2.0]))
    assert not report.passed
    entry = next(e for e in report.entries if e.callback == "grad_f")
    assert entry.note == "non-finite" and entry.max_rel_err == np.inf
