"""Hand-coded benchmark problems with analytic derivatives through third order.

Each builder documents both the standard published start and the strictly
interior start the solver actually uses. Where the standard start violates
g > 0 the interior start is obtained by clipping into the bound box with
margin 0.1 and, when a nonlinear row is still violated, moving the fewest
coordinates needed to clear it; the adjustment is noted per problem.

Third-order callbacks return the directional contraction (D^3 f)[., d, d],
i.e. component i is sum_jk f_ijk d_j d_k.
"""

from __future__ import annotations

from itertools import combinations

import numpy as np

from ..model import Fn, build_problem, linear_fn
from .registry import BenchmarkEntry, register, stationarity_seed, table_refs

Array = np.ndarray


def _ref(name: str, **extra) -> dict:
    obj, it, phi = table_refs(name)
    out = dict(ref_objective=obj, ref_iterations=it, ref_conv_phi=phi)
    out.update(extra)
    return out


def _quadratic_fn(q: Array, a: Array | None = None, c: float = 0.0) -> Fn:
    # 0.5 x^T Q x + a^T x + c with constant symmetric Q
    q = np.asarray(q, dtype=float)
    n = q.shape[0]
    a = np.zeros(n) if a is None else np.asarray(a, dtype=float)
    return Fn(
        value=lambda x, q=q, a=a, c=c: float(0.5 * x @ q @ x + a @ x + c),
        grad=lambda x, q=q, a=a: q @ x + a,
        hess=lambda x, q=q: q.copy(),
        d3=lambda x, d, n=n: np.zeros(n),
    )


def _sym(n: int, entries: dict[tuple[int, int], float]) -> Array:
    q = np.zeros((n, n))
    for (i, j), v in entries.items():
        q[i, j] += v
        if i != j:
            q[j, i] += v
    return q


# ---------- HS13: (1,0) with no strictly complementary multiplier ----------


@register("HS13")
def _hs13() -> BenchmarkEntry:
    """min (x1-2)^2 + x2^2  s.t. (1-x1)^3 - x2 >= 0, x >= 0.

    The constraint gradient vanishes at the solution (1, 0), so constraint
    qualification fails there and full convergence is not expected: the cubic
    wall's multiplier behaves like 2/(3(1-x1)^2) and diverges as x1 -> 1. The
    run is expected to stall close to (1, 0) rather than converge.

    Standard start (-2, -2) violates the bounds. The interior start sits just
    inside the cusp at (0.93, 1e-5) with the wall multiplier seeded large
    (w1 = 1000, matching its divergence; the bound duals stay at the floor)
    and a wide feasibility margin delta1 = 0.5, which keeps the arc from
    crushing the cubic wall while x1 creeps toward 1. With unit dual seeding
    the iterates stall near x1 = 0.94 instead.
    """
    f = Fn(
        value=lambda x: float((x[0] - 2.0) ** 2 + x[1] ** 2),
        grad=lambda x: np.array([2.0 * (x[0] - 2.0), 2.0 * x[1]]),
        hess=lambda x: 2.0 * np.eye(2),
        d3=lambda x, d: np.zeros(2),
    )
    g1 = Fn(
        value=lambda x: float((1.0 - x[0]) ** 3 - x[1]),
        grad=lambda x: np.array([-3.0 * (1.0 - x[0]) ** 2, -1.0]),
        hess=lambda x: np.array([[6.0 * (1.0 - x[0]), 0.0], [0.0, 0.0]]),
        d3=lambda x, d: np.array([-6.0 * d[0] ** 2, 0.0]),
    )
    prob = build_problem("HS13", 2, f, ineqs=[g1], lower=[0.0, 0.0])
    return BenchmarkEntry(
        name="HS13", problem=prob,
        start=np.array([-2.0, -2.0]),
        interior_start=np.array([0.93, 1e-5]),
        solution=np.array([1.0, 0.0]),
        ref_objective=1.0,
        w_seed=np.array([1000.0, 0.01, 0.01]),
        config_overrides={"delta1": 0.5},
        note="constraint qualification fails at the solution",
    )


# ---------- HS16 / HS17: Rosenbrock objective, quadratic fences ----------


def _rosenbrock() -> Fn:
    return Fn(
        value=lambda x: float(100.0 * (x[1] - x[0] ** 2) ** 2 + (1.0 - x[0]) ** 2),
        grad=lambda x: np.array([
            -400.0 * x[0] * (x[1] - x[0] ** 2) - 2.0 * (1.0 - x[0]),
            200.0 * (x[1] - x[0] ** 2),
        ]),
        hess=lambda x: np.array([
            [1200.0 * x[0] ** 2 - 400.0 * x[1] + 2.0, -400.0 * x[0]],
            [-400.0 * x[0], 200.0],
        ]),
        d3=lambda x, d: np.array([
            2400.0 * x[0] * d[0] ** 2 - 800.0 * d[0] * d[1],
            -400.0 * d[0] ** 2,
        ]),
    )


@register("HS16")
def _hs16() -> BenchmarkEntry:
    """min Rosenbrock  s.t. x1 + x2^2 >= 0, x1^2 + x2 >= 0, -2<=x1<=0.5, x2<=1.

    Standard start (-2, 1) sits on bounds and violates x1 + x2^2 >= 0. The
    interior start (0.3, 0.5) sits in the valley on the solution side: starts
    on the far side of the x1 = 0 ridge descend Rosenbrock into the x1 < 0
    corner where the fences pin them away from (0.5, 0.25).
    """
    g1 = Fn(
        value=lambda x: float(x[0] + x[1] ** 2),
        grad=lambda x: np.array([1.0, 2.0 * x[1]]),
        hess=lambda x: np.array([[0.0, 0.0], [0.0, 2.0]]),
        d3=lambda x, d: np.zeros(2),
    )
    g2 = Fn(
        value=lambda x: float(x[0] ** 2 + x[1]),
        grad=lambda x: np.array([2.0 * x[0], 1.0]),
        hess=lambda x: np.array([[2.0, 0.0], [0.0, 0.0]]),
        d3=lambda x, d: np.zeros(2),
    )
    prob = build_problem("HS16", 2, _rosenbrock(), ineqs=[g1, g2],
                         lower=[-2.0, None], upper=[0.5, 1.0])
    return BenchmarkEntry(
        name="HS16", problem=prob,
        start=np.array([-2.0, 1.0]),
        interior_start=np.array([0.3, 0.5]),
        solution=np.array([0.5, 0.25]),
        **_ref("16"),
    )


@register("HS17")
def _hs17() -> BenchmarkEntry:
    """min Rosenbrock  s.t. x2^2 - x1 >= 0, x1^2 - x2 >= 0, -0.5<=x1<=0.5, x2<=1.

    Standard start (-2, 1) violates the x1 box; clipping gives (-0.4, 0.9),
    then x2 drops to 0.1 so that x1^2 - x2 clears.
    """
    g1 = Fn(
        value=lambda x: float(x[1] ** 2 - x[0]),
        grad=lambda x: np.array([-1.0, 2.0 * x[1]]),
        hess=lambda x: np.array([[0.0, 0.0], [0.0, 2.0]]),
        d3=lambda x, d: np.zeros(2),
    )
    g2 = Fn(
        value=lambda x: float(x[0] ** 2 - x[1]),
        grad=lambda x: np.array([2.0 * x[0], -1.0]),
        hess=lambda x: np.array([[2.0, 0.0], [0.0, 0.0]]),
        d3=lambda x, d: np.zeros(2),
    )
    prob = build_problem("HS17", 2, _rosenbrock(), ineqs=[g1, g2],
                         lower=[-0.5, None], upper=[0.5, 1.0])
    return BenchmarkEntry(
        name="HS17", problem=prob,
        start=np.array([-2.0, 1.0]),
        interior_start=np.array([-0.4, 0.1]),
        solution=np.array([0.0, 0.0]),
        **_ref("17"),
    )


# ---------- HS19: cubic objective over a lens between two circles ----------


@register("HS19")
def _hs19() -> BenchmarkEntry:
    """min (x1-10)^3 + (x2-20)^3 over the lens between two circles.

    Rows: (x1-5)^2 + (x2-5)^2 >= 100, (x1-6)^2 + (x2-5)^2 <= 82.81,
    13 <= x1 <= 100, 0 <= x2 <= 100. The widely printed start (20.1, 5.84)
    lies outside the second circle, so it fails the g > 0 gate; the interior
    start (15.05, 5) sits midway along the x2 = 5 chord of the lens (margins
    about 1.0 and 0.9 on the two circles). Both circle rows are active at the
    solution, which therefore has the closed form x1 = 14.095,
    x2 = 5 - sqrt(100 - 9.095^2).

    The feasible set is a sliver whose two halves meet at a narrow neck, and
    the active multipliers at the solution are around 1100 and 1230. With
    unit dual seeding the merit surface pulls every tested start into the
    sliver's upper corner, a non-KKT merit attractor where the steps collapse;
    seeding w from the stationarity system at the start (w1 = 3.806,
    w4 = 675, rest at floor) keeps the duals on scale and the iterates funnel
    to the solution corner instead.
    """
    f = Fn(
        value=lambda x: float((x[0] - 10.0) ** 3 + (x[1] - 20.0) ** 3),
        grad=lambda x: np.array([3.0 * (x[0] - 10.0) ** 2, 3.0 * (x[1] - 20.0) ** 2]),
        hess=lambda x: np.diag([6.0 * (x[0] - 10.0), 6.0 * (x[1] - 20.0)]),
        d3=lambda x, d: np.array([6.0 * d[0] ** 2, 6.0 * d[1] ** 2]),
    )
    g1 = Fn(
        value=lambda x: float((x[0] - 5.0) ** 2 + (x[1] - 5.0) ** 2 - 100.0),
        grad=lambda x: np.array([2.0 * (x[0] - 5.0), 2.0 * (x[1] - 5.0)]),
        hess=lambda x: 2.0 * np.eye(2),
        d3=lambda x, d: np.zeros(2),
    )
    g2 = Fn(
        value=lambda x: float(82.81 - (x[0] - 6.0) ** 2 - (x[1] - 5.0) ** 2),
        grad=lambda x: np.array([-2.0 * (x[0] - 6.0), -2.0 * (x[1] - 5.0)]),
        hess=lambda x: -2.0 * np.eye(2),
        d3=lambda x, d: np.zeros(2),
    )
    prob = build_problem("HS19", 2, f, ineqs=[g1, g2],
                         lower=[13.0, 0.0], upper=[100.0, 100.0])
    interior = np.array([15.05, 5.0])
    return BenchmarkEntry(
        name="HS19", problem=prob,
        start=np.array([20.1, 5.84]),
        interior_start=interior,
        solution=np.array([14.095, 5.0 - np.sqrt(100.0 - 9.095 ** 2)]),
        w_seed=stationarity_seed(prob, interior),
        note="standard start violates the second circle; see interior_start",
        **_ref("19"),
    )


# ---------- HS23 ----------


@register("HS23")
def _hs23() -> BenchmarkEntry:
    """min x1^2 + x2^2 with five fences, |x| <= 50.

    Standard start (3, 1) violates x2^2 >= x1; the interior start (2, 2)
    raises x2 until that row clears.
    """
    f = _quadratic_fn(2.0 * np.eye(2))
    g2 = _quadratic_fn(2.0 * np.eye(2), c=-1.0)
    g3 = _quadratic_fn(np.diag([18.0, 2.0]), c=-9.0)
    g4 = _quadratic_fn(np.diag([2.0, 0.0]), a=np.array([0.0, -1.0]))
    g5 = _quadratic_fn(np.diag([0.0, 2.0]), a=np.array([-1.0, 0.0]))
    prob = build_problem(
        "HS23", 2, f,
        ineqs=[linear_fn(np.array([1.0, 1.0]), -1.0), g2, g3, g4, g5],
        lower=[-50.0, -50.0], upper=[50.0, 50.0])
    return BenchmarkEntry(
        name="HS23", problem=prob,
        start=np.array([3.0, 1.0]),
        interior_start=np.array([2.0, 2.0]),
        solution=np.array([1.0, 1.0]),
        **_ref("23"),
    )


# ---------- HS32: one equality, one cubic fence ----------


@register("HS32")
def _hs32() -> BenchmarkEntry:
    """min (x1+3x2+x3)^2 + 4(x1-x2)^2  s.t. 1 - sum x = 0,
    6x2 + 4x3 - x1^3 - 3 >= 0, x >= 0. Standard start is already interior.
    """
    q = _sym(3, {(0, 0): 10.0, (0, 1): -2.0, (0, 2): 2.0,
                 (1, 1): 26.0, (1, 2): 6.0, (2, 2): 2.0})
    f = _quadratic_fn(q)
    g1 = Fn(
        value=lambda x: float(6.0 * x[1] + 4.0 * x[2] - x[0] ** 3 - 3.0),
        grad=lambda x: np.array([-3.0 * x[0] ** 2, 6.0, 4.0]),
        hess=lambda x: np.diag([-6.0 * x[0], 0.0, 0.0]),
        d3=lambda x, d: np.array([-6.0 * d[0] ** 2, 0.0, 0.0]),
    )
    prob = build_problem(
        "HS32", 3, f,
        eqs=[linear_fn(np.array([-1.0, -1.0, -1.0]), 1.0)],
        ineqs=[g1], lower=[0.0, 0.0, 0.0])
    return BenchmarkEntry(
        name="HS32", problem=prob,
        start=np.array([0.1, 0.7, 0.2]),
        interior_start=np.array([0.1, 0.7, 0.2]),
        solution=np.array([0.0, 0.0, 1.0]),
        **_ref("32"),
    )


# ---------- HS64: reciprocal costs against one resource row ----------


@register("HS64")
def _hs64() -> BenchmarkEntry:
    """min sum(c_i x_i + k_i / x_i)  s.t. 4/x1 + 32/x2 + 120/x3 <= 1, x >= 1e-5.

    Standard start (1,1,1) violates the resource row by two orders of
    magnitude; the interior start scales the coordinates up to (50, 100, 500),
    which leaves margin 0.36.
    """
    c = np.array([5.0, 20.0, 10.0])
    k = np.array([50000.0, 72000.0, 144000.0])
    a = np.array([4.0, 32.0, 120.0])
    f = Fn(
        value=lambda x: float(c @ x + np.sum(k / x)),
        grad=lambda x: c - k / x ** 2,
        hess=lambda x: np.diag(2.0 * k / x ** 3),
        d3=lambda x, d: -6.0 * k / x ** 4 * d ** 2,
    )
    g1 = Fn(
        value=lambda x: float(1.0 - np.sum(a / x)),
        grad=lambda x: a / x ** 2,
        hess=lambda x: np.diag(-2.0 * a / x ** 3),
        d3=lambda x, d: 6.0 * a / x ** 4 * d ** 2,
    )
    prob = build_problem("HS64", 3, f, ineqs=[g1], lower=[1e-5, 1e-5, 1e-5])
    return BenchmarkEntry(
        name="HS64", problem=prob,
        start=np.array([1.0, 1.0, 1.0]),
        interior_start=np.array([50.0, 100.0, 500.0]),
        solution=np.array([108.7347175, 85.12613942, 204.3247078]),
        **_ref("64"),
    )


# ---------- HS66: exponential staircase ----------


@register("HS66")
def _hs66() -> BenchmarkEntry:
    """min 0.2 x3 - 0.8 x1  s.t. x2 >= exp(x1), x3 >= exp(x2),
    0 <= x1, x2 <= 100, 0 <= x3 <= 10.

    Standard start (0, 1.05, 2.9) sits on the x1 bound; the interior start
    (0.1, 1.3, 3.8) backs each coordinate off its nearest constraint.
    """
    def exp_row(i: int, j: int) -> Fn:
        # x_j - exp(x_i) >= 0
        def value(x): return float(x[j] - np.exp(x[i]))
        def grad(x):
            out = np.zeros(3)
            out[i] = -np.exp(x[i])
            out[j] = 1.0
            return out
        def hess(x):
            out = np.zeros((3, 3))
            out[i, i] = -np.exp(x[i])
            return out
        def d3(x, d):
            out = np.zeros(3)
            out[i] = -np.exp(x[i]) * d[i] ** 2
            return out
        return Fn(value=value, grad=grad, hess=hess, d3=d3)

    prob = build_problem(
        "HS66", 3, linear_fn(np.array([-0.8, 0.0, 0.2]), 0.0),
        ineqs=[exp_row(0, 1), exp_row(1, 2)],
        lower=[0.0, 0.0, 0.0], upper=[100.0, 100.0, 10.0])
    return BenchmarkEntry(
        name="HS66", problem=prob,
        start=np.array([0.0, 1.05, 2.9]),
        interior_start=np.array([0.1, 1.3, 3.8]),
        solution=np.array([0.1841264879, 1.202167873, 3.327322322]),
        **_ref("66"),
    )


# ---------- HS71 ----------


@register("HS71")
def _hs71() -> BenchmarkEntry:
    """min x1 x4 (x1+x2+x3) + x3  s.t. x1 x2 x3 x4 >= 25, sum x^2 = 40,
    1 <= x <= 5. Standard start (1,5,5,1) lies on the box; clipping with
    margin 0.1 gives the interior start (1.1, 4.9, 4.9, 1.1).
    """
    f = Fn(
        value=lambda x: float(x[0] * x[3] * (x[0] + x[1] + x[2]) + x[2]),
        grad=lambda x: np.array([
            x[3] * (2.0 * x[0] + x[1] + x[2]),
            x[0] * x[3],
            x[0] * x[3] + 1.0,
            x[0] * (x[0] + x[1] + x[2]),
        ]),
        hess=lambda x: np.array([
            [2.0 * x[3], x[3], x[3], 2.0 * x[0] + x[1] + x[2]],
            [x[3], 0.0, 0.0, x[0]],
            [x[3], 0.0, 0.0, x[0]],
            [2.0 * x[0] + x[1] + x[2], x[0], x[0], 0.0],
        ]),
        d3=lambda x, d: np.array([
            4.0 * d[0] * d[3] + 2.0 * d[1] * d[3] + 2.0 * d[2] * d[3],
            2.0 * d[0] * d[3],
            2.0 * d[0] * d[3],
            2.0 * d[0] ** 2 + 2.0 * d[0] * d[1] + 2.0 * d[0] * d[2],
        ]),
    )
    h1 = Fn(
        value=lambda x: float(x @ x - 40.0),
        grad=lambda x: 2.0 * x,
        hess=lambda x: 2.0 * np.eye(4),
        d3=lambda x, d: np.zeros(4),
    )

    def prod_grad(x: Array) -> Array:
        return np.array([x[1] * x[2] * x[3], x[0] * x[2] * x[3],
                         x[0] * x[1] * x[3], x[0] * x[1] * x[2]])

    def prod_hess(x: Array) -> Array:
        out = np.zeros((4, 4))
        for i, j in combinations(range(4), 2):
            rest = [k for k in range(4) if k not in (i, j)]
            out[i, j] = out[j, i] = x[rest[0]] * x[rest[1]]
        return out

    def prod_d3(x: Array, d: Array) -> Array:
        out = np.zeros(4)
        for i in range(4):
            others = [k for k in range(4) if k != i]
            for j, k in combinations(others, 2):
                rest = [l for l in range(4) if l not in (i, j, k)]
                out[i] += 2.0 * x[rest[0]] * d[j] * d[k]
        return out

    g1 = Fn(
        value=lambda x: float(np.prod(x) - 25.0),
        grad=prod_grad, hess=prod_hess, d3=prod_d3,
    )
    prob = build_problem("HS71", 4, f, eqs=[h1], ineqs=[g1],
                         lower=[1.0] * 4, upper=[5.0] * 4)
    return BenchmarkEntry(
        name="HS71", problem=prob,
        start=np.array([1.0, 5.0, 5.0, 1.0]),
        interior_start=np.array([1.1, 4.9, 4.9, 1.1]),
        solution=np.array([1.0, 4.74299963, 3.82114998, 1.37940829]),
        **_ref("71"),
    )


# ---------- HS80: exp of a five-way product with three equalities ----------


def _prod_parts(x: Array) -> tuple[float, Array, Array]:
    # q = prod(x) with gradient and Hessian formed from sub-products, so
    # zero coordinates stay harmless
    n = x.size
    q = float(np.prod(x))
    grad = np.array([np.prod(np.delete(x, i)) for i in range(n)])
    hess = np.zeros((n, n))
    for i, j in combinations(range(n), 2):
        hess[i, j] = hess[j, i] = np.prod(np.delete(x, (i, j)))
    return q, grad, hess


def _prod_d3(x: Array, d: Array) -> Array:
    n = x.size
    out = np.zeros(n)
    for i in range(n):
        for j, k in combinations([t for t in range(n) if t != i], 2):
            out[i] += 2.0 * np.prod(np.delete(x, (i, j, k))) * d[j] * d[k]
    return out


@register("HS80")
def _hs80() -> BenchmarkEntry:
    """min exp(x1 x2 x3 x4 x5)  s.t. sum x^2 = 10, x2 x3 = 5 x4 x5,
    x1^3 + x2^3 = -1, |x1..3| <= 2.3, |x4..5| <= 3.2.

    Standard start (-2, 2, 2, -1, -1) is already interior to the box.
    """
    def f_val(x):
        return float(np.exp(np.prod(x)))

    def f_grad(x):
        q, gq, _ = _prod_parts(x)
        return np.exp(q) * gq

    def f_hess(x):
        q, gq, hq = _prod_parts(x)
        return np.exp(q) * (np.outer(gq, gq) + hq)

    def f_d3(x, d):
        q, gq, hq = _prod_parts(x)
        gd = float(gq @ d)
        return np.exp(q) * (gd * gd * gq + (d @ hq @ d) * gq
                            + 2.0 * gd * (hq @ d) + _prod_d3(x, d))

    f = Fn(value=f_val, grad=f_grad, hess=f_hess, d3=f_d3)
    h1 = Fn(
        value=lambda x: float(x @ x - 10.0),
        grad=lambda x: 2.0 * x,
        hess=lambda x: 2.0 * np.eye(5),
        d3=lambda x, d: np.zeros(5),
    )
    h2 = _quadratic_fn(_sym(5, {(1, 2): 1.0, (3, 4): -5.0}))
    h3 = Fn(
        value=lambda x: float(x[0] ** 3 + x[1] ** 3 + 1.0),
        grad=lambda x: np.array([3.0 * x[0] ** 2, 3.0 * x[1] ** 2, 0.0, 0.0, 0.0]),
        hess=lambda x: np.diag([6.0 * x[0], 6.0 * x[1], 0.0, 0.0, 0.0]),
        d3=lambda x, d: np.array([6.0 * d[0] ** 2, 6.0 * d[1] ** 2, 0.0, 0.0, 0.0]),
    )
    prob = build_problem("HS80", 5, f, eqs=[h1, h2, h3],
                         lower=[-2.3, -2.3, -2.3, -3.2, -3.2],
                         upper=[2.3, 2.3, 2.3, 3.2, 3.2])
    return BenchmarkEntry(
        name="HS80", problem=prob,
        start=np.array([-2.0, 2.0, 2.0, -1.0, -1.0]),
        interior_start=np.array([-2.0, 2.0, 2.0, -1.0, -1.0]),
        solution=np.array([-1.717143, 1.595709, 1.827247, -0.7636413, -0.7636450]),
        **_ref("80"),
    )


# ---------- HS108: planar placement with thirteen quadratic rows ----------


def _disk(n: int, terms: list[list[tuple[int, float]]]) -> Fn:
    # 1 - sum_k (t_k^T x)^2 for sparse +-1 vectors t_k
    ts = []
    for term in terms:
        t = np.zeros(n)
        for idx, sign in term:
            t[idx] = sign
        ts.append(t)
    q = _sym(n, {})
    for t in ts:
        q -= 2.0 * np.outer(t, t)
    return _quadratic_fn(q, c=1.0)


@register("HS108")
def _hs108() -> BenchmarkEntry:
    """Bilinear area objective over nine variables and thirteen quadratic rows.

    The standard all-ones start violates most of the unit-disk rows, and the
    objective has several local levels (runs from much of the interior settle
    at -0.671 or shallower). The interior start below was picked from the
    basin of the -0.866 level: interior points were sampled at random, the
    ones solving to the deepest level kept, and their common sign pattern
    rounded to one decimal. Its tightest margin is 0.075 on row 12.
    """
    n = 9
    f = _quadratic_fn(_sym(n, {(0, 3): -0.5, (1, 2): 0.5, (2, 8): -0.5,
                               (4, 8): 0.5, (4, 7): -0.5, (5, 6): 0.5}))
    ineqs = [
        _disk(n, [[(2, 1.0)], [(3, 1.0)]]),                      # 1 - x3^2 - x4^2
        _disk(n, [[(8, 1.0)]]),                                  # 1 - x9^2
        _disk(n, [[(4, 1.0)], [(5, 1.0)]]),                      # 1 - x5^2 - x6^2
        _disk(n, [[(0, 1.0)], [(1, 1.0), (8, -1.0)]]),           # 1 - x1^2 - (x2-x9)^2
        _disk(n, [[(0, 1.0), (4, -1.0)], [(1, 1.0), (5, -1.0)]]),
        _disk(n, [[(0, 1.0), (6, -1.0)], [(1, 1.0), (7, -1.0)]]),
        _disk(n, [[(2, 1.0), (4, -1.0)], [(3, 1.0), (5, -1.0)]]),
        _disk(n, [[(2, 1.0), (6, -1.0)], [(3, 1.0), (7, -1.0)]]),
        _disk(n, [[(6, 1.0)], [(7, 1.0), (8, -1.0)]]),           # 1 - x7^2 - (x8-x9)^2
        _quadratic_fn(_sym(n, {(0, 3): 1.0, (1, 2): -1.0})),     # x1 x4 - x2 x3
        _quadratic_fn(_sym(n, {(2, 8): 1.0})),                   # x3 x9
        _quadratic_fn(_sym(n, {(4, 8): -1.0})),                  # -x5 x9
        _quadratic_fn(_sym(n, {(4, 7): 1.0, (5, 6): -1.0})),     # x5 x8 - x6 x7
    ]
    lower = [None] * 8 + [0.0]
    prob = build_problem("HS108", n, f, ineqs=ineqs, lower=lower)
    return BenchmarkEntry(
        name="HS108", problem=prob,
        start=np.ones(n),
        interior_start=np.array([-0.3, -0.3, 0.15, -0.5, -0.3, -0.4,
                                 0.2, -0.1, 0.5]),
        solution=None,  # many symmetric optima share the objective value
        **_ref("108"),
    )


# ---------- WB: equality-constrained line-search failure example ----------


@register("WB")
def _wb() -> BenchmarkEntry:
    """min x1  s.t. x1^2 - x2 = 1, x1 - x3 = 2, x2 >= 0, x3 >= 0.

    The classic example on which line-search interior-point methods stall
    from x = (-4, 1, 1); that point is interior for the inequalities, so it
    doubles as the interior start.
    """
    h1 = Fn(
        value=lambda x: float(x[0] ** 2 - x[1] - 1.0),
        grad=lambda x: np.array([2.0 * x[0], -1.0, 0.0]),
        hess=lambda x: np.diag([2.0, 0.0, 0.0]),
        d3=lambda x, d: np.zeros(3),
    )
    h2 = linear_fn(np.array([1.0, 0.0, -1.0]), -2.0)
    prob = build_problem("WB", 3, linear_fn(np.array([1.0, 0.0, 0.0]), 0.0),
                         eqs=[h1, h2], lower=[None, 0.0, 0.0])
    return BenchmarkEntry(
        name="WB", problem=prob,
        start=np.array([-4.0, 1.0, 1.0]),
        interior_start=np.array([-4.0, 1.0, 1.0]),
        solution=np.array([2.0, 3.0, 0.0]),
        ref_objective=2.0,
    )
