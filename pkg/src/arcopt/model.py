"""Problem interface: objective, constraints, derivatives through third order.

A problem is

    min f(x)  s.t.  h(x) = 0 (m rows),  g(x) >= 0 (p rows),

with n > m >= 0 and p >= 1. Simple bounds l <= x <= u are converted into
rows of g (x - l and u - x) at construction so the solver sees one uniform
inequality block. Jacobians are stored column-per-constraint: jac_h(x) is
n x m with column i equal to the gradient of h_i, and jac_g(x) is n x p.

Third-order information enters only through twice-contracted directional
oracles d3(x, d) = (D^3 f)[., d, d]; they are analytic for library problems
and fall back to finite differences of the Hessian when absent.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import ContractViolationError

Array = np.ndarray

_EPS = float(np.finfo(float).eps)


@dataclass(frozen=True)
class Fn:
    """Scalar function bundle: value, gradient, Hessian, optional d3 oracle.

    d3(x, d) must return the n-vector with entries sum_jk T_ijk d_j d_k where
    T is the third-derivative tensor. None means "use the finite-difference
    fallback".
    """

    value: Callable[[Array], float]
    grad: Callable[[Array], Array]
    hess: Callable[[Array], Array]
    d3: Callable[[Array, Array], Array] | None = None


def linear_fn(a: Array, b: float) -> Fn:
    # a^T x + b: zero Hessian, zero third derivative
    a = np.asarray(a, dtype=float)
    n = a.size
    return Fn(
        value=lambda x, a=a, b=b: float(a @ x + b),
        grad=lambda x, a=a: a.copy(),
        hess=lambda x, n=n: np.zeros((n, n)),
        d3=lambda x, d, n=n: np.zeros(n),
    )


def d3_fd_from_hessian(hess: Callable[[Array], Array], x: Array, d: Array) -> Array:
    """Finite-difference fallback for (D^3 f)[., d, d] by differencing the Hessian.

    Central difference along the normalized direction with step
    1e-4 * max(1, ||x||); third-order differencing of raw values is too noisy.
    """
    nd = float(np.linalg.norm(d))
    if nd == 0.0:
        return np.zeros_like(np.asarray(x, dtype=float))
    u = d / nd
    t = 1e-4 * max(1.0, float(np.linalg.norm(x)))
    slope = (hess(x + t * u) - hess(x - t * u)) / (2.0 * t)
    return (slope @ d) * nd


@dataclass(frozen=True)
class NlpProblem:
    """Immutable evaluation interface for one problem instance.

    Callbacks must be pure; the solver assumes repeated evaluation at the
    same point is bit-identical and never mutates returned arrays.
    """

    n: int
    m: int
    p: int
    f: Fn
    h: tuple[Fn, ...]
    g: tuple[Fn, ...]
    name: str = ""

    def __post_init__(self):
        if not (self.n > self.m >= 0):
            raise ContractViolationError(f"need n > m >= 0, got n={self.n}, m={self.m}")
        if self.p < 1:
            raise ContractViolationError(f"need p >= 1, got p={self.p}")
        if len(self.h) != self.m or len(self.g) != self.p:
            raise ContractViolationError("constraint list lengths disagree with m, p")

    # ---------- stacked evaluation ----------

    def f_val(self, x: Array) -> float:
        return float(self.f.value(self._chk(x)))

    def grad_f(self, x: Array) -> Array:
        return np.asarray(self.f.grad(self._chk(x)), dtype=float)

    def hess_f(self, x: Array) -> Array:
        return np.asarray(self.f.hess(self._chk(x)), dtype=float)

    def h_val(self, x: Array) -> Array:
        x = self._chk(x)
        return np.array([c.value(x) for c in self.h], dtype=float)

    def jac_h(self, x: Array) -> Array:
        """n x m Jacobian, column i = gradient of h_i."""
        x = self._chk(x)
        if self.m == 0:
            return np.zeros((self.n, 0))
        return np.column_stack([c.grad(x) for c in self.h])

    def hess_h(self, x: Array, i: int) -> Array:
        return np.asarray(self.h[i].hess(self._chk(x)), dtype=float)

    def g_val(self, x: Array) -> Array:
        x = self._chk(x)
        return np.array([c.value(x) for c in self.g], dtype=float)

    def jac_g(self, x: Array) -> Array:
        """n x p Jacobian, column i = gradient of g_i."""
        x = self._chk(x)
        return np.column_stack([c.grad(x) for c in self.g])

    def hess_g(self, x: Array, i: int) -> Array:
        return np.asarray(self.g[i].hess(self._chk(x)), dtype=float)

    # ---------- third order ----------

    @property
    def has_third_order(self) -> bool:
        fns = (self.f,) + self.h + self.g
        return all(c.d3 is not None for c in fns)

    def d3f(self, x: Array, d: Array) -> Array:
        return self._d3(self.f, x, d)

    def d3h(self, x: Array, i: int, d: Array) -> Array:
        return self._d3(self.h[i], x, d)

    def d3g(self, x: Array, i: int, d: Array) -> Array:
        return self._d3(self.g[i], x, d)

    def _d3(self, c: Fn, x: Array, d: Array) -> Array:
        x = self._chk(x)
        d = np.asarray(d, dtype=float)
        if d.shape != (self.n,):
            raise ContractViolationError(f"direction has shape {d.shape}, want ({self.n},)")
        if c.d3 is not None:
            return np.asarray(c.d3(x, d), dtype=float)
        return d3_fd_from_hessian(c.hess, x, d)

    def _chk(self, x: Array) -> Array:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.n,):
            raise ContractViolationError(f"x has shape {x.shape}, want ({self.n},)")
        return x


@dataclass(frozen=True)
class Iterate:
    """Stacked point v = (x, y, w, s, z); dimension n + m + 3p.

    Accepted solver iterates keep (w, s, z) > 0, w = z, and g(x) > 0;
    candidates along the arc may violate these, so nothing is enforced here.
    """

    x: Array
    y: Array
    w: Array
    s: Array
    z: Array

    def stacked(self) -> Array:
        return np.concatenate([self.x, self.y, self.w, self.s, self.z])

    @staticmethod
    def from_stacked(vec: Array, n: int, m: int, p: int) -> "Iterate":
        x, y, w, s, z = split_v(np.asarray(vec, dtype=float), n, m, p)
        return Iterate(x, y, w, s, z)

    def dims(self) -> tuple[int, int, int]:
        return self.x.size, self.y.size, self.w.size


def split_v(vec: Array, n: int, m: int, p: int) -> tuple[Array, Array, Array, Array, Array]:
    if vec.size != n + m + 3 * p:
        raise ContractViolationError(f"stacked vector has size {vec.size}, want {n + m + 3 * p}")
    return (
        vec[:n],
        vec[n : n + m],
        vec[n + m : n + m + p],
        vec[n + m + p : n + m + 2 * p],
        vec[n + m + 2 * p :],
    )


def make_iterate(prob: NlpProblem, x: Array, y: Array | None = None,
                 w: Array | None = None, s: Array | None = None,
                 z: Array | None = None) -> Iterate:
    """Assemble an Iterate applying the documented defaults.

    y defaults to zeros, w and z to ones, s to g(x). Does not validate
    interiority; see solver.init_check for that.
    """
    x = np.asarray(x, dtype=float)
    y = np.zeros(prob.m) if y is None else np.asarray(y, dtype=float)
    w = np.ones(prob.p) if w is None else np.asarray(w, dtype=float)
    z = w.copy() if z is None else np.asarray(z, dtype=float)
    s = prob.g_val(x) if s is None else np.asarray(s, dtype=float)
    return Iterate(x, y, w, s, z)


# ---------- Lagrangian derivative operations ----------


def eval_lagrangian_hessian(prob: NlpProblem, x: Array, y: Array, w: Array) -> Array:
    """Hessian of the Lagrangian: hess f - sum_i y_i hess h_i - sum_i w_i hess g_i."""
    y = np.asarray(y, dtype=float)
    w = np.asarray(w, dtype=float)
    if y.shape != (prob.m,) or w.shape != (prob.p,):
        raise ContractViolationError("multiplier dimensions disagree with problem")
    out = prob.hess_f(x)
    for i in range(prob.m):
        if y[i] != 0.0:
            out = out - y[i] * prob.hess_h(x, i)
    for i in range(prob.p):
        if w[i] != 0.0:
            out = out - w[i] * prob.hess_g(x, i)
    return out


def d3_lagrangian_dir(prob: NlpProblem, x: Array, y: Array, w: Array, d: Array) -> Array:
    """(D^3 L)[., d, d] = d3f(x,d) - sum_i y_i d3h_i(x,d) - sum_i w_i d3g_i(x,d)."""
    y = np.asarray(y, dtype=float)
    w = np.asarray(w, dtype=float)
    if y.shape != (prob.m,) or w.shape != (prob.p,):
        raise ContractViolationError("multiplier dimensions disagree with problem")
    out = prob.d3f(x, d)
    for i in range(prob.m):
        if y[i] != 0.0:
            out = out - y[i] * prob.d3h(x, i, d)
    for i in range(prob.p):
        if w[i] != 0.0:
            out = out - w[i] * prob.d3g(x, i, d)
    return out


def contract_hess_h(prob: NlpProblem, x: Array, ydot: Array, xdot: Array) -> Array:
    """sum_i ydot_i * hess(h_i)(x) @ xdot  (n-vector)."""
    ydot = np.asarray(ydot, dtype=float)
    if ydot.shape != (prob.m,):
        raise ContractViolationError(f"ydot has shape {ydot.shape}, want ({prob.m},)")
    out = np.zeros(prob.n)
    for i in range(prob.m):
        if ydot[i] != 0.0:
            out += ydot[i] * (prob.hess_h(x, i) @ xdot)
    return out


def contract_hess_g(prob: NlpProblem, x: Array, wdot: Array, xdot: Array) -> Array:
    """sum_i wdot_i * hess(g_i)(x) @ xdot, summing over the p inequality rows."""
    wdot = np.asarray(wdot, dtype=float)
    if wdot.shape != (prob.p,):
        raise ContractViolationError(f"wdot has shape {wdot.shape}, want ({prob.p},)")
    out = np.zeros(prob.n)
    for i in range(prob.p):
        if wdot[i] != 0.0:
            out += wdot[i] * (prob.hess_g(x, i) @ xdot)
    return out


def quad_form_h(prob: NlpProblem, x: Array, xdot: Array) -> Array:
    """m-vector with components xdot^T hess(h_i)(x) xdot."""
    xdot = np.asarray(xdot, dtype=float)
    return np.array([float(xdot @ prob.hess_h(x, i) @ xdot) for i in range(prob.m)])


def quad_form_g(prob: NlpProblem, x: Array, xdot: Array) -> Array:
    """p-vector with components xdot^T hess(g_i)(x) xdot."""
    xdot = np.asarray(xdot, dtype=float)
    return np.array([float(xdot @ prob.hess_g(x, i) @ xdot) for i in range(prob.p)])


# ---------- derivative checking ----------


@dataclass
class CheckEntry:
    callback: str
    max_rel_err: float
    worst: tuple  # index tuple of the worst entry
    ok: bool
    note: str = ""


@dataclass
class DerivativeReport:
    x: Array
    tol: float
    tol3: float
    entries: list[CheckEntry] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(e.ok for e in self.entries)

    def __str__(self) -> str:
        lines = [f"{'callback':<14} {'max rel err':>12}  {'worst':<12} status"]
        for e in self.entries:
            status = "ok" if e.ok else ("FAIL " + e.note if e.note else "FAIL")
            lines.append(f"{e.callback:<14} {e.max_rel_err:>12.3e}  {str(e.worst):<12} {status}")
        return "\n".join(lines)


def _rel_err(analytic: Array, fd: Array) -> tuple[float, tuple]:
    analytic = np.atleast_1d(np.asarray(analytic, dtype=float))
    fd = np.atleast_1d(np.asarray(fd, dtype=float))
    denom = np.maximum(1.0, np.maximum(np.abs(analytic), np.abs(fd)))
    err = np.abs(analytic - fd) / denom
    idx = np.unravel_index(int(np.argmax(err)), err.shape)
    return float(err[idx]), idx


def _fd_grad(value: Callable[[Array], float], x: Array, steps: Array) -> Array:
    out = np.zeros_like(x)
    for i in range(x.size):
        e = np.zeros_like(x)
        e[i] = steps[i]
        out[i] = (value(x + e) - value(x - e)) / (2.0 * steps[i])
    return out


def _fd_jac(vec_fn: Callable[[Array], Array], x: Array, steps: Array) -> Array:
    cols = []
    for i in range(x.size):
        e = np.zeros_like(x)
        e[i] = steps[i]
        cols.append((vec_fn(x + e) - vec_fn(x - e)) / (2.0 * steps[i]))
    return np.column_stack(cols)


def check_derivatives(prob: NlpProblem, x: Array, tol: float = 1e-5,
                      tol3: float = 1e-4, rng: np.random.Generator | None = None
                      ) -> DerivativeReport:
    """Compare every analytic callback against central finite differences.

    Steps are cbrt(machine eps) * max(1, |x_i|) per coordinate. Third-order
    oracles are compared against differenced Hessians along coordinate and
    random directions at the looser tolerance tol3. Non-finite analytic
    values are flagged in the report, never raised.
    """
    x = np.asarray(x, dtype=float)
    steps = np.cbrt(_EPS) * np.maximum(1.0, np.abs(x))
    # third-order differencing reuses the cbrt(eps) scale; the looser step
    # of the runtime fallback is too coarse for a tol3 comparison
    step3 = float(np.cbrt(_EPS) * max(1.0, np.max(np.abs(x))))
    rng = rng or np.random.default_rng(0)
    report = DerivativeReport(x=x, tol=tol, tol3=tol3)

    def add(callback: str, analytic, fd, use_tol: float):
        a = np.asarray(analytic, dtype=float)
        if not np.all(np.isfinite(a)):
            bad = np.unravel_index(int(np.argmax(~np.isfinite(np.atleast_1d(a)))),
                                   np.atleast_1d(a).shape)
            report.entries.append(CheckEntry(callback, float("inf"), bad, False, "non-finite"))
            return
        err, idx = _rel_err(a, fd)
        report.entries.append(CheckEntry(callback, err, idx, err <= use_tol))

    # directions for third-order checks: coordinates plus two random draws
    dirs = [np.eye(prob.n)[j] for j in range(prob.n)]
    dirs += [rng.standard_normal(prob.n) for _ in range(2)]

    def check_fn(tag: str, c: Fn):
        add(f"grad_{tag}", c.grad(x), _fd_grad(c.value, x, steps), tol)
        hess = np.asarray(c.hess(x), dtype=float)
        if np.all(np.isfinite(hess)):
            sym_err = float(np.max(np.abs(hess - hess.T))) if hess.size else 0.0
            report.entries.append(CheckEntry(
                f"sym_{tag}", sym_err, (0, 0), sym_err <= 1e-12,
                "" if sym_err <= 1e-12 else "asymmetric"))
        add(f"hess_{tag}", hess, _fd_jac(c.grad, x, steps), tol)
        if c.d3 is not None:
            worst = (0.0, (0,), None)
            for d in dirs:
                a = c.d3(x, d)
                if not np.all(np.isfinite(np.asarray(a, dtype=float))):
                    report.entries.append(CheckEntry(f"d3_{tag}", float("inf"), (0,),
                                                     False, "non-finite"))
                    return
                fd = d3_fd_from_hessian(c.hess, x, d)
                err, idx = _rel_err(a, fd)
                if err >= worst[0]:
                    worst = (err, idx, None)
            report.entries.append(CheckEntry(f"d3_{tag}", worst[0], worst[1],
                                             worst[0] <= tol3))

    check_fn("f", prob.f)
    for i, c in enumerate(prob.h):
        check_fn(f"h[{i}]", c)
    for i, c in enumerate(prob.g):
        check_fn(f"g[{i}]", c)
    return report


# ---------- construction helper ----------


def build_problem(name: str, n: int, f: Fn, eqs: Sequence[Fn] = (),
                  ineqs: Sequence[Fn] = (), lower: Sequence | None = None,
                  upper: Sequence | None = None) -> NlpProblem:
    """Assemble a problem, expanding finite bounds into linear rows of g.

    lower/upper are length-n sequences with None (or +-inf) for absent
    bounds; row order is [ineqs..., x_i - l_i ..., u_i - x_i ...].
    """
    g: list[Fn] = list(ineqs)
    if lower is not None:
        for i, l in enumerate(lower):
            if l is not None and np.isfinite(l):
                a = np.zeros(n)
                a[i] = 1.0
                g.append(linear_fn(a, -float(l)))
    if upper is not None:
        for i, u in enumerate(upper):
            if u is not None and np.isfinite(u):
                a = np.zeros(n)
                a[i] = -1.0
                g.append(linear_fn(a, float(u)))
    return NlpProblem(n=n, m=len(eqs), p=len(g), f=f, h=tuple(eqs), g=tuple(g),
                      name=name)
