"""Loader for benchmark problems written in a small text format.

Problems whose formulations are long coefficient lists live as data files
instead of hand-coded Python; derivatives through third order come from
symbolic differentiation, so loaded problems satisfy the same callback
contract as the hand-coded ones.

Format (one directive per line, '#' starts a comment):

    problem NAME
    vars x1 x2 ...
    min EXPR
    eq EXPR                    # EXPR = 0
    ineq EXPR                  # EXPR >= 0
    ineq EXPR >= EXPR2         # EXPR - EXPR2 >= 0
    ineq EXPR <= EXPR2         # EXPR2 - EXPR >= 0
    ineq LO <= EXPR <= HI      # two rows
    bound LO <= x1 <= HI       # also one-sided: bound x1 >= LO / bound x1 <= HI
    start v1 v2 ...            # standard published start
    interior v1 v2 ...         # strictly interior start actually used
    wseed v1 v2 ...            # inequality multiplier seed, one value per row
    wseed stationarity         # ... or solve the nonneg. stationarity system
    objective NUM              # published objective, informational
    eps NUM                    # convergence tolerance override, optional
    note TEXT

Expressions may use +, -, *, /, **, parentheses, and exp/log/sin/cos/sqrt.
"""

from __future__ import annotations

from importlib import resources

import numpy as np
import sympy as sp

from ..model import Fn, build_problem
from .registry import BenchmarkEntry, register, stationarity_seed, table_refs

Array = np.ndarray

_FUNCTIONS = {"exp": sp.exp, "log": sp.log, "sin": sp.sin,
              "cos": sp.cos, "sqrt": sp.sqrt}

# data file -> registered name
_DATA_FILES = {
    "HS59": "hs59.prob",
    "HS84": "hs84.prob",
    "HS95": "hs95.prob",
    "HS96": "hs96.prob",
    "HS97": "hs97.prob",
    "HS98": "hs98.prob",
    "HS101": "hs101.prob",
}


class FormatError(ValueError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


def _sympify(text: str, syms: dict[str, sp.Symbol], lineno: int) -> sp.Expr:
    local = dict(_FUNCTIONS)
    local.update(syms)
    try:
        expr = sp.sympify(text, locals=local)
    except (sp.SympifyError, SyntaxError, TypeError) as exc:
        raise FormatError(lineno, f"cannot parse {text!r}: {exc}") from None
    extra = expr.free_symbols - set(syms.values())
    if extra:
        names = ", ".join(sorted(str(s) for s in extra))
        raise FormatError(lineno, f"unknown symbols: {names}")
    return expr


def _fn_from_expr(expr: sp.Expr, xs: list[sp.Symbol]) -> Fn:
    n = len(xs)
    ds = sp.symbols(f"_arcd0:{n}")
    grad = sp.Matrix([sp.diff(expr, xi) for xi in xs])
    hess = sp.hessian(expr, xs)
    quad = sum(hess[j, k] * ds[j] * ds[k] for j in range(n) for k in range(n))
    third = sp.Matrix([sp.diff(quad, xi) for xi in xs])

    val_f = sp.lambdify(xs, expr, modules="numpy")
    grad_f = sp.lambdify(xs, grad, modules="numpy")
    hess_f = sp.lambdify(xs, hess, modules="numpy")
    third_f = sp.lambdify(list(xs) + list(ds), third, modules="numpy")
    return Fn(
        value=lambda x: float(val_f(*x)),
        grad=lambda x: np.asarray(grad_f(*x), dtype=float).reshape(n),
        hess=lambda x: np.asarray(hess_f(*x), dtype=float).reshape(n, n),
        d3=lambda x, d: np.asarray(third_f(*x, *d), dtype=float).reshape(n),
    )


def parse_problem_text(text: str) -> BenchmarkEntry:
    """Build a fully wired BenchmarkEntry from the text format above."""
    name: str | None = None
    xs: list[sp.Symbol] = []
    syms: dict[str, sp.Symbol] = {}
    objective: sp.Expr | None = None
    eqs: list[sp.Expr] = []
    ineqs: list[sp.Expr] = []
    lower: list[float | None] = []
    upper: list[float | None] = []
    start: Array | None = None
    interior: Array | None = None
    wseed: Array | str | None = None
    published: float | None = None
    eps_override: float | None = None
    note = ""

    def need_vars(lineno: int):
        if not xs:
            raise FormatError(lineno, "vars must come before expressions")

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, _, rest = line.partition(" ")
        rest = rest.strip()
        if key == "problem":
            name = rest
        elif key == "vars":
            if xs:
                raise FormatError(lineno, "duplicate vars line")
            for tok in rest.split():
                if not tok.isidentifier():
                    raise FormatError(lineno, f"bad variable name {tok!r}")
                sym = sp.Symbol(tok, real=True)
                xs.append(sym)
                syms[tok] = sym
            lower = [None] * len(xs)
            upper = [None] * len(xs)
        elif key == "min":
            need_vars(lineno)
            objective = _sympify(rest, syms, lineno)
        elif key == "eq":
            need_vars(lineno)
            eqs.append(_sympify(rest, syms, lineno))
        elif key == "ineq":
            need_vars(lineno)
            parts = [p.strip() for p in rest.split("<=")]
            if len(parts) == 3:
                lo, mid, hi = (_sympify(p, syms, lineno) for p in parts)
                ineqs.append(mid - lo)
                ineqs.append(hi - mid)
            elif len(parts) == 2:
                ineqs.append(_sympify(parts[1], syms, lineno)
                             - _sympify(parts[0], syms, lineno))
            elif ">=" in rest:
                left, right = rest.split(">=", 1)
                ineqs.append(_sympify(left, syms, lineno)
                             - _sympify(right, syms, lineno))
            else:
                ineqs.append(_sympify(rest, syms, lineno))
        elif key == "bound":
            need_vars(lineno)
            if "<=" in rest:
                parts = [p.strip() for p in rest.split("<=")]
                if len(parts) == 3:
                    lo_t, var_t, hi_t = parts
                elif len(parts) == 2 and parts[0] in syms:
                    lo_t, var_t, hi_t = None, parts[0], parts[1]
                else:
                    raise FormatError(lineno, f"cannot parse bound {rest!r}")
            elif ">=" in rest:
                var_t, lo_t = (p.strip() for p in rest.split(">=", 1))
                hi_t = None
            else:
                raise FormatError(lineno, f"cannot parse bound {rest!r}")
            if var_t not in syms:
                raise FormatError(lineno, f"unknown variable {var_t!r}")
            i = [s.name for s in xs].index(var_t)
            if lo_t is not None:
                lower[i] = float(lo_t)
            if hi_t is not None:
                upper[i] = float(hi_t)
        elif key == "start":
            start = np.array([float(t) for t in rest.split()])
        elif key == "interior":
            interior = np.array([float(t) for t in rest.split()])
        elif key == "wseed":
            if rest == "stationarity":
                wseed = rest
            else:
                wseed = np.array([float(t) for t in rest.split()])
        elif key == "objective":
            published = float(rest)
        elif key == "eps":
            eps_override = float(rest)
        elif key == "note":
            note = rest
        else:
            raise FormatError(lineno, f"unknown directive {key!r}")

    if name is None:
        raise FormatError(0, "missing problem line")
    if objective is None:
        raise FormatError(0, "missing min line")
    if start is None or start.size != len(xs):
        raise FormatError(0, "missing or mis-sized start line")
    if interior is None or interior.size != len(xs):
        raise FormatError(0, "missing or mis-sized interior line")
    if not ineqs and not any(b is not None for b in lower + upper):
        raise FormatError(0, "problem needs at least one inequality or bound")

    prob = build_problem(
        name, len(xs), _fn_from_expr(objective, xs),
        eqs=[_fn_from_expr(e, xs) for e in eqs],
        ineqs=[_fn_from_expr(e, xs) for e in ineqs],
        lower=lower, upper=upper)
    if isinstance(wseed, str):
        wseed = stationarity_seed(prob, interior)
    ref_obj, ref_iter, ref_phi = table_refs(name)
    return BenchmarkEntry(
        name=name, problem=prob, start=start, interior_start=interior,
        ref_objective=published if ref_obj is None else ref_obj,
        ref_iterations=ref_iter, ref_conv_phi=ref_phi,
        eps_override=eps_override, w_seed=wseed, note=note)


def load_data_file(filename: str) -> BenchmarkEntry:
    text = (resources.files(__package__) / "data" / filename).read_text()
    return parse_problem_text(text)


def _make_builder(filename: str):
    return lambda: load_data_file(filename)


for _name, _file in _DATA_FILES.items():
    register(_name)(_make_builder(_file))
