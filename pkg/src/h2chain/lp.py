"""Bounded-variable linear programs with exact primal and dual solutions.

Problems are built incrementally (``add_var`` / ``add_row``) and solved to
optimality with verified strong duality.  Row duals follow the shadow-price
convention: ``duals[i]`` is the derivative of the optimal objective with
respect to that row's right-hand side.  For a minimisation this means a
binding ``>=`` row has a non-negative dual and a binding ``<=`` row a
non-positive one; equality rows are unrestricted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy import sparse
from scipy.optimize import linprog

LE = "<="
EQ = "="
GE = ">="

_SENSES = (LE, EQ, GE)


class LpStatus(Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


class LpError(Exception):
    """Malformed problem (bad bounds, unknown column, bad sense)."""


class NumericalFailure(Exception):
    """Residual targets could not be met; the instance likely needs rescaling."""


@dataclass
class LpProblem:
    """Sparse LP in the form: minimise c'x  s.t. rows, lower <= x <= upper."""

    objective: list[float] = field(default_factory=list)
    lower: list[float] = field(default_factory=list)
    upper: list[float] = field(default_factory=list)
    var_names: list[str] = field(default_factory=list)
    row_coeffs: list[list[tuple[int, float]]] = field(default_factory=list)
    row_sense: list[str] = field(default_factory=list)
    row_rhs: list[float] = field(default_factory=list)
    row_names: list[str] = field(default_factory=list)

    @property
    def num_vars(self) -> int:
        return len(self.objective)

    @property
    def num_rows(self) -> int:
        return len(self.row_rhs)

    def add_var(self, name: str, cost: float = 0.0, lower: float = 0.0,
                upper: float = math.inf) -> int:
        """Add a bounded variable; returns its column index."""
        if not math.isfinite(cost):
            raise LpError(f"variable {name!r}: objective coefficient must be finite")
        if lower > upper:
            raise LpError(f"variable {name!r}: lower bound {lower} exceeds upper {upper}")
        self.objective.append(float(cost))
        self.lower.append(float(lower))
        self.upper.append(float(upper))
        self.var_names.append(name)
        return len(self.objective) - 1

    def add_row(self, name: str, coeffs: dict[int, float] | list[tuple[int, float]],
                sense: str, rhs: float) -> int:
        """Add a constraint row over existing columns; returns its row index."""
        if sense not in _SENSES:
            raise LpError(f"row {name!r}: sense must be one of {_SENSES}")
        items = sorted(coeffs.items()) if isinstance(coeffs, dict) else list(coeffs)
        for j, _ in items:
            if not 0 <= j < self.num_vars:
                raise LpError(f"row {name!r}: unknown column index {j}")
        self.row_coeffs.append([(int(j), float(a)) for j, a in items])
        self.row_sense.append(sense)
        self.row_rhs.append(float(rhs))
        self.row_names.append(name)
        return len(self.row_rhs) - 1

    def row_matrix(self) -> sparse.csr_matrix:
        """Constraint coefficients as a sparse matrix (rows x vars)."""
        data, ri, ci = [], [], []
        for i, row in enumerate(self.row_coeffs):
            for j, a in row:
                ri.append(i)
                ci.append(j)
                data.append(a)
        return sparse.csr_matrix((data, (ri, ci)),
                                 shape=(self.num_rows, self.num_vars))


@dataclass
class LpSolution:
    status: LpStatus
    primal: np.ndarray
    duals: np.ndarray
    objective_value: float


def verify_solution(problem: LpProblem, solution: LpSolution) -> dict[str, float]:
    """Scaled residuals of an optimal solution.

    Returns primal and dual feasibility residuals, the relative strong-duality
    gap and the worst complementary-slackness violation.  All residuals are
    scaled by the magnitude of the data they check, so thresholds are
    dimensionless.
    """
    x = solution.primal
    y = solution.duals
    c = np.asarray(problem.objective)
    lo = np.asarray(problem.lower)
    up = np.asarray(problem.upper)
    a = problem.row_matrix()
    rhs = np.asarray(problem.row_rhs)

    if problem.num_vars == 0:
        ok = all(_row_feasible_constant(s, r) for s, r in
                 zip(problem.row_sense, rhs))
        return {"primal": 0.0 if ok else math.inf, "dual": 0.0,
                "gap": 0.0, "slackness": 0.0}

    ax = a @ x
    scale_r = 1.0 + np.abs(rhs)
    primal_res = 0.0
    slackness = 0.0
    for i, sense in enumerate(problem.row_sense):
        slack = rhs[i] - ax[i]
        if sense == LE:
            viol = max(0.0, -slack)
        elif sense == GE:
            viol = max(0.0, slack)
        else:
            viol = abs(slack)
        primal_res = max(primal_res, viol / scale_r[i])
        slackness = max(slackness, abs(y[i] * slack) / scale_r[i])
    bound_viol = np.maximum(lo - x, 0.0)
    finite_up = np.isfinite(up)
    bound_viol[finite_up] = np.maximum(bound_viol[finite_up],
                                       (x - up)[finite_up])
    primal_res = max(primal_res, float(np.max(bound_viol / (1.0 + np.abs(x)), initial=0.0)))

    # Reduced costs must vanish wherever a variable sits strictly between its
    # bounds; at a bound they may take the sign that pushes against it.
    z = c - a.T @ y
    scale_c = 1.0 + np.abs(c)
    off_lower = x > lo + 1e-7 * (1.0 + np.abs(lo))
    off_upper = ~finite_up
    off_upper[finite_up] = x[finite_up] < up[finite_up] - 1e-7 * (1.0 + np.abs(up[finite_up]))
    interior = off_lower & off_upper
    dual_res = float(np.max(np.abs(z[interior]) / scale_c[interior], initial=0.0))
    for i, sense in enumerate(problem.row_sense):
        if sense == LE and y[i] > 0:
            dual_res = max(dual_res, y[i] / scale_r[i])
        elif sense == GE and y[i] < 0:
            dual_res = max(dual_res, -y[i] / scale_r[i])

    # Dual objective: y'b plus bound terms of the reduced costs.  A reduced
    # cost pressing against an infinite bound cannot enter the dual value;
    # beyond roundoff it is a dual infeasibility instead.
    z_tol = 1e-9 * scale_c
    finite_lo = np.isfinite(lo)
    pos = (z > z_tol) & finite_lo
    neg = (z < -z_tol) & finite_up
    bad = ((z > z_tol) & ~finite_lo) | ((z < -z_tol) & ~finite_up)
    if np.any(bad):
        dual_res = max(dual_res, float(np.max(np.abs(z[bad]) / scale_c[bad])))
    dual_obj = float(y @ rhs)
    dual_obj += float(np.sum(z[pos] * lo[pos]))
    dual_obj += float(np.sum(z[neg] * up[neg]))
    gap = abs(solution.objective_value - dual_obj) / (1.0 + abs(solution.objective_value))
    return {"primal": primal_res, "dual": dual_res, "gap": gap,
            "slackness": slackness}


def _row_feasible_constant(sense: str, rhs: float) -> bool:
    if sense == LE:
        return rhs >= 0
    if sense == GE:
        return rhs <= 0
    return rhs == 0


def solve(problem: LpProblem, feasibility_tol: float = 1e-8,
          pivot_tol: float = 1e-10) -> LpSolution:
    """Solve to optimality with verified duals.

    Deterministic for a fixed problem.  Raises :class:`NumericalFailure` when
    the residual targets cannot be met even after a refinement pass with
    tightened solver tolerances.
    """
    _validate(problem)
    if problem.num_vars == 0:
        ok = all(_row_feasible_constant(s, r) for s, r in
                 zip(problem.row_sense, problem.row_rhs))
        status = LpStatus.OPTIMAL if ok else LpStatus.INFEASIBLE
        return LpSolution(status, np.zeros(0), np.zeros(problem.num_rows), 0.0)

    solution = _solve_highs(problem, tighten=False)
    if solution.status is not LpStatus.OPTIMAL:
        return solution
    res = verify_solution(problem, solution)
    if _within(res, feasibility_tol):
        return solution
    solution = _solve_highs(problem, tighten=True, pivot_tol=pivot_tol)
    if solution.status is not LpStatus.OPTIMAL:
        return solution
    res = verify_solution(problem, solution)
    if _within(res, feasibility_tol):
        return solution
    raise NumericalFailure(
        f"residuals exceed targets after refinement: {res}")


def _within(res: dict[str, float], tol: float) -> bool:
    return res["primal"] <= tol and res["dual"] <= tol and res["gap"] <= tol


def _validate(problem: LpProblem) -> None:
    for j in range(problem.num_vars):
        if problem.lower[j] > problem.upper[j]:
            raise LpError(f"variable {problem.var_names[j]!r}: inconsistent bounds")
        if not math.isfinite(problem.objective[j]):
            raise LpError(f"variable {problem.var_names[j]!r}: non-finite cost")


def _solve_highs(problem: LpProblem, tighten: bool,
                 pivot_tol: float = 1e-10) -> LpSolution:
    n = problem.num_vars
    c = np.asarray(problem.objective)
    bounds = list(zip(problem.lower,
                      [u if math.isfinite(u) else None for u in problem.upper]))

    ub_rows, ub_rhs, ub_sign, ub_idx = [], [], [], []
    eq_rows, eq_rhs, eq_idx = [], [], []
    for i, sense in enumerate(problem.row_sense):
        coeffs = problem.row_coeffs[i]
        if sense == EQ:
            eq_rows.append(coeffs)
            eq_rhs.append(problem.row_rhs[i])
            eq_idx.append(i)
        else:
            sign = 1.0 if sense == LE else -1.0
            ub_rows.append([(j, sign * a) for j, a in coeffs])
            ub_rhs.append(sign * problem.row_rhs[i])
            ub_sign.append(sign)
            ub_idx.append(i)

    a_ub = _to_sparse(ub_rows, n) if ub_rows else None
    a_eq = _to_sparse(eq_rows, n) if eq_rows else None

    options = {"presolve": not tighten}
    if tighten:
        options["primal_feasibility_tolerance"] = max(pivot_tol, 1e-10)
        options["dual_feasibility_tolerance"] = max(pivot_tol, 1e-10)
    result = linprog(c, A_ub=a_ub, b_ub=ub_rhs or None, A_eq=a_eq,
                     b_eq=eq_rhs or None, bounds=bounds, method="highs",
                     options=options)

    if result.status == 2:
        return LpSolution(LpStatus.INFEASIBLE, np.zeros(n),
                          np.zeros(problem.num_rows), math.nan)
    if result.status == 3:
        return LpSolution(LpStatus.UNBOUNDED, np.zeros(n),
                          np.zeros(problem.num_rows), math.nan)
    if result.status != 0:
        raise NumericalFailure(f"solver returned status {result.status}: {result.message}")

    duals = np.zeros(problem.num_rows)
    if ub_idx:
        # marginals are d(obj)/d(b_ub); undo the sign flip applied to >= rows
        for k, i in enumerate(ub_idx):
            duals[i] = ub_sign[k] * result.ineqlin.marginals[k]
    if eq_idx:
        for k, i in enumerate(eq_idx):
            duals[i] = result.eqlin.marginals[k]
    return LpSolution(LpStatus.OPTIMAL, np.asarray(result.x), duals,
                      float(result.fun))


def _to_sparse(rows: list[list[tuple[int, float]]], n: int) -> sparse.csr_matrix:
    data, ri, ci = [], [], []
    for i, row in enumerate(rows):
        for j, a in row:
            ri.append(i)
            ci.append(j)
            data.append(a)
    return sparse.csr_matrix((data, (ri, ci)), shape=(len(rows), n))


def to_lp_format(problem: LpProblem) -> str:
    """Render the problem in CPLEX LP text format for external cross-checks."""
    lines = ["Minimize", " obj:"]
    terms = []
    for j, cost in enumerate(problem.objective):
        if cost != 0.0:
            terms.append(f" {cost:+.17g} {_safe(problem.var_names[j])}")
    lines.append("".join(terms) if terms else " 0 " + (_safe(problem.var_names[0]) if problem.var_names else "x0"))
    lines.append("Subject To")
    op = {LE: "<=", GE: ">=", EQ: "="}
    for i in range(problem.num_rows):
        body = "".join(f" {a:+.17g} {_safe(problem.var_names[j])}"
                       for j, a in problem.row_coeffs[i]) or " 0 x0"
        lines.append(f" {_safe(problem.row_names[i])}:{body} {op[problem.row_sense[i]]} {problem.row_rhs[i]:.17g}")
    lines.append("Bounds")
    for j in range(problem.num_vars):
        lo, up = problem.lower[j], problem.upper[j]
        name = _safe(problem.var_names[j])
        if math.isfinite(up):
            lines.append(f" {lo:.17g} <= {name} <= {up:.17g}")
        else:
            lines.append(f" {name} >= {lo:.17g}")
    lines.append("End")
    return "\n".join(lines) + "\n"


def _safe(name: str) -> str:
    return "".join(ch if ch.isalnum() or ch in "_.[]" else "_" for ch in name)
