"""
Linear programming for NetSwitch
Dense two-phase simplex with Bland's rule, a HiGHS fallback for large programs,
and the l1 epigraph rows used by the design problems
"""

import logging

import numpy as np
import scipy.sparse as sp
from scipy.optimize import linprog

from netswitch.core.errors import IterationLimitError, NumericalError, PreconditionError
from netswitch.utils.config import resolve

logger = logging.getLogger(__name__)

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"
ITERATION_LIMIT = "iteration_limit"

# Largest constraint violation of an optimal point, relative to the data
RESIDUAL_RTOL = 1e-7


def _dense(M):
    if M is None:
        return None
    if sp.issparse(M):
        return M.toarray().astype(float)
    return np.atleast_2d(np.asarray(M, dtype=float))


class LinearProgram:
    """Minimize c^T z subject to G z <= h, E z = f, lower <= z <= upper"""

    def __init__(self, c, G=None, h=None, E=None, f=None, lower=None, upper=None):
        """
        Initialize the program

        Args:
            c (array_like): Objective coefficients, length N
            G (array_like or sparse, optional): Inequality matrix, rows x N
            h (array_like, optional): Inequality right-hand side
            E (array_like or sparse, optional): Equality matrix, rows x N
            f (array_like, optional): Equality right-hand side
            lower (array_like, optional): Lower bounds, -inf where free (default: all free)
            upper (array_like, optional): Upper bounds, +inf where free (default: all free)
        """
        self.c = np.asarray(c, dtype=float).reshape(-1)
        N = self.c.shape[0]
        self.G, self.h = self._block(G, h, N, "G", "h")
        self.E, self.f = self._block(E, f, N, "E", "f")

        self.lower = np.full(N, -np.inf) if lower is None else np.asarray(lower, dtype=float).reshape(-1)
        self.upper = np.full(N, np.inf) if upper is None else np.asarray(upper, dtype=float).reshape(-1)
        if self.lower.shape != (N,) or self.upper.shape != (N,):
            raise PreconditionError("bounds must have one entry per variable")
        if np.any(np.isnan(self.lower)) or np.any(np.isnan(self.upper)):
            raise PreconditionError("bounds must not be NaN")
        if np.any(self.lower == np.inf) or np.any(self.upper == -np.inf):
            raise PreconditionError("bounds must not exclude every value")
        if not np.all(np.isfinite(self.c)):
            raise PreconditionError("objective coefficients must be finite")

    @staticmethod
    def _block(M, rhs, N, name, rhs_name):
        if M is None:
            if rhs is not None and np.size(rhs):
                raise PreconditionError(f"{rhs_name} given without {name}")
            return sp.csr_matrix((0, N)), np.zeros(0)
        M = sp.csr_matrix(M) if sp.issparse(M) else np.atleast_2d(np.asarray(M, dtype=float))
        if M.shape[1] != N:
            raise PreconditionError(f"{name} has {M.shape[1]} columns, expected {N}")
        rhs = np.zeros(M.shape[0]) if rhs is None else np.asarray(rhs, dtype=float).reshape(-1)
        if rhs.shape[0] != M.shape[0]:
            raise PreconditionError(f"{rhs_name} has length {rhs.shape[0]}, expected {M.shape[0]}")
        data = M.data if sp.issparse(M) else M
        if not (np.all(np.isfinite(data)) and np.all(np.isfinite(rhs))):
            raise PreconditionError(f"{name} and {rhs_name} must be finite")
        return M, rhs

    @property
    def num_variables(self):
        return self.c.shape[0]

    @property
    def num_constraints(self):
        return self.G.shape[0] + self.E.shape[0]

    def residual(self, z):
        """
        Get the worst constraint violation at z

        Args:
            z (numpy.ndarray): Candidate point

        Returns:
            float: Max of inequality excess, equality gap and bound excess
        """
        worst = 0.0
        if self.G.shape[0]:
            worst = max(worst, float(np.max(self.G @ z - self.h)))
        if self.E.shape[0]:
            worst = max(worst, float(np.max(np.abs(self.E @ z - self.f))))
        worst = max(worst, float(np.max(self.lower - z, initial=0.0)))
        worst = max(worst, float(np.max(z - self.upper, initial=0.0)))
        return worst


class LPSolution:
    """Result of a linear program solve"""

    def __init__(self, status, z=None, objective=None, iterations=0, backend="simplex"):
        """
        Initialize the solution

        Args:
            status (str): One of optimal, infeasible, unbounded, iteration_limit
            z (numpy.ndarray, optional): Optimizer when optimal
            objective (float, optional): Objective value at z
            iterations (int): Pivots or solver iterations used
            backend (str): Solver that produced the result
        """
        self.status = status
        self.z = z
        self.objective = objective
        self.iterations = iterations
        self.backend = backend

    @property
    def success(self):
        return self.status == OPTIMAL

    def __repr__(self):
        return f"LPSolution(status={self.status!r}, objective={self.objective}, iterations={self.iterations})"


def _inverse_max(M, axis):
    peak = np.max(np.abs(M), axis=axis) if M.size else np.zeros(M.shape[1 - axis])
    return np.where(peak > 0, 1.0 / np.where(peak > 0, peak, 1.0), 1.0)


class _StandardForm:
    """Program rewritten as min c^T x, A x = b, x >= 0 with z = offset + T (s * x)"""

    def __init__(self, program):
        N = program.num_variables
        lower, upper = program.lower, program.upper

        # Columns of T map standard variables back to z
        offset = np.zeros(N)
        t_cols = []
        bound_rows = []
        for j in range(N):
            lo, hi = lower[j], upper[j]
            if np.isfinite(lo):
                offset[j] = lo
                t_cols.append((j, 1.0))
                if np.isfinite(hi):
                    bound_rows.append((len(t_cols) - 1, hi - lo))
            elif np.isfinite(hi):
                offset[j] = hi
                t_cols.append((j, -1.0))
            else:
                t_cols.append((j, 1.0))
                t_cols.append((j, -1.0))
        T = np.zeros((N, len(t_cols)))
        for col, (j, sign) in enumerate(t_cols):
            T[j, col] = sign

        G = _dense(program.G)
        E = _dense(program.E)
        G_std = G @ T
        h_std = program.h - G @ offset
        E_std = E @ T
        f_std = program.f - E @ offset

        if bound_rows:
            B = np.zeros((len(bound_rows), T.shape[1]))
            for r, (col, width) in enumerate(bound_rows):
                B[r, col] = 1.0
            G_std = np.vstack([G_std, B])
            h_std = np.concatenate([h_std, [w for _, w in bound_rows]])

        n_x = T.shape[1]
        n_ineq = G_std.shape[0]
        n_eq = E_std.shape[0]
        A = np.zeros((n_ineq + n_eq, n_x + n_ineq))
        A[:n_ineq, :n_x] = G_std
        A[:n_ineq, n_x:] = np.eye(n_ineq)
        A[n_ineq:, :n_x] = E_std
        b = np.concatenate([h_std, f_std])
        cost = np.concatenate([T.T @ program.c, np.zeros(n_ineq)])

        # Equilibrate: rows to unit max, then columns to unit max
        row_scale = _inverse_max(A, axis=1)
        A *= row_scale[:, None]
        b = b * row_scale
        col_scale = _inverse_max(A, axis=0)
        A *= col_scale

        self.A = A
        self.b = b
        self.cost = cost * col_scale
        self.col_scale = col_scale
        self.offset = offset
        self.T = T
        self.n_x = n_x
        self.n_ineq = n_ineq

    def to_program_space(self, x):
        return self.offset + self.T @ (self.col_scale[:self.n_x] * x[:self.n_x])


class _Tableau:
    """
    Dense simplex tableau with Bland's rule

    The tableau is recomputed from the original rows every few pivots and before any
    optimality or unboundedness verdict.
    """

    refactor_every = 25

    def __init__(self, A, b, basis, pivot_tol):
        self.A = A
        self.b = b
        self.rows = list(range(A.shape[0]))
        self.basis = list(basis)
        self.pivot_tol = pivot_tol
        self.cost = np.zeros(A.shape[1])
        self.opt_tol = 0.0
        self.iterations = 0
        self.since_rebuild = 0
        self.rebuild()

    @property
    def m(self):
        return len(self.rows)

    def rebuild(self):
        """Recompute B^-1 [A | b] for the current basis from the kept original rows"""
        m, N = self.m, self.A.shape[1]
        if m == 0:
            body = np.zeros((0, N + 1))
        else:
            A = self.A[self.rows]
            try:
                body = np.linalg.solve(A[:, self.basis], np.hstack([A, self.b[self.rows, None]]))
            except np.linalg.LinAlgError:
                raise NumericalError("simplex basis became singular", iterations=self.iterations)
            if not np.all(np.isfinite(body)):
                raise NumericalError("simplex tableau overflowed", iterations=self.iterations)
            body[:, self.basis] = np.eye(m)
        self.T = np.vstack([body, np.zeros((1, N + 1))])
        self.since_rebuild = 0
        self._load_cost()

    def set_cost(self, cost):
        """Load reduced costs for the given cost vector"""
        self.cost = np.asarray(cost, dtype=float)
        self.opt_tol = 1e-9 * max(1.0, float(np.max(np.abs(self.cost), initial=0.0)))
        self._load_cost()

    def _load_cost(self):
        row = np.zeros(self.T.shape[1])
        row[:-1] = self.cost
        if self.m:
            row -= self.cost[self.basis] @ self.T[:-1]
            row[self.basis] = 0.0
        self.T[-1] = row

    def pivot(self, row, col):
        T = self.T
        T[row] /= T[row, col]
        factor = T[:, col].copy()
        factor[row] = 0.0
        T -= np.outer(factor, T[row])
        T[:, col] = 0.0
        T[row, col] = 1.0
        self.basis[row] = col
        self.iterations += 1
        self.since_rebuild += 1
        if self.since_rebuild >= self.refactor_every:
            self.rebuild()

    def drop(self, positions):
        """Remove tableau rows, with their original rows, from the system"""
        gone = set(positions)
        keep = [i for i in range(self.m) if i not in gone]
        self.rows = [self.rows[i] for i in keep]
        self.basis = [self.basis[i] for i in keep]
        self.rebuild()

    @property
    def value(self):
        """Current objective c_B^T x_B"""
        return -self.T[-1, -1]

    def run(self, allowed, max_iter):
        """
        Pivot until optimal or unbounded

        Returns:
            str: OPTIMAL, UNBOUNDED or ITERATION_LIMIT
        """
        while True:
            if self.iterations >= max_iter:
                return ITERATION_LIMIT
            T = self.T
            reduced = T[-1, :-1]
            candidates = np.flatnonzero((reduced < -self.opt_tol) & allowed)
            if candidates.size == 0:
                if self.since_rebuild == 0:
                    return OPTIMAL
                self.rebuild()
                continue
            col = int(candidates[0])

            column = T[:-1, col]
            limit = self.pivot_tol * max(1.0, float(np.max(np.abs(column), initial=0.0)))
            rows = np.flatnonzero(column > limit)
            if rows.size == 0:
                if self.since_rebuild == 0:
                    return UNBOUNDED
                self.rebuild()
                continue
            ratios = np.maximum(T[rows, -1], 0.0) / column[rows]
            best = np.min(ratios)
            ties = rows[ratios <= best + 1e-12 * max(1.0, abs(best))]
            # Bland: leave on the smallest basic index among ties
            row = int(min(ties, key=lambda r: self.basis[r]))
            self.pivot(row, col)

    def solution(self, N):
        x = np.zeros(N)
        for i, col in enumerate(self.basis):
            if col < N:
                x[col] = self.T[i, -1]
        return x


def _drive_out_artificials(tab, N):
    """Pivot zero-level artificials out of the basis; rows where none can leave are redundant"""
    redundant = []
    for i in range(tab.m):
        if tab.basis[i] < N:
            continue
        row = np.abs(tab.T[i, :N])
        j = int(np.argmax(row)) if N else 0
        if N and row[j] > 1e-7:
            tab.pivot(i, j)
        else:
            redundant.append(i)
    if redundant:
        logger.debug("Dropping %d redundant equality rows after phase 1", len(redundant))
        tab.drop(redundant)
    elif tab.since_rebuild:
        tab.rebuild()


def _simplex(program, feas_tol, pivot_tol, max_iter):
    std = _StandardForm(program)
    A, b = std.A.copy(), std.b.copy()
    m, N = A.shape
    cap = max_iter if max_iter is not None else 50 * (m + N)

    # Flip rows so that b >= 0; unflipped inequality rows start from their slack
    basis = [-1] * m
    for i in range(m):
        if b[i] < 0:
            A[i] *= -1.0
            b[i] *= -1.0
        elif i < std.n_ineq:
            basis[i] = std.n_x + i
    artificial_rows = [i for i in range(m) if basis[i] < 0]
    n_art = len(artificial_rows)
    A_full = np.hstack([A, np.zeros((m, n_art))])
    for k, i in enumerate(artificial_rows):
        A_full[i, N + k] = 1.0
        basis[i] = N + k

    tab = _Tableau(A_full, b, basis, pivot_tol)
    allowed = np.ones(N + n_art, dtype=bool)

    # Phase 1
    if n_art:
        tab.set_cost(np.concatenate([np.zeros(N), np.ones(n_art)]))
        status = tab.run(allowed, cap)
        if status == ITERATION_LIMIT:
            best = LPSolution(ITERATION_LIMIT, iterations=tab.iterations, backend="simplex")
            raise IterationLimitError("simplex phase 1 hit the iteration cap", best=best)
        if status == UNBOUNDED:
            raise NumericalError("simplex phase 1 reported an unbounded direction")
        infeasibility = tab.value
        if infeasibility > feas_tol * (1.0 + np.linalg.norm(b)):
            logger.debug("Phase 1 ended with infeasibility %.3e", infeasibility)
            return LPSolution(INFEASIBLE, iterations=tab.iterations, backend="simplex")
        _drive_out_artificials(tab, N)
        allowed[N:] = False

    # Phase 2
    tab.set_cost(np.concatenate([std.cost, np.zeros(n_art)]))
    status = tab.run(allowed, cap)
    if status == UNBOUNDED:
        return LPSolution(UNBOUNDED, iterations=tab.iterations, backend="simplex")
    z = std.to_program_space(tab.solution(N))
    if status == ITERATION_LIMIT:
        best = LPSolution(ITERATION_LIMIT, z=z, objective=float(program.c @ z),
                          iterations=tab.iterations, backend="simplex")
        raise IterationLimitError(f"simplex hit the iteration cap of {cap} pivots", best=best)
    return LPSolution(OPTIMAL, z=z, objective=float(program.c @ z),
                      iterations=tab.iterations, backend="simplex")


def _highs(program, max_iter):
    bounds = [
        (None if not np.isfinite(lo) else lo, None if not np.isfinite(hi) else hi)
        for lo, hi in zip(program.lower, program.upper)
    ]
    options = {"maxiter": max_iter} if max_iter is not None else {}
    res = linprog(
        program.c,
        A_ub=program.G if program.G.shape[0] else None,
        b_ub=program.h if program.G.shape[0] else None,
        A_eq=program.E if program.E.shape[0] else None,
        b_eq=program.f if program.E.shape[0] else None,
        bounds=bounds,
        method="highs",
        options=options,
    )
    iterations = int(getattr(res, "nit", 0) or 0)
    if res.status == 0:
        z = np.asarray(res.x, dtype=float)
        return LPSolution(OPTIMAL, z=z, objective=float(program.c @ z), iterations=iterations, backend="highs")
    if res.status == 2:
        return LPSolution(INFEASIBLE, iterations=iterations, backend="highs")
    if res.status == 3:
        return LPSolution(UNBOUNDED, iterations=iterations, backend="highs")
    if res.status == 1:
        z = None if res.x is None else np.asarray(res.x, dtype=float)
        best = LPSolution(ITERATION_LIMIT, z=z, iterations=iterations, backend="highs")
        raise IterationLimitError("HiGHS hit the iteration cap", best=best)
    raise NumericalError(f"HiGHS failed: {res.message}")


def _tableau_cells(program):
    N = program.num_variables
    free = int(np.sum(~np.isfinite(program.lower) & ~np.isfinite(program.upper)))
    boxed = int(np.sum(np.isfinite(program.lower) & np.isfinite(program.upper)))
    rows = program.num_constraints + boxed
    cols = N + free + program.G.shape[0] + boxed + rows
    return rows * cols


def _residual_bound(program, z):
    """Admissible constraint violation for a point of size ||z||_inf"""
    def peak(M):
        if not M.shape[0]:
            return 0.0
        return float(abs(M).max()) if sp.issparse(M) else float(np.max(np.abs(M)))

    rhs = max(np.max(np.abs(program.h), initial=0.0), np.max(np.abs(program.f), initial=0.0))
    data = max(peak(program.G), peak(program.E), 1.0)
    return RESIDUAL_RTOL * (1.0 + rhs + data * float(np.max(np.abs(z), initial=0.0)))


def solve_lp(program, backend=None, max_iter=None, feasibility_tol=None, pivot_tol=None):
    """
    Solve a linear program

    An optimal point is only returned when it satisfies the constraints to within
    RESIDUAL_RTOL relative to the data. When the backend was picked automatically, a
    failed or inaccurate simplex solve is repeated with HiGHS.

    Args:
        program (LinearProgram): Program to solve
        backend (str, optional): 'simplex', 'highs' or 'auto' (default from settings)
        max_iter (int, optional): Iteration cap, default 50 * (rows + cols) for the simplex
        feasibility_tol (float, optional): Absolute feasibility tolerance
        pivot_tol (float, optional): Smallest admissible pivot, relative to its column

    Returns:
        LPSolution: Optimal basic solution or infeasible/unbounded status

    Raises:
        NumericalError: If the optimal point violates the constraints
    """
    backend = resolve("lp_backend", backend)
    feas_tol = resolve("lp_feasibility_tol", feasibility_tol)
    pivot_tol = resolve("lp_pivot_tol", pivot_tol)
    automatic = backend == "auto"
    if automatic:
        backend = "simplex" if _tableau_cells(program) <= resolve("simplex_max_cells") else "highs"
    logger.debug(
        "Solving LP with %d variables, %d constraints (%s)",
        program.num_variables, program.num_constraints, backend,
    )

    if backend == "simplex":
        try:
            solution = _simplex(program, feas_tol, pivot_tol, max_iter)
        except IterationLimitError:
            raise
        except NumericalError as e:
            if not automatic:
                raise
            logger.warning("Simplex failed (%s); retrying with HiGHS", e.message)
            return solve_lp(program, "highs", max_iter, feas_tol, pivot_tol)
    elif backend == "highs":
        solution = _highs(program, max_iter)
    else:
        raise PreconditionError(f"unknown LP backend '{backend}'")

    if solution.success:
        residual = program.residual(solution.z)
        bound = _residual_bound(program, solution.z)
        if residual > bound:
            if automatic and backend == "simplex":
                logger.warning("Simplex solution violates constraints by %.3e; retrying with HiGHS", residual)
                return solve_lp(program, "highs", max_iter, feas_tol, pivot_tol)
            raise NumericalError(
                f"{backend} solution violates the constraints by {residual:.3e} (bound {bound:.3e})",
                residual=residual,
                backend=backend,
            )
    logger.debug("LP %s after %d iterations", solution.status, solution.iterations)
    return solution


def l1_epigraph(weights, M):
    """
    Build the rows t >= W M z and t >= -W M z

    Args:
        weights (array_like): Non-negative weights, one per row of M
        M (array_like or sparse): Linear map applied to z

    Returns:
        tuple: (rows on z, rows on t), each with 2 r rows; right-hand side is zero
    """
    weights = np.asarray(weights, dtype=float).reshape(-1)
    if np.any(weights < 0):
        raise PreconditionError("l1 weights must be non-negative")
    M = sp.csr_matrix(M)
    if M.shape[0] != weights.shape[0]:
        raise PreconditionError(f"map has {M.shape[0]} rows, expected {weights.shape[0]}")
    WM = sp.diags(weights) @ M
    r = weights.shape[0]
    eye = sp.identity(r, format="csr")
    on_z = sp.vstack([WM, -WM], format="csr")
    on_t = sp.vstack([-eye, -eye], format="csr")
    return on_z, on_t
