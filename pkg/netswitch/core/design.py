"""
Complementary network design for NetSwitch
Weighting, the McCormick relaxation, exact fixed-ratio programs, alternating minimization
and the end-to-end sparsity-promoting pipeline
"""

import logging
from concurrent.futures import ThreadPoolExecutor

import numpy as np
import scipy.sparse as sp

from netswitch.core.errors import (
    InfeasibleProgramError,
    NetSwitchError,
    PreconditionError,
    SolverFailure,
)
from netswitch.core.floquet import commutative_average
from netswitch.core.linalg import (
    Network,
    as_square,
    centralizer_basis,
    eigenbasis,
    project_to_centralizer,
    spectral_abscissa,
    unvec,
    vec,
)
from netswitch.core.lp import LinearProgram, l1_epigraph, solve_lp
from netswitch.core.optswitch import opt_switch, solve_rros
from netswitch.core.sparsity import scnet
from netswitch.utils.config import resolve

logger = logging.getLogger(__name__)

METHODS = ("mccormick", "alternating")
METHOD_ALIASES = {"am": "alternating", "cvx": "mccormick"}
# B-step iterates further than this (relative) from commuting with A or keeping its trace are rejected
ACCEPT_RTOL = 1e-4
# Designed networks commuting with A only beyond this relative error are rejected
COMMUTATION_LIMIT = 1e-6


class Weighting:
    """Two-level sparsity penalties on the entries of B"""

    def __init__(self, Gamma, gamma_low, gamma_high, pattern=None):
        """
        Initialize the weighting

        Args:
            Gamma (numpy.ndarray): n x n penalties
            gamma_low (float): Penalty off the pattern
            gamma_high (float): Penalty on the pattern
            pattern (SparsityPattern, optional): Pattern the penalties were built from
        """
        self.Gamma = Gamma
        self.gamma_low = gamma_low
        self.gamma_high = gamma_high
        self.pattern = pattern

    @property
    def n(self):
        return self.Gamma.shape[0]

    @property
    def weights(self):
        """diag(W) = vec(Gamma)"""
        return vec(self.Gamma)

    @property
    def W(self):
        return sp.diags(self.weights)

    @property
    def homogeneous(self):
        return bool(np.all(self.Gamma == self.Gamma.flat[0]))

    def penalty(self, B):
        """Weighted l1 norm ||Gamma . B||_1"""
        return float(np.sum(self.Gamma * np.abs(B)))


def build_weighting(pat, gamma_low=None, gamma_high=None):
    """
    Penalize pattern edges with gamma_high and the rest with gamma_low

    Args:
        pat (SparsityPattern): Forced-zero edges
        gamma_low (float, optional): Low penalty, default from settings
        gamma_high (float, optional): High penalty, default from settings

    Returns:
        Weighting: Gamma and its vectorized diagonal
    """
    gamma_low = float(resolve("gamma_low", gamma_low))
    gamma_high = float(resolve("gamma_high", gamma_high))
    if not gamma_high > gamma_low > 0:
        raise PreconditionError(
            f"weights must satisfy gamma_high > gamma_low > 0, got {gamma_high} and {gamma_low}"
        )
    Gamma = np.where(pat.mask(), gamma_high, gamma_low).astype(float)
    return Weighting(Gamma, gamma_low, gamma_high, pat)


def default_bound(A):
    """Coefficient box a = 2 max(1, ||A||_F)"""
    return 2.0 * max(1.0, float(np.linalg.norm(as_square(A, "A"))))


def default_order(n):
    """Full order for small networks, truncated above the configured size"""
    return n if n <= resolve("truncate_above") else min(n, resolve("truncated_order"))


class McCormickBox:
    """Box |c_j| <= a on the coefficients of A_p and the envelope of w = k c, posed on c' = D c"""

    def __init__(self, a, scale):
        """
        Initialize the box

        Args:
            a (float): Coefficient bound
            scale (numpy.ndarray): Column norms D of A_p; scaled coefficients are D c
        """
        if not a > 0:
            raise PreconditionError(f"coefficient bound a must be positive, got {a}")
        self.a = float(a)
        self.scale = np.asarray(scale, dtype=float)

    @property
    def p(self):
        return self.scale.shape[0]

    @property
    def limits(self):
        """Per-coefficient bound a D_j on the scaled coefficients"""
        return self.a * self.scale

    def rows(self):
        """
        Build the four envelope rows per coefficient on (k, c', w')

        Returns:
            tuple: (G_k, G_c, G_w, h) with 4 p rows
        """
        p = self.p
        lim = self.limits
        eye = np.eye(p)
        zero = np.zeros((p, p))
        # -w <= a k ; w <= a k ; c + (k - 1) a <= w ; w <= c + (1 - k) a
        G_k = np.concatenate([-lim, -lim, lim, lim])[:, None]
        G_c = np.vstack([zero, zero, eye, -eye])
        G_w = np.vstack([-eye, eye, -eye, eye])
        h = np.concatenate([np.zeros(p), np.zeros(p), lim, lim])
        return G_k, G_c, G_w, h

    def hit(self, c, rtol=1e-9):
        """Whether any unscaled coefficient sits on the box"""
        return bool(np.any(np.abs(c) >= self.a * (1.0 - rtol)))


class McCormickSolution:
    """Outcome of the relaxed design program"""

    def __init__(self, c, relaxation_k, objective, x, bound_hit, iterations):
        self.c = c
        self.relaxation_k = relaxation_k
        self.objective = objective
        self.x = x
        self.bound_hit = bound_hit
        self.iterations = iterations


class FixedKSolution:
    """Outcome of the exact program at a fixed ratio"""

    def __init__(self, c, k, objective, x):
        self.c = c
        self.k = k
        self.objective = objective
        self.x = x


def _scaled_terms(basis, wt):
    """Weighted, column-scaled basis rows with all-zero rows removed"""
    if wt.n != basis.n:
        raise PreconditionError(f"weighting is {wt.n}x{wt.n} but the basis is for n={basis.n}")
    P = basis.powers / basis.column_scale
    keep = np.flatnonzero(np.any(P != 0, axis=1) & (wt.weights > 0))
    return P[keep], wt.weights[keep]


def _envelope_rows(basis):
    """Real parts of one Vandermonde row per conjugate pair, column-scaled"""
    rows = basis.distinct_rows
    return np.real(basis.vandermonde[rows]) / basis.column_scale, np.real(basis.eigenvalues[rows])


def _check(solution, what):
    if solution.status == "infeasible":
        raise InfeasibleProgramError(f"{what} program is infeasible")
    if not solution.success:
        raise SolverFailure(f"{what} program ended with status {solution.status}")


def solve_mccormick(A, basis, wt, a=None, backend=None):
    """
    Solve the McCormick relaxation of the joint ratio/coefficient design

    Besides the envelope of w = k c the program carries the trace identity
    Tr(unvec(A_p w)) = k Tr(A), which every bilinear point satisfies. With it the
    averaged envelope can never drop below Tr(A)/n.

    Args:
        A (Network or array_like): Network with distinct eigenvalues
        basis (CentralizerBasis): Centralizer basis of order p
        wt (Weighting): Entry penalties
        a (float, optional): Coefficient bound, default 2 max(1, ||A||_F)
        backend (str, optional): LP backend

    Returns:
        McCormickSolution: Coefficients c, relaxed ratio and objective
    """
    A = as_square(A, "A")
    a = default_bound(A) if a is None else float(a)
    box = McCormickBox(a, basis.column_scale)
    p = basis.order
    P, weights = _scaled_terms(basis, wt)
    Lam, lam = _envelope_rows(basis)
    q = Lam.shape[0]
    r = P.shape[0]

    # Variables: k | c' (p) | w' (p) | x | t (r)
    N = 2 + 2 * p + r
    G_k, G_c, G_w, h_box = box.rows()
    box_rows = sp.hstack([
        sp.csr_matrix(G_k), sp.csr_matrix(G_c), sp.csr_matrix(G_w),
        sp.csr_matrix((4 * p, 1 + r)),
    ])
    env_rows = sp.hstack([
        sp.csr_matrix(lam[:, None]), sp.csr_matrix(Lam), sp.csr_matrix(-Lam),
        sp.csr_matrix(-np.ones((q, 1))), sp.csr_matrix((q, r)),
    ])
    on_c, on_t = l1_epigraph(weights, P)
    l1_rows = sp.hstack([sp.csr_matrix((2 * r, 1)), on_c, sp.csr_matrix((2 * r, p + 1)), on_t])
    G = sp.vstack([box_rows, env_rows, l1_rows], format="csr")
    h = np.concatenate([h_box, np.zeros(q), np.zeros(2 * r)])

    # Tr(B) = Tr(A), and its image under w = k c: Tr(unvec(A_p w)) = k Tr(A)
    trace_row = basis.trace_row() / basis.column_scale
    E = np.zeros((2, N))
    E[0, 1:1 + p] = trace_row
    E[1, 0] = -np.trace(A)
    E[1, 1 + p:1 + 2 * p] = trace_row
    f = np.array([np.trace(A), 0.0])

    cost = np.zeros(N)
    cost[1 + 2 * p] = 1.0
    cost[2 + 2 * p:] = 1.0
    lower = np.full(N, -np.inf)
    upper = np.full(N, np.inf)
    lower[0], upper[0] = 0.0, 1.0
    lower[1:1 + p], upper[1:1 + p] = -box.limits, box.limits
    lower[2 + 2 * p:] = 0.0

    solution = solve_lp(LinearProgram(cost, G, h, E, f, lower, upper), backend=backend)
    _check(solution, "McCormick")
    z = solution.z
    c = z[1:1 + p] / basis.column_scale
    result = McCormickSolution(
        c=c,
        relaxation_k=float(np.clip(z[0], 0.0, 1.0)),
        objective=float(solution.objective),
        x=float(z[1 + 2 * p]),
        bound_hit=box.hit(c),
        iterations=solution.iterations,
    )
    if result.bound_hit:
        logger.warning("McCormick solution touches the coefficient bound a=%.4g; consider a larger bound", a)
    logger.debug("McCormick objective %.10g, relaxed k=%.6g", result.objective, result.relaxation_k)
    return result


def solve_fixed_k(A, basis, wt, k, a=None, backend=None):
    """
    Solve the exact design program with the ratio held fixed

    Args:
        A (Network or array_like): Network with distinct eigenvalues
        basis (CentralizerBasis): Centralizer basis of order p
        wt (Weighting): Entry penalties
        k (float): Ratio in [0, 1]
        a (float, optional): Coefficient bound, default 2 max(1, ||A||_F)
        backend (str, optional): LP backend

    Returns:
        FixedKSolution: Coefficients and objective x + ||W A_p c||_1
    """
    if not 0.0 <= k <= 1.0:
        raise PreconditionError(f"ratio k must lie in [0, 1], got {k}")
    A = as_square(A, "A")
    a = default_bound(A) if a is None else float(a)
    box = McCormickBox(a, basis.column_scale)
    p = basis.order
    P, weights = _scaled_terms(basis, wt)
    Lam, lam = _envelope_rows(basis)
    q = Lam.shape[0]
    r = P.shape[0]

    # Variables: c' (p) | x | t (r)
    N = p + 1 + r
    env_rows = sp.hstack([
        sp.csr_matrix((1.0 - k) * Lam), sp.csr_matrix(-np.ones((q, 1))), sp.csr_matrix((q, r)),
    ])
    on_c, on_t = l1_epigraph(weights, P)
    l1_rows = sp.hstack([on_c, sp.csr_matrix((2 * r, 1)), on_t])
    G = sp.vstack([env_rows, l1_rows], format="csr")
    h = np.concatenate([-k * lam, np.zeros(2 * r)])

    E = np.zeros((1, N))
    E[0, :p] = basis.trace_row() / basis.column_scale
    f = np.array([np.trace(A)])

    cost = np.zeros(N)
    cost[p:] = 1.0
    lower = np.full(N, -np.inf)
    upper = np.full(N, np.inf)
    lower[:p], upper[:p] = -box.limits, box.limits
    lower[p + 1:] = 0.0

    solution = solve_lp(LinearProgram(cost, G, h, E, f, lower, upper), backend=backend)
    _check(solution, "fixed-ratio")
    z = solution.z
    return FixedKSolution(z[:p] / basis.column_scale, float(k), float(solution.objective), float(z[p]))


def polish_coefficients(basis, c, trace, tol=None):
    """
    Make near-zero entries of B exactly zero while keeping the trace

    Args:
        basis (CentralizerBasis): Centralizer basis
        c (array_like): Coefficients from a solver
        trace (float): Required trace of B
        tol (float, optional): Relative threshold for treating an entry as zero

    Returns:
        numpy.ndarray: Corrected coefficients
    """
    c = np.asarray(c, dtype=float)
    b = basis.powers @ c
    norm = np.linalg.norm(b)
    if norm == 0:
        return c
    zeros = np.flatnonzero(np.abs(b) <= resolve("polish_tol", tol) * norm)
    if zeros.size == 0:
        return c
    trace_row = basis.trace_row()
    M = np.vstack([basis.powers[zeros], trace_row])
    residual = np.concatenate([-b[zeros], [trace - trace_row @ c]])
    delta, *_ = np.linalg.lstsq(M, residual, rcond=None)
    logger.debug("Polished %d near-zero entries (correction %.3e)", zeros.size, np.linalg.norm(delta))
    return c + delta


def recover_network(basis, c, snap_tol=None, label=""):
    """
    Rebuild B = unvec(A_p c)

    Args:
        basis (CentralizerBasis): Centralizer basis
        c (array_like): Coefficients, length p
        snap_tol (float, optional): Entries below snap_tol * ||B||_F become exact zeros
        label (str, optional): Label of the returned network

    Returns:
        Network: The complementary network
    """
    c = np.asarray(c, dtype=float).reshape(-1)
    if c.shape[0] != basis.order:
        raise PreconditionError(f"expected {basis.order} coefficients, got {c.shape[0]}")
    return _snapped(basis.matrix(c), snap_tol, label)


def _snapped(B, snap_tol=None, label=""):
    B = np.array(B, dtype=float)
    B[np.abs(B) <= resolve("snap_tol", snap_tol) * np.linalg.norm(B)] = 0.0
    return Network(B, label)


class _Spectral:
    """Eigen-data of A reused by every alternating step"""

    def __init__(self, A, tol_eig=None):
        lambdas, V, V_inv = eigenbasis(A, tol_eig)
        tol = 1e-12 * max(1.0, float(np.max(np.abs(lambdas))))
        rows = np.flatnonzero(lambdas.imag >= -tol)
        n = A.shape[0]
        # Row i maps vec(B) to Re(u_i^T B v_i)
        self.functionals = np.array([
            np.real(vec(np.outer(V_inv[i], V[:, i]))) for i in range(n)
        ])
        self.distinct = rows
        self.lambdas = lambdas
        self.V = V
        self.V_inv = V_inv

    def mus(self, B):
        return np.einsum("ij,jk,ki->i", self.V_inv, B, self.V)


def _commutation_matrix(A):
    """(I (x) A - A^T (x) I) / ||A||_F acting on vec(B)"""
    n = A.shape[0]
    eye = sp.identity(n, format="csr")
    K = sp.kron(eye, sp.csr_matrix(A)) - sp.kron(sp.csr_matrix(A.T), eye)
    return (K / max(np.linalg.norm(A), 1e-300)).tocsr()


def _b_step(A, spectral, weights, K, k, backend):
    """Exact program over vec(B) at a fixed ratio"""
    n = A.shape[0]
    N = n * n
    rows = spectral.distinct
    q = rows.size
    lam = np.real(spectral.lambdas[rows])

    # Variables: b (N) | x | t (N)
    env_rows = sp.hstack([
        sp.csr_matrix((1.0 - k) * spectral.functionals[rows]),
        sp.csr_matrix(-np.ones((q, 1))), sp.csr_matrix((q, N)),
    ])
    on_b, on_t = l1_epigraph(weights, sp.identity(N, format="csr"))
    l1_rows = sp.hstack([on_b, sp.csr_matrix((2 * N, 1)), on_t])
    G = sp.vstack([env_rows, l1_rows], format="csr")
    h = np.concatenate([-k * lam, np.zeros(2 * N)])

    trace_row = sp.csr_matrix(vec(np.eye(n))[None, :])
    E = sp.vstack([
        sp.hstack([K, sp.csr_matrix((N, N + 1))]),
        sp.hstack([trace_row, sp.csr_matrix((1, N + 1))]),
    ], format="csr")
    f = np.concatenate([np.zeros(N), [np.trace(A)]])

    cost = np.concatenate([np.zeros(N), [1.0], np.ones(N)])
    lower = np.concatenate([np.full(N + 1, -np.inf), np.zeros(N)])

    solution = solve_lp(LinearProgram(cost, G, h, E, f, lower=lower), backend=backend)
    _check(solution, "alternating B-step")
    return unvec(solution.z[:N], n), float(solution.objective)


def _defects(A, B):
    """Relative commutator ||AB - BA|| / (||A|| ||B||) and relative trace error of B"""
    scale = max(np.linalg.norm(A) * np.linalg.norm(B), 1e-300)
    trace_A = np.trace(A)
    comm = np.linalg.norm(A @ B - B @ A) / scale
    trace = abs(np.trace(B) - trace_A) / max(abs(trace_A), 1e-300)
    return comm, trace


def _k_step(spectral, wt, B):
    """Exact ratio for a fixed B, plus the constant penalty"""
    pairs = np.column_stack([spectral.lambdas.real, spectral.mus(B).real])
    rros = solve_rros(pairs)
    return rros.k_star, rros.alpha_star + wt.penalty(B)


class RestartOutcome:
    """One alternating-minimization run from a given initial ratio"""

    def __init__(self, index, k0, k=None, B=None, objective=None, history=None, error=None):
        self.index = index
        self.k0 = k0
        self.k = k
        self.B = B
        self.objective = objective
        self.history = history or []
        self.error = error

    @property
    def ok(self):
        return self.error is None

    def to_dict(self):
        return {
            "restart": self.index,
            "k0": self.k0,
            "k": self.k,
            "objective": self.objective,
            "iterations": len(self.history),
            "error": self.error,
        }


def _run_restart(A, spectral, wt, K, index, k0, max_iter, tol, backend):
    outcome = RestartOutcome(index, k0)
    k = k0
    best_B = None
    history = []
    try:
        for it in range(max_iter):
            B, _ = _b_step(A, spectral, wt.weights, K, k, backend)
            comm, trace = _defects(A, B)
            if comm > ACCEPT_RTOL or trace > ACCEPT_RTOL:
                raise SolverFailure(
                    f"B-step at k={k:.6g} returned a network off the feasible set "
                    f"(relative commutator {comm:.3g}, trace error {trace:.3g})",
                    commutator=comm, trace_error=trace,
                )
            k_new, objective = _k_step(spectral, wt, B)
            if history and objective > history[-1]:
                logger.debug("Restart %d: step %d increased the objective; keeping the previous iterate", index, it)
                break
            previous = history[-1] if history else None
            history.append(objective)
            best_B, k = B, k_new
            logger.debug("Restart %d, iteration %d: k=%.6g objective=%.10g", index, it, k, objective)
            if previous is not None and previous - objective <= tol * max(1.0, abs(previous)):
                break
    except NetSwitchError as e:
        if best_B is None:
            outcome.error = e.message
            logger.warning("Restart %d abandoned: %s", index, e.message)
            return outcome
        logger.warning("Restart %d stopped early: %s", index, e.message)

    outcome.k = k
    outcome.B = best_B
    outcome.objective = history[-1]
    outcome.history = history
    return outcome


class AlternatingSolution:
    """Best alternating-minimization result over all restarts"""

    def __init__(self, B, k, objective, history, restarts, best_index):
        self.B = B
        self.k = k
        self.objective = objective
        self.history = history
        self.restarts = restarts
        self.best_index = best_index

    @property
    def restart_log(self):
        return [r.to_dict() for r in self.restarts]


def solve_alternating(A, wt, restarts=None, max_iter=None, tol=None, seed=None,
                      threads=None, backend=None, tol_eig=None):
    """
    Alternate between exact B-steps and exact ratio steps from several starting ratios

    Args:
        A (Network or array_like): Network with distinct eigenvalues
        wt (Weighting): Entry penalties
        restarts (int, optional): Number of initial ratios, the first is k = 0
        max_iter (int, optional): Iterations per restart
        tol (float, optional): Relative decrease that stops a restart
        seed (int, optional): Seed of the initial ratios
        threads (int, optional): Restarts run in parallel
        backend (str, optional): LP backend

    Returns:
        AlternatingSolution: Best B (projected onto the centralizer), its ratio and objective history
    """
    A = as_square(A, "A")
    restarts = int(resolve("restarts", restarts))
    max_iter = int(resolve("max_iter", max_iter))
    tol = float(resolve("am_tol", tol))
    threads = max(1, int(resolve("threads", threads)))
    if restarts < 1:
        raise PreconditionError("restarts must be at least 1")
    if max_iter < 1:
        raise PreconditionError("max_iter must be at least 1")
    if wt.n != A.shape[0]:
        raise PreconditionError(f"weighting is {wt.n}x{wt.n} but A is {A.shape[0]}x{A.shape[0]}")

    spectral = _Spectral(A, tol_eig)
    K = _commutation_matrix(A)
    rng = np.random.default_rng(seed)
    starts = [0.0] + rng.uniform(0.0, 1.0, restarts - 1).tolist()

    def run(index):
        return _run_restart(A, spectral, wt, K, index, starts[index], max_iter, tol, backend)

    if threads > 1 and restarts > 1:
        with ThreadPoolExecutor(max_workers=min(threads, restarts)) as pool:
            outcomes = list(pool.map(run, range(restarts)))
    else:
        outcomes = [run(i) for i in range(restarts)]

    finished = [o for o in outcomes if o.ok]
    if not finished:
        raise SolverFailure(f"all {restarts} alternating restarts failed", restarts=[o.to_dict() for o in outcomes])
    best = min(finished, key=lambda o: (o.objective, o.index))

    B = project_to_centralizer(A, best.B, tol_eig)
    logger.info("Alternating minimization: best objective %.10g from restart %d", best.objective, best.index)
    return AlternatingSolution(B, best.k, best.objective, best.history, outcomes, best.index)


class DesignResult:
    """Designed complementary network with its switching certificate"""

    def __init__(self, B, k_star, alpha_star, method, pattern, certificate, alpha_B,
                 objective=None, objective_history=None, relaxation_k=None, bound_hit=False,
                 warnings=None, seed=None, restart_log=None, order=None):
        self.B = B
        self.k_star = k_star
        self.alpha_star = alpha_star
        self.method = method
        self.pattern = pattern
        self.certificate = certificate
        self.alpha_B = alpha_B
        self.objective = objective
        self.objective_history = objective_history or []
        self.relaxation_k = relaxation_k
        self.bound_hit = bound_hit
        self.warnings = warnings or []
        self.seed = seed
        self.restart_log = restart_log or []
        self.order = order

    def to_dict(self):
        return {
            "method": self.method,
            "order": self.order,
            "seed": self.seed,
            "k_star": self.k_star,
            "alpha_star": self.alpha_star,
            "alpha_B": self.alpha_B,
            "objective": self.objective,
            "objective_history": list(self.objective_history),
            "relaxation_k": self.relaxation_k,
            "bound_hit": self.bound_hit,
            "nonzeros": self.B.nnz,
            "pattern": self.pattern.to_list() if self.pattern is not None else None,
            "B": self.B.weights.tolist(),
            "certificate": self.certificate.to_dict(),
            "warnings": list(self.warnings),
            "restart_log": list(self.restart_log),
        }


def _post_checks(A, B, k_star, alpha_star):
    """
    Verify the design invariants on the final network

    Raises:
        SolverFailure: B changes the trace, does not commute with A, or the certified
            abscissa disagrees with the eigenvalues of the switched network
    """
    comm, trace = _defects(A, B)
    if trace > 1e-6:
        raise SolverFailure(f"trace(B)={np.trace(B):.10g} differs from trace(A)={np.trace(A):.10g}",
                            trace_error=trace)
    if comm > COMMUTATION_LIMIT:
        raise SolverFailure(f"designed network commutes with A only to {comm:.3g} (relative)", commutator=comm)
    check = spectral_abscissa(commutative_average(A, B, k_star))
    if abs(check - alpha_star) > 1e-6 * (1.0 + abs(check)):
        raise SolverFailure(f"alpha(k*A + (1-k*)B) = {check:.10g} differs from alpha* = {alpha_star:.10g}",
                            alpha=check, alpha_star=alpha_star)


def spnopt(A, gamma_low=None, gamma_high=None, a=None, p=None, method="mccormick", seed=None,
           restarts=None, max_iter=None, tol=None, pattern=None, initial=None, backend=None):
    """
    Design a sparse commuting network and its optimal switching ratio

    Args:
        A (Network or array_like): Network with distinct eigenvalues
        gamma_low (float, optional): Penalty off the pattern
        gamma_high (float, optional): Penalty on the pattern
        a (float, optional): McCormick coefficient bound
        p (int, optional): Basis order, default n up to truncate_above nodes, truncated_order beyond
        method (str): 'mccormick' or 'alternating' ('am')
        seed (int, optional): Seed for pattern search and restarts
        restarts (int, optional): Alternating restarts
        max_iter (int, optional): Alternating iterations per restart
        tol (float, optional): Alternating stopping tolerance
        pattern (SparsityPattern, optional): Use this pattern instead of running the construction
        initial (SparsityPattern, optional): Starting pattern for the construction
        backend (str, optional): LP backend

    Returns:
        DesignResult: B, the switching certificate and diagnostics

    Raises:
        SolverFailure: The designed network breaks the trace or commutation constraint,
            or its certificate does not match the switched network
    """
    method = METHOD_ALIASES.get(method, method)
    if method not in METHODS:
        raise PreconditionError(f"method must be one of {', '.join(METHODS)}, got '{method}'")
    label = A.label if isinstance(A, Network) else ""
    A = as_square(A, "A")
    n = A.shape[0]
    p = default_order(n) if p is None else int(p)
    tol_comm = resolve("tol_comm")

    basis = centralizer_basis(A, p)
    if pattern is None:
        pattern = scnet(A, initial, seed=seed, basis=basis)
    elif pattern.n != n:
        raise PreconditionError(f"pattern is {pattern.n}x{pattern.n}, expected {n}x{n}")
    wt = build_weighting(pattern, gamma_low, gamma_high)
    logger.info("Designing with %s at order p=%d, %d penalized edges", method, p, len(pattern))

    history = []
    relaxation_k = None
    bound_hit = False
    restart_log = []
    if method == "mccormick":
        solution = solve_mccormick(A, basis, wt, a, backend=backend)
        c = polish_coefficients(basis, solution.c, np.trace(A))
        B = recover_network(basis, c, label=f"{label} complement".strip())
        objective = solution.objective
        relaxation_k = solution.relaxation_k
        bound_hit = solution.bound_hit
    else:
        solution = solve_alternating(A, wt, restarts, max_iter, tol, seed, backend=backend)
        B = _snapped(solution.B, label=f"{label} complement".strip())
        objective = solution.objective
        history = solution.history
        restart_log = solution.restart_log

    warnings = []
    Bm = B.weights
    comm, _ = _defects(A, Bm)
    if comm > COMMUTATION_LIMIT:
        raise SolverFailure(f"designed network commutes with A only to {comm:.3g} (relative)", commutator=comm)
    switch_tol = tol_comm
    if comm > tol_comm:
        switch_tol = 10.0 * comm
        warnings.append(f"designed network commutes with A only to {comm:.3g} (relative)")
    certificate = opt_switch(A, Bm, tol_comm=switch_tol)

    alpha_B = spectral_abscissa(Bm)
    if alpha_B >= 0:
        warnings.append(f"designed network is not Hurwitz (alpha(B) = {alpha_B:.6g})")
    if bound_hit:
        warnings.append("McCormick coefficients touch the bound a")
    _post_checks(A, Bm, certificate.k_star, certificate.alpha_star)
    for message in warnings:
        logger.warning(message)

    return DesignResult(
        B=B,
        k_star=certificate.k_star,
        alpha_star=certificate.alpha_star,
        method=method,
        pattern=pattern,
        certificate=certificate,
        alpha_B=alpha_B,
        objective=objective,
        objective_history=history,
        relaxation_k=relaxation_k,
        bound_hit=bound_hit,
        warnings=warnings,
        seed=seed,
        restart_log=restart_log,
        order=p,
    )
