"""
Dense matrix kernels for NetSwitch
Eigen-decompositions, common eigenbases, matrix exponential and logarithm,
centralizer bases and numerical rank
"""

import logging

import numpy as np
import scipy.linalg

from netswitch.core.errors import (
    DegenerateSpectrumError,
    EigenSolverError,
    MatrixOverflowError,
    NetworkError,
    NonCommutingError,
    NoRealLogarithmError,
    NumericalError,
    PreconditionError,
)
from netswitch.utils.config import resolve

logger = logging.getLogger(__name__)


class Network:
    """Weighted digraph stored as a dense square matrix"""

    def __init__(self, weights, label=""):
        """
        Initialize the network

        Args:
            weights (array_like): Square real matrix, entry (i, j) is the weight of edge (i, j)
            label (str, optional): Free-form name
        """
        try:
            matrix = np.array(weights, dtype=float)
        except (TypeError, ValueError) as e:
            raise NetworkError(f"network weights are not numeric: {e}")
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise NetworkError(f"network weights must be square, got shape {matrix.shape}")
        if matrix.shape[0] < 1:
            raise NetworkError("network must have at least one node")
        if not np.all(np.isfinite(matrix)):
            raise NetworkError("network weights must be finite")
        matrix.setflags(write=False)
        self.weights = matrix
        self.label = label

    @property
    def n(self):
        return self.weights.shape[0]

    @property
    def nnz(self):
        return int(np.count_nonzero(self.weights))

    def __repr__(self):
        return f"Network(n={self.n}, nnz={self.nnz}, label={self.label!r})"

    def __eq__(self, other):
        if not isinstance(other, Network):
            return NotImplemented
        return self.label == other.label and np.array_equal(self.weights, other.weights)

    __hash__ = None


def as_matrix(M):
    """
    Get the weight matrix of a Network or array

    Args:
        M (Network or array_like): Input

    Returns:
        numpy.ndarray: Float matrix
    """
    if isinstance(M, Network):
        return M.weights
    return np.asarray(M, dtype=float)


def as_square(M, name="matrix"):
    M = as_matrix(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise PreconditionError(f"{name} must be square, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise PreconditionError(f"{name} has non-finite entries")
    return M


def _sort_order(values):
    # Descending real part, then descending imaginary part
    return np.lexsort((-np.imag(values), -np.real(values)))


class Spectrum:
    """Eigenvalues of a matrix, sorted by decreasing real part"""

    def __init__(self, eigenvalues):
        """
        Initialize the spectrum

        Args:
            eigenvalues (array_like): Complex eigenvalues in any order
        """
        values = np.asarray(eigenvalues, dtype=complex)
        self.eigenvalues = values[_sort_order(values)]

    @property
    def abscissa(self):
        return float(np.max(self.eigenvalues.real))

    @property
    def is_hurwitz(self):
        return self.abscissa < 0

    def __len__(self):
        return len(self.eigenvalues)

    def __iter__(self):
        return iter(self.eigenvalues)

    def is_conjugate_closed(self, tol_eig=None):
        """
        Check that non-real eigenvalues come in conjugate pairs

        Args:
            tol_eig (float, optional): Relative matching tolerance

        Returns:
            bool: True if every eigenvalue has its conjugate in the spectrum
        """
        tol = resolve("tol_eig", tol_eig) * max(1.0, float(np.max(np.abs(self.eigenvalues))))
        for value in self.eigenvalues:
            if np.min(np.abs(self.eigenvalues - np.conj(value))) > tol:
                return False
        return True


def spectrum(M):
    """
    Compute the spectrum of a square matrix

    Args:
        M (Network or array_like): Square real matrix

    Returns:
        Spectrum: Sorted eigenvalues
    """
    M = as_square(M)
    try:
        values = np.linalg.eigvals(M)
    except np.linalg.LinAlgError as e:
        raise EigenSolverError(f"eigenvalue computation did not converge: {e}")
    return Spectrum(values)


def spectral_abscissa(M):
    """
    Compute the largest real part over the eigenvalues of M

    Args:
        M (Network or array_like): Square real matrix

    Returns:
        float: Spectral abscissa
    """
    return spectrum(M).abscissa


def matrix_exponential(M, t=1.0):
    """
    Compute e^{Mt} by scaling and squaring with a Pade approximant

    Args:
        M (Network or array_like): Square real matrix
        t (float): Time

    Returns:
        numpy.ndarray: Matrix exponential
    """
    M = as_square(M)
    with np.errstate(over="ignore", invalid="ignore"):
        E = scipy.linalg.expm(M * t)
    if not np.all(np.isfinite(E)):
        raise MatrixOverflowError(
            f"matrix exponential overflowed (||M t||_F = {np.linalg.norm(M) * abs(t):.3g})"
        )
    return E


def matrix_logarithm(M, tol_eig=None):
    """
    Compute the principal real logarithm of M

    Args:
        M (array_like): Square real matrix with no eigenvalue on the closed negative real axis
        tol_eig (float, optional): Relative tolerance for the axis test

    Returns:
        numpy.ndarray: Real matrix L with e^L = M
    """
    M = as_square(M)
    values = spectrum(M).eigenvalues
    scale = max(1.0, float(np.max(np.abs(values))))
    tol = resolve("tol_eig", tol_eig) * scale
    on_axis = (np.abs(values.imag) <= tol) & (values.real <= tol)
    if np.any(on_axis):
        raise NoRealLogarithmError(
            "no principal real logarithm: eigenvalue on the closed negative real axis "
            f"({values[on_axis][0]:.6g})"
        )

    L = scipy.linalg.logm(M)
    if not np.all(np.isfinite(L)):
        raise NumericalError("matrix logarithm produced non-finite entries")
    if np.iscomplexobj(L):
        imag = float(np.max(np.abs(L.imag)))
        if imag > 1e-8 * (1.0 + float(np.max(np.abs(L.real)))):
            raise NumericalError(f"matrix logarithm is not real (imaginary part {imag:.3g})")
        L = L.real
    return np.array(L, dtype=float)


def vec(M):
    """Stack the columns of M into one vector"""
    return np.asarray(M).reshape(-1, order="F")


def unvec(v, n):
    """Inverse of vec for an n x n matrix"""
    return np.asarray(v).reshape((n, n), order="F")


def vec_index(i, j, n):
    """
    Get the 1-based vec position of entry (i, j)

    Args:
        i (int): 1-based row
        j (int): 1-based column
        n (int): Matrix size

    Returns:
        int: h = (j - 1) n + i
    """
    return (j - 1) * n + i


def edge_of(h, n):
    """
    Get the entry (i, j) at 1-based vec position h

    Args:
        h (int): Position in [1, n^2]
        n (int): Matrix size

    Returns:
        tuple: 1-based (i, j)
    """
    return (h - 1) % n + 1, (h - 1) // n + 1


class EigenPairing:
    """Shared eigenvectors of two commuting matrices with their paired eigenvalues"""

    def __init__(self, V, V_inv, lambdas, mus):
        """
        Initialize the pairing

        Args:
            V (numpy.ndarray): Unit-norm common eigenvectors as columns
            V_inv (numpy.ndarray): Inverse of V; its rows are the left eigenvectors
            lambdas (numpy.ndarray): Eigenvalues of the first matrix
            mus (numpy.ndarray): Eigenvalues of the second matrix on the same vectors
        """
        self.V = V
        self.V_inv = V_inv
        self.lambdas = lambdas
        self.mus = mus
        self.cond_V = float(np.linalg.cond(V))

    @property
    def pairs(self):
        return list(zip(self.lambdas, self.mus))

    def real_pairs(self):
        """
        Get the real parts of the pairs

        Returns:
            numpy.ndarray: Array of shape (n, 2) with columns Re(lambda), Re(mu)
        """
        return np.column_stack([self.lambdas.real, self.mus.real])


def _check_distinct(values, tol_eig):
    scale = max(1.0, float(np.max(np.abs(values))))
    gaps = np.abs(values[:, None] - values[None, :])
    np.fill_diagonal(gaps, np.inf)
    smallest = float(np.min(gaps)) if len(values) > 1 else np.inf
    if smallest <= tol_eig * scale:
        raise DegenerateSpectrumError(
            f"repeated eigenvalues (smallest gap {smallest:.3g}); distinct eigenvalues are required"
        )


def eigenbasis(A, tol_eig=None):
    """
    Diagonalize a matrix with distinct eigenvalues

    Args:
        A (Network or array_like): Square real matrix
        tol_eig (float, optional): Relative gap below which eigenvalues count as repeated

    Returns:
        tuple: (eigenvalues, V, V_inv) sorted by decreasing real part
    """
    A = as_square(A)
    try:
        values, V = scipy.linalg.eig(A)
    except (scipy.linalg.LinAlgError, ValueError) as e:
        raise EigenSolverError(f"eigendecomposition did not converge: {e}")
    _check_distinct(values, resolve("tol_eig", tol_eig))

    order = _sort_order(values)
    values = values[order]
    V = V[:, order]
    V = V / np.linalg.norm(V, axis=0)
    try:
        V_inv = np.linalg.inv(V)
    except np.linalg.LinAlgError:
        raise EigenSolverError("eigenvector matrix is singular")
    return values, V, V_inv


def common_eigenbasis(A, B, tol_eig=None, tol_comm=None):
    """
    Pair the eigenvalues of two commuting matrices through shared eigenvectors

    Args:
        A (Network or array_like): Matrix with distinct eigenvalues
        B (Network or array_like): Matrix commuting with A
        tol_eig (float, optional): Relative eigen tolerance
        tol_comm (float, optional): Relative commutator tolerance

    Returns:
        EigenPairing: Pairs (lambda_i, mu_i) sorted by decreasing Re(lambda)
    """
    A = as_square(A, "A")
    B = as_square(B, "B")
    if A.shape != B.shape:
        raise PreconditionError(f"A and B differ in size: {A.shape} vs {B.shape}")

    tol_eig = resolve("tol_eig", tol_eig)
    tol_comm = resolve("tol_comm", tol_comm)
    norm_A = np.linalg.norm(A)
    norm_B = np.linalg.norm(B)
    commutator = np.linalg.norm(A @ B - B @ A)
    if commutator > tol_comm * norm_A * norm_B:
        raise NonCommutingError(
            f"A and B do not commute: ||AB - BA||_F = {commutator:.3g}",
            commutator=commutator,
        )

    lambdas, V, V_inv = eigenbasis(A, tol_eig)
    mus = np.einsum("ij,jk,ki->i", V_inv, B, V)

    # Residuals of both eigen-relations, column by column
    res_A = np.linalg.norm(A @ V - V * lambdas, axis=0)
    res_B = np.linalg.norm(B @ V - V * mus, axis=0)
    if np.any(res_A > tol_eig * max(norm_A, 1e-300)) or np.any(res_B > tol_eig * max(norm_B, 1e-300)):
        logger.warning(
            "Eigen residuals above tolerance (A: %.3g, B: %.3g); eigenvector matrix cond %.3g",
            float(np.max(res_A)), float(np.max(res_B)), float(np.linalg.cond(V)),
        )
    return EigenPairing(V, V_inv, lambdas, mus)


def project_to_centralizer(A, B, tol_eig=None):
    """
    Project B onto the matrices commuting with A

    Args:
        A (Network or array_like): Matrix with distinct eigenvalues
        B (Network or array_like): Approximately commuting matrix

    Returns:
        numpy.ndarray: Real matrix V diag(mu) V^-1 with mu_i = u_i^T B v_i
    """
    B = as_square(B, "B")
    _, V, V_inv = eigenbasis(A, tol_eig)
    mus = np.einsum("ij,jk,ki->i", V_inv, B, V)
    return np.real(V @ np.diag(mus) @ V_inv)


class CentralizerBasis:
    """Vectorized powers of A spanning its centralizer, with the matching Vandermonde matrix"""

    def __init__(self, order, powers, vandermonde, eigenvalues):
        """
        Initialize the basis

        Args:
            order (int): Number of powers p
            powers (numpy.ndarray): n^2 x p matrix, column j is vec(A^(j-1))
            vandermonde (numpy.ndarray): n x p matrix, entry (i, j) is lambda_i^(j-1)
            eigenvalues (numpy.ndarray): Sorted eigenvalues of A
        """
        self.order = order
        self.powers = powers
        self.vandermonde = vandermonde
        self.eigenvalues = eigenvalues
        self.n = int(round(np.sqrt(powers.shape[0])))

        norms = np.linalg.norm(powers, axis=0)
        self.column_scale = np.where(norms > 0, norms, 1.0)
        self.condition = float(np.linalg.cond(powers)) if powers.size else np.inf

    @property
    def distinct_rows(self):
        """Indices of one eigenvalue per conjugate pair"""
        values = self.eigenvalues
        tol = 1e-12 * max(1.0, float(np.max(np.abs(values))))
        return np.flatnonzero(values.imag >= -tol)

    def trace_row(self):
        """
        Get the linear functional c -> trace(unvec(A_p c))

        Returns:
            numpy.ndarray: vec(I)^T A_p
        """
        return vec(np.eye(self.n)) @ self.powers

    def matrix(self, c):
        """Reconstruct unvec(A_p c)"""
        return unvec(self.powers @ np.asarray(c, dtype=float), self.n)


def centralizer_basis(A, p=None, cond_warn=None):
    """
    Build the power basis I, A, ..., A^(p-1) of the centralizer of A

    Args:
        A (Network or array_like): Square real matrix
        p (int, optional): Order, defaults to n
        cond_warn (float, optional): Condition number above which a warning is logged

    Returns:
        CentralizerBasis: Stacked vectorized powers and Vandermonde matrix
    """
    A = as_square(A, "A")
    n = A.shape[0]
    p = n if p is None else int(p)
    if not 1 <= p <= n:
        raise PreconditionError(f"order p must satisfy 1 <= p <= {n}, got {p}")

    columns = [vec(np.eye(n))]
    power = np.eye(n)
    for j in range(1, p):
        with np.errstate(over="ignore", invalid="ignore"):
            power = power @ A
        norm = np.linalg.norm(power)
        if not np.isfinite(norm):
            raise MatrixOverflowError(
                f"A^{j} overflowed; use a smaller order p or rescale A"
            )
        logger.debug("||A^%d||_F = %.3e", j, norm)
        columns.append(vec(power))
    powers = np.column_stack(columns)

    eigenvalues = spectrum(A).eigenvalues
    vandermonde = np.vander(eigenvalues, p, increasing=True)
    basis = CentralizerBasis(p, powers, vandermonde, eigenvalues)

    if basis.condition > resolve("cond_warn", cond_warn):
        logger.warning(
            "Centralizer basis is ill-conditioned (cond %.3g at p=%d); consider a smaller order",
            basis.condition, p,
        )
    return basis


def numerical_rank(M, tol_rank=None):
    """
    Count singular values above tol_rank * sigma_max * max(rows, cols)

    Args:
        M (array_like): Real rectangular matrix
        tol_rank (float, optional): Relative threshold

    Returns:
        int: Numerical rank
    """
    M = np.asarray(M, dtype=float)
    if M.size == 0:
        return 0
    s = np.linalg.svd(M, compute_uv=False)
    if s[0] == 0:
        return 0
    threshold = resolve("tol_rank", tol_rank) * s[0] * max(M.shape)
    return int(np.sum(s > threshold))
