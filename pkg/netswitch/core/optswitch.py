"""
Optimal switching ratio for NetSwitch
Envelope minimization over paired eigenvalues, improvement conditions and resilience bounds
"""

import logging

import numpy as np

from netswitch.core.errors import (
    ImprovementConditionError,
    NonUniqueMaximumError,
    NumericalError,
    PreconditionError,
)
from netswitch.core.floquet import commutative_average
from netswitch.core.linalg import common_eigenbasis, spectral_abscissa

logger = logging.getLogger(__name__)


def _real_pairs(pairs):
    """Coerce (lambda, mu) pairs to an (n, 2) array of real parts"""
    arr = np.asarray(pairs)
    if arr.size == 0:
        raise PreconditionError("need at least one eigenvalue pair")
    arr = np.real(arr).astype(float).reshape(-1, 2)
    if not np.all(np.isfinite(arr)):
        raise PreconditionError("eigenvalue pairs must be finite")
    return arr


def _equal_tol(value):
    return 1e-8 * (1.0 + abs(value))


class RROSSolution:
    """Minimizer of the upper envelope of the eigenvalue lines over [0, 1]"""

    def __init__(self, k_star, alpha_star, active_pairs, argmin_interval):
        """
        Initialize the solution

        Args:
            k_star (float): Smallest minimizing ratio
            alpha_star (float): Envelope value at k_star
            active_pairs (list): Indices of lines attaining the envelope at k_star
            argmin_interval (tuple): (left, right) ends of the minimizing set
        """
        self.k_star = k_star
        self.alpha_star = alpha_star
        self.active_pairs = active_pairs
        self.argmin_interval = argmin_interval

    def __iter__(self):
        return iter((self.k_star, self.alpha_star, self.active_pairs))

    def __repr__(self):
        return f"RROSSolution(k_star={self.k_star:.6g}, alpha_star={self.alpha_star:.6g})"


def envelope(pairs, k):
    """
    Evaluate g(k) = max_i k Re(lambda_i) + (1-k) Re(mu_i)

    Args:
        pairs (array_like): Eigenvalue pairs
        k (float or array_like): Ratio or ratios

    Returns:
        float or numpy.ndarray: Envelope values
    """
    arr = _real_pairs(pairs)
    k = np.asarray(k, dtype=float)
    values = np.multiply.outer(k, arr[:, 0]) + np.multiply.outer(1.0 - k, arr[:, 1])
    return values.max(axis=-1)


def solve_rros(pairs):
    """
    Minimize the upper envelope of the lines f_i(k) = k Re(lambda_i) + (1-k) Re(mu_i)

    Args:
        pairs (array_like): Eigenvalue pairs, complex or real, shape (n, 2)

    Returns:
        RROSSolution: Optimal ratio, value, active lines and argmin interval
    """
    arr = _real_pairs(pairs)
    a = arr[:, 0]
    b = arr[:, 1]
    slope = a - b

    candidates = [0.0, 1.0]
    ds = slope[:, None] - slope[None, :]
    db = b[None, :] - b[:, None]
    with np.errstate(divide="ignore", invalid="ignore"):
        k_ij = db / ds
    mask = (ds != 0) & np.isfinite(k_ij) & (k_ij > 0.0) & (k_ij < 1.0)
    candidates.extend(np.unique(k_ij[mask]).tolist())
    candidates = np.unique(np.asarray(candidates))

    values = envelope(arr, candidates)
    best = float(np.min(values))
    tol = 1e-12 * (1.0 + abs(best))
    minimizing = candidates[values <= best + tol]
    k_star = float(minimizing[0])
    interval = (k_star, float(minimizing[-1]))

    lines = k_star * a + (1.0 - k_star) * b
    alpha_star = float(np.max(lines))
    active = np.flatnonzero(lines >= alpha_star - _equal_tol(alpha_star)).tolist()
    logger.debug("Envelope minimum %.10g at k=%.10g over %d candidates", alpha_star, k_star, len(candidates))
    return RROSSolution(k_star, alpha_star, active, interval)


class DominantData:
    """Spectral abscissas of both networks and the cross values of their dominant pairs"""

    def __init__(self, pairs, alpha_A, alpha_B, beta_A, beta_B, unique):
        """
        Initialize the dominant data

        Args:
            pairs (numpy.ndarray): Real parts, shape (n, 2)
            alpha_A (float): max Re(lambda_i)
            alpha_B (float): max Re(mu_i)
            beta_A (float): Re(lambda) of the pair attaining alpha_B
            beta_B (float): Re(mu) of the pair attaining alpha_A
            unique (bool): Whether each maximum is attained by a single point
        """
        self.pairs = pairs
        self.alpha_A = alpha_A
        self.alpha_B = alpha_B
        self.beta_A = beta_A
        self.beta_B = beta_B
        self.unique = unique

    @property
    def delta_A(self):
        return self.alpha_A - self.beta_A

    @property
    def delta_B(self):
        return self.alpha_B - self.beta_B

    @property
    def segments(self):
        """Slopes and intercepts (Re(lambda) - Re(mu), Re(mu)) of every line"""
        return np.column_stack([self.pairs[:, 0] - self.pairs[:, 1], self.pairs[:, 1]])


def _maximizers(pairs, column):
    values = pairs[:, column]
    top = float(np.max(values))
    return top, np.flatnonzero(values >= top - _equal_tol(top))


def _distinct_points(points):
    # Conjugate eigenvalues land on the same point and count once
    distinct = []
    for p in points:
        if not any(np.all(np.abs(p - q) <= _equal_tol(float(np.max(np.abs(q))))) for q in distinct):
            distinct.append(p)
    return distinct


def dominant_data(pairs):
    """
    Extract the dominant pairs of both networks

    Args:
        pairs (array_like): Eigenvalue pairs

    Returns:
        DominantData: alpha_A, alpha_B, beta_A, beta_B and the uniqueness flag
    """
    arr = _real_pairs(pairs)
    alpha_A, top_A = _maximizers(arr, 0)
    alpha_B, top_B = _maximizers(arr, 1)
    unique = len(_distinct_points(arr[top_A])) == 1 and len(_distinct_points(arr[top_B])) == 1
    beta_B = float(np.max(arr[top_A, 1]))
    beta_A = float(np.max(arr[top_B, 0]))
    return DominantData(arr, alpha_A, alpha_B, beta_A, beta_B, unique)


def improvement_condition(d):
    """
    Check beta_B < alpha_A and beta_A < alpha_B

    Args:
        d (DominantData): Dominant data with unique maximizers

    Returns:
        bool: True if switching strictly improves on both networks
    """
    if not d.unique:
        raise NonUniqueMaximumError(
            "spectral abscissa attained by more than one eigenvalue pair; use general_condition"
        )
    return bool(
        d.beta_B < d.alpha_A - _equal_tol(d.alpha_A)
        and d.beta_A < d.alpha_B - _equal_tol(d.alpha_B)
    )


def general_condition(pairs):
    """
    Check the improvement condition without assuming unique maximizers

    Args:
        pairs (array_like): Eigenvalue pairs

    Returns:
        bool: True if every A-maximizer has Re(mu) < alpha_A and every B-maximizer has Re(lambda) < alpha_B
    """
    arr = _real_pairs(pairs)
    alpha_A, top_A = _maximizers(arr, 0)
    alpha_B, top_B = _maximizers(arr, 1)
    ok_A = np.all(arr[top_A, 1] < alpha_A - _equal_tol(alpha_A))
    ok_B = np.all(arr[top_B, 0] < alpha_B - _equal_tol(alpha_B))
    return bool(ok_A and ok_B)


def solve_ao1(d):
    """
    Minimize the envelope of the two dominant lines only

    Args:
        d (DominantData): Dominant data

    Returns:
        RROSSolution: Optimum over the lines (alpha_A, beta_B) and (beta_A, alpha_B)
    """
    return solve_rros([(d.alpha_A, d.beta_B), (d.beta_A, d.alpha_B)])


def resilience_bounds(d):
    """
    Bracket the optimal switched resilience

    Args:
        d (DominantData): Dominant data satisfying the improvement condition

    Returns:
        tuple: (lower, upper) with lower <= alpha_star < upper
    """
    if not improvement_condition(d):
        raise ImprovementConditionError(
            f"switching cannot improve resilience (alpha_A={d.alpha_A:.6g}, beta_B={d.beta_B:.6g}, "
            f"alpha_B={d.alpha_B:.6g}, beta_A={d.beta_A:.6g})"
        )
    total = d.delta_A + d.delta_B
    lower = d.alpha_A + d.delta_A / total * (d.beta_B - d.alpha_A)
    cross = d.alpha_B + d.delta_B / total * (d.beta_A - d.alpha_B)
    if abs(lower - cross) > 1e-10 * (1.0 + abs(lower)):
        raise NumericalError(f"dominant lines disagree at their crossing: {lower!r} vs {cross!r}")
    if not max(d.beta_A, d.beta_B) < lower:
        raise NumericalError(f"lower bound {lower:.6g} does not exceed the cross values")
    return lower, min(d.alpha_A, d.alpha_B)


def general_lower_bound(pairs):
    """
    Lower-bound the switched resilience from the pairs touching either abscissa

    Args:
        pairs (array_like): Eigenvalue pairs satisfying general_condition

    Returns:
        float: Envelope minimum restricted to the dominant pairs
    """
    arr = _real_pairs(pairs)
    if not general_condition(arr):
        raise ImprovementConditionError("switching cannot improve resilience for these pairs")
    _, top_A = _maximizers(arr, 0)
    _, top_B = _maximizers(arr, 1)
    J = np.union1d(top_A, top_B)
    return solve_rros(arr[J]).alpha_star


class SwitchCertificate:
    """Optimal switching ratio with its improvement certificate and bounds"""

    def __init__(self, improvable, k_star, alpha_star, lower_bound, upper_bound, uniqueness,
                 active_pairs, argmin_interval, alpha_A, alpha_B, pairs):
        self.improvable = improvable
        self.k_star = k_star
        self.alpha_star = alpha_star
        self.lower_bound = lower_bound
        self.upper_bound = upper_bound
        self.uniqueness = uniqueness
        self.active_pairs = active_pairs
        self.argmin_interval = argmin_interval
        self.alpha_A = alpha_A
        self.alpha_B = alpha_B
        self.pairs = pairs

    def to_dict(self):
        return {
            "improvable": self.improvable,
            "k_star": self.k_star,
            "alpha_star": self.alpha_star,
            "lower_bound": self.lower_bound,
            "upper_bound": self.upper_bound,
            "uniqueness": self.uniqueness,
            "active_pairs": list(self.active_pairs),
            "argmin_interval": list(self.argmin_interval),
            "alpha_A": self.alpha_A,
            "alpha_B": self.alpha_B,
            "pairs": [[float(a), float(b)] for a, b in self.pairs],
        }

    def __repr__(self):
        return (
            f"SwitchCertificate(improvable={self.improvable}, k_star={self.k_star:.6g}, "
            f"alpha_star={self.alpha_star:.6g})"
        )


def opt_switch(A, B, tol_eig=None, tol_comm=None):
    """
    Compute the optimal switching ratio between two commuting networks

    Args:
        A (Network or array_like): First network, distinct eigenvalues
        B (Network or array_like): Second network commuting with A
        tol_eig (float, optional): Eigen tolerance
        tol_comm (float, optional): Commutator tolerance

    Returns:
        SwitchCertificate: k_star, alpha_star, conditions and bounds
    """
    pairing = common_eigenbasis(A, B, tol_eig, tol_comm)
    pairs = pairing.real_pairs()
    rros = solve_rros(pairs)
    d = dominant_data(pairs)

    if d.unique:
        improvable = improvement_condition(d)
        lower = resilience_bounds(d)[0] if improvable else None
    else:
        improvable = general_condition(pairs)
        lower = general_lower_bound(pairs) if improvable else None
    upper = min(d.alpha_A, d.alpha_B)

    check = spectral_abscissa(commutative_average(A, B, rros.k_star))
    if abs(check - rros.alpha_star) > 1e-6 * (1.0 + abs(check)):
        raise NumericalError(
            f"envelope value {rros.alpha_star:.10g} disagrees with the averaged network ({check:.10g})"
        )

    logger.info(
        "Optimal ratio k*=%.6g, alpha*=%.6g (alpha_A=%.6g, alpha_B=%.6g, improvable=%s)",
        rros.k_star, rros.alpha_star, d.alpha_A, d.alpha_B, improvable,
    )
    return SwitchCertificate(
        improvable=improvable,
        k_star=rros.k_star,
        alpha_star=rros.alpha_star,
        lower_bound=lower,
        upper_bound=upper,
        uniqueness=d.unique,
        active_pairs=rros.active_pairs,
        argmin_interval=rros.argmin_interval,
        alpha_A=d.alpha_A,
        alpha_B=d.alpha_B,
        pairs=pairs,
    )
