"""
Sparsity patterns for NetSwitch
Forced-zero edge sets, their row submatrices of the centralizer basis,
and the greedy construction of maximal compatible patterns
"""

import logging

import numpy as np

from netswitch.core.errors import (
    IncompatiblePatternError,
    PatternNotFoundError,
    PreconditionError,
)
from netswitch.core.linalg import centralizer_basis, edge_of, vec_index
from netswitch.utils.config import resolve

logger = logging.getLogger(__name__)

# Relative leverage below which a row is a candidate for a free addition
LEVERAGE_TOL = 1e-8


class SparsityPattern:
    """Set of edges forced to zero in the complementary network"""

    def __init__(self, n, edges=()):
        """
        Initialize the pattern

        Args:
            n (int): Network size
            edges (iterable): 1-based (i, j) pairs
        """
        n = int(n)
        if n < 1:
            raise PreconditionError("pattern size must be at least 1")
        checked = set()
        for edge in edges:
            i, j = (int(v) for v in edge)
            if not (1 <= i <= n and 1 <= j <= n):
                raise PreconditionError(f"edge ({i}, {j}) lies outside a {n}x{n} network")
            checked.add((i, j))
        self.n = n
        self.edges = frozenset(checked)

    @classmethod
    def from_indices(cls, n, indices):
        """Build a pattern from 1-based vec positions"""
        return cls(n, (edge_of(int(h), n) for h in indices))

    @property
    def indices(self):
        """Sorted 1-based vec positions h = (j - 1) n + i"""
        return sorted(vec_index(i, j, self.n) for i, j in self.edges)

    def __len__(self):
        return len(self.edges)

    def __contains__(self, edge):
        return tuple(edge) in self.edges

    def __iter__(self):
        return iter(sorted(self.edges))

    def __eq__(self, other):
        if not isinstance(other, SparsityPattern):
            return NotImplemented
        return self.n == other.n and self.edges == other.edges

    __hash__ = None

    def mask(self):
        """Boolean n x n matrix, True on forced zeros"""
        M = np.zeros((self.n, self.n), dtype=bool)
        for i, j in self.edges:
            M[i - 1, j - 1] = True
        return M

    def to_list(self):
        return [list(e) for e in self]

    def __repr__(self):
        return f"SparsityPattern(n={self.n}, size={len(self)})"


class RowSubmatrix:
    """Rows of the centralizer basis selected by a pattern"""

    def __init__(self, rows, indices, order, scale, singular_values, rank):
        """
        Initialize the submatrix

        Args:
            rows (numpy.ndarray): |S| x p copy of the selected rows
            indices (list): 1-based vec positions of the rows
            order (int): Basis order p
            scale (numpy.ndarray): Column norms of the full basis
            singular_values (numpy.ndarray): Singular values of the column-scaled rows, length p
            rank (int): Numerical rank
        """
        self.rows = rows
        self.indices = list(indices)
        self.order = order
        self.scale = scale
        self.singular_values = singular_values
        self.rank = rank

    @property
    def scaled(self):
        return self.rows / self.scale

    @property
    def nullity(self):
        return self.order - self.rank

    def __repr__(self):
        return f"RowSubmatrix(rows={len(self.indices)}, order={self.order}, rank={self.rank})"


def _singular_values(M, p):
    s = np.zeros(p)
    if M.size:
        values = np.linalg.svd(M, compute_uv=False)
        s[:len(values)] = values
    return s


def _rank_threshold(s, shape, tol_rank):
    return resolve("tol_rank", tol_rank) * s[0] * max(shape)


def _submatrix(basis, indices, tol_rank=None):
    idx = np.asarray(indices, dtype=int) - 1
    rows = basis.powers[idx, :] if len(idx) else np.zeros((0, basis.order))
    scaled = rows / basis.column_scale
    s = _singular_values(scaled, basis.order)
    if s[0] == 0:
        rank = 0
    else:
        rank = int(np.sum(s > _rank_threshold(s, scaled.shape, tol_rank)))
    return RowSubmatrix(rows, indices, basis.order, basis.column_scale, s, rank)


def row_submatrix(basis, pat, tol_rank=None):
    """
    Select the rows of A_p indexed by a pattern

    Args:
        basis (CentralizerBasis): Centralizer basis of A
        pat (SparsityPattern): Forced-zero edges
        tol_rank (float, optional): Relative rank tolerance

    Returns:
        RowSubmatrix: Selected rows and their numerical rank
    """
    if pat.n != basis.n:
        raise PreconditionError(f"pattern is {pat.n}x{pat.n} but the basis is for n={basis.n}")
    return _submatrix(basis, pat.indices, tol_rank)


def is_compatible(sub):
    """
    Check whether a nontrivial coefficient vector annihilates the rows

    Args:
        sub (RowSubmatrix): Selected rows

    Returns:
        bool: True if the numerical rank is below the basis order
    """
    return sub.rank < sub.order


def _accepts(sub, tol_rank=None):
    """Rank deficiency with a margin below the rank threshold"""
    s = sub.singular_values
    if s[0] == 0:
        return True
    if len(sub.indices) < sub.order:
        return True
    return bool(s[-1] < 0.5 * _rank_threshold(s, (len(sub.indices), sub.order), tol_rank))


def _null_basis(sub, tol_rank=None):
    """Orthonormal null basis of the scaled rows, in scaled coordinates"""
    p = sub.order
    if not sub.indices:
        return np.eye(p)
    _, s, Vt = np.linalg.svd(sub.scaled, full_matrices=True)
    full = np.zeros(p)
    full[:len(s)] = s
    threshold = _rank_threshold(full, sub.rows.shape, tol_rank) if full[0] > 0 else 0.0
    rank = int(np.sum(full > threshold)) if full[0] > 0 else 0
    return Vt[rank:].T


def nullspace_vector(sub):
    """
    Get a unit coefficient vector annihilating the selected rows

    Args:
        sub (RowSubmatrix): Rank-deficient rows

    Returns:
        numpy.ndarray: Unit-norm c with A_r0 c ~ 0, largest component positive
    """
    p = sub.order
    if not sub.indices:
        c = np.zeros(p)
        c[0] = 1.0
        return c
    if not is_compatible(sub):
        raise IncompatiblePatternError(
            f"pattern rows have full rank {sub.rank}; no nontrivial compatible network exists"
        )
    _, _, Vt = np.linalg.svd(sub.scaled, full_matrices=True)
    c = Vt[-1] / sub.scale
    c = c / np.linalg.norm(c)
    if c[np.argmax(np.abs(c))] < 0:
        c = -c
    return c


def _leverage(basis, candidates, null):
    """Relative size of each candidate row against the null basis"""
    rows = basis.powers[np.asarray(candidates, dtype=int) - 1] / basis.column_scale
    norms = np.linalg.norm(rows, axis=1)
    lev = np.linalg.norm(rows @ null, axis=1)
    return np.where(norms > 0, lev / np.where(norms > 0, norms, 1.0), 0.0)


def default_initial_pattern(basis, tol_rank=None):
    """
    Choose p starting indices that already form a rank-deficient block

    Args:
        basis (CentralizerBasis): Centralizer basis of A
        tol_rank (float, optional): Relative rank tolerance

    Returns:
        SparsityPattern: The p-1 trailing diagonal entries plus one off-diagonal entry
    """
    n, p = basis.n, basis.order
    diagonal = [vec_index(i, i, n) for i in range(n - p + 2, n + 1)]
    off_diagonal = [h for h in range(1, n * n + 1) if edge_of(h, n)[0] != edge_of(h, n)[1]]
    if not off_diagonal:
        return SparsityPattern.from_indices(n, diagonal)

    for h in off_diagonal:
        if _accepts(_submatrix(basis, sorted(diagonal + [h]), tol_rank), tol_rank):
            return SparsityPattern.from_indices(n, diagonal + [h])

    # Nothing works directly; start from the weakest row and let the repair loop fix it
    norms = np.linalg.norm(basis.powers[np.asarray(off_diagonal) - 1] / basis.column_scale, axis=1)
    h = off_diagonal[int(np.argmin(norms))]
    return SparsityPattern.from_indices(n, diagonal + [h])


def _repair(basis, indices, rng, tol_rank):
    """Replace single indices until the square block is rank deficient"""
    n, p = basis.n, basis.order
    budget = 10 * n * n
    attempts = 0
    universe = np.arange(1, n * n + 1)

    # Deterministic sweep: drop one index and take a row orthogonal to the remaining null vector
    for pos in range(p):
        rest = indices[:pos] + indices[pos + 1:]
        null = _null_basis(_submatrix(basis, sorted(rest), tol_rank), tol_rank)
        unused = [int(h) for h in universe if h not in rest]
        lev = _leverage(basis, unused, null)
        for order in np.argsort(lev, kind="stable"):
            if attempts >= budget:
                break
            attempts += 1
            trial = sorted(rest + [unused[order]])
            if _accepts(_submatrix(basis, trial, tol_rank), tol_rank):
                logger.debug("Repaired initial pattern after %d attempts", attempts)
                return trial
            if lev[order] > LEVERAGE_TOL:
                break

    # Seeded random replacement
    while attempts < budget:
        attempts += 1
        pos = int(rng.integers(p))
        unused = [int(h) for h in universe if h not in indices]
        indices = sorted(indices[:pos] + indices[pos + 1:] + [int(rng.choice(unused))])
        if _accepts(_submatrix(basis, indices, tol_rank), tol_rank):
            logger.debug("Repaired initial pattern by random replacement after %d attempts", attempts)
            return indices

    raise PatternNotFoundError(
        f"no rank-deficient initial pattern found within {budget} replacements at order p={p}"
    )


def scnet(A, initial=None, p=None, seed=None, tol_rank=None, basis=None):
    """
    Grow a maximal forced-zero pattern that still admits a commuting network

    Args:
        A (Network or array_like): Network with distinct eigenvalues
        initial (SparsityPattern, optional): Starting pattern of size p, default from default_initial_pattern
        p (int, optional): Basis order, defaults to n
        seed (int, optional): Randomizes addition order and seeds the repair loop
        tol_rank (float, optional): Relative rank tolerance
        basis (CentralizerBasis, optional): Precomputed basis, overrides p

    Returns:
        SparsityPattern: Maximal-by-inclusion compatible pattern with at least p edges
    """
    if basis is None:
        basis = centralizer_basis(A, p)
    n, p = basis.n, basis.order
    if initial is None:
        initial = default_initial_pattern(basis, tol_rank)
    if initial.n != n:
        raise PreconditionError(f"initial pattern is {initial.n}x{initial.n}, expected {n}x{n}")
    if len(initial) != p:
        raise PreconditionError(f"initial pattern must have exactly p={p} edges, got {len(initial)}")

    rng = np.random.default_rng(seed)
    indices = initial.indices
    if not _accepts(_submatrix(basis, indices, tol_rank), tol_rank):
        logger.debug("Initial block has full rank; repairing")
        indices = _repair(basis, indices, rng, tol_rank)

    while True:
        sub = _submatrix(basis, indices, tol_rank)
        null = _null_basis(sub, tol_rank)
        used = set(indices)
        remaining = [h for h in range(1, n * n + 1) if h not in used]
        if not remaining or null.shape[1] == 0:
            break
        lev = _leverage(basis, remaining, null)

        free = [h for h, v in zip(remaining, lev) if v <= LEVERAGE_TOL]
        if free:
            trial = sorted(indices + free)
            if _accepts(_submatrix(basis, trial, tol_rank), tol_rank):
                logger.debug("Added %d zero-leverage rows at once", len(free))
                indices = trial
                continue
            added = False
            for h in free:
                trial = sorted(indices + [h])
                if _accepts(_submatrix(basis, trial, tol_rank), tol_rank):
                    logger.debug("Added row %d", h)
                    indices = trial
                    added = True
                    break
            if added:
                continue

        if null.shape[1] >= 2:
            if seed is None:
                order = [remaining[i] for i in np.argsort(lev, kind="stable")]
            else:
                order = [int(h) for h in rng.permutation(remaining)]
            accepted = None
            for h in order:
                trial = sorted(indices + [h])
                if _accepts(_submatrix(basis, trial, tol_rank), tol_rank):
                    accepted = trial
                    logger.debug("Added row %d (nullity %d)", h, null.shape[1])
                    break
                logger.debug("Rejected row %d", h)
            if accepted is not None:
                indices = accepted
                continue

        break

    pattern = SparsityPattern.from_indices(n, indices)
    logger.info("Compatible pattern with %d forced zeros (order p=%d)", len(pattern), p)
    return pattern
