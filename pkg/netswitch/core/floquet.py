"""
Periodic switching between two networks
Schedules, monodromy, averaged generator, and an exact trajectory simulator
"""

import logging

import numpy as np

from netswitch.core.errors import PreconditionError
from netswitch.core.linalg import (
    as_square,
    matrix_exponential,
    matrix_logarithm,
    spectral_abscissa,
)
from netswitch.utils.config import resolve

logger = logging.getLogger(__name__)


class SwitchSchedule:
    """Period T split into m segments, each running A then B"""

    def __init__(self, period, segments):
        """
        Initialize the schedule

        Args:
            period (float): Period T > 0
            segments (list): Pairs (dwell_A, dwell_B), each >= 0, summing to T
        """
        period = float(period)
        if not np.isfinite(period) or period <= 0:
            raise PreconditionError(f"period must be positive, got {period}")

        dwells = np.asarray(segments, dtype=float).reshape(-1, 2) if len(segments) else np.empty((0, 2))
        if dwells.shape[0] < 1:
            raise PreconditionError("schedule needs at least one segment")
        if not np.all(np.isfinite(dwells)) or np.any(dwells < 0):
            raise PreconditionError("dwell times must be finite and non-negative")
        total = float(dwells.sum())
        if abs(total - period) > 1e-12 * period:
            raise PreconditionError(f"dwell times sum to {total!r}, expected the period {period!r}")

        self.period = period
        self.segments = [(float(a), float(b)) for a, b in dwells]

    @property
    def m(self):
        return len(self.segments)

    @property
    def dwell_A(self):
        return sum(a for a, _ in self.segments)

    @property
    def dwell_B(self):
        return sum(b for _, b in self.segments)

    @property
    def k(self):
        """Fraction of the period during which A is active"""
        return min(1.0, max(0.0, self.dwell_A / self.period))

    def to_dict(self):
        return {"period": self.period, "k": self.k, "segments": [list(s) for s in self.segments]}

    def __repr__(self):
        return f"SwitchSchedule(period={self.period}, m={self.m}, k={self.k:.6g})"


def schedule_from_ratio(k, period, segments=1):
    """
    Split a period evenly into segments with ratio k

    Args:
        k (float): Fraction of time on A, in [0, 1]
        period (float): Period T
        segments (int): Number of A/B segments m

    Returns:
        SwitchSchedule: Schedule with every segment dwelling kT/m on A and (1-k)T/m on B
    """
    if not 0.0 <= k <= 1.0:
        raise PreconditionError(f"ratio k must lie in [0, 1], got {k}")
    if int(segments) < 1:
        raise PreconditionError("segments must be at least 1")
    segments = int(segments)
    period = float(period)
    dwell_A = k * period / segments
    dwell_B = period / segments - dwell_A
    return SwitchSchedule(period, [(dwell_A, max(0.0, dwell_B))] * segments)


class AveragedSystem:
    """Averaged generator of one switching period"""

    def __init__(self, Q, R, period):
        """
        Initialize the averaged system

        Args:
            Q (numpy.ndarray): Generator (1/T) log R
            R (numpy.ndarray): Monodromy matrix
            period (float): Period T
        """
        self.Q = Q
        self.R = R
        self.period = period
        self.alpha = spectral_abscissa(Q)


def _pair(A, B):
    A = as_square(A, "A")
    B = as_square(B, "B")
    if A.shape != B.shape:
        raise PreconditionError(f"A and B differ in size: {A.shape} vs {B.shape}")
    return A, B


def monodromy(A, B, schedule):
    """
    Compute the one-period state transition matrix

    Args:
        A (Network or array_like): First network
        B (Network or array_like): Second network
        schedule (SwitchSchedule): Switching law

    Returns:
        numpy.ndarray: R = prod_i e^{B dt_i2} e^{A dt_i1}, segment 1 applied first
    """
    A, B = _pair(A, B)
    R = np.eye(A.shape[0])
    for dwell_A, dwell_B in schedule.segments:
        R = matrix_exponential(B, dwell_B) @ (matrix_exponential(A, dwell_A) @ R)
    return R


def averaged_generator(A, B, schedule):
    """
    Compute Q = (1/T) log R for the switched system

    Args:
        A (Network or array_like): First network
        B (Network or array_like): Second network
        schedule (SwitchSchedule): Switching law

    Returns:
        AveragedSystem: Q, R and alpha(Q)
    """
    R = monodromy(A, B, schedule)
    Q = matrix_logarithm(R) / schedule.period
    return AveragedSystem(Q, R, schedule.period)


def commutative_average(A, B, k):
    """
    Compute kA + (1-k)B

    Args:
        A (Network or array_like): First network
        B (Network or array_like): Second network
        k (float): Ratio in [0, 1]

    Returns:
        numpy.ndarray: Convex combination of the two networks
    """
    if not 0.0 <= k <= 1.0:
        raise PreconditionError(f"ratio k must lie in [0, 1], got {k}")
    A, B = _pair(A, B)
    return k * A + (1.0 - k) * B


class Trajectory:
    """States sampled along a switched trajectory"""

    def __init__(self, times, states, period_indices):
        """
        Initialize the trajectory

        Args:
            times (numpy.ndarray): Sample times
            states (numpy.ndarray): States, one row per sample
            period_indices (list): Sample indices at t = l T for l = 0, 1, ...
        """
        self.times = times
        self.states = states
        self.period_indices = list(period_indices)

    def __len__(self):
        return len(self.times)

    def period_states(self):
        """
        Get the states at period boundaries

        Returns:
            tuple: (times l T, states x(l T))
        """
        idx = np.asarray(self.period_indices, dtype=int)
        return self.times[idx], self.states[idx]


def simulate(A, B, schedule, x0, periods, subsamples=None):
    """
    Propagate a state exactly through the switching law

    Args:
        A (Network or array_like): First network
        B (Network or array_like): Second network
        schedule (SwitchSchedule): Switching law
        x0 (array_like): Initial state
        periods (int): Number of periods L >= 1
        subsamples (int, optional): Uniform samples per segment, default from settings

    Returns:
        Trajectory: Samples at segment boundaries and in between
    """
    A, B = _pair(A, B)
    x0 = np.asarray(x0, dtype=float).reshape(-1)
    if x0.shape[0] != A.shape[0]:
        raise PreconditionError(f"x0 has length {x0.shape[0]}, expected {A.shape[0]}")
    if int(periods) < 1:
        raise PreconditionError("periods must be at least 1")
    subsamples = max(1, int(resolve("subsamples", subsamples)))

    # One entry per non-empty piece: (full-dwell propagator, sub-step propagator, dwell)
    pieces = []
    for dwell_A, dwell_B in schedule.segments:
        for M, dwell in ((A, dwell_A), (B, dwell_B)):
            if dwell > 0:
                pieces.append((
                    matrix_exponential(M, dwell),
                    matrix_exponential(M, dwell / subsamples),
                    dwell,
                ))

    times = [0.0]
    states = [x0.copy()]
    period_indices = [0]
    x = x0.copy()
    t = 0.0
    for l in range(int(periods)):
        for full, step, dwell in pieces:
            y = x
            for q in range(1, subsamples):
                y = step @ y
                times.append(t + dwell * q / subsamples)
                states.append(y)
            x = full @ x
            t += dwell
            times.append(t)
            states.append(x)
        # Pin the boundary time to l T
        t = (l + 1) * schedule.period
        times[-1] = t
        period_indices.append(len(times) - 1)

    return Trajectory(np.asarray(times), np.vstack(states), period_indices)


class AveragingGap:
    """Distance between the exact averaged generator and the commutative average"""

    def __init__(self, deviation, alpha_exact, alpha_average):
        self.deviation = deviation
        self.alpha_exact = alpha_exact
        self.alpha_average = alpha_average

    @property
    def alpha_gap(self):
        return self.alpha_exact - self.alpha_average


def averaging_gap(A, B, k, period, segments=1):
    """
    Compare Q from the exact monodromy with kA + (1-k)B

    Args:
        A (Network or array_like): First network
        B (Network or array_like): Second network
        k (float): Ratio in [0, 1]
        period (float): Period T
        segments (int): Number of A/B segments m

    Returns:
        AveragingGap: Frobenius deviation and spectral abscissa of both generators
    """
    schedule = schedule_from_ratio(k, period, segments)
    exact = averaged_generator(A, B, schedule)
    average = commutative_average(A, B, k)
    deviation = float(np.linalg.norm(exact.Q - average))
    logger.debug("Averaging gap at k=%.4g, m=%d: %.3e", k, segments, deviation)
    return AveragingGap(deviation, exact.alpha, spectral_abscissa(average))


def fit_decay_rate(trajectory, skip=0):
    """
    Fit the exponential decay rate of ||x(l T)||

    Args:
        trajectory (Trajectory): Simulated trajectory
        skip (int): Number of leading periods to ignore

    Returns:
        float: Least-squares slope of log ||x(l T)|| against l T
    """
    times, states = trajectory.period_states()
    norms = np.linalg.norm(states, axis=1)
    keep = (np.arange(len(times)) >= skip) & (norms > 0)
    if np.count_nonzero(keep) < 2:
        raise PreconditionError("need at least two non-zero period samples to fit a decay rate")
    slope, _ = np.polyfit(times[keep], np.log(norms[keep]), 1)
    return float(slope)
