"""
Scenarios for NetSwitch
The five-agent formation maneuver and seeded random test networks
"""

import logging
import os

import numpy as np

from netswitch.core import file_ops
from netswitch.core.errors import DegenerateSpectrumError, PreconditionError
from netswitch.core.floquet import schedule_from_ratio, simulate
from netswitch.core.linalg import Network, eigenbasis, spectral_abscissa

logger = logging.getLogger(__name__)

DATA_DIR = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "data")


def data_path(name):
    """Path of a bundled data file"""
    return os.path.join(DATA_DIR, name)


def bundled_network(name="five_node_A"):
    """
    Load one of the bundled networks

    Args:
        name (str): 'five_node_A' or 'five_node_A_prime'

    Returns:
        Network: The bundled network
    """
    return file_ops.load_network(data_path(f"{name}.json"))


class ScenarioFormation:
    """Pentagon of agents that contracts to pass a barrier and expands again"""

    def __init__(self, agents=5, r_n=2.0, r_w=5.0, total_time=40.0, T1=17.144):
        """
        Initialize the maneuver

        Args:
            agents (int): Number of agents on the polygon
            r_n (float): Narrow radius reached at T1
            r_w (float): Wide radius at the start and the end
            total_time (float): Duration T of the maneuver
            T1 (float): End of the contraction phase
        """
        if not 0 < T1 < total_time:
            raise PreconditionError(f"contraction phase must end inside (0, {total_time}), got {T1}")
        self.agents = int(agents)
        self.r_n = float(r_n)
        self.r_w = float(r_w)
        self.total_time = float(total_time)
        self.T1 = float(T1)

    @property
    def T2(self):
        return self.total_time - self.T1

    @property
    def theta(self):
        return 2.0 * np.pi * np.arange(self.agents) / self.agents

    def phi1(self, t):
        return 0.5 * (1.0 - np.cos(np.pi * t / self.T1))

    def phi2(self, tau):
        return 0.5 * (1.0 - np.cos(np.pi * tau / self.T2))


def reference_signal(s, t):
    """
    Evaluate the stacked reference positions

    Args:
        s (ScenarioFormation): Maneuver
        t (float): Time in [0, T]

    Returns:
        numpy.ndarray: (x_1, y_1, ..., x_N, y_N)
    """
    t = float(t)
    if not 0.0 <= t <= s.total_time:
        raise PreconditionError(f"time {t} lies outside [0, {s.total_time}]")
    if t <= s.T1:
        blend = s.phi1(t)
        radius = (1.0 - blend) * s.r_w + blend * s.r_n
    else:
        blend = s.phi2(t - s.T1)
        radius = (1.0 - blend) * s.r_n + blend * s.r_w
    g = np.empty(2 * s.agents)
    g[0::2] = t + radius * np.cos(s.theta)
    g[1::2] = radius * np.sin(s.theta)
    return g


def lift(M, dims=2):
    """Kronecker lift M (x) I_dims for agents moving in the plane"""
    return np.kron(np.asarray(M, dtype=float), np.eye(dims))


def random_sparse_hurwitz(n, nnz, seed=None):
    """
    Draw a sparse Hurwitz network with distinct eigenvalues

    Args:
        n (int): Node count
        nnz (int): Number of nonzero entries, n diagonal plus nnz - n off-diagonal
        seed (int, optional): Random seed

    Returns:
        Network: Row diagonally dominant network with a negative diagonal
    """
    n, nnz = int(n), int(nnz)
    if n < 1:
        raise PreconditionError("n must be at least 1")
    if not n <= nnz <= n * n:
        raise PreconditionError(f"nnz must lie in [{n}, {n * n}], got {nnz}")
    rng = np.random.default_rng(seed)
    off = [(i, j) for i in range(n) for j in range(n) if i != j]

    for attempt in range(100):
        W = np.zeros((n, n))
        chosen = rng.choice(len(off), size=nnz - n, replace=False) if nnz > n else []
        for idx in chosen:
            i, j = off[idx]
            W[i, j] = rng.uniform(-1.0, 1.0)
        # Gershgorin discs strictly inside the left half-plane
        margin = rng.uniform(0.1, 1.0, size=n)
        np.fill_diagonal(W, -(np.abs(W).sum(axis=1) + margin))
        try:
            eigenbasis(W)
        except DegenerateSpectrumError:
            continue
        logger.debug("Random Hurwitz network after %d draws, alpha=%.4g", attempt + 1, spectral_abscissa(W))
        return Network(W, label=f"random n={n} nnz={nnz} seed={seed}")
    raise PreconditionError("could not draw a network with distinct eigenvalues")


class FormationRun:
    """Simulated formation maneuver under the optimal switching law"""

    def __init__(self, scenario, schedule, times, positions, references, x0):
        self.scenario = scenario
        self.schedule = schedule
        self.times = times
        self.positions = positions
        self.references = references
        self.x0 = x0


def simulate_formation(A, B, k, scenario=None, seed=None, subsamples=None, offset_scale=1.0):
    """
    Track the reference with the lifted switched dynamics

    Args:
        A (Network or array_like): First network
        B (Network or array_like): Second network
        k (float): Fraction of the maneuver on A
        scenario (ScenarioFormation, optional): Maneuver, default five agents
        seed (int, optional): Seed of the initial offset
        subsamples (int, optional): Samples per dwell
        offset_scale (float): Standard deviation of the initial offset

    Returns:
        FormationRun: Positions z(t) = g(t) + x(t) and the reference g(t)
    """
    scenario = scenario or ScenarioFormation()
    A2, B2 = lift(_weights(A)), lift(_weights(B))
    if A2.shape[0] != 2 * scenario.agents:
        raise PreconditionError(f"networks have {A2.shape[0] // 2} nodes, expected {scenario.agents}")
    schedule = schedule_from_ratio(k, scenario.total_time, 1)
    rng = np.random.default_rng(seed)
    x0 = offset_scale * rng.standard_normal(A2.shape[0])
    trajectory = simulate(A2, B2, schedule, x0, 1, subsamples)
    times = np.clip(trajectory.times, 0.0, scenario.total_time)
    references = np.vstack([reference_signal(scenario, t) for t in times])
    return FormationRun(scenario, schedule, times, references + trajectory.states, references, x0)


def _weights(M):
    return M.weights if isinstance(M, Network) else np.asarray(M, dtype=float)


def write_formation(run, A, B, out_dir, metadata=None):
    """
    Write the formation outputs to a directory

    Args:
        run (FormationRun): Simulated maneuver
        A (Network): First network
        B (Network): Second network
        out_dir (str): Output directory
        metadata (dict, optional): Extra entries for metadata.json

    Returns:
        list: Paths written
    """
    os.makedirs(out_dir, exist_ok=True)
    agents = run.scenario.agents
    header = ["t"] + [f"{axis}{i + 1}" for i in range(agents) for axis in ("x", "y")]
    paths = [
        file_ops.write_matrix_csv(_weights(A), os.path.join(out_dir, "A.csv")),
        file_ops.write_matrix_csv(_weights(B), os.path.join(out_dir, "B.csv")),
        file_ops.write_json(run.schedule.to_dict(), os.path.join(out_dir, "schedule.json")),
    ]
    trajectory_path = os.path.join(out_dir, "trajectory.csv")
    file_ops.write_csv(header, ([t] + list(z) for t, z in zip(run.times, run.positions)), trajectory_path)
    reference_path = os.path.join(out_dir, "reference.csv")
    file_ops.write_csv(header, ([t] + list(g) for t, g in zip(run.times, run.references)), reference_path)
    paths.extend([trajectory_path, reference_path])

    meta = {
        "agents": agents,
        "r_n": run.scenario.r_n,
        "r_w": run.scenario.r_w,
        "T": run.scenario.total_time,
        "T1": run.scenario.T1,
        "k": run.schedule.k,
        "x0": run.x0.tolist(),
        "samples": len(run.times),
    }
    meta.update(metadata or {})
    paths.append(file_ops.write_json(meta, os.path.join(out_dir, "metadata.json")))
    return paths
