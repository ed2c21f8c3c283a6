import json
import os

import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal

from netswitch.core.errors import PreconditionError
from netswitch.core.linalg import spectral_abscissa
from netswitch.core.scenario import (
    ScenarioFormation,
    bundled_network,
    lift,
    random_sparse_hurwitz,
    reference_signal,
    simulate_formation,
    write_formation,
)
from tests.conftest import FIVE_NODE_A, FIVE_NODE_A_PRIME


def test_bundled_networks():
    assert_array_equal(bundled_network().weights, FIVE_NODE_A)
    assert_array_equal(bundled_network("five_node_A_prime").weights, FIVE_NODE_A_PRIME)


def test_reference_signal_phases():
    s = ScenarioFormation()
    assert s.T2 == pytest.approx(40.0 - 17.144)

    start = reference_signal(s, 0.0)
    assert start.shape == (10,)
    assert start[0] == pytest.approx(5.0)
    assert start[1] == pytest.approx(0.0)
    assert_allclose(np.hypot(start[0::2], start[1::2]), 5.0)

    narrow = reference_signal(s, s.T1)
    assert_allclose(np.hypot(narrow[0::2] - s.T1, narrow[1::2]), 2.0)

    end = reference_signal(s, 40.0)
    assert_allclose(np.hypot(end[0::2] - 40.0, end[1::2]), 5.0)

    # The radius is continuous where the phases meet
    before = reference_signal(s, s.T1 - 1e-9)
    after = reference_signal(s, s.T1 + 1e-9)
    assert_allclose(before, after, atol=1e-6)


def test_reference_signal_domain():
    s = ScenarioFormation()
    with pytest.raises(PreconditionError):
        reference_signal(s, -0.1)
    with pytest.raises(PreconditionError):
        reference_signal(s, 40.5)
    with pytest.raises(PreconditionError):
        ScenarioFormation(T1=40.0)


def test_lift():
    L = lift(np.array([[1.0, 2.0], [3.0, 4.0]]))
    assert L.shape == (4, 4)
    assert_array_equal(L[:2, 2:], 2.0 * np.eye(2))


def test_random_sparse_hurwitz():
    net = random_sparse_hurwitz(20, 35, seed=4)
    assert net.n == 20
    assert net.nnz == 35
    assert spectral_abscissa(net) < 0
    assert net == random_sparse_hurwitz(20, 35, seed=4)

    with pytest.raises(PreconditionError):
        random_sparse_hurwitz(5, 4)
    with pytest.raises(PreconditionError):
        random_sparse_hurwitz(5, 26)


def test_simulate_formation_without_offset_follows_reference(five_node_A, five_node_B):
    run = simulate_formation(five_node_A, five_node_B, 0.4286, offset_scale=0.0, subsamples=5)
    assert run.times[0] == 0.0
    assert run.times[-1] == pytest.approx(40.0)
    assert run.positions.shape == (len(run.times), 10)
    assert_allclose(run.positions, run.references, atol=1e-12)


def test_simulate_formation_converges(five_node_A, five_node_B):
    run = simulate_formation(five_node_A, five_node_B, 0.4286, seed=1, subsamples=5)
    assert_allclose(run.positions[0] - run.references[0], run.x0)
    assert np.abs(run.positions[-1] - run.references[-1]).max() < 1e-6

    with pytest.raises(PreconditionError):
        simulate_formation(np.diag([-1.0, -2.0]), np.diag([-2.0, -1.0]), 0.5)


def test_write_formation(tmp_path, five_node_A, five_node_B):
    run = simulate_formation(five_node_A, five_node_B, 0.5, seed=0, subsamples=2)
    out = str(tmp_path / "formation")
    paths = write_formation(run, five_node_A, five_node_B, out, metadata={"seed": 0})

    names = sorted(os.path.basename(p) for p in paths)
    assert names == ["A.csv", "B.csv", "metadata.json", "reference.csv", "schedule.json", "trajectory.csv"]

    with open(os.path.join(out, "trajectory.csv")) as f:
        lines = f.read().splitlines()
    assert lines[0] == "t,x1,y1,x2,y2,x3,y3,x4,y4,x5,y5"
    assert len(lines) == len(run.times) + 1

    with open(os.path.join(out, "metadata.json")) as f:
        meta = json.load(f)
    assert meta["agents"] == 5
    assert meta["T1"] == 17.144
    assert meta["k"] == pytest.approx(0.5)
    assert meta["seed"] == 0
    assert len(meta["x0"]) == 10

    A = np.loadtxt(os.path.join(out, "A.csv"), delimiter=",")
    assert_array_equal(A, five_node_A)
