import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wavepaths.model import (BOUNDARY_CASE, FlowConfig, ParticleState, Shape, Trajectory,
                             TrajectoryClass, surface_profile, velocity_field)


@pytest.mark.parametrize("x, t, expected", [(0.0, 0.0, 1.0), (0.25, 0.0, 0.0), (0.1, 0.35, 0.0)])
def test_surface_profile_examples(x, t, expected):
    assert surface_profile(x, t) == pytest.approx(expected, abs=1e-15)


@pytest.mark.parametrize("shear, c0", [(0.0, 0.0), (0.7, -1.3), (-2.0, 2.5)])
def test_bottom_is_impermeable(shear, c0):
    f = velocity_field(0.0, 0.0, 0.0, FlowConfig.from_shear(shear, c0))
    assert f.u == pytest.approx(1.0 + c0)
    assert f.v == 0.0


def test_velocity_field_examples():
    f = velocity_field(0.0, 1.0, 0.0, FlowConfig.from_shear(0.5, 0.0))
    assert f.u == pytest.approx(1.5)
    assert f.v == pytest.approx(0.0, abs=1e-15)
    f = velocity_field(0.25, 1.0, 0.0, FlowConfig())
    assert f.u == pytest.approx(0.0, abs=1e-15)
    assert f.v == pytest.approx(2 * math.pi)


def test_field_identities_by_finite_differences():
    rng = np.random.default_rng(11)
    cfg = FlowConfig.from_shear(0.8, 0.4)
    x, z, t = rng.uniform(-1, 1, 200), rng.uniform(0.05, 1, 200), rng.uniform(0, 3, 200)
    h = 1e-5
    ux = (velocity_field(x + h, z, t, cfg).u - velocity_field(x - h, z, t, cfg).u) / (2 * h)
    vz = (velocity_field(x, z + h, t, cfg).v - velocity_field(x, z - h, t, cfg).v) / (2 * h)
    assert np.max(np.abs(ux + vz)) < 1e-6
    uz = (velocity_field(x, z + h, t, cfg).u - velocity_field(x, z - h, t, cfg).u) / (2 * h)
    np.testing.assert_allclose(uz, cfg.shear, atol=1e-9)


@given(st.floats(-5, 5), st.floats(0, 10))
def test_surface_kinematic_condition(x, t):
    f = velocity_field(x, 1.0, t, FlowConfig.from_shear(1.3, 0.2))
    eta_t = 2 * math.pi * math.sin(2 * math.pi * (x - t))
    assert f.v == pytest.approx(eta_t, abs=1e-12)
    assert f.p == f.eta


def test_field_warns_outside_domain():
    with pytest.warns(UserWarning):
        velocity_field(0.0, 3.0, 0.0, FlowConfig())


def test_flow_config_shear():
    cfg = FlowConfig(c0=0.1, omega0=2.0, g=9.81, h0=1.0)
    assert cfg.shear == 2.0 * math.sqrt(9.81) / 9.81
    assert not cfg.irrotational
    assert FlowConfig(omega0=0.0).irrotational
    back = FlowConfig.from_shear(cfg.shear, 0.1)
    assert back.shear == pytest.approx(cfg.shear, rel=1e-15)


@pytest.mark.parametrize("kw", [dict(g=0.0), dict(g=-1.0), dict(h0=0.0)])
def test_flow_config_rejects_nonpositive(kw):
    with pytest.raises(ValueError):
        FlowConfig(**kw)


@pytest.mark.parametrize("z0", [0.0, -0.5, 1.01])
def test_particle_height_domain(z0):
    with pytest.raises(ValueError):
        ParticleState(0.5, z0)


def _traj(n=5):
    t = np.linspace(0, 1, n)
    return Trajectory.from_path(t, 0.5 + t, np.full(n, 0.5), FlowConfig(), ParticleState())


def test_trajectory_columns_read_only_and_copied():
    t = np.linspace(0, 1, 4)
    x = t.copy()
    traj = Trajectory.from_path(t, x, np.full(4, 0.5), FlowConfig(), ParticleState())
    x[0] = 99.0
    assert traj.x[0] == 0.0
    with pytest.raises(ValueError):
        traj.x[0] = 1.0
    assert traj.samples.shape == (4, 5)


def test_trajectory_rejects_unordered_times():
    with pytest.raises(ValueError):
        Trajectory.from_path([0.0, 0.0, 1.0], [0, 0, 0], [0.5] * 3, FlowConfig(), ParticleState())


def test_trajectory_hermite_interpolation_is_exact_on_cubics():
    t = np.linspace(0, 1, 6)
    traj = Trajectory(t, t**3, np.ones(6), 3 * t**2, np.zeros(6), FlowConfig(), ParticleState())
    s = np.linspace(0, 1, 37)
    np.testing.assert_allclose(traj.x_at(s), s**3, atol=1e-14)


def test_trajectory_class_consistency():
    TrajectoryClass(Shape.LOOP_FORWARD_DRIFT, "II b, W1-1<0<W2-1", "-")
    with pytest.raises(ValueError):
        TrajectoryClass(Shape.PECULIAR, "I", "-")
    with pytest.raises(ValueError):
        TrajectoryClass(Shape.PECULIAR, "no such case")
    flagged = TrajectoryClass(Shape.PECULIAR, "I", "-", {BOUNDARY_CASE}, Shape.UNDULATING_LEFT)
    assert flagged.effective is Shape.UNDULATING_LEFT
    assert flagged.as_dict()["class"] == "UndulatingLeft"


@settings(max_examples=30)
@given(st.floats(0.0, 1.0))
def test_trajectory_interpolation_hits_samples(frac):
    traj = _traj(9)
    i = int(round(frac * 8))
    assert traj.x_at(traj.t[i]) == pytest.approx(traj.x[i], abs=1e-14)
