"""Fast invariant checks across all modules, run by ``wavepaths selftest``."""

from __future__ import annotations

import math
import sys
import time
import xml.etree.ElementTree as ET

import numpy as np
from scipy import integrate

from . import elliptic
from .classifier import classify, w_roots
from .errors import DegeneratePhase
from .export import export_csv, export_json, export_svg, read_csv, read_json
from .irrotational import IrrotationalSolution, case_params, classify_irrotational
from .model import CASE_TABLE, FlowConfig, ParticleState, Trajectory, _field, velocity_field
from .oracle import classify_empirical, integrate_raw, propagate
from .vorticity import (constant_from_phase, first_integral, initial_shear_state,
                        integrate_orbit, orbit_period, phase_samples, shear_coordinates)

PI = math.pi

_CHECKS = []


def check(fn):
    _CHECKS.append(fn)
    return fn


def _assert(cond, msg):
    if not cond:
        raise AssertionError(msg)


@check
def config_shear_formula():
    for omega0, g, h0 in [(0.3, 9.81, 1.0), (-2.0, 1.0, 4.0), (0.0, 3.0, 0.5)]:
        cfg = FlowConfig(omega0=omega0, g=g, h0=h0)
        _assert(cfg.shear == omega0 * math.sqrt(g * h0) / g, "shear formula")
        _assert((cfg.shear == 0) == (omega0 == 0), "zero shear iff zero vorticity")
    for bad in [dict(g=0.0), dict(h0=-1.0)]:
        try:
            FlowConfig(**bad)
        except ValueError:
            continue
        raise AssertionError(f"accepted {bad}")


@check
def particle_height_domain():
    for z0 in (0.0, -0.1, 1.5):
        try:
            ParticleState(0.5, z0)
        except ValueError:
            continue
        raise AssertionError(f"accepted z0={z0}")


@check
def pressure_equals_elevation():
    rng = np.random.default_rng(1)
    x, z, t = rng.uniform(-2, 2, 50), rng.uniform(0, 1, 50), rng.uniform(0, 5, 50)
    f = velocity_field(x, z, t, FlowConfig.from_shear(0.7, 0.3))
    np.testing.assert_array_equal(f.p, f.eta)


@check
def trajectory_first_sample_and_order():
    init = ParticleState(0.3, 0.6)
    cfg = FlowConfig.from_shear(-1.0, 2.0)
    traj = integrate_orbit(cfg, init, 0.5, dt=1e-3)
    f = _field(init.x0, init.z0, 0.0, cfg)
    np.testing.assert_allclose(traj.samples[0], [0.0, init.x0, init.z0, f.u, f.v], rtol=0, atol=1e-12)
    _assert(np.all(np.diff(traj.t) > 0) and np.all(traj.z > 0), "t increasing, z positive")


@check
def class_and_subcase_consistent():
    rng = np.random.default_rng(2)
    for _ in range(20):
        cfg = FlowConfig.from_shear(rng.uniform(-3, 3), rng.uniform(-2, 3))
        cls = classify(cfg, ParticleState(rng.uniform(0.05, 0.95), rng.uniform(0.1, 1)), resolve=False)
        _assert(cls.shape in CASE_TABLE[cls.sub_case], f"{cls.shape} not allowed in {cls.sub_case}")


@check
def irrotational_constants():
    for c0 in (-2.0, -0.5, 0.5, 1.5, 3.0):
        p = case_params(c0, ParticleState(0.37, 0.5))
        _assert((p.C0frak is not None) == (c0 * (c0 - 2) > 0), "C0 real iff c0(c0-2) > 0")
        _assert((p.K0frak is not None) == (0 < c0 < 2), "K0 real iff 0 < c0 < 2")
        _assert(abs(p.a - 1.0 / math.tan(0.37 * PI)) < 1e-12, "a = cot(pi x0)")


@check
def irrotational_initial_data():
    for c0 in (0.0, -2.0, -0.5, 1.0, 3.0):
        for x0 in (0.2, 0.5, 0.9):
            sol = IrrotationalSolution(c0, ParticleState(x0, 0.4))
            _assert(abs(float(sol.x(0.0)) - x0) < 1e-12, f"x(0) for c0={c0}")
            _assert(abs(float(sol.z(0.0)) - 0.4) < 1e-12, f"z(0) for c0={c0}")


@check
def irrotational_matches_oracle():
    init = ParticleState(0.5, 0.5)
    t = np.linspace(0, 1, 101)
    for c0 in (0.0, -0.5, 3.0):
        sol = IrrotationalSolution(c0, init)
        ref = integrate_raw(FlowConfig(c0=c0), init, 1.0, tol=1e-11, t_eval=t)
        _assert(np.max(np.abs(sol.x(t) - ref.x)) < 1e-6, f"x vs oracle, c0={c0}")
        _assert(np.max(np.abs(sol.z(t) - ref.z) / ref.z) < 1e-6, f"z vs oracle, c0={c0}")


@check
def irrotational_taxonomy():
    expect = {3.0: "UndulatingRight", -2.0: "UndulatingLeft", 0.0: "NonPhysicalUnboundedZ",
              1.0: "NonPhysicalUnboundedZ", -0.3: "LoopForwardDrift"}
    for c0, name in expect.items():
        _assert(classify_irrotational(c0).shape.value == name, f"c0={c0}")


@check
def elliptic_kernel():
    rng = np.random.default_rng(3)
    for _ in range(20):
        phi, k2 = rng.uniform(-4, 4), rng.uniform(0, 0.99)
        ref = integrate.quad(lambda s: 1 / math.sqrt(1 - k2 * math.sin(s) ** 2), 0, phi,
                             epsabs=0, epsrel=1e-13)[0]
        F = elliptic.elliptic_f(phi, k2)
        _assert(abs(F - ref) <= 1e-10 * max(1, abs(ref)), "F vs quadrature")
        _assert(abs(elliptic.elliptic_f(-phi, k2) + F) < 1e-13, "F odd")
        K = elliptic.ellipk(k2)
        _assert(abs(elliptic.elliptic_f(phi + PI, k2) - F - 2 * K) < 1e-12 * max(1, K), "F additive")
        sn, cn, dn = elliptic.jacobi(F, k2)
        _assert(abs(sn - math.sin(phi)) < 1e-12, "sn(F(phi)) = sin phi")
        _assert(abs(sn * sn + cn * cn - 1) < 1e-12 and abs(dn * dn + k2 * sn * sn - 1) < 1e-12,
                "Jacobi identities")


@check
def reduction_modulus_range():
    rng = np.random.default_rng(4)
    for _ in range(200):
        c0 = rng.uniform(-3, 3)
        C = PI**2 * c0**2 + rng.uniform(1e-3, 50)
        r = elliptic.legendre_reduce_general(C, c0)
        _assert(0 < r.k_squared < 1 and r.subst_const > 0, f"k2 = {r.k_squared}")
    A = 1.7
    a, b = elliptic.legendre_reduce_general(A * A, 0.0), elliptic.legendre_reduce_zero_current(A)
    _assert(abs(a.k_squared - b.k_squared) < 1e-15 and abs(a.prefactor - b.prefactor) < 1e-15,
            "reductions agree at c0 = 0")


@check
def first_integral_at_start():
    rng = np.random.default_rng(5)
    for _ in range(20):
        cfg = FlowConfig.from_shear(rng.uniform(-3, 3), rng.uniform(-2, 3))
        init = ParticleState(rng.uniform(0.05, 0.95), rng.uniform(0.1, 1))
        st = initial_shear_state(cfg, init)
        fi = first_integral(cfg, init)
        W = st.y**2 + 1
        rel = st.y_prime**2 - (fi.C * W * W - 4 * PI**2 * cfg.c0 * W + 4 * PI**2)
        _assert(abs(rel) <= 1e-12 * max(1.0, st.y_prime**2, abs(fi.C) * W * W), "relation at t=0")
    try:
        first_integral(FlowConfig.from_shear(1.0, 0.0), ParticleState(1.0, 0.5))
    except DegeneratePhase:
        pass
    else:
        raise AssertionError("integer x0 accepted")


@check
def orbit_conservation_and_branch():
    cfg, init = FlowConfig.from_shear(-0.54, 0.5), ParticleState(0.5, 0.5)
    fi = first_integral(cfg, init)
    traj = integrate_orbit(cfg, init, 2.0, dt=1e-3)
    X, P = phase_samples(traj)
    _assert(np.max(np.abs(constant_from_phase(X, P, cfg.c0) - fi.C)) < 1e-6, "residual")
    y, yp = shear_coordinates(X, P)
    _assert(np.all(np.sign(yp) == fi.branch_sign), "branch sign constant")
    finite = np.abs(np.sin(0.5 * X)) > 1e-3
    np.testing.assert_allclose(1.0 / np.tan(0.5 * X[finite]), y[finite], rtol=1e-12)
    T = orbit_period(fi)
    _assert(abs(traj.drift - (T - fi.branch_sign)) < 1e-6, "drift identity")


@check
def quadratic_roots():
    rng = np.random.default_rng(6)
    n = 0
    while n < 50:
        c0, C = rng.uniform(-3, 3), rng.uniform(0, 40)
        w1, w2 = w_roots(C, c0)
        if w1 is None or w2 is None:
            continue
        n += 1
        for w in (w1, w2):
            q = (PI**2 - C) * w * w + 4 * PI**2 * c0 * w - 4 * PI**2
            _assert(abs(q) <= 1e-9 * max(1.0, abs(PI**2 - C) * w * w, 4 * PI**2 * abs(c0 * w)), "root")
        if C > PI**2:
            _assert(w1 < w2, "W1 < W2")


@check
def oracle_positivity_and_reversal():
    cfg, init = FlowConfig.from_shear(-1.0, 2.0), ParticleState(0.5, 0.5)
    traj = integrate_raw(cfg, init, 3.0, tol=1e-10)
    _assert(traj.z.min() > 0, "z positive")
    x1, z1 = propagate(cfg, init.x0, init.z0, 0.0, 3.0, 1e-10)
    x0, z0 = propagate(cfg, x1, z1, 3.0, 0.0, 1e-10)
    _assert(abs(x0 - init.x0) < 1e-9 and abs(z0 - init.z0) < 1e-9, "time reversal")


@check
def empirical_mapping():
    cfg, init = FlowConfig.from_shear(10.0, 0.0), ParticleState(0.5, 0.5)
    T = orbit_period(first_integral(cfg, init))
    e = classify_empirical(integrate_raw(cfg, init, 4.3 * T, tol=1e-9, n_samples=1800))
    _assert(e.monotone_x and e.drift > 0 and e.cls.shape.value == "UndulatingRight", "mapping")


@check
def serialization():
    cfg, init = FlowConfig.from_shear(-0.4, 0.0), ParticleState(0.5, 0.5)
    traj = integrate_orbit(cfg, init, 0.5, dt=1e-3)
    traj = traj.replace(cls=classify(cfg, init, resolve=False))
    _assert(export_csv(traj) == export_csv(traj) and export_json(traj) == export_json(traj),
            "determinism")
    np.testing.assert_array_equal(read_json(export_json(traj))[1], traj.samples)
    back = read_csv(export_csv(traj))
    np.testing.assert_allclose(back, traj.samples, rtol=1e-11, atol=1e-300)
    root = ET.fromstring(export_svg(traj))
    _assert(len(root.findall("{http://www.w3.org/2000/svg}polyline")) == 1, "one polyline")


def run(stream=sys.stderr) -> bool:
    ok = True
    for fn in _CHECKS:
        t0 = time.perf_counter()
        try:
            fn()
            status = "PASS"
        except Exception as exc:  # report every failure, keep going
            status = f"FAIL {type(exc).__name__}: {exc}"
            ok = False
        print(f"{status[:4]} {fn.__name__} ({time.perf_counter() - t0:.2f}s){status[4:]}", file=stream)
    return ok


def all_checks():
    return list(_CHECKS)
