"""Acceptance criteria, one reported line per criterion at its stated tolerance.

Run with ``pytest tests/test_acceptance.py -v``; the summary section at the
end lists every criterion as PASS or FAIL with the measured figures.
"""

import json
import math
import sys
import time
import xml.etree.ElementTree as ET

import numpy as np
import pytest
from scipy import integrate

from wavepaths import elliptic
from wavepaths.classifier import classify
from wavepaths.cli import main as cli_main
from wavepaths.errors import DegenerateBranch
from wavepaths.export import export_csv, export_json, export_svg, read_csv, read_json
from wavepaths.irrotational import IrrotationalSolution, classify_irrotational
from wavepaths.model import BOUNDARY_CASE, FlowConfig, ParticleState, Shape
from wavepaths.oracle import empirical_class, integrate_raw
from wavepaths.vorticity import (first_integral, first_integral_residual, integrate_orbit,
                                 orbit_period, period_legendre, period_quadrature,
                                 phase_samples, shear_coordinates)

PI = math.pi
MID = ParticleState(0.5, 0.5)


def _random_admissible(rng, n, need_unflagged=True):
    """Random sheared flows whose orbit meets C > pi^2 c0^2, off the case boundaries."""
    out = []
    while len(out) < n:
        cfg = FlowConfig.from_shear(rng.uniform(-3, 3), rng.uniform(-2, 3))
        init = ParticleState(rng.uniform(0.02, 0.98), rng.uniform(0.05, 1.0))
        try:
            cls = classify(cfg, init, resolve=False)
        except DegenerateBranch:
            continue
        if not cls.analysis.condition_met:
            continue
        if need_unflagged and BOUNDARY_CASE in cls.flags:
            continue
        out.append((cfg, init, cls))
    return out


# 1 -------------------------------------------------------------------------

@pytest.mark.parametrize("c0", [0.0, -2.0, -0.5, 3.0, 1.0])
def test_criterion_1_closed_forms(c0, acceptance_report):
    t0 = time.perf_counter()
    sol = IrrotationalSolution(c0, MID)
    t = np.linspace(0.0, 2.0, 1000)
    x, z = sol.x(t), sol.z(t)
    dx, dz = sol.rates(t)
    ph = 2 * PI * (x - t)
    residual = max(np.max(np.abs(dx - (np.cos(ph) + c0))), np.max(np.abs(dz - 2 * PI * z * np.sin(ph))))
    ref = integrate_raw(FlowConfig(c0=c0), MID, 2.0, tol=1e-12, t_eval=t)
    gap = max(np.max(np.abs(x - ref.x)), np.max(np.abs(z - ref.z)))
    dt = time.perf_counter() - t0
    ok = residual < 1e-8 and gap < 1e-6 and dt < 10
    acceptance_report(f"1 (c0={c0:g})", ok, f"ODE residual {residual:.2e} (< 1e-8), "
                      f"sup-norm vs RK {gap:.2e} (< 1e-6)", dt)
    assert ok


# 2 -------------------------------------------------------------------------

def test_criterion_2_zero_current_law(acceptance_report):
    t0 = time.perf_counter()
    rng = np.random.default_rng(2)
    t = np.linspace(0.0, 2.0, 201)
    worst = 0.0
    for _ in range(10):
        init = ParticleState(rng.uniform(0.05, 0.95), rng.uniform(0.05, 1.0))
        a = 1 / math.tan(PI * init.x0)
        z = IrrotationalSolution(0.0, init).z(t)
        worst = max(worst, np.max(np.abs(z * (1 + a * a) / init.z0 - (1 + (2 * PI * t + a) ** 2))))
    dt = time.perf_counter() - t0
    ok = worst < 1e-12 and dt < 1
    acceptance_report("2", ok, f"max |z(1+a^2)/z0 - (1+(2 pi t+a)^2)| = {worst:.2e} (< 1e-12)", dt)
    assert ok


# 3 -------------------------------------------------------------------------

def test_criterion_3_first_integral_conservation(acceptance_report):
    t0 = time.perf_counter()
    rng = np.random.default_rng(3)
    raw_all = normalized = raw_unit = 0.0
    for cfg, init, _ in _random_admissible(rng, 50, need_unflagged=False):
        fi = first_integral(cfg, init)
        traj = integrate_orbit(cfg, init, 5.0, dt=1e-4)
        X, P = phase_samples(traj)
        y, _ = shear_coordinates(X, P)
        raw = np.abs(first_integral_residual(X, P, fi, normalized=False))
        raw_all = max(raw_all, float(np.max(raw)))
        raw_unit = max(raw_unit, float(np.max(raw[np.abs(y) <= 1.0])))
        normalized = max(normalized, float(np.max(np.abs(first_integral_residual(X, P, fi)))))
    dt = time.perf_counter() - t0
    # the criterion bounds the residual of the relation in y itself
    ok = raw_all < 1e-6 and dt < 60
    acceptance_report("3", ok, f"max raw residual {raw_all:.2e} (< 1e-6); "
                      f"same relation divided by (y^2+1)^2: {normalized:.2e}; "
                      f"raw where |y| <= 1: {raw_unit:.2e}", dt)
    assert ok


# 4 -------------------------------------------------------------------------

def test_criterion_4_period_cross_check(acceptance_report):
    t0 = time.perf_counter()
    rng = np.random.default_rng(4)
    worst_period = worst_return = 0.0
    for _ in range(20):
        c0 = rng.uniform(-2, 3)
        C = PI**2 * c0**2 + rng.uniform(0.1, 100)
        Tq, Tl = period_quadrature(C, c0), period_legendre(C, c0)
        worst_period = max(worst_period, abs(Tq - Tl) / Tl)
        # an orbit with this constant: x0 = 1/2 puts X at pi, then pick the shear for z0 = 1/2
        P0 = 2 * math.sqrt(C - 4 * PI**2 * c0 + 4 * PI**2) * rng.choice([-1.0, 1.0])
        shear = 2 * (P0 / (2 * PI) + 2 - c0)
        cfg = FlowConfig.from_shear(shear, c0)
        fi = first_integral(cfg, MID)
        assert fi.C == pytest.approx(C, rel=1e-10)
        T = orbit_period(fi)
        traj = integrate_orbit(cfg, MID, 1.3 * T, dt=1e-4)
        t = np.linspace(0, 0.25 * T, 20)
        X = 2 * PI * (traj.x_at(t) - t)
        X_next = 2 * PI * (traj.x_at(t + T) - t - T)
        worst_return = max(worst_return, float(np.max(np.abs(X_next - X + fi.branch_sign * 2 * PI))))
    dt = time.perf_counter() - t0
    ok = worst_period < 1e-8 and worst_return < 1e-6 and dt < 30
    acceptance_report("4", ok, f"quadrature vs Legendre period rel. gap {worst_period:.2e} (< 1e-8), "
                      f"|X(t+T) - X(t) -+ 2 pi| {worst_return:.2e} (< 1e-6)", dt)
    assert ok


# 5 -------------------------------------------------------------------------

def test_criterion_5_elliptic_kernel(acceptance_report):
    t0 = time.perf_counter()
    rng = np.random.default_rng(5)
    degenerate = 0.0
    for v in rng.uniform(-10, 10, 100):
        degenerate = max(degenerate, abs(elliptic.elliptic_f(v, 0.0) - v),
                         abs(elliptic.jacobi_sn(v, 0.0) - math.sin(v)),
                         abs(elliptic.jacobi_sn(v, 1.0) - math.tanh(v)))
    quad_gap = 0.0
    for _ in range(100):
        phi, k2 = rng.uniform(-3, 3), rng.uniform(0, 0.99)
        ref = integrate.quad(lambda s: 1 / math.sqrt(1 - k2 * math.sin(s) ** 2), 0, phi,
                             epsabs=0, epsrel=1e-13, limit=200)[0]
        quad_gap = max(quad_gap, abs(elliptic.elliptic_f(phi, k2) - ref))
    in_range = True
    for _ in range(1000):
        c0 = rng.uniform(-3, 3)
        C = PI**2 * c0**2 + rng.exponential(20) + 1e-9
        A = rng.uniform(0.01, 50) * rng.choice([-1, 1])
        for red in (elliptic.legendre_reduce_general(C, c0), elliptic.legendre_reduce_zero_current(A)):
            in_range &= 0 < red.k_squared < 1
    coincide = 0.0
    for A in rng.uniform(0.01, 50, 100):
        a = elliptic.legendre_reduce_general(A * A, 0.0)
        b = elliptic.legendre_reduce_zero_current(A)
        coincide = max(coincide, abs(a.k_squared - b.k_squared), abs(a.prefactor - b.prefactor) / b.prefactor)
    dt = time.perf_counter() - t0
    ok = degenerate < 1e-12 and quad_gap < 1e-10 and in_range and coincide < 1e-12 and dt < 10
    acceptance_report("5", ok, f"degenerate moduli {degenerate:.1e} (< 1e-12), F vs quadrature "
                      f"{quad_gap:.1e} (< 1e-10), k^2 in (0,1): {in_range}, c0=0 agreement {coincide:.1e}", dt)
    assert ok


# 6 -------------------------------------------------------------------------

def test_criterion_6_random_agreement(acceptance_report):
    t0 = time.perf_counter()
    rng = np.random.default_rng(6)
    draws = _random_admissible(rng, 200)
    mismatches = []
    counts = {}
    for cfg, init, cls in draws:
        counts[cls.shape.value] = counts.get(cls.shape.value, 0) + 1
        emp = empirical_class(cfg, init).cls.shape
        if emp is not cls.shape:
            mismatches.append((cfg.shear, cfg.c0, init.x0, init.z0, cls.shape.value, emp.value))
    dt = time.perf_counter() - t0
    ok = not mismatches and dt < 120
    mix = ", ".join(f"{k} {v}" for k, v in sorted(counts.items()))
    acceptance_report("6 (200 random draws)", ok, f"{len(draws) - len(mismatches)}/{len(draws)} agree ({mix})", dt)
    assert ok, mismatches[:5]


PINNED = [
    (10.0, 0.0, Shape.UNDULATING_RIGHT),
    (-1.0, 0.0, Shape.UNDULATING_LEFT),
    (-0.4, 0.0, Shape.LOOP_FORWARD_DRIFT),
    (-1.0, 2.0, Shape.LOOP_BACKWARD_DRIFT),
    (-0.54, 0.5, Shape.PECULIAR),
]


@pytest.mark.parametrize("shear, c0, stated", PINNED)
def test_criterion_6_pinned_exemplar(shear, c0, stated, acceptance_report):
    t0 = time.perf_counter()
    cfg = FlowConfig.from_shear(shear, c0)
    cls = classify(cfg, MID)
    emp = empirical_class(cfg, MID)
    dt = time.perf_counter() - t0
    ok = cls.effective is stated and emp.cls.shape is stated and dt < 120
    acceptance_report(f"6 (shear={shear:g}, c0={c0:g} -> {stated.value})", ok,
                      f"analytic {cls.effective.value}, empirical {emp.cls.shape.value}, "
                      f"measured drift per period {emp.drift:+.4f}", dt)
    assert ok


# 7 -------------------------------------------------------------------------

STATED_IRROTATIONAL = {
    3.0: Shape.UNDULATING_RIGHT,
    -2.0: Shape.UNDULATING_LEFT,
    -0.5: Shape.LOOP_FORWARD_DRIFT,
    0.0: Shape.NON_PHYSICAL_UNBOUNDED_Z,
    1.0: Shape.NON_PHYSICAL_UNBOUNDED_Z,
    2.5: Shape.UNDULATING_RIGHT,
}


@pytest.mark.parametrize("c0", list(STATED_IRROTATIONAL))
def test_criterion_7_irrotational_taxonomy(c0, acceptance_report):
    t0 = time.perf_counter()
    stated = STATED_IRROTATIONAL[c0]
    cls = classify_irrotational(c0, MID)
    detail = f"classify_irrotational -> {cls.shape.value}"
    ok = cls.shape is stated
    if c0 in (0.0, 1.0):
        traj = integrate_raw(FlowConfig(c0=c0), MID, 10.0, tol=1e-10)
        growth = traj.z[-1] / MID.z0
        emp = empirical_class(FlowConfig(c0=c0), MID)
        ok = ok and growth > 1e3 and emp.cls.shape is Shape.NON_PHYSICAL_UNBOUNDED_Z
        detail += f", oracle z(10)/z0 = {growth:.3g} (> 1e3), empirical {emp.cls.shape.value}"
    if stated in (Shape.LOOP_FORWARD_DRIFT, Shape.LOOP_BACKWARD_DRIFT):
        emp = empirical_class(FlowConfig(c0=c0), MID)
        detail += f", empirical {emp.cls.shape.value} with drift per period {emp.drift:+.4f}"
    dt = time.perf_counter() - t0
    ok = ok and dt < 30
    acceptance_report(f"7 (c0={c0:g} -> {stated.value})", ok, detail, dt)
    assert ok


# 8 -------------------------------------------------------------------------

def test_criterion_8_drift_identity(acceptance_report):
    t0 = time.perf_counter()
    rng = np.random.default_rng(8)
    runs = [(FlowConfig.from_shear(s, c), MID, classify(FlowConfig.from_shear(s, c), MID, resolve=False))
            for s, c, _ in PINNED]
    runs += _random_admissible(rng, 40)
    worst, wrong_sign = 0.0, []
    positive = {Shape.UNDULATING_RIGHT, Shape.LOOP_FORWARD_DRIFT}
    negative = {Shape.UNDULATING_LEFT, Shape.LOOP_BACKWARD_DRIFT}
    for cfg, init, cls in runs:
        T = cls.analysis.period
        traj = integrate_orbit(cfg, init, 1.05 * T + 1e-3, dt=1e-4)
        worst = max(worst, abs(traj.drift - (T - cls.analysis.branch_sign)))
        if (cls.shape in positive and traj.drift <= 0) or (cls.shape in negative and traj.drift >= 0):
            wrong_sign.append((cfg.shear, cfg.c0, cls.shape.value, traj.drift))
    dt = time.perf_counter() - t0
    ok = worst < 1e-6 and not wrong_sign and dt < 30
    acceptance_report("8", ok, f"{len(runs)} runs, max |drift - (T -+ 1)| {worst:.2e} (< 1e-6), "
                      f"sign mismatches {len(wrong_sign)}", dt)
    assert ok, wrong_sign[:5]


# 9 -------------------------------------------------------------------------

def test_criterion_9_determinism_and_serialization(tmp_path, acceptance_report, capsysbinary):
    t0 = time.perf_counter()
    outputs = []
    for _ in range(2):
        for fmt in ("csv", "json"):
            cli_main(["trace", "--c0", "0.5", "--shear", "-0.54", "--t-max", "1", "--dt", "1e-3",
                      "--format", fmt])
            outputs.append(capsysbinary.readouterr().out)
    identical = outputs[0] == outputs[2] and outputs[1] == outputs[3]
    cli_main(["trace", "--c0", "-0.5", "--shear", "0", "--t-max", "1", "--dt", "1e-3",
              "--format", "json"])
    irr = capsysbinary.readouterr().out
    cli_main(["trace", "--c0", "-0.5", "--shear", "0", "--t-max", "1", "--dt", "1e-3",
              "--format", "json"])
    identical &= irr == capsysbinary.readouterr().out

    traj = integrate_orbit(FlowConfig.from_shear(-0.54, 0.5), MID, 1.0, dt=1e-3)
    _, samples = read_json(export_json(traj))
    json_exact = np.array_equal(samples, traj.samples)
    csv_back = read_csv(export_csv(traj))
    csv_ok = bool(np.all(np.abs(csv_back - traj.samples) <= 5e-12 * np.abs(traj.samples) + 1e-300))
    root = ET.fromstring(export_svg(traj))
    svg_ok = len(root.findall("{http://www.w3.org/2000/svg}polyline")) == 1
    meta = json.loads(outputs[1])["meta"]
    dt = time.perf_counter() - t0
    ok = identical and json_exact and csv_ok and svg_ok and "class" in meta and dt < 5
    acceptance_report("9", ok, f"repeat traces identical {identical}, JSON exact {json_exact}, "
                      f"CSV within 12 digits {csv_ok}, SVG well-formed with one polyline {svg_ok}", dt)
    assert ok


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-rN"]))
