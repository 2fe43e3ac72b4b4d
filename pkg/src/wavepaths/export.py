"""Serialisation of trajectories to CSV, JSON and SVG byte streams."""

from __future__ import annotations

import io
import json
from xml.sax.saxutils import escape

import numpy as np

from .errors import EmptyTrajectory
from .model import Trajectory

CSV_HEADER = "t,x,z,u,v"
SVG_MAX_POINTS = 4000


def _check(traj: Trajectory) -> None:
    if traj is None or len(traj.t) == 0:
        raise EmptyTrajectory("trajectory has no samples")


def export_csv(traj: Trajectory) -> bytes:
    """Header ``t,x,z,u,v`` then one row per sample, 12 significant digits."""
    _check(traj)
    buf = io.StringIO()
    np.savetxt(buf, traj.samples, fmt="%.12g", delimiter=",", header=CSV_HEADER, comments="")
    return buf.getvalue().encode("ascii")


def read_csv(data: bytes) -> np.ndarray:
    text = data.decode("ascii")
    if not text.startswith(CSV_HEADER + "\n"):
        raise ValueError("not a trajectory CSV")
    return np.loadtxt(io.StringIO(text), delimiter=",", skiprows=1, ndmin=2)


def _meta(traj: Trajectory) -> dict:
    return {
        "config": traj.config.as_dict(),
        "init": traj.init.as_dict(),
        "class": None if traj.cls is None else traj.cls.as_dict(),
        "period": traj.period,
        "drift": traj.drift,
    }


def export_json(traj: Trajectory) -> bytes:
    """``{"meta": {...}, "samples": [[t, x, z, u, v], ...]}``.

    Floats are written with their shortest round-tripping repr, so parsing
    the output gives back the samples bit for bit.
    """
    _check(traj)
    doc = {"meta": _meta(traj), "samples": traj.samples.tolist()}
    return json.dumps(doc, separators=(",", ":"), allow_nan=False).encode("utf-8")


def read_json(data: bytes) -> tuple[dict, np.ndarray]:
    doc = json.loads(data)
    return doc["meta"], np.asarray(doc["samples"], dtype=float).reshape(-1, 5)


def export_svg(traj: Trajectory, width: int = 800, height: int = 400) -> bytes:
    """Plot ``(x, z)`` as one polyline, y axis pointing up, with the class as a label.

    Long paths are decimated to at most ``SVG_MAX_POINTS`` vertices.
    """
    _check(traj)
    x, z = traj.x, traj.z
    if len(x) > SVG_MAX_POINTS:
        idx = np.unique(np.linspace(0, len(x) - 1, SVG_MAX_POINTS).round().astype(int))
        x, z = x[idx], z[idx]
    x0, x1 = float(x.min()), float(x.max())
    z0, z1 = float(z.min()), float(z.max())
    wx = (x1 - x0) or 1.0
    wz = (z1 - z0) or 1.0
    mx, mz = 0.05 * wx, 0.05 * wz
    # flip z so that up in the plot is up in the fluid
    vb = f"{x0 - mx:.9g} {-(z1 + mz):.9g} {wx + 2 * mx:.9g} {wz + 2 * mz:.9g}"
    pts = " ".join(f"{a:.9g},{-b:.9g}" for a, b in zip(x, z))
    label = "unclassified" if traj.cls is None else traj.cls.effective.value
    stroke = 0.003 * max(wx, wz)
    font = 0.04 * (wz + 2 * mz)
    svg = (
        '<?xml version="1.0" encoding="UTF-8"?>\n'
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="{vb}" preserveAspectRatio="none">\n'
        f'<polyline fill="none" stroke="black" stroke-width="{stroke:.6g}" points="{pts}"/>\n'
        f'<text x="{x0:.9g}" y="{-(z1 + 0.5 * mz):.9g}" font-size="{font:.6g}">{escape(label)}</text>\n'
        "</svg>\n"
    )
    return svg.encode("utf-8")


EXPORTERS = {"csv": export_csv, "json": export_json, "svg": export_svg}
