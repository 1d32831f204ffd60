"""CSV and JSON writers with 17 significant digits for every float.

Floats printed with ``%.17g`` round-trip exactly, so ``json.loads`` of the
output reproduces the values bit for bit.
"""
from __future__ import annotations

import csv
import io
import json
import math

import numpy as np

from .bifurcation import BifurcationDiagram
from .dynamics import Trajectory
from .effective import DEGENERATE, MAX, MIN

_KIND_OF = {"stable": MIN, "unstable": MAX, "degenerate": DEGENERATE}
_STABILITY_OF = {MIN: "stable", MAX: "unstable", DEGENERATE: "degenerate"}


def fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"cannot serialize non-finite number {x}")
    return format(x, ".17g")


def dumps(obj, indent: int = 2, _level: int = 0) -> str:
    """JSON text with floats at 17 significant digits (json.dumps cannot do this)."""
    pad, inner = " " * (indent * _level), " " * (indent * (_level + 1))
    if obj is None:
        return "null"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, (bool, int, float, np.bool_, np.integer, np.floating)):
        return fmt(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{inner}{json.dumps(str(k))}: {dumps(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        if len(obj) == 0:
            return "[]"
        # short numeric rows stay on one line
        if all(isinstance(v, (int, float, np.integer, np.floating)) for v in obj):
            return "[" + ", ".join(fmt(v) for v in obj) + "]"
        items = [inner + dumps(v, indent, _level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _csv(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([v if isinstance(v, str) else fmt(v) for v in row])
    return buf.getvalue()


# ----------------------------------------------------------------- diagrams

def diagram_to_csv(diagram: BifurcationDiagram) -> str:
    """Rows ``r,u,kind,stability``: the trunk u = 0 first, then the branch."""
    rows = [(r, 0.0, _KIND_OF[s], s) for r, s in diagram.trunk]
    rows += [(b.r, b.u, b.kind, _STABILITY_OF[b.kind]) for b in diagram.branch]
    return _csv(("r", "u", "kind", "stability"), rows)


def diagram_to_json(diagram: BifurcationDiagram, config: dict | None = None) -> str:
    d = diagram.to_dict()
    if config is not None:
        d = {"config": config, **d}
    return dumps(d) + "\n"


def diagram_from_json(text: str) -> BifurcationDiagram:
    return BifurcationDiagram.from_dict(json.loads(text))


# ------------------------------------------------------------- trajectories

def trajectory_to_csv(traj: Trajectory) -> str:
    header = ("t",) + tuple(traj.labels) + ("energy_drift", "moment_drift")
    rows = (
        (t, *s, e, m)
        for t, s, e, m in zip(traj.times, traj.states, traj.energy_drift, traj.moment_drift)
    )
    return _csv(header, rows)


def trajectory_to_dict(traj: Trajectory, config: dict | None = None) -> dict:
    d = {
        "system": traj.system,
        "labels": list(traj.labels),
        "integrator": traj.config,
        "stopped": traj.stopped,
        "t": traj.times.tolist(),
        "states": traj.states.tolist(),
        "energy_drift": traj.energy_drift.tolist(),
        "moment_drift": traj.moment_drift.tolist(),
    }
    if config is not None:
        d = {"config": config, **d}
    return d


def trajectory_to_json(traj: Trajectory, config: dict | None = None) -> str:
    d = trajectory_to_dict(traj, config)
    # the integrator's inf max_step is not valid JSON
    d["integrator"] = {k: (None if isinstance(v, float) and math.isinf(v) else v)
                       for k, v in d["integrator"].items()}
    return dumps(d) + "\n"


def trajectory_from_json(text: str) -> Trajectory:
    d = json.loads(text)
    integrator = {k: (math.inf if v is None and k == "max_step" else v)
                  for k, v in d["integrator"].items()}
    return Trajectory(system=d["system"], labels=tuple(d["labels"]),
                      times=np.array(d["t"], float), states=np.array(d["states"], float),
                      energy_drift=np.array(d["energy_drift"], float),
                      moment_drift=np.array(d["moment_drift"], float),
                      config=integrator, stopped=d["stopped"])


def reports_to_json(reports, config: dict | None = None) -> str:
    """Check reports as a JSON array, or wrapped with the config echo when given."""
    arr = [rep.to_dict() for rep in reports]
    if config is None:
        return dumps(arr) + "\n"
    return dumps({"config": config, "reports": arr}) + "\n"
