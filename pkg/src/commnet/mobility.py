"""Jump-based mobility: exploration / preferential-return trajectories and the
random-waypoint baseline, with heavy-tailed (truncated power-law) pauses.

The hot sequential loop lives in the compiled extension ``_trajkernel`` when
it is available; an interpreted twin (``_trajfallback``) is selected at import
otherwise.  Both consume the same uniform stream, so trajectories are
bit-identical across backends for a given seed.
"""

import math
import os
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import _trajfallback
from .geometry import RegionTag

try:
    from . import _trajkernel
except ImportError:  # pragma: no cover - depends on build environment
    _trajkernel = None


def backend_name():
    """Which trajectory kernel is active: 'compiled' or 'python'."""
    if _trajkernel is not None and not os.environ.get("COMMNET_PURE"):
        return "compiled"
    return "python"


def _kernel_module():
    return _trajkernel if backend_name() == "compiled" else _trajfallback


class JumpKind(Enum):
    EXPLORE = 0
    RETURN = 1


@dataclass(frozen=True)
class WaitModel:
    """Pause-duration law with density proportional to t^(-1-beta) on [t_min, t_max]."""

    beta: float
    t_min: float
    t_max: float

    def __post_init__(self):
        if self.beta <= 0:
            raise ValueError("beta must be > 0")
        if not (0 < self.t_min <= self.t_max):
            raise ValueError("need 0 < t_min <= t_max")


def _wait_consts(model):
    # (is_const, t_const, a^-beta, a^-beta - b^-beta, -1/beta) consumed by the kernels
    if model.t_min == model.t_max:
        return (1, model.t_min, 0.0, 0.0, 0.0)
    amb = model.t_min ** (-model.beta)
    bmb = model.t_max ** (-model.beta)
    return (0, 0.0, amb, amb - bmb, -1.0 / model.beta)


def sample_wait(model, rng, size=None):
    """Inverse-transform draw(s) from the truncated power law; always within [t_min, t_max]."""
    u = rng.random(size if size is not None else None)
    is_const, tconst, amb, span, ninv = _wait_consts(model)
    if is_const:
        return np.full_like(np.asarray(u, dtype=float), tconst) if size is not None else tconst
    return np.power(amb - u * span, ninv)


def wait_mean(model):
    """Closed-form mean of the truncated power law (log branch at beta == 1)."""
    a, b, beta = model.t_min, model.t_max, model.beta
    if a == b:
        return a
    if beta == 1.0:
        return a * b * math.log(b / a) / (b - a)
    norm = beta / (a ** (-beta) - b ** (-beta))
    return norm * (b ** (1.0 - beta) - a ** (1.0 - beta)) / (1.0 - beta)


@dataclass(frozen=True)
class ImmParams:
    """Exploration/return parameters: P(new) = rho * S**(-gamma), speed, pause laws."""

    rho: float = 1.0
    gamma: float = 0.21
    speed: float = 5.0
    wait_in: WaitModel = WaitModel(0.5, 10.0, 1e4)
    wait_out: WaitModel = WaitModel(1.5, 10.0, 1e4)

    def __post_init__(self):
        if not (0 < self.rho <= 1):
            raise ValueError("rho must be in (0, 1]")
        if self.gamma < 0:
            raise ValueError("gamma must be >= 0")
        if self.speed <= 0:
            raise ValueError("speed must be > 0")


@dataclass(frozen=True)
class Jump:
    index: int
    from_point: tuple
    to_point: tuple
    to_region: RegionTag
    kind: JumpKind
    travel_s: float
    pause_s: float


class Trajectory:
    """A finished trajectory: distinct locations plus per-jump records.

    Immutable by convention; all derived arrays are computed once.
    """

    def __init__(self, loc_x, loc_y, dest, kind, pause_s, speed, layout):
        self.loc_x = loc_x
        self.loc_y = loc_y
        self.dest = dest
        self.kind = kind
        self.pause_s = pause_s
        self.speed = speed
        self.layout = layout

        self.from_idx = np.concatenate(([0], dest[:-1]))
        self.to_x = loc_x[dest]
        self.to_y = loc_y[dest]
        self.from_x = loc_x[self.from_idx]
        self.from_y = loc_y[self.from_idx]
        dx = self.to_x - self.from_x
        dy = self.to_y - self.from_y
        self.travel_s = np.sqrt(dx * dx + dy * dy) / speed
        c = layout.community
        self.loc_inside = (
            (loc_x >= c.x_min) & (loc_x <= c.x_max) & (loc_y >= c.y_min) & (loc_y <= c.y_max)
        )
        self.to_inside = self.loc_inside[dest]
        self.from_inside = self.loc_inside[self.from_idx]

    @property
    def n_jumps(self):
        return self.dest.shape[0]

    def __len__(self):
        return self.n_jumps

    @property
    def distinct_locations(self):
        return self.loc_x.shape[0]

    def visit_counts(self):
        """Visits per distinct location; the start counts as visit 1 of location 0."""
        counts = np.bincount(self.dest, minlength=self.distinct_locations)
        counts[0] += 1
        return counts

    def counters(self):
        """Jump counts by (origin, destination) region: n_ii, n_oi, n_io, n_oo."""
        fi, ti = self.from_inside, self.to_inside
        return {
            "n_ii": int((fi & ti).sum()),
            "n_oi": int((~fi & ti).sum()),
            "n_io": int((fi & ~ti).sum()),
            "n_oo": int((~fi & ~ti).sum()),
        }

    def jump(self, i):
        return Jump(
            index=i + 1,
            from_point=(float(self.from_x[i]), float(self.from_y[i])),
            to_point=(float(self.to_x[i]), float(self.to_y[i])),
            to_region=RegionTag.INSIDE if self.to_inside[i] else RegionTag.OUTSIDE,
            kind=JumpKind(int(self.kind[i])),
            travel_s=float(self.travel_s[i]),
            pause_s=float(self.pause_s[i]),
        )

    def write_csv(self, path):
        with open(path, "w", newline="") as fh:
            fh.write("n,x_from,y_from,x_to,y_to,region,kind,travel_s,pause_s\n")
            for i in range(self.n_jumps):
                region = "in" if self.to_inside[i] else "out"
                kind = "explore" if self.kind[i] == 0 else "return"
                fh.write(
                    f"{i + 1},{float(self.from_x[i])!r},{float(self.from_y[i])!r},"
                    f"{float(self.to_x[i])!r},{float(self.to_y[i])!r},{region},{kind},"
                    f"{float(self.travel_s[i])!r},{float(self.pause_s[i])!r}\n"
                )


def _layout_args(layout):
    t, c = layout.total, layout.community
    return dict(
        xlo=t.x_min, wx=t.width, ylo=t.y_min, wy=t.height,
        cxlo=c.x_min, cxhi=c.x_max, cylo=c.y_min, cyhi=c.y_max,
    )


def simulate_imm(params, layout, n_jumps, seed):
    """Simulate n_jumps of the exploration/preferential-return process.

    Deterministic for a given seed; the start point is uniform on the total
    rectangle and counts as visit 1 of location 0.
    """
    if n_jumps < 1:
        raise ValueError("n_jumps must be >= 1")
    bg = np.random.PCG64(seed)
    args = _layout_args(layout)
    loc_x, loc_y, dest, kind, pause = _kernel_module().simulate_imm(
        bg, int(n_jumps), params.rho, -params.gamma,
        args["xlo"], args["wx"], args["ylo"], args["wy"],
        _wait_consts(params.wait_in), _wait_consts(params.wait_out),
        args["cxlo"], args["cxhi"], args["cylo"], args["cyhi"],
    )
    return Trajectory(loc_x, loc_y, dest, kind, pause, params.speed, layout)


def simulate_rwp(speed, wait, layout, n_jumps, seed):
    """Random-waypoint baseline: every waypoint fresh uniform, one pause law everywhere."""
    if n_jumps < 1:
        raise ValueError("n_jumps must be >= 1")
    bg = np.random.PCG64(seed)
    args = _layout_args(layout)
    loc_x, loc_y, pause = _kernel_module().simulate_rwp(
        bg, int(n_jumps), args["xlo"], args["wx"], args["ylo"], args["wy"],
        _wait_consts(wait),
    )
    dest = np.arange(1, n_jumps + 1, dtype=np.int64)
    kind = np.zeros(n_jumps, dtype=np.uint8)
    return Trajectory(loc_x, loc_y, dest, kind, pause, speed, layout)


# ---------------------------------------------------------------------------
# Step-level interface, mirroring the kernels one jump at a time.
# ---------------------------------------------------------------------------


class MobilityState:
    """Mutable visit history for jump-by-jump simulation."""

    def __init__(self, start_x, start_y):
        self.loc_x = [start_x]
        self.loc_y = [start_y]
        self.tickets = [0]
        self.cur = 0
        self.jumps_done = 0

    @classmethod
    def start(cls, layout, rng):
        t = layout.total
        return cls(t.x_min + t.width * rng.random(), t.y_min + t.height * rng.random())

    @property
    def distinct_locations(self):
        return len(self.loc_x)


def next_jump(state, params, layout, rng):
    """Advance the trajectory by one jump and return its record.

    Explores a fresh uniform point with probability rho * S**(-gamma), else
    returns to an old location picked with probability proportional to its
    visit count (uniform over visit tickets).
    """
    t, c = layout.total, layout.community
    j = state.jumps_done
    u = rng.random()
    if u < params.rho * math.pow(float(state.distinct_locations), -params.gamma):
        x = t.x_min + t.width * rng.random()
        y = t.y_min + t.height * rng.random()
        dest = state.distinct_locations
        state.loc_x.append(x)
        state.loc_y.append(y)
        kind = JumpKind.EXPLORE
    else:
        pick = int(rng.random() * (j + 1))
        if pick > j:
            pick = j
        dest = state.tickets[pick]
        x = state.loc_x[dest]
        y = state.loc_y[dest]
        kind = JumpKind.RETURN
    u = rng.random()
    inside = c.x_min <= x <= c.x_max and c.y_min <= y <= c.y_max
    wait = params.wait_in if inside else params.wait_out
    is_const, tconst, amb, span, ninv = _wait_consts(wait)
    pause = tconst if is_const else math.pow(amb - u * span, ninv)

    fx, fy = state.loc_x[state.cur], state.loc_y[state.cur]
    dx, dy = x - fx, y - fy
    travel = math.sqrt(dx * dx + dy * dy) / params.speed
    state.tickets.append(dest)
    state.cur = dest
    state.jumps_done += 1
    return Jump(
        index=state.jumps_done,
        from_point=(fx, fy),
        to_point=(x, y),
        to_region=RegionTag.INSIDE if inside else RegionTag.OUTSIDE,
        kind=kind,
        travel_s=travel,
        pause_s=pause,
    )
