"""Time-fraction estimators from trajectories and their closed-form targets.

The analytic arrival and pause probabilities take the mean pair distances and
mean pause durations as inputs; the empirical estimators reproduce the same
accounting from a simulated trajectory so the two can be compared directly.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .geometry import RegionPair, mean_pair_distance
from .mobility import wait_mean


class Attribution(Enum):
    # Travel of a jump counts as community time iff the jump ends inside.
    JUMP_ATTRIBUTED = "jump"
    # Travel is split by the geometric fraction of the segment inside.
    SEGMENT_CLIPPED = "segment"


@dataclass(frozen=True)
class TimeFractions:
    pi_c_in: float
    pi_c_out: float
    pi_pause: float
    total_time_s: float
    community_time_s: float
    pause_time_s: float

    @classmethod
    def from_times(cls, community_time_s, pause_time_s, total_time_s):
        if total_time_s <= 0:
            raise ValueError("total time must be positive")
        pi_c_in = community_time_s / total_time_s
        return cls(
            pi_c_in=pi_c_in,
            pi_c_out=1.0 - pi_c_in,
            pi_pause=pause_time_s / total_time_s,
            total_time_s=total_time_s,
            community_time_s=community_time_s,
            pause_time_s=pause_time_s,
        )


def merge_fractions(parts):
    """Pool estimators from independent trajectories by summing their times."""
    return TimeFractions.from_times(
        sum(p.community_time_s for p in parts),
        sum(p.pause_time_s for p in parts),
        sum(p.total_time_s for p in parts),
    )


def _segment_inside_fraction(traj):
    # Liang-Barsky clip of each jump segment against the community rectangle.
    c = traj.layout.community
    fx, fy, tx, ty = traj.from_x, traj.from_y, traj.to_x, traj.to_y
    lo = np.zeros_like(fx)
    hi = np.ones_like(fx)
    for f, t, b_lo, b_hi in ((fx, tx, c.x_min, c.x_max), (fy, ty, c.y_min, c.y_max)):
        d = t - f
        with np.errstate(divide="ignore", invalid="ignore"):
            t1 = (b_lo - f) / d
            t2 = (b_hi - f) / d
        in_slab = (f >= b_lo) & (f <= b_hi)
        moving = d != 0
        ax_lo = np.where(moving, np.minimum(t1, t2), np.where(in_slab, -np.inf, np.inf))
        ax_hi = np.where(moving, np.maximum(t1, t2), np.where(in_slab, np.inf, -np.inf))
        lo = np.maximum(lo, ax_lo)
        hi = np.minimum(hi, ax_hi)
    return np.clip(hi - lo, 0.0, 1.0)


def empirical_fractions(traj, attribution=Attribution.JUMP_ATTRIBUTED):
    """Estimate arrival/pause time fractions from one trajectory.

    JUMP_ATTRIBUTED books a jump's whole travel time to its destination
    region; SEGMENT_CLIPPED books the exact in-community share of each leg.
    Pauses always belong to the region of the pause location.
    """
    travel = traj.travel_s
    pause = traj.pause_s
    total = float(travel.sum() + pause.sum())
    pause_in = float(pause[traj.to_inside].sum())
    if attribution is Attribution.JUMP_ATTRIBUTED:
        community_travel = float(travel[traj.to_inside].sum())
    else:
        community_travel = float((travel * _segment_inside_fraction(traj)).sum())
    return TimeFractions.from_times(community_travel + pause_in, float(pause.sum()), total)


@dataclass(frozen=True)
class MobilityInputs:
    """Ingredients of the closed-form fractions.

    area_ratio is community area over total area; distances in meters, wait
    means in seconds, speed in meters/second.
    """

    area_ratio: float
    e_d_ii: float
    e_d_oi: float
    e_d_oo: float
    e_wait_in: float
    e_wait_out: float
    speed: float

    def __post_init__(self):
        if not (0 < self.area_ratio < 1):
            raise ValueError("area_ratio must lie in (0, 1)")
        if min(self.e_d_ii, self.e_d_oi, self.e_d_oo, self.speed) <= 0:
            raise ValueError("distances and speed must be positive")
        if min(self.e_wait_in, self.e_wait_out) < 0:
            raise ValueError("wait means must be nonnegative")


def mobility_inputs(layout, speed, wait_in, wait_out, quad=None):
    """Assemble MobilityInputs from quadrature distance means and closed-form wait means."""
    return MobilityInputs(
        area_ratio=layout.area_ratio,
        e_d_ii=mean_pair_distance(RegionPair.IN_IN, layout, quad),
        e_d_oi=mean_pair_distance(RegionPair.OUT_IN, layout, quad),
        e_d_oo=mean_pair_distance(RegionPair.OUT_OUT, layout, quad),
        e_wait_in=wait_mean(wait_in),
        e_wait_out=wait_mean(wait_out),
        speed=speed,
    )


def _denominator(inp):
    q = inp.area_ratio
    travel = (
        q * q * inp.e_d_ii
        + 2.0 * (1.0 - q) * q * inp.e_d_oi
        + (1.0 - q) ** 2 * inp.e_d_oo
    ) / inp.speed
    return travel + q * inp.e_wait_in + (1.0 - q) * inp.e_wait_out


def analytic_pi_c_in(inp):
    """Long-run fraction of time in the community.

    The numerator keeps the out-to-in travel term once (single (o,i) term) and
    the in-community pause mass; the denominator adds the doubled cross term,
    the outside-outside travel and the outside pause mass.
    """
    q = inp.area_ratio
    num = (q * q * inp.e_d_ii + (1.0 - q) * q * inp.e_d_oi) / inp.speed + q * inp.e_wait_in
    return num / _denominator(inp)


def analytic_pi_c_out(inp):
    return 1.0 - analytic_pi_c_in(inp)


def analytic_pi_pause(inp):
    """Long-run fraction of time spent pausing rather than moving."""
    q = inp.area_ratio
    num = q * inp.e_wait_in + (1.0 - q) * inp.e_wait_out
    return num / _denominator(inp)
