import numpy as np
import pytest

from commnet.config import ExperimentConfig
from commnet.metrics import empirical_fractions, merge_fractions
from commnet.mobility import simulate_imm


@pytest.fixture(scope="session")
def cfg():
    return ExperimentConfig()


@pytest.fixture(scope="session")
def default_layout(cfg):
    return cfg.layout()


def pooled_imm_fractions(cfg, layout, n_traj, n_jumps, master_seed, spawn=(1,)):
    """Pool the time-fraction estimator over independent short trajectories.

    Single-trajectory fractions keep a non-vanishing dispersion under
    preferential return (visit shares converge to random limits), so
    statistically sound checks average over independent runs.
    """
    seeds = np.random.SeedSequence(master_seed, spawn_key=spawn).generate_state(n_traj)
    parts = [
        empirical_fractions(simulate_imm(cfg.imm_params(), layout, n_jumps, int(s)))
        for s in seeds
    ]
    return merge_fractions(parts)


def pooled_imm_hits(cfg, layout, n_traj, n_jumps, master_seed, spawn=(1,)):
    """Stack per-jump community-hit indicators over independent trajectories."""
    seeds = np.random.SeedSequence(master_seed, spawn_key=spawn).generate_state(n_traj)
    hits = np.empty((n_traj, n_jumps), dtype=bool)
    for i, s in enumerate(seeds):
        hits[i] = simulate_imm(cfg.imm_params(), layout, n_jumps, int(s)).to_inside
    return hits
