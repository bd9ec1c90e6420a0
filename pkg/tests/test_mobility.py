import math
import os

import numpy as np
import pytest
from scipy import stats

from commnet.mobility import (
    ImmParams,
    JumpKind,
    MobilityState,
    WaitModel,
    backend_name,
    next_jump,
    sample_wait,
    simulate_imm,
    simulate_rwp,
    wait_mean,
)
from conftest import pooled_imm_hits


def test_wait_model_validation():
    with pytest.raises(ValueError):
        WaitModel(0.0, 1.0, 2.0)
    with pytest.raises(ValueError):
        WaitModel(1.0, 2.0, 1.0)
    with pytest.raises(ValueError):
        WaitModel(1.0, 0.0, 1.0)


def test_wait_degenerate_support():
    model = WaitModel(0.7, 5.0, 5.0)
    rng = np.random.default_rng(0)
    assert wait_mean(model) == 5.0
    assert sample_wait(model, rng) == 5.0
    assert (sample_wait(model, rng, 100) == 5.0).all()


@pytest.mark.parametrize("beta", [0.5, 1.0, 1.5, 3.0])
def test_wait_sampling_matches_closed_form_mean(beta):
    model = WaitModel(beta, 10.0, 1e4)
    rng = np.random.default_rng(11)
    draws = sample_wait(model, rng, 10**6)
    assert (draws >= model.t_min).all() and (draws <= model.t_max).all()
    se = draws.std(ddof=1) / math.sqrt(draws.size)
    assert abs(draws.mean() - wait_mean(model)) < max(3 * se, 0.01 * wait_mean(model))


def test_wait_mean_log_branch_against_sampling():
    model = WaitModel(1.0, 1.0, math.e)
    rng = np.random.default_rng(12)
    draws = sample_wait(model, rng, 10**7)
    se = draws.std(ddof=1) / math.sqrt(draws.size)
    assert abs(draws.mean() - wait_mean(model)) < 3 * se


def test_wait_mean_nondecreasing_in_t_max():
    means = [wait_mean(WaitModel(0.8, 10.0, t)) for t in (10.0, 100.0, 1e3, 1e4)]
    assert all(b >= a for a, b in zip(means, means[1:]))


def test_imm_determinism(cfg, default_layout):
    a = simulate_imm(cfg.imm_params(), default_layout, 5000, 42)
    b = simulate_imm(cfg.imm_params(), default_layout, 5000, 42)
    for name in ("loc_x", "loc_y", "dest", "kind", "pause_s", "travel_s"):
        assert np.array_equal(getattr(a, name), getattr(b, name)), name


def test_backend_parity(cfg, default_layout):
    if backend_name() != "compiled":
        pytest.skip("compiled kernel not built")
    compiled = simulate_imm(cfg.imm_params(), default_layout, 20000, 7)
    os.environ["COMMNET_PURE"] = "1"
    try:
        assert backend_name() == "python"
        pure = simulate_imm(cfg.imm_params(), default_layout, 20000, 7)
    finally:
        del os.environ["COMMNET_PURE"]
    for name in ("loc_x", "loc_y", "dest", "kind", "pause_s", "travel_s"):
        assert np.array_equal(getattr(compiled, name), getattr(pure, name)), name


def test_rwp_backend_parity(cfg, default_layout):
    if backend_name() != "compiled":
        pytest.skip("compiled kernel not built")
    wait = cfg.wait_out()
    compiled = simulate_rwp(5.0, wait, default_layout, 20000, 7)
    os.environ["COMMNET_PURE"] = "1"
    try:
        pure = simulate_rwp(5.0, wait, default_layout, 20000, 7)
    finally:
        del os.environ["COMMNET_PURE"]
    for name in ("loc_x", "loc_y", "pause_s", "travel_s"):
        assert np.array_equal(getattr(compiled, name), getattr(pure, name)), name


def test_counters_partition(cfg, default_layout):
    traj = simulate_imm(cfg.imm_params(), default_layout, 30000, 3)
    assert sum(traj.counters().values()) == traj.n_jumps


def test_every_jump_explores_when_gamma_zero(default_layout, cfg):
    params = ImmParams(rho=1.0, gamma=0.0, speed=5.0,
                       wait_in=cfg.wait_in(), wait_out=cfg.wait_out())
    traj = simulate_imm(params, default_layout, 5000, 1)
    assert (traj.kind == 0).all()
    assert traj.distinct_locations == 5001  # counting the start


def test_large_gamma_mostly_returns(cfg, default_layout):
    params = ImmParams(rho=1.0, gamma=10.0, speed=5.0,
                       wait_in=cfg.wait_in(), wait_out=cfg.wait_out())
    traj = simulate_imm(params, default_layout, 10**4, 2)
    assert (traj.kind == 1).mean() > 0.99


def test_visit_count_conservation(cfg, default_layout):
    traj = simulate_imm(cfg.imm_params(), default_layout, 10**4, 9)
    counts = traj.visit_counts()
    assert counts.sum() == traj.n_jumps + 1  # every jump adds one visit, plus the start
    assert (counts > 0).all()
    # distinct-location count increases by exactly one per explore
    profile = np.cumsum(traj.kind == 0) + 1
    assert profile[-1] == traj.distinct_locations


def test_travel_time_exactness(cfg, default_layout):
    traj = simulate_imm(cfg.imm_params(), default_layout, 10**5, 4)
    dist = np.sqrt((traj.to_x - traj.from_x) ** 2 + (traj.to_y - traj.from_y) ** 2)
    err = np.abs(traj.travel_s * cfg.imm_params().speed - dist)
    assert (err <= 1e-12 * np.maximum(dist, 1.0)).all()


def test_pause_within_support(cfg, default_layout):
    traj = simulate_imm(cfg.imm_params(), default_layout, 10**5, 5)
    assert (traj.pause_s >= cfg.t_min_s).all() and (traj.pause_s <= cfg.t_max_s).all()


def test_hit_fraction_independent_of_jump_index(cfg, default_layout):
    """Per-jump community-hit probability equals the area ratio at every
    jump index; pooled over independent trajectories so the binomial
    yardstick applies."""
    hits = pooled_imm_hits(cfg, default_layout, n_traj=2000, n_jumps=200, master_seed=3)
    q = default_layout.area_ratio
    pooled = hits.mean()
    assert abs(pooled - q) < 0.005
    deciles = hits.reshape(hits.shape[0], 10, -1).mean(axis=(0, 2))
    binom3 = 3 * math.sqrt(q * (1 - q) / (hits.shape[0] * hits.shape[1] / 10))
    assert np.abs(deciles - q).max() < binom3


def test_return_pick_distribution_chi_square(default_layout):
    """Conditioned on Return, picks follow visit counts (uniform over tickets)."""
    rng = np.random.default_rng(31)
    params = ImmParams(rho=0.6, gamma=0.3, speed=5.0)
    state = MobilityState.start(default_layout, rng)
    observed = {}
    expected = {}
    for _ in range(1000):
        tickets = list(state.tickets)
        n_tickets = len(tickets)
        jump = next_jump(state, params, default_layout, rng)
        if jump.kind is JumpKind.RETURN:
            counts = {}
            for t in tickets:
                counts[t] = counts.get(t, 0) + 1
            for loc, k in counts.items():
                expected[loc] = expected.get(loc, 0.0) + k / n_tickets
            dest = state.tickets[-1]
            observed[dest] = observed.get(dest, 0) + 1
    # pool locations with small expected counts
    obs_pool, exp_pool = [], []
    small_o = small_e = 0.0
    for loc, e in expected.items():
        o = observed.get(loc, 0)
        if e >= 5.0:
            obs_pool.append(o)
            exp_pool.append(e)
        else:
            small_o += o
            small_e += e
    if small_e > 0:
        obs_pool.append(small_o)
        exp_pool.append(small_e)
    obs_pool = np.array(obs_pool, dtype=float)
    exp_pool = np.array(exp_pool, dtype=float)
    exp_pool *= obs_pool.sum() / exp_pool.sum()
    chi2 = float(((obs_pool - exp_pool) ** 2 / exp_pool).sum())
    p = stats.chi2.sf(chi2, len(obs_pool) - 1)
    assert p > 0.01, f"chi2={chi2:.1f} over {len(obs_pool) - 1} df (p={p:.4f})"


def test_next_jump_matches_bulk_simulation(cfg, default_layout):
    seed = 97
    bulk = simulate_imm(cfg.imm_params(), default_layout, 200, seed)
    rng = np.random.Generator(np.random.PCG64(seed))
    state = MobilityState.start(default_layout, rng)
    for i in range(200):
        jump = next_jump(state, cfg.imm_params(), default_layout, rng)
        assert jump.to_point == (bulk.to_x[i], bulk.to_y[i])
        assert jump.pause_s == bulk.pause_s[i]
        assert jump.travel_s == bulk.travel_s[i]
    assert state.distinct_locations == bulk.distinct_locations


def test_single_location_history_returns_to_it(default_layout):
    # with rho < 1 a first-jump Return deterministically revisits the start
    rng = np.random.default_rng(5)
    params = ImmParams(rho=1e-9, gamma=0.5, speed=5.0)
    state = MobilityState.start(default_layout, rng)
    start = (state.loc_x[0], state.loc_y[0])
    jump = next_jump(state, params, default_layout, rng)
    assert jump.kind is JumpKind.RETURN
    assert jump.to_point == start
    assert jump.travel_s == 0.0


def test_rwp_properties(cfg, default_layout):
    traj = simulate_rwp(5.0, cfg.wait_out(), default_layout, 10**6, 6)
    assert abs(traj.to_inside.mean() - 0.1) < 0.005
    assert traj.distinct_locations == traj.n_jumps + 1
    again = simulate_rwp(5.0, cfg.wait_out(), default_layout, 1000, 8)
    third = simulate_rwp(5.0, cfg.wait_out(), default_layout, 1000, 8)
    assert np.array_equal(again.loc_x, third.loc_x)
    assert np.array_equal(again.pause_s, third.pause_s)


def test_trajectory_csv_export(tmp_path, cfg, default_layout):
    traj = simulate_imm(cfg.imm_params(), default_layout, 50, 13)
    path = tmp_path / "traj.csv"
    traj.write_csv(path)
    lines = path.read_text().splitlines()
    assert lines[0] == "n,x_from,y_from,x_to,y_to,region,kind,travel_s,pause_s"
    assert len(lines) == 51
    first = lines[1].split(",")
    assert first[0] == "1"
    assert first[5] in ("in", "out")
    assert first[6] in ("explore", "return")
    # float fields round-trip exactly
    assert float(first[7]) == traj.travel_s[0]
    assert float(first[8]) == traj.pause_s[0]


def test_simulate_rejects_empty(cfg, default_layout):
    with pytest.raises(ValueError):
        simulate_imm(cfg.imm_params(), default_layout, 0, 1)
    with pytest.raises(ValueError):
        simulate_rwp(5.0, cfg.wait_out(), default_layout, 0, 1)
