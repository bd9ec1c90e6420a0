"""Fast self-check suite: invariants and oracle agreements at reduced scale.

Each check reports PASS, FAIL or INCONCLUSIVE; a noisy estimate whose standard
error swamps the tolerance is reported as inconclusive rather than failed.
"""

import math
from dataclasses import dataclass, replace

import numpy as np

from .coverage import (
    ConstantNoise,
    macro_coverage_mc,
    macro_coverage_numeric,
    n_cover_fixed_point,
    small_cell_coverage,
)
from .errors import ConvergenceError
from .geometry import RegionPair, RegionTag, mean_pair_distance, sample_pair_distance
from .metrics import TimeFractions
from .mobility import sample_wait, simulate_imm, wait_mean


@dataclass(frozen=True)
class CheckResult:
    name: str
    status: str  # PASS | FAIL | INCONCLUSIVE
    detail: str


def _verdict(name, deviation, tol, se3, detail):
    if abs(deviation) <= tol:
        status = "PASS" if se3 <= tol else "INCONCLUSIVE"
    elif abs(deviation) <= tol + se3:
        status = "INCONCLUSIVE"
    else:
        status = "FAIL"
    if status == "INCONCLUSIVE":
        detail += " (noise floor)"
    return CheckResult(name, status, detail)


def run_validation(cfg):
    checks = []

    violations = cfg.constraint_violations()
    checks.append(CheckResult(
        "config-constraints",
        "FAIL" if violations else "PASS",
        "; ".join(violations) if violations else "all parameter constraints hold",
    ))
    if violations:
        return checks

    rng_master = np.random.SeedSequence(cfg.seed, spawn_key=(99,))
    seeds = rng_master.generate_state(8)
    layout = cfg.layout()
    q = layout.area_ratio

    # community hit fraction over pooled independent short trajectories
    n_traj, jumps = 200, 500
    fracs = []
    for i in range(n_traj):
        traj = simulate_imm(cfg.imm_params(), layout, jumps, int(seeds[0]) + i)
        fracs.append(traj.to_inside.mean())
    fracs = np.array(fracs)
    dev = float(fracs.mean() - q)
    se3 = 3.0 * float(fracs.std(ddof=1) / math.sqrt(n_traj))
    checks.append(_verdict("community-hit-fraction", dev, 0.01, se3,
                           f"pooled fraction {fracs.mean():.4f} vs area ratio {q:.4f}"))

    # pause sampling mean vs closed form
    n = min(cfg.n_mc, 100000)
    rng = np.random.default_rng(int(seeds[1]))
    for label, model in (("in", cfg.wait_in()), ("out", cfg.wait_out())):
        draws = sample_wait(model, rng, n)
        mean = wait_mean(model)
        se3 = 3.0 * float(draws.std(ddof=1) / math.sqrt(n))
        checks.append(_verdict(f"wait-mean-{label}", float(draws.mean() - mean),
                               0.02 * mean, se3,
                               f"sample mean {draws.mean():.2f}s vs closed form {mean:.2f}s"))

    # quadrature vs sampling mean distance
    rng = np.random.default_rng(int(seeds[2]))
    n = min(cfg.n_mc, 200000)
    quad_val = mean_pair_distance(RegionPair.IN_IN, layout)
    draws = sample_pair_distance(RegionPair.IN_IN, layout, rng, n)
    se3 = 3.0 * float(draws.std(ddof=1) / math.sqrt(n))
    tol = 1e-3 * layout.total.diagonal
    checks.append(_verdict("distance-quadrature-vs-sampling",
                           float(draws.mean() - quad_val), tol, se3,
                           f"sampling {draws.mean():.2f}m vs quadrature {quad_val:.2f}m"))

    # single interferer at the same distance: closed form 1/(1+gamma0)
    n = min(cfg.n_mc, 100000)
    chan = cfg.channel()
    chan_zero_noise = replace(chan, gamma0=1.0, noise=ConstantNoise(0.0))
    dep = cfg.deployment()
    n_cover = dep.lambda_c_bs * layout.s_community - 1  # leaves exactly one interferer
    res = small_cell_coverage(RegionTag.INSIDE, chan_zero_noise, dep, layout,
                              n_cover, n, int(seeds[3]), equal_distances=True)
    checks.append(_verdict("single-interferer-closed-form",
                           res.probability - 0.5, 0.02, 3.0 * res.std_error,
                           f"estimate {res.probability:.4f} vs 0.5"))

    # fixed point convergence at configured threshold
    fractions = TimeFractions(0.15, 0.85, 0.15, 0, 0, 0)
    try:
        fp = n_cover_fixed_point(cfg.channel(), dep, layout, fractions,
                                 min(cfg.n_mc, 50000), int(seeds[4]))
        checks.append(CheckResult("fixed-point-convergence", "PASS",
                                  f"N={fp.n_cover:.4f} after {fp.iterations} iterations"))
    except ConvergenceError as exc:
        checks.append(CheckResult("fixed-point-convergence", "FAIL", str(exc)))

    # macro coverage: quadrature vs Poisson-process Monte Carlo
    n = min(cfg.n_mc, 50000)
    chan1 = cfg.channel(gamma0_db=0.0)
    lam_m = dep.lambda_m_bs
    mob = cfg.macro_mobility()
    numeric = macro_coverage_numeric(chan1, lam_m, mob)
    mc = macro_coverage_mc(chan1, lam_m, mob, n, int(seeds[5]))
    checks.append(_verdict("macro-numeric-vs-mc",
                           numeric.probability - mc.probability, 0.02,
                           3.0 * mc.std_error + (numeric.error_bound or 0.0),
                           f"numeric {numeric.probability:.4f} vs mc {mc.probability:.4f}"))

    return checks


def format_report(checks):
    lines = [f"{c.status:<13} {c.name}: {c.detail}" for c in checks]
    n_fail = sum(1 for c in checks if c.status == "FAIL")
    lines.append(f"{len(checks)} checks, {n_fail} failed")
    return "\n".join(lines)
