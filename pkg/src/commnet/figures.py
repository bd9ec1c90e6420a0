"""Experiment grids: one CSV (and optional SVG chart) per predefined figure.

Every grid point carries its own seed derived from (master seed, figure id,
point index), so output bytes do not depend on worker count or scheduling.
"""

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import svg as svgmod
from .coverage import coverage_curves, macro_coverage_mc, macro_coverage_numeric, n_cover_fixed_point
from .metrics import (
    Attribution,
    TimeFractions,
    analytic_pi_c_in,
    analytic_pi_pause,
    empirical_fractions,
    mobility_inputs,
)
from .mobility import simulate_imm, simulate_rwp

GAMMA0_DB_GRID = tuple(range(0, 22, 2))
SPEED_GRID = (1.0, 5.0, 10.0, 20.0)
RATIO_GRID = tuple(round(0.01 * k, 2) for k in range(1, 11))
LAMBDA_C_GRID = (10.0, 20.0, 30.0)
LAMBDA_S_GRID = (2.5, 5.0, 7.5)

FIGURE_IDS = (2, 3, 4, 5, 6, 7)

_HEADERS = {
    2: ["figure_id", "model", "v_mps", "sc_st_ratio", "analytic", "simulated",
        "std_error", "n_samples", "seed"],
    3: ["figure_id", "model", "v_mps", "sc_st_ratio", "analytic", "simulated",
        "std_error", "n_samples", "seed"],
    4: ["figure_id", "model", "gamma0_db", "lambda_c_bs_km2", "lambda_s_bs_km2",
        "analytic", "simulated", "std_error", "n_samples", "seed"],
    5: ["figure_id", "model", "gamma0_db", "lambda_c_bs_km2", "analytic",
        "simulated", "std_error", "n_samples", "seed"],
    6: ["figure_id", "model", "gamma0_db", "lambda_s_bs_km2", "analytic",
        "simulated", "std_error", "n_samples", "seed"],
    7: ["figure_id", "model", "gamma0_db", "v_mps", "analytic", "simulated",
        "std_error", "n_samples", "seed"],
}


def figure_header(figure_id):
    return list(_HEADERS[figure_id])


@dataclass(frozen=True)
class FigureSpec:
    figure_id: int

    def __post_init__(self):
        if self.figure_id not in FIGURE_IDS:
            raise ValueError(f"unknown figure id {self.figure_id}; expected one of {FIGURE_IDS}")

    def grid(self, cfg):
        fid = self.figure_id
        points = []
        if fid in (2, 3):
            for model in ("IMM", "RWP"):
                for v in SPEED_GRID:
                    for ratio in RATIO_GRID:
                        points.append({"model": model, "v_mps": v, "ratio": ratio})
        elif fid == 4:
            for model in ("IMM", "RWP"):
                for lam_c in LAMBDA_C_GRID:
                    for db in GAMMA0_DB_GRID:
                        points.append({"model": model, "gamma0_db": db,
                                       "lambda_c": lam_c, "lambda_s": cfg.lambda_s_bs_km2})
                for lam_s in LAMBDA_S_GRID:
                    for db in GAMMA0_DB_GRID:
                        points.append({"model": model, "gamma0_db": db,
                                       "lambda_c": cfg.lambda_c_bs_km2, "lambda_s": lam_s})
        elif fid == 5:
            for lam_c in LAMBDA_C_GRID:
                for db in GAMMA0_DB_GRID:
                    points.append({"model": "IMM", "gamma0_db": db, "lambda_c": lam_c})
        elif fid == 6:
            for lam_s in LAMBDA_S_GRID:
                for db in GAMMA0_DB_GRID:
                    points.append({"model": "IMM", "gamma0_db": db, "lambda_s": lam_s})
        else:
            for v in SPEED_GRID:
                for db in GAMMA0_DB_GRID:
                    points.append({"gamma0_db": db, "v_mps": v})
        return points


# stream codes keep grid-point seeds disjoint from shared-precompute seeds
_STREAM_TRAJ = 0
_STREAM_MC = 1
_STREAM_FRACS = {"IMM": 2, "RWP": 3}


def _point_seed(cfg, figure_id, index, stream):
    # spawn_key entries must be nonnegative, hence index + 1
    return np.random.SeedSequence(cfg.seed, spawn_key=(figure_id, index + 1, stream))


def _fmt(value):
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.6f}"
    return str(value)


def _analytic_inputs(cfg, model, ratio=None, v_mps=None):
    layout = cfg.layout(sc_km2=None if ratio is None else ratio * cfg.st_km2)
    if model == "IMM":
        wait_in, wait_out = cfg.wait_in(), cfg.wait_out()
    else:
        wait_in = wait_out = cfg.wait_out()
    return layout, mobility_inputs(layout, cfg.v_mps if v_mps is None else v_mps,
                                   wait_in, wait_out)


def _simulate_fractions(cfg, model, layout, v_mps, seed_seq):
    seed = int(seed_seq.generate_state(1)[0])
    if model == "IMM":
        traj = simulate_imm(cfg.imm_params(v_mps=v_mps), layout, cfg.n_jumps, seed)
    else:
        traj = simulate_rwp(v_mps, cfg.wait_out(), layout, cfg.n_jumps, seed)
    return empirical_fractions(traj, Attribution.JUMP_ATTRIBUTED)


def _block_se(traj, figure_id, n_blocks=10):
    """Crude dispersion estimate: split the jump index range into blocks."""
    edges = np.linspace(0, traj.n_jumps, n_blocks + 1, dtype=int)
    vals = []
    for a, b in zip(edges[:-1], edges[1:]):
        travel = traj.travel_s[a:b]
        pause = traj.pause_s[a:b]
        inside = traj.to_inside[a:b]
        total = travel.sum() + pause.sum()
        if total <= 0:
            continue
        if figure_id == 2:
            vals.append(pause.sum() / total)
        else:
            vals.append((travel[inside].sum() + pause[inside].sum()) / total)
    vals = np.array(vals)
    return float(vals.std(ddof=1) / np.sqrt(len(vals))) if len(vals) > 1 else 0.0


def _compute_point(task):
    figure_id, index, cfg, point, shared = task
    try:
        return _compute_point_inner(figure_id, index, cfg, point, shared)
    except Exception as exc:
        raise RuntimeError(f"figure {figure_id}, grid point {point}: {exc}") from exc


def _compute_point_inner(figure_id, index, cfg, point, shared):
    if figure_id in (2, 3):
        model, v, ratio = point["model"], point["v_mps"], point["ratio"]
        layout, inputs = _analytic_inputs(cfg, model, ratio=ratio, v_mps=v)
        analytic = analytic_pi_pause(inputs) if figure_id == 2 else analytic_pi_c_in(inputs)
        seed = int(_point_seed(cfg, figure_id, index, _STREAM_TRAJ).generate_state(1)[0])
        if model == "IMM":
            traj = simulate_imm(cfg.imm_params(v_mps=v), layout, cfg.n_jumps, seed)
        else:
            traj = simulate_rwp(v, cfg.wait_out(), layout, cfg.n_jumps, seed)
        frac = empirical_fractions(traj, Attribution.JUMP_ATTRIBUTED)
        simulated = frac.pi_pause if figure_id == 2 else frac.pi_c_in
        se = _block_se(traj, figure_id)
        return [figure_id, model, _fmt(v), _fmt(ratio), _fmt(analytic), _fmt(simulated),
                _fmt(se), cfg.n_jumps, seed]

    if figure_id in (4, 5, 6):
        model = point["model"]
        lam_c = point.get("lambda_c", cfg.lambda_c_bs_km2)
        lam_s = point.get("lambda_s", cfg.lambda_s_bs_km2)
        layout = cfg.layout()
        dep = cfg.deployment(lambda_c_km2=lam_c, lambda_s_km2=lam_s)
        chan = cfg.channel(gamma0_db=point["gamma0_db"])
        seed = int(_point_seed(cfg, figure_id, index, _STREAM_MC).generate_state(1)[0])
        analytic_fracs = shared["analytic_fracs"][model]
        curves = coverage_curves(chan, dep, layout, cfg.n_mc, seed)
        fp = n_cover_fixed_point(chan, dep, layout, analytic_fracs, cfg.n_mc, seed,
                                 curves=curves)
        if figure_id == 4:
            sim_fracs = shared["sim_fracs"][model]
            fp_sim = n_cover_fixed_point(chan, dep, layout, sim_fracs, cfg.n_mc, seed,
                                         curves=curves)
            return [figure_id, model, _fmt(float(point["gamma0_db"])), _fmt(lam_c),
                    _fmt(lam_s), _fmt(fp.n_cover), _fmt(fp_sim.n_cover),
                    _fmt(fp.std_error), cfg.n_mc, seed]
        prob = fp.p_c if figure_id == 5 else fp.p_s
        se = np.sqrt(prob * (1 - prob) / cfg.n_mc)
        swept = lam_c if figure_id == 5 else lam_s
        return [figure_id, model, _fmt(float(point["gamma0_db"])), _fmt(swept),
                "", _fmt(prob), _fmt(float(se)), cfg.n_mc, seed]

    # figure 7: macro coverage of the moving user
    chan = cfg.channel(gamma0_db=point["gamma0_db"])
    mob = cfg.macro_mobility(v_mps=point["v_mps"])
    lam_m = cfg.deployment().lambda_m_bs
    numeric = macro_coverage_numeric(chan, lam_m, mob)
    seed = int(_point_seed(cfg, figure_id, index, _STREAM_MC).generate_state(1)[0])
    mc = macro_coverage_mc(chan, lam_m, mob, cfg.n_mc, seed)
    return [figure_id, "", _fmt(float(point["gamma0_db"])), _fmt(point["v_mps"]),
            _fmt(numeric.probability), _fmt(mc.probability), _fmt(mc.std_error),
            cfg.n_mc, seed]


def compute_figure_rows(figure_id, cfg):
    spec = FigureSpec(figure_id)
    points = spec.grid(cfg)
    shared = {}
    if figure_id in (4, 5, 6):
        shared["analytic_fracs"] = {}
        shared["sim_fracs"] = {}
        for model in ("IMM", "RWP"):
            layout, inputs = _analytic_inputs(cfg, model)
            pi_in = analytic_pi_c_in(inputs)
            shared["analytic_fracs"][model] = TimeFractions(
                pi_c_in=pi_in, pi_c_out=1 - pi_in, pi_pause=analytic_pi_pause(inputs),
                total_time_s=0.0, community_time_s=0.0, pause_time_s=0.0,
            )
            if figure_id == 4:
                shared["sim_fracs"][model] = _simulate_fractions(
                    cfg, model, layout, cfg.v_mps,
                    _point_seed(cfg, figure_id, -1, _STREAM_FRACS[model]),
                )
    tasks = [(figure_id, i, cfg, p, shared) for i, p in enumerate(points)]
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            rows = list(pool.map(_compute_point, tasks, chunksize=1))
    else:
        rows = [_compute_point(t) for t in tasks]
    return rows


def write_figure_csv(figure_id, rows, out_dir):
    path = os.path.join(out_dir, f"figure_{figure_id}.csv")
    with open(path, "w", newline="") as fh:
        fh.write(",".join(_HEADERS[figure_id]) + "\n")
        for row in rows:
            fh.write(",".join(str(v) for v in row) + "\n")
    return path


def _svg_series(figure_id, rows):
    header = _HEADERS[figure_id]
    xcol = {2: "sc_st_ratio", 3: "sc_st_ratio", 4: "gamma0_db", 5: "gamma0_db",
            6: "gamma0_db", 7: "gamma0_db"}[figure_id]
    group_cols = {2: ["model", "v_mps"], 3: ["model", "v_mps"],
                  4: ["model", "lambda_c_bs_km2", "lambda_s_bs_km2"],
                  5: ["lambda_c_bs_km2"], 6: ["lambda_s_bs_km2"], 7: ["v_mps"]}[figure_id]
    idx = {name: header.index(name) for name in header}
    series = {}
    for row in rows:
        key = ",".join(str(row[idx[c]]) for c in group_cols)
        x = float(row[idx[xcol]])
        y_raw = row[idx["simulated"]]
        y = float(y_raw) if y_raw != "" else float(row[idx["analytic"]])
        series.setdefault(key, []).append((x, y))
    return [(label, [p[0] for p in pts], [p[1] for p in pts])
            for label, pts in sorted(series.items())]


def write_figure_svg(figure_id, rows, out_dir):
    path = os.path.join(out_dir, f"figure_{figure_id}.svg")
    ycol = {2: "pause fraction", 3: "community fraction", 4: "serving small cells",
            5: "coverage probability", 6: "coverage probability",
            7: "coverage probability"}[figure_id]
    xcol = {2: "community / total area", 3: "community / total area"}.get(
        figure_id, "SINR threshold (dB)")
    chart = svgmod.line_chart(_svg_series(figure_id, rows),
                              title=f"figure {figure_id}", xlabel=xcol, ylabel=ycol)
    with open(path, "w") as fh:
        fh.write(chart)
    return path


def run_figure(figure_id, cfg, out_dir, svg=False):
    """Compute one figure grid and emit its CSV (and optional SVG chart)."""
    os.makedirs(out_dir, exist_ok=True)
    rows = compute_figure_rows(figure_id, cfg)
    paths = [write_figure_csv(figure_id, rows, out_dir)]
    if svg:
        paths.append(write_figure_svg(figure_id, rows, out_dir))
    return paths
