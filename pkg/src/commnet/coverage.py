"""SINR coverage probabilities.

Small-cell coverage for static users is estimated by direct Monte Carlo of
the SINR event (Rayleigh fading, path loss alpha, pair-distance link lengths);
the number of simultaneously serving small cells is the damped fixed point of
the binomial-mean update.  Macro-cell coverage of a moving user is evaluated
both by quadrature (nearest-point distance law displaced by the move, Laplace
transform of the shot-noise interference) and by an independent Poisson point
process simulation.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.integrate import quad as _scipy_quad
from scipy.special import gammaln

from .errors import ConvergenceError
from .geometry import RegionPair, RegionTag, sample_pair_distance

_GAUSS64 = leggauss(64)
_GAUSS32 = leggauss(32)


@dataclass(frozen=True)
class ConstantNoise:
    """Fixed noise power in watts."""

    sigma2_w: float = 1e-13

    def __post_init__(self):
        if self.sigma2_w < 0:
            raise ValueError("noise power must be nonnegative")

    def sample(self, rng, size):
        return np.full(size, self.sigma2_w)

    def laplace(self, c):
        """E[exp(-c * noise_power)]."""
        return math.exp(-c * self.sigma2_w)


@dataclass(frozen=True)
class GaussianAmplitudeNoise:
    """Noise power is the square of a zero-mean Gaussian amplitude."""

    std_w: float

    def __post_init__(self):
        if self.std_w < 0:
            raise ValueError("noise amplitude std must be nonnegative")

    def sample(self, rng, size):
        return (self.std_w * rng.standard_normal(size)) ** 2

    def laplace(self, c):
        return 1.0 / math.sqrt(1.0 + 2.0 * c * self.std_w**2)


@dataclass(frozen=True)
class ChannelParams:
    """Transmit power, Rayleigh fading rate, path loss exponent, SINR threshold, noise."""

    p_t: float = 0.1
    lambda_h: float = 1.0
    alpha: float = 4.0
    gamma0: float = 1.0
    noise: object = field(default_factory=ConstantNoise)

    def __post_init__(self):
        if min(self.p_t, self.lambda_h) <= 0:
            raise ValueError("p_t and lambda_h must be positive")
        if self.alpha <= 2:
            raise ValueError("alpha must exceed 2 for finite interference")
        if self.gamma0 < 0:
            raise ValueError("gamma0 must be nonnegative")


@dataclass(frozen=True)
class Deployment:
    """Base-station densities per square meter."""

    lambda_c_bs: float
    lambda_s_bs: float
    lambda_m_bs: float

    def __post_init__(self):
        if min(self.lambda_c_bs, self.lambda_s_bs, self.lambda_m_bs) <= 0:
            raise ValueError("densities must be positive")
        if self.lambda_c_bs <= self.lambda_s_bs:
            raise ValueError("community small-cell density must exceed the outside density")

    def m_community(self, layout):
        return int(math.floor(self.lambda_c_bs * layout.s_community))

    def m_outside(self, layout):
        return int(math.floor(self.lambda_s_bs * layout.s_outside))


@dataclass(frozen=True)
class CoverageResult:
    probability: float
    std_error: float
    n_samples: int | None = None
    error_bound: float | None = None

    def __post_init__(self):
        spread = 3.0 * max(self.std_error, self.error_bound or 0.0)
        if not (-0.01 <= self.probability - spread and self.probability + spread <= 1.01):
            raise ValueError("probability outside sane reporting range")


@dataclass(frozen=True)
class MacroMobility:
    """Displacement model for the macro link: move at `speed` for `delta_t_m` seconds."""

    speed: float = 5.0
    delta_t_m: float = 10.0

    def __post_init__(self):
        if self.speed < 0 or self.delta_t_m < 0:
            raise ValueError("speed and move duration must be nonnegative")

    @property
    def delta_r(self):
        return self.speed * self.delta_t_m


def associated_count_pmf(m, p):
    """Binomial pmf over {0..m}, evaluated stably in log space."""
    if not (0.0 <= p <= 1.0):
        raise ValueError("p must lie in [0, 1]")
    if m < 0:
        raise ValueError("m must be nonnegative")
    k = np.arange(m + 1)
    if p == 0.0:
        out = np.zeros(m + 1)
        out[0] = 1.0
        return out
    if p == 1.0:
        out = np.zeros(m + 1)
        out[m] = 1.0
        return out
    log_comb = gammaln(m + 1) - gammaln(k + 1) - gammaln(m - k + 1)
    return np.exp(log_comb + k * math.log(p) + (m - k) * math.log1p(-p))


def _pair_for_region(region):
    return RegionPair.IN_IN if region is RegionTag.INSIDE else RegionPair.OUT_OUT


def _success_curve(region, chan, layout, k_max, n_mc, seed, equal_distances=False):
    """P[SINR > gamma0] as a function of the interferer count K = 0..k_max.

    One set of draws serves every K (common random numbers): interference is
    accumulated one interferer at a time and the success fraction recorded at
    each step, so the curve is monotone sample-by-sample.
    """
    rng = np.random.default_rng(seed)
    pair = _pair_for_region(region)
    d_s = sample_pair_distance(pair, layout, rng, n_mc)
    h_s = rng.exponential(1.0 / chan.lambda_h, n_mc)
    signal = chan.p_t * h_s * d_s ** (-chan.alpha)
    noise = chan.noise.sample(rng, n_mc)
    probs = np.empty(k_max + 1)
    interference = np.zeros(n_mc)
    probs[0] = np.mean(signal > chan.gamma0 * noise)
    for k in range(1, k_max + 1):
        d_k = d_s if equal_distances else sample_pair_distance(pair, layout, rng, n_mc)
        h_k = rng.exponential(1.0 / chan.lambda_h, n_mc)
        interference += chan.p_t * h_k * d_k ** (-chan.alpha)
        probs[k] = np.mean(signal > chan.gamma0 * (noise + interference))
    return probs


def small_cell_coverage(region, chan, dep, layout, n_cover, n_mc, seed,
                        equal_distances=False):
    """Monte Carlo small-cell coverage probability for a static user.

    The interferer count is floor(density * region area - n_cover), clamped at
    zero.  Link distances are independent draws of the region's pair-distance
    law; `equal_distances` reuses the serving distance for every interferer
    (validation configuration with a closed-form answer).
    """
    if n_mc < 1:
        raise ValueError("n_mc must be >= 1")
    if region is RegionTag.INSIDE:
        k = int(math.floor(dep.lambda_c_bs * layout.s_community - n_cover))
    else:
        k = int(math.floor(dep.lambda_s_bs * layout.s_outside - n_cover))
    k = max(0, k)
    probs = _success_curve(region, chan, layout, k, n_mc, seed, equal_distances)
    p = float(probs[k])
    return CoverageResult(p, math.sqrt(p * (1.0 - p) / n_mc), n_samples=n_mc)


@dataclass(frozen=True)
class FixedPointResult:
    n_cover: float
    iterations: int
    trace: tuple
    p_c: float
    p_s: float
    std_error: float


def coverage_curves(chan, dep, layout, n_mc, seed):
    """Pair of success-vs-interferer-count curves (inside, outside) on CRN draws."""
    seed_in, seed_out = np.random.SeedSequence(seed).spawn(2)
    curve_in = _success_curve(RegionTag.INSIDE, chan, layout, dep.m_community(layout),
                              n_mc, seed_in)
    curve_out = _success_curve(RegionTag.OUTSIDE, chan, layout, dep.m_outside(layout),
                               n_mc, seed_out)
    return curve_in, curve_out


def n_cover_fixed_point(chan, dep, layout, fractions, n_mc, seed,
                        damping=0.5, tol=1e-3, max_iter=100, curves=None):
    """Damped fixed point for the expected number of serving small cells.

    N <- (pi_c_in * M_c * P_c(N) + (1 - pi_c_in) * M_s * P_s(N)) * pi_pause,
    starting from 0, with the coverage curves evaluated on common random
    numbers so each iteration sees a deterministic update map.  N stays
    real-valued; the floor is applied only inside the interferer counts.
    Prebuilt `curves` (from coverage_curves) may be passed to amortize the
    Monte Carlo cost over several fraction inputs.
    """
    m_c = dep.m_community(layout)
    m_s = dep.m_outside(layout)
    curve_in, curve_out = curves if curves is not None else coverage_curves(
        chan, dep, layout, n_mc, seed)

    pi_in, pi_pause = fractions.pi_c_in, fractions.pi_pause
    n = 0.0
    trace = [n]
    p_c = p_s = 0.0
    for it in range(1, max_iter + 1):
        k_c = min(m_c, max(0, int(math.floor(dep.lambda_c_bs * layout.s_community - n))))
        k_s = min(m_s, max(0, int(math.floor(dep.lambda_s_bs * layout.s_outside - n))))
        p_c = float(curve_in[k_c])
        p_s = float(curve_out[k_s])
        update = (pi_in * m_c * p_c + (1.0 - pi_in) * m_s * p_s) * pi_pause
        n_next = n + damping * (update - n)
        trace.append(n_next)
        if abs(n_next - n) < tol:
            se_c = math.sqrt(max(p_c * (1 - p_c), 1e-300) / n_mc)
            se_s = math.sqrt(max(p_s * (1 - p_s), 1e-300) / n_mc)
            se_n = pi_pause * (pi_in * m_c * se_c + (1.0 - pi_in) * m_s * se_s)
            return FixedPointResult(n_next, it, tuple(trace), p_c, p_s, se_n)
        n = n_next
    raise ConvergenceError(
        f"fixed point did not settle within {max_iter} damped iterations",
        estimate=n,
        trace=tuple(trace),
    )


# ---------------------------------------------------------------------------
# Macro-cell coverage of the moving user.
# ---------------------------------------------------------------------------


def nearest_bs_pdf(x, lambda_m):
    """Density of the distance to the nearest point of a plane Poisson process."""
    if lambda_m <= 0:
        raise ValueError("lambda_m must be positive")
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise ValueError("distances must be nonnegative")
    out = 2.0 * math.pi * lambda_m * x * np.exp(-math.pi * lambda_m * x * x)
    return float(out) if out.ndim == 0 else out


def _moved_pdf_scalar(x, delta_r, lambda_m):
    if x <= 0:
        return 0.0
    if delta_r == 0.0:
        return float(nearest_bs_pdf(x, lambda_m))
    if abs(x - delta_r) < 1e-12 * delta_r:
        # the density has an integrable log singularity exactly at x = delta_r
        x = delta_r * (1.0 + 1e-9)

    def core(theta):
        u2 = x * x - (delta_r * np.sin(theta)) ** 2
        u = np.sqrt(np.maximum(u2, 0.0))
        w = delta_r * np.cos(theta) + u
        ok = (u2 > 0.0) & (w > 0.0)
        safe_u = np.where(ok, u, 1.0)
        val = 2.0 * math.pi * x * lambda_m * w * np.exp(-math.pi * lambda_m * w * w) / safe_u
        return np.where(ok, val, 0.0)

    nodes, weights = _GAUSS64

    def gauss(f, a, b):
        t = 0.5 * (b - a) * nodes + 0.5 * (a + b)
        return 0.5 * (b - a) * float(np.sum(weights * f(t)))

    if x < delta_r:
        # only theta in [0, arcsin(x / delta_r)) is feasible; substitute
        # theta = theta* - s^2 to absorb the inverse square-root endpoint
        theta_star = math.asin(min(x / delta_r, 1.0))
        total = gauss(lambda s: core(theta_star - s * s) * 2.0 * s, 0.0, math.sqrt(theta_star))
    else:
        # sharp (for x near delta_r) but integrable behaviour at theta = pi/2;
        # approach it from both sides with the same substitution
        half = math.sqrt(math.pi / 2.0)
        total = gauss(lambda s: core(math.pi / 2.0 - s * s) * 2.0 * s, 0.0, half)
        total += gauss(lambda s: core(math.pi / 2.0 + s * s) * 2.0 * s, 0.0, half)
    return total / math.pi


def moved_distance_pdf(x, mob, lambda_m):
    """Density of the distance to the originally nearest point after a move.

    Evaluates the theta-integral of the displaced nearest-distance law with
    the integrand zeroed outside its feasible set.
    """
    if lambda_m <= 0:
        raise ValueError("lambda_m must be positive")
    arr = np.asarray(x, dtype=float)
    if np.any(arr < 0):
        raise ValueError("distances must be nonnegative")
    dr = mob.delta_r
    if arr.ndim == 0:
        return _moved_pdf_scalar(float(arr), dr, lambda_m)
    return np.array([_moved_pdf_scalar(float(v), dr, lambda_m) for v in arr])


def _interference_exponent(gamma0, alpha):
    """(1/2) * integral_1^inf gamma0 / (gamma0 + u^(alpha/2)) du.

    Scaled shot-noise exponent: the interference Laplace transform evaluated
    at the Rayleigh point is exp(-2 pi lambda x^2 times this value).
    """
    if gamma0 == 0.0:
        return 0.0

    def integrand(w):
        return gamma0 * w ** (alpha / 2.0 - 2.0) / (gamma0 * w ** (alpha / 2.0) + 1.0)

    val, _ = _scipy_quad(integrand, 0.0, 1.0, limit=200)
    return 0.5 * val


def _x_panels(delta_r, xmax, n_coarse):
    """Graded panel edges, denser around the delta_r kink of the moved law."""
    edges = []
    if delta_r > 0:
        g = np.linspace(0.0, 1.0, n_coarse // 2 + 1) ** 2
        edges.append(delta_r - delta_r * g[::-1])
        g2 = np.linspace(0.0, 1.0, n_coarse + 1) ** 2
        edges.append(delta_r + (xmax - delta_r) * g2)
    else:
        edges.append(np.linspace(0.0, xmax, n_coarse + 1))
    merged = np.unique(np.concatenate(edges))
    return merged


def macro_coverage_numeric(chan, lambda_m, mob):
    """Quadrature evaluation of the moving-user macro coverage probability.

    Outer integral over the moved serving distance, weighted by its density;
    inner conditional coverage in the Rayleigh closed form built from the
    noise and interference Laplace transforms (interferers are all process
    points beyond the serving distance).
    """
    if lambda_m <= 0:
        raise ValueError("lambda_m must be positive")
    dr = mob.delta_r
    xmax = dr + 10.0 / math.sqrt(lambda_m)
    expo = _interference_exponent(chan.gamma0, chan.alpha)
    c_noise = chan.lambda_h * chan.gamma0 / chan.p_t

    def conditional(x):
        return np.array(
            [chan.noise.laplace(c_noise * v**chan.alpha) for v in np.atleast_1d(x)]
        ) * np.exp(-2.0 * math.pi * lambda_m * np.atleast_1d(x) ** 2 * expo)

    nodes, weights = _GAUSS32

    def run(n_coarse):
        total = 0.0
        edges = _x_panels(dr, xmax, n_coarse)
        for a, b in zip(edges[:-1], edges[1:]):
            t = 0.5 * (b - a) * nodes + 0.5 * (a + b)
            f = np.array([_moved_pdf_scalar(v, dr, lambda_m) for v in t])
            total += 0.5 * (b - a) * float(np.sum(weights * f * conditional(t)))
        return total

    coarse = run(24)
    fine = run(48)
    tail = math.exp(-math.pi * lambda_m * (xmax - dr) ** 2)
    bound = abs(fine - coarse) + tail
    # reported unclamped; the result type's sanity window rejects real excursions
    return CoverageResult(fine, 0.0, n_samples=None, error_bound=bound)


def macro_coverage_mc(chan, lambda_m, mob, n_mc, seed, disc_radius_factor=10.0,
                      batch=4000):
    """Poisson point process oracle for the moving-user macro coverage.

    Each trial draws a process on a disc around the user's start position,
    associates with the nearest point, displaces the user, draws fresh
    Rayleigh fading to every point, and tests the SINR from the originally
    associated point at the new position.
    """
    if n_mc < 1:
        raise ValueError("n_mc must be >= 1")
    rng = np.random.default_rng(seed)
    radius = disc_radius_factor / math.sqrt(lambda_m)
    dr = mob.delta_r
    successes = 0
    done = 0
    while done < n_mc:
        b = min(batch, n_mc - done)
        counts = rng.poisson(lambda_m * math.pi * radius * radius, size=b)
        counts = np.maximum(counts, 1)  # empty discs have probability ~exp(-100 pi)
        total = int(counts.sum())
        starts = np.zeros(b, dtype=np.int64)
        starts[1:] = np.cumsum(counts)[:-1]
        owner = np.repeat(np.arange(b), counts)

        r = radius * np.sqrt(rng.random(total))
        ang = 2.0 * math.pi * rng.random(total)
        bx = r * np.cos(ang)
        by = r * np.sin(ang)
        h = rng.exponential(1.0 / chan.lambda_h, total)

        d_start = np.sqrt(bx * bx + by * by)
        nearest = np.minimum.reduceat(d_start, starts)
        phi = 2.0 * math.pi * rng.random(b)
        ux = (dr * np.cos(phi))[owner]
        uy = (dr * np.sin(phi))[owner]
        d_new = np.sqrt((bx - ux) ** 2 + (by - uy) ** 2)
        power = chan.p_t * h * d_new ** (-chan.alpha)

        serving = d_start == nearest[owner]
        total_power = np.add.reduceat(power, starts)
        serving_power = np.add.reduceat(np.where(serving, power, 0.0), starts)
        interference = total_power - serving_power
        noise = chan.noise.sample(rng, b)
        successes += int(np.sum(serving_power > chan.gamma0 * (noise + interference)))
        done += b
    p = successes / n_mc
    return CoverageResult(p, math.sqrt(p * (1.0 - p) / n_mc), n_samples=n_mc)
