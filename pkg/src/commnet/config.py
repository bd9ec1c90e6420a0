"""Flat key=value configuration with unit conversions and validation."""

from dataclasses import dataclass, fields

from .coverage import ChannelParams, ConstantNoise, Deployment, GaussianAmplitudeNoise, MacroMobility
from .errors import ConfigError
from .geometry import Layout
from .mobility import ImmParams, WaitModel

KM2_TO_M2 = 1e6
PER_KM2_TO_PER_M2 = 1e-6


@dataclass(frozen=True)
class ExperimentConfig:
    """Run configuration; file keys and CLI overrides map 1:1 onto field names."""

    st_km2: float = 10.0
    sc_km2: float = 1.0
    aspect_t: float = 1.0
    aspect_c: float = 1.0
    lambda_c_bs_km2: float = 20.0
    lambda_s_bs_km2: float = 5.0
    lambda_m_bs_km2: float = 1.0
    rho: float = 1.0
    gamma: float = 0.21
    beta_c: float = 0.5
    beta_s: float = 1.5
    t_min_s: float = 10.0
    t_max_s: float = 1e4
    v_mps: float = 5.0
    p_t_w: float = 0.1
    lambda_h: float = 1.0
    alpha: float = 4.0
    gamma0_db: float = 0.0
    noise_model: str = "constant"
    sigma2_w: float = 1e-13
    noise_std_w: float = 3.16e-7
    delta_t_m_s: float = 10.0
    n_jumps: int = 200000
    n_mc: int = 100000
    seed: int = 20160301
    workers: int = 1

    def validate(self):
        errs = self.constraint_violations()
        if errs:
            raise ConfigError("; ".join(errs))
        return self

    def constraint_violations(self):
        errs = []
        if not 0 < self.sc_km2 < self.st_km2:
            errs.append("sc_km2 must satisfy 0 < sc_km2 < st_km2 (community inside the plane)")
        for key in ("st_km2", "aspect_t", "aspect_c", "lambda_c_bs_km2", "lambda_s_bs_km2",
                    "lambda_m_bs_km2", "v_mps", "p_t_w", "lambda_h", "beta_c", "beta_s",
                    "t_min_s", "t_max_s"):
            if getattr(self, key) <= 0:
                errs.append(f"{key} must be positive")
        if self.lambda_c_bs_km2 <= self.lambda_s_bs_km2:
            errs.append("lambda_c_bs_km2 must exceed lambda_s_bs_km2 (community constraint)")
        if self.alpha <= 2:
            errs.append("alpha must exceed 2")
        if not 0 < self.rho <= 1:
            errs.append("rho must lie in (0, 1]")
        if self.gamma < 0:
            errs.append("gamma must be nonnegative")
        if self.t_min_s > self.t_max_s:
            errs.append("t_min_s must not exceed t_max_s")
        if self.noise_model not in ("constant", "gaussian_amplitude"):
            errs.append("noise_model must be 'constant' or 'gaussian_amplitude'")
        if self.sigma2_w < 0 or self.noise_std_w < 0:
            errs.append("noise parameters must be nonnegative")
        if self.delta_t_m_s < 0:
            errs.append("delta_t_m_s must be nonnegative")
        if self.n_jumps < 1 or self.n_mc < 1:
            errs.append("n_jumps and n_mc must be at least 1")
        if self.workers < 1:
            errs.append("workers must be at least 1")
        if self.seed < 0:
            errs.append("seed must be nonnegative")
        return errs

    # -- derived model objects -------------------------------------------

    def layout(self, sc_km2=None):
        return Layout.from_areas(
            self.st_km2 * KM2_TO_M2,
            (self.sc_km2 if sc_km2 is None else sc_km2) * KM2_TO_M2,
            self.aspect_t,
            self.aspect_c,
        )

    def wait_in(self):
        return WaitModel(self.beta_c, self.t_min_s, self.t_max_s)

    def wait_out(self):
        return WaitModel(self.beta_s, self.t_min_s, self.t_max_s)

    def imm_params(self, v_mps=None):
        return ImmParams(
            rho=self.rho,
            gamma=self.gamma,
            speed=self.v_mps if v_mps is None else v_mps,
            wait_in=self.wait_in(),
            wait_out=self.wait_out(),
        )

    def noise(self):
        if self.noise_model == "constant":
            return ConstantNoise(self.sigma2_w)
        return GaussianAmplitudeNoise(self.noise_std_w)

    def channel(self, gamma0_db=None):
        db = self.gamma0_db if gamma0_db is None else gamma0_db
        return ChannelParams(
            p_t=self.p_t_w,
            lambda_h=self.lambda_h,
            alpha=self.alpha,
            gamma0=10.0 ** (db / 10.0),
            noise=self.noise(),
        )

    def deployment(self, lambda_c_km2=None, lambda_s_km2=None):
        return Deployment(
            lambda_c_bs=(self.lambda_c_bs_km2 if lambda_c_km2 is None else lambda_c_km2)
            * PER_KM2_TO_PER_M2,
            lambda_s_bs=(self.lambda_s_bs_km2 if lambda_s_km2 is None else lambda_s_km2)
            * PER_KM2_TO_PER_M2,
            lambda_m_bs=self.lambda_m_bs_km2 * PER_KM2_TO_PER_M2,
        )

    def macro_mobility(self, v_mps=None):
        return MacroMobility(self.v_mps if v_mps is None else v_mps, self.delta_t_m_s)


_FIELD_TYPES = {f.name: f.type for f in fields(ExperimentConfig)}
_INT_KEYS = {"n_jumps", "n_mc", "seed", "workers"}
_STR_KEYS = {"noise_model"}


def _parse_value(key, raw):
    raw = raw.strip()
    if key in _STR_KEYS:
        return raw
    try:
        if key in _INT_KEYS:
            value = float(raw)
            if value != int(value):
                raise ValueError
            return int(value)
        return float(raw)
    except ValueError:
        raise ConfigError(f"key '{key}': non-numeric value '{raw}'") from None


def parse_config_text(text):
    values = {}
    for ln, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ConfigError(f"line {ln}: expected 'key = value', got '{stripped}'")
        key, raw = stripped.split("=", 1)
        key = key.strip()
        if key not in _FIELD_TYPES:
            raise ConfigError(f"line {ln}: unknown key '{key}'")
        values[key] = _parse_value(key, raw)
    return values


def load_config(path=None, overrides=None):
    """Build an ExperimentConfig from defaults, an optional file and overrides.

    Precedence: defaults < file < overrides.  Unknown keys and violated
    invariants raise ConfigError naming the offending key.
    """
    values = {}
    if path is not None:
        try:
            with open(path) as fh:
                text = fh.read()
        except OSError as exc:
            raise ConfigError(f"cannot read config file {path}: {exc}") from None
        values.update(parse_config_text(text))
    for key, val in (overrides or {}).items():
        if key not in _FIELD_TYPES:
            raise ConfigError(f"unknown key '{key}'")
        values[key] = _parse_value(key, str(val)) if not isinstance(val, (int, float)) else val
    return ExperimentConfig(**values).validate()


def default_config_text():
    cfg = ExperimentConfig()
    lines = [f"{f.name} = {getattr(cfg, f.name)}" for f in fields(ExperimentConfig)]
    return "\n".join(lines) + "\n"
