"""Verification harness: configured runs, parameter sweeps, power-law fits.

A run evolves the nonlinear system from generated data, evaluates the weighted
functionals at the sample times, pairs every sample with the exact linear
solution from the same data, and records the error functionals at order k-1.
Sweeps repeat runs over epsilon or nu lists and fit the measured scaling
against the theory's predicted powers:

    interaction  - error functional vs epsilon          (predicted >= 1)
    ball         - ball supremum after support exit     (predicted >= 1/2)
    nu           - squared (k-1)-norm of the nu-difference vs nu (predicted 1)
    uniformity   - boundedness of the energy ratio across epsilon

Records are reproducible given the config hash and seed; sweep points are
independent and may run in separate processes.
"""

from __future__ import annotations

import hashlib
import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace

import numpy as np

try:
    import tomllib as _toml
except ModuleNotFoundError:  # Python 3.10
    import tomli as _toml

from .dynamics import TimeStepperConfig, evolve, linear_evolve
from .errors import BlowUpError, ConfigurationError, DomainError
from .functionals import (
    FunctionalReport,
    WeightSpec,
    compute_report,
    moving_weight,
    pair_sobolev_norm_sq,
)
from .spectral import GridSpec, SpectralVectorField, transform_to_physical
from .state import ElsasserState, InitialDataConfig, from_elsasser, make_initial_data

__all__ = [
    "FORMAT_VERSION",
    "RunConfig",
    "SweepRecord",
    "ScalingFit",
    "default_config",
    "uniformity_config",
    "large_data_config",
    "nu_limit_config",
    "named_config",
    "load_config",
    "run_single",
    "sweep_interaction_vanishing",
    "sweep_ball_decay",
    "sweep_nu_limit",
    "sweep_uniformity",
    "fit_power_law",
    "report_original_variables",
    "trapezoid_running",
]

FORMAT_VERSION = 1


# --------------------------------------------------------------------------
# configuration
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class RunConfig:
    """Full experiment configuration (grid, data, weights, sweep lists)."""

    dims: tuple = (128, 128)
    half_length: float = 16.0
    dealias_fraction: float = 2.0 / 3.0
    init: InitialDataConfig = field(default_factory=InitialDataConfig)
    s: float = 0.6
    k: int = 4
    epsilon_list: tuple = (0.4, 0.2, 0.1, 0.05)
    nu_list: tuple = (0.0,)
    t_end_star: float = 10.0
    dt: float = 0.01
    sample_count: int = 51
    mode: str = "standard"
    ball_radius: float = 4.0
    ball_time: float = 9.0
    nu_time: float = 5.0
    out_dir: str = "runs"
    threads: int = 1

    def __post_init__(self):
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))
        object.__setattr__(self, "epsilon_list", tuple(float(e) for e in self.epsilon_list))
        object.__setattr__(self, "nu_list", tuple(float(n) for n in self.nu_list))
        if self.mode not in ("standard", "large_data"):
            raise ConfigurationError(f"unknown mode {self.mode!r}")
        if self.k < 4:
            raise ConfigurationError("k must be >= 4 for the main functionals")
        if self.sample_count < 2:
            raise ConfigurationError("sample_count must be >= 2")
        if self.dt <= 0 or self.t_end_star <= 0:
            raise ConfigurationError("dt and t_end_star must be positive")
        for eps in self.epsilon_list:
            if eps < 0:
                raise ConfigurationError("epsilon values must be nonnegative")
            for nu in self.nu_list:
                if nu < 0:
                    raise ConfigurationError("nu values must be nonnegative")
                if eps * nu > 0.5 * (1 + 1e-12):
                    raise ConfigurationError(
                        f"epsilon*nu = {eps * nu:.4g} violates the hypothesis "
                        f"epsilon*nu <= 1/2")
        if self.t_end_star + self.init.support_radius >= self.half_length:
            raise ConfigurationError(
                "no-wrap window violated: t_end_star + support_radius must be "
                "< half_length")

    def grid(self) -> GridSpec:
        return GridSpec(self.dims, self.half_length, self.dealias_fraction)

    def weight_spec(self) -> WeightSpec:
        return WeightSpec.create(self.s, self.k)

    def sample_times(self) -> np.ndarray:
        return np.linspace(0.0, self.t_end_star, self.sample_count)

    def to_json_dict(self) -> dict:
        d = asdict(self)
        d["format_version"] = FORMAT_VERSION
        return d

    def config_hash(self) -> str:
        blob = json.dumps(self.to_json_dict(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:16]


_GRID_KEYS = {"dims", "half_length", "dealias_fraction"}
_INIT_KEYS = {"amplitude", "support_radius", "center_plus", "center_minus",
              "gamma", "seed", "profile", "core_width", "n_scales",
              "scale_decay", "window_start"}
_WEIGHT_KEYS = {"s", "k"}
_RUN_KEYS = {"epsilon_list", "nu_list", "t_end_star", "dt", "sample_count",
             "mode", "ball_radius", "ball_time", "nu_time", "out_dir", "threads"}


def load_config(path) -> RunConfig:
    """Parse a TOML run configuration.  Unknown keys are errors."""
    with open(path, "rb") as fh:
        raw = _toml.load(fh)
    known_tables = {"grid", "init", "weight", "run"}
    unknown_tables = set(raw) - known_tables
    if unknown_tables:
        raise ConfigurationError(f"unknown config tables: {sorted(unknown_tables)}")
    kwargs = {}
    for table, keys in (("grid", _GRID_KEYS), ("init", _INIT_KEYS),
                        ("weight", _WEIGHT_KEYS), ("run", _RUN_KEYS)):
        section = raw.get(table, {})
        unknown = set(section) - keys
        if unknown:
            raise ConfigurationError(
                f"unknown keys in [{table}]: {sorted(unknown)}")
        kwargs.update(section)
    init_kwargs = {k: kwargs.pop(k) for k in list(kwargs) if k in _INIT_KEYS}
    if "center_plus" in init_kwargs:
        init_kwargs["center_plus"] = tuple(init_kwargs["center_plus"])
    if "center_minus" in init_kwargs:
        init_kwargs["center_minus"] = tuple(init_kwargs["center_minus"])
    if "dims" in kwargs:
        kwargs["dims"] = tuple(kwargs["dims"])
    init = InitialDataConfig(**init_kwargs)
    return RunConfig(init=init, **kwargs)


def default_config(**overrides) -> RunConfig:
    """Shipped defaults: the interaction/ball sweep at 128^2."""
    return replace(RunConfig(), **overrides) if overrides else RunConfig()


def uniformity_config(**overrides) -> RunConfig:
    cfg = RunConfig(epsilon_list=(1.0, 0.5, 0.25, 0.1), nu_list=(0.0,))
    return replace(cfg, **overrides) if overrides else cfg


def large_data_config(**overrides) -> RunConfig:
    cfg = RunConfig(epsilon_list=(0.2, 0.1, 0.05), nu_list=(0.0,),
                    mode="large_data",
                    init=InitialDataConfig(gamma=1.0))
    return replace(cfg, **overrides) if overrides else cfg


def nu_limit_config(**overrides) -> RunConfig:
    """The non-dissipative-limit sweep: broadband data on a 256^2 box.

    The (k-1)-norm of the nu-difference weighs small scales heavily, so this
    sweep uses a finer grid and a multi-scale stream profile whose diffusion
    knees span the nu range; see the README scaling notes.
    """
    init = InitialDataConfig(
        amplitude=0.5, support_radius=7.9,
        center_plus=(0.8, 0.0), center_minus=(-0.8, 0.0),
        profile="gaussian", core_width=1.3, n_scales=5, scale_decay=4.5,
        window_start=2.0 / 7.1,
    )
    cfg = RunConfig(dims=(256, 256), half_length=32.0, init=init,
                    epsilon_list=(0.2,), nu_list=(0.4, 0.2, 0.1, 0.05),
                    t_end_star=5.0, dt=0.0125, sample_count=11,
                    nu_time=5.0)
    return replace(cfg, **overrides) if overrides else cfg


_NAMED = {
    "default": default_config,
    "interaction": default_config,
    "ball": default_config,
    "uniformity": uniformity_config,
    "large_data": large_data_config,
    "nu": nu_limit_config,
}


def named_config(name: str, **overrides) -> RunConfig:
    try:
        factory = _NAMED[name]
    except KeyError:
        raise ConfigurationError(f"unknown named config {name!r}") from None
    return factory(**overrides)


# --------------------------------------------------------------------------
# records and fits
# --------------------------------------------------------------------------

@dataclass
class ScalingFit:
    """Least-squares power law y = exp(intercept) * x^exponent on logs."""

    exponent: float
    log_intercept: float
    r_squared: float
    n_points: int
    xs: tuple = ()
    ys: tuple = ()

    def to_json_dict(self) -> dict:
        return {"exponent": self.exponent, "log_intercept": self.log_intercept,
                "r_squared": self.r_squared, "n_points": self.n_points,
                "xs": list(self.xs), "ys": list(self.ys)}


def fit_power_law(xs, ys) -> ScalingFit:
    """OLS fit of log y against log x.  Requires >= 3 strictly positive points."""
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if xs.shape != ys.shape or xs.ndim != 1:
        raise DomainError("fit_power_law expects matching 1D sequences")
    if len(xs) < 3:
        raise DomainError("fit_power_law requires at least 3 points")
    if np.any(xs <= 0) or np.any(ys <= 0):
        raise DomainError("fit_power_law requires strictly positive data")
    lx, ly = np.log(xs), np.log(ys)
    design = np.vstack([lx, np.ones_like(lx)]).T
    coef, *_ = np.linalg.lstsq(design, ly, rcond=None)
    resid = ly - design @ coef
    ss_res = float(np.sum(resid ** 2))
    ss_tot = float(np.sum((ly - ly.mean()) ** 2))
    r2 = 1.0 if ss_tot == 0 else 1.0 - ss_res / ss_tot
    return ScalingFit(exponent=float(coef[0]), log_intercept=float(coef[1]),
                      r_squared=r2, n_points=len(xs),
                      xs=tuple(xs.tolist()), ys=tuple(ys.tolist()))


def trapezoid_running(values, times) -> np.ndarray:
    """Running trapezoid integral of a sampled series."""
    values = np.asarray(values, dtype=float)
    times = np.asarray(times, dtype=float)
    out = np.zeros_like(values)
    if len(values) > 1:
        increments = 0.5 * (values[1:] + values[:-1]) * np.diff(times)
        out[1:] = np.cumsum(increments)
    return out


@dataclass
class SweepRecord:
    """Everything measured in one (epsilon, nu) run."""

    epsilon: float
    nu: float
    amplitude: float
    initial_energy: float
    config_hash: str
    data_hash: str
    reports: list
    error_reports: list
    ball_linear_raw: list      # per sample: ball sup of the raw-data linear solution
    ball_linear_projected: list
    original_rows: list        # per sample original-variable diagnostics
    wall_clock_s: float = 0.0
    diverged: bool = False
    blowup_t_star: float | None = None
    format_version: int = FORMAT_VERSION

    def sample_times(self) -> np.ndarray:
        return np.array([r.t_star for r in self.reports])

    def error_metric_series(self) -> np.ndarray:
        """E^{NL}_{k-1}(t) + running trapezoid of (W^{NL}_{k-1} + eps nu D^{NL}_{k-1})."""
        ts = np.array([r.t_star for r in self.error_reports])
        e = np.array([r.energy for r in self.error_reports])
        w = np.array([r.weighted for r in self.error_reports])
        d = np.array([r.dissipation for r in self.error_reports])
        return e + trapezoid_running(w + self.epsilon * self.nu * d, ts)

    def energy_ratio_series(self) -> np.ndarray:
        """[E_k(t) + trapezoid integral of (W_k + eps nu D_k)] / E_k(0)."""
        ts = self.sample_times()
        e = np.array([r.energy for r in self.reports])
        w = np.array([r.weighted for r in self.reports])
        d = np.array([r.dissipation for r in self.reports])
        denom = self.initial_energy if self.initial_energy > 0 else 1.0
        return (e + trapezoid_running(w + self.epsilon * self.nu * d, ts)) / denom

    def ball_sup_at(self, t_star: float) -> float:
        idx = int(np.argmin(np.abs(self.sample_times() - t_star)))
        return self.reports[idx].ball_sup

    def ball_linear_raw_at(self, t_star: float) -> float:
        idx = int(np.argmin(np.abs(self.sample_times() - t_star)))
        return self.ball_linear_raw[idx]

    def to_json_dict(self) -> dict:
        return {
            "format_version": self.format_version,
            "epsilon": self.epsilon,
            "nu": self.nu,
            "amplitude": self.amplitude,
            "initial_energy": self.initial_energy,
            "config_hash": self.config_hash,
            "data_hash": self.data_hash,
            "wall_clock_s": self.wall_clock_s,
            "diverged": self.diverged,
            "blowup_t_star": self.blowup_t_star,
            "reports": [r.to_json_dict() for r in self.reports],
            "error_reports": [r.to_json_dict() for r in self.error_reports],
            "ball_linear_raw": list(self.ball_linear_raw),
            "ball_linear_projected": list(self.ball_linear_projected),
            "original_rows": self.original_rows,
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "SweepRecord":
        return cls(
            epsilon=d["epsilon"], nu=d["nu"], amplitude=d["amplitude"],
            initial_energy=d["initial_energy"], config_hash=d["config_hash"],
            data_hash=d["data_hash"],
            reports=[FunctionalReport.from_json_dict(r) for r in d["reports"]],
            error_reports=[FunctionalReport.from_json_dict(r)
                           for r in d["error_reports"]],
            ball_linear_raw=list(d["ball_linear_raw"]),
            ball_linear_projected=list(d["ball_linear_projected"]),
            original_rows=d["original_rows"],
            wall_clock_s=d["wall_clock_s"], diverged=d["diverged"],
            blowup_t_star=d["blowup_t_star"],
            format_version=d.get("format_version", FORMAT_VERSION),
        )

    def save(self, out_dir):
        os.makedirs(out_dir, exist_ok=True)
        stem = f"run_eps{self.epsilon:g}_nu{self.nu:g}"
        with open(os.path.join(out_dir, stem + ".json"), "w") as fh:
            json.dump(self.to_json_dict(), fh, indent=1)
        if self.reports:
            header = self.reports[0].csv_header()
            with open(os.path.join(out_dir, stem + ".csv"), "w") as fh:
                fh.write("# config_hash=%s data_hash=%s format_version=%d\n"
                         % (self.config_hash, self.data_hash, self.format_version))
                fh.write(",".join(header) + "\n")
                for rep in self.reports:
                    fh.write(",".join(_fmt(v) for v in rep.to_csv_row()) + "\n")


def _fmt(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _hash_fields(lp: SpectralVectorField, lm: SpectralVectorField) -> str:
    h = hashlib.sha256()
    h.update(np.ascontiguousarray(lp.coeffs).tobytes())
    h.update(np.ascontiguousarray(lm.coeffs).tobytes())
    return h.hexdigest()[:16]


# --------------------------------------------------------------------------
# single run
# --------------------------------------------------------------------------

def _ball_sup_fields(lp, lm, grid, radius) -> float:
    if radius <= 0:
        return 0.0
    mask = np.sqrt(np.sum(grid.mesh ** 2, axis=0)) < radius
    out = 0.0
    for f in (lp, lm):
        phys = transform_to_physical(f)
        mag = np.sqrt(np.sum(phys ** 2, axis=0))
        out = max(out, float(np.max(mag[mask])))
    return out


def _original_row(lp, lm, t_star, epsilon, spec) -> dict:
    """Original-variable diagnostics at one sample: sup |v|, sup |H| and the
    measured constants against the characteristic-shifted inverse weights."""
    grid = lp.grid
    v, h = from_elsasser(lp, lm)
    v_mag = np.sqrt(np.sum(transform_to_physical(v) ** 2, axis=0))
    h_mag = np.sqrt(np.sum(transform_to_physical(h) ** 2, axis=0))
    # t* = t / epsilon already is the shifted weight argument
    inv_w = (moving_weight(grid.mesh, t_star, +1, -spec.s)
             + moving_weight(grid.mesh, t_star, -1, -spec.s))
    return {
        "t": t_star * epsilon,
        "t_star": t_star,
        "sup_v": float(v_mag.max()),
        "sup_h": float(h_mag.max()),
        "const_v": float((v_mag / inv_w).max()),
        "const_h": float((h_mag / inv_w).max()),
    }


def run_single(cfg: RunConfig, epsilon: float, nu: float) -> SweepRecord:
    """One evolution at (epsilon, nu) with full sampling.

    epsilon = 0 is the degenerate harness case: every coupling term of the
    system carries a factor epsilon, so the evolution coincides exactly with
    the linear propagator and is integrated by it.
    """
    t0 = time.perf_counter()
    grid = cfg.grid()
    spec = cfg.weight_spec()
    spec_err = spec.reduced(cfg.k - 1)
    large = cfg.mode == "large_data"
    eps_amp = epsilon if epsilon > 0 else 1.0
    amplitude = cfg.init.effective_amplitude(eps_amp, large_data=large)

    lp0, lm0 = make_initial_data(cfg.init, grid, amplitude=amplitude)
    lp0_raw, lm0_raw = make_initial_data(cfg.init, grid, amplitude=amplitude,
                                         project=False)
    data_hash = _hash_fields(lp0, lm0)
    e0 = compute_report(lp0, lm0, 0.0, spec, nu).energy

    reports: list = []
    error_reports: list = []
    ball_lin_raw: list = []
    ball_lin_proj: list = []
    original_rows: list = []

    def sample(lp, lm, t_star):
        rep = compute_report(lp, lm, t_star, spec, nu,
                             ball_radius=cfg.ball_radius,
                             support_radius=cfg.init.support_radius)
        lp_l, lm_l = linear_evolve(lp0, lm0, t_star, epsilon, nu)
        err_p = lp - lp_l
        err_m = lm - lm_l
        erep = compute_report(err_p, err_m, t_star, spec_err, nu,
                              support_radius=cfg.init.support_radius)
        lp_lr, lm_lr = linear_evolve(lp0_raw, lm0_raw, t_star, epsilon, nu)
        reports.append(rep)
        error_reports.append(erep)
        ball_lin_raw.append(_ball_sup_fields(lp_lr, lm_lr, grid, cfg.ball_radius))
        ball_lin_proj.append(_ball_sup_fields(lp_l, lm_l, grid, cfg.ball_radius))
        original_rows.append(_original_row(lp, lm, t_star, epsilon, spec))

    diverged = False
    blowup_t = None
    times = cfg.sample_times()

    if epsilon == 0.0:
        for ts in times:
            lp, lm = linear_evolve(lp0, lm0, ts, 0.0, nu)
            sample(lp, lm, float(ts))
    else:
        state = ElsasserState(lp0, lm0, 0.0, epsilon, nu)
        stepper = TimeStepperConfig(dt=cfg.dt, t_end=cfg.t_end_star,
                                    sample_times=tuple(times))
        try:
            evolve(state, stepper,
                   sink=lambda st: sample(st.lambda_plus, st.lambda_minus, st.t_star))
        except BlowUpError as exc:
            diverged = True
            blowup_t = exc.t_star

    return SweepRecord(
        epsilon=epsilon, nu=nu, amplitude=amplitude, initial_energy=e0,
        config_hash=cfg.config_hash(), data_hash=data_hash,
        reports=reports, error_reports=error_reports,
        ball_linear_raw=ball_lin_raw, ball_linear_projected=ball_lin_proj,
        original_rows=original_rows,
        wall_clock_s=time.perf_counter() - t0,
        diverged=diverged, blowup_t_star=blowup_t,
    )


def _run_point(args):
    cfg, eps, nu = args
    return run_single(cfg, eps, nu)


def _run_points(cfg: RunConfig, points) -> list:
    """Run sweep points (sequentially or in processes), merged in input order."""
    jobs = [(cfg, eps, nu) for eps, nu in points]
    if cfg.threads > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=cfg.threads) as pool:
            records = list(pool.map(_run_point, jobs))
    else:
        records = [_run_point(j) for j in jobs]
    return records


# --------------------------------------------------------------------------
# sweeps
# --------------------------------------------------------------------------

def sweep_interaction_vanishing(cfg: RunConfig):
    """Fit of the nonlinear-vs-linear error functional against epsilon."""
    eps_values = sorted(cfg.epsilon_list, reverse=True)
    if len(eps_values) < 4:
        raise ConfigurationError("interaction sweep needs at least 4 epsilon values")
    nu = cfg.nu_list[0]
    records = _run_points(cfg, [(e, nu) for e in eps_values])
    for rec in records:
        if rec.diverged:
            raise BlowUpError(rec.blowup_t_star or -1.0,
                              f"run at epsilon={rec.epsilon} diverged; fit aborted")
    ys = [float(np.max(rec.error_metric_series())) for rec in records]
    fit = fit_power_law(eps_values, ys)
    return fit, records


def sweep_ball_decay(cfg: RunConfig):
    """Fit of the ball supremum at the designated post-exit time against epsilon."""
    nu = cfg.nu_list[0]
    if nu != 0.0:
        raise ConfigurationError("ball-decay sweep requires nu = 0")
    if cfg.ball_time <= 2 * cfg.ball_radius:
        raise ConfigurationError(
            "ball_time must exceed twice the ball radius (support exit time)")
    eps_values = sorted(cfg.epsilon_list, reverse=True)
    records = _run_points(cfg, [(e, nu) for e in eps_values])
    for rec in records:
        if rec.diverged:
            raise BlowUpError(rec.blowup_t_star or -1.0,
                              f"run at epsilon={rec.epsilon} diverged; fit aborted")
    ys = [rec.ball_sup_at(cfg.ball_time) for rec in records]
    fit = fit_power_law(eps_values, ys)
    linear_floor = max(rec.ball_linear_raw_at(cfg.ball_time) for rec in records)
    return fit, records, linear_floor


def sweep_nu_limit(cfg: RunConfig):
    """Fit of ||L_nu - L_0||_{k-1}^2 at the designated time against nu.

    All runs start from identical data; the nu = 0 base run is paired with
    every nu > 0 run.  Returns (fit, difference table, ratio series) where the
    table rows are (nu, t_star, sq_norm) and the ratio series holds
    sq_norm / t_star per sample for near-linearity-in-t inspection.
    """
    epsilon = cfg.epsilon_list[0]
    if epsilon <= 0:
        raise ConfigurationError("nu sweep requires a positive epsilon")
    nu_values = [n for n in sorted(cfg.nu_list, reverse=True)]
    grid = cfg.grid()
    amplitude = cfg.init.effective_amplitude(epsilon,
                                             large_data=cfg.mode == "large_data")
    lp0, lm0 = make_initial_data(cfg.init, grid, amplitude=amplitude)
    data_hash = _hash_fields(lp0, lm0)
    times = np.linspace(0.0, cfg.t_end_star, cfg.sample_count)

    def sampled_evolution(nu):
        cache = {}

        def sink(st):
            cache[round(st.t_star, 12)] = (st.lambda_plus.copy(),
                                           st.lambda_minus.copy())

        state = ElsasserState(lp0.copy(), lm0.copy(), 0.0, epsilon, nu)
        stepper = TimeStepperConfig(dt=cfg.dt, t_end=cfg.t_end_star,
                                    sample_times=tuple(times))
        evolve(state, stepper, sink=sink)
        return cache

    base = sampled_evolution(0.0)
    rows = []
    ratio_series = {}
    order = cfg.k - 1
    for nu in nu_values:
        if nu == 0.0:
            continue  # identically zero difference; excluded from the log fit
        cache = sampled_evolution(nu)
        series = []
        for t in times:
            key = round(float(t), 12)
            dp = cache[key][0] - base[key][0]
            dm = cache[key][1] - base[key][1]
            sq = pair_sobolev_norm_sq(dp, dm, order)
            series.append((float(t), sq))
        rows.extend((nu, t, sq) for t, sq in series)
        ratio_series[nu] = [(t, sq / t if t > 0 else 0.0) for t, sq in series]

    fit_nus = [nu for nu in nu_values if nu > 0]
    ys = []
    for nu in fit_nus:
        sq_at = [sq for n, t, sq in rows
                 if n == nu and abs(t - cfg.nu_time) < 1e-9]
        ys.append(sq_at[0])
    fit = fit_power_law(fit_nus, ys)
    return fit, rows, ratio_series, data_hash


def sweep_uniformity(cfg: RunConfig):
    """Measured boundedness of [E_k + int(W_k + eps nu D_k)] / E_k^0 across epsilon."""
    nu = cfg.nu_list[0]
    records = _run_points(cfg, [(e, nu) for e in cfg.epsilon_list])
    ratios = {}
    for rec in records:
        if not rec.diverged:
            ratios[rec.epsilon] = float(np.max(rec.energy_ratio_series()))
    return ratios, records


def report_original_variables(record: SweepRecord, epsilon: float):
    """Original-variable (v, H) table in original time t = epsilon * t*."""
    rows = []
    for row in record.original_rows:
        out = dict(row)
        out["t"] = epsilon * row["t_star"]
        rows.append(out)
    return rows
