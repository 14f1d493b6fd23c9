"""Elsasser state container, variable conversions, and initial data generation.

The solver state is the pair of counter-propagating fields (lambda_plus,
lambda_minus) = (v + H, v - H) at a fast time t* = t / epsilon, together with
the Alfven number epsilon and the dissipation coefficient nu.

Initial data are divergence-free fields with compactly supported physical
samples, built as the perpendicular gradient (2D) or curl of a vector
potential (3D) of a radial stream profile: a Gaussian core (optionally a
multi-scale superposition) cut off by a C-infinity window that vanishes
identically outside the support ball.  The classic exp(-1/(1-u^2)) bump is
available as an alternative profile, but at desk resolutions its spectral
tail is orders of magnitude worse; see the profile notes in the README.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, DomainError, UsageError
from .spectral import (
    GridSpec,
    SpectralVectorField,
    dealias,
    divergence_max,
    field_from_physical,
    leray_project,
)

__all__ = [
    "PhysicalConfig",
    "InitialDataConfig",
    "ElsasserState",
    "to_elsasser",
    "from_elsasser",
    "rescale_time",
    "original_time",
    "make_initial_data",
    "initial_energy",
]

EPSILON_NU_MAX = 0.5


@dataclass(frozen=True)
class PhysicalConfig:
    """Dimensional front-end: density, permeability, background field strength.

    The Alfven number is epsilon = sqrt(4 pi rho / (lambda m^2)); the
    background field is m * e1 scaled by sqrt(lambda / 4 pi rho).  The model
    requires the kinematic viscosity and resistivity to coincide: mu_tilde = nu.
    """

    rho: float
    lambda_perm: float
    m: float
    mu_tilde: float = 0.0

    def __post_init__(self):
        if self.rho <= 0 or self.lambda_perm <= 0 or self.m <= 0:
            raise ConfigurationError("rho, lambda_perm and m must be positive")
        if self.mu_tilde < 0:
            raise ConfigurationError("mu_tilde must be nonnegative")

    @property
    def epsilon(self) -> float:
        return math.sqrt(4.0 * math.pi * self.rho / (self.lambda_perm * self.m ** 2))

    @property
    def nu(self) -> float:
        # mu_tilde = nu is enforced by construction: the single dissipation knob.
        return self.mu_tilde

    @property
    def background_field(self) -> float:
        """Magnitude of the impressed field m * e1 in the H normalization."""
        return math.sqrt(self.lambda_perm / (4.0 * math.pi * self.rho)) * self.m


@dataclass(frozen=True)
class InitialDataConfig:
    """Parameters of the generated divergence-free compactly supported data.

    amplitude scales the stream profile; support_radius R bounds the support
    ball B_R(0) of the physical samples; centers shift each field's profile
    (|center| + profile radius <= R is enforced).  gamma configures the
    large-data mode A_eff = amplitude * epsilon^(-gamma/2).

    core_width is the Gaussian core scale sigma; n_scales > 1 superposes
    log-spaced cores sigma_j = sigma * 2^(-j/2) with amplitudes
    (sigma_j/sigma)^scale_decay, producing broadband data.  window_start is
    the fraction of the profile radius where the cutoff window begins.
    """

    amplitude: float = 1.0
    support_radius: float = 3.8
    center_plus: tuple[float, ...] = (0.8, 0.0)
    center_minus: tuple[float, ...] = (-0.8, 0.0)
    gamma: float = 1.0
    seed: int = 0
    profile: str = "gaussian"
    core_width: float = 0.55
    n_scales: int = 1
    scale_decay: float = 4.5
    window_start: float = 0.55

    def __post_init__(self):
        if self.amplitude < 0:
            raise ConfigurationError("amplitude must be nonnegative")
        if self.support_radius <= 0:
            raise ConfigurationError("support_radius must be positive")
        if self.gamma > 2:
            raise ConfigurationError("gamma must satisfy gamma <= 2")
        if self.profile not in ("gaussian", "bump"):
            raise ConfigurationError(f"unknown profile {self.profile!r}")
        if not 0 < self.window_start < 1:
            raise ConfigurationError("window_start must lie in (0, 1)")
        if self.n_scales < 1:
            raise ConfigurationError("n_scales must be >= 1")

    def effective_amplitude(self, epsilon: float, large_data: bool = False) -> float:
        if large_data:
            return self.amplitude * epsilon ** (-self.gamma / 2.0)
        return self.amplitude


@dataclass
class ElsasserState:
    """The solver state: (lambda_plus, lambda_minus) at fast time t_star."""

    lambda_plus: SpectralVectorField
    lambda_minus: SpectralVectorField
    t_star: float
    epsilon: float
    nu: float

    def __post_init__(self):
        if self.lambda_plus.grid != self.lambda_minus.grid:
            raise UsageError("state components live on different grids")
        # epsilon = 0 is the degenerate harness case (the system decouples
        # into the exact linear problem); negative values are rejected.
        if self.epsilon < 0:
            raise DomainError("epsilon must be nonnegative")
        if self.nu < 0:
            raise DomainError("nu must be nonnegative")
        if self.epsilon * self.nu > EPSILON_NU_MAX * (1 + 1e-12):
            raise ConfigurationError(
                f"epsilon*nu = {self.epsilon * self.nu:.4g} violates the "
                f"hypothesis epsilon*nu <= 1/2")
        if self.t_star < 0:
            raise DomainError("t_star must be nonnegative")

    @property
    def grid(self) -> GridSpec:
        return self.lambda_plus.grid

    def copy(self) -> "ElsasserState":
        return ElsasserState(self.lambda_plus.copy(), self.lambda_minus.copy(),
                             self.t_star, self.epsilon, self.nu)

    def max_divergence(self) -> float:
        return max(divergence_max(self.lambda_plus), divergence_max(self.lambda_minus))


def to_elsasser(v: SpectralVectorField, h: SpectralVectorField):
    """(v, H) -> (v + H, v - H)."""
    if v.grid != h.grid:
        raise UsageError("v and h live on different grids")
    return v + h, v - h


def from_elsasser(lp: SpectralVectorField, lm: SpectralVectorField):
    """(lambda_plus, lambda_minus) -> ((lp + lm)/2, (lp - lm)/2) = (v, H)."""
    if lp.grid != lm.grid:
        raise UsageError("fields live on different grids")
    return 0.5 * (lp + lm), 0.5 * (lp - lm)


def rescale_time(t_original: float, epsilon: float) -> float:
    """Fast time t* = t / epsilon."""
    if epsilon <= 0:
        raise DomainError("epsilon must be positive")
    return t_original / epsilon


def original_time(t_star: float, epsilon: float) -> float:
    """Inverse of rescale_time: t = epsilon * t*."""
    if epsilon <= 0:
        raise DomainError("epsilon must be positive")
    return t_star * epsilon


def _smooth_step(s: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """C-infinity monotone step: 0 for s <= 0, 1 for s >= 1.  Returns (value, derivative)."""
    s = np.clip(s, 0.0, 1.0)
    val = np.zeros_like(s)
    der = np.zeros_like(s)
    mid = (s > 0.0) & (s < 1.0)
    sm = s[mid]
    a = np.exp(-1.0 / sm)
    b = np.exp(-1.0 / (1.0 - sm))
    val[mid] = a / (a + b)
    da = a / sm ** 2
    db = -b / (1.0 - sm) ** 2
    der[mid] = (da * (a + b) - a * (da + db)) / (a + b) ** 2
    val[s >= 1.0] = 1.0
    return val, der


def _radial_profile(rho: np.ndarray, cfg: InitialDataConfig, amplitude: float):
    """Stream profile psi(rho) and d psi / d rho, vanishing for rho >= radius."""
    radius = cfg.support_radius - max(
        np.hypot(*cfg.center_plus) if len(cfg.center_plus) == 2 else np.linalg.norm(cfg.center_plus),
        np.hypot(*cfg.center_minus) if len(cfg.center_minus) == 2 else np.linalg.norm(cfg.center_minus),
    )
    if radius <= 0:
        raise ConfigurationError("field centers leave no room inside the support ball")

    if cfg.profile == "bump":
        u2 = (rho / radius) ** 2
        psi = np.zeros_like(rho)
        dpsi = np.zeros_like(rho)
        inside = u2 < 1.0
        w = 1.0 - u2[inside]
        core = np.exp(-1.0 / w)
        psi[inside] = amplitude * core
        # d/drho exp(-1/(1-rho^2/r^2)) = core * (-2 rho / r^2) / w^2
        dpsi[inside] = amplitude * core * (-2.0 * rho[inside] / radius ** 2) / w ** 2
        return psi, dpsi

    # Gaussian core(s) with a C-infinity cutoff window.
    u = rho / radius
    s = (1.0 - u) / (1.0 - cfg.window_start)
    w, dw_ds = _smooth_step(s)
    dw = dw_ds * (-1.0 / ((1.0 - cfg.window_start) * radius))
    core = np.zeros_like(rho)
    dcore = np.zeros_like(rho)
    for j in range(cfg.n_scales):
        sig = cfg.core_width * 2.0 ** (-j / 2.0)
        amp = amplitude * (sig / cfg.core_width) ** cfg.scale_decay
        g = amp * np.exp(-rho ** 2 / (2.0 * sig ** 2))
        core += g
        dcore += g * (-rho / sig ** 2)
    return core * w, dcore * w + core * dw


def _sample_stream_fields(cfg: InitialDataConfig, grid: GridSpec, amplitude: float):
    """Physical samples of the two divergence-free fields, exactly supported."""
    rng = np.random.default_rng(cfg.seed)
    out = []
    for center in (cfg.center_plus, cfg.center_minus):
        center = tuple(center)
        if len(center) != grid.ndim:
            raise ConfigurationError(
                f"center {center} has wrong dimension for {grid.ndim}D grid")
        rel = grid.mesh - np.asarray(center).reshape((grid.ndim,) + (1,) * grid.ndim)
        rho = np.sqrt(np.sum(rel ** 2, axis=0))
        psi, dpsi = _radial_profile(rho, cfg, amplitude)
        with np.errstate(invalid="ignore", divide="ignore"):
            unit = np.where(rho > 0, rel / np.where(rho > 0, rho, 1.0), 0.0)
        grad_psi = dpsi * unit  # shape (ndim, *dims)
        if grid.ndim == 2:
            # perpendicular gradient (-d2 psi, d1 psi)
            samples = np.stack([-grad_psi[1], grad_psi[0]])
        else:
            # curl of the potential a * psi for a random unit vector a:
            # curl(a psi) = grad psi x a
            a = rng.normal(size=3)
            a /= np.linalg.norm(a)
            samples = np.cross(grad_psi, a.reshape(3, 1, 1, 1), axis=0)
        out.append(samples)
    return out[0], out[1]


def make_initial_data(cfg: InitialDataConfig, grid: GridSpec, *,
                      amplitude: float | None = None,
                      project: bool = True):
    """Generate the divergence-free compactly supported pair (lambda_plus0, lambda_minus0).

    The analytic fields are sampled on the grid (samples vanish identically
    outside B_R(0)), then transformed; with project=True (the solver path)
    they are made mean-free, Leray-projected to remove the band-limiting
    divergence residue, and restricted to the dealias ball.  project=False
    returns the raw sampled fields, which keep exact compact support but are
    only approximately divergence-free in the spectral sense.
    """
    if cfg.support_radius >= grid.half_length / 4.0:
        raise ConfigurationError(
            f"support_radius {cfg.support_radius} too large for box "
            f"half-length {grid.half_length} (need R < L/4)")
    amp = cfg.amplitude if amplitude is None else amplitude
    sp, sm = _sample_stream_fields(cfg, grid, amp)
    fields = []
    for samples in (sp, sm):
        f = field_from_physical(grid, samples)
        if project:
            idx = (slice(None),) + (0,) * grid.ndim
            f.coeffs[idx] = 0.0
            f = dealias(leray_project(f))
        fields.append(f)
    return fields[0], fields[1]


def initial_energy(lp: SpectralVectorField, lm: SpectralVectorField,
                   spec, nu: float) -> float:
    """Weighted initial energy of the data pair (the t=0 energy functional)."""
    from .functionals import compute_report  # deferred: functionals imports this module

    report = compute_report(lp, lm, 0.0, spec, nu)
    return report.energy
