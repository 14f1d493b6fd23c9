"""Time evolution of the rescaled Elsasser system and its linear companion.

In fast time the system reads

    d/dt Lp - d1 Lp + eps (Lm . grad) Lp + grad p = eps nu Lap Lp
    d/dt Lm + d1 Lm + eps (Lp . grad) Lm + grad p = eps nu Lap Lm
    div Lp = div Lm = 0

with the single pressure

    p = eps (-Lap)^-1 sum_ij d_i d_j (Lm_i Lp_j)

shared by both equations.  The nonlinear solver is classical RK4 with a
spectral right-hand side, dealiased products, and a Leray re-projection after
each full step.  The pressureless linear problem has the exact Fourier
solution  coeff(k) -> exp(+-i k1 t - eps nu |k|^2 t) coeff(k), which for
nu = 0 is the translation of the initial data by -+ t along x1.
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass

import numpy as np
from scipy import fft as _fft

from .errors import BlowUpError, ConfigurationError, UsageError
from .spectral import (
    SpectralVectorField,
    advect,
    laplacian,
    leray_project,
    partial_derivative,
    scalar_gradient,
    transform_to_physical,
)
from .state import ElsasserState

__all__ = [
    "TendencyReport",
    "TimeStepperConfig",
    "pressure_solve",
    "nonlinear_rhs",
    "step_rk4",
    "evolve",
    "linear_evolve",
    "error_field",
    "nu_difference",
    "cfl_limits",
    "save_checkpoint",
    "load_checkpoint",
]

BLOWUP_COEFF_LIMIT = 1e12
CHECKPOINT_MAGIC = b"ALFVLAB1"
CHECKPOINT_FORMAT_VERSION = 1


@dataclass
class TendencyReport:
    """Right-hand sides of both equations plus the shared pressure field."""

    rhs_plus: SpectralVectorField
    rhs_minus: SpectralVectorField
    pressure: np.ndarray
    cfl_number: float


@dataclass(frozen=True)
class TimeStepperConfig:
    dt: float
    t_end: float
    sample_times: tuple = ()
    scheme: str = "RK4"

    def __post_init__(self):
        if self.dt <= 0:
            raise ConfigurationError("dt must be positive")
        if self.t_end < 0:
            raise ConfigurationError("t_end must be nonnegative")
        if self.scheme != "RK4":
            raise ConfigurationError(f"unsupported scheme {self.scheme!r}")
        ts = tuple(float(t) for t in self.sample_times)
        if any(t2 <= t1 for t1, t2 in zip(ts, ts[1:])):
            raise ConfigurationError("sample times must be strictly increasing")
        object.__setattr__(self, "sample_times", ts)


def _max_field_magnitude(lp, lm) -> float:
    out = 0.0
    for f in (lp, lm):
        phys = transform_to_physical(f)
        out = max(out, float(np.max(np.sqrt(np.sum(phys ** 2, axis=0)))))
    return out


def cfl_limits(state: ElsasserState) -> tuple[float, float]:
    """(transport dt limit, diffusive dt limit) for the explicit scheme."""
    g = state.grid
    vmax = _max_field_magnitude(state.lambda_plus, state.lambda_minus)
    dt_transport = 0.5 * g.dx / (1.0 + state.epsilon * vmax)
    if state.nu > 0:
        dt_diffusion = 0.25 * g.dx ** 2 / (state.epsilon * state.nu)
    else:
        dt_diffusion = np.inf
    return dt_transport, dt_diffusion


def _pressure_from_phys(g, lp_phys, lm_phys, epsilon: float) -> np.ndarray:
    acc = np.zeros(g.dims, dtype=np.complex128)
    for i in range(g.ndim):
        for j in range(g.ndim):
            prod_hat = _fft.fftn(lm_phys[i] * lp_phys[j])
            acc += g.kmesh[i] * g.kmesh[j] * prod_hat
    p_hat = -epsilon * acc * g.inv_k_squared
    p_hat *= g.dealias_mask
    p_hat[(0,) * g.ndim] = 0.0
    return p_hat


def pressure_solve(lp: SpectralVectorField, lm: SpectralVectorField,
                   epsilon: float) -> np.ndarray:
    """Pressure coefficients from the explicit inverse-Laplacian formula.

    phat(k) = -eps sum_ij k_i k_j FFT(Lm_i Lp_j)(k) / |k|^2   (k != 0),

    with the quadratic products formed pointwise and dealiased.
    """
    return _pressure_from_phys(lp.grid, transform_to_physical(lp),
                               transform_to_physical(lm), epsilon)


def _rhs_core(lp, lm, t_star, eps, nu):
    """Fused tendency evaluation sharing the physical-space transforms.

    Returns (rhs_plus, rhs_minus, p_hat); raises on blow-up.
    """
    g = lp.grid
    axes = range(1, g.ndim + 1)
    lp_phys = _fft.ifftn(lp.coeffs, axes=axes).real
    lm_phys = _fft.ifftn(lm.coeffs, axes=axes).real

    # all first derivatives: d_i f_j in physical space
    dlp = [_fft.ifftn(1j * g.kmesh[i] * lp.coeffs, axes=axes).real
           for i in range(g.ndim)]
    dlm = [_fft.ifftn(1j * g.kmesh[i] * lm.coeffs, axes=axes).real
           for i in range(g.ndim)]

    adv_p_phys = np.zeros_like(lp_phys)
    adv_m_phys = np.zeros_like(lm_phys)
    for i in range(g.ndim):
        adv_p_phys += lm_phys[i] * dlp[i]
        adv_m_phys += lp_phys[i] * dlm[i]
    adv_p = _fft.fftn(adv_p_phys, axes=axes) * g.dealias_mask
    adv_m = _fft.fftn(adv_m_phys, axes=axes) * g.dealias_mask
    zero_idx = (slice(None),) + (0,) * g.ndim
    adv_p[zero_idx] = 0.0
    adv_m[zero_idx] = 0.0

    p_hat = _pressure_from_phys(g, lp_phys, lm_phys, eps)
    grad_p = 1j * g.kmesh * p_hat[np.newaxis]

    ik1 = 1j * g.kmesh[0]
    rhs_p = ik1 * lp.coeffs - eps * adv_p - grad_p
    rhs_m = -ik1 * lm.coeffs - eps * adv_m - grad_p
    if nu > 0:
        rhs_p = rhs_p - (eps * nu) * (g.k_squared * lp.coeffs)
        rhs_m = rhs_m - (eps * nu) * (g.k_squared * lm.coeffs)

    max_coeff = max(float(np.max(np.abs(rhs_p))), float(np.max(np.abs(rhs_m))),
                    lp.max_abs_coeff(), lm.max_abs_coeff())
    if not np.isfinite(max_coeff) or max_coeff > BLOWUP_COEFF_LIMIT:
        raise BlowUpError(t_star, f"max coefficient {max_coeff:.3e}")

    return (SpectralVectorField(g, rhs_p, is_dealiased=True),
            SpectralVectorField(g, rhs_m, is_dealiased=True),
            p_hat)


def nonlinear_rhs(state: ElsasserState) -> TendencyReport:
    """Tendency of the full system at the current state.

    rhs_pm = +-d1 L_pm - eps (L_mp . grad) L_pm - grad p + eps nu Lap L_pm,
    with one pressure shared by both signs.  The advection mean is removed
    (its continuum mean vanishes; discretely it is aliasing dust).
    """
    rhs_p, rhs_m, p_hat = _rhs_core(state.lambda_plus, state.lambda_minus,
                                    state.t_star, state.epsilon, state.nu)
    vmax = _max_field_magnitude(state.lambda_plus, state.lambda_minus)
    # Courant rate per unit dt: multiply by dt for the usual CFL number.
    cfl_rate = (1.0 + state.epsilon * vmax) / state.grid.dx
    return TendencyReport(rhs_plus=rhs_p, rhs_minus=rhs_m, pressure=p_hat,
                          cfl_number=cfl_rate)


def _rhs_pair(lp, lm, t_star, eps, nu):
    rhs_p, rhs_m, _ = _rhs_core(lp, lm, t_star, eps, nu)
    return rhs_p, rhs_m


def step_rk4(state: ElsasserState, dt: float) -> ElsasserState:
    """One classical RK4 step, followed by a Leray re-projection."""
    lp, lm = state.lambda_plus, state.lambda_minus
    t, eps, nu = state.t_star, state.epsilon, state.nu

    k1p, k1m = _rhs_pair(lp, lm, t, eps, nu)
    k2p, k2m = _rhs_pair(lp + (0.5 * dt) * k1p, lm + (0.5 * dt) * k1m,
                         t + 0.5 * dt, eps, nu)
    k3p, k3m = _rhs_pair(lp + (0.5 * dt) * k2p, lm + (0.5 * dt) * k2m,
                         t + 0.5 * dt, eps, nu)
    k4p, k4m = _rhs_pair(lp + dt * k3p, lm + dt * k3m, t + dt, eps, nu)

    new_lp = lp + (dt / 6.0) * (k1p + 2.0 * k2p + 2.0 * k3p + k4p)
    new_lm = lm + (dt / 6.0) * (k1m + 2.0 * k2m + 2.0 * k3m + k4m)
    new_lp = leray_project(new_lp)
    new_lm = leray_project(new_lm)
    return ElsasserState(new_lp, new_lm, t + dt, eps, nu)


def _transport_shift(state: ElsasserState, dt: float) -> ElsasserState:
    """Exact transport by +-dt along x1 (Fourier phases), used by the splitting mode."""
    g = state.grid
    k1 = g.kmesh[0]
    lp = SpectralVectorField(g, state.lambda_plus.coeffs * np.exp(1j * k1 * dt),
                             state.lambda_plus.is_dealiased)
    lm = SpectralVectorField(g, state.lambda_minus.coeffs * np.exp(-1j * k1 * dt),
                             state.lambda_minus.is_dealiased)
    return ElsasserState(lp, lm, state.t_star, state.epsilon, state.nu)


def _rhs_no_transport(lp, lm, t_star, eps, nu):
    """Tendency with the stiff +-d1 term removed (for the splitting mode)."""
    g = lp.grid
    p_hat = pressure_solve(lp, lm, eps)
    grad_p = scalar_gradient(g, p_hat)
    zero_idx = (slice(None),) + (0,) * g.ndim
    out = []
    for f, other in ((lp, lm), (lm, lp)):
        adv = advect(other, f).coeffs
        adv[zero_idx] = 0.0
        rhs = -eps * adv - grad_p.coeffs
        if nu > 0:
            rhs = rhs + (eps * nu) * laplacian(f).coeffs
        out.append(SpectralVectorField(g, rhs, is_dealiased=True))
    return out[0], out[1]


def _step_strang(state: ElsasserState, dt: float) -> ElsasserState:
    """Strang splitting: half exact transport, RK4 on the rest, half transport."""
    st = _transport_shift(state, 0.5 * dt)
    lp, lm = st.lambda_plus, st.lambda_minus
    t, eps, nu = st.t_star, st.epsilon, st.nu

    k1p, k1m = _rhs_no_transport(lp, lm, t, eps, nu)
    k2p, k2m = _rhs_no_transport(lp + (0.5 * dt) * k1p, lm + (0.5 * dt) * k1m,
                                 t + 0.5 * dt, eps, nu)
    k3p, k3m = _rhs_no_transport(lp + (0.5 * dt) * k2p, lm + (0.5 * dt) * k2m,
                                 t + 0.5 * dt, eps, nu)
    k4p, k4m = _rhs_no_transport(lp + dt * k3p, lm + dt * k3m, t + dt, eps, nu)
    new_lp = lp + (dt / 6.0) * (k1p + 2.0 * k2p + 2.0 * k3p + k4p)
    new_lm = lm + (dt / 6.0) * (k1m + 2.0 * k2m + 2.0 * k3m + k4m)
    mid = ElsasserState(leray_project(new_lp), leray_project(new_lm),
                        t + dt, eps, nu)
    return _transport_shift(mid, 0.5 * dt)


def evolve(state: ElsasserState, cfg: TimeStepperConfig, sink=None,
           splitting: bool = False) -> ElsasserState:
    """March the state to cfg.t_end, invoking sink(state) at each sample time.

    Sample times are snapped to the nearest step of the fixed-dt grid.  The
    CFL contract (dt <= 0.5 dx / (1 + eps max|L|), and for nu > 0 also
    dt <= 0.25 dx^2 / (eps nu)) is enforced against the initial state.
    """
    dt_tr, dt_diff = cfl_limits(state)
    if cfg.dt > dt_tr * (1 + 1e-9):
        raise ConfigurationError(
            f"dt = {cfg.dt:.4g} violates the transport CFL limit {dt_tr:.4g}")
    if cfg.dt > dt_diff * (1 + 1e-9):
        raise ConfigurationError(
            f"dt = {cfg.dt:.4g} violates the diffusive CFL limit {dt_diff:.4g}")

    n_steps = int(round((cfg.t_end - state.t_star) / cfg.dt))
    if n_steps < 0:
        raise ConfigurationError("t_end precedes the state time")
    sample_steps = {}
    for ts in cfg.sample_times:
        step_idx = int(round((ts - state.t_star) / cfg.dt))
        if 0 <= step_idx <= n_steps:
            sample_steps.setdefault(step_idx, ts)

    stepper = _step_strang if splitting else step_rk4
    current = state
    if 0 in sample_steps and sink is not None:
        sink(current)
    for istep in range(1, n_steps + 1):
        current = stepper(current, cfg.dt)
        if istep in sample_steps and sink is not None:
            sink(current)
    return current


def linear_evolve(lp0: SpectralVectorField, lm0: SpectralVectorField,
                  t_star: float, epsilon: float, nu: float):
    """Exact solution of the pressureless linear problem at fast time t_star.

    coeff(k) -> exp(+-i k1 t - eps nu |k|^2 t) coeff(k); for nu = 0 this is
    the translation L0_pm(x +- e1 t).
    """
    g = lp0.grid
    k1 = g.kmesh[0]
    decay = np.exp(-epsilon * nu * g.k_squared * t_star) if nu > 0 else 1.0
    lp = SpectralVectorField(g, lp0.coeffs * np.exp(1j * k1 * t_star) * decay,
                             lp0.is_dealiased)
    lm = SpectralVectorField(g, lm0.coeffs * np.exp(-1j * k1 * t_star) * decay,
                             lm0.is_dealiased)
    return lp, lm


def error_field(state: ElsasserState, linear_plus: SpectralVectorField,
                linear_minus: SpectralVectorField, linear_t_star: float):
    """Nonlinear-minus-linear fields at a common fast time."""
    if abs(linear_t_star - state.t_star) > 1e-12 * max(1.0, state.t_star):
        raise UsageError(
            f"time mismatch: state at t*={state.t_star}, linear at t*={linear_t_star}")
    return state.lambda_plus - linear_plus, state.lambda_minus - linear_minus


def nu_difference(state_nu: ElsasserState, state_zero: ElsasserState,
                  data_hash_nu: str | None = None,
                  data_hash_zero: str | None = None):
    """Difference of two evolutions with and without dissipation."""
    if abs(state_nu.t_star - state_zero.t_star) > 1e-12 * max(1.0, state_nu.t_star):
        raise UsageError("nu-difference requires states at the same fast time")
    if abs(state_nu.epsilon - state_zero.epsilon) > 0:
        raise UsageError("nu-difference requires the same epsilon")
    if state_nu.grid != state_zero.grid:
        raise UsageError("nu-difference requires the same grid")
    if data_hash_nu is not None and data_hash_zero is not None \
            and data_hash_nu != data_hash_zero:
        raise UsageError("nu-difference requires identical initial data")
    return (state_nu.lambda_plus - state_zero.lambda_plus,
            state_nu.lambda_minus - state_zero.lambda_minus)


def save_checkpoint(path, state: ElsasserState, data_hash: str = "",
                    weight_s: float = 0.0, weight_k: int = 0):
    """Binary checkpoint: JSON header + raw little-endian complex128 blocks."""
    g = state.grid
    header = {
        "format_version": CHECKPOINT_FORMAT_VERSION,
        "dims": list(g.dims),
        "half_length": g.half_length,
        "dealias_fraction": g.dealias_fraction,
        "epsilon": state.epsilon,
        "nu": state.nu,
        "s": weight_s,
        "k": weight_k,
        "t_star": state.t_star,
        "data_hash": data_hash,
        "dtype": "complex128",
    }
    header_bytes = json.dumps(header, sort_keys=True).encode("utf-8")
    with open(path, "wb") as fh:
        fh.write(CHECKPOINT_MAGIC)
        fh.write(struct.pack("<I", len(header_bytes)))
        fh.write(header_bytes)
        for f in (state.lambda_plus, state.lambda_minus):
            fh.write(np.ascontiguousarray(f.coeffs, dtype="<c16").tobytes())


def load_checkpoint(path):
    """Inverse of save_checkpoint; returns (state, header dict)."""
    from .spectral import GridSpec

    with open(path, "rb") as fh:
        magic = fh.read(len(CHECKPOINT_MAGIC))
        if magic != CHECKPOINT_MAGIC:
            raise UsageError(f"not a checkpoint file: {path}")
        (hlen,) = struct.unpack("<I", fh.read(4))
        header = json.loads(fh.read(hlen).decode("utf-8"))
        if header["format_version"] != CHECKPOINT_FORMAT_VERSION:
            raise UsageError(
                f"unsupported checkpoint format version {header['format_version']}")
        grid = GridSpec(tuple(header["dims"]), header["half_length"],
                        header["dealias_fraction"])
        shape = (grid.ndim,) + grid.dims
        count = int(np.prod(shape))
        fields = []
        for _ in range(2):
            buf = fh.read(count * 16)
            arr = np.frombuffer(buf, dtype="<c16").reshape(shape).astype(np.complex128)
            fields.append(SpectralVectorField(grid, arr))
    st = ElsasserState(fields[0], fields[1], header["t_star"],
                       header["epsilon"], header["nu"])
    return st, header
