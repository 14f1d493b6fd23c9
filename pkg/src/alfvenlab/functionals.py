"""Weighted measurement apparatus: moving weights, ghost weight, energy functionals.

The three functionals of order k measured along a run are

    E_k = sign(nu) || (|grad|^-1 Lp, |grad|^-1 Lm) ||_0^2
          + || (<x+e1 t>^s Lp, <x-e1 t>^s Lm) ||_0^2
          + sum_{1<=|a|<=k} || (<x+e1 t>^2s d^a Lp, <x-e1 t>^2s d^a Lm) ||_0^2

    W_k = same zeroth and derivative blocks with the integrands divided by
          <x1 - t>^2s (plus field) resp. <x1 + t>^2s (minus field)

    D_k = || (Lp, Lm) ||_0^2
          + || (<x+e1 t>^s grad Lp, <x-e1 t>^s grad Lm) ||_0^2
          + sum_{1<=|a|<=k} || (<x+e1 t>^2s grad d^a Lp, ...) ||_0^2

where <sigma> = sqrt(1 + |sigma|^2) and the weights use unwrapped coordinates
x +- e1 t (no periodic reduction), valid only inside the no-wrap window.

The ghost weight q(y) = int_0^y <tau>^-2s dtau is precomputed on a uniform
table by per-panel Gauss-Legendre quadrature and evaluated through a cubic
spline; q(inf) is computed by adaptive quadrature.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy import fft as _fft
from scipy.integrate import quad
from scipy.interpolate import CubicSpline

from .errors import ConfigurationError, DomainError
from .spectral import (
    GridSpec,
    SpectralVectorField,
    multi_indices,
    sobolev_norm_sq,
)

__all__ = [
    "WeightSpec",
    "FunctionalReport",
    "build_ghost_table",
    "ghost_q",
    "moving_weight",
    "char_bracket",
    "compute_report",
    "energy_Ek",
    "weighted_Wk",
    "dissipation_Dk",
    "error_functionals",
    "decay_diagnostic",
    "ball_sup",
    "pair_sobolev_norm_sq",
]

GHOST_TABLE_SPACING = 1e-3
GHOST_TABLE_YMAX = 64.0


def _ghost_integrand(tau, s):
    return (1.0 + tau ** 2) ** (-s)


def build_ghost_table(s: float, y_max: float = GHOST_TABLE_YMAX,
                      spacing: float = GHOST_TABLE_SPACING):
    """Tabulate q(y) on [0, y_max] with the given spacing, plus q(inf).

    Each panel is integrated by 5-point Gauss-Legendre (error far below the
    1e-8 interpolation contract); the running sum gives the table.  q(inf)
    comes from adaptive quadrature on the infinite interval.
    """
    if spacing > GHOST_TABLE_SPACING * (1 + 1e-12):
        raise ConfigurationError("ghost table spacing must be <= 1e-3")
    n_panels = int(np.ceil(y_max / spacing))
    y = np.linspace(0.0, n_panels * spacing, n_panels + 1)
    nodes, weights = np.polynomial.legendre.leggauss(5)
    mids = 0.5 * (y[:-1] + y[1:])
    half = 0.5 * spacing
    tau = mids[:, None] + half * nodes[None, :]
    panel = half * np.sum(weights[None, :] * _ghost_integrand(tau, s), axis=1)
    q = np.concatenate([[0.0], np.cumsum(panel)])
    q_inf, _ = quad(_ghost_integrand, 0.0, np.inf, args=(s,), epsabs=1e-12, epsrel=1e-12)
    return y, q, q_inf


@dataclass(frozen=True, eq=False)
class WeightSpec:
    """Weight exponent s in (1/2, 2/3), derivative order k, and the ghost table."""

    s: float
    k: int
    table_y: np.ndarray = field(repr=False)
    table_q: np.ndarray = field(repr=False)
    q_inf: float = 0.0

    def __post_init__(self):
        if not (1.0 < 2.0 * self.s < 4.0 / 3.0):
            raise ConfigurationError(
                f"s = {self.s} violates the requirement 1 < 2s < 4/3")
        if int(self.k) < 1:
            raise ConfigurationError("k must be a positive integer")
        object.__setattr__(self, "k", int(self.k))

    @classmethod
    def create(cls, s: float, k: int, y_max: float = GHOST_TABLE_YMAX,
               spacing: float = GHOST_TABLE_SPACING) -> "WeightSpec":
        y, q, q_inf = build_ghost_table(s, y_max=y_max, spacing=spacing)
        return cls(s=s, k=k, table_y=y, table_q=q, q_inf=q_inf)

    def reduced(self, k_new: int) -> "WeightSpec":
        """Same weights and table at a lower derivative order (k-1 variants)."""
        return WeightSpec(s=self.s, k=k_new, table_y=self.table_y,
                          table_q=self.table_q, q_inf=self.q_inf)

    @cached_property
    def _spline(self) -> CubicSpline:
        return CubicSpline(self.table_y, self.table_q)

    @property
    def c_tilde(self) -> float:
        """sup of exp(q) over the half-line: exp(q(inf))."""
        return float(np.exp(self.q_inf))

    def ghost_q(self, y):
        """q(y), odd in y by construction; spline inside the table, tail quadrature beyond."""
        y_arr = np.asarray(y, dtype=float)
        ay = np.abs(y_arr)
        out = np.empty_like(ay)
        inside = ay <= self.table_y[-1]
        out[inside] = self._spline(ay[inside])
        if np.any(~inside):
            vals = [self.q_inf - quad(_ghost_integrand, float(v), np.inf, args=(self.s,),
                                      epsabs=1e-12, epsrel=1e-12)[0]
                    for v in ay[~inside]]
            out[~inside] = vals
        out = np.sign(y_arr) * out
        return float(out) if np.isscalar(y) else out


def ghost_q(y, spec: WeightSpec):
    """Module-level alias for the ghost weight profile q."""
    return spec.ghost_q(y)


def moving_weight(x, t_star: float, sign: int, power: float):
    """<x +- e1 t>^power with unwrapped coordinates.

    x is a point or coordinate array with the axis-0 index running over the
    space dimensions; sign +1 gives <x + e1 t>, -1 gives <x - e1 t>.
    """
    x = np.asarray(x, dtype=float)
    shifted_sq = (x[0] + sign * t_star) ** 2
    for i in range(1, x.shape[0]):
        shifted_sq = shifted_sq + x[i] ** 2
    return (1.0 + shifted_sq) ** (power / 2.0)


def char_bracket(x1, t_star: float, sign: int):
    """<sigma> for sigma = sign * x1 - t (the characteristic coordinate)."""
    sigma = sign * np.asarray(x1, dtype=float) - t_star
    return np.sqrt(1.0 + sigma ** 2)


@dataclass
class FunctionalReport:
    """One time sample of the weighted functionals and decay diagnostics.

    energy includes the |grad|^-1 term only for nu > 0; inv_grad_sq carries
    the term itself in either case (report-only extra at nu = 0).
    energy_blocks[m-1] etc. hold the |alpha| = m contribution, m = 1..k.
    sobolev[j] is the plain pair norm ||(Lp, Lm)||_j, j = 0..k.
    """

    t_star: float
    energy: float
    weighted: float
    dissipation: float
    inv_grad_sq: float
    energy_zero: float
    energy_blocks: tuple
    weighted_zero: float
    weighted_blocks: tuple
    dissipation_zero: float
    dissipation_grad: float
    dissipation_blocks: tuple
    decay_sup_plus: float
    decay_sup_minus: float
    ball_radius: float
    ball_sup: float
    sobolev: tuple
    valid: bool = True

    def csv_header(self) -> list[str]:
        k = len(self.energy_blocks)
        cols = ["t_star", "E_k", "W_k", "D_k", "inv_grad_sq", "E_zero"]
        cols += [f"E_alpha{m}" for m in range(1, k + 1)]
        cols += ["W_zero"] + [f"W_alpha{m}" for m in range(1, k + 1)]
        cols += ["D_zero", "D_grad"] + [f"D_alpha{m}" for m in range(1, k + 1)]
        cols += ["decay_sup_plus", "decay_sup_minus", "ball_radius", "ball_sup"]
        cols += [f"sobolev_{j}" for j in range(len(self.sobolev))]
        cols += ["valid"]
        return cols

    def to_csv_row(self) -> list:
        row = [self.t_star, self.energy, self.weighted, self.dissipation,
               self.inv_grad_sq, self.energy_zero, *self.energy_blocks,
               self.weighted_zero, *self.weighted_blocks,
               self.dissipation_zero, self.dissipation_grad, *self.dissipation_blocks,
               self.decay_sup_plus, self.decay_sup_minus,
               self.ball_radius, self.ball_sup, *self.sobolev,
               int(self.valid)]
        return row

    def to_json_dict(self) -> dict:
        return {
            "t_star": self.t_star,
            "E_k": self.energy,
            "W_k": self.weighted,
            "D_k": self.dissipation,
            "inv_grad_sq": self.inv_grad_sq,
            "E_zero": self.energy_zero,
            "E_blocks": list(self.energy_blocks),
            "W_zero": self.weighted_zero,
            "W_blocks": list(self.weighted_blocks),
            "D_zero": self.dissipation_zero,
            "D_grad": self.dissipation_grad,
            "D_blocks": list(self.dissipation_blocks),
            "decay_sup_plus": self.decay_sup_plus,
            "decay_sup_minus": self.decay_sup_minus,
            "ball_radius": self.ball_radius,
            "ball_sup": self.ball_sup,
            "sobolev": list(self.sobolev),
            "valid": self.valid,
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "FunctionalReport":
        return cls(
            t_star=d["t_star"], energy=d["E_k"], weighted=d["W_k"],
            dissipation=d["D_k"], inv_grad_sq=d["inv_grad_sq"],
            energy_zero=d["E_zero"], energy_blocks=tuple(d["E_blocks"]),
            weighted_zero=d["W_zero"], weighted_blocks=tuple(d["W_blocks"]),
            dissipation_zero=d["D_zero"], dissipation_grad=d["D_grad"],
            dissipation_blocks=tuple(d["D_blocks"]),
            decay_sup_plus=d["decay_sup_plus"], decay_sup_minus=d["decay_sup_minus"],
            ball_radius=d["ball_radius"], ball_sup=d["ball_sup"],
            sobolev=tuple(d["sobolev"]), valid=d["valid"],
        )


def _physical_derivatives(f: SpectralVectorField, max_order: int) -> dict:
    """Physical samples of d^beta f for every |beta| <= max_order."""
    g = f.grid
    out = {}
    for beta in multi_indices(g.ndim, 0, max_order):
        mult = np.ones(g.dims, dtype=np.complex128)
        for ax, b in enumerate(beta):
            if b:
                mult = mult * (1j * g.kmesh[ax]) ** b
        out[beta] = _fft.ifftn(f.coeffs * mult, axes=range(1, g.ndim + 1)).real
    return out


def _inv_grad_norm_sq(lp: SpectralVectorField, lm: SpectralVectorField) -> float:
    g = lp.grid
    total = 0.0
    for f in (lp, lm):
        if f.zero_mode_max() > 1e-10:
            raise DomainError("|grad|^-1 term requires mean-free fields")
        total += float(np.sum(np.abs(f.coeffs) ** 2 * g.inv_k ** 2).real)
    return total * g.cell_volume / g.num_points


def compute_report(lp: SpectralVectorField, lm: SpectralVectorField,
                   t_star: float, spec: WeightSpec, nu: float,
                   ball_radius: float = 0.0,
                   support_radius: float | None = None) -> FunctionalReport:
    """Evaluate E_k, W_k, D_k and the pointwise diagnostics at one fast time.

    All sums are cell-volume-weighted over the physical grid; derivatives are
    spectral.  When support_radius is given, the report is flagged invalid if
    the no-wrap window |x1| <= R + t* < L is violated.
    """
    g = lp.grid
    k = spec.k
    s = spec.s
    dv = g.cell_volume

    valid = True
    if support_radius is not None:
        valid = (t_star + support_radius) < g.half_length

    x1 = g.mesh[0]
    w_plus = {p: moving_weight(g.mesh, t_star, +1, p) for p in (2 * s, 4 * s)}
    w_minus = {p: moving_weight(g.mesh, t_star, -1, p) for p in (2 * s, 4 * s)}
    char_plus_2s = char_bracket(x1, t_star, +1) ** (2 * s)
    char_minus_2s = char_bracket(x1, t_star, -1) ** (2 * s)

    derivs_p = _physical_derivatives(lp, k + 1)
    derivs_m = _physical_derivatives(lm, k + 1)
    zero_idx = (0,) * g.ndim

    def block_sums(derivs, w2s, w4s, char2s):
        """Per-order sums of the weighted squares for one field."""
        sq = {beta: np.sum(arr * arr, axis=0) for beta, arr in derivs.items()}
        e_zero = float(np.sum(w2s * sq[zero_idx]) * dv)
        w_zero = float(np.sum(w2s / char2s * sq[zero_idx]) * dv)
        d_zero = float(np.sum(sq[zero_idx]) * dv)
        e_blocks = np.zeros(k)
        w_blocks = np.zeros(k)
        d_blocks = np.zeros(k + 1)  # index m: sum over |alpha| = m of grad terms
        for beta, val in sq.items():
            m = sum(beta)
            if 1 <= m <= k:
                e_blocks[m - 1] += float(np.sum(w4s * val) * dv)
                w_blocks[m - 1] += float(np.sum(w4s / char2s * val) * dv)
            if m >= 1:
                # d_i d^alpha with |alpha| = m-1 contributes to D block m-1,
                # counted once per derivative slot producing beta
                for ax in range(g.ndim):
                    if beta[ax] >= 1:
                        d_blocks[m - 1] += float(np.sum(
                            (w2s if m == 1 else w4s) * val) * dv)
        return e_zero, w_zero, d_zero, e_blocks, w_blocks, d_blocks

    ep0, wp0, dp0, ep_b, wp_b, dp_b = block_sums(derivs_p, w_plus[2 * s],
                                                 w_plus[4 * s], char_plus_2s)
    em0, wm0, dm0, em_b, wm_b, dm_b = block_sums(derivs_m, w_minus[2 * s],
                                                 w_minus[4 * s], char_minus_2s)

    inv_grad_sq = _inv_grad_norm_sq(lp, lm)
    sign_nu = 1.0 if nu > 0 else 0.0

    energy_zero = ep0 + em0
    energy_blocks = tuple(ep_b + em_b)
    energy = sign_nu * inv_grad_sq + energy_zero + float(sum(energy_blocks))

    weighted_zero = wp0 + wm0
    weighted_blocks = tuple(wp_b + wm_b)
    weighted = weighted_zero + float(sum(weighted_blocks))

    dissipation_zero = dp0 + dm0
    dissipation_grad = float(dp_b[0] + dm_b[0])
    dissipation_blocks = tuple((dp_b + dm_b)[1:])
    dissipation = dissipation_zero + dissipation_grad + float(sum(dissipation_blocks))

    mag_p = np.sqrt(np.sum(derivs_p[zero_idx] ** 2, axis=0))
    mag_m = np.sqrt(np.sum(derivs_m[zero_idx] ** 2, axis=0))
    decay_sup_plus = float(np.max(moving_weight(g.mesh, t_star, +1, s) * mag_p))
    decay_sup_minus = float(np.max(moving_weight(g.mesh, t_star, -1, s) * mag_m))

    ball_val = 0.0
    if ball_radius > 0:
        mask = np.sqrt(np.sum(g.mesh ** 2, axis=0)) < ball_radius
        if np.any(mask):
            ball_val = float(max(np.max(mag_p[mask]), np.max(mag_m[mask])))

    sob = tuple(pair_sobolev_norm_sq(lp, lm, j) ** 0.5 for j in range(k + 1))

    return FunctionalReport(
        t_star=t_star, energy=energy, weighted=weighted, dissipation=dissipation,
        inv_grad_sq=inv_grad_sq, energy_zero=energy_zero, energy_blocks=energy_blocks,
        weighted_zero=weighted_zero, weighted_blocks=weighted_blocks,
        dissipation_zero=dissipation_zero, dissipation_grad=dissipation_grad,
        dissipation_blocks=dissipation_blocks,
        decay_sup_plus=decay_sup_plus, decay_sup_minus=decay_sup_minus,
        ball_radius=ball_radius, ball_sup=ball_val, sobolev=sob, valid=valid,
    )


def pair_sobolev_norm_sq(lp: SpectralVectorField, lm: SpectralVectorField,
                         order: int) -> float:
    return sobolev_norm_sq(lp, order) + sobolev_norm_sq(lm, order)


def energy_Ek(state, spec: WeightSpec) -> float:
    return compute_report(state.lambda_plus, state.lambda_minus,
                          state.t_star, spec, state.nu).energy


def weighted_Wk(state, spec: WeightSpec) -> float:
    return compute_report(state.lambda_plus, state.lambda_minus,
                          state.t_star, spec, state.nu).weighted


def dissipation_Dk(state, spec: WeightSpec) -> float:
    return compute_report(state.lambda_plus, state.lambda_minus,
                          state.t_star, spec, state.nu).dissipation


def error_functionals(err_plus: SpectralVectorField, err_minus: SpectralVectorField,
                      t_star: float, spec: WeightSpec, nu: float,
                      support_radius: float | None = None) -> FunctionalReport:
    """The same machinery applied to the nonlinear-minus-linear error fields.

    Pass spec already reduced to order k-1 (spec.reduced(k-1)).
    """
    return compute_report(err_plus, err_minus, t_star, spec, nu,
                          support_radius=support_radius)


def decay_diagnostic(state, spec: WeightSpec):
    """(sup_x <x+e1 t>^s |Lp|, sup_x <x-e1 t>^s |Lm|) over grid points."""
    rep = compute_report(state.lambda_plus, state.lambda_minus,
                         state.t_star, spec, state.nu)
    return rep.decay_sup_plus, rep.decay_sup_minus


def ball_sup(state, radius: float) -> float:
    """Max pointwise magnitude of either field over grid points with |x| < radius."""
    g = state.grid
    mask = np.sqrt(np.sum(g.mesh ** 2, axis=0)) < radius
    if not np.any(mask):
        return 0.0
    out = 0.0
    for f in (state.lambda_plus, state.lambda_minus):
        phys = _fft.ifftn(f.coeffs, axes=range(1, g.ndim + 1)).real
        mag = np.sqrt(np.sum(phys ** 2, axis=0))
        out = max(out, float(np.max(mag[mask])))
    return out
