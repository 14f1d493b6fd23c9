"""Deliberately slow reference implementations for cross-validating the fast path.

Nothing here shares code with the spectral kernel: derivatives come either
from direct evaluation of the DFT sum (exact, independent of any FFT library)
or from centered second-order finite differences; quadratures are naive
nested-loop sums accumulated with math.fsum; the finite-difference pressure
solve diagonalizes the *discrete* five/seven-point Laplacian.  Grids are
capped at 32 points per axis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product as _iter_product

import numpy as np
from scipy.integrate import quad

from .errors import ConfigurationError
from .spectral import GridSpec, SpectralVectorField, multi_indices

__all__ = [
    "OracleTolerance",
    "ORACLE_MAX_POINTS",
    "direct_physical",
    "direct_derivative",
    "fd_rhs",
    "direct_functional",
    "quad_q",
    "quad_q_infinity",
    "convolution_advect",
]

ORACLE_MAX_POINTS = 32


@dataclass(frozen=True)
class OracleTolerance:
    abs_tol: float
    rel_tol: float
    grid_order: float = 2.0

    def __post_init__(self):
        if self.abs_tol <= 0 or self.rel_tol <= 0:
            raise ConfigurationError("tolerances must be positive")


def _check_size(grid: GridSpec):
    if max(grid.dims) > ORACLE_MAX_POINTS:
        raise ConfigurationError(
            f"oracle grids are capped at {ORACLE_MAX_POINTS} points per axis")


def direct_physical(grid: GridSpec, coeffs: np.ndarray) -> np.ndarray:
    """Evaluate the inverse DFT sum directly: f_j = (1/Ntot) sum_k fhat(k) e^{i k . dx j}.

    The phases use the sample-index coordinates dx*j (the DFT's native frame);
    the box offset -L is a relabeling that the coefficients already encode.
    """
    _check_size(grid)
    out = np.zeros(grid.dims, dtype=np.complex128)
    index_mesh = np.meshgrid(*(grid.dx * np.arange(d) for d in grid.dims),
                             indexing="ij")
    for idx in _iter_product(*(range(d) for d in grid.dims)):
        c = coeffs[idx]
        if c == 0:
            continue
        phase = np.zeros(grid.dims)
        for ax in range(grid.ndim):
            phase = phase + grid.wavenumbers[ax][idx[ax]] * index_mesh[ax]
        out += c * np.exp(1j * phase)
    return (out / grid.num_points).real


def direct_derivative(grid: GridSpec, coeffs: np.ndarray,
                      alpha: tuple[int, ...]) -> np.ndarray:
    """d^alpha via the direct DFT sum with (i k)^alpha applied per mode."""
    mult = np.ones(grid.dims, dtype=np.complex128)
    for ax, a in enumerate(alpha):
        if a:
            mult = mult * (1j * grid.kmesh[ax]) ** a
    return direct_physical(grid, coeffs * mult)


def _roll_diff(arr: np.ndarray, axis: int, dx: float) -> np.ndarray:
    """Centered second-order first derivative on the periodic grid."""
    return (np.roll(arr, -1, axis=axis) - np.roll(arr, 1, axis=axis)) / (2.0 * dx)


def _roll_lap(arr: np.ndarray, grid: GridSpec) -> np.ndarray:
    out = np.zeros_like(arr)
    for ax in range(grid.ndim):
        out += (np.roll(arr, -1, axis=ax) - 2.0 * arr + np.roll(arr, 1, axis=ax))
    return out / grid.dx ** 2


def _fd_poisson_inverse_multiplier(grid: GridSpec) -> np.ndarray:
    """Eigenvalues of the inverse discrete (five/seven-point) Laplacian.

    The FD Laplacian is diagonal in the DFT basis with eigenvalues
    -(2 - 2 cos(k dx)) / dx^2 summed per axis; this is the *stencil's*
    spectrum, not the spectral |k|^2.
    """
    lam = np.zeros(grid.dims)
    for ax in range(grid.ndim):
        shape = [1] * grid.ndim
        shape[ax] = grid.dims[ax]
        lam_ax = (2.0 - 2.0 * np.cos(grid.wavenumbers[ax] * grid.dx)) / grid.dx ** 2
        lam = lam + lam_ax.reshape(shape)
    inv = np.zeros_like(lam)
    nonzero = lam > 1e-14
    inv[nonzero] = 1.0 / lam[nonzero]
    return inv


def fd_rhs(lp_phys: np.ndarray, lm_phys: np.ndarray, grid: GridSpec,
           epsilon: float, nu: float):
    """Finite-difference tendency of the full system on physical samples.

    All derivatives are centered second-order stencils; the pressure comes
    from the inverse-Laplacian formula with the discrete FD Laplacian.
    Returns (rhs_plus, rhs_minus) as physical arrays of shape (ndim, *dims).
    """
    _check_size(grid)
    dx = grid.dx
    inv_lap = _fd_poisson_inverse_multiplier(grid)

    # p = eps (-Lap_fd)^-1 sum_ij D_i D_j (Lm_i Lp_j)
    src = np.zeros(grid.dims)
    for i in range(grid.ndim):
        for j in range(grid.ndim):
            prod = lm_phys[i] * lp_phys[j]
            src += _roll_diff(_roll_diff(prod, i, dx), j, dx)
    # (-Lap)^-1 src via the stencil eigenvalues (DFT used only as the
    # diagonalizing basis of the *FD* operator)
    src_hat = np.fft.fftn(src)
    p = np.fft.ifftn(src_hat * inv_lap).real * epsilon

    grad_p = np.stack([_roll_diff(p, ax, dx) for ax in range(grid.ndim)])

    out = []
    for f, other, sgn in ((lp_phys, lm_phys, +1.0), (lm_phys, lp_phys, -1.0)):
        rhs = np.zeros_like(f)
        for comp in range(grid.ndim):
            rhs[comp] = sgn * _roll_diff(f[comp], 0, dx)
            for i in range(grid.ndim):
                rhs[comp] -= epsilon * other[i] * _roll_diff(f[comp], i, dx)
            rhs[comp] -= grad_p[comp]
            if nu > 0:
                rhs[comp] += epsilon * nu * _roll_lap(f[comp], grid)
        out.append(rhs)
    return out[0], out[1]


def _fsum_grid(arr: np.ndarray) -> float:
    return math.fsum(arr.ravel().tolist())


def direct_functional(lp: SpectralVectorField, lm: SpectralVectorField,
                      t_star: float, spec, nu: float,
                      derivative: str = "dft"):
    """(E_k, W_k, D_k) by naive nested-loop quadrature.

    derivative="dft" evaluates every d^alpha field by the direct DFT sum
    (exact for band-limited data, certifying the fast quadrature to 1e-10);
    derivative="fd2" uses centered second-order stencils instead, agreeing
    with the fast path only to O(dx^2).
    """
    grid = lp.grid
    _check_size(grid)
    if derivative not in ("dft", "fd2"):
        raise ConfigurationError(f"unknown derivative mode {derivative!r}")
    k, s = spec.k, spec.s
    dv = grid.cell_volume
    mesh = grid.mesh
    x1 = mesh[0]

    def weight(signv, power):
        shifted_sq = (x1 + signv * t_star) ** 2
        for i in range(1, grid.ndim):
            shifted_sq = shifted_sq + mesh[i] ** 2
        return (1.0 + shifted_sq) ** (power / 2.0)

    def char2s(signv):
        sigma = signv * x1 - t_star
        return (1.0 + sigma ** 2) ** s

    def deriv_field(f, alpha):
        if derivative == "dft":
            return np.stack([direct_derivative(grid, f.coeffs[c], alpha)
                             for c in range(grid.ndim)])
        phys = np.stack([direct_physical(grid, f.coeffs[c])
                         for c in range(grid.ndim)])
        out = phys
        for ax, a in enumerate(alpha):
            for _ in range(a):
                out = np.stack([_roll_diff(out[c], ax, grid.dx)
                                for c in range(grid.ndim)])
        return out

    e_total = []
    w_total = []
    d_total = []
    for f, signv in ((lp, +1), (lm, -1)):
        w_s2 = weight(signv, 2 * s)
        w_s4 = weight(signv, 4 * s)
        chars = char2s(signv)
        base = deriv_field(f, (0,) * grid.ndim)
        base_sq = sum(base[c] ** 2 for c in range(grid.ndim))
        e_total.append(_fsum_grid(w_s2 * base_sq) * dv)
        w_total.append(_fsum_grid(w_s2 / chars * base_sq) * dv)
        d_total.append(_fsum_grid(base_sq) * dv)
        for alpha in multi_indices(grid.ndim, 1, k):
            darr = deriv_field(f, alpha)
            dsq = sum(darr[c] ** 2 for c in range(grid.ndim))
            e_total.append(_fsum_grid(w_s4 * dsq) * dv)
            w_total.append(_fsum_grid(w_s4 / chars * dsq) * dv)
        for alpha in multi_indices(grid.ndim, 0, k):
            wgt = w_s2 if sum(alpha) == 0 else w_s4
            for ax in range(grid.ndim):
                beta = tuple(a + (1 if i == ax else 0) for i, a in enumerate(alpha))
                darr = deriv_field(f, beta)
                dsq = sum(darr[c] ** 2 for c in range(grid.ndim))
                d_total.append(_fsum_grid(wgt * dsq) * dv)

    e_k = math.fsum(e_total)
    w_k = math.fsum(w_total)
    d_k = math.fsum(d_total)
    if nu > 0:
        inv = np.zeros(grid.dims)
        nonzero = grid.k_squared > 0
        inv[nonzero] = 1.0 / grid.k_squared[nonzero]
        tot = 0.0
        for f in (lp, lm):
            tot += math.fsum((np.abs(f.coeffs) ** 2 * inv).ravel().tolist())
        e_k += tot * dv / grid.num_points
    return e_k, w_k, d_k


def convolution_advect(a: SpectralVectorField, b: SpectralVectorField) -> np.ndarray:
    """(a . grad) b as a brute-force convolution sum over retained mode pairs.

    Returns spectral coefficients restricted to the dealias ball, the exact
    (alias-free) counterpart of the fast pseudo-spectral product for
    ball-limited inputs.
    """
    grid = a.grid
    _check_size(grid)
    dims = grid.dims
    out = np.zeros((grid.ndim,) + dims, dtype=np.complex128)
    idx_all = list(_iter_product(*(range(d) for d in dims)))
    k_of = [grid.wavenumbers[ax] for ax in range(grid.ndim)]
    mask = grid.dealias_mask
    for ia in idx_all:
        a_here = a.coeffs[(slice(None),) + ia]
        if not np.any(a_here):
            continue
        for ib in idx_all:
            b_here = b.coeffs[(slice(None),) + ib]
            if not np.any(b_here):
                continue
            target = tuple((ia[ax] + ib[ax]) % dims[ax] for ax in range(grid.ndim))
            ikb = sum(1j * k_of[ax][ib[ax]] * a_here[ax] for ax in range(grid.ndim))
            out[(slice(None),) + target] += ikb * b_here
    out /= grid.num_points
    out *= mask
    return out


def quad_q(y: float, s: float) -> float:
    """q(y) = int_0^y (1 + tau^2)^(-s) dtau by adaptive quadrature (1e-10)."""
    if y == 0:
        return 0.0
    val, _ = quad(lambda tau: (1.0 + tau * tau) ** (-s), 0.0, abs(y),
                  epsabs=1e-12, epsrel=1e-12)
    return math.copysign(val, y)


def quad_q_infinity(s: float) -> float:
    val, _ = quad(lambda tau: (1.0 + tau * tau) ** (-s), 0.0, np.inf,
                  epsabs=1e-12, epsrel=1e-12)
    return val
