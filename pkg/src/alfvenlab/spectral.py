"""Periodic-grid spectral fields and the operators built on them.

Fields live on the square/cubic box [-L, L)^n, n = 2 or 3, sampled on a
uniform grid with an even number of points per axis.  Spectral coefficients
follow numpy's unnormalized-forward FFT convention throughout the package:

    coeffs  = fftn(samples)          samples = ifftn(coeffs)

so the discrete L2 norm is

    ||f||_0^2 = dx^n * sum_x |f(x)|^2 = dx^n / Ntot * sum_k |fhat(k)|^2

(cell-volume-weighted sums, approximating the continuum integrals).
Wavenumbers are integer multiples of pi/L.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import cached_property
from itertools import product as _iter_product

import numpy as np
from scipy import fft as _fft

from .errors import ConfigurationError, DomainError, UsageError

__all__ = [
    "GridSpec",
    "SpectralVectorField",
    "zero_field",
    "field_from_physical",
    "transform_to_physical",
    "transform_to_spectral",
    "partial_derivative",
    "laplacian",
    "leray_project",
    "inverse_modulus_gradient",
    "advect",
    "dealias",
    "divergence",
    "divergence_max",
    "scalar_to_physical",
    "scalar_gradient",
    "l2_norm_sq",
    "inner_product",
    "sobolev_norm_sq",
    "multi_indices",
]

ZERO_MODE_TOL = 1e-10


@dataclass(frozen=True)
class GridSpec:
    """Geometry of the periodic box [-L, L)^n with a uniform grid.

    dims entries must all be equal (square box, identical dx per axis),
    even and >= 8.  dealias_fraction sets the radius of the retained
    spectral ball as a fraction of the Nyquist wavenumber.
    """

    dims: tuple[int, ...]
    half_length: float
    dealias_fraction: float = 2.0 / 3.0

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        object.__setattr__(self, "dims", dims)
        if len(dims) not in (2, 3):
            raise ConfigurationError(f"grid must be 2D or 3D, got {len(dims)} axes")
        for d in dims:
            if d < 8 or d % 2 != 0:
                raise ConfigurationError(f"each grid dimension must be even and >= 8, got {d}")
        if len(set(dims)) != 1:
            raise ConfigurationError(f"grid spacing must match across axes, got dims={dims}")
        if self.half_length <= 0:
            raise ConfigurationError("half_length must be positive")
        if not 0 < self.dealias_fraction <= 1:
            raise ConfigurationError("dealias_fraction must lie in (0, 1]")

    @property
    def ndim(self) -> int:
        return len(self.dims)

    @property
    def dx(self) -> float:
        return 2.0 * self.half_length / self.dims[0]

    @property
    def cell_volume(self) -> float:
        return self.dx ** self.ndim

    @property
    def num_points(self) -> int:
        return int(np.prod(self.dims))

    @cached_property
    def axes(self) -> tuple[np.ndarray, ...]:
        """Physical coordinates per axis: -L, -L+dx, ..., L-dx."""
        return tuple(-self.half_length + self.dx * np.arange(d) for d in self.dims)

    @cached_property
    def mesh(self) -> np.ndarray:
        """Physical coordinate mesh, shape (ndim, *dims), 'ij' indexing."""
        return np.stack(np.meshgrid(*self.axes, indexing="ij"))

    @cached_property
    def wavenumbers(self) -> tuple[np.ndarray, ...]:
        return tuple(2.0 * np.pi * np.fft.fftfreq(d, d=self.dx) for d in self.dims)

    @cached_property
    def kmesh(self) -> np.ndarray:
        """Wavenumber mesh, shape (ndim, *dims)."""
        return np.stack(np.meshgrid(*self.wavenumbers, indexing="ij"))

    @cached_property
    def k_squared(self) -> np.ndarray:
        return np.sum(self.kmesh ** 2, axis=0)

    @property
    def nyquist(self) -> float:
        return np.pi / self.dx

    @cached_property
    def dealias_mask(self) -> np.ndarray:
        """Boolean mask of the retained ball |k| <= dealias_fraction * k_nyq."""
        cutoff_sq = (self.dealias_fraction * self.nyquist) ** 2
        return self.k_squared <= cutoff_sq * (1.0 + 1e-12)

    @cached_property
    def inv_k(self) -> np.ndarray:
        """1/|k| with the zero mode mapped to 0."""
        k2 = self.k_squared.copy()
        zero = k2 == 0.0
        k2[zero] = 1.0
        out = 1.0 / np.sqrt(k2)
        out[zero] = 0.0
        return out

    @cached_property
    def inv_k_squared(self) -> np.ndarray:
        """1/|k|^2 with the zero mode mapped to 0."""
        k2 = self.k_squared.copy()
        zero = k2 == 0.0
        k2[zero] = 1.0
        out = 1.0 / k2
        out[zero] = 0.0
        return out


@dataclass
class SpectralVectorField:
    """n-component vector field stored as full complex Fourier coefficients.

    coeffs has shape (ndim, *dims).  Conjugate symmetry (real physical field)
    is an invariant of every field produced by this package; it is preserved
    by all operators here because their multipliers satisfy m(-k) = conj(m(k)).
    """

    grid: GridSpec
    coeffs: np.ndarray
    is_dealiased: bool = False

    def __post_init__(self):
        expected = (self.grid.ndim,) + self.grid.dims
        if self.coeffs.shape != expected:
            raise ConfigurationError(
                f"coefficient shape {self.coeffs.shape} does not match grid {expected}")
        if self.coeffs.dtype != np.complex128:
            self.coeffs = self.coeffs.astype(np.complex128)

    def copy(self) -> "SpectralVectorField":
        return SpectralVectorField(self.grid, self.coeffs.copy(), self.is_dealiased)

    def zero_mode_max(self) -> float:
        idx = (slice(None),) + (0,) * self.grid.ndim
        return float(np.max(np.abs(self.coeffs[idx])))

    def max_abs_coeff(self) -> float:
        return float(np.max(np.abs(self.coeffs)))

    def _check_same_grid(self, other: "SpectralVectorField"):
        if other.grid != self.grid:
            raise UsageError("fields live on different grids")

    def __add__(self, other: "SpectralVectorField") -> "SpectralVectorField":
        self._check_same_grid(other)
        return SpectralVectorField(self.grid, self.coeffs + other.coeffs,
                                   self.is_dealiased and other.is_dealiased)

    def __sub__(self, other: "SpectralVectorField") -> "SpectralVectorField":
        self._check_same_grid(other)
        return SpectralVectorField(self.grid, self.coeffs - other.coeffs,
                                   self.is_dealiased and other.is_dealiased)

    def __mul__(self, scalar) -> "SpectralVectorField":
        return SpectralVectorField(self.grid, self.coeffs * scalar, self.is_dealiased)

    __rmul__ = __mul__

    def __neg__(self) -> "SpectralVectorField":
        return SpectralVectorField(self.grid, -self.coeffs, self.is_dealiased)


def zero_field(grid: GridSpec) -> SpectralVectorField:
    return SpectralVectorField(grid, np.zeros((grid.ndim,) + grid.dims, dtype=np.complex128),
                               is_dealiased=True)


def field_from_physical(grid: GridSpec, samples: np.ndarray) -> SpectralVectorField:
    """Build a field from real physical samples of shape (ndim, *dims)."""
    expected = (grid.ndim,) + grid.dims
    if samples.shape != expected:
        raise ConfigurationError(f"sample shape {samples.shape} does not match grid {expected}")
    coeffs = _fft.fftn(np.asarray(samples, dtype=np.float64), axes=range(1, grid.ndim + 1))
    return SpectralVectorField(grid, coeffs)


def transform_to_physical(f: SpectralVectorField) -> np.ndarray:
    """Physical-space samples, shape (ndim, *dims).

    Valid for conjugate-symmetric coefficients (the imaginary residue of the
    inverse transform is dropped).
    """
    phys = _fft.ifftn(f.coeffs, axes=range(1, f.grid.ndim + 1))
    return np.ascontiguousarray(phys.real)


def transform_to_spectral(grid: GridSpec, samples: np.ndarray) -> SpectralVectorField:
    """Inverse of transform_to_physical."""
    return field_from_physical(grid, samples)


def partial_derivative(f: SpectralVectorField, axis: int, order: int = 1) -> SpectralVectorField:
    """d^order / dx_axis^order, computed as multiplication by (i*k_axis)^order."""
    if not 0 <= axis < f.grid.ndim:
        raise UsageError(f"axis {axis} out of range for {f.grid.ndim}D grid")
    if order < 1:
        raise UsageError("derivative order must be >= 1")
    mult = (1j * f.grid.kmesh[axis]) ** order
    return SpectralVectorField(f.grid, f.coeffs * mult, f.is_dealiased)


def laplacian(f: SpectralVectorField) -> SpectralVectorField:
    return SpectralVectorField(f.grid, -f.grid.k_squared * f.coeffs, f.is_dealiased)


def leray_project(f: SpectralVectorField) -> SpectralVectorField:
    """Project onto divergence-free fields: fhat - k (k . fhat) / |k|^2 for k != 0."""
    g = f.grid
    k = g.kmesh
    dot = np.einsum("a...,a...->...", k, f.coeffs) * g.inv_k_squared
    out = f.coeffs - k * dot
    return SpectralVectorField(g, out, f.is_dealiased)


def inverse_modulus_gradient(f: SpectralVectorField) -> SpectralVectorField:
    """Coefficient-wise division by |k|; requires a mean-free field."""
    if f.zero_mode_max() > ZERO_MODE_TOL:
        raise DomainError(
            f"field is not mean-free (zero-mode magnitude {f.zero_mode_max():.3e})")
    out = f.coeffs * f.grid.inv_k
    idx = (slice(None),) + (0,) * f.grid.ndim
    out[idx] = 0.0
    return SpectralVectorField(f.grid, out, f.is_dealiased)


def dealias(f: SpectralVectorField) -> SpectralVectorField:
    """Zero all modes outside the dealias ball."""
    return SpectralVectorField(f.grid, f.coeffs * f.grid.dealias_mask, is_dealiased=True)


def advect(a: SpectralVectorField, b: SpectralVectorField) -> SpectralVectorField:
    """(a . grad) b by the pseudo-spectral product, dealiased.

    a is transformed to physical space, each spectral derivative d_i b is
    transformed, the pointwise products are summed, and the result is
    transformed back with modes outside the dealias ball zeroed.
    """
    if a.grid != b.grid:
        raise ConfigurationError("advect operands live on different grids")
    g = a.grid
    a_phys = transform_to_physical(a)
    out_phys = np.zeros_like(a_phys)
    for i in range(g.ndim):
        di_b = _fft.ifftn(1j * g.kmesh[i] * b.coeffs, axes=range(1, g.ndim + 1)).real
        out_phys += a_phys[i] * di_b
    coeffs = _fft.fftn(out_phys, axes=range(1, g.ndim + 1))
    coeffs *= g.dealias_mask
    return SpectralVectorField(g, coeffs, is_dealiased=True)


def divergence(f: SpectralVectorField) -> np.ndarray:
    """Spectral divergence, returned as a scalar coefficient array."""
    return np.einsum("a...,a...->...", 1j * f.grid.kmesh, f.coeffs)


def divergence_max(f: SpectralVectorField) -> float:
    """Max physical-space magnitude of the spectral divergence."""
    g = f.grid
    div_phys = _fft.ifftn(divergence(f), axes=range(g.ndim))
    return float(np.max(np.abs(div_phys)))


def scalar_to_physical(grid: GridSpec, coeffs: np.ndarray) -> np.ndarray:
    return _fft.ifftn(coeffs, axes=range(grid.ndim)).real


def scalar_gradient(grid: GridSpec, coeffs: np.ndarray) -> SpectralVectorField:
    """Gradient of a scalar spectral field as a vector field."""
    out = 1j * grid.kmesh * coeffs[np.newaxis]
    return SpectralVectorField(grid, out)


def l2_norm_sq(f: SpectralVectorField) -> float:
    """Discrete ||f||_0^2 via Parseval (cell-volume normalization)."""
    g = f.grid
    return float(np.sum(np.abs(f.coeffs) ** 2).real * g.cell_volume / g.num_points)


def inner_product(f: SpectralVectorField, g: SpectralVectorField) -> float:
    """Discrete L2 inner product of two real fields."""
    if f.grid != g.grid:
        raise UsageError("inner product operands live on different grids")
    gr = f.grid
    val = np.sum(f.coeffs * np.conj(g.coeffs)).real
    return float(val * gr.cell_volume / gr.num_points)


def multi_indices(ndim: int, min_order: int, max_order: int) -> list[tuple[int, ...]]:
    """All multi-indices alpha with min_order <= |alpha| <= max_order."""
    out = []
    for alpha in _iter_product(range(max_order + 1), repeat=ndim):
        if min_order <= sum(alpha) <= max_order:
            out.append(alpha)
    return out


def sobolev_norm_sq(f: SpectralVectorField, order: int) -> float:
    """||f||_order^2 = sum over |alpha| <= order of ||d^alpha f||_0^2, via multipliers."""
    g = f.grid
    mult = np.zeros(g.dims)
    for alpha in multi_indices(g.ndim, 0, order):
        term = np.ones(g.dims)
        for ax, a in enumerate(alpha):
            if a:
                term = term * g.kmesh[ax] ** (2 * a)
        mult += term
    val = np.sum(mult * np.abs(f.coeffs) ** 2).real
    return float(val * g.cell_volume / g.num_points)
