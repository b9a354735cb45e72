"""
Periodic-box discretization and spectral operators.

The box is [-L, L)^n with N points per axis, so the frequency lattice is
xi_k = pi*k/L for k = -N/2 .. N/2-1.  The forward transform carries the
spacing^n weight, hence coefficients approximate the continuous integral
F(xi) = int f(x) exp(-i xi.x) dx and analytic transforms (Gaussians etc.)
can be compared directly against the lattice values.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class SpatialGrid:
    """Periodic square/interval grid with matched frequency lattice.

    Parameters
    ----------
    dim : int
        Spatial dimension, 1 or 2.
    points_per_axis : int
        Points per axis; must be a power of two.
    half_width : float
        Box half width L; the box is [-L, L) per axis.
    """

    dim: int
    points_per_axis: int
    half_width: float

    def __post_init__(self) -> None:
        if self.dim not in (1, 2):
            raise ValueError(f"dim must be 1 or 2, got {self.dim}")
        n = self.points_per_axis
        if n < 2 or (n & (n - 1)) != 0:
            raise ValueError(f"points_per_axis must be a power of two, got {n}")
        if not self.half_width > 0:
            raise ValueError("half_width must be positive")

        h = 2.0 * self.half_width / n
        object.__setattr__(self, "spacing", h)

        axis = -self.half_width + h * np.arange(n)
        # xi_k = pi k / L in fft (unshifted) order
        k_int = np.rint(np.fft.fftfreq(n) * n).astype(int)
        freq = np.pi * k_int / self.half_width
        # +/-1 factor translating index-space FFTs to x_j = -L + j h sampling
        sign = np.where(k_int % 2 == 0, 1.0, -1.0)

        object.__setattr__(self, "axis_points", axis)
        object.__setattr__(self, "axis_frequencies", freq)
        if self.dim == 1:
            object.__setattr__(self, "shape", (n,))
            object.__setattr__(self, "coords", (axis,))
            object.__setattr__(self, "freq_coords", (freq,))
            object.__setattr__(self, "_phase", sign)
            object.__setattr__(self, "xi_sq", freq**2)
        else:
            object.__setattr__(self, "shape", (n, n))
            x, y = np.meshgrid(axis, axis, indexing="ij")
            fx, fy = np.meshgrid(freq, freq, indexing="ij")
            object.__setattr__(self, "coords", (x, y))
            object.__setattr__(self, "freq_coords", (fx, fy))
            object.__setattr__(self, "_phase", np.outer(sign, sign))
            object.__setattr__(self, "xi_sq", fx**2 + fy**2)
        object.__setattr__(self, "xi_abs", np.sqrt(self.xi_sq))

    @property
    def num_points(self) -> int:
        return self.points_per_axis**self.dim

    @property
    def cell_volume(self) -> float:
        return self.spacing**self.dim

    def key(self) -> tuple:
        """Hashable identity used by kernel / symbol caches."""
        return (self.dim, self.points_per_axis, self.half_width)

    def radius_sq(self) -> np.ndarray:
        """|x|^2 on the grid."""
        r2 = self.coords[0] ** 2
        for c in self.coords[1:]:
            r2 = r2 + c**2
        return r2


def _as_complex(values: np.ndarray, grid: SpatialGrid) -> np.ndarray:
    arr = np.asarray(values, dtype=np.complex128)
    if arr.shape != grid.shape:
        raise ValueError(f"values shape {arr.shape} does not match grid shape {grid.shape}")
    return arr


@dataclass
class ComplexField:
    """Complex samples on a SpatialGrid, physical-space representation."""

    grid: SpatialGrid
    values: np.ndarray

    def __post_init__(self) -> None:
        self.values = _as_complex(self.values, self.grid)
        if not np.all(np.isfinite(self.values.view(np.float64))):
            raise ValueError("field values must be finite")

    def __add__(self, other: "ComplexField") -> "ComplexField":
        _check_same_grid(self, other)
        return ComplexField(self.grid, self.values + other.values)

    def __sub__(self, other: "ComplexField") -> "ComplexField":
        _check_same_grid(self, other)
        return ComplexField(self.grid, self.values - other.values)

    def __mul__(self, c: complex) -> "ComplexField":
        return ComplexField(self.grid, self.values * c)

    __rmul__ = __mul__


@dataclass
class SpectralField:
    """Fourier coefficients on the frequency lattice, fft (unshifted) order."""

    grid: SpatialGrid
    coefficients: np.ndarray

    def __post_init__(self) -> None:
        self.coefficients = _as_complex(self.coefficients, self.grid)


def _check_same_grid(a, b) -> None:
    if a.grid.key() != b.grid.key():
        raise ValueError("fields live on different grids")


def forward_transform(f: ComplexField) -> SpectralField:
    """Discrete surrogate of F(xi) = int f(x) exp(-i xi.x) dx on the lattice."""
    g = f.grid
    coeff = np.fft.fftn(f.values) * (g.cell_volume * g._phase)
    return SpectralField(g, coeff)


def inverse_transform(F: SpectralField) -> ComplexField:
    g = F.grid
    values = np.fft.ifftn(F.coefficients * g._phase) / g.cell_volume
    return ComplexField(g, values)


def apply_multiplier(f: ComplexField, symbol: np.ndarray) -> ComplexField:
    """Apply a Fourier multiplier given by its values on the frequency lattice."""
    g = f.grid
    coeff = np.fft.fftn(f.values) * np.asarray(symbol)
    return ComplexField(g, np.fft.ifftn(coeff))


def fractional_laplacian(f: ComplexField, beta: float) -> ComplexField:
    """(-Laplace)^{beta/2} f, the Fourier multiplier with symbol |xi|^beta."""
    if not beta > 0:
        raise ValueError(f"fractional Laplacian order must be positive, got beta={beta}")
    return apply_multiplier(f, f.grid.xi_abs**beta)


def _homogeneous_symbol(grid: SpatialGrid, beta: float) -> np.ndarray:
    # zero frequency annihilated regardless of sign(beta); mirrors working on
    # fields whose transform vanishes near the origin
    sym = np.zeros(grid.shape)
    mask = grid.xi_abs > 0
    sym[mask] = grid.xi_abs[mask] ** beta
    return sym


def bessel_potential(f: ComplexField, s: float) -> ComplexField:
    """(I - Laplace)^{s/2} f; negative s smooths."""
    return apply_multiplier(f, (1.0 + f.grid.xi_sq) ** (s / 2.0))


def lp_norm(f: ComplexField, p: float) -> float:
    """L^p norm with the cell-volume quadrature weight; p = inf gives the max."""
    a = np.abs(f.values)
    if p == np.inf:
        return float(a.max())
    if p < 1:
        raise ValueError(f"p must be >= 1 or inf, got {p}")
    return float((np.sum(a**p) * f.grid.cell_volume) ** (1.0 / p))


def sobolev_norm(f: ComplexField, beta: float, p: float = 2.0) -> float:
    """Inhomogeneous Sobolev norm || (I - Laplace)^{beta/2} f ||_{L^p}."""
    return lp_norm(bessel_potential(f, beta), p)


def homogeneous_norm(f: ComplexField, beta: float, p: float = 2.0) -> float:
    """Homogeneous norm || |xi|^beta applied to f ||_{L^p}, zero mode dropped."""
    return lp_norm(apply_multiplier(f, _homogeneous_symbol(f.grid, beta)), p)


def shift(f: ComplexField, offsets: tuple[int, ...] | int) -> ComplexField:
    """Translate a field by a lattice offset (periodic)."""
    if isinstance(offsets, int):
        offsets = (offsets,) * f.grid.dim
    if len(offsets) != f.grid.dim:
        raise ValueError("one offset per axis required")
    return ComplexField(f.grid, np.roll(f.values, offsets, axis=tuple(range(f.grid.dim))))


def gaussian_field(
    grid: SpatialGrid,
    width: float = 1.0,
    center: tuple[float, ...] | float = 0.0,
    amplitude: complex = 1.0,
    wavevector: tuple[float, ...] | float = 0.0,
) -> ComplexField:
    """amplitude * exp(-|x-c|^2 / (2 width^2)) * exp(i k.x), the workhorse test field."""
    if isinstance(center, (int, float)):
        center = (float(center),) * grid.dim
    if isinstance(wavevector, (int, float)):
        wavevector = (float(wavevector),) * grid.dim
    r2 = np.zeros(grid.shape)
    phase = np.zeros(grid.shape)
    for c, x0, k in zip(grid.coords, center, wavevector):
        r2 = r2 + (c - x0) ** 2
        phase = phase + k * c
    return ComplexField(grid, amplitude * np.exp(-r2 / (2.0 * width**2)) * np.exp(1j * phase))


def plane_wave(grid: SpatialGrid, mode: tuple[int, ...] | int) -> ComplexField:
    """exp(i xi_j . x) for an on-lattice mode index j (per axis)."""
    if isinstance(mode, int):
        mode = (mode,) + (0,) * (grid.dim - 1)
    phase = np.zeros(grid.shape)
    for c, m in zip(grid.coords, mode):
        phase = phase + (np.pi * m / grid.half_width) * c
    return ComplexField(grid, np.exp(1j * phase))
