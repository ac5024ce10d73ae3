"""Periodic space-time grids and Fourier transform conventions.

The spatial box is ``[-L/2, L/2)^d`` sampled at ``N`` points per axis
(``N`` a power of two), with the angular frequency lattice ``2*pi*k/L``.
Transforms follow the integral convention ``F f(xi) = int e^{-i x.xi} f dx``
with inverse ``(2*pi)^{-d} int e^{i xi.x} ... dxi``, discretized so that
``forward_fourier`` and ``inverse_fourier`` are exact inverses on the grid.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = ["SpaceTimeGrid", "make_grid"]


@dataclass(eq=False)
class SpaceTimeGrid:
    """Periodic spatial lattice plus ordered time nodes.

    Treated as immutable after construction; derived arrays are cached.
    """

    dim: int
    extent: float
    npoints: int
    time_nodes: np.ndarray
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if self.dim < 1 or self.dim > 3:
            raise ValueError("dim must be in {1, 2, 3}")
        n = self.npoints
        if n < 2 or (n & (n - 1)) != 0:
            raise ValueError("npoints must be a power of two")
        if self.extent <= 0:
            raise ValueError("extent must be positive")
        self.time_nodes = np.asarray(self.time_nodes, dtype=float)
        if self.time_nodes.ndim != 1 or len(self.time_nodes) < 2:
            raise ValueError("need at least two time nodes")
        if np.any(np.diff(self.time_nodes) <= 0):
            raise ValueError("time nodes must be strictly increasing")

    # -- geometry -----------------------------------------------------------

    @property
    def dx(self) -> float:
        return self.extent / self.npoints

    @property
    def cell_volume(self) -> float:
        return self.dx**self.dim

    @property
    def spatial_shape(self) -> tuple[int, ...]:
        return (self.npoints,) * self.dim

    @property
    def spatial_axes(self) -> tuple[int, ...]:
        return tuple(range(-self.dim, 0))

    def x_axis(self) -> np.ndarray:
        return -0.5 * self.extent + self.dx * np.arange(self.npoints)

    def x_vectors(self) -> np.ndarray:
        """Physical coordinates, shape ``spatial_shape + (d,)``."""
        if "x_vectors" not in self._cache:
            ax = self.x_axis()
            grids = np.meshgrid(*([ax] * self.dim), indexing="ij")
            self._cache["x_vectors"] = np.stack(grids, axis=-1)
        return self._cache["x_vectors"]

    def radius(self) -> np.ndarray:
        """|x| on the physical lattice."""
        if "radius" not in self._cache:
            xv = self.x_vectors()
            self._cache["radius"] = np.sqrt(np.sum(xv * xv, axis=-1))
        return self._cache["radius"]

    def xi_axis(self) -> np.ndarray:
        return 2.0 * np.pi * np.fft.fftfreq(self.npoints, d=self.dx)

    def xi_vectors(self) -> np.ndarray:
        """Frequency lattice in FFT order, shape ``spatial_shape + (d,)``."""
        if "xi_vectors" not in self._cache:
            ax = self.xi_axis()
            grids = np.meshgrid(*([ax] * self.dim), indexing="ij")
            self._cache["xi_vectors"] = np.stack(grids, axis=-1)
        return self._cache["xi_vectors"]

    def xi_norm(self) -> np.ndarray:
        if "xi_norm" not in self._cache:
            xv = self.xi_vectors()
            self._cache["xi_norm"] = np.sqrt(np.sum(xv * xv, axis=-1))
        return self._cache["xi_norm"]

    def nyquist_shell(self) -> np.ndarray:
        """Boolean mask of lattice points with any axis at the Nyquist index."""
        if "nyquist" not in self._cache:
            half = self.npoints // 2
            mask = np.zeros(self.spatial_shape, dtype=bool)
            for axis in range(self.dim):
                sl = [slice(None)] * self.dim
                sl[axis] = half
                mask[tuple(sl)] = True
            self._cache["nyquist"] = mask
        return self._cache["nyquist"]

    # -- time ---------------------------------------------------------------

    @property
    def n_nodes(self) -> int:
        return len(self.time_nodes)

    def dt_cells(self) -> np.ndarray:
        return np.diff(self.time_nodes)

    def node_weights(self) -> np.ndarray:
        """Left-rule quadrature weights on the half-open time window."""
        w = np.zeros(self.n_nodes)
        w[:-1] = self.dt_cells()
        return w

    # -- transforms ----------------------------------------------------------

    def forward_fourier(self, values: np.ndarray) -> np.ndarray:
        """Continuum-normalized transform of values sampled at x in [-L/2, L/2)."""
        shifted = np.fft.ifftshift(values, axes=self.spatial_axes)
        return np.fft.fftn(shifted, axes=self.spatial_axes) * self.cell_volume

    def inverse_fourier(self, multiplier: np.ndarray) -> np.ndarray:
        """Inverse transform producing values at x in [-L/2, L/2)."""
        out = np.fft.ifftn(multiplier, axes=self.spatial_axes)
        out = np.fft.fftshift(out, axes=self.spatial_axes)
        return out * (self.npoints / self.extent) ** self.dim


def make_grid(
    dim: int,
    extent: float,
    npoints: int,
    t0: float = 0.0,
    t1: float = 1.0,
    nodes: int = 2,
) -> SpaceTimeGrid:
    """Uniform-in-time grid with ``nodes`` time nodes spanning [t0, t1]."""
    return SpaceTimeGrid(
        dim=dim,
        extent=float(extent),
        npoints=int(npoints),
        time_nodes=np.linspace(t0, t1, int(nodes)),
    )
