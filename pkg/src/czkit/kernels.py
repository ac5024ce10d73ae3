"""Parabolic Fourier kernels on periodic grids and their inequality checks.

Two kernels are evaluated by the inverse discrete Fourier transform of a
sampled multiplier:

* ``p``: ``1_{s<t} F^{-1} exp(int_s^t (psi(r, .) - lambda) dr)``, the
  fundamental solution of the damped evolution, and
* ``K``: ``1_{s<t} F^{-1} |xi|^gamma exp(int_s^t psi(r, .) dr)``, the kernel
  of the fractional-derivative-of-the-solution operator.

The checks implemented here are empirical versions of the kernel
inequalities the mixed-norm theory rests on: the exponentially damped L1
bound, the power-law moment bound, the Hoermander-type exterior difference
integral over a dilated cube, the three scale-collapse smoothness/decay
conditions, and the convolution operator-norm decay.

Whole-space integrals are approximated on the periodic box; sweeps use
scale-adapted boxes (extent proportional to the kernel scale) so that the
truncation bias is the same at every scale and fitted exponents are clean.
Time truncations carry explicit tail certificates in the reports.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .grid import SpaceTimeGrid, make_grid
from .partitions import Cube, Filtration
from .report import EstimateReport
from .symbols import SymbolSpec, eval_lattice, extend_constant_window, make_scaled

__all__ = [
    "KernelSlice",
    "time_integral",
    "kernel_slice",
    "l1_norm",
    "moment",
    "scaled_profile",
    "moment_power_law",
    "operator_slice_norm",
    "opnorm_power_law",
    "hormander_grid",
    "sample_cube_pairs",
    "hormander_Q",
    "assumption1_sweep",
]

# aliasing sentinel: Nyquist-shell multiplier mass above this fraction of the
# peak marks the slice as under-resolved
ALIAS_RTOL = 1e-8


@dataclass(eq=False)
class KernelSlice:
    """Sampled kernel values on the spatial lattice for one (t, s) pair."""

    grid: SpaceTimeGrid
    t: float
    s: float
    kind: str  # "p" or "K"
    lam: float
    gamma: float
    values: np.ndarray
    under_resolved: bool = False

    @property
    def gap(self) -> float:
        return self.t - self.s


class _SymbolOnGrid:
    """Per-piece lattice values of psi, for exact piecewise time integrals."""

    def __init__(self, spec: SymbolSpec, grid: SpaceTimeGrid):
        self.spec = spec
        self.grid = grid
        xi = grid.xi_vectors()
        self._piece_values = [
            eval_lattice(spec, 0.5 * (t0 + t1), xi) for t0, t1, _ in spec.profile.pieces
        ]

    def integral(self, a: float, b: float) -> np.ndarray:
        """``int_a^b psi(r, .) dr`` on the lattice, exact for the piecewise class."""
        acc = np.zeros(self.grid.spatial_shape, dtype=complex)
        for (length, _), vals in self._piece_iter(a, b):
            acc = acc + length * vals
        return acc

    def _piece_iter(self, a: float, b: float):
        profile = self.spec.profile
        lo, hi = profile.window
        if a < lo - 1e-12 or b > hi + 1e-12:
            from .symbols import TimeDomainError

            raise TimeDomainError(
                f"integration range [{a}, {b}] not covered by window [{lo}, {hi}]"
            )
        for (t0, t1, payload), vals in zip(profile.pieces, self._piece_values):
            length = min(b, t1) - max(a, t0)
            if length > 0:
                yield (length, payload), vals


def time_integral(spec: SymbolSpec, a: float, b: float, xi) -> complex:
    """Exact ``int_a^b psi(r, xi) dr`` for one frequency vector.

    The coefficient schedule is piecewise constant, so the integral is the
    overlap-weighted sum of per-piece symbol values; additivity in the time
    interval holds exactly.
    """
    if a > b:
        raise ValueError("need a <= b")
    from .symbols import eval_symbol

    spec.profile.overlaps(a, b)  # coverage check
    acc = 0j
    for t0, t1, _payload in spec.profile.pieces:
        lo, hi = max(a, t0), min(b, t1)
        if hi > lo:
            acc += (hi - lo) * eval_symbol(spec, 0.5 * (lo + hi), xi)
    return acc


def _multiplier(sog: _SymbolOnGrid, t: float, s: float, lam: float, kind: str) -> tuple[np.ndarray, bool]:
    # the scalar damping e^{-lam (t-s)} is deliberately NOT folded in here:
    # applying it after the transform keeps p_lam = e^{-lam gap} p_0 an exact
    # elementwise identity on the grid
    grid = sog.grid
    expo = sog.integral(s, t)
    if kind == "p":
        mult = np.exp(expo)
    elif kind == "K":
        mult = grid.xi_norm() ** sog.spec.gamma * np.exp(expo)
        mult[(0,) * grid.dim] = 0.0
    else:
        raise ValueError(f"unknown kernel kind {kind!r}")
    peak = float(np.max(np.abs(mult)))
    shell = float(np.max(np.abs(mult[grid.nyquist_shell()])))
    under = peak > 0 and shell > ALIAS_RTOL * peak
    return mult, under


def kernel_slice(
    spec: SymbolSpec,
    t: float,
    s0: float,
    grid: SpaceTimeGrid,
    lam: float = 0.0,
    kind: str = "p",
    _sog: _SymbolOnGrid | None = None,
) -> KernelSlice:
    """Kernel values at (t, s0) on the grid; identically zero for t <= s0."""
    if t <= s0:
        return KernelSlice(
            grid=grid,
            t=t,
            s=s0,
            kind=kind,
            lam=lam,
            gamma=spec.gamma,
            values=np.zeros(grid.spatial_shape, dtype=complex),
            under_resolved=False,
        )
    sog = _sog if _sog is not None else _SymbolOnGrid(spec, grid)
    mult, under = _multiplier(sog, t, s0, lam, kind)
    values = grid.inverse_fourier(mult)
    if kind == "p" and lam != 0.0:
        values = math.exp(-lam * (t - s0)) * values
    return KernelSlice(
        grid=grid, t=t, s=s0, kind=kind, lam=lam, gamma=spec.gamma, values=values, under_resolved=under
    )


def l1_norm(ks: KernelSlice) -> float:
    """Box Riemann sum of |kernel|."""
    return float(np.sum(np.abs(ks.values)) * ks.grid.cell_volume)


def admissible_moment_range(gamma: float, dim: int, strict: bool = True) -> float:
    """Supremum of admissible moment orders.

    The L2-based derivation of the moment bound needs
    ``mu < min(gamma, floor(d/2) + 1 - d/2)``; the moment itself is finite
    (and obeys the same power law) whenever ``mu < gamma``, which is the
    range used by the power-law sweeps (``strict=False``).
    """
    if strict:
        return min(gamma, dim // 2 + 1 - dim / 2.0)
    return gamma


def check_moment_order(mu: float, gamma: float, dim: int, strict: bool = True) -> None:
    sup = admissible_moment_range(gamma, dim, strict=strict)
    if not (0 <= mu < sup):
        kind = "min(gamma, floor(d/2)+1-d/2)" if strict else "gamma"
        raise ValueError(
            f"moment order mu={mu} outside the admissible range [0, {sup}) "
            f"(mu < {kind} with gamma={gamma}, d={dim})"
        )


def moment(ks: KernelSlice, mu: float, strict: bool = True) -> float:
    """``int |x|^mu |kernel| dx`` over the box.

    Raises for mu outside the admissible range
    ``0 <= mu < min(gamma, floor(d/2)+1 - d/2)`` (or the finite-moment
    range ``0 <= mu < gamma`` with ``strict=False``, which the power-law
    sweeps use).
    """
    check_moment_order(mu, ks.gamma, ks.grid.dim, strict=strict)
    r = ks.grid.radius()
    return float(np.sum(r**mu * np.abs(ks.values)) * ks.grid.cell_volume)


def scaled_profile(spec: SymbolSpec, t: float, s0: float, grid: SpaceTimeGrid) -> np.ndarray:
    """Scale-free multiplier ``1_{s<t} |xi|^gamma exp int psi(r, gap^{-1/gamma} xi) dr``.

    Pointwise it obeys ``|F| <= |xi|^gamma exp(-kappa |xi|^gamma)`` when the
    declared kappa is honest; the bound is what removes the gap from every
    L2 estimate downstream.
    """
    if t <= s0:
        return np.zeros(grid.spatial_shape, dtype=complex)
    gap = t - s0
    scaled = make_scaled(spec, gap ** (-1.0 / spec.gamma))
    sog = _SymbolOnGrid(scaled, grid)
    return grid.xi_norm() ** spec.gamma * np.exp(sog.integral(s0, t))


# ---------------------------------------------------------------------------
# power-law sweeps (scale-adapted boxes)


def _scaled_grid(dim: int, gap: float, gamma: float, base_extent: float, npoints: int) -> SpaceTimeGrid:
    return make_grid(dim, base_extent * gap ** (1.0 / gamma), npoints)


def _cover_window(spec: SymbolSpec, lo: float, hi: float) -> SymbolSpec:
    """Extend constant schedules over the sweep's time range (no-op when
    already covered; raises for jump schedules that fall short)."""
    wlo, whi = spec.profile.window
    if wlo <= lo and hi <= whi:
        return spec
    return extend_constant_window(spec, lo, hi)


def _fit_slope(x: np.ndarray, y: np.ndarray) -> float:
    return float(np.polyfit(np.log(np.asarray(x)), np.log(np.asarray(y)), 1)[0])


def moment_power_law(
    spec: SymbolSpec,
    mu: float,
    gaps=None,
    npoints: int = 4096,
    base_extent: float = 40.0,
    tol: float = 0.05,
) -> EstimateReport:
    """Fit ``log moment(mu)`` against ``log gap``; slope should be mu/gamma - 1.

    Uses boxes scaled to the kernel width per gap so the tail truncation
    bias is gap-independent and drops out of the slope.
    """
    check_moment_order(mu, spec.gamma, spec.dim, strict=False)
    if gaps is None:
        gaps = 2.0 ** np.arange(-4, 3)
    gaps = np.asarray(gaps, dtype=float)
    spec = _cover_window(spec, 0.0, float(np.max(gaps)))
    vals = []
    flagged = 0
    for gap in gaps:
        grid = _scaled_grid(spec.dim, gap, spec.gamma, base_extent, npoints)
        ks = kernel_slice(spec, float(gap), 0.0, grid, kind="K")
        flagged += int(ks.under_resolved)
        vals.append(moment(ks, mu, strict=False))
    slope = _fit_slope(gaps, np.asarray(vals))
    expected = mu / spec.gamma - 1.0
    passed = abs(slope - expected) <= tol and flagged == 0
    return EstimateReport(
        check="moment_power_law",
        params={"gamma": spec.gamma, "dim": spec.dim, "mu": mu, "npoints": npoints, "base_extent": base_extent},
        tolerances={"slope_abs": tol},
        summary={
            "fitted_slope": slope,
            "expected_slope": expected,
            "under_resolved_slices": flagged,
        },
        samples=[{"gap": float(g), "moment": float(v)} for g, v in zip(gaps, vals)],
        passed=passed,
    )


def operator_slice_norm(spec: SymbolSpec, t: float, s0: float, grid: SpaceTimeGrid) -> float:
    """Convolution-operator norm surrogate: the L1 norm of the K slice.

    Young's inequality turns this into an Lp -> Lp bound for every p, so a
    single number per (t, s) pair controls the whole scale of estimates.
    """
    if t <= s0:
        return 0.0
    return l1_norm(kernel_slice(spec, t, s0, grid, kind="K"))


def opnorm_power_law(
    spec: SymbolSpec,
    gaps=None,
    npoints: int = 4096,
    base_extent: float = 40.0,
    tol: float = 0.05,
) -> EstimateReport:
    """Fit of ``log l1(K(gap))`` against ``log gap``; slope should be -1."""
    if gaps is None:
        gaps = 2.0 ** np.arange(-4, 3)
    gaps = np.asarray(gaps, dtype=float)
    spec = _cover_window(spec, 0.0, float(np.max(gaps)))
    vals = [
        operator_slice_norm(spec, float(g), 0.0, _scaled_grid(spec.dim, g, spec.gamma, base_extent, npoints))
        for g in gaps
    ]
    slope = _fit_slope(gaps, np.asarray(vals))
    passed = abs(slope + 1.0) <= tol
    return EstimateReport(
        check="opnorm_power_law",
        params={"gamma": spec.gamma, "dim": spec.dim, "npoints": npoints, "base_extent": base_extent},
        tolerances={"slope_abs": tol},
        summary={"fitted_slope": slope, "expected_slope": -1.0},
        samples=[{"gap": float(g), "l1": float(v)} for g, v in zip(gaps, vals)],
        passed=passed,
    )


# ---------------------------------------------------------------------------
# Hoermander exterior difference integral


def hormander_grid(
    spec: SymbolSpec,
    q: Cube,
    npoints: int = 4096,
    time_cap: float = 64.0,
    extent_factor: float = 20.0,
) -> SpaceTimeGrid:
    """Scale-adapted box for level-m cube integrals.

    The exterior time integral runs to ``time_cap`` kernel time units, so
    the box must hold kernels of spatial scale up to
    ``(time_cap)^(1/gamma) * 2^-m``.
    """
    side = 2.0 ** (-q.m)
    extent = extent_factor * time_cap ** (1.0 / spec.gamma) * side
    return make_grid(spec.dim, extent, npoints)


def sample_cube_pairs(filt: Filtration, q: Cube, count: int, rng: np.random.Generator):
    """Random ((s, y), (r, z)) pairs in unit-cube coordinates mapped into q."""
    box = filt.box(q)
    unit = rng.random((count, 2, 1 + filt.dim))
    pairs = []
    for u in unit:
        pts = []
        for row in u:
            s = box.t0 + row[0] * (box.t1 - box.t0)
            y = np.array([lo + r * (hi - lo) for r, (lo, hi) in zip(row[1:], box.spans)])
            pts.append((s, y))
        pairs.append(tuple(pts))
    return pairs


def map_unit_pairs(filt: Filtration, q: Cube, unit: np.ndarray):
    """Map unit-cube pair coordinates (n, 2, 1+d) into the cube's box.

    Sharing one unit sample across levels removes sampling noise from
    scale-invariance comparisons.
    """
    box = filt.box(q)
    pairs = []
    for u in np.asarray(unit):
        pts = []
        for row in u:
            s = box.t0 + row[0] * (box.t1 - box.t0)
            y = np.array([lo + r * (hi - lo) for r, (lo, hi) in zip(row[1:], box.spans)])
            pts.append((float(s), y))
        pairs.append(tuple(pts))
    return pairs


def _exterior_mask(grid: SpaceTimeGrid, spans) -> np.ndarray:
    xv = grid.x_vectors()
    inside = np.ones(grid.spatial_shape, dtype=bool)
    for axis, (lo, hi) in enumerate(spans):
        inside &= (xv[..., axis] >= lo) & (xv[..., axis] < hi)
    return ~inside


def _phase(grid: SpaceTimeGrid, y: np.ndarray) -> np.ndarray:
    xi = grid.xi_vectors()
    return np.exp(-1j * np.tensordot(xi, np.asarray(y, float), axes=([-1], [0])))


def _abs_l1(grid: SpaceTimeGrid, multiplier: np.ndarray, mask=None) -> float:
    vals = np.abs(grid.inverse_fourier(multiplier))
    if mask is not None:
        vals = vals[mask]
    return float(np.sum(vals) * grid.cell_volume)


def hormander_Q(
    spec: SymbolSpec,
    q: Cube,
    sample_pairs,
    grid: SpaceTimeGrid,
    filtration: Filtration | None = None,
    n_time: int = 33,
    time_cap: float = 64.0,
) -> EstimateReport:
    """Exterior integral of kernel differences over the dilated cube.

    For each sampled pair ((s, y), (r, z)) in q x q the integral of
    ``|K(t, x, s, y) - K(t, x, r, z)|`` over the complement of the dilated
    box splits into three parts, mirroring how the bound is proved:

    * I1: y vs z at equal source time, over far times,
    * I2: s vs r at equal source point, over far times,
    * I3: twice the worst single-kernel mass on the near-time exterior ring.

    Far-time integrals are truncated at ``time_cap`` kernel units with a
    reported power-law tail certificate; the unresolvable first sliver of
    the near-time integral is certified the same way.  Differences are
    formed in frequency via phase factors, never by interpolation.
    """
    filt = filtration or Filtration(spec.gamma, spec.dim)
    box = filt.box(q)
    qstar = filt.dilate(q)
    scale0 = (qstar.t1 - qstar.t0) / 4.0  # 2^(-m*gamma)
    t0 = box.t0
    spec = _cover_window(spec, t0, t0 + time_cap * scale0)
    sog = _SymbolOnGrid(spec, grid)
    gamma = spec.gamma

    # far region: t >= t0 + 4*scale0, truncated at t0 + time_cap*scale0
    t_far = t0 + scale0 * np.geomspace(4.0, time_cap, n_time)
    # near region: t in (t0, t0 + 4*scale0), exterior of Q* in space
    ext_mask = _exterior_mask(grid, qstar.spans)
    tau_min = (4.0 * grid.dx) ** gamma

    rows = []
    flagged = 0
    for (s, y), (r, z) in sample_pairs:
        phase_y = _phase(grid, y)
        phase_z = _phase(grid, z)
        sl, rl = (s, r) if s <= r else (r, s)

        g1 = np.empty(n_time)
        g2 = np.empty(n_time)
        for i, t in enumerate(t_far):
            m_s, u1 = _multiplier(sog, t, s, 0.0, "K")
            m_r, u2 = _multiplier(sog, t, r, 0.0, "K")
            flagged += int(u1) + int(u2)
            g1[i] = _abs_l1(grid, m_s * (phase_y - phase_z))
            g2[i] = _abs_l1(grid, (m_s - m_r) * phase_z)
        i1 = float(np.trapezoid(g1, t_far))
        i2 = float(np.trapezoid(g2, t_far))
        # integrands decay like (t-s)^(-1-1/gamma) and (t-b)^(-2)
        i1_tail = gamma * (t_far[-1] - s) * g1[-1]
        i2_tail = (t_far[-1] - rl) * g2[-1]

        i3_best = 0.0
        sliver = 0.0
        for src_t, src_y in ((s, y), (r, z)):
            t_hi = t0 + 4.0 * scale0
            if t_hi - src_t <= tau_min:
                continue
            taus = np.geomspace(tau_min, t_hi - src_t, n_time)
            ph = _phase(grid, src_y)
            g3 = np.empty(n_time)
            for i, tau in enumerate(taus):
                m_k, u3 = _multiplier(sog, src_t + tau, src_t, 0.0, "K")
                flagged += int(u3)
                g3[i] = _abs_l1(grid, m_k * ph, mask=ext_mask)
            val = float(np.trapezoid(g3, taus))
            if val > i3_best:
                i3_best = val
                sliver = float(g3[0] * tau_min)
        i3 = 2.0 * i3_best

        rows.append(
            {
                "s": float(s),
                "r": float(r),
                "y": np.asarray(y).tolist(),
                "z": np.asarray(z).tolist(),
                "I1": i1,
                "I2": i2,
                "I3": i3,
                "I1_tail": float(i1_tail),
                "I2_tail": float(i2_tail),
                "I3_sliver": sliver,
                "total": i1 + i2 + i3,
            }
        )

    totals = np.array([row["total"] for row in rows]) if rows else np.zeros(1)
    tails = (
        np.array([row["I1_tail"] + row["I2_tail"] + row["I3_sliver"] for row in rows])
        if rows
        else np.zeros(1)
    )
    return EstimateReport(
        check="hormander_Q",
        params={
            "gamma": gamma,
            "dim": spec.dim,
            "level": q.m,
            "pairs": len(rows),
            "time_cap": time_cap,
            "n_time": n_time,
            "extent": grid.extent,
            "npoints": grid.npoints,
        },
        tolerances={},
        summary={
            "max_total": float(np.max(totals)),
            "max_I1": float(max((row["I1"] for row in rows), default=0.0)),
            "max_I2": float(max((row["I2"] for row in rows), default=0.0)),
            "max_I3": float(max((row["I3"] for row in rows), default=0.0)),
            "max_tail_certificate": float(np.max(tails)),
            "under_resolved_slices": flagged,
        },
        samples=rows,
        passed=bool(np.all(np.isfinite(totals))),
    )


# ---------------------------------------------------------------------------
# scale-collapse sweep of the three kernel conditions


def _condition_space_diff(spec, A, u, npoints, ext_factor, n_time, cap):
    """int_a^inf int |K(t,.,s,y) - K(t,.,s,z)| with u = |y-z| (a-s)^{-1/gamma}."""
    gamma = spec.gamma
    grid = make_grid(spec.dim, ext_factor * (cap * A) ** (1.0 / gamma), npoints)
    sog = _SymbolOnGrid(spec, grid)
    w = np.zeros(spec.dim)
    w[0] = u * A ** (1.0 / gamma)
    phase_diff = 1.0 - _phase(grid, w)
    ts = A * np.geomspace(1.0, cap, n_time)
    g = np.empty(n_time)
    for i, t in enumerate(ts):
        m_k, _ = _multiplier(sog, t, 0.0, 0.0, "K")
        g[i] = _abs_l1(grid, m_k * phase_diff)
    val = float(np.trapezoid(g, ts))
    tail = gamma * ts[-1] * g[-1]
    return val, tail


def _condition_time_diff(spec, A, u, npoints, ext_factor, n_time, cap):
    """int_a^inf int |K(t,.,s,y) - K(t,.,r,y)| with u = |s-r|/(a-b), b = r = 0."""
    gamma = spec.gamma
    grid = make_grid(spec.dim, ext_factor * (cap * A) ** (1.0 / gamma), npoints)
    sog = _SymbolOnGrid(spec, grid)
    h = u * A  # s = -h
    ts = A * np.geomspace(1.0, cap, n_time)
    g = np.empty(n_time)
    for i, t in enumerate(ts):
        m_s, _ = _multiplier(sog, t, -h, 0.0, "K")
        m_r, _ = _multiplier(sog, t, 0.0, 0.0, "K")
        g[i] = _abs_l1(grid, m_s - m_r)
    val = float(np.trapezoid(g, ts))
    tail = ts[-1] * g[-1]
    return val, tail


def _condition_tail(spec, B, u, mu, npoints, ext_factor, n_time):
    """int_s^b int_{|x| >= rho} |K| with u = (b-s)^{1/gamma} / rho.

    Also returns the Chebyshev majorant rho^{-mu} int int |x|^mu |K|, which
    is the proof-side envelope: an exact power law N u^mu once boxes are
    scale-adapted.  The domination value <= majorant holds sample by sample
    on the very same slice data.
    """
    gamma = spec.gamma
    rho = B ** (1.0 / gamma) / u
    extent = max(ext_factor * B ** (1.0 / gamma), 4.0 * rho)
    grid = make_grid(spec.dim, extent, npoints)
    sog = _SymbolOnGrid(spec, grid)
    r = grid.radius()
    mask = r >= rho
    tau_min = (4.0 * grid.dx) ** gamma
    taus = np.geomspace(tau_min, B, n_time)
    g = np.empty(n_time)
    gm = np.empty(n_time)
    for i, tau in enumerate(taus):
        m_k, _ = _multiplier(sog, tau, 0.0, 0.0, "K")
        vals = np.abs(grid.inverse_fourier(m_k))
        g[i] = float(np.sum(vals[mask]) * grid.cell_volume)
        gm[i] = float(np.sum(r**mu * vals) * grid.cell_volume)
    val = float(np.trapezoid(g, taus))
    majorant = float(np.trapezoid(gm, taus)) / rho**mu
    sliver = float(g[0] * tau_min)
    return val, majorant, sliver


def assumption1_sweep(
    spec: SymbolSpec,
    u_values=None,
    scales=(0.5, 1.0, 2.0),
    mu: float | None = None,
    npoints: int = 2048,
    n_time: int = 33,
    cap: float = 64.0,
    ext_factor: float = 20.0,
    collapse_tol: float = 0.25,
    slope_tol: float = 0.1,
) -> EstimateReport:
    """Scale-collapse sweep of the three kernel smoothness/decay conditions.

    For each condition the left-hand integral is evaluated over a sweep of
    the scale-invariant argument u, at several absolute scales per u:

    * ``space_diff``: difference in the source point; envelope linear in u,
    * ``time_diff``: difference in the source time; envelope linear in u,
    * ``tail``: mass outside a ball; envelope ``N u^mu`` via the moment
      (Chebyshev) majorant, which is computed alongside and must dominate
      the measured value sample by sample.

    The report asserts (a) values at equal u from different scales agree
    within ``collapse_tol``, and (b) fitted envelope exponents: 1 for the
    two difference conditions (true small-u behaviour), mu for the tail
    majorant.  Configurations whose geometry exceeds the window or grid are
    skipped and logged.
    """
    gamma = spec.gamma
    if mu is None:
        mu = gamma / 2.0
    if u_values is None:
        u_values = np.geomspace(0.05, 0.8, 6)
    u_values = np.asarray(u_values, dtype=float)
    from .symbols import TimeDomainError

    max_scale = float(max(scales))
    try:
        spec = _cover_window(spec, -float(np.max(u_values)) * max_scale, cap * max_scale)
    except TimeDomainError:
        pass  # jump schedule: per-configuration skipping below handles it
    rows = []
    skipped = []
    window = spec.profile.window

    by_cond: dict[str, dict[float, list[float]]] = {"space_diff": {}, "time_diff": {}, "tail": {}}
    majorants: dict[float, list[float]] = {}
    dominated = True
    for u in u_values:
        for A in scales:
            # condition geometry must be representable in the symbol window
            if window[0] > -u * A or window[1] < cap * A:
                skipped.append({"condition": "time_diff", "u": float(u), "scale": float(A)})
                have_time = False
            else:
                have_time = True
            if window[1] < cap * A or window[0] > 0.0:
                skipped.append({"condition": "space_diff", "u": float(u), "scale": float(A)})
                have_space = False
            else:
                have_space = True

            if have_space:
                val, tail = _condition_space_diff(spec, A, u, npoints, ext_factor, n_time, cap)
                by_cond["space_diff"].setdefault(float(u), []).append(val)
                rows.append(
                    {"condition": "space_diff", "u": float(u), "scale": float(A), "value": val, "tail": tail}
                )
            if have_time:
                val, tail = _condition_time_diff(spec, A, u, npoints, ext_factor, n_time, cap)
                by_cond["time_diff"].setdefault(float(u), []).append(val)
                rows.append(
                    {"condition": "time_diff", "u": float(u), "scale": float(A), "value": val, "tail": tail}
                )
            if window[1] >= A and window[0] <= 0.0:
                val, major, sliver = _condition_tail(spec, A, u, mu, npoints, ext_factor, n_time)
                by_cond["tail"].setdefault(float(u), []).append(val)
                majorants.setdefault(float(u), []).append(major)
                dominated = dominated and (val <= major * (1.0 + 1e-9))
                rows.append(
                    {
                        "condition": "tail",
                        "u": float(u),
                        "scale": float(A),
                        "value": val,
                        "majorant": major,
                        "sliver": sliver,
                    }
                )
            else:
                skipped.append({"condition": "tail", "u": float(u), "scale": float(A)})

    def collapse_dev(groups: dict[float, list[float]]) -> float:
        worst = 0.0
        for vals in groups.values():
            if len(vals) >= 2 and min(vals) > 0:
                worst = max(worst, max(vals) / min(vals) - 1.0)
        return worst

    def mean_curve(groups: dict[float, list[float]]):
        us = np.array(sorted(groups))
        vs = np.array([np.mean(groups[u]) for u in us])
        return us, vs

    summary: dict = {"mu": mu, "dominated": dominated, "skipped": len(skipped)}
    passed = dominated
    for cond, expected in (("space_diff", 1.0), ("time_diff", 1.0)):
        if by_cond[cond]:
            us, vs = mean_curve(by_cond[cond])
            slope = _fit_slope(us, vs)
            dev = collapse_dev(by_cond[cond])
            summary[f"{cond}_slope"] = slope
            summary[f"{cond}_collapse_dev"] = dev
            passed = passed and abs(slope - expected) <= slope_tol and dev <= collapse_tol
    if majorants:
        us, vs = mean_curve(majorants)
        slope = _fit_slope(us, vs)
        summary["tail_majorant_slope"] = slope
        summary["tail_collapse_dev"] = collapse_dev(by_cond["tail"])
        if by_cond["tail"]:
            us2, vs2 = mean_curve(by_cond["tail"])
            summary["tail_value_slope"] = _fit_slope(us2, vs2)
        passed = passed and abs(slope - mu) <= slope_tol and summary["tail_collapse_dev"] <= collapse_tol

    return EstimateReport(
        check="assumption1_sweep",
        params={
            "gamma": gamma,
            "dim": spec.dim,
            "npoints": npoints,
            "n_time": n_time,
            "cap": cap,
            "scales": list(scales),
        },
        tolerances={"collapse_rel": collapse_tol, "slope_abs": slope_tol},
        summary=summary,
        samples=rows + [dict(s, value="skipped") for s in skipped],
        passed=bool(passed),
    )
