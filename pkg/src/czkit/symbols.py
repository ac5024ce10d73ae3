"""Time-measurable Fourier multiplier symbols and admissibility checks.

A symbol is a map ``psi(t, xi)``, piecewise constant in ``t`` and smooth in
``xi`` away from the origin, that generates a parabolic evolution through
the multiplier ``exp(int psi dr)``.  Admissibility means the ellipticity
lower bound ``Re[-psi] >= kappa |xi|^gamma`` together with derivative decay
``|D^alpha psi| <= kappa^{-1} |xi|^(gamma - |alpha|)`` for multi-indices up
to order ``floor(d/2) + 1``.

Builders cover the standard families: fractional powers of the Laplacian
with a time-dependent coefficient, even-order constant-coefficient
polynomial symbols, jump-type (Levy) generators evaluated by radial-angular
quadrature, fractional compositions, and argument rescalings.
``verify_conditions`` measures the two constants empirically on a sample
lattice and reports per-sample rows.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations_with_replacement

import numpy as np
from scipy.integrate import quad

from .report import EstimateReport

__all__ = [
    "SymbolError",
    "TimeDomainError",
    "TimeProfile",
    "SymbolSpec",
    "make_fractional",
    "make_poly2m",
    "make_levy",
    "compose",
    "make_scaled",
    "eval_symbol",
    "eval_lattice",
    "multi_indices",
    "max_derivative_order",
    "default_xi_lattice",
    "ellipticity_constant",
    "verify_conditions",
]


class SymbolError(ValueError):
    """Invalid symbol data (failed validation at construction)."""


class TimeDomainError(SymbolError):
    """Time argument outside the coverage of the symbol's schedule."""


@dataclass(frozen=True, eq=False)
class TimeProfile:
    """Piecewise-constant coefficient schedule: ordered (t0, t1, payload).

    Pieces are contiguous and half-open [t0, t1); the final right endpoint
    is treated as closed so the window boundary itself is evaluable.
    """

    pieces: tuple

    def __post_init__(self):
        if not self.pieces:
            raise SymbolError("time profile needs at least one piece")
        prev_end = None
        for t0, t1, _ in self.pieces:
            if not t0 < t1:
                raise SymbolError(f"empty or inverted piece [{t0}, {t1})")
            if prev_end is not None and not math.isclose(prev_end, t0, rel_tol=0, abs_tol=1e-12):
                raise SymbolError(f"pieces must be contiguous: gap at {prev_end} -> {t0}")
            prev_end = t1

    @property
    def window(self) -> tuple[float, float]:
        return (self.pieces[0][0], self.pieces[-1][1])

    def breakpoints(self) -> tuple[float, ...]:
        return tuple(p[0] for p in self.pieces) + (self.pieces[-1][1],)

    def index_at(self, t: float) -> int:
        lo, hi = self.window
        if not (lo <= t <= hi):
            raise TimeDomainError(f"t={t} outside coefficient window [{lo}, {hi}]")
        for i, (t0, t1, _) in enumerate(self.pieces):
            if t0 <= t < t1:
                return i
        return len(self.pieces) - 1

    def payload_at(self, t: float):
        return self.pieces[self.index_at(t)][2]

    def overlaps(self, a: float, b: float) -> list[tuple[float, object]]:
        """(length, payload) of each piece intersected with [a, b]."""
        lo, hi = self.window
        if a < lo - 1e-12 or b > hi + 1e-12:
            raise TimeDomainError(
                f"integration range [{a}, {b}] not covered by window [{lo}, {hi}]"
            )
        out = []
        for t0, t1, payload in self.pieces:
            length = min(b, t1) - max(a, t0)
            if length > 0:
                out.append((length, payload))
        return out


@dataclass(frozen=True, eq=False)
class SymbolSpec:
    """A declared symbol: family, order, ellipticity constant, schedule."""

    kind: str
    gamma: float
    kappa: float
    dim: int
    profile: TimeProfile
    params: dict

    def __post_init__(self):
        if self.gamma <= 0:
            raise SymbolError("gamma must be positive")
        if self.kappa <= 0:
            raise SymbolError("kappa must be positive")
        if self.dim < 1:
            raise SymbolError("dim must be >= 1")


def max_derivative_order(dim: int) -> int:
    """Highest multi-index order used by the admissibility checks."""
    return dim // 2 + 1


def multi_indices(dim: int, order: int) -> list[tuple[int, ...]]:
    """All multi-indices of exact total order ``order`` in ``dim`` variables."""
    if order == 0:
        return [(0,) * dim]
    out = []
    for combo in combinations_with_replacement(range(dim), order):
        alpha = [0] * dim
        for axis in combo:
            alpha[axis] += 1
        out.append(tuple(alpha))
    return out


# ---------------------------------------------------------------------------
# evaluation


def _norm(xi: np.ndarray) -> np.ndarray:
    return np.sqrt(np.sum(xi * xi, axis=-1))


def eval_lattice(spec: SymbolSpec, t: float, xi) -> np.ndarray:
    """Evaluate ``psi(t, .)`` on an array of frequency vectors ``(..., d)``.

    The origin is mapped to 0 for every family (the modulus bound forces
    ``|psi| -> 0`` there since gamma > 0).
    """
    xi = np.atleast_2d(np.asarray(xi, dtype=float))
    if xi.shape[-1] != spec.dim:
        raise ValueError(f"frequency vectors must have length {spec.dim}")
    kind = spec.kind
    if kind == "fractional":
        a = spec.profile.payload_at(t)
        return -a * _norm(xi) ** spec.gamma
    if kind == "poly2m":
        terms = spec.profile.payload_at(t)
        acc = np.zeros(xi.shape[:-1], dtype=complex)
        for exps, coeff in terms:
            mono = np.ones(xi.shape[:-1])
            for axis, p in enumerate(exps):
                if p:
                    mono = mono * xi[..., axis] ** p
            acc += coeff * mono
        return -acc
    if kind == "levy":
        dens = spec.profile.payload_at(t)
        return _levy_eval(spec, dens, xi)
    if kind == "composed":
        p = spec.params
        psi1 = eval_lattice(p["s1"], t, xi)
        psi2 = eval_lattice(p["s2"], t, xi)
        return -np.power(-psi1, p["a"]) * np.power(-psi2, p["b"])
    if kind == "scaled":
        p = spec.params
        return eval_lattice(p["base"], t, p["c"] * xi)
    raise SymbolError(f"unknown symbol kind {spec.kind!r}")


def eval_symbol(spec: SymbolSpec, t: float, xi) -> complex:
    """Pointwise ``psi(t, xi)`` for one frequency vector."""
    xi = np.asarray(xi, dtype=float).reshape(1, spec.dim)
    return complex(eval_lattice(spec, t, xi)[0])


# ---------------------------------------------------------------------------
# fractional family


def _looks_like_pieces(profile) -> bool:
    if not isinstance(profile, (list, tuple)) or not profile:
        return False
    for item in profile:
        if not (isinstance(item, (list, tuple)) and len(item) == 3):
            return False
        t0, t1, _ = item
        if not (isinstance(t0, (int, float)) and isinstance(t1, (int, float))):
            return False
    return True


def _as_pieces(profile, window: tuple[float, float]):
    """Normalize constant-payload / list-of-(t0, t1, payload) input to pieces."""
    if _looks_like_pieces(profile):
        return tuple((float(t0), float(t1), payload) for t0, t1, payload in profile)
    return ((float(window[0]), float(window[1]), profile),)


def make_fractional(a_profile, gamma: float, dim: int, window=(0.0, 1.0)) -> SymbolSpec:
    """Symbol ``-a(t)|xi|^gamma`` of the scaled fractional Laplacian.

    ``a_profile`` is a complex coefficient (constant schedule on ``window``)
    or a list of ``(t0, t1, a)`` pieces.  Requires ``Re a > 0`` on every
    piece; the declared kappa is ``min(min Re a, min 1/|a|)`` over pieces.
    """
    raw = _as_pieces(a_profile, window)
    pieces = []
    kappa = math.inf
    for t0, t1, a in raw:
        a = complex(a)
        if a.real <= 0:
            raise SymbolError(f"coefficient {a} on [{t0}, {t1}) has Re a <= 0")
        kappa = min(kappa, a.real, 1.0 / abs(a))
        pieces.append((t0, t1, a))
    return SymbolSpec(
        kind="fractional",
        gamma=float(gamma),
        kappa=kappa,
        dim=int(dim),
        profile=TimeProfile(tuple(pieces)),
        params={},
    )


# ---------------------------------------------------------------------------
# polynomial (order 2m) family


def _sphere_samples(dim: int, n: int) -> np.ndarray:
    if dim == 1:
        return np.array([[1.0], [-1.0]])
    if dim == 2:
        theta = 2.0 * np.pi * (np.arange(n) + 0.5) / n
        return np.column_stack([np.cos(theta), np.sin(theta)])
    # Fibonacci lattice, adequate for a min/max sweep on S^2
    i = np.arange(n) + 0.5
    phi = np.arccos(1 - 2 * i / n)
    golden = np.pi * (1 + np.sqrt(5.0))
    theta = golden * i
    return np.column_stack(
        [np.sin(phi) * np.cos(theta), np.sin(phi) * np.sin(theta), np.cos(phi)]
    )


def make_poly2m(coeffs_profile, m: int, dim: int, window=(0.0, 1.0), sphere_n: int = 1024) -> SymbolSpec:
    """Symbol ``-sum a^{ab}(t) xi^a xi^b`` over |a| = |b| = m (order 2m).

    Each piece's payload is an iterable of ``(alpha, beta, coeff)`` with
    multi-indices of order m.  Coercivity of the real part is checked on a
    dense sample sphere at construction; kappa is the measured minimum.
    """
    m = int(m)
    if m < 1:
        raise SymbolError("m must be >= 1")
    raw = _as_pieces(coeffs_profile, window)
    sphere = _sphere_samples(dim, sphere_n)
    pieces = []
    kappa = math.inf
    for t0, t1, terms in raw:
        canon = []
        for alpha, beta, coeff in terms:
            alpha = tuple(int(v) for v in alpha)
            beta = tuple(int(v) for v in beta)
            if len(alpha) != dim or len(beta) != dim:
                raise SymbolError("multi-index length must equal dim")
            if sum(alpha) != m or sum(beta) != m:
                raise SymbolError(f"need |alpha| = |beta| = {m}, got {alpha}, {beta}")
            exps = tuple(a + b for a, b in zip(alpha, beta))
            canon.append((exps, complex(coeff)))
        vals = np.zeros(len(sphere))
        for exps, coeff in canon:
            mono = np.ones(len(sphere))
            for axis, p in enumerate(exps):
                if p:
                    mono = mono * sphere[:, axis] ** p
            vals += coeff.real * mono
        worst = int(np.argmin(vals))
        if vals[worst] <= 0:
            raise SymbolError(
                "coercivity fails on the sample sphere at xi = "
                f"{np.round(sphere[worst], 6).tolist()} (value {vals[worst]:.6g})"
            )
        kappa = min(kappa, float(vals[worst]))
        pieces.append((t0, t1, tuple(canon)))
    return SymbolSpec(
        kind="poly2m",
        gamma=2.0 * m,
        kappa=kappa,
        dim=int(dim),
        profile=TimeProfile(tuple(pieces)),
        params={"m": m},
    )


# ---------------------------------------------------------------------------
# Levy (jump) family


@lru_cache(maxsize=64)
def _levy_radial_constants(gamma: float) -> tuple[float, float]:
    """Constants of the scaled radial profile of the jump integral.

    For unit direction overlap b = xi.w the radial integral equals
    ``|b|^gamma (cr + i sign(b) ci)`` for gamma != 1 and
    ``|b| cr + i b (ci - log|b|)`` for gamma = 1, where

        cr = int_0^inf (cos u - 1) u^(-1-gamma) du
        ci = int_0^inf (sin u - u*chi(u)) u^(-1-gamma) du

    with chi = 0 (gamma < 1), 1_{u<=1} (gamma = 1), 1 (gamma > 1).
    """
    g = float(gamma)
    # real part: remove the u^2/2 Taylor term near 0 so quad sees a smooth
    # integrand, and integrate the oscillatory tail with the cos weight.
    head = quad(lambda u: (math.cos(u) - 1 + 0.5 * u * u) * u ** (-1 - g), 0, 1, limit=200)[0]
    head -= 1.0 / (2.0 * (2.0 - g))
    tail_cos = quad(lambda u: u ** (-1 - g), 1, np.inf, weight="cos", wvar=1.0, limit=200)[0]
    cr = head + tail_cos - 1.0 / g

    tail_sin = quad(lambda u: u ** (-1 - g), 1, np.inf, weight="sin", wvar=1.0, limit=200)[0]
    if g < 1:
        ci = quad(lambda u: math.sin(u) * u ** (-1 - g), 0, 1, limit=200)[0] + tail_sin
    elif g == 1:
        ci = quad(lambda u: (math.sin(u) - u) * u ** (-2), 0, 1, limit=200)[0] + tail_sin
    else:
        ci = (
            quad(lambda u: (math.sin(u) - u) * u ** (-1 - g), 0, 1, limit=200)[0]
            + tail_sin
            - 1.0 / (g - 1.0)
        )
    return cr, ci


def _levy_directions(dim: int, n_angular: int) -> tuple[np.ndarray, np.ndarray]:
    if dim == 1:
        return np.array([[1.0], [-1.0]]), np.array([1.0, 1.0])
    if dim == 2:
        theta = 2.0 * np.pi * (np.arange(n_angular) + 0.5) / n_angular
        dirs = np.column_stack([np.cos(theta), np.sin(theta)])
        return dirs, np.full(n_angular, 2.0 * np.pi / n_angular)
    raise SymbolError("levy symbols are supported for dim in {1, 2}")


def _density_values(density, dirs: np.ndarray) -> np.ndarray:
    if isinstance(density, (int, float)):
        return np.full(len(dirs), float(density))
    if callable(density):
        vals = np.asarray([density(w) for w in dirs], dtype=float)
        return vals
    if isinstance(density, (tuple, list)) and len(density) == 2 and str(density[0]) == "two_sided":
        plus, minus = density[1]
        if dirs.shape[1] != 1:
            raise SymbolError("two_sided densities are one-dimensional")
        return np.where(dirs[:, 0] > 0, float(plus), float(minus))
    vals = np.asarray(density, dtype=float)
    if vals.shape != (len(dirs),):
        raise SymbolError("density array must match the angular node count")
    return vals


def make_levy(m_density, gamma: float, dim: int, window=(0.0, 1.0), n_angular: int = 1024) -> SymbolSpec:
    """Jump-generator symbol from a zero-order homogeneous density.

    ``m_density`` gives, per piece, the angular density m(t, w) on the unit
    sphere: a nonnegative constant, a callable of the direction vector, a
    ``("two_sided", (m_plus, m_minus))`` pair in one dimension, or an array
    over the angular nodes.  gamma must lie in (0, 2); for gamma = 1 the
    first angular moment of the density must vanish (checked numerically).
    """
    g = float(gamma)
    if not (0.0 < g < 2.0):
        raise SymbolError(f"levy symbols require gamma in (0, 2), got {g}")
    dirs, weights = _levy_directions(dim, n_angular)
    cr, ci = _levy_radial_constants(g)
    raw = _as_pieces(m_density, window)
    pieces = []
    for t0, t1, dens in raw:
        vals = _density_values(dens, dirs)
        if np.any(vals < 0):
            raise SymbolError("density must be nonnegative on the sphere")
        if not np.any(vals > 0):
            raise SymbolError("density vanishes identically")
        if g == 1.0:
            moment = dirs.T @ (weights * vals)
            scale = float(np.sum(weights * vals))
            if np.linalg.norm(moment) > 1e-8 * max(scale, 1.0):
                raise SymbolError(
                    "gamma = 1 requires a vanishing first angular moment; got "
                    f"{np.round(moment, 8).tolist()}"
                )
        pieces.append((t0, t1, vals))
    # ellipticity constant: -Re psi is gamma-homogeneous, so the unit
    # sphere minimum is the global constant
    probe = _sphere_samples(dim, 512 if dim > 1 else 2)
    kappa = math.inf
    spec_stub = SymbolSpec(
        kind="levy",
        gamma=g,
        kappa=1.0,
        dim=int(dim),
        profile=TimeProfile(tuple(pieces)),
        params={"dirs": dirs, "weights": weights, "cr": cr, "ci": ci, "n_angular": n_angular},
    )
    for t0, t1, _ in pieces:
        mid = 0.5 * (t0 + t1)
        vals = eval_lattice(spec_stub, mid, probe)
        kappa = min(kappa, float(np.min(-vals.real)))
    if kappa <= 0:
        raise SymbolError("jump density produces a non-elliptic symbol")
    return SymbolSpec(
        kind="levy",
        gamma=g,
        kappa=kappa,
        dim=int(dim),
        profile=spec_stub.profile,
        params=spec_stub.params,
    )


def _levy_eval(spec: SymbolSpec, dens: np.ndarray, xi: np.ndarray) -> np.ndarray:
    p = spec.params
    dirs, weights = p["dirs"], p["weights"]
    cr, ci = p["cr"], p["ci"]
    g = spec.gamma
    b = xi @ dirs.T  # (..., n_angular)
    ab = np.abs(b)
    if g == 1.0:
        logab = np.zeros_like(ab)
        np.log(ab, out=logab, where=ab > 0)
        prof = ab * cr + 1j * b * (ci - logab)
    else:
        prof = ab**g * (cr + 1j * np.sign(b) * ci)
    return prof @ (weights * dens)


# ---------------------------------------------------------------------------
# composition and rescaling


def _merge_profiles(p1: TimeProfile, p2: TimeProfile) -> TimeProfile:
    lo = max(p1.window[0], p2.window[0])
    hi = min(p1.window[1], p2.window[1])
    if not lo < hi:
        raise SymbolError("factors have disjoint coefficient windows")
    cuts = sorted(
        {lo, hi}
        | {t for t in p1.breakpoints() if lo < t < hi}
        | {t for t in p2.breakpoints() if lo < t < hi}
    )
    pieces = tuple((a, b, None) for a, b in zip(cuts[:-1], cuts[1:]))
    return TimeProfile(pieces)


def compose(s1: SymbolSpec, a: float, s2: SymbolSpec, b: float) -> SymbolSpec:
    """Fractional composition with symbol ``-(-psi1)^a (-psi2)^b``.

    The order adds as ``a*gamma1 + b*gamma2``.  Powers take the principal
    branch, so for complex-valued factors the composite may lose
    ellipticity; the constant is therefore re-measured on a sweep lattice
    and failure raises instead of declaring a bogus kappa.
    """
    if a <= 0 or b <= 0:
        raise SymbolError("powers a, b must be positive")
    if s1.dim != s2.dim:
        raise SymbolError("factors must share the spatial dimension")
    for s in (s1, s2):
        if ellipticity_constant(s) <= 0:
            raise SymbolError("factor fails the ellipticity sweep")
    gamma = a * s1.gamma + b * s2.gamma
    spec = SymbolSpec(
        kind="composed",
        gamma=gamma,
        kappa=1.0,
        dim=s1.dim,
        profile=_merge_profiles(s1.profile, s2.profile),
        params={"s1": s1, "a": float(a), "s2": s2, "b": float(b)},
    )
    kappa = ellipticity_constant(spec)
    if kappa <= 1e-12:
        raise SymbolError(
            f"composite loses ellipticity (measured constant {kappa:.3g}); "
            "complex-valued factors can do this"
        )
    return SymbolSpec(
        kind="composed",
        gamma=gamma,
        kappa=kappa,
        dim=s1.dim,
        profile=spec.profile,
        params=spec.params,
    )


def extend_constant_window(spec: SymbolSpec, lo: float, hi: float) -> SymbolSpec:
    """Continue a constant (single-piece) schedule to cover [lo, hi].

    Jump schedules have no canonical continuation, so multi-piece symbols
    raise :class:`TimeDomainError` instead.
    """
    pieces = spec.profile.pieces
    t0, t1 = spec.profile.window
    lo2, hi2 = min(lo, t0), max(hi, t1)
    if lo2 == t0 and hi2 == t1:
        return spec
    if len(pieces) != 1:
        raise TimeDomainError(
            f"window [{t0}, {t1}] does not cover [{lo}, {hi}] and the jump "
            "schedule has no canonical continuation"
        )
    payload = pieces[0][2]
    return SymbolSpec(
        kind=spec.kind,
        gamma=spec.gamma,
        kappa=spec.kappa,
        dim=spec.dim,
        profile=TimeProfile(((lo2, hi2, payload),)),
        params=spec.params,
    )


def make_scaled(base: SymbolSpec, c: float) -> SymbolSpec:
    """Argument rescaling ``psi(t, c*xi)``; order unchanged, kappa scales by c^gamma."""
    c = float(c)
    if c <= 0:
        raise SymbolError("scale factor must be positive")
    return SymbolSpec(
        kind="scaled",
        gamma=base.gamma,
        kappa=base.kappa * c**base.gamma,
        dim=base.dim,
        profile=base.profile,
        params={"base": base, "c": c},
    )


# ---------------------------------------------------------------------------
# admissibility verification


def default_xi_lattice(dim: int, rmin: float = 0.1, rmax: float = 10.0, n_radial: int = 17) -> np.ndarray:
    """Log-radial sample lattice avoiding the origin: radii x directions."""
    radii = np.geomspace(rmin, rmax, n_radial)
    dirs = _sphere_samples(dim, {1: 2, 2: 64, 3: 128}[dim])
    return (radii[:, None, None] * dirs[None, :, :]).reshape(-1, dim)


def _profile_midpoints(spec: SymbolSpec) -> np.ndarray:
    return np.array([0.5 * (t0 + t1) for t0, t1, _ in spec.profile.pieces])


def ellipticity_constant(spec: SymbolSpec, t_samples=None, xi_lattice=None) -> float:
    """Empirical ``inf (-Re psi) / |xi|^gamma`` over the sample lattice."""
    if t_samples is None:
        t_samples = _profile_midpoints(spec)
    if xi_lattice is None:
        xi_lattice = default_xi_lattice(spec.dim)
    xi = np.asarray(xi_lattice, dtype=float)
    r = _norm(xi)
    best = math.inf
    for t in np.atleast_1d(t_samples):
        vals = eval_lattice(spec, float(t), xi)
        ratio = -vals.real / r**spec.gamma
        best = min(best, float(np.min(ratio)))
    return best


_FRACTIONAL_ANALYTIC = True


def _fractional_derivative(spec: SymbolSpec, t: float, xi: np.ndarray, alpha) -> np.ndarray:
    """Closed-form D^alpha of -a|xi|^gamma for |alpha| <= 2."""
    a = spec.profile.payload_at(t)
    g = spec.gamma
    r = _norm(xi)
    order = sum(alpha)
    with np.errstate(divide="ignore", invalid="ignore"):
        if order == 0:
            return -a * r**g
        if order == 1:
            axis = alpha.index(1)
            return -a * g * r ** (g - 2) * xi[..., axis]
        axes = [i for i, v in enumerate(alpha) for _ in range(v)]
        i, j = axes
        out = -a * g * (g - 2) * r ** (g - 4) * xi[..., i] * xi[..., j]
        if i == j:
            out = out - a * g * r ** (g - 2)
        return out


def _fd_derivative(spec: SymbolSpec, t: float, xi: np.ndarray, alpha, h_rel: float) -> np.ndarray:
    """Central finite differences with step scaled to |xi| (orders 1 and 2)."""
    order = sum(alpha)
    h = (h_rel * _norm(xi))[..., None]

    def shift(axis, steps):
        out = xi.copy()
        out[..., axis] = out[..., axis] + steps * h[..., 0]
        return out

    axes = [i for i, v in enumerate(alpha) for _ in range(v)]
    hs = h[..., 0]
    if order == 1:
        (i,) = axes
        return (eval_lattice(spec, t, shift(i, 1)) - eval_lattice(spec, t, shift(i, -1))) / (2 * hs)
    if order == 2:
        i, j = axes
        if i == j:
            plus = eval_lattice(spec, t, shift(i, 1))
            minus = eval_lattice(spec, t, shift(i, -1))
            center = eval_lattice(spec, t, xi)
            return (plus - 2 * center + minus) / hs**2
        pp = xi.copy(); pp[..., i] += hs; pp[..., j] += hs
        pm = xi.copy(); pm[..., i] += hs; pm[..., j] -= hs
        mp = xi.copy(); mp[..., i] -= hs; mp[..., j] += hs
        mm = xi.copy(); mm[..., i] -= hs; mm[..., j] -= hs
        return (
            eval_lattice(spec, t, pp)
            - eval_lattice(spec, t, pm)
            - eval_lattice(spec, t, mp)
            + eval_lattice(spec, t, mm)
        ) / (4 * hs**2)
    raise SymbolError(f"derivative order {order} not supported (dim <= 3 needs <= 2)")


def symbol_derivative(spec: SymbolSpec, t: float, xi, alpha, h_rel: float = 1e-4) -> np.ndarray:
    """``D^alpha_xi psi(t, .)``; analytic for the fractional family, finite
    differences otherwise."""
    xi = np.atleast_2d(np.asarray(xi, dtype=float))
    alpha = tuple(int(v) for v in alpha)
    if sum(alpha) == 0:
        return eval_lattice(spec, t, xi)
    if spec.kind == "fractional" and _FRACTIONAL_ANALYTIC:
        return _fractional_derivative(spec, t, xi, alpha)
    return _fd_derivative(spec, t, xi, alpha, h_rel)


def verify_conditions(
    spec: SymbolSpec,
    t_samples=None,
    xi_lattice=None,
    tol: float = 1e-3,
    h_rel: float = 1e-4,
) -> EstimateReport:
    """Measure the ellipticity and derivative-decay constants on a lattice.

    Reports ``inf (-Re psi)/|xi|^gamma`` (empirical kappa) and
    ``sup |D^alpha psi| |xi|^(|alpha|-gamma)`` over all orders up to
    ``floor(d/2)+1`` (empirical 1/kappa).  The report passes iff the
    empirical kappa reaches the declared one up to ``tol`` and every
    derivative sample evaluated to a finite number; non-finite stencil
    output is recorded as a failing sample rather than raised.
    """
    if t_samples is None:
        t_samples = _profile_midpoints(spec)
    if xi_lattice is None:
        xi_lattice = default_xi_lattice(spec.dim)
    xi = np.asarray(xi_lattice, dtype=float)
    r = _norm(xi)
    if np.any(r == 0):
        raise ValueError("xi lattice must exclude the origin")

    alphas = []
    for order in range(0, max_derivative_order(spec.dim) + 1):
        alphas.extend(multi_indices(spec.dim, order))

    rows = []
    kappa_emp = math.inf
    kappa_inv_emp = 0.0
    all_finite = True
    for t in np.atleast_1d(np.asarray(t_samples, dtype=float)):
        vals = eval_lattice(spec, float(t), xi)
        ell = -vals.real / r**spec.gamma
        kappa_emp = min(kappa_emp, float(np.min(ell)))
        worst = int(np.argmin(ell))
        rows.append(
            {
                "t": float(t),
                "xi": xi[worst].tolist(),
                "alpha": "ellipticity",
                "ratio": float(ell[worst]),
                "bound": spec.kappa,
                "pass": bool(ell[worst] >= spec.kappa * (1 - tol)),
            }
        )
        for alpha in alphas:
            with np.errstate(all="ignore"):
                deriv = symbol_derivative(spec, float(t), xi, alpha, h_rel=h_rel)
                ratio = np.abs(deriv) * r ** (sum(alpha) - spec.gamma)
            finite = np.isfinite(ratio)
            if not np.all(finite):
                all_finite = False
            top = float(np.max(np.where(finite, ratio, -np.inf)))
            kappa_inv_emp = max(kappa_inv_emp, top)
            worst = int(np.argmax(np.where(finite, ratio, -np.inf)))
            rows.append(
                {
                    "t": float(t),
                    "xi": xi[worst].tolist(),
                    "alpha": "".join(str(v) for v in alpha),
                    "ratio": top,
                    "bound": 1.0 / spec.kappa,
                    "pass": bool(np.all(finite)),
                }
            )

    passed = bool(kappa_emp >= spec.kappa * (1 - tol)) and all_finite
    return EstimateReport(
        check="verify_conditions",
        params={"kind": spec.kind, "gamma": spec.gamma, "dim": spec.dim, "kappa_declared": spec.kappa},
        tolerances={"kappa_rel": tol, "fd_step_rel": h_rel},
        summary={
            "kappa_empirical": kappa_emp,
            "kappa_inv_empirical": kappa_inv_emp,
            "kappa_effective": min(kappa_emp, 1.0 / kappa_inv_emp if kappa_inv_emp > 0 else math.inf),
            "all_samples_finite": all_finite,
        },
        samples=rows,
        passed=passed,
    )
