"""Order-adapted dyadic partitions of space-time.

Level ``m`` tiles ``R^{1+d}`` with congruent half-open boxes whose spatial
side is ``2^-m`` and whose time side is the dyadic number ``2^-E_m``.  The
exponent ``E_m`` comes from a division (finer) / merger (coarser) recursion
that keeps the time mantissa ``tau_m = 2^(m*gamma - E_m)`` inside ``[1, 2)``;
``gamma`` is the operator order coupling the two scalings (time ~ space^gamma).
Each division step splits a box into ``2^d`` spatial halves and ``2^k`` time
subintervals with ``k in {floor(gamma), floor(gamma)+1}``.

Cube geometry is held as integers (level, time exponent, index tuple); real
coordinates appear only at query boundaries.  The one non-integer decision,
the choice of ``k`` at each level, reduces to comparing ``m*gamma`` against an
integer.  That comparison is exact for rational gamma and is done in 60-digit
arithmetic for the named irrationals, so the recursion never depends on
double rounding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Literal

import mpmath
import numpy as np

__all__ = [
    "GammaValue",
    "LevelState",
    "Cube",
    "Box",
    "Filtration",
    "TimeLevel",
]

_MP_DPS = 60
# Comparisons closer to an integer than this are refused instead of guessed.
_MP_GUARD = mpmath.mpf("1e-30")

_NAMED_CONSTANTS = {
    "pi": lambda: mpmath.pi,
    "e": lambda: mpmath.e,
    "sqrt2": lambda: mpmath.sqrt(2),
}


@dataclass(frozen=True)
class GammaValue:
    """Operator order gamma with exact floor/compare arithmetic.

    Decimal inputs (str, float, int, Fraction) are treated as exact
    rationals; the strings ``"pi"``, ``"e"`` and ``"sqrt2"`` select named
    irrationals evaluated in extended precision.
    """

    value: float
    exact: Fraction | None = None
    name: str | None = None

    @staticmethod
    def parse(gamma) -> "GammaValue":
        if isinstance(gamma, GammaValue):
            return gamma
        if isinstance(gamma, str):
            key = gamma.strip().lower()
            if key in _NAMED_CONSTANTS:
                with mpmath.workdps(_MP_DPS):
                    val = float(_NAMED_CONSTANTS[key]())
                return GammaValue(value=val, name=key)
            frac = Fraction(gamma)
            return GammaValue(value=float(frac), exact=frac)
        if isinstance(gamma, Fraction):
            return GammaValue(value=float(gamma), exact=gamma)
        if isinstance(gamma, int):
            return GammaValue(value=float(gamma), exact=Fraction(gamma))
        if isinstance(gamma, float):
            # repr(float) is the shortest decimal that round-trips, so this
            # pins the intended decimal as an exact rational.
            frac = Fraction(repr(gamma))
            return GammaValue(value=gamma, exact=frac)
        raise TypeError(f"cannot interpret gamma from {type(gamma).__name__}")

    def __post_init__(self):
        if not (self.value > 0):
            raise ValueError(f"gamma must be positive, got {self.value}")

    def cmp_int(self, m: int, n: int) -> int:
        """Sign of ``m*gamma - n``, computed without double rounding."""
        if m == 0:
            return (0 > n) - (0 < n)
        if self.exact is not None:
            lhs = m * self.exact.numerator
            rhs = n * self.exact.denominator
            return (lhs > rhs) - (lhs < rhs)
        with mpmath.workdps(_MP_DPS):
            diff = m * _NAMED_CONSTANTS[self.name]() - n
            if abs(diff) < _MP_GUARD:
                raise ArithmeticError(
                    f"{m}*{self.name} is too close to the integer {n} to order reliably"
                )
            return 1 if diff > 0 else -1

    def floor_mul(self, m: int) -> int:
        """``floor(m*gamma)`` exactly."""
        if m == 0:
            return 0
        if self.exact is not None:
            return (m * self.exact.numerator) // self.exact.denominator
        with mpmath.workdps(_MP_DPS):
            prod = m * _NAMED_CONSTANTS[self.name]()
            fl = int(mpmath.floor(prod))
            if abs(prod - fl) < _MP_GUARD or abs(prod - fl - 1) < _MP_GUARD:
                raise ArithmeticError(
                    f"{m}*{self.name} is too close to an integer to floor reliably"
                )
            return fl


@dataclass(frozen=True)
class LevelState(object):
    """One level of the recursion: level ``m``, time exponent ``E_m``,
    mantissa ``tau_m = 2^(m*gamma - E_m) in [1, 2)``."""

    m: int
    E: int
    tau: float

    @property
    def time_side(self) -> float:
        return math.ldexp(1.0, -self.E)


@dataclass(frozen=True)
class Cube:
    """A partition element: level plus integer indices (time, space)."""

    m: int
    i0: int
    idx: tuple[int, ...]


@dataclass(frozen=True)
class Box:
    """Half-open box [t0, t1) x prod_j [lo_j, hi_j)."""

    t0: float
    t1: float
    spans: tuple[tuple[float, float], ...]

    def contains(self, t: float, x) -> bool:
        if not (self.t0 <= t < self.t1):
            return False
        for xj, (lo, hi) in zip(x, self.spans):
            if not (lo <= xj < hi):
                return False
        return True

    def volume(self) -> float:
        vol = self.t1 - self.t0
        for lo, hi in self.spans:
            vol *= hi - lo
        return vol


class Filtration:
    """Doubly infinite nested family of space-time partitions for one gamma.

    Levels are computed lazily by the division/merger recursion and cached;
    the recursion is the authority, the closed form ``E_m = floor(m*gamma)``
    is only ever used after being cross-checked in tests.
    """

    def __init__(self, gamma, dim: int = 1):
        self.gamma = GammaValue.parse(gamma)
        self.dim = int(dim)
        if self.dim < 1:
            raise ValueError("dim must be >= 1")
        self._floor1 = self.gamma.floor_mul(1)
        self._E: dict[int, int] = {0: 0}
        self._lo = 0
        self._hi = 0

    # -- level recursion ---------------------------------------------------

    def _k_finer(self, m: int) -> int:
        # rho_m = 2^(m*gamma - E_{m-1}); split time 2^k ways with
        # k = floor(gamma) iff rho_m < 2^(floor(gamma)+1).
        fl = self._floor1
        e_prev = self._E[m - 1]
        if self.gamma.cmp_int(m, e_prev + fl + 1) < 0:
            return fl
        return fl + 1

    def _k_coarser(self, m: int) -> int:
        # rho_m = 2^(m*gamma - E_{m+1}); merge 2^k time intervals with
        # k = floor(gamma) iff rho_m >= 2^(-floor(gamma)).
        fl = self._floor1
        e_next = self._E[m + 1]
        if self.gamma.cmp_int(m, e_next - fl) >= 0:
            return fl
        return fl + 1

    def E(self, m: int) -> int:
        """Time-scale exponent ``E_m`` (time side of level m is 2^-E_m)."""
        m = int(m)
        if m > self._hi:
            for j in range(self._hi + 1, m + 1):
                self._E[j] = self._E[j - 1] + self._k_finer(j)
                self._check_mantissa(j)
            self._hi = m
        elif m < self._lo:
            for j in range(self._lo - 1, m - 1, -1):
                self._E[j] = self._E[j + 1] - self._k_coarser(j)
                self._check_mantissa(j)
            self._lo = m
        return self._E[m]

    def _check_mantissa(self, m: int) -> None:
        # invariant: 0 <= m*gamma - E_m < 1, i.e. tau_m in [1, 2)
        e = self._E[m]
        if self.gamma.cmp_int(m, e) < 0 or self.gamma.cmp_int(m, e + 1) >= 0:
            raise AssertionError(f"mantissa left [1,2) at level {m}")

    def k(self, m: int) -> int:
        """Time-subdivision count between levels m-1 and m: E(m) - E(m-1)."""
        return self.E(m) - self.E(m - 1)

    def tau(self, m: int) -> float:
        return 2.0 ** (m * self.gamma.value - self.E(m))

    def state(self, m: int) -> LevelState:
        return LevelState(m=m, E=self.E(m), tau=self.tau(m))

    def advance(self, state: LevelState, direction: Literal["finer", "coarser"]) -> LevelState:
        """Step the recursion one level from ``state``.

        ``finer`` performs the division step to level m+1, ``coarser`` the
        merger step to level m-1; both leave the mantissa in [1, 2).
        """
        if direction == "finer":
            return self.state(state.m + 1)
        if direction == "coarser":
            return self.state(state.m - 1)
        raise ValueError(f"unknown direction {direction!r}")

    # -- cube geometry ------------------------------------------------------

    def cube(self, m: int, i0: int, idx) -> Cube:
        idx = tuple(int(i) for i in idx)
        if len(idx) != self.dim:
            raise ValueError(f"expected {self.dim} spatial indices, got {len(idx)}")
        return Cube(m=int(m), i0=int(i0), idx=idx)

    def box(self, q: Cube) -> Box:
        e = self.E(q.m)
        t0 = math.ldexp(float(q.i0), -e)
        t1 = math.ldexp(float(q.i0 + 1), -e)
        spans = tuple(
            (math.ldexp(float(i), -q.m), math.ldexp(float(i + 1), -q.m)) for i in q.idx
        )
        return Box(t0=t0, t1=t1, spans=spans)

    def volume(self, q: Cube) -> float:
        return math.ldexp(1.0, -(self.E(q.m) + q.m * self.dim))

    def children(self, q: Cube) -> list[Cube]:
        """The 2^(d + k_{m+1}) level-(m+1) cubes tiling ``q``."""
        kk = self.k(q.m + 1)
        out = []
        for r in range(1 << kk):
            i0 = (q.i0 << kk) + r
            for bits in product((0, 1), repeat=self.dim):
                idx = tuple(2 * i + b for i, b in zip(q.idx, bits))
                out.append(Cube(m=q.m + 1, i0=i0, idx=idx))
        return out

    def parent(self, q: Cube) -> Cube:
        """The unique level-(m-1) cube containing ``q``."""
        kk = self.k(q.m)
        return Cube(m=q.m - 1, i0=q.i0 >> kk, idx=tuple(i >> 1 for i in q.idx))

    def locate(self, t: float, x, m: int) -> Cube:
        """The level-m cube whose half-open box contains ``(t, x)``."""
        e = self.E(m)
        i0 = math.floor(math.ldexp(t, e))
        idx = tuple(math.floor(math.ldexp(float(xj), m)) for xj in x)
        return Cube(m=int(m), i0=i0, idx=idx)

    def locate_many(self, t: np.ndarray, x: np.ndarray, m: int):
        """Vectorised :meth:`locate`: returns (i0 array, idx array (n, d))."""
        e = self.E(m)
        i0 = np.floor(np.ldexp(np.asarray(t, float), e)).astype(np.int64)
        idx = np.floor(np.ldexp(np.asarray(x, float), m)).astype(np.int64)
        return i0, idx

    def dilate(self, q: Cube) -> Box:
        """The comparison box ``Q*`` for the exterior kernel integral.

        Anchored at the cube's lower-left corner ``(t0, x)``:
        ``[t0, t0 + 4*2^(-m*gamma)) x prod_j [x_j - 2*2^-m, x_j + 2*2^-m)``.
        It contains the closure of ``q`` and has volume at most
        ``4^(d+1) |q|``.
        """
        b = self.box(q)
        time_unit = (b.t1 - b.t0) / self.tau(q.m)  # = 2^(-m*gamma)
        side = math.ldexp(1.0, -q.m)
        spans = tuple((lo - 2.0 * side, lo + 2.0 * side) for lo, _ in b.spans)
        return Box(t0=b.t0, t1=b.t0 + 4.0 * time_unit, spans=spans)

    def regularity_ratio(self, m: int) -> int:
        """Volume ratio |parent| / |cube| at level m, equal to 2^(d+k_m)."""
        return 1 << (self.dim + self.k(m))

    def level_row(self, m: int) -> dict:
        """CSV-friendly summary of one level."""
        return {
            "m": m,
            "k_m": self.k(m),
            "E_m": self.E(m),
            "tau_m": self.tau(m),
            "time_side": math.ldexp(1.0, -self.E(m)),
            "regularity_ratio": self.regularity_ratio(m),
        }


class TimeLevel:
    """Time-only partition at level m: intervals of side 4^-m."""

    def __init__(self, m: int):
        self.m = int(m)
        self.side = math.ldexp(1.0, -2 * self.m)

    def interval(self, i: int) -> tuple[float, float]:
        return (i * self.side, (i + 1) * self.side)

    def locate(self, t: float) -> int:
        return math.floor(t / self.side)

    def dilate(self, i: int) -> tuple[float, float]:
        """Dilated interval [t0 - 2*delta, t0 + 2*delta), delta = 4^-m."""
        t0, _ = self.interval(i)
        return (t0 - 2.0 * self.side, t0 + 2.0 * self.side)
