"""Units, eigenbases, spectral states, and the quadrature oracle.

Everything numerical is dimensionless: positions are fractions
xi = x/L of the well width, energies are in units of the full-well
ground energy E0 = pi^2 hbar^2 / (2 m L^2), and times are in units of
tau = hbar/E0.  ``WellUnits`` converts to and from SI when a caller
needs the laboratory picture.

All types are immutable values and all functions are pure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .specfun import hermite_fn

FULL_WELL = "FullWell"
SUB_LEFT = "SubLeft"
SUB_RIGHT = "SubRight"
OSCILLATOR = "Oscillator"


class QuadratureError(RuntimeError):
    """Adaptive subdivision exceeded its depth limit."""


@dataclass(frozen=True)
class WellUnits:
    """Physical scales of the well; defaults give the dimensionless picture."""

    L: float = 1.0
    m: float = 1.0
    hbar: float = 1.0

    def __post_init__(self):
        if self.L <= 0 or self.m <= 0 or self.hbar <= 0:
            raise ValueError("WellUnits requires L, m, hbar > 0")

    @property
    def E0(self) -> float:
        """Ground-state energy pi^2 hbar^2 / (2 m L^2)."""
        return math.pi**2 * self.hbar**2 / (2.0 * self.m * self.L**2)

    @property
    def tau(self) -> float:
        """Natural time unit hbar / E0."""
        return self.hbar / self.E0


@dataclass(frozen=True)
class BasisDescriptor:
    """Which eigenproblem the term indices of a state refer to.

    kind is one of FullWell, SubLeft, SubRight, Oscillator.  Widths and
    offsets are fractions of L; a SubLeft of width w and a SubRight of
    width 1-w together tile the well after a split.
    """

    kind: str
    width: float = 1.0
    offset: float = 0.0

    def __post_init__(self):
        if self.kind not in (FULL_WELL, SUB_LEFT, SUB_RIGHT, OSCILLATOR):
            raise ValueError(f"unknown basis kind {self.kind!r}")
        if self.kind in (SUB_LEFT, SUB_RIGHT) and not 0.0 < self.width < 1.0:
            raise ValueError("subchamber width must lie in (0, 1)")
        if self.kind == SUB_RIGHT and not 0.0 < self.offset < 1.0:
            raise ValueError("subchamber offset must lie in (0, 1)")

    @staticmethod
    def full_well() -> "BasisDescriptor":
        return BasisDescriptor(FULL_WELL)

    @staticmethod
    def sub_left(width: float) -> "BasisDescriptor":
        return BasisDescriptor(SUB_LEFT, width=width)

    @staticmethod
    def sub_right(width: float) -> "BasisDescriptor":
        return BasisDescriptor(SUB_RIGHT, width=width, offset=1.0 - width)

    @staticmethod
    def oscillator() -> "BasisDescriptor":
        return BasisDescriptor(OSCILLATOR)

    @property
    def support(self) -> tuple[float, float]:
        if self.kind == FULL_WELL:
            return (0.0, 1.0)
        if self.kind == SUB_LEFT:
            return (0.0, self.width)
        if self.kind == SUB_RIGHT:
            return (self.offset, self.offset + self.width)
        return (-math.inf, math.inf)

    def to_json(self) -> dict:
        out = {"kind": self.kind}
        if self.kind in (SUB_LEFT, SUB_RIGHT):
            out["width"] = self.width
        if self.kind == SUB_RIGHT:
            out["offset"] = self.offset
        return out

    @staticmethod
    def from_json(data: dict) -> "BasisDescriptor":
        kind = data["kind"]
        if kind == SUB_LEFT:
            return BasisDescriptor.sub_left(data["width"])
        if kind == SUB_RIGHT:
            return BasisDescriptor(SUB_RIGHT, width=data["width"], offset=data["offset"])
        return BasisDescriptor(kind)


def eigenfunction(basis: BasisDescriptor, n: int, xi: float) -> float:
    """Normalized eigenfunction value at position fraction xi.

    Returns 0 outside the basis support.  For subchambers of width w the
    value is sqrt(2/w) sin(n pi (xi - offset) / w) in units of L^{-1/2}.
    """
    if n < 1:
        raise ValueError("eigenfunction requires n >= 1")
    if basis.kind == OSCILLATOR:
        return hermite_fn(n, xi)
    lo, hi = basis.support
    if xi < lo or xi > hi:
        return 0.0
    w = hi - lo
    return math.sqrt(2.0 / w) * math.sin(n * math.pi * (xi - lo) / w)


def eigenenergy(basis: BasisDescriptor, n) -> float:
    """Eigenvalue of level n in E0 units (oscillator: in hbar*omega units)."""
    n_arr = np.asarray(n, dtype=np.float64)
    if np.any(n_arr < 1):
        raise ValueError("eigenenergy requires n >= 1")
    if basis.kind == FULL_WELL:
        out = n_arr**2
    elif basis.kind == OSCILLATOR:
        out = n_arr + 0.5
    else:
        out = n_arr**2 / basis.width**2
    return float(out) if np.isscalar(n) or out.ndim == 0 else out


@dataclass(frozen=True)
class SpectralState:
    """Truncated expansion of a wave function over a named eigenbasis.

    terms are parallel arrays (indices, coefficients); indices are
    strictly increasing and >= 1.  A normalized state carries total
    weight 1 to 1e-12; any state must carry at most 1 + 1e-12.
    """

    basis: BasisDescriptor
    indices: np.ndarray
    coeffs: np.ndarray
    normalized: bool = False

    def __post_init__(self):
        idx = np.asarray(self.indices, dtype=np.int64)
        cfs = np.asarray(self.coeffs, dtype=np.complex128)
        if idx.shape != cfs.shape or idx.ndim != 1:
            raise ValueError("indices and coeffs must be parallel 1-d arrays")
        if idx.size and (np.any(idx < 1) or np.any(np.diff(idx) <= 0)):
            raise ValueError("indices must be unique, strictly increasing, >= 1")
        total = float(np.sum(np.abs(cfs) ** 2))
        if self.normalized and abs(total - 1.0) > 1e-12:
            raise ValueError(f"normalized state has weight {total}")
        if not self.normalized and total > 1.0 + 1e-12:
            raise ValueError(f"state weight {total} exceeds 1")
        object.__setattr__(self, "indices", idx)
        object.__setattr__(self, "coeffs", cfs)
        self.indices.setflags(write=False)
        self.coeffs.setflags(write=False)

    def __len__(self) -> int:
        return int(self.indices.size)

    def weight(self) -> float:
        """Total squared norm of the retained terms."""
        return math.fsum(float(v) for v in np.abs(self.coeffs) ** 2)

    def truncated(self, n_terms: int) -> "SpectralState":
        """Keep the first n_terms terms; the result is never marked normalized."""
        return SpectralState(self.basis, self.indices[:n_terms],
                             self.coeffs[:n_terms], normalized=False)

    def renormalized(self) -> "SpectralState":
        scale = 1.0 / math.sqrt(self.weight())
        return SpectralState(self.basis, self.indices, self.coeffs * scale,
                             normalized=True)

    def to_json(self) -> dict:
        return {
            "basis": self.basis.to_json(),
            "terms": [[int(n), float(c.real), float(c.imag)]
                      for n, c in zip(self.indices, self.coeffs)],
            "normalized": self.normalized,
        }

    @staticmethod
    def from_json(data: dict) -> "SpectralState":
        terms = data["terms"]
        idx = np.array([t[0] for t in terms], dtype=np.int64)
        cfs = np.array([complex(t[1], t[2]) for t in terms], dtype=np.complex128)
        return SpectralState(BasisDescriptor.from_json(data["basis"]), idx, cfs,
                             normalized=data["normalized"])


def state_energy(state: SpectralState) -> float:
    """Energy expectation sum |c_n|^2 E_n in E0 units.

    Deliberately unnormalized: a branch with weight below 1 reports the
    weighted expectation, matching the bookkeeping used throughout.
    """
    if len(state) == 0:
        return 0.0
    energies = eigenenergy(state.basis, state.indices)
    weights = np.abs(state.coeffs) ** 2
    return math.fsum(float(v) for v in weights * np.atleast_1d(energies))


@dataclass(frozen=True)
class GridFunction:
    """Complex samples of psi on a uniform grid at a fixed time (tau units)."""

    lo: float
    hi: float
    samples: np.ndarray
    time: float = 0.0

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError("GridFunction requires lo < hi")
        s = np.asarray(self.samples, dtype=np.complex128)
        if s.ndim != 1 or s.size < 2:
            raise ValueError("GridFunction needs at least 2 samples")
        object.__setattr__(self, "samples", s)
        self.samples.setflags(write=False)

    @property
    def xi(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.samples.size)

    def to_json(self) -> dict:
        return {
            "lo": self.lo,
            "hi": self.hi,
            "samples": [[float(v.real), float(v.imag)] for v in self.samples],
            "time": self.time,
        }

    @staticmethod
    def from_json(data: dict) -> "GridFunction":
        samples = np.array([complex(a, b) for a, b in data["samples"]])
        return GridFunction(data["lo"], data["hi"], samples, data["time"])


def integrate(f: Callable[[float], float], a: float, b: float, tol: float,
              max_depth: int = 60) -> float:
    """Adaptive-Simpson integral of f over [a, b] with error <= tol.

    The tolerance is split across subintervals in proportion to their
    width, so the accepted panels sum to the requested budget.  Raises
    QuadratureError when the subdivision depth limit is exceeded.
    """
    if not a < b:
        raise ValueError("integrate requires a < b")
    if not tol > 0.0:
        raise ValueError("integrate requires tol > 0")

    total_width = b - a

    def simpson(x0, f0, x2, f2):
        x1 = 0.5 * (x0 + x2)
        f1 = f(x1)
        return x1, f1, (x2 - x0) / 6.0 * (f0 + 4.0 * f1 + f2)

    fa, fb = f(a), f(b)
    m, fm, whole = simpson(a, fa, b, fb)
    # stack entries: (x0, f0, x2, f2, midpoint, f_mid, panel_estimate, depth)
    stack = [(a, fa, b, fb, m, fm, whole, 0)]
    acc = []
    while stack:
        x0, f0, x2, f2, x1, f1, s_whole, depth = stack.pop()
        lm, flm, s_left = simpson(x0, f0, x1, f1)
        rm, frm, s_right = simpson(x1, f1, x2, f2)
        err = (s_left + s_right - s_whole) / 15.0
        budget = tol * (x2 - x0) / total_width
        if abs(err) <= budget:
            acc.append(s_left + s_right + err)
        elif depth >= max_depth:
            raise QuadratureError(
                f"integrate did not converge on [{x0}, {x2}] at depth {depth}")
        else:
            stack.append((x0, f0, x1, f1, lm, flm, s_left, depth + 1))
            stack.append((x1, f1, x2, f2, rm, frm, s_right, depth + 1))
    return math.fsum(acc)
