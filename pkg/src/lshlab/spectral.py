"""Exact noise-stability analysis of hash functions and families.

A hash function h is embedded as the vector-valued map x -> e_{h(x)}, whose
squared Fourier mass w_S at each subset S is computed with a Walsh-Hadamard
transform of every label's indicator. The noise stability at correlation rho
is then sum_S w_S rho^|S|, which equals the collision probability of h on a
rho-correlated pair of strings. Writing K(t) for the stability at e^{-t}
makes K a nonnegative combination of the functions e^{-t|S|}, hence
log-convex in t; check_log_convexity certifies that numerically and
stability_ratio exhibits the resulting ln(1/K(t)) / ln(1/K(ct)) >= 1/c bound.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from .hashing import HashFamily, HashFunction
from .points import popcount_table
from . import rng as rngmod

_TRANSFORM_DIM_LIMIT = 20
_BRUTE_FORCE_DIM_LIMIT = 12
_PRUNE_BELOW = 1e-15

EXACT = "exact-spectral"
MONTE_CARLO = "monte-carlo"


def _fwht(a: np.ndarray) -> np.ndarray:
    """Unnormalized Walsh-Hadamard transform down the first axis (length 2^d)."""
    n, m = a.shape
    out = a.astype(np.float64, copy=True)
    h = 1
    while h < n:
        out = out.reshape(n // (2 * h), 2, h, m)
        top = out[:, 0] + out[:, 1]
        bot = out[:, 0] - out[:, 1]
        out = np.stack([top, bot], axis=1).reshape(n, m)
        h *= 2
    return out


@dataclass(frozen=True)
class FourierSpectrum:
    """Squared Fourier mass per subset of coordinates (subsets are bitmasks).

    Weights are nonnegative and sum to 1 (Parseval for the unit-vector
    embedding); entries below 1e-15 are dropped at construction with the
    dropped total kept in pruned_mass.
    """

    dim: int
    weights: dict[int, float]
    pruned_mass: float = 0.0

    def __post_init__(self):
        n = 1 << self.dim
        for mask, w in self.weights.items():
            if not 0 <= mask < n:
                raise ValueError(f"subset mask {mask} out of range for dimension {self.dim}")
            if w < 0:
                raise ValueError(f"negative weight at mask {mask}")
        total = self.total_mass()
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"weights sum to {total}, expected 1")

    def total_mass(self) -> float:
        return math.fsum(self.weights.values()) + self.pruned_mass

    def level_weights(self) -> np.ndarray:
        """Mass per subset size, length dim + 1."""
        levels = np.zeros(self.dim + 1)
        for mask, w in self.weights.items():
            levels[mask.bit_count()] += w
        return levels

    def weight_zero(self) -> float:
        return self.weights.get(0, 0.0)


def _spectrum_from_array(dim: int, w: np.ndarray) -> FourierSpectrum:
    keep = w > _PRUNE_BELOW
    pruned = float(w[~keep].sum())
    weights = {int(mask): float(w[mask]) for mask in np.nonzero(keep)[0]}
    return FourierSpectrum(dim=dim, weights=weights, pruned_mass=pruned)


def _spectrum_array(h: HashFunction) -> np.ndarray:
    d = h.dim
    n = 1 << d
    codes = h.collision_codes()
    n_labels = int(codes.max()) + 1
    w = np.zeros(n)
    chunk = max(1, (1 << 22) // n)
    for start in range(0, n_labels, chunk):
        stop = min(start + chunk, n_labels)
        onehot = np.zeros((n, stop - start))
        sel = (codes >= start) & (codes < stop)
        onehot[np.nonzero(sel)[0], codes[sel] - start] = 1.0
        coeffs = _fwht(onehot) / n
        w += (coeffs**2).sum(axis=1)
    return w


def fourier_spectrum(h: HashFunction) -> FourierSpectrum:
    """Squared Fourier mass of the label-indicator embedding of h."""
    if h.dim > _TRANSFORM_DIM_LIMIT:
        raise ValueError(
            f"transform limited to d <= {_TRANSFORM_DIM_LIMIT}; "
            "use Monte Carlo stability estimates instead"
        )
    return _spectrum_from_array(h.dim, _spectrum_array(h))


def family_spectrum(
    family: HashFamily,
    mode: str = "exact",
    n_samples: Optional[int] = None,
    seed: int = rngmod.DEFAULT_SEED,
) -> FourierSpectrum:
    """Expected spectrum over the family: the probability-weighted average in
    exact mode (finite support), or an average over sampled functions."""
    if family.dim > _TRANSFORM_DIM_LIMIT:
        raise ValueError(
            f"transform limited to d <= {_TRANSFORM_DIM_LIMIT}; "
            "use Monte Carlo stability estimates instead"
        )
    if mode == "exact":
        if family.atoms is None:
            raise ValueError("exact family spectrum needs a finite support")
        w = np.zeros(1 << family.dim)
        for weight, h in family.atoms:
            w += float(weight) * _spectrum_array(h)
        return _spectrum_from_array(family.dim, w)
    if mode == "mc":
        if not n_samples or n_samples < 1:
            raise ValueError("mc mode needs n_samples >= 1")
        w = np.zeros(1 << family.dim)
        for h in family.sample(n_samples, seed):
            w += _spectrum_array(h)
        return _spectrum_from_array(family.dim, w / n_samples)
    raise ValueError(f"unknown mode {mode!r}")


SpectrumSource = Union[FourierSpectrum, HashFamily, HashFunction]


def _as_spectrum(source: SpectrumSource) -> FourierSpectrum:
    if isinstance(source, FourierSpectrum):
        return source
    if isinstance(source, HashFamily):
        return family_spectrum(source)
    if isinstance(source, HashFunction):
        return fourier_spectrum(source)
    raise TypeError(f"cannot take a spectrum of {type(source).__name__}")


def stability(spectrum: FourierSpectrum, rho: float) -> float:
    """sum_S w_S rho^|S|: the collision probability on a rho-correlated pair."""
    if not 0 <= rho <= 1:
        raise ValueError(f"correlation must lie in [0, 1], got {rho}")
    levels = spectrum.level_weights()
    return float(np.dot(levels, rho ** np.arange(len(levels))))


def noise_stability_at_time(source: SpectrumSource, t: float) -> float:
    """K(t): the stability at correlation e^{-t}, for t >= 0."""
    if t < 0:
        raise ValueError(f"time parameter must be nonnegative, got {t}")
    return stability(_as_spectrum(source), math.exp(-t))


@dataclass(frozen=True)
class StabilityCurve:
    """K sampled on a time grid. Exact-provenance curves satisfy K(0) = 1 and
    are nonincreasing; Monte Carlo curves carry standard errors instead."""

    grid: tuple[float, ...]
    values: tuple[float, ...]
    provenance: str
    stderr: Optional[tuple[float, ...]] = None
    pruned_mass: float = 0.0

    def __post_init__(self):
        if len(self.grid) != len(self.values):
            raise ValueError("grid and values must align")
        if list(self.grid) != sorted(self.grid):
            raise ValueError("grid must be sorted")
        if any(t < 0 for t in self.grid):
            raise ValueError("time grid must be nonnegative")
        if self.provenance not in (EXACT, MONTE_CARLO):
            raise ValueError(f"unknown provenance {self.provenance!r}")

    def write_csv(self, path) -> None:
        with open(path, "w", newline="") as f:
            writer = csv.writer(f)
            if self.stderr is None:
                writer.writerow(["t", "K"])
                for t, k in zip(self.grid, self.values):
                    writer.writerow([repr(t), repr(k)])
            else:
                writer.writerow(["t", "K", "stderr"])
                for t, k, s in zip(self.grid, self.values, self.stderr):
                    writer.writerow([repr(t), repr(k), repr(s)])


def stability_curve(source: SpectrumSource, t_grid: Sequence[float]) -> StabilityCurve:
    spectrum = _as_spectrum(source)
    grid = tuple(float(t) for t in t_grid)
    levels = spectrum.level_weights()
    sizes = np.arange(len(levels))
    values = tuple(float(np.dot(levels, np.exp(-t * sizes))) for t in grid)
    return StabilityCurve(
        grid=grid, values=values, provenance=EXACT, pruned_mass=spectrum.pruned_mass
    )


def spectrum_to_csv(spectrum: FourierSpectrum, path) -> None:
    with open(path, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["mask", "weight"])
        for mask in sorted(spectrum.weights):
            writer.writerow([mask, repr(spectrum.weights[mask])])


# ---------------------------------------------------------------------------
# Independent oracle: direct summation over all ordered pairs, weighting each
# by the probability that a rho-correlated draw produces it.


def collision_counts_by_distance(h: HashFunction) -> np.ndarray:
    """Number of ordered pairs (x, y) at each Hamming distance with h(x) = h(y)."""
    d = h.dim
    if d > _BRUTE_FORCE_DIM_LIMIT:
        raise ValueError(f"pair enumeration limited to d <= {_BRUTE_FORCE_DIM_LIMIT}")
    n = 1 << d
    codes = h.collision_codes()
    pc = popcount_table(d)
    ids = np.arange(n)
    counts = np.zeros(d + 1, dtype=np.int64)
    chunk = max(1, (1 << 22) // n)
    for start in range(0, n, chunk):
        xs = ids[start : start + chunk]
        eq = codes[xs][:, None] == codes[None, :]
        dist = pc[xs[:, None] ^ ids[None, :]]
        counts += np.bincount(dist[eq], minlength=d + 1)
    return counts


def brute_force_stability(h: HashFunction, rho: float) -> float:
    """Exact stability by summing over all 4^d ordered pairs: a pair at
    distance m has probability 2^{-d} ((1+rho)/2)^{d-m} ((1-rho)/2)^m."""
    if not 0 <= rho <= 1:
        raise ValueError(f"correlation must lie in [0, 1], got {rho}")
    d = h.dim
    counts = collision_counts_by_distance(h)
    agree = (1 + rho) / 2
    differ = (1 - rho) / 2
    m = np.arange(d + 1)
    terms = counts * (2.0**-d) * agree ** (d - m) * differ**m
    return float(math.fsum(terms))


# ---------------------------------------------------------------------------
# Log-convexity certification


@dataclass(frozen=True)
class LogConvexityCertificate:
    passed: bool
    worst_rel_slack: float
    worst_abs_slack: float
    worst_triple: Optional[tuple[float, float, float]]
    n_checks: int
    tolerance: float
    pruned_mass: float
    note: str = ""


def check_log_convexity(curve: StabilityCurve, tolerance: float = 1e-9) -> LogConvexityCertificate:
    """Certify midpoint log-convexity of an exact curve.

    Checks K(m)^2 <= K(t1) K(t2) (1 + tolerance) for every grid pair whose
    midpoint lies on the grid, plus the weighted inequality for every
    consecutive triple; reports the worst slack found.
    """
    if curve.provenance != EXACT:
        raise ValueError("log-convexity certification needs an exact-provenance curve")
    if len(curve.grid) < 3:
        raise ValueError("need at least 3 grid points")
    t = np.array(curve.grid)
    k = np.array(curve.values)
    if np.any(k <= 0):
        return LogConvexityCertificate(
            passed=False,
            worst_rel_slack=math.inf,
            worst_abs_slack=math.inf,
            worst_triple=None,
            n_checks=0,
            tolerance=tolerance,
            pruned_mass=curve.pruned_mass,
            note="nonpositive curve value",
        )
    logk = np.log(k)

    worst_rel = -math.inf
    worst_abs = -math.inf
    worst_triple = None
    n_checks = 0

    def consider(rel: float, abs_slack: float, triple) -> None:
        nonlocal worst_rel, worst_abs, worst_triple, n_checks
        n_checks += 1
        if rel > worst_rel:
            worst_rel = rel
            worst_triple = triple
        worst_abs = max(worst_abs, abs_slack)

    n = len(t)
    # Pairs with an on-grid midpoint (includes uniformly spaced triples).
    for i in range(n):
        for j in range(i + 2, n):
            mid = (t[i] + t[j]) / 2
            pos = int(np.searchsorted(t, mid))
            for cand in (pos - 1, pos, pos + 1):
                if 0 <= cand < n and math.isclose(t[cand], mid, rel_tol=1e-12, abs_tol=1e-12):
                    rel = math.expm1(2 * logk[cand] - logk[i] - logk[j])
                    abs_slack = k[cand] ** 2 - k[i] * k[j]
                    consider(rel, abs_slack, (float(t[i]), float(t[cand]), float(t[j])))
                    break
    # Consecutive triples in general position.
    for i in range(1, n - 1):
        span = t[i + 1] - t[i - 1]
        if span <= 0:
            continue
        theta = (t[i + 1] - t[i]) / span
        rel = math.expm1(logk[i] - theta * logk[i - 1] - (1 - theta) * logk[i + 1])
        bound = k[i - 1] ** theta * k[i + 1] ** (1 - theta)
        consider(rel, k[i] - bound, (float(t[i - 1]), float(t[i]), float(t[i + 1])))

    return LogConvexityCertificate(
        passed=worst_rel <= tolerance,
        worst_rel_slack=worst_rel,
        worst_abs_slack=worst_abs,
        worst_triple=worst_triple,
        n_checks=n_checks,
        tolerance=tolerance,
        pruned_mass=curve.pruned_mass,
    )


def stability_ratio(source: SpectrumSource, t: float, c: float) -> float:
    """ln(1/K(t)) / ln(1/K(ct)), which log-convexity keeps at or above 1/c."""
    if t <= 0:
        raise ValueError("t must be positive")
    if c < 1:
        raise ValueError("c must be at least 1")
    spectrum = _as_spectrum(source)
    k_t = stability(spectrum, math.exp(-t))
    if k_t >= 1:
        raise ValueError("K(t) = 1: ratio undefined for a collision-certain family")
    k_ct = stability(spectrum, math.exp(-c * t))
    return math.log(1 / k_t) / math.log(1 / k_ct)
