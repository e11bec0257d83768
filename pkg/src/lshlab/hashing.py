"""Hash functions and hash families on the Hamming cube.

A hash function maps {0,1}^d to non-negative integer labels; a hash family is
a probability distribution over such functions, kept either as an explicit
weighted list (weights are exact rationals) or as a seeded sampling law.
Collision probabilities of finite families are computed exactly, which is
what makes the enumeration-based sensitivity measurements trustworthy.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .points import Point, popcount_table
from . import rng as rngmod


class DimensionMismatch(ValueError):
    pass


# ---------------------------------------------------------------------------
# Label packing for concatenated functions: little-endian mixed radix, so the
# packed label is unique iff every component label is, and collision of packed
# labels is exactly component-wise collision.


def pack_labels(labels: Sequence[int], bounds: Sequence[int]) -> int:
    if len(labels) != len(bounds):
        raise ValueError("labels and bounds must align")
    packed = 0
    scale = 1
    for lab, bound in zip(labels, bounds):
        if not 0 <= lab < bound:
            raise ValueError(f"label {lab} outside [0, {bound})")
        packed += lab * scale
        scale *= bound
    return packed


def unpack_label(packed: int, bounds: Sequence[int]) -> tuple[int, ...]:
    labels = []
    for bound in bounds:
        packed, lab = divmod(packed, bound)
        labels.append(lab)
    if packed:
        raise ValueError("packed label exceeds the given radices")
    return tuple(labels)


# ---------------------------------------------------------------------------
# Hash functions


class HashFunction:
    """Deterministic total map {0,1}^dim -> [0, label_bound)."""

    dim: int

    @property
    def label_bound(self) -> int:
        raise NotImplementedError

    def _eval(self, v: int) -> int:
        raise NotImplementedError

    def __call__(self, x: Point) -> int:
        if x.dim != self.dim:
            raise DimensionMismatch(f"point has dimension {x.dim}, function expects {self.dim}")
        return self._eval(x.value)

    def collision_codes(self) -> np.ndarray:
        """Labels of all 2^dim inputs, recoded to consecutive ints.

        Only the equality structure is preserved; use __call__ for real labels.
        """
        table = np.array([self._eval(v) for v in range(1 << self.dim)], dtype=np.int64)
        _, codes = np.unique(table, return_inverse=True)
        return codes.astype(np.int64)


def evaluate(h: HashFunction, x: Point) -> int:
    return h(x)


@dataclass(frozen=True)
class CoordinateProjection(HashFunction):
    dim: int
    coord: int

    def __post_init__(self):
        if not 0 <= self.coord < self.dim:
            raise ValueError(f"coordinate {self.coord} out of range for dimension {self.dim}")

    @property
    def label_bound(self) -> int:
        return 2

    def _eval(self, v: int) -> int:
        return (v >> self.coord) & 1

    def collision_codes(self) -> np.ndarray:
        ids = np.arange(1 << self.dim, dtype=np.int64)
        return (ids >> self.coord) & 1


@dataclass(frozen=True)
class CoordinateSubset(HashFunction):
    """Projection onto a subset of coordinates, packed as one label."""

    dim: int
    coords: tuple[int, ...]

    def __post_init__(self):
        if len(set(self.coords)) != len(self.coords):
            raise ValueError("duplicate coordinates")
        for i in self.coords:
            if not 0 <= i < self.dim:
                raise ValueError(f"coordinate {i} out of range for dimension {self.dim}")

    @property
    def label_bound(self) -> int:
        return 1 << len(self.coords)

    def _eval(self, v: int) -> int:
        label = 0
        for j, i in enumerate(self.coords):
            label |= ((v >> i) & 1) << j
        return label

    def collision_codes(self) -> np.ndarray:
        ids = np.arange(1 << self.dim, dtype=np.int64)
        label = np.zeros_like(ids)
        for j, i in enumerate(self.coords):
            label |= ((ids >> i) & 1) << j
        return label


@dataclass(frozen=True)
class Parity(HashFunction):
    dim: int
    coords: tuple[int, ...]

    def __post_init__(self):
        if len(set(self.coords)) != len(self.coords):
            raise ValueError("duplicate coordinates")
        for i in self.coords:
            if not 0 <= i < self.dim:
                raise ValueError(f"coordinate {i} out of range for dimension {self.dim}")

    @property
    def mask(self) -> int:
        m = 0
        for i in self.coords:
            m |= 1 << i
        return m

    @property
    def label_bound(self) -> int:
        return 2

    def _eval(self, v: int) -> int:
        return (v & self.mask).bit_count() & 1

    def collision_codes(self) -> np.ndarray:
        pc = popcount_table(self.dim)
        ids = np.arange(1 << self.dim)
        return (pc[ids & self.mask] & 1).astype(np.int64)


@dataclass(frozen=True)
class Constant(HashFunction):
    dim: int

    @property
    def label_bound(self) -> int:
        return 1

    def _eval(self, v: int) -> int:
        return 0

    def collision_codes(self) -> np.ndarray:
        return np.zeros(1 << self.dim, dtype=np.int64)


@dataclass(frozen=True)
class ExplicitTable(HashFunction):
    """A label for every point, listed in point-value order (small dim only)."""

    dim: int
    labels: tuple[int, ...]

    def __post_init__(self):
        if len(self.labels) != 1 << self.dim:
            raise ValueError(f"table needs {1 << self.dim} entries, got {len(self.labels)}")
        if any(l < 0 for l in self.labels):
            raise ValueError("labels must be non-negative")

    @property
    def label_bound(self) -> int:
        return max(self.labels) + 1

    def _eval(self, v: int) -> int:
        return self.labels[v]

    def collision_codes(self) -> np.ndarray:
        _, codes = np.unique(np.array(self.labels, dtype=np.int64), return_inverse=True)
        return codes.astype(np.int64)


@dataclass(frozen=True)
class MinHashPermutation(HashFunction):
    """Min of a fixed permutation over the set {i : x_i = 1}.

    The empty set gets the reserved label dim, distinct from every element
    rank, so two empty sets collide and an empty set never collides with a
    nonempty one.
    """

    dim: int
    perm: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.perm) != list(range(self.dim)):
            raise ValueError("not a permutation of range(dim)")

    @property
    def label_bound(self) -> int:
        return self.dim + 1

    def _eval(self, v: int) -> int:
        if v == 0:
            return self.dim
        best = self.dim
        for i in range(self.dim):
            if (v >> i) & 1 and self.perm[i] < best:
                best = self.perm[i]
        return best


@dataclass(frozen=True)
class PairCollapse(HashFunction):
    """Sends one designated pair to the shared label 0; everything else is kept apart."""

    dim: int
    x0: int
    y0: int

    def __post_init__(self):
        n = 1 << self.dim
        if not (0 <= self.x0 < n and 0 <= self.y0 < n):
            raise ValueError("designated points out of range")

    @property
    def label_bound(self) -> int:
        return (1 << self.dim) + 1

    def _eval(self, v: int) -> int:
        if v == self.x0 or v == self.y0:
            return 0
        return v + 1

    def collision_codes(self) -> np.ndarray:
        table = np.arange(1, (1 << self.dim) + 1, dtype=np.int64)
        table[self.x0] = 0
        table[self.y0] = 0
        _, codes = np.unique(table, return_inverse=True)
        return codes.astype(np.int64)


@dataclass(frozen=True)
class Concatenation(HashFunction):
    """Tuple of component labels, packed mixed-radix (see pack_labels)."""

    parts: tuple[HashFunction, ...]

    def __post_init__(self):
        if not self.parts:
            raise ValueError("need at least one component")
        dims = {p.dim for p in self.parts}
        if len(dims) != 1:
            raise ValueError(f"components disagree on dimension: {sorted(dims)}")

    @property
    def dim(self) -> int:  # type: ignore[override]
        return self.parts[0].dim

    @property
    def label_bound(self) -> int:
        bound = 1
        for p in self.parts:
            bound *= p.label_bound
        return bound

    def _eval(self, v: int) -> int:
        packed = 0
        scale = 1
        for p in self.parts:
            packed += p._eval(v) * scale
            scale *= p.label_bound
        return packed

    def collision_codes(self) -> np.ndarray:
        # Combine pairwise with recompaction so intermediate codes stay small.
        codes = self.parts[0].collision_codes()
        for p in self.parts[1:]:
            nxt = p.collision_codes()
            combined = codes * (int(nxt.max()) + 1) + nxt
            _, codes = np.unique(combined, return_inverse=True)
            codes = codes.astype(np.int64)
        return codes


# ---------------------------------------------------------------------------
# Hash families


@dataclass(frozen=True)
class MinHashLaw:
    dim: int

    def draw(self, g: np.random.Generator) -> HashFunction:
        return MinHashPermutation(self.dim, tuple(int(i) for i in g.permutation(self.dim)))


@dataclass(frozen=True)
class PowerLaw:
    base: "HashFamily"
    k: int

    def draw(self, g: np.random.Generator) -> HashFunction:
        return Concatenation(tuple(self.base.draw(g) for _ in range(self.k)))


@dataclass(frozen=True)
class HashFamily:
    """A distribution over hash functions on {0,1}^dim.

    Exactly one of ``atoms`` (finite weighted support, Fraction weights that
    sum to 1) and ``law`` (a seeded sampling rule) may be preferred for
    computation, but a finite family is always also samplable.
    ``distance_symmetric`` asserts that the collision probability of a pair
    depends on its Hamming distance only (true for coordinate sampling and
    its powers); enumeration uses one representative pair per distance class
    when it is set.
    """

    dim: int
    atoms: Optional[tuple[tuple[Fraction, HashFunction], ...]] = None
    law: object = None
    description: str = ""
    distance_symmetric: bool = False
    descriptor_doc: Optional[dict] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.atoms is None and self.law is None:
            raise ValueError("family needs a finite support or a sampling law")
        if self.atoms is not None:
            if not self.atoms:
                raise ValueError("empty finite support")
            total = sum(w for w, _ in self.atoms)
            if any(w < 0 for w, _ in self.atoms):
                raise ValueError("negative weight")
            if abs(total - 1) > Fraction(1, 10**12):
                raise ValueError(f"weights sum to {float(total)}, expected 1")
            for _, h in self.atoms:
                if h.dim != self.dim:
                    raise DimensionMismatch("atom dimension differs from family dimension")

    @property
    def is_finite(self) -> bool:
        return self.atoms is not None

    @property
    def is_uniform(self) -> bool:
        if self.atoms is None:
            return False
        w0 = self.atoms[0][0]
        return all(w == w0 for w, _ in self.atoms)

    def draw(self, g: np.random.Generator) -> HashFunction:
        if self.atoms is not None:
            if self.is_uniform:
                return self.atoms[int(g.integers(len(self.atoms)))][1]
            weights = np.array([float(w) for w, _ in self.atoms])
            weights /= weights.sum()
            return self.atoms[int(g.choice(len(self.atoms), p=weights))][1]
        return self.law.draw(g)

    def sample(self, n: int, seed: int, substream: int = 0) -> list[HashFunction]:
        """n independent draws; the same (seed, substream) always gives the same list."""
        g = rngmod.stream(seed, substream)
        return [self.draw(g) for _ in range(n)]


def finite_family(
    functions: Sequence[HashFunction],
    weights: Optional[Sequence] = None,
    description: str = "",
    distance_symmetric: bool = False,
) -> HashFamily:
    """Finite support with the given weights (uniform when omitted).

    Float weights are converted to exact rationals, so collision
    probabilities of the family come out exact.
    """
    functions = list(functions)
    if weights is None:
        w = Fraction(1, len(functions))
        atoms = tuple((w, h) for h in functions)
    else:
        if len(weights) != len(functions):
            raise ValueError("weights and functions must align")
        atoms = tuple((Fraction(w), h) for w, h in zip(weights, functions))
    dim = functions[0].dim
    return HashFamily(
        dim=dim, atoms=atoms, description=description, distance_symmetric=distance_symmetric
    )


def bit_sampling_family(d: int) -> HashFamily:
    """Uniform over the d coordinate projections x -> x_i."""
    if d < 1:
        raise ValueError("dimension must be at least 1")
    fam = finite_family(
        [CoordinateProjection(d, i) for i in range(d)],
        description=f"uniform over the {d} coordinate projections on {{0,1}}^{d}",
        distance_symmetric=True,
    )
    return _with_descriptor(fam, {"kind": "bit-sampling", "d": d})


def constant_family(d: int) -> HashFamily:
    fam = finite_family([Constant(d)], description=f"the constant function on {{0,1}}^{d}")
    return _with_descriptor(fam, {"kind": "constant", "d": d})


def minhash_family(d: int, exact: bool = False) -> HashFamily:
    """MinHash: a uniformly random permutation of [d], hashing a set to the
    smallest rank among its elements. Points are read as subsets of [d].

    With exact=True the full d! permutations are materialized (d <= 8), which
    makes collision probabilities exactly the Jaccard similarity.
    """
    if d < 1:
        raise ValueError("dimension must be at least 1")
    if exact:
        if d > 8:
            raise ValueError("exact MinHash enumeration is limited to d <= 8")
        fns = [MinHashPermutation(d, perm) for perm in itertools.permutations(range(d))]
        fam = finite_family(fns, description=f"uniform over all {d}! MinHash permutations")
    else:
        fam = HashFamily(
            dim=d,
            law=MinHashLaw(d),
            description=f"MinHash with a seeded random permutation of [{d}]",
        )
    return _with_descriptor(fam, {"kind": "minhash", "d": d, "exact": bool(exact)})


def trivial_family(d: int, r: int) -> HashFamily:
    """Uniform over pair-collapse functions, one per unordered pair at
    distance in [1, r]. Far pairs never collide, so q = 0 and the rho
    parameter degenerates to 0; this is the construction that forces every
    lower bound to assume q is not tiny.
    """
    if d > 14:
        raise ValueError("trivial family enumeration is limited to d <= 14")
    if r < 1:
        raise ValueError("no pairs within distance < 1")
    n = 1 << d
    fns = []
    for x in range(n):
        for y in range(x + 1, n):
            dist = (x ^ y).bit_count()
            if dist <= r:
                fns.append(PairCollapse(d, x, y))
    if not fns:
        raise ValueError(f"no point pairs within distance {r}")
    fam = finite_family(
        fns, description=f"uniform over the {len(fns)} pair-collapse functions at distance <= {r}"
    )
    return _with_descriptor(fam, {"kind": "trivial", "d": d, "r": r})


_POWER_ATOM_LIMIT = 200_000


def power(family: HashFamily, k: int) -> HashFamily:
    """k-fold independent concatenation. An (r, cr, p, q)-sensitive input
    yields an (r, cr, p^k, q^k)-sensitive output, since the k components
    collide independently for any fixed pair.
    """
    if k < 1:
        raise ValueError("concatenation length k must be at least 1")
    doc = None
    if family.descriptor_doc is not None:
        doc = {"kind": "power", "k": k, "base": family.descriptor_doc}
    if family.atoms is not None and len(family.atoms) ** k <= _POWER_ATOM_LIMIT:
        atoms = []
        for combo in itertools.product(family.atoms, repeat=k):
            w = Fraction(1)
            for wi, _ in combo:
                w *= wi
            atoms.append((w, Concatenation(tuple(h for _, h in combo))))
        fam = HashFamily(
            dim=family.dim,
            atoms=tuple(atoms),
            description=f"{k}-fold concatenation of: {family.description}",
            distance_symmetric=family.distance_symmetric,
        )
    else:
        fam = HashFamily(
            dim=family.dim,
            law=PowerLaw(family, k),
            description=f"{k}-fold concatenation of: {family.description}",
            distance_symmetric=family.distance_symmetric,
        )
    if doc is not None:
        fam = _with_descriptor(fam, doc)
    return fam


def _with_descriptor(fam: HashFamily, doc: dict) -> HashFamily:
    return HashFamily(
        dim=fam.dim,
        atoms=fam.atoms,
        law=fam.law,
        description=fam.description,
        distance_symmetric=fam.distance_symmetric,
        descriptor_doc=doc,
    )


# ---------------------------------------------------------------------------
# Sensitivity


@dataclass(frozen=True)
class SensitivityProfile:
    """(r, cr, p, q) with rho = ln(1/p)/ln(1/q) when that is meaningful.

    p lower-bounds the collision probability of pairs within r; q
    upper-bounds it for pairs at distance at least cr. rho is None when the
    ratio degenerates (q = 0, or p = 1, or the thresholds fail p > q), with
    the reason in rho_note. Exact rational values ride along when the
    profile came from enumeration of a finite family.
    """

    r: float
    cr: float
    p: float
    q: float
    rho: Optional[float]
    distance_kind: str = "hamming"
    rho_note: str = ""
    p_exact: Optional[Fraction] = None
    q_exact: Optional[Fraction] = None

    def __post_init__(self):
        if self.rho is not None:
            if not 0 <= self.q < self.p <= 1:
                raise ValueError("rho populated but 0 <= q < p <= 1 fails")


def _rho_from(p: float, q: float) -> tuple[Optional[float], str]:
    if not (0 <= q <= 1 and 0 <= p <= 1):
        raise ValueError("p, q must be probabilities")
    if q == 0:
        return None, "undefined (trivial regime: q = 0)"
    if p <= q:
        return None, f"undefined (not sensitive: p = {p} <= q = {q})"
    if p == 1:
        return None, "undefined (p = 1: near pairs always collide)"
    return math.log(1 / p) / math.log(1 / q), ""


def bit_sampling_profile(d: int, r: float, c: float) -> SensitivityProfile:
    """Sensitivity of coordinate sampling: (r, cr, 1 - r/d, 1 - cr/d).

    The rho parameter ln(1/(1 - r/d)) / ln(1/(1 - cr/d)) increases to 1/c as
    r/d -> 0.
    """
    if d < 1:
        raise ValueError("dimension must be at least 1")
    if r <= 0:
        raise ValueError("r must be positive")
    if c <= 1:
        raise ValueError("approximation factor c must exceed 1")
    cr = c * r
    if cr >= d:
        raise ValueError(f"degenerate q: cr = {cr} >= d = {d}")
    p = 1 - r / d
    q = 1 - cr / d
    rho = math.log1p(-r / d) / math.log1p(-cr / d)
    p_exact = q_exact = None
    if float(r).is_integer() and float(cr).is_integer():
        p_exact = Fraction(d - int(r), d)
        q_exact = Fraction(d - int(cr), d)
    return SensitivityProfile(
        r=r, cr=cr, p=p, q=q, rho=rho, p_exact=p_exact, q_exact=q_exact
    )


def collision_probability(family: HashFamily, x: Point, y: Point) -> Fraction:
    """Exact Pr[h(x) = h(y)] for a finite family."""
    if family.atoms is None:
        raise ValueError("collision probability needs a finite family")
    if x.dim != family.dim or y.dim != family.dim:
        raise DimensionMismatch("point dimension differs from family dimension")
    return sum((w for w, h in family.atoms if h(x) == h(y)), Fraction(0))


_ENUM_DIM_LIMIT = 14


def collision_by_distance(family: HashFamily) -> list[Fraction]:
    """Collision probability per Hamming distance class, for families whose
    collision law depends on distance only (one representative pair per class).
    """
    if not family.distance_symmetric:
        raise ValueError("family is not marked distance_symmetric")
    d = family.dim
    x0 = Point(0, d)
    return [collision_probability(family, x0, Point((1 << m) - 1, d)) for m in range(d + 1)]


def _class_extremes(family: HashFamily) -> tuple[list, list]:
    """Per-distance-class (min, max) collision probability over all pairs.

    Uniform families get exact Fractions via integer collision counts; general
    weights fall back to float accumulation.
    """
    d = family.dim
    n = 1 << d
    pc = popcount_table(d)
    ids = np.arange(n)
    tables = [h.collision_codes() for _, h in family.atoms]
    uniform = family.is_uniform
    if uniform:
        n_atoms = len(family.atoms)
        mins = [None] * (d + 1)
        maxs = [None] * (d + 1)
    else:
        weights = [float(w) for w, _ in family.atoms]
        mins = [None] * (d + 1)
        maxs = [None] * (d + 1)

    chunk = max(1, min(n, (1 << 22) // n))
    for start in range(0, n, chunk):
        xs = ids[start : start + chunk]
        if uniform:
            acc = np.zeros((len(xs), n), dtype=np.int32)
            for t in tables:
                acc += t[xs][:, None] == t[None, :]
        else:
            acc = np.zeros((len(xs), n), dtype=np.float64)
            for w, t in zip(weights, tables):
                acc += w * (t[xs][:, None] == t[None, :])
        dist = pc[xs[:, None] ^ ids[None, :]]
        for m in range(d + 1):
            sel = acc[dist == m]
            if sel.size == 0:
                continue
            lo, hi = sel.min(), sel.max()
            if uniform:
                lo = Fraction(int(lo), n_atoms)
                hi = Fraction(int(hi), n_atoms)
            else:
                lo, hi = float(lo), float(hi)
            mins[m] = lo if mins[m] is None else min(mins[m], lo)
            maxs[m] = hi if maxs[m] is None else max(maxs[m], hi)
    return mins, maxs


def exact_sensitivity(family: HashFamily, r: float, cr: float) -> SensitivityProfile:
    """Measure (p, q) at thresholds (r, cr) by exhaustive enumeration:
    p = min collision probability over pairs at distance <= r,
    q = max over pairs at distance >= cr.
    """
    if family.atoms is None:
        raise ValueError("exact sensitivity needs a finite family; use Monte Carlo instead")
    d = family.dim
    if d > _ENUM_DIM_LIMIT:
        raise ValueError(
            f"enumeration is limited to d <= {_ENUM_DIM_LIMIT}; use Monte Carlo estimates"
        )
    if not 0 <= r < cr <= d:
        raise ValueError(f"need 0 <= r < cr <= d, got r={r}, cr={cr}, d={d}")

    if family.distance_symmetric:
        by_dist = collision_by_distance(family)
        near = [by_dist[m] for m in range(d + 1) if m <= r]
        far = [by_dist[m] for m in range(d + 1) if m >= cr]
    else:
        mins, maxs = _class_extremes(family)
        near = [mins[m] for m in range(d + 1) if m <= r and mins[m] is not None]
        far = [maxs[m] for m in range(d + 1) if m >= cr and maxs[m] is not None]

    p_val = min(near)
    q_val = max(far)
    p_exact = p_val if isinstance(p_val, Fraction) else None
    q_exact = q_val if isinstance(q_val, Fraction) else None
    p = float(p_val)
    q = float(q_val)
    rho, note = _rho_from(p, q)
    return SensitivityProfile(
        r=r, cr=cr, p=p, q=q, rho=rho, rho_note=note, p_exact=p_exact, q_exact=q_exact
    )


# ---------------------------------------------------------------------------
# Descriptors: a small JSON-able document describing a function or family,
# with exact round-trip (weights serialize as "numerator/denominator").


def function_descriptor(h: HashFunction) -> dict:
    if isinstance(h, CoordinateProjection):
        return {"kind": "proj", "d": h.dim, "i": h.coord}
    if isinstance(h, CoordinateSubset):
        return {"kind": "subset", "d": h.dim, "coords": list(h.coords)}
    if isinstance(h, Parity):
        return {"kind": "parity", "d": h.dim, "coords": list(h.coords)}
    if isinstance(h, Constant):
        return {"kind": "const", "d": h.dim}
    if isinstance(h, ExplicitTable):
        return {"kind": "table", "d": h.dim, "labels": list(h.labels)}
    if isinstance(h, MinHashPermutation):
        return {"kind": "minperm", "d": h.dim, "perm": list(h.perm)}
    if isinstance(h, PairCollapse):
        return {"kind": "pair", "d": h.dim, "x": h.x0, "y": h.y0}
    if isinstance(h, Concatenation):
        return {"kind": "concat", "parts": [function_descriptor(p) for p in h.parts]}
    raise TypeError(f"no descriptor for {type(h).__name__}")


def function_from_descriptor(doc: dict) -> HashFunction:
    kind = doc["kind"]
    if kind == "proj":
        return CoordinateProjection(doc["d"], doc["i"])
    if kind == "subset":
        return CoordinateSubset(doc["d"], tuple(doc["coords"]))
    if kind == "parity":
        return Parity(doc["d"], tuple(doc["coords"]))
    if kind == "const":
        return Constant(doc["d"])
    if kind == "table":
        return ExplicitTable(doc["d"], tuple(doc["labels"]))
    if kind == "minperm":
        return MinHashPermutation(doc["d"], tuple(doc["perm"]))
    if kind == "pair":
        return PairCollapse(doc["d"], doc["x"], doc["y"])
    if kind == "concat":
        return Concatenation(tuple(function_from_descriptor(p) for p in doc["parts"]))
    raise ValueError(f"unknown function kind {kind!r}")


def family_descriptor(family: HashFamily) -> dict:
    if family.descriptor_doc is not None:
        return family.descriptor_doc
    if family.atoms is None:
        raise ValueError("cannot describe a bare sampling law without a constructor descriptor")
    return {
        "kind": "finite",
        "d": family.dim,
        "distance_symmetric": family.distance_symmetric,
        "description": family.description,
        "atoms": [
            {"weight": f"{w.numerator}/{w.denominator}", "fn": function_descriptor(h)}
            for w, h in family.atoms
        ],
    }


def family_from_descriptor(doc: dict) -> HashFamily:
    kind = doc["kind"]
    if kind == "bit-sampling":
        return bit_sampling_family(doc["d"])
    if kind == "constant":
        return constant_family(doc["d"])
    if kind == "minhash":
        return minhash_family(doc["d"], exact=doc.get("exact", False))
    if kind == "trivial":
        return trivial_family(doc["d"], doc["r"])
    if kind == "power":
        return power(family_from_descriptor(doc["base"]), doc["k"])
    if kind == "finite":
        atoms = tuple(
            (Fraction(a["weight"]), function_from_descriptor(a["fn"])) for a in doc["atoms"]
        )
        return HashFamily(
            dim=doc["d"],
            atoms=atoms,
            description=doc.get("description", ""),
            distance_symmetric=doc.get("distance_symmetric", False),
        )
    raise ValueError(f"unknown family kind {kind!r}")


def family_to_json(family: HashFamily) -> str:
    return json.dumps(family_descriptor(family), sort_keys=True)


def family_from_json(text: str) -> HashFamily:
    return family_from_descriptor(json.loads(text))
