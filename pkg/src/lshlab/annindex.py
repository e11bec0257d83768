"""(r, c)-near-neighbor index built from any sensitive hash family.

Concatenating k draws drives the far-collision rate below 1/n, and L
independent tables push the near-pair success rate up to 1 - delta:
k = ceil(log_{1/q} n) and L = ceil(ln(1/delta) / p^k). A query probes its
bucket in every table and inspects at most 3L candidates; whatever it
returns has been distance-checked against cr, so a wrong answer is
impossible and only a miss is a failure.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, asdict
from typing import Optional, Sequence

import numpy as np

from .hashing import (
    Concatenation,
    CoordinateProjection,
    HashFamily,
    HashFunction,
    SensitivityProfile,
    bit_sampling_family,
    bit_sampling_profile,
    family_descriptor,
    function_descriptor,
    function_from_descriptor,
    power,
)
from .points import Point, hamming, points_to_bit_matrix
from . import rng as rngmod

INDEX_FORMAT = "lshlab-index"
INDEX_VERSION = 1

CANDIDATE_CAP_FACTOR = 3  # tunable probe budget: at most 3L candidate inspections


@dataclass(frozen=True)
class IndexParams:
    r: int
    cr: int
    k: int
    L: int
    delta: float
    seed: int
    n_planned: Optional[int] = None
    predicted_p_k: Optional[float] = None
    planned_rho: Optional[float] = None

    def __post_init__(self):
        if self.k < 1 or self.L < 1:
            raise ValueError("k and L must be at least 1")
        if not 0 <= self.r < self.cr:
            raise ValueError("need 0 <= r < cr")


def _snapped_ceil(v: float) -> int:
    # Guard against float droop just below an integer.
    nearest = round(v)
    if abs(v - nearest) < 1e-9:
        return int(nearest)
    return int(math.ceil(v))


def plan(
    n: int, profile: SensitivityProfile, delta: float, seed: int = rngmod.DEFAULT_SEED
) -> IndexParams:
    """Table shape for an n-point dataset from the family's (p, q) profile.

    Requires q >= 1/n; below that concatenation cannot help and the direct
    structure (k = 1) should be built instead.
    """
    if n < 1:
        raise ValueError("need at least one point")
    if not 0 < delta < 1:
        raise ValueError("failure probability delta must lie in (0, 1)")
    p, q = profile.p, profile.q
    if not 0 < q < p < 1:
        raise ValueError(f"planning needs 0 < q < p < 1, got p={p}, q={q}")
    if q < 1 / n:
        raise ValueError(
            f"q = {q} is below 1/n = {1 / n}: the reduction degenerates; "
            "build with k = 1 and L = ceil(ln(1/delta)/p) directly"
        )
    k = max(1, _snapped_ceil(math.log(n) / math.log(1 / q)))
    p_k = p**k
    table_count = _snapped_ceil(math.log(1 / delta) / p_k)
    return IndexParams(
        r=int(profile.r),
        cr=int(profile.cr),
        k=k,
        L=table_count,
        delta=delta,
        seed=seed,
        n_planned=n,
        predicted_p_k=p_k,
        planned_rho=profile.rho,
    )


class NNIndex:
    """L hash tables over a fixed point set; immutable once built."""

    def __init__(
        self,
        params: IndexParams,
        dim: int,
        functions: Sequence[HashFunction],
        tables: Sequence[dict],
        points: Sequence[Point],
        family_doc: Optional[dict] = None,
    ):
        if len(functions) != params.L or len(tables) != params.L:
            raise ValueError("need exactly L functions and L tables")
        self.params = params
        self.dim = dim
        self.functions = tuple(functions)
        self.tables = tuple(tables)
        self.points = tuple(points)
        self.family_doc = family_doc

    @property
    def candidate_cap(self) -> int:
        return CANDIDATE_CAP_FACTOR * self.params.L


def _coords_if_projection_concat(fn: HashFunction) -> Optional[list[int]]:
    if isinstance(fn, Concatenation) and all(
        isinstance(p, CoordinateProjection) for p in fn.parts
    ):
        return [p.coord for p in fn.parts]
    return None


def build(
    points: Sequence[Point], family: HashFamily, params: IndexParams
) -> NNIndex:
    if not points:
        raise ValueError("need at least one point")
    dim = points[0].dim
    for i, pt in enumerate(points):
        if pt.dim != dim:
            raise ValueError(f"point {i} has dimension {pt.dim}, expected {dim}")
    if family.dim != dim:
        raise ValueError(f"family dimension {family.dim} differs from points ({dim})")

    powered = power(family, params.k)
    functions = powered.sample(params.L, params.seed)

    bit_matrix = points_to_bit_matrix(points)
    tables = []
    for fn in functions:
        coords = _coords_if_projection_concat(fn)
        if coords is not None and len(coords) <= 62:
            weights = (np.int64(1) << np.arange(len(coords), dtype=np.int64))
            labels = bit_matrix[:, coords].astype(np.int64) @ weights
            labels = [int(v) for v in labels]
        else:
            labels = [fn(pt) for pt in points]
        table: dict = {}
        for idx, lab in enumerate(labels):
            table.setdefault(lab, []).append(idx)
        tables.append(table)

    family_doc = None
    try:
        family_doc = family_descriptor(family)
    except ValueError:
        pass
    return NNIndex(params, dim, functions, tables, points, family_doc)


@dataclass(frozen=True)
class QueryTrace:
    result: Optional[tuple[int, int]]
    candidates_inspected: int
    tables_probed: int
    base_evaluations: int


def query_traced(index: NNIndex, x: Point) -> QueryTrace:
    """Probe x's bucket in each table in order; inspect at most 3L candidates;
    return the first point found within cr (ties go to probe order)."""
    if x.dim != index.dim:
        raise ValueError(f"query dimension {x.dim} differs from index ({index.dim})")
    cap = index.candidate_cap
    cr = index.params.cr
    inspected = 0
    evals = 0
    for ti, (fn, table) in enumerate(zip(index.functions, index.tables)):
        evals += index.params.k
        bucket = table.get(fn(x))
        if not bucket:
            continue
        for idx in bucket:
            if inspected >= cap:
                return QueryTrace(None, inspected, ti + 1, evals)
            inspected += 1
            dist = hamming(x, index.points[idx])
            if dist <= cr:
                return QueryTrace((idx, dist), inspected, ti + 1, evals)
    return QueryTrace(None, inspected, len(index.tables), evals)


def query(index: NNIndex, x: Point) -> Optional[tuple[int, int]]:
    return query_traced(index, x).result


@dataclass(frozen=True)
class IndexStats:
    n_points: int
    n_tables: int
    k: int
    total_entries: int
    mean_bucket: float
    max_bucket: int
    n_buckets: int
    approx_bytes: int
    measured_space_exp: float
    predicted_space_exp: Optional[float]


def stats(index: NNIndex) -> IndexStats:
    n = len(index.points)
    sizes = [len(bucket) for table in index.tables for bucket in table.values()]
    total = sum(sizes)
    n_buckets = len(sizes)
    rho = index.params.planned_rho
    return IndexStats(
        n_points=n,
        n_tables=index.params.L,
        k=index.params.k,
        total_entries=total,
        mean_bucket=total / n_buckets if n_buckets else 0.0,
        max_bucket=max(sizes) if sizes else 0,
        n_buckets=n_buckets,
        approx_bytes=total * 8 + n_buckets * 64 + n * ((index.dim + 7) // 8),
        measured_space_exp=math.log(max(total, 1)) / math.log(n) if n > 1 else float("nan"),
        predicted_space_exp=(1 + rho) if rho is not None else None,
    )


# ---------------------------------------------------------------------------
# Serialization: a versioned JSON container carrying parameters, the family
# descriptor, the drawn functions, the dataset, and the table contents, so a
# load reproduces queries exactly.


def save_index(index: NNIndex, path) -> None:
    doc = {
        "format": INDEX_FORMAT,
        "version": INDEX_VERSION,
        "dim": index.dim,
        "params": asdict(index.params),
        "family": index.family_doc,
        "functions": [function_descriptor(fn) for fn in index.functions],
        "points": [pt.to01() for pt in index.points],
        "tables": [
            {str(lab): ids for lab, ids in table.items()} for table in index.tables
        ],
    }
    with open(path, "w") as f:
        json.dump(doc, f, sort_keys=True)
        f.write("\n")


def load_index(path) -> NNIndex:
    with open(path) as f:
        doc = json.load(f)
    if doc.get("format") != INDEX_FORMAT:
        raise ValueError(f"{path} is not an index file")
    if doc.get("version") != INDEX_VERSION:
        raise ValueError(f"unsupported index version {doc.get('version')}")
    params = IndexParams(**doc["params"])
    functions = [function_from_descriptor(d) for d in doc["functions"]]
    tables = [
        {int(lab): list(ids) for lab, ids in table.items()} for table in doc["tables"]
    ]
    points = [Point.from01(s) for s in doc["points"]]
    return NNIndex(params, doc["dim"], functions, tables, points, doc.get("family"))


# ---------------------------------------------------------------------------
# Planted-pair experiment: random dataset, queries planted at distance
# exactly r from a random stored point, everything else concentrated near
# d/2 and therefore far beyond cr.


@dataclass(frozen=True)
class ExperimentReport:
    n: int
    d: int
    r: int
    cr: int
    delta: float
    k: int
    L: int
    n_queries: int
    successes: int
    success_rate: float
    max_inspected: int
    mean_inspected: float
    candidate_cap: int
    base_evaluations_per_query: int
    total_entries: int
    seed: int


def planted_experiment(
    n: int,
    d: int,
    r: int,
    c: float,
    delta: float,
    n_queries: int,
    seed: int = rngmod.DEFAULT_SEED,
) -> ExperimentReport:
    profile = bit_sampling_profile(d, r, c)
    cr = int(profile.cr)
    params = plan(n, profile, delta, seed=seed)

    g_data = rngmod.stream(seed, 1)
    points = [Point.random(d, g_data) for _ in range(n)]
    index = build(points, bit_sampling_family(d), params)

    successes = 0
    inspected = []
    for qi in range(n_queries):
        g = rngmod.stream(seed, 1000 + qi)
        target = points[int(g.integers(n))]
        coords = g.choice(d, size=r, replace=False)
        x = target.flip(int(i) for i in coords)
        trace = query_traced(index, x)
        inspected.append(trace.candidates_inspected)
        if trace.result is not None:
            found_id, dist = trace.result
            if dist > cr:
                raise AssertionError("index returned a point beyond cr")
            successes += 1

    return ExperimentReport(
        n=n,
        d=d,
        r=r,
        cr=cr,
        delta=delta,
        k=params.k,
        L=params.L,
        n_queries=n_queries,
        successes=successes,
        success_rate=successes / n_queries,
        max_inspected=max(inspected),
        mean_inspected=sum(inspected) / len(inspected),
        candidate_cap=index.candidate_cap,
        base_evaluations_per_query=params.L * params.k,
        total_entries=stats(index).total_entries,
        seed=seed,
    )
