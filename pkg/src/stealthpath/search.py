"""Exposure-aware planners and their objective functions.

Five planners share the same query surface (environment, exposure field,
start region, goal region) and return a PlanResult:

* plan_shortest: exposure-agnostic A*, unit step cost. The baseline.
* plan_ess: A* whose step cost is the destination's exposure score.
* plan_binary: A* over (region, exposure accumulator) nodes; a step costs
  the number of regions it newly exposes plus a tiny movement cost m.
* plan_saturation: like binary but counts repeat exposures, clamped at a
  saturation threshold tau, priced in -log10 survival-probability units.
* plan_exact: best-first search over (region, visited-set) states. Optimal
  for the binary objective but exponential; takes an expansion budget.

The binary and saturation planners keep one best node per region (a standard
A* closed list). That is deliberately Markovian: the accumulator carried by
the surviving node is only an approximation of the best history, and closing
the gap to plan_exact is exactly what the benchmarks measure.

All ties are broken on (f, h, region, insertion order), so identical queries
return identical paths.
"""

from __future__ import annotations

import heapq
import math
import time
from dataclasses import dataclass, field as dataclass_field
from typing import Optional, Sequence

import numpy as np

from .terrain import traversable

FOUND = "found"
NO_PATH = "no_path"
BUDGET_EXCEEDED = "budget_exceeded"

DEFAULT_P_SUCCESS = 0.95
DEFAULT_NODE_BUDGET = 5_000_000


@dataclass
class PlanResult:
    algorithm: str
    status: str
    start: int
    goal: int
    path: Optional[list[int]]
    cost: Optional[float]
    expansions: int
    runtime: float
    params: dict = dataclass_field(default_factory=dict)

    @property
    def found(self) -> bool:
        return self.status == FOUND


# -- objectives ---------------------------------------------------------------

def obj_bin(field, path: Sequence[int]) -> int:
    """Number of distinct regions exposed anywhere along the path."""
    if len(path) == 0:
        raise ValueError("empty path")
    acc = 0
    for r in path:
        acc |= field.exposure_set(r)
    return acc.bit_count()


def path_counts(field, path: Sequence[int], tau: int) -> np.ndarray:
    """Per-region exposure counts accumulated by a path.

    Every region visible from an occupied region gains 1 per step spent
    there, except the occupied region itself which gains tau (occupancy
    saturates it outright).
    """
    if len(path) == 0:
        raise ValueError("empty path")
    tau = _check_tau(tau)
    counts = np.zeros(field.n, dtype=np.int64)
    for r in path:
        counts[field.members(r)] += 1
        counts[r] += tau - 1
    return counts


def obj_acc(counts, p_success: float, tau: int) -> float:
    """Accumulated exposure cost in -log10 survival-probability units.

    Sum over regions of -log10(max(p_success**c_i, p_success**tau)); the
    clamp caps what any single region can contribute at tau sightings.
    """
    _check_p(p_success)
    tau = _check_tau(tau)
    c = np.asarray(counts)
    if c.size and c.min() < 0:
        raise ValueError("counts must be non-negative")
    with np.errstate(under="ignore"):
        per_region = np.maximum(p_success ** c.astype(np.float64), p_success ** tau)
        return float(-np.log10(per_region).sum())


def validate_path(env, path: Sequence[int]) -> None:
    """Raise ValueError on the first region or transition that is invalid."""
    if len(path) == 0:
        raise ValueError("empty path")
    for k, r in enumerate(path):
        if not 0 <= r < env.n:
            raise ValueError(f"path[{k}] = {r} outside [0, {env.n})")
    for k in range(len(path) - 1):
        a, b = path[k], path[k + 1]
        if not traversable(env, a, b):
            raise ValueError(f"step {k}: {a} -> {b} is not traversable")


# -- parameter checks ---------------------------------------------------------

def _check_query(env, s: int, g: int) -> None:
    for name, r in (("start", s), ("goal", g)):
        if not 0 <= r < env.n:
            raise ValueError(f"{name} region {r} outside [0, {env.n})")


def _check_p(p_success: float) -> None:
    if not 0.0 < p_success < 1.0:
        raise ValueError(f"p_success must be in (0, 1), got {p_success}")


def _check_tau(tau) -> int:
    if int(tau) != tau or tau < 1:
        raise ValueError(f"tau must be a positive integer, got {tau}")
    return int(tau)


# -- planners -----------------------------------------------------------------

def plan_shortest(env, field, s: int, g: int) -> PlanResult:
    """Exposure-agnostic A*: fewest moves, admissible grid-distance heuristic."""
    _check_query(env, s, g)
    t0 = time.perf_counter()
    res = _astar_region(env, s, g,
                        step_cost=lambda a, b: 1.0,
                        h=lambda r: float(env.min_steps(r, g)))
    return _finish("shortest", res, s, g, t0, {})


def plan_ess(env, field, s: int, g: int) -> PlanResult:
    """A* on exposure scores: entering a region costs its score.

    Heuristic is the 3D Manhattan distance between representative points
    scaled by the map's minimum exposure score, an optimistic per-distance
    exposure rate.
    """
    _check_query(env, s, g)
    t0 = time.perf_counter()
    scores = field.scores()
    delta = field.min_score()
    res = _astar_region(env, s, g,
                        step_cost=lambda a, b: scores[b],
                        h=lambda r: env.manhattan3(r, g) * delta)
    return _finish("ess", res, s, g, t0, {})


def _astar_region(env, s, g, step_cost, h):
    """A* keyed on bare regions. Returns (path, cost, expansions) or a
    (None, expansions) pair when the goal is unreachable.

    Node rows are immutable (region, parent_idx, g) triples so a path walked
    back from the goal always matches the g it was queued with, even when an
    inconsistent heuristic forces reopening.
    """
    hs = h(s)
    heap = [(hs, hs, s, 0)]
    nodes = [(s, -1, 0.0)]
    best_g = {s: 0.0}
    expansions = 0
    while heap:
        f, hr, region, idx = heapq.heappop(heap)
        gg = nodes[idx][2]
        if gg > best_g.get(region, math.inf):
            continue
        expansions += 1
        if region == g:
            return _walk_nodes(nodes, idx), gg, expansions
        for nb in env.neighbors(region):
            ng = gg + step_cost(region, nb)
            if ng < best_g.get(nb, math.inf):
                best_g[nb] = ng
                hn = h(nb)
                nodes.append((nb, idx, ng))
                heapq.heappush(heap, (ng + hn, hn, nb, len(nodes) - 1))
    return None, expansions


def plan_binary(env, field, s: int, g: int, m: Optional[float] = None) -> PlanResult:
    """A* minimizing newly exposed regions.

    Nodes carry the accumulator of everything the path has exposed so far;
    stepping into b costs the accumulator growth plus m, a movement cost
    small enough (m < 1/n) that no amount of walking outweighs one exposure.
    Heuristic: goal exposures not yet in the accumulator.
    """
    _check_query(env, s, g)
    if m is None:
        m = 1.0 / (2 * env.n)
    if not 0.0 < m < 1.0 / env.n:
        raise ValueError(f"m must be in (0, 1/n); got {m} with n = {env.n}")
    t0 = time.perf_counter()

    goal_set = field.exposure_set(g)
    acc0 = field.exposure_set(s)
    h0 = (goal_set & ~acc0).bit_count()
    # heap rows: (f, h, region, seq); node rows: (region, parent_idx, g, accumulator)
    heap = [(float(h0), float(h0), s, 0)]
    nodes = [(s, -1, 0.0, acc0)]
    best_g = {s: 0.0}
    expansions = 0
    while heap:
        f, hr, region, idx = heapq.heappop(heap)
        _, parent_idx, gg, acc = nodes[idx]
        if gg > best_g.get(region, math.inf):
            continue
        expansions += 1
        if region == g:
            return _finish("binary", (_walk_nodes(nodes, idx), gg, expansions),
                           s, g, t0, {"m": m})
        for nb in env.neighbors(region):
            nacc = acc | field.exposure_set(nb)
            ng = gg + (nacc.bit_count() - acc.bit_count()) + m
            if ng < best_g.get(nb, math.inf):
                best_g[nb] = ng
                hn = float((goal_set & ~nacc).bit_count())
                nodes.append((nb, idx, ng, nacc))
                heapq.heappush(heap, (ng + hn, hn, nb, len(nodes) - 1))
    return _finish("binary", (None, expansions), s, g, t0, {"m": m})


def plan_saturation(env, field, s: int, g: int, tau: int,
                    p_success: float = DEFAULT_P_SUCCESS) -> PlanResult:
    """A* on clamped exposure counts.

    Each step adds one sighting to every region the destination exposes; the
    destination itself saturates to tau immediately. Step cost is the
    resulting growth of the clamped objective, so regions already saturated
    are free to re-expose. tau = 1 prices every transition like plan_binary
    (minus its movement cost), scaled by -log10(p_success).
    """
    _check_query(env, s, g)
    tau = _check_tau(tau)
    _check_p(p_success)
    t0 = time.perf_counter()
    unit = -math.log10(p_success)

    counts0 = np.zeros(env.n, dtype=np.int64)
    counts0[field.members(s)] += 1
    counts0[s] += tau - 1
    h0 = env.manhattan3(s, g) * tau * unit
    # Counts arrays are materialized only when a node is expanded; heap
    # entries reference the parent's expanded counts plus one move.
    heap = [(h0, h0, s, 0)]
    nodes = [(s, -1, 0.0)]
    counts_of = {0: counts0}
    best_g = {s: 0.0}
    expansions = 0
    while heap:
        f, hr, region, idx = heapq.heappop(heap)
        _, parent_idx, gg = nodes[idx]
        if gg > best_g.get(region, math.inf):
            continue
        counts = counts_of.get(idx)
        if counts is None:
            counts = counts_of[parent_idx].copy()
            counts[field.members(region)] += 1
            counts[region] += tau - 1
            counts_of[idx] = counts
        expansions += 1
        if region == g:
            return _finish("saturation", (_walk_nodes(nodes, idx), gg, expansions),
                           s, g, t0, {"tau": tau, "p_success": p_success})
        for nb in env.neighbors(region):
            mem = field.members(nb)
            # integer growth of sum(min(c, tau)): +1 per unsaturated exposed
            # region, destination jumps straight to tau
            below = int(np.count_nonzero(counts[mem] < tau))
            cb = int(counts[nb])
            if cb < tau:
                below -= 1
            delta = below + (tau - min(cb, tau))
            ng = gg + delta * unit
            if ng < best_g.get(nb, math.inf):
                best_g[nb] = ng
                hn = env.manhattan3(nb, g) * tau * unit
                nodes.append((nb, idx, ng))
                heapq.heappush(heap, (ng + hn, hn, nb, len(nodes) - 1))
    return _finish("saturation", (None, expansions), s, g, t0,
                   {"tau": tau, "p_success": p_success})


def saturation_step_cost(field, counts: np.ndarray, dest: int, tau: int,
                         p_success: float) -> float:
    """Cost plan_saturation assigns to stepping into dest from a node whose
    accumulated counts are given. Exposed here for transition-level tests."""
    tau = _check_tau(tau)
    _check_p(p_success)
    mem = field.members(dest)
    below = int(np.count_nonzero(counts[mem] < tau))
    cb = int(counts[dest])
    if cb < tau:
        below -= 1
    return (below + (tau - min(cb, tau))) * -math.log10(p_success)


def binary_step_cost(field, accumulator: int, dest: int, m: float) -> float:
    """Cost plan_binary assigns to the same transition, for the tau = 1 link."""
    grown = accumulator | field.exposure_set(dest)
    return float(grown.bit_count() - accumulator.bit_count()) + m


def plan_exact(env, field, s: int, g: int,
               node_budget: int = DEFAULT_NODE_BUDGET) -> PlanResult:
    """Optimal binary-exposure search over (region, visited-set) states.

    Keying states on the whole visited set removes the Markovian
    approximation: two arrivals at one region with different histories stay
    distinct. Only unvisited successors are generated; the exposed set never
    shrinks when a detour is dropped, so some optimal path is simple and
    remains reachable. Cost of a state is the size of everything its visited
    regions expose; the heuristic adds the goal's not-yet-exposed regions,
    which no completion can avoid.

    Exponential in the worst case. After node_budget expansions the search
    stops with a budget_exceeded result instead of returning a suboptimal
    path silently.
    """
    _check_query(env, s, g)
    if node_budget < 1:
        raise ValueError(f"node_budget must be positive, got {node_budget}")
    t0 = time.perf_counter()

    goal_set = field.exposure_set(g)
    eps0 = field.exposure_set(s)
    f0 = (eps0 | goal_set).bit_count()
    # node rows: (region, parent_idx, visited bitset, exposed bitset)
    heap = [(f0, f0 - eps0.bit_count(), s, 0)]
    nodes = [(s, -1, 1 << s, eps0)]
    seen = {(s, 1 << s)}
    expansions = 0
    while heap:
        f, hr, region, idx = heapq.heappop(heap)
        _, parent_idx, visited, eps = nodes[idx]
        if region == g:
            return _finish("exact", (_walk_nodes(nodes, idx), float(eps.bit_count()),
                                     expansions), s, g, t0, {"node_budget": node_budget})
        if expansions >= node_budget:
            return PlanResult("exact", BUDGET_EXCEEDED, s, g, None, None, expansions,
                              time.perf_counter() - t0, {"node_budget": node_budget})
        expansions += 1
        for nb in env.neighbors(region):
            bit = 1 << nb
            if visited & bit:
                continue
            nvis = visited | bit
            key = (nb, nvis)
            if key in seen:
                continue
            seen.add(key)
            neps = eps | field.exposure_set(nb)
            cost = neps.bit_count()
            nf = (neps | goal_set).bit_count()
            nodes.append((nb, idx, nvis, neps))
            heapq.heappush(heap, (nf, nf - cost, nb, len(nodes) - 1))
    return _finish("exact", (None, expansions), s, g, t0,
                   {"node_budget": node_budget})


def _walk_nodes(nodes, idx):
    path = []
    while idx >= 0:
        path.append(nodes[idx][0])
        idx = nodes[idx][1]
    path.reverse()
    return path


def _finish(algorithm, res, s, g, t0, params):
    runtime = time.perf_counter() - t0
    if res[0] is None:
        return PlanResult(algorithm, NO_PATH, s, g, None, None, res[1], runtime, params)
    path, cost, expansions = res
    return PlanResult(algorithm, FOUND, s, g, path, float(cost), expansions,
                      runtime, params)


def result_record(field, result: PlanResult, tau: Optional[int] = None,
                  p_success: Optional[float] = None) -> dict:
    """Flatten a PlanResult into one serializable record.

    obj_bin and obj_acc are recomputed from the returned path so every
    algorithm is scored on the same footing; tau and p_success default to
    the planner's own parameters, else 1 and DEFAULT_P_SUCCESS.
    """
    t = tau if tau is not None else result.params.get("tau", 1)
    p = p_success if p_success is not None else result.params.get(
        "p_success", DEFAULT_P_SUCCESS)
    rec = {
        "algorithm": result.algorithm,
        "params": dict(result.params),
        "start": result.start,
        "goal": result.goal,
        "status": result.status,
        "path": list(result.path) if result.path is not None else None,
        "cost": result.cost,
        "obj_bin": None,
        "obj_acc": None,
        "expansions": result.expansions,
        "runtime_s": result.runtime,
    }
    if result.path is not None:
        rec["obj_bin"] = obj_bin(field, result.path)
        rec["obj_acc"] = obj_acc(path_counts(field, result.path, t), p, t)
    return rec
