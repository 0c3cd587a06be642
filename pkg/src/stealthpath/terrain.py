"""Grid environments and line-of-sight exposure fields.

The world is a rectangular grid of square cells over a heightmap. Each cell
is one planning region and carries a single representative point: the cell
centre in the horizontal plane, lifted to the cell's elevation plus a sensor
offset ``d`` (a camera about a metre off the ground for a typical surface
robot). Row 0 is the northernmost row; region indices run row-major.

Two regions share line of sight when the straight segment between their
representative points clears the terrain. The segment is walked in steps of
a quarter cell of horizontal distance and is considered blocked as soon as
the elevation of the cell under a sample rises strictly above the ray.
Samples that land inside either endpoint cell are skipped, so a region never
occludes itself and grazing contact counts as visible.

The all-pairs relation is the exposure field: one bitset row per region,
reflexive (a region always sees itself) and symmetric. Every structure here
is immutable once built and safe to share across concurrent planner runs.

Movement is separate from sight: regions are traversable neighbours when
they are grid-adjacent (4- or 8-connectivity) and their elevation difference
is within ``max_step``. A region is never traversable to itself.
"""

from __future__ import annotations

import math
from typing import Iterable, Sequence

import numpy as np

LOS_SAMPLES_PER_CELL = 4

# Keeps the (targets x samples) scratch arrays of the field builder at a
# sane size; one chunk covers a 50x50 map in full.
_LOS_CHUNK_ELEMENTS = 4_000_000

_OFFSETS_4 = ((-1, 0), (0, -1), (0, 1), (1, 0))
_OFFSETS_8 = ((-1, -1), (-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0), (1, 1))


class GridEnvironment:
    """A heightmap with precomputed representative points and adjacency."""

    def __init__(self, elevations, cell_size: float = 1.0, d: float = 1.0,
                 max_step: float = math.inf, connectivity: int = 4):
        elev = np.array(elevations, dtype=np.float64)
        if elev.ndim != 2 or elev.size == 0:
            raise ValueError("elevations must be a non-empty 2D grid")
        if not np.isfinite(elev).all():
            raise ValueError("elevations must be finite")
        if not (cell_size > 0 and math.isfinite(cell_size)):
            raise ValueError(f"cell_size must be positive and finite, got {cell_size}")
        if not (d >= 0 and math.isfinite(d)):
            raise ValueError(f"sensor offset d must be non-negative and finite, got {d}")
        if not (isinstance(max_step, (int, float)) and max_step >= 0):
            raise ValueError(f"max_step must be non-negative, got {max_step}")
        if connectivity not in (4, 8):
            raise ValueError(f"connectivity must be 4 or 8, got {connectivity}")

        elev.setflags(write=False)
        self.elevations = elev
        self.height, self.width = elev.shape
        self.n = elev.size
        self.cell_size = float(cell_size)
        self.d = float(d)
        self.max_step = float(max_step)
        self.connectivity = connectivity

        rows, cols = np.divmod(np.arange(self.n), self.width)
        flat = elev.ravel()
        pts = np.empty((self.n, 3))
        pts[:, 0] = (cols + 0.5) * self.cell_size
        pts[:, 1] = (rows + 0.5) * self.cell_size
        pts[:, 2] = flat + self.d
        pts.setflags(write=False)
        self.points = pts
        self._elev_flat = flat

        offsets = _OFFSETS_4 if connectivity == 4 else _OFFSETS_8
        nbrs = []
        for i in range(self.n):
            r, c = divmod(i, self.width)
            adj = []
            for dr, dc in offsets:
                rr, cc = r + dr, c + dc
                if 0 <= rr < self.height and 0 <= cc < self.width:
                    j = rr * self.width + cc
                    if abs(flat[j] - flat[i]) <= self.max_step:
                        adj.append(j)
            adj.sort()
            nbrs.append(tuple(adj))
        self._neighbors = tuple(nbrs)

    # -- region bookkeeping ------------------------------------------------

    def index(self, row: int, col: int) -> int:
        if not (0 <= row < self.height and 0 <= col < self.width):
            raise IndexError(f"cell ({row}, {col}) outside {self.height}x{self.width} grid")
        return row * self.width + col

    def rowcol(self, region: int) -> tuple[int, int]:
        self._check(region)
        return divmod(region, self.width)

    def _check(self, region: int) -> None:
        if not (0 <= region < self.n):
            raise IndexError(f"region {region} outside [0, {self.n})")

    def neighbors(self, region: int) -> tuple[int, ...]:
        self._check(region)
        return self._neighbors[region]

    # -- heuristic support -------------------------------------------------

    def min_steps(self, a: int, b: int) -> int:
        """Admissible lower bound on the number of moves between two regions."""
        ra, ca = divmod(a, self.width)
        rb, cb = divmod(b, self.width)
        if self.connectivity == 4:
            return abs(ra - rb) + abs(ca - cb)
        return max(abs(ra - rb), abs(ca - cb))

    def manhattan3(self, a: int, b: int) -> float:
        pa = self.points[a]
        pb = self.points[b]
        return float(abs(pa[0] - pb[0]) + abs(pa[1] - pb[1]) + abs(pa[2] - pb[2]))


class ExplicitGraph:
    """Planning environment given directly as an adjacency list.

    Used for hand-built scenarios that bypass terrain geometry. Edges are
    symmetrized; representative points are optional and only feed the
    distance heuristics (absent points degrade them to zero, which keeps
    every planner correct, just less guided).
    """

    def __init__(self, n: int, edges: Iterable[tuple[int, int]], points=None):
        if n <= 0:
            raise ValueError("need at least one region")
        adj: list[set[int]] = [set() for _ in range(n)]
        for a, b in edges:
            if not (0 <= a < n and 0 <= b < n):
                raise ValueError(f"edge ({a}, {b}) outside [0, {n})")
            if a == b:
                raise ValueError(f"self-edge at region {a}")
            adj[a].add(b)
            adj[b].add(a)
        self.n = n
        self._neighbors = tuple(tuple(sorted(s)) for s in adj)
        if points is not None:
            points = np.asarray(points, dtype=np.float64)
            if points.shape != (n, 3):
                raise ValueError(f"points must be ({n}, 3)")
        self.points = points

    def neighbors(self, region: int) -> tuple[int, ...]:
        if not (0 <= region < self.n):
            raise IndexError(f"region {region} outside [0, {self.n})")
        return self._neighbors[region]

    def min_steps(self, a: int, b: int) -> int:
        return 0

    def manhattan3(self, a: int, b: int) -> float:
        if self.points is None:
            return 0.0
        pa, pb = self.points[a], self.points[b]
        return float(abs(pa[0] - pb[0]) + abs(pa[1] - pb[1]) + abs(pa[2] - pb[2]))


def build_environment(elevations, cell_size: float = 1.0, d: float = 1.0,
                      max_step: float = math.inf, connectivity: int = 4) -> GridEnvironment:
    """Validate a heightmap and assemble the planning environment."""
    return GridEnvironment(elevations, cell_size=cell_size, d=d,
                           max_step=max_step, connectivity=connectivity)


def traversable(env, a: int, b: int) -> bool:
    """True when a robot may move directly from region a to region b."""
    if a == b:
        return False
    return b in env.neighbors(a)


# -- line of sight ----------------------------------------------------------

def _visible_to_targets(env: GridEnvironment, source: int, targets: np.ndarray) -> np.ndarray:
    """Sampled visibility from one region to many, as a bool array.

    This is the single implementation of the sighting rule; the scalar
    line_of_sight wrapper and the field builder both call it, so the two can
    never disagree.
    """
    pts = env.points
    cell = env.cell_size
    width, height = env.width, env.height
    elev = env._elev_flat
    step = cell / LOS_SAMPLES_PER_CELL

    sx, sy, sz = pts[source]
    tp = pts[targets]
    dx = tp[:, 0] - sx
    dy = tp[:, 1] - sy
    dz = tp[:, 2] - sz
    span = np.hypot(dx, dy)

    visible = np.ones(len(targets), dtype=bool)
    chunk = max(1, int(_LOS_CHUNK_ELEMENTS // max(1.0, span.max() / step + 1)))
    for lo in range(0, len(targets), chunk):
        hi = lo + chunk
        sp = span[lo:hi]
        kmax = int(sp.max() / step) + 1
        if kmax < 1:
            continue
        ks = np.arange(1, kmax + 1) * step
        frac = ks[None, :] / sp[:, None]
        x = sx + frac * dx[lo:hi, None]
        y = sy + frac * dy[lo:hi, None]
        z = sz + frac * dz[lo:hi, None]
        col = np.clip(np.floor(x / cell).astype(np.int64), 0, width - 1)
        row = np.clip(np.floor(y / cell).astype(np.int64), 0, height - 1)
        under = row * width + col
        blocking = (elev[under] > z) \
            & (ks[None, :] < sp[:, None]) \
            & (under != source) \
            & (under != targets[lo:hi, None])
        visible[lo:hi] = ~np.any(blocking, axis=1)
    return visible


def line_of_sight(env: GridEnvironment, a: int, b: int) -> bool:
    env._check(a)
    env._check(b)
    if a == b:
        return True
    return bool(_visible_to_targets(env, a, np.array([b]))[0])


def compute_exposure_field(env: GridEnvironment) -> "ExposureField":
    """All-pairs visibility as an ExposureField.

    Each unordered pair is sampled once and mirrored, so symmetry holds by
    construction. O(n^2) pairs; a 50x50 map takes a few seconds, 100x100
    runs for minutes (cache it, see the mapio module).
    """
    n = env.n
    nbytes = (n + 7) // 8
    packed = np.zeros((n, nbytes), dtype=np.uint8)
    scratch = np.zeros(nbytes * 8, dtype=bool)
    for i in range(n):
        packed[i, i >> 3] |= np.uint8(1 << (i & 7))
        if i + 1 == n:
            continue
        targets = np.arange(i + 1, n)
        seen = targets[_visible_to_targets(env, i, targets)]
        if len(seen) == 0:
            continue
        scratch[:] = False
        scratch[seen] = True
        packed[i] |= np.packbits(scratch, bitorder="little")
        packed[seen, i >> 3] |= np.uint8(1 << (i & 7))
    rows = [int.from_bytes(packed[i].tobytes(), "little") for i in range(n)]
    return ExposureField(rows)


# -- exposure field ----------------------------------------------------------

class ExposureField:
    """Symmetric, reflexive visibility relation over n regions.

    Row i is an int bitset of every region sharing line of sight with i,
    including i itself. Exposure scores therefore live in [1/n, 1].
    """

    __slots__ = ("n", "rows", "_counts", "_scores", "_members")

    def __init__(self, rows: Sequence[int], validate: bool = False):
        self.n = len(rows)
        if self.n == 0:
            raise ValueError("exposure field needs at least one region")
        # plain ints, never numpy integers: rows must not overflow at n > 63
        self.rows = tuple(int(r) for r in rows)
        self._counts = tuple(r.bit_count() for r in self.rows)
        self._scores = None
        self._members: dict[int, np.ndarray] = {}
        if validate:
            self.validate()

    def _check(self, region: int) -> None:
        if not (0 <= region < self.n):
            raise IndexError(f"region {region} outside [0, {self.n})")

    def exposure_set(self, region: int) -> int:
        """Bitset of regions visible from `region` (reflexive)."""
        self._check(region)
        return self.rows[region]

    def exposure_count(self, region: int) -> int:
        self._check(region)
        return self._counts[region]

    def exposure_score(self, region: int) -> float:
        """Fraction of the map visible from a region, in [1/n, 1]."""
        self._check(region)
        return self._counts[region] / self.n

    def scores(self) -> np.ndarray:
        if self._scores is None:
            arr = np.array(self._counts, dtype=np.float64) / self.n
            arr.setflags(write=False)
            self._scores = arr
        return self._scores

    def min_score(self) -> float:
        return float(min(self._counts)) / self.n

    def members(self, region: int) -> np.ndarray:
        """Visible regions as a sorted index array (cached per region)."""
        self._check(region)
        got = self._members.get(region)
        if got is None:
            nbytes = (self.n + 7) // 8
            raw = np.frombuffer(self.rows[region].to_bytes(nbytes, "little"), dtype=np.uint8)
            got = np.flatnonzero(np.unpackbits(raw, bitorder="little")[:self.n])
            self._members[region] = got
        return got

    def to_packed(self) -> np.ndarray:
        """Rows as a (n, ceil(n/8)) uint8 matrix, little-endian bit order."""
        nbytes = (self.n + 7) // 8
        out = np.empty((self.n, nbytes), dtype=np.uint8)
        for i, row in enumerate(self.rows):
            out[i] = np.frombuffer(row.to_bytes(nbytes, "little"), dtype=np.uint8)
        return out

    @classmethod
    def from_packed(cls, packed: np.ndarray, n: int, validate: bool = True) -> "ExposureField":
        rows = [int.from_bytes(packed[i].tobytes(), "little") for i in range(n)]
        return cls(rows, validate=validate)

    def validate(self) -> None:
        """Check reflexivity and symmetry, raising ValueError on violation."""
        full = np.unpackbits(self.to_packed(), axis=1, bitorder="little")[:, :self.n]
        if not full.diagonal().all():
            bad = int(np.flatnonzero(~full.diagonal().astype(bool))[0])
            raise ValueError(f"exposure relation not reflexive at region {bad}")
        if (full != full.T).any():
            i, j = (int(v[0]) for v in np.nonzero(full != full.T))
            raise ValueError(f"exposure relation not symmetric at pair ({i}, {j})")
        if any(r >> self.n for r in self.rows):
            raise ValueError("exposure row has bits beyond the region count")

    def __eq__(self, other) -> bool:
        return isinstance(other, ExposureField) and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)
