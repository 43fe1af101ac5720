"""Triangulation of combinatorial cubes by increasing vertex maps.

A k-cube with corners indexed by {0,1}^k is cut into k! simplexes, one per
maximal strictly increasing chain from the all-zeros string to the
all-ones string (each step raises exactly one coordinate, so chains
correspond to permutations of the axes).  The chain of the triangulation
weights each simplex by the sign of the integer determinant of its vertex
difference rows.

Exact cancellation is the load-bearing property: both the interior faces
of one cube and the shared faces of adjacent grid cubes must cancel in
the boundary chain.  Cancellation happens at descriptor level (builder
tag + vertex bits), so corner coordinates are always computed as
eps * (integer base + bit) with the integer addition first; adjacent
cubes then produce bit-identical vertex tuples and no tolerance is ever
needed.
"""

from __future__ import annotations

import itertools
import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .core import HPoint
from .grid import Cube, grid_cover
from .horizontal import build_map
from .simplex import (
    Builder,
    Chain,
    PLMap,
    SimplexDescriptor,
    boundary,
    chain_to_json,
)

__all__ = [
    "IncreasingMap",
    "CornerAssignment",
    "TriangulationChain",
    "increasing_maps",
    "orientation_sign",
    "triangulate_cube",
    "boundary_of_triangulation",
    "triangulate_region",
    "export_mesh",
    "thread_count",
]

Bits = Tuple[int, ...]


@dataclass(frozen=True)
class IncreasingMap:
    """A maximal chain 0..0 -> 1..1 in the componentwise order on {0,1}^k."""

    k: int
    seq: Tuple[Bits, ...]

    def __post_init__(self):
        object.__setattr__(self, "seq", tuple(tuple(int(b) for b in s) for s in self.seq))
        if len(self.seq) != self.k + 1:
            raise ValueError("chain length must be k+1")
        if any(len(s) != self.k for s in self.seq):
            raise ValueError("strings must have k bits")
        if self.k == 0:
            return
        if any(b != 0 for b in self.seq[0]) or any(b != 1 for b in self.seq[-1]):
            raise ValueError("chain must run from all zeros to all ones")
        for a, b in zip(self.seq, self.seq[1:]):
            diffs = [y - x for x, y in zip(a, b)]
            if sorted(diffs) != [0] * (self.k - 1) + [1]:
                raise ValueError("consecutive strings must raise exactly one bit")


def increasing_maps(k: int) -> List[IncreasingMap]:
    """All k! maximal chains, sorted lexicographically by their sequences."""
    if k < 0:
        raise ValueError("dimension must be >= 0")
    if k == 0:
        return [IncreasingMap(0, ((),))]
    out = []
    for perm in itertools.permutations(range(k)):
        cur = [0] * k
        seq = [tuple(cur)]
        for axis in perm:
            cur[axis] = 1
            seq.append(tuple(cur))
        out.append(IncreasingMap(k, tuple(seq)))
    out.sort(key=lambda m: m.seq)
    return out


def _int_det(rows: List[List[int]]) -> int:
    """Bareiss fraction-free determinant over the integers."""
    m = [row[:] for row in rows]
    size = len(m)
    sign = 1
    prev = 1
    for col in range(size - 1):
        if m[col][col] == 0:
            for r in range(col + 1, size):
                if m[r][col] != 0:
                    m[col], m[r] = m[r], m[col]
                    sign = -sign
                    break
            else:
                return 0
        for r in range(col + 1, size):
            for c in range(col + 1, size):
                m[r][c] = (m[r][c] * m[col][col] - m[r][col] * m[col][c]) // prev
            m[r][col] = 0
        prev = m[col][col]
    return sign * m[size - 1][size - 1]


def orientation_sign(s: IncreasingMap) -> int:
    """Sign of det of the rows s(i) - s(0); equals the step permutation parity."""
    if s.k == 0:
        return 1
    rows = [[b - a for a, b in zip(s.seq[0], s.seq[i])] for i in range(1, s.k + 1)]
    det = _int_det(rows)
    if det == 0:
        raise ValueError("degenerate increasing map")
    return 1 if det > 0 else -1


# ============================================================
# corner assignments and triangulation chains
# ============================================================


@dataclass(frozen=True)
class CornerAssignment:
    """The 2^k corner points of a combinatorial k-cube in H^n."""

    k: int
    n: int
    corners: Tuple[Tuple[Bits, HPoint], ...]

    def __post_init__(self):
        pairs = tuple(sorted((tuple(int(b) for b in bits), p) for bits, p in self.corners))
        object.__setattr__(self, "corners", pairs)
        if len(pairs) != 2 ** self.k:
            raise ValueError(f"expected {2 ** self.k} corners")
        seen = {bits for bits, _ in pairs}
        if seen != set(itertools.product((0, 1), repeat=self.k)):
            raise ValueError("corner keys must enumerate {0,1}^k")
        for _, p in pairs:
            if p.n != self.n:
                raise ValueError("group index mismatch")

    def corner(self, bits: Bits) -> HPoint:
        bits = tuple(int(b) for b in bits)
        for key, p in self.corners:
            if key == bits:
                return p
        raise KeyError(bits)

    @classmethod
    def axis_aligned(cls, n: int, base: Sequence[int], eps: float,
                     axes: Sequence[int]) -> "CornerAssignment":
        """Corners of a sub-cube spanned along the given 1-based axes.

        Coordinates on the remaining axes stay at their base wall.  Corner
        floats are eps*(base+bit), integer sum first.
        """
        base = tuple(int(b) for b in base)
        axes = tuple(axes)
        if len(set(axes)) != len(axes):
            raise ValueError("axes must be distinct")
        pairs = []
        for bits in itertools.product((0, 1), repeat=len(axes)):
            full = list(base)
            for axis, bit in zip(axes, bits):
                full[axis - 1] += bit
            p = HPoint(n, tuple(eps * v for v in full))
            pairs.append((bits, p))
        return cls(len(axes), n, tuple(pairs))

    @classmethod
    def from_cube(cls, cube: Cube) -> "CornerAssignment":
        return cls.axis_aligned(cube.n, cube.base, cube.eps,
                                tuple(range(1, 2 * cube.n + 2)))


@dataclass(frozen=True)
class TriangulationChain:
    chain: Chain
    provenance: dict
    builder: Builder


_TRIANGULATION_BUILDERS = (Builder.AFFINE, Builder.STRAIGHT, Builder.HYBRID)


def triangulate_cube(corners: CornerAssignment, builder: Builder) -> TriangulationChain:
    """The signed chain of k! simplexes cutting the corner cube."""
    builder = Builder(builder)
    if builder not in _TRIANGULATION_BUILDERS:
        raise ValueError(f"builder {builder.value} is not a triangulation builder")
    k = corners.k
    if builder is Builder.HYBRID and k > 2 * corners.n + 1:
        raise ValueError("dimension exceeds 2n+1")
    terms: Dict[SimplexDescriptor, int] = {}
    for s in increasing_maps(k):
        verts = tuple(corners.corner(bits) for bits in s.seq)
        desc = SimplexDescriptor(builder, verts, corners.n)
        terms[desc] = terms.get(desc, 0) + orientation_sign(s)
    chain = Chain(k, corners.n, terms)
    return TriangulationChain(chain, {"kind": "cube", "k": k}, builder)


def boundary_of_triangulation(t: TriangulationChain) -> Chain:
    return boundary(t.chain)


def thread_count() -> int:
    """Worker cap from HEISTRI_THREADS (>=1; unset or invalid means 1)."""
    raw = os.environ.get("HEISTRI_THREADS", "")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def triangulate_region(n: int, eps: float, lo: Sequence[int], hi: Sequence[int],
                       builder: Builder) -> TriangulationChain:
    """Sum of cube triangulations over the integer box [lo, hi).

    Shared faces of adjacent cubes carry bit-identical vertex tuples, so
    their boundary terms cancel exactly regardless of the merge order;
    parallel merging is therefore safe and the output deterministic.
    """
    builder = Builder(builder)
    cubes = grid_cover(n, eps, lo, hi)
    k = 2 * n + 1

    def one(cube: Cube) -> Chain:
        return triangulate_cube(CornerAssignment.from_cube(cube), builder).chain

    workers = thread_count()
    if workers > 1 and len(cubes) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(one, cubes))
    else:
        parts = [one(cube) for cube in cubes]

    total = Chain(k, n)
    for part in parts:
        total = total + part
    prov = {"kind": "region", "eps": eps, "lo": [int(v) for v in lo],
            "hi": [int(v) for v in hi], "cubes": len(cubes)}
    return TriangulationChain(total, prov, builder)


# ============================================================
# mesh export
# ============================================================


def _as_chain(t: Union[TriangulationChain, Chain]) -> Tuple[Chain, Optional[dict]]:
    if isinstance(t, TriangulationChain):
        return t.chain, {"provenance": t.provenance, "builder": t.builder.value}
    return t, None


def _triangle_lattice(s: int):
    """Sub-triangles of a barycentric triangle refined s times per edge."""
    verts = {}
    tris = []
    def vid(i, j):
        key = (i, j)
        if key not in verts:
            verts[key] = len(verts)
        return verts[key]
    for i in range(s + 1):
        for j in range(s + 1 - i):
            vid(i, j)
    for i in range(s):
        for j in range(s - i):
            tris.append((vid(i, j), vid(i + 1, j), vid(i, j + 1)))
            if i + j <= s - 2:
                tris.append((vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1)))
    coords = sorted(verts.items(), key=lambda kv: kv[1])
    bary = [((s - i - j) / s, i / s, j / s) for (i, j), _ in coords]
    return bary, tris


def _sampled_cells(chain: Chain, samples: int, dim: int):
    """Yield (coeff, vertex coordinate tuples) per output cell, deterministically."""
    for desc, coeff in chain.items_sorted():
        m = build_map(desc)
        for cell in m.cells:
            imgs = [p.w for p in cell.images]
            if dim == 2 and samples > 1:
                bary, tris = _triangle_lattice(samples)
                pts = [tuple(sum(b[i] * imgs[i][c] for i in range(3))
                             for c in range(len(imgs[0]))) for b in bary]
                for tri in tris:
                    yield coeff, [pts[i] for i in tri]
            else:
                yield coeff, imgs


def export_mesh(t: Union[TriangulationChain, Chain], format: str,
                samples_per_edge: int = 1) -> bytes:
    """Serialize a chain as OBJ triangles, a legacy VTK grid, or JSON.

    OBJ needs n=1 (three ambient coordinates) and a 2-chain; VTK needs n=1
    and a 2- or 3-chain (cell types 5 and 10).  Negative coefficients flip
    the cell orientation.  samples_per_edge refines triangles only.
    """
    chain, extra = _as_chain(t)
    fmt = format.lower()
    if samples_per_edge < 1:
        raise ValueError("samples_per_edge must be >= 1")

    if fmt == "json":
        return (json.dumps(chain_to_json(chain, extra), indent=2) + "\n").encode()

    if chain.n != 1:
        if fmt == "obj":
            raise ValueError("OBJ export requires 3 ambient dimensions")
        raise ValueError("VTK export requires 3 ambient dimensions")
    if fmt == "obj" and chain.k != 2:
        raise ValueError("OBJ export emits triangles; need a 2-chain")
    if fmt == "vtk" and chain.k not in (2, 3):
        raise ValueError("VTK export needs a 2-chain or 3-chain")
    if chain.k == 3 and samples_per_edge > 1:
        raise ValueError("samples_per_edge > 1 is implemented for triangles only")

    vert_index: Dict[Tuple[float, ...], int] = {}
    verts: List[Tuple[float, ...]] = []
    cells: List[Tuple[int, ...]] = []

    def vid(p: Tuple[float, ...]) -> int:
        got = vert_index.get(p)
        if got is None:
            got = len(verts)
            vert_index[p] = got
            verts.append(p)
        return got

    for coeff, imgs in _sampled_cells(chain, samples_per_edge, chain.k):
        ids = [vid(p) for p in imgs]
        if coeff < 0:
            ids[0], ids[1] = ids[1], ids[0]
        for _ in range(abs(coeff)):
            cells.append(tuple(ids))

    if fmt == "obj":
        lines = [f"v {p[0]!r} {p[1]!r} {p[2]!r}" for p in verts]
        lines += ["f " + " ".join(str(i + 1) for i in ids) for ids in cells]
        return ("\n".join(lines) + "\n").encode()

    if fmt == "vtk":
        ctype = 5 if chain.k == 2 else 10
        lines = ["# vtk DataFile Version 3.0", "heistri mesh", "ASCII",
                 "DATASET UNSTRUCTURED_GRID", f"POINTS {len(verts)} double"]
        lines += [f"{p[0]!r} {p[1]!r} {p[2]!r}" for p in verts]
        lines.append(f"CELLS {len(cells)} {len(cells) * (chain.k + 2)}")
        lines += [f"{len(ids)} " + " ".join(str(i) for i in ids) for ids in cells]
        lines.append(f"CELL_TYPES {len(cells)}")
        lines += [str(ctype)] * len(cells)
        return ("\n".join(lines) + "\n").encode()

    raise ValueError(f"unknown format {format!r}")
