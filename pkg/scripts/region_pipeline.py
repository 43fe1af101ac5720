"""Triangulate a block of grid cubes, verify it, and export meshes.

End-to-end pipeline on one integer box: build the region triangulation,
check exact interior cancellation of the boundary, and write the chain
plus boundary-surface meshes (OBJ and VTK) into an output directory.
"""

import argparse
import os
from dataclasses import dataclass, field
from typing import Tuple

from heistri import (
    Builder,
    boundary,
    export_mesh,
    triangulate_region,
)


@dataclass
class PipelineConfig:
    n: int = 1
    eps: float = 1.0
    lo: Tuple[int, ...] = (0, 0, 0)
    hi: Tuple[int, ...] = (2, 2, 2)
    builder: Builder = Builder.STRAIGHT
    samples_per_edge: int = 4
    out_dir: str = field(default="region_out")


def run(cfg: PipelineConfig) -> None:
    os.makedirs(cfg.out_dir, exist_ok=True)
    t = triangulate_region(cfg.n, cfg.eps, cfg.lo, cfg.hi, cfg.builder)
    bdry = boundary(t.chain)

    cubes = t.provenance["cubes"]
    top = 2 * cfg.n + 1
    print(f"box {list(cfg.lo)} .. {list(cfg.hi)}: {cubes} cubes, "
          f"{len(t.chain)} simplexes of dimension {top}")
    print(f"boundary: {len(bdry)} terms after interior cancellation "
          f"(from {len(t.chain) * (top + 1)} raw faces)")

    outputs = [("chain.json", export_mesh(t, "json"))]
    if cfg.n == 1:
        outputs.append(("region.vtk", export_mesh(t, "vtk")))
        outputs.append(("surface.obj", export_mesh(bdry, "obj", cfg.samples_per_edge)))
        outputs.append(("surface.vtk", export_mesh(bdry, "vtk")))
    for name, blob in outputs:
        path = os.path.join(cfg.out_dir, name)
        with open(path, "wb") as fh:
            fh.write(blob)
        print(f"wrote {path} ({len(blob)} bytes)")


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n", type=int, default=1, help="group index")
    parser.add_argument("--eps", type=float, default=1.0, help="cube side")
    parser.add_argument("--lo", default=None, help="lower corner, e.g. 0,0,0")
    parser.add_argument("--hi", default=None, help="upper corner, e.g. 2,2,2")
    parser.add_argument("--builder", default="straight",
                        choices=["affine", "straight", "hybrid"])
    parser.add_argument("--samples", type=int, default=4,
                        help="samples per edge for the OBJ surface")
    parser.add_argument("--out", default="region_out", help="output directory")
    args = parser.parse_args()

    dim = 2 * args.n + 1
    lo = tuple(int(v) for v in args.lo.split(",")) if args.lo else (0,) * dim
    hi = tuple(int(v) for v in args.hi.split(",")) if args.hi else (2,) * dim
    run(PipelineConfig(n=args.n, eps=args.eps, lo=lo, hi=hi,
                       builder=Builder(args.builder),
                       samples_per_edge=args.samples, out_dir=args.out))


if __name__ == "__main__":
    main()
