"""Survey face and subface regularity over a window of grid cubes.

Walks every cube whose base lies in a square window of the integer
lattice and tallies which faces are H-regular on their full surface
versus only on their interior.  The survey makes the geometric picture
concrete: interior-only faces appear exactly on cubes whose closure
touches the t-axis, and only on the two faces perpendicular to t.
"""

import argparse
import itertools
from dataclasses import dataclass

from heistri import (
    Cube,
    Regularity,
    face_regularity,
    faces,
    subface_regularity,
    subfaces,
)


@dataclass
class SurveyConfig:
    n: int = 1
    eps: float = 1.0
    lo: int = -2
    hi: int = 2
    with_subfaces: bool = False


def survey(cfg: SurveyConfig) -> None:
    dim = 2 * cfg.n + 1
    bases = itertools.product(range(cfg.lo, cfg.hi), repeat=dim)
    touched = 0
    total = 0
    print(f"n = {cfg.n}, eps = {cfg.eps}, bases in [{cfg.lo}, {cfg.hi})^{dim}")
    for base in bases:
        cube = Cube(cfg.n, base, cfg.eps)
        interior_faces = []
        interior_subfaces = 0
        n_subfaces = 0
        for face in faces(cube):
            rep = face_regularity(face)
            if rep.classification is Regularity.INTERIOR_ONLY:
                interior_faces.append(face.label)
            if cfg.with_subfaces and cfg.n >= 2:
                for sf in subfaces(face):
                    n_subfaces += 1
                    if subface_regularity(sf).classification is Regularity.INTERIOR_ONLY:
                        interior_subfaces += 1
        total += 1
        if interior_faces:
            touched += 1
            line = f"  base {base}: interior-only faces {interior_faces}"
            if cfg.with_subfaces and cfg.n >= 2:
                line += f", subfaces {interior_subfaces}/{n_subfaces}"
            print(line)
    print(f"{touched} of {total} cubes touch the t-axis; "
          f"all other faces are H-regular surfaces in full")


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n", type=int, default=1, help="group index")
    parser.add_argument("--eps", type=float, default=1.0, help="cube side")
    parser.add_argument("--lo", type=int, default=-2, help="window lower bound")
    parser.add_argument("--hi", type=int, default=2, help="window upper bound")
    parser.add_argument("--subfaces", action="store_true",
                        help="also tally subfaces (needs n >= 2)")
    args = parser.parse_args()
    survey(SurveyConfig(n=args.n, eps=args.eps, lo=args.lo, hi=args.hi,
                        with_subfaces=args.subfaces))


if __name__ == "__main__":
    main()
