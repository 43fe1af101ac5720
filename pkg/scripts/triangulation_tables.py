"""Print the square and cube triangulation tables with signs and boundaries.

Reproduces the exact combinatorial data of the unit square and unit cube
triangulations: the increasing vertex chains, their orientation signs, the
boundary terms that survive cancellation, and the k! simplex counts.
"""

import argparse
import math

from heistri import (
    Builder,
    CornerAssignment,
    boundary,
    increasing_maps,
    orientation_sign,
    triangulate_cube,
)


def bits_label(bits) -> str:
    return "".join(str(b) for b in bits)


def print_tables(k: int, axes) -> None:
    corners = CornerAssignment.axis_aligned(1, (0, 0, 0), 1.0, axes)
    name = {2: "square", 3: "cube"}.get(k, f"{k}-cube")
    print(f"== unit {name}: {math.factorial(k)} simplexes ==")
    for m in increasing_maps(k):
        sign = orientation_sign(m)
        chain_txt = " < ".join(bits_label(b) for b in m.seq)
        print(f"  {'+' if sign > 0 else '-'}1  {chain_txt}")

    t = triangulate_cube(corners, Builder.AFFINE)
    bdry = boundary(t.chain)
    print(f"  boundary after cancellation: {len(bdry)} terms "
          f"(from {math.factorial(k) * (k + 1)} raw faces)")
    for desc, coeff in bdry.items_sorted():
        verts = ", ".join("(" + ", ".join(f"{c:g}" for c in v.w) + ")"
                          for v in desc.vertices)
        print(f"  {'+' if coeff > 0 else '-'}1  [{verts}]")
    print()


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--max-k", type=int, default=7,
                        help="largest dimension for the simplex count table")
    args = parser.parse_args()

    print_tables(2, (1, 2))
    print_tables(3, (1, 2, 3))

    print("== simplex counts ==")
    for k in range(1, args.max_k + 1):
        count = len(increasing_maps(k))
        print(f"  k = {k}: {count} increasing maps (k! = {math.factorial(k)})")


if __name__ == "__main__":
    main()
