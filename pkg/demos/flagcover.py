"""Flags of a polytope and the cutoff recursion.

Cutoffs attached to the faces of a triangle are built on a rational grid
and the telescoping sums are checked exactly.  The edge level telescopes.
The vertex level leaves a residual near edge midpoints: with edges at
least 2b long, the b-neighborhoods of the two endpoints cannot cover the
b-neighborhood of the edge.
"""

from overdet import catalog
from overdet.flagcover import (build_partition, constant_grid_function, enumerate_flags,
                               face_lattice, radius_chain, telescope_check)


def main():
    L = face_lattice(catalog.triangle())
    for k in range(L.d):
        print(f"{k}-flags:", enumerate_flags(L, k))
    parts = {k: build_partition(L, k) for k in range(L.d)}
    rep = telescope_check(L, parts, constant_grid_function(L))
    print("partition sums exact:", rep.partitions_ok())
    print("supports inside the face neighborhoods:", rep.supports_ok)
    for k in range(L.d):
        print(f"telescoping at level {k}:", "exact" if rep.residuals_zero_at(k) else "residual")
    (k, B), x = rep.first_residual()
    print("  first residual at", tuple(map(str, x)), "for flag", B)

    for c, m in (("1/8", 2), ("1/16", 2), ("1/2", 1)):
        r = radius_chain(m, c)
        print(f"c={c}: 3b + b/2c = {r.lhs} <= b/c = {r.rhs}: {r.holds}")


if __name__ == "__main__":
    main()
