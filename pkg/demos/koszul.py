"""The gradient in R^3 and its Koszul resolution.

grad, curl, div form the resolution 0 <- A <- A^3 <- A^3 <- A <- 0.  The
dual complex is exact everywhere except the last term, and a brute-force
count over graded slices agrees with the Groebner-basis verdict.
"""

from overdet import catalog
from overdet.poly import format_poly
from overdet.resolution import build_resolution, degree_window, degreewise_homology, dualize, ext_vanishing
from overdet.symbol import matrix_of, principal_part


def main():
    P0 = principal_part(matrix_of(catalog.system("grad3")))
    R = build_resolution(P0)
    print("ranks", R.ranks, "length", R.length)
    for k, step in enumerate(R.steps):
        print(f"map {k}:")
        for row in step.mat:
            print("   ", "  ".join(f"{format_poly(p):>4s}" for p in row))
    print("consecutive products vanish:", R.products_zero())

    D = dualize(R)
    H = ext_vanishing(D, 3)
    for k, status in H.table().items():
        dims = [degreewise_homology(D, k, d) for d in degree_window(D, k)]
        print(f"dual homology at {k}: {status:10s} slice dimensions {dims}")
    w = H.entries[3]
    print("witness at the top term:", [format_poly(p) for p in w.witness], "verified:", w.verify(D))


if __name__ == "__main__":
    main()
