"""The Laplace-like square of a complex at symbol level.

For the Cauchy-Riemann pair in R^4 the square is R^3 times the identity,
R = |xi|^2.  Its quadratic form splits into two squared norms, checked
exactly on random rational pairs.  For the wave operator the form
degenerates on the light cone.
"""

from overdet import catalog
from overdet.omega import build_omega, laplace_symbol, omega_positivity
from overdet.poly import GaussPoly
from overdet.resolution import build_resolution
from overdet.symbol import matrix_of, principal_part


def main():
    P0 = principal_part(matrix_of(catalog.system("cr2")))
    R = build_resolution(P0)
    om = build_omega(P0, R.steps[1])
    print("cr2: t =", om.t, "shift", om.shift)
    R3, zero = laplace_symbol(4) ** 3, GaussPoly.zero(4)
    print("  Omega == R^3 * Id:", om.matrix.mat == ((R3, zero), (zero, R3)))
    rep = omega_positivity(om, pairs=200, samples=300, seed=1)
    print(f"  identity holds on {rep.identity_checks} pairs: {rep.identity_holds}")
    print(f"  smallest sampled ratio: {float(rep.min_ratio):.4f}")

    wave = principal_part(matrix_of(catalog.system("wave2")))
    rep = omega_positivity(build_omega(wave), pairs=10, samples=10)
    xi, v = rep.degenerate
    print("wave2: form vanishes at xi =", tuple(map(str, xi)), "v =", tuple(map(str, v)))


if __name__ == "__main__":
    main()
