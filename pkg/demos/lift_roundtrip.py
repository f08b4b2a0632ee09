"""From series data back to tropical theta functions and forward again.

Start from a degree-3 descent datum over the valued series model (one
pairing entry t^12, one basis cocycle value t^18), tropicalize it, lift
each theta representative to exact Fourier coefficients, and confirm the
valuations of the lift reproduce the tropical theta function on the
nose.  Then hit a min-plus combination with an infinite slot through the
surjectivity construction, and finish by extracting a square root of a
degree-4 datum.
"""

from fractions import Fraction

from tropitheta import (
    INF, LAMBDA_GAMMA, Matrix, ThetaFunction, build_na_datum, build_torus,
    c_trop, divide_datum, fourier_lift, monomial, polarization_type,
    surjective_lift, theta_eval, tropicalize_fourier, vs_val,
)
from tropitheta.nalift import vs_mul


def main():
    torus = build_torus(Matrix.from_rows([[12]]))
    nad = build_na_datum(torus, Matrix.from_rows([[3]]),
                         [[monomial(12)]], [monomial(18)])
    trop = c_trop(nad)
    print("tropicalized datum: G = %s, ell = (%s)"
          % (trop.G[0, 0], ", ".join(str(c) for c in trop.ellVec)))
    info = polarization_type(trop)

    for b in info.reps:
        fd = fourier_lift(nad, b, 4)
        theta = ThetaFunction(trop, b, LAMBDA_GAMMA)
        pts = [(Fraction(12 * i, 7),) for i in range(7)]
        exact = all(tropicalize_fourier(fd, x) == theta_eval(theta, x)
                    for x in pts)
        support = sorted(u[0] for u in fd.coeffs)
        print("lift of b = %s: support %s, val matches theta: %s"
              % (b[0], support, exact))

    targets = [0, Fraction(1, 2), INF]
    fd, report = surjective_lift(nad, targets, 4)
    shown = ", ".join("inf" if c is INF else str(c) for c in targets)
    print("\ncombination with targets (%s):" % shown)
    print("  residue multipliers %s, samples %d, verified %s"
          % (report.lambdas, len(report.samples), report.verified))

    nad4 = build_na_datum(torus, Matrix.from_rows([[4]]),
                          [[monomial(12)]], [monomial(24)])
    half = divide_datum(nad4, 2)
    c1 = half.cBasis[0]
    print("\nsquare root of the degree-4 datum: L/2 = %s, val c_1 = %s"
          % (half.L[0, 0], vs_val(c1)))
    print("c_1^2 equals the original cocycle value: %s"
          % (vs_mul(c1, c1) == nad4.cBasis[0]))


if __name__ == "__main__":
    main()
