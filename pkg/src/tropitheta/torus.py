"""Real tori with integral structure and tropical descent data.

Coordinate conventions, used consistently across the package:

  * points x of N_R are rational vectors in the dual basis e_1^v .. e_n^v
    of the integral structure N (written x-hat);
  * points of the period lattice M' are integer vectors in the basis
    f'_1 .. f'_n, and Pmat column j holds the e^v-coordinates of f'_j,
    so the point of u' with f'-coordinates w is Pmat.w;
  * points of M are integer vectors in the basis e_1 .. e_n, and the
    pairing of m in M with x in N_R is the dot product m . x-hat.

A descent datum is (lambda, gamma) with lambda: M' -> M linear and gamma
quasi-quadratic; in coordinates lambda is an integer matrix L with
lambda(f'_j) = sum_i L_ij e_i, and gamma is determined by the Gram matrix
G = L^T.Pmat together with a linear part ell via

    gamma(a) = (1/2) a^T G a - ell . a                 (a in f'-coordinates)

which satisfies the cocycle identity gamma(a+b) - gamma(a) - gamma(b) =
b^T G a exactly.  Symmetry of G encodes the symmetry of <lambda(.), .>,
and the datum is a polarization when G is positive definite.
"""

import itertools
from fractions import Fraction

from .errors import (
    NonIntegerLambda, NonSymmetric, NotPolarization, SingularEmbedding,
)
from .exactlinalg import (
    Matrix, det, dot, gram_norm, inverse, is_positive_definite, snf, solve,
    to_vector,
)


class TorusPresentation:
    """The torus N_R / M', presented by the period matrix Pmat."""

    __slots__ = ("n", "Pmat", "Pinv")

    def __init__(self, Pmat):
        if not Pmat.is_square:
            raise SingularEmbedding("period matrix must be square")
        if det(Pmat) == 0:
            raise SingularEmbedding("period matrix is singular")
        object.__setattr__(self, "n", Pmat.rows)
        object.__setattr__(self, "Pmat", Pmat)
        object.__setattr__(self, "Pinv", inverse(Pmat))

    def __setattr__(self, name, value):
        raise AttributeError("TorusPresentation is immutable")

    def lattice_point(self, w):
        """e^v-coordinates of the M'-point with f'-coordinates w."""
        return self.Pmat.matvec(w)

    def lattice_coords(self, x):
        """f'-coordinates of a point given in e^v-coordinates."""
        return self.Pinv.matvec(x)

    def __repr__(self):
        return "TorusPresentation(%r)" % (self.Pmat,)


def build_torus(Pmat):
    return TorusPresentation(Pmat)


class TropicalDescentDatum:
    """A descent pair (lambda, gamma) on a presented torus, stored as
    (L, ellVec) with the Gram matrix G = L^T.Pmat derived and cached.

    `polarized` records whether G is positive definite; evaluation of
    theta functions requires it, the data model does not.
    """

    __slots__ = ("torus", "L", "ellVec", "G", "polarized", "_Ginv")

    def __init__(self, torus, L, ellVec):
        if L.rows != torus.n or L.cols != torus.n:
            raise ValueError("lambda matrix has wrong shape")
        if not L.is_integral():
            raise NonIntegerLambda("lambda matrix must be integral")
        ellVec = to_vector(ellVec)
        if len(ellVec) != torus.n:
            raise ValueError("ell vector has wrong length")
        G = L.transpose() * torus.Pmat
        if not G.is_symmetric():
            raise NonSymmetric("L^T.Pmat is not symmetric")
        object.__setattr__(self, "torus", torus)
        object.__setattr__(self, "L", L)
        object.__setattr__(self, "ellVec", ellVec)
        object.__setattr__(self, "G", G)
        object.__setattr__(self, "polarized", is_positive_definite(G))
        object.__setattr__(self, "_Ginv", None)

    def __setattr__(self, name, value):
        raise AttributeError("TropicalDescentDatum is immutable")

    @property
    def n(self):
        return self.torus.n

    def gram_inverse(self):
        if self._Ginv is None:
            if not self.polarized:
                raise NotPolarization("G is not positive definite")
            object.__setattr__(self, "_Ginv", inverse(self.G))
        return self._Ginv

    def with_ell(self, ellVec):
        return TropicalDescentDatum(self.torus, self.L, ellVec)

    def pairing_with_point(self, w, x):
        """Q(u', x) = <lambda(u'), x> = (L.w) . x-hat for u' with
        f'-coordinates w and x in e^v-coordinates."""
        return dot(self.L.matvec(w), x)

    def __repr__(self):
        return "TropicalDescentDatum(L=%r, ell=%r)" % (self.L, self.ellVec)


def validate_datum(torus, L, ellVec):
    return TropicalDescentDatum(torus, L, ellVec)


def datum_from_Q(torus, G, ellVec):
    """Build the datum from a Gram matrix on the f'-basis.  Recovers
    L = Pmat^-T.G and requires it to be integral, which is exactly the
    integrality condition Q(M' x N) in Z."""
    if not G.is_symmetric():
        raise NonSymmetric("Gram matrix must be symmetric")
    L = torus.Pinv.transpose() * G
    if not L.is_integral():
        raise NonIntegerLambda("Q does not come from an integral lambda")
    return TropicalDescentDatum(torus, L, ellVec)


class PolarizationInfo:
    """Smith data of a polarization: the type (d_1 .. d_n), the unimodular
    transforms with U.L.V = diag(type), and a complete system of
    representatives of M / lambda(M') in e-coordinates."""

    __slots__ = ("type", "U", "V", "D", "reps")

    def __init__(self, type_, U, V, reps):
        object.__setattr__(self, "type", tuple(int(d) for d in type_))
        object.__setattr__(self, "U", U)
        object.__setattr__(self, "V", V)
        D = 1
        for d in self.type:
            D *= d
        object.__setattr__(self, "D", D)
        object.__setattr__(self, "reps", tuple(tuple(int(c) for c in r)
                                               for r in reps))

    def __setattr__(self, name, value):
        raise AttributeError("PolarizationInfo is immutable")

    def __repr__(self):
        return "PolarizationInfo(type=%r, D=%d)" % (self.type, self.D)


def polarization_type(datum):
    """Type and representatives of a polarization.

    U.L.V = diag(d_1 .. d_n) gives lambda(M') = L.Z^n = U^-1.diag(d).Z^n,
    so multiplication by U identifies M / lambda(M') with Z^n / diag(d).Z^n
    and the box vectors 0 <= l_i < d_i pull back along U^-1 to a complete
    system of representatives.
    """
    if not datum.polarized:
        raise NotPolarization("datum is not a polarization")
    U, D, V = snf(datum.L)
    type_ = [int(D[i, i]) for i in range(datum.n)]
    Uinv = inverse(U)
    reps = [tuple(int(c) for c in Uinv.matvec(box))
            for box in itertools.product(*[range(d) for d in type_])]
    return PolarizationInfo(type_, U, V, reps)


def adapted_datum(datum, info):
    """The same datum rewritten in bases adapted to the invariant factors.

    With U.L.V = diag(type), the new period basis is f'.V and the new
    M-basis is e.U^-1, so the polarization matrix becomes diag(type), the
    period matrix U^-T.Pmat.V, the Gram matrix V^T.G.V, and ell (values on
    the period basis) transforms by V^T.  M-points b move to U.b and
    e^v-coordinates to U^-T.x.
    """
    Ut = inverse(info.U).transpose()
    return validate_datum(build_torus(Ut * datum.torus.Pmat * info.V),
                          info.U * datum.L * info.V,
                          info.V.transpose().matvec(datum.ellVec))


def gamma_eval(datum, a):
    """gamma(a) = (1/2) a^T G a - ell . a for a in f'-coordinates."""
    a = to_vector(a)
    return gram_norm(datum.G, a) / 2 - dot(datum.ellVec, a)


def ell_point(datum):
    """The unique r (f'-coordinates) with ell(.) = Q(., r): solves G.r = ell."""
    if not datum.polarized:
        raise NotPolarization("ell_point needs a polarization")
    return solve(datum.G, datum.ellVec)


def rep_class_coords(datum, b1, b2):
    """f'-coordinates of the difference b1 - b2 pulled back through lambda,
    or None when b1 and b2 differ by something outside lambda(M').  Used to
    decide equality of classes in M / lambda(M')."""
    diff = [Fraction(int(p) - int(q)) for p, q in zip(b1, b2)]
    if det(datum.L) == 0:
        raise NotPolarization("lambda is singular")
    a = solve(datum.L, diff)
    if all(c.denominator == 1 for c in a):
        return tuple(int(c) for c in a)
    return None
