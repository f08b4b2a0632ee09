"""Exact evaluation of tropical theta functions.

For a polarized descent datum (see torus.py for coordinates) and b in M,
the theta function in the (lambda, gamma) convention is

    theta_b(x) = min_{a in Z^n} { (L.a + b).x + gamma(a) + b.(Pmat.a) }

Substituting gamma(a) = (1/2) a^T G a - ell.a turns the minimand into the
lattice quadratic

    (1/2) a^T G a + h.a + b.x,     h = L^T.x + Pmat^T.b - ell,

so evaluation is a closest-vector computation for the Gram matrix G.  The
alternative (Q, ell) convention adds the constant (1/2) Q(lb - r, lb - r)
with lb = lambda^-1(b) and r the ell point; with that shift theta_b depends
only on the class of b modulo lambda(M'), whereas the (lambda, gamma)
normalization depends on the chosen representative.

The minimizer search is an exact Fincke-Pohst enumeration over the rational
LDL^T of G.  All interval endpoints floor(c + sqrt(r)) are computed with
integer square roots and a two-sided predicate fix-up, so ties are found
exactly and no floating point is involved.
"""

import itertools
from fractions import Fraction
from math import isqrt
from typing import NamedTuple

from .errors import (
    NotPolarization, PreconditionViolated, SingularPivot, WindowInsufficient,
)
from .exactlinalg import (
    dot, gram_norm, inverse, ldlt, solve, to_vector, vec_add, vec_scale,
    vec_sub,
)
from .torus import ell_point, gamma_eval

LAMBDA_GAMMA = "lambda_gamma"
Q_ELL = "q_ell"
INF = None  # +infinity coefficient in min-plus combinations


class ArgminResult(NamedTuple):
    minimizers: tuple   # all integer minimizers, sorted
    value: Fraction     # the attained minimum
    tie: bool           # more than one minimizer


def round_half_up(t):
    """Nearest integer, halves rounded up: floor(t + 1/2)."""
    t = Fraction(t) + Fraction(1, 2)
    return t.numerator // t.denominator


def _sqrt_floor(r):
    # floor(sqrt(r)) for a nonnegative Fraction
    return isqrt(r.numerator * r.denominator) // r.denominator


def _le_c_plus_sqrt(k, c, r):
    # decide k <= c + sqrt(r) exactly
    d = Fraction(k) - c
    if d <= 0:
        return True
    return d * d <= r


def floor_plus_sqrt(c, r):
    """floor(c + sqrt(r)) for rationals c and r >= 0, exact."""
    if r < 0:
        raise ValueError("negative radicand")
    k = (c.numerator // c.denominator) + _sqrt_floor(r)
    while _le_c_plus_sqrt(k + 1, c, r):
        k += 1
    while not _le_c_plus_sqrt(k, c, r):
        k -= 1
    return k


def ceil_minus_sqrt(c, r):
    """ceil(c - sqrt(r)) for rationals c and r >= 0, exact."""
    return -floor_plus_sqrt(-c, r)


def _quadratic(G, h, a):
    av = to_vector(a)
    return gram_norm(G, av) / 2 + dot(h, av)


def lattice_argmin(G, h):
    """All integer minimizers of (1/2) a^T G a + h.a for positive definite G.

    Fincke-Pohst over the exact LDL^T: writing v = a - ahat with ahat the
    continuous minimizer, v^T G v = sum_i d_i w_i^2 where
    w_i = v_i + sum_{j>i} L_ji v_j, and levels are processed from i = n-1
    down to 0 with a dynamically shrinking bound.  Pruning is non-strict so
    ties survive.  The initial incumbent is the componentwise rounding of
    ahat.
    """
    try:
        fac = ldlt(G)
    except SingularPivot:
        raise NotPolarization("G is not positive definite")
    if not fac.definite:
        raise NotPolarization("G is not positive definite")
    n = G.rows
    h = to_vector(h)
    if len(h) != n:
        raise ValueError("length mismatch")
    if n == 0:
        return ArgminResult(((),), Fraction(0), False)
    ahat = solve(G, [-x for x in h])
    Lf = fac.L
    piv = fac.D
    start = tuple(round_half_up(t) for t in ahat)
    state = {"B": gram_norm(G, vec_sub(start, ahat)), "found": []}
    a = [0] * n

    def descend(i, partial):
        s = sum((Lf[j, i] * (a[j] - ahat[j]) for j in range(i + 1, n)),
                Fraction(0))
        center = ahat[i] - s
        rem = state["B"] - partial
        if rem < 0:
            return
        radicand = rem / piv[i]
        lo = ceil_minus_sqrt(center, radicand)
        hi = floor_plus_sqrt(center, radicand)
        for ai in range(lo, hi + 1):
            w = ai - center
            npart = partial + piv[i] * w * w
            if npart > state["B"]:
                continue
            a[i] = ai
            if i == 0:
                if npart < state["B"]:
                    state["B"] = npart
                    state["found"] = [(t, N) for (t, N) in state["found"]
                                      if N <= npart]
                state["found"].append((tuple(a), npart))
            else:
                descend(i - 1, npart)

    descend(n - 1, Fraction(0))
    best = state["B"]
    # the incumbent start is always re-found: its partial sums never exceed B
    mins = sorted(set(t for (t, N) in state["found"] if N == best))
    value = _quadratic(G, h, mins[0])
    return ArgminResult(tuple(mins), value, len(mins) > 1)


def brute_force_argmin(G, h, radius):
    """Exhaustive oracle for lattice_argmin over the integer box of the given
    radius around round(ahat).

    The box is certified to contain every minimizer via the component bound
    (a_i - ahat_i)^2 <= (G^-1)_ii * R^2, valid for any a with
    |a - ahat|_G^2 <= R^2 (Cauchy-Schwarz in the G inner product), where R^2
    is the G-distance of the best box point to ahat.  If the bound does not
    fit inside the box, WindowInsufficient is raised.
    """
    if radius < 1:
        raise ValueError("radius must be >= 1")
    try:
        fac = ldlt(G)
    except SingularPivot:
        raise NotPolarization("G is not positive definite")
    if not fac.definite:
        raise NotPolarization("G is not positive definite")
    n = G.rows
    h = to_vector(h)
    ahat = solve(G, [-x for x in h])
    center = [round_half_up(t) for t in ahat]
    best = None
    mins = []
    for a in itertools.product(*[range(c - radius, c + radius + 1)
                                 for c in center]):
        v = _quadratic(G, h, a)
        if best is None or v < best:
            best, mins = v, [a]
        elif v == best:
            mins.append(a)
    R2 = gram_norm(G, vec_sub(mins[0], ahat))
    Ginv = inverse(G)
    for i in range(n):
        frac_i = abs(ahat[i] - center[i])
        if Ginv[i, i] * R2 > (radius - frac_i) ** 2:
            raise WindowInsufficient(
                "radius %d cannot certify coordinate %d" % (radius, i))
    return ArgminResult(tuple(sorted(mins)), best, len(mins) > 1)


class ThetaFunction:
    """theta_b for a fixed representative b (e-coordinates) and convention.

    In the (lambda, gamma) convention the function depends on the chosen
    representative b, not only on its class mod lambda(M'); the (Q, ell)
    convention shifts by a constant that makes it class-invariant.
    """

    __slots__ = ("datum", "b", "convention")

    def __init__(self, datum, b, convention=LAMBDA_GAMMA):
        if not datum.polarized:
            raise NotPolarization("theta needs a polarized datum")
        if convention not in (LAMBDA_GAMMA, Q_ELL):
            raise ValueError("unknown convention %r" % (convention,))
        b = tuple(int(c) for c in b)
        if len(b) != datum.n:
            raise ValueError("b has wrong length")
        object.__setattr__(self, "datum", datum)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "convention", convention)

    def __setattr__(self, name, value):
        raise AttributeError("ThetaFunction is immutable")

    def __repr__(self):
        return "ThetaFunction(b=%r, %s)" % (self.b, self.convention)


def q_ell_constant(datum, b):
    """(1/2) Q(lambda^-1(b) - r, lambda^-1(b) - r), the shift between the
    two conventions."""
    beta = solve(datum.L, [Fraction(int(c)) for c in b])
    diff = vec_sub(beta, ell_point(datum))
    return gram_norm(datum.G, diff) / 2


def theta_h_vector(datum, b, x):
    """The linear part h = L^T.x + Pmat^T.b - ell of the minimand."""
    x = to_vector(x)
    bf = [Fraction(int(c)) for c in b]
    return vec_sub(vec_add(datum.L.transpose().matvec(x),
                           datum.torus.Pmat.transpose().matvec(bf)),
                   datum.ellVec)


def theta_argmin(theta, x):
    """ArgminResult of the defining minimization of theta at x (the
    minimizing lattice coordinates a, shared by both conventions)."""
    return lattice_argmin(theta.datum.G, theta_h_vector(theta.datum, theta.b, x))


def theta_eval(theta, x):
    """Exact value of theta at x (e^v-coordinates)."""
    x = to_vector(x)
    res = theta_argmin(theta, x)
    value = res.value + dot([Fraction(int(c)) for c in theta.b], x)
    if theta.convention == Q_ELL:
        value += q_ell_constant(theta.datum, theta.b)
    return value


def quasi_periodicity_check(theta, x, w):
    """Check theta(x + u') = theta(x) - Q(x, u') - (1/2) Q(u', u') + ell(u')
    exactly, for the period u' with f'-coordinates w.  The identity is
    convention independent."""
    datum = theta.datum
    x = to_vector(x)
    w = [Fraction(int(c)) for c in w]
    lhs = theta_eval(theta, vec_add(x, datum.torus.lattice_point(w)))
    rhs = (theta_eval(theta, x)
           - datum.pairing_with_point(w, x)
           - gram_norm(datum.G, w) / 2
           + dot(datum.ellVec, w))
    return lhs == rhs


class ThetaCombination:
    """A min-plus combination min_b { c_b + theta_b }.

    Coefficients are exact rationals or INF (= None); at least one finite
    coefficient is required for evaluation.
    """

    __slots__ = ("terms",)

    def __init__(self, terms):
        fixed = []
        for c, theta in terms:
            if c is not INF and isinstance(c, (int, Fraction)):
                c = Fraction(c)
            fixed.append((c, theta))
        object.__setattr__(self, "terms", tuple(fixed))

    def __setattr__(self, name, value):
        raise AttributeError("ThetaCombination is immutable")

    def finite_terms(self):
        return [(c, th) for (c, th) in self.terms if c is not INF]


def min_plus_eval(comb, x):
    """min over the finite terms of c_b + theta_b(x)."""
    finite = comb.finite_terms()
    if not finite:
        raise PreconditionViolated("no finite coefficient")
    return min(c + theta_eval(th, x) for c, th in finite)


def gamma_rational_check(comb):
    """True when every finite coefficient is an exact rational.  Together
    with rational input data this makes every affine piece of the
    combination rational (integer slopes, rational offsets).  Symbolic or
    floating coefficients fail the check."""
    finite = comb.finite_terms()
    if not finite:
        raise PreconditionViolated("no finite coefficient")
    return all(isinstance(c, Fraction) for c, _ in finite)


def translate_datum(datum, v):
    """Pull a datum back along translation by the point with f'-coordinates
    v: ell' = ell - G.v.  Returns (datum', constant) with
    constant = (1/2) v^T G v.

    The exact translation identity, in the (Q, ell) convention, is

        theta_b^{(Q,ell)}(x + Pmat.v) =
            theta_b^{(Q,ell')}(x) + ell.v - constant ;

    when v = G^-1.ell (the translation that kills ell) the correction
    ell.v equals 2*constant, so the identity collapses to
    theta^{(Q,ell')}(x) + constant = theta^{(Q,ell)}(x + Pmat.v).
    """
    v = to_vector(v)
    new_ell = vec_sub(datum.ellVec, datum.G.matvec(v))
    return datum.with_ell(new_ell), gram_norm(datum.G, v) / 2


def _snf_adapted_type(datum):
    # diagonal positive L with the divisibility chain, else None
    L = datum.L
    n = datum.n
    if any(L[i, j] != 0 for i in range(n) for j in range(n) if i != j):
        return None
    d = [int(L[i, i]) for i in range(n)]
    if any(x <= 0 for x in d):
        return None
    if any(d[i + 1] % d[i] for i in range(n - 1)):
        return None
    return d


def sublattice_identity_check(datum, x):
    """Check  min_{b in B1} theta_b(x) = (1/d1^2) theta_0(d1.x)  exactly,
    where B1 = { (delta_1 b_1, ..., delta_n b_n) : 0 <= b_i < d1 } with
    delta_i = d_i / d1.  Requires ell = 0 and SNF-adapted bases, i.e. L
    already diagonal with the divisibility chain; thetas in the (Q, ell)
    convention with ell = 0."""
    if not datum.polarized:
        raise NotPolarization("not a polarization")
    if any(c != 0 for c in datum.ellVec):
        raise PreconditionViolated("identity needs ell = 0")
    d = _snf_adapted_type(datum)
    if d is None:
        raise PreconditionViolated("identity needs an SNF-adapted basis")
    d1 = d[0]
    deltas = [di // d1 for di in d]
    x = to_vector(x)
    lhs = min(
        theta_eval(ThetaFunction(datum, [deltas[i] * box[i]
                                         for i in range(datum.n)], Q_ELL), x)
        for box in itertools.product(range(d1), repeat=datum.n))
    theta0 = ThetaFunction(datum, (0,) * datum.n, Q_ELL)
    rhs = theta_eval(theta0, vec_scale(d1, x)) / (d1 * d1)
    return lhs == rhs


def concavity_check(theta, x, y, t):
    """theta(t.x + (1-t).y) >= t.theta(x) + (1-t).theta(y), exact."""
    t = Fraction(t)
    mid = vec_add(vec_scale(t, to_vector(x)),
                  vec_scale(1 - t, to_vector(y)))
    return theta_eval(theta, mid) >= (t * theta_eval(theta, x)
                                      + (1 - t) * theta_eval(theta, y))
