"""Totally degenerate nonarchimedean descent data over exact valued series.

The scalar model is the smallest valued field stand-in that stays exactly
computable: finitely supported series sum_g a_g t^g with rational exponents
and nonzero rational coefficients, val = min exponent.  A descent datum
consists of the character pairing Tmat_{ij} = chi^{e_i}(Phi~(f'_j)) and the
basis values c(f'_j); its valuations recover a tropical datum (c_trop), its
Fourier coefficients lift the tropical theta functions coefficient by
coefficient (fourier_lift / tropicalize_fourier), and surjectivity of
tropicalization is realized by explicit min-plus combinations of lifts
(surjective_lift).  divide_datum extracts d1-th roots of a datum when the
scalar model contains them.
"""

from fractions import Fraction
from itertools import product
from math import gcd
from typing import NamedTuple

from .errors import (
    AsymmetricPairing, DivisionByZero, InternalInvariantViolated,
    NotInvertible, NotPolarization, NotQuadratic, PreconditionViolated,
    ResidueCancellation, RootUnavailable, ValuationMismatch,
    WindowInsufficient,
)
from .exactlinalg import Matrix, dot, is_integer_vector, solve, to_vector
from .theta import (
    INF, LAMBDA_GAMMA, ThetaCombination, ThetaFunction, lattice_argmin,
    min_plus_eval, theta_h_vector,
)
from .torus import polarization_type, validate_datum


# -- valued scalars ----------------------------------------------------------

class ValuedScalar:
    """A finitely supported series sum_g a_g t^g, g in Q, a_g in Q\\{0}.

    val(s) is the minimal exponent, val(0) = +infinity; only valuations and
    leading coefficients ever reach downstream comparisons.  The model has
    value group Q and residue field Q; it is not algebraically closed and
    not closed under inverse, so inverses and roots exist for monomials
    only and the operations that need more degrade explicitly
    (NotInvertible / RootUnavailable)."""

    __slots__ = ("terms",)

    def __init__(self, terms=()):
        acc = {}
        for g, a in terms:
            g = Fraction(g)
            s = acc.get(g, Fraction(0)) + Fraction(a)
            if s == 0:
                acc.pop(g, None)
            else:
                acc[g] = s
        object.__setattr__(self, "terms", tuple(sorted(acc.items())))

    def __setattr__(self, name, value):
        raise AttributeError("ValuedScalar is immutable")

    def __eq__(self, other):
        return isinstance(other, ValuedScalar) and self.terms == other.terms

    def __hash__(self):
        return hash(self.terms)

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other):
        return vs_add(self, other)

    def __mul__(self, other):
        return vs_mul(self, other)

    def __repr__(self):
        if not self.terms:
            return "ValuedScalar(0)"
        body = " + ".join("%s*t^%s" % (a, g) for g, a in self.terms)
        return "ValuedScalar(%s)" % body


def monomial(exponent, coefficient=1):
    return ValuedScalar([(exponent, coefficient)])


ZERO = ValuedScalar()
ONE = monomial(0)


def to_scalar(x):
    if isinstance(x, ValuedScalar):
        return x
    if isinstance(x, (int, Fraction)):
        return ValuedScalar([(0, x)])
    raise PreconditionViolated("cannot coerce %r to a valued scalar" % (x,))


def vs_val(s):
    """min exponent; INF for the zero scalar."""
    return s.terms[0][0] if s.terms else INF


def vs_leading(s):
    if not s.terms:
        raise DivisionByZero("the zero scalar has no leading coefficient")
    return s.terms[0][1]


def vs_add(s1, s2):
    return ValuedScalar(s1.terms + to_scalar(s2).terms)


def vs_mul(s1, s2):
    s2 = to_scalar(s2)
    return ValuedScalar([(g1 + g2, a1 * a2)
                         for g1, a1 in s1.terms for g2, a2 in s2.terms])


def vs_inv(s):
    """Inverse, defined in this model for monomials only."""
    if not s.terms:
        raise DivisionByZero("the zero scalar is not invertible")
    if len(s.terms) != 1:
        raise NotInvertible("only monomials are invertible in this model")
    (g, a), = s.terms
    return monomial(-g, Fraction(1) / a)


def vs_pow(s, k):
    k = int(k)
    if k < 0:
        return vs_pow(vs_inv(s), -k)
    out = ONE
    base = s
    while k:
        if k & 1:
            out = vs_mul(out, base)
        base = vs_mul(base, base)
        k >>= 1
    return out


def _int_root(m, k):
    """floor(m^(1/k)) for m >= 0 by integer Newton iteration."""
    if m < 2:
        return m
    r = 1 << -(-m.bit_length() // k)
    while True:
        nxt = ((k - 1) * r + m // r ** (k - 1)) // k
        if nxt >= r:
            return r
        r = nxt


def vs_root(s, k):
    """A k-th root, available exactly for monomials whose coefficient is a
    perfect k-th power of a rational."""
    k = int(k)
    if k < 1:
        raise PreconditionViolated("root index must be positive")
    if len(s.terms) != 1:
        raise RootUnavailable("only monomials have roots in this model")
    (g, a), = s.terms
    sign = 1
    if a < 0:
        if k % 2 == 0:
            raise RootUnavailable("even root of a negative coefficient")
        sign = -1
        a = -a
    rn = _int_root(a.numerator, k)
    rd = _int_root(a.denominator, k)
    if rn ** k != a.numerator or rd ** k != a.denominator:
        raise RootUnavailable("coefficient %s has no rational %d-th root"
                              % (sign * a, k))
    return monomial(Fraction(g, k), sign * Fraction(rn, rd))


# -- descent data ------------------------------------------------------------

class NADescentDatumTD:
    """A totally degenerate descent datum: the pairing matrix Tmat with
    val(Tmat_{ij}) = Pmat_{ij}, the basis values cBasis_j = c(f'_j), and
    the derived symmetric pairing S_{ij} = t(f'_i, lambda(f'_j))."""

    __slots__ = ("torus", "L", "Tmat", "cBasis", "S", "n")

    def __init__(self, torus, L, Tmat, cBasis, S):
        object.__setattr__(self, "torus", torus)
        object.__setattr__(self, "L", L)
        object.__setattr__(self, "Tmat", Tmat)
        object.__setattr__(self, "cBasis", cBasis)
        object.__setattr__(self, "S", S)
        object.__setattr__(self, "n", L.rows)

    def __setattr__(self, name, value):
        raise AttributeError("NADescentDatumTD is immutable")


def t_pair(datum, w, u):
    """The bilinear pairing t(w, u) = prod_{ij} Tmat_{ij}^(u_i w_j) for
    w in M' and u in M (integer coordinate vectors)."""
    w = [int(c) for c in w]
    u = [int(c) for c in u]
    out = ONE
    for i in range(datum.n):
        for j in range(datum.n):
            e = u[i] * w[j]
            if e:
                out = vs_mul(out, vs_pow(datum.Tmat[i][j], e))
    return out


def build_na_datum(torus, L, Tmat, cBasis):
    """Validate and assemble a descent datum.

    Checks val(Tmat_{ij}) = Pmat_{ij} (the tropicalization of the pairing
    is the period pairing) and symmetry of S_{ij} = t(f'_i, lambda(f'_j))
    as valued scalars, which is the appeared-polarization condition."""
    n = torus.Pmat.rows
    if L.rows != n or L.cols != n:
        raise PreconditionViolated("L must be %d x %d" % (n, n))
    if len(Tmat) != n or any(len(row) != n for row in Tmat):
        raise PreconditionViolated("Tmat must be %d x %d" % (n, n))
    if len(cBasis) != n:
        raise PreconditionViolated("cBasis must have %d entries" % n)
    T = tuple(tuple(to_scalar(x) for x in row) for row in Tmat)
    cB = tuple(to_scalar(x) for x in cBasis)
    if any(not x for row in T for x in row) or any(not c for c in cB):
        raise PreconditionViolated("pairing data must be nonzero")
    # the tropical layer checks integrality of L and symmetry of L^T.Pmat
    validate_datum(torus, L, [0] * n)
    for i in range(n):
        for j in range(n):
            if vs_val(T[i][j]) != torus.Pmat[i, j]:
                raise ValuationMismatch(
                    "val Tmat[%d][%d] = %s, expected Pmat entry %s"
                    % (i, j, vs_val(T[i][j]), torus.Pmat[i, j]))
    S = tuple(tuple(_s_entry(T, L, i, j) for j in range(n))
              for i in range(n))
    for i in range(n):
        for j in range(i + 1, n):
            if S[i][j] != S[j][i]:
                raise AsymmetricPairing(
                    "t(f'_%d, lambda(f'_%d)) != t(f'_%d, lambda(f'_%d))"
                    % (i, j, j, i))
    return NADescentDatumTD(torus, L, T, cB, S)


def _s_entry(T, L, i, j):
    # S_ij = t(f'_i, lambda(f'_j)) = prod_p Tmat[p][i]^L[p, j]
    out = ONE
    for p in range(L.rows):
        e = int(L[p, j])
        if e:
            out = vs_mul(out, vs_pow(T[p][i], e))
    return out


def c_extend(datum, a):
    """The unique cocycle extension of cBasis: going one basis step at a
    time through c(u'_1 + u'_2) = c(u'_1) c(u'_2) t(u'_1, lambda(u'_2))
    collapses to the closed form

        c(a) = prod_i cBasis_i^(a_i) * prod_{i<j} S_ij^(a_i a_j)
                 * prod_i S_ii^(a_i (a_i - 1) / 2).
    """
    a = [int(c) for c in a]
    n = datum.n
    out = ONE
    for i in range(n):
        if a[i]:
            out = vs_mul(out, vs_pow(datum.cBasis[i], a[i]))
        e = a[i] * (a[i] - 1) // 2
        if e:
            out = vs_mul(out, vs_pow(datum.S[i][i], e))
    for i in range(n):
        for j in range(i + 1, n):
            e = a[i] * a[j]
            if e:
                out = vs_mul(out, vs_pow(datum.S[i][j], e))
    return out


def c_trop(datum):
    """The tropical descent datum of the valuations: gamma(a) = val c(a)
    is the quadratic form (1/2) a^T.G.a - ell.a with
    ell_i = G_ii / 2 - val(cBasis_i)."""
    n = datum.n
    G = datum.L.transpose() * datum.torus.Pmat
    for i in range(n):
        for j in range(n):
            if vs_val(datum.S[i][j]) != G[i, j]:
                raise NotQuadratic(
                    "val S[%d][%d] = %s does not match the Gram entry %s"
                    % (i, j, vs_val(datum.S[i][j]), G[i, j]))
    ell = [G[i, i] / 2 - vs_val(datum.cBasis[i]) for i in range(n)]
    return validate_datum(datum.torus, datum.L, ell)


# -- Fourier lifts -----------------------------------------------------------

class LiftWindow(NamedTuple):
    datum: object     # the generating NADescentDatumTD
    parts: tuple      # (b, multiplier, radius) per coset b + L.Z^n


class FourierData(NamedTuple):
    coeffs: dict      # u in M (integer tuple) -> ValuedScalar
    window: LiftWindow


def _part_coeffs(datum, b, multiplier, radius):
    n = datum.n
    out = {}
    for a in product(range(-radius, radius + 1), repeat=n):
        La = datum.L.matvec(a)
        u = tuple(int(b[i]) + int(La[i]) for i in range(n))
        g = vs_mul(multiplier, vs_mul(c_extend(datum, a), t_pair(datum, a, b)))
        if g:
            out[u] = g
    return out


def fourier_lift(datum, b, radius):
    """The Fourier coefficients of the canonical lift of theta_b: the
    coefficient at u = b + L.a is c(a) * t(a, b), over the window
    |a_i| <= radius.  The window must contain the valuation minimum so
    that downstream evaluation can start from a certified support."""
    trop = c_trop(datum)
    if not trop.polarized:
        raise NotPolarization("lifting needs a positive definite valuation "
                              "Gram matrix")
    b = tuple(int(c) for c in to_vector(b))
    radius = int(radius)
    if radius < 0:
        raise PreconditionViolated("window radius must be nonnegative")
    res = lattice_argmin(trop.G, theta_h_vector(trop, b, [0] * datum.n))
    if any(abs(c) > radius for a in res.minimizers for c in a):
        raise WindowInsufficient("window radius %d misses the valuation "
                                 "minimum of the lift" % radius)
    coeffs = _part_coeffs(datum, b, ONE, radius)
    return FourierData(coeffs, LiftWindow(datum, ((b, ONE, radius),)))


def fourier_scale(fd, scalar):
    """Multiply a Fourier datum by a nonzero valued scalar."""
    scalar = to_scalar(scalar)
    if not scalar:
        raise PreconditionViolated("scaling by zero loses the support")
    parts = tuple((b, vs_mul(mult, scalar), radius)
                  for b, mult, radius in fd.window.parts)
    coeffs = {u: vs_mul(g, scalar) for u, g in fd.coeffs.items()}
    return FourierData(coeffs, LiftWindow(fd.window.datum, parts))


def fourier_sum(fd1, fd2):
    """Sum of two Fourier data over the same descent datum.  Parts on the
    same coset representative merge by adding multipliers; parts whose
    representatives are congruent modulo L but not equal are rejected
    (their supports overlap with shifted indexing)."""
    if fd1.window.datum is not fd2.window.datum:
        raise PreconditionViolated("summands live over different data")
    datum = fd1.window.datum
    merged = {}
    for b, mult, radius in fd1.window.parts + fd2.window.parts:
        if b in merged:
            old_mult, old_radius = merged[b]
            merged[b] = (vs_add(old_mult, mult), min(old_radius, radius))
        else:
            merged[b] = (mult, radius)
    reps = sorted(merged)
    for i in range(len(reps)):
        for j in range(i + 1, len(reps)):
            diff = [reps[i][k] - reps[j][k] for k in range(datum.n)]
            if is_integer_vector(solve(datum.L, diff)):
                raise PreconditionViolated(
                    "representatives %r and %r generate the same coset"
                    % (reps[i], reps[j]))
    parts = tuple((b, merged[b][0], merged[b][1])
                  for b in reps if merged[b][0])
    coeffs = {}
    for b, mult, radius in parts:
        coeffs.update(_part_coeffs(datum, b, mult, radius))
    return FourierData(coeffs, LiftWindow(datum, parts))


def tropicalize_fourier(fd, v):
    """min over the support of <u, v> + val(coeff_u), certified against
    the infinite tail: per part the full lattice minimum of the quadratic
    valuation growth must be attained inside the window."""
    v = to_vector(v)
    if not fd.coeffs:
        return INF
    finite = min(dot([Fraction(c) for c in u], v) + vs_val(g)
                 for u, g in fd.coeffs.items())
    trop = c_trop(fd.window.datum)
    best = None
    for b, mult, radius in fd.window.parts:
        res = lattice_argmin(trop.G, theta_h_vector(trop, b, v))
        if any(abs(c) > radius for a in res.minimizers for c in a):
            raise WindowInsufficient(
                "window radius %d does not certify the evaluation at %r"
                % (radius, tuple(v)))
        part = vs_val(mult) + dot([Fraction(int(c)) for c in b], v) + res.value
        if best is None or part < best:
            best = part
    if best != finite:
        raise InternalInvariantViolated(
            "stored coefficients disagree with the certified minimum")
    return finite


def verify_na_quasi_periodicity(fd, datum, wprime):
    """Check the coefficient recurrence of the functional equation,

        g_{u + L.w'} = c(w') * t(w', u) * g_u,

    exactly on every support pair (u, u + L.w') inside the window."""
    w = tuple(int(c) for c in to_vector(wprime))
    Lw = tuple(int(c) for c in datum.L.matvec(w))
    cw = c_extend(datum, w)
    pairs = [u for u in fd.coeffs
             if tuple(u[i] + Lw[i] for i in range(len(u))) in fd.coeffs]
    if not pairs:
        raise WindowInsufficient("no coefficient pair at shift %r fits the "
                                 "window" % (w,))
    for u in pairs:
        shifted = tuple(u[i] + Lw[i] for i in range(len(u)))
        expect = vs_mul(vs_mul(cw, t_pair(datum, w, u)), fd.coeffs[u])
        if fd.coeffs[shifted] != expect:
            return False
    return True


# -- surjectivity of tropicalization ----------------------------------------

class LiftReport(NamedTuple):
    lambdas: tuple    # residue multipliers per finite target slot
    samples: tuple    # sample points where equality was checked
    verified: bool


def _combination_samples(trop, info):
    if trop.n <= 2:
        from .embedding import linearity_cells
        pam = linearity_cells(trop, info)
        samples = []
        for cm in pam.cells:
            verts = cm.cell.vertices
            bary = tuple(sum(p[i] for p in verts) / len(verts)
                         for i in range(trop.n))
            samples.append(bary)
            samples.append(tuple((b + p) / 2
                           for b, p in zip(bary, verts[0])))
        return samples
    P = trop.torus.Pmat
    return [tuple(P.matvec([Fraction(i, 3) for i in idx]))
            for idx in product(range(3), repeat=trop.n)]


def _residues_cancel(fd, v):
    # leading coefficients of the minimal terms, summed per character u;
    # the min formula fails only when every sum vanishes
    vals = {u: dot([Fraction(c) for c in u], v) + vs_val(g)
            for u, g in fd.coeffs.items()}
    m = min(vals.values())
    sums = {}
    for u, g in fd.coeffs.items():
        if vals[u] == m:
            sums[u] = sums.get(u, Fraction(0)) + vs_leading(g)
    return all(s == 0 for s in sums.values())


def surjective_lift(datum, targets, radius):
    """A Fourier datum whose tropicalization is the min-plus combination
    min_b { targets_b + theta_b } (coefficients in Q or INF): scale the
    canonical lift of each finite slot by lambda_b * t^(c_b) and verify
    exact agreement at interior samples of every linearity cell of the
    combination.  Residue multipliers lambda_b are searched
    deterministically (1, 2, 3, ...) to avoid leading-term cancellation;
    distinct cosets have disjoint supports, so the first candidate
    verifies."""
    trop = c_trop(datum)
    if not trop.polarized:
        raise NotPolarization("lifting needs a positive definite valuation "
                              "Gram matrix")
    info = polarization_type(trop)
    targets = list(targets)
    if len(targets) != len(info.reps):
        raise PreconditionViolated("expected %d targets, got %d"
                                   % (len(info.reps), len(targets)))
    slots = [(i, info.reps[i], Fraction(c))
             for i, c in enumerate(targets) if c is not INF]
    if not slots:
        raise PreconditionViolated("at least one finite target is needed")
    comb = ThetaCombination(
        [(c if c is INF else Fraction(c), ThetaFunction(trop, b, LAMBDA_GAMMA))
         for b, c in zip(info.reps, targets)])
    samples = _combination_samples(trop, info)
    lambdas = {i: 1 for i, _, _ in slots}
    for _ in range(32):
        fd = None
        for i, b, c in slots:
            piece = fourier_scale(fourier_lift(datum, b, radius),
                                  monomial(c, lambdas[i]))
            fd = piece if fd is None else fourier_sum(fd, piece)
        bad = next((v for v in samples if _residues_cancel(fd, v)), None)
        if bad is None:
            break
        lambdas[slots[0][0]] += 1
    else:
        raise ResidueCancellation("no residue multipliers avoided "
                                  "cancellation at the samples")
    verified = all(tropicalize_fourier(fd, v) == min_plus_eval(comb, v)
                   for v in samples)
    report = LiftReport(tuple(lambdas[i] for i, _, _ in slots),
                        tuple(samples), verified)
    return fd, report


# -- divisibility ------------------------------------------------------------

def divide_datum(datum, d1):
    """Extract a d1-th root of the datum: the pair (L / d1, c_1) with
    c_1(f'_i)^(d1) = c(f'_i) exactly.  d1 must divide every invariant
    factor of L (equivalently the gcd of its entries), and every cBasis
    entry must have a d1-th root in the scalar model."""
    d1 = int(d1)
    if d1 < 1:
        raise PreconditionViolated("d1 must be a positive integer")
    if d1 == 1:
        return datum
    entries = [int(datum.L[i, j]) for i in range(datum.n)
               for j in range(datum.n)]
    g = 0
    for e in entries:
        g = gcd(g, e)
    if g % d1 != 0:
        raise PreconditionViolated(
            "%d does not divide the type of the polarization" % d1)
    L1 = Matrix.from_rows([[datum.L[i, j] / d1 for j in range(datum.n)]
                           for i in range(datum.n)])
    c1 = [vs_root(c, d1) for c in datum.cBasis]
    return build_na_datum(datum.torus, L1, datum.Tmat, c1)
