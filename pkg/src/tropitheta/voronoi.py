"""Exact Voronoi geometry for a lattice with a rational Gram matrix.

Everything happens in lattice coordinates: the lattice is Z^n and the
inner product of u and v is u^T G v for a symmetric positive definite
rational G, so relevant vectors, cell membership, closest points and
polyhedral decompositions are all decided by rational comparisons.

The decomposition machinery refines the Voronoi cell until every
full-dimensional piece can be translated back into the cell by each
member of a whole basis of a d-scaled sublattice.  Those bases feed the
per-piece certificates: the basis turns into integer shift vectors whose
shared-argmin property is verified exactly with the lattice minimizer,
and whose rows assemble into a unimodular matrix.
"""

from fractions import Fraction
from functools import cmp_to_key
from itertools import combinations, product
from math import factorial, gcd
from typing import NamedTuple

from .errors import (
    CertificateFailed, DimensionUnsupported, InternalInvariantViolated,
    NotPolarization, PreconditionViolated,
)
from .exactlinalg import (
    Matrix, det, dot, gram_norm, integer_vector, inverse,
    is_positive_definite, is_unimodular_map, snf, solve, to_vector, vec_add,
    vec_scale, vec_sub,
)
from .theta import (
    ArgminResult, ceil_minus_sqrt, floor_plus_sqrt, lattice_argmin,
)
from .torus import polarization_type


def _as_matrix(G):
    return G if isinstance(G, Matrix) else Matrix.from_rows(G)


class GramLattice:
    """Z^n carrying the inner product [u, v] = u^T G v."""

    __slots__ = ("G", "n")

    def __init__(self, G):
        G = _as_matrix(G)
        if not G.is_square or not G.is_symmetric():
            raise NotPolarization("Gram matrix must be symmetric")
        if not is_positive_definite(G):
            raise NotPolarization("Gram matrix must be positive definite")
        object.__setattr__(self, "G", G)
        object.__setattr__(self, "n", G.rows)

    def __setattr__(self, name, value):
        raise AttributeError("GramLattice is immutable")

    def inner(self, u, v):
        return dot(u, self.G.matvec(v))

    def norm(self, v):
        return gram_norm(self.G, v)

    def __repr__(self):
        return "GramLattice(n=%d)" % self.n


def relevant_vectors(G):
    """The Voronoi-relevant vectors of Z^n under G, sorted.

    v is relevant exactly when +-v are the only minimal-norm vectors of
    the coset v + 2Z^n, so each of the 2^n - 1 nonzero cosets mod 2 is
    scanned with the certified lattice minimizer and contributes its pair
    precisely when the minimum is a two-way tie.
    """
    lat = GramLattice(G)
    out = []
    G4 = lat.G.scale(4)
    for cls in product((0, 1), repeat=lat.n):
        if not any(cls):
            continue
        # (cls + 2a)^T G (cls + 2a) - cls^T G cls = 2 ((1/2) a^T 4G a + 2(G cls).a)
        res = lattice_argmin(G4, vec_scale(2, lat.G.matvec(cls)))
        vs = [tuple(cls[i] + 2 * a[i] for i in range(lat.n))
              for a in res.minimizers]
        if len(vs) == 2:
            if vs[0] != tuple(-c for c in vs[1]):
                raise InternalInvariantViolated("coset minima not a +- pair")
            out.extend(vs)
    return sorted(out)


class VoronoiCell:
    """H-representation of the Voronoi cell of Z^n around the origin.

    The cell is { x : (G v) . x <= v^T G v / 2 for every relevant v };
    halfspaces stores the pairs (G v, v^T G v / 2) in the order of the
    sorted relevant vectors.
    """

    __slots__ = ("lattice", "relevant", "halfspaces")

    def __init__(self, G):
        lat = GramLattice(G)
        rel = tuple(relevant_vectors(lat.G))
        hs = tuple((tuple(lat.G.matvec(v)), lat.norm(v) / 2) for v in rel)
        object.__setattr__(self, "lattice", lat)
        object.__setattr__(self, "relevant", rel)
        object.__setattr__(self, "halfspaces", hs)

    def __setattr__(self, name, value):
        raise AttributeError("VoronoiCell is immutable")

    def contains(self, x):
        x = to_vector(x)
        return all(dot(a, x) <= c for a, c in self.halfspaces)

    def on_boundary(self, x):
        x = to_vector(x)
        if not self.contains(x):
            return False
        return any(dot(a, x) == c for a, c in self.halfspaces)

    def polytope(self):
        """Vertex list of the cell (n <= 2; counterclockwise for n = 2)."""
        return _cell_polytope(self)

    def __repr__(self):
        return "VoronoiCell(n=%d, facets=%d)" % (self.lattice.n,
                                                 len(self.relevant))


def in_cell(G, x):
    """Exact membership of a rational point in the Voronoi cell."""
    return VoronoiCell(G).contains(x)


def closest_point(G, x):
    """Closest lattice points to a rational point, with squared distance.

    Minimizing |p - x|^2 over p in Z^n is the lattice problem with linear
    term -G.x; the squared distance is 2 min + x^T G x.
    """
    lat = GramLattice(G)
    x = to_vector(x)
    res = lattice_argmin(lat.G, vec_scale(-1, lat.G.matvec(x)))
    return ArgminResult(res.minimizers, 2 * res.value + lat.norm(x), res.tie)


def _rank(rows):
    # exact rank by fraction-free-enough Gaussian elimination
    rows = [list(map(Fraction, r)) for r in rows]
    if not rows:
        return 0
    cols = len(rows[0])
    r = 0
    for j in range(cols):
        piv = next((i for i in range(r, len(rows)) if rows[i][j] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        for i in range(r + 1, len(rows)):
            if rows[i][j]:
                f = rows[i][j] / rows[r][j]
                for k in range(j, cols):
                    rows[i][k] -= f * rows[r][k]
        r += 1
        if r == len(rows):
            break
    return r


def half_period_system(G, x):
    """n independent half-lattice vectors q with q + x still in the cell.

    One candidate per two-torsion class t in {0, 1/2}^n: x + t is reduced
    into the cell by subtracting a closest lattice point and the candidate
    is the difference to x.  A greedy exact-rank scan over the candidates
    reaches rank n; failing to do so would contradict the construction, so
    that raises InternalInvariantViolated.
    """
    lat = GramLattice(G)
    x = to_vector(x)
    cell = VoronoiCell(lat.G)
    if not cell.contains(x):
        raise PreconditionViolated("base point must lie in the Voronoi cell")
    chosen = []
    for t in product((Fraction(0), Fraction(1, 2)), repeat=lat.n):
        p = closest_point(lat.G, vec_add(x, t)).minimizers[0]
        q = tuple(vec_sub(t, p))
        if _rank(chosen + [q]) > len(chosen):
            chosen.append(q)
            if len(chosen) == lat.n:
                return chosen
    raise InternalInvariantViolated("no independent half-period system")


def basis_in_simplex(qs, r):
    """A basis of (1/r) Z^n inside the simplex spanned by 0 and q_1 .. q_n.

    Recursive construction: the first n-1 vectors are treated inside the
    saturation of their span, the recursive basis is extended by a
    completion vector, the coefficients of q_n in the extended basis are
    normalized into (0, w_n] by an integer shear, and the averaged vectors
    q^(j)/(n-1) together with (sum_j (1-h_j) q^(j) + q^(n))/(n-1) stay in
    the simplex while remaining a basis.  A final scaling by (n-1)!/r <= 1
    moves the result into the requested lattice.
    """
    qs = [integer_vector(q) for q in qs]
    n = len(qs)
    if n == 0 or any(len(q) != n for q in qs):
        raise PreconditionViolated("need n integer vectors of length n")
    cols = Matrix.from_rows([[q[i] for q in qs] for i in range(n)])
    if det(cols) == 0:
        raise PreconditionViolated("input vectors are dependent")
    r = Fraction(r)
    if r < factorial(n - 1):
        raise PreconditionViolated("scale must be at least (n-1)!")
    scale = Fraction(factorial(n - 1)) / r
    return [tuple(scale * c for c in p) for p in _simplex_basis(qs)]


def _simplex_basis(qs):
    # basis of (1/(n-1)!) Z^n inside the simplex of 0 and the q's
    n = len(qs)
    if n == 1:
        return [(Fraction(1 if qs[0][0] > 0 else -1),)]
    span = Matrix.from_rows([[q[i] for q in qs[:-1]] for i in range(n)])
    U, _, _ = snf(span)
    Uinv = inverse(U)
    sat = [tuple(Uinv[i, j] for i in range(n)) for j in range(n - 1)]
    comp = tuple(Uinv[i, n - 1] for i in range(n))
    coords = []
    for q in qs[:-1]:
        full = U.matvec(q)
        if full[n - 1] != 0:
            raise InternalInvariantViolated("saturation misses an input")
        coords.append(tuple(int(c) for c in full[:n - 1]))
    sub = _simplex_basis(coords)
    lifted = [tuple(sum(p[i] * sat[i][k] for i in range(n - 1))
                    for k in range(n)) for p in sub]
    last = tuple(Fraction(c, factorial(n - 2)) for c in comp)
    ext = Matrix.from_rows([[lifted[j][k] for j in range(n - 1)] + [last[k]]
                            for k in range(n)])
    w = [int(c) for c in integer_vector(solve(ext, qs[-1]))]
    if w[-1] == 0:
        raise InternalInvariantViolated("last input lies in the hyperplane")
    if w[-1] < 0:
        last = tuple(-c for c in last)
        w[-1] = -w[-1]
    wn = w[-1]
    shears = [((w[j] - 1) % wn + 1 - w[j]) // wn for j in range(n - 1)]
    out = [tuple(c / (n - 1) for c in q) for q in lifted]
    tail = list(last)
    for j in range(n - 1):
        tail = vec_add(tail, vec_scale(1 - shears[j], lifted[j]))
    out.append(tuple(c / (n - 1) for c in tail))
    return out


def _normalize_line(a, c):
    # integer, content-one, sign-fixed representative of the line a.x = c
    nums = [Fraction(x) for x in a] + [Fraction(c)]
    den = 1
    for x in nums:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in nums]
    g = 0
    for x in ints:
        g = gcd(g, abs(x))
    ints = [x // g for x in ints]
    lead = next(x for x in ints[:-1] if x != 0)
    if lead < 0:
        ints = [-x for x in ints]
    return tuple(ints[:-1]), ints[-1]


def _ellipsoid(G, bound):
    # integer v with v^T G v <= bound
    Ginv = inverse(G)
    rngs = [range(-floor_plus_sqrt(Fraction(0), Ginv[i, i] * Fraction(bound)),
                  floor_plus_sqrt(Fraction(0), Ginv[i, i] * Fraction(bound)) + 1)
            for i in range(G.rows)]
    return [v for v in product(*rngs) if gram_norm(G, v) <= bound]


def _integer_points_near(G, center, bound):
    # integer p with (p - center)^T G (p - center) <= bound
    Ginv = inverse(G)
    rngs = []
    for i in range(G.rows):
        r = Ginv[i, i] * Fraction(bound)
        c = Fraction(center[i])
        rngs.append(range(ceil_minus_sqrt(c, r), floor_plus_sqrt(c, r) + 1))
    return [p for p in product(*rngs)
            if gram_norm(G, vec_sub(p, center)) <= bound]


def _ccw(points):
    # exact counterclockwise order around the centroid
    pts = sorted(points)
    m = len(pts)
    cx = sum(p[0] for p in pts) / m
    cy = sum(p[1] for p in pts) / m

    def half(p):
        dx, dy = p[0] - cx, p[1] - cy
        return 0 if dy > 0 or (dy == 0 and dx > 0) else 1

    def cmp(p, q):
        hp, hq = half(p), half(q)
        if hp != hq:
            return -1 if hp < hq else 1
        cross = (p[0] - cx) * (q[1] - cy) - (p[1] - cy) * (q[0] - cx)
        if cross > 0:
            return -1
        if cross < 0:
            return 1
        return 0

    return [tuple(p) for p in sorted(pts, key=cmp_to_key(cmp))]


def _cell_polytope(cell):
    hs = cell.halfspaces
    n = cell.lattice.n
    if n == 1:
        hi = min(c / a[0] for a, c in hs if a[0] > 0)
        lo = max(c / a[0] for a, c in hs if a[0] < 0)
        return [(lo,), (hi,)]
    if n != 2:
        raise DimensionUnsupported("cell vertices implemented for n <= 2")
    pts = set()
    for (a1, c1), (a2, c2) in combinations(hs, 2):
        dt = a1[0] * a2[1] - a1[1] * a2[0]
        if dt == 0:
            continue
        x = ((c1 * a2[1] - c2 * a1[1]) / dt, (a1[0] * c2 - a2[0] * c1) / dt)
        if cell.contains(x):
            pts.add(x)
    return _ccw(pts)


def _polygon_area2(poly):
    acc = Fraction(0)
    for i in range(len(poly)):
        x1, y1 = poly[i]
        x2, y2 = poly[(i + 1) % len(poly)]
        acc += x1 * y2 - x2 * y1
    return acc


def _clip(poly, a, c):
    # part of a convex polygon with a.x <= c, vertices kept in cyclic order
    out = []
    m = len(poly)
    for i in range(m):
        p, q = poly[i], poly[(i + 1) % m]
        fp = dot(a, p) - c
        fq = dot(a, q) - c
        if fp <= 0:
            out.append(tuple(p))
            if fq > 0:
                t = fp / (fp - fq)
                out.append(tuple(p[k] + t * (q[k] - p[k]) for k in range(2)))
        elif fq < 0:
            t = fp / (fp - fq)
            out.append(tuple(p[k] + t * (q[k] - p[k]) for k in range(2)))
    dedup = []
    for v in out:
        if not dedup or v != dedup[-1]:
            dedup.append(v)
    if len(dedup) > 1 and dedup[0] == dedup[-1]:
        dedup.pop()
    return dedup


def _split_polygons(polys, a, c):
    res = []
    for poly in polys:
        lo = _clip(poly, a, c)
        hi = _clip(poly, vec_scale(-1, a), -Fraction(c))
        kept = [p for p in (lo, hi) if len(p) >= 3 and _polygon_area2(p) != 0]
        res.extend(kept if kept else [poly])
    return res


def _split_cell(cell):
    # refine the cell by every facet hyperplane of every lattice translate
    # that can meet a half-lattice translate of the cell
    lat = cell.lattice
    n = lat.n
    bound = n * sum(lat.G[i, i] for i in range(n))  # diam(cell)^2 <= n tr G
    lines = set()
    for s2 in _ellipsoid(lat.G, 4 * bound):
        s = vec_scale(Fraction(1, 2), s2)
        for p in _integer_points_near(lat.G, s, bound):
            shift = vec_sub(p, s)
            for a, c in cell.halfspaces:
                lines.add(_normalize_line(a, c + dot(shift, a)))
    poly = _cell_polytope(cell)
    if n == 1:
        lo, hi = poly[0][0], poly[1][0]
        cuts = sorted({Fraction(c, a[0]) for a, c in lines
                       if lo < Fraction(c, a[0]) < hi})
        knots = [lo] + cuts + [hi]
        return [[(knots[i],), (knots[i + 1],)] for i in range(len(knots) - 1)]
    polys = [poly]
    for a, c in sorted(lines):
        polys = _split_polygons(polys, a, Fraction(c))
    return polys


def _barycenter(pts):
    m = len(pts)
    return tuple(sum(p[i] for p in pts) / m for i in range(len(pts[0])))


class Piece(NamedTuple):
    vertices: tuple       # polytope vertices, lattice coordinates
    half_periods: tuple   # independent half-lattice shifts staying in the cell
    basis: tuple          # basis of the d-scaled lattice, basis[j] + piece in the cell


class GoodDecomposition(NamedTuple):
    cell: VoronoiCell
    pieces: tuple


def good_decomposition(G, d):
    """Refine the Voronoi cell so each piece carries a d-scaled basis.

    d must be a divisibility chain d_1 | d_2 | ... with d_1 >= 2 (n-1)!.
    Each full-dimensional piece sigma of the returned decomposition comes
    with a basis of the lattice Z p_1/d_1 + ... + Z p_n/d_n (coordinates
    with respect to p_i, so entries in (1/d_i) Z) whose members translate
    sigma back into the cell; every containment is verified through the
    halfspaces at the piece's vertices.  Only n <= 2 is implemented.
    """
    lat = GramLattice(G)
    n = lat.n
    if n > 2:
        raise DimensionUnsupported("decompositions implemented for n <= 2")
    d = [int(x) for x in d]
    if len(d) != n or any(x <= 0 for x in d):
        raise PreconditionViolated("type must be %d positive integers" % n)
    if any(d[i + 1] % d[i] for i in range(n - 1)):
        raise PreconditionViolated("type must be a divisibility chain")
    if d[0] < 2 * factorial(n - 1):
        raise PreconditionViolated("d_1 must be at least 2 (n-1)!")
    cell = VoronoiCell(lat.G)
    delta = [x // d[0] for x in d]
    pieces = []
    for poly in _split_cell(cell):
        qs = half_period_system(lat.G, _barycenter(poly))
        for q in qs:
            if not all(cell.contains(vec_add(q, y)) for y in poly):
                raise InternalInvariantViolated("half period escapes the cell")
        coords = [tuple(2 * delta[i] * q[i] for i in range(n)) for q in qs]
        scaled = basis_in_simplex(coords, Fraction(d[0], 2))
        basis = [tuple(p[i] / (2 * delta[i]) for i in range(n))
                 for p in scaled]
        for p in basis:
            if not all(cell.contains(vec_add(p, y)) for y in poly):
                raise InternalInvariantViolated("basis vector escapes the cell")
        pieces.append(Piece(tuple(tuple(v) for v in poly), tuple(qs),
                            tuple(basis)))
    return GoodDecomposition(cell, tuple(pieces))


class CellCertificate(NamedTuple):
    ells: tuple    # integer shift vectors, the zero vector first
    atilde: tuple  # shared lattice argmin over the translated piece


def adapted_gram(datum, info):
    """Gram matrix of the polarization in the basis adapted to the
    invariant factors: V^T G V for the Smith transform V."""
    return info.V.transpose() * datum.G * info.V


def cell_certificate(datum, info, piece, translate, atilde=None):
    """Certify the shared-argmin data of one decomposition piece.

    The piece's basis vectors p^(j) turn into integer shifts l^(j) with
    p^(j)_i = l^(j)_i / d_i (and l^(0) = 0); the candidate common argmin
    is atilde = -translate.  atilde must minimize
    (1/2) (a + l^(j)/d + y)^T G (a + l^(j)/d + y) over integer a at every
    vertex of the translated piece for every j.  The minimizer region of a
    fixed atilde is an intersection of halfspaces linear in y, so the
    vertex checks certify the whole piece.  The rows l^(1) .. l^(n) must
    form a unimodular matrix.  Raises CertificateFailed otherwise, naming
    the violating shift and point.
    """
    Ga = adapted_gram(datum, info)
    n = Ga.rows
    d = info.type
    translate = integer_vector(translate)
    ells = [tuple([0] * n)]
    for p in piece.basis:
        try:
            ells.append(integer_vector([d[i] * p[i] for i in range(n)]))
        except ValueError:
            raise PreconditionViolated("piece basis is not adapted to the type")
    if atilde is None:
        atilde = tuple(-c for c in translate)
    else:
        atilde = integer_vector(atilde)
    samples = [to_vector(v) for v in piece.vertices]
    samples.append(_barycenter(samples))
    for j, ell in enumerate(ells):
        frac = [Fraction(ell[i], d[i]) for i in range(n)]
        for y in samples:
            t = [translate[i] + y[i] + frac[i] for i in range(n)]
            res = lattice_argmin(Ga, Ga.matvec(t))
            if atilde not in res.minimizers:
                raise CertificateFailed(
                    "shared argmin fails for shift %d at %s" % (j, tuple(y)))
    if not is_unimodular_map(Matrix.from_rows([list(e) for e in ells[1:]])):
        raise CertificateFailed("certificate rows are not unimodular")
    return CellCertificate(tuple(ells), atilde)


def certified_cells(datum, translates=None):
    """Full pipeline: polarization type, adapted Gram matrix, good
    decomposition, one certificate per piece and translate.  Returns
    (info, decomposition, certificates)."""
    info = polarization_type(datum)
    Ga = adapted_gram(datum, info)
    dec = good_decomposition(Ga, info.type)
    if translates is None:
        translates = [tuple([0] * Ga.rows)]
    certs = [cell_certificate(datum, info, piece, c)
             for piece in dec.pieces for c in translates]
    return info, dec, certs
