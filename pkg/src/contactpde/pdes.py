"""Explicit invariant second-order PDEs in Darboux coordinates.

The equations live on the chart of the Lagrangian Grassmannian labelled
by the symmetric Hessian matrix U = (u_ij).  This module constructs the
determinant equation of the linear series, the quadratic minor equation
of the even orthogonal series, the resultant-derived cubic of the rank-2
exceptional case, and the degree-4 equation of the B3 case, together
with exact sampling verifiers for membership and group invariance.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, permutations
from math import comb, factorial

from .contact import contact_grading
from .errors import ConsistencyError, PreconditionError
from .minorpoly import (
    GaussianRational,
    MinorPolynomial,
    SymmetricMatrix,
    variable_pairs,
)

_GR0 = GaussianRational(0)
_GR1 = GaussianRational(1)


def _perm_sign(perm) -> int:
    inversions = sum(
        1
        for a in range(len(perm))
        for b in range(a + 1, len(perm))
        if perm[a] > perm[b]
    )
    return -1 if inversions % 2 else 1


# ---------------------------------------------------------------------------
# principal minors and the determinant / quadratic-minor equations


def _symbolic_minor(n: int, subset: tuple[int, ...]) -> MinorPolynomial:
    k = len(subset)
    out = MinorPolynomial.zero(n)
    for perm in permutations(range(k)):
        term = MinorPolynomial.constant(n, _perm_sign(perm))
        for r in range(k):
            term = term * MinorPolynomial.variable(n, subset[r], subset[perm[r]])
        out = out + term
    return out


def _numeric_minor(matrix: SymmetricMatrix, subset: tuple[int, ...]):
    k = len(subset)
    total = 0
    for perm in permutations(range(k)):
        prod = _perm_sign(perm)
        for r in range(k):
            prod = prod * matrix.entry(subset[r], subset[perm[r]])
        total = prod + total
    return total


def principal_minor_trace(U, i: int):
    """Sum of all principal i x i minors.

    ``U`` is either a SymmetricMatrix (exact numeric result) or an integer
    matrix size (symbolic result as a MinorPolynomial).  The order-zero
    minor is 1; order n is the determinant; order n-1 is the trace of the
    cofactor matrix.
    """
    if isinstance(U, SymmetricMatrix):
        n = U.n
        if not 0 <= i <= n:
            raise PreconditionError(f"minor order {i} out of range for n={n}")
        if i == 0:
            return 1
        return sum(_numeric_minor(U, s) for s in combinations(range(1, n + 1), i))
    n = int(U)
    if n < 1:
        raise PreconditionError("matrix size must be at least 1")
    if not 0 <= i <= n:
        raise PreconditionError(f"minor order {i} out of range for n={n}")
    if i == 0:
        out = MinorPolynomial.constant(n, 1)
        out.pluecker_degree = 1
        return out
    out = MinorPolynomial.zero(n)
    for subset in combinations(range(1, n + 1), i):
        out = out + _symbolic_minor(n, subset)
    out.pluecker_degree = 1
    return out


def pde_type_A(n: int) -> MinorPolynomial:
    """det(u_ij) = 0, the parabolic Monge-Ampere equation."""
    if n < 1:
        raise PreconditionError("need n >= 1")
    return principal_minor_trace(n, n)


def pde_type_D(n: int) -> MinorPolynomial:
    """The quadratic expression sum_i (-1)^i C(n,i) tr U^(i) tr U^(n-i).

    Defined for even n >= 4; odd sizes carry no quadric of this kind.
    """
    if n < 4 or n % 2:
        raise PreconditionError("the quadratic minor equation needs even n >= 4")
    traces = [principal_minor_trace(n, i) for i in range(n + 1)]
    out = MinorPolynomial.zero(n)
    for i in range(n + 1):
        sign = -1 if i % 2 else 1
        out = out + sign * comb(n, i) * (traces[i] * traces[n - i])
    out.pluecker_degree = 2
    return out


# ---------------------------------------------------------------------------
# the canonical quartic and its n-th power on Lagrangian frames


def _gr_vec(seq) -> tuple[GaussianRational, ...]:
    return tuple(GaussianRational.coerce(x) for x in seq)


def _dot(x, y) -> GaussianRational:
    total = _GR0
    for a, b in zip(x, y):
        total = total + a * b
    return total


def _eps2(xi, eta) -> GaussianRational:
    return xi[0] * eta[1] - xi[1] * eta[0]


def _as_rows(v):
    """Normalize one vector of C^2 (x) C^n to its (A-row, B-row) pair.

    Accepts a pure tensor given as a pair (xi, e) of sequences with
    len(xi) == 2, or a flat coordinate sequence of even length 2n with
    the A-block first.
    """
    v = tuple(v)
    if (len(v) == 2 and not isinstance(v[0], (int, Fraction, GaussianRational))):
        xi, e = _gr_vec(v[0]), _gr_vec(v[1])
        if len(xi) != 2:
            raise PreconditionError("pure tensor needs a length-2 spin part")
        return (tuple(xi[0] * c for c in e), tuple(xi[1] * c for c in e))
    flat = _gr_vec(v)
    if len(flat) % 2:
        raise PreconditionError("flat vector must have even length 2n")
    n = len(flat) // 2
    return (flat[:n], flat[n:])


def _q_ordered(w1, w2, w3, w4) -> GaussianRational:
    total = _GR0
    for c1, c2, s12 in ((0, 1, 1), (1, 0, -1)):
        for c3, c4, s34 in ((0, 1, 1), (1, 0, -1)):
            r1, r2, r3, r4 = w1[c1], w2[c2], w3[c3], w4[c4]
            bracket = _dot(r1, r3) * _dot(r2, r4) - _dot(r2, r3) * _dot(r1, r4)
            total = total + s12 * s34 * bracket
    return total


def evaluate_q(v1, v2, v3, v4, symmetrize: bool = True) -> GaussianRational:
    """The canonical quartic on four vectors of C^2 (x) C^n.

    On pure tensors xi (x) e the ordered value is
    eps(xi1, xi2) eps(xi3, xi4) [<e1,e3><e2,e4> - <e2,e3><e1,e4>],
    extended multilinearly.  With ``symmetrize`` the value is averaged
    over the 24 argument orders, making it symmetric.
    """
    ws = [_as_rows(v) for v in (v1, v2, v3, v4)]
    ns = {len(w[0]) for w in ws}
    if len(ns) != 1:
        raise PreconditionError(f"mixed vector sizes {sorted(ns)}")
    if not symmetrize:
        return _q_ordered(*ws)
    total = _GR0
    for perm in permutations(range(4)):
        total = total + _q_ordered(*(ws[k] for k in perm))
    return total * Fraction(1, 24)


class SymplecticFrame:
    """n vectors spanning a (candidate) Lagrangian n-plane in C^2 (x) C^n."""

    __slots__ = ("n", "vectors", "pure")

    def __init__(self, vectors, pure=None):
        vectors = tuple(vectors)
        if not vectors:
            raise PreconditionError("empty frame")
        rows = tuple(_as_rows(v) for v in vectors)
        n = len(rows[0][0])
        if any(len(r[0]) != n for r in rows):
            raise PreconditionError("frame vectors of mixed size")
        if len(rows) != n:
            raise PreconditionError(f"a Lagrangian frame in C^2 (x) C^{n} needs {n} vectors")
        self.n = n
        self.vectors = rows
        self.pure = pure

    @classmethod
    def diagonal(cls, xis, es=None) -> "SymplecticFrame":
        """Frame of pure tensors xi_i (x) e_i; e_i default to the standard basis."""
        xis = [_gr_vec(x) for x in xis]
        n = len(xis)
        if es is None:
            es = [[1 if k == i else 0 for k in range(n)] for i in range(n)]
        es = [_gr_vec(e) for e in es]
        if len(es) != n or any(len(e) != n for e in es):
            raise PreconditionError("need n spatial vectors of length n")
        frame = cls([(xi, e) for xi, e in zip(xis, es)],
                    pure=tuple(zip(xis, es)))
        return frame

    @classmethod
    def from_vectors(cls, vectors) -> "SymplecticFrame":
        return cls(vectors)

    def symplectic_product(self, i: int, j: int) -> GaussianRational:
        ai, bi = self.vectors[i]
        aj, bj = self.vectors[j]
        return _dot(ai, bj) - _dot(bi, aj)

    def is_lagrangian(self) -> bool:
        return all(
            not self.symplectic_product(i, j)
            for i in range(self.n)
            for j in range(i + 1, self.n)
        )

    def _is_orthonormal_diagonal(self) -> bool:
        if self.pure is None:
            return False
        es = [e for _, e in self.pure]
        for i in range(self.n):
            for j in range(i, self.n):
                want = _GR1 if i == j else _GR0
                if _dot(es[i], es[j]) != want:
                    return False
        return True


_QN_MAX = 5


def _qn_diagonal(frame: SymplecticFrame) -> GaussianRational:
    n = frame.n
    xis = [xi for xi, _ in frame.pure]
    eps = [[_eps2(xis[i], xis[j]) for j in range(n)] for i in range(n)]
    total = _GR0
    for perm in permutations(range(n)):
        prod = _GR1
        for i in range(n):
            f = eps[i][perm[i]]
            if not f:
                prod = None
                break
            prod = prod * (f * f)
        if prod is None:
            continue
        # subsets fixed setwise by perm: one free choice per cycle
        seen = [False] * n
        cycles = 0
        for i in range(n):
            if not seen[i]:
                cycles += 1
                k = i
                while not seen[k]:
                    seen[k] = True
                    k = perm[k]
        total = total + prod * (1 << cycles)
    return total if n % 2 == 0 else -total


def _qn_general(frame: SymplecticFrame) -> GaussianRational:
    n = frame.n
    vs = frame.vectors
    table = [
        [
            [[_q_ordered(vs[i], vs[j], vs[k], vs[l]) for l in range(n)]
             for k in range(n)]
            for j in range(n)
        ]
        for i in range(n)
    ]
    perms = list(permutations(range(n)))
    signs = [_perm_sign(p) for p in perms]
    total = _GR0
    for p1, s1 in zip(perms, signs):
        for p2, s2 in zip(perms, signs):
            for p3, s3 in zip(perms, signs):
                prod = None
                for i in range(n):
                    f = table[i][p1[i]][p2[i]][p3[i]]
                    if not f:
                        prod = None
                        break
                    prod = f if prod is None else prod * f
                if prod is not None:
                    total = total + (s1 * s2 * s3) * prod
    # same (-1)^n normalization as the closed diagonal form, so the two
    # paths compute one function
    return total if n % 2 == 0 else -total


def evaluate_qn(frame: SymplecticFrame, method: str = "auto") -> GaussianRational:
    """Evaluate the n-th power of the canonical quartic on a Lagrangian frame.

    Diagonal frames (pure tensors with orthonormal spatial parts) use a
    closed sum over single permutations weighted by 2^(number of cycles);
    general frames fall back to the full sum over permutation triples,
    which is why n is capped at 5.
    """
    if not frame.is_lagrangian():
        raise PreconditionError("frame is not Lagrangian")
    if frame.n > _QN_MAX:
        raise PreconditionError(
            f"n={frame.n} exceeds the supported bound {_QN_MAX}; "
            "the general evaluation grows as (n!)^3"
        )
    if method not in ("auto", "diagonal", "general"):
        raise PreconditionError(f"unknown method {method!r}")
    diagonal_ok = frame._is_orthonormal_diagonal()
    if method == "diagonal" and not diagonal_ok:
        raise PreconditionError("frame is not diagonal with orthonormal spatial parts")
    if method == "general" or not diagonal_ok:
        return _qn_general(frame)
    return _qn_diagonal(frame)


# ---------------------------------------------------------------------------
# the rank-2 exceptional case: resultant of the substituted cubic system


@dataclass(frozen=True)
class BinaryForm:
    """Homogeneous form in (t, s) with MinorPolynomial coefficients.

    ``coeffs[k]`` multiplies s^(degree-k) t^k.
    """

    degree: int
    coeffs: tuple[MinorPolynomial, ...]

    def __post_init__(self):
        if len(self.coeffs) != self.degree + 1:
            raise PreconditionError("coefficient count does not match the degree")


def sylvester_resultant(f: BinaryForm, g: BinaryForm) -> MinorPolynomial:
    """Resultant in s of the dehomogenized forms f(1, s), g(1, s)."""
    n = f.coeffs[0].n
    m, k = f.degree, g.degree
    size = m + k
    zero = MinorPolynomial.zero(n)
    rows = []
    for shift in range(k):
        row = [zero] * shift + list(f.coeffs) + [zero] * (k - 1 - shift)
        rows.append(row)
    for shift in range(m):
        row = [zero] * shift + list(g.coeffs) + [zero] * (m - 1 - shift)
        rows.append(row)
    assert all(len(r) == size for r in rows)
    return _poly_det(rows)


def _poly_det(rows) -> MinorPolynomial:
    n = rows[0][0].n
    size = len(rows)
    if size == 1:
        return rows[0][0]
    out = MinorPolynomial.zero(n)
    for r in range(size):
        entry = rows[r][0]
        if not entry:
            continue
        minor = [row[1:] for q, row in enumerate(rows) if q != r]
        cofactor = entry * _poly_det(minor)
        out = out + (cofactor if r % 2 == 0 else -cofactor)
    return out


def chow_transform_g2() -> MinorPolynomial:
    """The cubic hypersurface swept by planes meeting the twisted-cubic cone.

    The curve [t^3 : t^2 s : s^3 : -3 t s^2] meets the plane of a symmetric
    2x2 matrix U exactly when the two substituted equations share a root
    [t : s].  The second equation carries an extra factor t; the root it
    would contribute is the point [0:0:1:0], which lies on no chart plane.
    Planes through the remaining boundary point [1:0:0:0] satisfy
    u11 = u12 = 0, and their membership is asserted after the resultant.
    """
    one = MinorPolynomial.constant(2, 1)
    zero = MinorPolynomial.zero(2)
    u11 = MinorPolynomial.variable(2, 1, 1)
    u12 = MinorPolynomial.variable(2, 1, 2)
    u22 = MinorPolynomial.variable(2, 2, 2)
    # s^3 - u11 t^3 - u12 t^2 s  and  3 s^2 + u22 t s + u12 t^2
    f = BinaryForm(3, (one, zero, -u12, -u11))
    g = BinaryForm(2, (MinorPolynomial.constant(2, 3), u22, u12))
    res = sylvester_resultant(f, g).normalized()
    pairs = variable_pairs(2)
    i11, i12 = pairs.index((1, 1)), pairs.index((1, 2))
    for mono in res.terms:
        if mono[i11] == 0 and mono[i12] == 0:
            raise ConsistencyError("planes through [1:0:0:0] escaped the hypersurface")
    res.pluecker_degree = 3
    return res


# ---------------------------------------------------------------------------
# the B3 case: ideal of the conic cylinder and the printed degree-4 equation

# Exponent order: (u11, u12, u13, u22, u23, u33); all 123 terms have total
# degree 6 and integer content 1.
_B3_INVARIANT_TERMS = (
    ((4, 0, 0, 2, 0, 0), 1),
    ((4, 0, 0, 1, 0, 1), -2),
    ((4, 0, 0, 0, 2, 0), 4),
    ((4, 0, 0, 0, 0, 2), 1),
    ((3, 2, 0, 1, 0, 0), -2),
    ((3, 2, 0, 0, 0, 1), 2),
    ((3, 1, 1, 0, 1, 0), -8),
    ((3, 0, 2, 1, 0, 0), 2),
    ((3, 0, 2, 0, 0, 1), -2),
    ((3, 0, 0, 3, 0, 0), -2),
    ((3, 0, 0, 2, 0, 1), 2),
    ((3, 0, 0, 1, 2, 0), -8),
    ((3, 0, 0, 1, 0, 2), 2),
    ((3, 0, 0, 0, 2, 1), -8),
    ((3, 0, 0, 0, 0, 3), -2),
    ((2, 4, 0, 0, 0, 0), 1),
    ((2, 2, 2, 0, 0, 0), 2),
    ((2, 2, 0, 2, 0, 0), 8),
    ((2, 2, 0, 1, 0, 1), -10),
    ((2, 2, 0, 0, 2, 0), 20),
    ((2, 2, 0, 0, 0, 2), 2),
    ((2, 1, 1, 1, 1, 0), 12),
    ((2, 1, 1, 0, 1, 1), 12),
    ((2, 0, 4, 0, 0, 0), 1),
    ((2, 0, 2, 2, 0, 0), 2),
    ((2, 0, 2, 1, 0, 1), -10),
    ((2, 0, 2, 0, 2, 0), 20),
    ((2, 0, 2, 0, 0, 2), 8),
    ((2, 0, 0, 4, 0, 0), 1),
    ((2, 0, 0, 3, 0, 1), 2),
    ((2, 0, 0, 2, 2, 0), 2),
    ((2, 0, 0, 2, 0, 2), -6),
    ((2, 0, 0, 1, 2, 1), 20),
    ((2, 0, 0, 1, 0, 3), 2),
    ((2, 0, 0, 0, 4, 0), -8),
    ((2, 0, 0, 0, 2, 2), 2),
    ((2, 0, 0, 0, 0, 4), 1),
    ((1, 4, 0, 1, 0, 0), -10),
    ((1, 4, 0, 0, 0, 1), 8),
    ((1, 3, 1, 0, 1, 0), -36),
    ((1, 2, 2, 1, 0, 0), -2),
    ((1, 2, 2, 0, 0, 1), -2),
    ((1, 2, 0, 3, 0, 0), -2),
    ((1, 2, 0, 2, 0, 1), -10),
    ((1, 2, 0, 1, 2, 0), -2),
    ((1, 2, 0, 1, 0, 2), 20),
    ((1, 2, 0, 0, 2, 1), -38),
    ((1, 2, 0, 0, 0, 3), -8),
    ((1, 1, 3, 0, 1, 0), -36),
    ((1, 1, 1, 2, 1, 0), 12),
    ((1, 1, 1, 1, 1, 1), -48),
    ((1, 1, 1, 0, 3, 0), 72),
    ((1, 1, 1, 0, 1, 2), 12),
    ((1, 0, 4, 1, 0, 0), 8),
    ((1, 0, 4, 0, 0, 1), -10),
    ((1, 0, 2, 3, 0, 0), -8),
    ((1, 0, 2, 2, 0, 1), 20),
    ((1, 0, 2, 1, 2, 0), -38),
    ((1, 0, 2, 1, 0, 2), -10),
    ((1, 0, 2, 0, 2, 1), -2),
    ((1, 0, 2, 0, 0, 3), -2),
    ((1, 0, 0, 4, 0, 1), -2),
    ((1, 0, 0, 3, 2, 0), 2),
    ((1, 0, 0, 3, 0, 2), 2),
    ((1, 0, 0, 2, 2, 1), -10),
    ((1, 0, 0, 2, 0, 3), 2),
    ((1, 0, 0, 1, 4, 0), 8),
    ((1, 0, 0, 1, 2, 2), -10),
    ((1, 0, 0, 1, 0, 4), -2),
    ((1, 0, 0, 0, 4, 1), 8),
    ((1, 0, 0, 0, 2, 3), 2),
    ((0, 6, 0, 0, 0, 0), 4),
    ((0, 4, 2, 0, 0, 0), 12),
    ((0, 4, 0, 2, 0, 0), 1),
    ((0, 4, 0, 1, 0, 1), 8),
    ((0, 4, 0, 0, 2, 0), 12),
    ((0, 4, 0, 0, 0, 2), -8),
    ((0, 3, 1, 1, 1, 0), -36),
    ((0, 3, 1, 0, 1, 1), 72),
    ((0, 2, 4, 0, 0, 0), 12),
    ((0, 2, 2, 2, 0, 0), 20),
    ((0, 2, 2, 1, 0, 1), -38),
    ((0, 2, 2, 0, 2, 0), -84),
    ((0, 2, 2, 0, 0, 2), 20),
    ((0, 2, 0, 3, 0, 1), 2),
    ((0, 2, 0, 2, 2, 0), 2),
    ((0, 2, 0, 2, 0, 2), 2),
    ((0, 2, 0, 1, 2, 1), -2),
    ((0, 2, 0, 1, 0, 3), -8),
    ((0, 2, 0, 0, 4, 0), 12),
    ((0, 2, 0, 0, 2, 2), 20),
    ((0, 2, 0, 0, 0, 4), 4),
    ((0, 1, 3, 1, 1, 0), 72),
    ((0, 1, 3, 0, 1, 1), -36),
    ((0, 1, 1, 3, 1, 0), -8),
    ((0, 1, 1, 2, 1, 1), 12),
    ((0, 1, 1, 1, 3, 0), -36),
    ((0, 1, 1, 1, 1, 2), 12),
    ((0, 1, 1, 0, 3, 1), -36),
    ((0, 1, 1, 0, 1, 3), -8),
    ((0, 0, 6, 0, 0, 0), 4),
    ((0, 0, 4, 2, 0, 0), -8),
    ((0, 0, 4, 1, 0, 1), 8),
    ((0, 0, 4, 0, 2, 0), 12),
    ((0, 0, 4, 0, 0, 2), 1),
    ((0, 0, 2, 4, 0, 0), 4),
    ((0, 0, 2, 3, 0, 1), -8),
    ((0, 0, 2, 2, 2, 0), 20),
    ((0, 0, 2, 2, 0, 2), 2),
    ((0, 0, 2, 1, 2, 1), -2),
    ((0, 0, 2, 1, 0, 3), 2),
    ((0, 0, 2, 0, 4, 0), 12),
    ((0, 0, 2, 0, 2, 2), 2),
    ((0, 0, 0, 4, 0, 2), 1),
    ((0, 0, 0, 3, 2, 1), -2),
    ((0, 0, 0, 3, 0, 3), -2),
    ((0, 0, 0, 2, 4, 0), 1),
    ((0, 0, 0, 2, 2, 2), 8),
    ((0, 0, 0, 2, 0, 4), 1),
    ((0, 0, 0, 1, 4, 1), -10),
    ((0, 0, 0, 1, 2, 3), -2),
    ((0, 0, 0, 0, 6, 0), 4),
    ((0, 0, 0, 0, 4, 2), 1),
)

# Generators of the ideal of the cylinder over the null conic, as integer
# polynomials in (x1, x2, x3, u1, u2, u3); ordered so that substituting
# u_i = sum_j u_ij x^j turns entry k into the k-th substituted quadric.
_B3_GENERATORS = (
    {(1, 0, 0, 0, 1, 0): 1, (0, 1, 0, 1, 0, 0): -1},   # x1 u2 - x2 u1
    {(1, 0, 0, 0, 0, 1): 1, (0, 0, 1, 1, 0, 0): -1},   # x1 u3 - x3 u1
    {(0, 1, 0, 0, 0, 1): 1, (0, 0, 1, 0, 1, 0): -1},   # x2 u3 - x3 u2
    {(1, 0, 0, 1, 0, 0): 1, (0, 1, 0, 0, 1, 0): 1, (0, 0, 1, 0, 0, 1): 1},
    {(2, 0, 0, 0, 0, 0): 1, (0, 2, 0, 0, 0, 0): 1, (0, 0, 2, 0, 0, 0): 1},
    {(0, 0, 0, 2, 0, 0): 1, (0, 0, 0, 0, 2, 0): 1, (0, 0, 0, 0, 0, 2): 1},
)


@dataclass(frozen=True)
class B3Data:
    """Ideal generators, substituted quadrics, and the invariant equation.

    ``ideal_generators`` are polynomials in (x1, x2, x3, u1, u2, u3) as
    exponent-tuple dicts; ``quadrics`` are the same six elements after
    the substitution u_i = sum_j u_ij x^j, each a dict from x-exponent
    triples to MinorPolynomial coefficients.
    """

    ideal_generators: tuple
    quadrics: tuple
    invariant: MinorPolynomial


def _substitute_jets(gen: dict) -> dict:
    # substitute u_i -> sum_j u_ij x^j one factor at a time, tracking the
    # x-exponent separately from the MinorPolynomial coefficient
    out: dict[tuple[int, int, int], MinorPolynomial] = {}
    for exps, coeff in gen.items():
        xpart = tuple(exps[:3])
        partial = {xpart: MinorPolynomial.constant(3, coeff)}
        for i in (1, 2, 3):
            for _ in range(exps[3 + i - 1]):
                nxt: dict[tuple[int, int, int], MinorPolynomial] = {}
                for xe, poly in partial.items():
                    for j in (1, 2, 3):
                        ne = list(xe)
                        ne[j - 1] += 1
                        key = tuple(ne)
                        add = poly * MinorPolynomial.variable(3, i, j)
                        nxt[key] = nxt.get(key, MinorPolynomial.zero(3)) + add
                partial = nxt
        for xe, poly in partial.items():
            out[xe] = out.get(xe, MinorPolynomial.zero(3)) + poly
    return {xe: poly for xe, poly in out.items() if poly}


def b3_data() -> B3Data:
    invariant = MinorPolynomial(3, dict(_B3_INVARIANT_TERMS), pluecker_degree=4)
    assert invariant.content() == 1
    assert invariant.terms[invariant.leading_monomial()] > 0
    quadrics = tuple(_substitute_jets(g) for g in _B3_GENERATORS)
    return B3Data(
        ideal_generators=_B3_GENERATORS,
        quadrics=quadrics,
        invariant=invariant,
    )


# ---------------------------------------------------------------------------
# exact sampling verifiers


@dataclass(frozen=True)
class MembershipReport:
    samples: int
    on_variety_zeros: int
    degenerate_resamples: int
    off_variety_nonzero: int

    @property
    def ok(self) -> bool:
        return self.on_variety_zeros == self.samples


def _eval_gen(gen: dict, x, u) -> GaussianRational:
    total = _GR0
    for exps, coeff in gen.items():
        prod = GaussianRational(coeff)
        for val, e in zip((*x, *u), exps):
            for _ in range(e):
                prod = prod * val
        total = total + prod
    return total


def _rref(rows):
    """Reduced row echelon form over GaussianRational, in place on copies.

    Returns (rref rows, pivot column list).
    """
    rows = [list(r) for r in rows]
    ncols = len(rows[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = next((k for k in range(r, len(rows)) if rows[k][c]), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = _GR1 / rows[r][c]
        rows[r] = [inv * v for v in rows[r]]
        for k in range(len(rows)):
            if k != r and rows[k][c]:
                f = rows[k][c]
                rows[k] = [a - f * b for a, b in zip(rows[k], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def _solve_symmetric_through(x, u):
    """All symmetric 3x3 U with U x = u: particular solution and nullspace
    basis over the 6 upper-triangle unknowns."""
    pairs = variable_pairs(3)
    rows = []
    for i in (1, 2, 3):
        row = []
        for (a, b) in pairs:
            if a == i:
                row.append(x[b - 1])
            elif b == i:
                row.append(x[a - 1])
            else:
                row.append(_GR0)
        row.append(u[i - 1])
        rows.append(row)
    rref, pivots = _rref(rows)
    if len(rows[0]) - 1 in pivots:
        raise ConsistencyError("inconsistent linear system for a variety point")
    nvars = len(pairs)
    particular = [_GR0] * nvars
    for r, c in enumerate(pivots):
        particular[c] = rref[r][-1]
    free = [c for c in range(nvars) if c not in pivots]
    basis = []
    for fc in free:
        vec = [_GR0] * nvars
        vec[fc] = _GR1
        for r, c in enumerate(pivots):
            vec[c] = -rref[r][fc]
        basis.append(vec)
    return particular, basis


def _membership_sample(data: B3Data, seed: int, idx: int):
    """One on-variety draw; returns (zero hit, resample count)."""
    inv = data.invariant
    pairs = variable_pairs(3)
    rng = random.Random(f"{seed}:{idx}")
    degenerate = 0
    t = Fraction(rng.randint(-9, 9), rng.randint(1, 9))
    while t == 0:
        degenerate += 1
        t = Fraction(rng.randint(-9, 9), rng.randint(1, 9))
    s = Fraction(rng.randint(-9, 9), rng.randint(1, 9))
    p = Fraction(rng.randint(-9, 9), rng.randint(1, 9))
    z = (
        GaussianRational(1 - p * p),
        GaussianRational(0, 1 + p * p),
        GaussianRational(2 * p),
    )
    assert _dot(z, z) == 0
    x = tuple(GaussianRational(t) * c for c in z)
    u = tuple(GaussianRational(s) * c for c in z)
    for gen in data.ideal_generators:
        assert _eval_gen(gen, x, u) == 0
    particular, basis = _solve_symmetric_through(x, u)
    combo = list(particular)
    for vec in basis:
        w = GaussianRational(rng.randint(-5, 5))
        combo = [c + w * v for c, v in zip(combo, vec)]
    values = dict(zip(pairs, combo))
    return (inv.evaluate(values) == 0), degenerate


def verify_b3_membership(samples: int, seed: int, workers: int = 1) -> MembershipReport:
    """Exact check that the stored B3 equation vanishes on incident planes.

    Each sample draws a Gaussian-rational point of the conic cylinder via
    the parameterization (1 - p^2, i (1 + p^2), 2 p), picks a random
    symmetric matrix whose plane passes through it, and asserts that the
    invariant evaluates to zero exactly.  The same count of random
    symmetric integer matrices is evaluated off the variety and the
    nonvanishing outcomes are tallied.  Per-sample seeds are derived from
    the sample index, so the report is independent of ``workers``.
    """
    if samples < 1:
        raise PreconditionError("need at least one sample")
    if workers < 1:
        raise PreconditionError("need at least one worker")
    data = b3_data()
    inv = data.invariant
    pairs = variable_pairs(3)
    if workers == 1:
        outcomes = [_membership_sample(data, seed, i) for i in range(samples)]
    else:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=workers) as pool:
            outcomes = list(
                pool.map(lambda i: _membership_sample(data, seed, i),
                         range(samples))
            )
    zeros = sum(1 for hit, _ in outcomes if hit)
    degenerate = sum(d for _, d in outcomes)
    off_nonzero = 0
    for idx in range(samples):
        rng = random.Random(f"{seed}:off:{idx}")
        values = {p_: rng.randint(-9, 9) for p_ in pairs}
        if inv.evaluate(values) != 0:
            off_nonzero += 1
    return MembershipReport(
        samples=samples,
        on_variety_zeros=zeros,
        degenerate_resamples=degenerate,
        off_variety_nonzero=off_nonzero,
    )


@dataclass(frozen=True)
class ActionReport:
    kind: str
    exponent: int | None
    multiplier: Fraction | None
    samples_used: int
    ok: bool
    detail: str = ""


@dataclass(frozen=True)
class InvarianceReport:
    actions: tuple[ActionReport, ...]

    @property
    def ok(self) -> bool:
        return all(a.ok for a in self.actions)


def _frac_matmul(a, b):
    n = len(a)
    return [[sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)]
            for i in range(n)]


def _frac_det(rows):
    rows = [list(r) for r in rows]
    n = len(rows)
    det = Fraction(1)
    for c in range(n):
        pivot = next((k for k in range(c, n) if rows[k][c]), None)
        if pivot is None:
            return Fraction(0)
        if pivot != c:
            rows[c], rows[pivot] = rows[pivot], rows[c]
            det = -det
        det *= rows[c][c]
        inv = 1 / rows[c][c]
        for k in range(c + 1, n):
            if rows[k][c]:
                f = rows[k][c] * inv
                rows[k] = [a - f * b for a, b in zip(rows[k], rows[c])]
    return det


def _frac_inverse(rows):
    n = len(rows)
    aug = [list(map(Fraction, rows[i])) + [Fraction(int(i == j)) for j in range(n)]
           for i in range(n)]
    red, pivots = _rref([[GaussianRational(v) for v in row] for row in aug])
    if pivots != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    out = [[c.real for c in row[n:]] for row in red]
    return out


def _transform(action, U: SymmetricMatrix) -> SymmetricMatrix:
    n = U.n
    rows = [[Fraction(U.entry(i + 1, j + 1)) for j in range(n)] for i in range(n)]
    if action[0] == "orthogonal":
        o = [[Fraction(v) for v in r] for r in action[1]]
        ot = [[o[j][i] for j in range(n)] for i in range(n)]
        return SymmetricMatrix(_frac_matmul(_frac_matmul(ot, rows), o))
    _, a, b, c, d = action
    num = [[Fraction(c) * int(i == j) + Fraction(d) * rows[i][j] for j in range(n)]
           for i in range(n)]
    den = [[Fraction(a) * int(i == j) + Fraction(b) * rows[i][j] for j in range(n)]
           for i in range(n)]
    return SymmetricMatrix(_frac_matmul(num, _frac_inverse(den)))


def _check_action(action, n: int):
    if action[0] == "orthogonal":
        o = [[Fraction(v) for v in r] for r in action[1]]
        if len(o) != n or any(len(r) != n for r in o):
            raise PreconditionError("orthogonal generator of wrong size")
        ot = [[o[j][i] for j in range(n)] for i in range(n)]
        prod = _frac_matmul(ot, o)
        if any(prod[i][j] != int(i == j) for i in range(n) for j in range(n)):
            raise PreconditionError("generator is not orthogonal")
    elif action[0] == "fractional":
        _, a, b, c, d = action
        if Fraction(a) * Fraction(d) - Fraction(b) * Fraction(c) != 1:
            raise PreconditionError("fractional generator is not unimodular")
    else:
        raise PreconditionError(f"unknown action kind {action[0]!r}")


def verify_invariance(P: MinorPolynomial, generators, samples: int = 20,
                      seed: int = 0) -> InvarianceReport:
    """Fit and verify a multiplier law P(g U) det(aI + bU)^k = c P(U).

    Orthogonal conjugations must reproduce P exactly (k = 0, c = 1).  For
    the fractional action the integer exponent k and the rational c are
    fitted on the first samples and verified on the rest; inconsistency
    is reported, not raised.
    """
    if samples < 3:
        raise PreconditionError("need at least 3 samples to fit and verify")
    n = P.n
    reports = []
    for gi, action in enumerate(generators):
        _check_action(action, n)
        pairs_list = []
        idx = 0
        while len(pairs_list) < samples:
            rng = random.Random(f"{seed}:{gi}:{idx}")
            idx += 1
            U = SymmetricMatrix.from_upper(
                n, {p: Fraction(rng.randint(-9, 9)) for p in variable_pairs(n)}
            )
            base = P.evaluate(U)
            if base == 0:
                continue
            if action[0] == "fractional":
                _, a, b, _c, d = action
                den = [[Fraction(a) * int(i == j) + Fraction(b) * U.entry(i + 1, j + 1)
                        for j in range(n)] for i in range(n)]
                det = _frac_det(den)
                if det == 0:
                    continue
            else:
                det = Fraction(1)
            transformed = P.evaluate(_transform(action, U))
            pairs_list.append((Fraction(transformed) / Fraction(base), det))
        if action[0] == "orthogonal":
            ok = all(r == 1 for r, _ in pairs_list)
            reports.append(ActionReport(
                kind="orthogonal", exponent=0, multiplier=Fraction(1),
                samples_used=len(pairs_list), ok=ok,
                detail="" if ok else "conjugation changed the polynomial",
            ))
            continue
        (r1, d1), (r2, d2) = pairs_list[0], pairs_list[1]
        candidates = [k for k in range(-16, 17) if r1 * d1 ** k == r2 * d2 ** k]
        if len(candidates) > 1:
            r3, d3 = pairs_list[2]
            candidates = [k for k in candidates if r1 * d1 ** k == r3 * d3 ** k]
        if len(candidates) != 1:
            reports.append(ActionReport(
                kind="fractional", exponent=None, multiplier=None,
                samples_used=len(pairs_list), ok=False,
                detail="no single integer exponent fits the samples",
            ))
            continue
        k = candidates[0]
        c = r1 * d1 ** k
        ok = all(r * d ** k == c for r, d in pairs_list)
        reports.append(ActionReport(
            kind="fractional", exponent=k, multiplier=c,
            samples_used=len(pairs_list), ok=ok,
            detail="" if ok else "multiplier law fails on holdout samples",
        ))
    return InvarianceReport(actions=tuple(reports))


# ---------------------------------------------------------------------------
# degrees of the tangent-directions variety


SUBADJOINT_FORMULAS = {
    "A": "1 + 1",
    "B": "2(n-1)",
    "D": "2(n-1)",
    "E6": "9!/(2^2 3^3 4^2 5)",
    "E7": "15! 2! 4!/(5! 7! 9!)",
    "E8": "13188",
    "F4": "2^3 6! 2!/(3! 5!)",
    "G2": "3",
}


@lru_cache(maxsize=None)
def subadjoint_degree(cartan_type) -> int:
    """Degree of the cone of tangent directions inside P(g_-1)."""
    fam = cartan_type.family
    if fam == "C":
        raise PreconditionError(
            "type C is excluded: its group acts transitively off the quadric locus"
        )
    n = contact_grading(cartan_type).n
    if fam == "A":
        return 2
    if fam in ("B", "D"):
        if n < 3:
            raise PreconditionError(
                f"{cartan_type} has n={n}; the orthogonal series formula needs n >= 3"
            )
        return 2 * (n - 1)
    if fam == "G":
        return 3
    if fam == "F":
        value = 2 ** 3 * factorial(6) * factorial(2) // (factorial(3) * factorial(5))
        assert value == 16
        return value
    if cartan_type.rank == 6:
        value = factorial(9) // (2 ** 2 * 3 ** 3 * 4 ** 2 * 5)
        assert value == 42
        return value
    if cartan_type.rank == 7:
        num = factorial(15) * factorial(2) * factorial(4)
        den = factorial(5) * factorial(7) * factorial(9)
        assert num % den == 0
        value = num // den
        assert value == 286
        return value
    return 13188
