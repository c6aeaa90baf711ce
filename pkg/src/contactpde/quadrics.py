"""Quadric-invariant dimensions via Grothendieck-group relations.

For even n the symmetric squares and pairwise tensor products of the
symplectic fundamental modules decompose by closed combinatorial rules.
Applying the invariants functor of the semisimple degree-0 subalgebra turns
those decompositions into a square integer linear system whose unknowns are
the invariant dimensions of the summands; the last unknown is the dimension
of the space of invariant quadrics.

The left-hand counts come from Weyl-group data alone: dual pairs of coset
weights under the factor-wise longest elements, with self-dual summands
split by the parity of the pairing against the coroot-sum vector.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .contact import database_entry
from .errors import ConsistencyError, PreconditionError
from .kostant import generate_wp
from .rootsys import CartanType

# Relation symbols: ("D", m) stands for the class of V_{2*lam_m},
# ("P", x, y) with x < y for the class of V_{lam_x + lam_y}.  Index 0 means
# the trivial weight, so ("D", 0) is the trivial class and ("P", 0, y) is
# the class of the single fundamental V_{lam_y}.


@dataclass(frozen=True)
class KRelation:
    lhs: tuple                 # ("sym", i) or ("tensor", i, j)
    rhs_terms: tuple           # sorted ((symbol, count), ...) multiset


@dataclass
class InvariantCounts:
    sym_sq: dict               # i -> invariant count of the symmetric square
    tensor: dict               # (i, j) -> invariant count of the product
    d: dict | None = None      # m -> solved dim (V_{2 lam_m})^inv
    d_pair: dict | None = None  # (x, y) -> solved dim (V_{lam_x + lam_y})^inv


def _sym_terms(n: int, i: int):
    """Summands of S^2 V_{lam_i}, valid for the full range of n."""
    terms: dict = {}
    for j in range(0, i // 2 + 1):
        key = ("D", i - 2 * j)
        terms[key] = terms.get(key, 0) + 1
    for j in range(-(n + 1), n + 2):
        for k in range(j + 1, n + 2):
            if 2 * j < i - n or 2 * k > i:
                continue
            if j + k < 0 or k - j > n - i:
                continue
            x, y = i - 2 * k, i - 2 * j
            key = ("P", x, y)
            terms[key] = terms.get(key, 0) + 1
    return terms


def _tensor_terms(n: int, i: int, j: int):
    """Summands of V_{lam_i} (x) V_{lam_j} for i < j, j - i even."""
    terms: dict = {}
    for k in range(0, i + 1):
        if j + k > n:
            break
        for l in range(0, i - k + 1):
            x, y = i - k - l, j + k - l
            if x > y:
                raise ConsistencyError("tensor term indices out of order")
            key = ("P", x, y)
            terms[key] = terms.get(key, 0) + 1
    return terms


def _as_relation(lhs, terms) -> KRelation:
    return KRelation(lhs=lhs, rhs_terms=tuple(sorted(terms.items())))


def sym_square_relation(n: int, i: int) -> KRelation:
    if n % 2:
        raise PreconditionError("decomposition rule requires even n")
    if not 1 <= i <= n:
        raise PreconditionError("need 1 <= i <= n")
    return _as_relation(("sym", i), _sym_terms(n, i))


def tensor_relation(n: int, i: int, j: int) -> KRelation:
    if n % 2:
        raise PreconditionError("decomposition rule requires even n")
    if not 1 <= i < j <= n:
        raise PreconditionError("need 1 <= i < j <= n")
    if (j - i) % 2:
        raise PreconditionError("need j - i even")
    return _as_relation(("tensor", i, j), _tensor_terms(n, i, j))


# ------------------------------------------------------------ pair counts --

def _coset_keys(ct: CartanType):
    """Per length: restricted weights as parent-node tuples over delta0,
    their duals under the assembled longest element, and parities."""
    e = database_entry(ct)
    n = e.n
    delta0 = tuple(p for p in range(ct.rank) if p != e.a_node)
    sigma = e.minus_w_circ
    h = e.h_circ
    wp = generate_wp(ct, n)
    out = {}
    for i in range(1, n + 1):
        rows = []
        for c in wp.get(i, ()):
            v = c.weight
            key = tuple(v[p] for p in delta0)
            dual = tuple(v[sigma[p]] for p in delta0)
            parity = sum(v[p] * h[p] for p in delta0) % 2
            rows.append((key, dual, parity))
        out[i] = rows
    return out


@lru_cache(maxsize=None)
def count_invariant_pairs(ct: CartanType) -> InvariantCounts:
    e = database_entry(ct)
    n = e.n
    keys = _coset_keys(ct)

    sym_sq = {}
    for i in range(1, n + 1):
        rows = keys[i]
        index: dict = {}
        for key, _dual, _par in rows:
            index[key] = index.get(key, 0) + 1
        ordered_pairs = sum(index.get(dual, 0) for _key, dual, _par in rows)
        even = sum(1 for key, dual, par in rows if key == dual and par == 0)
        odd = sum(1 for key, dual, par in rows if key == dual and par == 1)
        num = ordered_pairs + even - odd
        if num % 2:
            raise ConsistencyError(f"invariant count halving failed at degree {i}")
        sym_sq[i] = num // 2

    tensor = {}
    for i in range(1, n + 1):
        for j in range(i + 2, n + 1, 2):
            index = {}
            for key, _dual, _par in keys[j]:
                index[key] = index.get(key, 0) + 1
            tensor[(i, j)] = sum(index.get(dual, 0) for _key, dual, _par in keys[i])
    return InvariantCounts(sym_sq=sym_sq, tensor=tensor)


def _kostant_zero_count(ct: CartanType, i: int) -> int:
    """Invariant dimension of a single fundamental: cosets restricting to 0."""
    wp = generate_wp(ct, database_entry(ct).n)
    return sum(
        1
        for c in wp.get(i, ())
        if all(x == 0 for x in c.restricted_weight)
    )


# ------------------------------------------------------------ linear solve --

def _solve_exact(rows, rhs):
    """Gaussian elimination over the rationals; unique solution required."""
    m = len(rows)
    width = len(rows[0]) if m else 0
    aug = [[Fraction(x) for x in row] + [Fraction(b)] for row, b in zip(rows, rhs)]
    if m != width:
        raise ConsistencyError("relation system is not square")
    for col in range(width):
        piv = next((r for r in range(col, m) if aug[r][col] != 0), None)
        if piv is None:
            raise ConsistencyError("relation system is singular")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for r in range(m):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    return [aug[r][width] for r in range(m)]


@lru_cache(maxsize=None)
def solve_invariant_system(ct: CartanType) -> InvariantCounts:
    e = database_entry(ct)
    n = e.n
    if n % 2:
        raise PreconditionError(
            "odd n has no quadric invariant by parity; nothing to solve"
        )
    counts = count_invariant_pairs(ct)

    unknowns = [("D", m) for m in range(1, n + 1)]
    unknowns += [
        ("P", x, y) for x in range(1, n + 1) for y in range(x + 2, n + 1, 2)
    ]
    col_of = {u: k for k, u in enumerate(unknowns)}

    rows, rhs, labels = [], [], []
    relations = [(("sym", i), _sym_terms(n, i), counts.sym_sq[i]) for i in range(1, n + 1)]
    relations += [
        (("tensor", i, j), _tensor_terms(n, i, j), counts.tensor[(i, j)])
        for (i, j) in sorted(counts.tensor)
    ]
    for lhs, terms, count in relations:
        row = [0] * len(unknowns)
        const = 0
        for sym, mult in terms.items():
            if sym == ("D", 0):
                const += mult
            elif sym[0] == "P" and sym[1] == 0:
                const += mult * _kostant_zero_count(ct, sym[2])
            else:
                row[col_of[sym]] += mult
        rows.append(row)
        rhs.append(count - const)
        labels.append(lhs)

    solution = _solve_exact(rows, rhs)
    d, d_pair = {}, {}
    for u, val in zip(unknowns, solution):
        if val.denominator != 1:
            raise ConsistencyError(f"non-integer solution at {u}")
        v = int(val)
        if v < 0:
            raise ConsistencyError(f"negative invariant dimension at {u}")
        if u[0] == "D":
            d[u[1]] = v
        else:
            d_pair[(u[1], u[2])] = v
    return InvariantCounts(
        sym_sq=counts.sym_sq, tensor=counts.tensor, d=d, d_pair=d_pair
    )


def quadric_invariant_dimension(ct: CartanType) -> int:
    """dim of the invariant quadrics: the last diagonal unknown d_n."""
    solved = solve_invariant_system(ct)
    return solved.d[database_entry(ct).n]
