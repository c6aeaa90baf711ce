"""Exact root-system and Weyl-group computations for the finite Cartan types.

Weights are tuples of integers in the basis of fundamental weights throughout.
Positive roots carry both their simple-root coordinates and their fundamental
coordinates.  All arithmetic is exact: Python integers and ``Fraction``.

Conventions (Bourbaki numbering of simple roots):
  * ``cartan[i][j]`` is the pairing of the j-th simple root against the i-th
    simple coroot, so a weight given in simple-root coordinates ``c`` has
    fundamental coordinates ``f = cartan . c``.
  * The simple reflection ``s_i`` acts on fundamental coordinates by
    ``s_i(mu)_k = mu_k - mu_i * cartan[k][i]``.
  * A word ``(i1, ..., ik)`` denotes the composition ``s_{i1} . ... . s_{ik}``
    and is applied to a vector right to left.  Indices are 0-based internally;
    1-based only at CLI/JSON boundaries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import permutations

from .errors import ConsistencyError, PreconditionError

FAMILIES = "ABCDEFG"

# Inclusive rank bounds per family; None means unbounded above.
_RANK_BOUNDS = {
    "A": (1, None),
    "B": (2, None),
    "C": (2, None),
    "D": (3, None),
    "E": (6, 8),
    "F": (4, 4),
    "G": (2, 2),
}


@dataclass(frozen=True, order=True)
class CartanType:
    family: str
    rank: int

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise PreconditionError(f"unknown family {self.family!r}")
        lo, hi = _RANK_BOUNDS[self.family]
        if self.rank < lo or (hi is not None and self.rank > hi):
            raise PreconditionError(
                f"rank {self.rank} not allowed for family {self.family}"
            )

    @classmethod
    def parse(cls, text: str) -> "CartanType":
        t = text.strip()
        if len(t) >= 2 and t[0].upper() in FAMILIES:
            try:
                return cls(t[0].upper(), int(t[1:]))
            except ValueError:
                pass
        raise PreconditionError(f"cannot parse Cartan type {text!r}")

    def __str__(self):
        return f"{self.family}{self.rank}"


@dataclass(frozen=True)
class WeylElement:
    """A Weyl-group element given by a (reduced) word in simple reflections."""

    word: tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.word)

    def inverse(self) -> "WeylElement":
        return WeylElement(tuple(reversed(self.word)))


def _cartan_matrix(ct: CartanType) -> tuple[tuple[int, ...], ...]:
    r = ct.rank
    m = [[2 if i == j else 0 for j in range(r)] for i in range(r)]

    def edge(i, j):
        m[i][j] = -1
        m[j][i] = -1

    fam = ct.family
    if fam in ("A", "B", "C"):
        for i in range(r - 1):
            edge(i, i + 1)
        if fam == "B":
            m[r - 1][r - 2] = -2  # last simple root short
        elif fam == "C":
            m[r - 2][r - 1] = -2  # last simple root long
    elif fam == "D":
        for i in range(r - 2):
            edge(i, i + 1)
        edge(r - 3, r - 1)
    elif fam == "E":
        edge(0, 2)
        for i in range(2, r - 1):
            edge(i, i + 1)
        edge(1, 3)
    elif fam == "F":
        edge(0, 1)
        edge(2, 3)
        m[1][2] = -1
        m[2][1] = -2
    elif fam == "G":
        m[0][1] = -3
        m[1][0] = -1
    return tuple(tuple(row) for row in m)


def _symmetrizer(cartan) -> tuple[int, ...]:
    """Minimal positive integers d with d_i * C[i][j] == d_j * C[j][i]."""
    r = len(cartan)
    d: list[Fraction | None] = [None] * r
    d[0] = Fraction(1)
    changed = True
    while changed:
        changed = False
        for i in range(r):
            if d[i] is None:
                continue
            for j in range(r):
                if i != j and cartan[i][j] != 0 and d[j] is None:
                    d[j] = d[i] * Fraction(cartan[i][j], cartan[j][i])
                    changed = True
    if any(x is None or x <= 0 for x in d):
        raise ConsistencyError("diagram not connected or symmetrizer failed")
    scale = math.lcm(*(x.denominator for x in d))
    ints = [int(x * scale) for x in d]
    g = math.gcd(*ints)
    return tuple(v // g for v in ints)


def _positive_roots(cartan):
    """Closure of the simple roots under simple reflections, positives only.

    Returns pairs (root coords, fundamental coords) sorted by height then by
    root coordinates.
    """
    r = len(cartan)
    seen = {}
    frontier = []
    for i in range(r):
        c = tuple(1 if j == i else 0 for j in range(r))
        f = tuple(cartan[k][i] for k in range(r))
        seen[c] = f
        frontier.append((c, f))
    while frontier:
        nxt = []
        for c, f in frontier:
            for i in range(r):
                fi = f[i]
                if fi == 0:
                    continue
                c2 = list(c)
                c2[i] -= fi
                if c2[i] < 0:
                    continue  # only alpha_i itself reflects out of the positive cone
                c2 = tuple(c2)
                if c2 in seen:
                    continue
                f2 = tuple(f[k] - fi * cartan[k][i] for k in range(r))
                seen[c2] = f2
                nxt.append((c2, f2))
        frontier = nxt
    roots = sorted(seen.items(), key=lambda cf: (sum(cf[0]), cf[0]))
    return tuple(roots)


class RootSystem:
    """All data of one root system, built once via :func:`build_root_system`."""

    def __init__(self, cartan_type: CartanType):
        self.cartan_type = cartan_type
        self.rank = cartan_type.rank
        self.cartan = _cartan_matrix(cartan_type)
        self.sym = _symmetrizer(self.cartan)
        self.pos_roots = _positive_roots(self.cartan)
        self.rho = (1,) * self.rank
        # column i = fundamental coordinates of alpha_i
        self.simple_fund = tuple(
            tuple(self.cartan[k][i] for k in range(self.rank)) for i in range(self.rank)
        )
        hr, hr_fund = max(self.pos_roots, key=lambda cf: sum(cf[0]))
        for c, _ in self.pos_roots:
            if any(h - x < 0 for h, x in zip(hr, c)):
                raise ConsistencyError("highest root is not maximal in root order")
        self.highest_root = hr
        self.highest_root_fund = hr_fund

    def __repr__(self):
        return f"RootSystem({self.cartan_type})"

    # -- elementary weight operations ------------------------------------

    def reflect(self, mu, i):
        fi = mu[i]
        if fi == 0:
            return tuple(mu)
        return tuple(mu[k] - fi * self.cartan[k][i] for k in range(self.rank))

    def is_dominant(self, mu) -> bool:
        return all(x >= 0 for x in mu)

    def dominant_rep(self, mu):
        """The dominant weight in the Weyl orbit of ``mu``."""
        mu = list(mu)
        r = self.rank
        while True:
            for i in range(r):
                if mu[i] < 0:
                    fi = mu[i]
                    for k in range(r):
                        mu[k] -= fi * self.cartan[k][i]
                    break
            else:
                return tuple(mu)

    def dominant_rep_signed(self, mu):
        """Dominant representative together with the sign (-1)^length.

        Only meaningful for regular weights; a zero coordinate on the way is
        reported as an internal inconsistency.
        """
        mu = list(mu)
        r = self.rank
        sign = 1
        while True:
            for i in range(r):
                if mu[i] < 0:
                    fi = mu[i]
                    for k in range(r):
                        mu[k] -= fi * self.cartan[k][i]
                    sign = -sign
                    break
            else:
                if 0 in mu:
                    raise ConsistencyError("signed folding hit a singular weight")
                return tuple(mu), sign

    def apply_word(self, word, mu):
        for i in reversed(word):
            mu = self.reflect(mu, i)
        return tuple(mu)

    # -- pairings ---------------------------------------------------------

    def pairing_scaled(self, mu_fund, root_coords) -> int:
        """(mu, alpha) in the scale where (alpha_i, alpha_i) = 2 * sym[i]."""
        return sum(
            c * d * m for c, d, m in zip(root_coords, self.sym, mu_fund)
        )

    def root_norm2(self, root) -> int:
        c, f = root
        return sum(ci * di * fi for ci, di, fi in zip(c, self.sym, f))

    def fund_coords(self, root_coords):
        return tuple(
            sum(self.cartan[k][j] * root_coords[j] for j in range(self.rank))
            for k in range(self.rank)
        )


@lru_cache(maxsize=None)
def build_root_system(ct: CartanType) -> RootSystem:
    return RootSystem(ct)


def weyl_orbit(rs: RootSystem, weight) -> list[tuple[int, ...]]:
    """The full Weyl orbit of ``weight``, sorted; exact BFS, no group table."""
    start = rs.dominant_rep(tuple(weight))
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for mu in frontier:
            for i in range(rs.rank):
                if mu[i] != 0:
                    nu = rs.reflect(mu, i)
                    if nu not in seen:
                        seen.add(nu)
                        nxt.append(nu)
        frontier = nxt
    return sorted(seen)


def weyl_dim(rs: RootSystem, weight) -> int:
    """Dimension of the irreducible module with dominant highest weight."""
    if not rs.is_dominant(weight):
        raise PreconditionError(f"weight {weight} is not dominant")
    num = 1
    den = 1
    for c, _f in rs.pos_roots:
        num *= sum(cj * dj * (wj + 1) for cj, dj, wj in zip(c, rs.sym, weight))
        den *= sum(cj * dj for cj, dj in zip(c, rs.sym))
    q, r = divmod(num, den)
    if r:
        raise ConsistencyError("Weyl dimension product did not divide exactly")
    return q


def dot_action(rs: RootSystem, w, weight):
    """Affine action w . mu = w(mu + rho) - rho, exact on integer weights."""
    word = w.word if isinstance(w, WeylElement) else tuple(w)
    mu = tuple(x + 1 for x in weight)
    mu = rs.apply_word(word, mu)
    return tuple(x - 1 for x in mu)


def _antidominant_rep(rs: RootSystem, mu):
    mu = list(mu)
    while True:
        for i in range(rs.rank):
            if mu[i] > 0:
                fi = mu[i]
                for k in range(rs.rank):
                    mu[k] -= fi * rs.cartan[k][i]
                break
        else:
            return tuple(mu)


@lru_cache(maxsize=None)
def longest_involution(ct: CartanType) -> tuple[int, ...]:
    """The permutation sigma with -w_long(omega_i) = omega_{sigma(i)} (0-based).

    Computed by lowering each fundamental weight to the antidominant chamber.
    The result is an involutive diagram automorphism; both facts are checked.
    """
    rs = build_root_system(ct)
    sigma = []
    for i in range(rs.rank):
        e = tuple(1 if k == i else 0 for k in range(rs.rank))
        low = _antidominant_rep(rs, e)
        neg = tuple(-x for x in low)
        if sum(neg) != 1 or sorted(neg) != [0] * (rs.rank - 1) + [1]:
            raise ConsistencyError("-w_long did not map a fundamental weight to one")
        sigma.append(neg.index(1))
    sigma = tuple(sigma)
    for i in range(rs.rank):
        if sigma[sigma[i]] != i:
            raise ConsistencyError("longest involution is not an involution")
        for j in range(rs.rank):
            if rs.cartan[sigma[i]][sigma[j]] != rs.cartan[i][j]:
                raise ConsistencyError("longest involution is not a diagram automorphism")
    return sigma


@lru_cache(maxsize=None)
def sum_positive_coroots(ct: CartanType) -> tuple[int, ...]:
    """Coefficients, over simple coroots, of the sum of all positive coroots."""
    rs = build_root_system(ct)
    total = [Fraction(0)] * rs.rank
    for c, f in rs.pos_roots:
        n2 = rs.root_norm2((c, f))
        for j in range(rs.rank):
            total[j] += Fraction(2 * c[j] * rs.sym[j], n2)
    out = []
    for x in total:
        if x.denominator != 1:
            raise ConsistencyError("coroot sum has a non-integer coefficient")
        out.append(int(x))
    return tuple(out)


# -- sub-diagram identification ------------------------------------------


def _standard_cartan(ct: CartanType):
    return _cartan_matrix(ct)


def _candidate_types(rank: int):
    for fam in FAMILIES:
        lo, hi = _RANK_BOUNDS[fam]
        if rank >= lo and (hi is None or rank <= hi):
            yield CartanType(fam, rank)


@lru_cache(maxsize=None)
def identify_components(cartan, nodes):
    """Split the induced sub-diagram on ``nodes`` into simple components.

    Returns a tuple of ``(ct, ordered_nodes)`` where ``ordered_nodes`` lists
    the parent nodes in the Bourbaki order of the identified type: the induced
    sub-Cartan matrix read in that order equals the standard Cartan matrix of
    ``ct``.  Components are sorted by smallest parent node; among the valid
    orderings of one component the lexicographically smallest is chosen, so
    the output is canonical.
    """
    nodes = tuple(nodes)
    remaining = set(nodes)
    comps = []
    while remaining:
        seed = min(remaining)
        comp = {seed}
        frontier = [seed]
        while frontier:
            v = frontier.pop()
            for u in remaining - comp:
                if cartan[v][u] != 0:
                    comp.add(u)
                    frontier.append(u)
        comps.append(sorted(comp))
        remaining -= comp
    comps.sort(key=min)

    out = []
    for comp in comps:
        r = len(comp)
        if r == 1:
            out.append((CartanType("A", 1), (comp[0],)))
            continue
        found = None
        for cand in _candidate_types(r):
            std = _standard_cartan(cand)
            for perm in permutations(comp):
                ok = True
                for a in range(r):
                    row = cartan[perm[a]]
                    srow = std[a]
                    for b in range(r):
                        if row[perm[b]] != srow[b]:
                            ok = False
                            break
                    if not ok:
                        break
                if ok:
                    found = (cand, perm)
                    break
            if found:
                break
        if found is None:
            raise ConsistencyError(f"sub-diagram on {comp} matches no standard type")
        out.append(found)
    return tuple(out)


@lru_cache(maxsize=None)
def weyl_order(ct: CartanType) -> int:
    """|W|, computed recursively as orbit size of omega_1 times stabiliser order.

    The orbit is enumerated exactly; the stabiliser of omega_1 is the parabolic
    subgroup on the remaining nodes, handled by recursion on its components.
    """
    rs = build_root_system(ct)
    e1 = tuple(1 if k == 0 else 0 for k in range(rs.rank))
    total = len(weyl_orbit(rs, e1))
    if rs.rank > 1:
        for sub_ct, _nodes in identify_components(rs.cartan, tuple(range(1, rs.rank))):
            total *= weyl_order(sub_ct)
    return total


def orbit_size(rs: RootSystem, dominant_weight) -> int:
    """|W . mu| for dominant mu, via the stabiliser parabolic; no enumeration."""
    if not rs.is_dominant(dominant_weight):
        raise PreconditionError("orbit_size expects a dominant weight")
    stab_nodes = tuple(i for i, x in enumerate(dominant_weight) if x == 0)
    denom = 1
    if stab_nodes:
        for sub_ct, _nodes in identify_components(rs.cartan, stab_nodes):
            denom *= weyl_order(sub_ct)
    order = weyl_order(rs.cartan_type)
    q, r = divmod(order, denom)
    if r:
        raise ConsistencyError("stabiliser order does not divide group order")
    return q
