"""Contact grading of a simple Lie algebra and the derived database entries.

The grading is the 5-part decomposition induced by the highest root: the
grading element is the coroot of the highest root, and the degree of any root
is its pairing against that coroot.  Everything downstream (parabolic cosets,
restriction of weights, branching) consumes the data assembled here.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product as iter_product

from .errors import ConsistencyError, PreconditionError
from .rootsys import (
    CartanType,
    RootSystem,
    build_root_system,
    identify_components,
    longest_involution,
    sum_positive_coroots,
    weyl_dim,
)


@dataclass(frozen=True)
class ContactGrading:
    cartan_type: CartanType
    gamma: tuple[int, ...]            # highest root, fundamental coordinates
    grading_coroot: tuple[int, ...]   # coroot of gamma over simple coroots
    roots_by_degree: dict             # degree in {-2,...,2} -> frozenset of root coords
    delta0: tuple[int, ...]           # 0-based nodes orthogonal to gamma
    torus_rank: int
    n: int                            # half-dimension of the degree -1 part


class SemisimplePart:
    """The semisimple factor of the degree-0 part, split into simple pieces.

    Each component is relabelled into its own Bourbaki order (canonically, see
    ``identify_components``); weights of the product are concatenated tuples of
    per-factor fundamental coordinates.
    """

    def __init__(self, parent: RootSystem, delta0: tuple[int, ...]):
        comps = identify_components(parent.cartan, tuple(delta0))
        self.factor_types = tuple(ct for ct, _nodes in comps)
        self.factors = tuple(build_root_system(ct) for ct, _nodes in comps)
        self.parent_nodes = tuple(nodes for _ct, nodes in comps)
        self.rank = sum(f.rank for f in self.factors)
        offs = []
        pos = 0
        for f in self.factors:
            offs.append(pos)
            pos += f.rank
        self.offsets = tuple(offs)

    def __repr__(self):
        return "SemisimplePart(%s)" % "+".join(str(t) for t in self.factor_types)

    def restrict(self, weight) -> tuple[int, ...]:
        """Restriction of a parent weight: coordinates at delta0 nodes, relabelled."""
        out = []
        for nodes in self.parent_nodes:
            out.extend(weight[p] for p in nodes)
        return tuple(out)

    def split(self, weight):
        return tuple(
            tuple(weight[o : o + f.rank])
            for o, f in zip(self.offsets, self.factors)
        )

    def is_dominant(self, weight) -> bool:
        return all(x >= 0 for x in weight)

    def dominant_rep(self, weight) -> tuple[int, ...]:
        out = []
        for part, f in zip(self.split(weight), self.factors):
            out.extend(f.dominant_rep(part))
        return tuple(out)

    def weyl_dim(self, weight) -> int:
        total = 1
        for part, f in zip(self.split(weight), self.factors):
            total *= weyl_dim(f, part)
        return total

    def cartan_block(self):
        """Block-diagonal Cartan matrix of the product, in relabelled order."""
        m = [[0] * self.rank for _ in range(self.rank)]
        for o, f in zip(self.offsets, self.factors):
            for i in range(f.rank):
                for j in range(f.rank):
                    m[o + i][o + j] = f.cartan[i][j]
        return tuple(tuple(row) for row in m)

    def signed_dotted_zero(self):
        """All pairs (w . 0, sign(w)) over the product Weyl group.

        Enumerated factor-wise as the orbit of rho with BFS-depth parity; the
        orbit of a regular weight is a torsor for the Weyl group.
        """
        per_factor = []
        for f in self.factors:
            seen = {f.rho: 1}
            frontier = [f.rho]
            sign = 1
            while frontier:
                sign = -sign
                nxt = []
                for mu in frontier:
                    for i in range(f.rank):
                        if mu[i] != 0:
                            nu = f.reflect(mu, i)
                            if nu not in seen:
                                seen[nu] = sign
                                nxt.append(nu)
                frontier = nxt
            per_factor.append(
                [
                    (tuple(x - 1 for x in mu), s)
                    for mu, s in sorted(seen.items())
                ]
            )
        out = []
        for combo in iter_product(*per_factor):
            w0 = tuple(x for part, _s in combo for x in part)
            s = 1
            for _part, si in combo:
                s *= si
            out.append((w0, s))
        return out


@dataclass(frozen=True)
class DatabaseEntry:
    """Derived data of the degree-0 part in parent coordinates.

    ``minus_w_circ`` and ``h_circ`` are full parent-rank objects: the
    permutation fixes the crossed node and ``h_circ`` vanishes there.
    """

    cartan_type: CartanType
    cartan_matrix_g0ss: tuple
    a_node: int                      # 0-based crossed node
    minus_w_circ: tuple[int, ...]    # 0-based permutation of parent nodes
    h_circ: tuple[int, ...]          # parent-coordinate coroot-sum vector
    n: int
    g0ss: SemisimplePart


@lru_cache(maxsize=None)
def contact_grading(ct: CartanType) -> ContactGrading:
    if ct == CartanType("A", 1):
        raise PreconditionError("A1 has no adjoint contact variety")
    rs = build_root_system(ct)
    gamma_c = rs.highest_root
    gamma_f = rs.highest_root_fund
    n2 = rs.root_norm2((gamma_c, gamma_f))
    coroot = []
    for j in range(rs.rank):
        num = 2 * gamma_c[j] * rs.sym[j]
        if num % n2:
            raise ConsistencyError("grading coroot is not integral")
        coroot.append(num // n2)
    coroot = tuple(coroot)

    by_deg = {d: set() for d in (-2, -1, 0, 1, 2)}
    for c, f in rs.pos_roots:
        deg = sum(cv * fv for cv, fv in zip(coroot, f))
        if deg not in (0, 1, 2):
            raise ConsistencyError(f"unexpected root degree {deg}")
        by_deg[deg].add(c)
        by_deg[-deg].add(tuple(-x for x in c))
    if by_deg[2] != {gamma_c}:
        raise ConsistencyError("degree-2 part is not spanned by the highest root")
    if len(by_deg[1]) % 2:
        raise ConsistencyError("odd number of degree-1 roots")

    delta0 = tuple(
        j
        for j in range(rs.rank)
        if sum(coroot[k] * rs.cartan[k][j] for k in range(rs.rank)) == 0
    )
    n = len(by_deg[1]) // 2
    grading = ContactGrading(
        cartan_type=ct,
        gamma=gamma_f,
        grading_coroot=coroot,
        roots_by_degree={d: frozenset(v) for d, v in by_deg.items()},
        delta0=delta0,
        torus_rank=rs.rank - len(delta0),
        n=n,
    )
    # dimension bookkeeping: the graded pieces and the Cartan fill the algebra
    total = sum(len(v) for v in grading.roots_by_degree.values()) + rs.rank
    if total != 2 * len(rs.pos_roots) + rs.rank:
        raise ConsistencyError("graded dimensions do not sum to dim g")
    return grading


@lru_cache(maxsize=None)
def semisimple_part(ct: CartanType) -> SemisimplePart:
    g = contact_grading(ct)
    return SemisimplePart(build_root_system(ct), g.delta0)


def crossed_nodes(g: ContactGrading) -> tuple[int, ...]:
    return tuple(j for j in range(len(g.gamma)) if j not in g.delta0)


def g_minus1_highest_weights(g: ContactGrading) -> list[tuple[int, ...]]:
    """Highest weights (over the semisimple degree-0 part) of the -1 piece.

    One irreducible summand per crossed node; its highest weight is the
    restriction of minus the corresponding simple root.
    """
    rs = build_root_system(g.cartan_type)
    part = semisimple_part(g.cartan_type)
    out = []
    for b in crossed_nodes(g):
        neg = tuple(-rs.cartan[k][b] for k in range(rs.rank))
        w = part.restrict(neg)
        if not part.is_dominant(w):
            raise ConsistencyError("summand weight is not dominant")
        out.append(w)
    total = sum(part.weyl_dim(w) for w in out)
    if total != 2 * g.n:
        raise ConsistencyError("degree -1 summand dimensions do not sum to 2n")
    return out


@lru_cache(maxsize=None)
def database_entry(ct: CartanType) -> DatabaseEntry:
    if ct.family == "A":
        raise PreconditionError(
            "type A carries a rank-2 torus; the bigraded case is handled separately"
        )
    if ct.family == "C":
        raise PreconditionError(
            "type C is excluded: its group acts transitively off the quadric locus"
        )
    g = contact_grading(ct)
    part = semisimple_part(ct)
    (a_node,) = crossed_nodes(g)

    rank = ct.rank
    perm = list(range(rank))
    h = [0] * rank
    for f_ct, nodes in zip(part.factor_types, part.parent_nodes):
        sigma = longest_involution(f_ct)
        coroots = sum_positive_coroots(f_ct)
        for k, p in enumerate(nodes):
            perm[p] = nodes[sigma[k]]
            h[p] = coroots[k]
    if h[a_node] != 0 or perm[a_node] != a_node:
        raise ConsistencyError("crossed node not fixed by the database data")
    return DatabaseEntry(
        cartan_type=ct,
        cartan_matrix_g0ss=part.cartan_block(),
        a_node=a_node,
        minus_w_circ=tuple(perm),
        h_circ=tuple(h),
        n=g.n,
        g0ss=part,
    )


def type_A_torus_characters(n: int):
    """Characters of the rank-2 grading torus on the two halves of the -1 piece."""
    if n < 1:
        raise PreconditionError("need n >= 1")
    return (1, -1), (-1, n + 1)
