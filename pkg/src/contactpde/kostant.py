"""Graded parabolic coset sets and the decomposition of the Pluecker spaces.

The coset set is generated as the Weyl orbit of the highest root, walked
breadth-first downward; an orbit element mu at depth k corresponds to the
unique minimal-length representative w with w^{-1}(gamma) = mu and l(w) = k.
Each representative is certified on the way out: its w(rho) must be dominant
for the degree-0 subalgebra, and a greedy peel back to rho must terminate in
exactly k reflections (that peel is also the lexicographically least reduced
word, so the output order is stable).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb

from .contact import contact_grading, semisimple_part
from .errors import ConsistencyError, PreconditionError
from .rootsys import CartanType, WeylElement, build_root_system


@dataclass(frozen=True)
class ParabolicCoset:
    word: WeylElement
    length: int
    weight: tuple[int, ...]              # w . 0, full fundamental coordinates
    restricted_weight: tuple[int, ...]   # restriction to the semisimple degree-0 part


def _lex_least_word(rs, target):
    """Peel target back to rho, always reflecting at the least negative node.

    Returns the reduced word read off the peel; picking the smallest descent
    first yields the lexicographically least reduced word of the element.
    """
    word = []
    nu = target
    while nu != rs.rho:
        for j in range(rs.rank):
            if nu[j] < 0:
                word.append(j)
                nu = rs.reflect(nu, j)
                break
        else:
            raise ConsistencyError("peel stalled before reaching rho")
        if len(word) > len(rs.pos_roots):
            raise ConsistencyError("peel exceeded the longest element")
    return tuple(word)


@lru_cache(maxsize=None)
def _generate_all(ct: CartanType):
    grading = contact_grading(ct)
    part = semisimple_part(ct)
    rs = build_root_system(ct)
    gamma = rs.highest_root_fund

    # depth-graded breadth-first walk down the orbit of gamma
    level = {gamma: ()}
    seen = {gamma}
    by_length: dict[int, list[ParabolicCoset]] = {}
    depth = 0
    seen_wrho = set()
    while level:
        cosets = []
        for mu, u_word in level.items():
            w_word = tuple(reversed(u_word))
            wrho = rs.apply_word(w_word, rs.rho)
            if any(wrho[j] <= 0 for j in grading.delta0):
                raise ConsistencyError("coset representative is not minimal")
            if wrho in seen_wrho:
                raise ConsistencyError("duplicate w(rho) across cosets")
            seen_wrho.add(wrho)
            canon = _lex_least_word(rs, wrho)
            if len(canon) != depth:
                raise ConsistencyError("peel length disagrees with orbit depth")
            weight = tuple(a - b for a, b in zip(wrho, rs.rho))
            restricted = part.restrict(weight)
            if not part.is_dominant(restricted):
                raise ConsistencyError("restricted weight is not dominant")
            cosets.append(
                ParabolicCoset(
                    word=WeylElement(canon),
                    length=depth,
                    weight=weight,
                    restricted_weight=restricted,
                )
            )
        cosets.sort(key=lambda c: c.word.word)
        by_length[depth] = cosets

        nxt = {}
        for mu, u_word in level.items():
            for j in range(rs.rank):
                if mu[j] > 0:
                    nu = rs.reflect(mu, j)
                    if nu not in seen:
                        seen.add(nu)
                        nxt[nu] = (j,) + u_word
        level = nxt
        depth += 1

    total = sum(len(v) for v in by_length.values())
    if total != len(seen):
        raise ConsistencyError("coset count does not match the orbit size")
    return by_length


def generate_wp(ct: CartanType, max_length: int | None = None):
    """All minimal parabolic coset representatives, grouped by length."""
    full = _generate_all(ct)
    if max_length is None:
        return {k: list(v) for k, v in full.items()}
    if max_length < 0:
        raise PreconditionError("max_length must be nonnegative")
    return {k: list(v) for k, v in full.items() if k <= max_length}


def kostant_decomposition(ct: CartanType, i: int):
    """The degree-i coset set, one coset per simple summand of the i-th
    primitive wedge power of the degree -1 part."""
    n = contact_grading(ct).n
    if not 1 <= i <= n:
        raise PreconditionError(f"degree must satisfy 1 <= i <= n = {n}")
    return list(_generate_all(ct).get(i, ()))


def decomposition_dimensions(ct: CartanType, i: int) -> list[int]:
    part = semisimple_part(ct)
    return [part.weyl_dim(c.restricted_weight) for c in kostant_decomposition(ct, i)]


def primitive_wedge_dim(n: int, i: int) -> int:
    """Dimension of the i-th primitive piece of the wedge powers of a
    2n-dimensional symplectic space."""
    lower = comb(2 * n, i - 2) if i >= 2 else 0
    return comb(2 * n, i) - lower
