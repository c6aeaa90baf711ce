"""Brute-force branching: formal characters, pushforward, invariant counts.

The degree-d graded piece of the invariant ring is computed as the dimension
of the invariants of the semisimple degree-0 subalgebra inside the symplectic
module with highest weight d times the last fundamental weight.  The chain is

    Freudenthal character  ->  pushforward along the branching matrix
                           ->  trivial multiplicity by signed point evaluation.

Characters are stored orbit-folded (dominant keys only); orbits are expanded
lazily inside the pushforward kernels.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from pathlib import Path

from ._kernels import push_character
from .contact import SemisimplePart, contact_grading, semisimple_part
from .errors import ConsistencyError, PreconditionError
from .kostant import generate_wp
from .rootsys import (
    CartanType,
    RootSystem,
    build_root_system,
    orbit_size,
    weyl_dim,
    weyl_orbit,
)


@dataclass
class FormalCharacter:
    rank: int
    entries: dict  # dominant weight tuple -> multiplicity > 0

    def multiplicity(self, rs: RootSystem, weight) -> int:
        return self.entries.get(rs.dominant_rep(tuple(weight)), 0)


@dataclass(frozen=True)
class BranchingMatrix:
    cartan_type: CartanType
    matrix: tuple            # rank(g0ss) x n, column i = restricted w_i . 0
    n: int                   # column count, kept explicit for rank-0 targets
    provenance: str          # "derived" | "stored-fixture"

    def e_basis(self):
        """Rows = images of the standard-basis directions e_1..e_n."""
        rows = []
        r0 = len(self.matrix)
        for i in range(self.n):
            rows.append(
                tuple(
                    self.matrix[j][i] - (self.matrix[j][i - 1] if i else 0)
                    for j in range(r0)
                )
            )
        return tuple(rows)


# ------------------------------------------------------------ linear data --

_INV_CARTAN: dict = {}


def _inv_cartan(rs: RootSystem):
    key = rs.cartan_type
    got = _INV_CARTAN.get(key)
    if got is not None:
        return got
    r = rs.rank
    aug = [
        [Fraction(rs.cartan[i][j]) for j in range(r)]
        + [Fraction(int(i == j)) for j in range(r)]
        for i in range(r)
    ]
    for col in range(r):
        piv = next(i for i in range(col, r) if aug[i][col] != 0)
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for i in range(r):
            if i != col and aug[i][col] != 0:
                f = aug[i][col]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[col])]
    out = tuple(tuple(row[r:]) for row in aug)
    _INV_CARTAN[key] = out
    return out


def _root_coords(rs: RootSystem, fund):
    inv = _inv_cartan(rs)
    return tuple(
        sum(inv[j][k] * fund[k] for k in range(rs.rank)) for j in range(rs.rank)
    )


def _int_root_coords(rs: RootSystem, fund):
    out = []
    for x in _root_coords(rs, fund):
        if x.denominator != 1:
            raise ConsistencyError("weight difference is not in the root lattice")
        out.append(int(x))
    return tuple(out)


def _inner(rs: RootSystem, fund_x, root_y):
    """Invariant form (x, y), y given in integer root coordinates."""
    return sum(c * s * f for c, s, f in zip(root_y, rs.sym, fund_x))


# ------------------------------------------------------------- freudenthal --

def _dominant_weights_below(rs: RootSystem, lam):
    """Dominant weights reachable from lam by subtracting positive roots while
    staying dominant.  Complete for the symplectic family; for any type the
    caller's dimension sum rule certifies completeness."""
    seen = {lam}
    frontier = [lam]
    while frontier:
        nxt = []
        for mu in frontier:
            for _c, f in rs.pos_roots:
                nu = tuple(a - b for a, b in zip(mu, f))
                if nu not in seen and all(x >= 0 for x in nu):
                    seen.add(nu)
                    nxt.append(nu)
        frontier = nxt
    return seen


def freudenthal_character(rs: RootSystem, lam) -> FormalCharacter:
    lam = tuple(lam)
    if len(lam) != rs.rank or any(x < 0 for x in lam):
        raise PreconditionError("highest weight must be dominant")
    doms = _dominant_weights_below(rs, lam)
    heights = {mu: sum(_int_root_coords(rs, tuple(a - b for a, b in zip(lam, mu)))) for mu in doms}
    order = sorted(doms, key=lambda mu: (heights[mu], mu))

    two_rho = tuple(2 * x for x in rs.rho)
    mults: dict = {}
    fold_cache: dict = {}

    def fold(w):
        got = fold_cache.get(w)
        if got is None:
            got = rs.dominant_rep(w)
            fold_cache[w] = got
        return got

    for mu in order:
        if mu == lam:
            mults[mu] = 1
            continue
        diff = _int_root_coords(rs, tuple(a - b for a, b in zip(lam, mu)))
        acc = 0
        for c_alpha, f_alpha in rs.pos_roots:
            k = 1
            while True:
                nu = tuple(a + k * b for a, b in zip(mu, f_alpha))
                lam_minus_nu = tuple(a - k * b for a, b in zip(diff, c_alpha))
                lam_plus_nu = tuple(a + b for a, b in zip(lam, nu))
                if _inner(rs, lam_plus_nu, lam_minus_nu) < 0:
                    break
                m = mults.get(fold(nu), 0)
                if m:
                    acc += m * _inner(rs, nu, c_alpha)
                k += 1
        denom = _inner(
            rs,
            tuple(a + b + c for a, b, c in zip(lam, mu, two_rho)),
            diff,
        )
        if denom <= 0:
            raise ConsistencyError("nonpositive Freudenthal denominator")
        num = 2 * acc
        if num % denom:
            raise ConsistencyError("Freudenthal division is not exact")
        m = num // denom
        if m > 0:
            mults[mu] = m

    total = sum(m * orbit_size(rs, mu) for mu, m in mults.items())
    expected = weyl_dim(rs, lam)
    if total != expected:
        raise ConsistencyError(
            f"character mass {total} does not match dim {expected}; "
            "dominant-weight enumeration incomplete"
        )
    return FormalCharacter(rank=rs.rank, entries=mults)


def character_dimension(rs: RootSystem, chi: FormalCharacter) -> int:
    return sum(m * orbit_size(rs, mu) for mu, m in chi.entries.items())


# ------------------------------------------------------- character algebra --

def _expand_full(rs: RootSystem, chi: FormalCharacter) -> dict:
    out: dict = {}
    for mu, m in chi.entries.items():
        for w in weyl_orbit(rs, mu):
            out[w] = out.get(w, 0) + m
    return out


def _fold_full(rs: RootSystem, full: dict) -> FormalCharacter:
    entries = {}
    for w, m in full.items():
        if m < 0:
            raise ConsistencyError("negative multiplicity while folding")
        if m and all(x >= 0 for x in w):
            entries[w] = m
    return FormalCharacter(rank=rs.rank, entries=entries)


def character_product(rs: RootSystem, a: FormalCharacter, b: FormalCharacter) -> FormalCharacter:
    fa = _expand_full(rs, a)
    fb = _expand_full(rs, b)
    if len(fb) < len(fa):
        fa, fb = fb, fa
    out: dict = {}
    for wa, ma in fa.items():
        for wb, mb in fb.items():
            key = tuple(x + y for x, y in zip(wa, wb))
            out[key] = out.get(key, 0) + ma * mb
    if sum(out.values()) != sum(fa.values()) * sum(fb.values()):
        raise ConsistencyError("character product lost mass")
    return _fold_full(rs, out)


def character_symmetric_square(rs: RootSystem, chi: FormalCharacter) -> FormalCharacter:
    full = _expand_full(rs, chi)
    out: dict = {}
    for wa, ma in full.items():
        for wb, mb in full.items():
            key = tuple(x + y for x, y in zip(wa, wb))
            out[key] = out.get(key, 0) + ma * mb
    for w, m in full.items():
        key = tuple(2 * x for x in w)
        out[key] = out.get(key, 0) + m
    for key in list(out):
        v = out[key]
        if v % 2:
            raise ConsistencyError("symmetric square parity failure")
        out[key] = v // 2
    return _fold_full(rs, out)


def decompose_character(rs: RootSystem, chi: FormalCharacter) -> dict:
    """Write a genuine character as a sum of irreducibles by repeated
    subtraction at a maximal dominant weight."""
    cur = dict(chi.entries)
    heights = {}

    def height(mu):
        got = heights.get(mu)
        if got is None:
            got = sum(_root_coords(rs, mu))
            heights[mu] = got
        return got

    out: dict = {}
    while cur:
        top = max(cur, key=lambda mu: (height(mu), mu))
        mult = cur[top]
        if mult <= 0:
            raise ConsistencyError("non-character input to decomposition")
        out[top] = out.get(top, 0) + mult
        piece = freudenthal_character(rs, top)
        for mu, m in piece.entries.items():
            v = cur.get(mu, 0) - mult * m
            if v < 0:
                raise ConsistencyError("non-character input to decomposition")
            if v:
                cur[mu] = v
            else:
                cur.pop(mu, None)
    return out


def part_character(part: SemisimplePart, hw) -> FormalCharacter:
    """Folded character of the irreducible product-module with highest weight hw."""
    hw = tuple(hw)
    pieces = [
        freudenthal_character(f, w) for f, w in zip(part.factors, part.split(hw))
    ]
    entries = {(): 1}
    for piece in pieces:
        nxt = {}
        for key, m in entries.items():
            for mu, mm in piece.entries.items():
                nxt[key + mu] = m * mm
        entries = nxt
    chi = FormalCharacter(rank=part.rank, entries=entries)
    total = 0
    for mu, m in chi.entries.items():
        o = 1
        for f, w in zip(part.factors, part.split(mu)):
            o *= orbit_size(f, w)
        total += m * o
    if total != part.weyl_dim(hw):
        raise ConsistencyError("product character mass mismatch")
    return chi


def decompose_on_part(part: SemisimplePart, chi: FormalCharacter) -> dict:
    cur = dict(chi.entries)
    inv = [_inv_cartan(f) for f in part.factors]

    def height(mu):
        t = Fraction(0)
        for f, w, iv in zip(part.factors, part.split(mu), inv):
            for j in range(f.rank):
                t += sum(iv[j][k] * w[k] for k in range(f.rank))
        return t

    out: dict = {}
    while cur:
        top = max(cur, key=lambda mu: (height(mu), mu))
        mult = cur[top]
        if mult <= 0:
            raise ConsistencyError("non-character input to decomposition")
        out[top] = out.get(top, 0) + mult
        piece = part_character(part, top)
        for mu, m in piece.entries.items():
            v = cur.get(mu, 0) - mult * m
            if v < 0:
                raise ConsistencyError("non-character input to decomposition")
            if v:
                cur[mu] = v
            else:
                cur.pop(mu, None)
    return out


# -------------------------------------------------------- branching matrix --

def symplectic_type(n: int) -> CartanType:
    if n < 1:
        raise PreconditionError("need n >= 1")
    return CartanType("A", 1) if n == 1 else CartanType("C", n)


def eta_coords(fund) -> tuple:
    """Standard-basis coordinates: eta_i = sum of fundamental coords i..n."""
    out = []
    acc = 0
    for x in reversed(fund):
        acc += x
        out.append(acc)
    return tuple(reversed(out))


def g_minus1_weight_multiset(ct: CartanType) -> dict:
    g = contact_grading(ct)
    rs = build_root_system(ct)
    part = semisimple_part(ct)
    out: dict = {}
    for c in g.roots_by_degree[-1]:
        f = tuple(
            sum(rs.cartan[k][j] * c[j] for j in range(rs.rank)) for k in range(rs.rank)
        )
        w = part.restrict(f)
        out[w] = out.get(w, 0) + 1
    return out


def _consume_pair(remaining: dict, diff) -> bool:
    neg = tuple(-x for x in diff)
    if diff == neg:
        if remaining.get(diff, 0) < 2:
            return False
        remaining[diff] -= 2
    else:
        if remaining.get(diff, 0) < 1 or remaining.get(neg, 0) < 1:
            return False
        remaining[diff] -= 1
        remaining[neg] -= 1
    for k in (diff, neg):
        if remaining.get(k) == 0:
            del remaining[k]
    return True


def validate_branching_columns(ct: CartanType, columns) -> bool:
    remaining = dict(g_minus1_weight_multiset(ct))
    prev = tuple([0] * len(columns[0])) if columns else ()
    for col in columns:
        diff = tuple(a - b for a, b in zip(col, prev))
        if not _consume_pair(remaining, diff):
            return False
        prev = col
    return not remaining


@lru_cache(maxsize=None)
def build_branching_matrix(ct: CartanType) -> BranchingMatrix:
    g = contact_grading(ct)
    part = semisimple_part(ct)
    n = g.n
    wp = generate_wp(ct, n)
    for i in range(1, n + 1):
        if not wp.get(i):
            raise PreconditionError(f"no parabolic coset of length {i}")

    target = g_minus1_weight_multiset(ct)
    chosen: list = []
    deepest = {"i": 1, "tried": []}

    def dfs(i, prev, remaining):
        if i > n:
            return not remaining
        tried = []
        for coset in wp[i]:
            col = coset.restricted_weight
            tried.append(col)
            diff = tuple(a - b for a, b in zip(col, prev))
            rem2 = dict(remaining)
            if not _consume_pair(rem2, diff):
                continue
            chosen.append(coset)
            if dfs(i + 1, col, rem2):
                return True
            chosen.pop()
        if i >= deepest["i"]:
            deepest["i"] = i
            deepest["tried"] = tried
        return False

    zero = tuple([0] * part.rank)
    if not dfs(1, zero, dict(target)):
        raise ConsistencyError(
            "branching-matrix validation failed at column %d; candidates tried: %s"
            % (deepest["i"], deepest["tried"])
        )
    matrix = tuple(
        tuple(chosen[i].restricted_weight[j] for i in range(n))
        for j in range(part.rank)
    )
    return BranchingMatrix(cartan_type=ct, matrix=matrix, n=n, provenance="derived")


# Stored restriction matrix for the F4 case (rows: C3 coordinates).
F4_RHO_FIXTURE = (
    (0, 0, 1, 3, 5, 4, 4),
    (0, 2, 2, 0, 0, 1, 0),
    (1, 0, 0, 1, 0, 0, 1),
)


def fixture_branching_matrix(ct: CartanType) -> BranchingMatrix:
    if ct != CartanType("F", 4):
        raise PreconditionError("only the F4 matrix is available as a fixture")
    columns = [tuple(row[i] for row in F4_RHO_FIXTURE) for i in range(7)]
    if not validate_branching_columns(ct, columns):
        raise ConsistencyError("fixture matrix fails the weight-multiset validation")
    return BranchingMatrix(
        cartan_type=ct, matrix=F4_RHO_FIXTURE, n=7, provenance="stored-fixture"
    )


# ------------------------------------------------------------- pushforward --

def pushforward(
    chi: FormalCharacter,
    bm: BranchingMatrix,
    *,
    targets=None,
    workers: int = 1,
):
    if chi.rank != bm.n:
        raise PreconditionError("character rank does not match the branching matrix")
    part = semisimple_part(bm.cartan_type)
    eta_rows = [eta_coords(mu) for mu in chi.entries]
    mults = list(chi.entries.values())
    B = bm.e_basis()
    if targets is not None:
        return push_character(eta_rows, mults, B, targets=targets, workers=workers)
    raw = push_character(eta_rows, mults, B, workers=workers)
    entries = {}
    for t, v in raw.items():
        d = part.dominant_rep(t)
        if raw.get(d, 0) != v:
            raise ConsistencyError("pushforward is not Weyl-invariant")
        if t == d:
            entries[t] = v
    return FormalCharacter(rank=part.rank, entries=entries)


def trivial_multiplicity(chi: FormalCharacter, part: SemisimplePart) -> int:
    if chi.rank != part.rank:
        raise PreconditionError("rank mismatch")
    c0 = 0
    for w0, s in part.signed_dotted_zero():
        c0 += s * chi.entries.get(part.dominant_rep(w0), 0)
    if c0 < 0:
        raise ConsistencyError("negative invariant count: input was not a character")
    return c0


@lru_cache(maxsize=None)
def _cached_symplectic_character(sp_ct: CartanType, lam):
    return freudenthal_character(build_root_system(sp_ct), lam)


def ring_dimension(ct: CartanType, d: int, *, workers: int = 1, cache_dir=None) -> int:
    """Dimension of the degree-d piece of the invariant ring."""
    if d < 1:
        raise PreconditionError("degree must be at least 1")
    if ct.family == "C":
        raise PreconditionError(
            "type C is excluded: its group acts transitively off the quadric locus"
        )
    g = contact_grading(ct)
    part = semisimple_part(ct)
    n = g.n
    sp_ct = symplectic_type(n)
    lam = tuple([0] * (n - 1)) + (d,)
    if cache_dir is not None:
        chi = cached_character(sp_ct, lam, cache_dir)
    else:
        chi = _cached_symplectic_character(sp_ct, lam)
    bm = build_branching_matrix(ct)
    points = part.signed_dotted_zero()
    masses = pushforward(chi, bm, targets=[w for w, _s in points], workers=workers)
    c0 = 0
    for (w0, s), mass in zip(points, masses):
        c0 += s * mass
    if c0 < 0:
        raise ConsistencyError("negative invariant count: upstream character is broken")
    return c0


# ------------------------------------------------------------------ cache --

_CACHE_MAGIC = b"CPDCHAR"
_CACHE_VERSION = 1


def save_character(chi: FormalCharacter, path) -> bytes:
    blob = bytearray()
    blob += _CACHE_MAGIC
    blob += struct.pack("<BBQ", _CACHE_VERSION, chi.rank, len(chi.entries))
    for key in sorted(chi.entries):
        blob += struct.pack(f"<{chi.rank}i", *key)
        m = chi.entries[key]
        mb = m.to_bytes((m.bit_length() + 7) // 8 or 1, "big")
        blob += struct.pack("<B", len(mb))
        blob += mb
    data = bytes(blob)
    Path(path).write_bytes(data)
    return data


def load_character(path) -> FormalCharacter:
    data = Path(path).read_bytes()
    if data[: len(_CACHE_MAGIC)] != _CACHE_MAGIC:
        raise PreconditionError(f"{path} is not a character cache file")
    off = len(_CACHE_MAGIC)
    version, rank, count = struct.unpack_from("<BBQ", data, off)
    if version != _CACHE_VERSION:
        raise PreconditionError(f"unsupported cache version {version}")
    off += struct.calcsize("<BBQ")
    entries = {}
    for _ in range(count):
        key = struct.unpack_from(f"<{rank}i", data, off)
        off += 4 * rank
        (ln,) = struct.unpack_from("<B", data, off)
        off += 1
        m = int.from_bytes(data[off : off + ln], "big")
        off += ln
        entries[tuple(key)] = m
    if off != len(data):
        raise PreconditionError("trailing bytes in character cache file")
    return FormalCharacter(rank=rank, entries=entries)


def character_cache_path(cache_dir, sp_ct: CartanType, lam) -> Path:
    name = f"{sp_ct}_{'-'.join(str(x) for x in lam)}.chr"
    return Path(cache_dir) / name


def cached_character(sp_ct: CartanType, lam, cache_dir) -> FormalCharacter:
    lam = tuple(lam)
    path = character_cache_path(cache_dir, sp_ct, lam)
    if path.exists():
        chi = load_character(path)
        if chi.rank != sp_ct.rank:
            raise ConsistencyError(f"cache file {path} has wrong rank")
        return chi
    chi = _cached_symplectic_character(sp_ct, lam)
    path.parent.mkdir(parents=True, exist_ok=True)
    save_character(chi, path)
    return chi
