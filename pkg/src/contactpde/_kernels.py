"""Exact signed-permutation pushforward kernels.

A character of the symplectic algebra is stored orbit-folded: one row of
nonnegative, weakly decreasing integers per dominant weight.  Pushing it
through an integer matrix B (rows indexed by the standard-basis directions)
means expanding every orbit under signed permutations and accumulating the
multiplicity at each image point.  All arithmetic is int64 and exact; the
driver refuses inputs whose total mass or packed image keys could overflow.

Two interchangeable backends:

* ``numba``: jitted loops that walk the distinct signed permutations
  directly (lexicographic next-permutation plus sign masks over the
  nonzero entries).  Default when numba imports.
* ``numpy``: vectorised enumeration of all n! * 2^n signed permutations
  with duplicates, followed by an exact division by the per-row redundancy
  factor.  Selected with CONTACTPDE_BACKEND=numpy.

Both must agree bit-for-bit; the benchmark under benchmarks/ compares them.
"""

from __future__ import annotations

import os
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from itertools import permutations, product as iter_product
from math import factorial

import numpy as np

from .errors import ConsistencyError, PreconditionError

_INT_LIMIT = 1 << 62


def backend_name() -> str:
    env = os.environ.get("CONTACTPDE_BACKEND", "").strip().lower()
    if env not in ("", "numba", "numpy"):
        raise PreconditionError(
            f"CONTACTPDE_BACKEND must be 'numba' or 'numpy', got {env!r}"
        )
    if env == "numpy":
        return "numpy"
    try:
        import numba  # noqa: F401
    except ImportError:
        if env == "numba":
            raise PreconditionError("CONTACTPDE_BACKEND=numba but numba is not importable")
        return "numpy"
    return "numba"


def orbit_mass(eta_rows, mults):
    """Total signed-permutation-expanded mass, exact."""
    total = 0
    for eta, m in zip(eta_rows, mults):
        counts = Counter(eta)
        size = factorial(len(eta)) * 2 ** sum(v for k, v in counts.items() if k != 0)
        for c in counts.values():
            size //= factorial(c)
        total += m * size
    return total


def _pack_params(eta_rows, bmat):
    n = len(bmat)
    r = len(bmat[0]) if n else 0
    bound = 1
    for eta in eta_rows:
        for j in range(r):
            s = sum(eta[i] * abs(bmat[i][j]) for i in range(n))
            bound = max(bound, s)
    base = 2 * bound + 1
    if base ** max(r, 1) >= _INT_LIMIT:
        raise ConsistencyError("packed image keys would overflow int64")
    return bound, base


def _unpack(key, r, bound, base):
    coords = []
    for _ in range(r):
        key, rem = divmod(key, base)
        coords.append(rem - bound)
    return tuple(reversed(coords))


# ---------------------------------------------------------------- numba ----

_NUMBA_CACHE: dict = {}


def _numba_kernels():
    if _NUMBA_CACHE:
        return _NUMBA_CACHE
    import numba
    from numba import int64, njit
    from numba.typed import Dict

    @njit(cache=True)
    def push_full(etas, mults, B, bound, base):
        K, n = etas.shape
        r = B.shape[1]
        out = Dict.empty(int64, int64)
        a = np.empty(n, dtype=np.int64)
        img = np.empty(r, dtype=np.int64)
        for t in range(K):
            m = mults[t]
            for i in range(n):
                a[i] = etas[t, n - 1 - i]
            while True:
                nz = 0
                for i in range(n):
                    if a[i] != 0:
                        nz += 1
                for mask in range(1 << nz):
                    for j in range(r):
                        img[j] = 0
                    mm = mask
                    for i in range(n):
                        v = a[i]
                        if v != 0:
                            if mm & 1:
                                v = -v
                            mm >>= 1
                            for j in range(r):
                                img[j] += v * B[i, j]
                    key = 0
                    for j in range(r):
                        key = key * base + (img[j] + bound)
                    if key in out:
                        out[key] += m
                    else:
                        out[key] = m
                # lexicographic next distinct permutation
                i = n - 2
                while i >= 0 and a[i] >= a[i + 1]:
                    i -= 1
                if i < 0:
                    break
                j = n - 1
                while a[j] <= a[i]:
                    j -= 1
                a[i], a[j] = a[j], a[i]
                lo, hi = i + 1, n - 1
                while lo < hi:
                    a[lo], a[hi] = a[hi], a[lo]
                    lo += 1
                    hi -= 1
        keys = np.empty(len(out), dtype=np.int64)
        vals = np.empty(len(out), dtype=np.int64)
        p = 0
        for k, v in out.items():
            keys[p] = k
            vals[p] = v
            p += 1
        return keys, vals

    @njit(cache=True, nogil=True)
    def push_targets(etas, mults, B, tkeys, bound, base, masses):
        K, n = etas.shape
        r = B.shape[1]
        nt = tkeys.shape[0]
        a = np.empty(n, dtype=np.int64)
        img = np.empty(r, dtype=np.int64)
        for t in range(K):
            m = mults[t]
            for i in range(n):
                a[i] = etas[t, n - 1 - i]
            while True:
                nz = 0
                for i in range(n):
                    if a[i] != 0:
                        nz += 1
                for mask in range(1 << nz):
                    for j in range(r):
                        img[j] = 0
                    mm = mask
                    for i in range(n):
                        v = a[i]
                        if v != 0:
                            if mm & 1:
                                v = -v
                            mm >>= 1
                            for j in range(r):
                                img[j] += v * B[i, j]
                    key = 0
                    for j in range(r):
                        key = key * base + (img[j] + bound)
                    lo, hi = 0, nt - 1
                    while lo <= hi:
                        mid = (lo + hi) // 2
                        kv = tkeys[mid]
                        if kv == key:
                            masses[mid] += m
                            break
                        if kv < key:
                            lo = mid + 1
                        else:
                            hi = mid - 1
                i = n - 2
                while i >= 0 and a[i] >= a[i + 1]:
                    i -= 1
                if i < 0:
                    break
                j = n - 1
                while a[j] <= a[i]:
                    j -= 1
                a[i], a[j] = a[j], a[i]
                lo, hi = i + 1, n - 1
                while lo < hi:
                    a[lo], a[hi] = a[hi], a[lo]
                    lo += 1
                    hi -= 1

    _NUMBA_CACHE["full"] = push_full
    _NUMBA_CACHE["targets"] = push_targets
    return _NUMBA_CACHE


# ---------------------------------------------------------------- numpy ----

def _sign_matrix(n):
    if n == 0:
        return np.ones((1, 0), dtype=np.int64)
    return np.array(list(iter_product((1, -1), repeat=n)), dtype=np.int64)


def _redundancy(eta):
    counts = Counter(eta)
    red = 2 ** counts.get(0, 0)
    for c in counts.values():
        red *= factorial(c)
    return red


def _numpy_rows(eta, B):
    """All n! * 2^n signed-permutation images of eta (with duplicates)."""
    n = len(eta)
    P = np.array(list(permutations(eta)), dtype=np.int64)
    S = _sign_matrix(n)
    allrows = (P[:, None, :] * S[None, :, :]).reshape(-1, n)
    return allrows @ B


def _push_full_numpy(etas, mults, B, bound, base):
    r = B.shape[1]
    powers = base ** np.arange(r - 1, -1, -1, dtype=np.int64) if r else np.zeros(0, np.int64)
    acc: dict[int, int] = {}
    for eta, m in zip(etas, mults):
        imgs = _numpy_rows(eta, B)
        keys = (imgs + bound) @ powers if r else np.zeros(len(imgs), np.int64)
        uk, counts = np.unique(keys, return_counts=True)
        red = _redundancy(tuple(eta))
        if (counts % red).any():
            raise ConsistencyError("visit counts not divisible by the redundancy factor")
        counts //= red
        mi = int(m)
        for k, c in zip(uk.tolist(), counts.tolist()):
            acc[k] = acc.get(k, 0) + mi * c
    return acc


def _push_targets_numpy(etas, mults, B, tkeys, bound, base, masses):
    r = B.shape[1]
    powers = base ** np.arange(r - 1, -1, -1, dtype=np.int64) if r else np.zeros(0, np.int64)
    nt = len(tkeys)
    for eta, m in zip(etas, mults):
        imgs = _numpy_rows(eta, B)
        keys = (imgs + bound) @ powers if r else np.zeros(len(imgs), np.int64)
        pos = np.searchsorted(tkeys, keys)
        pos[pos >= nt] = nt - 1
        hit = tkeys[pos] == keys
        red = _redundancy(tuple(eta))
        counts = np.bincount(pos[hit], minlength=nt)
        if (counts % red).any():
            raise ConsistencyError("visit counts not divisible by the redundancy factor")
        masses += m * (counts // red)


# ---------------------------------------------------------------- driver ----

def _as_arrays(eta_rows, mults, bmat):
    etas = np.array([tuple(e) for e in eta_rows], dtype=np.int64)
    if etas.ndim != 2:
        etas = etas.reshape(len(eta_rows), -1)
    mv = np.array(mults, dtype=np.int64)
    B = np.array(bmat, dtype=np.int64)
    return etas, mv, B


def push_character(eta_rows, mults, bmat, *, targets=None, workers=1):
    """Push an orbit-folded character through the matrix ``bmat``.

    eta_rows: dominant weights in weakly decreasing nonnegative coordinates.
    Returns {image tuple: mass} in full mode, or a list of masses aligned
    with ``targets`` in targets mode.  Exact; overflow is refused up front.
    """
    if workers < 1:
        raise PreconditionError("workers must be >= 1")
    eta_rows = list(eta_rows)
    mults = list(mults)
    if not eta_rows:
        return {} if targets is None else [0] * len(targets or [])
    if any(m <= 0 for m in mults):
        raise PreconditionError("multiplicities must be positive")
    total = orbit_mass(eta_rows, mults)
    if total >= _INT_LIMIT:
        raise ConsistencyError("total expanded mass would overflow int64")
    bound, base = _pack_params(eta_rows, bmat)
    etas, mv, B = _as_arrays(eta_rows, mults, bmat)
    n, r = B.shape
    backend = backend_name()

    chunks = np.array_split(np.arange(len(eta_rows)), min(workers, len(eta_rows)))
    chunks = [c for c in chunks if len(c)]

    if targets is None:
        def run_full(idx):
            if backend == "numba":
                keys, vals = _numba_kernels()["full"](etas[idx], mv[idx], B, bound, base)
                return dict(zip(keys.tolist(), vals.tolist()))
            return _push_full_numpy(etas[idx], mv[idx], B, bound, base)

        if len(chunks) == 1:
            merged = run_full(chunks[0])
        else:
            with ThreadPoolExecutor(max_workers=len(chunks)) as ex:
                parts = list(ex.map(run_full, chunks))
            merged = {}
            for part in parts:
                for k, v in part.items():
                    merged[k] = merged.get(k, 0) + v
        if sum(merged.values()) != total:
            raise ConsistencyError("pushforward lost mass")
        return {_unpack(k, r, bound, base): v for k, v in sorted(merged.items())}

    tlist = [tuple(t) for t in targets]
    tkey_vals = []
    for i, t in enumerate(tlist):
        key = 0
        for j in range(r):
            if abs(t[j]) > bound:
                key = -1 - i  # unreachable image; keep a distinct, never-matched slot
                break
            key = key * base + (t[j] + bound)
        tkey_vals.append(key)
    order = sorted(range(len(tlist)), key=lambda i: tkey_vals[i])
    tkeys = np.array([tkey_vals[i] for i in order], dtype=np.int64)
    if len(set(tkey_vals)) != len(tkey_vals):
        raise PreconditionError("duplicate targets")

    def run_targets(idx):
        masses = np.zeros(len(tkeys), dtype=np.int64)
        if backend == "numba":
            _numba_kernels()["targets"](etas[idx], mv[idx], B, tkeys, bound, base, masses)
        else:
            _push_targets_numpy(etas[idx], mv[idx], B, tkeys, bound, base, masses)
        return masses

    if len(chunks) == 1:
        acc = run_targets(chunks[0])
    else:
        with ThreadPoolExecutor(max_workers=len(chunks)) as ex:
            parts = list(ex.map(run_targets, chunks))
        acc = np.zeros(len(tkeys), dtype=np.int64)
        for part in parts:
            acc += part
    out = [0] * len(tlist)
    for posn, i in enumerate(order):
        out[i] = int(acc[posn])
    return out
