"""Exact sparse polynomials in the entries of a symmetric matrix.

The hypersurface equations produced by this package live on the chart of
the Lagrangian Grassmannian labelled by symmetric matrices U = (u_ij).
``MinorPolynomial`` stores such an equation with integer coefficients in
a canonical form: monomials are compared by total degree first, ties
broken lexicographically with u11 most significant (variables enumerated
u11 < u12 < ... < u1n < u22 < ...), and terms render in descending
order.  No zero coefficients are ever stored.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Iterable, Mapping

from .errors import PreconditionError

Monomial = tuple[int, ...]


def variable_pairs(n: int) -> tuple[tuple[int, int], ...]:
    """Index pairs (i, j), 1-based, i <= j, in canonical variable order."""
    return tuple((i, j) for i in range(1, n + 1) for j in range(i, n + 1))


def _canon_key(mono: Monomial):
    return (sum(mono), mono)


class GaussianRational:
    """Exact complex number a + b*i with rational a, b."""

    __slots__ = ("real", "imag")

    def __init__(self, real=0, imag=0):
        object.__setattr__(self, "real", Fraction(real))
        object.__setattr__(self, "imag", Fraction(imag))

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    @classmethod
    def coerce(cls, x) -> "GaussianRational":
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, (int, Fraction)):
            return cls(x, 0)
        raise PreconditionError(f"cannot coerce {type(x).__name__} to GaussianRational")

    def __add__(self, other):
        o = GaussianRational.coerce(other)
        return GaussianRational(self.real + o.real, self.imag + o.imag)

    __radd__ = __add__

    def __sub__(self, other):
        o = GaussianRational.coerce(other)
        return GaussianRational(self.real - o.real, self.imag - o.imag)

    def __rsub__(self, other):
        return GaussianRational.coerce(other) - self

    def __mul__(self, other):
        o = GaussianRational.coerce(other)
        return GaussianRational(
            self.real * o.real - self.imag * o.imag,
            self.real * o.imag + self.imag * o.real,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = GaussianRational.coerce(other)
        den = o.real * o.real + o.imag * o.imag
        if den == 0:
            raise ZeroDivisionError("division by zero GaussianRational")
        return GaussianRational(
            (self.real * o.real + self.imag * o.imag) / den,
            (self.imag * o.real - self.real * o.imag) / den,
        )

    def __rtruediv__(self, other):
        return GaussianRational.coerce(other) / self

    def __neg__(self):
        return GaussianRational(-self.real, -self.imag)

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            raise PreconditionError("exponent must be a nonnegative integer")
        out = GaussianRational(1)
        for _ in range(k):
            out = out * self
        return out

    def conjugate(self):
        return GaussianRational(self.real, -self.imag)

    def __bool__(self):
        return bool(self.real) or bool(self.imag)

    def __eq__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except PreconditionError:
            return NotImplemented
        return self.real == o.real and self.imag == o.imag

    def __hash__(self):
        return hash(complex(self.real, self.imag)) if self.imag else hash(self.real)

    def __repr__(self):
        if not self.imag:
            return f"GaussianRational({self.real})"
        return f"GaussianRational({self.real}, {self.imag})"


IMAG_UNIT = GaussianRational(0, 1)


class SymmetricMatrix:
    """Exact symmetric n x n matrix; entries int, Fraction, or GaussianRational."""

    __slots__ = ("n", "rows")

    def __init__(self, rows: Iterable[Iterable]):
        rows = tuple(tuple(r) for r in rows)
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise PreconditionError("matrix is not square")
        for i in range(n):
            for j in range(i + 1, n):
                if not rows[i][j] == rows[j][i]:
                    raise PreconditionError(f"entries ({i+1},{j+1}) and ({j+1},{i+1}) differ")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "rows", rows)

    def __setattr__(self, name, value):
        raise AttributeError("SymmetricMatrix is immutable")

    def entry(self, i: int, j: int):
        """1-based access; entry(i, j) == entry(j, i) by construction."""
        if not (1 <= i <= self.n and 1 <= j <= self.n):
            raise PreconditionError(f"index ({i},{j}) out of range for n={self.n}")
        return self.rows[i - 1][j - 1]

    @classmethod
    def from_upper(cls, n: int, values: Mapping[tuple[int, int], object]):
        rows = [[None] * n for _ in range(n)]
        for (i, j) in variable_pairs(n):
            v = values[(i, j)]
            rows[i - 1][j - 1] = v
            rows[j - 1][i - 1] = v
        return cls(rows)

    def __eq__(self, other):
        return isinstance(other, SymmetricMatrix) and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        return f"SymmetricMatrix({[list(r) for r in self.rows]})"


class MinorPolynomial:
    """Integer polynomial in the entries u_ij (1 <= i <= j <= n).

    ``terms`` maps exponent tuples (ordered as ``variable_pairs(n)``) to
    nonzero integer coefficients.  ``pluecker_degree`` is an optional
    annotation recording the degree in the minor coordinates of the
    ambient Pluecker embedding; it is carried through unchanged by
    normalization and serialization but not by arithmetic.
    """

    __slots__ = ("n", "terms", "pluecker_degree")

    def __init__(self, n: int, terms: Mapping[Monomial, int] | None = None,
                 pluecker_degree: int | None = None):
        if n < 1:
            raise PreconditionError("matrix size must be at least 1")
        nvars = n * (n + 1) // 2
        clean: dict[Monomial, int] = {}
        for mono, c in (terms or {}).items():
            mono = tuple(mono)
            if len(mono) != nvars or any(e < 0 for e in mono):
                raise PreconditionError(f"bad exponent vector {mono} for n={n}")
            c = int(c)
            if c:
                clean[mono] = c
        self.n = n
        self.terms = clean
        self.pluecker_degree = pluecker_degree

    @classmethod
    def zero(cls, n: int) -> "MinorPolynomial":
        return cls(n)

    @classmethod
    def constant(cls, n: int, c: int) -> "MinorPolynomial":
        nvars = n * (n + 1) // 2
        return cls(n, {(0,) * nvars: c})

    @classmethod
    def variable(cls, n: int, i: int, j: int) -> "MinorPolynomial":
        """The entry u_ij as a polynomial; (i, j) is 1-based, any order."""
        i, j = min(i, j), max(i, j)
        pairs = variable_pairs(n)
        if (i, j) not in pairs:
            raise PreconditionError(f"no entry ({i},{j}) for n={n}")
        mono = tuple(1 if p == (i, j) else 0 for p in pairs)
        return cls(n, {mono: 1})

    def _check_same(self, other: "MinorPolynomial"):
        if self.n != other.n:
            raise PreconditionError("mixed matrix sizes in polynomial arithmetic")

    def __add__(self, other):
        if isinstance(other, int):
            other = MinorPolynomial.constant(self.n, other)
        self._check_same(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return MinorPolynomial(self.n, out)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, int):
            other = MinorPolynomial.constant(self.n, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return MinorPolynomial(self.n, {m: -c for m, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, int):
            return MinorPolynomial(self.n, {m: c * other for m, c in self.terms.items()})
        self._check_same(other)
        out: dict[Monomial, int] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                out[m] = out.get(m, 0) + c1 * c2
        return MinorPolynomial(self.n, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise PreconditionError("negative power of a polynomial")
        out = MinorPolynomial.constant(self.n, 1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        return (isinstance(other, MinorPolynomial)
                and self.n == other.n and self.terms == other.terms)

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def total_degree(self) -> int:
        return max((sum(m) for m in self.terms), default=0)

    def sorted_terms(self) -> list[tuple[Monomial, int]]:
        """Terms in canonical order, leading first."""
        return sorted(self.terms.items(), key=lambda kv: _canon_key(kv[0]), reverse=True)

    def leading_monomial(self) -> Monomial:
        if not self.terms:
            raise PreconditionError("zero polynomial has no leading monomial")
        return max(self.terms, key=_canon_key)

    def content(self) -> int:
        if not self.terms:
            return 0
        return reduce(gcd, (abs(c) for c in self.terms.values()))

    def normalized(self) -> "MinorPolynomial":
        """Divide by the content and make the leading coefficient positive."""
        if not self.terms:
            return MinorPolynomial(self.n, pluecker_degree=self.pluecker_degree)
        g = self.content()
        if self.terms[self.leading_monomial()] < 0:
            g = -g
        return MinorPolynomial(self.n, {m: c // g for m, c in self.terms.items()},
                               pluecker_degree=self.pluecker_degree)

    def evaluate(self, values):
        """Evaluate exactly; ``values`` is a SymmetricMatrix or a mapping
        keyed by 1-based index pairs (i, j) with i <= j."""
        pairs = variable_pairs(self.n)
        if isinstance(values, SymmetricMatrix):
            if values.n != self.n:
                raise PreconditionError("matrix size does not match polynomial")
            vals = [values.entry(i, j) for (i, j) in pairs]
        else:
            vals = [values[p] for p in pairs]
        total = 0
        for mono, c in self.terms.items():
            prod = c
            for v, e in zip(vals, mono):
                for _ in range(e):
                    prod = prod * v
            total = prod + total
        return total

    # The text format writes entries as u{i}{j} with single digits, so it
    # is only defined for n <= 9.  All equations in this package have n <= 4.

    def to_text(self) -> str:
        if self.n > 9:
            raise PreconditionError("text format requires n <= 9")
        if not self.terms:
            return "0"
        parts = []
        for mono, c in self.sorted_terms():
            factors = []
            for (i, j), e in zip(variable_pairs(self.n), mono):
                if e == 1:
                    factors.append(f"u{i}{j}")
                elif e > 1:
                    factors.append(f"u{i}{j}^{e}")
            body = "*".join(factors)
            mag = abs(c)
            if not body:
                piece = str(mag)
            elif mag == 1:
                piece = body
            else:
                piece = f"{mag}*{body}"
            if not parts:
                parts.append(piece if c > 0 else f"-{piece}")
            else:
                parts.append(f"{'+' if c > 0 else '-'} {piece}")
        return " ".join(parts)

    @classmethod
    def from_text(cls, n: int, text: str,
                  pluecker_degree: int | None = None) -> "MinorPolynomial":
        if n > 9:
            raise PreconditionError("text format requires n <= 9")
        compact = text.replace(" ", "")
        if not compact:
            raise PreconditionError("empty polynomial text")
        if compact == "0":
            return cls(n, pluecker_degree=pluecker_degree)
        pairs = variable_pairs(n)
        index = {p: k for k, p in enumerate(pairs)}
        terms: dict[Monomial, int] = {}
        pos = 0
        term_re = re.compile(r"([+-]?)([0-9u^*]+)")
        for m in term_re.finditer(compact):
            if m.start() != pos:
                raise PreconditionError(f"cannot parse polynomial text at {compact[pos:]!r}")
            pos = m.end()
            sign = -1 if m.group(1) == "-" else 1
            coeff = 1
            exps = [0] * len(pairs)
            for factor in m.group(2).split("*"):
                if not factor:
                    raise PreconditionError("empty factor in polynomial text")
                if factor[0] != "u":
                    coeff *= int(factor)
                    continue
                fm = re.fullmatch(r"u(\d)(\d)(?:\^(\d+))?", factor)
                if not fm:
                    raise PreconditionError(f"bad factor {factor!r}")
                i, j = int(fm.group(1)), int(fm.group(2))
                key = (min(i, j), max(i, j))
                if key not in index:
                    raise PreconditionError(f"entry u{i}{j} out of range for n={n}")
                exps[index[key]] += int(fm.group(3)) if fm.group(3) else 1
            mono = tuple(exps)
            terms[mono] = terms.get(mono, 0) + sign * coeff
        if pos != len(compact):
            raise PreconditionError(f"trailing junk in polynomial text: {compact[pos:]!r}")
        return cls(n, terms, pluecker_degree=pluecker_degree)

    def to_json_dict(self) -> dict[str, str]:
        """Exponent-vector keys ("a,b,c,...") mapped to coefficient strings."""
        return {",".join(map(str, m)): str(c) for m, c in self.sorted_terms()}

    @classmethod
    def from_json_dict(cls, n: int, data: Mapping[str, str],
                       pluecker_degree: int | None = None) -> "MinorPolynomial":
        terms = {tuple(int(x) for x in key.split(",")): int(val)
                 for key, val in data.items()}
        return cls(n, terms, pluecker_degree=pluecker_degree)

    def __repr__(self):
        if self.n <= 9:
            return f"MinorPolynomial({self.n}, {self.to_text()!r})"
        return f"MinorPolynomial({self.n}, <{len(self.terms)} terms>)"
