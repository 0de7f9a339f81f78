"""Exact scalar rings and dense matrix kernels.

Matrices are plain lists of row lists.  Entries are either rationals
(``int`` / :class:`fractions.Fraction`) or :class:`MultiPoly` values.
Rational inputs go through the elimination kernels (run on the backend
selected in :mod:`grovekit._backend`); anything symbolic falls back to
memoised cofactor expansion, which is fine at the sizes used here (n <= ~14).

All indices taken by functions in this module are 0-based.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import reduce
from itertools import combinations
from typing import Any, Callable, Iterable, Sequence

from . import _backend

Matrix = list  # list[list[ring element]]


class ShapeError(ValueError):
    """Matrix has the wrong shape for the requested operation."""


class SingularMatrixError(ArithmeticError):
    """A matrix that had to be inverted is singular."""


# ---------------------------------------------------------------------------
# sparse multivariate polynomials


def _var_str(var: tuple) -> str:
    name, *idx = var
    if not idx:
        return name
    return f"{name}[{','.join(str(i) for i in idx)}]"


def _mono_mul(a: tuple, b: tuple) -> tuple:
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for v, e in b:
        d[v] = d.get(v, 0) + e
    return tuple(sorted(d.items()))


class MultiPoly:
    """Sparse polynomial with exact coefficients.

    A variable is a tuple ``(name, *indices)``; two-index variables are
    unordered pairs and are stored with ``i < j`` (``L[3,1]`` is ``L[1,3]``).
    A monomial is a sorted tuple of ``(variable, exponent)`` pairs.  Values are
    treated as immutable.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: dict | Iterable = ()):
        items = terms.items() if isinstance(terms, dict) else terms
        acc: dict = {}
        for mono, c in items:
            acc[mono] = acc.get(mono, 0) + c
        self.terms = {m: c for m, c in acc.items() if c != 0}

    # construction -------------------------------------------------------
    @staticmethod
    def var_key(name: str, *idx: int) -> tuple:
        if len(idx) == 2 and idx[0] > idx[1]:
            idx = (idx[1], idx[0])
        return (name, *idx)

    @classmethod
    def variable(cls, name: str, *idx: int) -> "MultiPoly":
        if len(idx) == 2 and idx[0] == idx[1]:
            raise ValueError("pair variables need two distinct indices")
        return cls({((cls.var_key(name, *idx), 1),): 1})

    @classmethod
    def constant(cls, c) -> "MultiPoly":
        return cls({(): c})

    @staticmethod
    def _coerce(x) -> "MultiPoly":
        if isinstance(x, MultiPoly):
            return x
        if isinstance(x, (int, Fraction)):
            return MultiPoly.constant(x)
        return NotImplemented

    # arithmetic ---------------------------------------------------------
    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        acc = dict(self.terms)
        for m, c in o.terms.items():
            acc[m] = acc.get(m, 0) + c
        return MultiPoly(acc)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return MultiPoly({m: c * other for m, c in self.terms.items()})
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        acc: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in o.terms.items():
                m = _mono_mul(m1, m2)
                acc[m] = acc.get(m, 0) + c1 * c2
        return MultiPoly(acc)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        return NotImplemented

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not polynomials")
        out = MultiPoly.constant(1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return False
        return self.terms == o.terms

    def __hash__(self):
        if self.is_constant():
            return hash(self.constant_value())
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    # inspection ---------------------------------------------------------
    def is_constant(self) -> bool:
        return all(not m for m in self.terms)

    def constant_value(self):
        return self.terms.get((), 0)

    def variables(self) -> set:
        return {v for m in self.terms for v, _ in m}

    def degree(self, var: tuple | None = None) -> int:
        """Total degree, or the degree in a single variable; -1 for zero."""
        if not self.terms:
            return -1
        if var is None:
            return max(sum(e for _, e in m) for m in self.terms)
        return max(dict(m).get(var, 0) for m in self.terms)

    def coefficient(self, var: tuple, k: int) -> "MultiPoly":
        """Coefficient of ``var**k`` as a polynomial in the other variables."""
        acc = {}
        for m, c in self.terms.items():
            d = dict(m)
            if d.get(var, 0) == k:
                d.pop(var, None)
                acc[tuple(sorted(d.items()))] = c
        return MultiPoly(acc)

    def substitute(self, mapping: dict) -> "MultiPoly":
        """Replace variables by ring values (numbers or polynomials)."""
        out = MultiPoly()
        for m, c in self.terms.items():
            term = MultiPoly.constant(c)
            rest = []
            for v, e in m:
                if v in mapping:
                    term = term * (self._coerce(mapping[v]) ** e)
                else:
                    rest.append((v, e))
            out = out + term * MultiPoly({tuple(rest): 1})
        return out

    def evaluate(self, mapping: dict):
        """Evaluate to a number; every variable must be mapped."""
        total = 0
        for m, c in self.terms.items():
            term = c
            for v, e in m:
                term = term * mapping[v] ** e
            total += term
        return total

    def sorted_terms(self) -> list:
        return sorted(self.terms.items(), key=lambda t: t[0])

    def __str__(self):
        if not self.terms:
            return "0"
        pieces = []
        for mono, c in self.sorted_terms():
            body = "*".join(
                _var_str(v) + (f"^{e}" if e > 1 else "") for v, e in mono
            )
            mag = abs(c)
            if not body:
                text = str(mag)
            elif mag == 1:
                text = body
            else:
                text = f"{mag}*{body}"
            neg = c < 0
            if not pieces:
                pieces.append(("-" if neg else "") + text)
            else:
                pieces.append((" - " if neg else " + ") + text)
        return "".join(pieces)

    def __repr__(self):
        return f"MultiPoly({str(self)!r})"


# ---------------------------------------------------------------------------
# matrix helpers


def is_rational(x) -> bool:
    return isinstance(x, (int, Fraction)) and not isinstance(x, bool)


def _all_rational(m) -> bool:
    return all(is_rational(x) for row in m for x in row)


def _check_square(m) -> int:
    n = len(m)
    for row in m:
        if len(row) != n:
            raise ShapeError(f"expected a square matrix, got a row of length {len(row)} in an {n}-row matrix")
    return n


def shape(m) -> tuple[int, int]:
    rows = len(m)
    cols = len(m[0]) if rows else 0
    if any(len(r) != cols for r in m):
        raise ShapeError("ragged matrix")
    return rows, cols


def identity(n: int) -> Matrix:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def zeros(r: int, c: int | None = None) -> Matrix:
    return [[Fraction(0)] * (r if c is None else c) for _ in range(r)]


def submatrix(m, rows: Sequence[int], cols: Sequence[int]) -> Matrix:
    return [[m[i][j] for j in cols] for i in rows]


def transpose(m) -> Matrix:
    return [list(col) for col in zip(*m)] if m else []


def matmul(a, b) -> Matrix:
    ra, ca = shape(a)
    rb, cb = shape(b)
    if ca != rb:
        raise ShapeError(f"cannot multiply {ra}x{ca} by {rb}x{cb}")
    bt = transpose(b)
    return [[sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in bt] for row in a]


def matsub(a, b) -> Matrix:
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def as_fractions(m) -> Matrix:
    return [[Fraction(x) for x in row] for row in m]


# ---------------------------------------------------------------------------
# determinant


def _det_bareiss(m) -> Fraction:
    n = len(m)
    mpz = _backend.mpz
    scale = 1
    a = []
    for row in m:
        d = reduce(math.lcm, (Fraction(x).denominator for x in row), 1)
        scale *= d
        a.append([mpz(Fraction(x).numerator * (d // Fraction(x).denominator)) for x in row])
    sign = 1
    prev = mpz(1)
    for k in range(n - 1):
        if a[k][k] == 0:
            for p in range(k + 1, n):
                if a[p][k] != 0:
                    a[k], a[p] = a[p], a[k]
                    sign = -sign
                    break
            else:
                return Fraction(0)
        akk = a[k][k]
        rk = a[k]
        for i in range(k + 1, n):
            ri = a[i]
            aik = ri[k]
            for j in range(k + 1, n):
                ri[j] = (ri[j] * akk - aik * rk[j]) // prev
        prev = akk
    return Fraction(sign * int(a[n - 1][n - 1]), scale)


def _det_expand(m):
    n = len(m)
    memo: dict = {}

    def rec(r: int, cols: int):
        # determinant of rows r.. against the column set ``cols`` (bitmask)
        if r == n:
            return 1
        key = cols
        if key in memo:
            return memo[key]
        total = 0
        sign = 1
        for j in range(n):
            if not cols >> j & 1:
                continue
            x = m[r][j]
            if x:
                sub = rec(r + 1, cols & ~(1 << j))
                if sub:
                    term = x * sub
                    total = total + term if sign > 0 else total - term
            sign = -sign
        memo[key] = total
        return total

    return rec(0, (1 << n) - 1)


def det(m):
    """Exact determinant.  The 0x0 determinant is 1."""
    n = _check_square(m)
    if n == 0:
        return Fraction(1)
    if _all_rational(m):
        return _det_bareiss(m)
    return _det_expand(m)


# ---------------------------------------------------------------------------
# inverse and Schur complement


def inverse(m) -> Matrix:
    """Exact inverse of a square rational matrix."""
    n = _check_square(m)
    if not _all_rational(m):
        raise TypeError("inverse is only implemented for rational matrices")
    to_q = _backend.to_q
    a = [[to_q(x) for x in row] + [to_q(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for k in range(n):
        p = next((i for i in range(k, n) if a[i][k] != 0), None)
        if p is None:
            raise SingularMatrixError("matrix is singular")
        if p != k:
            a[k], a[p] = a[p], a[k]
        piv = a[k][k]
        rk = a[k] = [x / piv for x in a[k]]
        for i in range(n):
            if i != k:
                f = a[i][k]
                if f != 0:
                    a[i] = [x - f * y for x, y in zip(a[i], rk)]
    frm = _backend.from_q
    return [[frm(x) for x in row[n:]] for row in a]


def solve(m, b: Sequence) -> list:
    """Solve ``m x = b`` exactly for a nonsingular rational ``m``."""
    inv = inverse(m)
    return [sum((x * y for x, y in zip(row, b)), Fraction(0)) for row in inv]


def schur_complement(m, keep: Sequence[int]) -> Matrix:
    """``m[K,K] - m[K,D] m[D,D]^-1 m[D,K]`` where D is the complement of ``keep``."""
    n = _check_square(m)
    keep = list(keep)
    if len(set(keep)) != len(keep) or any(not 0 <= k < n for k in keep):
        raise ValueError("keep must be distinct indices inside the matrix")
    kept = set(keep)
    drop = [i for i in range(n) if i not in kept]
    base = submatrix(m, keep, keep)
    if not drop:
        return [[Fraction(x) if is_rational(x) else x for x in row] for row in base]
    inv = inverse(submatrix(m, drop, drop))
    corr = matmul(matmul(submatrix(m, keep, drop), inv), submatrix(m, drop, keep))
    return matsub(base, corr)


# ---------------------------------------------------------------------------
# Pfaffian and Pfaffianoid


def _check_antisymmetric(m) -> int:
    n = _check_square(m)
    for i in range(n):
        if m[i][i] != 0:
            raise ValueError("antisymmetric matrix needs a zero diagonal")
        for j in range(i + 1, n):
            if m[i][j] != -m[j][i]:
                raise ValueError(f"matrix is not antisymmetric at ({i}, {j})")
    return n


def _pf_q(a) -> Any:
    """Pfaffian by skew elimination; ``a`` is a list of backend rationals (consumed)."""
    n = len(a)
    result = _backend.mpq(1)
    for k in range(0, n - 1, 2):
        p = next((j for j in range(k + 1, n) if a[k][j] != 0), None)
        if p is None:
            return _backend.mpq(0)
        if p != k + 1:
            a[k + 1], a[p] = a[p], a[k + 1]
            for row in a:
                row[k + 1], row[p] = row[p], row[k + 1]
            result = -result
        piv = a[k][k + 1]
        result *= piv
        rk1 = a[k + 1]
        coef = [a[k][i] / piv for i in range(n)]
        for i in range(k + 2, n):
            ci = coef[i]
            ri = a[i]
            ui = ri[k + 1]
            for j in range(k + 2, n):
                # congruence by the unimodular transform clearing row k
                ri[j] = ri[j] - ci * rk1[j] - coef[j] * ui
    return result


def _pf_expand(m):
    n = len(m)
    memo: dict = {}

    def rec(mask: int):
        if mask == 0:
            return 1
        if mask in memo:
            return memo[mask]
        i = (mask & -mask).bit_length() - 1
        rest = mask & ~(1 << i)
        total = 0
        sign = 1
        for j in range(i + 1, n):
            if not rest >> j & 1:
                continue
            x = m[i][j]
            if x:
                sub = rec(rest & ~(1 << j))
                if sub:
                    term = x * sub
                    total = total + term if sign > 0 else total - term
            sign = -sign
        memo[mask] = total
        return total

    return rec((1 << n) - 1)


def pfaffian(m):
    """Pfaffian of an antisymmetric matrix of even size; ``Pf`` of 0x0 is 1."""
    n = _check_antisymmetric(m)
    if n % 2:
        raise ValueError("Pfaffian needs an even-sized matrix")
    if n == 0:
        return Fraction(1)
    if _all_rational(m):
        to_q = _backend.to_q
        return _backend.from_q(_pf_q([[to_q(x) for x in row] for row in m]))
    return _pf_expand(m)


def pfaffianoid(m, triples: Iterable[tuple[int, int, int]] | None = None):
    """Signed sum over near-pairings of an odd antisymmetric matrix.

    Evaluated by the triple expansion
    ``sum_{a<b<c} (-1)^(a+b+c) (M_ab M_bc + M_bc M_ac + M_ac M_ab) Pf(M - {a,b,c})``
    with 1-based a, b, c.  ``triples`` (0-based, increasing) restricts the
    sum to near-pairings whose tripleton is one of the given triples.
    """
    n = _check_antisymmetric(m)
    if n % 2 == 0 or n < 3:
        raise ValueError("Pfaffianoid needs an odd-sized matrix of size at least 3")
    rational = _all_rational(m)
    if rational:
        to_q = _backend.to_q
        q = [[to_q(x) for x in row] for row in m]
    total = 0
    for a, b, c in combinations(range(n), 3) if triples is None else sorted(set(triples)):
        if not 0 <= a < b < c < n:
            raise ValueError(f"bad tripleton indices {(a, b, c)}")
        pre = m[a][b] * m[b][c] + m[b][c] * m[a][c] + m[a][c] * m[a][b]
        if not pre:
            continue
        rest = [i for i in range(n) if i not in (a, b, c)]
        if rational:
            pf = _backend.from_q(_pf_q([[q[i][j] for j in rest] for i in rest]))
        else:
            pf = _pf_expand(submatrix(m, rest, rest))
        if not pf:
            continue
        # 0-based a+b+c has the same parity as the 1-based sum minus 3
        term = pre * pf
        total = total - term if (a + b + c) % 2 == 0 else total + term
    return total


# ---------------------------------------------------------------------------
# univariate interpolation


def interpolate(values: Sequence[Fraction], points: Sequence[Fraction] | None = None) -> list[Fraction]:
    """Coefficients (low to high) of the polynomial through ``(points[k], values[k])``.

    Points default to 0, 1, 2, ...
    """
    k = len(values)
    xs = [Fraction(i) for i in range(k)] if points is None else [Fraction(p) for p in points]
    coeffs = [Fraction(0)] * k
    for i in range(k):
        # basis polynomial prod_{j != i} (x - x_j) / (x_i - x_j)
        basis = [Fraction(1)]
        denom = Fraction(1)
        for j in range(k):
            if j == i:
                continue
            basis = [Fraction(0)] + basis
            for t in range(len(basis) - 1):
                basis[t] -= xs[j] * basis[t + 1]
            denom *= xs[i] - xs[j]
        w = Fraction(values[i]) / denom
        for t in range(k):
            coeffs[t] += w * basis[t]
    return coeffs


def polynomial_in_parameter(f: Callable[[Fraction], Fraction], degree_bound: int) -> list[Fraction]:
    """Exact coefficients of ``t -> f(t)``, known to be a polynomial of degree <= bound."""
    values = [f(Fraction(i)) for i in range(degree_bound + 1)]
    coeffs = interpolate(values)
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs
