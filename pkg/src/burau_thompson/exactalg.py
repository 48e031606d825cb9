"""Exact Laurent polynomials over the integers, finite matrices over them,
and determinants of identity-plus-finite-rank corrections.

Everything here is exact: coefficients are Python integers and no floating
point value ever enters a computation (``LaurentPoly.evaluate`` is for display).

>>> t = LaurentPoly.t()
>>> (1 - t) * (1 + t)
LaurentPoly('1 - t^2')
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations
from typing import Hashable, Iterable, Mapping, Sequence


class DimensionError(ValueError):
    """Matrix index sets do not match."""


class ContractViolation(ValueError):
    """An input breaks the declared precondition of an operation."""


class LaurentPoly:
    """An element of Z[t, t^-1], stored as exponent -> nonzero coefficient."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[int, int] | None = None):
        clean = {}
        if terms:
            for e, c in terms.items():
                c = int(c)
                if c:
                    clean[int(e)] = c
        self._terms = dict(sorted(clean.items()))
        self._hash = None

    @classmethod
    def const(cls, c: int) -> LaurentPoly:
        return cls({0: c})

    @classmethod
    def monomial(cls, coeff: int, exp: int) -> LaurentPoly:
        return cls({exp: coeff})

    @classmethod
    def t(cls) -> LaurentPoly:
        return cls({1: 1})

    @property
    def terms(self) -> dict[int, int]:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def min_exp(self) -> int:
        return next(iter(self._terms))

    def max_exp(self) -> int:
        return next(reversed(self._terms))

    def as_monomial(self) -> tuple[int, int] | None:
        """Return (coefficient, exponent) if self is c*t^m, else None."""
        if len(self._terms) != 1:
            return None
        (e, c), = self._terms.items()
        return c, e

    def _coerce(self, other) -> LaurentPoly:
        if isinstance(other, LaurentPoly):
            return other
        if isinstance(other, int):
            return LaurentPoly.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for e, c in other._terms.items():
            out[e] = out.get(e, 0) + c
        return LaurentPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict[int, int] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
        return LaurentPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> LaurentPoly:
        if n < 0:
            mono = self.as_monomial()
            if mono is None or abs(mono[0]) != 1:
                raise ValueError("only units can be raised to negative powers")
            return LaurentPoly({mono[1] * n: mono[0] ** n})
        out = LaurentPoly.const(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def shift(self, k: int) -> LaurentPoly:
        """Multiply by t^k."""
        return LaurentPoly({e + k: c for e, c in self._terms.items()})

    def exact_div(self, other: LaurentPoly) -> LaurentPoly:
        """Quotient self / other, raising ValueError when it is not exact."""
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        if self.is_zero():
            return LaurentPoly()
        rem = dict(self._terms)
        dmax, dlc = other.max_exp(), other._terms[other.max_exp()]
        dmin = other.min_exp()
        quot: dict[int, int] = {}
        while rem:
            top = max(rem)
            if top - dmax < min(rem) - dmin:
                raise ValueError("inexact Laurent division")
            q, r = divmod(rem[top], dlc)
            if r:
                raise ValueError("inexact Laurent division")
            shift = top - dmax
            quot[shift] = q
            for e, c in other._terms.items():
                v = rem.get(e + shift, 0) - q * c
                if v:
                    rem[e + shift] = v
                else:
                    rem.pop(e + shift, None)
        return LaurentPoly(quot)

    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.const(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(tuple(self._terms.items()))
        return self._hash

    def __bool__(self):
        return bool(self._terms)

    def evaluate(self, value: complex) -> complex:
        """Numeric value at t = value (display only)."""
        return sum(c * value**e for e, c in self._terms.items())

    def to_json(self) -> dict[str, int]:
        return {str(e): c for e, c in self._terms.items()}

    @classmethod
    def from_json(cls, obj: Mapping[str, int]) -> LaurentPoly:
        return cls({int(e): int(c) for e, c in obj.items()})

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for e, c in self._terms.items():
            if e == 0:
                body = str(abs(c))
            else:
                var = "t" if e == 1 else f"t^{e}"
                body = var if abs(c) == 1 else f"{abs(c)}*{var}"
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self):
        return f"LaurentPoly('{self}')"


ZERO = LaurentPoly()
ONE = LaurentPoly.const(1)
T = LaurentPoly.t()


@dataclass(frozen=True)
class Monomial:
    """The unit sign * t^exp of Z[t, t^-1]."""

    sign: int = 1
    exp: int = 0

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError("monomial sign must be +1 or -1")

    def poly(self) -> LaurentPoly:
        return LaurentPoly.monomial(self.sign, self.exp)

    def __mul__(self, other: Monomial) -> Monomial:
        return Monomial(self.sign * other.sign, self.exp + other.exp)

    def inverse(self) -> Monomial:
        return Monomial(self.sign, -self.exp)

    def is_one(self) -> bool:
        return self.sign == 1 and self.exp == 0


class LaurentMatrix:
    """A finite matrix over Z[t, t^-1] with explicit ordered row/column index sets."""

    __slots__ = ("rows", "cols", "_entries", "_row_pos", "_col_pos")

    def __init__(self, rows: Sequence[Hashable], cols: Sequence[Hashable],
                 entries: Mapping[tuple, LaurentPoly] | None = None):
        self.rows = tuple(rows)
        self.cols = tuple(cols)
        self._row_pos = {r: i for i, r in enumerate(self.rows)}
        self._col_pos = {c: i for i, c in enumerate(self.cols)}
        if len(self._row_pos) != len(self.rows) or len(self._col_pos) != len(self.cols):
            raise DimensionError("duplicate index")
        self._entries = {}
        for (r, c), v in (entries or {}).items():
            if r not in self._row_pos or c not in self._col_pos:
                raise DimensionError(f"entry ({r!r}, {c!r}) outside the declared index sets")
            if not isinstance(v, LaurentPoly):
                v = LaurentPoly.const(v)
            if v:
                self._entries[(r, c)] = v

    @classmethod
    def identity(cls, index: Sequence[Hashable]) -> LaurentMatrix:
        return cls(index, index, {(i, i): ONE for i in index})

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], row_index=None, col_index=None) -> LaurentMatrix:
        n, m = len(rows), len(rows[0]) if rows else 0
        row_index = tuple(range(n)) if row_index is None else tuple(row_index)
        col_index = tuple(range(m)) if col_index is None else tuple(col_index)
        entries = {(row_index[i], col_index[j]): rows[i][j] for i in range(n) for j in range(m)}
        return cls(row_index, col_index, entries)

    def __getitem__(self, key) -> LaurentPoly:
        r, c = key
        if r not in self._row_pos or c not in self._col_pos:
            raise DimensionError(f"index ({r!r}, {c!r}) outside the declared sets")
        return self._entries.get((r, c), ZERO)

    @property
    def entries(self) -> dict[tuple, LaurentPoly]:
        return dict(self._entries)

    def dense(self) -> list[list[LaurentPoly]]:
        return [[self._entries.get((r, c), ZERO) for c in self.cols] for r in self.rows]

    def __matmul__(self, other: LaurentMatrix) -> LaurentMatrix:
        if set(self.cols) != set(other.rows):
            raise DimensionError("column set of the left factor differs from row set of the right")
        by_row: dict = {}
        for (k, c), v in other._entries.items():
            by_row.setdefault(k, []).append((c, v))
        out: dict = {}
        for (r, k), a in self._entries.items():
            for c, b in by_row.get(k, ()):
                out[(r, c)] = out.get((r, c), ZERO) + a * b
        return LaurentMatrix(self.rows, other.cols, out)

    def __add__(self, other: LaurentMatrix) -> LaurentMatrix:
        if set(self.rows) != set(other.rows) or set(self.cols) != set(other.cols):
            raise DimensionError("index sets differ")
        out = dict(self._entries)
        for k, v in other._entries.items():
            out[k] = out.get(k, ZERO) + v
        return LaurentMatrix(self.rows, self.cols, out)

    def __sub__(self, other: LaurentMatrix) -> LaurentMatrix:
        return self + LaurentMatrix(other.rows, other.cols,
                                    {k: -v for k, v in other._entries.items()})

    def __eq__(self, other):
        if not isinstance(other, LaurentMatrix):
            return NotImplemented
        return (set(self.rows) == set(other.rows) and set(self.cols) == set(other.cols)
                and self._entries == other._entries)

    def submatrix(self, rows: Sequence, cols: Sequence) -> LaurentMatrix:
        return LaurentMatrix(rows, cols, {(r, c): self[r, c] for r in rows for c in cols})

    def transpose(self) -> LaurentMatrix:
        return LaurentMatrix(self.cols, self.rows,
                             {(c, r): v for (r, c), v in self._entries.items()})

    def det(self) -> LaurentPoly:
        if len(self.rows) != len(self.cols):
            raise DimensionError("determinant of a non-square matrix")
        return bareiss_det(self.dense())

    def to_json(self) -> dict:
        return {
            "rows": [_json_index(r) for r in self.rows],
            "cols": [_json_index(c) for c in self.cols],
            "entries": [[_json_index(r), _json_index(c), v.to_json()]
                        for (r, c), v in sorted(self._entries.items(),
                                                key=lambda kv: (self._row_pos[kv[0][0]],
                                                                self._col_pos[kv[0][1]]))],
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> LaurentMatrix:
        rows = [_from_json_index(r) for r in obj["rows"]]
        cols = [_from_json_index(c) for c in obj["cols"]]
        entries = {(_from_json_index(r), _from_json_index(c)): LaurentPoly.from_json(p)
                   for r, c, p in obj["entries"]}
        return cls(rows, cols, entries)

    def __repr__(self):
        return f"LaurentMatrix({len(self.rows)}x{len(self.cols)}, {len(self._entries)} nonzero)"


def _json_index(i):
    return list(i) if isinstance(i, tuple) else i


def _from_json_index(i):
    return tuple(i) if isinstance(i, list) else i


def bareiss_det(rows: Sequence[Sequence[LaurentPoly]]) -> LaurentPoly:
    """Fraction-free Gaussian elimination over Z[t, t^-1]."""
    n = len(rows)
    if n == 0:
        return ONE
    a = [[x if isinstance(x, LaurentPoly) else LaurentPoly.const(x) for x in row] for row in rows]
    sign = 1
    prev = ONE
    for k in range(n - 1):
        if a[k][k].is_zero():
            swap = next((i for i in range(k + 1, n) if not a[i][k].is_zero()), None)
            if swap is None:
                return ZERO
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]).exact_div(prev)
        prev = a[k][k]
    d = a[n - 1][n - 1]
    return d if sign == 1 else -d


def leibniz_det(rows: Sequence[Sequence[LaurentPoly]]) -> LaurentPoly:
    """Determinant by the permutation expansion; only for small matrices."""
    n = len(rows)
    total = ZERO
    for perm in permutations(range(n)):
        term = ONE
        for i, j in enumerate(perm):
            term = term * rows[i][j]
            if term.is_zero():
                break
        else:
            total = total + (term if _perm_sign(perm) == 1 else -term)
    return total


def _perm_sign(perm: Sequence[int]) -> int:
    seen = [False] * len(perm)
    sign = 1
    for i in range(len(perm)):
        if not seen[i]:
            j, length = i, 0
            while not seen[j]:
                seen[j] = True
                j = perm[j]
                length += 1
            if length % 2 == 0:
                sign = -sign
    return sign


# Above this core size the principal-minor sum is replaced by one elimination
# of (I + F) restricted to the core; both compute the same polynomial.
MINOR_SUM_LIMIT = 10


def correction_determinant(F: LaurentMatrix, core: Iterable[Hashable] | None = None) -> LaurentPoly:
    """det(I + F) for a correction F whose image lies in the span of ``core``.

    ``F`` is indexed by basis keys; columns may range over keys outside the
    core but every nonzero row must lie in the core.  The result is the sum of
    the principal minors of F over subsets of the core.
    """
    core = list(dict.fromkeys(core)) if core is not None else list(
        dict.fromkeys(r for (r, _c) in F.entries))
    core_set = set(core)
    for (r, c), v in F.entries.items():
        if r not in core_set:
            raise ContractViolation(f"correction has a nonzero row {r!r} outside its core")
    col_set = set(F.cols)
    sub = [[F.entries.get((r, c), ZERO) if c in col_set else ZERO for c in core] for r in core]
    n = len(core)
    if n > MINOR_SUM_LIMIT:
        shifted = [[sub[i][j] + (ONE if i == j else ZERO) for j in range(n)] for i in range(n)]
        return bareiss_det(shifted)
    total = ONE
    for size in range(1, n + 1):
        for subset in combinations(range(n), size):
            total = total + bareiss_det([[sub[i][j] for j in subset] for i in subset])
    return total
