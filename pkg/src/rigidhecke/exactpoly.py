"""Exact multivariate Laurent polynomials over the rationals.

A Laurent polynomial is a finite map from integer exponent vectors (negative
exponents allowed) to nonzero ``Fraction`` coefficients.  This is the
coefficient ring for everything downstream: Hecke parameters are stored as
formal square roots v_i with Q_i = v_i^2, and unramified-character twists as
extra invertible variables.

All values are immutable after construction and safe to share.  Two Laurent
polynomials are equal iff their term maps are equal; there is no floating
point anywhere.

>>> t = VarTable(("v0", "v1"), ("param-sqrt", "param-sqrt"))
>>> v0, v1 = t.gens()
>>> print((v0 + v1) * (v0 - v1))
1*v0^2 - 1*v1^2
>>> print(render_in_Q(v0 ** 2 - 1))
1*Q0 - 1
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence, Union

Exponent = tuple[int, ...]
ScalarLike = Union[int, Fraction, "LaurentPoly"]

PARAM_SQRT = "param-sqrt"
TWIST = "twist"
PARAM = "param"  # rendered tables: Q_i = v_i^2

_KINDS = (PARAM_SQRT, TWIST, PARAM)


class VarTableMismatch(ValueError):
    """Operands live over different variable tables."""


class NotDivisible(ArithmeticError):
    """Exact division failed: divisor does not divide in the Laurent ring."""


class ZeroSubstitutionForUnit(ZeroDivisionError):
    """Zero was substituted for a variable that must stay invertible."""


class OddDegree(ValueError):
    """A param-sqrt variable occurs with odd exponent; no Q-form exists."""


class NonSquare(ValueError):
    """Determinant of a non-square matrix requested."""


class PolyParseError(ValueError):
    """Malformed canonical polynomial string."""


@dataclass(frozen=True)
class VarTable:
    """Ordered variable context for a computation.

    The order is fixed for the lifetime of a context: the canonical monomial
    ordering (and hence printing and golden files) depends on it.
    """

    names: tuple[str, ...]
    kinds: tuple[str, ...]
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if len(self.names) != len(set(self.names)):
            raise ValueError(f"duplicate variable names: {self.names}")
        if len(self.names) != len(self.kinds):
            raise ValueError("names and kinds must have equal length")
        for k in self.kinds:
            if k not in _KINDS:
                raise ValueError(f"unknown variable kind {k!r}")
        object.__setattr__(self, "_index", {n: i for i, n in enumerate(self.names)})

    def __len__(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"unknown variable {name!r} (have {self.names})") from None

    def gens(self) -> list["LaurentPoly"]:
        return [variable(self, i) for i in range(len(self.names))]

    def gen(self, name: str) -> "LaurentPoly":
        return variable(self, self.index(name))

    def qname(self, i: int) -> str:
        """Display name of the square Q_i of the i-th param-sqrt variable."""
        n = self.names[i]
        return "Q" + n[1:] if n.startswith("v") else "Q_" + n

    def q_table(self) -> "VarTable":
        """Variable table for Q-rendered polynomials (param-sqrt squared)."""
        names = tuple(
            self.qname(i) if k == PARAM_SQRT else self.names[i]
            for i, k in enumerate(self.kinds)
        )
        kinds = tuple(PARAM if k == PARAM_SQRT else k for k in self.kinds)
        return VarTable(names, kinds)


def _coeff(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    raise TypeError(f"coefficient must be int or Fraction, got {type(c)}")


class LaurentPoly:
    """Immutable sparse Laurent polynomial over a fixed :class:`VarTable`."""

    __slots__ = ("table", "terms")

    def __init__(self, table: VarTable, terms: Mapping[Exponent, Fraction]):
        clean = {}
        n = len(table)
        for e, c in terms.items():
            c = _coeff(c)
            if c == 0:
                continue
            if len(e) != n:
                raise ValueError(f"exponent {e} has wrong arity for {table.names}")
            clean[tuple(int(x) for x in e)] = c
        self.table = table
        self.terms = clean

    # -- constructors ------------------------------------------------------

    @staticmethod
    def const(table: VarTable, c) -> "LaurentPoly":
        return LaurentPoly(table, {(0,) * len(table): _coeff(c)})

    @staticmethod
    def monomial(table: VarTable, exps: Sequence[int], c=1) -> "LaurentPoly":
        return LaurentPoly(table, {tuple(exps): _coeff(c)})

    # -- ring structure ----------------------------------------------------

    def _check(self, other: "LaurentPoly"):
        if self.table is not other.table and self.table != other.table:
            raise VarTableMismatch(
                f"operands over {self.table.names} vs {other.table.names}"
            )

    def _lift(self, other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            self._check(other)
            return other
        return LaurentPoly.const(self.table, other)

    def __add__(self, other) -> "LaurentPoly":
        other = self._lift(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e, Fraction(0)) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return LaurentPoly(self.table, out)

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly(self.table, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> "LaurentPoly":
        return self + (-self._lift(other))

    def __rsub__(self, other) -> "LaurentPoly":
        return (-self) + other

    def __mul__(self, other) -> "LaurentPoly":
        other = self._lift(other)
        out: dict[Exponent, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(e, Fraction(0)) + c1 * c2
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        return LaurentPoly(self.table, out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "LaurentPoly":
        if not isinstance(k, int):
            raise TypeError("exponent must be an integer")
        if k < 0:
            return self.inverse() ** (-k)
        out = LaurentPoly.const(self.table, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def inverse(self) -> "LaurentPoly":
        """Inverse of a single-term (unit) Laurent polynomial."""
        if len(self.terms) != 1:
            raise NotDivisible(f"not a unit monomial: {self}")
        ((e, c),) = self.terms.items()
        return LaurentPoly(self.table, {tuple(-x for x in e): Fraction(1) / c})

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = LaurentPoly.const(self.table, other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.table == other.table and self.terms == other.terms

    def __hash__(self):
        return hash((self.table.names, tuple(sorted(self.terms.items()))))

    def __bool__(self) -> bool:
        return bool(self.terms)

    # -- queries -----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def constant_value(self) -> Fraction:
        """The value of a constant polynomial (raises if non-constant)."""
        if not self.terms:
            return Fraction(0)
        zero = (0,) * len(self.table)
        if set(self.terms) != {zero}:
            raise ValueError(f"not a constant: {self}")
        return self.terms[zero]

    def uses_variable(self, name: str) -> bool:
        i = self.table.index(name)
        return any(e[i] for e in self.terms)

    # -- exact division ----------------------------------------------------

    def exact_div(self, other) -> "LaurentPoly":
        """Quotient q with other * q == self, or :class:`NotDivisible`.

        Laurent divisibility: both operands are shifted by monomials into the
        ordinary polynomial ring, where sparse lead-term division applies.
        """
        other = self._lift(other)
        if other.is_zero():
            raise NotDivisible("division by zero")
        if self.is_zero():
            return LaurentPoly(self.table, {})
        n = len(self.table)
        shift_a = tuple(min(e[i] for e in self.terms) for i in range(n))
        shift_b = tuple(min(e[i] for e in other.terms) for i in range(n))
        num = {tuple(x - s for x, s in zip(e, shift_a)): c for e, c in self.terms.items()}
        den = {tuple(x - s for x, s in zip(e, shift_b)): c for e, c in other.terms.items()}
        quo: dict[Exponent, Fraction] = {}
        lead = max(den)  # lex order; any term order works for exact division
        lc = den[lead]
        while num:
            t = max(num)
            q = tuple(a - b for a, b in zip(t, lead))
            if any(x < 0 for x in q):
                raise NotDivisible(f"{other} does not divide {self}")
            cq = num[t] / lc
            quo[q] = cq
            for e, c in den.items():
                ee = tuple(a + b for a, b in zip(q, e))
                s = num.get(ee, Fraction(0)) - cq * c
                if s:
                    num[ee] = s
                else:
                    num.pop(ee, None)
        shift_q = tuple(a - b for a, b in zip(shift_a, shift_b))
        return LaurentPoly(
            self.table, {tuple(a + b for a, b in zip(e, shift_q)): c for e, c in quo.items()}
        )

    # -- substitution ------------------------------------------------------

    def evaluate(self, assignment: Mapping[str, ScalarLike]) -> "LaurentPoly":
        """Substitution homomorphism; unassigned variables stay symbolic.

        Values may be rationals or Laurent polynomials over the same table.
        A variable occurring with a negative exponent must receive an
        invertible value (nonzero rational or unit monomial); param-sqrt
        variables must be nonzero regardless.
        """
        vals: dict[int, LaurentPoly] = {}
        for name, v in assignment.items():
            i = self.table.index(name)
            pv = v if isinstance(v, LaurentPoly) else LaurentPoly.const(self.table, v)
            self._check(pv)
            if pv.is_zero() and self.table.kinds[i] == PARAM_SQRT:
                raise ZeroSubstitutionForUnit(f"{name} is a Laurent unit, got 0")
            vals[i] = pv
        out = LaurentPoly(self.table, {})
        for e, c in self.terms.items():
            term = LaurentPoly.const(self.table, c)
            rest = list(e)
            for i, pv in vals.items():
                k = e[i]
                rest[i] = 0
                if k == 0:
                    continue
                if k < 0 and not pv.is_monomial():
                    raise ZeroSubstitutionForUnit(
                        f"{self.table.names[i]} occurs with negative exponent; "
                        f"value {pv} is not invertible"
                    )
                term = term * pv ** k
            term = term * LaurentPoly.monomial(self.table, rest)
            out = out + term
        return out

    # -- rendering ---------------------------------------------------------

    def sorted_terms(self) -> list[tuple[Exponent, Fraction]]:
        """Terms in the canonical order: lexicographically decreasing exponents."""
        return sorted(self.terms.items(), key=lambda t: t[0], reverse=True)

    def render(self) -> str:
        """Canonical text form, e.g. ``-1*Q0^3 + 2*Q0^2*Q1``; used in goldens."""
        if not self.terms:
            return "0"
        parts = []
        for k, (e, c) in enumerate(self.sorted_terms()):
            mon = "*".join(
                f"{self.table.names[i]}^{x}" if x != 1 else self.table.names[i]
                for i, x in enumerate(e)
                if x
            )
            mag = abs(c)
            body = f"{mag}*{mon}" if mon else f"{mag}"
            if k == 0:
                parts.append(("-" if c < 0 else "") + body)
            else:
                parts.append(("- " if c < 0 else "+ ") + body)
        return " ".join(parts)

    def __str__(self) -> str:
        return self.render()

    def __repr__(self) -> str:
        return f"LaurentPoly({self.render()!r})"


def variable(table: VarTable, i: int) -> LaurentPoly:
    e = [0] * len(table)
    e[i] = 1
    return LaurentPoly.monomial(table, e)


def render_in_Q(p: LaurentPoly) -> LaurentPoly:
    """Rewrite in the squared variables Q_i = v_i^2.

    Every param-sqrt exponent must be even in every term, else
    :class:`OddDegree` (the caller decides whether that is an error).
    The result lives over ``p.table.q_table()``.
    """
    qt = p.table.q_table()
    sqrt_idx = [i for i, k in enumerate(p.table.kinds) if k == PARAM_SQRT]
    out = {}
    for e, c in p.terms.items():
        ee = list(e)
        for i in sqrt_idx:
            if e[i] % 2:
                raise OddDegree(f"odd exponent of {p.table.names[i]} in {p}")
            ee[i] = e[i] // 2
        out[tuple(ee)] = c
    return LaurentPoly(qt, out)


def parse_poly(table: VarTable, text: str) -> LaurentPoly:
    """Parse the canonical rendering (and fraction coefficients) back to a poly.

    Accepts e.g. ``"1*Q0^2*Q1 - 4*Q0 + 3/2"`` or ``"Q0 - 1"``.
    """
    s = text.strip()
    if s == "0":
        return LaurentPoly(table, {})
    s = s.replace(" - ", " + -")
    out = LaurentPoly(table, {})
    for raw in s.split(" + "):
        raw = raw.strip()
        if not raw:
            raise PolyParseError(f"empty term in {text!r}")
        neg = raw.startswith("-")
        if neg:
            raw = raw[1:]
        coeff = Fraction(1)
        exps = [0] * len(table)
        for factor in raw.split("*"):
            factor = factor.strip()
            if not factor:
                raise PolyParseError(f"empty factor in {text!r}")
            name, _, power = factor.partition("^")
            if name in table.names:
                exps[table.index(name)] += int(power) if power else 1
            else:
                try:
                    coeff *= Fraction(factor)
                except ValueError:
                    raise PolyParseError(f"bad factor {factor!r} in {text!r}") from None
        term = LaurentPoly.monomial(table, exps, -coeff if neg else coeff)
        out = out + term
    return out


class PolyMatrix:
    """Dense rectangular matrix of :class:`LaurentPoly` entries."""

    __slots__ = ("rows", "cols", "entries", "table")

    def __init__(self, entries: Sequence[Sequence[LaurentPoly]]):
        self.entries = [list(row) for row in entries]
        self.rows = len(self.entries)
        self.cols = len(self.entries[0]) if self.rows else 0
        for row in self.entries:
            if len(row) != self.cols:
                raise ValueError("ragged matrix")
        self.table = self.entries[0][0].table if self.rows and self.cols else None

    @staticmethod
    def identity(table: VarTable, n: int) -> "PolyMatrix":
        one = LaurentPoly.const(table, 1)
        zero = LaurentPoly(table, {})
        return PolyMatrix([[one if i == j else zero for j in range(n)] for i in range(n)])

    @staticmethod
    def zero(table: VarTable, rows: int, cols: int) -> "PolyMatrix":
        z = LaurentPoly(table, {})
        return PolyMatrix([[z for _ in range(cols)] for _ in range(rows)])

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def __eq__(self, other):
        return (
            isinstance(other, PolyMatrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and all(
                self.entries[i][j] == other.entries[i][j]
                for i in range(self.rows)
                for j in range(self.cols)
            )
        )

    def __add__(self, other: "PolyMatrix") -> "PolyMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")
        return PolyMatrix(
            [
                [self.entries[i][j] + other.entries[i][j] for j in range(self.cols)]
                for i in range(self.rows)
            ]
        )

    def __sub__(self, other: "PolyMatrix") -> "PolyMatrix":
        return self + other.scale(-1)

    def scale(self, c) -> "PolyMatrix":
        return PolyMatrix([[e * c for e in row] for row in self.entries])

    def __mul__(self, other: "PolyMatrix") -> "PolyMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        zero = LaurentPoly(self.table, {})
        out = []
        for i in range(self.rows):
            row = []
            for j in range(other.cols):
                acc = zero
                for k in range(self.cols):
                    a = self.entries[i][k]
                    if a.is_zero():
                        continue
                    acc = acc + a * other.entries[k][j]
                row.append(acc)
            out.append(row)
        return PolyMatrix(out)

    def trace(self) -> LaurentPoly:
        if self.rows != self.cols:
            raise NonSquare(f"{self.rows}x{self.cols}")
        acc = LaurentPoly(self.table, {})
        for i in range(self.rows):
            acc = acc + self.entries[i][i]
        return acc

    def is_zero(self) -> bool:
        return all(e.is_zero() for row in self.entries for e in row)

    def map(self, fn) -> "PolyMatrix":
        return PolyMatrix([[fn(e) for e in row] for row in self.entries])

    def __repr__(self):
        return f"PolyMatrix({self.rows}x{self.cols})"


def det_cofactor(m: PolyMatrix) -> LaurentPoly:
    """Naive cofactor-expansion determinant; the small-size oracle."""
    if m.rows != m.cols:
        raise NonSquare(f"{m.rows}x{m.cols}")
    n = m.rows
    if n == 0:
        raise NonSquare("empty matrix")
    if n == 1:
        return m.entries[0][0]
    acc = LaurentPoly(m.table, {})
    for j in range(n):
        a = m.entries[0][j]
        if a.is_zero():
            continue
        minor = PolyMatrix([row[:j] + row[j + 1 :] for row in m.entries[1:]])
        term = a * det_cofactor(minor)
        acc = acc + (term if j % 2 == 0 else -term)
    return acc


def det_bareiss(m: PolyMatrix) -> LaurentPoly:
    """Exact determinant by fraction-free Bareiss elimination.

    Rows are first cleared of monomial denominators (the extracted monomial
    factors divide the fraction-free result back out at the end).  Pivots are
    chosen by the fewest-terms heuristic; row swaps only flip the sign, and
    every interior division is exact by the Bareiss identity.
    """
    if m.rows != m.cols:
        raise NonSquare(f"{m.rows}x{m.cols}")
    n = m.rows
    if n == 0:
        raise NonSquare("empty matrix")
    table = m.table
    nvars = len(table)
    work = []
    extracted = LaurentPoly.const(table, 1)
    for row in m.entries:
        shift = [0] * nvars
        for e in row:
            for i in range(nvars):
                for exp in e.terms:
                    shift[i] = min(shift[i], exp[i])
        factor = LaurentPoly.monomial(table, shift)
        extracted = extracted * factor
        inv = factor.inverse()
        work.append([e * inv for e in row])
    sign = 1
    prev = LaurentPoly.const(table, 1)
    for k in range(n - 1):
        pivot_row = None
        best = None
        for r in range(k, n):
            e = work[r][k]
            if e.is_zero():
                continue
            if best is None or len(e.terms) < best:
                best = len(e.terms)
                pivot_row = r
        if pivot_row is None:
            return LaurentPoly(table, {})
        if pivot_row != k:
            work[k], work[pivot_row] = work[pivot_row], work[k]
            sign = -sign
        pkk = work[k][k]
        for i in range(k + 1, n):
            rik = work[i][k]
            for j in range(k + 1, n):
                num = pkk * work[i][j] - rik * work[k][j]
                work[i][j] = num.exact_div(prev)
            work[i][k] = LaurentPoly(table, {})
        prev = pkk
    det = work[n - 1][n - 1]
    if sign < 0:
        det = -det
    # each row was multiplied by factor^{-1}; multiply the factors back in
    return det * extracted


def rational_matrix_rank(rows: Sequence[Sequence[Fraction]]) -> int:
    """Rank of an exact rational matrix (plain Gaussian elimination)."""
    a = [[Fraction(x) for x in row] for row in rows]
    nr = len(a)
    nc = len(a[0]) if nr else 0
    rank = 0
    for c in range(nc):
        piv = next((r for r in range(rank, nr) if a[r][c] != 0), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        pv = a[rank][c]
        for r in range(nr):
            if r != rank and a[r][c] != 0:
                f = a[r][c] / pv
                a[r] = [x - f * y for x, y in zip(a[r], a[rank])]
        rank += 1
        if rank == nr:
            break
    return rank


if __name__ == "__main__":
    import doctest

    doctest.testmod()
