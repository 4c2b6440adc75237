"""Exact coefficient arithmetic: Q, Z[a], the field Q(a), and exact linear solving.

Rationals are ``fractions.Fraction``.  Univariate integer polynomials in the
deformation parameter (printed ``a``) are ``AlphaPolynomial``; their reduced
quotients form the field Q(a) as ``AlphaRational``.  Everything is immutable
and hashable, so values can key dictionaries and be shared freely between
threads.

The text grammar round-trips: ``parse_alpha(str(x)) == x`` for every element,
with ``a`` denoting the indeterminate, e.g. ``3/(2*a^2+a)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union


class PoleError(ArithmeticError):
    """Denominator vanishes at the evaluation point, numerator does not."""


class IndeterminateError(ArithmeticError):
    """Numerator and denominator both vanish: cancel symbolically first."""


# ---------------------------------------------------------------------------
# integer polynomials in a
# ---------------------------------------------------------------------------

def _trim(coeffs: Sequence[int]) -> tuple[int, ...]:
    n = len(coeffs)
    while n and coeffs[n - 1] == 0:
        n -= 1
    return tuple(coeffs[:n])


class AlphaPolynomial:
    """Polynomial in a with integer coefficients, lowest degree first.

    The zero polynomial is the empty coefficient tuple; otherwise the leading
    coefficient is non-zero.
    """

    __slots__ = ("coeffs", "_hash")

    def __init__(self, coeffs: Iterable[int] = ()):
        self.coeffs = _trim(tuple(int(c) for c in coeffs))
        self._hash = None

    # -- construction helpers
    @staticmethod
    def const(n: int) -> "AlphaPolynomial":
        return AlphaPolynomial((n,))

    @staticmethod
    def gen() -> "AlphaPolynomial":
        """The polynomial a."""
        return AlphaPolynomial((0, 1))

    @staticmethod
    def linear(const: int, slope: int) -> "AlphaPolynomial":
        """const + slope*a."""
        return AlphaPolynomial((const, slope))

    # -- basic structure
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_one(self) -> bool:
        return self.coeffs == (1,)

    def leading(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def content(self) -> int:
        g = 0
        for c in self.coeffs:
            g = math.gcd(g, c)
        return g

    def primitive(self) -> "AlphaPolynomial":
        """Divide out the content; sign follows the leading coefficient."""
        g = self.content()
        if g <= 1:
            return self
        return AlphaPolynomial(c // g for c in self.coeffs)

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            return self.coeffs == _trim((other,))
        if isinstance(other, AlphaPolynomial):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.coeffs)
        return self._hash

    # -- ring operations
    def __add__(self, other) -> "AlphaPolynomial":
        other = _coerce_poly(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return AlphaPolynomial(out)

    __radd__ = __add__

    def __neg__(self) -> "AlphaPolynomial":
        return AlphaPolynomial(-c for c in self.coeffs)

    def __sub__(self, other):
        other = _coerce_poly(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce_poly(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other) -> "AlphaPolynomial":
        other = _coerce_poly(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return _POLY_ZERO
        out = [0] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if ca:
                for j, cb in enumerate(b):
                    out[i + j] += ca * cb
        return AlphaPolynomial(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "AlphaPolynomial":
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = _POLY_ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def shift(self, k: int) -> "AlphaPolynomial":
        """Multiply by a**k."""
        if not self.coeffs:
            return self
        return AlphaPolynomial((0,) * k + self.coeffs)

    def __call__(self, a0):
        """Evaluate by Horner at any ring element (Fraction, AlphaRational...)."""
        acc = a0 * 0
        for c in reversed(self.coeffs):
            acc = acc * a0 + c
        return acc

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            if k == 0:
                term = str(abs(c))
            else:
                mag = "" if abs(c) == 1 else f"{abs(c)}*"
                term = f"{mag}a" if k == 1 else f"{mag}a^{k}"
            if not parts:
                parts.append(term if c > 0 else "-" + term)
            else:
                parts.append(("+" if c > 0 else "-") + term)
        return "".join(parts)

    def __repr__(self) -> str:
        return f"AlphaPolynomial({self})"


_POLY_ZERO = AlphaPolynomial()
_POLY_ONE = AlphaPolynomial((1,))


def _coerce_poly(x) -> AlphaPolynomial:
    if isinstance(x, AlphaPolynomial):
        return x
    if isinstance(x, int):
        return AlphaPolynomial((x,))
    return NotImplemented


def _poly_divmod_q(a: Sequence[Fraction], b: Sequence[Fraction]):
    """Division with remainder over Q on fraction coefficient lists."""
    a = list(a)
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    lead = b[-1]
    for k in range(len(a) - len(b), -1, -1):
        c = a[k + len(b) - 1]
        if c == 0:
            continue
        f = c / lead
        q[k] = f
        for i, bc in enumerate(b):
            a[k + i] -= f * bc
    while a and a[-1] == 0:
        a.pop()
    return q, a


def poly_gcd(p: AlphaPolynomial, q: AlphaPolynomial) -> AlphaPolynomial:
    """Gcd over Q, returned as a primitive integer polynomial, leading > 0."""
    a = [Fraction(c) for c in p.coeffs]
    b = [Fraction(c) for c in q.coeffs]
    while b:
        _, r = _poly_divmod_q(a, b)
        a, b = b, r
    if not a:
        return _POLY_ZERO
    den_lcm = 1
    for c in a:
        den_lcm = den_lcm * c.denominator // math.gcd(den_lcm, c.denominator)
    ints = [int(c * den_lcm) for c in a]
    g = 0
    for c in ints:
        g = math.gcd(g, c)
    ints = [c // g for c in ints]
    if ints[-1] < 0:
        ints = [-c for c in ints]
    return AlphaPolynomial(ints)


def poly_divexact(p: AlphaPolynomial, q: AlphaPolynomial) -> AlphaPolynomial:
    """Exact quotient p/q over Q; must land back in Z[a]."""
    quo, rem = _poly_divmod_q([Fraction(c) for c in p.coeffs],
                              [Fraction(c) for c in q.coeffs])
    if rem:
        raise ArithmeticError("inexact polynomial division")
    if any(c.denominator != 1 for c in quo):
        raise ArithmeticError("quotient not integral")
    return AlphaPolynomial(int(c) for c in quo)


# ---------------------------------------------------------------------------
# the field Q(a)
# ---------------------------------------------------------------------------

class AlphaRational:
    """Element of Q(a) as a reduced quotient of integer polynomials.

    Canonical form: gcd(num, den) = 1 over Q, integer contents coprime, and
    the denominator has positive leading coefficient.
    """

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num=0, den=1, _normalized=False):
        if not _normalized:
            num = _coerce_poly_ratio(num)
            den = _coerce_poly_ratio(den)
            num, den = _normalize(num[0] * den[1], den[0] * num[1])
        self.num = num
        self.den = den
        self._hash = None

    # -- constructors
    @staticmethod
    def alpha() -> "AlphaRational":
        return ALPHA

    @staticmethod
    def from_fraction(q: Fraction) -> "AlphaRational":
        return AlphaRational(
            AlphaPolynomial((q.numerator,)), AlphaPolynomial((q.denominator,)),
            _normalized=True)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.is_one()

    def as_fraction(self) -> Fraction:
        """Convert a constant element to a Fraction."""
        if self.num.degree() > 0 or self.den.degree() > 0:
            raise ValueError(f"{self} is not a constant")
        return Fraction(self.num.leading() if self.num else 0, self.den.leading())

    def __bool__(self) -> bool:
        return not self.num.is_zero()

    def __eq__(self, other) -> bool:
        other = _coerce_rat(other)
        if other is NotImplemented:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    # -- field operations (Fraction-style cross reductions keep sizes down)
    def __add__(self, other):
        other = _coerce_rat(other)
        if other is NotImplemented:
            return NotImplemented
        if self.den == other.den:
            num, den = _normalize(self.num + other.num, self.den)
            return AlphaRational(num, den, _normalized=True)
        num, den = _normalize(self.num * other.den + other.num * self.den,
                              self.den * other.den)
        return AlphaRational(num, den, _normalized=True)

    __radd__ = __add__

    def __neg__(self):
        return AlphaRational(-self.num, self.den, _normalized=True)

    def __sub__(self, other):
        other = _coerce_rat(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce_rat(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = _coerce_rat(other)
        if other is NotImplemented:
            return NotImplemented
        if self.num.is_zero() or other.num.is_zero():
            return ZERO
        num, den = _normalize(self.num * other.num, self.den * other.den)
        return AlphaRational(num, den, _normalized=True)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce_rat(other)
        if other is NotImplemented:
            return NotImplemented
        if other.num.is_zero():
            raise ZeroDivisionError("division by zero in Q(a)")
        if self.num.is_zero():
            return ZERO
        num, den = _normalize(self.num * other.den, self.den * other.num)
        return AlphaRational(num, den, _normalized=True)

    def __rtruediv__(self, other):
        other = _coerce_rat(other)
        if other is NotImplemented:
            return NotImplemented
        return other / self

    def __pow__(self, n: int):
        if n == 0:
            return ONE
        if n < 0:
            return (ONE / self) ** (-n)
        return AlphaRational(self.num ** n, self.den ** n, _normalized=True)

    def subs_inverse(self) -> "AlphaRational":
        """The element f(1/a)."""
        if self.num.is_zero():
            return ZERO
        dn, dd = self.num.degree(), self.den.degree()
        num = AlphaPolynomial(reversed(self.num.coeffs)).shift(max(0, dd - dn))
        den = AlphaPolynomial(reversed(self.den.coeffs)).shift(max(0, dn - dd))
        return AlphaRational(num, den)

    def __str__(self) -> str:
        if self.den.is_one():
            s = str(self.num)
            return f"({s})" if ("+" in s[1:] or "-" in s[1:]) else s
        ns = str(self.num)
        if "+" in ns[1:] or "-" in ns[1:]:
            ns = f"({ns})"
        return f"{ns}/({self.den})"

    def __repr__(self) -> str:
        return f"AlphaRational({self})"


def _coerce_poly_ratio(x):
    """Return (AlphaPolynomial numerator, positive int denominator)."""
    if isinstance(x, AlphaPolynomial):
        return x, 1
    if isinstance(x, int):
        return AlphaPolynomial((x,)), 1
    if isinstance(x, Fraction):
        return AlphaPolynomial((x.numerator,)), x.denominator
    if isinstance(x, AlphaRational):
        raise TypeError("use AlphaRational arithmetic directly")
    raise TypeError(f"cannot build Q(a) element from {x!r}")


def _coerce_rat(x):
    if isinstance(x, AlphaRational):
        return x
    if isinstance(x, int):
        return AlphaRational(AlphaPolynomial((x,)), _POLY_ONE, _normalized=True)
    if isinstance(x, Fraction):
        return AlphaRational.from_fraction(x)
    if isinstance(x, AlphaPolynomial):
        return AlphaRational(x, _POLY_ONE)
    return NotImplemented


def _normalize(num: AlphaPolynomial, den: AlphaPolynomial):
    if den.is_zero():
        raise ZeroDivisionError("zero denominator in Q(a)")
    if num.is_zero():
        return _POLY_ZERO, _POLY_ONE
    if den.coeffs == (1,):
        return num, den
    if den.degree() > 0 and num.degree() > 0:
        g = poly_gcd(num, den)
        if g.degree() > 0:
            num = poly_divexact(num, g)
            den = poly_divexact(den, g)
    cn, cd = num.content(), den.content()
    g = math.gcd(cn, cd)
    if g > 1:
        num = AlphaPolynomial(c // g for c in num.coeffs)
        den = AlphaPolynomial(c // g for c in den.coeffs)
    if den.leading() < 0:
        num, den = -num, -den
    return num, den


ZERO = AlphaRational(0)
ONE = AlphaRational(1)
ALPHA = AlphaRational(AlphaPolynomial.gen())


def alpha_eval(f: AlphaRational, a0: Union[int, Fraction]) -> Fraction:
    """Evaluate f in Q(a) at the rational point a0.

    Raises PoleError when the (reduced) denominator vanishes there, and
    IndeterminateError in the 0/0 case, which cannot occur on canonical
    elements but is kept distinct for callers holding raw pairs.
    """
    a0 = Fraction(a0)
    dv = f.den(a0)
    if dv != 0:
        return f.num(a0) / dv
    if f.num(a0) != 0:
        raise PoleError(f"pole of {f} at a = {a0}")
    raise IndeterminateError(f"0/0 for {f} at a = {a0}; cancel first")


# ---------------------------------------------------------------------------
# parsing (round-trips the printers above)
# ---------------------------------------------------------------------------

def parse_alpha(text: str) -> AlphaRational:
    """Parse an element of Q(a): integers, ``a``, + - * / ^ and parentheses."""
    tokens = _tokenize(text)
    value, pos = _parse_sum(tokens, 0)
    if pos != len(tokens):
        raise ValueError(f"trailing input in {text!r}")
    return value


def _tokenize(text: str):
    tokens = []
    i = 0
    while i < len(text):
        c = text[i]
        if c.isspace():
            i += 1
        elif c.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            tokens.append(("int", int(text[i:j])))
            i = j
        elif c in "a" and (i + 1 == len(text) or not text[i + 1].isalnum()):
            tokens.append(("a", None))
            i += 1
        elif c in "+-*/^()":
            tokens.append((c, None))
            i += 1
        else:
            raise ValueError(f"bad character {c!r} in Q(a) literal")
    return tokens


def _parse_sum(tokens, pos):
    sign = 1
    if pos < len(tokens) and tokens[pos][0] in "+-":
        sign = -1 if tokens[pos][0] == "-" else 1
        pos += 1
    value, pos = _parse_product(tokens, pos)
    value = sign * value
    while pos < len(tokens) and tokens[pos][0] in "+-":
        op = tokens[pos][0]
        term, pos = _parse_product(tokens, pos + 1)
        value = value + term if op == "+" else value - term
    return value, pos


def _parse_product(tokens, pos):
    value, pos = _parse_power(tokens, pos)
    while pos < len(tokens) and tokens[pos][0] in "*/":
        op = tokens[pos][0]
        rhs, pos = _parse_power(tokens, pos + 1)
        value = value * rhs if op == "*" else value / rhs
    return value, pos


def _parse_power(tokens, pos):
    base, pos = _parse_atom(tokens, pos)
    if pos < len(tokens) and tokens[pos][0] == "^":
        if tokens[pos + 1][0] != "int":
            raise ValueError("exponent must be an integer")
        return base ** tokens[pos + 1][1], pos + 2
    return base, pos


def _parse_atom(tokens, pos):
    if pos >= len(tokens):
        raise ValueError("unexpected end of Q(a) literal")
    kind, val = tokens[pos]
    if kind == "int":
        return AlphaRational(val), pos + 1
    if kind == "a":
        return ALPHA, pos + 1
    if kind == "-":
        value, pos = _parse_atom(tokens, pos + 1)
        return -value, pos
    if kind == "(":
        value, pos = _parse_sum(tokens, pos + 1)
        if pos >= len(tokens) or tokens[pos][0] != ")":
            raise ValueError("unbalanced parenthesis")
        return value, pos + 1
    raise ValueError(f"unexpected token {kind!r}")


# ---------------------------------------------------------------------------
# exact linear algebra
# ---------------------------------------------------------------------------

@dataclass
class UniqueSolution:
    vector: list


@dataclass
class SolutionSpace:
    particular: list
    nullspace: list  # reduced-echelon basis of the homogeneous solutions


@dataclass
class NoSolution:
    witness_row: int


class FieldMatrix:
    """Dense matrix over one exact field (Fraction or AlphaRational)."""

    def __init__(self, rows: int, cols: int, entries: Sequence):
        if len(entries) != rows * cols:
            raise ValueError("entry count does not match shape")
        self.rows = rows
        self.cols = cols
        self.entries = list(entries)

    def at(self, i: int, j: int):
        return self.entries[i * self.cols + j]


def _pivot_weight(x) -> int:
    # lowest total polynomial degree first, to curb coefficient blow-up
    if isinstance(x, AlphaRational):
        return x.num.degree() + x.den.degree()
    return 0


def solve_exact(M: FieldMatrix, b: Sequence):
    """Solve M x = b exactly by Gaussian elimination.

    Returns UniqueSolution, SolutionSpace (particular + reduced-echelon
    nullspace basis) or NoSolution.  Entries may be Fraction or
    AlphaRational; they are never mixed.
    """
    if len(b) != M.rows:
        raise ValueError("right-hand side has wrong length")
    rows = [list(M.entries[i * M.cols:(i + 1) * M.cols]) + [b[i]]
            for i in range(M.rows)]
    n, m = M.rows, M.cols
    pivots = []
    r = 0
    for col in range(m):
        best = None
        for i in range(r, n):
            if rows[i][col]:
                w = _pivot_weight(rows[i][col])
                if best is None or w < best[0]:
                    best = (w, i)
        if best is None:
            continue
        i = best[1]
        rows[r], rows[i] = rows[i], rows[r]
        pv = rows[r][col]
        rows[r] = [e / pv for e in rows[r]]
        for i in range(n):
            if i != r and rows[i][col]:
                f = rows[i][col]
                rows[i] = [e - f * rows[r][j] for j, e in enumerate(rows[i])]
        pivots.append(col)
        r += 1
        if r == n:
            break
    for i in range(r, n):
        if rows[i][m]:
            return NoSolution(witness_row=i)
    if M.entries:
        zero = M.entries[0] * 0
    elif b:
        zero = b[0] * 0
    else:
        zero = Fraction(0)
    one = zero + 1
    particular = [zero] * m
    for i, col in enumerate(pivots):
        particular[col] = rows[i][m]
    free = [c for c in range(m) if c not in pivots]
    if not free:
        return UniqueSolution(vector=particular)
    basis = []
    for fc in free:
        v = [zero] * m
        v[fc] = one
        for i, col in enumerate(pivots):
            v[col] = -rows[i][fc]
        basis.append(v)
    return SolutionSpace(particular=particular, nullspace=basis)


def nullspace_dimension(M: FieldMatrix) -> int:
    """Dimension of the kernel of M."""
    zero = Fraction(0)
    if M.entries:
        zero = M.entries[0] * 0
    res = solve_exact(M, [zero] * M.rows)
    if isinstance(res, UniqueSolution):
        return 0
    return len(res.nullspace)
