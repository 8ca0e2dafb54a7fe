"""Exact arithmetic over the rationals and over the ordered field Q(eps).

Scalars come in two flavours sharing one protocol (+, -, *, /, comparisons,
exact equality):

* downstairs -- plain ``fractions.Fraction``;
* upstairs   -- :class:`InfScalar`, a reduced ratio of polynomials in one
  formal infinitesimal ``eps`` with rational coefficients, ordered by sign
  near 0+.

``eps`` is positive but smaller than every positive rational, which makes
Q(eps) a non-archimedean ordered field with a computable standard part.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence, Union

from .errors import InvalidInputError, NotFiniteError, ParseError

Rational = Fraction

LT, EQ, GT = -1, 0, 1

ZERO = "zero"
INFINITESIMAL = "infinitesimal"
FINITE = "finite-noninfinitesimal"
INFINITE = "infinite"


# ---------------------------------------------------------------------------
# dense univariate polynomials over Q (internal representation)
# ---------------------------------------------------------------------------

def _trim(coeffs: Sequence[Fraction]) -> tuple[Fraction, ...]:
    n = len(coeffs)
    while n > 0 and coeffs[n - 1] == 0:
        n -= 1
    return tuple(coeffs[:n])


def poly_add(a, b):
    n = max(len(a), len(b))
    return _trim([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)
                  for i in range(n)])


def poly_neg(a):
    return tuple(-c for c in a)


def poly_mul(a, b):
    if not a or not b:
        return ()
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if ca == 0:
            continue
        for j, cb in enumerate(b):
            out[i + j] += ca * cb
    return _trim(out)


def poly_divmod(a, b):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = list(a)
    q = [Fraction(0)] * max(0, len(a) - len(b) + 1)
    inv_lead = 1 / b[-1]
    for k in range(len(a) - len(b), -1, -1):
        coef = a[k + len(b) - 1] * inv_lead
        if coef != 0:
            q[k] = coef
            for j in range(len(b)):
                a[k + j] -= coef * b[j]
    return _trim(q), _trim(a)


def poly_gcd(a, b):
    while b:
        _, a, b = None, b, poly_divmod(a, b)[1]
    if not a:
        return ()
    # monic normalization so the gcd is canonical
    inv = 1 / a[-1]
    return tuple(c * inv for c in a)


def poly_lowdeg(a) -> int:
    for i, c in enumerate(a):
        if c != 0:
            return i
    raise ValueError("zero polynomial has no low degree")


def poly_eval(a, x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(a):
        acc = acc * x + c
    return acc


# ---------------------------------------------------------------------------
# elements of Q(eps)
# ---------------------------------------------------------------------------

_Num = Union[int, Fraction, "InfScalar"]


class InfScalar:
    """An element of Q(eps) in canonical form.

    Canonical form: num/den with no common polynomial factor and the
    lowest-degree nonzero coefficient of ``den`` equal to 1.  Equality is
    then syntactic, so values hash and sort deterministically.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=(Fraction(1),)):
        num = _trim([Fraction(c) for c in num])
        den = _trim([Fraction(c) for c in den])
        if not den:
            raise InvalidInputError("InfScalar denominator is zero")
        if not num:
            self.num = ()
            self.den = (Fraction(1),)
            return
        g = poly_gcd(num, den)
        if len(g) > 1:
            num = poly_divmod(num, g)[0]
            den = poly_divmod(den, g)[0]
        scale = 1 / den[poly_lowdeg(den)]
        self.num = tuple(c * scale for c in num)
        self.den = tuple(c * scale for c in den)

    # -- constructors -------------------------------------------------------

    @staticmethod
    def from_rational(q) -> "InfScalar":
        q = Fraction(q)
        return InfScalar((q,)) if q != 0 else InfScalar(())

    @staticmethod
    def epsilon(power: int = 1) -> "InfScalar":
        return InfScalar((Fraction(0),) * power + (Fraction(1),))

    # -- structure ----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.num

    def order(self) -> int:
        """Valuation: lowdeg(num) - lowdeg(den).  Undefined for zero."""
        if self.is_zero():
            raise InvalidInputError("order of zero is undefined")
        return poly_lowdeg(self.num) - poly_lowdeg(self.den)

    def sign(self) -> int:
        """Sign of the value for eps near 0+."""
        if self.is_zero():
            return 0
        lead = self.num[poly_lowdeg(self.num)]
        return 1 if lead > 0 else -1

    def eval_at(self, x: Fraction) -> Fraction:
        """Evaluate at a concrete rational eps = x (den(x) must be nonzero)."""
        d = poly_eval(self.den, x)
        if d == 0:
            raise InvalidInputError("denominator vanishes at evaluation point")
        return poly_eval(self.num, x) / d

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other: _Num) -> "InfScalar":
        if isinstance(other, InfScalar):
            return other
        if isinstance(other, (int, Fraction)):
            return InfScalar.from_rational(other)
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        num = poly_add(poly_mul(self.num, o.den), poly_mul(o.num, self.den))
        return InfScalar(num, poly_mul(self.den, o.den))

    __radd__ = __add__

    def __neg__(self):
        s = InfScalar.__new__(InfScalar)
        s.num = poly_neg(self.num)
        s.den = self.den
        return s

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return InfScalar(poly_mul(self.num, o.num), poly_mul(self.den, o.den))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if o.is_zero():
            raise InvalidInputError("division by zero in Q(eps)")
        return InfScalar(poly_mul(self.num, o.den), poly_mul(self.den, o.num))

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o / self

    # -- order --------------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = InfScalar.from_rational(other)
        if not isinstance(other, InfScalar):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def __repr__(self):
        return "InfScalar(%s)" % scalar_to_str(self)


EPS = InfScalar.epsilon()


# ---------------------------------------------------------------------------
# module operations (spec surface)
# ---------------------------------------------------------------------------

def arith(op: str, a: _Num, b: _Num) -> InfScalar:
    """Field operation on Q(eps): op in {add, sub, mul, div}."""
    a = a if isinstance(a, InfScalar) else InfScalar.from_rational(a)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise InvalidInputError("unknown field op %r" % op)


def compare(a: _Num, b: _Num) -> int:
    """Total order of Q(eps): returns LT (-1), EQ (0) or GT (1)."""
    a = a if isinstance(a, InfScalar) else InfScalar.from_rational(a)
    b = b if isinstance(b, InfScalar) else InfScalar.from_rational(b)
    return (a - b).sign()


def standard_part(a: _Num) -> Fraction:
    """The unique rational infinitely close to a finite element.

    Raises NotFiniteError when the element is infinite (negative order).
    """
    if isinstance(a, (int, Fraction)):
        return Fraction(a)
    if a.is_zero():
        return Fraction(0)
    o = a.order()
    if o < 0:
        raise NotFiniteError("standard part of an infinite element")
    if o > 0:
        return Fraction(0)
    return a.num[poly_lowdeg(a.num)] / a.den[poly_lowdeg(a.den)]


def classify(a: _Num) -> str:
    """One of zero / infinitesimal / finite-noninfinitesimal / infinite."""
    if isinstance(a, (int, Fraction)):
        a = InfScalar.from_rational(a)
    if a.is_zero():
        return ZERO
    o = a.order()
    if o > 0:
        return INFINITESIMAL
    if o == 0:
        return FINITE
    return INFINITE


# ---------------------------------------------------------------------------
# order oracle support
# ---------------------------------------------------------------------------

def positive_root_free_bound(polys: Iterable[Sequence[Fraction]]) -> Fraction:
    """A rational b > 0 such that no polynomial in the list has a root in (0, b].

    Cauchy-style bound on the reversed polynomial: if p has lowest nonzero
    coefficient a_m at degree m, every root x != 0 satisfies
    |x| >= 1 / (1 + max_i |a_{m+i}| / |a_m|).  We halve the minimum over all
    inputs, so signs of all the polynomials are constant on (0, b].
    """
    bound = Fraction(1)
    for p in polys:
        p = _trim([Fraction(c) for c in p])
        if not p:
            continue
        m = poly_lowdeg(p)
        a0 = abs(p[m])
        rest = [abs(c) / a0 for c in p[m + 1:]]
        if rest:
            bound = min(bound, 1 / (1 + max(rest)))
    return bound / 2


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def rational_to_str(q: Fraction) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return "%d/%d" % (q.numerator, q.denominator)


def rational_from_str(s: str) -> Fraction:
    try:
        if "/" in s:
            num, den = s.split("/")
            return Fraction(int(num), int(den))
        return Fraction(int(s))
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError("bad rational %r" % s) from exc


def scalar_to_json(x: _Num, realization: str):
    if realization == "downstairs":
        if isinstance(x, InfScalar):
            raise InvalidInputError("InfScalar in a downstairs context")
        return rational_to_str(Fraction(x))
    x = x if isinstance(x, InfScalar) else InfScalar.from_rational(x)
    return {"num": [rational_to_str(c) for c in x.num],
            "den": [rational_to_str(c) for c in x.den]}


def scalar_from_json(obj, realization: str):
    if realization == "downstairs":
        if not isinstance(obj, str):
            raise ParseError("downstairs scalar must be a string")
        return rational_from_str(obj)
    if not isinstance(obj, dict) or "num" not in obj or "den" not in obj:
        raise ParseError("upstairs scalar must be a num/den object")
    return InfScalar([rational_from_str(c) for c in obj["num"]],
                     [rational_from_str(c) for c in obj["den"]])


def scalar_to_str(x: _Num) -> str:
    """Compact canonical string; used for hashing and vertex ordering."""
    if isinstance(x, InfScalar):
        return ",".join(rational_to_str(c) for c in x.num) + ";" + \
               ",".join(rational_to_str(c) for c in x.den)
    return rational_to_str(Fraction(x))
