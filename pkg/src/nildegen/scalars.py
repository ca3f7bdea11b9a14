"""Exact scalars: Gaussian rationals Q(i) and rational functions Q(i)(s).

Every value is immutable and kept in a canonical form, so equality is
structural and hashing is consistent.  Polynomials keep their coefficients
as Gaussian integers over one shared positive denominator; this keeps the
hot arithmetic on plain Python ints.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from numbers import Rational

__all__ = [
    "GaussianRational",
    "UniPoly",
    "RatFunc",
    "PoleError",
    "ZeroDivision",
    "as_gaussian",
    "as_ratfunc",
    "I",
    "ZERO",
    "ONE",
]


class PoleError(ArithmeticError):
    """A rational function has a pole at the requested point."""

    def __init__(self, message: str, where=None):
        super().__init__(message)
        self.where = where


class ZeroDivision(ZeroDivisionError):
    """Division by an exact zero in Q(i) or Q(i)(s)."""


def _gcd3(a: int, b: int, c: int) -> int:
    return gcd(gcd(a, b), c)


class GaussianRational:
    """An element (re + im*i) / den of Q(i) with den > 0 and gcd 1."""

    __slots__ = ("re", "im", "den")

    def __init__(self, re: int = 0, im: int = 0, den: int = 1):
        if den == 0:
            raise ZeroDivision("zero denominator")
        if den < 0:
            re, im, den = -re, -im, -den
        g = _gcd3(re, im, den)
        if g != 1:
            re //= g
            im //= g
            den //= g
        self.re = re
        self.im = im
        self.den = den

    @classmethod
    def _raw(cls, re: int, im: int, den: int) -> "GaussianRational":
        obj = object.__new__(cls)
        obj.re = re
        obj.im = im
        obj.den = den
        return obj

    @classmethod
    def from_parts(cls, real, imag=0) -> "GaussianRational":
        """Build from rational real and imaginary parts (ints or Fractions)."""
        a = Fraction(real)
        b = Fraction(imag)
        den = a.denominator * b.denominator // gcd(a.denominator, b.denominator)
        return cls(a.numerator * (den // a.denominator), b.numerator * (den // b.denominator), den)

    @property
    def real(self) -> Fraction:
        return Fraction(self.re, self.den)

    @property
    def imag(self) -> Fraction:
        return Fraction(self.im, self.den)

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def is_real(self) -> bool:
        return self.im == 0

    def __bool__(self) -> bool:
        return self.re != 0 or self.im != 0

    def conjugate(self) -> "GaussianRational":
        return GaussianRational._raw(self.re, -self.im, self.den)

    def norm(self) -> Fraction:
        return Fraction(self.re * self.re + self.im * self.im, self.den * self.den)

    def __neg__(self):
        return GaussianRational._raw(-self.re, -self.im, self.den)

    def __pos__(self):
        return self

    def __add__(self, other):
        o = _coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if self.den == o.den:
            return GaussianRational(self.re + o.re, self.im + o.im, self.den)
        return GaussianRational(
            self.re * o.den + o.re * self.den,
            self.im * o.den + o.im * self.den,
            self.den * o.den,
        )

    __radd__ = __add__

    def __sub__(self, other):
        o = _coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = _coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = _coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return GaussianRational(
            self.re * o.re - self.im * o.im,
            self.re * o.im + self.im * o.re,
            self.den * o.den,
        )

    __rmul__ = __mul__

    def inverse(self) -> "GaussianRational":
        n = self.re * self.re + self.im * self.im
        if n == 0:
            raise ZeroDivision("division by zero in Q(i)")
        return GaussianRational(self.re * self.den, -self.im * self.den, n)

    def __truediv__(self, other):
        o = _coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = _coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result = ONE
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        o = _coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.re == o.re and self.im == o.im and self.den == o.den

    def __hash__(self):
        if self.im == 0:
            return hash(Fraction(self.re, self.den))
        return hash((self.re, self.im, self.den))

    def __repr__(self):
        return f"GaussianRational({self})"

    def __str__(self):
        return format_gaussian(self)


def format_gaussian(z: GaussianRational) -> str:
    """Render in the literal syntax accepted by the parsers."""
    re, im, den = z.re, z.im, z.den
    if im == 0:
        body = str(re)
        return body if den == 1 else f"{body}/{den}"
    if im == 1:
        ipart = "i"
    elif im == -1:
        ipart = "-i"
    else:
        ipart = f"{im}i"
    if re == 0:
        return ipart if den == 1 else f"{ipart}/{den}"
    sign = "" if ipart.startswith("-") else "+"
    body = f"{re}{sign}{ipart}"
    return body if den == 1 else f"({body})/{den}"


ZERO = GaussianRational._raw(0, 0, 1)
ONE = GaussianRational._raw(1, 0, 1)
I = GaussianRational._raw(0, 1, 1)


def _coerce(x):
    if isinstance(x, GaussianRational):
        return x
    if isinstance(x, int):
        return GaussianRational._raw(x, 0, 1)
    if isinstance(x, Rational):
        return GaussianRational(x.numerator, 0, x.denominator)
    if isinstance(x, complex):
        return NotImplemented
    return NotImplemented


def as_gaussian(x) -> GaussianRational:
    """Coerce ints, Fractions and Gaussian rationals; constant RatFuncs too."""
    if isinstance(x, RatFunc):
        c = x.constant_value()
        if c is None:
            raise TypeError(f"{x} is not constant")
        return c
    o = _coerce(x)
    if o is NotImplemented:
        raise TypeError(f"cannot interpret {x!r} as a Gaussian rational")
    return o


# ---------------------------------------------------------------------------
# polynomials


def _strip(re: list, im: list) -> None:
    while re and re[-1] == 0 and im[-1] == 0:
        re.pop()
        im.pop()


class UniPoly:
    """Polynomial in s with Q(i) coefficients.

    Stored as Gaussian-integer numerators ``re``/``im`` (index = degree) over a
    shared positive denominator ``den``; the content of (re, im, den) is 1.
    """

    __slots__ = ("re", "im", "den", "_hash")

    def __init__(self, coeffs=()):
        gs = [as_gaussian(c) for c in coeffs]
        den = 1
        for g in gs:
            den = den * g.den // gcd(den, g.den)
        re = [g.re * (den // g.den) for g in gs]
        im = [g.im * (den // g.den) for g in gs]
        self._set(re, im, den)

    @classmethod
    def _make(cls, re: list, im: list, den: int = 1) -> "UniPoly":
        obj = object.__new__(cls)
        obj._set(re, im, den)
        return obj

    def _set(self, re: list, im: list, den: int) -> None:
        _strip(re, im)
        if not re:
            den = 1
        else:
            if den < 0:
                re = [-x for x in re]
                im = [-x for x in im]
                den = -den
            g = den
            for x in re:
                if g == 1:
                    break
                g = gcd(g, x)
            for x in im:
                if g == 1:
                    break
                g = gcd(g, x)
            if g != 1:
                re = [x // g for x in re]
                im = [x // g for x in im]
                den //= g
        self.re = tuple(re)
        self.im = tuple(im)
        self.den = den
        self._hash = None

    # -- construction helpers
    @classmethod
    def constant(cls, c) -> "UniPoly":
        return cls((c,))

    @classmethod
    def monomial(cls, k: int, c=1) -> "UniPoly":
        return cls([0] * k + [c])

    @property
    def coeffs(self) -> tuple:
        return tuple(GaussianRational(r, i, self.den) for r, i in zip(self.re, self.im))

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.re) - 1

    def is_zero(self) -> bool:
        return not self.re

    def __bool__(self):
        return bool(self.re)

    def is_constant(self) -> bool:
        return len(self.re) <= 1

    def is_real(self) -> bool:
        return not any(self.im)

    def leading(self) -> GaussianRational:
        if not self.re:
            return ZERO
        return GaussianRational(self.re[-1], self.im[-1], self.den)

    def coeff(self, k: int) -> GaussianRational:
        if k >= len(self.re) or k < 0:
            return ZERO
        return GaussianRational(self.re[k], self.im[k], self.den)

    def __eq__(self, other):
        if not isinstance(other, UniPoly):
            return NotImplemented
        return self.den == other.den and self.re == other.re and self.im == other.im

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.re, self.im, self.den))
        return self._hash

    def __neg__(self):
        return UniPoly._make([-x for x in self.re], [-x for x in self.im], self.den)

    def __add__(self, other: "UniPoly") -> "UniPoly":
        a, b = self, other
        if not a.re:
            return b
        if not b.re:
            return a
        if a.den == b.den:
            fa = fb = 1
            den = a.den
        else:
            g = gcd(a.den, b.den)
            fa, fb = b.den // g, a.den // g
            den = a.den * fa
        n = max(len(a.re), len(b.re))
        re = [0] * n
        im = [0] * n
        for k, (x, y) in enumerate(zip(a.re, a.im)):
            re[k] = x * fa
            im[k] = y * fa
        for k, (x, y) in enumerate(zip(b.re, b.im)):
            re[k] += x * fb
            im[k] += y * fb
        return UniPoly._make(re, im, den)

    def __sub__(self, other: "UniPoly") -> "UniPoly":
        return self + (-other)

    def __mul__(self, other: "UniPoly") -> "UniPoly":
        a, b = self, other
        if not a.re or not b.re:
            return UniPoly._make([], [])
        n = len(a.re) + len(b.re) - 1
        re = [0] * n
        im = [0] * n
        b_real = not any(b.im)
        a_real = not any(a.im)
        if a_real and b_real:
            for i, x in enumerate(a.re):
                if x == 0:
                    continue
                for j, y in enumerate(b.re):
                    re[i + j] += x * y
        else:
            for i, (xr, xi) in enumerate(zip(a.re, a.im)):
                if xr == 0 and xi == 0:
                    continue
                for j, (yr, yi) in enumerate(zip(b.re, b.im)):
                    re[i + j] += xr * yr - xi * yi
                    im[i + j] += xr * yi + xi * yr
        return UniPoly._make(re, im, a.den * b.den)

    def scale(self, c: GaussianRational) -> "UniPoly":
        c = as_gaussian(c)
        if c.im == 0:
            return UniPoly._make([x * c.re for x in self.re], [x * c.re for x in self.im], self.den * c.den)
        re = [x * c.re - y * c.im for x, y in zip(self.re, self.im)]
        im = [x * c.im + y * c.re for x, y in zip(self.re, self.im)]
        return UniPoly._make(re, im, self.den * c.den)

    def monic(self) -> "UniPoly":
        if not self.re:
            return self
        return self.scale(self.leading().inverse())

    def divmod(self, other: "UniPoly"):
        """Euclidean division over Q(i)."""
        if not other.re:
            raise ZeroDivision("polynomial division by zero")
        if len(self.re) < len(other.re):
            return UniPoly._make([], []), self
        # work with the monic divisor so quotient coefficients stay tidy
        lc = other.leading()
        inv = lc.inverse()
        b = other.scale(inv)
        # remainder as Gaussian rationals over b's denominator frame
        rem = list(self.coeffs)
        db = len(b.re) - 1
        bcoef = b.coeffs
        q = [ZERO] * (len(rem) - db)
        for k in range(len(rem) - 1, db - 1, -1):
            c = rem[k]
            if not c:
                continue
            q[k - db] = c
            for j in range(db + 1):
                if bcoef[j]:
                    rem[k - db + j] = rem[k - db + j] - c * bcoef[j]
        quot = UniPoly(q).scale(inv)
        return quot, UniPoly(rem[:db])

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def exact_div(self, other: "UniPoly") -> "UniPoly":
        q, r = self.divmod(other)
        if r:
            raise ArithmeticError("inexact polynomial division")
        return q

    def __call__(self, p) -> GaussianRational:
        return self.evaluate(p)

    def evaluate(self, p) -> GaussianRational:
        p = as_gaussian(p)
        # Horner on Gaussian integers scaled by powers of p.den
        pr, pi, pd = p.re, p.im, p.den
        ar, ai = 0, 0
        scale = 1
        for k in range(len(self.re) - 1, -1, -1):
            # acc = acc * p + c_k, with acc held as (ar + ai i) / pd^m
            ar, ai = ar * pr - ai * pi, ar * pi + ai * pr
            scale_k = scale * pd
            ar += self.re[k] * scale_k
            ai += self.im[k] * scale_k
            scale = scale_k
        # each step multiplied the denominator by pd; first step is spurious
        if not self.re:
            return ZERO
        return GaussianRational(ar, ai, self.den * scale)

    def __repr__(self):
        return f"UniPoly({self})"

    def __str__(self):
        return format_poly(self, "s")


def poly_gcd(a: UniPoly, b: UniPoly) -> UniPoly:
    """Monic gcd over Q(i); gcd(0, 0) = 0."""
    while b.re:
        a, b = b, a % b
    return a.monic()


def format_poly(p: UniPoly, var: str = "s") -> str:
    if not p.re:
        return "0"
    parts = []
    for k in range(len(p.re) - 1, -1, -1):
        c = p.coeff(k)
        if not c:
            continue
        if k == 0:
            mono = ""
        elif k == 1:
            mono = var
        else:
            mono = f"{var}^{k}"
        if not mono:
            term = _paren_if_compound(c)
        elif c == ONE:
            term = mono
        elif c == -ONE:
            term = "-" + mono
        else:
            term = f"{_paren_if_compound(c)}*{mono}"
        parts.append(term)
    out = parts[0]
    for t in parts[1:]:
        out += " - " + t[1:] if t.startswith("-") else " + " + t
    return out


def _paren_if_compound(c: GaussianRational) -> str:
    s = str(c)
    if c.re != 0 and c.im != 0 and c.den == 1:
        return f"({s})"
    if c.den != 1 and not s.startswith("("):
        return f"({s})"
    return s


# ---------------------------------------------------------------------------
# rational functions

_POLY_ZERO = UniPoly._make([], [])
_POLY_ONE = UniPoly._make([1], [0])


class RatFunc:
    """Reduced fraction num/den of polynomials in s; den is monic."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num, den=None):
        if not isinstance(num, UniPoly):
            num = UniPoly.constant(num) if not isinstance(num, (list, tuple)) else UniPoly(num)
        if den is None:
            den = _POLY_ONE
        elif not isinstance(den, UniPoly):
            den = UniPoly.constant(den) if not isinstance(den, (list, tuple)) else UniPoly(den)
        if not den.re:
            raise ZeroDivision("rational function with zero denominator")
        if not num.re:
            self.num, self.den = _POLY_ZERO, _POLY_ONE
        elif len(den.re) == 1:
            self.num = num.scale(den.leading().inverse())
            self.den = _POLY_ONE
        else:
            g = poly_gcd(num, den)
            if g.degree > 0:
                num = num.exact_div(g)
                den = den.exact_div(g)
            lc = den.leading()
            if lc != ONE:
                inv = lc.inverse()
                num = num.scale(inv)
                den = den.scale(inv)
            self.num, self.den = num, den
        self._hash = None

    @classmethod
    def _raw(cls, num: UniPoly, den: UniPoly) -> "RatFunc":
        obj = object.__new__(cls)
        obj.num = num
        obj.den = den
        obj._hash = None
        return obj

    @classmethod
    def s(cls) -> "RatFunc":
        return cls._raw(UniPoly._make([0, 1], [0, 0]), _POLY_ONE)

    @classmethod
    def const(cls, c) -> "RatFunc":
        c = as_gaussian(c)
        if not c:
            return cls._raw(_POLY_ZERO, _POLY_ONE)
        return cls._raw(UniPoly._make([c.re], [c.im], c.den), _POLY_ONE)

    def is_zero(self) -> bool:
        return not self.num.re

    def __bool__(self):
        return bool(self.num.re)

    def is_constant(self) -> bool:
        return len(self.num.re) <= 1 and len(self.den.re) == 1

    def is_polynomial(self) -> bool:
        return len(self.den.re) == 1

    def constant_value(self):
        """The Q(i) value when constant, else None."""
        if not self.is_constant():
            return None
        return self.num.coeff(0)

    def __eq__(self, other):
        if isinstance(other, RatFunc):
            return self.num == other.num and self.den == other.den
        try:
            o = as_gaussian(other)
        except TypeError:
            return NotImplemented
        c = self.constant_value()
        return c is not None and c == o

    def __hash__(self):
        if self._hash is None:
            c = self.constant_value()
            self._hash = hash(c) if c is not None else hash((self.num, self.den))
        return self._hash

    def __neg__(self):
        return RatFunc._raw(-self.num, self.den)

    def __pos__(self):
        return self

    def __add__(self, other):
        o = as_ratfunc_or_none(other)
        if o is None:
            return NotImplemented
        if not self.num.re:
            return o
        if not o.num.re:
            return self
        if self.den == o.den:
            if len(self.den.re) == 1:
                return RatFunc._raw(self.num + o.num, _POLY_ONE)
            return RatFunc(self.num + o.num, self.den)
        return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __sub__(self, other):
        o = as_ratfunc_or_none(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = as_ratfunc_or_none(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = as_ratfunc_or_none(other)
        if o is None:
            return NotImplemented
        if not self.num.re or not o.num.re:
            return RatFunc._raw(_POLY_ZERO, _POLY_ONE)
        if len(self.den.re) == 1 and len(o.den.re) == 1:
            return RatFunc._raw(self.num * o.num, _POLY_ONE)
        return RatFunc(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if not self.num.re:
            raise ZeroDivision("division by the zero rational function")
        return RatFunc(self.den, self.num)

    def __truediv__(self, other):
        o = as_ratfunc_or_none(other)
        if o is None:
            return NotImplemented
        if not o.num.re:
            raise ZeroDivision("division by the zero rational function")
        return RatFunc(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        o = as_ratfunc_or_none(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result = RatFunc.const(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def eval_at(self, p) -> GaussianRational:
        p = as_gaussian(p)
        d = self.den.evaluate(p)
        if not d:
            raise PoleError(f"{self} has a pole at s = {p}", where=p)
        return self.num.evaluate(p) / d

    # the canonical form is gcd-reduced, so a vanishing denominator is a true pole
    limit_at = eval_at

    def substitute(self, g: "RatFunc") -> "RatFunc":
        """Composition self(g(s))."""
        return _poly_compose(self.num, g) / _poly_compose(self.den, g)

    def __repr__(self):
        return f"RatFunc({self})"

    def __str__(self):
        return format_ratfunc(self)


def _poly_compose(p: UniPoly, g: RatFunc) -> RatFunc:
    acc = RatFunc.const(0)
    for c in reversed(p.coeffs):
        acc = acc * g + RatFunc.const(c)
    return acc


def format_ratfunc(f: RatFunc, var: str = "s") -> str:
    num = format_poly(f.num, var)
    if f.is_polynomial():
        return num
    if len([c for c in f.num.re if c] + [c for c in f.num.im if c]) > 1 or f.num.degree > 0:
        num = f"({num})"
    return f"{num}/({format_poly(f.den, var)})"


def as_ratfunc_or_none(x):
    if isinstance(x, RatFunc):
        return x
    o = _coerce(x)
    if o is NotImplemented:
        return None
    return RatFunc.const(o)


def as_ratfunc(x) -> RatFunc:
    r = as_ratfunc_or_none(x)
    if r is None:
        raise TypeError(f"cannot interpret {x!r} as a rational function")
    return r
