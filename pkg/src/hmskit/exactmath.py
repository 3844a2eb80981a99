"""Exact scalar and polynomial arithmetic over Q, F_p and F_{p^2}.

Rationals are plain ``fractions.Fraction`` (arbitrary precision, always
reduced, positive denominator -- exactly the invariants we need).  Finite
fields are implemented here; F_{p^2} is realized as F_p(w) with w^2 equal to
the smallest quadratic nonresidue mod p, so field towers are reproducible.
No floating point is used anywhere.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt

__all__ = [
    "FiniteField",
    "FiniteFieldElem",
    "UniPoly",
    "BiPoly",
    "RationalFunction",
    "resultant",
    "discriminant",
    "is_rational_square",
    "quadratic_character",
    "squarefree_factor",
]


# ---------------------------------------------------------------------------
# finite fields


def smallest_nonresidue(p):
    """Smallest quadratic nonresidue mod an odd prime p."""
    for n in range(2, p):
        if pow(n, (p - 1) // 2, p) == p - 1:
            return n
    raise ValueError(f"no nonresidue mod {p}")


class FiniteField:
    """F_p (degree 1) or F_{p^2} = F_p(w), w^2 = n with n the smallest
    nonresidue mod p (degree 2).  Instances are interned per (p, degree)."""

    _cache = {}

    def __new__(cls, p, degree=1):
        key = (p, degree)
        if key in cls._cache:
            return cls._cache[key]
        if p < 3 or any(p % q == 0 for q in range(2, isqrt(p) + 1)):
            raise ValueError(f"characteristic must be an odd prime, got {p}")
        if degree not in (1, 2):
            raise ValueError("degree must be 1 or 2")
        self = object.__new__(cls)
        self.p = p
        self.degree = degree
        self.order = p**degree
        self.nonresidue = smallest_nonresidue(p) if degree == 2 else None
        cls._cache[key] = self
        return self

    def __call__(self, a, b=0):
        if isinstance(a, FiniteFieldElem):
            if a.field.p != self.p:
                raise ValueError("characteristic mismatch")
            a, b2 = a.a, a.b
            if b2 != 0 and self.degree == 1:
                raise ValueError("cannot coerce F_p^2 element into F_p")
            return FiniteFieldElem(self, a, b2)
        if isinstance(a, Fraction):
            den = a.denominator % self.p
            if den == 0:
                raise ZeroDivisionError("denominator divisible by p")
            a = a.numerator * pow(den, self.p - 2, self.p)
        if b and self.degree == 1:
            raise ValueError("degree-1 field has no w component")
        return FiniteFieldElem(self, a % self.p, b % self.p)

    def zero(self):
        return self(0)

    def one(self):
        return self(1)

    def elements(self):
        if self.degree == 1:
            return (self(a) for a in range(self.p))
        return (self(a, b) for a in range(self.p) for b in range(self.p))

    def __repr__(self):
        return f"GF({self.p})" if self.degree == 1 else f"GF({self.p}^2)"


class FiniteFieldElem:
    """a + b*w in F_p or F_{p^2} (b = 0 in degree 1)."""

    __slots__ = ("field", "a", "b")

    def __init__(self, field, a, b=0):
        self.field = field
        self.a = a % field.p
        self.b = b % field.p

    def _coerce(self, other):
        if isinstance(other, FiniteFieldElem):
            if other.field.p != self.field.p:
                raise ValueError("characteristic mismatch")
            return other
        if isinstance(other, (int, Fraction)):
            return self.field(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FiniteFieldElem(self.field, self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return FiniteFieldElem(self.field, -self.a, -self.b)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FiniteFieldElem(self.field, self.a - o.a, self.b - o.b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        p = self.field.p
        if self.field.degree == 1:
            return FiniteFieldElem(self.field, self.a * o.a % p)
        n = self.field.nonresidue
        return FiniteFieldElem(
            self.field,
            (self.a * o.a + n * self.b * o.b) % p,
            (self.a * o.b + self.b * o.a) % p,
        )

    __rmul__ = __mul__

    def inverse(self):
        p = self.field.p
        if self.field.degree == 1:
            if self.a == 0:
                raise ZeroDivisionError("inverse of zero")
            return FiniteFieldElem(self.field, pow(self.a, p - 2, p))
        # (a + bw)^-1 = (a - bw) / (a^2 - n b^2)
        n = self.field.nonresidue
        norm = (self.a * self.a - n * self.b * self.b) % p
        if norm == 0:
            raise ZeroDivisionError("inverse of zero")
        ninv = pow(norm, p - 2, p)
        return FiniteFieldElem(self.field, self.a * ninv, -self.b * ninv)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, e):
        if e < 0:
            return self.inverse() ** (-e)
        result = self.field.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            try:
                other = self.field(other)
            except ZeroDivisionError:
                return False
        if not isinstance(other, FiniteFieldElem):
            return NotImplemented
        return (
            self.field.p == other.field.p
            and self.a == other.a
            and self.b == other.b
        )

    def __hash__(self):
        return hash((self.field.p, self.a, self.b))

    def __bool__(self):
        return self.a != 0 or self.b != 0

    def frobenius(self):
        """x -> x^p; conjugation a + bw -> a - bw in degree 2."""
        if self.field.degree == 1:
            return self
        return FiniteFieldElem(self.field, self.a, -self.b)

    def __repr__(self):
        if self.field.degree == 1 or self.b == 0:
            return f"{self.a}"
        return f"{self.a}+{self.b}w"


def quadratic_character(x):
    """0 if x = 0, +1 if x is a nonzero square in its field, else -1.

    Works in F_p and F_{p^2} via x^((q-1)/2).
    """
    if isinstance(x, int):
        raise TypeError("need a FiniteFieldElem (wrap ints in a field first)")
    if not x:
        return 0
    q = x.field.order
    r = x ** ((q - 1) // 2)
    if r == 1:
        return 1
    return -1


# ---------------------------------------------------------------------------
# univariate polynomials

def _ring_of(values):
    for v in values:
        if isinstance(v, FiniteFieldElem):
            return v.field
    return None


class UniPoly:
    """Dense univariate polynomial; coefficients are Fractions or
    FiniteFieldElems (one ring per polynomial).  Degree of 0 is -1."""

    __slots__ = ("coeffs", "field")

    def __init__(self, coeffs, field=None):
        if field is None:
            field = _ring_of(coeffs)
        if field is None:
            coeffs = [c if isinstance(c, Fraction) else Fraction(c) for c in coeffs]
        else:
            coeffs = [c if isinstance(c, FiniteFieldElem) else field(c) for c in coeffs]
        while coeffs and not coeffs[-1]:
            coeffs.pop()
        self.coeffs = coeffs
        self.field = field

    # -- construction helpers
    @classmethod
    def zero(cls, field=None):
        return cls([], field)

    @classmethod
    def constant(cls, c, field=None):
        return cls([c], field)

    @classmethod
    def x(cls, field=None):
        return cls([0, 1], field)

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    def __getitem__(self, i):
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return self._zero_scalar()

    def _zero_scalar(self):
        return self.field.zero() if self.field else Fraction(0)

    def _one_scalar(self):
        return self.field.one() if self.field else Fraction(1)

    def lc(self):
        if not self.coeffs:
            raise ValueError("leading coefficient of zero polynomial")
        return self.coeffs[-1]

    def _wrap(self, other):
        if isinstance(other, UniPoly):
            return other
        return UniPoly([other], self.field)

    def __add__(self, other):
        o = self._wrap(other)
        n = max(len(self.coeffs), len(o.coeffs))
        return UniPoly(
            [self[i] + o[i] for i in range(n)], self.field or o.field
        )

    __radd__ = __add__

    def __neg__(self):
        return UniPoly([-c for c in self.coeffs], self.field)

    def __sub__(self, other):
        return self + (-self._wrap(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._wrap(other)
        if self.is_zero() or o.is_zero():
            return UniPoly.zero(self.field or o.field)
        out = [self._zero_scalar()] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(o.coeffs):
                out[i + j] = out[i + j] + a * b
        return UniPoly(out, self.field or o.field)

    __rmul__ = __mul__

    def __pow__(self, e):
        result = UniPoly.constant(self._one_scalar(), self.field)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def divmod(self, other):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        q = UniPoly.zero(self.field or other.field)
        r = self
        dlc = other.lc()
        dd = other.degree
        while not r.is_zero() and r.degree >= dd:
            shift = r.degree - dd
            c = r.lc() / dlc
            term = UniPoly([self._zero_scalar()] * shift + [c], self.field or other.field)
            q = q + term
            r = r - term * other
        return q, r

    def __floordiv__(self, other):
        return self.divmod(self._wrap(other))[0]

    def __mod__(self, other):
        return self.divmod(self._wrap(other))[1]

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, FiniteFieldElem)):
            other = self._wrap(other)
        if not isinstance(other, UniPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(tuple(self.coeffs))

    def __call__(self, x):
        acc = None
        for c in reversed(self.coeffs):
            acc = c if acc is None else acc * x + c
        if acc is None:
            if isinstance(x, FiniteFieldElem):
                return x.field.zero()
            return self._zero_scalar()
        return acc

    def derivative(self):
        return UniPoly(
            [i * c for i, c in enumerate(self.coeffs)][1:], self.field
        )

    def monic(self):
        if self.is_zero():
            return self
        inv = self._one_scalar() / self.lc()
        return UniPoly([c * inv for c in self.coeffs], self.field)

    def gcd(self, other):
        a, b = self, self._wrap(other)
        while not b.is_zero():
            a, b = b, a % b
        if a.is_zero():
            return a
        return a.monic()

    def shift(self, k):
        """Multiply by x^k."""
        if self.is_zero():
            return self
        return UniPoly([self._zero_scalar()] * k + list(self.coeffs), self.field)

    def reverse(self, n=None):
        """Coefficient reversal t -> 1/t cleared to degree n (default: degree)."""
        if n is None:
            n = self.degree
        if n < self.degree:
            raise ValueError("reversal degree too small")
        cs = [self[i] for i in range(n + 1)]
        return UniPoly(list(reversed(cs)), self.field)

    def compose(self, other):
        """self(other(x))."""
        acc = UniPoly.zero(self.field or other.field)
        for c in reversed(self.coeffs):
            acc = acc * other + c
        return acc

    def content_primitive(self):
        """(content, primitive part) for rational coefficients: content is the
        positive rational c with self = c * primitive, primitive integral with
        gcd of coefficients 1 and sign following the leading coefficient."""
        if self.field is not None:
            raise ValueError("content only for rational coefficients")
        if self.is_zero():
            return Fraction(0), self
        from math import gcd, lcm
        den = 1
        for c in self.coeffs:
            den = lcm(den, c.denominator)
        ints = [int(c * den) for c in self.coeffs]
        g = 0
        for v in ints:
            g = gcd(g, v)
        prim = [Fraction(v // g) for v in ints]
        return Fraction(g, den), UniPoly(prim)

    def __repr__(self):
        if self.is_zero():
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            if i == 0:
                parts.append(f"{c}")
            elif i == 1:
                parts.append(f"{c}*t")
            else:
                parts.append(f"{c}*t^{i}")
        return " + ".join(parts)


def resultant(f, g):
    """Res(f, g) by the Euclidean chain with leading-coefficient bookkeeping.
    Zero iff f and g share a root in the algebraic closure."""
    if f.is_zero() and g.is_zero():
        raise ValueError("undefined resultant")
    one = g._one_scalar() if f.is_zero() else f._one_scalar()
    if f.is_zero() or g.is_zero():
        return one * 0
    if f.degree == 0:
        return f.lc() ** g.degree
    if g.degree == 0:
        return g.lc() ** f.degree
    # Res(a, b) = (-1)^(deg a * deg b) * lc(b)^(deg a - deg r) * Res(b, r)
    a, b = f, g
    acc = one
    sign = 1
    while True:
        r = a % b
        if r.is_zero():
            if b.degree > 0:
                return one * 0
            return acc * (b.lc() ** a.degree) * sign
        acc = acc * (b.lc() ** (a.degree - r.degree))
        if (a.degree % 2) and (b.degree % 2):
            sign = -sign
        a, b = b, r
        if b.degree == 0:
            return acc * (b.lc() ** a.degree) * sign


def discriminant(f):
    """disc(f) = (-1)^(d(d-1)/2) Res(f, f') / lc(f)."""
    d = f.degree
    if d < 1:
        raise ValueError("discriminant needs degree >= 1")
    sign = -1 if (d * (d - 1) // 2) % 2 else 1
    return sign * resultant(f, f.derivative()) / f.lc()


def is_rational_square(q):
    """Square root of q in Q if q is a perfect rational square, else None."""
    if not isinstance(q, Fraction):
        q = Fraction(q)
    if q < 0:
        return None
    if q == 0:
        return Fraction(0)
    rn = isqrt(q.numerator)
    rd = isqrt(q.denominator)
    if rn * rn == q.numerator and rd * rd == q.denominator:
        return Fraction(rn, rd)
    return None


def squarefree_factor(f):
    """Squarefree decomposition over Q via gcd(f, f') recursion (Yun).

    Returns a list of (monic squarefree factor, multiplicity) with pairwise
    coprime factors; the product of factor^mult times a rational constant
    recovers f.  No irreducible factorization is attempted.
    """
    if f.is_zero():
        raise ValueError("squarefree decomposition of zero")
    if f.field is not None:
        raise ValueError("squarefree_factor is defined over Q")
    f = f.monic()
    if f.degree == 0:
        return []
    out = []
    df = f.derivative()
    a = f.gcd(df)
    b = f // a          # product of squarefree parts
    c = df // a
    d = c - b.derivative()
    i = 1
    while b.degree > 0:
        p = b.gcd(d)
        if p.degree > 0:
            out.append((p, i))
        b = b // p
        c = d // p
        d = c - b.derivative()
        i += 1
    return out


# ---------------------------------------------------------------------------
# sparse bivariate polynomials over Q


class BiPoly:
    """Sparse polynomial in two variables over Q: {(i, j): coeff} for r^i s^j."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        t = {}
        if terms:
            for (i, j), c in terms.items():
                c = c if isinstance(c, Fraction) else Fraction(c)
                if c:
                    t[(i, j)] = c
        self.terms = t

    @classmethod
    def constant(cls, c):
        return cls({(0, 0): Fraction(c)})

    @classmethod
    def var(cls, which):
        if which == 0:
            return cls({(1, 0): Fraction(1)})
        return cls({(0, 1): Fraction(1)})

    def is_zero(self):
        return not self.terms

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = BiPoly.constant(other)
        t = dict(self.terms)
        for k, c in other.terms.items():
            t[k] = t.get(k, Fraction(0)) + c
        return BiPoly(t)

    __radd__ = __add__

    def __neg__(self):
        return BiPoly({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = BiPoly.constant(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            other = BiPoly.constant(other)
        t = {}
        for (i1, j1), c1 in self.terms.items():
            for (i2, j2), c2 in other.terms.items():
                k = (i1 + i2, j1 + j2)
                t[k] = t.get(k, Fraction(0)) + c1 * c2
        return BiPoly(t)

    __rmul__ = __mul__

    def __pow__(self, e):
        result = BiPoly.constant(1)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = BiPoly.constant(other)
        if not isinstance(other, BiPoly):
            return NotImplemented
        return self.terms == other.terms

    def __call__(self, r, s):
        """Exact evaluation; r, s may be Fractions, FiniteFieldElems, or
        RationalFunctions (anything with ring arithmetic)."""
        total = None
        for (i, j), c in self.terms.items():
            term = c
            if i:
                term = r**i * term
            if j:
                term = s**j * term
            total = term if total is None else total + term
        if total is None:
            return Fraction(0) if isinstance(r, Fraction) else r * 0
        return total

    def content(self):
        """Positive rational content (gcd of coefficients)."""
        from math import gcd, lcm
        if not self.terms:
            return Fraction(0)
        den = 1
        for c in self.terms.values():
            den = lcm(den, c.denominator)
        g = 0
        for c in self.terms.values():
            g = gcd(g, int(c * den))
        return Fraction(abs(g), den)

    def degree(self, var=None):
        if not self.terms:
            return -1
        if var is None:
            return max(i + j for (i, j) in self.terms)
        return max(k[var] for k in self.terms)

    def coeffs_in(self, var):
        """Coefficients as UniPolys in the other variable, ascending in `var`."""
        d = self.degree(var)
        other = 1 - var
        out = []
        for k in range(d + 1):
            sub = {}
            for (i, j), c in self.terms.items():
                idx = (i, j)[var]
                if idx == k:
                    sub[(i, j)[other]] = c
            m = max(sub) if sub else -1
            out.append(UniPoly([sub.get(t, Fraction(0)) for t in range(m + 1)]))
        return out

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for (i, j), c in sorted(self.terms.items()):
            bits.append(f"{c}*r^{i}*s^{j}")
        return " + ".join(bits)


# ---------------------------------------------------------------------------
# rational functions over Q


class RationalFunction:
    """num/den with UniPoly over Q, reduced on construction, den monic."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        if not isinstance(num, UniPoly):
            num = UniPoly([num])
        if den is None:
            den = UniPoly([Fraction(1)])
        elif not isinstance(den, UniPoly):
            den = UniPoly([den])
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.field is not None or den.field is not None:
            raise ValueError("RationalFunction is defined over Q")
        g = num.gcd(den)
        if not g.is_zero() and g.degree > 0:
            num = num // g
            den = den // g
        if not num.is_zero():
            # normalize: monic denominator
            lc = den.lc()
            num = num * (Fraction(1) / lc)
            den = den * (Fraction(1) / lc)
        else:
            den = UniPoly([Fraction(1)])
        self.num = num
        self.den = den

    @classmethod
    def t(cls):
        return cls(UniPoly.x())

    def _wrap(self, other):
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, UniPoly):
            return RationalFunction(other)
        return RationalFunction(UniPoly([other]))

    def __add__(self, other):
        o = self._wrap(other)
        return RationalFunction(
            self.num * o.den + o.num * self.den, self.den * o.den
        )

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other):
        return self + (-self._wrap(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._wrap(other)
        return RationalFunction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._wrap(other)
        if o.num.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return RationalFunction(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        return self._wrap(other) / self

    def __pow__(self, e):
        if e < 0:
            return (self._wrap(1) / self) ** (-e)
        return RationalFunction(self.num**e, self.den**e)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, UniPoly)):
            other = self._wrap(other)
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def is_zero(self):
        return self.num.is_zero()

    def __call__(self, x):
        d = self.den(x)
        if not d:
            raise ZeroDivisionError("pole at evaluation point")
        return self.num(x) / d

    def __repr__(self):
        if self.den.degree == 0:
            return f"({self.num})"
        return f"({self.num})/({self.den})"
