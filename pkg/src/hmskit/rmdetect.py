"""Point counting for genus-2 curves over F_p / F_{p^2}, Weil polynomial
extraction, and the real-multiplication test.

For a curve y^2 = f(x) of good reduction, the counts n1 = #C(F_p) and
n2 = #C(F_{p^2}) determine the quartic Frobenius polynomial

    P(T) = T^4 - a T^3 + b T^2 - p a T + p^2,   a = p + 1 - n1,
                                                b = (a^2 - (p^2 + 1 - n2)) / 2,

and its symmetric quadratic Q(X) = X^2 - a X + (b - 2p) with
P(T) = T^2 Q(T + p/T).  Real multiplication by the order of discriminant D
over F_p forces disc(Q) = a^2 - 4b + 8p to be c^2 D.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

from .exactmath import FiniteField, quadratic_character
from .igusa import SexticForm

__all__ = [
    "CurveFF",
    "WeilData",
    "RMVerdict",
    "count_points",
    "weil_data",
    "rm_test",
    "is_P_irreducible",
]


class CurveFF:
    """y^2 = f(x) over F_p with f of degree 5 or 6 and nonzero binary-sextic
    discriminant (good reduction)."""

    __slots__ = ("form", "p")

    def __init__(self, form, p=None):
        if not isinstance(form, SexticForm):
            if p is None:
                raise ValueError("need a prime for integer coefficients")
            form = SexticForm(form, FiniteField(p))
        if form.field is None:
            raise ValueError("CurveFF needs finite-field coefficients")
        self.form = form
        self.p = form.field.p

    def coeffs(self):
        return self.form.coeffs

    def twist(self):
        """The quadratic twist y^2 = n f(x) by the fixed nonresidue n."""
        from .exactmath import smallest_nonresidue

        field = FiniteField(self.p)
        n = field(smallest_nonresidue(self.p))
        return CurveFF(SexticForm([n * c for c in self.form.coeffs], field))

    def __repr__(self):
        return f"CurveFF(p={self.p}, f={[c.a for c in self.form.coeffs]})"


@dataclass(frozen=True)
class WeilData:
    """Counts and the derived Frobenius data."""

    p: int
    n1: int
    n2: int
    a: int
    b: int

    def q_poly(self):
        """Q(X) = X^2 - a X + (b - 2p) as integer coefficients (c0, c1, c2)."""
        return (self.b - 2 * self.p, -self.a, 1)

    def disc_q(self):
        return self.a * self.a - 4 * self.b + 8 * self.p

    def p_poly(self):
        """P(T) coefficients ascending: (p^2, -pa, b, -a, 1)."""
        return (self.p**2, -self.p * self.a, self.b, -self.a, 1)


@dataclass(frozen=True)
class RMVerdict:
    """kind: 'rm_fp' (real multiplication over F_p, conductor dividing c),
    'rm_fp_ambiguous' (a = 0: the F_p / F_{p^2}-only cases are
    indistinguishable), 'no_rm', or 'inconclusive'."""

    kind: str
    conductor: int | None = None
    reason: str | None = None


def _good_reduction(curve):
    from .igusa import igusa_clebsch

    try:
        igusa_clebsch(curve.form)
        return True
    except ValueError:
        return False


def count_points(curve, degree=1):
    """#C(F_q) for the smooth projective curve, q = p^degree (degree 1 or 2).

    Affine points via the character sum sum_x (1 + chi(f(x))); at infinity:
    2 points if deg f = 6 and f6 is a square in F_q, 0 if f6 is a nonsquare,
    1 point if deg f = 5.
    """
    if degree not in (1, 2):
        raise ValueError("degree must be 1 or 2")
    p = curve.p
    if not _good_reduction(curve):
        raise ValueError("bad reduction: discriminant vanishes mod p")
    field = FiniteField(p, degree)
    coeffs = [field(c.a, 0) for c in curve.form.coeffs]
    total = 0
    for x in field.elements():
        acc = coeffs[6]
        for c in reversed(coeffs[:6]):
            acc = acc * x + c
        total += 1 + quadratic_character(acc)
    f6 = coeffs[6]
    if f6:
        chi = quadratic_character(f6)
        total += 1 + chi
    else:
        total += 1
    return total


def weil_data(n1, n2, p):
    """WeilData from counts over F_p and F_{p^2} (checks the Weil bounds and
    integrality of b)."""
    a = p + 1 - n1
    t2 = p * p + 1 - n2           # = a^2 - 2b
    if (a * a - t2) % 2:
        raise ValueError("inconsistent counts: b is not an integer")
    b = (a * a - t2) // 2
    if a * a > 16 * p or abs(b) > 6 * p:
        raise ValueError("counts violate the Weil bounds")
    return WeilData(p=p, n1=n1, n2=n2, a=a, b=b)


def is_P_irreducible(w):
    """Irreducibility of P(T) over Q by exhaustive search.

    P is monic integral of degree 4; any rational root is an integer dividing
    p^2, and any factorization into two monic integer quadratics has
    coefficients bounded by the Weil bounds, so both searches are finite.
    """
    c0, c1, c2, c3, c4 = w.p_poly()

    def P(t):
        return ((((c4 * t + c3) * t + c2) * t + c1) * t + c0)

    # rational (hence integer) roots divide p^2
    divisors = set()
    for d in (1, w.p, w.p * w.p):
        divisors.update((d, -d))
    if any(P(d) == 0 for d in divisors):
        return False
    # T^4 + c3 T^3 + c2 T^2 + c1 T + c0 = (T^2 + uT + v)(T^2 + sT + t_)
    # v t_ = p^2; v + t_ + us = c2; s + u = c3; u t_ + s v = c1
    p2 = w.p * w.p
    vs = []
    for v in range(-p2, p2 + 1):
        if v != 0 and p2 % v == 0:
            vs.append(v)
    for v in vs:
        t_ = p2 // v
        for u in range(-4 * isqrt(w.p) - 2, 4 * isqrt(w.p) + 3):
            s = c3 - u
            if v + t_ + u * s != c2:
                continue
            if u * t_ + s * v == c1:
                return False
    return True


def rm_test(w, D):
    """Real-multiplication verdict for discriminant D from Weil data.

    Requires P irreducible (else inconclusive).  disc(Q) = c^2 D certifies
    real multiplication by an order of conductor dividing c over F_p; with
    a = 0 the evidence cannot distinguish RM defined over F_p from RM defined
    only over F_{p^2}, and the verdict says so.
    """
    from .ellsurf import _is_fundamental

    if not _is_fundamental(D):
        raise ValueError(f"{D} is not a fundamental discriminant")
    if not is_P_irreducible(w):
        return RMVerdict("inconclusive", reason="P(T) reducible over Q")
    disc = w.disc_q()
    if disc > 0 and disc % D == 0:
        c2, rem = divmod(disc, D)
        c = isqrt(c2)
        if rem == 0 and c * c == c2:
            if w.a == 0:
                return RMVerdict("rm_fp_ambiguous", conductor=c,
                                 reason="a = 0: F_p vs F_p^2-only is undecidable from counts")
            return RMVerdict("rm_fp", conductor=c)
    return RMVerdict("no_rm")
