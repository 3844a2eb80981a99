"""Igusa-Clebsch invariants of genus-2 sextic/quintic models.

The invariant point (I2 : I4 : I6 : I10) lives in weighted projective space
with weights (1, 2, 3, 5): rescaling by lambda multiplies the coordinates by
(lambda, lambda^2, lambda^3, lambda^5).  I10 is the discriminant of the
binary sextic, which is nonzero exactly when y^2 = f(x) is a smooth genus-2
model (quintics count as binary sextics with a root at infinity).
"""

from __future__ import annotations

from fractions import Fraction

from ._invariant_tables import I2_TERMS, I4_TERMS, I6_TERMS, I10_TERMS
from .exactmath import FiniteFieldElem, quadratic_character

__all__ = [
    "SexticForm",
    "IgusaClebsch",
    "igusa_clebsch",
    "weighted_equal",
    "canonical_rep",
]


class SexticForm:
    """Coefficients (f0, ..., f6) of f(x) = f6 x^6 + ... + f0 over Q or F_p.

    Requires degree 5 or 6 (f5 or f6 nonzero)."""

    __slots__ = ("coeffs", "field")

    def __init__(self, coeffs, field=None):
        coeffs = list(coeffs)
        if len(coeffs) > 7:
            raise ValueError("at most 7 coefficients (f0..f6)")
        coeffs += [0] * (7 - len(coeffs))
        if field is not None:
            coeffs = [c if isinstance(c, FiniteFieldElem) else field(c) for c in coeffs]
        elif any(isinstance(c, FiniteFieldElem) for c in coeffs):
            field = next(c.field for c in coeffs if isinstance(c, FiniteFieldElem))
            coeffs = [c if isinstance(c, FiniteFieldElem) else field(c) for c in coeffs]
        else:
            coeffs = [Fraction(c) for c in coeffs]
        if not coeffs[6] and not coeffs[5]:
            raise ValueError("degree must be 5 or 6 (f5 or f6 nonzero)")
        self.coeffs = tuple(coeffs)
        self.field = field

    @classmethod
    def from_descending(cls, coeffs, field=None):
        """Build from f6, f5, ..., f0 order (degree-descending)."""
        coeffs = list(coeffs)
        coeffs = [0] * (7 - len(coeffs)) + coeffs
        return cls(list(reversed(coeffs)), field)

    @property
    def degree(self):
        return 6 if self.coeffs[6] else 5

    def __call__(self, x):
        acc = None
        for c in reversed(self.coeffs):
            acc = c if acc is None else acc * x + c
        return acc

    def __eq__(self, other):
        if not isinstance(other, SexticForm):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"SexticForm{self.coeffs}"


class IgusaClebsch:
    """Weighted-projective invariant tuple (I2, I4, I6, I10)."""

    __slots__ = ("i2", "i4", "i6", "i10")

    def __init__(self, i2, i4, i6, i10):
        self.i2 = i2
        self.i4 = i4
        self.i6 = i6
        self.i10 = i10

    def astuple(self):
        return (self.i2, self.i4, self.i6, self.i10)

    def scale(self, lam):
        return IgusaClebsch(
            lam * self.i2, lam**2 * self.i4, lam**3 * self.i6, lam**5 * self.i10
        )

    def __eq__(self, other):
        if not isinstance(other, IgusaClebsch):
            return NotImplemented
        return self.astuple() == other.astuple()

    def __repr__(self):
        return f"IgusaClebsch{self.astuple()}"


def _eval_terms(terms, fs, zero):
    total = zero
    for mon, cf in terms:
        v = cf
        term = None
        for c, e in zip(fs, mon):
            if e:
                term = c**e if term is None else term * c**e
        total = total + (v * term if term is not None else v)
    return total


def igusa_clebsch(f):
    """Igusa-Clebsch invariants of a SexticForm (degree 5 or 6).

    Raises on singular models (vanishing binary-sextic discriminant)."""
    if not isinstance(f, SexticForm):
        f = SexticForm(f)
    fs = f.coeffs
    zero = fs[0] * 0
    i2 = _eval_terms(I2_TERMS, fs, zero)
    i4 = _eval_terms(I4_TERMS, fs, zero)
    i6 = _eval_terms(I6_TERMS, fs, zero)
    i10 = _eval_terms(I10_TERMS, fs, zero)
    if not i10:
        raise ValueError("singular model: discriminant of the binary sextic is zero")
    return IgusaClebsch(i2, i4, i6, i10)


def _int_kth_root(n, k):
    """Exact k-th root of a nonnegative integer, or None."""
    if n < 0:
        return None
    if n in (0, 1):
        return n
    lo, hi = 1, 1 << ((n.bit_length() + k - 1) // k + 1)
    while lo < hi:
        mid = (lo + hi) // 2
        if mid**k < n:
            lo = mid + 1
        else:
            hi = mid
    return lo if lo**k == n else None


def _has_kth_root(r, k):
    """True iff x^k = r is solvable in the scalar's field (Q or F_q)."""
    if isinstance(r, FiniteFieldElem):
        q = r.field.order
        from math import gcd

        g = gcd(k, q - 1)
        return r ** ((q - 1) // g) == 1
    if k % 2 == 0 and r < 0:
        return False
    num, den = abs(r.numerator), r.denominator
    return _int_kth_root(num, k) is not None and _int_kth_root(den, k) is not None


def weighted_equal(a, b):
    """True iff there is a scalar lambda != 0 in the base field with
    b = (lam*I2, lam^2*I4, lam^3*I6, lam^5*I10) applied to a.

    One lambda must work for every coordinate simultaneously; when some
    coordinates vanish the scalar is pinned through a coprime pair of the
    surviving weights, and when only a single weight survives the test
    reduces to k-th-power solvability in the base field.
    """
    u = a.astuple()
    v = b.astuple()
    for x, y in zip(u, v):
        if bool(x) != bool(y):
            return False
    weights = (1, 2, 3, 5)
    live = [k for k in range(4) if u[k]]
    if not live:
        return True

    def ratio(k):
        return v[k] / u[k]

    def check(lam):
        return all(v[k] == lam ** weights[k] * u[k] for k in live)

    wset = {weights[k]: k for k in live}
    if 1 in wset:
        return check(ratio(wset[1]))
    if 2 in wset and 3 in wset:
        return check(ratio(wset[3]) / ratio(wset[2]))
    if 2 in wset and 5 in wset:
        return check(ratio(wset[5]) / ratio(wset[2]) ** 2)
    if 3 in wset and 5 in wset:
        return check(ratio(wset[3]) ** 2 / ratio(wset[5]))
    # a single surviving weight
    (w, k), = wset.items()
    return _has_kth_root(ratio(k), w)


def canonical_rep(a, field=None):
    """Lexicographically smallest tuple in the weighted F_p* orbit of a.

    The representative is constant on weighted orbits and distinct across
    them, so it serves as a dictionary key for invariant tables."""
    u = a.astuple()
    if field is None:
        field = next(
            (x.field for x in u if isinstance(x, FiniteFieldElem)), None
        )
    if field is None:
        raise ValueError("canonical_rep needs invariants over a finite field")
    if field.degree != 1:
        raise ValueError("canonical_rep is defined over prime fields")
    vals = [x if isinstance(x, FiniteFieldElem) else field(x) for x in u]
    if not any(vals):
        raise ValueError("canonical_rep of the zero tuple")
    p = field.p
    a2, a4, a6, a10 = (v.a for v in vals)
    best = None
    for t in range(1, p):
        t2 = t * t % p
        t3 = t2 * t % p
        t5 = t2 * t3 % p
        cand = (t * a2 % p, t2 * a4 % p, t3 * a6 % p, t5 * a10 % p)
        if best is None or cand < best:
            best = cand
    return IgusaClebsch(*(field(c) for c in best))
