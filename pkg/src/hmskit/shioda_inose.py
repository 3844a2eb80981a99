"""The explicit dictionary between genus-2 invariant points and elliptic K3
surfaces with E8 + E7 fibers, and the product-of-elliptic-curves degeneration.

The K3 model is y^2 = x^3 + t^3 (a t + a') x + t^5 (b'' t^2 + b t + b').
For a' != 0 the fibers at t = infinity and t = 0 have types II* (E8) and
III* (E7); a' = 0 promotes the E7 fiber to E8, and the surface then comes
from a product of two elliptic curves whose j-invariants are the roots of
the quadratic returned by inose_j_pair.
"""

from __future__ import annotations

from fractions import Fraction

from .exactmath import UniPoly
from .igusa import IgusaClebsch

__all__ = ["K3Model", "k3_from_ic", "ic_from_k3", "inose_j_pair"]


class K3Model:
    """Coefficients (a, a', b'', b, b') of the E8+E7 family."""

    __slots__ = ("a", "ap", "bpp", "b", "bp")

    def __init__(self, a, ap, bpp, b, bp):
        a, ap, bpp, b, bp = (Fraction(v) for v in (a, ap, bpp, b, bp))
        if not bpp:
            raise ValueError("b'' = 0 gives a rational elliptic surface, not a K3")
        if not ap and not bp:
            raise ValueError("a' = b' = 0 gives a rational elliptic surface")
        self.a = a
        self.ap = ap
        self.bpp = bpp
        self.b = b
        self.bp = bp

    def weierstrass(self):
        """The model as (a4(t), a6(t)) for y^2 = x^3 + a4 x + a6 over Q[t]."""
        z = Fraction(0)
        a4 = UniPoly([z, z, z, self.ap, self.a])
        a6 = UniPoly([z, z, z, z, z, self.bp, self.b, self.bpp])
        return a4, a6

    def astuple(self):
        return (self.a, self.ap, self.bpp, self.b, self.bp)

    def __eq__(self, other):
        if not isinstance(other, K3Model):
            return NotImplemented
        return self.astuple() == other.astuple()

    def __repr__(self):
        return f"K3Model(a={self.a}, a'={self.ap}, b''={self.bpp}, b={self.b}, b'={self.bp})"


def k3_from_ic(ic):
    """K3 surface with E8 and E7 fibers attached to an invariant point:

        y^2 = x^3 - t^3 (I4/12 t + 1) x + t^5 (I10/4 t^2 + (I2 I4 - 3 I6)/108 t + I2/24)
    """
    i2, i4, i6, i10 = (Fraction(v) for v in ic.astuple())
    if not i10:
        raise ValueError("degenerate abelian surface: I10 = 0")
    return K3Model(
        a=-i4 / 12,
        ap=Fraction(-1),
        bpp=i10 / 4,
        b=(i2 * i4 - 3 * i6) / 108,
        bp=i2 / 24,
    )


def ic_from_k3(m):
    """Invariant point of an E8+E7 model with a' != 0.

    Under (x, y, t) -> (lam^2 x, lam^3 y, mu t) the coefficients scale as
    a -> a mu^4/lam^4, a' -> a' mu^3/lam^4, b'' -> b'' mu^7/lam^6,
    b -> b mu^6/lam^6, b' -> b' mu^5/lam^6.  Taking lam = mu = -a' scales
    a' to -1 rationally while fixing a and b; inverting the coefficient map
    of k3_from_ic then gives the invariants.  The residual scaling freedom
    only moves the result inside its weighted-projective class.
    """
    a, ap, bpp, b, bp = m.astuple()
    if not ap:
        raise ValueError("product case (a' = 0); use inose_j_pair")
    # Normalize a' -> -1: under t -> c t, x -> c^2 x, y -> c^3 y (lam = c),
    # a t^4 + a' t^3 maps to (a c^4 t^4 + a' c^3 t^3) / c^4 after dividing the
    # equation by c^6, i.e. a -> a, a' -> a'/c.  Take c = -ap.
    c = -ap
    a1 = a
    ap1 = ap / c          # = -1
    bpp1 = bpp * c
    b1 = b
    bp1 = bp / c
    assert ap1 == -1
    i4 = -12 * a1
    i10 = 4 * bpp1
    i2 = 24 * bp1
    i6 = (i2 * i4 - 108 * b1) / 3
    return IgusaClebsch(i2, i4, i6, i10)


def inose_j_pair(m):
    """Monic quadratic X^2 - s X + p over Q whose roots are the j-invariants
    (j1, j2) of the two elliptic curves in the a' = 0 (Inose product) case:

        j1 j2 = -a^3 / (27 b' b''),   (1 - j1)(1 - j2) = b^2 / (4 b' b'').

    The symmetric pair is returned rather than the roots: the j-invariants
    are only defined as a Galois-stable pair.
    """
    a, ap, bpp, b, bp = m.astuple()
    if ap:
        raise ValueError("inose_j_pair needs the degenerate case a' = 0")
    if not (bp and bpp):
        raise ValueError("b' b'' = 0")
    prod = -(a**3) / (27 * bp * bpp)
    s = 1 + prod - b**2 / (4 * bp * bpp)
    return UniPoly([prod, -s, Fraction(1)])
