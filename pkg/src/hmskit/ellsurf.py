"""Elliptic surfaces over Q(t): c4/c6/Delta, Kodaira fiber classification,
sections, Jacobians of genus-1 quartics, Mordell-Weil heights, and the
Neron-Severi discriminant bookkeeping.

Places of bad reduction are squarefree factors of Delta over Q (plus t =
infinity); classification never factors into irreducibles.  Since residues
have characteristic zero, the fiber type is a pure function of the valuation
triple (v(c4), v(c6), v(Delta)) at a minimal model.
"""

from __future__ import annotations

from fractions import Fraction

from .exactmath import (
    RationalFunction,
    UniPoly,
    squarefree_factor,
)

__all__ = [
    "WeierstrassQt",
    "KodairaFiber",
    "SectionQt",
    "LatticeGram",
    "c4_c6_delta",
    "kodaira_classify",
    "verify_section",
    "jacobian_of_quartic",
    "j_invariant",
    "fiber_contribution",
    "section_height",
    "shioda_tate_disc",
    "od_gram",
]


def _upoly(v):
    if isinstance(v, UniPoly):
        return v
    if isinstance(v, (list, tuple)):
        return UniPoly([Fraction(c) for c in v])
    return UniPoly([Fraction(v)])


class WeierstrassQt:
    """Long Weierstrass model y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6
    with ai in Q[t]; short models go in with a1 = a2 = a3 = 0."""

    __slots__ = ("a1", "a2", "a3", "a4", "a6")

    def __init__(self, a1=0, a2=0, a3=0, a4=0, a6=0):
        self.a1 = _upoly(a1)
        self.a2 = _upoly(a2)
        self.a3 = _upoly(a3)
        self.a4 = _upoly(a4)
        self.a6 = _upoly(a6)

    @classmethod
    def short(cls, a4, a6, a2=0):
        return cls(0, a2, 0, a4, a6)

    def __repr__(self):
        return (
            f"WeierstrassQt(a1={self.a1}, a2={self.a2}, a3={self.a3}, "
            f"a4={self.a4}, a6={self.a6})"
        )


class SectionQt:
    """A section (x(t), y(t)) with rational-function coordinates."""

    __slots__ = ("x", "y")

    def __init__(self, x, y):
        self.x = x if isinstance(x, RationalFunction) else RationalFunction(_upoly(x))
        self.y = y if isinstance(y, RationalFunction) else RationalFunction(_upoly(y))


class KodairaFiber:
    """One singular fiber: the place (squarefree factor of Delta over Q, or
    the string "infinity"), Kodaira type, valuations, and the root lattice."""

    __slots__ = ("place", "type", "vc4", "vc6", "vdelta", "lattice", "place_degree")

    def __init__(self, place, type_, vc4, vc6, vdelta, lattice, place_degree):
        self.place = place
        self.type = type_
        self.vc4 = vc4
        self.vc6 = vc6
        self.vdelta = vdelta
        self.lattice = lattice          # e.g. ("A", 3), ("D", 5), ("E", 7), None
        self.place_degree = place_degree

    def __repr__(self):
        lat = "-" if self.lattice is None else f"{self.lattice[0]}{self.lattice[1]}"
        return (
            f"KodairaFiber({self.place!s}: {self.type}, "
            f"v(c4,c6,D)=({self.vc4},{self.vc6},{self.vdelta}), {lat})"
        )


def c4_c6_delta(w):
    """Classical c4, c6, Delta in Q[t]; c4^3 - c6^2 = 1728 Delta identically."""
    b2 = w.a1 * w.a1 + 4 * w.a2
    b4 = 2 * w.a4 + w.a1 * w.a3
    b6 = w.a3 * w.a3 + 4 * w.a6
    c4 = b2 * b2 - 24 * b4
    c6 = -(b2 * b2 * b2) + 36 * b2 * b4 - 216 * b6
    delta = (c4 * c4 * c4 - c6 * c6) * Fraction(1, 1728)
    if delta.is_zero():
        raise ValueError("singular fibration: Delta vanishes identically")
    return c4, c6, delta


def j_invariant(w):
    """j = c4^3 / Delta as a reduced rational function of t."""
    c4, _, delta = c4_c6_delta(w)
    return RationalFunction(c4 * c4 * c4, delta)


# ---------------------------------------------------------------------------
# Kodaira classification


_TYPE_TABLE_LATTICE = {
    "II": None,
    "III": ("A", 1),
    "IV": ("A", 2),
    "IV*": ("E", 6),
    "III*": ("E", 7),
    "II*": ("E", 8),
}


def _valuation(poly, place):
    """Largest k with place^k | poly (place monic nonconstant, poly != 0)."""
    if poly.is_zero():
        raise ValueError("valuation of zero polynomial")
    v = 0
    while True:
        q, r = poly.divmod(place)
        if not r.is_zero():
            return v
        poly = q
        v += 1


def _classify_triple(vc4, vc6, vd):
    """Kodaira type from the valuation triple at a minimal place (char 0)."""
    if vd == 0:
        return "I0", None
    if vc4 == 0:
        n = vd
        return f"I{n}", (("A", n - 1) if n >= 2 else None)
    if vd == 2:
        return "II", None
    if vd == 3:
        return "III", ("A", 1)
    if vd == 4:
        return "IV", ("A", 2)
    if vd == 6:
        return "I*0", ("D", 4)
    if vc4 == 2 and vd > 6:
        n = vd - 6
        return f"I*{n}", ("D", 4 + n)
    if vd == 8:
        return "IV*", ("E", 6)
    if vd == 9:
        return "III*", ("E", 7)
    if vd == 10:
        return "II*", ("E", 8)
    raise ValueError(f"no Kodaira type for valuations (c4,c6,D)=({vc4},{vc6},{vd})")


def _refine_places(factors, polys):
    """Split squarefree place factors so every named poly has uniform
    valuation across each factor's roots (gcd refinement)."""
    work = list(factors)
    for poly in polys:
        if poly.is_zero():
            continue
        changed = True
        while changed:
            changed = False
            out = []
            for q in work:
                if q.degree == 0:
                    continue
                g = q.gcd(poly)
                if 0 < g.degree < q.degree:
                    out.append(g)
                    out.append((q // g).monic())
                    changed = True
                else:
                    out.append(q)
            work = out
        # refine against deeper layers of poly as well
    return work


def _local_data(c4, c6, delta, place):
    vc4 = _valuation(c4, place) if not c4.is_zero() else 10**9
    vc6 = _valuation(c6, place) if not c6.is_zero() else 10**9
    vd = _valuation(delta, place)
    # minimality: strip twelfths
    while vc4 >= 4 and vc6 >= 6 and vd >= 12:
        vc4 -= 4
        vc6 -= 6
        vd -= 12
    return vc4, vc6, vd


class _InfinityModel:
    """c4/c6/Delta of the model at t = infinity, via t -> 1/t and clearing
    weights (x, y) -> (x/t^(2k), y/t^(3k)) with k minimal."""

    def __init__(self, c4, c6, delta):
        k = 0
        while c4.degree > 4 * k or c6.degree > 6 * k or delta.degree > 12 * k:
            k += 1
        self.k = k
        self.c4 = c4.reverse(4 * k)
        self.c6 = c6.reverse(6 * k)
        self.delta = delta.reverse(12 * k)


def kodaira_classify(w):
    """All singular fibers of the elliptic surface, including t = infinity.

    Returns (fibers, deg_delta_min, chi): the fiber list, the degree of the
    minimal discriminant (finite places weighted by place degree, plus the
    contribution at infinity), and chi = deg/12.
    """
    c4, c6, delta = c4_c6_delta(w)

    fibers = []
    total = 0

    places = [q for q, _m in squarefree_factor(delta)]
    # refine so v(c4), v(c6) are uniform across each place factor's roots:
    # split against the squarefree layers of c4 and c6 (each layer carries a
    # single multiplicity, so membership pins the valuation)
    layers = []
    for poly in (c4, c6):
        if not poly.is_zero() and poly.degree > 0:
            layers.extend(q for q, _m in squarefree_factor(poly))
    places = _refine_places(places, layers)
    for q in places:
        vc4, vc6, vd = _local_data(c4, c6, delta, q)
        if vd == 0:
            continue
        typ, lat = _classify_triple(vc4, vc6, vd)
        fibers.append(KodairaFiber(q, typ, vc4, vc6, vd, lat, q.degree))
        total += vd * q.degree

    inf = _InfinityModel(c4, c6, delta)
    tpl = UniPoly([Fraction(0), Fraction(1)])
    if inf.delta.is_zero():
        raise ValueError("not an elliptic surface model")
    vd_inf = _valuation(inf.delta, tpl)
    if vd_inf > 0:
        vc4 = _valuation(inf.c4, tpl) if not inf.c4.is_zero() else 10**9
        vc6 = _valuation(inf.c6, tpl) if not inf.c6.is_zero() else 10**9
        vd = vd_inf
        while vc4 >= 4 and vc6 >= 6 and vd >= 12:
            vc4 -= 4
            vc6 -= 6
            vd -= 12
        if vd > 0:
            typ, lat = _classify_triple(vc4, vc6, vd)
            fibers.append(KodairaFiber("infinity", typ, vc4, vc6, vd, lat, 1))
        total += vd
    if total % 12:
        raise ValueError("not an elliptic surface model: deg Delta_min not 0 mod 12")
    return fibers, total, total // 12


# ---------------------------------------------------------------------------
# sections


def verify_section(w, s):
    """Exact check that (x(t), y(t)) satisfies the Weierstrass equation
    identically in Q(t)."""
    x, y = s.x, s.y
    lhs = y * y + RationalFunction(w.a1) * x * y + RationalFunction(w.a3) * y
    rhs = (
        x * x * x
        + RationalFunction(w.a2) * x * x
        + RationalFunction(w.a4) * x
        + RationalFunction(w.a6)
    )
    return lhs == rhs


def verify_family_section(family, section, specializations=5, seed=0):
    """Verify a section of a parametrized family at random rational parameter
    values (each check exact over Q(t)).

    family(params) -> WeierstrassQt, section(params) -> SectionQt, where
    params is a tuple of Fractions.  Specialization points avoid parameter
    values where the family or section degenerates (builder raises).
    """
    import random

    rng = random.Random(seed)
    done = 0
    attempts = 0
    while done < specializations:
        attempts += 1
        if attempts > 50 * (specializations + 1):
            raise RuntimeError("could not find enough nondegenerate specializations")
        params = tuple(
            Fraction(rng.randint(-30, 30), rng.randint(1, 12)) for _ in range(getattr(family, "nparams", 2))
        )
        try:
            w = family(params)
            s = section(params)
        except (ValueError, ZeroDivisionError):
            continue
        if not verify_section(w, s):
            return False
        done += 1
    return True


# ---------------------------------------------------------------------------
# genus-1 quartics


def jacobian_of_quartic(q):
    """Weierstrass model of the Jacobian of y^2 = quartic(x).

    q is a list [e, d, c, b, a] of coefficients (ascending: a x^4 + b x^3 +
    c x^2 + d x + e) over Q or Q(t) (UniPoly/RationalFunction entries allowed).
    Returns WeierstrassQt-like coefficients via the classical binary-quartic
    invariants I = 12ae - 3bd + c^2 and J = 72ace + 9bcd - 27ad^2 - 27eb^2
    - 2c^3, as Y^2 = X^3 - 27 I X - 27 J.  Degree-3 input (a = 0) is the
    already-elliptic case and works through the same invariants.
    """
    if len(q) != 5:
        raise ValueError("quartic needs 5 coefficients (ascending degree)")
    e, d, c, b, a = [v if isinstance(v, RationalFunction) else RationalFunction(_upoly(v)) for v in q]
    if a.is_zero() and b.is_zero():
        raise ValueError("degree must be 3 or 4")
    I = 12 * a * e - 3 * b * d + c * c
    J = 72 * a * c * e + 9 * b * c * d - 27 * a * d * d - 27 * e * b * b - 2 * c**3
    disc_factor = 4 * I**3 - J**2          # vanishes iff the quartic is not squarefree
    if disc_factor.is_zero():
        raise ValueError("quartic is not squarefree")
    a4 = -27 * I
    a6 = -27 * J
    # clear denominators: (X, Y) -> (X/u^2, Y/u^3) sends (a4, a6) to
    # (a4 u^4, a6 u^6), polynomial for u = den(a4) * den(a6)
    u = RationalFunction(a4.den * a6.den)
    a4p = a4 * u**4
    a6p = a6 * u**6
    assert a4p.den.degree == 0 and a6p.den.degree == 0
    return WeierstrassQt.short(a4p.num, a6p.num)


# ---------------------------------------------------------------------------
# heights and lattices


def fiber_contribution(lattice, component):
    """Local height correction for a section meeting the given component.

    lattice: ("A", n) / ("D", m) / ("E", 6|7|8) or None.
    component: 0 for the identity component; for A_n an index 1..n around the
    cycle; for D_m the string "near" or "far"; for E6/E7 any nonzero index.
    """
    if component == 0 or lattice is None:
        return Fraction(0)
    kind, n = lattice
    if kind == "A":
        k = component
        if not 1 <= k <= n:
            raise ValueError(f"A{n} has components 0..{n}")
        return Fraction(k * (n + 1 - k), n + 1)
    if kind == "D":
        if component == "near":
            return Fraction(1)
        if component == "far":
            return Fraction(n, 4)
        raise ValueError("D components are 'near' or 'far'")
    if kind == "E":
        if n == 6:
            return Fraction(4, 3)
        if n == 7:
            return Fraction(3, 2)
        if n == 8:
            raise ValueError("E8 fibers have no non-identity simple component")
    raise ValueError(f"unknown lattice {lattice}")


def section_height(chi, po, contributions):
    """Neron-Tate height h = 2 chi + 2 (P.O) - sum of local corrections."""
    if chi < 1:
        raise ValueError("chi must be >= 1")
    if po < 0:
        raise ValueError("P.O must be >= 0")
    h = Fraction(2 * chi + 2 * po)
    for c in contributions:
        h -= Fraction(c)
    return h


class LatticeGram:
    """Symmetric Gram matrix with exact rational entries."""

    __slots__ = ("rows",)

    def __init__(self, rows):
        rows = [[Fraction(v) for v in row] for row in rows]
        n = len(rows)
        for row in rows:
            if len(row) != n:
                raise ValueError("Gram matrix must be square")
        for i in range(n):
            for j in range(n):
                if rows[i][j] != rows[j][i]:
                    raise ValueError("Gram matrix must be symmetric")
        self.rows = rows

    @property
    def size(self):
        return len(self.rows)

    def det(self):
        """Determinant by fraction-free-ish Gaussian elimination (exact)."""
        n = self.size
        if n == 0:
            return Fraction(1)
        m = [row[:] for row in self.rows]
        det = Fraction(1)
        for col in range(n):
            piv = next((r for r in range(col, n) if m[r][col]), None)
            if piv is None:
                return Fraction(0)
            if piv != col:
                m[col], m[piv] = m[piv], m[col]
                det = -det
            det *= m[col][col]
            inv = 1 / m[col][col]
            for r in range(col + 1, n):
                f = m[r][col] * inv
                if f:
                    m[r] = [a - f * b for a, b in zip(m[r], m[col])]
        return det


_ROOT_LATTICE_DISC = {"A": lambda n: n + 1, "D": lambda n: 4, "E": lambda n: {6: 3, 7: 2, 8: 1}[n]}


def root_lattice_disc(lattice):
    kind, n = lattice
    return _ROOT_LATTICE_DISC[kind](n)


def shioda_tate_disc(fiber_lattices, height_gram, torsion_order):
    """|disc NS| = det(H) * prod disc(L_v) / torsion^2 (unsigned product)."""
    if torsion_order < 1:
        raise ValueError("torsion order must be >= 1")
    if not isinstance(height_gram, LatticeGram):
        height_gram = LatticeGram(height_gram)
    d = height_gram.det()
    for lat in fiber_lattices:
        d *= root_lattice_disc(lat)
    return d / torsion_order**2


def _is_fundamental(D):
    if D <= 1:
        return False
    def squarefree(n):
        k = 2
        while k * k <= n:
            if n % (k * k) == 0:
                return False
            k += 1
        return True
    if D % 4 == 1:
        return squarefree(D)
    if D % 4 == 0:
        m = D // 4
        return m % 4 in (2, 3) and squarefree(m)
    return False


def od_gram(D):
    """Gram matrix [[2, D], [D, (D^2 - D)/2]] of the real-multiplication
    order's trace pairing: signature (1,1), determinant -D."""
    if not _is_fundamental(D):
        raise ValueError(f"{D} is not a fundamental discriminant")
    return LatticeGram([[2, D], [D, Fraction(D * D - D, 2)]])
