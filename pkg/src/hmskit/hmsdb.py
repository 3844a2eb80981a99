"""The database of the 30 Hilbert modular surface models and its
verification pipeline: square-lifting of table rows, invariant matching,
branch-parametrization checks, RM spot-checks, and the quadratic-twist
search over finite fields.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .exactmath import (
    BiPoly,
    RationalFunction,
    UniPoly,
    FiniteField,
    is_rational_square,
    quadratic_character,
)
from .igusa import IgusaClebsch, SexticForm, igusa_clebsch, weighted_equal
from .rmdetect import CurveFF, count_points, weil_data, rm_test
from .curvesearch import curve_from_ic

__all__ = [
    "HMSRecord",
    "load_database",
    "default_database_path",
    "verify_point_row",
    "verify_branch",
    "verify_record",
    "verify_database",
    "twist_search",
]

EXPECTED_DISCRIMINANTS = (
    5, 8, 12, 13, 17, 21, 24, 28, 29, 33, 37, 40, 41, 44, 53,
    56, 57, 60, 61, 65, 69, 73, 76, 77, 85, 88, 89, 92, 93, 97,
)


def _frac(s):
    return Fraction(s)


def _parse_bipoly(triples):
    return BiPoly({(i, j): Fraction(c) for i, j, c in triples})


def _parse_upoly(coeffs):
    return UniPoly([Fraction(c) for c in coeffs])


def _parse_ratfun(obj):
    return RationalFunction(_parse_upoly(obj["num"]), _parse_upoly(obj["den"]))


@dataclass
class BranchComponent:
    factor: BiPoly
    meaning: str
    parametrization: tuple[RationalFunction, RationalFunction] | None
    source: str


@dataclass
class EllipticModelData:
    name: str
    a_invariants: list
    expected_fibers: list | None
    mw_gram: list | None
    fiber_lattices: list | None
    torsion: int | None
    ns_disc: Fraction | None
    source: str


@dataclass
class HMSRecord:
    discriminant: int
    coords: tuple[str, str]
    surface_kind: str
    geometric_picard: object
    cover_constant: int
    cover_poly: BiPoly
    branch_components: list
    ic_map: list | None
    twist_candidates: dict | None
    points: list
    elliptic_models: list
    height_identities: list
    disputed: str | None = None

    def cover_value(self, r, s):
        """Exact value C * f(r, s) of the double-cover right-hand side."""
        return self.cover_constant * self.cover_poly(r, s)

    def ic_at(self, r, s):
        """Invariant point of the moduli map at (r, s); needs ic_map."""
        if self.ic_map is None:
            raise ValueError(f"record {self.discriminant} has no stored invariant map")
        vals = [p(r, s) for p in self.ic_map]
        return IgusaClebsch(*vals)


def default_database_path():
    env = os.environ.get("HMSKIT_DB")
    if env:
        return env
    return os.path.join(os.path.dirname(__file__), "data", "hms.json")


def load_database(path=None):
    """Load and validate the database; returns the list of HMSRecords."""
    path = path or default_database_path()
    with open(path) as fh:
        try:
            raw = json.load(fh)
        except json.JSONDecodeError as e:
            raise ValueError(f"malformed database file: {e}") from e
    if raw.get("schema_version") != 1:
        raise ValueError("unsupported database schema version")
    records = []
    seen = set()
    for rr in raw["records"]:
        D = rr["discriminant"]
        if D in seen:
            raise ValueError(f"duplicate discriminant {D}")
        seen.add(D)
        cover = rr["cover"]
        poly = _parse_bipoly(cover["poly"])
        if poly.content() != 1:
            raise ValueError(f"cover polynomial for {D} is not content-1")
        comps = []
        for c in rr["branch_components"]:
            par = None
            if "parametrization" in c:
                p = c["parametrization"]
                par = (_parse_ratfun(p[rr["coords"][0]]), _parse_ratfun(p[rr["coords"][1]]))
            comps.append(
                BranchComponent(
                    factor=_parse_bipoly(c["factor"]),
                    meaning=c["meaning"],
                    parametrization=par,
                    source=c.get("source", ""),
                )
            )
        ic_map = None
        if rr.get("ic_map"):
            ic_map = [_parse_bipoly(p) for p in rr["ic_map"]["polys"]]
        points = [
            {
                "coords": (Fraction(p["coords"][0]), Fraction(p["coords"][1])),
                "sextic": SexticForm([Fraction(v) for v in p["sextic"]]),
                "disputed": p.get("disputed"),
            }
            for p in rr["points"]
        ]
        models = []
        for m in rr.get("elliptic_models", []):
            models.append(
                EllipticModelData(
                    name=m["name"],
                    a_invariants=[_parse_upoly(a) for a in m["a_invariants"]],
                    expected_fibers=[
                        {
                            "place": (
                                f["place"]
                                if f["place"] == "infinity"
                                else _parse_upoly(f["place"])
                            ),
                            "type": f["type"],
                            "count": f["count"],
                        }
                        for f in m.get("expected_fibers", [])
                    ] or None,
                    mw_gram=(
                        [[Fraction(v) for v in row] for row in m["mw_gram"]]
                        if "mw_gram" in m
                        else None
                    ),
                    fiber_lattices=(
                        [(k, n) for k, n in m["fiber_lattices"]]
                        if "fiber_lattices" in m
                        else None
                    ),
                    torsion=m.get("torsion"),
                    ns_disc=Fraction(m["ns_disc"]) if "ns_disc" in m else None,
                    source=m.get("source", ""),
                )
            )
        heights = [
            {
                "chi": h["chi"],
                "po": h["po"],
                "contributions": [
                    (k, n, (c if isinstance(c, str) else int(c)))
                    for k, n, c in h["contributions"]
                ],
                "expected": Fraction(h["expected"]),
            }
            for h in rr.get("height_identities", [])
        ]
        records.append(
            HMSRecord(
                discriminant=D,
                coords=tuple(rr["coords"]),
                surface_kind=rr["surface_kind"],
                geometric_picard=rr.get("geometric_picard"),
                cover_constant=int(cover["constant"]),
                cover_poly=poly,
                branch_components=comps,
                ic_map=ic_map,
                twist_candidates=rr.get("twist_candidates"),
                points=points,
                elliptic_models=models,
                height_identities=heights,
                disputed=rr.get("disputed"),
            )
        )
    got = tuple(sorted(seen))
    if got != tuple(sorted(EXPECTED_DISCRIMINANTS)):
        raise ValueError(f"expected 30 fundamental discriminants, got {got}")
    return records


# ---------------------------------------------------------------------------
# verification


def verify_point_row(rec, row, rm_primes=(), rm_rows_limit=None):
    """Checks for one table row; failures are entries, not exceptions.

    (i) the cover value at the row is a nonzero rational square;
    (ii) with a stored invariant map: the sextic's invariants match the map
         value in weighted projective space;
    (iii) at each supplied good prime: rm_test certifies real multiplication
          over F_p (or the a = 0 ambiguity).
    """
    D = rec.discriminant
    r, s = row["coords"]
    entry = {
        "discriminant": D,
        "coords": [str(r), str(s)],
        "disputed": bool(row.get("disputed")) or bool(rec.disputed),
    }
    val = rec.cover_value(r, s)
    z = is_rational_square(val)
    entry["square_lift"] = {
        "pass": z is not None and val != 0,
        "value": str(val),
        "z": str(z) if z is not None else None,
    }
    if rec.ic_map is not None:
        ic_row = igusa_clebsch(row["sextic"])
        ic_map = rec.ic_at(r, s)
        entry["invariant_match"] = {
            "pass": weighted_equal(ic_row, ic_map),
            "row_invariants": [str(v) for v in ic_row.astuple()],
            "map_invariants": [str(v) for v in ic_map.astuple()],
        }
    if rm_primes:
        checks = []
        for p in rm_primes:
            res = _rm_spot_check(rec, row, p)
            if res is not None:
                checks.append(res)
        entry["rm_checks"] = checks
    return entry


def good_primes_for_row(rec, row, candidates=(7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43)):
    """Odd primes not dividing D nor the cleared sextic discriminant."""
    D = rec.discriminant
    out = []
    for p in candidates:
        if D % p == 0:
            continue
        try:
            field = FiniteField(p)
            coeffs = [field(c) for c in row["sextic"].coeffs]
            form = SexticForm(coeffs)
            igusa_clebsch(form)  # raises when disc = 0 mod p
        except (ValueError, ZeroDivisionError):
            continue
        out.append(p)
    return out


def _rm_spot_check(rec, row, p):
    D = rec.discriminant
    field = FiniteField(p)
    try:
        coeffs = [field(c) for c in row["sextic"].coeffs]
        form = SexticForm(coeffs)
        igusa_clebsch(form)
    except (ValueError, ZeroDivisionError):
        return None  # bad prime for this row
    curve = CurveFF(form)
    n1 = count_points(curve, 1)
    n2 = count_points(curve, 2)
    w = weil_data(n1, n2, p)
    verdict = rm_test(w, D)
    return {
        "prime": p,
        "n1": n1,
        "n2": n2,
        "a": w.a,
        "b": w.b,
        "disc_q": w.disc_q(),
        "verdict": verdict.kind,
        "conductor": verdict.conductor,
        "pass": verdict.kind in ("rm_fp", "rm_fp_ambiguous", "inconclusive"),
    }


def verify_branch(rec):
    """Every stored parametrization must annihilate its factor identically."""
    entries = []
    for idx, comp in enumerate(rec.branch_components):
        if comp.parametrization is None:
            continue
        rfun, sfun = comp.parametrization
        value = comp.factor(rfun, sfun)
        ok = isinstance(value, RationalFunction) and value.is_zero()
        entries.append(
            {
                "discriminant": rec.discriminant,
                "component": idx,
                "meaning": comp.meaning,
                "pass": ok,
            }
        )
    return entries


def verify_record(rec, rm_primes=(), rm_rows=0):
    """Full report for one record; rm_rows > 0 runs RM spot-checks on that
    many rows (at the supplied primes, filtered per row for good reduction)."""
    rows = []
    for i, row in enumerate(rec.points):
        primes = ()
        if rm_primes and i < rm_rows:
            primes = [p for p in good_primes_for_row(rec, row, rm_primes)]
        rows.append(verify_point_row(rec, row, rm_primes=primes))
    return {
        "discriminant": rec.discriminant,
        "disputed": rec.disputed,
        "rows": rows,
        "branch": verify_branch(rec),
    }


def verify_database(records, rm_primes=(), rm_rows=0):
    """Deterministic machine-readable report over all records."""
    reports = [verify_record(r, rm_primes=rm_primes, rm_rows=rm_rows) for r in records]
    total = sum(len(rep["rows"]) for rep in reports)
    lift_pass = sum(
        1 for rep in reports for row in rep["rows"] if row["square_lift"]["pass"]
    )
    quarantined = sum(1 for rep in reports for row in rep["rows"] if row["disputed"])
    inv_checked = [
        row for rep in reports for row in rep["rows"] if "invariant_match" in row
    ]
    branch_all = [e for rep in reports for e in rep["branch"]]
    return {
        "records": reports,
        "summary": {
            "rows_total": total,
            "square_lift_pass": lift_pass,
            "rows_quarantined": quarantined,
            "invariant_rows_checked": len(inv_checked),
            "invariant_rows_pass": sum(1 for r in inv_checked if r["invariant_match"]["pass"]),
            "branch_checks": len(branch_all),
            "branch_pass": sum(1 for e in branch_all if e["pass"]),
        },
    }


# ---------------------------------------------------------------------------
# twist search


def _squarefree_constants(D):
    """Squarefree integers supported on {-1} and the primes dividing 2D."""
    primes = []
    n = 2 * D
    p = 2
    while p * p <= n:
        if n % p == 0:
            primes.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        primes.append(n)
    consts = []
    for k in range(len(primes) + 1):
        for combo in combinations(primes, k):
            c = 1
            for q in combo:
                c *= q
            consts.extend([c, -c])
    return sorted(set(consts), key=abs)


def twist_search(rec, primes, tables, include_all_candidates=True, progress=None):
    """Determine the twist constant C and factor subset of the double cover
    by elimination over finite fields.

    For each prime p and each point of the coordinate plane over F_p where
    the moduli map is defined with nonzero last invariant, a witness genus-2
    curve is looked up, counted over F_p and F_{p^2}, and tested for real
    multiplication by the record's order.  A certifying verdict (irreducible
    Frobenius, disc(Q) = c^2 D, nonzero linear term) forces the cover value
    to be a square, which kills candidates of the wrong square class.

    Returns {"survivors": [(C, subset), ...], "tested_points": n,
    "rm_points": m, "unique": bool}.  Raises if nothing survives.
    """
    if rec.ic_map is None or rec.twist_candidates is None:
        raise ValueError("record lacks an invariant map or candidate data")
    D = rec.discriminant
    for p in primes:
        if p % 2 == 0 or D % p == 0:
            raise ValueError(f"prime {p} is even or divides the discriminant")
    factor_indices = rec.twist_candidates["factor_indices"]
    if not include_all_candidates:
        factor_indices = [
            i for i in factor_indices
            if rec.branch_components[i].meaning != "extra-II"
        ]
    factors = [rec.branch_components[i].factor for i in factor_indices]
    consts = _squarefree_constants(D)
    candidates = []
    for m in range(1, len(factors) + 1):
        for subset in combinations(range(len(factors)), m):
            for c in consts:
                candidates.append((c, subset))
    alive = set(range(len(candidates)))

    # archimedean elimination: at a stored rational point of the surface the
    # cover value is a nonzero square, so C * prod f_i must be positive there
    anchor = next(
        (row for row in rec.points if not row.get("disputed")), None
    )
    if anchor is not None:
        r0, s0 = anchor["coords"]
        fvals0 = [f(r0, s0) for f in factors]
        dead = set()
        for idx in alive:
            c, subset = candidates[idx]
            v = Fraction(c)
            for i in subset:
                v *= fvals0[i]
            if v < 0:
                dead.add(idx)
        alive -= dead

    tested = 0
    rm_points = 0
    for p in primes:
        table = tables[p]
        field = FiniteField(p)
        chi = {a: pow(a, (p - 1) // 2, p) for a in range(p)}
        for rv in range(p):
            for sv in range(p):
                fr, fs = field(rv), field(sv)
                ic = rec.ic_at(fr, fs)
                if not ic.i10:
                    continue
                curve = curve_from_ic(ic, table)
                if curve is None:
                    continue
                tested += 1
                try:
                    n1 = count_points(curve, 1)
                    n2 = count_points(curve, 2)
                    w = weil_data(n1, n2, p)
                except ValueError:
                    continue
                verdict = rm_test(w, D)
                if verdict.kind != "rm_fp":
                    continue
                rm_points += 1
                fvals = [f(fr, fs).a for f in factors]
                dead = []
                for idx in alive:
                    c, subset = candidates[idx]
                    v = c % p
                    for i in subset:
                        v = v * fvals[i] % p
                    if v and chi[v] == p - 1:
                        dead.append(idx)
                alive.difference_update(dead)
            if progress:
                progress(f"p={p}: row {rv + 1}/{p}, {len(alive)} candidates alive")
    survivors = [candidates[i] for i in sorted(alive)]
    # collapse duplicates that are equal as polynomials (none expected)
    if not survivors:
        raise ValueError("database/candidate inconsistency: no surviving twist")
    return {
        "survivors": [
            {"constant": c, "subset": [factor_indices[i] for i in subset]}
            for c, subset in survivors
        ],
        "tested_points": tested,
        "rm_points": rm_points,
        "unique": len(survivors) == 1,
    }
