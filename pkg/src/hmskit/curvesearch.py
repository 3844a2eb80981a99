"""Reconstruct genus-2 curves over F_p from prescribed invariants by
exhaustive enumeration.

Over a finite field every weighted-projective invariant point with nonzero
last coordinate is hit by some curve (no Brauer obstruction), so a full
enumeration of sextics with leading coefficient in a fixed square-class
transversal {1, nonresidue} indexes all of moduli space.  Tables are keyed
by the canonical (lexicographically minimal) weighted representative.

The enumeration is vectorized with numpy: invariants are evaluated mod p on
coefficient blocks, reduced to canonical keys, and only first-seen keys are
kept.  Everything stays in int64 (values < p <= 13, term products < 13^11).
"""

from __future__ import annotations

import struct

import numpy as np

from ._invariant_tables import I2_TERMS, I4_TERMS, I6_TERMS, I10_TERMS
from .exactmath import FiniteField, smallest_nonresidue
from .igusa import IgusaClebsch, SexticForm, canonical_rep
from .rmdetect import CurveFF

__all__ = ["InvariantTable", "build_invariant_table", "curve_from_ic"]

MAX_PRIME = 13
_MAGIC = b"HMST"


class InvariantTable:
    """prime p plus a map canonical-key -> 7 coefficient bytes (f0..f6)."""

    __slots__ = ("p", "entries")

    def __init__(self, p, entries):
        self.p = p
        self.entries = entries

    def __len__(self):
        return len(self.entries)

    @staticmethod
    def key_of(rep):
        """Pack a canonical IgusaClebsch over F_p into an integer key."""
        i2, i4, i6, i10 = (v.a for v in rep.astuple())
        p = rep.i2.field.p
        return ((i2 * p + i4) * p + i6) * p + i10

    def save(self, path):
        with open(path, "wb") as fh:
            fh.write(_MAGIC)
            fh.write(struct.pack("<BB", 1, self.p))
            fh.write(struct.pack("<I", len(self.entries)))
            for key in sorted(self.entries):
                coeffs = self.entries[key]
                i10 = key % self.p
                i6 = key // self.p % self.p
                i4 = key // self.p**2 % self.p
                i2 = key // self.p**3 % self.p
                fh.write(struct.pack("<BBBB", i2, i4, i6, i10))
                fh.write(bytes(coeffs))

    @classmethod
    def load(cls, path):
        with open(path, "rb") as fh:
            magic = fh.read(4)
            if magic != _MAGIC:
                raise ValueError("not an invariant table file")
            version, p = struct.unpack("<BB", fh.read(2))
            if version != 1:
                raise ValueError(f"unsupported table version {version}")
            (count,) = struct.unpack("<I", fh.read(4))
            entries = {}
            for _ in range(count):
                i2, i4, i6, i10 = struct.unpack("<BBBB", fh.read(4))
                coeffs = fh.read(7)
                key = ((i2 * p + i4) * p + i6) * p + i10
                entries[key] = coeffs
        return cls(p, entries)


def _terms_to_arrays(terms, p):
    exps = np.array([mon for mon, _c in terms], dtype=np.int64)      # (T, 7)
    cfs = np.array([c % p for _m, c in terms], dtype=np.int64)       # (T,)
    return exps, cfs


def _eval_invariant_block(exps, cfs, powtabs, n):
    """Sum of cf * prod_v powtabs[v][e_v] over terms; powtabs[v] maps
    exponent -> array of that power of the variable's values."""
    acc = np.zeros(n, dtype=np.int64)
    for (mon, cf) in zip(exps, cfs):
        term = np.full(n, cf, dtype=np.int64)
        for v in range(7):
            e = mon[v]
            if e:
                term = term * powtabs[v][e]
        acc += term
    return acc


def _canonical_keys(i2, i4, i6, i10, p):
    """Vectorized canonical key: min over lambda of the packed rescaling."""
    best = None
    for lam in range(1, p):
        l2 = lam * lam % p
        l3 = l2 * lam % p
        l5 = l2 * l3 % p
        key = (
            ((lam * i2 % p) * p + l2 * i4 % p) * p + l3 * i6 % p
        ) * p + l5 * i10 % p
        best = key if best is None else np.minimum(best, key)
    return best


def _iter_blocks(p, lead_values, free_vars, block_size, reverse=False):
    """Yield (lead, start, stop) block descriptors over p^free_vars counters."""
    total = p**free_vars
    leads = list(lead_values)
    if reverse:
        leads = leads[::-1]
    for lead in leads:
        starts = list(range(0, total, block_size))
        if reverse:
            starts = starts[::-1]
        for start in starts:
            yield lead, start, min(start + block_size, total)


def build_invariant_table(p, block_size=1 << 20, _reverse=False, progress=None):
    """Enumerate all genus-2 models over F_p, keeping per canonical invariant
    key the first witness found (in a fixed deterministic order).

    Candidates: sextics with f6 in {1, nonresidue} and f0..f5 free, then
    quintics with f5 in {1, nonresidue} and f0..f4 free; singular models
    (vanishing binary-sextic discriminant) are skipped.  `_reverse` flips the
    enumeration order (used to check witness-independence of downstream
    verdicts).
    """
    if p > MAX_PRIME or p < 3:
        raise ValueError(f"prime out of supported range 3..{MAX_PRIME}")
    FiniteField(p)  # validates primality
    n = smallest_nonresidue(p)

    tables = [_terms_to_arrays(t, p) for t in (I2_TERMS, I4_TERMS, I6_TERMS, I10_TERMS)]
    used_exps = [
        sorted({int(mon[v]) for t in tables for mon in t[0] if mon[v]})
        for v in range(7)
    ]

    entries = {}

    def powtabs_for(coeff_cols):
        # dict per variable {exponent: vals**e mod p}; 12^10 fits in int64
        tabs = []
        for v in range(7):
            vals = coeff_cols[v]
            tabs.append({e: vals**e % p for e in used_exps[v]})
        return tabs

    def process(coeff_cols):
        # coeff_cols: list of 7 arrays (f0..f6) of equal length
        n0 = coeff_cols[0].shape[0]
        powtabs = powtabs_for(coeff_cols)
        i10 = _eval_invariant_block(*tables[3], powtabs, n0) % p
        mask = i10 != 0
        if not mask.any():
            return
        cols_m = [c[mask] for c in coeff_cols]
        n1 = cols_m[0].shape[0]
        powtabs = powtabs_for(cols_m)
        i10 = i10[mask]
        i2 = _eval_invariant_block(*tables[0], powtabs, n1) % p
        i4 = _eval_invariant_block(*tables[1], powtabs, n1) % p
        i6 = _eval_invariant_block(*tables[2], powtabs, n1) % p
        keys = _canonical_keys(i2, i4, i6, i10, p)
        cols = cols_m
        uniq, first = np.unique(keys, return_index=True)
        order = np.argsort(first)          # keep true first-seen order
        for key, idx in zip(uniq[order], first[order]):
            k = int(key)
            if k not in entries:
                entries[k] = bytes(int(cols[v][idx]) for v in range(7))

    # sextic pass: f6 in transversal, f0..f5 counter digits (f5 most significant)
    for lead, start, stop in _iter_blocks(p, (1, n), 6, block_size, _reverse):
        idx = np.arange(start, stop, dtype=np.int64)
        cols = []
        rem = idx
        for _v in range(6):               # digits: f0 least significant
            cols.append(rem % p)
            rem = rem // p
        cols.append(np.full(idx.shape, lead, dtype=np.int64))
        process(cols)
        if progress:
            progress(f"p={p} sextics lead={lead}: {stop}/{p**6}")
    # quintic pass: f6 = 0, f5 in transversal, f0..f4 free
    for lead, start, stop in _iter_blocks(p, (1, n), 5, block_size, _reverse):
        idx = np.arange(start, stop, dtype=np.int64)
        cols = []
        rem = idx
        for _v in range(5):
            cols.append(rem % p)
            rem = rem // p
        cols.append(np.full(idx.shape, lead, dtype=np.int64))
        cols.append(np.zeros(idx.shape, dtype=np.int64))
        process(cols)
        if progress:
            progress(f"p={p} quintics lead={lead}: {stop}/{p**5}")
    return InvariantTable(p, entries)


def curve_from_ic(ic, table):
    """Witness curve whose invariants are weighted-equal to ic, or None.

    None happens exactly when I10 = 0 (not a genus-2 point) or no key is
    present (cannot occur for tables built by build_invariant_table, since
    the Brauer obstruction vanishes over finite fields)."""
    if not isinstance(ic, IgusaClebsch):
        raise TypeError("need an IgusaClebsch over F_p")
    if not ic.i10:
        return None
    rep = canonical_rep(ic)
    key = InvariantTable.key_of(rep)
    coeffs = table.entries.get(key)
    if coeffs is None:
        return None
    field = FiniteField(table.p)
    return CurveFF(SexticForm([field(c) for c in coeffs]))
