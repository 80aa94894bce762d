"""Sparse exact linear algebra over Laurent polynomials in q.

The Serre-ideal oracle reduces elements against an echelonized spanning set
of an ideal slice.  Rows live in a sparse representation

    row: dict[column -> ipoly],   ipoly: dict[exponent -> int]

where columns are arbitrary totally ordered hashable keys (weight-space
words).  Pivots sit at the lexicographically largest column of each row;
with that choice the natural spanning rows of the Serre slice are close to
triangular, so fill-in stays small.  Elimination is fraction-free
(cross-multiplication) with content stripping, with a fast path when the
pivot entry is the unit monomial.  Division by rational functions happens
only at the boundary, when exact complement coordinates are requested.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

from .scalars import LaurentPoly, RatFunc

IPoly = dict  # exponent -> nonzero int
Row = dict  # column -> nonzero IPoly

_UNIT = {0: 1}


# -- integer Laurent helpers ---------------------------------------------------

def ip_from_ratfunc(f: RatFunc) -> tuple[IPoly, int]:
    """Write a polynomial RatFunc as (integer poly, positive denominator)."""
    if f.den.terms != {0: Fraction(1)}:
        raise ValueError("ip_from_ratfunc needs a polynomial input")
    den = 1
    for c in f.num.terms.values():
        den = den * c.denominator // gcd(den, c.denominator)
    out = {e: int(c * den) for e, c in f.num.terms.items()}
    return out, den


def ip_to_laurent(p: IPoly) -> LaurentPoly:
    return LaurentPoly({e: Fraction(c) for e, c in p.items()})


def ip_mul(a: IPoly, b: IPoly) -> IPoly:
    if b == _UNIT:
        return dict(a)
    if a == _UNIT:
        return dict(b)
    out: IPoly = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            e = e1 + e2
            s = out.get(e, 0) + c1 * c2
            if s:
                out[e] = s
            else:
                del out[e]
    return out


def _ip_sub_into(target: IPoly, delta: IPoly) -> IPoly:
    for e, c in delta.items():
        s = target.get(e, 0) - c
        if s:
            target[e] = s
        else:
            target.pop(e, None)
    return target


def row_content_strip(row: Row) -> None:
    """Divide the whole row by its integer content and q-power, in place."""
    if not row:
        return
    g = 0
    emin = None
    for poly in row.values():
        for e, c in poly.items():
            g = gcd(g, c)
            if emin is None or e < emin:
                emin = e
    if g <= 1 and emin == 0:
        return
    for col, poly in row.items():
        row[col] = {e - emin: (c // g if g > 1 else c) for e, c in poly.items()}


def _is_unit_monomial(p: IPoly):
    """Return (exp, sign) when p = ±q^exp, else None."""
    if len(p) == 1:
        (e, c), = p.items()
        if c in (1, -1):
            return e, c
    return None


class Echelon:
    """Online sparse echelon form with fraction-free row reduction.

    Pivot columns are the largest column of each fully reduced row, so
    reducing a vector by descending pivot column terminates.  Pivot rows
    whose leading entry is a unit monomial are normalized to lead 1, which
    makes the common elimination step a plain subtraction.
    """

    def __init__(self):
        self.pivots: dict = {}  # pivot col -> row

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def _reduce_row(self, row: Row) -> Row:
        pivots = self.pivots
        while row:
            c = max(row)
            piv = pivots.get(c)
            if piv is None:
                return row
            pc, rc = piv[c], row[c]
            if pc == _UNIT:
                del row[c]
                for col, poly in piv.items():
                    if col == c:
                        continue
                    delta = ip_mul(rc, poly)
                    cur = row.get(col)
                    if cur is None:
                        row[col] = {e: -v for e, v in delta.items()}
                    else:
                        _ip_sub_into(cur, delta)
                        if not cur:
                            del row[col]
            else:
                new: Row = {}
                for col in set(row) | set(piv):
                    if col == c:
                        continue
                    a = row.get(col)
                    b = piv.get(col)
                    if a is None:
                        poly = {e: -v for e, v in ip_mul(rc, b).items()}
                    elif b is None:
                        poly = ip_mul(pc, a)
                    else:
                        poly = ip_mul(pc, a)
                        _ip_sub_into(poly, ip_mul(rc, b))
                    if poly:
                        new[col] = poly
                row = new
                row_content_strip(row)
        return row

    def add_row(self, row: Row) -> bool:
        """Reduce and insert; returns True when the row increased the rank."""
        row = {c: dict(p) for c, p in row.items() if p}
        row_content_strip(row)
        row = self._reduce_row(row)
        if not row:
            return False
        c = max(row)
        unit = _is_unit_monomial(row[c])
        if unit is not None:
            e, sign = unit
            if e or sign < 0:
                row = {
                    col: {ee - e: sign * v for ee, v in poly.items()}
                    for col, poly in row.items()
                }
        self.pivots[c] = row
        return True

    def reduce_vector(self, vec: dict) -> dict:
        """Exact reduction of a {column: RatFunc} vector; the residual is the
        complement coordinate vector (supported away from pivot columns)."""
        vec = {c: f for c, f in vec.items() if not f.is_zero()}
        pivots = self.pivots
        while True:
            hits = [c for c in vec if c in pivots]
            if not hits:
                return vec
            c = max(hits)
            piv = pivots[c]
            factor = vec[c] / RatFunc(ip_to_laurent(piv[c]))
            del vec[c]
            for col, poly in piv.items():
                if col == c:
                    continue
                delta = factor * RatFunc(ip_to_laurent(poly))
                cur = vec.get(col)
                s = (cur - delta) if cur is not None else -delta
                if s.is_zero():
                    vec.pop(col, None)
                else:
                    vec[col] = s

    def vector_in_span(self, vec: Row) -> bool:
        """Fraction-free membership test for an integer-poly vector."""
        vec = {c: dict(p) for c, p in vec.items() if p}
        row_content_strip(vec)
        return not self._reduce_row(vec)


def ratfunc_rank(vectors: list[dict]) -> int:
    """Rank of a list of {column: RatFunc} vectors (small systems only)."""
    ech = Echelon()
    rank = 0
    for vec in vectors:
        terms = {c: f for c, f in vec.items() if not f.is_zero()}
        if not terms:
            continue
        den = None
        from .scalars import lp_gcd

        for f in terms.values():
            den = f.den if den is None else _lcm(den, f.den)
        polys = {c: f.num * den.divexact(f.den) for c, f in terms.items()}
        big = 1
        for p in polys.values():
            for fr in p.terms.values():
                big = big * fr.denominator // gcd(big, fr.denominator)
        row = {}
        for c, p in polys.items():
            ip = {e: int(fr * big) for e, fr in p.terms.items()}
            ip = {e: v for e, v in ip.items() if v}
            if ip:
                row[c] = ip
        if ech.add_row(row):
            rank += 1
    return rank


def _lcm(a, b):
    from .scalars import lp_gcd

    g = lp_gcd(a, b)
    return a * b.divexact(g)
