"""Exact scalar arithmetic: Laurent polynomials in q over the rationals,
and their fraction field.

Every structure constant appearing in the algebra layers is a :class:`RatFunc`.
Values are immutable and hashable, and canonical forms make equality
structural:

* :class:`LaurentPoly` stores a map exponent -> nonzero ``Fraction``.
* :class:`RatFunc` stores a gcd-reduced pair ``num/den`` where ``den`` has
  lowest exponent 0 and leading (highest-degree) coefficient 1.  Each
  rational function therefore has exactly one representation, so hashing
  and ``==`` are sound for memoization keys.

The rendering grammar used everywhere (exports, CLI, parsing) writes signed
sums of ``q^k`` with rational multipliers, e.g. ``-q^2 + 1 - q^-2`` or
``3/2*q^-1``; a genuine fraction renders as ``(num)/(den)``.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache


class ScalarError(ArithmeticError):
    """Raised on division by zero or failed exact division."""


class LaurentPoly:
    """Immutable Laurent polynomial in q with Fraction coefficients."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms=None):
        clean = {}
        if terms:
            for e, c in terms.items():
                c = c if isinstance(c, Fraction) else Fraction(c)
                if c:
                    clean[int(e)] = c
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, *a):
        raise AttributeError("LaurentPoly is immutable")

    # -- basic queries -------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def min_exp(self) -> int:
        return min(self.terms)

    def max_exp(self) -> int:
        return max(self.terms)

    def __eq__(self, other):
        return isinstance(other, LaurentPoly) and self.terms == other.terms

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash(tuple(sorted(self.terms.items())))
            object.__setattr__(self, "_hash", h)
        return h

    # -- arithmetic ----------------------------------------------------
    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        t = dict(self.terms)
        for e, c in other.terms.items():
            s = t.get(e, 0) + c
            if s:
                t[e] = s
            else:
                t.pop(e, None)
        return LaurentPoly(t)

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly({e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        return self + (-other)

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        if not self.terms or not other.terms:
            return _LP_ZERO
        t: dict[int, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = e1 + e2
                s = t.get(e, 0) + c1 * c2
                if s:
                    t[e] = s
                else:
                    del t[e]
        return LaurentPoly(t)

    def scaled(self, c) -> "LaurentPoly":
        c = c if isinstance(c, Fraction) else Fraction(c)
        if not c:
            return _LP_ZERO
        return LaurentPoly({e: c0 * c for e, c0 in self.terms.items()})

    def shifted(self, k: int) -> "LaurentPoly":
        if k == 0:
            return self
        return LaurentPoly({e + k: c for e, c in self.terms.items()})

    def subst_q_inverse(self) -> "LaurentPoly":
        return LaurentPoly({-e: c for e, c in self.terms.items()})

    def eval_at_one(self) -> Fraction:
        """Formal substitution q -> 1 (display-level classical echo)."""
        return sum(self.terms.values(), Fraction(0))

    # -- polynomial division (exponents shifted to be >= 0) -------------
    def divmod_poly(self, other: "LaurentPoly"):
        """Euclidean division after shifting both operands to min_exp 0.

        Returns (quotient, remainder) with self0 == q*other0 + r; used for
        gcd computation and exact division.  Only valid as ordinary
        polynomial division on the shifted representatives.
        """
        if other.is_zero():
            raise ScalarError("polynomial division by zero")
        a = self.shifted(-self.min_exp()) if self.terms else self
        b = other.shifted(-other.min_exp())
        q: dict[int, Fraction] = {}
        r = dict(a.terms)
        db = b.max_exp()
        lb = b.terms[db]
        while r and max(r) >= db:
            dr = max(r)
            coef = r[dr] / lb
            q[dr - db] = coef
            for e, c in b.terms.items():
                e2 = e + dr - db
                s = r.get(e2, 0) - coef * c
                if s:
                    r[e2] = s
                else:
                    r.pop(e2, None)
        return LaurentPoly(q), LaurentPoly(r)

    def divexact(self, other: "LaurentPoly") -> "LaurentPoly":
        """Exact division; raises ScalarError when the remainder is nonzero."""
        if self.is_zero():
            return _LP_ZERO
        q, r = self.divmod_poly(other)
        if not r.is_zero():
            raise ScalarError("inexact Laurent division")
        shift = self.min_exp() - other.min_exp()
        return q.shifted(shift)

    # -- rendering -------------------------------------------------------
    def render(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, reverse=True):
            c = self.terms[e]
            sign = "-" if c < 0 else "+"
            c = abs(c)
            if e == 0:
                body = str(c)
            else:
                qpart = "q" if e == 1 else f"q^{e}"
                body = qpart if c == 1 else f"{c}*{qpart}"
            parts.append((sign, body))
        first_sign, first_body = parts[0]
        out = ("-" if first_sign == "-" else "") + first_body
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self):
        return f"LaurentPoly({self.render()})"


_LP_ZERO = LaurentPoly()
_LP_ONE = LaurentPoly({0: 1})


def lp_monomial(k: int, c=1) -> LaurentPoly:
    return LaurentPoly({k: Fraction(c)})


def lp_gcd(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    """Monic gcd with min_exp 0; gcd(0, 0) = 0."""
    if a.is_zero():
        g = b
    elif b.is_zero():
        g = a
    else:
        x, y = a, b
        while not y.is_zero():
            _, r = x.divmod_poly(y)
            x, y = y, r
        g = x
    if g.is_zero():
        return g
    g = g.shifted(-g.min_exp())
    lead = g.terms[g.max_exp()]
    return g.scaled(1 / lead)


_TERM_RE = re.compile(
    r"^(?:(?P<coef>-?\d+(?:/\d+)?)(?:\*)?)?(?P<q>q(?:\^(?P<exp>-?\d+))?)?$"
)


_TOKEN_RE = re.compile(
    r"(?P<sign>[+-])?"
    r"(?:"
    r"(?P<coef>\d+(?:/\d+)?)\*?(?P<q1>q(?:\^(?P<e1>-?\d+))?)?"
    r"|(?P<q2>q(?:\^(?P<e2>-?\d+))?)"
    r")"
)


def lp_parse(text: str) -> LaurentPoly:
    """Parse the rendering grammar back into a LaurentPoly."""
    s = text.replace(" ", "")
    if not s or s == "0":
        return _LP_ZERO
    terms: dict[int, Fraction] = {}
    pos = 0
    while pos < len(s):
        m = _TOKEN_RE.match(s, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse scalar {text!r} at {s[pos:]!r}")
        pos = m.end()
        sign = -1 if m.group("sign") == "-" else 1
        coef = Fraction(m.group("coef")) if m.group("coef") else Fraction(1)
        if m.group("q1"):
            exp = int(m.group("e1")) if m.group("e1") else 1
        elif m.group("q2"):
            exp = int(m.group("e2")) if m.group("e2") else 1
        else:
            exp = 0
        terms[exp] = terms.get(exp, Fraction(0)) + sign * coef
    return LaurentPoly(terms)


class RatFunc:
    """Immutable element of Q(q) in canonical num/den form."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num: LaurentPoly, den: LaurentPoly = _LP_ONE):
        if den.is_zero():
            raise ScalarError("zero denominator")
        if num.is_zero():
            num, den = _LP_ZERO, _LP_ONE
        elif den != _LP_ONE:
            sn, sd = num.min_exp(), den.min_exp()
            num0 = num.shifted(-sn)
            den0 = den.shifted(-sd)
            g = lp_gcd(num0, den0)
            if g != _LP_ONE:
                num0 = num0.divexact(g)
                den0 = den0.divexact(g)
            lead = den0.terms[den0.max_exp()]
            if lead != 1:
                num0 = num0.scaled(1 / lead)
                den0 = den0.scaled(1 / lead)
            num = num0.shifted(sn - sd)
            den = den0
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, *a):
        raise AttributeError("RatFunc is immutable")

    # -- queries ---------------------------------------------------------
    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self):
        return bool(self.num)

    def is_one(self) -> bool:
        return self.num == _LP_ONE and self.den == _LP_ONE

    def __eq__(self, other):
        return (
            isinstance(other, RatFunc)
            and self.num == other.num
            and self.den == other.den
        )

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash((self.num, self.den))
            object.__setattr__(self, "_hash", h)
        return h

    # -- arithmetic --------------------------------------------------------
    def __add__(self, other: "RatFunc") -> "RatFunc":
        if self.den == _LP_ONE and other.den == _LP_ONE:
            return RatFunc(self.num + other.num)
        return RatFunc(
            self.num * other.den + other.num * self.den, self.den * other.den
        )

    def __neg__(self) -> "RatFunc":
        return RatFunc(-self.num, self.den)

    def __sub__(self, other: "RatFunc") -> "RatFunc":
        return self + (-other)

    def __mul__(self, other: "RatFunc") -> "RatFunc":
        if self.den == _LP_ONE and other.den == _LP_ONE:
            return RatFunc(self.num * other.num)
        return RatFunc(self.num * other.num, self.den * other.den)

    def __truediv__(self, other: "RatFunc") -> "RatFunc":
        if other.is_zero():
            raise ScalarError("division by zero")
        return RatFunc(self.num * other.den, self.den * other.num)

    def inv(self) -> "RatFunc":
        if self.is_zero():
            raise ScalarError("inverting zero")
        return RatFunc(self.den, self.num)

    def __pow__(self, k: int) -> "RatFunc":
        if k < 0:
            return self.inv() ** (-k)
        out = ONE
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def scaled(self, c) -> "RatFunc":
        return RatFunc(self.num.scaled(c), self.den)

    def subst_q_inverse(self) -> "RatFunc":
        return RatFunc(self.num.subst_q_inverse(), self.den.subst_q_inverse())

    def eval_at_one(self) -> Fraction:
        d = self.den.eval_at_one()
        if d == 0:
            raise ScalarError("denominator vanishes at q=1")
        return self.num.eval_at_one() / d

    # -- rendering ---------------------------------------------------------
    def render(self) -> str:
        if self.den == _LP_ONE:
            return self.num.render()
        return f"({self.num.render()})/({self.den.render()})"

    def __repr__(self):
        return f"RatFunc({self.render()})"


ZERO = RatFunc(_LP_ZERO)
ONE = RatFunc(_LP_ONE)
Q = RatFunc(lp_monomial(1))
QINV = RatFunc(lp_monomial(-1))
QHAT = Q - QINV  # the deformation gap q - q^-1


@lru_cache(maxsize=4096)
def qpow(k: int) -> RatFunc:
    """The monomial q^k."""
    return RatFunc(lp_monomial(k))


def neg_qpow(k: int) -> RatFunc:
    """(-q)^k for any integer k, as an exact rational function."""
    return qpow(k) if k % 2 == 0 else -qpow(k)


def integer(c) -> RatFunc:
    """Embed a rational number into Q(q)."""
    return RatFunc(LaurentPoly({0: Fraction(c)}))


def rat_arith(op: str, a: RatFunc, b: RatFunc) -> RatFunc:
    """Dispatch exact field arithmetic.  op in {add, sub, mul, div}."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown op {op!r}")


def subst_q_inverse(f: RatFunc) -> RatFunc:
    """Apply the field automorphism q -> q^-1."""
    return f.subst_q_inverse()


def parse_scalar(text: str) -> RatFunc:
    """Parse the rendering grammar, including '(num)/(den)' fractions."""
    s = text.strip()
    m = re.fullmatch(r"\((?P<n>[^()]*)\)\s*/\s*\((?P<d>[^()]*)\)", s)
    if m:
        return RatFunc(lp_parse(m.group("n")), lp_parse(m.group("d")))
    return RatFunc(lp_parse(s))


class ScalarContext:
    """Deformation-parameter bundle threaded through the algebra engines.

    The standard context uses parameter q; the inverted one uses q^-1.
    ``qhat`` is parameter - parameter^-1, so it flips sign under inversion.
    """

    __slots__ = ("q", "qinv", "qhat", "inverted")

    def __init__(self, inverted: bool = False):
        self.inverted = inverted
        self.q = QINV if inverted else Q
        self.qinv = Q if inverted else QINV
        self.qhat = self.q - self.qinv

    def qpow(self, k: int) -> RatFunc:
        return qpow(-k) if self.inverted else qpow(k)

    def neg_qpow(self, k: int) -> RatFunc:
        p = self.qpow(k)
        return p if k % 2 == 0 else -p


STD = ScalarContext(False)
INV = ScalarContext(True)
