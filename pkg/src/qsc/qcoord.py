"""Quantized coordinate rings of n x n matrices and their quotients:
the special linear quotient, the parabolic quotient (block upper
triangular), and the Levi quotient (block diagonal).

Monomials in the generators x[i,j] are straightened to the lexicographic
normal form (row-major variable order); the defining commutation rules for
letters u = x[i,j], v = x[l,m] with (i,j) lex-smaller are

    same row or same column:   v*u = p^-1 u*v
    i < l, m < j:              v*u = u*v
    i < l, j < m:              v*u = u*v - phat * x[i,m] x[l,j]

where p is the deformation parameter of the engine (q, or q^-1 for the
inverted engine).  Quotient contexts drop every monomial containing a
killed variable; that this yields a well-defined algebra quotient is a
tested property.

Equality modulo the determinant relation is decided by exact division:
the quantum determinant (or its image, the ordered product of the block
minors) is central, so membership of f in <det - 1> can be decided by
peeling the lowest homogeneous part of f, without any spanning-set
linear algebra.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .scalars import ONE, RatFunc, ScalarContext, STD
from .weyl import Pair, ParabolicData

Mono = tuple  # tuple of (row, col) pairs, lex sorted in normal form


class BudgetError(RuntimeError):
    """An equality decision exceeded its configured work budget."""


@dataclass(frozen=True)
class Context:
    """Which quotient of the quantum matrix algebra we compute in."""

    n: int
    kind: str  # 'M' | 'SL' | 'P' | 'L'
    pd: ParabolicData | None = None
    scal: ScalarContext = STD
    _straighten_cache: dict = field(default_factory=dict, compare=False, hash=False)
    _normality_cache: dict = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self):
        if self.kind not in ("M", "SL", "P", "L"):
            raise ValueError(f"unknown context kind {self.kind!r}")
        if self.kind in ("P", "L") and self.pd is None:
            raise ValueError("quotient context needs parabolic data")

    def killed(self, var: Pair) -> bool:
        if self.kind in ("M", "SL"):
            return False
        i, j = var
        below = (j, i) in self.pd.phi_set
        if self.kind == "P":
            return below
        return below or (i, j) in self.pd.phi_set

    def key(self):
        return (self.n, self.kind, self.pd.J if self.pd else None, self.scal.inverted)


_CTX_CACHE: dict = {}


def context(n: int, kind: str, pd: ParabolicData | None = None, scal: ScalarContext = STD) -> Context:
    key = (n, kind, pd.J if pd is not None else None, scal.inverted)
    ctx = _CTX_CACHE.get(key)
    if ctx is None:
        ctx = Context(n, kind, pd, scal)
        _CTX_CACHE[key] = ctx
    return ctx


class QMatElt:
    """Element of a quantum matrix context, with optional block-minor
    denominator exponents (used only in the parabolic context)."""

    __slots__ = ("ctx", "terms", "denom")

    def __init__(self, ctx: Context, terms=None, denom=None):
        self.ctx = ctx
        self.terms: dict[Mono, RatFunc] = {}
        if terms:
            for m, c in terms.items():
                if not c.is_zero():
                    self.terms[tuple(tuple(p) for p in m)] = c
        nblocks = len(ctx.pd.blocks) if ctx.pd is not None else 0
        self.denom = tuple(denom) if denom is not None else (0,) * nblocks

    # -- constructors -----------------------------------------------------
    @staticmethod
    def zero(ctx: Context) -> "QMatElt":
        return QMatElt(ctx)

    @staticmethod
    def one(ctx: Context) -> "QMatElt":
        return QMatElt(ctx, {(): ONE})

    @staticmethod
    def gen(ctx: Context, i: int, j: int) -> "QMatElt":
        if not (1 <= i <= ctx.n and 1 <= j <= ctx.n):
            raise ValueError(f"generator x[{i},{j}] out of range")
        if ctx.killed((i, j)):
            return QMatElt(ctx)
        return QMatElt(ctx, {(((i, j),)): ONE})

    # -- linear structure ---------------------------------------------------
    def _check(self, other: "QMatElt"):
        if self.ctx is not other.ctx and self.ctx.key() != other.ctx.key():
            raise ValueError("mixed contexts")

    def __add__(self, other: "QMatElt") -> "QMatElt":
        self._check(other)
        if self.denom != other.denom:
            raise ValueError("adding different denominators; lift first")
        t = dict(self.terms)
        for m, c in other.terms.items():
            s = t.get(m)
            s = c if s is None else s + c
            if s.is_zero():
                t.pop(m, None)
            else:
                t[m] = s
        return QMatElt(self.ctx, t, self.denom)

    def __neg__(self) -> "QMatElt":
        return QMatElt(self.ctx, {m: -c for m, c in self.terms.items()}, self.denom)

    def __sub__(self, other: "QMatElt") -> "QMatElt":
        return self + (-other)

    def scaled(self, c: RatFunc) -> "QMatElt":
        if c.is_zero():
            return QMatElt(self.ctx, None, self.denom)
        return QMatElt(
            self.ctx, {m: c * c0 for m, c0 in self.terms.items()}, self.denom
        )

    def is_zero_raw(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        return (
            isinstance(other, QMatElt)
            and self.ctx.key() == other.ctx.key()
            and self.terms == other.terms
            and self.denom == other.denom
        )

    def __repr__(self):
        sym = "y" if self.ctx.kind == "L" else "x"
        if not self.terms:
            body = "0"
        else:
            bits = []
            for m, c in sorted(self.terms.items()):
                word = "*".join(f"{sym}[{i},{j}]" for (i, j) in m) or "1"
                bits.append(f"({c.render()})·{word}")
            body = " + ".join(bits)
        if any(self.denom):
            body += f" / minors{list(self.denom)}"
        return body

    def max_degree(self) -> int:
        return max((len(m) for m in self.terms), default=0)


# -- straightening -------------------------------------------------------------

def _straighten_word(ctx: Context, word: tuple) -> dict:
    """Normal form of a raw product of generators, as {mono: coeff}."""
    cached = ctx._straighten_cache.get(word)
    if cached is not None:
        return cached
    scal = ctx.scal
    out: dict[Mono, RatFunc] = {}
    work = [(ONE, word)]
    while work:
        c, w = work.pop()
        for idx in range(len(w) - 1):
            u, v = w[idx], w[idx + 1]
            if u <= v:
                continue
            (l, m), (i, j) = u, v  # v is lex-smaller
            head, tail = w[:idx], w[idx + 2 :]
            if i == l or j == m:
                work.append((c * scal.qinv, head + (v, u) + tail))
            elif m < j:
                work.append((c, head + (v, u) + tail))
            else:
                work.append((c, head + (v, u) + tail))
                corr = ((i, m), (l, j))
                if not (ctx.killed(corr[0]) or ctx.killed(corr[1])):
                    work.append((-c * scal.qhat, head + corr + tail))
            break
        else:
            s = out.get(w)
            s = c if s is None else s + c
            if s.is_zero():
                out.pop(w, None)
            else:
                out[w] = s
            continue
    if len(word) <= 12:
        ctx._straighten_cache[word] = out
    return out


def from_word(ctx: Context, word, coeff: RatFunc = ONE) -> QMatElt:
    """Element given by a raw product of generator indices."""
    word = tuple(tuple(p) for p in word)
    if any(ctx.killed(p) for p in word):
        return QMatElt(ctx)
    out: dict[Mono, RatFunc] = {}
    for m, c in _straighten_word(ctx, word).items():
        if any(ctx.killed(p) for p in m):
            continue
        s = out.get(m)
        cc = coeff * c
        s = cc if s is None else s + cc
        if s.is_zero():
            out.pop(m, None)
        else:
            out[m] = s
    return QMatElt(ctx, out)


def qmat_mul(a: QMatElt, b: QMatElt) -> QMatElt:
    """Product of denominator-free elements, straightened."""
    a._check(b)
    if any(a.denom) or any(b.denom):
        return loc_mul(a, b)
    out = QMatElt(a.ctx)
    for m1, c1 in a.terms.items():
        for m2, c2 in b.terms.items():
            out = out + from_word(a.ctx, m1 + m2, c1 * c2)
    return out


def qmat_pow(a: QMatElt, k: int) -> QMatElt:
    out = QMatElt.one(a.ctx)
    for _ in range(k):
        out = qmat_mul(out, a)
    return out


# -- determinants and minors ----------------------------------------------------

def _inversions(perm: tuple) -> int:
    return sum(
        1
        for x in range(len(perm))
        for y in range(x + 1, len(perm))
        if perm[x] > perm[y]
    )


def quantum_minor(ctx: Context, rows, cols) -> QMatElt:
    """Alternating (-p)^{inv} sum over bijections rows -> cols."""
    rows = sorted(rows)
    cols = sorted(cols)
    if len(rows) != len(cols):
        raise ValueError("minor needs equally sized row and column sets")
    out = QMatElt(ctx)
    for sigma in itertools.permutations(range(len(cols))):
        word = tuple((rows[k], cols[sigma[k]]) for k in range(len(rows)))
        if any(ctx.killed(p) for p in word):
            continue
        coeff = ctx.scal.neg_qpow(_inversions(sigma))
        out = out + from_word(ctx, word, coeff)
    return out


def det_q(n: int, ctx: Context | None = None) -> QMatElt:
    """The quantum determinant of the full matrix algebra."""
    ctx = ctx or context(n, "M")
    return quantum_minor(ctx, range(1, n + 1), range(1, n + 1))


def delta_ideal_gen(ctx: Context) -> QMatElt:
    """Image of the quantum determinant in the context (the ordered product
    of the diagonal block minors in the quotient contexts); central."""
    return det_q(ctx.n, ctx)


def project(elt: QMatElt, target: Context) -> QMatElt:
    """Quotient projection: drop monomials containing killed variables."""
    if any(elt.denom):
        raise ValueError("cannot project a localized element")
    t = {m: c for m, c in elt.terms.items() if not any(target.killed(p) for p in m)}
    return QMatElt(target, t)


# -- determinant-ideal membership -------------------------------------------------

_DIVISION_FUEL = 20_000


def in_det_ideal(ctx: Context, elt: QMatElt) -> bool:
    """Exact membership of a polynomial element in <det_image - 1>.

    Uses centrality of the determinant image: every member is g*(det-1)
    for a single g, recovered degree by degree from the bottom.
    """
    if any(elt.denom):
        raise ValueError("clear denominators before membership testing")
    delta = delta_ideal_gen(ctx)
    n = ctx.n
    terms = dict(elt.terms)
    fuel = _DIVISION_FUEL
    while terms:
        fuel -= 1
        if fuel <= 0:
            raise BudgetError("determinant-ideal division budget exceeded")
        dmin = min(len(m) for m in terms)
        dmax = max(len(m) for m in terms)
        if dmin > dmax - n:
            return False
        bottom = {m: c for m, c in terms.items() if len(m) == dmin}
        for m in bottom:
            del terms[m]
        lifted = qmat_mul(QMatElt(ctx, bottom), delta)
        for m, c in lifted.terms.items():
            s = terms.get(m)
            s = c if s is None else s + c
            if s.is_zero():
                terms.pop(m, None)
            else:
                terms[m] = s
    return True


def qsl_equals(a: QMatElt, b: QMatElt) -> bool:
    """Equality modulo the determinant relation (and the quotient kill-set).

    In the plain matrix context this is raw equality of normal forms.
    """
    a._check(b)
    if any(a.denom) or any(b.denom):
        return loc_equals(a, b)
    diff = a - b
    if diff.is_zero_raw():
        return True
    if a.ctx.kind == "M":
        return False
    return in_det_ideal(a.ctx, diff)


# -- Hopf structure ---------------------------------------------------------------

class TensorElt:
    """Two-leg tensor with straightened legs, raw monomial keys."""

    __slots__ = ("ctxL", "ctxR", "terms")

    def __init__(self, ctxL: Context, ctxR: Context, terms=None):
        self.ctxL = ctxL
        self.ctxR = ctxR
        self.terms: dict[tuple, RatFunc] = {}
        if terms:
            for k, c in terms.items():
                if not c.is_zero():
                    self.terms[k] = c

    @staticmethod
    def of(a: QMatElt, b: QMatElt) -> "TensorElt":
        t = {}
        for m1, c1 in a.terms.items():
            for m2, c2 in b.terms.items():
                t[(m1, m2)] = c1 * c2
        return TensorElt(a.ctx, b.ctx, t)

    def __add__(self, other: "TensorElt") -> "TensorElt":
        t = dict(self.terms)
        for k, c in other.terms.items():
            s = t.get(k)
            s = c if s is None else s + c
            if s.is_zero():
                t.pop(k, None)
            else:
                t[k] = s
        return TensorElt(self.ctxL, self.ctxR, t)

    def __sub__(self, other: "TensorElt") -> "TensorElt":
        return self + other.scaled(-ONE)

    def scaled(self, c: RatFunc) -> "TensorElt":
        return TensorElt(self.ctxL, self.ctxR, {k: c * c0 for k, c0 in self.terms.items()})

    def mul(self, other: "TensorElt") -> "TensorElt":
        out: dict[tuple, RatFunc] = {}
        for (l1, r1), c1 in self.terms.items():
            for (l2, r2), c2 in other.terms.items():
                left = from_word(self.ctxL, l1 + l2)
                right = from_word(self.ctxR, r1 + r2)
                for ml, cl in left.terms.items():
                    for mr, cr in right.terms.items():
                        key = (ml, mr)
                        add = c1 * c2 * cl * cr
                        s = out.get(key)
                        s = add if s is None else s + add
                        if s.is_zero():
                            out.pop(key, None)
                        else:
                            out[key] = s
        return TensorElt(self.ctxL, self.ctxR, out)

    def is_zero_raw(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        return (
            isinstance(other, TensorElt)
            and self.ctxL.key() == other.ctxL.key()
            and self.ctxR.key() == other.ctxR.key()
            and self.terms == other.terms
        )

    def __repr__(self):
        bits = []
        for (l, r), c in sorted(self.terms.items()):
            lw = "*".join(f"y[{i},{j}]" for (i, j) in l) or "1"
            rw = "*".join(f"x[{i},{j}]" for (i, j) in r) or "1"
            bits.append(f"({c.render()})·{lw}⊗{rw}")
        return " + ".join(bits) if bits else "0"


def comult(elt: QMatElt, ctxL: Context | None = None, ctxR: Context | None = None) -> TensorElt:
    """Matrix comultiplication x[i,j] -> sum_k x[i,k] (x) x[k,j], extended
    multiplicatively, with each leg projected into its own context."""
    if any(elt.denom):
        raise ValueError("comultiply polynomial parts only")
    base = elt.ctx
    ctxL = ctxL or base
    ctxR = ctxR or base
    n = base.n
    out: dict[tuple, RatFunc] = {}
    for mono, c in elt.terms.items():
        legs = [((), ())]
        for (i, j) in mono:
            nxt = []
            for (wl, wr) in legs:
                for k in range(1, n + 1):
                    if ctxL.killed((i, k)) or ctxR.killed((k, j)):
                        continue
                    nxt.append((wl + ((i, k),), wr + ((k, j),)))
            legs = nxt
        for (wl, wr) in legs:
            left = from_word(ctxL, wl)
            right = from_word(ctxR, wr)
            for ml, cl in left.terms.items():
                for mr, cr in right.terms.items():
                    key = (ml, mr)
                    add = c * cl * cr
                    s = out.get(key)
                    s = add if s is None else s + add
                    if s.is_zero():
                        out.pop(key, None)
                    else:
                        out[key] = s
    return TensorElt(ctxL, ctxR, out)


def counit(elt: QMatElt) -> RatFunc:
    """epsilon(x[i,j]) = delta_ij extended multiplicatively."""
    total = ONE - ONE
    for mono, c in elt.terms.items():
        if all(i == j for (i, j) in mono):
            total = total + c
    return total


def antipode_gen(ctx: Context, i: int, j: int) -> QMatElt:
    """S(x[i,j]) = (-p)^{i-j} [complement of j | complement of i]."""
    rows = [r for r in range(1, ctx.n + 1) if r != j]
    cols = [cc for cc in range(1, ctx.n + 1) if cc != i]
    return quantum_minor(ctx, rows, cols).scaled(ctx.scal.neg_qpow(i - j))


def antipode(elt: QMatElt) -> QMatElt:
    """Anti-multiplicative extension of the generator antipode."""
    if any(elt.denom):
        raise ValueError("antipode of polynomial parts only")
    ctx = elt.ctx
    out = QMatElt(ctx)
    for mono, c in elt.terms.items():
        acc = QMatElt.one(ctx)
        for (i, j) in reversed(mono):
            acc = qmat_mul(acc, antipode_gen(ctx, i, j))
        out = out + acc.scaled(c)
    return out


# -- localization at the block minors ---------------------------------------------

def block_minor(ctx: Context, b: int) -> QMatElt:
    """The b-th diagonal block minor (0-based block index)."""
    blk = ctx.pd.blocks[b]
    return quantum_minor(ctx, blk, blk)


class NonNormalityError(RuntimeError):
    """A block minor failed to q-commute with a generator."""


def normality_exponent(pd: ParabolicData, b: int, gen: Pair, scal: ScalarContext = STD) -> int:
    """Integer c with minor * x = p^c * x * minor in the parabolic quotient."""
    ctx = context(pd.n, "P", pd, scal)
    key = (b, gen)
    hit = ctx._normality_cache.get(key)
    if hit is not None:
        return hit
    if ctx.killed(gen):
        raise ValueError(f"generator {gen} is killed in the parabolic quotient")
    minor = block_minor(ctx, b)
    x = QMatElt.gen(ctx, *gen)
    left = qmat_mul(minor, x)
    right = qmat_mul(x, minor)
    if set(left.terms) != set(right.terms) or not left.terms:
        raise NonNormalityError(f"minor {b} vs {gen}: supports differ")
    c_val = None
    for m, cl in left.terms.items():
        ratio = cl / right.terms[m]
        found = None
        for e in range(-4 * ctx.n, 4 * ctx.n + 1):
            if ratio == ctx.scal.qpow(e):
                found = e
                break
        if found is None:
            raise NonNormalityError(f"minor {b} vs {gen}: ratio {ratio.render()}")
        if c_val is None:
            c_val = found
        elif c_val != found:
            raise NonNormalityError(f"minor {b} vs {gen}: nonuniform ratio")
    ctx._normality_cache[key] = c_val
    return c_val


def _mono_normality(ctx: Context, denom, mono: Mono) -> int:
    total = 0
    for b, d in enumerate(denom):
        if d:
            for p in mono:
                total += d * normality_exponent(ctx.pd, b, p, ctx.scal)
    return total


def loc_mul(a: QMatElt, b: QMatElt) -> QMatElt:
    """Product of localized elements: denominators commute out to the right
    through the normality exponents, and denominator vectors add."""
    a._check(b)
    ctx = a.ctx
    if ctx.kind != "P" and (any(a.denom) or any(b.denom)):
        raise ValueError("denominators only live in the parabolic context")
    out = QMatElt(ctx, None, tuple(x + y for x, y in zip(a.denom, b.denom)))
    for m2, c2 in b.terms.items():
        phase = ctx.scal.qpow(-_mono_normality(ctx, a.denom, m2))
        for m1, c1 in a.terms.items():
            piece = from_word(ctx, m1 + m2, c1 * c2 * phase)
            for m, c in piece.terms.items():
                s = out.terms.get(m)
                s = c if s is None else s + c
                if s.is_zero():
                    out.terms.pop(m, None)
                else:
                    out.terms[m] = s
    return out


def loc_lift(elt: QMatElt, denom) -> QMatElt:
    """Rewrite elt with the (componentwise larger) denominator vector."""
    denom = tuple(denom)
    if denom == elt.denom:
        return elt
    if any(d < e for d, e in zip(denom, elt.denom)):
        raise ValueError("can only lift to a larger denominator")
    ctx = elt.ctx
    extra = QMatElt.one(ctx)
    for b, (d, e) in enumerate(zip(denom, elt.denom)):
        for _ in range(d - e):
            extra = qmat_mul(extra, block_minor(ctx, b))
    lifted = qmat_mul(QMatElt(ctx, elt.terms), extra)
    return QMatElt(ctx, lifted.terms, denom)


def loc_equals(a: QMatElt, b: QMatElt) -> bool:
    """Equality of localized elements after clearing denominators."""
    a._check(b)
    common = tuple(max(x, y) for x, y in zip(a.denom, b.denom)) or None
    if common is None:
        common = ()
    a2 = loc_lift(a, common)
    b2 = loc_lift(b, common)
    return qsl_equals(QMatElt(a.ctx, a2.terms), QMatElt(b.ctx, b2.terms))


def minor_inverse_certificate(pd: ParabolicData, b: int, scal: ScalarContext = STD):
    """Search a q-power multiple of the ordered product of the other block
    minors that inverts the b-th one two-sidedly; returns (exponent, elt)."""
    ctx = context(pd.n, "P", pd, scal)
    others = QMatElt.one(ctx)
    for bb in range(len(pd.blocks)):
        if bb != b:
            others = qmat_mul(others, block_minor(ctx, bb))
    target = block_minor(ctx, b)
    for e in range(-2 * ctx.n, 2 * ctx.n + 1):
        cand = others.scaled(scal.qpow(e))
        lhs = qmat_mul(target, cand)
        rhs = qmat_mul(cand, target)
        if qsl_equals(lhs, QMatElt.one(ctx)) and qsl_equals(rhs, QMatElt.one(ctx)):
            return e, cand
    raise NonNormalityError(f"no q-power inverse certificate for block {b}")
