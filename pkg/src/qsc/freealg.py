"""Free associative algebra on the Chevalley E (or F) generators, with
root-lattice grading and the q-Serre ideal-membership oracle.

The oracle is the artifact's independent ground truth.  For a weight mu it
enumerates the finite word basis of the weight space, spans the ideal slice
by all products word * serre_element * word of that weight, echelonizes the
span exactly, and memoizes the result.  An element reduces to zero against
the echelon iff it lies in the two-sided ideal generated by the quadratic
and cubic Serre elements, i.e. iff it vanishes in the positive (negative)
half of the quantum group.

Elements never mix E and F letters here; mixed products live in
:mod:`qsc.uqtri`.
"""

from __future__ import annotations

import math
import os
import threading
from functools import lru_cache

from . import exactlinalg as xl
from .scalars import ONE, QINV, RatFunc, integer, qpow

Word = tuple[int, ...]

DEFAULT_ORACLE_CAP = 200_000


class OracleBudgetError(RuntimeError):
    """Weight-space word count exceeded the configured cap."""

    def __init__(self, n: int, weight: tuple[int, ...], count: int, cap: int):
        super().__init__(
            f"oracle budget exceeded: weight {weight} has {count} words "
            f"(cap {cap})"
        )
        self.n = n
        self.weight = weight
        self.count = count
        self.cap = cap


def oracle_cap() -> int:
    env = os.environ.get("QSC_ORACLE_CAP")
    if env:
        try:
            return int(env)
        except ValueError:
            pass
    return DEFAULT_ORACLE_CAP


class FreeElt:
    """Finite RatFunc-linear combination of words in one generator family."""

    __slots__ = ("n", "family", "terms")

    def __init__(self, n: int, family: str, terms=None):
        if family not in ("E", "F"):
            raise ValueError("family must be 'E' or 'F'")
        self.n = n
        self.family = family
        self.terms: dict[Word, RatFunc] = {}
        if terms:
            for w, c in terms.items():
                if not c.is_zero():
                    self.terms[tuple(w)] = c

    # -- constructors ---------------------------------------------------
    @staticmethod
    def gen(n: int, i: int, family: str = "E") -> "FreeElt":
        if not 1 <= i <= n - 1:
            raise ValueError(f"generator index {i} out of range for n={n}")
        return FreeElt(n, family, {(i,): ONE})

    @staticmethod
    def one(n: int, family: str = "E") -> "FreeElt":
        return FreeElt(n, family, {(): ONE})

    @staticmethod
    def zero(n: int, family: str = "E") -> "FreeElt":
        return FreeElt(n, family)

    # -- ring structure ---------------------------------------------------
    def _check(self, other: "FreeElt"):
        if self.n != other.n or self.family != other.family:
            raise ValueError("mixed families or ranks in free-algebra op")

    def __add__(self, other: "FreeElt") -> "FreeElt":
        self._check(other)
        t = dict(self.terms)
        for w, c in other.terms.items():
            s = t.get(w)
            s = c if s is None else s + c
            if s.is_zero():
                t.pop(w, None)
            else:
                t[w] = s
        return FreeElt(self.n, self.family, t)

    def __neg__(self) -> "FreeElt":
        return FreeElt(self.n, self.family, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other: "FreeElt") -> "FreeElt":
        return self + (-other)

    def scaled(self, c: RatFunc) -> "FreeElt":
        if c.is_zero():
            return FreeElt(self.n, self.family)
        return FreeElt(self.n, self.family, {w: c * c0 for w, c0 in self.terms.items()})

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        return (
            isinstance(other, FreeElt)
            and self.n == other.n
            and self.family == other.family
            and self.terms == other.terms
        )

    def __repr__(self):
        if not self.terms:
            return "FreeElt(0)"
        bits = []
        for w, c in sorted(self.terms.items()):
            mono = "*".join(f"{self.family}{i}" for i in w) or "1"
            bits.append(f"({c.render()})·{mono}")
        return " + ".join(bits)

    def weights(self) -> set:
        return {word_weight(w, self.n) for w in self.terms}


def word_weight(word: Word, n: int) -> tuple[int, ...]:
    """Multiplicity vector of the letters, a vector in the root lattice."""
    v = [0] * (n - 1)
    for a in word:
        v[a - 1] += 1
    return tuple(v)


def free_mul(a: FreeElt, b: FreeElt) -> FreeElt:
    """Concatenation-bilinear product."""
    a._check(b)
    t: dict[Word, RatFunc] = {}
    for w1, c1 in a.terms.items():
        for w2, c2 in b.terms.items():
            w = w1 + w2
            c = c1 * c2
            s = t.get(w)
            s = c if s is None else s + c
            if s.is_zero():
                t.pop(w, None)
            else:
                t[w] = s
    return FreeElt(a.n, a.family, t)


def qcomm(a: FreeElt, b: FreeElt) -> FreeElt:
    """The deformed bracket a*b - q^-1 * b*a."""
    return free_mul(a, b) - free_mul(b, a).scaled(QINV)


def nested_E(n: int, indices, family: str = "E") -> FreeElt:
    """Left-nested deformed bracket [[..[E_{a_1}, E_{a_2}], ..], E_{a_m}]."""
    seq = list(indices)
    if not seq:
        raise ValueError("nested commutator needs at least one index")
    out = FreeElt.gen(n, seq[0], family)
    for a in seq[1:]:
        out = qcomm(out, FreeElt.gen(n, a, family))
    return out


# -- Serre data ---------------------------------------------------------------

def serre_elements(n: int) -> list[FreeElt]:
    """The defining elements of the ideal: cubic for adjacent indices,
    commutators for distant ones."""
    out = []
    qq = qpow(1) + qpow(-1)
    for i in range(1, n):
        for j in range(1, n):
            if abs(i - j) == 1:
                Ei = FreeElt.gen(n, i)
                Ej = FreeElt.gen(n, j)
                EiEi = free_mul(Ei, Ei)
                out.append(
                    free_mul(EiEi, Ej)
                    - free_mul(free_mul(Ei, Ej), Ei).scaled(qq)
                    + free_mul(Ej, EiEi)
                )
    for i in range(1, n):
        for j in range(i + 2, n):
            Ei = FreeElt.gen(n, i)
            Ej = FreeElt.gen(n, j)
            out.append(free_mul(Ei, Ej) - free_mul(Ej, Ei))
    return out


def weight_word_count(weight) -> int:
    """Number of words with the given letter multiplicities (multinomial)."""
    total = sum(weight)
    out = math.factorial(total)
    for m in weight:
        out //= math.factorial(m)
    return out


def words_of_weight(weight) -> list[Word]:
    """All distinct words over letters 1..len(weight) with multiplicities."""
    letters = []
    for i, m in enumerate(weight, start=1):
        letters.extend([i] * m)

    out: list[Word] = []

    def rec(prefix, remaining):
        if not remaining:
            out.append(tuple(prefix))
            return
        seen = set()
        for idx, a in enumerate(remaining):
            if a in seen:
                continue
            seen.add(a)
            rec(prefix + [a], remaining[:idx] + remaining[idx + 1 :])

    rec([], letters)
    return out


class _SerreOracle:
    """Memoized echelon bases of the Serre-ideal weight slices.

    Cache key is (n, weight); the E and F families satisfy identical
    relations so they share entries.  Lookup-or-compute is serialized by a
    lock, which satisfies the at-most-once contract.
    """

    def __init__(self):
        self._cache: dict = {}
        self._lock = threading.Lock()

    def clear(self):
        with self._lock:
            self._cache.clear()

    def slice(self, n: int, weight: tuple[int, ...], cap: int | None = None):
        """Return (echelon keyed by words, word count of the weight space)."""
        cap = cap if cap is not None else oracle_cap()
        count = weight_word_count(weight)
        if count > cap:
            raise OracleBudgetError(n, weight, count, cap)
        key = (n, weight)
        with self._lock:
            hit = self._cache.get(key)
            if hit is not None:
                return hit
            ech = xl.Echelon()
            for s in serre_elements(n):
                swt = word_weight(next(iter(s.terms)), n)
                rem = tuple(a - b for a, b in zip(weight, swt))
                if any(x < 0 for x in rem):
                    continue
                sterms = [(w, xl.ip_from_ratfunc(c)[0]) for w, c in s.terms.items()]
                for w in words_of_weight(rem):
                    for cut in range(len(w) + 1):
                        u, v = w[:cut], w[cut:]
                        row: dict[Word, dict] = {}
                        for t, ip in sterms:
                            row[u + t + v] = dict(ip)
                        ech.add_row(row)
            entry = (ech, count)
            self._cache[key] = entry
            return entry


ORACLE = _SerreOracle()


def serre_reduce(elt: FreeElt, cap: int | None = None) -> dict[Word, RatFunc]:
    """Coordinates of elt in the echelonized complement of the ideal slice.

    The result maps complement basis words to exact coefficients; it is
    empty iff elt lies in the Serre ideal.  Raises OracleBudgetError when a
    weight space exceeds the cap (never returns a wrong answer).
    """
    by_weight: dict[tuple[int, ...], dict[Word, RatFunc]] = {}
    for w, c in elt.terms.items():
        by_weight.setdefault(word_weight(w, elt.n), {})[w] = c
    out: dict[Word, RatFunc] = {}
    for weight, terms in sorted(by_weight.items()):
        ech, _ = ORACLE.slice(elt.n, weight, cap)
        residual = ech.reduce_vector(dict(terms))
        for w, c in residual.items():
            s = out.get(w)
            s = c if s is None else s + c
            if s.is_zero():
                out.pop(w, None)
            else:
                out[w] = s
    return {w: c for w, c in out.items() if not c.is_zero()}


def _lp_lcm(a, b):
    from .scalars import lp_gcd

    g = lp_gcd(a, b)
    return a * b.divexact(g)


def _clear_to_ipolys(terms: dict[Word, RatFunc]) -> dict[Word, dict]:
    """Scale the whole coefficient vector uniformly so every entry becomes
    an integer Laurent polynomial.  Uniform scaling preserves membership."""
    from math import gcd as igcd

    den = None
    for c in terms.values():
        den = c.den if den is None else _lp_lcm(den, c.den)
    polys = {w: c.num * den.divexact(c.den) for w, c in terms.items()}
    big = 1
    for p in polys.values():
        for fr in p.terms.values():
            big = big * fr.denominator // igcd(big, fr.denominator)
    out = {}
    for w, p in polys.items():
        ip = {e: int(fr * big) for e, fr in p.terms.items()}
        out[w] = {e: c for e, c in ip.items() if c}
    return out


def equals_mod_serre(a: FreeElt, b: FreeElt, cap: int | None = None) -> bool:
    """Equality in the Serre quotient, decided by the ideal oracle."""
    a._check(b)
    diff = a - b
    if diff.is_zero():
        return True
    by_weight: dict[tuple[int, ...], dict[Word, RatFunc]] = {}
    for w, c in diff.terms.items():
        by_weight.setdefault(word_weight(w, diff.n), {})[w] = c
    for weight, terms in by_weight.items():
        ech, _ = ORACLE.slice(diff.n, weight, cap)
        vec = {w: ip for w, ip in _clear_to_ipolys(terms).items() if ip}
        if not ech.vector_in_span(vec):
            return False
    return True


def complement_dimension(n: int, weight, cap: int | None = None) -> int:
    """dim of the weight space of the Serre quotient (words minus rank)."""
    weight = tuple(weight)
    ech, count = ORACLE.slice(n, weight, cap)
    return count - ech.rank


@lru_cache(maxsize=None)
def positive_roots(n: int) -> tuple:
    """Interval roots (i, j) of sl(n) as multiplicity vectors."""
    out = []
    for i in range(1, n):
        for j in range(i + 1, n + 1):
            v = [0] * (n - 1)
            for a in range(i, j):
                v[a - 1] = 1
            out.append(tuple(v))
    return tuple(out)


def kostant_dim(n: int, weight) -> int:
    """Number of multisets of positive roots summing to the weight."""
    weight = tuple(weight)
    if any(x < 0 for x in weight):
        raise ValueError("weight must be nonnegative")
    roots = positive_roots(n)

    @lru_cache(maxsize=None)
    def count(w: tuple[int, ...], k: int) -> int:
        if not any(w):
            return 1
        if k >= len(roots):
            return 0
        root = roots[k]
        total = 0
        w_cur = w
        while True:
            total += count(w_cur, k + 1)
            nxt = tuple(a - b for a, b in zip(w_cur, root))
            if any(x < 0 for x in nxt):
                break
            w_cur = nxt
        return total

    return count(weight, 0)
