"""The quantum enveloping algebra of sl(n) with triangular normal form.

Elements are finite sums of triangular words F-part * K-part * E-part where
the F- and E-parts are raw free words and the K-part is a root-lattice
vector (alpha-coordinates).  Multiplication rewrites mixed letter sequences
exhaustively with the defining relations:

    K_0 = 1,  K_mu K_rho = K_{mu+rho},
    K_mu E_i = q^{<mu, alpha_i>} E_i K_mu,
    K_mu F_i = q^{-<mu, alpha_i>} F_i K_mu,
    E_i F_j  = F_j E_i + delta_ij (K_{alpha_i} - K_{-alpha_i}) / (q - q^-1).

Raw triangular words are not canonical across the Serre relations, so
equality is always decided by :func:`uq_equals`, which expresses both sides
in exact ideal-complement coordinates (E- and F-legs through the Serre
oracle, K-legs structurally).
"""

from __future__ import annotations

from .freealg import FreeElt, OracleBudgetError, ORACLE, _clear_to_ipolys, word_weight
from . import exactlinalg as xl
from .scalars import ONE, QHAT, RatFunc, qpow

KVec = tuple[int, ...]
TriWord = tuple[tuple[int, ...], KVec, tuple[int, ...]]  # (fword, kvec, eword)


def cartan_pairing(n: int, mu: KVec, i: int) -> int:
    """<mu, alpha_i> for mu in alpha-coordinates."""
    total = 2 * mu[i - 1]
    if i - 2 >= 0:
        total -= mu[i - 2]
    if i <= n - 2:
        total -= mu[i]
    return total


def _alpha(n: int, i: int) -> KVec:
    v = [0] * (n - 1)
    v[i - 1] = 1
    return tuple(v)


def _kadd(a: KVec, b: KVec) -> KVec:
    return tuple(x + y for x, y in zip(a, b))


class UqElt:
    """Finite RatFunc-linear combination of triangular words."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms=None):
        self.n = n
        self.terms: dict[TriWord, RatFunc] = {}
        if terms:
            for tw, c in terms.items():
                if not c.is_zero():
                    self.terms[tw] = c

    # -- constructors -----------------------------------------------------
    @staticmethod
    def zero(n: int) -> "UqElt":
        return UqElt(n)

    @staticmethod
    def one(n: int) -> "UqElt":
        z = (0,) * (n - 1)
        return UqElt(n, {((), z, ()): ONE})

    @staticmethod
    def E(n: int, i: int) -> "UqElt":
        z = (0,) * (n - 1)
        return UqElt(n, {((), z, (i,)): ONE})

    @staticmethod
    def F(n: int, i: int) -> "UqElt":
        z = (0,) * (n - 1)
        return UqElt(n, {((i,), z, ()): ONE})

    @staticmethod
    def K(n: int, mu) -> "UqElt":
        return UqElt(n, {((), tuple(mu), ()): ONE})

    @staticmethod
    def from_free(elt: FreeElt) -> "UqElt":
        z = (0,) * (elt.n - 1)
        if elt.family == "E":
            return UqElt(elt.n, {((), z, w): c for w, c in elt.terms.items()})
        return UqElt(elt.n, {(w, z, ()): c for w, c in elt.terms.items()})

    # -- linear structure ------------------------------------------------
    def __add__(self, other: "UqElt") -> "UqElt":
        t = dict(self.terms)
        for tw, c in other.terms.items():
            s = t.get(tw)
            s = c if s is None else s + c
            if s.is_zero():
                t.pop(tw, None)
            else:
                t[tw] = s
        return UqElt(self.n, t)

    def __neg__(self) -> "UqElt":
        return UqElt(self.n, {tw: -c for tw, c in self.terms.items()})

    def __sub__(self, other: "UqElt") -> "UqElt":
        return self + (-other)

    def scaled(self, c: RatFunc) -> "UqElt":
        if c.is_zero():
            return UqElt(self.n)
        return UqElt(self.n, {tw: c * c0 for tw, c0 in self.terms.items()})

    def is_zero_raw(self) -> bool:
        return not self.terms

    def is_pure_E(self) -> bool:
        z = (0,) * (self.n - 1)
        return all(tw[0] == () and tw[1] == z for tw in self.terms)

    def pure_E_part(self) -> FreeElt:
        if not self.is_pure_E():
            raise ValueError("element has F or K content")
        return FreeElt(self.n, "E", {tw[2]: c for tw, c in self.terms.items()})

    def __repr__(self):
        if not self.terms:
            return "UqElt(0)"
        bits = []
        for (f, k, e), c in sorted(self.terms.items()):
            mono = []
            mono.extend(f"F{i}" for i in f)
            if any(k):
                mono.append(f"K{list(k)}")
            mono.extend(f"E{i}" for i in e)
            bits.append(f"({c.render()})·{'·'.join(mono) or '1'}")
        return " + ".join(bits)


# -- normalization ------------------------------------------------------------

def tri_normalize(n: int, letters, coeff: RatFunc = ONE) -> UqElt:
    """Normalize a generic product of letters into triangular words.

    ``letters`` is a sequence of ('E', i), ('F', i) or ('K', kvec) items.
    Rewriting is a worklist that eliminates every E-before-F, E-before-K,
    K-before-F adjacency and merges adjacent K's; each rewrite strictly
    reduces the number of misordered adjacencies, so it terminates.
    """
    z = (0,) * (n - 1)
    work = [(coeff, tuple(letters))]
    out: dict[TriWord, RatFunc] = {}
    while work:
        c, seq = work.pop()
        idx = _first_misorder(seq)
        if idx is None:
            f = tuple(i for kind, i in seq if kind == "F")
            e = tuple(i for kind, i in seq if kind == "E")
            k = z
            for kind, v in seq:
                if kind == "K":
                    k = _kadd(k, v)
            tw = (f, k, e)
            s = out.get(tw)
            s = c if s is None else s + c
            if s.is_zero():
                out.pop(tw, None)
            else:
                out[tw] = s
            continue
        a, b = seq[idx], seq[idx + 1]
        head, tail = seq[:idx], seq[idx + 2 :]
        if a[0] == "E" and b[0] == "F":
            work.append((c, head + (b, a) + tail))
            if a[1] == b[1]:
                kp = _alpha(n, a[1])
                km = tuple(-x for x in kp)
                work.append((c / QHAT, head + (("K", kp),) + tail))
                work.append((-(c / QHAT), head + (("K", km),) + tail))
        elif a[0] == "E" and b[0] == "K":
            phase = qpow(-cartan_pairing(n, b[1], a[1]))
            work.append((c * phase, head + (b, a) + tail))
        elif a[0] == "K" and b[0] == "F":
            phase = qpow(-cartan_pairing(n, a[1], b[1]))
            work.append((c * phase, head + (b, a) + tail))
        elif a[0] == "K" and b[0] == "K":
            work.append((c, head + (("K", _kadd(a[1], b[1])),) + tail))
        else:  # pragma: no cover
            raise AssertionError("unexpected rewrite pair")
    return UqElt(n, out)


def _first_misorder(seq):
    for i in range(len(seq) - 1):
        a, b = seq[i][0], seq[i + 1][0]
        if (a, b) in (("E", "F"), ("E", "K"), ("K", "F"), ("K", "K")):
            return i
    return None


def _letters(tw: TriWord):
    f, k, e = tw
    seq = [("F", i) for i in f]
    if any(k):
        seq.append(("K", k))
    seq.extend(("E", i) for i in e)
    return tuple(seq)


def uq_mul(a: UqElt, b: UqElt) -> UqElt:
    """Product, normalized to triangular words."""
    if a.n != b.n:
        raise ValueError("mixed ranks")
    out = UqElt(a.n)
    for tw1, c1 in a.terms.items():
        for tw2, c2 in b.terms.items():
            out = out + tri_normalize(a.n, _letters(tw1) + _letters(tw2), c1 * c2)
    return out


def uq_equals(a: UqElt, b: UqElt, cap: int | None = None) -> bool:
    """Equality in the quantum group via the triangular decomposition.

    Terms are grouped by K-vector; for each group the double sum over
    (F-word, E-word) must vanish, which is decided by reducing the F-legs to
    Serre-complement coordinates and then requiring every E-leg combination
    to lie in the Serre ideal.
    """
    if a.n != b.n:
        raise ValueError("mixed ranks")
    n = a.n
    diff = a - b
    if not diff.terms:
        return True
    by_k: dict[KVec, dict] = {}
    for (f, k, e), c in diff.terms.items():
        by_k.setdefault(k, {})[(f, e)] = c  # TriWord keys are unique
    for k, group in by_k.items():
        # split by F-weight so coordinates are taken per weight space
        by_fweight: dict[tuple, dict] = {}
        for (f, e), c in group.items():
            by_fweight.setdefault(word_weight(f, n), {}).setdefault((f, e), c)
        for fweight, terms in by_fweight.items():
            # reduce F-legs to complement coordinates
            collected: dict[tuple, dict] = {}
            if sum(fweight) == 0:
                for (f, e), c in terms.items():
                    _acc(collected, (), e, c)
            else:
                ech, _ = ORACLE.slice(n, fweight, cap)
                for (f, e), c in terms.items():
                    residual = ech.reduce_vector({f: c})
                    for fw, cc in residual.items():
                        _acc(collected, fw, e, cc)
            # group by F complement word; E combination must be in the ideal
            by_fword: dict[tuple, FreeElt] = {}
            for (fw, e), c in collected.items():
                cur = by_fword.get(fw)
                add = FreeElt(n, "E", {e: c})
                by_fword[fw] = add if cur is None else cur + add
            from .freealg import equals_mod_serre

            for fw, eelt in by_fword.items():
                if not equals_mod_serre(eelt, FreeElt.zero(n, "E"), cap):
                    return False
    return True


def _acc(store: dict, fw, e, c: RatFunc):
    key = (fw, e)
    cur = store.get(key)
    s = c if cur is None else cur + c
    if s.is_zero():
        store.pop(key, None)
    else:
        store[key] = s
