"""Lusztig symmetries on the quantum group, root-vector construction along
reduced words, and mechanical verification of the commutator lemmas.

The symmetry T_i acts on generators by

    T_i(K_mu) = K_{s_i(mu)}
    T_i(E_j)  = E_j                      (|i-j| > 1)
              = E_i E_j - q^-1 E_j E_i   (|i-j| = 1)
              = -F_i K_{alpha_i}         (j = i)
    T_i(F_j)  = F_j                      (|i-j| > 1)
              = -q (F_i F_j - q^-1 F_j F_i)  (|i-j| = 1)
              = -K_{alpha_i}^-1 E_i      (j = i)

and extends as an algebra endomorphism.  Only the forward direction is
implemented; every lemma below is a statement about forward images and is
verified directly against the free-algebra oracle.

``verify_lemma`` enumerates all admissible index tuples of a lemma for a
given rank and returns one report entry per instance.
"""

from __future__ import annotations

from dataclasses import dataclass

from .freealg import FreeElt, OracleBudgetError, equals_mod_serre, nested_E
from .scalars import ONE, QINV, RatFunc, qpow
from .uqtri import UqElt, cartan_pairing, tri_normalize, uq_mul, uq_equals
from .weyl import ParabolicData, Perm, ReducedWord


def _si_mu(n: int, i: int, mu):
    """Reflection on the root lattice: s_i(mu) = mu - <mu, alpha_i> alpha_i."""
    c = cartan_pairing(n, mu, i)
    out = list(mu)
    out[i - 1] -= c
    return tuple(out)


def _t_image_E(n: int, i: int, j: int) -> UqElt:
    if abs(i - j) > 1:
        return UqElt.E(n, j)
    if abs(i - j) == 1:
        a = uq_mul(UqElt.E(n, i), UqElt.E(n, j))
        b = uq_mul(UqElt.E(n, j), UqElt.E(n, i))
        return a - b.scaled(QINV)
    alpha = tuple(1 if k == i - 1 else 0 for k in range(n - 1))
    return uq_mul(UqElt.F(n, i), UqElt.K(n, alpha)).scaled(-ONE)


def _t_image_F(n: int, i: int, j: int) -> UqElt:
    if abs(i - j) > 1:
        return UqElt.F(n, j)
    if abs(i - j) == 1:
        a = uq_mul(UqElt.F(n, i), UqElt.F(n, j))
        b = uq_mul(UqElt.F(n, j), UqElt.F(n, i))
        return (a - b.scaled(QINV)).scaled(-qpow(1))
    malpha = tuple(-1 if k == i - 1 else 0 for k in range(n - 1))
    return uq_mul(UqElt.K(n, malpha), UqElt.E(n, i)).scaled(-ONE)


def apply_T(i: int, elt: UqElt) -> UqElt:
    """Image of elt under the i-th braid symmetry."""
    n = elt.n
    if not 1 <= i <= n - 1:
        raise ValueError(f"braid index {i} out of range")
    out = UqElt.zero(n)
    for (f, k, e), c in elt.terms.items():
        acc = UqElt.one(n)
        for b in f:
            acc = uq_mul(acc, _t_image_F(n, i, b))
        if any(k):
            acc = uq_mul(acc, UqElt.K(n, _si_mu(n, i, k)))
        for a in e:
            acc = uq_mul(acc, _t_image_E(n, i, a))
        out = out + acc.scaled(c)
    return out


def apply_T_word(word, elt: UqElt) -> UqElt:
    """T_{i_1} ∘ T_{i_2} ∘ ... ∘ T_{i_m}: the rightmost letter acts first."""
    letters = word.letters if isinstance(word, ReducedWord) else tuple(word)
    for a in reversed(letters):
        elt = apply_T(a, elt)
    return elt


class RootVectorError(AssertionError):
    """A braid image expected to be a pure E-element was not."""


@dataclass
class RootVectorTable:
    """Root vectors of the quantized nilradical, indexed by the pair set."""

    pd: ParabolicData
    vectors: dict  # (i, j) -> UqElt, pure E
    order: tuple  # convex order of pairs, from the canonical word

    def free(self, i: int, j: int) -> FreeElt:
        return self.vectors[(i, j)].pure_E_part()


def root_vectors(pd: ParabolicData) -> RootVectorTable:
    """Braid-construct every root vector along the canonical reduced word."""
    vectors = {}
    letters = pd.wJ_word.letters
    for k, a in enumerate(letters):
        elt = apply_T_word(letters[:k], UqElt.E(pd.n, a))
        if not elt.is_pure_E():
            raise RootVectorError(
                f"root vector at position {k} has F/K content: {elt!r}"
            )
        vectors[pd.phi[k]] = elt
    return RootVectorTable(pd=pd, vectors=vectors, order=pd.phi)


def lemma1_vector(pd: ParabolicData, i: int, j: int) -> FreeElt:
    """The nested-commutator form of the root vector with index (i, j):
    indices r(j), r(j)-1, ..., i followed by r(j)+1, ..., j-1."""
    if (i, j) not in pd.phi_set:
        raise ValueError(f"({i},{j}) is not a generator index")
    r = pd.r[j]
    seq = list(range(r, i - 1, -1)) + list(range(r + 1, j))
    return nested_E(pd.n, seq)


# -- lemma verification sweeps -------------------------------------------------

def _asc(n, k, l):
    """ascending nested commutator E_{k, k+1, ..., l}"""
    return nested_E(n, range(k, l + 1))


def _dsc(n, l, k):
    """descending nested commutator E_{l, l-1, ..., k}"""
    return nested_E(n, range(l, k - 1, -1))


def _report(lemma, instance, status, witness=None):
    entry = {"lemma": lemma, "instance": instance, "status": status}
    if witness is not None:
        entry["witness"] = witness
    return entry


def _check_free(lemma, instance, lhs: FreeElt, rhs: FreeElt, cap):
    try:
        ok = equals_mod_serre(lhs, rhs, cap)
    except OracleBudgetError as e:
        return _report(lemma, instance, "skipped", f"budget: {e}")
    if ok:
        return _report(lemma, instance, "pass")
    return _report(lemma, instance, "fail", repr(lhs - rhs))


def _check_uq(lemma, instance, lhs: UqElt, rhs: UqElt, cap):
    try:
        ok = uq_equals(lhs, rhs, cap)
    except OracleBudgetError as e:
        return _report(lemma, instance, "skipped", f"budget: {e}")
    if ok:
        return _report(lemma, instance, "pass")
    return _report(lemma, instance, "fail", repr(lhs - rhs))


def _free_uq(elt: FreeElt) -> UqElt:
    return UqElt.from_free(elt)


def verify_lemma(lemma_id: str, n: int, J=None, cap: int | None = None) -> list:
    """Verify every instance of one lemma at rank n (and parabolic J where
    the statement needs one).  Returns a list of report entries."""
    out = []
    if lemma_id == "prop_braid":
        import itertools

        for window in itertools.permutations(range(1, n + 1)):
            w = Perm(window)
            word = w.reduced_word()
            for a in range(1, n):
                if w(a + 1) != w(a) + 1:
                    continue  # w(alpha_a) must stay simple
                lhs = apply_T_word(word, UqElt.E(n, a))
                rhs = UqElt.E(n, w(a))
                out.append(
                    _check_uq("prop_braid", f"w={window},alpha={a}", lhs, rhs, cap)
                )
        return out

    if lemma_id.startswith("TE_"):
        part = int(lemma_id.split("_")[1])
        if part in (1, 2, 3, 4):
            for k in range(1, n):
                for l in range(k + 1, n):
                    if part == 1:
                        lhs = apply_T(k, _free_uq(_asc(n, k + 1, l)))
                        rhs = _free_uq(_asc(n, k, l))
                    elif part == 2:
                        lhs = apply_T(l, _free_uq(_asc(n, k, l)))
                        rhs = _free_uq(_asc(n, k, l - 1))
                    elif part == 3:
                        lhs = apply_T(l, _free_uq(_dsc(n, l - 1, k)))
                        rhs = _free_uq(_dsc(n, l, k))
                    else:
                        lhs = apply_T(k, _free_uq(_dsc(n, l, k)))
                        rhs = _free_uq(_dsc(n, l, k + 1))
                    out.append(_check_uq(lemma_id, f"k={k},l={l}", lhs, rhs, cap))
        elif part in (5, 6):
            for k in range(1, n):
                for m in range(k, n):
                    for l in range(1, n):
                        if l in (k - 1, k, m, m + 1):
                            continue
                        body = _asc(n, k, m) if part == 5 else _dsc(n, m, k)
                        lhs = apply_T(l, _free_uq(body))
                        out.append(
                            _check_uq(
                                lemma_id, f"k={k},l={l},m={m}", lhs, _free_uq(body), cap
                            )
                        )
        else:
            raise ValueError(f"unknown lemma part {lemma_id}")
        return out

    if lemma_id.startswith("EE_"):
        from .freealg import free_mul

        part = int(lemma_id.split("_")[1])
        if part == 1:
            for k in range(1, n):
                for l in range(k, n):
                    for m in range(l + 1, n):
                        a, b = _asc(n, k, l), _asc(n, k, m)
                        lhs = free_mul(a, b)
                        rhs = free_mul(b, a).scaled(qpow(1))
                        out.append(
                            _check_free(lemma_id, f"k={k},l={l},m={m}", lhs, rhs, cap)
                        )
        elif part == 2:
            for k in range(1, n):
                for l in range(k + 1, n):
                    for m in range(l, n):
                        a, b = _dsc(n, m, l), _dsc(n, m, k)
                        lhs = free_mul(a, b)
                        rhs = free_mul(b, a).scaled(qpow(1))
                        out.append(
                            _check_free(lemma_id, f"k={k},l={l},m={m}", lhs, rhs, cap)
                        )
        elif part in (3, 4, 5, 6):
            for k in range(1, n):
                for l in range(k + 1, n):
                    for m in range(l, n):
                        for p in range(m + 1, n):
                            if part == 3:
                                a, b = _asc(n, k, p), _asc(n, l, m)
                            elif part == 4:
                                a, b = _dsc(n, p, k), _dsc(n, m, l)
                            elif part == 5:
                                a, b = _asc(n, k, p), _dsc(n, m, l)
                            else:
                                a, b = _dsc(n, p, k), _asc(n, l, m)
                            lhs = free_mul(a, b)
                            rhs = free_mul(b, a)
                            out.append(
                                _check_free(
                                    lemma_id, f"k={k},l={l},m={m},p={p}", lhs, rhs, cap
                                )
                            )
        elif part in (7, 8):
            from .freealg import qcomm
            from .scalars import QHAT

            for k in range(2, n - 1):
                Ek = FreeElt.gen(n, k)
                if part == 7:
                    body = nested_E(n, [k, k - 1, k + 1])
                    lhs = free_mul(Ek, body) - free_mul(body, Ek)
                    rhs = free_mul(
                        nested_E(n, [k, k - 1]), nested_E(n, [k, k + 1])
                    ).scaled(QHAT)
                else:
                    body = qcomm(FreeElt.gen(n, k + 1), nested_E(n, [k - 1, k]))
                    lhs = free_mul(body, Ek) - free_mul(Ek, body)
                    rhs = free_mul(
                        nested_E(n, [k + 1, k]), nested_E(n, [k - 1, k])
                    ).scaled(QHAT)
                out.append(_check_free(lemma_id, f"k={k}", lhs, rhs, cap))
        else:
            raise ValueError(f"unknown lemma part {lemma_id}")
        return out

    if lemma_id.startswith("TX_") or lemma_id == "lemma1":
        if J is None:
            raise ValueError(f"{lemma_id} needs a parabolic subset J")
        from .weyl import build_parabolic

        pd = J if isinstance(J, ParabolicData) else build_parabolic(n, J)
        table = root_vectors(pd)
        if lemma_id == "lemma1":
            for (i, j) in pd.phi:
                lhs = table.free(i, j)
                rhs = lemma1_vector(pd, i, j)
                out.append(_check_free("lemma1", f"(i,j)=({i},{j})", lhs, rhs, cap))
            return out
        part = int(lemma_id.split("_")[1])
        for (i, j) in pd.phi:
            r = pd.r[j]
            if part == 1:
                if j > r + 1:
                    lhs = apply_T(j - 1, table.vectors[(i, j)])
                    rhs = table.vectors[(i, j - 1)]
                    out.append(_check_uq(lemma_id, f"(i,j)=({i},{j})", lhs, rhs, cap))
            elif part == 2:
                if i < r:
                    lhs = apply_T(i, table.vectors[(i, j)])
                    rhs = table.vectors[(i + 1, j)]
                    out.append(_check_uq(lemma_id, f"(i,j)=({i},{j})", lhs, rhs, cap))
            elif part == 3:
                for k in range(1, n):
                    if k in (i - 1, i, r, j - 1, j):
                        continue
                    lhs = apply_T(k, table.vectors[(i, j)])
                    rhs = table.vectors[(i, j)]
                    out.append(
                        _check_uq(lemma_id, f"(i,j)=({i},{j}),k={k}", lhs, rhs, cap)
                    )
            else:
                raise ValueError(f"unknown lemma part {lemma_id}")
        return out

    raise ValueError(f"unknown lemma id {lemma_id!r}")


LEMMA_IDS = (
    ["prop_braid"]
    + [f"TE_{i}" for i in range(1, 7)]
    + [f"EE_{i}" for i in range(1, 9)]
    + [f"TX_{i}" for i in range(1, 4)]
    + ["lemma1"]
)
