"""Symmetric-group combinatorics for sl(n): parabolic subsets, reduced
words, and the root data indexing the quantized nilradical.

Conventions (fixed once, used consistently everywhere):

* Permutations are windows ``(w(1), ..., w(n))`` on {1..n} and compose as
  functions, ``compose(w, v)(i) = w(v(i))``.  Products written left-to-right
  in the classical style ("first u, then v") are ``u.then(v) = compose(v, u)``.
* A word ``(i_1, ..., i_t)`` of simple reflections evaluates to the function
  ``s_{i_1} ∘ s_{i_2} ∘ ... ∘ s_{i_t}`` (rightmost letter acts first).
* ``wJ`` stored on :class:`ParabolicData` is the unique permutation that is
  increasing inside each block of the parabolic partition and decreasing
  across blocks.  It equals ``w0J.then(w0)`` and is the *inverse* of the
  evaluation of the canonical reduced word; classifier formulas that
  mathematically refer to the inverse of the word element therefore use
  ``wJ`` directly.

The generator index set ``Phi_J`` is the set of pairs (i, j) with some
k in J satisfying i <= k < j; it is stored in the convex order carved out
by the canonical reduced word.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import reduce


Pair = tuple[int, int]


class Perm:
    """A permutation of {1..n} in one-line (window) notation."""

    __slots__ = ("window",)

    def __init__(self, window):
        w = tuple(window)
        if sorted(w) != list(range(1, len(w) + 1)):
            raise ValueError(f"not a permutation window: {w}")
        object.__setattr__(self, "window", w)

    def __setattr__(self, *a):
        raise AttributeError("Perm is immutable")

    @property
    def n(self) -> int:
        return len(self.window)

    def __call__(self, i: int) -> int:
        return self.window[i - 1]

    def __eq__(self, other):
        return isinstance(other, Perm) and self.window == other.window

    def __hash__(self):
        return hash(self.window)

    def __repr__(self):
        return f"Perm{self.window}"

    @staticmethod
    def identity(n: int) -> "Perm":
        return Perm(range(1, n + 1))

    @staticmethod
    def simple(n: int, i: int) -> "Perm":
        if not 1 <= i <= n - 1:
            raise ValueError(f"simple reflection index {i} out of range")
        w = list(range(1, n + 1))
        w[i - 1], w[i] = w[i], w[i - 1]
        return Perm(w)

    @staticmethod
    def longest(n: int) -> "Perm":
        return Perm(range(n, 0, -1))

    def compose(self, other: "Perm") -> "Perm":
        """Function composition: (self ∘ other)(i) = self(other(i))."""
        return Perm(tuple(self.window[other.window[i] - 1] for i in range(self.n)))

    def then(self, other: "Perm") -> "Perm":
        """Left-to-right product: first self, then other."""
        return other.compose(self)

    def inverse(self) -> "Perm":
        w = [0] * self.n
        for i, v in enumerate(self.window, start=1):
            w[v - 1] = i
        return Perm(w)

    def length(self) -> int:
        """Number of inversions; equals the length of any reduced word."""
        w = self.window
        return sum(
            1 for a in range(len(w)) for b in range(a + 1, len(w)) if w[a] > w[b]
        )

    def is_identity(self) -> bool:
        return all(v == i + 1 for i, v in enumerate(self.window))

    def reduced_word(self) -> "ReducedWord":
        """A reduced word whose evaluation (rightmost first) is self."""
        letters_rev = []
        w = list(self.window)
        while True:
            for i in range(len(w) - 1):
                if w[i] > w[i + 1]:
                    w[i], w[i + 1] = w[i + 1], w[i]
                    letters_rev.append(i + 1)
                    break
            else:
                break
        return ReducedWord(self.n, tuple(reversed(letters_rev)))


@dataclass(frozen=True)
class ReducedWord:
    """A word in the simple reflections s_1..s_{n-1} (not checked reduced)."""

    n: int
    letters: tuple[int, ...]

    def __post_init__(self):
        for a in self.letters:
            if not 1 <= a <= self.n - 1:
                raise ValueError(f"letter {a} out of range for n={self.n}")

    def __len__(self):
        return len(self.letters)

    def evaluate(self) -> Perm:
        """s_{i_1} ∘ s_{i_2} ∘ ... ∘ s_{i_t} (rightmost letter acts first)."""
        return reduce(
            lambda p, a: p.compose(Perm.simple(self.n, a)),
            self.letters,
            Perm.identity(self.n),
        )

    def concat(self, other: "ReducedWord") -> "ReducedWord":
        if other.n != self.n:
            raise ValueError("mixed n")
        return ReducedWord(self.n, self.letters + other.letters)


def is_reduced(word: ReducedWord) -> bool:
    """True iff the evaluated permutation has as many inversions as letters."""
    return word.evaluate().length() == len(word.letters)


def roots_along(word: ReducedWord) -> list[Pair]:
    """The positive roots beta_k = s_{i_1}...s_{i_{k-1}}(alpha_{i_k}).

    Roots of sl(n) are encoded as pairs (i, j), i < j, meaning e_i - e_j.
    Raises ValueError when the word is not reduced.
    """
    if not is_reduced(word):
        raise ValueError("word is not reduced")
    out: list[Pair] = []
    p = Perm.identity(word.n)
    for a in word.letters:
        i, j = p(a), p(a + 1)
        if i >= j:
            raise ValueError("negative root encountered; word not reduced")
        out.append((i, j))
        p = p.compose(Perm.simple(word.n, a))
    return out


@dataclass(frozen=True)
class ParabolicData:
    """All combinatorial data attached to a parabolic subset J of [n-1]."""

    n: int
    J: tuple[int, ...]
    r: tuple[int, ...]  # r[m] for m in 1..n (index 0 unused)
    phi: tuple[Pair, ...]  # convex order from the canonical reduced word
    blocks: tuple[tuple[int, ...], ...]
    w0: Perm
    w0J: Perm
    wJ: Perm
    wJ_word: ReducedWord
    Jtilde: tuple[int, ...]
    Mfun: tuple[int, ...]  # M[p], index 0 unused
    Nfun: tuple[int, ...]  # N[p], index 0 unused

    @property
    def phi_set(self) -> frozenset:
        return frozenset(self.phi)

    def block_of(self, i: int) -> int:
        """0-based index of the block containing position i."""
        for b, blk in enumerate(self.blocks):
            if i in blk:
                return b
        raise ValueError(f"position {i} out of range")

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "J": list(self.J),
            "r": {str(m): self.r[m] for m in range(1, self.n + 1)},
            "phi": [list(p) for p in self.phi],
            "w0": list(self.w0.window),
            "w0J": list(self.w0J.window),
            "wJ": list(self.wJ.window),
            "wJ_word": list(self.wJ_word.letters),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)


def sk_word(pd: ParabolicData, k: int) -> ReducedWord:
    """The k-th factor of the canonical reduced word (k in 1..|J|).

    With J = {i_1 < ... < i_t} and i_0 = 0, the factor is the run
    (s_{i_k} .. s_{n-1})(s_{i_k - 1} .. s_{n-2}) ... down to the group
    starting at s_{i_{k-1}+1}.
    """
    t = len(pd.J)
    if not 1 <= k <= t:
        raise ValueError(f"k={k} out of range 1..{t}")
    ik = pd.J[k - 1]
    ik_prev = pd.J[k - 2] if k >= 2 else 0
    letters: list[int] = []
    for g in range(ik - ik_prev):
        letters.extend(range(ik - g, pd.n - g))
    return ReducedWord(pd.n, tuple(letters))


def build_parabolic(n: int, J) -> ParabolicData:
    """Assemble every derived field for the parabolic subset J of [n-1]."""
    if n < 2:
        raise ValueError("n must be at least 2")
    Jt = tuple(sorted(set(int(j) for j in J)))
    for j in Jt:
        if not 1 <= j <= n - 1:
            raise ValueError(f"J must be a subset of 1..{n-1}, got {j}")

    jset = set(Jt)
    r = [0] * (n + 1)
    for m in range(1, n + 1):
        r[m] = max((k for k in jset | {0} if k < m), default=0)

    blocks: list[tuple[int, ...]] = []
    cur = [1]
    for m in range(2, n + 1):
        if r[m] == r[cur[0]]:
            cur.append(m)
        else:
            blocks.append(tuple(cur))
            cur = [m]
    blocks.append(tuple(cur))

    w0 = Perm.longest(n)
    w0J_window = []
    for blk in blocks:
        w0J_window.extend(reversed(blk))
    w0J = Perm(w0J_window)

    # block-sorting permutation: increasing inside blocks, decreasing across
    wJ_window = [0] * n
    top = n
    for blk in blocks:
        lo = top - len(blk) + 1
        for off, pos in enumerate(blk):
            wJ_window[pos - 1] = lo + off
        top = lo - 1
    wJ = Perm(wJ_window)

    # canonical reduced word: concatenation S_t, S_{t-1}, ..., S_1
    word = ReducedWord(n, ())
    # sk_word needs a ParabolicData; build factors directly here instead
    t = len(Jt)
    pieces = []
    for k in range(t, 0, -1):
        ik = Jt[k - 1]
        ik_prev = Jt[k - 2] if k >= 2 else 0
        letters = []
        for g in range(ik - ik_prev):
            letters.extend(range(ik - g, n - g))
        pieces.append(tuple(letters))
    all_letters = tuple(x for piece in pieces for x in piece)
    word = ReducedWord(n, all_letters)

    phi = tuple(roots_along(word)) if all_letters else ()

    Jtilde = tuple(sorted(n - j for j in Jt))
    Mfun = [0] * (n + 1)
    Nfun = [0] * (n + 1)
    for p in range(1, n + 1):
        Mfun[p] = min((x for x in jset | {n} if p <= x), default=n)
        Nfun[p] = 1 + sum(1 for x in jset if x < p)

    pd = ParabolicData(
        n=n,
        J=Jt,
        r=tuple(r),
        phi=phi,
        blocks=tuple(blocks),
        w0=w0,
        w0J=w0J,
        wJ=wJ,
        wJ_word=word,
        Jtilde=Jtilde,
        Mfun=tuple(Mfun),
        Nfun=tuple(Nfun),
    )

    # internal consistency: the stored permutation is the inverse of the
    # evaluated word, the factorization lengths add, and phi matches the
    # closure description of the block staircase
    if word.letters:
        if word.evaluate().inverse() != wJ:
            raise AssertionError("parabolic permutation disagrees with word")
    if wJ.length() != len(phi):
        raise AssertionError("length of wJ disagrees with |Phi_J|")
    if w0J.then(wJ) != w0 or w0J.length() + wJ.length() != w0.length():
        raise AssertionError("parabolic factorization failed")
    return pd


def phi_closure(n: int, J) -> frozenset:
    """The staircase closure description of the index set.

    Smallest set of pairs containing (j, j+1) for j in J and closed under
    decreasing i and increasing j inside the square.
    """
    out = set()
    stack = [(j, j + 1) for j in J]
    while stack:
        p = stack.pop()
        if p in out:
            continue
        out.add(p)
        i, j = p
        if i > 1:
            stack.append((i - 1, j))
        if j < n:
            stack.append((i, j + 1))
    return frozenset(out)


def all_subsets(n: int):
    """All subsets of [n-1], smallest first; handy for verification sweeps."""
    import itertools

    base = list(range(1, n))
    for size in range(n):
        for combo in itertools.combinations(base, size):
            yield combo
