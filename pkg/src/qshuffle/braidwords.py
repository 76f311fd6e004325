"""Words, diagonal braidings, Matsumoto lifts, shuffles and the total symmetrizer.

Letters are integers: ``0..n-1`` stand for F_1..F_n and ``n`` (the rank) for v_lambda, so
the natural integer order is the word order F_1 < ... < F_n < v_lambda.  A word is a tuple
of letters.

Permutations are one-line tuples ``w`` of 0-based positions.  ``T_w`` moves the letter at
position ``i`` to position ``w[i]``; ``s_i`` swaps positions ``i, i+1`` and ``T_{uv} = T_u
T_v``.  Under this action the shuffle set ``enumerate_shuffles(p, r)`` (``w^{-1}`` increasing
on both blocks) consists of "deshuffles"; their inverses are the interleavings used by the
shuffle product.

For a diagonal braiding every ``T_w`` maps a word to a single word times ``q^e`` where ``e``
sums the braiding exponents of the letter pairs that ``w`` inverts.  ``matsumoto_action``
composes the elementary ``sigma_i`` along a reduced word and is the definitional route;
``matsumoto_exponent`` is the closed form, and tests check the two agree.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, permutations

from .cartan import CartanDatum, WeightSpec
from .exact.field import Field, FieldElem
from .exact.linalg import SparseMatrix


@dataclass(frozen=True, order=True)
class Content:
    """Letter multiplicities c (simple letters) and k (lambda letters)."""

    c: tuple
    k: int = 0

    @property
    def length(self) -> int:
        return sum(self.c) + self.k

    @property
    def f_length(self) -> int:
        return sum(self.c)

    @property
    def key(self) -> str:
        return ",".join(str(x) for x in self.c) + f";{self.k}"

    @classmethod
    def from_key(cls, key: str) -> "Content":
        cs, k = key.split(";")
        return cls(tuple(int(x) for x in cs.split(",")), int(k))

    def __add__(self, other: "Content") -> "Content":
        return Content(tuple(a + b for a, b in zip(self.c, other.c)), self.k + other.k)

    def __sub__(self, other: "Content") -> "Content":
        return Content(tuple(a - b for a, b in zip(self.c, other.c)), self.k - other.k)

    def is_nonneg(self) -> bool:
        return self.k >= 0 and all(x >= 0 for x in self.c)

    def is_zero(self) -> bool:
        return self.k == 0 and not any(self.c)

    def letters(self) -> tuple:
        """Sorted multiset of letters with this content."""
        n = len(self.c)
        out = []
        for i, m in enumerate(self.c):
            out.extend([i] * m)
        return tuple(out + [n] * self.k)


def word_content(word, n: int) -> Content:
    c = [0] * n
    k = 0
    for a in word:
        if a == n:
            k += 1
        else:
            c[a] += 1
    return Content(tuple(c), k)


def word_str(word, n: int) -> str:
    return " ".join("v" if a == n else f"F{a + 1}" for a in word) or "()"


@lru_cache(maxsize=4096)
def block_words(content: Content) -> tuple:
    """All words of a content block in lexicographic order."""
    letters = content.letters()
    counts = defaultdict(int)
    for a in letters:
        counts[a] += 1
    keys = sorted(counts)
    out = []
    cur = []

    def rec(remaining):
        if remaining == 0:
            out.append(tuple(cur))
            return
        for a in keys:
            if counts[a]:
                counts[a] -= 1
                cur.append(a)
                rec(remaining - 1)
                cur.pop()
                counts[a] += 1

    rec(len(letters))
    return tuple(out)


class Braiding:
    """Diagonal braiding on F_1..F_n (and v_lambda when a weight is given).

    ``E[a][b]`` is the exponent with sigma(a (x) b) = q^E[a][b] (b (x) a): (alpha_i, alpha_j)
    between simple letters, -(lambda, alpha_i) between F_i and v_lambda, and 2 for v_lambda
    with itself.
    """

    def __init__(self, datum: CartanDatum, field: Field, lam: WeightSpec | None = None):
        self.datum = datum
        self.field = field
        self.lam = lam
        n = datum.n
        self.n = n
        A = datum.A
        m = lam.m(datum) if lam is not None else (0,) * n
        E = [[0] * (n + 1) for _ in range(n + 1)]
        for i in range(n):
            for j in range(n):
                E[i][j] = A[i][j]
            E[i][n] = E[n][i] = -m[i]
        E[n][n] = 2
        self.E = tuple(tuple(r) for r in E)

    def __repr__(self):
        lam = None if self.lam is None else list(self.lam.c)
        return f"Braiding(C={self.datum.C}, lambda={lam}, {self.field!r})"

    def coeff(self, a: int, b: int) -> FieldElem:
        self._check_letter(a)
        self._check_letter(b)
        return self.field.qpow(self.E[a][b])

    def _check_letter(self, a):
        if not 0 <= a <= self.n or (a == self.n and self.lam is None):
            raise ValueError(f"letter {a} is not valid for this braiding")

    def to_field(self, exps: dict) -> FieldElem:
        """sum_e count * q^e."""
        return self.field.from_laurent(exps)


def braiding_coeff(a: int, b: int, br: Braiding) -> FieldElem:
    return br.coeff(a, b)


class LinComb:
    """Sparse linear combination of words with FieldElem coefficients."""

    __slots__ = ("field", "terms")

    def __init__(self, field: Field, terms=None):
        self.field = field
        self.terms: dict[tuple, FieldElem] = {}
        if terms:
            for w, v in dict(terms).items():
                v = field(v)
                if not v.is_zero():
                    self.terms[tuple(w)] = v

    @classmethod
    def word(cls, field: Field, word, coeff=1) -> "LinComb":
        return cls(field, {tuple(word): coeff})

    def __iter__(self):
        for w in sorted(self.terms):
            yield w, self.terms[w]

    def __len__(self):
        return len(self.terms)

    def __getitem__(self, w):
        return self.terms.get(tuple(w), self.field.zero)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, LinComb):
            return NotImplemented
        return self.field is other.field and self.terms == other.terms

    def __add__(self, other: "LinComb") -> "LinComb":
        out = dict(self.terms)
        for w, v in other.terms.items():
            old = out.get(w)
            out[w] = v if old is None else old + v
        return LinComb(self.field, {w: v for w, v in out.items() if not v.is_zero()})

    def __neg__(self):
        return LinComb(self.field, {w: -v for w, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "LinComb":
        c = self.field(c)
        if c.is_zero():
            return LinComb(self.field)
        return LinComb(self.field, {w: c * v for w, v in self.terms.items()})

    def __rmul__(self, c):
        return self.scale(c)

    def contents(self, n: int) -> set:
        return {word_content(w, n) for w in self.terms}

    def __repr__(self):
        if not self.terms:
            return "LinComb(0)"
        return "LinComb(" + " + ".join(f"({v})*{list(w)}" for w, v in self) + ")"


# -- braid group actions ---------------------------------------------------------------------


def apply_sigma_i(x: LinComb, pos: int, br: Braiding) -> LinComb:
    """id^(pos) (x) sigma (x) id on every term (0-based pos)."""
    out = {}
    for w, v in x.terms.items():
        if not 0 <= pos < len(w) - 1:
            raise IndexError(f"sigma_{pos} needs words of length >= {pos + 2}, got {len(w)}")
        a, b = w[pos], w[pos + 1]
        nw = w[:pos] + (b, a) + w[pos + 2 :]
        out[nw] = v * br.field.qpow(br.E[a][b])
    return LinComb(br.field, out)


def reduced_word(w) -> tuple:
    """Deterministic reduced word (i_1, ..., i_k) with w = s_{i_1} ... s_{i_k}, by bubble sort."""
    w = list(w)
    steps = []
    while True:
        for i in range(len(w) - 1):
            if w[i] > w[i + 1]:
                w[i], w[i + 1] = w[i + 1], w[i]  # w <- w s_i
                steps.append(i)
                break
        else:
            break
    return tuple(reversed(steps))


def perm_from_word(word, n: int) -> tuple:
    """s_{i_1} ... s_{i_k} as a one-line tuple."""
    w = list(range(n))
    for i in word:  # right-multiplying by s_i swaps one-line entries i, i+1
        w[i], w[i + 1] = w[i + 1], w[i]
    return tuple(w)


def inverse_perm(w) -> tuple:
    inv = [0] * len(w)
    for i, x in enumerate(w):
        inv[x] = i
    return tuple(inv)


def compose(u, v) -> tuple:
    """(u v)(i) = u(v(i))."""
    return tuple(u[x] for x in v)


def act_on_word(w, word) -> tuple:
    """Permute letters: the letter at position i lands at position w[i]."""
    out = [None] * len(word)
    for i, a in enumerate(word):
        out[w[i]] = a
    return tuple(out)


def matsumoto_action(w, x: LinComb, br: Braiding, word=None) -> LinComb:
    """T_w = sigma_{i_1} ... sigma_{i_k} for a reduced word of w (default: ``reduced_word``)."""
    w = tuple(w)
    for t in x.terms:
        if len(t) != len(w):
            raise ValueError(f"permutation of size {len(w)} applied to word of length {len(t)}")
    word = reduced_word(w) if word is None else tuple(word)
    for i in reversed(word):
        x = apply_sigma_i(x, i, br)
    return x


def matsumoto_exponent(w, word, E) -> int:
    """Exponent e with T_w(word) = q^e act_on_word(w, word): sum over pairs w inverts."""
    e = 0
    n = len(w)
    for a in range(n):
        for b in range(a + 1, n):
            if w[a] > w[b]:
                e += E[word[a]][word[b]]
    return e


def enumerate_shuffles(p: int, r: int) -> list[tuple]:
    """Permutations w of size p+r with w^{-1} increasing on 0..p-1 and on p..p+r-1."""
    n = p + r
    out = []
    for left in combinations(range(n), p):
        inv = list(left) + [i for i in range(n) if i not in left]
        out.append(inverse_perm(inv))
    return out


def all_permutations(n: int):
    return list(permutations(range(n)))


def symmetrize_direct(word, br: Braiding) -> dict:
    """sum over all w in S_n of T_w(word), by the closed form (for tests; n! terms)."""
    acc: dict = defaultdict(lambda: defaultdict(int))
    for w in permutations(range(len(word))):
        acc[act_on_word(w, word)][matsumoto_exponent(w, word, br.E)] += 1
    return acc


# -- symmetrizer and shuffle product -----------------------------------------------------------


class Symmetrizer:
    """Memoized total symmetrization of words, with exponents kept as integer counters.

    Uses Sigma(u a) = Sigma(u) * (a): the last letter is inserted at every position j and
    picks up the braiding exponents of the letters it passes.
    """

    def __init__(self, br: Braiding):
        self.br = br
        self._memo: dict[tuple, dict] = {(): {(): {0: 1}}}

    def exponents(self, word) -> dict:
        """word' -> {exponent: count} for Sigma(word)."""
        word = tuple(word)
        hit = self._memo.get(word)
        if hit is not None:
            return hit
        prev = self.exponents(word[:-1])
        a = word[-1]
        E = self.br.E
        out: dict = {}
        for u, exps in prev.items():
            m = len(u)
            shift = 0
            for j in range(m, -1, -1):
                if j < m:
                    shift += E[u[j]][a]
                nw = u[:j] + (a,) + u[j:]
                tgt = out.get(nw)
                if tgt is None:
                    tgt = out[nw] = {}
                for e, cnt in exps.items():
                    ee = e + shift
                    tgt[ee] = tgt.get(ee, 0) + cnt
        self._memo[word] = out
        return out

    def image(self, word) -> dict:
        """Sigma(word) as word -> FieldElem (zero coefficients dropped)."""
        to_field = self.br.field.from_laurent
        out = {}
        for w, exps in self.exponents(word).items():
            v = to_field(exps)
            if not v.is_zero():
                out[w] = v
        return out

    def lincomb(self, word) -> LinComb:
        return LinComb(self.br.field, self.image(word))


def total_symmetrizer(content: Content, br: Braiding, sym: Symmetrizer | None = None) -> SparseMatrix:
    """Matrix of Sigma_n on a content block; column j is Sigma(words[j])."""
    sym = sym or Symmetrizer(br)
    words = block_words(content)
    index = {w: i for i, w in enumerate(words)}
    M = SparseMatrix(len(words), len(words), br.field)
    for j, w in enumerate(words):
        for u, v in sym.image(w).items():
            M.rows.setdefault(index[u], {})[j] = v
    return M


def shuffle_words(u, v, E) -> dict:
    """Interleavings of u and v: word -> {exponent: count}.

    Each letter of v that ends up before a letter of u contributes E[that u letter][v letter].
    """
    return _shuffle_words(tuple(u), tuple(v), E)


@lru_cache(maxsize=200000)
def _shuffle_words(u, v, E):
    if not u:
        return {v: {0: 1}}
    if not v:
        return {u: {0: 1}}
    out: dict = {}
    for w, exps in _shuffle_words(u[1:], v, E).items():
        out[(u[0],) + w] = dict(exps)
    cross = sum(E[a][v[0]] for a in u)
    for w, exps in _shuffle_words(u, v[1:], E).items():
        nw = (v[0],) + w
        tgt = out.setdefault(nw, {})
        for e, c in exps.items():
            tgt[e + cross] = tgt.get(e + cross, 0) + c
    return out


def shuffle_product(x: LinComb, y: LinComb, br: Braiding) -> LinComb:
    """Bilinear quantum shuffle product: sum over interleavings T_{w^{-1}}, w a shuffle."""
    acc: dict = {}
    field = br.field
    for u, a in x.terms.items():
        for v, b in y.terms.items():
            ab = a * b
            for w, exps in shuffle_words(u, v, br.E).items():
                t = ab * field.from_laurent(exps)
                old = acc.get(w)
                acc[w] = t if old is None else old + t
    return LinComb(field, {w: c for w, c in acc.items() if not c.is_zero()})


def shuffle_product_by_permutations(x: LinComb, y: LinComb, br: Braiding) -> LinComb:
    """Same product computed literally from ``enumerate_shuffles`` and ``matsumoto_action``."""
    out = LinComb(br.field)
    for u, a in x.terms.items():
        for v, b in y.terms.items():
            base = LinComb.word(br.field, u + v, a * b)
            for w in enumerate_shuffles(len(u), len(v)):
                out = out + matsumoto_action(inverse_perm(w), base, br)
    return out


def deconcat_split(x: LinComb, p: int) -> list[tuple]:
    """(left, right, coeff) for every term split after its first p letters."""
    out = []
    for w, v in x:
        if not 0 <= p <= len(w):
            raise IndexError(f"cannot split a word of length {len(w)} at {p}")
        out.append((w[:p], w[p:], v))
    return out
