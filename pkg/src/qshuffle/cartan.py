"""Cartan data, positive roots, convex orders and the representation-theory oracles.

Roots are integer vectors of simple-root coordinates.  Weights are given by their coweight
coordinates ``c_i = (lambda, alpha_i^vee)``; the symmetric form is ``(alpha_i, alpha_j) =
d_i c_ij`` and ``(lambda, alpha_i) = d_i c_i``.

The oracles here (Weyl dimension formula, Freudenthal multiplicities, Kostant partition
counts) never touch the shuffle algebra code, so they can serve as ground truth for it.

>>> sl3 = CartanDatum.of_type("A", 2)
>>> positive_roots(sl3).roots
((0, 1), (1, 0), (1, 1))
>>> weyl_dim(sl3, WeightSpec((1, 1)))
8
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product


class CartanError(ValueError):
    pass


@dataclass(frozen=True)
class CartanDatum:
    C: tuple  # tuple of row tuples, C[i][j] = <alpha_i^vee, alpha_j>
    d: tuple

    def __post_init__(self):
        C = tuple(tuple(int(x) for x in row) for row in self.C)
        d = tuple(int(x) for x in self.d)
        object.__setattr__(self, "C", C)
        object.__setattr__(self, "d", d)
        errors = validate_cartan(C, d)
        if errors:
            raise CartanError("; ".join(errors))

    @property
    def n(self) -> int:
        return len(self.C)

    @property
    def A(self) -> tuple:
        """Symmetrized matrix a_ij = d_i c_ij = (alpha_i, alpha_j)."""
        return tuple(tuple(self.d[i] * self.C[i][j] for j in range(self.n)) for i in range(self.n))

    @classmethod
    def of_type(cls, kind: str, rank: int) -> "CartanDatum":
        kind = kind.upper()
        if kind == "A":
            C = [[2 if i == j else (-1 if abs(i - j) == 1 else 0) for j in range(rank)] for i in range(rank)]
            return cls(C, [1] * rank)
        if kind == "B" and rank == 2:
            return cls([[2, -2], [-1, 2]], [1, 2])
        if kind == "G" and rank == 2:
            return cls([[2, -3], [-1, 2]], [1, 3])
        raise CartanError(f"no built-in Cartan datum for type {kind}{rank}")

    def is_type_A(self) -> bool:
        return self == CartanDatum.of_type("A", self.n)


def validate_cartan(C, d) -> list[str]:
    """All violations of the generalized-Cartan-matrix and symmetrizability conditions."""
    errors = []
    n = len(C)
    if n == 0:
        return ["Cartan matrix is empty"]
    if any(len(row) != n for row in C):
        return [f"Cartan matrix must be square, got rows of lengths {[len(r) for r in C]}"]
    if len(d) != n:
        errors.append(f"symmetrizer d has length {len(d)}, expected {n}")
    elif any(x <= 0 for x in d):
        errors.append(f"symmetrizer entries must be positive, got {list(d)}")
    for i in range(n):
        if C[i][i] != 2:
            errors.append(f"diagonal entry C[{i}][{i}] = {C[i][i]} (must be 2)")
        for j in range(n):
            if i != j and C[i][j] > 0:
                errors.append(f"off-diagonal entry C[{i}][{j}] = {C[i][j]} is positive")
            if i != j and (C[i][j] == 0) != (C[j][i] == 0):
                errors.append(f"C[{i}][{j}] and C[{j}][{i}] must vanish together")
    if len(d) == n and all(x > 0 for x in d):
        for i in range(n):
            for j in range(i + 1, n):
                if d[i] * C[i][j] != d[j] * C[j][i]:
                    errors.append(f"d_i c_ij not symmetric at ({i},{j}): {d[i] * C[i][j]} != {d[j] * C[j][i]}")
    return errors


@dataclass(frozen=True)
class WeightSpec:
    """Dominant weight by coweight coordinates c_i = (lambda, alpha_i^vee)."""

    c: tuple

    def __post_init__(self):
        object.__setattr__(self, "c", tuple(int(x) for x in self.c))
        if any(x < 0 for x in self.c):
            raise CartanError(f"weight {list(self.c)} is not dominant (negative coordinate)")

    def m(self, datum: CartanDatum) -> tuple:
        """m_i = (lambda, alpha_i) = d_i c_i."""
        return tuple(di * ci for di, ci in zip(datum.d, self.c))

    def scaled(self, k: int) -> "WeightSpec":
        return WeightSpec(tuple(k * x for x in self.c))


def check_weight(datum: CartanDatum, lam: WeightSpec, l: int | None = None) -> list[str]:
    errors = []
    if len(lam.c) != datum.n:
        errors.append(f"weight has {len(lam.c)} coordinates, rank is {datum.n}")
        return errors
    if l is not None:
        for i, m in enumerate(lam.m(datum)):
            if abs(m) >= l:
                errors.append(f"(lambda, alpha_{i + 1}) = {m} violates |(lambda, alpha_i)| < l = {l}")
    return errors


def pairing(datum: CartanDatum, x, y) -> int:
    """(x, y) for x, y in simple-root coordinates."""
    A = datum.A
    return sum(x[i] * A[i][j] * y[j] for i in range(datum.n) for j in range(datum.n) if x[i] and y[j])


def pair_weight(datum: CartanDatum, lam: WeightSpec, beta) -> int:
    """(lambda, beta) for beta in simple-root coordinates."""
    return sum(b * m for b, m in zip(beta, lam.m(datum)))


def reflect(datum: CartanDatum, i: int, beta) -> tuple:
    """s_i(beta) = beta - <alpha_i^vee, beta> alpha_i."""
    coef = sum(datum.C[i][j] * beta[j] for j in range(datum.n))
    out = list(beta)
    out[i] -= coef
    return tuple(out)


@dataclass(frozen=True)
class RootSystem:
    datum: CartanDatum
    roots: tuple  # positive roots, sorted
    order: tuple | None = None  # convex order beta_1, ..., beta_N
    word: tuple | None = None  # reduced word of w0 producing the order (0-based letters)

    @property
    def N(self) -> int:
        return len(self.roots)

    def index(self, beta) -> int:
        return self.order.index(tuple(beta))


def positive_roots(datum: CartanDatum) -> RootSystem:
    """Close the simple roots under simple reflections, keeping positive results."""
    n = datum.n
    cap = 6 * n
    simple = [tuple(1 if j == i else 0 for j in range(n)) for i in range(n)]
    found = set(simple)
    frontier = list(simple)
    while frontier:
        new = []
        for beta in frontier:
            for i in range(n):
                if beta == simple[i]:
                    continue
                b = reflect(datum, i, beta)
                if all(x >= 0 for x in b) and b not in found:
                    if sum(b) > cap:
                        raise CartanError(
                            f"root {list(b)} exceeds height bound {cap}; Cartan matrix is not of finite type"
                        )
                    found.add(b)
                    new.append(b)
        frontier = new
    return RootSystem(datum, tuple(sorted(found)))


def default_w0_word(datum: CartanDatum) -> tuple:
    """Lexicographically least reduced word of the longest element (0-based letters)."""
    N = positive_roots(datum).N
    word: list[int] = []
    while True:
        for i in range(datum.n):
            beta = tuple(1 if j == i else 0 for j in range(datum.n))
            for s in reversed(word):
                beta = reflect(datum, s, beta)
            if all(x >= 0 for x in beta):
                word.append(i)
                break
        else:
            break
    if len(word) != N:  # pragma: no cover - guaranteed by Coxeter theory
        raise CartanError("greedy reduced word has wrong length")
    return tuple(word)


def convex_order(rs: RootSystem, word=None) -> RootSystem:
    """Order beta_k = s_{i_1} ... s_{i_{k-1}}(alpha_{i_k}) from a reduced word of w0 (0-based)."""
    datum = rs.datum
    word = default_w0_word(datum) if word is None else tuple(int(i) for i in word)
    if any(not 0 <= i < datum.n for i in word):
        raise CartanError(f"reduced word {list(word)} has letters outside 0..{datum.n - 1}")
    order = []
    for k, i in enumerate(word):
        beta = tuple(1 if j == i else 0 for j in range(datum.n))
        for s in reversed(word[:k]):
            beta = reflect(datum, s, beta)
        if any(x < 0 for x in beta):
            raise CartanError(f"word {list(word)} is not reduced: produces negative root {list(beta)} at step {k + 1}")
        if beta in order:
            raise CartanError(f"word {list(word)} is not reduced: root {list(beta)} repeats at step {k + 1}")
        order.append(beta)
    if len(order) != rs.N:
        raise CartanError(f"word {list(word)} has length {len(order)}, longest element has length {rs.N}")
    return RootSystem(datum, rs.roots, tuple(order), word)


def is_convex(order, roots) -> bool:
    """beta_i + beta_j a root (i < j) must sit strictly between them."""
    pos = {b: k for k, b in enumerate(order)}
    rootset = set(roots)
    for i, a in enumerate(order):
        for j in range(i + 1, len(order)):
            s = tuple(x + y for x, y in zip(a, order[j]))
            if s in rootset and not i < pos[s] < j:
                return False
    return True


def critical_set(lam: WeightSpec) -> tuple:
    """J = {j : (lambda, alpha_j^vee) = 1} (0-based)."""
    return tuple(j for j, c in enumerate(lam.c) if c == 1)


# -- oracles ---------------------------------------------------------------------------------


def weyl_dim(datum: CartanDatum, lam: WeightSpec) -> int:
    """Weyl dimension formula prod_{beta > 0} (lambda + rho, beta) / (rho, beta)."""
    num = Fraction(1)
    m = lam.m(datum)
    for beta in positive_roots(datum).roots:
        rho_b = sum(b * di for b, di in zip(beta, datum.d))
        lam_b = sum(b * mi for b, mi in zip(beta, m))
        num *= Fraction(lam_b + rho_b, rho_b)
    assert num.denominator == 1
    return int(num)


def dominant_shift(datum: CartanDatum, lam: WeightSpec, nu) -> tuple:
    """nu' with lambda - nu' the dominant W-conjugate of lambda - nu."""
    nu = list(nu)
    n = datum.n
    while True:
        mu = [lam.c[i] - sum(datum.C[i][j] * nu[j] for j in range(n)) for i in range(n)]
        neg = next((i for i in range(n) if mu[i] < 0), None)
        if neg is None:
            return tuple(nu)
        nu[neg] += mu[neg]


def is_weight_of(datum: CartanDatum, lam: WeightSpec, nu) -> bool:
    """Is lambda - nu (nu in simple-root coordinates) a weight of L(lambda)?"""
    return all(x >= 0 for x in dominant_shift(datum, lam, nu))


@lru_cache(maxsize=None)
def weyl_character(datum: CartanDatum, lam: WeightSpec) -> dict:
    """Freudenthal multiplicities, keyed by nu with weight lambda - sum nu_i alpha_i."""
    n = datum.n
    A = datum.A
    roots = positive_roots(datum).roots
    lam_pair = {b: pair_weight(datum, lam, b) for b in roots}
    zero = tuple([0] * n)
    # collect the weight set by simple-root steps from the top
    weights = {zero}
    frontier = [zero]
    while frontier:
        new = []
        for nu in frontier:
            for i in range(n):
                nxt = tuple(x + (1 if j == i else 0) for j, x in enumerate(nu))
                if nxt not in weights and is_weight_of(datum, lam, nxt):
                    weights.add(nxt)
                    new.append(nxt)
        frontier = new
    mult = {zero: 1}
    for nu in sorted(weights, key=lambda v: (sum(v), v)):
        if nu == zero:
            continue
        denom = 2 * sum(nu[i] * datum.d[i] * (lam.c[i] + 1) for i in range(n)) - pairing(datum, nu, nu)
        total = 0
        for b in roots:
            j = 1
            while True:
                nb = tuple(x - j * y for x, y in zip(nu, b))
                if any(x < 0 for x in nb) or nb not in weights:
                    break
                # (mu + j beta, beta) with mu + j beta = lambda - nb
                val = lam_pair[b] - sum(nb[s] * A[s][t] * b[t] for s in range(n) for t in range(n))
                total += val * mult[nb]
                j += 1
        assert (2 * total) % denom == 0, "Freudenthal recursion produced a non-integer"
        mult[nu] = 2 * total // denom
    return {k: v for k, v in mult.items() if v}


def kostant_count(roots, c, caps=None) -> int:
    """Number of ways to write c as a sum of positive roots (each root used < caps[root] times)."""
    roots = tuple(roots)
    caps = tuple(caps) if caps is not None else None
    return _kostant(roots, tuple(c), caps, 0)


@lru_cache(maxsize=None)
def _kostant(roots, c, caps, k) -> int:
    if all(x == 0 for x in c):
        return 1
    if k == len(roots):
        return 0
    b = roots[k]
    total = 0
    m = 0
    rest = c
    while all(x >= 0 for x in rest):
        if caps is not None and m >= caps[k]:
            break
        total += _kostant(roots, rest, caps, k + 1)
        rest = tuple(x - y for x, y in zip(rest, b))
        m += 1
    return total


def restricted_caps(datum: CartanDatum, roots, l: int) -> tuple:
    """Nilpotency orders ord(q^{(beta, beta)}) of root vectors at a primitive l-th root of unity."""
    from math import gcd

    return tuple(l // gcd(l, pairing(datum, b, b)) for b in roots)


def contents_up_to(n: int, t_max: int):
    """All c in N^n with |c| <= t_max, ordered by length then lexicographically."""
    out = [c for c in product(range(t_max + 1), repeat=n) if sum(c) <= t_max]
    return sorted(out, key=lambda c: (sum(c), c))
