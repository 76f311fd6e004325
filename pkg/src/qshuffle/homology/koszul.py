"""Koszul complex of the associated graded q-polynomial algebra and its contracting homotopy.

Once a convex order beta_1 < ... < beta_N on the positive roots is fixed, the associated
graded algebra of S is q-commutative:
    F_j F_i = q^{(beta_i, beta_j)} F_i F_j  (i < j).
The graded module is free of rank r = dim L(lambda) on generators v_1..v_r, with
    F_t . (F^alpha (x) v) = prod_{s<t} q^{-alpha_s (beta_s, beta_t)} F^{alpha + [t]} (x) v.

The Koszul complex has terms grM (x) Lambda_q^k, with basis monomials (alpha, beta, v) where
beta in {0,1}^N is a wedge indicator and k = |beta|:
    d(F^alpha (x) F^beta) = sum_i Omega(alpha, beta, i) F^{alpha+[i]} (x) F^{beta-[i]},
    Omega = eps(beta, i) prod_{s>i} Q_is^{beta_s} prod_{p<i} Q_pi^{-alpha_p}  (beta_i = 1),
with eps(beta, i) = (-1)^{beta_1 + .. + beta_{i-1}}.  At a root of unity exponents live in
{0..l-1} and Omega also vanishes when alpha_i = l - 1.

d preserves gamma = alpha + beta and v, so blocks are keyed by (gamma, v).  The homotopy
    h(F^alpha (x) F^beta) = 1/||gamma|| sum_i omega(alpha, beta, i) F^{alpha-[i]} (x) F^{beta+[i]},
    omega(alpha, beta, i) = Omega(alpha - [i], beta + [i], i)^{-1}  (0 if beta_i = 1 or alpha_i = 0),
uses ||gamma|| = number of root coordinates with gamma_i != 0 (mod l at a root of unity).
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from math import comb

from ..cartan import RootSystem, WeightSpec, convex_order, pairing, positive_roots, weyl_dim
from ..exact.field import Field
from ..exact.linalg import SparseMatrix
from .complex import ComplexBlock, GradedComplex


class HomotopyDomainError(ValueError):
    """h was applied to a monomial with ||alpha + beta|| = 0."""


@dataclass(frozen=True)
class GrAlgebraSpec:
    rs: RootSystem
    field: Field
    P: tuple  # P[i][j] = (beta_i, beta_j)
    r: int
    l: int | None = None

    @property
    def N(self) -> int:
        return self.rs.N

    def Q(self, i: int, j: int):
        """Relation coefficient q^{(beta_i, beta_j)}, stored for i < j only."""
        if not i < j:
            raise ValueError("Q_ij is defined for i < j")
        return self.field.qpow(self.P[i][j])

    def act(self, t: int, alpha: tuple):
        """F_t . (F^alpha (x) v) = coeff * F^{alpha'} (x) v; coeff 0 past the nilpotency bound."""
        a = list(alpha)
        a[t] += 1
        if self.l is not None and a[t] >= self.l:
            return self.field.zero, tuple(a)
        e = -sum(alpha[s] * self.P[s][t] for s in range(t))
        return self.field.qpow(e), tuple(a)

    def norm(self, gamma) -> int:
        if self.l is None:
            return sum(1 for g in gamma if g)
        return sum(1 for g in gamma if g % self.l)


def gr_algebra(rs: RootSystem, lam: WeightSpec, field: Field, word=None) -> GrAlgebraSpec:
    """Graded algebra and module data from a root system (ordered by ``word`` if needed)."""
    if rs.order is None or word is not None:
        rs = convex_order(rs, word)
    order = rs.order
    P = tuple(tuple(pairing(rs.datum, a, b) for b in order) for a in order)
    l = getattr(field, "l", None)
    return GrAlgebraSpec(rs, field, P, weyl_dim(rs.datum, lam), l)


def gr_algebra_for(datum, lam: WeightSpec, field: Field, word=None) -> GrAlgebraSpec:
    return gr_algebra(positive_roots(datum), lam, field, word)


def omega_coeffs(spec: GrAlgebraSpec, alpha, beta, i: int):
    """(Omega(alpha, beta, i), omega(alpha, beta, i)); i is 0-based."""
    F = spec.field
    l = spec.l
    eps = -1 if sum(beta[:i]) % 2 else 1

    def exponent():
        return (sum(beta[s] * spec.P[i][s] for s in range(i + 1, len(beta)))
                - sum(alpha[p] * spec.P[p][i] for p in range(i)))

    if beta[i] == 0 or (l is not None and alpha[i] == l - 1):
        Om = F.zero
    else:
        Om = F.qpow(exponent()) * eps
    if beta[i] == 1 or alpha[i] == 0:
        om = F.zero
    else:
        # exponent() does not involve alpha_i or beta_i, so Omega(alpha-[i], beta+[i], i) = eps q^e
        om = F.qpow(-exponent()) * eps
    return Om, om


def _basis(spec: GrAlgebraSpec, gamma: tuple) -> dict:
    """Degree k -> list of (alpha, beta) with alpha + beta = gamma."""
    out: dict = {}
    l = spec.l
    choices = []
    for g in gamma:
        opts = []
        for b in (0, 1):
            a = g - b
            if a < 0 or (l is not None and a > l - 1):
                continue
            opts.append((a, b))
        choices.append(opts)
    for pick in product(*choices):
        alpha = tuple(p[0] for p in pick)
        beta = tuple(p[1] for p in pick)
        out.setdefault(sum(beta), []).append((alpha, beta))
    for k in out:
        out[k].sort(key=lambda ab: ab[1], reverse=True)
    return out


def apply_d(spec: GrAlgebraSpec, x: dict) -> dict:
    """d on an element {(alpha, beta, v): coeff}."""
    out: dict = {}
    for (alpha, beta, v), c in x.items():
        for i in range(spec.N):
            Om, _ = omega_coeffs(spec, alpha, beta, i)
            if Om.is_zero():
                continue
            a = list(alpha)
            b = list(beta)
            a[i] += 1
            b[i] -= 1
            key = (tuple(a), tuple(b), v)
            t = c * Om
            out[key] = t if key not in out else out[key] + t
    return {k: v for k, v in out.items() if not v.is_zero()}


def wambst_homotopy(spec: GrAlgebraSpec, x: dict) -> dict:
    """h on an element {(alpha, beta, v): coeff}; every monomial needs ||alpha + beta|| > 0."""
    out: dict = {}
    for (alpha, beta, v), c in x.items():
        gamma = tuple(a + b for a, b in zip(alpha, beta))
        nrm = spec.norm(gamma)
        if nrm == 0:
            raise HomotopyDomainError(f"||alpha+beta|| = 0 on monomial alpha={list(alpha)} beta={list(beta)} v={v}")
        scale = spec.field.one / nrm
        for i in range(spec.N):
            _, om = omega_coeffs(spec, alpha, beta, i)
            if om.is_zero():
                continue
            a = list(alpha)
            b = list(beta)
            a[i] -= 1
            b[i] += 1
            key = (tuple(a), tuple(b), v)
            t = c * om * scale
            out[key] = t if key not in out else out[key] + t
    return {k: v for k, v in out.items() if not v.is_zero()}


def homotopy_defect(spec: GrAlgebraSpec, x: dict) -> dict:
    """(hd + dh)(x) - x; empty when the contraction identity holds on x."""
    y = wambst_homotopy(spec, apply_d(spec, x)) if apply_d(spec, x) else {}
    z = apply_d(spec, wambst_homotopy(spec, x))
    out: dict = {}
    for part, sign in ((y, 1), (z, 1), (x, -1)):
        for k, c in part.items():
            t = c if sign == 1 else -c
            out[k] = t if k not in out else out[k] + t
    return {k: v for k, v in out.items() if not v.is_zero()}


def koszul_block(spec: GrAlgebraSpec, gamma: tuple, v: int = 0) -> ComplexBlock:
    basis = _basis(spec, gamma)
    dims = {k: len(basis.get(k, [])) for k in range(spec.N + 1)}
    index = {k: {ab: j for j, ab in enumerate(basis.get(k, []))} for k in range(spec.N + 1)}
    diffs = {}
    for k in range(1, spec.N + 1):
        M = SparseMatrix(dims[k - 1], dims[k], spec.field)
        for j, (alpha, beta) in enumerate(basis.get(k, [])):
            for (a2, b2, _), c in apply_d(spec, {(alpha, beta, v): spec.field.one}).items():
                M.rows.setdefault(index[k - 1][(a2, b2)], {})[j] = c
        diffs[k] = M
    return ComplexBlock((gamma, v), dims, diffs, True, {k: basis.get(k, []) for k in range(spec.N + 1)})


def koszul_gammas(spec: GrAlgebraSpec, pbw_degree_max: int | None = None) -> list:
    """All gamma with |gamma| <= pbw_degree_max (generic) or every gamma in {0..l}^N (root of unity)."""
    N = spec.N
    if spec.l is not None and pbw_degree_max is None:
        rng = [range(spec.l + 1)] * N
        gammas = list(product(*rng))
    else:
        if pbw_degree_max is None:
            raise ValueError("the generic Koszul complex needs a PBW degree bound")
        top = pbw_degree_max if spec.l is None else min(pbw_degree_max, spec.l)
        gammas = [g for g in product(range(top + 1), repeat=N) if sum(g) <= pbw_degree_max]
    return sorted(gammas, key=lambda g: (sum(g), g))


def koszul_complex(spec: GrAlgebraSpec, pbw_degree_max: int | None = None) -> GradedComplex:
    cx = GradedComplex("koszul", -1, spec.field, tuple(range(spec.N + 1)),
                       metadata={"kind": "koszul", "regime": spec.field.regime, "l": spec.l, "r": spec.r,
                                 "order": [list(b) for b in spec.rs.order], "pbw_degree_max": pbw_degree_max})
    for gamma in koszul_gammas(spec, pbw_degree_max):
        for v in range(spec.r):
            cx.blocks[(gamma, v)] = koszul_block(spec, gamma, v)
    return cx


def is_special_block(spec: GrAlgebraSpec, gamma) -> bool:
    return all(g in (0, spec.l) for g in gamma)


def koszul_split_root_of_unity(spec: GrAlgebraSpec):
    """(S_part, R_part): blocks with gamma in {0, l}^N, and the rest."""
    if spec.l is None:
        raise ValueError("the S/R splitting needs the root-of-unity regime")
    full = koszul_complex(spec)
    S = GradedComplex("koszul-S", -1, spec.field, full.degrees, metadata=dict(full.metadata, part="S"))
    R = GradedComplex("koszul-R", -1, spec.field, full.degrees, metadata=dict(full.metadata, part="R"))
    for key, blk in full.blocks.items():
        (S if is_special_block(spec, key[0]) else R).blocks[key] = blk
    return S, R


def expected_special_dims(spec: GrAlgebraSpec) -> dict:
    return {k: spec.r * comb(spec.N, k) for k in range(spec.N + 1)}


def block_elements(spec: GrAlgebraSpec, blk: ComplexBlock) -> list:
    """Unit vectors of a block, as elements."""
    gamma, v = blk.key
    out = []
    for k, basis in blk.spaces.items():
        for alpha, beta in basis:
            out.append({(alpha, beta, v): spec.field.one})
    return out


def random_element(spec: GrAlgebraSpec, rng, pbw_degree_max: int, height: int = 3) -> dict:
    """Random element of a random nonzero block (gamma != 0) with |gamma| <= pbw_degree_max."""
    gammas = [g for g in koszul_gammas(spec, pbw_degree_max) if spec.norm(g)]
    gamma = gammas[rng.randrange(len(gammas))]
    v = rng.randrange(spec.r)
    basis = [ab for kk, lst in _basis(spec, gamma).items() for ab in lst]
    x = {}
    for alpha, beta in basis:
        if rng.random() < 0.7:
            c = spec.field.random_element(rng, degree=2, height=height)
            if not c.is_zero():
                x[(alpha, beta, v)] = c
    return x
