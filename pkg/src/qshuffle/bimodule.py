"""Graded pieces of the quantum shuffle algebra S and of the layers M_k, with their coactions.

Every computation happens on one content block.  ``ShuffleBimodule`` owns a braiding (on
F_1..F_n, plus v_lambda when a weight is given) and memoizes:

* ``component(X)``: basis of the image of the total symmetrizer on block X.  The basis
  vectors are the symmetrizations of the pivot words found by exact elimination on the full
  symmetrizer matrix (columns in lexicographic word order), i.e. the lexicographically
  greedy independent words.  ``row_words`` are pivot rows of that elimination, so the
  restriction of the basis to those rows is invertible and coordinates are a small solve.
* ``split_coords(X, X1)``: the deconcatenation X -> X1 (x) (X - X1) in coordinates.
* ``product_coords(X1, X2)``: shuffle products of basis vectors in coordinates.

Elements of the blocks are plain dicts word -> FieldElem (``LinComb`` at the API edges).
"""
from __future__ import annotations

import logging
import multiprocessing
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field
from functools import cached_property
from itertools import combinations

from .braidwords import (
    Braiding,
    Content,
    LinComb,
    Symmetrizer,
    block_words,
    total_symmetrizer,
    word_content,
)
from .cartan import (
    CartanDatum,
    WeightSpec,
    contents_up_to,
    critical_set,
    weyl_character,
    weyl_dim,
)
from .exact.field import Field, FieldElem
from .exact.linalg import SparseMatrix, rank_kernel_image, solve_left_inverse

log = logging.getLogger(__name__)


class ClosureError(RuntimeError):
    """A vector that must lie in a component does not; always an implementation bug."""


class TruncationWarning(UserWarning):
    pass


@dataclass
class ComponentBasis:
    content: Content
    pivot_words: tuple
    vectors: list  # dicts word -> FieldElem, the symmetrizations of pivot_words
    row_words: tuple
    inv: list  # inverse of [vectors[j][row_words[i]]]_{i,j}

    @property
    def dim(self) -> int:
        return len(self.pivot_words)

    def coords(self, x: dict) -> list:
        """Coordinates of x, assuming x lies in the span (see ``contains``)."""
        vals = [x.get(w) for w in self.row_words]
        out = []
        for row in self.inv:
            acc = None
            for a, v in zip(row, vals):
                if v is not None and not a.is_zero():
                    t = a * v
                    acc = t if acc is None else acc + t
            out.append(acc)
        return out

    def combine(self, coeffs) -> dict:
        acc: dict = {}
        for c, vec in zip(coeffs, self.vectors):
            if c is None or c.is_zero():
                continue
            for w, v in vec.items():
                t = c * v
                old = acc.get(w)
                acc[w] = t if old is None else old + t
        return {w: v for w, v in acc.items() if not v.is_zero()}

    def contains(self, x: dict) -> bool:
        x = {w: v for w, v in x.items() if not v.is_zero()}
        return self.combine(self.coords(x)) == x

    def lincombs(self, field: Field) -> list:
        return [LinComb(field, v) for v in self.vectors]


@dataclass
class CoinvariantBasis:
    k: int
    t_max: int
    blocks: dict = dc_field(default_factory=dict)  # Content -> list of dict vectors

    def dims(self) -> dict:
        return {c: len(v) for c, v in self.blocks.items()}

    @property
    def total(self) -> int:
        return sum(len(v) for v in self.blocks.values())


def _zero_content(n: int, k: int = 0) -> Content:
    return Content((0,) * n, k)


def _sub_contents(X: Content, k_left: int):
    """All X1 <= X with X1.k == k_left (componentwise), ordered."""
    n = len(X.c)
    out = [()]
    for ci in X.c:
        out = [t + (j,) for t in out for j in range(ci + 1)]
    return [Content(t, k_left) for t in sorted(out)]


class ShuffleBimodule:
    """Bases and structure maps of S (k = 0) and M_k (k >= 1) for one braiding."""

    def __init__(self, datum: CartanDatum, field: Field, lam: WeightSpec | None = None, store=None, verify=False):
        self.datum = datum
        self.field = field
        self.lam = lam
        self.n = datum.n
        self.br = Braiding(datum, field, lam)
        self.sym = Symmetrizer(self.br)
        self.store = store  # optional persistent cache with load(key)/save(key, basis)
        self.verify = verify
        self._components: dict = {}
        self._splits: dict = {}
        self._products: dict = {}
        self._deshuffles: dict = {}
        self._coaction: dict = {}
        self._coinv: dict = {}

    # -- bases --------------------------------------------------------------------------------

    def component(self, X: Content) -> ComponentBasis:
        hit = self._components.get(X)
        if hit is not None:
            return hit
        if X.k and self.lam is None:
            raise ValueError("lambda letters need a weight")
        basis = None
        if self.store is not None:
            basis = self.store.load(self, X)
        if basis is None:
            basis = self._compute_component(X)
            if self.store is not None:
                self.store.save(self, X, basis)
        self._components[X] = basis
        return basis

    def _compute_component(self, X: Content) -> ComponentBasis:
        if X.length == 0:
            return ComponentBasis(X, ((),), [{(): self.field.one}], ((),), [[self.field.one]])
        words = block_words(X)
        M = total_symmetrizer(X, self.br, self.sym)
        res = rank_kernel_image(M, want_kernel=False)
        pivot_words = tuple(words[j] for j in res.pivots)
        vectors = [{w: v for w, v in self.sym.image(pw).items()} for pw in pivot_words]
        row_words = tuple(words[i] for i in res.pivot_rows)
        if not pivot_words:
            return ComponentBasis(X, (), [], (), [])
        B = [[vec.get(w, self.field.zero) for vec in vectors] for w in row_words]
        inv = solve_left_inverse(self.field, B)
        return ComponentBasis(X, pivot_words, vectors, row_words, inv)

    def prefetch(self, contents, jobs: int = 1):
        """Compute missing components, in forked workers when jobs > 1 (largest blocks first)."""
        global _PREFETCH_MODEL
        todo = sorted({X for X in contents if X not in self._components}, key=lambda X: (-X.length, X.c, X.k))
        if jobs <= 1 or len(todo) < 2 or "fork" not in multiprocessing.get_all_start_methods():
            for X in todo:
                self.component(X)
            return
        _PREFETCH_MODEL = self
        try:
            ctx = multiprocessing.get_context("fork")
            with ProcessPoolExecutor(max_workers=jobs, mp_context=ctx) as pool:
                for X, basis in zip(todo, pool.map(_prefetch_job, todo)):
                    self._components[X] = basis
        finally:
            _PREFETCH_MODEL = None

    def validate_basis(self, X: Content, basis: ComponentBasis) -> bool:
        """Re-derive a (cached) basis: vectors are symmetrizations, inv really inverts."""
        if basis.content != X or len(basis.vectors) != len(basis.pivot_words):
            return False
        if X.length == 0:
            return basis.dim == 1 and basis.vectors == [{(): self.field.one}]
        for pw, vec in zip(basis.pivot_words, basis.vectors):
            if word_content(pw, self.n) != X or self.sym.image(pw) != vec:
                return False
        r = basis.dim
        if len(basis.row_words) != r or len(basis.inv) != r:
            return False
        B = [[vec.get(w, self.field.zero) for vec in basis.vectors] for w in basis.row_words]
        for i in range(r):
            for j in range(r):
                acc = self.field.zero
                for t in range(r):
                    acc = acc + basis.inv[i][t] * B[t][j]
                if acc != (self.field.one if i == j else self.field.zero):
                    return False
        # the dimension must match the symmetrizer rank, which the pivots certify from below
        return rank_kernel_image(total_symmetrizer(X, self.br, self.sym), want_kernel=False).rank == r

    def dim(self, X: Content) -> int:
        return self.component(X).dim

    def graded_dimension_table(self, t_max: int, k: int = 0) -> dict:
        """Content -> dim for all blocks with F-length <= t_max and the given lambda-degree."""
        return {Content(c, k): self.dim(Content(c, k)) for c in contents_up_to(self.n, t_max)}

    def serre_kernel(self, X: Content) -> list:
        """Basis of ker Sigma on a block (X.k = 0)."""
        if X.k:
            raise ValueError("Serre kernels are defined on lambda-free blocks")
        words = block_words(X)
        res = rank_kernel_image(total_symmetrizer(X, self.br, self.sym))
        return [LinComb(self.field, {words[j]: v for j, v in vec.items()}) for vec in res.kernel]

    # -- coproduct ------------------------------------------------------------------------------

    def split_coords(self, X: Content, X1: Content) -> list:
        """For each basis vector of X: {(a, b): coeff} with Delta_{X1, X-X1} = sum coeff e_a (x) f_b."""
        key = (X, X1)
        hit = self._splits.get(key)
        if hit is not None:
            return hit
        X2 = X - X1
        B = self.component(X)
        B1 = self.component(X1)
        B2 = self.component(X2)
        out = []
        if B1.dim and B2.dim:
            for vec in B.vectors:
                # restrict the tensor to the pivot rows of both factors, then undo the bases
                T = [[vec.get(u + v) for v in B2.row_words] for u in B1.row_words]
                Y = _mat_mul(B1.inv, T, self.field)
                Y = _mat_mul_transpose(Y, B2.inv, self.field)
                coeffs = {}
                for a, row in enumerate(Y):
                    for b, y in enumerate(row):
                        if y is not None and not y.is_zero():
                            coeffs[(a, b)] = y
                if self.verify:
                    self._check_split(vec, X1, B1, B2, coeffs)
                out.append(coeffs)
        else:
            for vec in B.vectors:
                if self.verify:
                    self._check_split(vec, X1, B1, B2, {})
                out.append({})
        self._splits[key] = out
        return out

    def _check_split(self, vec, X1, B1, B2, coeffs):
        p = X1.length
        expect: dict = {}
        for w, v in vec.items():
            if word_content(w[:p], self.n) == X1:
                expect[w] = v
        got: dict = {}
        for (a, b), y in coeffs.items():
            for u, x1 in B1.vectors[a].items():
                for v, x2 in B2.vectors[b].items():
                    t = y * x1 * x2
                    old = got.get(u + v)
                    got[u + v] = t if old is None else old + t
        got = {w: v for w, v in got.items() if not v.is_zero()}
        if got != expect:
            raise ClosureError(f"deconcatenation component {X1.key} of a basis vector is not in the tensor of bases")

    # -- shuffle product --------------------------------------------------------------------------

    def deshuffles(self, w: tuple, X1: Content) -> list:
        """(u, v, e): w is an interleaving of u (content X1) and v with weight q^e."""
        key = (w, X1)
        hit = self._deshuffles.get(key)
        if hit is not None:
            return hit
        E = self.br.E
        n = len(w)
        p = X1.length
        target = X1.letters()
        out = []
        for S in combinations(range(n), p):
            u = tuple(w[i] for i in S)
            if tuple(sorted(u)) != target:
                continue
            Sset = set(S)
            rest = [j for j in range(n) if j not in Sset]
            v = tuple(w[j] for j in rest)
            e = 0
            for i in S:
                for j in rest:
                    if j < i:
                        e += E[w[i]][w[j]]
            out.append((u, v, e))
        self._deshuffles[key] = out
        return out

    def product_values(self, x: dict, X1: Content, y: dict, X2: Content, words) -> dict:
        """Coefficients of x * y at the given words (x in block X1, y in block X2)."""
        qpow = self.field.qpow
        out = {}
        for w in words:
            acc = None
            for u, v, e in self.deshuffles(w, X1):
                a = x.get(u)
                if a is None:
                    continue
                b = y.get(v)
                if b is None:
                    continue
                t = a * b * qpow(e)
                acc = t if acc is None else acc + t
            if acc is not None and not acc.is_zero():
                out[w] = acc
        return out

    def multiply_coords(self, x: dict, X1: Content, y: dict, X2: Content) -> list:
        Z = X1 + X2
        BZ = self.component(Z)
        vals = self.product_values(x, X1, y, X2, BZ.row_words)
        coords = BZ.coords(vals)
        if self.verify:
            full = self.product_values(x, X1, y, X2, block_words(Z))
            if BZ.combine(coords) != full:
                raise ClosureError(f"product of blocks {X1.key} and {X2.key} left the component")
        return coords

    def product_coords(self, X1: Content, X2: Content) -> dict:
        """(a, b) -> coordinates of e_a * f_b in component(X1 + X2)."""
        key = (X1, X2)
        hit = self._products.get(key)
        if hit is not None:
            return hit
        B1, B2 = self.component(X1), self.component(X2)
        out = {}
        for a, x in enumerate(B1.vectors):
            for b, y in enumerate(B2.vectors):
                out[(a, b)] = self.multiply_coords(x, X1, y, X2)
        self._products[key] = out
        return out

    # -- right coaction and coinvariants ----------------------------------------------------------

    def coaction_splits(self, X: Content) -> list:
        """Left contents X1 of the reduced right coaction on block X (right factor lambda-free, nonempty)."""
        return [X1 for X1 in _sub_contents(X, X.k) if X1 != X]

    def reduced_right_coaction(self, x: LinComb) -> list:
        """Components (m, c) of (id (x) p) Delta(x) - x (x) 1, factors expressed in the bases."""
        contents = x.contents(self.n)
        if len(contents) > 1:
            raise ValueError("reduced_right_coaction needs a homogeneous element")
        if not contents:
            return []
        (X,) = contents
        out = []
        for X1 in self.coaction_splits(X):
            X2 = X - X1
            p = X1.length
            B1, B2 = self.component(X1), self.component(X2)
            comp = {}
            for w, v in x.terms.items():
                if word_content(w[:p], self.n) == X1:
                    comp[w] = v
            if not comp:
                continue
            T = [[comp.get(u + s) for s in B2.row_words] for u in B1.row_words]
            Y = _mat_mul_transpose(_mat_mul(B1.inv, T, self.field), B2.inv, self.field)
            rebuilt: dict = {}
            for a, row in enumerate(Y):
                right: dict = {}
                for b, y in enumerate(row):
                    if y is None or y.is_zero():
                        continue
                    for s, c in B2.vectors[b].items():
                        t = y * c
                        right[s] = t if s not in right else right[s] + t
                right = {s: c for s, c in right.items() if not c.is_zero()}
                if right:
                    out.append((LinComb(self.field, B1.vectors[a]), LinComb(self.field, right)))
                    for u, cu in B1.vectors[a].items():
                        for s, cs in right.items():
                            t = cu * cs
                            rebuilt[u + s] = t if u + s not in rebuilt else rebuilt[u + s] + t
            rebuilt = {w: v for w, v in rebuilt.items() if not v.is_zero()}
            if rebuilt != comp:
                raise ClosureError(f"coaction component {X1.key} (x) {X2.key} is not in the tensor of bases")
        return out

    def coaction_matrix(self, X: Content) -> tuple:
        """Matrix of the reduced right coaction on component(X) and its row labels (X1, a, b)."""
        hit = self._coaction.get(X)
        if hit is not None:
            return hit
        labels = []
        index = {}
        entries = []
        for X1 in self.coaction_splits(X):
            for j, coeffs in enumerate(self.split_coords(X, X1)):
                for (a, b), y in coeffs.items():
                    lab = (X1, a, b)
                    if lab not in index:
                        index[lab] = len(labels)
                        labels.append(lab)
                    entries.append((index[lab], j, y))
        M = SparseMatrix(len(labels), self.dim(X), self.field)
        for i, j, y in entries:
            M.rows.setdefault(i, {})[j] = y
        self._coaction[X] = (M, labels)
        return M, labels

    def coinvariant_coords(self, X: Content) -> list:
        """Kernel of the reduced coaction on block X, as coordinate vectors (dict index -> value)."""
        hit = self._coinv.get(X)
        if hit is not None:
            return hit
        M, _ = self.coaction_matrix(X)
        kernel = rank_kernel_image(M).kernel
        self._coinv[X] = kernel
        return kernel

    def coinvariants(self, k: int, t_max: int) -> CoinvariantBasis:
        out = CoinvariantBasis(k, t_max)
        B = None
        for c in contents_up_to(self.n, t_max):
            X = Content(c, k)
            B = self.component(X)
            vecs = []
            for kv in self.coinvariant_coords(X):
                vecs.append(B.combine([kv.get(j) for j in range(B.dim)]))
            out.blocks[X] = vecs
        return out

    def coinvariant_dims(self, k: int, t_max: int) -> dict:
        return {Content(c, k): len(self.coinvariant_coords(Content(c, k))) for c in contents_up_to(self.n, t_max)}


_PREFETCH_MODEL = None


def _prefetch_job(X: Content) -> ComponentBasis:
    return _PREFETCH_MODEL.component(X)


# -- degree-two multiplication ----------------------------------------------------------------


@dataclass
class Degree2Result:
    matrices: dict  # Content -> SparseMatrix (rows: M_2 coordinates, cols: pairs of coinvariants)
    source_dims: dict
    image_dims: dict
    target_dims: dict  # dim M_2^{coR} per content
    kernel_dim: int
    image_dim: int
    expected_kernel_dim: int
    lands_in_coinvariants: bool
    warnings: list


def depth(datum: CartanDatum, lam: WeightSpec) -> int:
    """Largest |nu| with lambda - nu a weight of L(lambda)."""
    return max(sum(nu) for nu in weyl_character(datum, lam))


def degree2_mult_map(model: ShuffleBimodule, t_max: int) -> Degree2Result:
    """Shuffle multiplication M_1^coR (x) M_1^coR -> M_2, content by content."""
    datum, lam, field = model.datum, model.lam, model.field
    n = model.n
    msgs = []
    need = 2 * depth(datum, lam)
    if t_max < need:
        msg = f"t_max={t_max} < {need}: the tensor square of L(lambda) is truncated"
        warnings.warn(msg, TruncationWarning)
        msgs.append(msg)
    coinv = {}
    for c in contents_up_to(n, t_max):
        X = Content(c, 1)
        B = model.component(X)
        coinv[X] = [B.combine([kv.get(j) for j in range(B.dim)]) for kv in model.coinvariant_coords(X)]
    matrices, source_dims, image_dims, target_dims = {}, {}, {}, {}
    lands = True
    for c in contents_up_to(n, t_max):
        Z = Content(c, 2)
        BZ = model.component(Z)
        cols = []
        for X1 in _sub_contents(Content(c, 0), 1):
            X2 = Content(tuple(a - b for a, b in zip(c, X1.c)), 1)
            for x in coinv.get(X1, []):
                for y in coinv.get(X2, []):
                    cols.append(model.multiply_coords(x, X1, y, X2))
        M = SparseMatrix(BZ.dim, len(cols), field)
        for j, col in enumerate(cols):
            for i, v in enumerate(col):
                if v is not None and not v.is_zero():
                    M.rows.setdefault(i, {})[j] = v
        C, _ = model.coaction_matrix(Z)
        if not (C @ M).is_zero():
            lands = False
        r = rank_kernel_image(M, want_kernel=False).rank
        matrices[Z] = M
        source_dims[Z] = len(cols)
        image_dims[Z] = r
        target_dims[Z] = len(model.coinvariant_coords(Z))
    expected = sum(weyl_dim(datum, _two_lambda_minus_alpha(datum, lam, j)) for j in critical_set(lam))
    src = sum(source_dims.values())
    img = sum(image_dims.values())
    return Degree2Result(matrices, source_dims, image_dims, target_dims, src - img, img, expected, lands, msgs)


def _two_lambda_minus_alpha(datum: CartanDatum, lam: WeightSpec, j: int) -> WeightSpec:
    """2 lambda - alpha_j in coweight coordinates: c_i -> 2 c_i - C[i][j]."""
    return WeightSpec(tuple(2 * lam.c[i] - datum.C[i][j] for i in range(datum.n)))


def _mat_mul(A, B, field):
    """Dense product where entries of B may be None (zero)."""
    out = []
    ncols = len(B[0]) if B else 0
    for row in A:
        new = []
        for j in range(ncols):
            acc = None
            for a, brow in zip(row, B):
                b = brow[j]
                if b is None or a.is_zero():
                    continue
                t = a * b
                acc = t if acc is None else acc + t
            new.append(acc)
        out.append(new)
    return out


def _mat_mul_transpose(A, B, field):
    """A @ B^T; entries of A may be None."""
    out = []
    for row in A:
        new = []
        for brow in B:
            acc = None
            for a, b in zip(row, brow):
                if a is None or b.is_zero():
                    continue
                t = a * b
                acc = t if acc is None else acc + t
            new.append(acc)
        out.append(new)
    return out
