"""coHochschild (cobar) and Hochschild (bar) complexes of S with coefficients in M_k.

Both are built per total content Z.  A term in degree n is a tuple (X_0, X_1, ..., X_n)
of contents summing to Z: X_0 carries the k lambda-letters (a block of M_k) and X_1..X_n
are lambda-free.  In the reduced complexes the X_i (i >= 1) are nonempty, so a block of
F-length t has no terms beyond n = t.

coHochschild, delta: degree n -> n + 1,
    delta(m (x) c_1..c_n) = rho(m) (x) c_1..c_n + sum_i (-1)^i m (x) .. Dbar(c_i) ..
where rho is the reduced right coaction (right factor nonempty) and Dbar the reduced
deconcatenation.  The left coaction on M_k is trivial, and the unit terms it produces
cancel against those of the full coproducts, which is why the reduced formula closes.

Hochschild, d: degree n -> n - 1, right action through the counit,
    d(m (x) a_1..a_n) = sum_{i<n} (-1)^i m (x) .. a_i*a_{i+1} .. + (-1)^n (a_n*m) (x) a_1..a_{n-1}.
"""
from __future__ import annotations

from ..bimodule import ShuffleBimodule, _sub_contents
from ..braidwords import Content
from ..cartan import contents_up_to
from ..exact.linalg import SparseMatrix
from .complex import ComplexBlock, GradedComplex, HomologyReport, TensorSpace, blockwise_homology


def _compositions(Z: Content, n: int, k: int, allow_empty: bool):
    """Tuples (X_0, X_1..X_n) with X_0.k = k, X_i lambda-free and sum = Z."""
    nl = len(Z.c)
    zero = Content((0,) * nl, 0)
    out = []

    def rec(rest: Content, parts: list, left: int):
        if left == 0:
            if rest.is_zero():
                out.append(tuple(parts))
            return
        for Y in _sub_contents(rest, 0):
            if Y == zero and not allow_empty:
                continue
            # each remaining nonempty factor needs at least one letter
            if not allow_empty and rest.f_length - Y.f_length < left - 1:
                continue
            rec(rest - Y, parts + [Y], left - 1)

    for X0 in _sub_contents(Content(Z.c, 0), k):
        if X0.k != Z.k:
            continue
        rec(Content(tuple(a - b for a, b in zip(Z.c, X0.c)), 0), [X0], n)
    return out


def _space(model: ShuffleBimodule, Z: Content, n: int, reduced: bool) -> TensorSpace:
    return TensorSpace(_compositions(Z, n, Z.k, not reduced), model.dim)


def _add(entries: dict, i: int, j: int, v):
    key = (i, j)
    old = entries.get(key)
    entries[key] = v if old is None else old + v


def _to_matrix(entries: dict, nrows: int, ncols: int, field) -> SparseMatrix:
    M = SparseMatrix(nrows, ncols, field)
    for (i, j), v in entries.items():
        if not v.is_zero():
            M.rows.setdefault(i, {})[j] = v
    return M


def _splits_of(model, X: Content, reduced: bool, left_k: int):
    """(X1, split_coords) over the allowed left parts of X."""
    subs = _sub_contents(X, left_k)
    out = []
    for X1 in subs:
        X2 = X - X1
        if reduced and (X2.length == 0 or (left_k == 0 and X1.length == 0)):
            continue
        out.append((X1, model.split_coords(X, X1)))
    return out


def cobar_differential(model: ShuffleBimodule, src: TensorSpace, dst: TensorSpace, reduced: bool = True) -> SparseMatrix:
    """Matrix of delta from src (degree n) to dst (degree n + 1)."""
    field = model.field
    one, neg = field.one, -field.one
    entries: dict = {}
    for term in src.terms:
        n = len(term) - 1
        splits = [_splits_of(model, X, reduced, X.k if i == 0 else 0) for i, X in enumerate(term)]
        for idx in src.basis(term):
            j = src.index(term, idx)
            for i in range(n + 1):
                sign = one if i % 2 == 0 else neg
                for X1, coords in splits[i]:
                    new_term = term[:i] + (X1, term[i] - X1) + term[i + 1:]
                    if new_term not in dst.offsets:
                        continue
                    for (a, b), y in coords[idx[i]].items():
                        new_idx = idx[:i] + (a, b) + idx[i + 1:]
                        _add(entries, dst.index(new_term, new_idx), j, sign * y)
            if not reduced:
                # trivial left coaction: m (x) c (x) 1, with sign (-1)^(n+1)
                new_term = term + (Content((0,) * len(term[0].c), 0),)
                if new_term in dst.offsets:
                    sign = one if (n + 1) % 2 == 0 else neg
                    _add(entries, dst.index(new_term, idx + (0,)), j, sign)
    return _to_matrix(entries, dst.dim, src.dim, field)


def bar_differential(model: ShuffleBimodule, src: TensorSpace, dst: TensorSpace) -> SparseMatrix:
    """Matrix of d from src (degree n) to dst (degree n - 1)."""
    field = model.field
    one, neg = field.one, -field.one
    entries: dict = {}
    for term in src.terms:
        n = len(term) - 1
        prods = [model.product_coords(term[i], term[i + 1]) for i in range(1, n)]
        last = model.product_coords(term[n], term[0]) if n >= 1 else None
        for idx in src.basis(term):
            j = src.index(term, idx)
            for i in range(1, n):
                sign = one if i % 2 == 0 else neg
                new_term = term[:i] + (term[i] + term[i + 1],) + term[i + 2:]
                if new_term not in dst.offsets:
                    continue
                for c, y in enumerate(prods[i - 1][(idx[i], idx[i + 1])]):
                    if y is None or y.is_zero():
                        continue
                    new_idx = idx[:i] + (c,) + idx[i + 2:]
                    _add(entries, dst.index(new_term, new_idx), j, sign * y)
            if n >= 1:
                sign = one if n % 2 == 0 else neg
                new_term = (term[n] + term[0],) + term[1:n]
                if new_term in dst.offsets:
                    for c, y in enumerate(last[(idx[n], idx[0])]):
                        if y is None or y.is_zero():
                            continue
                        new_idx = (c,) + idx[1:n]
                        _add(entries, dst.index(new_term, new_idx), j, sign * y)
    return _to_matrix(entries, dst.dim, src.dim, field)


def cohochschild_block(model: ShuffleBimodule, Z: Content, n_max: int, reduced: bool = True) -> ComplexBlock:
    """Terms 0..n_max+1 and delta^0..delta^n_max on the block of total content Z."""
    spaces = {n: _space(model, Z, n, reduced) for n in range(n_max + 2)}
    diffs = {n: cobar_differential(model, spaces[n], spaces[n + 1], reduced) for n in range(n_max + 1)}
    dims = {n: s.dim for n, s in spaces.items()}
    complete = reduced and n_max + 1 >= Z.f_length
    return ComplexBlock(Z, dims, diffs, complete, spaces)


def bar_block(model: ShuffleBimodule, Z: Content, n_max: int) -> ComplexBlock:
    """Terms 0..n_max+1 and d_1..d_{n_max+1} on the block of total content Z."""
    spaces = {n: _space(model, Z, n, True) for n in range(n_max + 2)}
    diffs = {n: bar_differential(model, spaces[n], spaces[n - 1]) for n in range(1, n_max + 2)}
    dims = {n: s.dim for n, s in spaces.items()}
    return ComplexBlock(Z, dims, diffs, n_max + 1 >= Z.f_length, spaces)


def _meta(model, kind, k, t_max, n_max):
    return {
        "kind": kind,
        "regime": model.field.regime,
        "l": getattr(model.field, "l", None),
        "lambda": list(model.lam.c) if model.lam is not None else None,
        "k": k,
        "t_max": t_max,
        "n_max": n_max,
    }


def block_contents(model: ShuffleBimodule, k: int, t_max: int) -> list:
    return [Content(c, k) for c in contents_up_to(model.n, t_max)]


def cohochschild_complex(model: ShuffleBimodule, k: int, t_max: int, n_max: int, reduced: bool = True) -> GradedComplex:
    """Cobar complex M_k (x) (S+)^{(x)n} on every block of F-length <= t_max."""
    cx = GradedComplex("cohochschild" if reduced else "cohochschild-unreduced", +1, model.field,
                       tuple(range(n_max + 1)), metadata=_meta(model, "cohochschild", k, t_max, n_max))
    for Z in block_contents(model, k, t_max):
        cx.blocks[Z] = cohochschild_block(model, Z, n_max, reduced)
    return cx


def bar_complex(model: ShuffleBimodule, k: int, t_max: int, n_max: int) -> GradedComplex:
    """Bar complex M_k (x) (S+)^{(x)n} with left shuffle action and counit right action."""
    cx = GradedComplex("bar", -1, model.field, tuple(range(n_max + 1)),
                       metadata=_meta(model, "bar", k, t_max, n_max))
    for Z in block_contents(model, k, t_max):
        cx.blocks[Z] = bar_block(model, Z, n_max)
    return cx


def needed_contents(model: ShuffleBimodule, k: int, t_max: int) -> list:
    """Every component a block of F-length <= t_max can touch."""
    return [Content(c, kk) for c in contents_up_to(model.n, t_max) for kk in sorted({0, k})]


def cohochschild_homology(model: ShuffleBimodule, k: int, t_max: int, n_max: int, jobs: int = 1,
                          backend: str = "auto") -> HomologyReport:
    """Hoch^0..Hoch^n_max per block, building blocks independently (in workers if jobs > 1)."""
    model.prefetch(needed_contents(model, k, t_max), jobs)
    return blockwise_homology("cohochschild", lambda Z: cohochschild_block(model, Z, n_max),
                              block_contents(model, k, t_max), range(n_max + 1), +1, backend, jobs,
                              _meta(model, "cohochschild", k, t_max, n_max))


def bar_homology(model: ShuffleBimodule, k: int, t_max: int, n_max: int, jobs: int = 1,
                 backend: str = "auto") -> HomologyReport:
    model.prefetch(needed_contents(model, k, t_max), jobs)
    return blockwise_homology("bar", lambda Z: bar_block(model, Z, n_max),
                              block_contents(model, k, t_max), range(n_max + 1), -1, backend, jobs,
                              _meta(model, "bar", k, t_max, n_max))
