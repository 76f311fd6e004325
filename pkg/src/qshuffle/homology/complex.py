"""Block-diagonal chain complexes and their homology dimensions.

A ``GradedComplex`` is a dict of ``ComplexBlock`` keyed by content.  Each block stores the
dimension of every term and the differential out of it as a ``SparseMatrix`` (columns =
source basis, rows = target basis).  ``direction`` is +1 for a cochain complex (delta raises
degree) and -1 for a chain complex.

``homology_ranks`` computes H in each degree as dim C_n - rk(out of n) - rk(into n).  With
``backend="auto"`` ranks are first taken modulo a prime at a specialization point; those
are lower bounds, so a zero upper bound for H is already exact.  Any degree whose bound is
positive gets its two adjacent ranks recomputed exactly.
"""
from __future__ import annotations

import multiprocessing
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field
from itertools import product

from ..braidwords import Content
from ..exact.field import Field, SpecializationError
from ..exact.linalg import SparseMatrix, rank as exact_rank
from ..exact.modular import modular_rank


class TensorSpace:
    """Direct sum of tensor products of components; basis = (term, index tuple)."""

    def __init__(self, terms, dims_of):
        self.terms = []
        self.offsets = {}
        self.shapes = {}
        total = 0
        for term in terms:
            dims = tuple(dims_of(X) for X in term)
            if any(d == 0 for d in dims):
                continue
            self.terms.append(term)
            self.offsets[term] = total
            self.shapes[term] = dims
            size = 1
            for d in dims:
                size *= d
            total += size
        self.dim = total

    def index(self, term, idx) -> int:
        off = self.offsets[term]
        dims = self.shapes[term]
        i = 0
        for x, d in zip(idx, dims):
            i = i * d + x
        return off + i

    def basis(self, term):
        return product(*(range(d) for d in self.shapes[term]))

    def labels(self):
        out = []
        for term in self.terms:
            for idx in self.basis(term):
                out.append((term, idx))
        return out


@dataclass
class ComplexBlock:
    key: object
    dims: dict  # degree -> dimension of the term
    diffs: dict  # degree -> SparseMatrix out of that degree
    complete: bool = True  # every nonzero term of the block is present
    spaces: dict = dc_field(default_factory=dict)


@dataclass
class GradedComplex:
    kind: str
    direction: int
    field: Field
    degrees: tuple  # degrees whose homology is meaningful
    blocks: dict = dc_field(default_factory=dict)
    metadata: dict = dc_field(default_factory=dict)

    def check_square_zero(self) -> list:
        """Blocks/degrees where two consecutive differentials do not compose to zero."""
        bad = []
        for key, blk in self.blocks.items():
            for n, D in blk.diffs.items():
                E = blk.diffs.get(n + self.direction)
                if E is None:
                    continue
                if not (E @ D).is_zero():
                    bad.append((key, n))
        return bad


@dataclass
class HomologyReport:
    kind: str
    dims: dict = dc_field(default_factory=dict)  # (n, key) -> int
    certified: dict = dc_field(default_factory=dict)  # (n, key) -> bool
    incomplete: list = dc_field(default_factory=list)  # keys of truncated blocks
    square_zero_failures: list = dc_field(default_factory=list)  # (key, n) with d o d != 0
    metadata: dict = dc_field(default_factory=dict)

    def total(self, n: int) -> int:
        return sum(v for (m, _), v in self.dims.items() if m == n)

    def by_degree(self, n: int) -> dict:
        return {k: v for (m, k), v in self.dims.items() if m == n}

    def all_certified(self) -> bool:
        return all(self.certified.values())


def _rank_exact(M: SparseMatrix | None) -> int:
    if M is None or M.is_zero():
        return 0
    return exact_rank(M)


def _rank_modular(M: SparseMatrix | None):
    """(rank lower bound, is_exact)."""
    if M is None or M.is_zero():
        return 0, True
    try:
        r = modular_rank(M)
    except SpecializationError:
        return _rank_exact(M), True
    return r, r == min(M.nrows, M.ncols)


def block_homology(blk: ComplexBlock, degrees, direction: int, backend: str = "auto"):
    """(dims, certified) dicts over degrees for one block."""
    ranks: dict = {}
    exact: dict = {}

    def get(n, want_exact=False):
        if n not in blk.diffs:
            return 0, True
        if n in ranks and (exact[n] or not want_exact):
            return ranks[n], exact[n]
        M = blk.diffs[n]
        if backend == "exact" or want_exact:
            r, ok = _rank_exact(M), True
        else:
            r, ok = _rank_modular(M)
        ranks[n], exact[n] = r, ok
        return r, ok

    dims, cert = {}, {}
    for n in degrees:
        D = blk.dims.get(n, 0)
        if D == 0:
            dims[n], cert[n] = 0, True
            continue
        out_n, into_n = n, n - direction
        r1, e1 = get(out_n)
        r2, e2 = get(into_n)
        h = D - r1 - r2
        if h > 0 and backend == "auto" and not (e1 and e2):
            r1, e1 = get(out_n, True)
            r2, e2 = get(into_n, True)
            h = D - r1 - r2
        dims[n] = h
        cert[n] = h == 0 or (e1 and e2)
    return dims, cert


def homology_ranks(cx: GradedComplex, backend: str = "auto") -> HomologyReport:
    """Per-(degree, block) homology dimensions."""
    rep = HomologyReport(kind=cx.kind, metadata=dict(cx.metadata))
    rep.metadata["backend"] = backend
    for key in sorted(cx.blocks, key=_block_sort_key):
        blk = cx.blocks[key]
        dims, cert = block_homology(blk, cx.degrees, cx.direction, backend)
        for n in cx.degrees:
            rep.dims[(n, key)] = dims[n]
            rep.certified[(n, key)] = cert[n]
        if not blk.complete:
            rep.incomplete.append(key)
        rep.square_zero_failures.extend((key, n) for n in _square_zero_failures(blk, cx.direction))
    return rep


# -- blockwise driver ---------------------------------------------------------------------------
# Workers are forked, so the builder is inherited rather than pickled; only keys and integer
# results cross the process boundary.

_BUILDER = None


def _square_zero_failures(blk: ComplexBlock, direction: int) -> list:
    bad = []
    for n, D in blk.diffs.items():
        E = blk.diffs.get(n + direction)
        if E is not None and not (E @ D).is_zero():
            bad.append(n)
    return bad


def _block_job(args):
    key, degrees, direction, backend = args
    blk = _BUILDER(key)
    dims, cert = block_homology(blk, degrees, direction, backend)
    return dims, cert, blk.complete, _square_zero_failures(blk, direction)


def blockwise_homology(kind: str, builder, keys, degrees, direction: int, backend: str = "auto",
                       jobs: int = 1, metadata: dict | None = None) -> HomologyReport:
    """Build each block with ``builder(key)`` and take its homology, optionally in forked workers.

    The report depends only on the keys, never on the schedule.
    """
    global _BUILDER
    rep = HomologyReport(kind=kind, metadata=dict(metadata or {}))
    rep.metadata["backend"] = backend
    keys = sorted(keys, key=_block_sort_key)
    args = [(k, tuple(degrees), direction, backend) for k in keys]
    _BUILDER = builder
    try:
        if jobs > 1 and len(keys) > 1 and "fork" in multiprocessing.get_all_start_methods():
            ctx = multiprocessing.get_context("fork")
            with ProcessPoolExecutor(max_workers=jobs, mp_context=ctx) as pool:
                results = list(pool.map(_block_job, args))
        else:
            results = [_block_job(a) for a in args]
    finally:
        _BUILDER = None
    for key, (dims, cert, complete, bad) in zip(keys, results):
        for n in degrees:
            rep.dims[(n, key)] = dims[n]
            rep.certified[(n, key)] = cert[n]
        if not complete:
            rep.incomplete.append(key)
        rep.square_zero_failures.extend((key, n) for n in bad)
    return rep


def _block_sort_key(key):
    if isinstance(key, Content):
        return (0, key.f_length, key.c, key.k)
    return (1, key)
