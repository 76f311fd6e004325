"""On-disk cache of component bases, one JSON file per content block.

Entries are keyed by the braiding (Cartan matrix, symmetrizer, weight, regime) and the content.
Loaded bases are re-validated against the symmetrizer before use; a corrupt or invalid entry
is recomputed and overwritten with a warning, and a version mismatch is a plain miss.
"""
from __future__ import annotations

import hashlib
import json
import logging
import os
import tempfile
import warnings

from ..bimodule import ComponentBasis

CACHE_VERSION = 1

log = logging.getLogger(__name__)


class CacheWarning(UserWarning):
    pass


def _words(ws):
    return [list(w) for w in ws]


def _vec(v: dict) -> list:
    return [[list(w), str(c)] for w, c in sorted(v.items())]


class BasisCache:
    def __init__(self, root):
        self.root = str(root)
        self.hits = 0
        self.misses = 0
        self.rejected = 0

    def model_key(self, model) -> str:
        ident = {
            "C": [list(r) for r in model.datum.C],
            "d": list(model.datum.d),
            "lambda": list(model.lam.c) if model.lam is not None else None,
            "regime": model.field.regime,
            "l": getattr(model.field, "l", None),
        }
        blob = json.dumps(ident, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()[:20]

    def path(self, model, X) -> str:
        return os.path.join(self.root, self.model_key(model), X.key.replace(";", "_").replace(",", "-") + ".json")

    def encode(self, basis: ComponentBasis) -> dict:
        return {
            "version": CACHE_VERSION,
            "content": basis.content.key,
            "pivot_words": _words(basis.pivot_words),
            "row_words": _words(basis.row_words),
            "vectors": [_vec(v) for v in basis.vectors],
            "inv": [[str(x) for x in row] for row in basis.inv],
        }

    def decode(self, model, X, data: dict) -> ComponentBasis:
        F = model.field
        if data["content"] != X.key:
            raise ValueError("content mismatch")
        vectors = [{tuple(w): F.parse(c) for w, c in v} for v in data["vectors"]]
        inv = [[F.parse(x) for x in row] for row in data["inv"]]
        return ComponentBasis(X, tuple(tuple(w) for w in data["pivot_words"]), vectors,
                              tuple(tuple(w) for w in data["row_words"]), inv)

    def load(self, model, X):
        p = self.path(model, X)
        if not os.path.exists(p):
            self.misses += 1
            return None
        try:
            with open(p, encoding="utf-8") as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            return self._reject(p, f"unreadable ({exc})")
        if not isinstance(data, dict) or data.get("version") != CACHE_VERSION:
            self.misses += 1
            return None
        try:
            basis = self.decode(model, X, data)
        except Exception as exc:  # any malformed payload counts as corruption
            return self._reject(p, f"malformed ({exc})")
        if not model.validate_basis(X, basis):
            return self._reject(p, "failed re-validation")
        self.hits += 1
        return basis

    def _reject(self, p, why):
        self.rejected += 1
        warnings.warn(f"cache entry {p} {why}; recomputing", CacheWarning)
        return None

    def save(self, model, X, basis: ComponentBasis):
        p = self.path(model, X)
        os.makedirs(os.path.dirname(p), exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=os.path.dirname(p), suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                json.dump(self.encode(basis), fh, sort_keys=True)
            os.replace(tmp, p)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
