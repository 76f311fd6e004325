"""Run configuration: JSON parsing, validation (all errors at once) and a semantic hash."""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

from ..cartan import CartanDatum, CartanError, WeightSpec, check_weight, validate_cartan

CONFIG_SCHEMA_VERSION = 1

TASKS = (
    "serre-dims",
    "coinvariants",
    "cohochschild",
    "bar-duality",
    "koszul-generic",
    "koszul-root-of-unity",
    "homotopy-check",
    "theorem-a",
    "theorem-b",
    "prop-sln",
)


class ConfigError(ValueError):
    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


@dataclass
class RunConfig:
    cartan: list
    d: list
    lam: list
    regime: str = "generic"
    l: int | None = None
    t_max: int = 4
    n_max: int = 2
    k: int = 1
    p_max: int = 3
    pbw_degree_max: int = 3
    w0_word: list | None = None
    random_samples: int = 100
    seed: int = 0
    tasks: list = field(default_factory=list)
    cache_dir: str | None = None
    jobs: int = 1
    name: str = ""

    @property
    def datum(self) -> CartanDatum:
        return CartanDatum(tuple(tuple(r) for r in self.cartan), tuple(self.d))

    @property
    def weight(self) -> WeightSpec:
        return WeightSpec(tuple(self.lam))

    def semantic(self) -> dict:
        """Fields that change results; cache_dir and jobs do not."""
        return {
            "cartan": self.cartan,
            "d": self.d,
            "lambda": self.lam,
            "regime": self.regime,
            "l": self.l,
            "t_max": self.t_max,
            "n_max": self.n_max,
            "k": self.k,
            "p_max": self.p_max,
            "pbw_degree_max": self.pbw_degree_max,
            "w0_word": self.w0_word,
            "random_samples": self.random_samples,
            "seed": self.seed,
            "tasks": self.tasks,
        }

    def hash(self) -> str:
        blob = json.dumps(self.semantic(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()[:16]


_INT_FIELDS = ("t_max", "n_max", "k", "p_max", "pbw_degree_max", "random_samples", "seed", "jobs")


def _cartan_from(raw, errors):
    if isinstance(raw, dict) and "type" in raw:
        kind = str(raw["type"])
        rank = raw.get("rank")
        if len(kind) > 1 and rank is None:
            kind, rank = kind[0], kind[1:]
        try:
            dat = CartanDatum.of_type(kind, int(rank))
        except (CartanError, ValueError, TypeError) as exc:
            errors.append(f"cartan: {exc}")
            return None, None
        return [list(r) for r in dat.C], list(dat.d)
    if isinstance(raw, dict) and "matrix" in raw:
        C = raw["matrix"]
        d = raw.get("d")
        if not isinstance(C, list) or not all(isinstance(r, list) for r in C):
            errors.append("cartan.matrix must be a list of rows")
            return None, None
        if d is None:
            d = [1] * len(C)
        try:
            C = [[int(x) for x in r] for r in C]
            d = [int(x) for x in d]
        except (TypeError, ValueError):
            errors.append("cartan.matrix and cartan.d must be integers")
            return None, None
        return C, d
    errors.append('cartan must be {"type": "A", "rank": n} or {"matrix": [[...]], "d": [...]}')
    return None, None


def config_from_dict(raw: dict, overrides: dict | None = None) -> RunConfig:
    """Validate a parsed config; raises ConfigError listing every violation."""
    errors = []
    if not isinstance(raw, dict):
        raise ConfigError(["config must be a JSON object"])
    raw = dict(raw)
    for k, v in (overrides or {}).items():
        if v is not None:
            raw[k] = v
    version = raw.get("schema_version", CONFIG_SCHEMA_VERSION)
    if version != CONFIG_SCHEMA_VERSION:
        errors.append(f"schema_version {version} is not supported (expected {CONFIG_SCHEMA_VERSION})")
    C, d = _cartan_from(raw.get("cartan"), errors)
    if C is not None:
        errors.extend(f"cartan: {e}" for e in validate_cartan(C, d))
    lam = raw.get("lambda")
    if not isinstance(lam, list) or not all(isinstance(x, int) for x in lam):
        errors.append("lambda must be a list of integers (coweight coordinates)")
        lam = None
    else:
        neg = [i for i, x in enumerate(lam) if x < 0]
        if neg:
            errors.append(f"lambda must be dominant: coordinates {neg} are negative")
        if C is not None and len(lam) != len(C):
            errors.append(f"lambda has {len(lam)} coordinates but the Cartan matrix has rank {len(C)}")
    regime = raw.get("regime", "generic")
    l = raw.get("l")
    if regime not in ("generic", "root_of_unity"):
        errors.append(f"regime must be 'generic' or 'root_of_unity', got {regime!r}")
    if regime == "root_of_unity":
        if not isinstance(l, int) or l < 3 or l % 2 == 0:
            errors.append(f"root_of_unity needs an odd order l >= 3, got l={l!r}")
        elif C is not None and lam is not None and not any(x < 0 for x in lam) and len(lam) == len(C):
            try:
                errors.extend(f"lambda: {e}" for e in check_weight(CartanDatum(tuple(map(tuple, C)), tuple(d)), WeightSpec(tuple(lam)), l))
            except CartanError:
                pass
    elif l is not None:
        errors.append("l is only meaningful with regime 'root_of_unity'")
        l = None
    ints = {}
    for key in _INT_FIELDS:
        if key in raw:
            v = raw[key]
            if not isinstance(v, int) or isinstance(v, bool) or v < 0:
                errors.append(f"{key} must be a nonnegative integer")
                continue
            ints[key] = v
    if ints.get("jobs") == 0:
        errors.append("jobs must be at least 1")
    tasks = raw.get("tasks", [])
    if tasks == "all":
        tasks = list(TASKS)
    if not isinstance(tasks, list):
        errors.append("tasks must be a list of task names or 'all'")
        tasks = []
    bad = [t for t in tasks if t not in TASKS]
    if bad:
        errors.append(f"unknown tasks {bad}; known: {list(TASKS)}")
    w0 = raw.get("w0_word")
    if w0 is not None and (not isinstance(w0, list) or not all(isinstance(x, int) for x in w0)):
        errors.append("w0_word must be a list of 1-based simple reflection indices")
    elif w0 is not None and C is not None and any(not 1 <= x <= len(C) for x in w0):
        errors.append(f"w0_word letters must lie in 1..{len(C)}")
    unknown = set(raw) - {"schema_version", "name", "cartan", "lambda", "regime", "l", "tasks", "w0_word",
                          "cache_dir", *_INT_FIELDS}
    if unknown:
        errors.append(f"unknown config keys {sorted(unknown)}")
    if errors:
        raise ConfigError(errors)
    return RunConfig(cartan=C, d=d, lam=list(lam), regime=regime, l=l, tasks=list(tasks), w0_word=w0,
                     cache_dir=raw.get("cache_dir"), name=str(raw.get("name", "")), **ints)


def parse_config(path, overrides: dict | None = None) -> RunConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ConfigError([f"cannot read {path}: {exc}"]) from exc
    except json.JSONDecodeError as exc:
        raise ConfigError([f"{path} is not valid JSON: {exc}"]) from exc
    return config_from_dict(raw, overrides)
