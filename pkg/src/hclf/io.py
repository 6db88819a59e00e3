"""Curve specification files, JSON serialization and the census cache."""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from pathlib import Path

import numpy as np

from .curve import CurveError, CurveModel, Place, curve_from_ints, level
from .jacobian import BasePointConfig, Divisor, default_base

SCHEMA_VERSION = 1
CACHE_ENV = "HCLF_CACHE_DIR"


class SpecError(ValueError):
    pass


# ---------------------------------------------------------------------------
# field elements and polynomials

def element_to_json(K, c):
    return int(c) if K.k == 1 else K.coords(c)


def element_from_json(K, obj) -> int:
    if isinstance(obj, (list, tuple)):
        if len(obj) > K.k:
            raise SpecError(f"coordinate list {obj} is longer than the degree {K.k}")
        return K.from_coords([int(c) for c in obj])
    if not isinstance(obj, int) or isinstance(obj, bool):
        raise SpecError(f"field element must be an int or a coordinate list, got {obj!r}")
    if K.k > 1 and not 0 <= obj < K.p:
        raise SpecError(f"integer {obj} is not a prime-field element; use a coordinate list")
    return obj % K.order


def poly_to_json(K, coeffs) -> list:
    return [element_to_json(K, c) for c in coeffs]


def poly_from_json(K, obj) -> list[int]:
    if not isinstance(obj, list):
        raise SpecError("polynomials are lists of coefficients, lowest degree first")
    return [element_from_json(K, c) for c in obj]


# ---------------------------------------------------------------------------
# curves

def curve_to_spec(model: CurveModel, base: BasePointConfig | None = None) -> dict:
    K = model.base
    spec = {
        "p": model.p,
        "a": model.a,
        "modulus": list(K.modulus),
        "h": poly_to_json(K, model.h),
        "f": poly_to_json(K, model.f),
        "label": model.label,
    }
    if base is not None and base != default_base_or_none(model):
        spec["d1"] = [dict(place_to_json(model, P), mult=k) for P, k in base.d1.support]
    return spec


def default_base_or_none(model):
    try:
        return default_base(model)
    except Exception:
        return None


def curve_from_spec(spec: dict) -> tuple[CurveModel, BasePointConfig]:
    """Parse a curve specification; returns the model and its D1."""
    if not isinstance(spec, dict):
        raise SpecError("curve specification must be a JSON object")
    for key in ("p", "a", "f"):
        if key not in spec:
            raise SpecError(f"curve specification lacks {key!r}")
    p, a = spec["p"], spec["a"]
    if not isinstance(p, int) or not isinstance(a, int):
        raise SpecError("p and a must be integers")
    try:
        from .field import make_field
        K = make_field(p, a)
        h = poly_from_json(K, spec.get("h", []))
        f = poly_from_json(K, spec["f"])
        model = curve_from_ints(p, a, h, f, str(spec.get("label", "")), spec.get("modulus"))
    except (CurveError, ArithmeticError) as exc:
        raise SpecError(str(exc)) from None
    except ValueError as exc:
        raise SpecError(str(exc)) from None
    if "d1" in spec:
        items = [(place_from_json(model, obj), int(obj.get("mult", 1))) for obj in spec["d1"]]
        try:
            base = BasePointConfig(Divisor.from_places(1, items))
        except ArithmeticError as exc:
            raise SpecError(str(exc)) from None
    else:
        try:
            base = default_base(model)
        except ArithmeticError as exc:
            raise SpecError(str(exc)) from None
    return model, base


def load_curve(path) -> tuple[CurveModel, BasePointConfig]:
    try:
        with open(path) as fh:
            spec = json.load(fh)
    except OSError as exc:
        raise SpecError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise SpecError(f"{path} is not valid JSON: {exc}") from None
    return curve_from_spec(spec)


# ---------------------------------------------------------------------------
# places, in the coordinates of the input model (y, not the completed square)

def _shift_y(L, u, v, sign):
    R = L.R
    if not L.h:
        return list(v)
    w = R.add(list(v), R.scale(L.half_h, L.field.neg_table[1])) if sign < 0 else R.add(list(v), L.half_h)
    return R.trim(R.mod(w, list(u)))


def place_to_json(model: CurveModel, P: Place) -> dict:
    L = level(model, P.level)
    K = L.field
    if P.is_infinite:
        return {"kind": "infinite", "degree": P.degree, "infinity": P.inf_index}
    out = {"kind": P.kind, "degree": P.degree, "u": poly_to_json(K, P.u)}
    if P.kind != "inert":
        out["v"] = poly_to_json(K, _shift_y(L, P.u, P.v, -1))
    return out


def place_from_json(model: CurveModel, obj: dict, n: int = 1) -> Place:
    L = level(model, n)
    if "infinity" in obj:
        i = int(obj["infinity"])
        if not 0 <= i < len(L.inf):
            raise SpecError(f"no place at infinity with index {i}")
        I = L.inf[i]
        return Place(n, I.degree, "infinite", inf_index=i)
    K, R = L.field, L.R
    u = R.trim(poly_from_json(K, obj.get("u", [])))
    if len(u) < 2 or u[-1] != 1 or len(R.factor(u)) != 1 or R.factor(u)[0][1] != 1:
        raise SpecError(f"u = {obj.get('u')} is not monic irreducible")
    Fu = R.mod(list(L.F), u)
    if not any(Fu):
        return Place(n, len(u) - 1, "ramified", tuple(u), ())
    if "v" not in obj:
        if R.sqrt_mod(Fu, u) is not None:
            raise SpecError("a split place needs its y-coordinate v")
        return Place(n, 2 * (len(u) - 1), "inert", tuple(u), ())
    v = _shift_y(L, u, poly_from_json(K, obj["v"]), 1)
    if R.trim(R.mod(R.sub(R.mul(v, v), Fu), u)):
        raise SpecError("v does not satisfy the curve equation modulo u")
    return Place(n, len(u) - 1, "split", tuple(u), tuple(v))


# ---------------------------------------------------------------------------
# JSON output

def dumps(record: dict) -> str:
    """One JSON line, keys in insertion order, schema version first."""
    return json.dumps({"schema_version": SCHEMA_VERSION, **record}, separators=(",", ":"))


def to_plain(obj):
    if isinstance(obj, dict):
        return {str(k): to_plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_plain(x) for x in obj]
    if isinstance(obj, np.integer):
        return int(obj)
    if hasattr(obj, "to_json"):
        return obj.to_json()
    return obj


# ---------------------------------------------------------------------------
# census cache

def cache_dir(override=None) -> Path:
    if override:
        return Path(override)
    env = os.environ.get(CACHE_ENV)
    if env:
        return Path(env)
    return Path(os.path.expanduser("~/.cache/hclf"))


def census_key(model: CurveModel, base: BasePointConfig, n: int, d: int) -> str:
    spec = curve_to_spec(model)
    spec.pop("label")
    d1 = [[place_to_json(model, P), k] for P, k in base.d1.support]
    blob = json.dumps({"v": SCHEMA_VERSION, "curve": spec, "d1": d1, "n": n, "d": d},
                      sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


class CensusCache:
    """Census slices N(., d) stored as integer vectors in character-table element order."""

    def __init__(self, root: Path | None):
        self.root = Path(root) if root is not None else None

    def _path(self, key: str) -> Path:
        return self.root / key[:2] / f"{key}.json"

    def get(self, key: str, invariants) -> np.ndarray | None:
        if self.root is None:
            return None
        path = self._path(key)
        try:
            with open(path) as fh:
                obj = json.load(fh)
        except (OSError, json.JSONDecodeError):
            return None
        if obj.get("invariants") != list(invariants):
            return None
        return np.array(obj["counts"], dtype=np.int64)

    def put(self, key: str, invariants, counts) -> None:
        if self.root is None:
            return
        path = self._path(key)
        path.parent.mkdir(parents=True, exist_ok=True)
        payload = json.dumps({"invariants": list(invariants), "counts": [int(c) for c in counts]})
        fd, tmp = tempfile.mkstemp(dir=path.parent, suffix=".tmp")
        try:
            with os.fdopen(fd, "w") as fh:
                fh.write(payload)
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise


def load_census(D, cache: CensusCache, dmax: int) -> None:
    """Fill D's census slices for d <= dmax from the cache, computing and storing misses."""
    inv = tuple(D.S.invariant_factors)
    for d in range(dmax + 1):
        if d in D._census or d > 2 * D.g - 2:
            continue
        key = census_key(D.model, D.base, D.n, d)
        v = cache.get(key, inv)
        if v is not None and len(v) == D.table.size:
            D._census[d] = v
            continue
        cache.put(key, inv, D.census(d))
