"""JSON scenario files and result records.

Scenario file (UTF-8 JSON)::

    {
      "kind": "disk" | "framed-loop" | "group-action" | "clutching" | "planar" | "lagrangian-loop",
      "id": "optional name",
      "dimension": 2n,
      "grid": [0.0, ..., 1.0],
      "form": [[...], ...],                     # optional, standard form by default
      "options": {"seed": int, "tolerances": {"angle": 1e-8, ...}},
      # kind-specific fields
      "subspaces": [B_0, B_1, ...],             # disk, framed-loop, lagrangian-loop (2n x k each)
      "frames": [F_0, F_1, ...],                # disk, framed-loop (omit when k = n)
      "disk_map": {"vertices": [[u, v], ...], "values": [[...], ...], "triangles": [[i, j, k], ...]},
      "weights": [w_1, ..., w_n], "loop": [[re, im], ...],     # group-action
      "matrices": [M_0, M_1, ...],                             # clutching
      "boundaries": [{"grid": [...], "matrices": [...]}, ...]  # planar
    }

Matrices are row-major nested lists; complex numbers are ``[re, im]`` pairs.
"""

import json
import math
import time
import warnings
from dataclasses import asdict, dataclass, field

import numpy as np

from .config import DEFAULT_TOL
from .errors import (
    DimensionMismatch,
    NearBandWarning,
    NeitherRegularWarning,
    ParseError,
    UnknownKind,
    ValidationError,
)
from .lift import lagrangian_loop_index, lift_framed_loop
from .paths import SymplecticPath, check_grid, maslov_path
from .scenarios import (
    ClutchingScenario,
    DiskMap,
    DiskScenario,
    GroupActionScenario,
    chern_from_clutching,
    disk_symplectic_area,
    gaio_salamon_index,
    monotonicity_ratio,
    planar_surface_maslov,
)
from .symplectic import CoisotropicSubspace, SymplecticSpace, standard_form

KINDS = ("disk", "framed-loop", "group-action", "clutching", "planar", "lagrangian-loop")

RESULT_FIELDS = ("scenario_id", "kind", "value", "integer", "rounded", "warnings", "timing", "tolerances", "extras")


@dataclass
class ResultRecord:
    scenario_id: str
    kind: str
    value: float
    integer: bool
    rounded: int = None
    warnings: list = field(default_factory=list)
    timing: float = 0.0
    tolerances: dict = field(default_factory=dict)
    extras: dict = field(default_factory=dict)

    def to_json(self):
        return json.dumps(asdict(self), sort_keys=True)


def validate_record(rec, tol=DEFAULT_TOL):
    """Check a result record (a dict) against the documented schema."""
    if not isinstance(rec, dict) or set(rec) != set(RESULT_FIELDS):
        raise ValidationError("record fields do not match the schema")
    if not isinstance(rec["scenario_id"], str) or rec["kind"] not in KINDS:
        raise ValidationError("bad scenario id or kind")
    if not isinstance(rec["value"], (int, float)) or not math.isfinite(rec["value"]):
        raise ValidationError("value must be a finite number", "value")
    if not isinstance(rec["integer"], bool):
        raise ValidationError("integer flag must be boolean", "integer")
    if rec["integer"]:
        if not isinstance(rec["rounded"], int) or abs(rec["value"] - rec["rounded"]) > tol.integer:
            raise ValidationError("rounded value inconsistent with value", "rounded")
    elif rec["rounded"] is not None:
        raise ValidationError("rounded must be null when the integer flag is unset", "rounded")
    if not isinstance(rec["warnings"], list) or not all(isinstance(w, str) for w in rec["warnings"]):
        raise ValidationError("warnings must be a list of strings", "warnings")
    if not isinstance(rec["timing"], (int, float)) or rec["timing"] < 0:
        raise ValidationError("timing must be a non-negative number", "timing")
    if not isinstance(rec["tolerances"], dict) or not isinstance(rec["extras"], dict):
        raise ValidationError("tolerances and extras must be objects")
    return True


# ---------------------------------------------------------------- encoding

def encode_matrix(m):
    m = np.asarray(m)
    if np.iscomplexobj(m):
        return [[[float(z.real), float(z.imag)] for z in row] for row in m]
    return m.tolist()


def encode_complex_list(z):
    return [[float(v.real), float(v.imag)] for v in np.asarray(z, dtype=complex)]


def _matrix(value, path, rows=None, cols=None):
    try:
        m = np.array(value, dtype=float)
    except (TypeError, ValueError):
        raise ParseError("expected a numeric matrix", path) from None
    if m.ndim == 1 and m.size == 0:
        m = m.reshape(0, 0)
    if m.ndim != 2:
        raise ParseError(f"expected a 2-d matrix, got {m.ndim} dimensions", path)
    if not np.all(np.isfinite(m)):
        raise ParseError("matrix has non-finite entries", path)
    if rows is not None and m.shape[0] != rows:
        raise DimensionMismatch(f"expected {rows} rows, got {m.shape[0]}", path)
    if cols is not None and m.shape[1] != cols:
        raise DimensionMismatch(f"expected {cols} columns, got {m.shape[1]}", path)
    return m


def _complex_list(value, path):
    try:
        a = np.array(value, dtype=float)
    except (TypeError, ValueError):
        raise ParseError("expected a list of [re, im] pairs", path) from None
    if a.ndim != 2 or a.shape[1] != 2:
        raise ParseError("expected a list of [re, im] pairs", path)
    return a[:, 0] + 1j * a[:, 1]


def _require(doc, key, path=None):
    if key not in doc:
        raise ParseError(f"missing field '{key}'", path)
    return doc[key]


def _grid(value, path):
    try:
        return check_grid(np.array(value, dtype=float), path)
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ValidationError):
            raise
        raise ParseError("grid must be a list of numbers", path) from None


def resolve_tolerances(doc, override=None):
    opts = doc.get("options", {}) or {}
    if not isinstance(opts, dict):
        raise ParseError("options must be an object", "options")
    raw = opts.get("tolerances", {}) or {}
    if not isinstance(raw, dict):
        raise ParseError("tolerances must be an object", "options.tolerances")
    known = DEFAULT_TOL.as_dict()
    for key, val in raw.items():
        if key not in known:
            raise ValidationError(f"unknown tolerance '{key}'", f"options.tolerances.{key}")
        if not isinstance(val, (int, float)) or val <= 0:
            raise ValidationError("tolerance must be a positive number", f"options.tolerances.{key}")
    tol = DEFAULT_TOL.updated(**{k: float(v) for k, v in raw.items()})
    if override:
        tol = tol.updated(**override)
    return tol


def _seed(doc, fallback=None):
    opts = doc.get("options", {}) or {}
    seed = opts.get("seed", fallback)
    if seed is not None and not isinstance(seed, int):
        raise ValidationError("seed must be an integer", "options.seed")
    return seed


# ---------------------------------------------------------------- decoding

def parse_document(text):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg} at line {exc.lineno}") from None
    if not isinstance(doc, dict):
        raise ParseError("top level must be an object")
    kind = _require(doc, "kind")
    if kind not in KINDS:
        raise UnknownKind(f"unknown scenario kind '{kind}'", "kind")
    return doc


def _space(doc):
    dim = _require(doc, "dimension")
    if not isinstance(dim, int) or dim <= 0 or dim % 2:
        raise ValidationError("dimension must be a positive even integer", "dimension")
    if "form" in doc and doc["form"] is not None:
        form = _matrix(doc["form"], "form", dim, dim)
        return SymplecticSpace(form)
    return SymplecticSpace(standard_form(dim // 2))


def _disk_scenario(doc, tol):
    space = _space(doc)
    dim = space.dim
    grid = _grid(_require(doc, "grid"), "grid")
    subs = _require(doc, "subspaces")
    if not isinstance(subs, list) or len(subs) != grid.size:
        raise DimensionMismatch(f"need {grid.size} subspaces", "subspaces")
    bases = [_matrix(b, f"subspaces[{i}]", dim) for i, b in enumerate(subs)]
    k = bases[0].shape[1]
    for i, b in enumerate(bases):
        if b.shape[1] != k:
            raise DimensionMismatch(f"expected {k} columns, got {b.shape[1]}", f"subspaces[{i}]")
    q = 2 * k - dim
    frames_raw = doc.get("frames")
    if frames_raw is None:
        if q != 0:
            raise ParseError("missing field 'frames'", "frames")
        frames = [np.zeros((0, 0))] * grid.size
    else:
        if not isinstance(frames_raw, list) or len(frames_raw) != grid.size:
            raise DimensionMismatch(f"need {grid.size} frames", "frames")
        frames = [_matrix(f, f"frames[{i}]", q, q) if q else np.zeros((0, 0)) for i, f in enumerate(frames_raw)]
    disk = None
    if doc.get("disk_map") is not None:
        dm = doc["disk_map"]
        verts = _matrix(_require(dm, "vertices", "disk_map"), "disk_map.vertices", cols=2)
        vals = _matrix(_require(dm, "values", "disk_map"), "disk_map.values", verts.shape[0], dim)
        tris = _matrix(_require(dm, "triangles", "disk_map"), "disk_map.triangles", cols=3)
        if np.any(tris != np.round(tris)) or np.any(tris < 0) or np.any(tris >= verts.shape[0]):
            raise ValidationError("triangle indices out of range", "disk_map.triangles")
        disk = DiskMap(verts, vals, tris.astype(int))
    boundary = None
    if doc.get("boundary") is not None:
        boundary = _matrix(doc["boundary"], "boundary", grid.size, dim)
    for i, b in enumerate(bases):
        try:
            CoisotropicSubspace(space, b)
        except ValidationError as exc:
            raise type(exc)(str(exc), f"subspaces[{i}]") from None
    s = DiskScenario(space, grid, bases, frames, boundary, disk, tol)
    s.framed_loop()  # frames and closure
    return s


def load_scenario(doc, tol):
    """Build the in-library object for a parsed document."""
    kind = doc["kind"]
    if kind in ("disk", "framed-loop"):
        return _disk_scenario(doc, tol)
    if kind == "group-action":
        grid = _grid(_require(doc, "grid"), "grid")
        weights = _require(doc, "weights")
        if not isinstance(weights, list) or not all(isinstance(w, int) for w in weights):
            raise ValidationError("weights must be a list of integers", "weights")
        if 2 * len(weights) != _require(doc, "dimension"):
            raise DimensionMismatch("dimension must be twice the number of weights", "weights")
        loop = _complex_list(_require(doc, "loop"), "loop")
        return GroupActionScenario(tuple(weights), grid, loop, tol)
    if kind == "clutching":
        space = _space(doc)
        grid = _grid(_require(doc, "grid"), "grid")
        mats = _require(doc, "matrices")
        if not isinstance(mats, list) or len(mats) != grid.size:
            raise DimensionMismatch(f"need {grid.size} matrices", "matrices")
        m = np.array([_matrix(x, f"matrices[{i}]", space.dim, space.dim) for i, x in enumerate(mats)])
        return ClutchingScenario(SymplecticPath(grid, m, space.form, tol))
    if kind == "planar":
        space = _space(doc)
        bnds = _require(doc, "boundaries")
        if not isinstance(bnds, list) or not bnds:
            raise ValidationError("boundaries must be a non-empty list", "boundaries")
        paths = []
        for i, b in enumerate(bnds):
            g = _grid(_require(b, "grid", f"boundaries[{i}]"), f"boundaries[{i}].grid")
            mats = _require(b, "matrices", f"boundaries[{i}]")
            if not isinstance(mats, list) or len(mats) != g.size:
                raise DimensionMismatch(f"need {g.size} matrices", f"boundaries[{i}].matrices")
            m = np.array([_matrix(x, f"boundaries[{i}].matrices[{j}]", space.dim, space.dim)
                          for j, x in enumerate(mats)])
            paths.append(SymplecticPath(g, m, space.form, tol))
        return paths
    if kind == "lagrangian-loop":
        space = _space(doc)
        grid = _grid(_require(doc, "grid"), "grid")
        subs = _require(doc, "subspaces")
        if not isinstance(subs, list) or len(subs) != grid.size:
            raise DimensionMismatch(f"need {grid.size} subspaces", "subspaces")
        bases = [_matrix(b, f"subspaces[{i}]", space.dim, space.n) for i, b in enumerate(subs)]
        return grid, bases, space
    raise UnknownKind(f"unknown scenario kind '{kind}'", "kind")


def _max_step(path):
    inv = path.inverse_samples()
    eye = np.eye(path.dim)
    return max(float(np.max(np.abs(path.samples[k + 1] @ inv[k] - eye))) for k in range(len(path) - 1))


def evaluate(doc, tol=None, seed=None):
    """Evaluate a parsed scenario document; returns a ResultRecord."""
    tol = resolve_tolerances(doc) if tol is None else tol
    seed = _seed(doc, seed)
    kind = doc["kind"]
    sid = str(doc.get("id", kind))
    extras = {}
    start = time.perf_counter()
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        obj = load_scenario(doc, tol)
        if kind in ("disk", "framed-loop"):
            lift = lift_framed_loop(obj.framed_loop(), seed)
            value = maslov_path(lift, tol)
            step = _max_step(lift)
            extras["max_lift_step"] = step
            if step > 0.8 * tol.step:
                warnings.warn(f"lift step {step:.3f} is close to the bound {tol.step}", UserWarning)
            if obj.disk is not None:
                area = disk_symplectic_area(obj.disk, obj.space.form)
                extras["area"] = area
                extras["monotonicity_ratio"] = monotonicity_ratio(value, area)
        elif kind == "group-action":
            value = gaio_salamon_index(obj)
        elif kind == "clutching":
            value = float(chern_from_clutching(obj))
        elif kind == "planar":
            value = planar_surface_maslov(obj)
        else:
            grid, bases, space = obj
            value = float(lagrangian_loop_index(grid, bases, space, tol))
    elapsed = time.perf_counter() - start
    value = float(value)
    r = round(value)
    is_int = abs(value - r) <= tol.integer
    notes = []
    for w in caught:
        cat = w.category.__name__ if w.category in (NearBandWarning, NeitherRegularWarning) else "Warning"
        notes.append(f"{cat}: {w.message}")
    return ResultRecord(sid, kind, value, bool(is_int), int(r) if is_int else None, notes, elapsed,
                        tol.as_dict(), extras)


# ---------------------------------------------------------------- generation

def disk_document(s, kind="disk", sid=None, include_disk=True):
    doc = {
        "kind": kind,
        "id": sid or kind,
        "dimension": s.space.dim,
        "grid": s.grid.tolist(),
        "subspaces": [encode_matrix(b) for b in s.bases],
        "frames": [encode_matrix(f) for f in s.frames],
    }
    if not s.space.is_standard:
        doc["form"] = encode_matrix(s.space.form)
    if s.boundary is not None:
        doc["boundary"] = encode_matrix(s.boundary)
    if include_disk and s.disk is not None:
        doc["disk_map"] = {
            "vertices": encode_matrix(s.disk.vertices),
            "values": encode_matrix(s.disk.values),
            "triangles": np.asarray(s.disk.triangles).tolist(),
        }
    return doc


def group_action_document(s, sid=None):
    return {
        "kind": "group-action",
        "id": sid or "group-action",
        "dimension": 2 * s.n,
        "grid": s.grid.tolist(),
        "weights": [int(w) for w in s.weights],
        "loop": encode_complex_list(s.loop),
    }


def clutching_document(s, sid=None):
    p = s.path
    return {
        "kind": "clutching",
        "id": sid or "clutching",
        "dimension": p.dim,
        "grid": p.grid.tolist(),
        "matrices": [encode_matrix(m) for m in p.samples],
    }


def planar_document(paths, sid=None):
    return {
        "kind": "planar",
        "id": sid or "planar",
        "dimension": paths[0].dim,
        "boundaries": [{"grid": p.grid.tolist(), "matrices": [encode_matrix(m) for m in p.samples]} for p in paths],
    }


def lagrangian_document(grid, bases, dim, sid=None):
    return {
        "kind": "lagrangian-loop",
        "id": sid or "lagrangian-loop",
        "dimension": dim,
        "grid": np.asarray(grid).tolist(),
        "subspaces": [encode_matrix(b) for b in bases],
    }


def dumps(doc):
    return json.dumps(doc, sort_keys=True)
