"""Dataset files: one JSON document per complex-with-extras.

Layout (optional blocks may be absent, never null):

    {
      "schema_version": 1,
      "pearl":   {"name", "N", "generators", "diff_terms", "unit"?, "betti_hint"?},
      "twist":   [{"x", "y", "mu_bar", "count"}, ...],
      "product": {"terms": [{"z", "x", "y", "mu_bar", "count"}, ...], "unit"?},
      "module_action": {"ambient_classes": [{"id", "degree"}, ...],
                        "action_terms": [{"z", "a", "g", "mu_bar", "count"}, ...]},
      "expectations": {"qh_dims"?, "euler_class"?, "expect_gamma_vanishes"?}
    }

`save` writes a canonical form (fixed key order, two-space indent, trailing
newline), so load(save(x)) == x and saved files are byte-stable.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .bundle import TwistTerm
from .complexes import DiffTerm, Generator, PearlData
from .errors import SchemaError
from .products import ActionTerm, AmbientClass, ModuleActionData, ProductData, ProductTerm

SCHEMA_VERSION = 1
CORPUS_ENV = "ENGINE_CORPUS_DIR"

BUNDLED = [
    "clifford_torus_1",
    "clifford_torus_2",
    "rp2",
    "rp3",
    "hopf",
    "trivial_t2",
    "split_sphere",
]


@dataclass
class Expectations:
    qh_dims: list[int] | None = None
    euler_class: str | None = None
    expect_gamma_vanishes: bool | None = None


@dataclass
class DatasetFile:
    pearl: PearlData
    twist: list[TwistTerm] | None = None
    product: ProductData | None = None
    module_action: ModuleActionData | None = None
    expectations: Expectations | None = None
    schema_version: int = SCHEMA_VERSION

    @property
    def name(self) -> str:
        return self.pearl.name


# ---------------------------------------------------------------------------
# shape helpers
# ---------------------------------------------------------------------------


def _need(obj: dict, key: str, kind, path: str):
    if key not in obj:
        raise SchemaError(f"{path}.{key}", "missing required key")
    return _typed(obj[key], kind, f"{path}.{key}")


def _typed(value, kind, path: str):
    if kind is int and isinstance(value, bool):
        raise SchemaError(path, "expected an integer, got a boolean")
    if not isinstance(value, kind):
        raise SchemaError(path, f"expected {kind.__name__}, got {type(value).__name__}")
    return value


def _opt(obj: dict, key: str, kind, path: str):
    if key not in obj:
        return None
    return _typed(obj[key], kind, f"{path}.{key}")


def _int_list(value, path: str) -> list[int]:
    _typed(value, list, path)
    return [_typed(v, int, f"{path}[{i}]") for i, v in enumerate(value)]


def _str_list(value, path: str) -> list[str]:
    _typed(value, list, path)
    return [_typed(v, str, f"{path}[{i}]") for i, v in enumerate(value)]


def _known_keys(obj: dict, allowed: set[str], path: str) -> None:
    for key in obj:
        if key not in allowed:
            raise SchemaError(f"{path}.{key}", "unknown key")


# ---------------------------------------------------------------------------
# from / to plain dictionaries
# ---------------------------------------------------------------------------


def _parse_pearl(obj, path: str) -> PearlData:
    _typed(obj, dict, path)
    _known_keys(obj, {"name", "N", "generators", "diff_terms", "unit", "betti_hint"}, path)
    name = _need(obj, "name", str, path)
    n = _need(obj, "N", int, path)
    gens = []
    for i, g in enumerate(_need(obj, "generators", list, path)):
        gp = f"{path}.generators[{i}]"
        _typed(g, dict, gp)
        _known_keys(g, {"id", "index"}, gp)
        gens.append(Generator(_need(g, "id", str, gp), _need(g, "index", int, gp)))
    terms = []
    for i, t in enumerate(_need(obj, "diff_terms", list, path)):
        tp = f"{path}.diff_terms[{i}]"
        _typed(t, dict, tp)
        _known_keys(t, {"x", "y", "mu_bar", "count"}, tp)
        terms.append(
            DiffTerm(
                _need(t, "x", str, tp),
                _need(t, "y", str, tp),
                _need(t, "mu_bar", int, tp),
                _need(t, "count", int, tp),
            )
        )
    unit = obj.get("unit")
    if unit is not None:
        unit = _str_list(unit, f"{path}.unit")
    betti = obj.get("betti_hint")
    if betti is not None:
        betti = _int_list(betti, f"{path}.betti_hint")
    return PearlData(name, n, gens, terms, unit, betti)


def _parse_twist(obj, path: str) -> list[TwistTerm]:
    _typed(obj, list, path)
    out = []
    for i, t in enumerate(obj):
        tp = f"{path}[{i}]"
        _typed(t, dict, tp)
        _known_keys(t, {"x", "y", "mu_bar", "count"}, tp)
        out.append(
            TwistTerm(
                _need(t, "x", str, tp),
                _need(t, "y", str, tp),
                _need(t, "mu_bar", int, tp),
                _need(t, "count", int, tp),
            )
        )
    return out


def _parse_product(obj, path: str) -> ProductData:
    _typed(obj, dict, path)
    _known_keys(obj, {"terms", "unit"}, path)
    terms = []
    for i, t in enumerate(_need(obj, "terms", list, path)):
        tp = f"{path}.terms[{i}]"
        _typed(t, dict, tp)
        _known_keys(t, {"z", "x", "y", "mu_bar", "count"}, tp)
        terms.append(
            ProductTerm(
                _need(t, "z", str, tp),
                _need(t, "x", str, tp),
                _need(t, "y", str, tp),
                _need(t, "mu_bar", int, tp),
                _need(t, "count", int, tp),
            )
        )
    unit = obj.get("unit")
    if unit is not None:
        unit = _str_list(unit, f"{path}.unit")
    return ProductData(terms, unit)


def _parse_action(obj, path: str) -> ModuleActionData:
    _typed(obj, dict, path)
    _known_keys(obj, {"ambient_classes", "action_terms"}, path)
    classes = []
    for i, a in enumerate(_need(obj, "ambient_classes", list, path)):
        ap = f"{path}.ambient_classes[{i}]"
        _typed(a, dict, ap)
        _known_keys(a, {"id", "degree"}, ap)
        classes.append(AmbientClass(_need(a, "id", str, ap), _need(a, "degree", int, ap)))
    terms = []
    for i, t in enumerate(_need(obj, "action_terms", list, path)):
        tp = f"{path}.action_terms[{i}]"
        _typed(t, dict, tp)
        _known_keys(t, {"z", "a", "g", "mu_bar", "count"}, tp)
        terms.append(
            ActionTerm(
                _need(t, "z", str, tp),
                _need(t, "a", str, tp),
                _need(t, "g", str, tp),
                _need(t, "mu_bar", int, tp),
                _need(t, "count", int, tp),
            )
        )
    return ModuleActionData(classes, terms)


def _parse_expectations(obj, path: str) -> Expectations:
    _typed(obj, dict, path)
    _known_keys(obj, {"qh_dims", "euler_class", "expect_gamma_vanishes"}, path)
    qh = obj.get("qh_dims")
    if qh is not None:
        qh = _int_list(qh, f"{path}.qh_dims")
    euler = _opt(obj, "euler_class", str, path)
    gamma = None
    if "expect_gamma_vanishes" in obj:
        gamma = _typed(obj["expect_gamma_vanishes"], bool, f"{path}.expect_gamma_vanishes")
    return Expectations(qh, euler, gamma)


def from_dict(doc) -> DatasetFile:
    _typed(doc, dict, "$")
    _known_keys(
        doc,
        {"schema_version", "pearl", "twist", "product", "module_action", "expectations"},
        "$",
    )
    version = _need(doc, "schema_version", int, "$")
    if version != SCHEMA_VERSION:
        raise SchemaError("$.schema_version", f"unsupported version {version}")
    pearl = _parse_pearl(_need(doc, "pearl", dict, "$"), "$.pearl")
    pearl.validate()
    twist = _parse_twist(doc["twist"], "$.twist") if "twist" in doc else None
    product = _parse_product(doc["product"], "$.product") if "product" in doc else None
    action = (
        _parse_action(doc["module_action"], "$.module_action")
        if "module_action" in doc
        else None
    )
    expect = (
        _parse_expectations(doc["expectations"], "$.expectations")
        if "expectations" in doc
        else None
    )
    return DatasetFile(pearl, twist, product, action, expect, version)


def to_dict(ds: DatasetFile) -> dict:
    pearl: dict = {
        "name": ds.pearl.name,
        "N": ds.pearl.N,
        "generators": [{"id": g.id, "index": g.index} for g in ds.pearl.generators],
        "diff_terms": [
            {"x": t.x, "y": t.y, "mu_bar": t.mu_bar, "count": t.count}
            for t in ds.pearl.diff_terms
        ],
    }
    if ds.pearl.unit is not None:
        pearl["unit"] = list(ds.pearl.unit)
    if ds.pearl.betti_hint is not None:
        pearl["betti_hint"] = list(ds.pearl.betti_hint)
    doc: dict = {"schema_version": ds.schema_version, "pearl": pearl}
    if ds.twist is not None:
        doc["twist"] = [
            {"x": t.x, "y": t.y, "mu_bar": t.mu_bar, "count": t.count} for t in ds.twist
        ]
    if ds.product is not None:
        prod: dict = {
            "terms": [
                {"z": t.z, "x": t.x, "y": t.y, "mu_bar": t.mu_bar, "count": t.count}
                for t in ds.product.terms
            ]
        }
        if ds.product.unit is not None:
            prod["unit"] = list(ds.product.unit)
        doc["product"] = prod
    if ds.module_action is not None:
        doc["module_action"] = {
            "ambient_classes": [
                {"id": a.id, "degree": a.degree} for a in ds.module_action.ambient_classes
            ],
            "action_terms": [
                {"z": t.z, "a": t.a, "g": t.g, "mu_bar": t.mu_bar, "count": t.count}
                for t in ds.module_action.action_terms
            ],
        }
    if ds.expectations is not None:
        exp: dict = {}
        if ds.expectations.qh_dims is not None:
            exp["qh_dims"] = list(ds.expectations.qh_dims)
        if ds.expectations.euler_class is not None:
            exp["euler_class"] = ds.expectations.euler_class
        if ds.expectations.expect_gamma_vanishes is not None:
            exp["expect_gamma_vanishes"] = ds.expectations.expect_gamma_vanishes
        doc["expectations"] = exp
    return doc


# ---------------------------------------------------------------------------
# files
# ---------------------------------------------------------------------------


def loads(text: str) -> DatasetFile:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError("$", f"not valid JSON: {exc}") from exc
    return from_dict(doc)


def dumps(ds: DatasetFile) -> str:
    return json.dumps(to_dict(ds), indent=2) + "\n"


def load(path: str | Path) -> DatasetFile:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise SchemaError(str(p), f"cannot read file: {exc}") from exc
    return loads(text)


def save(ds: DatasetFile, path: str | Path) -> None:
    Path(path).write_text(dumps(ds))


def corpus_dir() -> Path:
    env = os.environ.get(CORPUS_ENV)
    if env:
        return Path(env)
    return Path(resources.files("pearlgysin") / "datasets")


def bundled_path(name: str) -> Path:
    stem = name[:-5] if name.endswith(".json") else name
    return corpus_dir() / f"{stem}.json"


def load_bundled(name: str) -> DatasetFile:
    return load(bundled_path(name))
