"""JSON matroid documents: load, validate, normalise, serialise, build.

A document is a construction-tree node (``{"type": ...}``) that may also
carry top-level ``subset``, ``matching``, ``name``, ``description`` and
``version`` keys.  Rational matrix entries are integers or "p/q" strings.
"""
import json
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources

import jsonschema

from . import constructions as cons
from .count import count_matroid
from .errors import DomainError, MatroidError
from .graphs import Multigraph

SCHEMA_VERSION = 1


class ParseError(MatroidError):
    def __init__(self, message, line=None, column=None):
        super().__init__(message)
        self.line, self.column = line, column


class SchemaError(MatroidError):
    pass


def load_schema(name="matroid"):
    text = resources.files("mkit").joinpath(f"schema/v1/{name}.schema.json").read_text()
    return json.loads(text)


def _validator(name):
    schema = load_schema(name)
    return jsonschema.Draft202012Validator(schema)


def validate(obj, name="matroid"):
    errors = list(_validator(name).iter_errors(obj))
    # a failing subschema drops its annotations, so unevaluatedProperties fires as
    # a side effect; report the underlying error when there is one
    primary = [e for e in errors if e.validator != "unevaluatedProperties"] or errors
    e = jsonschema.exceptions.best_match(primary)
    if e is not None:
        where = "/".join(str(p) for p in e.absolute_path) or "<root>"
        raise SchemaError(f"schema error at {where}: {e.message}")


def _rational(x, p):
    if p is not None:
        v = Fraction(x)
        if v.denominator % p == 0:
            raise DomainError(f"{x!r} has no value mod {p}")
        return v.numerator * pow(v.denominator, -1, p) % p
    v = Fraction(x)
    return v.numerator if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


_CHILD_KEYS = {"dual": ("of",), "restrict": ("of",), "two_sum": ("left", "right"),
               "parallel_connection": ("left", "right")}
_META_KEYS = ("subset", "matching", "name", "description", "version")


@dataclass(frozen=True)
class MatroidSpec:
    """A normalised construction-tree node; children are MatroidSpecs."""
    type: str
    params: tuple  # sorted (key, value) pairs, values JSON-like and hashable

    @property
    def fields(self):
        return dict(self.params)

    @classmethod
    def from_json(cls, obj):
        kind = obj["type"]
        out = {}
        for key, value in obj.items():
            if key == "type" or key in _META_KEYS:
                continue
            if key in _CHILD_KEYS.get(kind, ()):
                out[key] = cls.from_json(value)
            elif kind == "direct_sum" and key == "parts":
                out[key] = tuple(cls.from_json(v) for v in value)
            elif key == "graph":
                out[key] = Multigraph.from_json(value)
            else:
                out[key] = _freeze(value)
        if kind == "linear":
            p = out.get("p")
            out["matrix"] = tuple(tuple(_rational(x, p) for x in row) for row in out["matrix"])
        if kind == "count":
            out.setdefault("ambient", "graph")
        if kind in ("two_sum", "parallel_connection"):
            out.setdefault("route", "auto")
        return cls(kind, tuple(sorted(out.items())))

    def to_json(self):
        out = {"type": self.type}
        for key, value in self.params:
            if isinstance(value, MatroidSpec):
                out[key] = value.to_json()
            elif key == "parts":
                out[key] = [v.to_json() for v in value]
            elif isinstance(value, Multigraph):
                out[key] = value.to_json()
            else:
                out[key] = _thaw(value)
        return out

    def build(self):
        f = self.fields
        labels = list(f["labels"]) if "labels" in f else None
        kind = self.type
        if kind == "uniform":
            return cons.uniform(f["rank"], f["size"], labels)
        if kind == "linear":
            return cons.linear(matrix=f["matrix"], labels=labels, p=f.get("p"))
        if kind == "graphic":
            return cons.graphic(f["graph"], labels)
        if kind == "count":
            return count_matroid((f["a"], f["b"]), f["graph"], labels, ambient=f["ambient"])
        if kind == "circuits":
            return cons.explicit_circuits(list(f["ground"]), [list(c) for c in f["circuits"]])
        if kind == "dual":
            return f["of"].build().dual()
        if kind == "restrict":
            return f["of"].build().restrict(list(f["to"]))
        if kind == "direct_sum":
            return cons.direct_sum([p.build() for p in f["parts"]])
        if kind == "two_sum":
            return cons.two_sum(f["left"].build(), f["right"].build(), f["element"], f["route"])
        if kind == "parallel_connection":
            return cons.parallel_connection(f["left"].build(), f["right"].build(), f["element"], f["route"])
        raise DomainError(f"unknown matroid type {kind!r}")


def _freeze(value):
    if isinstance(value, list):
        return tuple(_freeze(v) for v in value)
    return value


def _thaw(value):
    if isinstance(value, tuple):
        return [_thaw(v) for v in value]
    return value


@dataclass(frozen=True)
class Document:
    matroid: MatroidSpec
    subset: tuple = None
    matching: tuple = None  # (k, flats)
    name: str = None
    description: str = None

    @classmethod
    def from_json(cls, obj):
        validate(obj)
        matching = None
        if "matching" in obj:
            matching = (obj["matching"]["k"], tuple(tuple(f) for f in obj["matching"]["flats"]))
        subset = tuple(obj["subset"]) if "subset" in obj else None
        return cls(MatroidSpec.from_json(obj), subset, matching, obj.get("name"), obj.get("description"))

    def to_json(self):
        out = {"version": SCHEMA_VERSION}
        if self.name is not None:
            out["name"] = self.name
        if self.description is not None:
            out["description"] = self.description
        out.update(self.matroid.to_json())
        if self.subset is not None:
            out["subset"] = list(self.subset)
        if self.matching is not None:
            out["matching"] = {"k": self.matching[0], "flats": [list(f) for f in self.matching[1]]}
        return out

    def dumps(self):
        return json.dumps(self.to_json(), indent=2, sort_keys=True) + "\n"

    def build(self):
        m = self.matroid.build()
        for label in self.subset or ():
            m.index(label)
        return m


def parse_document(text, source="<input>"):
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{source}:{exc.lineno}:{exc.colno}: {exc.msg}", exc.lineno, exc.colno) from None
    if not isinstance(obj, dict):
        raise SchemaError("document must be a JSON object")
    return Document.from_json(obj)


def load_document(path):
    with open(path, encoding="utf-8") as fh:
        return parse_document(fh.read(), str(path))
