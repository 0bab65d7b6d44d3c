"""JSON documents for algebras, twisted modules, and bimodules; the CLI
element-expression grammar; canonical byte-stable dumps and hashing.

Document shape for an algebra:

    {"field": "Q" | "F<p>", "grading": "Z" | "Z2",
     "basis": [{"name", "degree", "auxWeight"?}, ...], "unit": "<name>",
     "mul": [{"left", "right", "out": [{"name", "coeff"}]}, ...],
     "diff": [{"of", "out": [...]}, ...], "curvature": [{"name", "coeff"}],
     "augmentation"?: [{"name", "coeff"}]}

Coefficients are strings ("2", "-3/4"); omitted products and differentials
are zero, so the unit rows must be written out.  The only supported
augmentation is the canonical one dual to the unit; any other splitting is
a change of basis away and is rejected rather than silently re-based.
"""

from __future__ import annotations

import hashlib
import json
import re
from pathlib import Path

from .errors import SchemaError
from .fields import field_from_string
from .graded import CurvedAlgebra, CurvedModule, GradedSpace, mode_from_string

__all__ = [
    "load_algebra",
    "load_algebra_file",
    "dump_algebra",
    "canonical_json",
    "algebra_hash",
    "parse_element",
    "load_twisted_module_doc",
    "load_twisted_module_file",
    "load_bimodule",
    "load_bimodule_file",
]

_TERM = re.compile(r"[+-]?[^+-]+")


def parse_element(algebra, text):
    """Parse "3/2*e - x" style expressions over the algebra's basis names."""
    s = text.replace(" ", "")
    if s in ("", "0"):
        return {}
    field = algebra.field
    out = {}
    pos = 0
    for m in _TERM.finditer(s):
        if m.start() != pos:
            raise SchemaError(f"cannot parse element expression {text!r}")
        pos = m.end()
        term = m.group(0)
        sign = field.one
        if term.startswith("+"):
            term = term[1:]
        elif term.startswith("-"):
            term = term[1:]
            sign = field.neg(field.one)
        if not term:
            raise SchemaError(f"dangling sign in element expression {text!r}")
        if "*" in term:
            coeff_str, name = term.split("*", 1)
            try:
                coeff = field.parse(coeff_str)
            except (ValueError, ZeroDivisionError):
                raise SchemaError(f"bad coefficient {coeff_str!r} in {text!r}")
        else:
            coeff, name = field.one, term
        if name not in algebra.space:
            raise SchemaError(f"unknown basis name {name!r} in {text!r}")
        acc = field.add(out.get(name, field.zero), field.mul(sign, coeff))
        if field.is_zero(acc):
            out.pop(name, None)
        else:
            out[name] = acc
    if pos != len(s):
        raise SchemaError(f"cannot parse element expression {text!r}")
    return out


def _parse_out(field, items, what):
    el = {}
    for item in items:
        try:
            name = item["name"]
            coeff = field.parse(item["coeff"])
        except (KeyError, ValueError, TypeError, ZeroDivisionError):
            raise SchemaError(f"malformed {what} entry {item!r}")
        if not field.is_zero(coeff):
            el[name] = field.add(el.get(name, field.zero), coeff) \
                if name in el else coeff
    return el


def load_algebra(doc, label=None):
    if not isinstance(doc, dict):
        raise SchemaError("algebra document must be a JSON object")
    try:
        field = field_from_string(doc["field"])
        mode = mode_from_string(doc["grading"])
        basis_items = doc["basis"]
        unit = doc["unit"]
    except KeyError as e:
        raise SchemaError(f"algebra document missing field {e.args[0]!r}")

    names, degree = [], {}
    aux = {} if any("auxWeight" in b for b in basis_items) else None
    for item in basis_items:
        try:
            nm = item["name"]
            degree[nm] = int(item["degree"])
        except (KeyError, TypeError, ValueError):
            raise SchemaError(f"malformed basis entry {item!r}")
        names.append(nm)
        if aux is not None:
            aux[nm] = int(item.get("auxWeight", 0))
    space = GradedSpace(names, degree, aux)

    mul = {}
    for row in doc.get("mul", []):
        try:
            key = (row["left"], row["right"])
        except KeyError:
            raise SchemaError(f"malformed mul entry {row!r}")
        mul[key] = _parse_out(field, row.get("out", []), "mul")
    diff = {}
    for row in doc.get("diff", []):
        try:
            key = row["of"]
        except KeyError:
            raise SchemaError(f"malformed diff entry {row!r}")
        diff[key] = _parse_out(field, row.get("out", []), "diff")
    curvature = _parse_out(field, doc.get("curvature", []), "curvature")

    augmented = False
    if "augmentation" in doc:
        eps = _parse_out(field, doc["augmentation"], "augmentation")
        if eps != {unit: field.one}:
            raise SchemaError(
                "only the canonical augmentation (coefficient 1 on the unit, "
                "0 elsewhere) is supported; change basis to make the "
                "splitting canonical"
            )
        augmented = True

    return CurvedAlgebra(field, mode, space, unit, mul, diff, curvature,
                         augmented=augmented,
                         label=label or doc.get("label"))


def load_algebra_file(path):
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as e:
        raise SchemaError(f"cannot read algebra document {path}: {e}")
    return load_algebra(doc, label=doc.get("label") or path.stem)


def _dump_out(field, el):
    return [{"name": n, "coeff": field.format(el[n])} for n in sorted(el)]


def dump_algebra(a):
    field = a.field
    doc = {
        "field": field.name,
        "grading": a.mode.kind,
        "basis": [
            {"name": n, "degree": a.space.deg(n),
             **({"auxWeight": a.space.aux_of(n)} if a.space.aux is not None else {})}
            for n in a.space.basis
        ],
        "unit": a.unit,
        "mul": [
            {"left": x, "right": y, "out": _dump_out(field, out)}
            for (x, y), out in sorted(a.mul_table.items())
        ],
        "diff": [
            {"of": x, "out": _dump_out(field, out)}
            for x, out in sorted(a.diff_table.items())
        ],
        "curvature": _dump_out(field, a.curvature),
    }
    if a.augmented:
        doc["augmentation"] = [{"name": a.unit, "coeff": "1"}]
    if a.label:
        doc["label"] = a.label
    return doc


def canonical_json(obj):
    return json.dumps(obj, sort_keys=True, separators=(",", ":"),
                      ensure_ascii=True)


def algebra_hash(a):
    doc = dump_algebra(a)
    doc.pop("label", None)
    return hashlib.sha256(canonical_json(doc).encode("ascii")).hexdigest()


def load_twisted_module_doc(doc, algebra=None, base_dir=None):
    """Returns (algebra, generator GradedSpace, q as {(row, col): element}).

    The "algebra" field may be an inline document or a path relative to
    base_dir; an explicitly supplied algebra overrides it.
    """
    if not isinstance(doc, dict):
        raise SchemaError("twisted module document must be a JSON object")
    if algebra is None:
        ref = doc.get("algebra")
        if isinstance(ref, dict):
            algebra = load_algebra(ref)
        elif isinstance(ref, str):
            path = Path(ref)
            if not path.is_absolute() and base_dir is not None:
                path = Path(base_dir) / path
            algebra = load_algebra_file(path)
        else:
            raise SchemaError("twisted module document needs an algebra")

    names, degree = [], {}
    gens = doc.get("generators", [])
    aux = {} if any("auxWeight" in g for g in gens) else None
    for item in gens:
        try:
            nm = item["name"]
            degree[nm] = int(item["degree"])
        except (KeyError, TypeError, ValueError):
            raise SchemaError(f"malformed generator entry {item!r}")
        names.append(nm)
        if aux is not None:
            aux[nm] = int(item.get("auxWeight", 0))
    vspace = GradedSpace(names, degree, aux)

    q = {}
    for item in doc.get("q", []):
        try:
            row, col, expr = item["row"], item["col"], item["coeff"]
        except KeyError:
            raise SchemaError(f"malformed q entry {item!r}")
        if row not in vspace or col not in vspace:
            raise SchemaError(f"q entry names unknown generator: {item!r}")
        el = parse_element(algebra, expr)
        if el:
            q[(row, col)] = el
    return algebra, vspace, q


def load_twisted_module_file(path, algebra=None):
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as e:
        raise SchemaError(f"cannot read twisted module document {path}: {e}")
    return load_twisted_module_doc(doc, algebra=algebra, base_dir=path.parent)


def load_bimodule(doc, algebra):
    """Bimodule over (algebra, algebra) from a document with "basis",
    "diff", "left" ({a, m, out}) and "right" ({m, b, out}) tables."""
    if not isinstance(doc, dict):
        raise SchemaError("bimodule document must be a JSON object")
    field = algebra.field
    names, degree = [], {}
    basis_items = doc.get("basis", [])
    aux = {} if any("auxWeight" in b for b in basis_items) else None
    for item in basis_items:
        try:
            nm = item["name"]
            degree[nm] = int(item["degree"])
        except (KeyError, TypeError, ValueError):
            raise SchemaError(f"malformed basis entry {item!r}")
        names.append(nm)
        if aux is not None:
            aux[nm] = int(item.get("auxWeight", 0))
    space = GradedSpace(names, degree, aux)

    diff = {}
    for row in doc.get("diff", []):
        diff[row.get("of")] = _parse_out(field, row.get("out", []), "diff")
    left = {}
    for row in doc.get("left", []):
        try:
            key = (row["a"], row["m"])
        except KeyError:
            raise SchemaError(f"malformed left action entry {row!r}")
        left[key] = _parse_out(field, row.get("out", []), "left action")
    right = {}
    for row in doc.get("right", []):
        try:
            key = (row["m"], row["b"])
        except KeyError:
            raise SchemaError(f"malformed right action entry {row!r}")
        right[key] = _parse_out(field, row.get("out", []), "right action")

    return CurvedModule(algebra, space, CurvedModule.BIMODULE, diff,
                        left_action=left, right_action=right,
                        right_algebra=algebra, label=doc.get("label"))


def load_bimodule_file(path, algebra):
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as e:
        raise SchemaError(f"cannot read bimodule document {path}: {e}")
    return load_bimodule(doc, algebra)
