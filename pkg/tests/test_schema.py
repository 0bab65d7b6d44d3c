import json
from fractions import Fraction
from pathlib import Path

import pytest

from hochkind.errors import SchemaError
from hochkind.schema import (
    algebra_hash,
    canonical_json,
    dump_algebra,
    load_algebra,
    load_algebra_file,
    load_bimodule,
    load_twisted_module_file,
    parse_element,
)
from fixtures_algebras import corpus_algebras, lambda_e, rw
from hochkind.fields import QQ

ROOT = Path(__file__).resolve().parent.parent


def test_roundtrip_corpus_builders():
    for a in corpus_algebras():
        doc = dump_algebra(a)
        b = load_algebra(doc)
        assert b.validate().ok
        assert dump_algebra(b) == doc
        assert algebra_hash(a) == algebra_hash(b)


def test_shipped_files_match_builders():
    for a in corpus_algebras():
        path = ROOT / "corpus" / "algebras" / f"{a.label}.json"
        assert path.exists(), path
        loaded = load_algebra_file(path)
        assert algebra_hash(loaded) == algebra_hash(a)


def test_hash_ignores_label_but_not_structure():
    a = lambda_e(QQ, "one")
    b = lambda_e(QQ, "two")
    assert algebra_hash(a) == algebra_hash(b)
    doc = dump_algebra(a)
    doc["curvature"] = []
    doc["basis"][1]["degree"] = 2
    c = load_algebra(doc)
    assert algebra_hash(c) != algebra_hash(a)


def test_parse_element_grammar():
    a = rw()
    assert parse_element(a, "x") == {"x": 1}
    assert parse_element(a, "3*x - x2") == {"x": 3, "x2": 4}
    assert parse_element(a, "x + x - 2*x") == {}
    assert parse_element(a, "0") == {}
    assert parse_element(a, " 2/3*x ") == {"x": a.field.parse("2/3")}
    b = lambda_e(QQ)
    assert parse_element(b, "3/2*e - 1") == {"e": Fraction(3, 2), "1": Fraction(-1)}
    with pytest.raises(SchemaError):
        parse_element(b, "3/2*q")
    with pytest.raises(SchemaError):
        parse_element(b, "e +")
    with pytest.raises(SchemaError):
        parse_element(b, "1/0*e")


def test_noncanonical_augmentation_rejected():
    doc = dump_algebra(lambda_e(QQ))
    doc["augmentation"] = [{"name": "e", "coeff": "1"}]
    with pytest.raises(SchemaError):
        load_algebra(doc)


def test_malformed_documents():
    with pytest.raises(SchemaError):
        load_algebra([])
    with pytest.raises(SchemaError):
        load_algebra({"field": "Q"})
    with pytest.raises(SchemaError):
        load_algebra({"field": "F6", "grading": "Z", "basis": [], "unit": "1"})
    doc = dump_algebra(lambda_e(QQ))
    doc["mul"][0] = {"left": "1"}
    with pytest.raises(SchemaError):
        load_algebra(doc)


def test_twisted_module_document():
    algebra, vspace, q = load_twisted_module_file(
        ROOT / "corpus" / "modules" / "mf_x2.json")
    assert algebra.label == "rw_f5"
    assert vspace.basis == ("m0", "m1")
    assert q == {("m0", "m1"): {"x": 1}, ("m1", "m0"): {"x": 1}}


def test_bimodule_document():
    a = lambda_e(QQ)
    doc = {
        "basis": [{"name": "m", "degree": 0}],
        "diff": [],
        "left": [
            {"a": "1", "m": "m", "out": [{"name": "m", "coeff": "1"}]},
        ],
        "right": [
            {"m": "m", "b": "1", "out": [{"name": "m", "coeff": "1"}]},
        ],
    }
    mod = load_bimodule(doc, a)
    assert mod.validate().ok
    assert mod.space.dim == 1


def test_canonical_json_is_stable():
    a = rw()
    doc = dump_algebra(a)
    s1 = canonical_json(doc)
    s2 = canonical_json(json.loads(s1))
    assert s1 == s2
    assert "⊗" not in s1  # ascii-escaped output only
