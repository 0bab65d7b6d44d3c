"""Write corpus/mutations/*.json: ten algebra documents that each load
cleanly but fail validate() on a different axiom.  Run from the repo root.
"""

import json
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent

UNIT_ROWS_QX = [
    {"left": "1", "right": "1", "out": [{"name": "1", "coeff": "1"}]},
    {"left": "1", "right": "x", "out": [{"name": "x", "coeff": "1"}]},
    {"left": "x", "right": "1", "out": [{"name": "x", "coeff": "1"}]},
]


def lambda_doc(extra_mul=None, diff=None):
    return {
        "field": "Q", "grading": "Z",
        "basis": [{"name": "1", "degree": 0}, {"name": "e", "degree": 1}],
        "unit": "1",
        "mul": [
            {"left": "1", "right": "1", "out": [{"name": "1", "coeff": "1"}]},
            {"left": "1", "right": "e", "out": [{"name": "e", "coeff": "1"}]},
            {"left": "e", "right": "1", "out": [{"name": "e", "coeff": "1"}]},
        ] + (extra_mul or []),
        "diff": diff or [],
        "curvature": [],
    }


MUTATIONS = {
    # |e·e| must be 2, not 1
    "mut01_degree_mul": lambda_doc(
        extra_mul=[{"left": "e", "right": "e",
                    "out": [{"name": "e", "coeff": "1"}]}]),
    # |d(e)| must be 2, not 1
    "mut02_degree_diff": lambda_doc(
        diff=[{"of": "e", "out": [{"name": "e", "coeff": "1"}]}]),
    # aux(x·x) = 2 but x2 is declared with auxWeight 1
    "mut03_aux_mul": {
        "field": "Q", "grading": "Z",
        "basis": [{"name": "1", "degree": 0, "auxWeight": 0},
                  {"name": "x", "degree": 0, "auxWeight": 1},
                  {"name": "x2", "degree": 0, "auxWeight": 1}],
        "unit": "1",
        "mul": [
            {"left": "1", "right": "1", "out": [{"name": "1", "coeff": "1"}]},
            {"left": "1", "right": "x", "out": [{"name": "x", "coeff": "1"}]},
            {"left": "1", "right": "x2", "out": [{"name": "x2", "coeff": "1"}]},
            {"left": "x", "right": "1", "out": [{"name": "x", "coeff": "1"}]},
            {"left": "x2", "right": "1", "out": [{"name": "x2", "coeff": "1"}]},
            {"left": "x", "right": "x", "out": [{"name": "x2", "coeff": "1"}]},
        ],
        "diff": [], "curvature": [],
    },
    # 1·x = 2x
    "mut04_unit_law": {
        "field": "Q", "grading": "Z",
        "basis": [{"name": "1", "degree": 0}, {"name": "x", "degree": 0}],
        "unit": "1",
        "mul": [
            {"left": "1", "right": "1", "out": [{"name": "1", "coeff": "1"}]},
            {"left": "1", "right": "x", "out": [{"name": "x", "coeff": "2"}]},
            {"left": "x", "right": "1", "out": [{"name": "x", "coeff": "1"}]},
        ],
        "diff": [], "curvature": [],
    },
    # the x·1 row is omitted, so x·1 = 0 by the omitted-is-zero rule
    "mut05_missing_unit_row": {
        "field": "Q", "grading": "Z",
        "basis": [{"name": "1", "degree": 0}, {"name": "x", "degree": 0}],
        "unit": "1",
        "mul": [
            {"left": "1", "right": "1", "out": [{"name": "1", "coeff": "1"}]},
            {"left": "1", "right": "x", "out": [{"name": "x", "coeff": "1"}]},
        ],
        "diff": [], "curvature": [],
    },
    # (a·a)·a = b·a = a but a·(a·a) = a·b = 0
    "mut06_assoc": {
        "field": "Q", "grading": "Z",
        "basis": [{"name": "1", "degree": 0}, {"name": "a", "degree": 0},
                  {"name": "b", "degree": 0}],
        "unit": "1",
        "mul": [
            {"left": "1", "right": "1", "out": [{"name": "1", "coeff": "1"}]},
            {"left": "1", "right": "a", "out": [{"name": "a", "coeff": "1"}]},
            {"left": "1", "right": "b", "out": [{"name": "b", "coeff": "1"}]},
            {"left": "a", "right": "1", "out": [{"name": "a", "coeff": "1"}]},
            {"left": "b", "right": "1", "out": [{"name": "b", "coeff": "1"}]},
            {"left": "a", "right": "a", "out": [{"name": "b", "coeff": "1"}]},
            {"left": "b", "right": "a", "out": [{"name": "a", "coeff": "1"}]},
        ],
        "diff": [], "curvature": [],
    },
    # d(e) = x forces d(xe) = 0 by Leibniz; the document declares d(xe) = x
    "mut07_leibniz": {
        "field": "F5", "grading": "Z2",
        "basis": [{"name": "1", "degree": 0}, {"name": "x", "degree": 0},
                  {"name": "e", "degree": 1}, {"name": "xe", "degree": 1}],
        "unit": "1",
        "mul": [
            {"left": "1", "right": "1", "out": [{"name": "1", "coeff": "1"}]},
            {"left": "1", "right": "x", "out": [{"name": "x", "coeff": "1"}]},
            {"left": "1", "right": "e", "out": [{"name": "e", "coeff": "1"}]},
            {"left": "1", "right": "xe", "out": [{"name": "xe", "coeff": "1"}]},
            {"left": "x", "right": "1", "out": [{"name": "x", "coeff": "1"}]},
            {"left": "e", "right": "1", "out": [{"name": "e", "coeff": "1"}]},
            {"left": "xe", "right": "1", "out": [{"name": "xe", "coeff": "1"}]},
            {"left": "x", "right": "e", "out": [{"name": "xe", "coeff": "1"}]},
            {"left": "e", "right": "x", "out": [{"name": "xe", "coeff": "1"}]},
        ],
        "diff": [
            {"of": "e", "out": [{"name": "x", "coeff": "1"}]},
            {"of": "xe", "out": [{"name": "x", "coeff": "1"}]},
        ],
        "curvature": [],
    },
    # d² (x) = x but [h, x] = 0 in a commutative algebra
    "mut08_curvature_law": {
        "field": "F5", "grading": "Z2",
        "basis": [{"name": "1", "degree": 0}, {"name": "x", "degree": 0},
                  {"name": "e", "degree": 1}],
        "unit": "1",
        "mul": [
            {"left": "1", "right": "1", "out": [{"name": "1", "coeff": "1"}]},
            {"left": "1", "right": "x", "out": [{"name": "x", "coeff": "1"}]},
            {"left": "1", "right": "e", "out": [{"name": "e", "coeff": "1"}]},
            {"left": "x", "right": "1", "out": [{"name": "x", "coeff": "1"}]},
            {"left": "e", "right": "1", "out": [{"name": "e", "coeff": "1"}]},
        ],
        "diff": [
            {"of": "x", "out": [{"name": "e", "coeff": "1"}]},
            {"of": "e", "out": [{"name": "x", "coeff": "1"}]},
        ],
        "curvature": [{"name": "x", "coeff": "1"}],
    },
    # d(h) = e != 0
    "mut09_curvature_closed": {
        "field": "F5", "grading": "Z2",
        "basis": [{"name": "1", "degree": 0}, {"name": "x", "degree": 0},
                  {"name": "e", "degree": 1}],
        "unit": "1",
        "mul": [
            {"left": "1", "right": "1", "out": [{"name": "1", "coeff": "1"}]},
            {"left": "1", "right": "x", "out": [{"name": "x", "coeff": "1"}]},
            {"left": "1", "right": "e", "out": [{"name": "e", "coeff": "1"}]},
            {"left": "x", "right": "1", "out": [{"name": "x", "coeff": "1"}]},
            {"left": "e", "right": "1", "out": [{"name": "e", "coeff": "1"}]},
        ],
        "diff": [{"of": "x", "out": [{"name": "e", "coeff": "1"}]}],
        "curvature": [{"name": "x", "coeff": "1"}],
    },
    # ε(x·x) = ε(1) = 1, so the canonical augmentation is not multiplicative
    "mut10_augmentation_mul": {
        "field": "Q", "grading": "Z",
        "basis": [{"name": "1", "degree": 0}, {"name": "x", "degree": 0}],
        "unit": "1",
        "mul": UNIT_ROWS_QX + [
            {"left": "x", "right": "x", "out": [{"name": "1", "coeff": "1"}]},
        ],
        "diff": [], "curvature": [],
        "augmentation": [{"name": "1", "coeff": "1"}],
    },
}


def main():
    outdir = ROOT / "corpus" / "mutations"
    outdir.mkdir(parents=True, exist_ok=True)
    for name, doc in MUTATIONS.items():
        doc = dict(doc)
        doc["label"] = name
        path = outdir / f"{name}.json"
        path.write_text(json.dumps(doc, indent=2, sort_keys=True,
                                   ensure_ascii=True) + "\n")
        print("wrote", path.relative_to(ROOT))


if __name__ == "__main__":
    sys.exit(main())
