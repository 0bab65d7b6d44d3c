"""Regenerate corpus/algebras/*.json from the canonical builders.

Run from the repository root:  python3 tools/gen_corpus.py
Mutation documents under corpus/mutations are hand-written and not touched.
"""

import json
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "tests"))
sys.path.insert(0, str(ROOT / "src"))

from hochkind.schema import dump_algebra  # noqa: E402
from fixtures_algebras import F5, corpus_algebras, lambda_e  # noqa: E402


def main():
    outdir = ROOT / "corpus" / "algebras"
    outdir.mkdir(parents=True, exist_ok=True)
    algebras = list(corpus_algebras())
    algebras.append(lambda_e(F5, "dual_numbers"))
    for a in algebras:
        doc = dump_algebra(a)
        path = outdir / f"{a.label}.json"
        path.write_text(json.dumps(doc, indent=2, sort_keys=True,
                                   ensure_ascii=True) + "\n")
        print("wrote", path.relative_to(ROOT))


if __name__ == "__main__":
    main()
