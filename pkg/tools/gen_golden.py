"""Regenerate tests/golden/ from the independent dense oracles.

The golden data deliberately comes from tests/oracle_dense.py, not from the
package, so engine regressions cannot rewrite their own expectations.
"""

import json
import os
import sys

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
sys.path.insert(0, os.path.join(ROOT, "tests"))

from oracle_dense import oracle_mf_end  # noqa: E402


def main():
    outdir = os.path.join(ROOT, "tests", "golden")
    os.makedirs(outdir, exist_ok=True)

    dims, coh = oracle_mf_end()
    doc = {
        "label": "mf_x2_end",
        "mode": "Z2",
        "dims": {str(k): v for k, v in sorted(dims.items())},
        "cohomology": {str(k): v for k, v in sorted(coh.items())},
    }
    path = os.path.join(outdir, "mf_end.json")
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(f"wrote {path}")


if __name__ == "__main__":
    main()
