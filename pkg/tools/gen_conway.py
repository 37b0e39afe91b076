"""Regenerate src/perikos/parith/conway.json."""

import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from perikos.parith import finite_field as ff  # noqa: E402

LIMITS = {2: 10, 3: 8, 5: 6, 7: 6, 11: 4, 13: 4}

out = Path(__file__).resolve().parents[1] / "src/perikos/parith/conway.json"
out.write_text(json.dumps({"polynomials": {}}))
ff._table.cache_clear()
table = {}
for p, mmax in LIMITS.items():
    for m in range(1, mmax + 1):
        table[f"{p},{m}"] = list(ff.conway_polynomial(p, m))
        print(p, m, table[f"{p},{m}"], flush=True)
out.write_text(json.dumps({
    "description": "Conway polynomials, coefficients lowest degree first",
    "polynomials": table,
}, indent=1, sort_keys=True) + "\n")
