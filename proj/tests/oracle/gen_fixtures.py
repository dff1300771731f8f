"""Generates tests/fixtures/curve_oracle.txt.

Before writing anything, the oracle is checked against published local data
(Cremona tables / LMFDB) for a set of standard curves.  The fixture rows are
only emitted if every anchor matches, so the fixture is pinned to an
implementation that reproduces the published record.

Fixture line format (exact integers, comma separated):
    a1,a2,a3,a4,a6,delta_min,conductor,p:kodaira:f:v,p:kodaira:f:v,...
"""

import os
import sys

sys.path.insert(0, os.path.dirname(__file__))
from tate_oracle import Curve, global_data  # noqa: E402

# (label, ainvs, delta_min, conductor, locals) from published curve tables.
ANCHORS = [
    ("11a3", (0, -1, 1, 0, 0), -11, 11, [(11, "I1", 1, 1)]),
    ("11a1", (0, -1, 1, -10, -20), -161051, 11, [(11, "I5", 1, 5)]),
    ("32a", (0, 0, 0, -1, 0), 64, 32, [(2, "III", 5, 6)]),
    ("32a scaled by 2", (0, 0, 0, -16, 0), 64, 32, [(2, "III", 5, 6)]),
    ("36a", (0, 0, 0, 0, 1), -432, 36, [(2, "IV", 2, 4), (3, "III", 2, 3)]),
    ("37a", (0, 0, 1, -1, 0), 37, 37, [(37, "I1", 1, 1)]),
    ("27a", (0, 0, 1, 0, -7), -19683, 27, [(3, "IV*", 3, 9)]),
    ("49a", (1, -1, 0, -2, -1), -343, 49, [(7, "III", 2, 3)]),
    ("389a", (0, 1, 1, -2, 0), 389, 389, [(389, "I1", 1, 1)]),
    ("5077a", (0, 0, 1, -7, 6), 5077, 5077, [(5077, "I1", 1, 1)]),
    ("11a3 scaled by 2", (0, -4, 8, 0, 0), -11, 11, [(11, "I1", 1, 1)]),
    ("37a scaled by 3", (0, 0, 27, -81, 0), 37, 37, [(37, "I1", 1, 1)]),
]

# quadratic family for f = x^2 + 1 (delta = -4):  y^2 = x^3 + 12x + 16n
# cubic family for f = (x)^3 + 1 (a,b,c = 1,0,1): y^2 = x^3 + 3nx + 2
FIXTURE_CURVES = [
    (0, -1, 1, 0, 0),
    (0, 0, 0, -1, 0),
    (0, 0, 0, 0, 1),
    (0, 0, 0, -16, 0),
    (0, 0, 1, -1, 0),
    (0, 1, 1, -2, 0),
    (0, 0, 1, 0, -7),
    (1, -1, 0, -2, -1),
    (0, -1, 1, -10, -20),
    (0, 0, 0, 12, 16),   # quadratic family fiber n = 1
    (0, 0, 0, 12, 32),   # n = 2
    (0, 0, 0, 12, 48),   # n = 3
    (0, 0, 0, 3, 2),     # cubic family fiber n = 1
    (0, 0, 0, 6, 2),     # n = 2
    (0, 0, 0, 9, 2),     # n = 3
]


def check_anchors():
    for label, ainvs, dmin, cond, locs in ANCHORS:
        got_dmin, got_cond, got_locs = global_data(Curve(*ainvs))
        ok = got_dmin == dmin and got_cond == cond and got_locs == locs
        status = "ok" if ok else "MISMATCH"
        print(f"  anchor {label:18s} {status}")
        if not ok:
            print(f"    expected dmin={dmin} N={cond} locals={locs}")
            print(f"    got      dmin={got_dmin} N={got_cond} locals={got_locs}")
            raise SystemExit(1)


def main():
    print("checking oracle anchors against published curve data:")
    check_anchors()

    out_path = os.path.join(os.path.dirname(__file__), os.pardir,
                            "fixtures", "curve_oracle.txt")
    out_path = os.path.normpath(out_path)
    os.makedirs(os.path.dirname(out_path), exist_ok=True)
    with open(out_path, "w") as fh:
        fh.write("# a1,a2,a3,a4,a6,delta_min,conductor,p:kodaira:f:v,...\n")
        for ainvs in FIXTURE_CURVES:
            dmin, cond, locs = global_data(Curve(*ainvs))
            fields = [str(x) for x in ainvs] + [str(dmin), str(cond)]
            fields += ["%d:%s:%d:%d" % loc for loc in locs]
            fh.write(",".join(fields) + "\n")
            print("  wrote", ainvs, "->", dmin, cond, locs)
    print("fixture written to", out_path)


if __name__ == "__main__":
    main()
