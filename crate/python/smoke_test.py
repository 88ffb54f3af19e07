"""Smoke test for the invlimit Python extension.

Build and install first:
    maturin build --release -m crates/invlimit-py/Cargo.toml -o dist
    pip install dist/invlimit-*.whl
"""

import math

import invlimit


def check(cond, what):
    if not cond:
        raise SystemExit(f"FAIL: {what}")
    print(f"ok   {what}")


def main():
    m = invlimit.UnimodalMap(0.5, 1.0, 0.0, -1.0)
    check(m.case() == "Case 2", "tuple (.5, 1, 0, -1) is case 2")
    for branch in (0, 1):
        y = 0.3
        check(abs(m.eval(m.branch_inverse(branch, y)) - y) < 1e-12, f"branch {branch} inverse")

    for name, periods in [("case1", [1]), ("case2", [1, 2]), ("case3a", [1, 2]), ("case3b", [1, 2, 4])]:
        census = invlimit.UnimodalMap.preset(name).period_census()
        check(census["periods"] == periods and census["agrees"], f"{name} census {periods}")

    a, bound = invlimit.UnimodalMap.preset("case1").tail_endpoint_a(50)
    check(math.isfinite(a) and bound < 1e-12, f"case 1 ray endpoint a = {a:.6f}")

    e = invlimit.Embedding(m)
    sheet, value = e.embedded_shift("line", 0.75)
    check(sheet == "line" and abs(value - 0.5) < 1e-12, "case 2 shift 0.75 -> 0.5")
    sheet, value = e.embedded_shift("arc_inf", 0.1)
    check(sheet == "arc_inf" and abs(value - 0.4) < 1e-12, "case 2 arc involution 0.1 -> 0.4")

    p = e.decode("line", -1.3)
    check(abs(e.encode(p)[1] + 1.3) < 1e-10, f"decode/encode roundtrip via {p.code}")
    q = invlimit.shift(m, p)
    check(abs(q.x0 - m.eval(p.x0)) < 1e-12, "shift projects to f")
    check(invlimit.unshift(m, q).code == p.code, "unshift inverts shift")

    m3 = invlimit.UnimodalMap.preset("case3a")
    check(invlimit.types(m3, 4) == [".1^∞", "0.1^∞", "00.1^∞", "10.1^∞"], "case 3a enumeration starts T_0, T_1")
    check(not invlimit.admissible(invlimit.UnimodalMap.preset("case1"), "10.1^∞"), "10.1^∞ inadmissible in case 1")
    csv = invlimit.figure(m3, 5, "csv", 50)
    check(csv.startswith("figure,kind,label,index,x,y,z"), "figure 5 csv header")
    check(invlimit.figure(m3, 7, "svg", 50).lstrip().startswith("<svg"), "figure 7 svg")

    try:
        invlimit.figure(m, 7)
    except ValueError as err:
        check("3a" in str(err), "figure 7 rejects a case-2 map")
    else:
        raise SystemExit("FAIL: figure 7 accepted a case-2 map")
    print("all smoke checks passed")


if __name__ == "__main__":
    main()
