#!/usr/bin/env python3
"""Smoke test for the severi_py extension module.

Builds nothing itself: run `cargo build -p severi-py` (or --release) first,
then `python3 python/smoke_test.py`. The script locates the compiled cdylib
under target/, copies it next to a temp dir as severi_py.so, imports it, and
exercises the main types and operations.
"""

import json
import pathlib
import shutil
import sys
import tempfile

ROOT = pathlib.Path(__file__).resolve().parent.parent


def locate_extension():
    candidates = []
    for profile in ("release", "debug"):
        so = ROOT / "target" / profile / "libseveri_py.so"
        if so.exists():
            candidates.append(so)
    if not candidates:
        sys.exit("libseveri_py.so not found; run `cargo build -p severi-py` first")
    return max(candidates, key=lambda p: p.stat().st_mtime)


def import_module():
    so = locate_extension()
    tmp = pathlib.Path(tempfile.mkdtemp(prefix="severi_py_"))
    shutil.copy2(so, tmp / "severi_py.so")
    sys.path.insert(0, str(tmp))
    import severi_py

    return severi_py


def main():
    sp = import_module()
    checks = 0

    def check(name, cond):
        nonlocal checks
        if not cond:
            sys.exit(f"FAIL: {name}")
        checks += 1
        print(f"  ok: {name}")

    f101 = sp.Field("101")
    check("field order", f101.order == 101)
    fq = sp.Field("Q")
    check("rationals have no order", fq.order is None)

    # counting and genus formulas
    check("monomial count (4,6) = 84", sp.monomial_count(4, 6) == 84)
    check("p_a(6H on quintic) = 106", sp.pa_of_multiple(5, 6) == 106)
    check("h0(O_S(6H)) = 80", sp.h0_of_multiple(5, 6) == 80)

    # bounds
    b = json.loads(sp.bound_json("surface_p3", d=5, n=6))
    check("surface_p3 bound 30", b["bound_value"] == "30" and b["strict"])
    b = json.loads(sp.bound_json("quintic_odd", p="7"))
    check("quintic odd bound 45", b["bound_value"] == "45")
    b = json.loads(sp.bound_json("gln_swapped", d=7, n=5))
    check("swapped bound is exact rational", b["bound_value"] == "175/4")

    # instability analyzer
    r = json.loads(sp.instability_json("6", 5, 29))
    check("instability contradiction", r["contradiction"] is True)
    r = json.loads(sp.instability_json("6", 5, 30))
    check("equality case x = 15", r["equality_case"]["x"] == "15")
    r = json.loads(sp.instability_json("7", 5, 44, ns_cyclic=True))
    check("quantized odd contradiction", r["quantized"] and r["contradiction"])

    # Koszul oracle and the rank engine agree on a grid CI
    h0, cond, s = sp.koszul_ci(2, 2, 2, 2)
    check("koszul CI(2,2,2) at t=2", (h0, cond, s) == (3, 7, 1))
    pts = sp.grid_ci(2, 2, 2, f101, seed=1)
    check("grid CI has 8 points", len(pts) == 8)
    rep = json.loads(pts.conditions(2))
    check("8 points impose 7 conditions", rep["rank"] == 7 and rep["superabundance"] == 1)
    socle = json.loads(sp.socle_json(pts, 2, 2, 2))
    check("socle pattern", socle["ok"] is True)

    # the m = 3 sharp-example witness: CI(5,3,2), s = 1 at t = 6
    pts532 = sp.grid_ci(5, 3, 2, f101, seed=7)
    check("CI(5,3,2) has 30 points", len(pts532) == 30)
    rep = json.loads(pts532.conditions(6))
    check("30 nodes impose 29 conditions on sextics", rep["rank"] == 29)

    # polynomials: parse, evaluate, differentiate, eliminate
    f31 = sp.Field("31")
    f = sp.Poly.parse("x0*x3 - x1*x2", f31)
    check("poly degree", f.degree == 2)
    check("poly eval", f.evaluate(["1", "1", "1", "1"]) == "0")
    q5 = sp.Poly.parse("x4^2 - x0*x1", fq, nvars=5)
    l5 = sp.Poly.parse("x4 - x2", fq, nvars=5)
    res = q5.resultant(l5, 4)
    check("resultant eliminates x4", res.nvars == 4 and res.degree == 2)

    # singular points of a curve on a surface, and their classification:
    # this G doubles a line of the quadric, so its points are genuinely
    # degenerate (non-reduced), not nodes
    g = sp.Poly.parse("x2*x3", f31)
    sing = sp.singular_points(f, g)
    check("doubled line has 32 rational singular points", len(sing) == 32)
    first = sing.to_text().splitlines()[0]
    check("doubled-line point is degenerate", sp.node_classify(f, g, first) == "degenerate")
    # a transverse tangent-plane section gives an honest node instead
    g2 = sp.Poly.parse("x0", f31)
    sing2 = sp.singular_points(f, g2)
    check("tangent section has one singular point", len(sing2) == 1)
    check(
        "tangency point is a node",
        sp.node_classify(f, g2, sing2.to_text().strip()) == "node",
    )

    # severi / gln reports on a nodal record
    quintic = sp.Poly.parse("x0^5 + x1^5 + x2^5 + x3^5", f31)
    plane_pair = sp.Poly.parse("x0*x1", f31)
    nodes = sp.singular_points(quintic, plane_pair)
    check("Fermat quintic meets x0=x1=0 in rational nodes", len(nodes) >= 1)
    sev = json.loads(sp.severi_json(quintic, plane_pair, nodes))
    check("severi report keys", sev["d"] == 5 and sev["n"] == 2 and sev["h1"] >= 0)
    gln = json.loads(sp.gln_json(quintic, plane_pair, nodes))
    check("gln test degree n+d-5", gln["test_degree"] == 2)

    # plane Severi identity and obstruction dimension counts
    r = json.loads(sp.plane_severi_json(3, 1))
    check("plane severi dim 8", r["dim"] == 8)
    o = json.loads(sp.obstruction_dims_json(3, "even"))
    check("obstruction counts m=3", o["severi_lower_bound"] == 49 and o["general_escapes"])

    # constructor pipeline (small field: partial evidence is expected)
    record, report = sp.build_example("even", 3, sp.Field("11"), seed=1)
    rep = json.loads(report)
    check("example record embeds report", "report:" in record)
    check(
        "verification is honest",
        rep["status"] in ("partial", "inconclusive", "complete", "degenerate"),
    )
    check("expected delta 30", rep["expected_delta"] == 30)

    print(f"severi_py smoke test: {checks} checks passed")


if __name__ == "__main__":
    main()
