"""Acceptance criteria, one PASS/FAIL line each.

Every battery runs once against the built-in corpus; the per-criterion
tests then read its verdict and the instance counts it recorded.  Run
this file directly to get just the eleven lines.
"""
import sys

import pytest

from cofibred import verify as V

CRITERIA = [
    (1, "codiag3", "∇N_cE -> NE levelwise bijection, levels 0..3"),
    (2, "hc", "N_c(F⋊B) ≅ hc(NF) levelwise"),
    (3, "tcp", "d N_c(G⋉A) ≅ NA ×_τ NG with the d_0 twist"),
    (4, "counterexample", "LOOP3: H_1(dN_c) = Z, H_1(dN_f) = H_1(NE) = 0"),
    (5, "thm2", "k_* and (ki)_* are homology isomorphisms"),
    (6, "mastil", "μν = id, base+mast injective, μ homology iso"),
    (7, "s-sigma", "cleavage <-> good map roundtrip, very good <=> closed"),
    (8, "spectral", "E² oracle over F2 and Q, E∞ totals, integral E²"),
    (9, "homology", "p_* and u_* integral isos for trivial (homotopy) fibers"),
    (10, "group-homology", "H_*(N Z/2) = Z, Z/2, 0, Z/2 in under 5 s"),
    (11, "laws", "identities, ∂² = 0, SNF postconditions, Eilenberg-Zilber"),
]


def _extra(name: str, r: V.CheckResult) -> list:
    """Instance-count requirements beyond the battery verdict."""
    d = r.data
    instances = {k: v for k, v in d.items() if isinstance(v, dict)}
    problems = []

    def need(ok, why):
        if not ok:
            problems.append(why)

    if name == "codiag3":
        need(len(instances) >= 5, "fewer than 5 splitting fibrations")
        for must in ("STAIR", "id_[2]", "Z/2⋉CIRC"):
            need(must in instances, f"{must} missing")
        need(sum("⋉" in k or k.startswith("F") for k in instances) >= 2,
             "fewer than 2 Grothendieck constructions")
        need(all(len(v["sizes"]) == 4 for v in instances.values()), "levels 0..3 not all checked")
    elif name == "hc":
        need(len(instances) >= 3, "fewer than 3 diagrams")
        need(d["cap"] >= 3, "cap below 3")
    elif name == "tcp":
        need(len(instances) >= 2 and "Z/2⋉CIRC" in instances, "need Z/2⋉CIRC plus one more action")
        need(all(v["d0_twist"] for v in instances.values()), "d_0 twist not verified")
    elif name == "counterexample":
        (row,) = instances.values()
        need(row["H(dN_c)"][1] == "Z", "H_1(dN_c) is not Z")
        need(row["H(dN_f)"][1] == "0" and row["H(NE)"][1] == "0", "H_1 of dN_f or NE nonzero")
        need(row["i_iso"] is False, "i reported as a homology iso")
    elif name == "thm2":
        need(len(instances) >= 6, "fewer than 6 fibrations")
        for must in ("STAIR", "cod_[2]", "CIRC×[1]"):
            need(must in instances, f"{must} missing")
    elif name == "mastil":
        need(d["pairs"] >= 10, "fewer than 10 (fibration, base chain) pairs")
    elif name == "s-sigma":
        need(d["LOOP3"]["cleavages"] == 4 and d["STAIR"]["cleavages"] == 1, "wrong cleavage counts")
    elif name == "spectral":
        for fib in ("CIRC×[1]", "Z/2⋉CIRC"):
            for k in ("F2", "Q"):
                need(d[fib][k]["E2"] and d[fib][k]["converged"], f"{fib} over {k}")
            need(d[fib]["Z"]["E2"], f"{fib} integral E²")
    elif name == "homology":
        need(d["fibrations"] >= 3 and d["functors"] >= 2, "too few fibrations or functors")
    elif name == "group-homology":
        need(d["Z/2"]["homology"] == ["Z", "Z/2", "0", "Z/2"], "wrong H_*(N Z/2)")
        need(r.seconds < 5.0, f"took {r.seconds:.1f} s")
        need(d["cap"] == 4, "cap is not 4")
    elif name == "laws":
        need(d["snf"] == 200, "not 200 random SNF matrices")
        need(sum(k.startswith("hc ") for k in d) >= 3, "hc bisimplicial sets missing")
    return problems


def evaluate() -> dict:
    results = {r.name: r for r in V.run()}
    out = {}
    for num, name, label in CRITERIA:
        r = results[name]
        problems = _extra(name, r)
        ok = r.passed and not problems
        why = "" if ok else " (" + "; ".join(problems or r.lines[-1:]) + ")"
        out[num] = (ok, f"{'PASS' if ok else 'FAIL'} criterion {num:2d} [{name}] {label}"
                        f" ({r.seconds:.2f} s){why}")
    return out


@pytest.fixture(scope="module")
def verdicts():
    return evaluate()


@pytest.mark.parametrize("num", [c[0] for c in CRITERIA])
def test_criterion(verdicts, num, capsys):
    ok, line = verdicts[num]
    with capsys.disabled():
        print("\n" + line, end="")
    assert ok, line


if __name__ == "__main__":
    lines = evaluate()
    for num in sorted(lines):
        print(lines[num][1])
    sys.exit(0 if all(ok for ok, _ in lines.values()) else 1)
