"""Named theorem batteries.

Each battery checks one statement exactly on a family of finite
instances and returns a :class:`CheckResult`.  Instances come from a
:class:`Context`; :func:`corpus_context` supplies the built-in corpus and
the command line builds one from parsed input files.

Batteries run one after another and the report is ordered by battery
name, so output does not depend on timing.
"""

from __future__ import annotations

import random
import time
import warnings
from dataclasses import dataclass, field
from typing import Callable

from . import corpus
from .category import (
    compose_functors,
    cyclic_group,
    fiber,
    homotopy_fiber,
    mapping_category,
)
from .fibration import (
    cleavage_from_good_map,
    enumerate_cleavages,
    good_map_from_cleavage,
    is_very_good,
)
from .homology.bicomplex import Bicomplex, eilenberg_zilber_check
from .homology.chains import (
    AbelianGroup,
    DegreeAboveGuarantee,
    induced_map_is_iso,
    normalized_chain_complex,
    simplicial_homology,
)
from .homology.snf import determinant_pm1, is_smith_form, matmul, smith
from .homology.spectral import (
    e2_oracle,
    integral_e2,
    integral_e2_oracle,
    spectral_sequence,
)
from .nerves import (
    base,
    base_slice,
    cleaved_nerve,
    cleaved_to_hc,
    cleaved_to_tcp,
    diagonal_chain,
    fibred_nerve,
    k_map,
    kbar,
    kbar_chain,
    mast,
    mu,
    nu,
)
from .simplicial import (
    SimplicialIdentityError,
    SimplicialMap,
    apply_functor,
    check_simplicial_identities,
    codiagonal,
    diagonal,
    functor_nerve_map,
    nerve,
    theta,
)

def guarantee(cap: int) -> str:
    return f"[guaranteed: degrees <= {cap - 1} at cap {cap}]"


@dataclass
class CheckResult:
    name: str
    passed: bool
    lines: list = field(default_factory=list)
    data: dict = field(default_factory=dict)
    seconds: float = 0.0

    @property
    def status(self) -> str:
        return "PASS" if self.passed else "FAIL"

    def as_dict(self) -> dict:
        return {"name": self.name, "status": self.status, "lines": list(self.lines),
                "data": self.data}


@dataclass
class Context:
    """Instances the batteries run on.

    ``max_cap`` bounds the cap per fibration name; the fibred nerve of a
    fibration with many cartesian lifts grows too fast past it.
    """
    fibrations: dict = field(default_factory=dict)          # name -> FibrationFixture
    cleavage_families: dict = field(default_factory=dict)   # name -> (cert, [Cleavage])
    counterexamples: dict = field(default_factory=dict)     # name -> (cert, Cleavage)
    diagrams: dict = field(default_factory=dict)
    actions: dict = field(default_factory=dict)
    functors: dict = field(default_factory=dict)            # for u = π∘i
    groups: dict = field(default_factory=dict)              # name -> cyclic order, category
    spectral: tuple = ()                                     # fibration names
    max_cap: dict = field(default_factory=dict)

    def cap_for(self, name: str, cap: int) -> int:
        return min(cap, self.max_cap.get(name, cap))


def corpus_context() -> Context:
    fx = corpus.fibrations()
    loop = fx["LOOP3"]
    cert = loop.cert()
    stair = fx["STAIR"]
    scert = stair.cert()
    return Context(
        fibrations=fx,
        cleavage_families={
            "LOOP3": (cert, list(enumerate_cleavages(cert))),
            "STAIR": (scert, list(enumerate_cleavages(scert))),
        },
        counterexamples={"LOOP3/Σ_bad": (cert, corpus.loop3_bad_cleavage(cert))},
        diagrams=corpus.diagrams(),
        actions={k: v for k, v in corpus.actions().items() if k != "Z/2⋉[0]"},
        functors=corpus.functors_with_trivial_homotopy_fibers(),
        groups={"Z/2": (2, cyclic_group(2)), "Z/3": (3, cyclic_group(3))},
        spectral=("CIRC×[1]", "Z/2⋉CIRC"),
        max_cap={"LOOP3": 3},
    )


# -- shared helpers ----------------------------------------------------------

def _iso_upto(f, top: int, coeff=None) -> bool:
    return all(induced_map_is_iso(f, k, coeff) for k in range(top + 1))


def _groups(X, top: int) -> list:
    return [str(simplicial_homology(X, k)) for k in range(top + 1)]


def _is_point_homology(X, top: int) -> bool:
    return all(simplicial_homology(X, k) == AbelianGroup(int(k == 0)) for k in range(top + 1))


# -- batteries ---------------------------------------------------------------

def check_codiag3(ctx: Context, cap: int) -> CheckResult:
    """``k̄: ∇N_c E -> N E`` is a simplicial levelwise bijection."""
    res = CheckResult("codiag3", True)
    for name, fx in ctx.fibrations.items():
        D = ctx.cap_for(name, cap)
        cert = fx.cert()
        c = fx.cleavage(cert)
        if not c.is_closed:
            res.lines.append(f"{name}: skipped, the cleavage is not closed")
            continue
        nc = cleaved_nerve(c, D)
        cK = codiagonal(nc)
        NE = nerve(cert.total, D)
        kb = kbar(nc, cK, NE)
        ok = kb.is_simplicial() and kb.is_levelwise_bijection(D)
        # the comparison through the diagonal: k̄∘θ = k on d(N_c E)
        dK = diagonal(nc)
        th = theta(nc, dK, cK)
        tri = all(kbar_chain(cert.total, th(n, s)) == diagonal_chain(cert.total, s)
                  for n in range(D + 1) for s in dK.levels[n])
        sizes = [len(cK.levels[n]) for n in range(D + 1)]
        res.passed &= ok and tri
        res.data[name] = {"sizes": sizes, "bijection": ok, "kbar_theta_is_k": tri}
        res.lines.append(f"{name}: ∇N_c -> NE levels 0..{D} sizes {sizes} "
                         f"{'bijective, simplicial' if ok else 'NOT a simplicial bijection'}"
                         f"{'' if tri else '; k̄∘θ != k'}")
    return res


def check_hc(ctx: Context, cap: int) -> CheckResult:
    """``N_c(F⋊B) ≅ hc(NF)`` levelwise, commuting with all operators."""
    res = CheckResult("hc", True)
    for name, F in ctx.diagrams.items():
        phi, nc, H = cleaved_to_hc(F, cap)
        try:
            phi.check()
            simplicial = True
        except SimplicialIdentityError:
            simplicial = False
        bij = phi.is_levelwise_bijection()
        total = sum(len(v) for v in nc.levels.values())
        res.passed &= simplicial and bij
        res.data[name] = {"bisimplicial": simplicial, "bijection": bij, "elements": total}
        res.lines.append(f"{name}: N_c -> hc on (m,n) <= ({cap},{cap}), {total} bisimplices, "
                         f"{'iso' if simplicial and bij else 'NOT an iso'}")
    return res


def check_tcp(ctx: Context, cap: int) -> CheckResult:
    """``d N_c(G⋉A) ≅ NA ×_τ NG`` with ``d_0(a,b) = (τ(b)·d_0 a, d_0 b)``."""
    res = CheckResult("tcp", True)
    for name, F in ctx.actions.items():
        f, dN, T = cleaved_to_tcp(F, cap)
        simplicial = f.is_simplicial()
        bij = f.is_levelwise_bijection(cap)
        # the twisting formula, evaluated through the action functors directly
        twist_ok = True
        for n in range(1, cap + 1):
            for s in dN.levels[n]:
                a, b = f(n, s)
                g = b.arrows[0]
                expected = (apply_functor(F.maps[g], _face0(a)), _face0(b))
                if f(n - 1, dN.face(n, 0, s)) != expected:
                    twist_ok = False
        ok = simplicial and bij and twist_ok
        res.passed &= ok
        sizes = [len(T.levels[n]) for n in range(cap + 1)]
        res.data[name] = {"simplicial": simplicial, "bijection": bij, "d0_twist": twist_ok,
                          "sizes": sizes}
        res.lines.append(f"{name}: dN_c -> NA×_τNG levels 0..{cap} sizes {sizes} "
                         f"{'iso' if simplicial and bij else 'NOT an iso'}, "
                         f"d_0 twist {'holds' if twist_ok else 'FAILS'}")
    return res


def _face0(ch):
    from .simplicial import Chain
    return Chain(ch.objects[1:], ch.arrows[1:])


def check_counterexample(ctx: Context, cap: int) -> CheckResult:
    """A cleavage that is not closed: ``i: N_c E -> N_f E`` is not a homology
    iso although ``d N_f E`` and ``N E`` agree."""
    res = CheckResult("counterexample", True)
    for name, (cert, c) in ctx.counterexamples.items():
        D = min(cap, 3)
        top = D - 1
        nc, nf = cleaved_nerve(c, D), fibred_nerve(cert, D)
        dc, df = diagonal(nc), diagonal(nf)
        NE = nerve(cert.total, D)
        hc_, hf, he = _groups(dc, top), _groups(df, top), _groups(NE, top)
        i_iso = _iso_upto(SimplicialMap(dc, df, lambda n, s: s), top)
        k_iso = _iso_upto(k_map(nf, df, NE), top)
        ok = (not i_iso) and k_iso and not c.is_closed
        res.passed &= ok
        res.data[name] = {"H(dN_c)": hc_, "H(dN_f)": hf, "H(NE)": he, "i_iso": i_iso,
                          "closed": c.is_closed}
        res.lines.append(f"{name}: H(dN_c) = ({', '.join(hc_)}), H(dN_f) = ({', '.join(hf)}), "
                         f"H(NE) = ({', '.join(he)}) {guarantee(D)}; "
                         f"i_* {'is' if i_iso else 'is not'} a homology iso")
    return res


def check_thm2(ctx: Context, cap: int) -> CheckResult:
    """``k_*`` and ``(k∘i)_*`` are integral homology isomorphisms."""
    res = CheckResult("thm2", True)
    for name, fx in ctx.fibrations.items():
        D = ctx.cap_for(name, cap)
        cert = fx.cert()
        c = fx.cleavage(cert)
        nf, nc = fibred_nerve(cert, D), cleaved_nerve(c, D)
        df, dc = diagonal(nf), diagonal(nc)
        NE = nerve(cert.total, D)
        k = k_map(nf, df, NE)
        ki = SimplicialMap(dc, NE, lambda n, s, E=cert.total: diagonal_chain(E, s), name="k∘i")
        a, b = _iso_upto(k, D - 1), _iso_upto(ki, D - 1)
        res.passed &= a and b
        res.data[name] = {"k": a, "ki": b, "H(NE)": _groups(NE, D - 1)}
        res.lines.append(f"{name}: k_* {'iso' if a else 'NOT iso'}, (ki)_* {'iso' if b else 'NOT iso'} "
                         f"H(NE) = ({', '.join(_groups(NE, D - 1))}) {guarantee(D)}")
    return res


def check_mastil(ctx: Context, cap: int) -> CheckResult:
    """μ∘ν = id; (base, mast) is injective on cleaved grids and bijective
    for a closed cleavage; μ is a homology iso for each fixed base."""
    res = CheckResult("mastil", True)
    pairs = 0
    for name, fx in ctx.fibrations.items():
        D = ctx.cap_for(name, cap)
        cert = fx.cert()
        c = fx.cleavage(cert)
        p = cert.functor
        nc = cleaved_nerve(c, D)
        nf = fibred_nerve(cert, D)
        NB = nerve(cert.base, D)
        fibers = {b: nerve(fiber(p, b)[0], D) for b in cert.base.objects}
        inj = bij = True
        for (m, n), grids in nc.levels.items():
            keys = {(base(p, s), mast(s)) for s in grids}
            if len(keys) != len(grids):
                inj = False
            expected = sum(len(fibers[bb.objects[0]].levels[m]) for bb in NB.levels[n])
            if len(grids) != expected:
                bij = False
        mu_nu = iso = True
        for n in range(min(D, 2) + 1):
            for bb in NB.nondegenerate(n):
                X = base_slice(nf, bb)
                Y = fibers[bb.objects[0]]
                m_ = mu(nf, bb, X, Y)
                for mm in range(D + 1):
                    for a in Y.levels[mm]:
                        if mast(nu(c, bb, a)) != a:
                            mu_nu = False
                if not _iso_upto(m_, D - 1):
                    iso = False
                pairs += 1
        ok = inj and mu_nu and iso and (bij or not c.is_closed)
        res.passed &= ok
        res.data[name] = {"mu_nu_id": mu_nu, "injective": inj, "bijective": bij,
                          "closed": c.is_closed, "mu_iso": iso}
        res.lines.append(f"{name}: μ∘ν = id {mu_nu}, (base,mast) injective {inj}, "
                         f"bijective {bij} (closed {c.is_closed}), μ_* iso {iso} {guarantee(D)}")
    res.data["pairs"] = pairs
    res.lines.append(f"μ checked on {pairs} (fibration, base chain) pairs")
    return res


def check_s_sigma(ctx: Context, cap: int) -> CheckResult:
    """Cleavage -> good map -> cleavage is the identity; very good ⇔ closed."""
    res = CheckResult("s-sigma", True)
    for name, (cert, cleavages) in ctx.cleavage_families.items():
        mc = mapping_category(cert.functor)
        rt = vg = 0
        for c in cleavages:
            s = good_map_from_cleavage(c, mc)
            back = cleavage_from_good_map(s, cert, mc)
            rt += back == c
            vg += is_very_good(s, c, mc) == c.is_closed
        ok = rt == len(cleavages) == vg
        res.passed &= ok
        closed = sum(c.is_closed for c in cleavages)
        res.data[name] = {"cleavages": len(cleavages), "roundtrip": rt, "very_good_iff_closed": vg,
                          "closed": closed}
        res.lines.append(f"{name}: {len(cleavages)} normal cleavages ({closed} closed), "
                         f"roundtrip {rt}/{len(cleavages)}, very good ⇔ closed {vg}/{len(cleavages)}")
    return res


def check_spectral(ctx: Context, cap: int, coeffs=("F2", "Q")) -> CheckResult:
    """E² against ``H_n(B, H_m(F) ⊗ k)``, E∞ against ``H(Tot ⊗ k)``, and the
    integral E² against coefficient homology."""
    res = CheckResult("spectral", True)
    for name in ctx.spectral:
        fx = ctx.fibrations[name]
        D = ctx.cap_for(name, cap)
        cert = fx.cert()
        c = fx.cleavage(cert)
        B = Bicomplex(fibred_nerve(cert, D))
        row = {}
        for k in coeffs:
            ss = spectral_sequence(B, k)
            e2 = ss.pages[2] == e2_oracle(c, D, k)
            conv = ss.converges()
            row[k] = {"E2": e2, "converged": conv, "collapse": ss.collapses_at()}
            res.passed &= e2 and conv
            res.lines.append(f"{name} over {k}: E² {'matches' if e2 else 'DIFFERS FROM'} "
                             f"H_n(B, H_m(F)⊗k), {'CONVERGED' if conv else 'NOT CONVERGED'} "
                             f"{guarantee(D)}")
        ie = integral_e2(B)
        io = integral_e2_oracle(c, D)
        ok = ie == io
        res.passed &= ok
        row["Z"] = {"E2": ok}
        res.lines.append(f"{name} over Z: E² {'matches' if ok else 'DIFFERS FROM'} "
                         f"coefficient homology {guarantee(D)}")
        res.data[name] = row
    return res


def check_homology(ctx: Context, cap: int) -> CheckResult:
    """``p_*`` for fibrations with acyclic fibers and ``u_*`` for functors with
    acyclic homotopy fibers are integral homology isomorphisms."""
    res = CheckResult("homology", True)
    top = cap - 1
    nfib = nfun = 0
    for name, fx in ctx.fibrations.items():
        p = fx.functor
        if not all(_is_point_homology(nerve(fiber(p, b)[0], cap), top) for b in p.cod.objects):
            continue
        ok = _iso_upto(functor_nerve_map(p, nerve(p.dom, cap), nerve(p.cod, cap)), top)
        nfib += 1
        res.passed &= ok
        res.data[f"p:{name}"] = ok
        res.lines.append(f"p = {name}: acyclic fibers, p_* {'iso' if ok else 'NOT iso'} {guarantee(cap)}")
    for name, u in ctx.functors.items():
        if not all(_is_point_homology(nerve(homotopy_fiber(u, b)[0], cap), top)
                   for b in u.cod.objects):
            continue
        mc = mapping_category(u)
        fact = compose_functors(mc.pi, mc.i) == u
        NA, NB, NM = nerve(u.dom, cap), nerve(u.cod, cap), nerve(mc.category, cap)
        iu = _iso_upto(functor_nerve_map(u, NA, NB), top)
        ii = _iso_upto(functor_nerve_map(mc.i, NA, NM), top)
        ip = _iso_upto(functor_nerve_map(mc.pi, NM, NB), top)
        ok = fact and iu and ii and ip
        nfun += 1
        res.passed &= ok
        res.data[f"u:{name}"] = ok
        res.lines.append(f"u = {name}: acyclic homotopy fibers, u = π∘i {fact}, i_* {ii}, π_* {ip}, "
                         f"u_* {'iso' if iu else 'NOT iso'} {guarantee(cap)}")
    res.data["fibrations"], res.data["functors"] = nfib, nfun
    return res


def cyclic_group_homology(order: int, n: int) -> str:
    """``H_n(Z/k)`` in closed form."""
    if n == 0:
        return "Z"
    return f"Z/{order}" if n % 2 else "0"


def check_group_homology(ctx: Context, cap: int) -> CheckResult:
    res = CheckResult("group-homology", True)
    for name, (order, G) in ctx.groups.items():
        X = nerve(G, cap)
        got = _groups(X, cap - 1)
        want = [cyclic_group_homology(order, n) for n in range(cap)]
        ok = got == want
        res.passed &= ok
        res.data[name] = {"homology": got, "expected": want}
        res.lines.append(f"N({name}): H = ({', '.join(got)}) "
                         f"{'as expected' if ok else 'expected (' + ', '.join(want) + ')'} "
                         f"{guarantee(cap)}")
    return res


def _random_matrix(rng: random.Random) -> list:
    r, c = rng.randint(0, 12), rng.randint(0, 12)
    return [[rng.randint(-9, 9) for _ in range(c)] for _ in range(r)]


def snf_postconditions(A: list) -> bool:
    S = smith(A)
    rows = len(A)
    cols = len(A[0]) if A else 0
    if rows == 0 or cols == 0:
        return True
    lhs = matmul(matmul(S.U, A), S.V)
    return (lhs == S.D and is_smith_form(S.D) and determinant_pm1(S.U)
            and determinant_pm1(S.V))


def check_laws(ctx: Context, cap: int, seed: int = 0) -> CheckResult:
    """Simplicial identities, ``∂² = 0``, SNF postconditions and
    Eilenberg–Zilber on every corpus bisimplicial set."""
    res = CheckResult("laws", True)
    rng = random.Random(seed)
    snf_ok = sum(snf_postconditions(_random_matrix(rng)) for _ in range(200))
    res.passed &= snf_ok == 200
    res.data["snf"] = snf_ok
    res.lines.append(f"SNF postconditions: {snf_ok}/200 random matrices")
    objects = []
    for name, fx in ctx.fibrations.items():
        D = ctx.cap_for(name, cap)
        cert = fx.cert()
        objects.append((f"N_f {name}", fibred_nerve(cert, D), D))
        objects.append((f"N_c {name}", cleaved_nerve(fx.cleavage(cert), D), D))
    for name, F in ctx.diagrams.items():
        _, _, H = cleaved_to_hc(F, min(cap, 3))
        objects.append((f"hc {name}", H, min(cap, 3)))
    bad = []
    for label, K, D in objects:
        try:
            K.check_identities()
            check_simplicial_identities(diagonal(K))
            ident = True
        except SimplicialIdentityError:
            ident = False
        B = Bicomplex(K)
        d2 = B.check_commute() and B.total_complex().check_d_squared() and \
            normalized_chain_complex(diagonal(K)).check_d_squared()
        ez = eilenberg_zilber_check(K, D - 1)["holds"]
        ok = ident and d2 and ez
        res.data[label] = {"identities": ident, "d_squared": d2, "eilenberg_zilber": ez, "cap": D}
        if not ok:
            bad.append(label)
        res.passed &= ok
    res.lines.append(f"identities, ∂² = 0, H(Tot) ≅ H(diagonal): {len(objects) - len(bad)}/"
                     f"{len(objects)} bisimplicial sets {guarantee(cap)}"
                     + (f"; failing: {', '.join(bad)}" if bad else ""))
    return res


BATTERIES: dict[str, tuple[Callable, int]] = {
    "codiag3": (check_codiag3, 3),
    "counterexample": (check_counterexample, 3),
    "group-homology": (check_group_homology, 4),
    "hc": (check_hc, 3),
    "homology": (check_homology, 4),
    "laws": (check_laws, 4),
    "mastil": (check_mastil, 3),
    "s-sigma": (check_s_sigma, 3),
    "spectral": (check_spectral, 4),
    "tcp": (check_tcp, 3),
    "thm2": (check_thm2, 4),
}


def run(names=None, cap: int | None = None, ctx: Context | None = None, **options) -> list:
    """Run the named batteries (all by default); results sorted by name."""
    ctx = ctx or corpus_context()
    names = sorted(BATTERIES) if not names else sorted(set(names))
    unknown = [n for n in names if n not in BATTERIES]
    if unknown:
        raise KeyError(f"unknown battery: {', '.join(unknown)}")
    out = []
    for name in names:
        fn, default_cap = BATTERIES[name]
        D = cap if cap is not None else default_cap
        t = time.perf_counter()
        with warnings.catch_warnings():
            warnings.simplefilter("error", DegreeAboveGuarantee)
            if name == "spectral" and options.get("coeffs"):
                r = fn(ctx, D, coeffs=options["coeffs"])
            else:
                r = fn(ctx, D)
        r.seconds = time.perf_counter() - t
        r.data["cap"] = D
        out.append(r)
    return out


__all__ = ["BATTERIES", "CheckResult", "Context", "corpus_context", "cyclic_group_homology",
           "guarantee", "run", "snf_postconditions"]
