"""The ``cofibred`` command.

    cofibred check FILE...
    cofibred nerve FILE --name CATEGORY [--cap D] [--limit N]
    cofibred fibred-nerve FILE --name FIBRATION
    cofibred cleaved-nerve FILE --name CLEAVAGE
    cofibred homology FILE --name X [--degree K] [--coeff Z|Q|F2|...]
    cofibred coeff-homology FILE --name X [--fiber-degree M]
    cofibred spectral FILE --name FIBRATION [--field F2] [--rmax R]
    cofibred verify [BATTERY...] [FILE...]

``FILE`` may be ``@name`` for a bundled fixture.  Reports are plain text
or, with ``--format structured``, one JSON document with sorted keys.
Exit status: 0 success, 1 a verification failed, 2 bad input.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings

from . import verify as V
from .category import FiniteCategory
from .corpus import FibrationFixture
from .fibration import (
    LimitExceeded,
    certify_fibration,
    count_cleavages,
    default_cleavage,
    enumerate_cleavages,
    good_map_from_cleavage,
    grothendieck,
    is_very_good,
)
from .homology.chains import (
    AbelianGroup,
    DegreeAboveGuarantee,
    homology,
    homology_over_field,
    normalized_chain_complex,
    parse_coeff,
)
from .homology.modules import coefficient_homology, constant_module, fiber_homology_module
from .homology.spectral import NotStabilized, PageInconsistency, spectral_sequence
from .homology.bicomplex import Bicomplex
from .nerves import cleaved_nerve, fibred_nerve
from .simplicial import diagonal, nerve
from .textformat import InputError, UnknownName, ValidationError, Workspace, load

COMMANDS = ("check", "nerve", "fibred-nerve", "cleaved-nerve", "homology", "coeff-homology",
            "spectral", "verify")


class Report:
    def __init__(self, command: str, cap: int):
        self.command, self.cap = command, cap
        self.lines: list = []
        self.data: dict = {}
        self.status = 0

    def line(self, text: str = "") -> None:
        self.lines.append(text)

    def fail(self) -> None:
        self.status = max(self.status, 1)

    def render(self, fmt: str) -> str:
        if fmt == "structured":
            doc = {"command": self.command, "cap": self.cap, "status": self.status,
                   "report": self.data, "lines": self.lines}
            return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False, default=str)
        return "\n".join(self.lines)


# -- subjects ----------------------------------------------------------------

_SINGULAR = {"categories": "category", "functors": "functor", "cleavages": "cleavage",
             "diagrams": "diagram", "actions": "action"}


def _pick(ws: Workspace, name: str | None, kinds: tuple) -> tuple:
    if name is not None:
        try:
            kind, value = ws.lookup(name)
        except KeyError:
            raise UnknownName(f"no entity named '{name}' (declared: {', '.join(ws.names()) or 'none'})",
                              source="--name")
        if kind not in kinds:
            raise ValidationError(f"'{name}' is a {_SINGULAR[kind]}; expected one of: "
                                  f"{', '.join(_SINGULAR[k] for k in kinds)}", source="--name")
        return kind, name, value
    found = [(k, n, v) for k in kinds for n, v in getattr(ws, k).items()]
    if len(found) != 1:
        raise ValidationError(f"--name is required ({len(found)} candidates)", source="--name")
    return found[0]


def _closed_first(ws: Workspace, functor_name: str) -> list:
    cs = [c for (f, c) in ws.cleavages.values() if f == functor_name]
    return sorted(cs, key=lambda c: not c.is_closed)


def _fibration_subject(ws: Workspace, name: str | None) -> tuple:
    """``(label, cert, cleavage)`` from a functor, cleavage, diagram or action."""
    kind, label, value = _pick(ws, name, ("functors", "cleavages", "diagrams", "actions"))
    if kind == "cleavages":
        _, c = value
        return label, c.cert, c
    if kind in ("diagrams", "actions"):
        p, c = grothendieck(value)
        return label, c.cert, c
    cert = certify_fibration(value)
    if not cert.is_fibration:
        raise ValidationError(f"functor '{label}' is not a fibration ({cert.kind})", source="--name")
    declared = _closed_first(ws, label)
    return label, cert, declared[0] if declared else default_cleavage(cert)


def _is_cyclic_group(C: FiniteCategory):
    if len(C.objects) != 1:
        return None
    (x,) = C.objects
    e = C.identity[x]
    n = len(C.arrows)
    if n < 2:
        return None
    for g in C.arrows:
        k, h = 1, g
        while h != e and k <= n:
            h, k = C.comp[(g, h)], k + 1
        if h != e:
            return None
        if k == n:
            return n
    return None


def context_from_workspace(ws: Workspace) -> V.Context:
    ctx = V.Context()
    for name, F in ws.functors.items():
        cert = certify_fibration(F)
        if cert.is_fibration:
            declared = _closed_first(ws, name)
            arrows = tuple(declared[0].arrows) if declared else None
            ctx.fibrations[name] = FibrationFixture(name, F, cleavage_arrows=arrows)
            if declared:
                ctx.cleavage_families[name] = (cert, [c for (f, c) in ws.cleavages.values() if f == name])
        ctx.functors[name] = F
    for cname, (fname, c) in ws.cleavages.items():
        if not c.is_closed:
            ctx.counterexamples[f"{fname}/{cname}"] = (c.cert, c)
    for name, D in list(ws.diagrams.items()) + list(ws.actions.items()):
        p, _ = grothendieck(D)
        ctx.fibrations[name] = FibrationFixture(name, p, diagram=D)
        ctx.diagrams[name] = D
    ctx.actions = dict(ws.actions)
    for name, C in ws.categories.items():
        n = _is_cyclic_group(C)
        if n:
            ctx.groups[name] = (n, C)
    ctx.spectral = tuple(ctx.fibrations)
    return ctx


# -- formatting --------------------------------------------------------------

def _gstr(g, p) -> str:
    if p is None:
        return str(g)
    field = "Q" if p == 0 else f"F{p}"
    return "0" if g == 0 else (field if g == 1 else f"{field}^{g}")


def _degrees(args, cap: int) -> tuple:
    """Degrees to report and those refused for lack of a guarantee."""
    want = [args.degree] if args.degree is not None else list(range(cap))
    ok = [k for k in want if k <= cap - 1]
    over = [k for k in want if k > cap - 1]
    if over and args.strict_degrees:
        raise ValidationError(f"degree {over[0]} is above the guarantee at cap {cap} "
                              f"(degrees <= {cap - 1}); use --cap {over[0] + 1}", source="--degree")
    return ok, over


def _refusal(rep: Report, label: str, k: int, cap: int) -> None:
    rep.line(f"{label}{k}: not reported, above the guarantee [guaranteed: degrees <= {cap - 1} "
             f"at cap {cap}; use --cap {k + 1} or --unguaranteed]")


def _homology_lines(rep: Report, title: str, C, cap: int, args, key: str) -> None:
    p = parse_coeff(args.coeff)
    ok, over = _degrees(args, cap)
    rep.line(title)
    out = {}
    for k in ok + (over if args.unguaranteed else []):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", DegreeAboveGuarantee)
            kk = min(k, C.top)
            g = homology(C, kk) if p is None else homology_over_field(C, kk, p)
            if k > C.top:
                g = AbelianGroup() if p is None else 0
        tag = V.guarantee(cap) if k <= cap - 1 else \
            f"[NOT guaranteed: degrees <= {cap - 1} at cap {cap}]"
        rep.line(f"  H{k} = {_gstr(g, p)}  {tag}")
        out[str(k)] = _gstr(g, p)
    if not args.unguaranteed:
        for k in over:
            _refusal(rep, "  H", k, cap)
    rep.data[key] = out


# -- commands ----------------------------------------------------------------

def cmd_check(ws: Workspace, args, rep: Report) -> None:
    for name, C in sorted(ws.categories.items()):
        rep.line(f"category {name}: {len(C.objects)} objects, {len(C.arrows)} arrows, laws hold")
        rep.data.setdefault("categories", {})[name] = {"objects": len(C.objects), "arrows": len(C.arrows)}
    for name, F in sorted(ws.functors.items()):
        cert = certify_fibration(F)
        entry = {"kind": cert.kind}
        line = f"functor {name}: {F.dom.name} -> {F.cod.name}, {cert.kind}"
        if cert.is_prefibration:
            total = count_cleavages(cert)
            entry["normal_cleavages"] = total
            try:
                cls = enumerate_cleavages(cert, limit=args.limit)
                closed = sum(c.is_closed for c in cls)
                entry["closed_cleavages"] = closed
                line += f", {total} normal cleavages ({closed} closed)"
            except LimitExceeded:
                line += f", {total} normal cleavages (more than --limit {args.limit}; not enumerated)"
        rep.line(line)
        rep.data.setdefault("functors", {})[name] = entry
    for name, (fname, c) in sorted(ws.cleavages.items()):
        s = good_map_from_cleavage(c) if c.is_normal else None
        vg = is_very_good(s, c) if s is not None else None
        rep.line(f"cleavage {name} on {fname}: normal {c.is_normal}, closed {c.is_closed}"
                 + (f", very good {vg}" if vg is not None else ""))
        rep.data.setdefault("cleavages", {})[name] = {"functor": fname, "normal": c.is_normal,
                                                      "closed": c.is_closed, "very_good": vg}
    for table, label in (("diagrams", "diagram"), ("actions", "action")):
        for name, D in sorted(getattr(ws, table).items()):
            p, c = grothendieck(D)
            rep.line(f"{label} {name}: over {D.base.name}, Grothendieck total "
                     f"{len(p.dom.objects)} objects, {len(p.dom.arrows)} arrows, "
                     f"cleavage closed {c.is_closed}")
            rep.data.setdefault(table, {})[name] = {"objects": len(p.dom.objects),
                                                    "arrows": len(p.dom.arrows)}


def cmd_nerve(ws: Workspace, args, rep: Report) -> None:
    _, name, C = _pick(ws, args.name, ("categories",))
    X = nerve(C, args.cap)
    rep.line(f"N({name}) up to level {args.cap}")
    rows = {}
    for n in range(args.cap + 1):
        nd = X.nondegenerate(n)
        rep.line(f"  level {n}: {len(X.levels[n])} simplices, {len(nd)} nondegenerate")
        rows[str(n)] = {"simplices": len(X.levels[n]), "nondegenerate": len(nd)}
        if args.limit:
            for ch in nd[:args.limit]:
                rep.line("    " + " -> ".join(str(o) for o in ch.objects)
                         + (f"  via {', '.join(str(a) for a in ch.arrows)}" if ch.arrows else ""))
    rep.data["levels"] = rows


def _bisimplicial_table(rep: Report, K, cap: int, title: str) -> None:
    rep.line(title)
    rep.line("  " + "m\\n".ljust(6) + "".join(f"{n:>10}" for n in range(cap + 1)))
    table = {}
    for m in range(cap + 1):
        cells = []
        for n in range(cap + 1):
            size = len(K.levels[(m, n)])
            nd = len(K.nondegenerate(m, n))
            cells.append(f"{size}/{nd}".rjust(10))
            table[f"{m},{n}"] = {"size": size, "nondegenerate": nd}
        rep.line("  " + str(m).ljust(6) + "".join(cells))
    rep.line("  entries: bisimplices/nondegenerate")
    rep.data["levels"] = table


def cmd_fibred_nerve(ws: Workspace, args, rep: Report) -> None:
    label, cert, _ = _fibration_subject(ws, args.name)
    K = fibred_nerve(cert, args.cap)
    _bisimplicial_table(rep, K, args.cap, f"N_f of {label}")


def cmd_cleaved_nerve(ws: Workspace, args, rep: Report) -> None:
    label, cert, c = _fibration_subject(ws, args.name)
    K = cleaved_nerve(c, args.cap)
    _bisimplicial_table(rep, K, args.cap, f"N_c of {label} (cleavage {c.name or 'default'}, "
                                          f"closed {c.is_closed})")


def cmd_homology(ws: Workspace, args, rep: Report) -> None:
    kind, label, value = _pick(ws, args.name, ("categories", "functors", "cleavages",
                                               "diagrams", "actions"))
    D = args.cap
    if kind == "categories":
        C = normalized_chain_complex(nerve(value, D))
        _homology_lines(rep, f"N({label}) with {args.coeff} coefficients", C, D, args, "nerve")
        return
    label, cert, c = _fibration_subject(ws, label)
    NE = normalized_chain_complex(nerve(cert.total, D))
    _homology_lines(rep, f"N E for {label} with {args.coeff} coefficients", NE, D, args, "NE")
    dF = normalized_chain_complex(diagonal(fibred_nerve(cert, D)))
    _homology_lines(rep, "d N_f E", dF, D, args, "dN_f")
    dC = normalized_chain_complex(diagonal(cleaved_nerve(c, D)))
    _homology_lines(rep, f"d N_c E (cleavage {c.name or 'default'}, closed {c.is_closed})",
                    dC, D, args, "dN_c")


def cmd_coeff_homology(ws: Workspace, args, rep: Report) -> None:
    kind, label, value = _pick(ws, args.name, ("categories", "functors", "cleavages",
                                               "diagrams", "actions"))
    D = args.cap
    p = parse_coeff(args.coeff)
    ok, over = _degrees(args, D)
    if kind == "categories":
        C, A, what = value, constant_module(value), "Z"
    else:
        label, cert, c = _fibration_subject(ws, label)
        m = args.fiber_degree or 0
        A = fiber_homology_module(c, m, D)
        C, what = cert.base, f"H_{m}(F)"
    top = max(ok + (over if args.unguaranteed else []), default=-1)
    if top < 0:
        groups = []
    else:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", DegreeAboveGuarantee)
            groups = coefficient_homology(C, A, max(D, top + 1), args.coeff, upto=top)
    rep.line(f"H_*({C.name or label}; {what}) over {args.coeff}")
    out = {}
    for k in ok + (over if args.unguaranteed else []):
        tag = V.guarantee(D) if k <= D - 1 else f"[NOT guaranteed: degrees <= {D - 1} at cap {D}]"
        rep.line(f"  H{k} = {_gstr(groups[k], p)}  {tag}")
        out[str(k)] = _gstr(groups[k], p)
    if not args.unguaranteed:
        for k in over:
            _refusal(rep, "  H", k, D)
    rep.data["homology"] = out


def cmd_spectral(ws: Workspace, args, rep: Report) -> None:
    label, cert, c = _fibration_subject(ws, args.name)
    D = args.cap
    coeff = args.coeff if args.coeff != "Z" else "F2"
    B = Bicomplex(fibred_nerve(cert, D))
    try:
        ss = spectral_sequence(B, coeff, max_page=args.rmax)
    except NotStabilized as exc:
        rep.line(f"{label}: NOT STABILIZED ({exc})")
        rep.fail()
        return
    except PageInconsistency as exc:
        rep.line(f"{label}: INCONSISTENT PAGES ({exc})")
        rep.fail()
        return
    top = D - 1
    if args.coeff == "Z" and args.coeff_given:
        rep.line("note: pages are computed over a field; showing F2 "
                 "(integral E² is checked by `cofibred verify spectral`)")
    rep.line(f"spectral sequence of {label} over {coeff}, filtered by the base degree n "
             f"{V.guarantee(D)}")

    def table(title, page):
        rep.line(title)
        rep.line("  " + "m\\n".ljust(6) + "".join(f"{n:>5}" for n in range(top + 1)))
        for m in range(top + 1):
            rep.line("  " + str(m).ljust(6) + "".join(
                f"{page[(m, n)]:>5}" if m + n <= top else "    ." for n in range(top + 1)))

    pages = {}
    for r in sorted(ss.pages):
        table(f"E^{r}", ss.pages[r])
        pages[str(r)] = {f"{m},{n}": v for (m, n), v in ss.pages[r].items()}
    table("E^∞", ss.einf)
    for k in range(top + 1):
        s = sum(v for (m, n), v in ss.einf.items() if m + n == k)
        rep.line(f"  total degree {k}: E^∞ sum {s}, dim H{k}(Tot) = {ss.total[k]}  {V.guarantee(D)}")
    rep.line("CONVERGED" if ss.converges() else "NOT CONVERGED")
    if not ss.converges():
        rep.fail()
    rep.data.update({"pages": pages, "einf": {f"{m},{n}": v for (m, n), v in ss.einf.items()},
                     "total": {str(k): v for k, v in ss.total.items()},
                     "converged": ss.converges(), "coeff": coeff})


def cmd_verify(args, rep: Report) -> None:
    batteries = [t for t in args.inputs if t in V.BATTERIES]
    files = [t for t in args.inputs if t not in V.BATTERIES]
    ctx = context_from_workspace(load(files)) if files else V.corpus_context()
    coeffs = (args.coeff,) if args.coeff_given else None
    cap = args.cap if args.cap_given else None
    with warnings.catch_warnings():
        if args.strict_degrees:
            warnings.simplefilter("error", DegreeAboveGuarantee)
        results = V.run(batteries, cap=cap, ctx=ctx, coeffs=coeffs)
    for r in results:
        rep.line(f"{r.status} {r.name}")
        for ln in r.lines:
            rep.line(f"  {ln}")
        rep.data[r.name] = r.as_dict()
        if not r.passed:
            rep.fail()
    passed = sum(r.passed for r in results)
    rep.line(f"{passed}/{len(results)} batteries passed")


HANDLERS = {"check": cmd_check, "nerve": cmd_nerve, "fibred-nerve": cmd_fibred_nerve,
            "cleaved-nerve": cmd_cleaved_nerve, "homology": cmd_homology,
            "coeff-homology": cmd_coeff_homology, "spectral": cmd_spectral}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cofibred", description=__doc__.split("\n\n")[0].strip(),
                                 formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("inputs", nargs="*", help="input files (@name for a bundled fixture); "
                                              "for verify also battery names")
    ap.add_argument("--name", help="entity to operate on")
    ap.add_argument("--cap", type=int, default=None, help="truncation cap D (default 4)")
    ap.add_argument("--coeff", "--field", dest="coeff", default=None,
                    help="coefficients: Z, Q, F2, F3, ... (default Z; F2 for spectral)")
    ap.add_argument("--degree", type=int, help="single homology degree to report")
    ap.add_argument("--fiber-degree", type=int, help="m in H_n(B, H_m(F)) for coeff-homology")
    ap.add_argument("--rmax", type=int, help="last spectral page to print")
    ap.add_argument("--limit", type=int, default=1000, help="enumeration bound (default 1000)")
    ap.add_argument("--format", choices=("text", "structured"), default="text")
    ap.add_argument("--strict-degrees", action="store_true",
                    help="treat a degree above the guarantee as an input error")
    ap.add_argument("--unguaranteed", action="store_true",
                    help="print degrees above the guarantee, tagged as such")
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_intermixed_args(argv)
    args.cap_given = args.cap is not None
    args.cap = 4 if args.cap is None else args.cap
    args.coeff_given = args.coeff is not None
    if args.coeff is None:
        args.coeff = "F2" if args.command == "spectral" else "Z"
    rep = Report(args.command, args.cap)
    try:
        if args.cap < 1:
            raise ValidationError("--cap must be at least 1", source="--cap")
        try:
            parse_coeff(args.coeff)
        except (ValueError, KeyError):
            raise ValidationError(f"unknown coefficients '{args.coeff}'", source="--coeff")
        if args.command == "verify":
            unknown = [t for t in args.inputs if t not in V.BATTERIES
                       and not (t.startswith("@") or "." in t or "/" in t)]
            if unknown:
                raise UnknownName(f"unknown battery '{unknown[0]}' (known: {', '.join(sorted(V.BATTERIES))})",
                                  source="verify")
            cmd_verify(args, rep)
        else:
            if not args.inputs:
                raise ValidationError("an input file is required", source=args.command)
            ws = load(args.inputs)
            HANDLERS[args.command](ws, args, rep)
    except InputError as exc:
        print(str(exc), file=sys.stderr)
        if args.format == "structured":
            print(json.dumps({"command": args.command, "status": 2, "error": {
                "kind": exc.kind, "message": exc.message, "line": exc.line, "column": exc.column,
                "source": exc.source}}, sort_keys=True, indent=2, ensure_ascii=False))
        return 2
    print(rep.render(args.format))
    return rep.status


if __name__ == "__main__":
    sys.exit(main())
