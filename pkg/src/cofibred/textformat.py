"""Reader for the line-oriented description format.

::

    # comments run to the end of the line
    category NAME
      object ID
      arrow ID : SRC -> DST
      compose G . F = H          # identities are implicit, named id:OBJ
    functor NAME : C -> D
      ob A => B
      fl F => G
    cleavage NAME on FUNCTOR
      lift OBJ ARROW => ARROW    # identity lifts implicit
    diagram NAME : B
      value OBJ => CATEGORY
      map ARROW => FUNCTOR
    action NAME : GROUPCAT on CATEGORY
      gen ELEM => FUNCTOR

Headers start in column 1 and body lines are indented.  Every entity is
validated by the module that owns it; failures are reported with the
line and column of the offending token (or of the entity name).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .category import CategoryError, FiniteCategory, Functor, validate_category
from .fibration import (
    Cleavage,
    DiagramOfCategories,
    certify_fibration,
    group_action_diagram,
)


class InputError(Exception):
    """An input problem at ``line:column`` of ``source``."""
    kind = "InputError"

    def __init__(self, message: str, line: int = 0, column: int = 0, source: str = "<input>"):
        super().__init__(message)
        self.message, self.line, self.column, self.source = message, line, column, source

    def __str__(self):
        where = f"{self.source}:{self.line}:{self.column}" if self.line else self.source
        return f"{where}: {self.kind}: {self.message}"


class InputSyntaxError(InputError):
    kind = "SyntaxError"


class UnknownName(InputError):
    kind = "UnknownName"


class ValidationError(InputError):
    kind = "ValidationError"


@dataclass(frozen=True)
class Token:
    text: str
    line: int
    column: int


@dataclass
class Entity:
    kind: str
    name: Token
    header: list
    body: list = field(default_factory=list)   # list of token lists


@dataclass
class Workspace:
    categories: dict = field(default_factory=dict)
    functors: dict = field(default_factory=dict)
    cleavages: dict = field(default_factory=dict)     # name -> (functor name, Cleavage)
    diagrams: dict = field(default_factory=dict)
    actions: dict = field(default_factory=dict)
    sources: list = field(default_factory=list)

    def lookup(self, name: str):
        """Return ``(kind, value)`` for a declared name."""
        for kind in ("categories", "functors", "cleavages", "diagrams", "actions"):
            table = getattr(self, kind)
            if name in table:
                return kind, table[name]
        raise KeyError(name)

    def names(self) -> list:
        return sorted(set(self.categories) | set(self.functors) | set(self.cleavages)
                      | set(self.diagrams) | set(self.actions))


_HEADERS = {"category", "functor", "cleavage", "diagram", "action"}
_BODY = {"category": {"object", "arrow", "compose"}, "functor": {"ob", "fl"},
         "cleavage": {"lift"}, "diagram": {"value", "map"}, "action": {"gen"}}


def _tokens(text: str, lineno: int) -> list:
    text = text.split("#", 1)[0]
    return [Token(m.group(), lineno, m.start() + 1) for m in re.finditer(r"\S+", text)]


def _expect(toks: list, shape: list, source: str, what: str) -> list:
    """Match ``toks`` against ``shape`` (None = any identifier, str = literal)."""
    if len(toks) != len(shape):
        t = toks[len(shape)] if len(toks) > len(shape) else (toks[-1] if toks else None)
        raise InputSyntaxError(f"expected {what}", t.line if t else 0,
                               t.column if t else 0, source)
    out = []
    for t, s in zip(toks, shape):
        if s is not None and t.text != s:
            raise InputSyntaxError(f"expected '{s}' in {what}, got '{t.text}'", t.line, t.column, source)
        if s is None:
            out.append(t)
    return out


def split_entities(text: str, source: str = "<input>") -> list:
    entities: list = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        toks = _tokens(raw, lineno)
        if not toks:
            continue
        indented = raw[:1].isspace()
        if not indented:
            kw = toks[0]
            if kw.text not in _HEADERS:
                raise InputSyntaxError(f"unknown declaration '{kw.text}'", kw.line, kw.column, source)
            if len(toks) < 2:
                raise InputSyntaxError(f"{kw.text} needs a name", kw.line, kw.column, source)
            entities.append(Entity(kw.text, toks[1], toks))
        else:
            if not entities:
                raise InputSyntaxError("indented line outside a declaration",
                                       toks[0].line, toks[0].column, source)
            ent = entities[-1]
            if toks[0].text not in _BODY[ent.kind]:
                raise InputSyntaxError(f"'{toks[0].text}' is not allowed in a {ent.kind}",
                                       toks[0].line, toks[0].column, source)
            ent.body.append(toks)
    return entities


class _Reader:
    def __init__(self, ws: Workspace, source: str):
        self.ws, self.source = ws, source

    def err(self, cls, msg, tok: Token):
        return cls(msg, tok.line, tok.column, self.source)

    def fresh(self, tok: Token):
        if tok.text in self.ws.names():
            raise self.err(ValidationError, f"'{tok.text}' is already declared", tok)

    def category(self, tok: Token) -> FiniteCategory:
        C = self.ws.categories.get(tok.text)
        if C is None:
            raise self.err(UnknownName, f"no category named '{tok.text}'", tok)
        return C

    def functor(self, tok: Token) -> Functor:
        F = self.ws.functors.get(tok.text)
        if F is None:
            raise self.err(UnknownName, f"no functor named '{tok.text}'", tok)
        return F

    def obj(self, C: FiniteCategory, tok: Token):
        if tok.text not in C.identity:
            raise self.err(UnknownName, f"'{tok.text}' is not an object of {C.name}", tok)
        return tok.text

    def arrow(self, C: FiniteCategory, tok: Token):
        if tok.text not in C.src:
            raise self.err(UnknownName, f"'{tok.text}' is not an arrow of {C.name}", tok)
        return tok.text

    # -- entities ------------------------------------------------------------

    def read(self, ent: Entity) -> None:
        # an identical category or functor may be declared again (shared
        # definitions across files); anything else must be new
        table = {"category": self.ws.categories, "functor": self.ws.functors}.get(ent.kind)
        if table is not None and ent.name.text in table:
            old = table.pop(ent.name.text)
            try:
                getattr(self, "read_" + ent.kind)(ent)
            except InputError:
                table[ent.name.text] = old
                raise
            if table[ent.name.text] != old:
                table[ent.name.text] = old
                raise self.err(ValidationError,
                               f"'{ent.name.text}' is already declared differently", ent.name)
            table[ent.name.text] = old
            return
        self.fresh(ent.name)
        getattr(self, "read_" + ent.kind)(ent)

    def read_category(self, ent: Entity) -> None:
        _expect(ent.header, ["category", None], self.source, "category NAME")
        objects, arrows, compose = [], {}, {}
        seen: dict = {}
        for toks in ent.body:
            if toks[0].text == "object":
                (x,) = _expect(toks, ["object", None], self.source, "object ID")
                if x.text in objects:
                    raise self.err(ValidationError, f"object '{x.text}' declared twice", x)
                objects.append(x.text)
        for x in objects:
            seen[f"id:{x}"] = None
        for toks in ent.body:
            if toks[0].text == "arrow":
                f, a, b = _expect(toks, ["arrow", None, ":", None, "->", None], self.source,
                                  "arrow ID : SRC -> DST")
                for t in (a, b):
                    if t.text not in objects:
                        raise self.err(UnknownName, f"'{t.text}' is not an object of {ent.name.text}", t)
                if f.text in arrows or f.text in seen:
                    raise self.err(ValidationError, f"arrow '{f.text}' declared twice", f)
                arrows[f.text] = (a.text, b.text)
        known = set(arrows) | set(seen)
        for toks in ent.body:
            if toks[0].text == "compose":
                g, f, h = _expect(toks, ["compose", None, ".", None, "=", None], self.source,
                                  "compose G . F = H")
                for t in (g, f, h):
                    if t.text not in known:
                        raise self.err(UnknownName, f"'{t.text}' is not an arrow of {ent.name.text}", t)
                if (g.text, f.text) in compose:
                    raise self.err(ValidationError, f"composite {g.text} . {f.text} given twice", g)
                compose[(g.text, f.text)] = h.text
        try:
            C = validate_category({"objects": objects, "arrows": arrows, "compose": compose},
                                  name=ent.name.text)
        except CategoryError as exc:
            raise self.err(ValidationError, f"category {ent.name.text}: {exc}", ent.name)
        self.ws.categories[ent.name.text] = C

    def read_functor(self, ent: Entity) -> None:
        _, c, d = _expect(ent.header, ["functor", None, ":", None, "->", None], self.source,
                          "functor NAME : C -> D")
        C, D = self.category(c), self.category(d)
        ob, fl = {}, {}
        for toks in ent.body:
            if toks[0].text == "ob":
                a, b = _expect(toks, ["ob", None, "=>", None], self.source, "ob A => B")
                ob[self.obj(C, a)] = self.obj(D, b)
            else:
                f, g = _expect(toks, ["fl", None, "=>", None], self.source, "fl F => G")
                fl[self.arrow(C, f)] = self.arrow(D, g)
        try:
            F = Functor(C, D, ob, fl, name=ent.name.text)
        except (CategoryError, KeyError) as exc:
            raise self.err(ValidationError, f"functor {ent.name.text}: {exc}", ent.name)
        self.ws.functors[ent.name.text] = F

    def read_cleavage(self, ent: Entity) -> None:
        _, ftok = _expect(ent.header, ["cleavage", None, "on", None], self.source,
                          "cleavage NAME on FUNCTOR")
        p = self.functor(ftok)
        E, B = p.dom, p.cod
        cert = certify_fibration(p)
        if not cert.is_fibration:
            raise self.err(ValidationError, f"{ftok.text} is not a fibration", ftok)
        lift = {}
        for toks in ent.body:
            e, phi, f = _expect(toks, ["lift", None, None, "=>", None], self.source,
                                "lift OBJ ARROW => ARROW")
            key = (self.obj(E, e), self.arrow(B, phi))
            if key in lift:
                raise self.err(ValidationError, f"lift of ({e.text}, {phi.text}) given twice", e)
            lift[key] = self.arrow(E, f)
        for (e, phi) in cert.lift_pairs():
            if B.is_identity(phi):
                lift.setdefault((e, phi), E.identity[e])
        try:
            c = Cleavage(cert, lift, name=ent.name.text)
        except ValueError as exc:
            raise self.err(ValidationError, f"cleavage {ent.name.text}: {exc}", ent.name)
        self.ws.cleavages[ent.name.text] = (ftok.text, c)

    def read_diagram(self, ent: Entity) -> None:
        _, btok = _expect(ent.header, ["diagram", None, ":", None], self.source, "diagram NAME : B")
        B = self.category(btok)
        values, maps = {}, {}
        for toks in ent.body:
            if toks[0].text == "value":
                x, c = _expect(toks, ["value", None, "=>", None], self.source, "value OBJ => CATEGORY")
                values[self.obj(B, x)] = self.category(c)
            else:
                phi, f = _expect(toks, ["map", None, "=>", None], self.source, "map ARROW => FUNCTOR")
                maps[self.arrow(B, phi)] = self.functor(f)
        try:
            F = DiagramOfCategories(B, values, maps, name=ent.name.text)
        except (CategoryError, KeyError) as exc:
            raise self.err(ValidationError, f"diagram {ent.name.text}: {exc}", ent.name)
        self.ws.diagrams[ent.name.text] = F

    def read_action(self, ent: Entity) -> None:
        _, gtok, atok = _expect(ent.header, ["action", None, ":", None, "on", None], self.source,
                                "action NAME : GROUPCAT on CATEGORY")
        G, A = self.category(gtok), self.category(atok)
        if len(G.objects) != 1 or not _is_group(G):
            raise self.err(ValidationError, f"{gtok.text} is not a group", gtok)
        gens = {}
        for toks in ent.body:
            g, f = _expect(toks, ["gen", None, "=>", None], self.source, "gen ELEM => FUNCTOR")
            F = self.functor(f)
            if F.dom != A or F.cod != A:
                raise self.err(ValidationError, f"{f.text} is not an endofunctor of {atok.text}", f)
            gens[self.arrow(G, g)] = F
        try:
            action = _generate_action(G, A, gens)
            D = group_action_diagram(G, A, action, name=ent.name.text)
        except (CategoryError, KeyError, ValueError) as exc:
            raise self.err(ValidationError, f"action {ent.name.text}: {exc}", ent.name)
        self.ws.actions[ent.name.text] = D


def _is_group(G: FiniteCategory) -> bool:
    (x,) = G.objects
    e = G.identity[x]
    return all(any(G.comp[(g, h)] == e for h in G.arrows) for g in G.arrows)


def _generate_action(G: FiniteCategory, A: FiniteCategory, gens: dict) -> dict:
    """Extend ``gen -> automorphism`` multiplicatively to all of ``G``."""
    from .category import compose_functors, identity_functor
    (x,) = G.objects
    action = {G.identity[x]: identity_functor(A)}
    frontier = [G.identity[x]]
    while frontier:
        nxt = []
        for h in frontier:
            for g, Fg in sorted(gens.items()):
                gh = G.comp[(g, h)]
                F = compose_functors(Fg, action[h])
                if gh in action:
                    if action[gh] != F:
                        raise ValueError(f"generators do not define an action at {gh!r}")
                else:
                    action[gh] = F
                    nxt.append(gh)
        frontier = nxt
    missing = [g for g in G.arrows if g not in action]
    if missing:
        raise ValueError(f"generators do not reach {missing[0]!r}")
    return action


def parse(text: str, source: str = "<input>", ws: Workspace | None = None) -> Workspace:
    ws = ws or Workspace()
    reader = _Reader(ws, source)
    for ent in split_entities(text, source):
        reader.read(ent)
    ws.sources.append(source)
    return ws


def fixture_path(name: str) -> Path:
    """Path of a bundled fixture (``stair``, ``loop3``, ...)."""
    base = resources.files("cofibred") / "fixtures"
    p = base / f"{name}.cat"
    if not p.is_file():
        raise FileNotFoundError(f"no bundled fixture '{name}'")
    return Path(str(p))


def bundled_fixtures() -> list:
    base = resources.files("cofibred") / "fixtures"
    return sorted(p.name[:-4] for p in base.iterdir() if p.name.endswith(".cat"))


def load(paths, ws: Workspace | None = None) -> Workspace:
    """Parse files in order into one workspace; ``@name`` is a bundled fixture."""
    ws = ws or Workspace()
    for p in paths:
        try:
            path = fixture_path(p[1:]) if str(p).startswith("@") else Path(p)
        except FileNotFoundError as exc:
            raise UnknownName(f"{exc}; bundled: {', '.join(bundled_fixtures())}", 0, 0, str(p))
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise InputError(f"cannot read input: {exc.strerror}", 0, 0, str(p))
        parse(text, str(p), ws)
    return ws


# -- writing -----------------------------------------------------------------

def _label(x) -> str:
    if isinstance(x, tuple):
        return "_".join(_label(y) for y in x)
    return str(x).replace(" ", "_")


class Namer:
    """Text names for the objects and arrows of a category; identities
    become ``id:OBJ``."""

    def __init__(self, C: FiniteCategory):
        self.C = C
        self.ob = {x: _label(x) for x in C.objects}
        self.ar = {}
        for f in C.arrows:
            if C.is_identity(f):
                self.ar[f] = f"id:{self.ob[C.src[f]]}"
            else:
                self.ar[f] = _label(f)
        if len(set(self.ob.values())) != len(self.ob) or len(set(self.ar.values())) != len(self.ar):
            raise ValueError(f"labels of {C.name} are not distinct")


def dump_category(C: FiniteCategory, name: str, namer: Namer | None = None) -> str:
    n = namer or Namer(C)
    out = [f"category {name}"]
    out += [f"  object {n.ob[x]}" for x in C.objects]
    out += [f"  arrow {n.ar[f]} : {n.ob[C.src[f]]} -> {n.ob[C.dst[f]]}"
            for f in C.arrows if not C.is_identity(f)]
    for (g, f), h in sorted(C.comp.items(), key=lambda kv: (n.ar[kv[0][0]], n.ar[kv[0][1]])):
        if not (C.is_identity(g) or C.is_identity(f)):
            out.append(f"  compose {n.ar[g]} . {n.ar[f]} = {n.ar[h]}")
    return "\n".join(out) + "\n"


def dump_functor(F: Functor, name: str, dom: str, cod: str,
                 nd: Namer | None = None, nc: Namer | None = None) -> str:
    nd, nc = nd or Namer(F.dom), nc or Namer(F.cod)
    out = [f"functor {name} : {dom} -> {cod}"]
    out += [f"  ob {nd.ob[x]} => {nc.ob[F.ob_map[x]]}" for x in F.dom.objects]
    out += [f"  fl {nd.ar[f]} => {nc.ar[F.fl_map[f]]}" for f in F.dom.arrows
            if not F.dom.is_identity(f)]
    return "\n".join(out) + "\n"


def dump_cleavage(c: Cleavage, name: str, functor: str,
                  ne: Namer | None = None, nb: Namer | None = None) -> str:
    p = c.functor
    ne, nb = ne or Namer(p.dom), nb or Namer(p.cod)
    out = [f"cleavage {name} on {functor}"]
    for (e, phi), f in sorted(c.lift.items(), key=lambda kv: (ne.ob[kv[0][0]], nb.ar[kv[0][1]])):
        if not p.cod.is_identity(phi):
            out.append(f"  lift {ne.ob[e]} {nb.ar[phi]} => {ne.ar[f]}")
    return "\n".join(out) + "\n"


__all__ = ["InputError", "InputSyntaxError", "UnknownName", "ValidationError", "Workspace",
           "Namer", "bundled_fixtures", "dump_category", "dump_cleavage", "dump_functor",
           "fixture_path", "load", "parse"]
