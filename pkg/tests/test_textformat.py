import pytest

from cofibred import corpus
from cofibred.category import is_isomorphic
from cofibred.fibration import certify_fibration, grothendieck
from cofibred.textformat import (
    InputError,
    InputSyntaxError,
    UnknownName,
    ValidationError,
    bundled_fixtures,
    dump_category,
    dump_cleavage,
    dump_functor,
    fixture_path,
    load,
    parse,
)


def test_stair_fixture():
    ws = load(["@stair"])
    assert len(ws.categories) == 2 and len(ws.functors) == 1
    p = ws.functors["STAIR"]
    assert certify_fibration(p).is_fibration


def test_loop3_cleavages():
    ws = load(["@loop3"])
    flags = {name: c.is_closed for name, (_, c) in ws.cleavages.items()}
    assert flags == {"closed1": True, "open": False, "bad": False, "closed2": True}
    _, bad = ws.cleavages["bad"]
    assert is_isomorphic(bad.total, corpus.loop3_total())


def test_all_fixtures_load_together():
    ws = load([f"@{n}" for n in bundled_fixtures()])
    assert "Z/2-on-CIRC" in ws.actions
    assert "segment" in ws.diagrams
    F = ws.actions["Z/2-on-CIRC"]
    p, c = grothendieck(F)
    assert c.is_closed
    assert fixture_path("stair").name == "stair.cat"


def test_undefined_arrow_has_location():
    text = "category C\n  object a\n  object b\n  arrow f : a -> b\n  compose f . g = f\n"
    with pytest.raises(UnknownName) as err:
        parse(text, "bad.cat")
    e = err.value
    assert (e.line, e.column) == (5, 15)
    assert str(e).startswith("bad.cat:5:15: UnknownName:")


def test_syntax_errors_have_location():
    with pytest.raises(InputSyntaxError) as err:
        parse("category C\n  object\n")
    assert err.value.line == 2
    with pytest.raises(InputSyntaxError) as err:
        parse("  object a\n")
    assert err.value.line == 1
    with pytest.raises(InputSyntaxError):
        parse("category C\n  arrow f a -> b\n")


def test_missing_composite_is_a_validation_error():
    text = ("category C\n  object 0\n  object 1\n  object 2\n"
            "  arrow a : 0 -> 1\n  arrow b : 1 -> 2\n  arrow c : 0 -> 2\n")
    with pytest.raises(ValidationError) as err:
        parse(text)
    assert err.value.line >= 1


def test_functor_law_violation():
    text = ("category A\n  object x\n  object y\n  arrow f : x -> y\n"
            "functor F : A -> A\n  ob x => x\n  ob y => y\n  fl f => id:x\n")
    with pytest.raises(ValidationError):
        parse(text)


def test_cleavage_needs_cartesian_lifts():
    text = fixture_path("stair").read_text() + "cleavage c on STAIR\n  lift 0 0_1 => 0_2\n"
    with pytest.raises(ValidationError):
        parse(text)


def test_conflicting_redeclaration():
    one = "category C\n  object a\n"
    two = "category C\n  object b\n"
    ws = parse(one)
    parse(one, ws=ws)
    with pytest.raises(ValidationError):
        parse(two, ws=ws)


def test_missing_file():
    with pytest.raises(InputError):
        load(["/nonexistent/file.cat"])


def test_roundtrip():
    cert = certify_fibration(corpus.loop3())
    c = corpus.loop3_bad_cleavage(cert)
    p = c.functor
    text = (dump_category(p.dom, "E") + dump_category(p.cod, "B")
            + dump_functor(p, "p", "E", "B") + dump_cleavage(c, "sigma", "p"))
    ws = parse(text)
    assert is_isomorphic(ws.categories["E"], p.dom)
    _, c2 = ws.cleavages["sigma"]
    assert not c2.is_closed and c2.is_normal
    text2 = (dump_category(ws.categories["E"], "E") + dump_category(ws.categories["B"], "B")
             + dump_functor(ws.functors["p"], "p", "E", "B") + dump_cleavage(c2, "sigma", "p"))
    # a second pass is a fixed point
    ws3 = parse(text2)
    _, c3 = ws3.cleavages["sigma"]
    text3 = (dump_category(ws3.categories["E"], "E") + dump_category(ws3.categories["B"], "B")
             + dump_functor(ws3.functors["p"], "p", "E", "B") + dump_cleavage(c3, "sigma", "p"))
    assert text3 == text2


def test_roundtrip_is_stable_on_text_labels():
    ws = load(["@stair"])
    C = ws.categories["[2]"]
    once = dump_category(C, "[2]")
    twice = dump_category(parse(once).categories["[2]"], "[2]")
    assert once == twice
