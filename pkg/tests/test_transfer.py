import pytest

from oruga.construction import Apply, Source, Token, equal_up_to_renaming, root_id
from oruga.dsl import load_files
from oruga.errors import NotAssumable, UnboundToken, UnknownType
from oruga.transfer import (
    SearchLimits,
    apply_schema_backward,
    composition_to_constructions,
    composition_valid,
    discharge_by_assumption,
    init_state,
    obligations_balanced,
    search,
)

from conftest import FLAGSHIP_FILES
from oracles import results_isomorphic
from support import DATA_CORPORA, as_result, data_corpus, run_both, unique

DISJ = SearchLimits(assumable={"disj"}, max_results=50)


@pytest.fixture(scope="module")
def flagship():
    doc = load_files(FLAGSHIP_FILES)
    spaces = (doc.space("arith"), doc.space("dotDiagrams"))
    return doc, doc.construction("sum123").construction, doc.schemas_between("arith", "dotDiagrams"), spaces


def _arr(i, t="arr"):
    return Source(Token(i, t))


HAND_TARGET = Apply(Token("x", "arr"), "join", (
    Apply(Token("y", "arr"), "join", (_arr("one", "1arr"), _arr("two", "2arr"))),
    _arr("three", "3arr"),
))


def test_init_state(flagship):
    _, src, _, (_, dots) = flagship
    s = init_state(src, "rep", ["t"], "arr", dots)
    (goal,) = s.open_goals
    assert goal.source == (Token("t", "1plus2plus3"),) and goal.target == ("v0",)
    assert s.composition.constructions == (Source(Token("v0", "arr")),)
    with pytest.raises(UnboundToken):
        init_state(src, "rep", ["zz"], "arr", dots)
    with pytest.raises(UnknownType):
        init_state(src, "rep", ["t"], "nope", dots)


def test_apply_plus_join(flagship):
    doc, src, _, spaces = flagship
    s0 = init_state(src, "rep", ["t"], "arr", spaces[1])
    assert apply_schema_backward(s0, 0, doc.schema("oneRep"), spaces) is None
    s1 = apply_schema_backward(s0, 0, doc.schema("plusJoin"), spaces)
    assert [(g.relation, [t.id for t in g.source], list(g.target)) for g in s1.open_goals] == [
        ("rep", ["s"], ["a_1"]),
        ("rep", ["c"], ["b_1"]),
        ("disj", [], ["a_1", "b_1"]),
    ]
    assert s1.composition.constructions == (
        Apply(Token("v0", "arr"), "join", (_arr("a_1"), _arr("b_1"))),
    )
    assert obligations_balanced(s1) and composition_valid(s1.composition, spaces[1])
    # a rep goal for the numeral 3 is closed by threeRep and refines b_1
    s2 = apply_schema_backward(s1, 1, doc.schema("threeRep"), spaces)
    assert s2.composition.tokens["b_1"] == Token("b_1", "3arr")
    assert len(s2.open_goals) == 2
    with pytest.raises(NotAssumable):
        discharge_by_assumption(s2, 0, DISJ)
    s3 = discharge_by_assumption(s2, 1, DISJ)
    assert [g.relation for g in s3.assumptions] == ["disj"]
    assert obligations_balanced(s3)


def test_flagship(flagship):
    _, src, schemas, spaces = flagship
    out = search(src, ("rep", ["t"], "arr"), schemas, spaces, DISJ)
    assert len(out) == 1 and not out.limit_hit
    (c,) = composition_to_constructions(out[0])
    assert root_id(c) == "v0"
    assert equal_up_to_renaming(c, HAND_TARGET) is not None
    assert [g.relation for g in out[0].assumptions] == ["disj", "disj"]
    assert out[0].derivation.depth <= 4


def test_gauss_pair(gauss_doc):
    src = gauss_doc.construction("gauss").construction
    spaces = (gauss_doc.space("arithG"), gauss_doc.space("dotDiagrams"))
    schemas = gauss_doc.schemas_between("arithG", "dotDiagrams")
    out = search(src, ("rep", ["g"], "dotDiag"), schemas, spaces, DISJ)
    assert len(out) >= 1
    roots = [root_id(c) for c in composition_to_constructions(out[0])]
    assert roots.count("v0") >= 2
    single = SearchLimits(assumable={"disj"}, single_construction=True)
    assert len(search(src, ("rep", ["g"], "dotDiag"), schemas, spaces, single)) == 0


def test_limits(flagship):
    _, src, schemas, spaces = flagship
    goal = ("rep", ["t"], "arr")
    shallow = search(src, goal, schemas, spaces, SearchLimits(max_depth=2, assumable={"disj"}))
    assert len(shallow) == 0 and "depth" in shallow.limits_hit
    starved = search(src, goal, schemas, spaces, SearchLimits(max_expansions=2, assumable={"disj"}))
    assert len(starved) == 0 and starved.limits_hit == {"expansions"}
    # without disj assumable nothing closes
    assert len(search(src, goal, schemas, spaces, SearchLimits())) == 0
    s_src, s_schemas, s_spaces = data_corpus("swap")
    capped = search(s_src, ("rep", ["s"], "arr"), s_schemas, s_spaces,
                    SearchLimits(max_results=1, assumable={"disj"}))
    assert len(capped) == 1 and "results" in capped.limits_hit
    with pytest.raises(ValueError):
        SearchLimits(max_depth=0)


def test_determinism(flagship):
    _, src, schemas, spaces = flagship
    runs = [search(src, ("rep", ["t"], "arr"), schemas, spaces, DISJ) for _ in range(3)]
    assert len({repr([r.state for r in run]) for run in runs}) == 1


@pytest.mark.parametrize("name", list(DATA_CORPORA) + ["flagship"])
def test_complete_against_enumerator(name, flagship):
    if name == "flagship":
        _, src, schemas, spaces = flagship
        expected = 1
    else:
        src, schemas, spaces = data_corpus(name)
        expected = DATA_CORPORA[name]
    engine, brute, rec = run_both(src, schemas, spaces)
    brute = unique(brute)
    assert len(engine) == len(brute) == expected
    for r in engine:
        assert sum(results_isomorphic(*as_result(r.state), *as_result(b)) for b in brute) == 1
    if expected:
        assert rec.steps > 0


@pytest.mark.parametrize("name", list(DATA_CORPORA))
def test_results_are_closed_and_valid(name):
    src, schemas, spaces = data_corpus(name)
    out = search(src, ("rep", [root_id(src)], "arr"), schemas, spaces, DISJ)
    for r in out:
        assert not r.state.open_goals
        assert composition_valid(r.composition, spaces[1])
        assert obligations_balanced(r.state)
        assert all(g.relation == "disj" for g in r.assumptions)
