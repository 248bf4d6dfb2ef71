import pytest
import hypothesis.strategies as st
from hypothesis import given

from conftest import diagrams
from contact_surgery.diagram import (
    EMPTY,
    DiagramError,
    DiagramParseError,
    SurgeryComponent as C,
    SurgeryDiagram,
    disjoint_union,
    extended_matrix,
    parse_diagram,
    validate,
)
from contact_surgery.standard import XI_1


def canonical(d):
    """Relabel to c0, c1, ... in component order, for equality up to ids."""
    return d.relabel({cid: f"c{k}" for k, cid in enumerate(d.ids)})


def test_validate_examples():
    assert validate(EMPTY) == []
    assert validate(SurgeryDiagram.build([C("u", -1, 0, 1)])) == []
    problems = validate(SurgeryDiagram.build([C("u", -1, 1, 1)]))
    assert len(problems) == 1 and "parity" in problems[0] and "u" in problems[0]


def test_validate_rejects_bad_sign_and_duplicates():
    assert any("not +1 or -1" in p for p in validate(SurgeryDiagram.build([C("u", -1, 0, 2)])))
    dup = SurgeryDiagram((C("u", -1, 0, 1), C("u", -2, 1, 1)))
    assert any("duplicate" in p for p in validate(dup))


def test_validate_rejects_asymmetric_linking():
    d = SurgeryDiagram.from_matrix([C("a", -1, 0, 1), C("b", -1, 0, 1)], [[0, 1], [2, 0]])
    assert any("asymmetric" in p for p in validate(d))
    with pytest.raises(DiagramError):
        extended_matrix(d)


def test_validate_rejects_unknown_and_self_linking():
    d = SurgeryDiagram.build([C("a", -1, 0, 1)], {("a", "z"): 1, ("a", "a"): 2})
    problems = validate(d)
    assert any("unknown component z" in p for p in problems)
    assert any("self-linking" in p for p in problems)


@given(diagrams())
def test_validate_accepts_generated(d):
    assert validate(d) == []


@given(diagrams(min_size=1), st.data())
def test_validate_flags_parity_breaks(d, data):
    i = data.draw(st.sampled_from(d.ids))
    c = d.component(i)
    broken = d.replace_component(c.replace(rot=c.rot + 1))
    assert [p for p in validate(broken) if "parity" in p] == [
        f"component {i}: tb + rot = {c.tb + c.rot + 1} is even (parity violation)"
    ]


def test_extended_matrix_examples():
    assert extended_matrix(EMPTY) == []
    assert extended_matrix(XI_1) == [[-1]]
    p = 5
    assert extended_matrix(SurgeryDiagram.build([C("U", 1 - p, 1, -1)])) == [[-p]]


@given(diagrams())
def test_extended_matrix_symmetric_with_framings(d):
    q = extended_matrix(d)
    for i, c in enumerate(d.components):
        assert q[i][i] == c.tb + c.sign
        for j in range(len(q)):
            assert q[i][j] == q[j][i]


def test_disjoint_union_examples():
    assert disjoint_union(EMPTY, EMPTY) == EMPTY
    two = disjoint_union(XI_1, XI_1)
    assert len(two) == 2 and extended_matrix(two) == [[-1, 0], [0, -1]]


@given(diagrams(max_size=3), diagrams(max_size=3), diagrams(max_size=3))
def test_disjoint_union_associative_with_unit(a, b, c):
    left = disjoint_union(disjoint_union(a, b), c)
    right = disjoint_union(a, disjoint_union(b, c))
    assert sorted(extended_matrix(left)) == sorted(extended_matrix(right))
    assert sorted(left.rot_vector()) == sorted(right.rot_vector())
    assert canonical(disjoint_union(a, EMPTY)) == canonical(a)
    assert canonical(disjoint_union(EMPTY, a)) == canonical(a)


@given(diagrams(max_size=3), diagrams(max_size=3))
def test_disjoint_union_is_block_diagonal(a, b):
    u = disjoint_union(a, b)
    assert len(u) == len(a) + len(b)
    assert sum(1 for _, n in u.linking) == len(a.linking) + len(b.linking)


@given(diagrams())
def test_text_round_trip(d):
    text = d.to_text()
    back = parse_diagram(text)
    assert back == d
    assert back.to_text() == text
    assert back.content_hash() == d.content_hash()


def test_parse_accepts_handwritten_document():
    d = parse_diagram(
        "components:\n"
        "  - {id: a, tb: -2, rot: -1, sign: -1}\n"
        "  - {id: b, tb: -2, rot: 1, sign: +1}\n"
        "linking:\n"
        "  - {a: b, b: a, lk: 2}\n"
    )
    assert d.lk("a", "b") == 2 and d.component("a").sign == -1


@pytest.mark.parametrize(
    "text, fragment",
    [
        ("components: [\n", "<string>:2:1"),
        ("components:\n  - {id: a, tb: -1, rot: 0, sign: 2}\n", r"components\[0\]\.sign must be \+1 or -1"),
        ("components:\n  - {id: a, tb: x, rot: 0, sign: +1}\n", "tb must be an integer"),
        ("components: []\nextra: 1\n", "unknown top-level"),
        ("components:\n  - {id: a, tb: -1, rot: 0}\n", "expected fields"),
    ],
)
def test_parse_errors_are_named(text, fragment):
    with pytest.raises(DiagramParseError, match=fragment):
        parse_diagram(text)


def test_fresh_ids_and_editing():
    d = XI_1.with_component(C("v", -1, 0, 1), {"u": 1})
    assert d.fresh_id("u") == "u1"
    assert d.lk("v", "u") == 1
    assert d.without("v") == XI_1
    with pytest.raises(DiagramError):
        d.with_component(C("u", -1, 0, 1))
