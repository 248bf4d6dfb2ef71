import json
import random

import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from contact_surgery.diagram import EMPTY, SurgeryComponent as C, SurgeryDiagram, disjoint_union
from contact_surgery.explorer import (
    CertificateError,
    Family,
    PathCertificate,
    build_subgraph,
    classify,
    darboux_generators,
    ot_ladder,
    read_path_bundle,
    verify_detour,
    verify_link_theorem,
    verify_ot_distance_bound,
    write_bundle,
)
from contact_surgery.generators import link_theorem_instance
from contact_surgery.invariants import PreconditionError, d3
from contact_surgery.moves import add_meridian, detour_insert
from contact_surgery.standard import XI_0, XI_1, XI_MINUS_1


# --- classify ---------------------------------------------------------------


def test_classify_examples():
    k = classify(EMPTY)
    assert k.family is Family.TIGHT_S3 and k.d3 == 0
    k = classify(XI_1)
    assert k.family is Family.OT_S3 and k.d3 == 1 and k.ot_certificate.k == 1
    k = classify(detour_insert(EMPTY, 5))
    assert k.family is Family.RHS_GENERIC and k.torsion == (5,)


def test_classify_stored_spheres_and_mirrors():
    assert classify(XI_0).family is Family.OT_S3 and classify(XI_0).d3 == 0
    assert classify(XI_MINUS_1).d3 == -1
    mirror = SurgeryDiagram.build([C("z", -2, -1, 1)])
    assert classify(mirror).family is Family.OT_S3


def test_classify_reduces_standard_blocks():
    pair = SurgeryDiagram.build([C("a", -1, 0, 1), C("b", -1, 0, -1)], {("a", "b"): -1})
    assert classify(pair).family is Family.TIGHT_S3
    capped = detour_insert(EMPTY, 4)
    capped = add_meridian(capped, "U", -1, 0, 1)
    assert classify(capped).family is Family.TIGHT_S3
    k = classify(disjoint_union(capped, XI_1))
    assert k.family is Family.OT_S3 and k.ot_certificate.reductions


def test_classify_sees_through_lemma42():
    d = add_meridian(SurgeryDiagram.build([C("N", -1, 0, -1)]), "N", -2, 1, 1)
    k = classify(d)
    assert k.family is Family.OT_S3 and k.ot_certificate.reductions == ("lemma42(N,Nm)",)


def test_classify_avdek_witness():
    d = add_meridian(SurgeryDiagram.build([C("K", -5, 2, 1)]), "K", -1, 0, 1)
    k = classify(d)
    assert k.family is Family.OT_S3 and k.ot_certificate.kind == "avdek"


def test_undefined_d3_is_generic():
    k = classify(SurgeryDiagram.build([C("u", -1, 0, 1)]))
    assert k.family is Family.RHS_GENERIC and k.d3 is None and k.free_rank == 1
    assert k.label == "RHS_GENERIC:undefined:Z"


def test_tight_only_for_empty_reduction():
    rng = random.Random(0)
    for _ in range(200):
        d, comp, lk = link_theorem_instance(rng)
        k = classify(d)
        if k.family is Family.TIGHT_S3:
            assert k.torsion == () and k.d3 == 0
        if k.family is Family.OT_S3:
            assert k.torsion == () and k.free_rank == 0 and k.d3.denominator == 1
            assert k.ot_certificate is not None


def test_key_equality_ignores_certificate_trail():
    a = classify(XI_1)
    b = classify(disjoint_union(XI_0, XI_1))
    assert a == b and hash(a) == hash(b)
    assert a.ot_certificate != b.ot_certificate


# --- ladder -----------------------------------------------------------------


def test_ladder_examples():
    p = ot_ladder(0, 3)
    p.check()
    assert len(p) == 3 and p.end_key.d3 == 3 and p.start == XI_0
    assert len(ot_ladder(2, 2)) == 0
    p = ot_ladder(-2, 2)
    assert [k.d3 for k in p.keys()] == [-2, -1, 0, 1, 2]
    with pytest.raises(PreconditionError):
        ot_ladder(1, 0)


def test_ladder_edges_point_downhill_and_reverse():
    p = ot_ladder(0, 2)
    for e in p.edges:
        assert e.sign == 1 and e.arrow == (e.to_key, e.from_key)
    back = p.reversed()
    back.check()
    assert [e.sign for e in back.edges] == [-1, -1]
    assert [k.d3 for k in back.keys()] == [2, 1, 0]
    assert back.edges[0].arrow == (back.edges[0].from_key, back.edges[0].to_key)


def test_tampered_path_fails_check():
    p = ot_ladder(0, 2)
    broken = PathCertificate(XI_1, p.edges)
    with pytest.raises(CertificateError):
        broken.check()


# --- link theorem -----------------------------------------------------------


def test_link_theorem_examples():
    p = verify_link_theorem(EMPTY, C("N", -2, 1, 1))
    assert len(p) == 1 and p.end_key == classify(XI_1)
    p = verify_link_theorem(EMPTY, C("N", -1, 0, -1))
    assert len(p) == 2 and p.end_key == classify(XI_1)
    assert p.edges[0].rewrite[0].kind == "lemma42_move"
    p = verify_link_theorem(XI_1, C("N", -2, -1, 1))
    assert len(p) == 1 and p.end_key.d3 == 2


@settings(max_examples=40)
@given(st.integers(0, 2**32 - 1))
def test_link_theorem_length_at_most_two(seed):
    base, comp, lk = link_theorem_instance(random.Random(seed))
    p = verify_link_theorem(base, comp, lk)
    p.check()
    assert len(p) == (1 if comp.sign > 0 else 2)
    target = base.with_component(XI_1.components[0].replace(id=base.fresh_id("u")))
    assert p.end_key == classify(target)


# --- detour -----------------------------------------------------------------


def test_detour_examples():
    path = ot_ladder(0, 2)
    xi1 = classify(XI_1)
    out = verify_detour(path, {xi1}, 2)
    out.check()
    assert len(out) == 4 and len(out.keys()) == 5
    assert xi1 not in out.interior_keys()
    assert (out.start_key, out.end_key) == (path.start_key, path.end_key)
    assert all(k.torsion == (2,) for k in out.interior_keys())
    assert len(verify_detour(path, set(), 3)) == len(path) + 2


def test_detour_guards():
    path = ot_ladder(0, 2)
    with pytest.raises(PreconditionError, match="endpoint"):
        verify_detour(path, {path.end_key}, 2)
    clash = classify(detour_insert(path.start, 2))
    with pytest.raises(PreconditionError, match="increase p"):
        verify_detour(path, {clash}, 2)
    assert clash not in verify_detour(path, {clash}, 3).interior_keys()


def test_detour_replays_rewrites():
    path = verify_link_theorem(XI_1, C("N", -1, 0, -1), {"u": 1})
    out = verify_detour(path, set(), 3)
    out.check()
    assert len(out) == len(path) + 2
    assert any(e.rewrite for e in out.edges)


# --- OT distance ------------------------------------------------------------


def test_ot_distance_examples():
    out = verify_ot_distance_bound(ot_ladder(1, 3))
    out.check()
    assert len(out) == 4
    assert all(k.ot_certificate is not None for k in out.interior_keys())
    loop = verify_ot_distance_bound(PathCertificate(XI_1))
    assert len(loop) == 2 and loop.start_key == loop.end_key == classify(XI_1)
    with pytest.raises(PreconditionError):
        verify_ot_distance_bound(PathCertificate(EMPTY))


# --- subgraph ---------------------------------------------------------------


def test_subgraph_ladder_collapses_rot_branches():
    gens = [C("G", -2, 1, 1), C("G", -2, -1, 1)]
    g = build_subgraph([EMPTY], gens, 3)
    assert sorted(k.d3 for k in g.vertices) == [0, 1, 2, 3]
    assert len(g.edges) == 2 + 2 + 2
    for e in g.edges:
        assert e.to_key.d3 - e.from_key.d3 == d3(SurgeryDiagram.build([e.component]))


def test_subgraph_lens_vertex_and_depth_zero():
    g = build_subgraph([EMPTY], [C("G", -4, 1, -1)], 1)
    lens = [k for k in g.vertices if k.family is Family.RHS_GENERIC]
    assert len(lens) == 1 and lens[0].torsion == (5,)
    g0 = build_subgraph([EMPTY], darboux_generators(2), 0)
    assert len(g0.vertices) == 1 and not g0.edges


def test_subgraph_additivity_on_positive_edges():
    g = build_subgraph([XI_1, XI_0], darboux_generators(4, rot_bound=1, signs=(1,)), 2)
    for e in g.edges:
        if e.from_key.d3 is not None and e.to_key.d3 is not None:
            assert e.to_key.d3 - e.from_key.d3 == d3(SurgeryDiagram.build([e.component]))


def test_subgraph_truncation_and_determinism():
    gens = darboux_generators(3)
    g = build_subgraph([EMPTY], gens, 3, max_vertices=5)
    assert g.truncated and len(g.vertices) == 5
    assert "truncated" in g.to_dot()
    a = build_subgraph([EMPTY], gens, 2).to_dot()
    b = build_subgraph([EMPTY], gens, 2).to_dot()
    assert a == b


def test_edges_replay():
    g = build_subgraph([EMPTY], darboux_generators(3), 2)
    for e in g.edges:
        e.check()


def test_dot_labels():
    g = build_subgraph([EMPTY], [C("G", -2, 1, 1), C("G", -4, 1, -1)], 1)
    dot = g.to_dot()
    lens = classify(SurgeryDiagram.build([C("G", -4, 1, -1)]))
    assert 'label="OT_S3:1:0"' in dot and f'label="{lens.label}"' in dot
    assert 'label="tb=-2 rot=1 (+1)"' in dot and "invariant-class" in dot


# --- bundles ----------------------------------------------------------------


def test_bundle_round_trip(tmp_path):
    path = verify_link_theorem(XI_1, C("N", -1, 0, -1), {"u": 1})
    index = write_bundle(str(tmp_path / "b"), path=path)
    data = json.loads(open(index).read())
    assert data["path"]["length"] == 2 and data["diagrams"]
    back = read_path_bundle(str(tmp_path / "b"))
    back.check()
    assert back.keys() == path.keys()
    assert back.end.content_hash() == path.end.content_hash()


def test_bundle_without_path(tmp_path):
    g = build_subgraph([EMPTY], [C("G", -2, 1, 1)], 1)
    write_bundle(str(tmp_path / "g"), graph=g)
    with pytest.raises(CertificateError):
        read_path_bundle(str(tmp_path / "g"))
