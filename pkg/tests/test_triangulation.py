from __future__ import annotations

import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from _homology import bundle_h1, h1_invariants
from tautangle.bundles import build_layered, monodromy_matrix
from tautangle.triangulation import (
    ALL_PERMS,
    IDENTITY,
    PAIRS,
    Perm4,
    Triangulation,
    TriangulationError,
    degree3_edges,
    edge_of,
    eligible_23_faces,
    pachner_23,
    pachner_32,
    pair_of,
    validate,
)

# One tetrahedron, all faces self-glued: a non-orientable cusped manifold.
GIESEKING = '{"tets":[{"nbr":[0,0,0,0],"perm":[[1,2,0,3],[2,0,1,3],[0,2,3,1],[0,3,1,2]]}]}'

perms = st.sampled_from(ALL_PERMS)


@given(perms, perms, perms)
def test_perm_group_laws(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * a.inverse() == IDENTITY == a.inverse() * a
    assert (a * b).sign() == a.sign() * b.sign()
    assert (a * b)(2) == a(b(2))


def test_perm_rejects_non_permutations():
    with pytest.raises(ValueError):
        Perm4((0, 0, 1, 2))
    assert len(set(ALL_PERMS)) == 24


def test_pairs_partition_edges():
    for p, (e1, e2) in enumerate(PAIRS):
        assert sorted(e1 + e2) == [0, 1, 2, 3]
        assert pair_of(*e1) == pair_of(*e2) == p


def test_figure_eight_report(fig8):
    rep = validate(fig8)
    assert rep.k == 2
    assert rep.degrees == [6, 6]
    assert rep.cusp_count == 1
    assert rep.orientable
    assert all(link.euler_char == 0 for link in rep.cusp_links)
    assert edge_of(fig8, 0, (0, 1)).degree == 6
    assert edge_of(fig8, 0, (1, 0)) == edge_of(fig8, 0, (0, 1))


def test_figure_eight_homology(fig8):
    assert h1_invariants(fig8) == [0]


def test_json_round_trip_is_byte_exact(fig8, rl1):
    for T in (fig8, rl1):
        text = T.dumps()
        assert Triangulation.loads(text).dumps() == text
        assert json.loads(text) == T.to_json()


def test_malformed_json_rejected():
    with pytest.raises(ValueError):
        Triangulation.from_json({"tets": [{"nbr": [0, 0, 0, 0]}]})
    with pytest.raises(ValueError):
        Triangulation.from_json({"tets": [{"nbr": [0, 0, 0, 0], "perm": [[0, 0, 1, 2]] * 4}]})


def test_involution_violation_reported(fig8):
    data = fig8.to_json()
    data["tets"][0]["perm"][0] = [0, 1, 2, 3]
    with pytest.raises(TriangulationError) as info:
        Triangulation.from_json(data).validate()
    assert info.value.problems


def test_cusp_euler_characteristic_rejected():
    # Faces 0<->1 and 2<->3 glued by transpositions: both cusp links are spheres.
    T = Triangulation([[0, 0, 0, 0]], [[(1, 0, 2, 3), (1, 0, 2, 3), (0, 1, 3, 2), (0, 1, 3, 2)]])
    with pytest.raises(TriangulationError) as info:
        T.validate()
    kinds = {kind for kind, _, _ in info.value.problems}
    assert "cusp" in kinds


def test_non_orientable_accepted():
    T = Triangulation.loads(GIESEKING)
    rep = T.validate()
    assert rep.k == 1 and rep.degrees == [6]
    assert not rep.orientable
    assert not rep.cusp_links[0].orientable
    assert h1_invariants(T) == [0]


def test_disconnected_rejected(fig8):
    data = fig8.to_json()
    shifted = {"nbr": [t + 2 for t in data["tets"][0]["nbr"]], "perm": data["tets"][0]["perm"]}
    shifted2 = {"nbr": [t + 2 for t in data["tets"][1]["nbr"]], "perm": data["tets"][1]["perm"]}
    T = Triangulation.from_json({"tets": data["tets"] + [shifted, shifted2]})
    with pytest.raises(TriangulationError):
        T.validate()


def test_layered_rl_is_figure_eight(fig8):
    T = build_layered("RL").triangulation
    assert T.validate().k == 2
    assert T.is_isomorphic(fig8)


@pytest.mark.parametrize("word", ["RL", "RRL", "RLL", "RRRL", "RRLL", "RLRL", "RRLRL", "RLLRRL"])
def test_bundle_homology_matches_monodromy(word):
    expected = bundle_h1(monodromy_matrix(word).matrix)
    assert h1_invariants(build_layered(word).triangulation) == expected
    assert h1_invariants(build_layered(word, [1]).triangulation) == expected


def test_edge_invariants_across_fixtures(fig8, rl1):
    for T in (fig8, rl1, build_layered("RRLRL").triangulation):
        rep = T.validate()
        assert len(rep.edge_classes) == T.k
        assert sum(rep.degrees) == 6 * T.k
        slots = [s for ec in rep.edge_classes for s in ec.slots]
        assert len(set(slots)) == 6 * T.k
        # Class ids are ordered by their smallest slot.
        assert [min(ec.slots) for ec in rep.edge_classes] == sorted(min(ec.slots) for ec in rep.edge_classes)


def _random_relabel(T, rng):
    order = list(range(T.k))
    rng.shuffle(order)
    return T.relabel(order, [rng.choice(ALL_PERMS) for _ in range(T.k)])


@given(st.integers(0, 10**6), st.sampled_from(["RL", "RRL", "RLRL", "RRLL"]), st.integers(-1, 2))
@settings(max_examples=40, deadline=None)
def test_relabel_invariance(seed, word, ins):
    T = build_layered(word, [] if ins < 0 else [ins]).triangulation
    U = _random_relabel(T, random.Random(seed))
    rep_t, rep_u = T.validate(), U.validate()
    assert sorted(rep_t.degrees) == sorted(rep_u.degrees)
    assert rep_t.orientable == rep_u.orientable
    assert U.canonical_table() == T.canonical_table()
    assert U.is_isomorphic(T)


def test_non_isomorphic_distinguished():
    assert not build_layered("RRL").triangulation.is_isomorphic(build_layered("RRRL").triangulation)
    A = build_layered("RRLL").triangulation
    B = build_layered("RLRL").triangulation
    assert A.k == B.k and not A.is_isomorphic(B)


def test_pachner_23_every_face(fig8):
    for t, f in eligible_23_faces(fig8):
        U = pachner_23(fig8, t, f)
        rep = U.validate()
        assert rep.k == 3 and len(rep.edge_classes) == 3
        assert 3 in rep.degrees
        assert h1_invariants(U) == [0]


def test_pachner_round_trip():
    for T in (build_layered("RL").triangulation, build_layered("RRL").triangulation, build_layered("RL", [1]).triangulation):
        for t, f in eligible_23_faces(T):
            U = pachner_23(T, t, f)
            back = [pachner_32(U, ec) for ec in degree3_edges(U)]
            assert back, (t, f)
            assert any(V.is_isomorphic(T) for V in back)
            for V in back:
                assert V.validate().k == T.k


def test_pachner_rejects_bad_input(fig8):
    with pytest.raises(ValueError):
        pachner_32(fig8, 0)
    G = Triangulation.loads(GIESEKING)
    with pytest.raises(ValueError):
        pachner_23(G, 0, 0)
    assert eligible_23_faces(G) == []


def test_pachner_32_on_rl_after_23(rl):
    U = pachner_23(rl, *eligible_23_faces(rl)[0])
    for ec in degree3_edges(U):
        V = pachner_32(U, ec)
        assert V.validate().k == 2
