import random
from itertools import combinations
from math import comb

import numpy as np
import pytest

from blocktrans.catalog import affine_group, builtin_fixtures, cyclic_group, trivial_group
from blocktrans.design import (
    Design, ag2_planes_design, block_orbit, derive_params, format_design, intersection_pattern,
    is_flag_transitive, parse_design, pattern_orbits, pencil, pencil_pair_counts, verify_design,
)
from blocktrans.errors import InfeasibleParametersError, NotADesignError, ValidationError
from blocktrans.perm import Permutation, PermGroup



def dense_lambda(d, t=3):
    """Independent recount from the incidence matrix; None when counts vary."""
    n = np.zeros((d.b, d.v), dtype=np.int64)
    for i, blk in enumerate(d.blocks):
        n[i, [p - 1 for p in blk]] = 1
    if t == 3:
        cube = np.einsum("bi,bj,bl->ijl", n, n, n)
        idx = np.array(list(combinations(range(d.v), 3)))
        vals = cube[idx[:, 0], idx[:, 1], idx[:, 2]]
    else:
        sq = n.T @ n
        iu = np.triu_indices(d.v, 1)
        vals = sq[iu]
    return int(vals[0]) if np.all(vals == vals[0]) else None


def test_wreath_design(wreath_design):
    p = verify_design(wreath_design, 3)
    assert (p.b, p.lam, p.r, p.v, p.k) == (3920, 140, 1470, 16, 6)
    assert dense_lambda(wreath_design) == 140
    assert p.b * comb(6, 3) == p.lam * comb(16, 3) == 78400
    assert p.nontrivial
    classes = [range(1, 9), range(9, 17)]
    assert {intersection_pattern(b, classes) for b in wreath_design.blocks} == {(4, 2)}


def test_ag_fixtures():
    d3 = ag2_planes_design(3)
    p = verify_design(d3)
    assert (p.b, p.lam, p.r) == (14, 1, 7)
    assert dense_lambda(d3) == 1
    d4 = ag2_planes_design(4)
    assert verify_design(d4).lam == 1 and d4.b == 140
    assert dense_lambda(d4) == 1
    # each of the 56 triples of AG(3,2) lies in exactly one plane
    covered = [t for b in d3.blocks for t in combinations(b, 3)]
    assert len(covered) == len(set(covered)) == 56


def test_complete_design():
    d = Design.from_blocks(6, combinations(range(1, 7), 4))
    p = verify_design(d)
    assert p.lam == 3 and p.nontrivial
    # k = v - 1 is trivial by definition, but still verifies
    q = verify_design(Design.from_blocks(5, combinations(range(1, 6), 4)))
    assert q.lam == 2 and not q.nontrivial


def test_orbit_sizes():
    assert block_orbit(trivial_group(5), [1, 3]).b == 1
    assert block_orbit(cyclic_group(8), [1, 2]).b == 8


def test_not_a_design_witness():
    d = block_orbit(cyclic_group(8), [1, 2, 4])
    with pytest.raises(NotADesignError) as e:
        verify_design(d, 3)
    (s1, c1), (s2, c2) = e.value.witness
    assert c1 != c2
    assert sum(set(s1) <= set(b) for b in d.blocks) == c1
    assert sum(set(s2) <= set(b) for b in d.blocks) == c2


def test_derive_params():
    p = derive_params(16, 6, 140)
    assert (p.b, p.r) == (3920, 1470)
    p = derive_params(8, 4, 1)
    assert (p.b, p.r) == (14, 7)
    with pytest.raises(InfeasibleParametersError):
        derive_params(16, 6, 1)
    with pytest.raises(ValidationError):
        derive_params(5, 6, 1)


def test_pencils(wreath_design):
    assert len(pencil(wreath_design, 5)) == 1470
    assert len(pencil(ag2_planes_design(3), 2)) == 7
    assert len(pencil(Design.from_blocks(6, [(1, 2, 3)]), 1)) == 1


def test_pencil_pair_identity(s8wrs2, wreath_design):
    lam = 140
    rows = pencil_pair_counts(s8wrs2, wreath_design, 1)
    assert sorted(size for size, _ in rows) == [7, 8]
    for size, profile in rows:
        assert sum(n * comb(mu, 2) for n, mu in profile) == lam * comb(size, 2)


def test_flag_transitivity(s8wrs2, wreath_design):
    assert is_flag_transitive(affine_group(3), ag2_planes_design(3))
    # point 1 can sit in the 4-part or the 2-part of a block
    assert not is_flag_transitive(s8wrs2, wreath_design)


def test_orbit_equivariance(s8wrs2):
    rng = random.Random(7)
    base = (1, 2, 3, 9)
    g = builtin_fixtures()["PGL(2,7)wrS2"].group()
    d = block_orbit(g, base)
    for _ in range(3):
        img = list(range(1, 17))
        rng.shuffle(img)
        sigma = Permutation(img)
        conj = PermGroup([sigma.inverse() * h * sigma for h in g.generators])
        assert block_orbit(conj, [sigma(p) for p in base]) == d.relabel(sigma)


def test_design_file_round_trip():
    d = ag2_planes_design(3)
    text = format_design(d)
    assert text.splitlines()[0] == "8 4"
    assert parse_design(text) == d
    assert format_design(parse_design(text)) == text


@pytest.mark.parametrize("text", ["", "8\n1 2 3 4\n", "8 4\n1 2 3\n", "8 4\n1 2 3 9\n", "8 4\n1 2 3 4\n4 3 2 1\n"])
def test_design_file_errors(text):
    with pytest.raises(ValidationError):
        parse_design(text)


def test_pattern_search_on_wreath(s8wrs2):
    found = pattern_orbits(s8wrs2, (4, 2))
    assert len(found) == 1
    assert found[0].params.lam == 140 and found[0].design.b == 3920


def test_pattern_search_verifies_independently():
    for rec in builtin_fixtures():
        if rec.name in ("AGL(3,2)wrS2", "2^4:(2^3:L3(2))"):
            for od in pattern_orbits(rec.group(), (4, 2)):
                assert dense_lambda(od.design) == (od.params.lam if od.params else None)


def test_imprimitive_counterexample_design():
    # pattern (2,1,1,1,1) against the (2,8) system of S2 wr S8
    g = builtin_fixtures()["S2wrS8"].group()
    d = block_orbit(g, (1, 2, 3, 5, 7, 9))
    p = verify_design(d)
    assert (p.b, p.lam) == (4480, 160) and p.nontrivial
    assert dense_lambda(d) == 160
