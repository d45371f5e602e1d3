from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest

from _shared import SQ4, random_points
from parannulus import GeometryError, build_arrangement, delete_line, envelopes, insert_line, mid_chains, zone_walk
from parannulus.dual import envelopes as float_envelopes
from parannulus.dual import mid_chains as float_mid_chains


def _int_lines(rng, n, span=20):
    pts = {tuple(p) for p in rng.integers(-span, span + 1, (3 * n, 2)).tolist()}
    pts = sorted(pts)
    rng.shuffle(pts)
    return [tuple(map(int, p)) for p in pts[:n]]


def _pairwise_vertices(lines):
    out = set()
    for (a1, b1), (a2, b2) in combinations(lines, 2):
        if a1 == a2:
            continue
        u = Fraction(b1 - b2, a1 - a2)
        out.add((u, a1 * u - b1))
    return out


def test_two_lines():
    arr = build_arrangement([(0, 0), (1, 0)])
    assert arr.counts() == (1, 4, 4)
    assert arr.euler_ok()


def test_three_concurrent_lines():
    arr = build_arrangement([(0, 0), (1, 0), (-1, 0)])
    assert list(arr.vertices) == [(0, 0)]
    assert arr.vertices[(0, 0)] == {0, 1, 2}
    V, E, F = arr.counts()
    assert (V, E, F) == (1, 6, 6)


def test_square_vertex_count_matches_enumeration():
    lines = [tuple(map(int, p)) for p in SQ4]
    arr = build_arrangement(lines)
    assert set(arr.vertices) == _pairwise_vertices(lines)
    assert len(arr.vertices) == 4
    assert arr.euler_ok()


def test_parallel_lines_have_no_vertex():
    arr = build_arrangement([(1, 0), (1, 2), (1, -3)])
    assert arr.counts() == (0, 3, 4)


@pytest.mark.parametrize("seed", range(6))
def test_random_vertices_and_euler(seed):
    rng = np.random.default_rng(seed)
    lines = _int_lines(rng, 25, span=4)  # small span: many concurrencies and parallels
    arr = build_arrangement(lines)
    assert set(arr.vertices) == _pairwise_vertices(lines)
    assert arr.euler_ok()


def test_duplicate_line_bumps_multiplicity():
    arr = build_arrangement([(0, 0), (1, 0)])
    before = arr.counts()
    rep = insert_line(arr, (1, 0))
    assert rep["id"] == 1 and arr.multiplicity[1] == 2
    assert arr.counts() == before
    delete_line(arr, 1)
    assert arr.multiplicity[1] == 1 and len(arr) == 2


def test_delete_absent_line():
    arr = build_arrangement([(0, 0)])
    with pytest.raises(GeometryError):
        delete_line(arr, 7)


def test_insert_into_empty_and_delete_involution():
    arr = build_arrangement([])
    empty = arr.dump()
    rep = insert_line(arr, (2, 1))
    assert rep["created_vertices"] == [] and arr.counts() == (0, 1, 2)
    delete_line(arr, rep["id"])
    assert arr.dump() == empty
    arr = build_arrangement([(0, 0), (1, 0), (3, -2), (-1, 4)])
    before = arr.dump()
    rep = insert_line(arr, (2, 5))
    assert len(rep["created_vertices"]) == 4
    delete_line(arr, rep["id"])
    assert arr.dump() == before


def test_dump_is_canonical():
    lines = {0: (0, 0), 1: (1, 0)}
    text = build_arrangement(lines).dump()
    assert text.splitlines() == [
        "L 0 0 0 1",
        "L 1 1 0 1",
        "V 0 0",
        "E 0 -inf 0",
        "E 0 0 inf",
        "E 1 -inf 0",
        "E 1 0 inf",
    ]
    assert build_arrangement({1: (1, 0), 0: (0, 0)}).dump() == text


@pytest.mark.parametrize("seed", range(4))
def test_random_updates_match_rebuild(seed):
    rng = np.random.default_rng(100 + seed)
    pool = _int_lines(rng, 40, span=6)
    arr = build_arrangement({})
    live = {}
    for step in range(30):
        if live and (rng.random() < 0.4 or len(live) == len(pool)):
            lid = sorted(live)[int(rng.integers(len(live)))]
            delete_line(arr, lid)
            del live[lid]
        else:
            free = [k for k in range(len(pool)) if k not in live]
            k = free[int(rng.integers(len(free)))]
            insert_line(arr, pool[k], k)
            live[k] = pool[k]
        assert arr.dump() == build_arrangement(live).dump()
        assert arr.euler_ok()


def test_zone_single_line():
    arr = build_arrangement([(1, 0)])
    rep = zone_walk(arr, (-1, 2))
    assert len(rep.faces) == 2 and len(rep.crossings) == 1


@pytest.mark.parametrize("k", [1, 2, 5])
def test_zone_parallel_lines(k):
    arr = build_arrangement([(0, j) for j in range(k)])
    rep = zone_walk(arr, (1, 0.5))
    assert len(rep.faces) == k + 1


def _check_zone(arr, walk):
    rep = zone_walk(arr, walk)
    a, b = walk
    A0, C0 = Fraction(a), -Fraction(b)
    hits = sorted((Ck - C0) / (A0 - Ak) for (Ak, Ck) in arr.lines.values() if Ak != A0)
    assert [c[0] for c in rep.crossings] == hits
    assert len(set(rep.faces)) == len(rep.faces)
    # a sample point on the walked line inside each face agrees with the face's side signs
    stops = [c[0] for c in rep.crossings]
    samples = [stops[0] - 1 if stops else Fraction(0)]
    samples += [(x + y) / 2 for x, y in zip(stops, stops[1:])]
    samples += [stops[-1] + 1] if stops else []
    for face, u in zip(rep.faces, samples):
        if any(x == y for x, y in zip(stops, stops[1:])):
            break  # sample degenerates at a shared crossing; covered by the other checks
        v = A0 * u + C0
        for lid, side in arr.face_sides(face).items():
            Ak, Ck = arr.lines[lid]
            assert (v - (Ak * u + Ck)) * side > 0
    return rep


@pytest.mark.parametrize("seed", range(6))
def test_zone_random_matches_brute_force(seed):
    rng = np.random.default_rng(seed)
    lines = _int_lines(rng, 21)
    walk, rest = lines[0], lines[1:]
    arr = build_arrangement(rest)
    rep = _check_zone(arr, walk)
    assert rep.size <= 100
    assert rep.complexity <= 10 * len(rest)


def test_zone_through_existing_vertex():
    arr = build_arrangement([(0, 0), (1, 0), (-1, 0), (2, 3)])
    rep = _check_zone(arr, (5, 0))
    assert len(rep.crossings) == 4


def test_exact_envelopes_match_float_chains():
    rng = np.random.default_rng(9)
    pts = _int_lines(rng, 30)
    arr = build_arrangement(pts)
    U, L, M = envelopes(arr)
    fU, fL, fM = float_envelopes(np.array(pts, dtype=float))
    for u in rng.normal(0, 3, 200):
        vals = [a * u - b for a, b in pts]
        assert float(U(Fraction(u))) == pytest.approx(max(vals), abs=1e-9)
        assert float(L(Fraction(u))) == pytest.approx(min(vals), abs=1e-9)
        assert float(M(Fraction(u))) == pytest.approx(fM(u), abs=1e-9)
        assert fU(u) == pytest.approx(max(vals), abs=1e-9)


def test_envelopes_example():
    arr = build_arrangement([(0, 0), (1, 0), (0, 1)])
    U, L, M = envelopes(arr)
    assert U(Fraction(-2)) == 0 and U(Fraction(2)) == 2
    assert L(Fraction(-2)) == -2 and L(Fraction(2)) == -1
    assert len(M.breaks) == 2


def test_arrangement_mid_chains_relabel():
    pts = {10: (0.0, 0.0), 11: (1.0, 0.0), 12: (1.0, 1.0), 13: (0.0, 1.0), 14: (0.5, 0.5)}
    arr = build_arrangement(pts)
    qp, qm = mid_chains(arr, [14])
    fp, fm = float_mid_chains(np.array(list(pts.values())), [4])
    assert qp.breaks == fp.breaks and qm.breaks == fm.breaks
    assert set(qp.ids) | set(qm.ids) <= set(pts)
    assert 14 in qm.ids


def test_zone_complexity_bound_random():
    rng = np.random.default_rng(77)
    for n in (10, 30, 60):
        pts = random_points(rng, n + 1)
        arr = build_arrangement([tuple(p) for p in pts[1:]])
        rep = zone_walk(arr, tuple(pts[0]))
        assert rep.complexity <= 10 * n
