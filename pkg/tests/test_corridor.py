import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from stealthpath import (average_width, build_corridor, corridor,
                         corridor_record, exposed_set, lemma1_fixture,
                         obj_bin, plan_binary)
from stealthpath.bitset import bit_indices, mask_from_indices


def random_c_walk(env, mask, start, rng, steps=40):
    """Random walk that refuses to leave the corridor."""
    walk = [start]
    for _ in range(steps):
        options = [nb for nb in env.neighbors(walk[-1]) if (mask >> nb) & 1]
        if not options:
            break
        walk.append(options[int(rng.integers(0, len(options)))])
    return walk


class TestExposedSet:
    def test_single_region(self, boxes12):
        _, field = boxes12
        assert exposed_set(field, [5]) == field.exposure_set(5)

    def test_fixture_p2_exposes_nine(self):
        fx = lemma1_fixture()
        path = [fx.index(c) for c in "FCBADE"]
        k = exposed_set(fx.field, path)
        assert k.bit_count() == 9
        assert sorted(fx.names[i] for i in bit_indices(k)) == list("ABCDEFHIJ")

    def test_empty_path_rejected(self, boxes12):
        with pytest.raises(ValueError, match="empty"):
            exposed_set(boxes12[1], [])


class TestCorridor:
    def test_full_k_gives_full_corridor(self, boxes12):
        _, field = boxes12
        k = (1 << field.n) - 1
        assert corridor(field, k) == k

    def test_flat_map_partial_k_gives_empty_corridor(self, flat5):
        _, field = flat5
        k = (1 << field.n) - 1 - (1 << 0)
        assert corridor(field, k) == 0

    def test_membership_rule(self, boxes12):
        _, field = boxes12
        rng = np.random.default_rng(2)
        k = mask_from_indices(int(v) for v in rng.choice(field.n, 60, replace=False))
        c = corridor(field, k)
        for i in range(field.n):
            inside = bool((c >> i) & 1)
            assert inside == (field.exposure_set(i) & ~k == 0)

    def test_monotone_in_k(self, boxes12):
        _, field = boxes12
        rng = np.random.default_rng(3)
        k1 = mask_from_indices(int(v) for v in rng.choice(field.n, 40, replace=False))
        k2 = k1 | mask_from_indices(int(v) for v in rng.choice(field.n, 30, replace=False))
        assert corridor(field, k1) & ~corridor(field, k2) == 0

    def test_empty_k_rejected(self, boxes12):
        with pytest.raises(ValueError, match="empty"):
            corridor(boxes12[1], 0)


class TestAverageWidth:
    def test_ratio(self):
        assert average_width(mask_from_indices(range(30)), list(range(10))) == 3.0

    def test_corridor_equals_path(self):
        assert average_width(mask_from_indices([4, 9, 14]), [4, 9, 14]) == 1.0

    def test_empty_path_rejected(self):
        with pytest.raises(ValueError, match="empty"):
            average_width(1, [])


class TestBuildCorridor:
    def test_seed_path_contained(self, boxes12):
        env, field = boxes12
        res = plan_binary(env, field, 0, env.n - 1)
        cor = build_corridor(env, field, res.path)
        for r in res.path:
            assert (cor.corridor >> r) & 1
        assert cor.exposed == exposed_set(field, res.path)
        assert cor.avg_width == average_width(cor.corridor, res.path)

    def test_no_leak_from_corridor_walks(self, boxes12):
        env, field = boxes12
        rng = np.random.default_rng(11)
        res = plan_binary(env, field, 1, env.n - 2)
        cor = build_corridor(env, field, res.path)
        for _ in range(20):
            start = res.path[int(rng.integers(0, len(res.path)))]
            walk = random_c_walk(env, cor.corridor, start, rng)
            assert exposed_set(field, walk) & ~cor.exposed == 0
            assert obj_bin(field, walk) <= cor.exposed.bit_count()

    def test_connected_only_restricts(self, boxes50):
        env, field = boxes50
        res = plan_binary(env, field, env.index(0, 0), env.index(49, 49))
        full = build_corridor(env, field, res.path)
        conn = build_corridor(env, field, res.path, connected_only=True)
        assert conn.corridor & ~full.corridor == 0
        for r in res.path:
            assert (conn.corridor >> r) & 1
        # every connected-corridor cell is reachable from the path inside C
        assert conn.avg_width <= full.avg_width

    def test_record_shape(self, boxes12):
        env, field = boxes12
        res = plan_binary(env, field, 0, 11)
        cor = build_corridor(env, field, res.path)
        rec = corridor_record(cor)
        assert rec["seed_path"] == res.path
        assert rec["corridor"] == bit_indices(cor.corridor)
        assert rec["exposed"] == bit_indices(cor.exposed)
        assert rec["avg_width"] == cor.avg_width


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10_000))
def test_corridor_membership_rule_random_fields(seed):
    # the rule E(c) subset-of K must hold for any reflexive symmetric field
    rng = np.random.default_rng(seed)
    n = int(rng.integers(3, 12))
    sym = np.triu(rng.integers(0, 2, (n, n)), 1)
    mat = (sym + sym.T + np.eye(n, dtype=int)).astype(bool)
    from stealthpath import ExposureField
    rows = [mask_from_indices(np.flatnonzero(mat[i])) for i in range(n)]
    field = ExposureField(rows, validate=True)
    k = mask_from_indices(int(v) for v in rng.choice(n, max(1, n // 2), replace=False))
    c = corridor(field, k)
    for i in bit_indices(c):
        assert field.exposure_set(i) & ~k == 0
