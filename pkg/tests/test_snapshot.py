import pytest

from graphsketch import (GraphSketch, SnapshotError, StreamSpec,
                         generate_stream, load_sketch, save_sketch)

from helpers import collision_free_config, find_overflow_stream, items_from_pairs, tiny_config


def build_busy_sketch():
    cfg = collision_free_config(product_byte_cap=None)
    sk = GraphSketch(cfg)
    items = generate_stream(StreamSpec(vertices=40, edges=800, vertex_labels=3,
                                       edge_labels=5, duplicates=0.4,
                                       span=600, seed=13))
    for item in items:
        sk.insert(item)
    return sk, items


class TestRoundTrip:
    def test_every_query_survives(self, tmp_path):
        sk, items = build_busy_sketch()
        path = tmp_path / "sketch.snap"
        save_sketch(sk, path)
        back = load_sketch(path)

        vertices = sorted({(it.src, it.l_src) for it in items})
        for v, l_v in vertices[:30]:
            assert back.vertex_out_weight(v, l_v) == sk.vertex_out_weight(v, l_v)
            assert back.vertex_in_weight(v, l_v) == sk.vertex_in_weight(v, l_v)
            assert (back.vertex_out_weight(v, l_v, "e1")
                    == sk.vertex_out_weight(v, l_v, "e1"))
        for label in ("L0", "L1", "L2"):
            assert back.label_out_weight(label) == sk.label_out_weight(label)
            assert back.label_in_weight(label) == sk.label_in_weight(label)
        for it in items[::37]:
            assert (back.edge_weight(it.src, it.l_src, it.dst, it.l_dst)
                    == sk.edge_weight(it.src, it.l_src, it.dst, it.l_dst))
            assert (back.path_reachable(it.src, it.l_src, it.dst, it.l_dst)
                    == sk.path_reachable(it.src, it.l_src, it.dst, it.l_dst))

    def test_window_state_survives(self, tmp_path):
        sk, _ = build_busy_sketch()
        path = tmp_path / "sketch.snap"
        save_sketch(sk, path)
        back = load_sketch(path)
        assert back.matrix.t_n == sk.matrix.t_n
        assert back.epoch == sk.epoch
        assert back.items_inserted == sk.items_inserted
        assert back.pool_items == sk.pool_items
        # sliding continues identically after reload
        sk.advance_time(sk.matrix.t_n + 950)
        back.advance_time(back.matrix.t_n + 950)
        assert back.label_out_weight("L0") == sk.label_out_weight("L0")

    def test_pool_entries_survive(self, tmp_path):
        cfg = tiny_config(matrix_width=4, layout=None, fingerprint_range=8,
                          candidate_length=1, sample_length=1)
        sk = GraphSketch(cfg)
        fillers, target = find_overflow_stream(cfg)
        for item in items_from_pairs(fillers + [target]):
            sk.insert(item)
        assert len(sk.pool) == 1
        path = tmp_path / "sketch.snap"
        save_sketch(sk, path)
        back = load_sketch(path)
        assert len(back.pool) == 1
        assert (back.edge_weight(target[0], "L", target[1], "L")
                == sk.edge_weight(target[0], "L", target[1], "L"))

    def test_byte_capped_products_survive(self, tmp_path):
        cfg = tiny_config(product_byte_cap=2)
        sk = GraphSketch(cfg)
        from graphsketch import EdgeItem
        for i in range(20):
            sk.insert(EdgeItem("a", "b", "grp0", "grp1", "edge4", 3, i % 2))
        path = tmp_path / "sketch.snap"
        save_sketch(sk, path)
        back = load_sketch(path)
        assert (back.edge_weight("a", "grp0", "b", "grp1", "edge4")
                == sk.edge_weight("a", "grp0", "b", "grp1", "edge4"))

    def test_registry_survives_in_order(self, tmp_path):
        sk, _ = build_busy_sketch()
        path = tmp_path / "sketch.snap"
        save_sketch(sk, path)
        back = load_sketch(path)
        assert back.registry.by_hash == sk.registry.by_hash
        assert back.registry.collisions == sk.registry.collisions


class TestCorruption:
    def test_bad_magic(self, tmp_path):
        path = tmp_path / "bad.snap"
        path.write_bytes(b"NOTASNAP" + b"\x00" * 16)
        with pytest.raises(SnapshotError):
            load_sketch(path)

    def test_truncated(self, tmp_path):
        sk, _ = build_busy_sketch()
        path = tmp_path / "sketch.snap"
        save_sketch(sk, path)
        data = path.read_bytes()
        path.write_bytes(data[: len(data) // 2])
        with pytest.raises(SnapshotError):
            load_sketch(path)

    def test_wrong_version(self, tmp_path):
        sk, _ = build_busy_sketch()
        path = tmp_path / "sketch.snap"
        save_sketch(sk, path)
        data = bytearray(path.read_bytes())
        data[8] = 99
        path.write_bytes(bytes(data))
        with pytest.raises(SnapshotError):
            load_sketch(path)
