import pytest

from graphsketch import StreamSpec, generate_stream


class TestDeterminism:
    def test_same_seed_same_stream(self):
        spec = StreamSpec(vertices=40, edges=500, vertex_labels=3, edge_labels=4,
                          skew=0.6, duplicates=0.4, seed=5)
        assert generate_stream(spec) == generate_stream(spec)

    def test_different_seed_differs(self):
        a = StreamSpec(vertices=40, edges=500, seed=5)
        b = StreamSpec(vertices=40, edges=500, seed=6)
        assert generate_stream(a) != generate_stream(b)


class TestShape:
    def test_counts_and_ranges(self):
        spec = StreamSpec(vertices=30, edges=400, vertex_labels=3, edge_labels=5,
                          span=200, max_weight=4, seed=1)
        items = generate_stream(spec)
        assert len(items) == 400
        names = {f"v{i}" for i in range(30)}
        for it in items:
            assert it.src in names and it.dst in names
            assert 1 <= it.w <= 4
            assert 0 <= it.t <= 200

    def test_timestamps_sorted(self):
        items = generate_stream(StreamSpec(vertices=10, edges=300, span=50, seed=2))
        assert all(a.t <= b.t for a, b in zip(items, items[1:]))

    def test_vertex_labels_stable(self):
        items = generate_stream(StreamSpec(vertices=20, edges=500, vertex_labels=4,
                                           seed=3))
        seen: dict[str, str] = {}
        for it in items:
            for v, lab in ((it.src, it.l_src), (it.dst, it.l_dst)):
                assert seen.setdefault(v, lab) == lab

    def test_skew_concentrates_majority_label(self):
        items = generate_stream(StreamSpec(vertices=200, edges=4000,
                                           vertex_labels=2, skew=0.9, seed=4))
        endpoints = [it.l_src for it in items] + [it.l_dst for it in items]
        majority = endpoints.count("L0") / len(endpoints)
        assert majority >= 0.85

    def test_duplicate_rate_hits_expectation(self):
        v, edges, dup = 100, 5000, 0.5
        items = generate_stream(StreamSpec(vertices=v, edges=edges,
                                           duplicates=dup, seed=6))
        distinct = len({(it.src, it.dst) for it in items})
        # fresh draws land uniformly in v*v cells; expected distinct count
        n_cells = v * v
        fresh = edges * (1 - dup)
        expected = n_cells * (1 - (1 - 1 / n_cells) ** fresh)
        assert abs(distinct - expected) / expected < 0.05


class TestValidation:
    def test_rejects_zero_vertices(self):
        with pytest.raises(ValueError):
            generate_stream(StreamSpec(vertices=0, edges=10))

    def test_rejects_bad_rates(self):
        with pytest.raises(ValueError):
            generate_stream(StreamSpec(vertices=5, edges=10, skew=1.5))
        with pytest.raises(ValueError):
            generate_stream(StreamSpec(vertices=5, edges=10, duplicates=-0.1))

    def test_rejects_bad_weight(self):
        with pytest.raises(ValueError):
            generate_stream(StreamSpec(vertices=5, edges=10, max_weight=0))
