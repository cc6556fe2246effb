# How labels are encoded without extra per-item storage.
#
# Vertex labels pick the storage block: the matrix is cut into bands and a
# label's hash selects one, so rows/columns of one label cluster together.
# Edge labels ride inside the per-subwindow prime product: each label maps
# to a prime, and an arrival of weight w multiplies that prime in w times.
# Factoring the product back out recovers per-label weights exactly.

from graphsketch import (EdgeItem, GraphSketch, SketchConfig, UniformBlocks,
                         block_index, label_prime)

config = SketchConfig(matrix_width=32, layout=UniformBlocks(32, 8),
                      fingerprint_range=128, candidate_length=4,
                      sample_length=8, prime_count=8)

print("vertex label -> block band (4 slots of 8 rows):")
for label in ("alpha", "beta", "gamma", "delta"):
    band = block_index(label, config.layout, config.hash_seed)
    print(f"  {label:>6} -> rows [{band.start:>2}, {band.start + band.width:>2})")

print("\nedge label -> prime:")
for label in ("call", "text", "video"):
    print(f"  {label:>6} -> {label_prime(label, config.prime_table, config.hash_seed)}")

sketch = GraphSketch(config)
sketch.insert(EdgeItem("u", "v", "alpha", "beta", "call", 4, 0))
sketch.insert(EdgeItem("u", "v", "alpha", "beta", "text", 1, 1))
sketch.insert(EdgeItem("u", "v", "alpha", "beta", "call", 2, 2))

total = sketch.edge_weight("u", "alpha", "v", "beta")
print(f"\nu->v total weight: {total.w}")
for label in ("call", "text", "video"):
    res = sketch.edge_weight("u", "alpha", "v", "beta", label)
    print(f"u->v weight under {label!r}: {res.w_l}")

# the per-label weights always sum back to the total
parts = sum(sketch.edge_weight("u", "alpha", "v", "beta", lab).w_l
            for lab in ("call", "text", "video"))
print(f"sum of per-label weights: {parts} (equals the total)")
