# Closed-form collision probabilities as a tuning aid.
#
# Before committing memory to a matrix width, the collision model predicts
# how likely a random edge is to merge with another one, and what accuracy
# each query family can guarantee.

import math

from graphsketch import CollisionParams, collision_free_probability, query_error_bound

print("P(no other edge merges with a given edge) as geometry varies")
print(f"{'d':>6} {'F':>6} {'label slots':>12} {'P':>10}")
for d, F, slots in [(100, 256, 2), (500, 256, 2), (1000, 256, 2),
                    (1000, 1024, 2), (1000, 256, 8)]:
    params = CollisionParams.from_matrix_geometry(
        matrix_width=d, fingerprint_range=F, label_slots=slots, labels=slots,
        edges=500_000, out_degree=200)
    print(f"{d:>6} {F:>6} {slots:>12} {collision_free_probability(params):>10.4f}")

print("\nquery accuracy guarantees at d=1000, F=256, two labels:")
params = CollisionParams.from_matrix_geometry(
    matrix_width=1000, fingerprint_range=256, label_slots=2, labels=2,
    edges=500_000, out_degree=200, vertices=5000, avg_out_degree=100.0,
    pattern_size=3, edge_label_range=32, edge_labels=9)
for kind in ("edge", "vertex", "path", "subgraph"):
    plain = query_error_bound(kind, False, params)
    labeled = query_error_bound(kind, True, params)
    print(f"  {kind:>9}: accuracy >= {plain:.4f}   with label filter >= {labeled:.4f}")

print("\ncross-check against a direct simulation of the hashing model:")
import random

D, L, labels, edges, d_v = 16, 4, 2, 10, 2
rng = random.Random(7)
trials, collided = 30_000, 0
for _ in range(trials):
    label_hash = [rng.randrange(L) for _ in range(labels)]
    ha, hb = rng.randrange(D), rng.randrange(D)
    la, lb = rng.randrange(labels), rng.randrange(labels)
    hit = False
    for _ in range(edges - d_v):
        if (rng.randrange(D) == ha and rng.randrange(D) == hb
                and label_hash[rng.randrange(labels)] == label_hash[la]
                and label_hash[rng.randrange(labels)] == label_hash[lb]):
            hit = True
            break
    if not hit:
        for _ in range(d_v):
            if (rng.randrange(D) == hb
                    and label_hash[rng.randrange(labels)] == label_hash[lb]):
                hit = True
                break
    collided += hit
measured = 1 - collided / trials
predicted = collision_free_probability(
    CollisionParams.uniform_labels(D, L, labels, edges, d_v))
sigma = math.sqrt(predicted * (1 - predicted) / trials)
print(f"  tiny instance D={D}, L={L}: predicted P={predicted:.4f}, "
      f"simulated {measured:.4f} (sigma {sigma:.4f})")
