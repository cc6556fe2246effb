# Watch the sliding window expire old arrivals.
#
# The window spans 8 time units cut into 4 subwindows of 2. The sketch
# stores a single timestamp (the start of the newest subwindow) and each
# counter list rotates lazily as that timestamp advances.

from graphsketch import EdgeItem, GraphSketch, SketchConfig

config = SketchConfig(matrix_width=16, window=8, subwindow=2,
                      fingerprint_range=64, candidate_length=4, sample_length=4)
sketch = GraphSketch(config)

print(f"window: {config.window} units = {config.subwindow_count} subwindows "
      f"of {config.subwindow}\n")

sketch.insert(EdgeItem("a", "b", "L", "L", "mail", 5, 0))
sketch.insert(EdgeItem("a", "c", "L", "L", "mail", 3, 3))
sketch.insert(EdgeItem("a", "d", "L", "L", "mail", 2, 5))

for now in range(5, 16):
    expired = sketch.advance_time(now)
    w = sketch.vertex_out_weight("a", "L").w
    note = f"  ({expired} subwindow(s) expired)" if expired else ""
    print(f"t={now:>2}  newest subwindow starts {sketch.matrix.t_n:>2}  "
          f"a's out-weight = {w}{note}")

print()
print("The weight-5 item from t=0 drops out first, then t=3, then t=5.")
print("Reachability honors the window too:")
sketch2 = GraphSketch(config)
sketch2.insert(EdgeItem("x", "y", "L", "L", "mail", 1, 0))
print("  t=0   x->y reachable:", sketch2.path_reachable("x", "L", "y", "L"))
sketch2.advance_time(8)
print("  t=8   x->y reachable:", sketch2.path_reachable("x", "L", "y", "L"))
