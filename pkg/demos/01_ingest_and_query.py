# Build a sketch over a toy social stream and run every query family.
#
# The stream models messages between users. Each arrival carries the two
# user ids, their community labels, an urgency label for the message, the
# message length as the weight, and a timestamp.

from graphsketch import EdgeItem, GraphSketch, SketchConfig, UniformBlocks

config = SketchConfig(
    matrix_width=64,
    layout=UniformBlocks(64, 16),   # four label blocks of width 16
    fingerprint_range=256,
    candidate_length=4,
    sample_length=8,
    window=60,
    subwindow=15,
)
sketch = GraphSketch(config)

stream = [
    EdgeItem("ann", "bob", "musician", "painter", "urgent", 3, 1),
    EdgeItem("bob", "cey", "painter", "musician", "casual", 1, 2),
    EdgeItem("ann", "cey", "musician", "musician", "casual", 2, 3),
    EdgeItem("cey", "dia", "musician", "painter", "urgent", 5, 4),
    EdgeItem("ann", "bob", "musician", "painter", "casual", 2, 6),
    EdgeItem("dia", "ann", "painter", "musician", "urgent", 1, 7),
]
for item in stream:
    receipt = sketch.insert(item)
    print(f"insert {item.src:>3} -> {item.dst:<3} w={item.w}  "
          f"stored in {receipt.destination} at {receipt.slot}")

print()
print("ann's outgoing weight:        ", sketch.vertex_out_weight("ann", "musician").w)
print("ann's outgoing, urgent only:  ",
      sketch.vertex_out_weight("ann", "musician", "urgent").w_l)
print("bob's incoming weight:        ", sketch.vertex_in_weight("bob", "painter").w)
print("all musicians' outgoing:      ", sketch.label_out_weight("musician").w)
print("ann -> bob edge weight:       ",
      sketch.edge_weight("ann", "musician", "bob", "painter").w)
print("ann -> painters total:        ",
      sketch.edge_weight_to_label_group("ann", "musician", "painter").w)
print("ann reaches dia?              ",
      sketch.path_reachable("ann", "musician", "dia", "painter"))
print("dia reaches bob?              ",
      sketch.path_reachable("dia", "painter", "bob", "painter"))

triangle = [("ann", "musician", "bob", "painter"),
            ("bob", "painter", "cey", "musician"),
            ("cey", "musician", "dia", "painter")]
print("chain pattern matches:        ", sketch.subgraph_count(triangle))
