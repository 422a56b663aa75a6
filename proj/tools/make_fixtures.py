#!/usr/bin/env python3
# Regenerates the committed graph fixtures under data/. Deterministic.
import random


def write(path, n, edges, comment):
    with open(path, "w") as f:
        f.write(f"# {comment}\n")
        f.write(f"n={n}\n")
        for u, v in sorted(edges):
            f.write(f"{u} {v}\n")


def community(seed=20240601, size=12, p_in=0.5, n_bridges=3):
    rng = random.Random(seed)
    edges = set()
    for block in range(2):
        base = block * size
        for i in range(size):
            for j in range(i + 1, size):
                if rng.random() < p_in:
                    edges.add((base + i, base + j))
    while len([e for e in edges if (e[0] < size) != (e[1] < size)]) < n_bridges:
        edges.add((rng.randrange(size), size + rng.randrange(size)))
    return 2 * size, edges


def cora_like(seed=2485, n=2485, m=5069):
    # Preferential-attachment spanning tree plus Chung-Lu style extra edges:
    # connected, heavy-tailed degrees, exactly n nodes and m edges.
    rng = random.Random(seed)
    edges = set()
    targets = [0]
    for v in range(1, n):
        u = rng.choice(targets) if rng.random() < 0.8 else rng.randrange(v)
        edges.add((min(u, v), max(u, v)))
        targets += [u, v]
    while len(edges) < m:
        u, v = rng.choice(targets), rng.choice(targets)
        if u != v:
            edges.add((min(u, v), max(u, v)))
    return n, edges


if __name__ == "__main__":
    n, e = community()
    write("data/toy_community.el", n, e, "two-community toy graph, 2 x 12 nodes")
    n, e = cora_like()
    write("data/cora_like.el", n, e, "synthetic stand-in with Cora's node and edge counts")
