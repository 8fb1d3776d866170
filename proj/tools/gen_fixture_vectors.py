#!/usr/bin/env python3
"""Regenerates data/vectors16.vec, the synthetic 50-token test vector file.

Each cluster owns one axis; tokens sit near their axis with seeded noise.
The laptop-cluster tokens used by ipod/dvd players/desktop share an extra
direction so they rank ahead of laptop/tablet.
"""
import sys
import numpy as np

DIM = 16
CLUSTERS = [
    ("aerosol", ["aerosol", "paint", "spray", "gel", "ice", "packs", "tear", "gas", "deodorant"]),
    ("book", ["book", "books", "comic", "magazine", "newspaper", "novel"]),
    ("laptop", ["laptop", "ipod", "dvd", "players", "desktop", "tablet"]),
    ("electronics", ["electronics", "power", "bank", "fuel", "cells", "battery", "charger"]),
    ("beverage", ["beverage", "coffee", "tea", "juice"]),
    ("instruments", ["instruments", "piano", "guitar", "flute", "violin"]),
    ("weapons", ["weapons", "knife", "gun", "sword", "firearm"]),
    ("food", ["food", "pickle", "cheese", "fruit"]),
    ("toiletries", ["toiletries", "shampoo", "toothpaste", "perfume"]),
]
MEDIA = {"ipod", "dvd", "players", "desktop"}

rng = np.random.default_rng(20230729)
rows = []
for axis, (label, tokens) in enumerate(CLUSTERS):
    for tok in tokens:
        v = np.zeros(DIM)
        v[axis] = 1.0
        v += rng.normal(0.0, 0.08 if tok == label else 0.22, DIM)
        if tok in MEDIA:
            v[12] += 1.0
        rows.append((tok, np.round(v, 4)))

out = sys.stdout
out.write(f"{len(rows)} {DIM}\n")
for tok, v in rows:
    out.write(tok + " " + " ".join(f"{x:.4f}" for x in v) + "\n")
