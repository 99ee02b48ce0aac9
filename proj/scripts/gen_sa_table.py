#!/usr/bin/env python3
"""Derive the synthetic-accessibility fragment score table from the corpus.

Scores are log10 frequencies shifted so the most common environment scores 4
and singletons land in mildly negative territory; unseen fragments default to
-4 at scoring time.
"""

from __future__ import annotations

import math
import struct
import sys

sys.path.insert(0, "scripts")
import refchem as rc


def main() -> None:
    counts: dict[int, int] = {}
    n_mols = 0
    for line in open("share/chemforge/corpus_10k.smi"):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        mol = rc.parse(line)
        n_mols += 1
        for frag in rc.circular_fragments(mol):
            counts[frag] = counts.get(frag, 0) + 1
    top = max(counts.values())
    table = {h: math.log10(c) - math.log10(top) + 4.0 for h, c in counts.items()}
    lo, hi = min(table.values()), max(table.values())
    with open("share/chemforge/sa_fragments.bin", "wb") as fh:
        fh.write(b"CFRG")
        fh.write(struct.pack("<IQ", 1, len(table)))
        for h in sorted(table):
            fh.write(struct.pack("<Qf", h, table[h]))
    print(f"{n_mols} molecules, {len(table)} fragments, scores [{lo:.2f}, {hi:.2f}]")


if __name__ == "__main__":
    main()
