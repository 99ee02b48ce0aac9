#!/usr/bin/env python3
"""Generate the bundled desk-scale molecule corpus.

Molecules are assembled from curated ring scaffolds, linkers and substituents
as explicit graphs (never by string surgery), so every emitted string is valid
by construction; each one is additionally round-tripped through the reference
parser before it is accepted.
"""

from __future__ import annotations

import random
import sys

sys.path.insert(0, "scripts")
import refchem as rc

# scaffold ring systems, given as SMILES with open attachment freedom
SCAFFOLDS = [
    "c1ccccc1", "c1ccncc1", "c1ccnnc1", "c1cncnc1", "c1cc[nH]c1", "c1ccoc1",
    "c1ccsc1", "c1cnc[nH]1", "c1cn[nH]c1", "c1ocnc1", "c1scnc1", "c1ccc2ccccc2c1",
    "c1ccc2[nH]ccc2c1", "c1ccc2ncccc2c1", "c1ccc2occc2c1", "c1ccc2sccc2c1",
    "c1ccc2[nH]cnc2c1", "C1CCCCC1", "C1CCCC1", "C1CCC1", "C1CC1", "C1CCNCC1",
    "C1CCOCC1", "C1CCNC1", "C1CCOC1", "C1CNCCN1", "C1COCCN1", "C1CCSCC1",
    "c1ccc2c(c1)CCCC2", "c1ccc2c(c1)OCCO2", "c1ccc2c(c1)CCNC2",
]

SUBSTITUENTS = [
    "F", "Cl", "Br", "I", "C", "CC", "CCC", "C(C)C", "C(C)(C)C", "O", "OC",
    "OCC", "N", "NC", "N(C)C", "C#N", "C(=O)O", "C(=O)OC", "C(=O)N", "C(=O)C",
    "S", "SC", "S(=O)(=O)N", "S(=O)(=O)C", "C(F)(F)F", "OC(F)(F)F", "C=C",
    "CO", "CN", "CCO", "CCN", "C(=O)NC", "NC(=O)C", "OCC(=O)O",
]

LINKERS = ["C", "CC", "CCC", "O", "OC", "N", "NC", "C(=O)", "C(=O)N", "C(=O)O",
           "S", "S(=O)(=O)", "C=C", "C#C", "OCC", "NCC", "CNC", "COC"]

CHAINS = [
    "CCO", "CCCO", "CCN", "CCCN", "CC(=O)O", "CCC(=O)O", "CC(C)O", "CCOC",
    "CCOCC", "CC(=O)N", "CCS", "CC(C)N", "OCC(O)CO", "NCCO", "NCCN", "OCCO",
    "CC(N)C(=O)O", "CC(O)C(=O)O", "C=CC(=O)O", "CC=CC", "CCCCCC", "CC(C)(C)O",
]

IONS = ["[Na+]", "[K+]", "[Cl-]", "[Br-]", "[NH4+]"]


def graph_of(smiles: str) -> rc.PMol:
    return rc.parse(smiles)


def merge(a: rc.PMol, b: rc.PMol) -> tuple[rc.PMol, int]:
    """Disjoint union; returns offset of b's atoms."""
    out = rc.PMol()
    for atom in a.atoms:
        out.add_atom(rc.PAtom(**{k: getattr(atom, k) for k in
                                 ("z", "charge", "isotope", "explicit_h",
                                  "aromatic", "bracket", "chirality")}))
    for bond in a.bonds:
        out.add_bond(bond.a, bond.b, bond.order, bond.aromatic)
    off = len(a.atoms)
    for atom in b.atoms:
        out.add_atom(rc.PAtom(**{k: getattr(atom, k) for k in
                                 ("z", "charge", "isotope", "explicit_h",
                                  "aromatic", "bracket", "chirality")}))
    for bond in b.bonds:
        out.add_bond(bond.a + off, bond.b + off, bond.order, bond.aromatic)
    return out, off


def open_positions(mol: rc.PMol) -> list[int]:
    """Atoms that can take one more single bond."""
    out = []
    for i, atom in enumerate(mol.atoms):
        if atom.bracket:
            continue
        allowed = rc.allowed_valences(atom.z, atom.charge)
        if not allowed:
            continue
        sigma = 0
        for _, bond in mol.neighbors(i):
            sigma += 1 if bond.aromatic else bond.order
        if atom.aromatic:
            sym = rc.SYMBOLS[atom.z]
            if sym == "C" and mol.degree(i) == 2:
                out.append(i)  # aromatic CH
            continue
        if sigma + 1 <= max(allowed):
            out.append(i)
    return out


def build_molecule(rng: random.Random) -> str | None:
    kind = rng.random()
    try:
        if kind < 0.10:
            base = graph_of(rng.choice(CHAINS))
        else:
            base = graph_of(rng.choice(SCAFFOLDS))
            n_parts = rng.choice([0, 1, 1, 1, 2, 2])
            for _ in range(n_parts):
                part = graph_of(rng.choice(SCAFFOLDS))
                linker = rng.choice(LINKERS + [""])
                if linker:
                    part_with_linker, off = merge(graph_of(linker), part)
                    la = open_positions(part_with_linker)
                    lb = [i for i in la if i >= off]
                    lh = [i for i in la if i < off]
                    if not lb or not lh:
                        continue
                    part_with_linker.add_bond(rng.choice(lh), rng.choice(lb), 1)
                    part = part_with_linker
                spots_a = open_positions(base)
                spots_b = open_positions(part)
                if not spots_a or not spots_b:
                    continue
                joined, off = merge(base, part)
                joined.add_bond(rng.choice(spots_a), off + rng.choice(spots_b), 1)
                base = joined
        # decorate
        for _ in range(rng.choice([1, 1, 2, 2, 2, 3, 3, 4, 5])):
            spots = open_positions(base)
            if not spots:
                break
            sub = graph_of(rng.choice(SUBSTITUENTS))
            joined, off = merge(base, sub)
            subspots = [i for i in open_positions(joined) if i >= off]
            if not subspots:
                continue
            joined.add_bond(rng.choice(spots), subspots[0], 1)
            base = joined
        # occasional counter-ion
        if rng.random() < 0.02:
            neg = graph_of("CC(=O)[O-]" if rng.random() < 0.5 else "[Cl-]")
            pos = graph_of("[Na+]")
            base, _ = merge(base, neg)
            base, _ = merge(base, pos)
        # occasional isotope label
        smiles = rc.write_smiles(rc.finalize(base))
        if rng.random() < 0.003 and smiles.startswith("C") and not smiles.startswith("Cl"):
            smiles = "[13CH3]" + smiles[1:].lstrip()
            if not rc.is_valid(smiles):
                return None
        mol = rc.parse(smiles)  # round-trip gate
        if not (2 <= len(mol.atoms) <= 60):
            return None
        return smiles
    except Exception:
        return None


def main() -> None:
    rng = random.Random(20260401)
    seen = set()
    corpus = []
    attempts = 0
    raw_seen = set()
    while len(corpus) < 10000 and attempts < 200000:
        attempts += 1
        s = build_molecule(rng)
        if s is None or s in raw_seen:
            continue
        raw_seen.add(s)
        key = rc.canonical(s)
        if key in seen:
            continue
        seen.add(key)
        corpus.append(s)
    assert len(corpus) == 10000, f"only {len(corpus)} molecules after {attempts} attempts"
    with open("share/chemforge/corpus_10k.smi", "w") as fh:
        fh.write("# desk-scale molecule corpus, one SMILES per line\n")
        fh.write(f"# {len(corpus)} unique molecules, generator seed 20260401\n")
        fh.write("\n".join(corpus) + "\n")
    print(f"wrote {len(corpus)} molecules after {attempts} attempts")


if __name__ == "__main__":
    main()
