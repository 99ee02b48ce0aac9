#!/usr/bin/env python3
"""Generate the frozen oracle label files.

 - tests/data/validity_labels.tsv: 500 strings labeled valid/invalid. Valid
   entries are random renderings of corpus molecules (valid by construction);
   invalid entries are systematic corruptions whose failure mode is known by
   construction. Every label is double-checked with the reference parser.
 - tests/data/descriptor_reference.tsv: 500 corpus molecules with reference
   descriptor values computed by the independent Python implementation.
"""

from __future__ import annotations

import random
import sys

sys.path.insert(0, "scripts")
import refchem as rc


def corpus() -> list[str]:
    out = []
    for line in open("share/chemforge/corpus_10k.smi"):
        line = line.strip()
        if line and not line.startswith("#"):
            out.append(line)
    return out


INVALID_FIXED = [
    # malformed syntax
    "C(C(C", "CC)C", "C1CC", "C12CC1", "C%1CC", "C==C", "C--C", "C..C", ".CC",
    "CC.", "C(", ")C", "[", "]", "[]", "[13]", "[+]", "[C@@@]", "[CH5]",
    "[OH3]", "C[", "%12", "C%gh", "C=", "=C", "C#", "C((C))C(", "[C", "C]",
    # unknown elements / bad symbols
    "Xx", "[Zz]", "[Qq]", "Qc1ccccc1", "[Lv2]", "c1ccccc1X", "[He@H]",
    # valence violations
    "C(C)(C)(C)(C)C", "O=O=O", "O(C)(C)C", "F=C", "N(=O)(=O)=O", "FF(F)F",
    "ClC(=O)(=O)(=O)Cl", "[NH6]", "[CH2-3]", "S(F)(F)(F)(F)(F)(F)F",
    "O#C", "N#N#N", "I=C", "BrBr(Br)Br", "[SH7]", "[PH6]",
    # aromatic system errors
    "cc", "c1ccnc1", "c1ccc1c", "c1cc[o+]c1C", "n1ccccc1C(", "C:C",
    "c1cccco1", "[nH]1cccc1c2ccccc2(", "o1ccc1",
    # stereo conflicts
    "F/C(\\Cl)=C/F", "C/C(=C/F)\\C=C", "F/C=C\\/F",
]


def random_corruption(s: str, rng: random.Random) -> str | None:
    mode = rng.randrange(6)
    if mode == 0:  # unbalance a parenthesis
        if "(" in s:
            k = s.index("(")
            return s[:k] + s[k + 1:]
        return s + "("
    if mode == 1:  # orphan ring digit
        return s + "1" if not s.endswith("1") else s + "9"
    if mode == 2:  # pentavalent carbon graft
        return "C(C)(C)(C)(C)" + s
    if mode == 3:  # bad bracket
        return s + "[Zz]"
    if mode == 4:  # dangling bond
        return s + "="
    if mode == 5:  # duplicate bond via ring closure
        return "C11" + s
    return None


def build_validity(rng: random.Random, mols: list[str]) -> list[tuple[str, int]]:
    rows: list[tuple[str, int]] = []
    picks = rng.sample(mols, 300)
    for i, base in enumerate(picks):
        mol = rc.parse(base)
        prio = list(range(len(mol.atoms)))
        rng.shuffle(prio)
        rendering = rc.write_smiles(mol, prio)
        assert rc.is_valid(rendering), rendering
        rows.append((rendering, 1))

    corruptions = list(INVALID_FIXED)
    while len(corruptions) < 200:
        s = random_corruption(rng.choice(mols), rng)
        if s and not rc.is_valid(s):
            corruptions.append(s)
    for s in corruptions[:200]:
        assert not rc.is_valid(s), s
        rows.append((s, 0))
    rng.shuffle(rows)
    return rows


def build_reference(rng: random.Random, mols: list[str]) -> list[str]:
    classics = [
        "CC(=O)Oc1ccccc1C(=O)O", "CC(=O)Nc1ccc(O)cc1", "c1ccccc1", "CCO",
        "c1ccncc1", "Nc1ccccc1", "O=[N+]([O-])c1ccccc1", "CC(C)Cc1ccc(cc1)C(C)C(=O)O",
        "CN1CCC[C@H]1c1cccnc1", "OC(=O)c1ccccc1O", "Clc1ccc(Cl)cc1",
        "CC(C)(C)NCC(O)c1ccc(O)c(CO)c1", "NCCc1ccc(O)c(O)c1", "OCC(O)CO",
        "CC(N)C(=O)O", "c1ccc2c(c1)cccc2O", "CSCC[C@H](N)C(=O)O", "OCCN",
        "FC(F)(F)c1ccccc1", "CCOC(=O)c1ccccc1N",
    ]
    picks = classics + rng.sample(mols, 500 - len(classics))
    ent, hyd = rc.load_crippen("share/chemforge/crippen_logp.tsv")
    tpsa_table = rc.load_tpsa_table("share/chemforge/tpsa.tsv")
    alerts = [rc.Smarts(line.split("\t")[0])
              for line in open("share/chemforge/qed_alerts.smarts")
              if line.strip() and not line.startswith("#")]
    ads = rc.load_qed("share/chemforge/qed_params.tsv")
    try:
        sa_table = rc.load_sa_table("share/chemforge/sa_fragments.bin")
    except FileNotFoundError:
        sa_table = None

    rows = ["smiles\tmw\thbd\thba\trotb\tarom_rings\tlogp\ttpsa\talerts\tqed\tsa"]
    for s in picks:
        mol = rc.parse(s)
        mw = rc.molecular_weight(mol)
        hbd = rc.h_donors(mol)
        hba = rc.h_acceptors(mol)
        rotb = rc.rotatable_bonds(mol)
        arom = rc.aromatic_rings(mol)
        logp = rc.crippen_logp(mol, ent, hyd)
        psa = rc.tpsa(mol, tpsa_table)
        n_alerts = sum(1 for p in alerts if p.has_match(mol))
        qed = rc.qed_value({"MW": mw, "ALOGP": logp, "HBA": hba, "HBD": hbd,
                            "PSA": psa, "ROTB": rotb, "AROM": arom,
                            "ALERTS": n_alerts}, ads)
        sa = rc.sa_score(mol, sa_table) if sa_table else float("nan")
        rows.append(f"{s}\t{mw:.6f}\t{hbd}\t{hba}\t{rotb}\t{arom}\t"
                    f"{logp:.6f}\t{psa:.6f}\t{n_alerts}\t{qed:.6f}\t{sa:.6f}")
    return rows


def main() -> None:
    rng = random.Random(777)
    mols = corpus()

    rows = build_validity(rng, mols)
    assert len(rows) == 500
    with open("tests/data/validity_labels.tsv", "w") as fh:
        fh.write("# string <TAB> 1=validguess 0=invalid, labels fixed by construction\n")
        for s, label in rows:
            fh.write(f"{s}\t{label}\n")

    ref = build_reference(rng, mols)
    with open("tests/data/descriptor_reference.tsv", "w") as fh:
        fh.write("\n".join(ref) + "\n")
    print("labels and reference written")


if __name__ == "__main__":
    main()
