#!/usr/bin/env python3
"""Generate the default 268-token atom-level vocabulary file.

Layout: 4 specials, 118 element symbols, 8 aromatic lowercase forms,
10 digits, 18 structural characters, then reserved slots padding the
inventory to exactly 268 entries.
"""

ELEMENTS = [
    "H", "He", "Li", "Be", "B", "C", "N", "O", "F", "Ne",
    "Na", "Mg", "Al", "Si", "P", "S", "Cl", "Ar", "K", "Ca",
    "Sc", "Ti", "V", "Cr", "Mn", "Fe", "Co", "Ni", "Cu", "Zn",
    "Ga", "Ge", "As", "Se", "Br", "Kr", "Rb", "Sr", "Y", "Zr",
    "Nb", "Mo", "Tc", "Ru", "Rh", "Pd", "Ag", "Cd", "In", "Sn",
    "Sb", "Te", "I", "Xe", "Cs", "Ba", "La", "Ce", "Pr", "Nd",
    "Pm", "Sm", "Eu", "Gd", "Tb", "Dy", "Ho", "Er", "Tm", "Yb",
    "Lu", "Hf", "Ta", "W", "Re", "Os", "Ir", "Pt", "Au", "Hg",
    "Tl", "Pb", "Bi", "Po", "At", "Rn", "Fr", "Ra", "Ac", "Th",
    "Pa", "U", "Np", "Pu", "Am", "Cm", "Bk", "Cf", "Es", "Fm",
    "Md", "No", "Lr", "Rf", "Db", "Sg", "Bh", "Hs", "Mt", "Ds",
    "Rg", "Cn", "Nh", "Fl", "Mc", "Lv", "Ts", "Og",
]

AROMATIC = ["b", "c", "n", "o", "p", "s", "se", "as"]
DIGITS = [str(d) for d in range(10)]
STRUCTURAL = ["(", ")", "[", "]", "=", "#", "$", "/", "\\", ".",
              "-", "+", "@", "@@", ":", "~", "*", "%"]
TARGET = 268


def main() -> None:
    tokens = ["[BOS]", "[EOS]", "[PAD]", "[UNK]"]
    tokens += ELEMENTS + AROMATIC + DIGITS + STRUCTURAL
    assert len(tokens) <= TARGET, len(tokens)
    tokens += [f"[RES_{k}]" for k in range(TARGET - len(tokens))]
    assert len(tokens) == TARGET
    assert len(set(tokens)) == TARGET
    with open("share/chemforge/vocab_268.txt", "w") as fh:
        fh.write("\n".join(tokens) + "\n")
    print(f"wrote {len(tokens)} tokens")


if __name__ == "__main__":
    main()
