#!/usr/bin/env python3
"""Reference cheminformatics implementation used to build oracle label files.

This is an independent implementation of the same specifications as the C++
library (valence model, aromaticity perception, descriptor definitions). It is
deliberately written from scratch so the two code paths can cross-check each
other; the only shared inputs are the published parameter tables under
share/chemforge/.
"""

from __future__ import annotations

import gzip
import math
import re
import struct
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

# --- element data -----------------------------------------------------------

SYMBOLS = [
    "*", "H", "He", "Li", "Be", "B", "C", "N", "O", "F", "Ne", "Na", "Mg",
    "Al", "Si", "P", "S", "Cl", "Ar", "K", "Ca", "Sc", "Ti", "V", "Cr", "Mn",
    "Fe", "Co", "Ni", "Cu", "Zn", "Ga", "Ge", "As", "Se", "Br", "Kr", "Rb",
    "Sr", "Y", "Zr", "Nb", "Mo", "Tc", "Ru", "Rh", "Pd", "Ag", "Cd", "In",
    "Sn", "Sb", "Te", "I", "Xe", "Cs", "Ba", "La", "Ce", "Pr", "Nd", "Pm",
    "Sm", "Eu", "Gd", "Tb", "Dy", "Ho", "Er", "Tm", "Yb", "Lu", "Hf", "Ta",
    "W", "Re", "Os", "Ir", "Pt", "Au", "Hg", "Tl", "Pb", "Bi", "Po", "At",
    "Rn", "Fr", "Ra", "Ac", "Th", "Pa", "U", "Np", "Pu", "Am", "Cm", "Bk",
    "Cf", "Es", "Fm", "Md", "No", "Lr", "Rf", "Db", "Sg", "Bh", "Hs", "Mt",
    "Ds", "Rg", "Cn", "Nh", "Fl", "Mc", "Lv", "Ts", "Og",
]
Z_OF = {s: i for i, s in enumerate(SYMBOLS)}

WEIGHTS = {
    "H": 1.008, "He": 4.0026, "Li": 6.94, "Be": 9.0122, "B": 10.81,
    "C": 12.011, "N": 14.007, "O": 15.999, "F": 18.998, "Ne": 20.180,
    "Na": 22.990, "Mg": 24.305, "Al": 26.982, "Si": 28.085, "P": 30.974,
    "S": 32.06, "Cl": 35.45, "Ar": 39.95, "K": 39.098, "Ca": 40.078,
    "Ga": 69.723, "Ge": 72.630, "As": 74.922, "Se": 78.971, "Br": 79.904,
    "I": 126.90, "Sn": 118.71, "Sb": 121.76, "Te": 127.60, "Xe": 131.29,
    "Si2": 0.0,
}

VALENCES = {
    "H": (1,), "He": (0,), "Li": (1,), "Be": (2,), "B": (3,), "C": (4,),
    "N": (3, 5), "O": (2,), "F": (1,), "Ne": (0,), "Na": (1,), "Mg": (2,),
    "Al": (3,), "Si": (4,), "P": (3, 5), "S": (2, 4, 6), "Cl": (1,),
    "Ar": (0,), "K": (1,), "Ca": (2,), "Ga": (3,), "Ge": (4,),
    "As": (3, 5), "Se": (2, 4, 6), "Br": (1,), "Kr": (0, 2), "Rb": (1,),
    "Sr": (2,), "In": (3,), "Sn": (2, 4), "Sb": (3, 5), "Te": (2, 4, 6),
    "I": (1,), "Xe": (0, 2, 4, 6), "Cs": (1,), "Ba": (2,), "Tl": (1, 3),
    "Pb": (2, 4), "Bi": (3, 5), "Po": (2, 4, 6), "At": (1,), "Rn": (0,),
    "Fr": (1,), "Ra": (2,),
}

ORGANIC = {"B", "C", "N", "O", "P", "S", "F", "Cl", "Br", "I"}
AROMATIC_OK = {"B", "C", "N", "O", "P", "S", "Se", "As"}


def allowed_valences(z: int, charge: int) -> Tuple[int, ...]:
    sym = SYMBOLS[z]
    if charge == 0:
        return VALENCES.get(sym, ())
    eff = z - charge
    if eff <= 0:
        return (0,)
    if eff >= len(SYMBOLS):
        return ()
    return VALENCES.get(SYMBOLS[eff], ())


class ParseFailure(ValueError):
    pass


@dataclass
class PAtom:
    z: int
    charge: int = 0
    isotope: int = 0
    explicit_h: Optional[int] = None
    implicit_h: int = 0
    aromatic: bool = False
    bracket: bool = False
    chirality: Optional[str] = None  # "@" or "@@"

    def total_h(self) -> int:
        return self.explicit_h if self.explicit_h is not None else self.implicit_h


@dataclass
class PBond:
    a: int
    b: int
    order: int  # 1, 2, 3
    aromatic: bool = False
    direction: int = 0  # +1 '/', -1 '\' in a->b sense

    def other(self, i: int) -> int:
        return self.b if i == self.a else self.a


@dataclass
class PMol:
    atoms: List[PAtom] = field(default_factory=list)
    bonds: List[PBond] = field(default_factory=list)
    adj: List[List[int]] = field(default_factory=list)
    rings: List[List[int]] = field(default_factory=list)
    atom_ring_bonds: List[int] = field(default_factory=list)
    atom_min_ring: List[int] = field(default_factory=list)
    bond_cyclic: List[bool] = field(default_factory=list)
    stereo_nbrs: Dict[int, List[int]] = field(default_factory=dict)

    def add_atom(self, atom: PAtom) -> int:
        self.atoms.append(atom)
        self.adj.append([])
        return len(self.atoms) - 1

    def add_bond(self, a: int, b: int, order: int, aromatic: bool = False,
                 direction: int = 0) -> int:
        if a == b:
            raise ParseFailure("self bond")
        for bi in self.adj[a]:
            if self.bonds[bi].other(a) == b:
                raise ParseFailure("duplicate bond")
        self.bonds.append(PBond(a, b, order, aromatic, direction))
        idx = len(self.bonds) - 1
        self.adj[a].append(idx)
        self.adj[b].append(idx)
        return idx

    def degree(self, i: int) -> int:
        return len(self.adj[i])

    def in_ring(self, i: int) -> bool:
        return self.atom_ring_bonds[i] > 0

    def order_sum(self, i: int) -> int:
        return sum(self.bonds[bi].order for bi in self.adj[i])

    def neighbors(self, i: int):
        for bi in self.adj[i]:
            yield self.bonds[bi].other(i), self.bonds[bi]


# --- ring perception ----------------------------------------------------------

def perceive_rings(mol: PMol) -> None:
    n, m = len(mol.atoms), len(mol.bonds)
    mol.atom_ring_bonds = [0] * n
    mol.atom_min_ring = [0] * n
    mol.bond_cyclic = [False] * m
    mol.rings = []
    if m == 0:
        return

    # cycle bonds: a bond is cyclic iff removing it keeps endpoints connected
    def connected_without(bond_idx: int) -> bool:
        bond = mol.bonds[bond_idx]
        seen = {bond.a}
        stack = [bond.a]
        while stack:
            u = stack.pop()
            if u == bond.b:
                return True
            for bi in mol.adj[u]:
                if bi == bond_idx:
                    continue
                v = mol.bonds[bi].other(u)
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        return False

    candidates = []
    for bi, bond in enumerate(mol.bonds):
        if not connected_without(bi):
            continue
        mol.bond_cyclic[bi] = True
        mol.atom_ring_bonds[bond.a] += 1
        mol.atom_ring_bonds[bond.b] += 1
        # shortest cycle through this bond via BFS avoiding it
        prev = {bond.a: None}
        queue = [bond.a]
        while queue and bond.b not in prev:
            nxt = []
            for u in queue:
                for bj in mol.adj[u]:
                    if bj == bi:
                        continue
                    v = mol.bonds[bj].other(u)
                    if v not in prev:
                        prev[v] = (u, bj)
                        nxt.append(v)
            queue = nxt
        if bond.b not in prev:
            continue
        path = [bond.b]
        cur = bond.b
        edge_set = {bi}
        while prev[cur] is not None:
            cur, bj = prev[cur]
            edge_set.add(bj)
            path.append(cur)
        candidates.append((sorted(edge_set), path))

    # SSSR-style greedy independent subset over GF(2)
    candidates.sort(key=lambda c: len(c[1]))
    target = m - n + count_components(mol)
    basis: List[int] = []  # bitmasks
    seen_sets = set()
    for edges, path in candidates:
        key = tuple(edges)
        if key in seen_sets:
            continue
        seen_sets.add(key)
        for a in path:
            if mol.atom_min_ring[a] == 0 or len(path) < mol.atom_min_ring[a]:
                mol.atom_min_ring[a] = len(path)
        if len(mol.rings) >= target:
            continue
        vec = 0
        for e in edges:
            vec |= 1 << e
        red = vec
        for b in basis:
            red = min(red, red ^ b)
        if red:
            basis.append(red)
            basis.sort(reverse=True)
            mol.rings.append(path)


def count_components(mol: PMol) -> int:
    seen = set()
    comps = 0
    for s in range(len(mol.atoms)):
        if s in seen:
            continue
        comps += 1
        stack = [s]
        seen.add(s)
        while stack:
            u = stack.pop()
            for v, _ in mol.neighbors(u):
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
    return comps


# --- kekulization + aromaticity -------------------------------------------------

def kekulize(mol: PMol) -> None:
    required = set()
    for i, atom in enumerate(mol.atoms):
        if not atom.aromatic:
            continue
        if not mol.in_ring(i):
            raise ParseFailure("aromatic atom outside ring")
        sigma = atom.explicit_h or 0
        exo_multiple = False
        for _, bond in mol.neighbors(i):
            if bond.aromatic:
                sigma += 1
            else:
                sigma += bond.order
                if bond.order > 1:
                    exo_multiple = True
        if atom.bracket:
            allowed = allowed_valences(atom.z, atom.charge)
            if not allowed or sigma in allowed:
                continue
            if sigma + 1 in allowed:
                required.add(i)
            else:
                raise ParseFailure("aromatic bracket atom cannot kekulize")
        else:
            sym = SYMBOLS[atom.z]
            if sym == "C" and not exo_multiple:
                required.add(i)
            elif sym in ("N", "P") and mol.degree(i) == 2 and not exo_multiple:
                required.add(i)

    nbrs = {i: [] for i in required}
    arom_bonds = []
    for bi, bond in enumerate(mol.bonds):
        if bond.aromatic:
            arom_bonds.append(bi)
            if bond.a in required and bond.b in required:
                nbrs[bond.a].append(bond.b)
                nbrs[bond.b].append(bond.a)

    match: Dict[int, int] = {}
    order = sorted(required)

    def backtrack(k: int) -> bool:
        while k < len(order) and order[k] in match:
            k += 1
        if k == len(order):
            return True
        u = order[k]
        for v in nbrs[u]:
            if v in match:
                continue
            match[u] = v
            match[v] = u
            if backtrack(k + 1):
                return True
            del match[u], match[v]
        return False

    if not backtrack(0):
        raise ParseFailure("cannot kekulize aromatic system")
    for bi in arom_bonds:
        bond = mol.bonds[bi]
        bond.order = 2 if match.get(bond.a) == bond.b else 1


def assign_hydrogens(mol: PMol) -> None:
    for i, atom in enumerate(mol.atoms):
        total = mol.order_sum(i)
        allowed = allowed_valences(atom.z, atom.charge)
        if atom.bracket or atom.explicit_h is not None:
            atom.implicit_h = 0
            h = atom.explicit_h or 0
            if allowed and (total + h) not in allowed:
                raise ParseFailure(
                    f"valence {total + h} not allowed for {SYMBOLS[atom.z]}")
        else:
            if not allowed:
                atom.implicit_h = 0
                continue
            fits = [v for v in allowed if v >= total]
            if not fits:
                raise ParseFailure(f"valence overflow on {SYMBOLS[atom.z]}")
            atom.implicit_h = min(fits) - total


def perceive_aromaticity(mol: PMol) -> None:
    for atom in mol.atoms:
        atom.aromatic = False
    for bond in mol.bonds:
        bond.aromatic = False

    def pi(i: int) -> Optional[int]:
        atom = mol.atoms[i]
        ring_double = exo_multiple = triple = False
        for bi in mol.adj[i]:
            bond = mol.bonds[bi]
            if bond.order == 3:
                triple = True
            if bond.order == 2:
                if mol.bond_cyclic[bi]:
                    ring_double = True
                else:
                    exo_multiple = True
        if triple:
            return None
        conn = mol.degree(i) + atom.total_h()
        sym = SYMBOLS[atom.z]
        if sym == "C":
            if ring_double:
                return 1
            if exo_multiple:
                return 0
            if conn == 3 and atom.charge == -1:
                return 2
            if conn == 3 and atom.charge == 1:
                return 0
            return None
        if sym == "B":
            return 1 if ring_double else (0 if conn <= 3 else None)
        if sym in ("N", "P", "As"):
            if ring_double:
                return 1
            if exo_multiple:
                return 0
            if conn == 3 and atom.charge <= 0:
                return 2
            if conn == 2 and atom.charge == -1:
                return 2
            return None
        if sym in ("O", "S", "Se"):
            if ring_double:
                return 1
            if exo_multiple and sym != "O":
                return 0
            if conn == 2:
                return 2
            return None
        return None

    pis = {i: pi(i) for i in range(len(mol.atoms)) if mol.in_ring(i)}

    def mark(atoms: Sequence[int]) -> None:
        aset = set(atoms)
        for a in atoms:
            mol.atoms[a].aromatic = True
        for bi, bond in enumerate(mol.bonds):
            if mol.bond_cyclic[bi] and bond.a in aset and bond.b in aset:
                bond.aromatic = True

    def huckel(atoms: Sequence[int]) -> bool:
        total = 0
        for a in atoms:
            p = pis.get(a)
            if p is None:
                return False
            total += p
        return total % 4 == 2

    done = []
    for ring in mol.rings:
        ok = huckel(ring)
        if ok:
            mark(ring)
        done.append(ok)
    for r in range(len(mol.rings)):
        for s in range(r + 1, len(mol.rings)):
            if done[r] and done[s]:
                continue
            merged = list(dict.fromkeys(mol.rings[r] + mol.rings[s]))
            if len(merged) == len(mol.rings[r]) + len(mol.rings[s]):
                continue  # not fused
            if huckel(merged):
                mark(merged)


def check_bond_directions(mol: PMol) -> None:
    for bi, bond in enumerate(mol.bonds):
        if bond.order != 2 or bond.aromatic:
            continue
        for end in (bond.a, bond.b):
            sides = []
            for bj in mol.adj[end]:
                nb = mol.bonds[bj]
                if bj == bi or nb.direction == 0 or nb.order != 1:
                    continue
                s = nb.direction
                if nb.a == nb.other(end):  # neighbor written first
                    s = -s
                sides.append(s)
            if len(sides) == 2 and sides[0] == sides[1]:
                raise ParseFailure("conflicting bond direction marks")


def finalize(mol: PMol) -> PMol:
    perceive_rings(mol)
    for bi, bond in enumerate(mol.bonds):
        if bond.aromatic and not mol.bond_cyclic[bi]:
            bond.aromatic = False
            bond.order = 1
    kekulize(mol)
    assign_hydrogens(mol)
    perceive_aromaticity(mol)
    check_bond_directions(mol)
    return mol


# --- SMILES parser --------------------------------------------------------------

BRACKET_RE = re.compile(
    r"\[(\d+)?(\*|[A-Z][a-z]?|as|se|[bcnops])(@{1,2})?(H\d?)?([+-]\d|[+-]+)?(:\d+)?\]")


def parse(smiles: str) -> PMol:
    if not smiles:
        raise ParseFailure("empty input")
    mol = PMol()
    prev = -1
    pending: Optional[str] = None
    stack: List[int] = []
    rings: Dict[int, Tuple[int, Optional[str]]] = {}
    i = 0
    n = len(smiles)

    def bond_args(symbol: Optional[str], a: int, b: int):
        if symbol is None:
            arom = mol.atoms[a].aromatic and mol.atoms[b].aromatic
            return 1, arom, 0
        if symbol == "-":
            return 1, False, 0
        if symbol == "/":
            return 1, False, +1
        if symbol == "\\":
            return 1, False, -1
        if symbol == "=":
            return 2, False, 0
        if symbol == "#":
            return 3, False, 0
        if symbol == ":":
            if not (mol.atoms[a].aromatic and mol.atoms[b].aromatic):
                raise ParseFailure("':' bond outside aromatic system")
            return 1, True, 0
        raise ParseFailure(f"bad bond symbol {symbol}")

    def attach(idx: int):
        nonlocal prev, pending
        if prev >= 0:
            order, arom, direction = bond_args(pending, prev, idx)
            mol.add_bond(prev, idx, order, arom, direction)
        elif pending is not None:
            raise ParseFailure("bond with no previous atom")
        pending = None
        prev = idx

    while i < n:
        c = smiles[i]
        if c == "(":
            if prev < 0 or pending is not None:
                raise ParseFailure("bad branch open")
            stack.append(prev)
            i += 1
        elif c == ")":
            if not stack or pending is not None:
                raise ParseFailure("bad branch close")
            prev = stack.pop()
            i += 1
        elif c in "-=#:/\\":
            if pending is not None:
                raise ParseFailure("double bond symbol")
            pending = c
            i += 1
        elif c == ".":
            if pending is not None or stack or prev < 0:
                raise ParseFailure("bad dot")
            prev = -1
            i += 1
        elif c.isdigit() or c == "%":
            if c == "%":
                if i + 2 >= n or not smiles[i + 1].isdigit() or not smiles[i + 2].isdigit():
                    raise ParseFailure("bad %% ring number")
                num = int(smiles[i + 1:i + 3])
                i += 3
            else:
                num = int(c)
                i += 1
            if prev < 0:
                raise ParseFailure("ring digit before atom")
            if num not in rings:
                rings[num] = (prev, pending)
                pending = None
            else:
                opener, sym0 = rings.pop(num)
                sym1 = pending
                pending = None
                if sym1 in ("/", "\\"):
                    sym1 = "/" if sym1 == "\\" else "\\"
                if sym0 and sym1 and sym0 != sym1:
                    raise ParseFailure("ring bond symbol clash")
                symbol = sym0 or sym1
                order, arom, direction = bond_args(symbol, opener, prev)
                mol.add_bond(opener, prev, order, arom, direction)
        elif c == "[":
            match = BRACKET_RE.match(smiles, i)
            if not match:
                raise ParseFailure("bad bracket atom")
            iso, sym, chir, hs, chg, amap = match.groups()
            if amap is not None:
                raise ParseFailure("atom maps rejected")
            if sym == "*":
                raise ParseFailure("wildcard atom")
            aromatic = sym[0].islower()
            zsym = sym.capitalize() if aromatic else sym
            if zsym not in Z_OF:
                raise ParseFailure(f"unknown element {sym}")
            if aromatic and zsym not in AROMATIC_OK:
                raise ParseFailure("element has no aromatic form")
            h = 0
            if hs:
                h = int(hs[1:]) if len(hs) > 1 else 1
            charge = 0
            if chg:
                if chg[0] in "+-" and len(chg) == 2 and chg[1].isdigit():
                    charge = int(chg[1]) * (1 if chg[0] == "+" else -1)
                else:
                    charge = chg.count("+") - chg.count("-")
            atom = PAtom(z=Z_OF[zsym], charge=charge, isotope=int(iso or 0),
                         explicit_h=h, aromatic=aromatic, bracket=True,
                         chirality=chir)
            idx = mol.add_atom(atom)
            attach(idx)
            i = match.end()
        else:
            sym = None
            if smiles[i:i + 2] in ("Cl", "Br"):
                sym = smiles[i:i + 2]
            elif c in "BCNOPSFI":
                sym = c
            elif c in "bcnops":
                sym = c
            else:
                raise ParseFailure(f"unexpected character {c!r}")
            aromatic = sym[0].islower()
            zsym = sym.upper() if aromatic else sym
            idx = mol.add_atom(PAtom(z=Z_OF[zsym], aromatic=aromatic))
            attach(idx)
            i += len(sym)

    if stack or pending is not None or rings:
        raise ParseFailure("dangling structure")
    if not mol.atoms or prev < 0:
        raise ParseFailure("no atoms or trailing dot")

    # fold plain explicit hydrogens
    fold = [
        i for i, a in enumerate(mol.atoms)
        if a.z == 1 and a.isotope == 0 and a.charge == 0 and not a.chirality
        and (a.explicit_h or 0) == 0 and mol.degree(i) == 1
        and mol.bonds[mol.adj[i][0]].order == 1
        and not mol.bonds[mol.adj[i][0]].aromatic
        and mol.bonds[mol.adj[i][0]].direction == 0
        and mol.atoms[mol.bonds[mol.adj[i][0]].other(i)].z > 1
    ]
    if fold:
        keep = [i for i in range(len(mol.atoms)) if i not in set(fold)]
        remap = {old: new for new, old in enumerate(keep)}
        extra: Dict[int, int] = {}
        for i in fold:
            nbr = mol.bonds[mol.adj[i][0]].other(i)
            extra[nbr] = extra.get(nbr, 0) + 1
        rebuilt = PMol()
        for old in keep:
            a = mol.atoms[old]
            if old in extra:
                a.explicit_h = (a.explicit_h or 0) + extra[old]
                a.bracket = True
            rebuilt.add_atom(a)
        for bond in mol.bonds:
            if bond.a in remap and bond.b in remap:
                rebuilt.add_bond(remap[bond.a], remap[bond.b], bond.order,
                                 bond.aromatic, bond.direction)
        mol = rebuilt

    return finalize(mol)


def is_valid(smiles: str) -> bool:
    try:
        parse(smiles)
        return True
    except Exception:
        return False


# --- writer (non-canonical; used by the corpus generator) -----------------------

def write_smiles(mol: PMol, priority: Optional[List[int]] = None) -> str:
    n = len(mol.atoms)
    prio = priority if priority is not None else list(range(n))
    visited = [False] * n
    parent_bond = [-1] * n
    children: List[List[int]] = [[] for _ in range(n)]
    opens: List[List[int]] = [[] for _ in range(n)]
    closes: List[List[int]] = [[] for _ in range(n)]
    emitted_bonds = set()
    order_visit: List[int] = []

    roots = sorted(range(n), key=lambda i: prio[i])
    for root in roots:
        if visited[root]:
            continue
        stack = [(root, -1)]
        visited[root] = True
        order_visit.append(root)
        parent_bond[root] = -1
        # iterative DFS with child ordering
        frame = [(root, iter(sorted(mol.adj[root],
                                    key=lambda bi: prio[mol.bonds[bi].other(root)])))]
        while frame:
            u, it = frame[-1]
            advanced = False
            for bi in it:
                if bi == parent_bond[u] or bi in emitted_bonds:
                    continue
                v = mol.bonds[bi].other(u)
                if not visited[v]:
                    visited[v] = True
                    order_visit.append(v)
                    parent_bond[v] = bi
                    children[u].append(bi)
                    emitted_bonds.add(bi)
                    frame.append((v, iter(sorted(mol.adj[v],
                                                 key=lambda bj: prio[mol.bonds[bj].other(v)]))))
                    advanced = True
                    break
                else:
                    emitted_bonds.add(bi)
                    opens[u if order_visit.index(u) < order_visit.index(v) else v].append(bi)
                    closes[v if order_visit.index(u) < order_visit.index(v) else u].append(bi)
            if not advanced:
                frame.pop()

    # digits assigned in walk order, reusing freed ones
    open_digit: Dict[int, int] = {}
    free = list(range(1, 100))
    for a in order_visit:
        for bi in closes[a]:
            if bi in open_digit:
                free.append(open_digit[bi])
                free.sort()
        for bi in opens[a]:
            open_digit[bi] = free.pop(0)

    def h_would_be(i: int) -> int:
        atom = mol.atoms[i]
        sym = SYMBOLS[atom.z]
        if sym not in ORGANIC or atom.charge or atom.isotope:
            return -1
        if atom.aromatic and sym not in ("B", "C", "N", "O", "P", "S"):
            return -1
        sigma = 0
        exo = False
        for _, bond in mol.neighbors(i):
            if bond.aromatic:
                sigma += 1
            else:
                sigma += bond.order
                if bond.order > 1:
                    exo = True
        extra = 0
        if atom.aromatic:
            if sym == "C":
                extra = 0 if exo else 1
            elif sym in ("N", "P"):
                extra = 1 if (mol.degree(i) == 2 and not exo) else 0
        total = sigma + extra
        fits = [v for v in allowed_valences(atom.z, 0) if v >= total]
        return (min(fits) - total) if fits else -1

    def atom_token(i: int) -> str:
        atom = mol.atoms[i]
        sym = SYMBOLS[atom.z]
        if atom.aromatic:
            sym = sym.lower()
        need = (atom.isotope or atom.charge or atom.z == 1
                or SYMBOLS[atom.z] not in ORGANIC
                or h_would_be(i) != atom.total_h()
                or (atom.aromatic and SYMBOLS[atom.z] not in
                    ("B", "C", "N", "O", "P", "S")))
        if not need:
            return sym
        out = "["
        if atom.isotope:
            out += str(atom.isotope)
        out += sym
        h = atom.total_h()
        if h:
            out += "H" + (str(h) if h > 1 else "")
        if atom.charge:
            mag = abs(atom.charge)
            out += ("+" if atom.charge > 0 else "-") + (str(mag) if mag > 1 else "")
        return out + "]"

    def bond_token(bi: int) -> str:
        bond = mol.bonds[bi]
        if bond.aromatic:
            return ""
        if bond.order == 1:
            if mol.atoms[bond.a].aromatic and mol.atoms[bond.b].aromatic:
                return "-"
            return ""
        return {2: "=", 3: "#"}[bond.order]

    parts: List[str] = []

    def emit(u: int, via: int) -> None:
        if via >= 0:
            parts.append(bond_token(via))
        parts.append(atom_token(u))
        for bi in closes[u]:
            d = open_digit[bi]
            parts.append(("%" + str(d)) if d > 9 else str(d))
        for bi in opens[u]:
            parts.append(bond_token(bi))
            d = open_digit[bi]
            parts.append(("%" + str(d)) if d > 9 else str(d))
        kids = children[u]
        for k, bi in enumerate(kids):
            last = k + 1 == len(kids)
            if not last:
                parts.append("(")
            emit(mol.bonds[bi].other(u), bi)
            if not last:
                parts.append(")")

    first = True
    for a in order_visit:
        if parent_bond[a] == -1:
            if not first:
                parts.append(".")
            first = False
            emit(a, -1)
    return "".join(parts)


def canonical(smiles_or_mol) -> str:
    """Canonical form via iterative refinement; independent of the C++ path."""
    mol = smiles_or_mol if isinstance(smiles_or_mol, PMol) else parse(smiles_or_mol)
    n = len(mol.atoms)
    key = [(a.z, a.charge, a.isotope, a.total_h(), mol.degree(i),
            a.aromatic, mol.atom_ring_bonds[i], mol.atom_min_ring[i])
           for i, a in enumerate(mol.atoms)]
    rank = dense(key)

    def refine(rank):
        while True:
            key2 = []
            for i in range(n):
                nb = sorted((4 if b.aromatic else b.order, rank[v])
                            for v, b in mol.neighbors(i))
                key2.append((rank[i], tuple(nb)))
            new = dense(key2)
            if max(new, default=0) == max(rank, default=0):
                return new
            rank = new

    rank = refine(rank)
    while max(rank, default=0) + 1 < n:
        cells: Dict[int, List[int]] = {}
        for i, r in enumerate(rank):
            cells.setdefault(r, []).append(i)
        target = min(r for r, cell in cells.items() if len(cell) > 1)
        best = None
        for cand in cells[target]:
            trial = [r * 2 + (0 if i == cand else 1) for i, r in enumerate(rank)]
            ref = refine(dense([(t,) for t in trial]))
            sig = sorted((ref[i], mol.atoms[i].z, mol.atoms[i].charge,
                          mol.atoms[i].total_h(),
                          tuple(sorted((4 if b.aromatic else b.order, ref[v])
                                       for v, b in mol.neighbors(i))))
                         for i in range(n))
            if best is None or sig < best[0]:
                best = (sig, ref)
        rank = best[1]
    return write_smiles(mol, rank)


def dense(keys) -> List[int]:
    order = sorted(range(len(keys)), key=lambda i: keys[i])
    rank = [0] * len(keys)
    r = -1
    last = None
    for i in order:
        if last is None or keys[i] != last:
            r += 1
        last = keys[i]
        rank[i] = r
    return rank


# --- descriptors -----------------------------------------------------------------

def molecular_weight(mol: PMol) -> float:
    total = 0.0
    for atom in mol.atoms:
        w = float(atom.isotope) if atom.isotope else WEIGHTS.get(SYMBOLS[atom.z], 0.0)
        total += w + 1.008 * atom.total_h()
    return total


def h_donors(mol: PMol) -> int:
    return sum(1 for a in mol.atoms if SYMBOLS[a.z] in ("N", "O") and a.total_h() >= 1)


def h_acceptors(mol: PMol) -> int:
    count = 0
    for i, atom in enumerate(mol.atoms):
        sym = SYMBOLS[atom.z]
        if sym == "N":
            if atom.charge > 0:
                continue
            if atom.aromatic and (atom.total_h() > 0 or mol.degree(i) == 3):
                continue
            amide = False
            for v, bond in mol.neighbors(i):
                if bond.aromatic or bond.order != 1:
                    continue
                if SYMBOLS[mol.atoms[v].z] in ("C", "S"):
                    for w, b2 in mol.neighbors(v):
                        if b2.order == 2 and not b2.aromatic and \
                                SYMBOLS[mol.atoms[w].z] in ("O", "S"):
                            amide = True
            if not amide:
                count += 1
        elif sym == "O":
            if atom.aromatic:
                continue
            if any(mol.atoms[v].z == 7 and mol.atoms[v].charge > 0
                   for v, _ in mol.neighbors(i)):
                continue
            count += 1
    return count


def rotatable_bonds(mol: PMol) -> int:
    count = 0
    for bi, bond in enumerate(mol.bonds):
        if bond.aromatic or bond.order != 1 or mol.bond_cyclic[bi]:
            continue
        if mol.degree(bond.a) < 2 or mol.degree(bond.b) < 2:
            continue

        def amide(c, nn):
            return (SYMBOLS[mol.atoms[c].z] == "C"
                    and SYMBOLS[mol.atoms[nn].z] == "N"
                    and any(b.order == 2 and not b.aromatic
                            and mol.atoms[v].z == 8
                            for v, b in mol.neighbors(c)))

        if amide(bond.a, bond.b) or amide(bond.b, bond.a):
            continue
        count += 1
    return count


def aromatic_rings(mol: PMol) -> int:
    return sum(1 for ring in mol.rings if all(mol.atoms[a].aromatic for a in ring))


def tpsa(mol: PMol, table: List[tuple], include_s_p: bool = False) -> float:
    total = 0.0
    for i, atom in enumerate(mol.atoms):
        sym = SYMBOLS[atom.z]
        if sym not in ("N", "O") and not (include_s_p and sym in ("S", "P")):
            continue
        singles = doubles = triples = aroms = 0
        for _, bond in mol.neighbors(i):
            if bond.aromatic:
                aroms += 1
            elif bond.order == 1:
                singles += 1
            elif bond.order == 2:
                doubles += 1
            else:
                triples += 1
        in3 = 1 if mol.atom_min_ring[i] == 3 else 0
        for (el, arom, chg, h, s1, d2, t3, ab, r3, val) in table:
            if el != sym or arom != atom.aromatic or chg != atom.charge:
                continue
            if (h, s1, d2, t3, ab) != (atom.total_h(), singles, doubles, triples, aroms):
                continue
            if r3 >= 0 and r3 != in3:
                continue
            total += val
            break
    return total


def load_tpsa_table(path: str) -> List[tuple]:
    rows = []
    for line in open(path):
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.split()
        rows.append((parts[0], int(parts[1]) != 0, int(parts[2]), int(parts[3]),
                     int(parts[4]), int(parts[5]), int(parts[6]), int(parts[7]),
                     int(parts[8]), float(parts[9])))
    return rows


# Minimal SMARTS-subset matcher (independent of the C++ engine)

class SmartsAtom:
    def __init__(self, expr):
        self.expr = expr  # nested tuples

    def test(self, mol: PMol, i: int) -> bool:
        return eval_expr(self.expr, mol, i)


def eval_expr(e, mol: PMol, i: int) -> bool:
    op = e[0]
    a = mol.atoms[i]
    if op == "true":
        return True
    if op == "elem":
        return a.z == e[1]
    if op == "arom":
        return a.aromatic
    if op == "aliph":
        return not a.aromatic
    if op == "charge":
        return a.charge == e[1]
    if op == "H":
        return a.total_h() == e[1]
    if op == "D":
        return mol.degree(i) == e[1]
    if op == "X":
        return mol.degree(i) + a.total_h() == e[1]
    if op == "v":
        return mol.order_sum(i) + a.total_h() == e[1]
    if op == "ring":
        return mol.in_ring(i)
    if op == "ringsize":
        return any(len(r) == e[1] and i in r for r in mol.rings)
    if op == "ringcount":
        return sum(1 for r in mol.rings if i in r) == e[1]
    if op == "not":
        return not eval_expr(e[1], mol, i)
    if op == "and":
        return eval_expr(e[1], mol, i) and eval_expr(e[2], mol, i)
    if op == "or":
        return eval_expr(e[1], mol, i) or eval_expr(e[2], mol, i)
    raise ValueError(op)


class Smarts:
    def __init__(self, pattern: str):
        self.atoms: List[SmartsAtom] = []
        self.bonds: List[Tuple[int, int, str]] = []
        self._parse(pattern)
        self.adj: List[List[Tuple[int, int, str]]] = [[] for _ in self.atoms]
        for k, (x, y, kind) in enumerate(self.bonds):
            self.adj[x].append((k, y, kind))
            self.adj[y].append((k, x, kind))

    def _parse(self, s: str) -> None:
        i = 0
        prev = -1
        stack: List[int] = []
        pending: Optional[str] = None
        rings: Dict[int, Tuple[int, Optional[str]]] = {}
        two_letter = {"Cl", "Br", "Si", "Se", "As", "Na", "Li", "Mg", "Ca",
                      "Fe", "Zn", "se", "as"}

        def prim(tok: str, j: int) -> Tuple[tuple, int]:
            c = tok[j]
            if c == "*":
                return ("true",), j + 1
            if c == "#":
                k = j + 1
                while k < len(tok) and tok[k].isdigit():
                    k += 1
                return ("elem", int(tok[j + 1:k])), k
            if c == "a" and not tok[j:j + 2] == "as":
                return ("arom",), j + 1
            if c == "A" and not tok[j:j + 2] == "As":
                return ("aliph",), j + 1
            for kind, letter in (("D", "D"), ("X", "X"), ("H", "H"), ("v", "v")):
                if c == letter:
                    k = j + 1
                    num = 0
                    got = False
                    while k < len(tok) and tok[k].isdigit():
                        num = num * 10 + int(tok[k])
                        k += 1
                        got = True
                    return (kind, num if got else 1), k
            if c == "R" or c == "r":
                k = j + 1
                num = -1
                while k < len(tok) and tok[k].isdigit():
                    num = (0 if num < 0 else num) * 10 + int(tok[k])
                    k += 1
                if num < 0:
                    return ("ring",), k
                if c == "R" and num == 0:
                    return ("not", ("ring",)), k
                return (("ringcount" if c == "R" else "ringsize"), num), k
            if c in "+-":
                k = j + 1
                if k < len(tok) and tok[k].isdigit():
                    val = int(tok[k])
                    k += 1
                else:
                    val = 1
                    while k < len(tok) and tok[k] == c:
                        val += 1
                        k += 1
                return ("charge", val if c == "+" else -val), k
            for ln in (2, 1):
                sym = tok[j:j + ln]
                if ln == 2 and sym not in two_letter:
                    continue
                if not sym:
                    continue
                aromatic = sym[0].islower()
                zsym = sym.capitalize() if aromatic else sym
                if zsym in Z_OF:
                    base = ("elem", Z_OF[zsym])
                    flag = ("arom",) if aromatic else ("aliph",)
                    return ("and", base, flag), j + ln
            raise ValueError(f"bad primitive at {tok[j:]}")

        def parse_expr(tok: str, j: int) -> Tuple[tuple, int]:
            def parse_not(j):
                if tok[j] == "!":
                    e, j = parse_not(j + 1)
                    return ("not", e), j
                return prim(tok, j)

            def parse_and(j):
                lhs, j = parse_not(j)
                while j < len(tok) and tok[j] not in ",;]":
                    if tok[j] == "&":
                        j += 1
                    rhs, j = parse_not(j)
                    lhs = ("and", lhs, rhs)
                return lhs, j

            def parse_or(j):
                lhs, j = parse_and(j)
                while j < len(tok) and tok[j] == ",":
                    rhs, j = parse_and(j + 1)
                    lhs = ("or", lhs, rhs)
                return lhs, j

            lhs, j = parse_or(j)
            while j < len(tok) and tok[j] == ";":
                rhs, j = parse_or(j + 1)
                lhs = ("and", lhs, rhs)
            return lhs, j

        def add_atom(expr: tuple):
            nonlocal prev, pending
            self.atoms.append(SmartsAtom(expr))
            idx = len(self.atoms) - 1
            if prev >= 0:
                self.bonds.append((prev, idx, pending or "~sa"))
            pending = None
            prev = idx

        while i < len(s):
            c = s[i]
            if c == "(":
                stack.append(prev)
                i += 1
            elif c == ")":
                prev = stack.pop()
                i += 1
            elif c in "-=#:~@!":
                expr = c
                i += 1
                if c == "!":
                    expr = "!" + s[i]
                    i += 1
                pending = expr
            elif c.isdigit():
                num = int(c)
                i += 1
                if num not in rings:
                    rings[num] = (prev, pending)
                    pending = None
                else:
                    op, sym0 = rings.pop(num)
                    self.bonds.append((op, prev, sym0 or pending or "~sa"))
                    pending = None
            elif c == "[":
                end = s.index("]", i)
                expr, _ = parse_expr(s[i + 1:end] + "]", 0)
                add_atom(expr)
                i = end + 1
            else:
                if s[i:i + 2] in ("Cl", "Br"):
                    sym = s[i:i + 2]
                elif c == "a":
                    add_atom(("arom",))
                    i += 1
                    continue
                elif c == "A":
                    add_atom(("aliph",))
                    i += 1
                    continue
                elif c == "*":
                    add_atom(("true",))
                    i += 1
                    continue
                else:
                    sym = c
                aromatic = sym[0].islower()
                zsym = sym.upper() if aromatic else sym
                add_atom(("and", ("elem", Z_OF[zsym]),
                          ("arom",) if aromatic else ("aliph",)))
                i += len(sym)

    def bond_ok(self, kind: str, mol: PMol, bi: int) -> bool:
        bond = mol.bonds[bi]
        if kind.startswith("!"):
            return not self.bond_ok(kind[1:], mol, bi)
        if kind == "~sa":
            return bond.aromatic or bond.order == 1
        if kind == "-":
            return not bond.aromatic and bond.order == 1
        if kind == "=":
            return not bond.aromatic and bond.order == 2
        if kind == "#":
            return bond.order == 3
        if kind == ":":
            return bond.aromatic
        if kind == "~":
            return True
        if kind == "@":
            return mol.bond_cyclic[bi]
        raise ValueError(kind)

    def match_from(self, mol: PMol, root: int) -> bool:
        mapping = [-1] * len(self.atoms)
        used = set()

        def ok_bonds(k: int) -> bool:
            for bk, other, kind in self.adj[k]:
                if mapping[other] < 0:
                    continue
                tb = None
                for bi in mol.adj[mapping[k]]:
                    if mol.bonds[bi].other(mapping[k]) == mapping[other]:
                        tb = bi
                        break
                if tb is None or not self.bond_ok(kind, mol, tb):
                    return False
            return True

        def rec(k: int) -> bool:
            if k == len(self.atoms):
                return True
            anchor = None
            for _, other, _k in self.adj[k]:
                if other < k:
                    anchor = other
                    break
            cands = (range(len(mol.atoms)) if anchor is None
                     else [v for v, _ in mol.neighbors(mapping[anchor])])
            if k == 0:
                cands = [root]
            for t in cands:
                if t in used or not self.atoms[k].test(mol, t):
                    continue
                mapping[k] = t
                used.add(t)
                if ok_bonds(k) and rec(k + 1):
                    return True
                used.discard(t)
                mapping[k] = -1
            return False

        return rec(0)

    def has_match(self, mol: PMol) -> bool:
        return any(self.match_from(mol, r) for r in range(len(mol.atoms)))


def load_crippen(path: str):
    entries = []
    hydrogens = {}
    for line in open(path):
        if not line.strip() or line.startswith("#"):
            continue
        label, pat, val = line.rstrip("\n").split("\t")
        if pat.startswith("@"):
            hydrogens[pat] = float(val)
        else:
            entries.append((label, Smarts(pat), float(val)))
    return entries, hydrogens


def crippen_logp(mol: PMol, entries, hydrogens) -> float:
    total = 0.0
    for i in range(len(mol.atoms)):
        for _, pat, val in entries:
            if pat.match_from(mol, i):
                total += val
                break
    for i, atom in enumerate(mol.atoms):
        h = atom.total_h()
        if not h:
            continue
        sym = SYMBOLS[atom.z]
        if sym in ("C", "H"):
            per = hydrogens["@H_ON_CARBON"]
        elif sym == "N":
            per = hydrogens["@H_ON_AMINE"]
        elif sym == "O":
            nbrs = list(mol.neighbors(i))
            if not nbrs:
                per = hydrogens["@H_FALLBACK"]
            else:
                v, _ = nbrs[0]
                nsym = SYMBOLS[mol.atoms[v].z]
                if nsym == "N":
                    per = hydrogens["@H_ON_AMINE"]
                elif nsym == "C" and any(
                        b.order == 2 and not b.aromatic
                        and SYMBOLS[mol.atoms[w].z] in ("C", "N", "O", "S")
                        for w, b in mol.neighbors(v)):
                    per = hydrogens["@H_ON_ACID"]
                elif nsym in ("O", "S"):
                    per = hydrogens["@H_ON_ACID"]
                else:
                    per = hydrogens["@H_ON_ALCOHOL"]
        else:
            per = hydrogens["@H_ON_ALCOHOL"]
        total += per * h
    return total


def load_qed(path: str):
    ads = {}
    for line in open(path):
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.split()
        ads[parts[0]] = tuple(float(x) for x in parts[1:])
    return ads


def qed_value(props: Dict[str, float], ads) -> float:
    num = den = 0.0
    for name in ("MW", "ALOGP", "HBA", "HBD", "PSA", "ROTB", "AROM", "ALERTS"):
        a, b, c, d, e, f, dmax, w = ads[name]
        x = props[name]
        val = a + b / (1 + math.exp(-(x - c + d / 2) / e)) * \
            (1 - 1 / (1 + math.exp(-(x - c - d / 2) / f)))
        desir = min(max(val / dmax, 1e-9), 1.0)
        num += w * math.log(desir)
        den += w
    return math.exp(num / den)


# --- circular fragments (shared hash spec with the C++ side) --------------------

MASK = (1 << 64) - 1


def mix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & MASK
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & MASK
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & MASK
    return x ^ (x >> 31)


def mix_pair(a: int, b: int) -> int:
    return mix64(a ^ ((b * 0x9E3779B97F4A7C15) & MASK))


def circular_fragments(mol: PMol, max_radius: int = 2) -> List[int]:
    inv = []
    for i, a in enumerate(mol.atoms):
        h = mix64(a.z)
        h = mix_pair(h, a.charge + 16)
        h = mix_pair(h, a.total_h())
        h = mix_pair(h, mol.degree(i))
        h = mix_pair(h, 2 if a.aromatic else 1)
        h = mix_pair(h, 2 if mol.in_ring(i) else 1)
        inv.append(h)
    out = list(inv)
    for r in range(1, max_radius + 1):
        nxt = []
        for i in range(len(mol.atoms)):
            parts = sorted(mix_pair(4 if b.aromatic else b.order, inv[v])
                           for v, b in mol.neighbors(i))
            h = mix_pair(r, inv[i])
            for x in parts:
                h = mix_pair(h, x)
            nxt.append(h)
        inv = nxt
        out.extend(inv)
    return out


def load_sa_table(path: str) -> Dict[int, float]:
    data = open(path, "rb").read()
    magic, version, count = struct.unpack_from("<4sIQ", data, 0)
    assert magic == b"CFRG" and version == 1
    table = {}
    off = 16
    for _ in range(count):
        h, s = struct.unpack_from("<Qf", data, off)
        off += 12
        table[h] = s
    return table


def symmetry_classes(mol: PMol) -> List[int]:
    n = len(mol.atoms)
    key = [(a.z, a.charge, a.isotope, a.total_h(), mol.degree(i), a.aromatic,
            mol.atom_ring_bonds[i], mol.atom_min_ring[i])
           for i, a in enumerate(mol.atoms)]
    rank = dense(key)
    while True:
        key2 = []
        for i in range(n):
            nb = sorted((4 if b.aromatic else b.order, rank[v])
                        for v, b in mol.neighbors(i))
            key2.append((rank[i], tuple(nb)))
        new = dense(key2)
        if max(new, default=0) == max(rank, default=0):
            return new
        rank = new


def count_stereocenters(mol: PMol) -> int:
    cls = symmetry_classes(mol)
    count = 0
    for i, a in enumerate(mol.atoms):
        if a.chirality:
            count += 1
            continue
        if a.aromatic or SYMBOLS[a.z] not in ("C", "Si"):
            continue
        h = a.total_h()
        if mol.degree(i) + h != 4 or h > 1:
            continue
        ncls = sorted(cls[v] for v, _ in mol.neighbors(i))
        if len(set(ncls)) == len(ncls):
            count += 1
    return count


def sa_score(mol: PMol, table: Dict[int, float]) -> float:
    n = len(mol.atoms)
    if n == 0:
        return 1.0
    frags = circular_fragments(mol)
    counts: Dict[int, int] = {}
    for f in frags:
        counts[f] = counts.get(f, 0) + 1
    score1 = sum(table.get(h, -4.0) * c for h, c in counts.items()) / sum(counts.values())

    n_stereo = count_stereocenters(mol)
    n_macro = sum(1 for r in mol.rings if len(r) > 8)
    n_spiro = n_bridge = 0
    ring_sets = [set(r) for r in mol.rings]
    for i in range(n):
        rings_of = [rs for rs in ring_sets if i in rs]
        if len(rings_of) < 2:
            continue
        spiro = bridge = False
        for x in range(len(rings_of)):
            for y in range(x + 1, len(rings_of)):
                shared = len(rings_of[x] & rings_of[y])
                if shared == 1:
                    spiro = True
                if shared >= 3 and mol.atom_ring_bonds[i] >= 3:
                    bridge = True
        n_spiro += spiro
        n_bridge += bridge

    score2 = -(n ** 1.005 - n) - math.log10(n_stereo + 1) - math.log10(n_spiro + 1) \
        - math.log10(n_bridge + 1) - (math.log10(2) if n_macro else 0)
    score3 = 0.0
    if n > len(counts):
        score3 = 0.5 * math.log(n / len(counts))
    raw = score1 + score2 + score3
    sa = 11.0 - (raw - (-4.0) + 1.0) / (2.5 - (-4.0)) * 9.0
    if sa > 8.0:
        sa = 8.0 + math.log(sa + 1.0 - 9.0)
    return min(max(sa, 1.0), 10.0)
