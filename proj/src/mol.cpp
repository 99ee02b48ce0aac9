//
// ChemForge - Copyright 2026 ChemForge Developers.
// SPDX-License-Identifier: Apache-2.0
//

#include "chemforge/mol.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>

namespace chemforge {

namespace {

std::string atom_label(const Atom& a, int idx) {
  return std::string(element_info(a.atomic_number).symbol) + "#" + std::to_string(idx);
}

}  // namespace

int MolGraph::add_atom(const Atom& atom) {
  atoms_.push_back(atom);
  adjacency_.emplace_back();
  return static_cast<int>(atoms_.size()) - 1;
}

int MolGraph::add_bond(int a, int b, BondOrder order, bool aromatic, BondDir dir) {
  if (a == b)
    throw SmilesError(SmilesError::Code::SelfBond, 0, "ring bond closes on the same atom");
  if (bond_between(a, b) >= 0)
    throw SmilesError(SmilesError::Code::DuplicateBond, 0, "duplicate bond between atom pair");
  Bond bd;
  bd.a = a;
  bd.b = b;
  bd.order = order;
  bd.aromatic = aromatic;
  bd.dir = dir;
  bonds_.push_back(bd);
  int idx = static_cast<int>(bonds_.size()) - 1;
  adjacency_[static_cast<size_t>(a)].push_back(idx);
  adjacency_[static_cast<size_t>(b)].push_back(idx);
  return idx;
}

int MolGraph::bond_between(int a, int b) const {
  for (int bi : adjacency_[static_cast<size_t>(a)]) {
    if (bonds_[static_cast<size_t>(bi)].other(a) == b) return bi;
  }
  return -1;
}

int MolGraph::bond_order_sum(int atom) const {
  int sum = 0;
  for (int bi : bonds_of(atom)) sum += bonds_[static_cast<size_t>(bi)].order_int();
  return sum;
}

const TetrahedralStereo* MolGraph::tetrahedral_on(int atom) const {
  for (const auto& t : tets_)
    if (t.atom == atom) return &t;
  return nullptr;
}

const DoubleBondStereo* MolGraph::stereo_on_bond(int bond) const {
  for (const auto& s : bond_stereo_)
    if (s.bond == bond) return &s;
  return nullptr;
}

void MolGraph::finalize() {
  if (finalized_) return;
  const int n = num_atoms();

  component_.assign(static_cast<size_t>(n), -1);
  n_components_ = 0;
  for (int s = 0; s < n; ++s) {
    if (component_[static_cast<size_t>(s)] >= 0) continue;
    std::deque<int> q{s};
    component_[static_cast<size_t>(s)] = n_components_;
    while (!q.empty()) {
      int u = q.front();
      q.pop_front();
      for (int bi : bonds_of(u)) {
        int v = bonds_[static_cast<size_t>(bi)].other(u);
        if (component_[static_cast<size_t>(v)] < 0) {
          component_[static_cast<size_t>(v)] = n_components_;
          q.push_back(v);
        }
      }
    }
    ++n_components_;
  }

  build_rings();

  // Aromatic flags on non-ring bonds (e.g. the default bond between two
  // aromatic rings in a biphenyl) read as plain single bonds.
  for (size_t i = 0; i < bonds_.size(); ++i) {
    if (bonds_[i].aromatic && !bond_in_ring(static_cast<int>(i))) {
      bonds_[i].aromatic = false;
      bonds_[i].order = BondOrder::Single;
    }
  }
  for (int i = 0; i < n; ++i) {
    if (atoms_[static_cast<size_t>(i)].aromatic && !atom_in_ring(i))
      throw SmilesError(SmilesError::Code::ValenceViolation, 0,
                        "aromatic atom " + atom_label(atoms_[static_cast<size_t>(i)], i) +
                            " is not in a ring",
                        i);
  }

  perceive_and_kekulize();
  finalized_ = true;
}

// --- ring perception -------------------------------------------------------

namespace {

using BitRow = std::vector<uint64_t>;

bool bit_get(const BitRow& r, int i) { return (r[static_cast<size_t>(i) >> 6] >> (i & 63)) & 1u; }
void bit_set(BitRow& r, int i) { r[static_cast<size_t>(i) >> 6] |= uint64_t(1) << (i & 63); }
void bit_xor(BitRow& a, const BitRow& b) {
  for (size_t i = 0; i < a.size(); ++i) a[i] ^= b[i];
}
bool bit_empty(const BitRow& r) {
  for (uint64_t w : r)
    if (w) return false;
  return true;
}
int bit_lowest(const BitRow& r) {
  for (size_t w = 0; w < r.size(); ++w)
    if (r[w]) return static_cast<int>(w * 64 + static_cast<size_t>(__builtin_ctzll(r[w])));
  return -1;
}

}  // namespace

void MolGraph::build_rings() {
  const int n = num_atoms();
  const int m = num_bonds();
  rings_.rings.clear();
  rings_.atom_ring_count.assign(static_cast<size_t>(n), 0);
  rings_.bond_ring_count.assign(static_cast<size_t>(m), 0);
  rings_.atom_min_ring.assign(static_cast<size_t>(n), 0);
  rings_.atom_ring_bonds.assign(static_cast<size_t>(n), 0);
  if (m == 0) return;

  // Bridges via iterative DFS low-link; every non-bridge bond lies on a cycle.
  std::vector<int> disc(static_cast<size_t>(n), -1), low(static_cast<size_t>(n), 0);
  std::vector<char> is_bridge(static_cast<size_t>(m), 0);
  int timer = 0;
  for (int root = 0; root < n; ++root) {
    if (disc[static_cast<size_t>(root)] >= 0) continue;
    struct Frame {
      int atom, parent_bond;
      size_t next;
    };
    std::vector<Frame> stack{{root, -1, 0}};
    disc[static_cast<size_t>(root)] = low[static_cast<size_t>(root)] = timer++;
    while (!stack.empty()) {
      Frame& f = stack.back();
      const auto& inc = bonds_of(f.atom);
      if (f.next < inc.size()) {
        int bi = inc[f.next++];
        if (bi == f.parent_bond) continue;
        int v = bonds_[static_cast<size_t>(bi)].other(f.atom);
        if (disc[static_cast<size_t>(v)] < 0) {
          disc[static_cast<size_t>(v)] = low[static_cast<size_t>(v)] = timer++;
          stack.push_back({v, bi, 0});
        } else {
          low[static_cast<size_t>(f.atom)] =
              std::min(low[static_cast<size_t>(f.atom)], disc[static_cast<size_t>(v)]);
        }
      } else {
        if (f.parent_bond >= 0) {
          const Bond& pb = bonds_[static_cast<size_t>(f.parent_bond)];
          int parent = pb.other(f.atom);
          low[static_cast<size_t>(parent)] =
              std::min(low[static_cast<size_t>(parent)], low[static_cast<size_t>(f.atom)]);
          if (low[static_cast<size_t>(f.atom)] > disc[static_cast<size_t>(parent)])
            is_bridge[static_cast<size_t>(f.parent_bond)] = 1;
        }
        stack.pop_back();
      }
    }
  }

  for (int bi = 0; bi < m; ++bi) {
    if (is_bridge[static_cast<size_t>(bi)]) continue;
    ++rings_.atom_ring_bonds[static_cast<size_t>(bonds_[static_cast<size_t>(bi)].a)];
    ++rings_.atom_ring_bonds[static_cast<size_t>(bonds_[static_cast<size_t>(bi)].b)];
  }

  // Candidate rings: shortest cycle through every cycle bond.
  const size_t words = (static_cast<size_t>(m) + 63) / 64;
  struct Candidate {
    std::vector<int> atoms;
    BitRow bonds;
  };
  std::vector<Candidate> candidates;
  std::map<BitRow, bool> seen;
  for (int bi = 0; bi < m; ++bi) {
    if (is_bridge[static_cast<size_t>(bi)]) continue;
    int u = bonds_[static_cast<size_t>(bi)].a;
    int v = bonds_[static_cast<size_t>(bi)].b;
    // BFS u -> v avoiding bond bi.
    std::vector<int> prev_bond(static_cast<size_t>(n), -2);
    std::deque<int> q{u};
    prev_bond[static_cast<size_t>(u)] = -1;
    while (!q.empty() && prev_bond[static_cast<size_t>(v)] == -2) {
      int x = q.front();
      q.pop_front();
      for (int nb : bonds_of(x)) {
        if (nb == bi) continue;
        int y = bonds_[static_cast<size_t>(nb)].other(x);
        if (prev_bond[static_cast<size_t>(y)] != -2) continue;
        prev_bond[static_cast<size_t>(y)] = nb;
        q.push_back(y);
      }
    }
    if (prev_bond[static_cast<size_t>(v)] == -2) continue;
    Candidate c;
    c.bonds.assign(words, 0);
    bit_set(c.bonds, bi);
    int cur = v;
    while (cur != u) {
      c.atoms.push_back(cur);
      int pb = prev_bond[static_cast<size_t>(cur)];
      bit_set(c.bonds, pb);
      cur = bonds_[static_cast<size_t>(pb)].other(cur);
    }
    c.atoms.push_back(u);
    if (seen.emplace(c.bonds, true).second) candidates.push_back(std::move(c));
  }

  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Candidate& a, const Candidate& b) {
                     return a.atoms.size() < b.atoms.size();
                   });

  for (const Candidate& c : candidates) {
    for (int a : c.atoms) {
      int sz = static_cast<int>(c.atoms.size());
      int& mr = rings_.atom_min_ring[static_cast<size_t>(a)];
      if (mr == 0 || sz < mr) mr = sz;
    }
  }

  // Greedy GF(2)-independent subset of the smallest candidates.
  int cyclomatic = m - n + n_components_;
  std::vector<BitRow> basis;  // rows in echelon form
  std::vector<int> pivots;
  for (const Candidate& c : candidates) {
    if (static_cast<int>(rings_.rings.size()) >= cyclomatic) break;
    BitRow row = c.bonds;
    for (size_t i = 0; i < basis.size(); ++i)
      if (bit_get(row, pivots[i])) bit_xor(row, basis[i]);
    if (bit_empty(row)) continue;
    pivots.push_back(bit_lowest(row));
    basis.push_back(row);
    rings_.rings.push_back(c.atoms);
    for (int a : c.atoms) ++rings_.atom_ring_count[static_cast<size_t>(a)];
    for (int bi = 0; bi < m; ++bi)
      if (bit_get(c.bonds, bi)) ++rings_.bond_ring_count[static_cast<size_t>(bi)];
  }
}

// --- kekulization and aromaticity ------------------------------------------

void MolGraph::perceive_and_kekulize() {
  const int n = num_atoms();

  // 1. Decide which input-aromatic atoms must receive exactly one ring double
  //    bond. Lone-pair donors (pyrrole N, furan O, ...) get none.
  std::vector<char> required(static_cast<size_t>(n), 0);
  std::vector<char> in_arom_system(static_cast<size_t>(n), 0);
  for (int i = 0; i < n; ++i) {
    const Atom& a = atoms_[static_cast<size_t>(i)];
    if (!a.aromatic) continue;
    in_arom_system[static_cast<size_t>(i)] = 1;
    int exo_multiple = 0;
    int sigma = a.h_specified() ? a.explicit_h : 0;
    for (int bi : bonds_of(i)) {
      const Bond& b = bonds_[static_cast<size_t>(bi)];
      if (b.aromatic) {
        sigma += 1;
      } else {
        sigma += b.order_int();
        if (b.order_int() > 1) exo_multiple = 1;
      }
    }
    const ElementInfo& el = element_info(a.atomic_number);
    if (a.bracket) {
      uint8_t allowed[4];
      int na = charge_adjusted_valences(el, a.charge, allowed);
      bool sat = false, plus_one = false;
      for (int k = 0; k < na; ++k) {
        if (allowed[k] == sigma) sat = true;
        if (allowed[k] == sigma + 1) plus_one = true;
      }
      if (na == 0 || sat)
        required[static_cast<size_t>(i)] = 0;
      else if (plus_one)
        required[static_cast<size_t>(i)] = 1;
      else
        throw SmilesError(SmilesError::Code::ValenceViolation, 0,
                          "aromatic atom " + atom_label(a, i) + " cannot be kekulized", i);
    } else {
      switch (a.atomic_number) {
        case 6:  // bare c: one ring double unless a quinoid exocyclic double
          required[static_cast<size_t>(i)] = exo_multiple ? 0 : 1;
          break;
        case 7:
        case 15:  // bare n/p: pyridine-type when two connections
          required[static_cast<size_t>(i)] = (degree(i) == 2 && !exo_multiple) ? 1 : 0;
          break;
        default:  // b, o, s: lone-pair donors
          required[static_cast<size_t>(i)] = 0;
          break;
      }
    }
  }

  // 2. Perfect matching of required atoms over aromatic bonds (backtracking).
  std::vector<int> match(static_cast<size_t>(n), -1);
  std::vector<int> order;
  for (int i = 0; i < n; ++i)
    if (required[static_cast<size_t>(i)]) order.push_back(i);

  std::vector<std::vector<int>> arom_nbrs(static_cast<size_t>(n));
  for (size_t bi = 0; bi < bonds_.size(); ++bi) {
    const Bond& b = bonds_[bi];
    if (!b.aromatic) continue;
    if (required[static_cast<size_t>(b.a)] && required[static_cast<size_t>(b.b)]) {
      arom_nbrs[static_cast<size_t>(b.a)].push_back(b.b);
      arom_nbrs[static_cast<size_t>(b.b)].push_back(b.a);
    }
  }

  std::function<bool(size_t)> try_match = [&](size_t k) -> bool {
    while (k < order.size() && match[static_cast<size_t>(order[k])] >= 0) ++k;
    if (k == order.size()) return true;
    int u = order[k];
    for (int v : arom_nbrs[static_cast<size_t>(u)]) {
      if (match[static_cast<size_t>(v)] >= 0) continue;
      match[static_cast<size_t>(u)] = v;
      match[static_cast<size_t>(v)] = u;
      if (try_match(k + 1)) return true;
      match[static_cast<size_t>(u)] = -1;
      match[static_cast<size_t>(v)] = -1;
    }
    return false;
  };
  if (!try_match(0)) {
    int bad = -1;
    for (int i : order)
      if (match[static_cast<size_t>(i)] < 0) {
        bad = i;
        break;
      }
    throw SmilesError(SmilesError::Code::ValenceViolation, 0,
                      "aromatic ring system cannot be kekulized (atom " +
                          atom_label(atoms_[static_cast<size_t>(bad)], bad) + ")",
                      bad);
  }

  for (auto& b : bonds_) {
    if (!b.aromatic) continue;
    b.order = (match[static_cast<size_t>(b.a)] == b.b) ? BondOrder::Double : BondOrder::Single;
  }

  assign_hydrogens_and_check();

  // 3. Re-perceive aromaticity from the kekule structure. Input flags are
  //    discarded; perception is the single source of truth.
  for (auto& a : atoms_) a.aromatic = false;
  for (auto& b : bonds_) b.aromatic = false;

  auto pi_contribution = [&](int i) -> int {
    const Atom& a = atoms_[static_cast<size_t>(i)];
    bool ring_double = false, exo_multiple = false, any_triple = false;
    for (int bi : bonds_of(i)) {
      const Bond& b = bonds_[static_cast<size_t>(bi)];
      if (b.order == BondOrder::Triple) any_triple = true;
      if (b.order == BondOrder::Double) {
        if (bond_in_ring(bi))
          ring_double = true;
        else
          exo_multiple = true;
      }
    }
    if (any_triple) return -1;
    int conn = degree(i) + a.total_h();
    switch (a.atomic_number) {
      case 6:
        if (ring_double) return 1;
        if (exo_multiple) return 0;
        if (conn == 3 && a.charge == -1) return 2;
        if (conn == 3 && a.charge == 1) return 0;
        return -1;  // saturated carbon
      case 5:  // boron: empty p orbital
        if (ring_double) return 1;
        return conn <= 3 ? 0 : -1;
      case 7:
      case 15:
      case 33:
        if (ring_double) return 1;
        if (exo_multiple) return 0;  // e.g. ring N of an N-oxide
        if (conn == 3 && a.charge <= 0) return 2;
        if (conn == 2 && a.charge == -1) return 2;
        return -1;
      case 8:
      case 16:
      case 34:
        if (ring_double) return 1;  // pyrylium-type after kekulization
        if (exo_multiple && a.atomic_number != 8) return 0;
        if (conn == 2) return 2;
        return -1;
      default:
        return -1;
    }
  };

  std::vector<int> pi(static_cast<size_t>(n), -1);
  for (int i = 0; i < n; ++i)
    if (atom_in_ring(i)) pi[static_cast<size_t>(i)] = pi_contribution(i);

  auto mark_aromatic = [&](const std::vector<int>& ring_atoms) {
    std::vector<char> member(static_cast<size_t>(n), 0);
    for (int a : ring_atoms) member[static_cast<size_t>(a)] = 1;
    for (int a : ring_atoms) atoms_[static_cast<size_t>(a)].aromatic = true;
    for (size_t bi = 0; bi < bonds_.size(); ++bi) {
      const Bond& b = bonds_[bi];
      if (bond_in_ring(static_cast<int>(bi)) && member[static_cast<size_t>(b.a)] &&
          member[static_cast<size_t>(b.b)])
        bonds_[bi].aromatic = true;
    }
  };

  auto huckel = [&](const std::vector<int>& ring_atoms) -> bool {
    int total = 0;
    for (int a : ring_atoms) {
      if (pi[static_cast<size_t>(a)] < 0) return false;
      total += pi[static_cast<size_t>(a)];
    }
    return total % 4 == 2;
  };

  std::vector<char> ring_done(rings_.rings.size(), 0);
  for (size_t r = 0; r < rings_.rings.size(); ++r) {
    if (huckel(rings_.rings[r])) {
      mark_aromatic(rings_.rings[r]);
      ring_done[r] = 1;
    }
  }
  // Second pass over fused pairs catches 4n+2 systems that are only aromatic
  // as a whole (azulene and friends).
  for (size_t r = 0; r < rings_.rings.size(); ++r) {
    for (size_t s = r + 1; s < rings_.rings.size(); ++s) {
      if (ring_done[r] && ring_done[s]) continue;
      std::vector<int> merged = rings_.rings[r];
      std::vector<char> seen_atom(static_cast<size_t>(n), 0);
      for (int a : merged) seen_atom[static_cast<size_t>(a)] = 1;
      bool fused = false;
      for (int a : rings_.rings[s]) {
        if (seen_atom[static_cast<size_t>(a)])
          fused = true;
        else
          merged.push_back(a);
      }
      if (!fused || merged.size() == rings_.rings[r].size()) continue;
      if (huckel(merged)) mark_aromatic(merged);
    }
  }
}

void MolGraph::assign_hydrogens_and_check() {
  for (int i = 0; i < num_atoms(); ++i) {
    Atom& a = atoms_[static_cast<size_t>(i)];
    const ElementInfo& el = element_info(a.atomic_number);
    int sum = bond_order_sum(i);
    uint8_t allowed[4];
    int na = charge_adjusted_valences(el, a.charge, allowed);
    if (a.h_specified() || a.bracket) {
      a.implicit_h = 0;
      int total = sum + std::max<int>(0, a.explicit_h);
      if (na > 0) {
        bool ok = false;
        for (int k = 0; k < na; ++k) ok = ok || allowed[k] == total;
        if (!ok)
          throw SmilesError(SmilesError::Code::ValenceViolation, 0,
                            "valence " + std::to_string(total) + " not allowed for " +
                                atom_label(a, i) +
                                (a.charge ? " (charge " + std::to_string(a.charge) + ")" : ""),
                            i);
      }
    } else {
      if (na == 0) {
        a.implicit_h = 0;
        continue;
      }
      int best = -1;
      for (int k = 0; k < na; ++k)
        if (allowed[k] >= sum && (best < 0 || allowed[k] < best)) best = allowed[k];
      if (best < 0)
        throw SmilesError(SmilesError::Code::ValenceViolation, 0,
                          "bond order sum " + std::to_string(sum) + " exceeds valence of " +
                              atom_label(a, i),
                          i);
      a.implicit_h = static_cast<int8_t>(best - sum);
    }
  }
}

}  // namespace chemforge
