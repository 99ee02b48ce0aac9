//
// ChemForge - Copyright 2026 ChemForge Developers.
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>

#include "chemforge/smiles.hpp"

namespace chemforge {

namespace {

// Hydrogen count a reader would infer for this atom written bare, or -1 if
// the atom cannot be written bare at all. Mirrors the parser's valence model.
int reader_implicit_h(const MolGraph& m, int idx, bool kekule) {
  const Atom& a = m.atom(idx);
  const ElementInfo& el = element_info(a.atomic_number);
  if (!el.organic_subset || a.charge != 0 || a.isotope != 0) return -1;
  if (a.aromatic && !kekule) {
    static const char* kBareAromatic = "BCNOPS";
    bool ok = false;
    for (const char* p = kBareAromatic; *p; ++p)
      if (el.symbol[1] == '\0' && el.symbol[0] == *p) ok = true;
    if (!ok) return -1;
  }

  int sigma = 0;
  bool exo_multiple = false;
  for (int bi : m.bonds_of(idx)) {
    const Bond& b = m.bond(bi);
    if (!kekule && b.aromatic) {
      sigma += 1;
    } else {
      sigma += b.order_int();
      if (b.order_int() > 1 && !b.aromatic) exo_multiple = true;
    }
  }
  int target_extra = 0;
  if (!kekule && a.aromatic) {
    // replicate the parser's bare-atom kekulization expectations
    switch (a.atomic_number) {
      case 6:
        target_extra = exo_multiple ? 0 : 1;
        break;
      case 7:
      case 15:
        target_extra = (m.degree(idx) == 2 && !exo_multiple) ? 1 : 0;
        break;
      default:
        target_extra = 0;
        break;
    }
  }
  int sum = sigma + target_extra;
  uint8_t allowed[4];
  int na = charge_adjusted_valences(el, 0, allowed);
  int best = -1;
  for (int k = 0; k < na; ++k)
    if (allowed[k] >= sum && (best < 0 || allowed[k] < best)) best = allowed[k];
  if (best < 0) return -1;
  return best - sum;
}

int permutation_parity(const std::array<int, 4>& from, const std::array<int, 4>& to) {
  // -1 if `to` is not a permutation of `from`, else 0 (even) / 1 (odd)
  std::array<int, 4> perm{};
  std::array<bool, 4> used{};
  for (int i = 0; i < 4; ++i) {
    int found = -1;
    for (int j = 0; j < 4; ++j)
      if (!used[static_cast<size_t>(j)] && from[static_cast<size_t>(j)] == to[static_cast<size_t>(i)]) {
        found = j;
        break;
      }
    if (found < 0) return -1;
    used[static_cast<size_t>(found)] = true;
    perm[static_cast<size_t>(i)] = found;
  }
  int parity = 0;
  std::array<bool, 4> seen{};
  for (int i = 0; i < 4; ++i) {
    if (seen[static_cast<size_t>(i)]) continue;
    int len = 0, j = i;
    while (!seen[static_cast<size_t>(j)]) {
      seen[static_cast<size_t>(j)] = true;
      j = perm[static_cast<size_t>(j)];
      ++len;
    }
    parity ^= (len - 1) & 1;
  }
  return parity;
}

struct Writer {
  const MolGraph& m;
  const WriteOptions& opts;
  std::span<const int> prio;

  std::vector<int> visit_order;                  // atoms in emission order
  std::vector<int> visit_pos;                    // atom -> position, -1 unvisited
  std::vector<int> parent_bond;                  // tree bond toward parent
  std::vector<std::vector<int>> children;        // tree bonds, emission order
  std::vector<std::vector<int>> ring_open;       // per atom: closure bonds opened here
  std::vector<std::vector<int>> ring_close;      // per atom: closure bonds closed here
  std::map<int, int> bond_digit;                 // closure bond -> digit
  std::map<int, int> slash;                      // bond -> +1 '/', -1 '\' (a->b sense)
  std::string out;

  explicit Writer(const MolGraph& mol, std::span<const int> priority, const WriteOptions& o)
      : m(mol), opts(o), prio(priority) {
    const size_t n = static_cast<size_t>(m.num_atoms());
    visit_pos.assign(n, -1);
    parent_bond.assign(n, -1);
    children.assign(n, {});
    ring_open.assign(n, {});
    ring_close.assign(n, {});
  }

  void traverse() {
    const int n = m.num_atoms();
    std::vector<int> roots(static_cast<size_t>(n));
    std::iota(roots.begin(), roots.end(), 0);
    std::stable_sort(roots.begin(), roots.end(),
                     [&](int a, int b) { return prio[static_cast<size_t>(a)] < prio[static_cast<size_t>(b)]; });

    std::vector<std::pair<int, int>> back_edges;  // (open atom, bond)
    for (int root : roots) {
      if (visit_pos[static_cast<size_t>(root)] >= 0) continue;
      struct Frame {
        int atom;
        std::vector<int> nbr_bonds;
        size_t next = 0;
      };
      std::vector<Frame> stack;
      auto push_atom = [&](int atom, int via_bond) {
        visit_pos[static_cast<size_t>(atom)] = static_cast<int>(visit_order.size());
        visit_order.push_back(atom);
        parent_bond[static_cast<size_t>(atom)] = via_bond;
        Frame f;
        f.atom = atom;
        f.nbr_bonds = m.bonds_of(atom);
        std::stable_sort(f.nbr_bonds.begin(), f.nbr_bonds.end(), [&](int x, int y) {
          return prio[static_cast<size_t>(m.bond(x).other(atom))] <
                 prio[static_cast<size_t>(m.bond(y).other(atom))];
        });
        stack.push_back(std::move(f));
      };
      push_atom(root, -1);
      while (!stack.empty()) {
        Frame& f = stack.back();
        if (f.next >= f.nbr_bonds.size()) {
          stack.pop_back();
          continue;
        }
        int bi = f.nbr_bonds[f.next++];
        if (bi == parent_bond[static_cast<size_t>(f.atom)]) continue;
        int v = m.bond(bi).other(f.atom);
        if (visit_pos[static_cast<size_t>(v)] < 0) {
          children[static_cast<size_t>(f.atom)].push_back(bi);
          push_atom(v, bi);
        } else if (visit_pos[static_cast<size_t>(v)] < visit_pos[static_cast<size_t>(f.atom)] ||
                   (visit_pos[static_cast<size_t>(v)] > visit_pos[static_cast<size_t>(f.atom)] &&
                    parent_bond[static_cast<size_t>(v)] != bi)) {
          // ring closure, recorded once from the later-visited side
          int open_atom = visit_pos[static_cast<size_t>(v)] < visit_pos[static_cast<size_t>(f.atom)] ? v : f.atom;
          int close_atom = m.bond(bi).other(open_atom);
          bool dup = false;
          for (int ob : ring_close[static_cast<size_t>(close_atom)]) dup = dup || ob == bi;
          if (!dup) {
            ring_open[static_cast<size_t>(open_atom)].push_back(bi);
            ring_close[static_cast<size_t>(close_atom)].push_back(bi);
            back_edges.emplace_back(open_atom, bi);
          }
        }
      }
    }

    // assign digits in emission order, reusing freed ones
    std::set<int> free_digits;
    for (int d = 1; d <= 99; ++d) free_digits.insert(d);
    std::vector<char> open_now(static_cast<size_t>(m.num_bonds()), 0);
    for (int atom : visit_order) {
      for (int bi : ring_close[static_cast<size_t>(atom)]) {
        if (open_now[static_cast<size_t>(bi)]) {
          free_digits.insert(bond_digit[bi]);
          open_now[static_cast<size_t>(bi)] = 0;
        }
      }
      for (int bi : ring_open[static_cast<size_t>(atom)]) {
        if (free_digits.empty()) throw std::runtime_error("out of ring closure digits");
        int d = *free_digits.begin();
        free_digits.erase(free_digits.begin());
        bond_digit[bi] = d;
        open_now[static_cast<size_t>(bi)] = 1;
      }
    }
    (void)back_edges;
  }

  // side of bond's far neighbor `n` relative to double-bond atom `d`,
  // expressed through the slash variable v (a->b sense):
  //   n written first  -> side = -v ; d written first -> side = +v
  static int side_coeff(const Bond& b, int d) { return b.a == d ? +1 : -1; }

  void assign_slashes() {
    if (m.bond_stereo().empty()) return;
    // constraints: v_i = coef * v_j collected per stereo double bond
    std::vector<std::pair<std::pair<int, int>, int>> relations;  // ((i,j), coef)
    std::set<int> vars;
    for (const auto& st : m.bond_stereo()) {
      const Bond& db = m.bond(st.bond);
      for (int end : {db.a, db.b}) {
        std::vector<int> singles;
        for (int bi : m.bonds_of(end)) {
          const Bond& b = m.bond(bi);
          if (bi != st.bond && b.order == BondOrder::Single && !b.aromatic) singles.push_back(bi);
        }
        for (int bi : singles) vars.insert(bi);
        for (size_t i = 1; i < singles.size(); ++i) {
          // substituents on the same end sit on opposite sides
          int b0 = singles[0], b1 = singles[i];
          int coef = -side_coeff(m.bond(b0), end) * side_coeff(m.bond(b1), end);
          relations.push_back({{b0, b1}, coef});
        }
      }
      int ba = m.bond_between(db.a, st.nbr_a);
      int bb = m.bond_between(db.b, st.nbr_b);
      if (ba < 0 || bb < 0) continue;
      int coef = (st.cis ? 1 : -1) * side_coeff(m.bond(ba), db.a) * side_coeff(m.bond(bb), db.b);
      relations.push_back({{ba, bb}, coef});
    }
    // BFS 2-coloring, seeding each component in traversal order so the
    // output does not depend on input bond order
    std::map<int, std::vector<std::pair<int, int>>> graph;
    for (auto& [edge, coef] : relations) {
      graph[edge.first].emplace_back(edge.second, coef);
      graph[edge.second].emplace_back(edge.first, coef);
    }
    std::vector<int> ordered(vars.begin(), vars.end());
    auto emit_key = [&](int bi) {
      int pa = visit_pos[static_cast<size_t>(m.bond(bi).a)];
      int pb = visit_pos[static_cast<size_t>(m.bond(bi).b)];
      return std::pair<int, int>(std::min(pa, pb), std::max(pa, pb));
    };
    std::sort(ordered.begin(), ordered.end(),
              [&](int x, int y) { return emit_key(x) < emit_key(y); });
    for (int seed : ordered) {
      if (slash.count(seed)) continue;
      // seed so the seed bond is emitted as '/'
      const Bond& sb = m.bond(seed);
      int first = visit_pos[static_cast<size_t>(sb.a)] < visit_pos[static_cast<size_t>(sb.b)]
                      ? sb.a
                      : sb.b;
      slash[seed] = (first == sb.a) ? 1 : -1;
      std::vector<int> queue{seed};
      while (!queue.empty()) {
        int u = queue.back();
        queue.pop_back();
        for (auto& [v, coef] : graph[u]) {
          int want = slash[u] * coef;
          auto it = slash.find(v);
          if (it == slash.end()) {
            slash[v] = want;
            queue.push_back(v);
          } else if (it->second != want) {
            throw std::runtime_error("inconsistent double-bond stereo marks");
          }
        }
      }
    }
  }

  void bond_symbol(int bi, int first_atom) {
    const Bond& b = m.bond(bi);
    auto it = slash.find(bi);
    if (it != slash.end() && b.order == BondOrder::Single && !b.aromatic) {
      int v = it->second;
      if (first_atom != b.a) v = -v;  // emitted against stored orientation
      out += (v > 0) ? '/' : '\\';
      return;
    }
    if (b.aromatic && !opts.kekule) {
      return;  // implicit aromatic bond
    }
    switch (b.order) {
      case BondOrder::Single: {
        bool both_arom = !opts.kekule && m.atom(b.a).aromatic && m.atom(b.b).aromatic;
        if (both_arom) out += '-';
        break;
      }
      case BondOrder::Double:
        out += '=';
        break;
      case BondOrder::Triple:
        out += '#';
        break;
    }
  }

  void atom_token(int idx) {
    const Atom& a = m.atom(idx);
    const ElementInfo& el = element_info(a.atomic_number);
    bool arom_lower = a.aromatic && !opts.kekule;

    if (a.atomic_number == 0) {
      out += '*';
      return;
    }

    bool chiral_out = false;
    bool ccw_out = true;
    const TetrahedralStereo* tet = m.tetrahedral_on(idx);
    if (tet) {
      std::array<int, 4> emission{};
      size_t k = 0;
      if (parent_bond[static_cast<size_t>(idx)] >= 0)
        emission[k++] = m.bond(parent_bond[static_cast<size_t>(idx)]).other(idx);
      if (a.total_h() == 1) emission[k++] = -1;
      for (int bi : ring_close[static_cast<size_t>(idx)])
        if (k < 4) emission[k++] = m.bond(bi).other(idx);
      for (int bi : ring_open[static_cast<size_t>(idx)])
        if (k < 4) emission[k++] = m.bond(bi).other(idx);
      for (int bi : children[static_cast<size_t>(idx)])
        if (k < 4) emission[k++] = m.bond(bi).other(idx);
      if (k == 4) {
        int parity = permutation_parity(tet->nbrs, emission);
        if (parity >= 0) {
          chiral_out = true;
          ccw_out = tet->ccw ^ (parity == 1);
        }
      }
    }

    int rih = reader_implicit_h(m, idx, opts.kekule);
    bool bracket = a.isotope != 0 || a.charge != 0 || chiral_out || rih < 0 ||
                   rih != a.total_h() || a.atomic_number == 1;
    std::string sym = el.symbol;
    if (arom_lower) {
      for (char& c : sym) c = static_cast<char>(std::tolower(c));
      if (!bracket && sym.size() > 1) bracket = true;  // [se], [as]
    }
    if (!bracket) {
      out += sym;
      return;
    }
    out += '[';
    if (a.isotope) out += std::to_string(a.isotope);
    out += sym;
    if (chiral_out) out += ccw_out ? "@" : "@@";
    int h = a.total_h();
    if (h > 0) {
      out += 'H';
      if (h > 1) out += std::to_string(h);
    }
    if (a.charge > 0) {
      out += '+';
      if (a.charge > 1) out += std::to_string(+a.charge);
    } else if (a.charge < 0) {
      out += '-';
      if (a.charge < -1) out += std::to_string(-a.charge);
    }
    out += ']';
  }

  void emit_digit(int d) {
    if (d > 9) {
      out += '%';
      out += std::to_string(d);
    } else {
      out += std::to_string(d);
    }
  }

  void emit_subtree(int atom, int via_bond, int parent) {
    if (via_bond >= 0) bond_symbol(via_bond, parent);
    atom_token(atom);
    for (int bi : ring_close[static_cast<size_t>(atom)]) emit_digit(bond_digit[bi]);
    for (int bi : ring_open[static_cast<size_t>(atom)]) {
      bond_symbol(bi, atom);
      emit_digit(bond_digit[bi]);
    }
    const auto& kids = children[static_cast<size_t>(atom)];
    for (size_t i = 0; i < kids.size(); ++i) {
      bool last = (i + 1 == kids.size());
      if (!last) out += '(';
      emit_subtree(m.bond(kids[i]).other(atom), kids[i], atom);
      if (!last) out += ')';
    }
  }

  void emit() {
    for (int atom : visit_order) {
      if (parent_bond[static_cast<size_t>(atom)] >= 0) continue;
      if (!out.empty()) out += '.';
      emit_subtree(atom, -1, -1);
    }
  }
};

}  // namespace

std::string write_smiles(const MolGraph& mol, std::span<const int> priority,
                         const WriteOptions& opts) {
  if (static_cast<int>(priority.size()) != mol.num_atoms())
    throw std::invalid_argument("priority size must equal atom count");
  Writer w(mol, priority, opts);
  w.traverse();
  w.assign_slashes();
  w.emit();
  return w.out;
}

std::string canonical_smiles(const MolGraph& mol) {
  std::vector<int> ranks = canonical_ranks(mol);
  return write_smiles(mol, ranks);
}

std::string canonical_smiles(std::string_view smiles) {
  return canonical_smiles(parse_smiles(smiles));
}

std::vector<std::string> enumerate_smiles(const MolGraph& mol, int n, uint64_t seed) {
  if (n < 1) throw std::invalid_argument("enumeration count must be >= 1");
  std::mt19937_64 rng(seed);
  std::vector<int> prio(static_cast<size_t>(mol.num_atoms()));
  std::iota(prio.begin(), prio.end(), 0);
  std::vector<std::string> out;
  out.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    std::shuffle(prio.begin(), prio.end(), rng);
    out.push_back(write_smiles(mol, prio));
  }
  return out;
}

}  // namespace chemforge
