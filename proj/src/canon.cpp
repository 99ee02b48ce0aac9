//
// ChemForge - Copyright 2026 ChemForge Developers.
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <numeric>

#include "chemforge/smiles.hpp"

namespace chemforge {

namespace {

// Refinement key: current rank plus the sorted multiset of
// (bond class, neighbor rank) pairs.
using Key = std::vector<int>;

int bond_class(const Bond& b) { return b.aromatic ? 4 : b.order_int(); }

std::vector<int> dense_ranks(std::vector<std::pair<Key, int>>& keyed) {
  std::sort(keyed.begin(), keyed.end());
  std::vector<int> ranks(keyed.size());
  int rank = -1;
  const Key* last = nullptr;
  for (const auto& [key, atom] : keyed) {
    if (!last || key != *last) ++rank;
    last = &key;
    ranks[static_cast<size_t>(atom)] = rank;
  }
  return ranks;
}

int count_classes(const std::vector<int>& ranks) {
  return ranks.empty() ? 0 : *std::max_element(ranks.begin(), ranks.end()) + 1;
}

std::vector<int> refine(const MolGraph& m, std::vector<int> ranks) {
  const int n = m.num_atoms();
  int classes = count_classes(ranks);
  while (classes < n) {
    std::vector<std::pair<Key, int>> keyed;
    keyed.reserve(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
      Key k{ranks[static_cast<size_t>(i)]};
      std::vector<std::pair<int, int>> nbrs;
      for (int bi : m.bonds_of(i)) {
        const Bond& b = m.bond(bi);
        nbrs.emplace_back(bond_class(b), ranks[static_cast<size_t>(b.other(i))]);
      }
      std::sort(nbrs.begin(), nbrs.end());
      for (auto& [c, r] : nbrs) {
        k.push_back(c);
        k.push_back(r);
      }
      keyed.emplace_back(std::move(k), i);
    }
    ranks = dense_ranks(keyed);
    int now = count_classes(ranks);
    if (now == classes) break;
    classes = now;
  }
  return ranks;
}

// Input-order-invariant trace of a refined partition, used to pick which
// member of a tied cell to individualize.
std::vector<Key> partition_trace(const MolGraph& m, const std::vector<int>& ranks) {
  std::vector<Key> trace;
  trace.reserve(static_cast<size_t>(m.num_atoms()));
  for (int i = 0; i < m.num_atoms(); ++i) {
    const Atom& a = m.atom(i);
    Key k{ranks[static_cast<size_t>(i)],
          a.atomic_number,
          a.charge,
          a.isotope,
          a.total_h(),
          static_cast<int>(a.aromatic)};
    std::vector<std::pair<int, int>> nbrs;
    for (int bi : m.bonds_of(i)) {
      const Bond& b = m.bond(bi);
      nbrs.emplace_back(bond_class(b), ranks[static_cast<size_t>(b.other(i))]);
    }
    std::sort(nbrs.begin(), nbrs.end());
    for (auto& [c, r] : nbrs) {
      k.push_back(c);
      k.push_back(r);
    }
    trace.push_back(std::move(k));
  }
  std::sort(trace.begin(), trace.end());
  return trace;
}

}  // namespace

namespace {

std::vector<int> seed_ranks(const MolGraph& m) {
  const int n = m.num_atoms();
  const auto& ri = m.ring_info();
  std::vector<std::pair<Key, int>> keyed;
  keyed.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    const Atom& a = m.atom(i);
    // Only traversal-invariant ring facts enter the seed invariant (SSSR
    // membership counts can depend on basis choice in symmetric cages).
    Key k{a.atomic_number,
          a.charge,
          a.isotope,
          a.total_h(),
          m.degree(i),
          static_cast<int>(a.aromatic),
          ri.atom_ring_bonds[static_cast<size_t>(i)],
          ri.atom_min_ring[static_cast<size_t>(i)]};
    keyed.emplace_back(std::move(k), i);
  }
  return dense_ranks(keyed);
}

}  // namespace

std::vector<int> symmetry_classes(const MolGraph& m) { return refine(m, seed_ranks(m)); }

std::vector<int> canonical_ranks(const MolGraph& m) {
  const int n = m.num_atoms();
  std::vector<int> ranks = refine(m, seed_ranks(m));

  // Break remaining ties by individualizing one atom of the lowest tied cell,
  // choosing the member whose refined partition trace is minimal.
  while (count_classes(ranks) < n) {
    int cell_rank = -1;
    for (int r = 0; cell_rank < 0; ++r) {
      int members = 0;
      for (int i = 0; i < n; ++i) members += (ranks[static_cast<size_t>(i)] == r);
      if (members > 1) cell_rank = r;
    }
    std::vector<int> cell;
    for (int i = 0; i < n; ++i)
      if (ranks[static_cast<size_t>(i)] == cell_rank) cell.push_back(i);

    std::vector<int> best_ranks;
    std::vector<Key> best_trace;
    for (int candidate : cell) {
      std::vector<int> trial(ranks.size());
      for (size_t i = 0; i < ranks.size(); ++i) trial[i] = ranks[i] * 2 + 1;
      trial[static_cast<size_t>(candidate)] -= 1;
      std::vector<std::pair<Key, int>> rekeyed;
      for (int i = 0; i < n; ++i) rekeyed.emplace_back(Key{trial[static_cast<size_t>(i)]}, i);
      std::vector<int> refined = refine(m, dense_ranks(rekeyed));
      std::vector<Key> trace = partition_trace(m, refined);
      if (best_ranks.empty() || trace < best_trace) {
        best_ranks = std::move(refined);
        best_trace = std::move(trace);
      }
    }
    ranks = std::move(best_ranks);
  }
  return ranks;
}

}  // namespace chemforge
