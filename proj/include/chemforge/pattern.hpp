//
// ChemForge - Copyright 2026 ChemForge Developers.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef CHEMFORGE_PATTERN_HPP
#define CHEMFORGE_PATTERN_HPP

#include <limits>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "chemforge/mol.hpp"

namespace chemforge {

class PatternError : public std::runtime_error {
 public:
  PatternError(size_t offset, const std::string& what)
      : std::runtime_error(what + " (at byte " + std::to_string(offset) + ")"),
        offset_(offset) {}
  size_t offset() const { return offset_; }

 private:
  size_t offset_;
};

// Substructure pattern over a SMARTS-like subset:
//   atoms:  C N O ... (aliphatic element), c n o ... (aromatic element),
//           * (any), a/A (aromatic/aliphatic), and bracket expressions with
//           primitives  #n  symbol  a A  Dn  Xn  Hn  vn  R  R0  Rn  rn
//           +n -n  combined with ! (not), & or juxtaposition (and),
//           , (or) and ; (low-precedence and)
//   bonds:  - = # : ~ (any) @ (ring), default single-or-aromatic
//   plus branches and ring closures as in SMILES. No recursive patterns.
class Pattern {
 public:
  struct AtomExpr;
  struct BondExpr;

  static Pattern parse(std::string_view smarts);

  int num_atoms() const { return static_cast<int>(atoms_.size()); }
  const std::string& source() const { return source_; }

  // All subgraph monomorphisms as pattern->target atom index maps, in
  // lexicographic order of the mapping vector.
  std::vector<std::vector<int>> find_all(
      const MolGraph& mol, size_t max_matches = std::numeric_limits<size_t>::max()) const;
  bool matches(const MolGraph& mol) const { return !find_all(mol, 1).empty(); }
  // Does any match map pattern atom 0 onto `atom`? (used for atom typing)
  bool matches_root(const MolGraph& mol, int atom) const;

  Pattern(Pattern&&) noexcept;
  Pattern& operator=(Pattern&&) noexcept;
  ~Pattern();

 private:
  Pattern();

  struct PatternBond {
    int a = -1;
    int b = -1;
    std::shared_ptr<BondExpr> expr;
  };

  std::vector<std::shared_ptr<AtomExpr>> atoms_;
  std::vector<PatternBond> bonds_;
  std::vector<std::vector<int>> adj_;  // atom -> bond indices
  std::string source_;

  friend struct PatternMatcher;
  friend struct PatternParser;
};

// Spec-facing convenience wrapper.
std::vector<std::vector<int>> find_substructure(const MolGraph& mol, const Pattern& pattern);

}  // namespace chemforge

#endif
