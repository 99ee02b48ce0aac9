//
// ChemForge - Copyright 2026 ChemForge Developers.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef CHEMFORGE_SMILES_HPP
#define CHEMFORGE_SMILES_HPP

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "chemforge/mol.hpp"

namespace chemforge {

struct ParseOptions {
  // Accept-and-ignore atom maps and accept "*" as a dummy atom instead of
  // rejecting them.
  bool permissive = false;
};

// Parse a SMILES string into a finalized molecular graph (rings perceived,
// aromaticity assigned, implicit hydrogens filled in, valences checked).
// Throws SmilesError with a byte offset on malformed input.
MolGraph parse_smiles(std::string_view smiles, const ParseOptions& opts = {});

// True iff parse_smiles succeeds, including valence and kekulization checks.
bool is_valid_smiles(std::string_view smiles, const ParseOptions& opts = {}) noexcept;

struct WriteOptions {
  bool kekule = false;  // write aromatic rings in their kekule form
};

// Emit a SMILES string visiting atoms in order of ascending `priority`
// (one entry per atom; the lowest-priority atom of each component roots its
// traversal). The output re-parses to an isomorphic graph.
std::string write_smiles(const MolGraph& mol, std::span<const int> priority,
                         const WriteOptions& opts = {});

// Input-order-invariant canonical atom ranks (0..n-1, all distinct).
std::vector<int> canonical_ranks(const MolGraph& mol);

// Refined symmetry classes before tie-breaking: atoms with equal class are
// structurally interchangeable under iterative refinement.
std::vector<int> symmetry_classes(const MolGraph& mol);

// Deterministic canonical SMILES; invariant under input atom order and
// idempotent under re-parsing.
std::string canonical_smiles(const MolGraph& mol);
std::string canonical_smiles(std::string_view smiles);

// `n` random valid renderings of the molecule (random root and branch order),
// deterministic under `seed`. Every output canonicalizes back to
// canonical_smiles(mol).
std::vector<std::string> enumerate_smiles(const MolGraph& mol, int n, uint64_t seed);

}  // namespace chemforge

#endif
