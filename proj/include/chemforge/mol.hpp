//
// ChemForge - Copyright 2026 ChemForge Developers.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef CHEMFORGE_MOL_HPP
#define CHEMFORGE_MOL_HPP

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "chemforge/elements.hpp"

namespace chemforge {

class SmilesError : public std::runtime_error {
 public:
  enum class Code {
    EmptyInput,
    UnbalancedParenthesis,
    UnclosedRingBond,
    UnknownElement,
    ValenceViolation,
    BadBracketAtom,
    DuplicateBond,
    SelfBond,
    UnexpectedCharacter,
    BadBondStereo,
  };

  SmilesError(Code code, size_t offset, const std::string& what, int atom = -1)
      : std::runtime_error(what + " (at byte " + std::to_string(offset) + ")"),
        code_(code),
        offset_(offset),
        raw_(what),
        atom_(atom) {}

  Code code() const { return code_; }
  size_t offset() const { return offset_; }
  const std::string& raw_message() const { return raw_; }
  // offending atom index when known (lets callers map back to input bytes)
  int atom_index() const { return atom_; }

 private:
  Code code_;
  size_t offset_;
  std::string raw_;
  int atom_;
};

enum class Chirality : uint8_t { None, CCW, CW };  // CCW = '@', CW = '@@'

enum class BondOrder : uint8_t { Single = 1, Double = 2, Triple = 3 };

enum class BondDir : uint8_t { None, Up, Down };  // '/' resp. '\' written a->b

struct Atom {
  int16_t atomic_number = 6;
  int8_t charge = 0;
  int16_t isotope = 0;     // 0 = unspecified
  int8_t explicit_h = -1;  // H count written in brackets; -1 = not specified
  int8_t implicit_h = 0;   // derived from the valence model
  bool aromatic = false;
  bool bracket = false;  // written as a bracket atom
  Chirality chirality = Chirality::None;

  int total_h() const { return explicit_h >= 0 ? explicit_h : implicit_h; }
  bool h_specified() const { return explicit_h >= 0; }
};

struct Bond {
  int a = -1;
  int b = -1;
  BondOrder order = BondOrder::Single;
  bool aromatic = false;  // order then holds the kekule assignment
  BondDir dir = BondDir::None;

  int other(int atom) const { return atom == a ? b : a; }
  int order_int() const { return static_cast<int>(order); }
};

// Tetrahedral center: neighbor atom indices in the order they appeared in the
// input (-1 marks the implicit hydrogen slot). `ccw` means looking from
// nbrs[0] toward the center, nbrs[1..3] run counterclockwise ('@').
struct TetrahedralStereo {
  int atom = -1;
  std::array<int, 4> nbrs = {-1, -1, -1, -1};
  bool ccw = true;
};

// Double-bond stereo: reference substituents nbr_a (bonded to bond.a) and
// nbr_b (bonded to bond.b); `cis` means they lie on the same side.
struct DoubleBondStereo {
  int bond = -1;
  int nbr_a = -1;
  int nbr_b = -1;
  bool cis = false;
};

struct RingInfo {
  std::vector<std::vector<int>> rings;  // SSSR atom cycles, in ring order
  std::vector<int> atom_ring_count;     // per atom: number of SSSR rings
  std::vector<int> bond_ring_count;     // per bond: number of SSSR rings
  std::vector<int> atom_min_ring;       // smallest ring size through atom, 0 = none
  std::vector<int> atom_ring_bonds;     // per atom: count of incident ring bonds
};

class MolGraph {
 public:
  int add_atom(const Atom& atom);
  // Returns the new bond index; throws on self/duplicate bonds.
  int add_bond(int a, int b, BondOrder order, bool aromatic = false,
               BondDir dir = BondDir::None);

  // Perceive rings and aromaticity, kekulize aromatic systems, assign
  // implicit hydrogens, and run the valence check. Must be called once after
  // construction; the parser does this automatically.
  void finalize();

  int num_atoms() const { return static_cast<int>(atoms_.size()); }
  int num_bonds() const { return static_cast<int>(bonds_.size()); }
  const Atom& atom(int i) const { return atoms_[static_cast<size_t>(i)]; }
  Atom& atom(int i) { return atoms_[static_cast<size_t>(i)]; }
  const Bond& bond(int i) const { return bonds_[static_cast<size_t>(i)]; }
  Bond& bond(int i) { return bonds_[static_cast<size_t>(i)]; }
  const std::vector<Atom>& atoms() const { return atoms_; }
  const std::vector<Bond>& bonds() const { return bonds_; }

  // Incident bond indices of an atom.
  const std::vector<int>& bonds_of(int atom) const {
    return adjacency_[static_cast<size_t>(atom)];
  }
  int degree(int atom) const {
    return static_cast<int>(adjacency_[static_cast<size_t>(atom)].size());
  }
  // Bond index between two atoms, or -1.
  int bond_between(int a, int b) const;

  const RingInfo& ring_info() const { return rings_; }
  bool atom_in_ring(int i) const { return rings_.atom_ring_count[static_cast<size_t>(i)] > 0; }
  bool bond_in_ring(int i) const { return rings_.bond_ring_count[static_cast<size_t>(i)] > 0; }

  // Sum of bond orders at an atom (kekule orders for aromatic bonds).
  int bond_order_sum(int atom) const;

  std::vector<TetrahedralStereo>& tetrahedral_centers() { return tets_; }
  const std::vector<TetrahedralStereo>& tetrahedral_centers() const { return tets_; }
  const TetrahedralStereo* tetrahedral_on(int atom) const;
  std::vector<DoubleBondStereo>& bond_stereo() { return bond_stereo_; }
  const std::vector<DoubleBondStereo>& bond_stereo() const { return bond_stereo_; }
  const DoubleBondStereo* stereo_on_bond(int bond) const;

  // Connected component id per atom (0-based, in order of first atom).
  const std::vector<int>& components() const { return component_; }
  int num_components() const { return n_components_; }

 private:
  void build_rings();
  void perceive_and_kekulize();
  void assign_hydrogens_and_check();

  std::vector<Atom> atoms_;
  std::vector<Bond> bonds_;
  std::vector<std::vector<int>> adjacency_;
  RingInfo rings_;
  std::vector<TetrahedralStereo> tets_;
  std::vector<DoubleBondStereo> bond_stereo_;
  std::vector<int> component_;
  int n_components_ = 0;
  bool finalized_ = false;
};

}  // namespace chemforge

#endif
