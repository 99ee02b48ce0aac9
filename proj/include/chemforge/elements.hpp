//
// ChemForge - Copyright 2026 ChemForge Developers.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef CHEMFORGE_ELEMENTS_HPP
#define CHEMFORGE_ELEMENTS_HPP

#include <cstdint>
#include <span>
#include <string_view>

namespace chemforge {

// Static per-element data. Valence sets are the fixed allowed-valence model
// (C:4, N:3/5, O:2, S:2/4/6, ...); elements with an empty set are treated as
// permissive (no valence check, no implicit hydrogens).
struct ElementInfo {
  int number = 0;
  const char* symbol = "";
  double weight = 0.0;
  bool organic_subset = false;  // may be written bare: B C N O P S F Cl Br I
  bool aromatic_ok = false;     // has a lowercase aromatic form
  uint8_t n_valences = 0;
  uint8_t valences[4] = {0, 0, 0, 0};

  std::span<const uint8_t> allowed_valences() const {
    return {valences, n_valences};
  }
  bool permissive() const { return n_valences == 0; }
};

inline constexpr int kMaxAtomicNumber = 118;

// Lookup by symbol ("Cl", "c", ...). Aromatic lowercase forms resolve to the
// same element; `aromatic` is set when the matched symbol was lowercase.
// Returns nullptr for unknown symbols.
const ElementInfo* find_element(std::string_view symbol, bool* aromatic = nullptr);

// Lookup by atomic number (1..118). Number 0 is the dummy atom "*".
const ElementInfo& element_info(int atomic_number);

// Allowed valences adjusted for formal charge. Electron-rich elements
// (groups 15-17) gain one bonding slot per positive charge and lose one per
// negative; groups 13-14 do the opposite (borate anions bind four, carbenium
// binds three). Writes up to 4 entries into `out`, returns count; 0 means
// permissive.
int charge_adjusted_valences(const ElementInfo& el, int charge, uint8_t out[4]);

}  // namespace chemforge

#endif
