//
// ChemForge - Copyright 2026 ChemForge Developers.
// SPDX-License-Identifier: Apache-2.0
//

#include "chemforge/elements.hpp"

#include <array>
#include <string>
#include <unordered_map>

namespace chemforge {
namespace {

constexpr ElementInfo make(int num, const char* sym, double w, bool org, bool arom,
                           std::initializer_list<uint8_t> vals) {
  ElementInfo e{};
  e.number = num;
  e.symbol = sym;
  e.weight = w;
  e.organic_subset = org;
  e.aromatic_ok = arom;
  e.n_valences = static_cast<uint8_t>(vals.size());
  int i = 0;
  for (uint8_t v : vals) e.valences[i++] = v;
  return e;
}

// Standard atomic weights (IUPAC conventional values); radioactive elements
// carry the mass number of their most stable isotope.
const std::array<ElementInfo, kMaxAtomicNumber + 1> kElements = {{
    make(0, "*", 0.0, false, false, {}),
    make(1, "H", 1.008, false, false, {1}),
    make(2, "He", 4.0026, false, false, {0}),
    make(3, "Li", 6.94, false, false, {1}),
    make(4, "Be", 9.0122, false, false, {2}),
    make(5, "B", 10.81, true, true, {3}),
    make(6, "C", 12.011, true, true, {4}),
    make(7, "N", 14.007, true, true, {3, 5}),
    make(8, "O", 15.999, true, true, {2}),
    make(9, "F", 18.998, true, false, {1}),
    make(10, "Ne", 20.180, false, false, {0}),
    make(11, "Na", 22.990, false, false, {1}),
    make(12, "Mg", 24.305, false, false, {2}),
    make(13, "Al", 26.982, false, false, {3}),
    make(14, "Si", 28.085, false, false, {4}),
    make(15, "P", 30.974, true, true, {3, 5}),
    make(16, "S", 32.06, true, true, {2, 4, 6}),
    make(17, "Cl", 35.45, true, false, {1}),
    make(18, "Ar", 39.95, false, false, {0}),
    make(19, "K", 39.098, false, false, {1}),
    make(20, "Ca", 40.078, false, false, {2}),
    make(21, "Sc", 44.956, false, false, {}),
    make(22, "Ti", 47.867, false, false, {}),
    make(23, "V", 50.942, false, false, {}),
    make(24, "Cr", 51.996, false, false, {}),
    make(25, "Mn", 54.938, false, false, {}),
    make(26, "Fe", 55.845, false, false, {}),
    make(27, "Co", 58.933, false, false, {}),
    make(28, "Ni", 58.693, false, false, {}),
    make(29, "Cu", 63.546, false, false, {}),
    make(30, "Zn", 65.38, false, false, {}),
    make(31, "Ga", 69.723, false, false, {3}),
    make(32, "Ge", 72.630, false, false, {4}),
    make(33, "As", 74.922, false, true, {3, 5}),
    make(34, "Se", 78.971, false, true, {2, 4, 6}),
    make(35, "Br", 79.904, true, false, {1}),
    make(36, "Kr", 83.798, false, false, {0, 2}),
    make(37, "Rb", 85.468, false, false, {1}),
    make(38, "Sr", 87.62, false, false, {2}),
    make(39, "Y", 88.906, false, false, {}),
    make(40, "Zr", 91.224, false, false, {}),
    make(41, "Nb", 92.906, false, false, {}),
    make(42, "Mo", 95.95, false, false, {}),
    make(43, "Tc", 97.0, false, false, {}),
    make(44, "Ru", 101.07, false, false, {}),
    make(45, "Rh", 102.91, false, false, {}),
    make(46, "Pd", 106.42, false, false, {}),
    make(47, "Ag", 107.87, false, false, {}),
    make(48, "Cd", 112.41, false, false, {}),
    make(49, "In", 114.82, false, false, {3}),
    make(50, "Sn", 118.71, false, false, {2, 4}),
    make(51, "Sb", 121.76, false, false, {3, 5}),
    make(52, "Te", 127.60, false, false, {2, 4, 6}),
    make(53, "I", 126.90, true, false, {1}),
    make(54, "Xe", 131.29, false, false, {0, 2, 4, 6}),
    make(55, "Cs", 132.91, false, false, {1}),
    make(56, "Ba", 137.33, false, false, {2}),
    make(57, "La", 138.91, false, false, {}),
    make(58, "Ce", 140.12, false, false, {}),
    make(59, "Pr", 140.91, false, false, {}),
    make(60, "Nd", 144.24, false, false, {}),
    make(61, "Pm", 145.0, false, false, {}),
    make(62, "Sm", 150.36, false, false, {}),
    make(63, "Eu", 151.96, false, false, {}),
    make(64, "Gd", 157.25, false, false, {}),
    make(65, "Tb", 158.93, false, false, {}),
    make(66, "Dy", 162.50, false, false, {}),
    make(67, "Ho", 164.93, false, false, {}),
    make(68, "Er", 167.26, false, false, {}),
    make(69, "Tm", 168.93, false, false, {}),
    make(70, "Yb", 173.05, false, false, {}),
    make(71, "Lu", 174.97, false, false, {}),
    make(72, "Hf", 178.49, false, false, {}),
    make(73, "Ta", 180.95, false, false, {}),
    make(74, "W", 183.84, false, false, {}),
    make(75, "Re", 186.21, false, false, {}),
    make(76, "Os", 190.23, false, false, {}),
    make(77, "Ir", 192.22, false, false, {}),
    make(78, "Pt", 195.08, false, false, {}),
    make(79, "Au", 196.97, false, false, {}),
    make(80, "Hg", 200.59, false, false, {}),
    make(81, "Tl", 204.38, false, false, {1, 3}),
    make(82, "Pb", 207.2, false, false, {2, 4}),
    make(83, "Bi", 208.98, false, false, {3, 5}),
    make(84, "Po", 209.0, false, false, {2, 4, 6}),
    make(85, "At", 210.0, false, false, {1}),
    make(86, "Rn", 222.0, false, false, {0}),
    make(87, "Fr", 223.0, false, false, {1}),
    make(88, "Ra", 226.0, false, false, {2}),
    make(89, "Ac", 227.0, false, false, {}),
    make(90, "Th", 232.04, false, false, {}),
    make(91, "Pa", 231.04, false, false, {}),
    make(92, "U", 238.03, false, false, {}),
    make(93, "Np", 237.0, false, false, {}),
    make(94, "Pu", 244.0, false, false, {}),
    make(95, "Am", 243.0, false, false, {}),
    make(96, "Cm", 247.0, false, false, {}),
    make(97, "Bk", 247.0, false, false, {}),
    make(98, "Cf", 251.0, false, false, {}),
    make(99, "Es", 252.0, false, false, {}),
    make(100, "Fm", 257.0, false, false, {}),
    make(101, "Md", 258.0, false, false, {}),
    make(102, "No", 259.0, false, false, {}),
    make(103, "Lr", 266.0, false, false, {}),
    make(104, "Rf", 267.0, false, false, {}),
    make(105, "Db", 268.0, false, false, {}),
    make(106, "Sg", 269.0, false, false, {}),
    make(107, "Bh", 270.0, false, false, {}),
    make(108, "Hs", 277.0, false, false, {}),
    make(109, "Mt", 278.0, false, false, {}),
    make(110, "Ds", 281.0, false, false, {}),
    make(111, "Rg", 282.0, false, false, {}),
    make(112, "Cn", 285.0, false, false, {}),
    make(113, "Nh", 286.0, false, false, {}),
    make(114, "Fl", 289.0, false, false, {}),
    make(115, "Mc", 290.0, false, false, {}),
    make(116, "Lv", 293.0, false, false, {}),
    make(117, "Ts", 294.0, false, false, {}),
    make(118, "Og", 294.0, false, false, {}),
}};

struct SymbolTable {
  std::unordered_map<std::string, std::pair<int, bool>> map;  // symbol -> (Z, aromatic)
  SymbolTable() {
    for (const auto& e : kElements) {
      map.emplace(e.symbol, std::make_pair(e.number, false));
      if (e.aromatic_ok) {
        std::string lower(e.symbol);
        for (char& c : lower) c = static_cast<char>(std::tolower(c));
        map.emplace(lower, std::make_pair(e.number, true));
      }
    }
  }
};

const SymbolTable& symbol_table() {
  static const SymbolTable t;
  return t;
}

}  // namespace

const ElementInfo* find_element(std::string_view symbol, bool* aromatic) {
  const auto& tbl = symbol_table().map;
  auto it = tbl.find(std::string(symbol));
  if (it == tbl.end()) return nullptr;
  if (aromatic) *aromatic = it->second.second;
  return &kElements[static_cast<size_t>(it->second.first)];
}

const ElementInfo& element_info(int atomic_number) {
  return kElements[static_cast<size_t>(atomic_number)];
}

int charge_adjusted_valences(const ElementInfo& el, int charge, uint8_t out[4]) {
  if (el.permissive()) return 0;
  if (charge == 0) {
    for (int i = 0; i < el.n_valences; ++i) out[i] = el.valences[i];
    return el.n_valences;
  }
  // Isoelectronic shift: a charged atom binds like the neutral element with
  // the same electron count (N+ like C, O- like F, Na+ like Ne, ...).
  int eff = el.number - charge;
  if (eff <= 0) {
    out[0] = 0;  // bare proton-like cation
    return 1;
  }
  if (eff > kMaxAtomicNumber) return 0;
  const ElementInfo& shifted = element_info(eff);
  if (shifted.permissive()) return 0;
  for (int i = 0; i < shifted.n_valences; ++i) out[i] = shifted.valences[i];
  return shifted.n_valences;
}

}  // namespace chemforge
