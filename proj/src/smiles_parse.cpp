//
// ChemForge - Copyright 2026 ChemForge Developers.
// SPDX-License-Identifier: Apache-2.0
//

#include <array>
#include <cctype>

#include "chemforge/smiles.hpp"

namespace chemforge {

namespace {

using Code = SmilesError::Code;

bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }
bool is_lower(char c) { return c >= 'a' && c <= 'z'; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

char complement_dir(char c) { return c == '/' ? '\\' : c == '\\' ? '/' : c; }

struct RingSlot {
  int atom = -1;
  char bond_char = 0;
  size_t offset = 0;
};

class Parser {
 public:
  Parser(std::string_view s, const ParseOptions& opts) : s_(s), opts_(opts) {}

  MolGraph run() {
    if (s_.empty()) throw SmilesError(Code::EmptyInput, 0, "empty SMILES input");
    while (i_ < s_.size()) step();
    if (!branch_stack_.empty())
      throw SmilesError(Code::UnbalancedParenthesis, s_.size(), "unclosed branch");
    if (pending_ != 0)
      throw SmilesError(Code::UnexpectedCharacter, pending_off_, "dangling bond symbol");
    for (const auto& slot : rings_)
      if (slot.atom >= 0)
        throw SmilesError(Code::UnclosedRingBond, slot.offset, "unclosed ring bond");
    if (mol_.num_atoms() == 0)
      throw SmilesError(Code::EmptyInput, 0, "no atoms in SMILES input");
    if (prev_ < 0)
      throw SmilesError(Code::UnexpectedCharacter, after_dot_, "trailing '.'");

    fold_explicit_hydrogens();
    try {
      mol_.finalize();
    } catch (const SmilesError& e) {
      size_t off = 0;
      if (e.atom_index() >= 0 &&
          e.atom_index() < static_cast<int>(atom_offset_.size()))
        off = atom_offset_[static_cast<size_t>(e.atom_index())];
      throw SmilesError(e.code(), off, e.raw_message(), e.atom_index());
    }
    extract_bond_stereo();
    build_tetrahedral_centers();
    return std::move(mol_);
  }

 private:
  void step() {
    char c = s_[i_];
    switch (c) {
      case '(': {
        if (prev_ < 0)
          throw SmilesError(Code::UnbalancedParenthesis, i_, "branch before any atom");
        if (pending_ != 0)
          throw SmilesError(Code::UnexpectedCharacter, i_, "bond symbol before branch open");
        branch_stack_.push_back(prev_);
        ++i_;
        return;
      }
      case ')': {
        if (branch_stack_.empty())
          throw SmilesError(Code::UnbalancedParenthesis, i_, "unmatched ')'");
        if (pending_ != 0)
          throw SmilesError(Code::UnexpectedCharacter, i_, "bond symbol before branch close");
        prev_ = branch_stack_.back();
        branch_stack_.pop_back();
        ++i_;
        return;
      }
      case '-':
      case '=':
      case '#':
      case ':':
      case '/':
      case '\\': {
        if (pending_ != 0)
          throw SmilesError(Code::UnexpectedCharacter, i_, "two bond symbols in a row");
        pending_ = c;
        pending_off_ = i_;
        ++i_;
        return;
      }
      case '$':
        throw SmilesError(Code::UnexpectedCharacter, i_, "quadruple bonds are not supported");
      case '.': {
        if (pending_ != 0)
          throw SmilesError(Code::UnexpectedCharacter, i_, "bond symbol before '.'");
        if (!branch_stack_.empty())
          throw SmilesError(Code::UnexpectedCharacter, i_, "'.' inside a branch");
        if (prev_ < 0)
          throw SmilesError(Code::UnexpectedCharacter, i_, "'.' with no preceding atom");
        prev_ = -1;
        after_dot_ = i_;
        ++i_;
        return;
      }
      case '%': {
        if (i_ + 2 >= s_.size() || !is_digit(s_[i_ + 1]) || !is_digit(s_[i_ + 2]))
          throw SmilesError(Code::UnexpectedCharacter, i_, "'%' needs two digits");
        int num = (s_[i_ + 1] - '0') * 10 + (s_[i_ + 2] - '0');
        ring_digit(num, i_);
        i_ += 3;
        return;
      }
      case '[': {
        parse_bracket_atom();
        return;
      }
      case '*': {
        if (!opts_.permissive)
          throw SmilesError(Code::UnknownElement, i_,
                            "wildcard atom '*' (enable permissive mode to accept)");
        Atom a;
        a.atomic_number = 0;
        add_atom(a, i_);
        ++i_;
        return;
      }
      default:
        break;
    }
    if (is_digit(c)) {
      ring_digit(c - '0', i_);
      ++i_;
      return;
    }
    if (is_upper(c) || is_lower(c)) {
      parse_organic_atom();
      return;
    }
    throw SmilesError(Code::UnexpectedCharacter, i_, "unexpected character");
  }

  void parse_organic_atom() {
    // Outside brackets only the organic subset may be written bare; two-letter
    // matches are limited to Cl and Br.
    size_t off = i_;
    std::string_view rest = s_.substr(i_);
    std::string sym;
    if (rest.size() >= 2 && (rest.substr(0, 2) == "Cl" || rest.substr(0, 2) == "Br"))
      sym = rest.substr(0, 2);
    else
      sym = rest.substr(0, 1);
    bool aromatic = false;
    const ElementInfo* el = find_element(sym, &aromatic);
    if (!el || !el->organic_subset)
      throw SmilesError(Code::UnknownElement, off,
                        "unknown or non-organic-subset symbol '" + sym + "'");
    if (aromatic && !el->aromatic_ok)
      throw SmilesError(Code::UnknownElement, off, "element has no aromatic form");
    Atom a;
    a.atomic_number = static_cast<int16_t>(el->number);
    a.aromatic = aromatic;
    add_atom(a, off);
    i_ += sym.size();
  }

  void parse_bracket_atom() {
    size_t open = i_;
    size_t j = i_ + 1;
    auto need = [&](bool cond, const char* msg) {
      if (!cond) throw SmilesError(Code::BadBracketAtom, open, msg);
    };
    need(j < s_.size(), "unterminated bracket atom");

    Atom a;
    a.bracket = true;
    a.explicit_h = 0;

    // isotope
    int isotope = 0;
    bool has_iso = false;
    while (j < s_.size() && is_digit(s_[j])) {
      isotope = isotope * 10 + (s_[j] - '0');
      has_iso = true;
      ++j;
    }
    need(!has_iso || (isotope > 0 && isotope < 1000), "bad isotope");
    a.isotope = static_cast<int16_t>(isotope);

    // element symbol (full periodic table, longest match; aromatic lowercase
    // forms allowed for b c n o p s se as)
    need(j < s_.size(), "unterminated bracket atom");
    const ElementInfo* el = nullptr;
    bool aromatic = false;
    if (s_[j] == '*') {
      if (!opts_.permissive)
        throw SmilesError(Code::UnknownElement, j,
                          "wildcard atom '*' (enable permissive mode to accept)");
      el = &element_info(0);
      ++j;
    } else {
      size_t sym_len = 0;
      if (j + 1 < s_.size() && is_lower(s_[j + 1])) {
        std::string two = std::string(s_.substr(j, 2));
        if (find_element(two, &aromatic) && two != "nH" && two != "cH")
          sym_len = 2;
      }
      if (sym_len == 0 && (is_upper(s_[j]) || is_lower(s_[j]))) sym_len = 1;
      need(sym_len > 0, "expected element symbol");
      std::string sym(s_.substr(j, sym_len));
      el = find_element(sym, &aromatic);
      if (!el) throw SmilesError(Code::UnknownElement, j, "unknown element '" + sym + "'");
      if (aromatic && !el->aromatic_ok)
        throw SmilesError(Code::UnknownElement, j, "element has no aromatic form");
      j += sym_len;
    }
    a.atomic_number = static_cast<int16_t>(el->number);
    a.aromatic = aromatic;

    // chirality
    if (j < s_.size() && s_[j] == '@') {
      ++j;
      if (j < s_.size() && s_[j] == '@') {
        a.chirality = Chirality::CW;
        ++j;
      } else {
        a.chirality = Chirality::CCW;
      }
    }

    // hydrogen count
    if (j < s_.size() && s_[j] == 'H') {
      ++j;
      int h = 1;
      if (j < s_.size() && is_digit(s_[j])) {
        h = s_[j] - '0';
        ++j;
      }
      a.explicit_h = static_cast<int8_t>(h);
    }

    // charge
    if (j < s_.size() && (s_[j] == '+' || s_[j] == '-')) {
      char sign = s_[j];
      int count = 0;
      while (j < s_.size() && s_[j] == sign) {
        ++count;
        ++j;
      }
      if (count == 1 && j < s_.size() && is_digit(s_[j])) {
        count = s_[j] - '0';
        ++j;
      }
      need(count <= 9, "charge too large");
      a.charge = static_cast<int8_t>(sign == '+' ? count : -count);
    }

    // atom map (rejected unless permissive)
    if (j < s_.size() && s_[j] == ':') {
      size_t map_off = j;
      ++j;
      bool any = false;
      while (j < s_.size() && is_digit(s_[j])) {
        ++j;
        any = true;
      }
      need(any, "bad atom map");
      if (!opts_.permissive)
        throw SmilesError(Code::BadBracketAtom, map_off,
                          "atom maps not accepted (enable permissive mode)");
    }

    need(j < s_.size() && s_[j] == ']', "expected ']'");
    add_atom(a, open);
    i_ = j + 1;
  }

  void add_atom(const Atom& a, size_t off) {
    int idx = mol_.add_atom(a);
    atom_offset_.push_back(off);
    parsed_nbrs_.emplace_back();
    if (prev_ >= 0) {
      make_bond(prev_, idx, pending_, pending_off_);
      pending_ = 0;
      parsed_nbrs_[static_cast<size_t>(idx)].push_back(prev_);
    } else if (pending_ != 0) {
      throw SmilesError(Code::UnexpectedCharacter, pending_off_, "bond with no previous atom");
    }
    // The in-bracket implicit hydrogen occupies the neighbor slot right after
    // the preceding atom for chirality purposes.
    if (a.chirality != Chirality::None && a.explicit_h >= 1)
      parsed_nbrs_[static_cast<size_t>(idx)].push_back(kImplicitH);
    prev_ = idx;
  }

  void make_bond(int from, int to, char bond_char, size_t off) {
    const Atom& fa = mol_.atom(from);
    const Atom& ta = mol_.atom(to);
    BondOrder order = BondOrder::Single;
    bool aromatic = false;
    BondDir dir = BondDir::None;
    switch (bond_char) {
      case 0:
        if (fa.aromatic && ta.aromatic) aromatic = true;
        break;
      case '-':
        break;
      case '/':
        dir = BondDir::Up;
        break;
      case '\\':
        dir = BondDir::Down;
        break;
      case '=':
        order = BondOrder::Double;
        break;
      case '#':
        order = BondOrder::Triple;
        break;
      case ':':
        if (!fa.aromatic || !ta.aromatic)
          throw SmilesError(Code::ValenceViolation, off,
                            "':' bond between non-aromatic atoms");
        aromatic = true;
        break;
      default:
        throw SmilesError(Code::UnexpectedCharacter, off, "bad bond symbol");
    }
    try {
      mol_.add_bond(from, to, order, aromatic, dir);
    } catch (const SmilesError& e) {
      throw SmilesError(e.code(), off, e.what());
    }
    parsed_nbrs_[static_cast<size_t>(from)].push_back(to);
  }

  void ring_digit(int num, size_t off) {
    if (prev_ < 0)
      throw SmilesError(Code::UnexpectedCharacter, off, "ring bond before any atom");
    RingSlot& slot = rings_[static_cast<size_t>(num)];
    if (slot.atom < 0) {
      slot.atom = prev_;
      slot.bond_char = pending_;
      slot.offset = off;
      pending_ = 0;
      parsed_nbrs_[static_cast<size_t>(prev_)].push_back(kRingPlaceholder - num);
      return;
    }
    // closing side: its direction symbol is written from the closer's
    // perspective, so complement it to the opener's orientation
    char open_char = slot.bond_char;
    char close_char = pending_;
    pending_ = 0;
    if (close_char == '/' || close_char == '\\') close_char = complement_dir(close_char);
    char eff = 0;
    if (open_char && close_char) {
      if (open_char != close_char)
        throw SmilesError(Code::BadBondStereo, off, "conflicting ring bond symbols");
      eff = open_char;
    } else {
      eff = open_char ? open_char : close_char;
    }
    int opener = slot.atom;
    int closer = prev_;
    slot.atom = -1;
    slot.bond_char = 0;
    make_bond_ring(opener, closer, eff, off, num);
  }

  void make_bond_ring(int opener, int closer, char bond_char, size_t off, int num) {
    make_bond(opener, closer, bond_char, off);
    // make_bond appended `closer` to opener's list; move it into the slot the
    // digit reserved, and append the opener on the closing side.
    auto& lst = parsed_nbrs_[static_cast<size_t>(opener)];
    lst.pop_back();
    for (auto& v : lst)
      if (v == kRingPlaceholder - num) v = closer;
    parsed_nbrs_[static_cast<size_t>(closer)].push_back(opener);
  }

  // Plain explicit hydrogens ([H] with no isotope/charge/chirality, single
  // bond to one heavy atom) are folded into the neighbor's hydrogen count so
  // [H]C([H])([H])[H] and C parse to the same graph.
  void fold_explicit_hydrogens() {
    const int n = mol_.num_atoms();
    std::vector<char> fold(static_cast<size_t>(n), 0);
    bool any = false;
    for (int i = 0; i < n; ++i) {
      const Atom& a = mol_.atom(i);
      if (a.atomic_number != 1 || a.isotope != 0 || a.charge != 0 ||
          a.chirality != Chirality::None || a.explicit_h > 0)
        continue;
      if (mol_.degree(i) != 1) continue;
      const Bond& b = mol_.bond(mol_.bonds_of(i)[0]);
      if (b.order != BondOrder::Single || b.aromatic || b.dir != BondDir::None) continue;
      if (mol_.atom(b.other(i)).atomic_number <= 1) continue;
      fold[static_cast<size_t>(i)] = 1;
      any = true;
    }
    if (!any) return;

    MolGraph rebuilt;
    std::vector<int> remap(static_cast<size_t>(n), -1);
    std::vector<int> extra_h(static_cast<size_t>(n), 0);
    std::vector<size_t> offsets;
    for (int i = 0; i < n; ++i) {
      if (fold[static_cast<size_t>(i)]) {
        int nbr = mol_.bond(mol_.bonds_of(i)[0]).other(i);
        ++extra_h[static_cast<size_t>(nbr)];
      }
    }
    for (int i = 0; i < n; ++i) {
      if (fold[static_cast<size_t>(i)]) continue;
      Atom a = mol_.atom(i);
      if (extra_h[static_cast<size_t>(i)] > 0) {
        int base = a.explicit_h >= 0 ? a.explicit_h : 0;
        a.explicit_h = static_cast<int8_t>(base + extra_h[static_cast<size_t>(i)]);
        a.bracket = true;
      }
      remap[static_cast<size_t>(i)] = rebuilt.add_atom(a);
      offsets.push_back(atom_offset_[static_cast<size_t>(i)]);
    }
    for (int bi = 0; bi < mol_.num_bonds(); ++bi) {
      const Bond& b = mol_.bond(bi);
      if (fold[static_cast<size_t>(b.a)] || fold[static_cast<size_t>(b.b)]) continue;
      rebuilt.add_bond(remap[static_cast<size_t>(b.a)], remap[static_cast<size_t>(b.b)], b.order,
                       b.aromatic, b.dir);
    }
    std::vector<std::vector<int>> nbrs2;
    for (int i = 0; i < n; ++i) {
      if (fold[static_cast<size_t>(i)]) continue;
      std::vector<int> lst;
      for (int v : parsed_nbrs_[static_cast<size_t>(i)]) {
        if (v >= 0 && fold[static_cast<size_t>(v)])
          lst.push_back(kImplicitH);  // folded H keeps its stereo slot
        else if (v >= 0)
          lst.push_back(remap[static_cast<size_t>(v)]);
        else
          lst.push_back(v);
      }
      nbrs2.push_back(std::move(lst));
    }
    mol_ = std::move(rebuilt);
    parsed_nbrs_ = std::move(nbrs2);
    atom_offset_ = std::move(offsets);
  }

  // Convert parsed bond directions into cis/trans specs on double bonds.
  void extract_bond_stereo() {
    for (int bi = 0; bi < mol_.num_bonds(); ++bi) {
      const Bond& db = mol_.bond(bi);
      if (db.order != BondOrder::Double || db.aromatic) continue;
      auto side_of = [&](int end, int* ref_nbr) -> int {
        int side = 0;
        for (int nb : mol_.bonds_of(end)) {
          const Bond& b = mol_.bond(nb);
          if (nb == bi || b.dir == BondDir::None || b.order != BondOrder::Single) continue;
          int nbr = b.other(end);
          int s = (b.dir == BondDir::Up) ? 1 : -1;
          if (b.a == nbr) s = -s;  // neighbor written first
          if (side == 0) {
            side = s;
            *ref_nbr = nbr;
          } else if (side == s) {
            throw SmilesError(Code::BadBondStereo, 0,
                              "conflicting bond directions at a double bond");
          }
        }
        return side;
      };
      int ra = -1, rb = -1;
      int sa = side_of(db.a, &ra);
      int sb = side_of(db.b, &rb);
      if (sa == 0 || sb == 0) continue;
      DoubleBondStereo st;
      st.bond = bi;
      st.nbr_a = ra;
      st.nbr_b = rb;
      st.cis = (sa == sb);
      mol_.bond_stereo().push_back(st);
    }
  }

  void build_tetrahedral_centers() {
    for (int i = 0; i < mol_.num_atoms(); ++i) {
      Atom& a = mol_.atom(i);
      if (a.chirality == Chirality::None) continue;
      std::vector<int> order;
      for (int v : parsed_nbrs_[static_cast<size_t>(i)])
        order.push_back(v == kImplicitH ? -1 : v);
      if (order.size() != 4) {
        a.chirality = Chirality::None;  // degenerate spec: drop the tag
        continue;
      }
      TetrahedralStereo t;
      t.atom = i;
      std::copy(order.begin(), order.end(), t.nbrs.begin());
      t.ccw = (a.chirality == Chirality::CCW);
      mol_.tetrahedral_centers().push_back(t);
    }
  }

  static constexpr int kImplicitH = -1;
  static constexpr int kRingPlaceholder = -100;

  std::string_view s_;
  ParseOptions opts_;
  MolGraph mol_;
  size_t i_ = 0;
  int prev_ = -1;
  size_t after_dot_ = 0;
  char pending_ = 0;
  size_t pending_off_ = 0;
  std::vector<int> branch_stack_;
  std::array<RingSlot, 100> rings_;
  std::vector<size_t> atom_offset_;
  std::vector<std::vector<int>> parsed_nbrs_;
};

}  // namespace

MolGraph parse_smiles(std::string_view smiles, const ParseOptions& opts) {
  return Parser(smiles, opts).run();
}

bool is_valid_smiles(std::string_view smiles, const ParseOptions& opts) noexcept {
  try {
    parse_smiles(smiles, opts);
    return true;
  } catch (...) {
    return false;
  }
}

}  // namespace chemforge
