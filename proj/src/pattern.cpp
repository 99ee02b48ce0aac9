//
// ChemForge - Copyright 2026 ChemForge Developers.
// SPDX-License-Identifier: Apache-2.0
//

#include "chemforge/pattern.hpp"

#include <array>
#include <cctype>

namespace chemforge {

// --- expression trees --------------------------------------------------------

struct Pattern::AtomExpr {
  enum class Kind {
    True,
    Element,       // value = atomic number
    Aromatic,      // aromatic flag
    Aliphatic,
    Charge,        // value
    TotalH,        // value
    Degree,        // value (heavy neighbors)
    Connectivity,  // value (heavy neighbors + hydrogens)
    Valence,       // value (bond order sum + hydrogens)
    InRing,
    RingCount,     // value (SSSR membership count)
    RingSize,      // value (member of an SSSR ring of this size)
    Not,
    And,
    Or,
  };
  Kind kind = Kind::True;
  int value = 0;
  std::shared_ptr<AtomExpr> lhs, rhs;
};

struct Pattern::BondExpr {
  enum class Kind { SingleOrAromatic, Single, Double, Triple, Aromatic, Any, Ring, Not, And, Or };
  Kind kind = Kind::SingleOrAromatic;
  std::shared_ptr<BondExpr> lhs, rhs;
};

namespace {

using AtomExpr = Pattern::AtomExpr;
using BondExpr = Pattern::BondExpr;
using AK = AtomExpr::Kind;
using BK = BondExpr::Kind;

std::shared_ptr<AtomExpr> leaf(AK k, int v = 0) {
  auto e = std::make_shared<AtomExpr>();
  e->kind = k;
  e->value = v;
  return e;
}

std::shared_ptr<AtomExpr> combine(AK k, std::shared_ptr<AtomExpr> a, std::shared_ptr<AtomExpr> b) {
  auto e = std::make_shared<AtomExpr>();
  e->kind = k;
  e->lhs = std::move(a);
  e->rhs = std::move(b);
  return e;
}

std::shared_ptr<BondExpr> bond_leaf(BK k) {
  auto e = std::make_shared<BondExpr>();
  e->kind = k;
  return e;
}

struct MatchContext {
  const MolGraph& mol;
  std::vector<std::vector<int>> atom_ring_sizes;  // per atom: sizes of SSSR rings

  explicit MatchContext(const MolGraph& m) : mol(m) {
    atom_ring_sizes.resize(static_cast<size_t>(m.num_atoms()));
    for (const auto& ring : m.ring_info().rings)
      for (int a : ring)
        atom_ring_sizes[static_cast<size_t>(a)].push_back(static_cast<int>(ring.size()));
  }
};

bool eval_atom(const AtomExpr& e, const MatchContext& ctx, int idx) {
  const Atom& a = ctx.mol.atom(idx);
  switch (e.kind) {
    case AK::True:
      return true;
    case AK::Element:
      return a.atomic_number == e.value;
    case AK::Aromatic:
      return a.aromatic;
    case AK::Aliphatic:
      return !a.aromatic;
    case AK::Charge:
      return a.charge == e.value;
    case AK::TotalH:
      return a.total_h() == e.value;
    case AK::Degree:
      return ctx.mol.degree(idx) == e.value;
    case AK::Connectivity:
      return ctx.mol.degree(idx) + a.total_h() == e.value;
    case AK::Valence:
      return ctx.mol.bond_order_sum(idx) + a.total_h() == e.value;
    case AK::InRing:
      return ctx.mol.atom_in_ring(idx);
    case AK::RingCount:
      return ctx.mol.ring_info().atom_ring_count[static_cast<size_t>(idx)] == e.value;
    case AK::RingSize:
      for (int s : ctx.atom_ring_sizes[static_cast<size_t>(idx)])
        if (s == e.value) return true;
      return false;
    case AK::Not:
      return !eval_atom(*e.lhs, ctx, idx);
    case AK::And:
      return eval_atom(*e.lhs, ctx, idx) && eval_atom(*e.rhs, ctx, idx);
    case AK::Or:
      return eval_atom(*e.lhs, ctx, idx) || eval_atom(*e.rhs, ctx, idx);
  }
  return false;
}

bool eval_bond(const BondExpr& e, const MatchContext& ctx, int bond_idx) {
  const Bond& b = ctx.mol.bond(bond_idx);
  switch (e.kind) {
    case BK::SingleOrAromatic:
      return b.aromatic || b.order == BondOrder::Single;
    case BK::Single:
      return !b.aromatic && b.order == BondOrder::Single;
    case BK::Double:
      return !b.aromatic && b.order == BondOrder::Double;
    case BK::Triple:
      return b.order == BondOrder::Triple;
    case BK::Aromatic:
      return b.aromatic;
    case BK::Any:
      return true;
    case BK::Ring:
      return ctx.mol.bond_in_ring(bond_idx);
    case BK::Not:
      return !eval_bond(*e.lhs, ctx, bond_idx);
    case BK::And:
      return eval_bond(*e.lhs, ctx, bond_idx) && eval_bond(*e.rhs, ctx, bond_idx);
    case BK::Or:
      return eval_bond(*e.lhs, ctx, bond_idx) || eval_bond(*e.rhs, ctx, bond_idx);
  }
  return false;
}

bool is_digit(char c) { return c >= '0' && c <= '9'; }

}  // namespace

// --- parser ------------------------------------------------------------------

struct PatternParser {
  std::string_view s;
  size_t i = 0;
  Pattern* out;

  int prev = -1;
  std::vector<int> branch_stack;
  std::shared_ptr<BondExpr> pending;
  std::array<std::pair<int, std::shared_ptr<BondExpr>>, 100> rings;

  explicit PatternParser(std::string_view sv, Pattern* p) : s(sv), out(p) {
    for (auto& r : rings) r.first = -1;
  }

  [[noreturn]] void fail(const std::string& msg, size_t off) { throw PatternError(off, msg); }

  void add_atom(std::shared_ptr<AtomExpr> expr) {
    out->atoms_.push_back(std::move(expr));
    out->adj_.emplace_back();
    int idx = static_cast<int>(out->atoms_.size()) - 1;
    if (prev >= 0) add_bond(prev, idx);
    prev = idx;
  }

  void add_bond(int a, int b) {
    Pattern::PatternBond pb;
    pb.a = a;
    pb.b = b;
    pb.expr = pending ? pending : bond_leaf(BK::SingleOrAromatic);
    pending.reset();
    out->bonds_.push_back(std::move(pb));
    int idx = static_cast<int>(out->bonds_.size()) - 1;
    out->adj_[static_cast<size_t>(a)].push_back(idx);
    out->adj_[static_cast<size_t>(b)].push_back(idx);
  }

  std::shared_ptr<BondExpr> bond_primitive() {
    if (i >= s.size()) return nullptr;
    switch (s[i]) {
      case '-':
        ++i;
        return bond_leaf(BK::Single);
      case '=':
        ++i;
        return bond_leaf(BK::Double);
      case '#':
        ++i;
        return bond_leaf(BK::Triple);
      case ':':
        ++i;
        return bond_leaf(BK::Aromatic);
      case '~':
        ++i;
        return bond_leaf(BK::Any);
      case '@':
        ++i;
        return bond_leaf(BK::Ring);
      case '!': {
        ++i;
        auto e = std::make_shared<BondExpr>();
        e->kind = BK::Not;
        e->lhs = bond_primitive();
        if (!e->lhs) fail("expected bond primitive after '!'", i);
        return e;
      }
      default:
        return nullptr;
    }
  }

  void maybe_bond() {
    auto first = bond_primitive();
    if (!first) return;
    while (i < s.size()) {
      if (s[i] == '&') {
        ++i;
        auto rhs = bond_primitive();
        if (!rhs) fail("expected bond primitive after '&'", i);
        auto e = std::make_shared<BondExpr>();
        e->kind = BK::And;
        e->lhs = first;
        e->rhs = rhs;
        first = e;
      } else if (s[i] == ',') {
        size_t save = i;
        ++i;
        auto rhs = bond_primitive();
        if (!rhs) {
          i = save;
          break;
        }
        auto e = std::make_shared<BondExpr>();
        e->kind = BK::Or;
        e->lhs = first;
        e->rhs = rhs;
        first = e;
      } else {
        size_t save = i;
        auto rhs = bond_primitive();
        if (!rhs) {
          i = save;
          break;
        }
        auto e = std::make_shared<BondExpr>();
        e->kind = BK::And;
        e->lhs = first;
        e->rhs = rhs;
        first = e;
      }
    }
    pending = first;
  }

  // bracket atom expression, SMARTS precedence: ! > & (implicit) > , > ;
  std::shared_ptr<AtomExpr> parse_expr() {
    auto lhs = parse_or();
    while (i < s.size() && s[i] == ';') {
      ++i;
      lhs = combine(AK::And, lhs, parse_or());
    }
    return lhs;
  }

  std::shared_ptr<AtomExpr> parse_or() {
    auto lhs = parse_and();
    while (i < s.size() && s[i] == ',') {
      ++i;
      lhs = combine(AK::Or, lhs, parse_and());
    }
    return lhs;
  }

  std::shared_ptr<AtomExpr> parse_and() {
    auto lhs = parse_not();
    while (i < s.size() && s[i] != ';' && s[i] != ',' && s[i] != ']') {
      if (s[i] == '&') ++i;
      lhs = combine(AK::And, lhs, parse_not());
    }
    return lhs;
  }

  std::shared_ptr<AtomExpr> parse_not() {
    if (i < s.size() && s[i] == '!') {
      ++i;
      auto e = std::make_shared<AtomExpr>();
      e->kind = AK::Not;
      e->lhs = parse_not();
      return e;
    }
    return parse_primitive();
  }

  int read_int(int fallback) {
    if (i >= s.size() || !is_digit(s[i])) return fallback;
    int v = 0;
    while (i < s.size() && is_digit(s[i])) v = v * 10 + (s[i++] - '0');
    return v;
  }

  std::shared_ptr<AtomExpr> parse_primitive() {
    if (i >= s.size()) fail("unterminated atom expression", i);
    char c = s[i];
    switch (c) {
      case '*':
        ++i;
        return leaf(AK::True);
      case '#': {
        ++i;
        int z = read_int(-1);
        if (z < 0 || z > kMaxAtomicNumber) fail("bad atomic number", i);
        return leaf(AK::Element, z);
      }
      case 'a':
        if (i + 1 < s.size() && s[i + 1] == 's') break;  // aromatic arsenic
        ++i;
        return leaf(AK::Aromatic);
      case 'A':
        if (i + 1 < s.size() && s[i + 1] == 's') break;  // aliphatic arsenic
        ++i;
        return leaf(AK::Aliphatic);
      case 'D': {
        ++i;
        return leaf(AK::Degree, read_int(1));
      }
      case 'X': {
        ++i;
        return leaf(AK::Connectivity, read_int(1));
      }
      case 'H': {
        // in an expression "H" counts attached hydrogens; use #1 to match
        // explicit hydrogen atoms
        ++i;
        return leaf(AK::TotalH, read_int(1));
      }
      case 'v': {
        ++i;
        return leaf(AK::Valence, read_int(1));
      }
      case 'R': {
        ++i;
        int n = read_int(-1);
        if (n < 0) return leaf(AK::InRing);
        if (n == 0) {
          auto e = std::make_shared<AtomExpr>();
          e->kind = AK::Not;
          e->lhs = leaf(AK::InRing);
          return e;
        }
        return leaf(AK::RingCount, n);
      }
      case 'r': {
        ++i;
        int n = read_int(-1);
        if (n < 0) return leaf(AK::InRing);
        return leaf(AK::RingSize, n);
      }
      case '+': {
        ++i;
        int n = 1;
        if (i < s.size() && is_digit(s[i]))
          n = read_int(1);
        else
          while (i < s.size() && s[i] == '+') {
            ++n;
            ++i;
          }
        return leaf(AK::Charge, n);
      }
      case '-': {
        ++i;
        int n = 1;
        if (i < s.size() && is_digit(s[i]))
          n = read_int(1);
        else
          while (i < s.size() && s[i] == '-') {
            ++n;
            ++i;
          }
        return leaf(AK::Charge, -n);
      }
      default:
        break;
    }
    // element symbol, longest match first
    for (int len : {2, 1}) {
      if (i + static_cast<size_t>(len) > s.size()) continue;
      std::string sym(s.substr(i, static_cast<size_t>(len)));
      if (len == 2) {
        bool upper_lower = std::isupper(static_cast<unsigned char>(sym[0])) &&
                           std::islower(static_cast<unsigned char>(sym[1]));
        if (!upper_lower && sym != "se" && sym != "as") continue;
      }
      bool aromatic = false;
      const ElementInfo* el = find_element(sym, &aromatic);
      if (!el) continue;
      i += static_cast<size_t>(len);
      return combine(AK::And, leaf(AK::Element, el->number),
                     leaf(aromatic ? AK::Aromatic : AK::Aliphatic, 0));
    }
    fail("unknown atom primitive", i);
  }

  void parse_bare_atom() {
    size_t off = i;
    char c = s[i];
    if (c == '*') {
      ++i;
      add_atom(leaf(AK::True));
      return;
    }
    if (c == 'a') {
      ++i;
      add_atom(leaf(AK::Aromatic));
      return;
    }
    if (c == 'A') {
      ++i;
      add_atom(leaf(AK::Aliphatic));
      return;
    }
    for (int len : {2, 1}) {
      if (i + static_cast<size_t>(len) > s.size()) continue;
      std::string sym(s.substr(i, static_cast<size_t>(len)));
      if (len == 2 && !(sym == "Cl" || sym == "Br")) continue;
      bool aromatic = false;
      const ElementInfo* el = find_element(sym, &aromatic);
      if (!el || !el->organic_subset) continue;
      i += static_cast<size_t>(len);
      add_atom(combine(AK::And, leaf(AK::Element, el->number),
                       leaf(aromatic ? AK::Aromatic : AK::Aliphatic, 0)));
      return;
    }
    fail("unknown bare atom", off);
  }

  void run() {
    while (i < s.size()) {
      char c = s[i];
      if (c == '(') {
        if (prev < 0) fail("branch before any atom", i);
        branch_stack.push_back(prev);
        ++i;
        continue;
      }
      if (c == ')') {
        if (branch_stack.empty()) fail("unmatched ')'", i);
        prev = branch_stack.back();
        branch_stack.pop_back();
        ++i;
        continue;
      }
      if (c == '[') {
        size_t off = i;
        ++i;
        auto expr = parse_expr();
        if (i >= s.size() || s[i] != ']') fail("expected ']'", off);
        ++i;
        add_atom(std::move(expr));
        continue;
      }
      if (is_digit(c) || c == '%') {
        int num;
        if (c == '%') {
          if (i + 2 >= s.size() || !is_digit(s[i + 1]) || !is_digit(s[i + 2]))
            fail("'%' needs two digits", i);
          num = (s[i + 1] - '0') * 10 + (s[i + 2] - '0');
          i += 3;
        } else {
          num = c - '0';
          ++i;
        }
        if (prev < 0) fail("ring bond before any atom", i);
        auto& slot = rings[static_cast<size_t>(num)];
        if (slot.first < 0) {
          slot = {prev, pending};
          pending.reset();
        } else {
          if (!pending) pending = slot.second;
          add_bond(slot.first, prev);
          slot = {-1, nullptr};
        }
        continue;
      }
      size_t before = i;
      maybe_bond();
      if (i != before) continue;
      parse_bare_atom();
    }
    if (!branch_stack.empty()) fail("unclosed branch", s.size());
    for (auto& r : rings)
      if (r.first >= 0) fail("unclosed ring bond", s.size());
    if (out->atoms_.empty()) fail("empty pattern", 0);
    std::vector<char> seen(out->atoms_.size(), 0);
    seen[0] = 1;
    for (const auto& b : out->bonds_) {
      if (seen[static_cast<size_t>(b.a)] || seen[static_cast<size_t>(b.b)]) {
        seen[static_cast<size_t>(b.a)] = 1;
        seen[static_cast<size_t>(b.b)] = 1;
      }
    }
    for (char f : seen)
      if (!f) fail("pattern must be connected", 0);
  }
};

// --- matching ----------------------------------------------------------------

struct PatternMatcher {
  const Pattern& p;
  const MatchContext ctx;

  PatternMatcher(const Pattern& pat, const MolGraph& mol) : p(pat), ctx(mol) {}

  bool bonds_consistent(const std::vector<int>& map, int pattern_atom) const {
    for (int bi : p.adj_[static_cast<size_t>(pattern_atom)]) {
      const auto& pb = p.bonds_[static_cast<size_t>(bi)];
      int other = pb.a == pattern_atom ? pb.b : pb.a;
      if (map[static_cast<size_t>(other)] < 0) continue;
      int tb = ctx.mol.bond_between(map[static_cast<size_t>(pattern_atom)],
                                    map[static_cast<size_t>(other)]);
      if (tb < 0 || !eval_bond(*pb.expr, ctx, tb)) return false;
    }
    return true;
  }

  void search(std::vector<int>& map, std::vector<char>& used, size_t k,
              std::vector<std::vector<int>>& out, size_t max_matches, int root_target) const {
    if (out.size() >= max_matches) return;
    if (k == p.atoms_.size()) {
      out.push_back(map);
      return;
    }
    if (k == 0) {
      auto try_root = [&](int t) {
        if (!eval_atom(*p.atoms_[0], ctx, t)) return;
        map[0] = t;
        used[static_cast<size_t>(t)] = 1;
        search(map, used, 1, out, max_matches, root_target);
        used[static_cast<size_t>(t)] = 0;
        map[0] = -1;
      };
      if (root_target >= 0) {
        try_root(root_target);
      } else {
        for (int t = 0; t < ctx.mol.num_atoms() && out.size() < max_matches; ++t) try_root(t);
      }
      return;
    }
    int anchor_atom = -1;
    for (int bi : p.adj_[static_cast<size_t>(k)]) {
      const auto& pb = p.bonds_[static_cast<size_t>(bi)];
      int other = pb.a == static_cast<int>(k) ? pb.b : pb.a;
      if (other < static_cast<int>(k)) {
        anchor_atom = other;
        break;
      }
    }
    int t_anchor = map[static_cast<size_t>(anchor_atom)];
    for (int tb : ctx.mol.bonds_of(t_anchor)) {
      if (out.size() >= max_matches) return;
      int cand = ctx.mol.bond(tb).other(t_anchor);
      if (used[static_cast<size_t>(cand)]) continue;
      if (!eval_atom(*p.atoms_[k], ctx, cand)) continue;
      map[k] = cand;
      used[static_cast<size_t>(cand)] = 1;
      if (bonds_consistent(map, static_cast<int>(k)))
        search(map, used, k + 1, out, max_matches, root_target);
      used[static_cast<size_t>(cand)] = 0;
      map[k] = -1;
    }
  }
};

// --- Pattern API -------------------------------------------------------------

Pattern::Pattern() = default;
Pattern::Pattern(Pattern&&) noexcept = default;
Pattern& Pattern::operator=(Pattern&&) noexcept = default;
Pattern::~Pattern() = default;

Pattern Pattern::parse(std::string_view smarts) {
  Pattern p;
  p.source_ = std::string(smarts);
  PatternParser parser(smarts, &p);
  parser.run();
  return p;
}

std::vector<std::vector<int>> Pattern::find_all(const MolGraph& mol, size_t max_matches) const {
  PatternMatcher m(*this, mol);
  std::vector<std::vector<int>> out;
  std::vector<int> map(atoms_.size(), -1);
  std::vector<char> used(static_cast<size_t>(mol.num_atoms()), 0);
  m.search(map, used, 0, out, max_matches, -1);
  return out;
}

bool Pattern::matches_root(const MolGraph& mol, int atom) const {
  PatternMatcher m(*this, mol);
  std::vector<std::vector<int>> out;
  std::vector<int> map(atoms_.size(), -1);
  std::vector<char> used(static_cast<size_t>(mol.num_atoms()), 0);
  m.search(map, used, 0, out, 1, atom);
  return !out.empty();
}

std::vector<std::vector<int>> find_substructure(const MolGraph& mol, const Pattern& pattern) {
  return pattern.find_all(mol);
}

}  // namespace chemforge
