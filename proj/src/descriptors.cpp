//
// ChemForge - Copyright 2026 ChemForge Developers.
// SPDX-License-Identifier: Apache-2.0
//

#include "chemforge/descriptors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>

#include "chemforge/smiles.hpp"

namespace chemforge {

namespace {

using Code = DescriptorError::Code;

std::vector<std::string> split_tsv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == '\t') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

bool data_line(const std::string& line) {
  return !line.empty() && line[0] != '#' && line != "\r";
}

// Rebuild the graph with atoms in canonical order so every downstream sum and
// SSSR-dependent count is independent of input atom order.
MolGraph canonical_copy(const MolGraph& m) {
  std::vector<int> rank = canonical_ranks(m);
  const int n = m.num_atoms();
  std::vector<int> order(static_cast<size_t>(n));  // order[new] = old
  for (int i = 0; i < n; ++i) order[static_cast<size_t>(rank[static_cast<size_t>(i)])] = i;

  MolGraph out;
  for (int ni = 0; ni < n; ++ni) out.add_atom(m.atom(order[static_cast<size_t>(ni)]));
  struct B {
    int a, b;
    BondOrder order;
    bool aromatic;
    BondDir dir;
  };
  std::vector<B> bonds;
  for (const Bond& b : m.bonds()) {
    int na = rank[static_cast<size_t>(b.a)];
    int nb = rank[static_cast<size_t>(b.b)];
    BondDir dir = b.dir;
    if (na > nb && dir != BondDir::None)
      dir = dir == BondDir::Up ? BondDir::Down : BondDir::Up;
    bonds.push_back({std::min(na, nb), std::max(na, nb), b.order, b.aromatic, dir});
  }
  std::sort(bonds.begin(), bonds.end(), [](const B& x, const B& y) {
    return std::pair(x.a, x.b) < std::pair(y.a, y.b);
  });
  for (const B& b : bonds) out.add_bond(b.a, b.b, b.order, b.aromatic, b.dir);
  out.finalize();
  for (const auto& t : m.tetrahedral_centers()) {
    TetrahedralStereo nt = t;
    nt.atom = rank[static_cast<size_t>(t.atom)];
    for (int& v : nt.nbrs)
      if (v >= 0) v = rank[static_cast<size_t>(v)];
    out.tetrahedral_centers().push_back(nt);
  }
  for (const auto& s : m.bond_stereo()) {
    const Bond& b = m.bond(s.bond);
    DoubleBondStereo ns = s;
    ns.bond = out.bond_between(rank[static_cast<size_t>(b.a)], rank[static_cast<size_t>(b.b)]);
    ns.nbr_a = rank[static_cast<size_t>(s.nbr_a)];
    ns.nbr_b = rank[static_cast<size_t>(s.nbr_b)];
    out.bond_stereo().push_back(ns);
  }
  return out;
}

uint64_t mix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

uint64_t mix_pair(uint64_t a, uint64_t b) { return mix64(a ^ (b * 0x9e3779b97f4a7c15ull)); }

bool has_double_to(const MolGraph& m, int atom, std::initializer_list<int> elements) {
  for (int bi : m.bonds_of(atom)) {
    const Bond& b = m.bond(bi);
    if (b.aromatic || b.order != BondOrder::Double) continue;
    int z = m.atom(b.other(atom)).atomic_number;
    for (int e : elements)
      if (z == e) return true;
  }
  return false;
}

}  // namespace

// --- tables ------------------------------------------------------------------

ContributionTable ContributionTable::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DescriptorError(Code::BadTableFile, "cannot open " + path);
  ContributionTable t;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!data_line(line)) continue;
    auto cols = split_tsv(line);
    if (cols.size() != 3) throw DescriptorError(Code::BadTableFile, "bad row: " + line);
    Entry e;
    e.label = cols[0];
    e.value = std::stod(cols[2]);
    if (!cols[1].empty() && cols[1][0] == '@') {
      e.selector = cols[1];
      t.hydrogen_values_[e.selector] = e.value;
    } else {
      e.pattern = Pattern::parse(cols[1]);
    }
    t.entries_.push_back(std::move(e));
  }
  return t;
}

double ContributionTable::hydrogen_value(const std::string& selector) const {
  auto it = hydrogen_values_.find(selector);
  if (it == hydrogen_values_.end())
    throw DescriptorError(Code::BadTableFile, "missing hydrogen rule " + selector);
  return it->second;
}

TpsaTable TpsaTable::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DescriptorError(Code::BadTableFile, "cannot open " + path);
  TpsaTable t;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!data_line(line)) continue;
    std::istringstream ss(line);
    std::string sym;
    Row r;
    int arom;
    if (!(ss >> sym >> arom >> r.charge >> r.hydrogens >> r.singles >> r.doubles >> r.triples >>
          r.aromatic_bonds >> r.in_3_ring >> r.value))
      throw DescriptorError(Code::BadTableFile, "bad row: " + line);
    const ElementInfo* el = find_element(sym);
    if (!el) throw DescriptorError(Code::BadTableFile, "bad element: " + sym);
    r.element = el->number;
    r.aromatic = arom != 0;
    t.rows_.push_back(r);
  }
  return t;
}

QedParameters QedParameters::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DescriptorError(Code::BadTableFile, "cannot open " + path);
  static const char* kNames[8] = {"MW", "ALOGP", "HBA", "HBD", "PSA", "ROTB", "AROM", "ALERTS"};
  QedParameters q{};
  int seen = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (!data_line(line)) continue;
    std::istringstream ss(line);
    std::string name;
    Ads a{};
    double w;
    if (!(ss >> name >> a.a >> a.b >> a.c >> a.d >> a.e >> a.f >> a.dmax >> w))
      throw DescriptorError(Code::BadTableFile, "bad row: " + line);
    for (int i = 0; i < 8; ++i) {
      if (name == kNames[i]) {
        q.ads[i] = a;
        q.weights[i] = w;
        ++seen;
      }
    }
  }
  if (seen != 8) throw DescriptorError(Code::BadTableFile, "expected 8 desirability rows");
  return q;
}

double QedParameters::desirability(const Ads& p, double x) {
  double ds = p.a + p.b / (1.0 + std::exp(-(x - p.c + p.d / 2.0) / p.e)) *
                        (1.0 - 1.0 / (1.0 + std::exp(-(x - p.c - p.d / 2.0) / p.f)));
  double d = ds / p.dmax;
  return std::clamp(d, 1e-9, 1.0);
}

AlertList AlertList::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DescriptorError(Code::BadTableFile, "cannot open " + path);
  AlertList a;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!data_line(line)) continue;
    auto cols = split_tsv(line);
    a.patterns_.push_back(Pattern::parse(cols[0]));
    a.names_.push_back(cols.size() > 1 ? cols[1] : cols[0]);
  }
  return a;
}

SaFragmentTable SaFragmentTable::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DescriptorError(Code::MissingFragmentTable, "cannot open " + path);
  char magic[4];
  uint32_t version = 0;
  uint64_t count = 0;
  in.read(magic, 4);
  in.read(reinterpret_cast<char*>(&version), 4);
  in.read(reinterpret_cast<char*>(&count), 8);
  if (!in || std::memcmp(magic, "CFRG", 4) != 0 || version != 1)
    throw DescriptorError(Code::MissingFragmentTable, "bad fragment table header in " + path);
  SaFragmentTable t;
  t.scores.reserve(static_cast<size_t>(count));
  for (uint64_t i = 0; i < count; ++i) {
    uint64_t h;
    float s;
    in.read(reinterpret_cast<char*>(&h), 8);
    in.read(reinterpret_cast<char*>(&s), 4);
    if (!in) throw DescriptorError(Code::MissingFragmentTable, "truncated fragment table");
    t.scores.emplace(h, s);
  }
  return t;
}

void SaFragmentTable::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DescriptorError(Code::BadTableFile, "cannot write " + path);
  out.write("CFRG", 4);
  uint32_t version = 1;
  uint64_t count = scores.size();
  out.write(reinterpret_cast<const char*>(&version), 4);
  out.write(reinterpret_cast<const char*>(&count), 8);
  std::vector<std::pair<uint64_t, float>> sorted(scores.begin(), scores.end());
  std::sort(sorted.begin(), sorted.end());
  for (auto& [h, s] : sorted) {
    out.write(reinterpret_cast<const char*>(&h), 8);
    out.write(reinterpret_cast<const char*>(&s), 4);
  }
}

std::string default_data_dir() {
  if (const char* env = std::getenv("CHEMFORGE_DATA_DIR")) return env;
#ifdef CHEMFORGE_DEFAULT_DATA_DIR
  return CHEMFORGE_DEFAULT_DATA_DIR;
#else
  return "share/chemforge";
#endif
}

// --- fragments and stereocenters ----------------------------------------------

std::vector<uint64_t> circular_fragments(const MolGraph& m, int max_radius) {
  const int n = m.num_atoms();
  std::vector<uint64_t> inv(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    const Atom& a = m.atom(i);
    uint64_t h = mix64(static_cast<uint64_t>(a.atomic_number));
    h = mix_pair(h, static_cast<uint64_t>(a.charge + 16));
    h = mix_pair(h, static_cast<uint64_t>(a.total_h()));
    h = mix_pair(h, static_cast<uint64_t>(m.degree(i)));
    h = mix_pair(h, a.aromatic ? 2 : 1);
    h = mix_pair(h, m.atom_in_ring(i) ? 2 : 1);
    inv[static_cast<size_t>(i)] = h;
  }
  std::vector<uint64_t> out(inv);
  std::vector<uint64_t> next(static_cast<size_t>(n));
  for (int r = 1; r <= max_radius; ++r) {
    for (int i = 0; i < n; ++i) {
      std::vector<uint64_t> nbrs;
      for (int bi : m.bonds_of(i)) {
        const Bond& b = m.bond(bi);
        uint64_t bc = b.aromatic ? 4 : static_cast<uint64_t>(b.order_int());
        nbrs.push_back(mix_pair(bc, inv[static_cast<size_t>(b.other(i))]));
      }
      std::sort(nbrs.begin(), nbrs.end());
      uint64_t h = mix_pair(static_cast<uint64_t>(r), inv[static_cast<size_t>(i)]);
      for (uint64_t x : nbrs) h = mix_pair(h, x);
      next[static_cast<size_t>(i)] = h;
    }
    inv = next;
    out.insert(out.end(), inv.begin(), inv.end());
  }
  return out;
}

int count_stereocenters(const MolGraph& m) {
  std::vector<int> cls = symmetry_classes(m);
  int count = 0;
  std::vector<char> tagged(static_cast<size_t>(m.num_atoms()), 0);
  for (const auto& t : m.tetrahedral_centers()) tagged[static_cast<size_t>(t.atom)] = 1;
  for (int i = 0; i < m.num_atoms(); ++i) {
    const Atom& a = m.atom(i);
    if (tagged[static_cast<size_t>(i)]) {
      ++count;
      continue;
    }
    if (a.aromatic) continue;
    if (a.atomic_number != 6 && a.atomic_number != 14) continue;
    int h = a.total_h();
    if (m.degree(i) + h != 4 || h > 1) continue;
    std::vector<int> nbr_cls;
    for (int bi : m.bonds_of(i)) nbr_cls.push_back(cls[static_cast<size_t>(m.bond(bi).other(i))]);
    std::sort(nbr_cls.begin(), nbr_cls.end());
    if (std::adjacent_find(nbr_cls.begin(), nbr_cls.end()) == nbr_cls.end()) ++count;
  }
  return count;
}

// --- engine -------------------------------------------------------------------

DescriptorEngine DescriptorEngine::load(const std::string& data_dir) {
  DescriptorEngine e;
  e.crippen_ = ContributionTable::load(data_dir + "/crippen_logp.tsv");
  e.tpsa_ = TpsaTable::load(data_dir + "/tpsa.tsv");
  e.qed_ = QedParameters::load(data_dir + "/qed_params.tsv");
  e.alerts_ = AlertList::load(data_dir + "/qed_alerts.smarts");
  std::ifstream probe(data_dir + "/sa_fragments.bin", std::ios::binary);
  if (probe.good()) e.sa_table_ = SaFragmentTable::load(data_dir + "/sa_fragments.bin");
  return e;
}

BasicDescriptors DescriptorEngine::basic(const MolGraph& m) const {
  BasicDescriptors d;
  for (int i = 0; i < m.num_atoms(); ++i) {
    const Atom& a = m.atom(i);
    double w =
        a.isotope > 0 ? static_cast<double>(a.isotope) : element_info(a.atomic_number).weight;
    d.mw += w + 1.008 * a.total_h();
    if ((a.atomic_number == 7 || a.atomic_number == 8) && a.total_h() >= 1) ++d.hbd;
  }

  // Acceptor convention (frozen, shared with the reference labels): every N
  // except amide-like N, positively charged N, and aromatic lone-pair-donor
  // N; every O except aromatic O and nitro O.
  for (int i = 0; i < m.num_atoms(); ++i) {
    const Atom& a = m.atom(i);
    if (a.atomic_number == 7) {
      if (a.charge > 0) continue;
      if (a.aromatic && (a.total_h() > 0 || m.degree(i) == 3)) continue;
      bool amide_like = false;
      for (int bi : m.bonds_of(i)) {
        const Bond& b = m.bond(bi);
        if (b.aromatic || b.order != BondOrder::Single) continue;
        int x = b.other(i);
        int xz = m.atom(x).atomic_number;
        if ((xz == 6 || xz == 16) && has_double_to(m, x, {8, 16})) amide_like = true;
      }
      if (amide_like) continue;
      ++d.hba;
    } else if (a.atomic_number == 8) {
      if (a.aromatic) continue;
      bool nitro = false;
      for (int bi : m.bonds_of(i)) {
        const Atom& nb = m.atom(m.bond(bi).other(i));
        if (nb.atomic_number == 7 && nb.charge > 0) nitro = true;
      }
      if (nitro) continue;
      ++d.hba;
    }
  }

  // Rotatable: non-ring single bonds between heavy atoms of degree >= 2,
  // excluding amide C-N.
  for (int bi = 0; bi < m.num_bonds(); ++bi) {
    const Bond& b = m.bond(bi);
    if (b.aromatic || b.order != BondOrder::Single || m.bond_in_ring(bi)) continue;
    if (m.degree(b.a) < 2 || m.degree(b.b) < 2) continue;
    auto amide_cn = [&](int c, int n) {
      return m.atom(c).atomic_number == 6 && m.atom(n).atomic_number == 7 &&
             has_double_to(m, c, {8});
    };
    if (amide_cn(b.a, b.b) || amide_cn(b.b, b.a)) continue;
    ++d.rotb;
  }

  for (const auto& ring : m.ring_info().rings) {
    bool all_arom = true;
    for (int a : ring) all_arom = all_arom && m.atom(a).aromatic;
    d.arom_rings += all_arom;
  }
  return d;
}

double crippen_logp(const MolGraph& m, const ContributionTable& table) {
  const int n = m.num_atoms();
  std::vector<double> contrib(static_cast<size_t>(n), 0.0);
  std::vector<char> typed(static_cast<size_t>(n), 0);
  int remaining = n;
  for (const auto& e : table.entries()) {
    if (remaining == 0) break;
    if (!e.pattern) continue;
    for (int i = 0; i < n && remaining > 0; ++i) {
      if (typed[static_cast<size_t>(i)]) continue;
      if (e.pattern->matches_root(m, i)) {
        typed[static_cast<size_t>(i)] = 1;
        contrib[static_cast<size_t>(i)] = e.value;
        --remaining;
      }
    }
  }
  if (remaining > 0)
    throw DescriptorError(Code::UntypedAtom, "contribution table leaves atoms untyped");

  double total = 0;
  for (double c : contrib) total += c;

  const double h_c = table.hydrogen_value("@H_ON_CARBON");
  const double h_alc = table.hydrogen_value("@H_ON_ALCOHOL");
  const double h_n = table.hydrogen_value("@H_ON_AMINE");
  const double h_acid = table.hydrogen_value("@H_ON_ACID");
  const double h_fb = table.hydrogen_value("@H_FALLBACK");
  for (int i = 0; i < n; ++i) {
    const Atom& a = m.atom(i);
    int h = a.total_h();
    if (h == 0) continue;
    double per_h;
    switch (a.atomic_number) {
      case 1:
      case 6:
        per_h = h_c;
        break;
      case 7:
        per_h = h_n;
        break;
      case 8: {
        int nbr = m.degree(i) > 0 ? m.bond(m.bonds_of(i)[0]).other(i) : -1;
        if (nbr < 0) {
          per_h = h_fb;  // water
        } else {
          int xz = m.atom(nbr).atomic_number;
          if (xz == 7)
            per_h = h_n;  // N-OH
          else if (xz == 6 && has_double_to(m, nbr, {6, 7, 8, 16}))
            per_h = h_acid;  // acid / enol / amide OH
          else if (xz == 8 || xz == 16)
            per_h = h_acid;  // peroxide
          else
            per_h = h_alc;  // alcohol, phenol, O-H next to P/B/Si
        }
        break;
      }
      default:
        per_h = h_alc;  // H on anything outside C/N/O
        break;
    }
    total += per_h * h;
  }
  return total;
}

double tpsa(const MolGraph& m, const TpsaTable& table, bool include_s_p) {
  double total = 0;
  for (int i = 0; i < m.num_atoms(); ++i) {
    const Atom& a = m.atom(i);
    int z = a.atomic_number;
    if (z != 7 && z != 8 && !(include_s_p && (z == 16 || z == 15))) continue;
    int singles = 0, doubles = 0, triples = 0, aroms = 0;
    for (int bi : m.bonds_of(i)) {
      const Bond& b = m.bond(bi);
      if (b.aromatic)
        ++aroms;
      else if (b.order == BondOrder::Single)
        ++singles;
      else if (b.order == BondOrder::Double)
        ++doubles;
      else
        ++triples;
    }
    int in3 = m.ring_info().atom_min_ring[static_cast<size_t>(i)] == 3 ? 1 : 0;
    for (const auto& r : table.rows()) {
      if (r.element != z || r.aromatic != a.aromatic || r.charge != a.charge) continue;
      if (r.hydrogens != a.total_h() || r.singles != singles || r.doubles != doubles ||
          r.triples != triples || r.aromatic_bonds != aroms)
        continue;
      if (r.in_3_ring >= 0 && r.in_3_ring != in3) continue;
      total += r.value;
      break;  // unmatched polar environments simply contribute zero
    }
  }
  return total;
}

int alerts_count(const MolGraph& m, const std::vector<Pattern>& alert_patterns) {
  int count = 0;
  for (const auto& p : alert_patterns) count += p.matches(m);
  return count;
}

double DescriptorEngine::qed(const MolGraph& m) const {
  BasicDescriptors b = basic(m);
  double x[8] = {b.mw,
                 crippen_logp(m),
                 static_cast<double>(b.hba),
                 static_cast<double>(b.hbd),
                 tpsa(m),
                 static_cast<double>(b.rotb),
                 static_cast<double>(b.arom_rings),
                 static_cast<double>(alerts_count(m))};
  double num = 0, den = 0;
  for (int i = 0; i < 8; ++i) {
    num += qed_.weights[i] * std::log(QedParameters::desirability(qed_.ads[i], x[i]));
    den += qed_.weights[i];
  }
  return std::exp(num / den);
}

double sa_score(const MolGraph& m, const SaFragmentTable& frag_scores) {
  const int n = m.num_atoms();
  if (n == 0) return 1.0;

  std::vector<uint64_t> frags = circular_fragments(m, 2);
  std::unordered_map<uint64_t, int> counts;
  for (uint64_t f : frags) ++counts[f];
  double score1 = 0;
  int nf = 0;
  for (auto& [h, c] : counts) {
    auto it = frag_scores.scores.find(h);
    score1 += (it != frag_scores.scores.end() ? it->second : -4.0f) * c;
    nf += c;
  }
  score1 /= nf;

  int n_stereo = count_stereocenters(m);
  const auto& ri = m.ring_info();
  int n_macro = 0;
  for (const auto& ring : ri.rings) n_macro += ring.size() > 8;
  int n_spiro = 0, n_bridge = 0;
  for (int i = 0; i < n; ++i) {
    if (ri.atom_ring_count[static_cast<size_t>(i)] < 2) continue;
    bool spiro = false, bridge = false;
    for (size_t r = 0; r < ri.rings.size() && !(spiro && bridge); ++r) {
      if (!std::count(ri.rings[r].begin(), ri.rings[r].end(), i)) continue;
      for (size_t q = r + 1; q < ri.rings.size(); ++q) {
        if (!std::count(ri.rings[q].begin(), ri.rings[q].end(), i)) continue;
        int shared = 0;
        for (int a : ri.rings[r]) shared += std::count(ri.rings[q].begin(), ri.rings[q].end(), a);
        if (shared == 1) spiro = true;
        if (shared >= 3 && ri.atom_ring_bonds[static_cast<size_t>(i)] >= 3) bridge = true;
      }
    }
    n_spiro += spiro;
    n_bridge += bridge;
  }

  double size_penalty = std::pow(n, 1.005) - n;
  double stereo_penalty = std::log10(n_stereo + 1.0);
  double spiro_penalty = std::log10(n_spiro + 1.0);
  double bridge_penalty = std::log10(n_bridge + 1.0);
  double macro_penalty = n_macro > 0 ? std::log10(2.0) : 0.0;
  double score2 = -size_penalty - stereo_penalty - spiro_penalty - bridge_penalty - macro_penalty;

  double score3 = 0;
  if (n > static_cast<int>(counts.size()))
    score3 = 0.5 * std::log(static_cast<double>(n) / static_cast<double>(counts.size()));

  double raw = score1 + score2 + score3;
  const double lo = -4.0, hi = 2.5;
  double sa = 11.0 - (raw - lo + 1.0) / (hi - lo) * 9.0;
  if (sa > 8.0) sa = 8.0 + std::log(sa + 1.0 - 9.0);
  return std::clamp(sa, 1.0, 10.0);
}

double DescriptorEngine::crippen_logp(const MolGraph& m) const {
  return chemforge::crippen_logp(m, crippen_);
}

double DescriptorEngine::tpsa(const MolGraph& m, bool include_s_p) const {
  return chemforge::tpsa(m, tpsa_, include_s_p);
}

int DescriptorEngine::alerts_count(const MolGraph& m) const {
  return chemforge::alerts_count(m, alerts_.patterns());
}

double DescriptorEngine::sa_score(const MolGraph& m) const {
  if (!sa_table_)
    throw DescriptorError(Code::MissingFragmentTable, "no fragment score table loaded");
  return chemforge::sa_score(m, *sa_table_);
}

DescriptorSet DescriptorEngine::compute(const MolGraph& input) const {
  MolGraph m = canonical_copy(input);
  DescriptorSet d;
  BasicDescriptors b = basic(m);
  d.mw = b.mw;
  d.hbd = b.hbd;
  d.hba = b.hba;
  d.rotb = b.rotb;
  d.arom_rings = b.arom_rings;
  d.logp = crippen_logp(m);
  d.tpsa = tpsa(m);
  d.alerts = alerts_count(m);
  d.qed = qed(m);
  d.sa = sa_table_ ? sa_score(m) : 0.0;
  return d;
}

}  // namespace chemforge
