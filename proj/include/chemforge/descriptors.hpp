//
// ChemForge - Copyright 2026 ChemForge Developers.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef CHEMFORGE_DESCRIPTORS_HPP
#define CHEMFORGE_DESCRIPTORS_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "chemforge/mol.hpp"
#include "chemforge/pattern.hpp"

namespace chemforge {

class DescriptorError : public std::runtime_error {
 public:
  enum class Code { UntypedAtom, MissingFragmentTable, BadTableFile };
  DescriptorError(Code code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Code code() const { return code_; }

 private:
  Code code_;
};

struct DescriptorSet {
  double mw = 0;
  double logp = 0;
  double tpsa = 0;
  int hbd = 0;
  int hba = 0;
  int rotb = 0;
  int arom_rings = 0;
  int alerts = 0;
  double qed = 0;
  double sa = 0;
};

// Priority-ordered (pattern, coefficient) rows; the first row whose first
// pattern atom maps onto an atom claims it. Rows with an @selector instead of
// a pattern are hydrogen rules dispatched in code.
class ContributionTable {
 public:
  struct Entry {
    std::string label;
    std::optional<Pattern> pattern;  // empty for hydrogen selector rows
    std::string selector;
    double value = 0;
  };

  static ContributionTable load(const std::string& path);
  const std::vector<Entry>& entries() const { return entries_; }
  double hydrogen_value(const std::string& selector) const;  // throws if absent

 private:
  std::vector<Entry> entries_;
  std::unordered_map<std::string, double> hydrogen_values_;
};

// Environment rows for the polar-surface-area sum.
class TpsaTable {
 public:
  struct Row {
    int element = 0;
    bool aromatic = false;
    int charge = 0;
    int hydrogens = 0;
    int singles = 0;
    int doubles = 0;
    int triples = 0;
    int aromatic_bonds = 0;
    int in_3_ring = -1;  // -1 = either
    double value = 0;
  };

  static TpsaTable load(const std::string& path);
  const std::vector<Row>& rows() const { return rows_; }

 private:
  std::vector<Row> rows_;
};

struct QedParameters {
  struct Ads {
    double a, b, c, d, e, f, dmax;
  };
  // order: MW, ALOGP, HBA, HBD, PSA, ROTB, AROM, ALERTS
  Ads ads[8];
  double weights[8];

  static QedParameters load(const std::string& path);
  static double desirability(const Ads& p, double x);
};

class AlertList {
 public:
  static AlertList load(const std::string& path);
  const std::vector<Pattern>& patterns() const { return patterns_; }
  const std::vector<std::string>& names() const { return names_; }

 private:
  std::vector<Pattern> patterns_;
  std::vector<std::string> names_;
};

// Circular-fragment score table for synthetic accessibility; binary format
// "CFRG" u32 version u64 count then (u64 hash, f32 score) records.
struct SaFragmentTable {
  std::unordered_map<uint64_t, float> scores;

  static SaFragmentTable load(const std::string& path);
  void save(const std::string& path) const;
};

struct BasicDescriptors {
  double mw = 0;
  int hbd = 0;
  int hba = 0;
  int rotb = 0;
  int arom_rings = 0;
};

// Resolves the bundled data directory: $CHEMFORGE_DATA_DIR if set, else the
// build-time default.
std::string default_data_dir();

// Hash ids of all circular atom environments up to the given radius
// (one id per atom per radius).
std::vector<uint64_t> circular_fragments(const MolGraph& mol, int max_radius = 2);

// Potential tetrahedral stereocenters (tagged or 4 distinct substituents).
int count_stereocenters(const MolGraph& mol);

// Table-explicit calculators (the engine methods below bind the bundled
// tables onto these).
double crippen_logp(const MolGraph& mol, const ContributionTable& table);
double tpsa(const MolGraph& mol, const TpsaTable& table, bool include_s_p = false);
int alerts_count(const MolGraph& mol, const std::vector<Pattern>& alert_patterns);
double sa_score(const MolGraph& mol, const SaFragmentTable& frag_scores);

class DescriptorEngine {
 public:
  // Loads every table from `data_dir`; the SA fragment table is optional
  // until sa_score is called.
  static DescriptorEngine load(const std::string& data_dir = default_data_dir());

  BasicDescriptors basic(const MolGraph& mol) const;
  double crippen_logp(const MolGraph& mol) const;
  double tpsa(const MolGraph& mol, bool include_s_p = false) const;
  int alerts_count(const MolGraph& mol) const;
  double qed(const MolGraph& mol) const;
  double sa_score(const MolGraph& mol) const;

  // Every descriptor, computed over the canonically reordered graph so that
  // equal molecules give bit-identical values regardless of input order.
  DescriptorSet compute(const MolGraph& mol) const;

  const ContributionTable& crippen_table() const { return crippen_; }
  bool has_sa_table() const { return sa_table_.has_value(); }
  void set_sa_table(SaFragmentTable table) { sa_table_ = std::move(table); }

 private:
  ContributionTable crippen_;
  TpsaTable tpsa_;
  QedParameters qed_;
  AlertList alerts_;
  std::optional<SaFragmentTable> sa_table_;
};

}  // namespace chemforge

#endif
