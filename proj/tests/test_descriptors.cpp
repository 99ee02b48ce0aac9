//
// ChemForge - Copyright 2026 ChemForge Developers.
// SPDX-License-Identifier: Apache-2.0
//

#include <doctest.h>

#include <cmath>
#include <fstream>

#include "chemforge/descriptors.hpp"
#include "chemforge/smiles.hpp"

using namespace chemforge;

namespace {

const DescriptorEngine& engine() {
  static DescriptorEngine e =
      DescriptorEngine::load(std::string(CHEMFORGE_SOURCE_DIR) + "/share/chemforge");
  return e;
}

double logp_of(const char* s) { return engine().crippen_logp(parse_smiles(s)); }
double tpsa_of(const char* s) { return engine().tpsa(parse_smiles(s)); }

}  // namespace

TEST_CASE("basic descriptors: ethanol and benzene") {
  BasicDescriptors e = engine().basic(parse_smiles("CCO"));
  CHECK(e.hbd == 1);
  CHECK(e.hba == 1);
  CHECK(e.rotb == 0);
  CHECK(e.arom_rings == 0);
  CHECK(e.mw == doctest::Approx(46.07).epsilon(0.001));

  BasicDescriptors b = engine().basic(parse_smiles("c1ccccc1"));
  CHECK(b.mw == doctest::Approx(78.11).epsilon(0.0002));
  CHECK(b.arom_rings == 1);
  CHECK(b.hbd == 0);
  CHECK(b.hba == 0);
}

TEST_CASE("count conventions on classic cases") {
  auto counts = [&](const char* s) { return engine().basic(parse_smiles(s)); };
  CHECK(counts("c1ccncc1").hba == 1);        // pyridine N accepts
  CHECK(counts("c1cc[nH]c1").hba == 0);      // pyrrole N does not
  CHECK(counts("CC(=O)N").hba == 1);         // amide: only the O
  CHECK(counts("CC(=O)N").hbd == 1);         // NH2 donates
  CHECK(counts("O=[N+]([O-])c1ccccc1").hba == 0);
  CHECK(counts("c1ccoc1").hba == 0);         // furan O excluded
  CHECK(counts("CCOCC").rotb == 2);
  CHECK(counts("CC(=O)NC").rotb == 0);       // amide C-N excluded
  CHECK(counts("CCCC").rotb == 1);
  CHECK(counts("c1ccc2ccccc2c1").arom_rings == 2);
}

TEST_CASE("additive logP reproduces reference values") {
  // frozen anchors for the additive atom-contribution scheme
  CHECK(logp_of("C") == doctest::Approx(0.6361).epsilon(1e-4));
  CHECK(logp_of("c1ccccc1") == doctest::Approx(1.6866).epsilon(1e-4));
  CHECK(logp_of("CCO") == doctest::Approx(-0.0014).epsilon(1e-3));
  CHECK(logp_of("Oc1ccccc1") == doctest::Approx(1.3922).epsilon(1e-4));
  CHECK(logp_of("Nc1ccccc1") == doctest::Approx(1.2688).epsilon(1e-4));
  CHECK(logp_of("Cc1ccccc1") == doctest::Approx(1.9950).epsilon(1e-4));
  CHECK(logp_of("c1ccncc1") == doctest::Approx(1.0816).epsilon(1e-4));
  CHECK(logp_of("CC(=O)O") == doctest::Approx(0.0909).epsilon(1e-3));
  CHECK(logp_of("CC(=O)N") == doctest::Approx(-0.5084).epsilon(1e-3));
  CHECK(logp_of("Clc1ccccc1") == doctest::Approx(2.3400).epsilon(1e-4));
}

TEST_CASE("logP is additive over components") {
  double joint = logp_of("CCO.c1ccccc1");
  CHECK(joint == doctest::Approx(logp_of("CCO") + logp_of("c1ccccc1")).epsilon(1e-9));
}

TEST_CASE("polar surface area reproduces reference values") {
  CHECK(tpsa_of("c1ccccc1") == doctest::Approx(0.0));
  CHECK(tpsa_of("CCO") == doctest::Approx(20.23).epsilon(1e-6));
  CHECK(tpsa_of("c1ccncc1") == doctest::Approx(12.89).epsilon(1e-6));
  CHECK(tpsa_of("Nc1ccccc1") == doctest::Approx(26.02).epsilon(1e-6));
  // the neutral pentavalent rendering carries the textbook 45.82; the
  // charged rendering sums its own published contributions
  CHECK(tpsa_of("O=N(=O)c1ccccc1") == doctest::Approx(45.82).epsilon(1e-6));
  CHECK(tpsa_of("O=[N+]([O-])c1ccccc1") == doctest::Approx(43.14).epsilon(1e-6));
  CHECK(tpsa_of("CC(=O)Oc1ccccc1C(=O)O") == doctest::Approx(63.60).epsilon(1e-6));
  CHECK(tpsa_of("C1COCCN1") == doctest::Approx(21.26).epsilon(1e-6));
  CHECK(tpsa_of("c1cc[nH]c1") == doctest::Approx(15.79).epsilon(1e-6));
  CHECK(tpsa_of("c1ccoc1") == doctest::Approx(13.14).epsilon(1e-6));
  CHECK(tpsa_of("CN(C)C=O") == doctest::Approx(20.31).epsilon(1e-6));
  // sulfur only counts when explicitly enabled
  CHECK(engine().tpsa(parse_smiles("CSC")) == doctest::Approx(0.0));
  CHECK(engine().tpsa(parse_smiles("CSC"), true) == doctest::Approx(25.30).epsilon(1e-6));
}

TEST_CASE("alert counting is per-pattern, not per-match") {
  MolGraph dinitro = parse_smiles("O=[N+]([O-])c1ccc(cc1)[N+](=O)[O-]");
  int alerts = engine().alerts_count(dinitro);
  MolGraph mono = parse_smiles("O=[N+]([O-])c1ccccc1");
  CHECK(alerts == engine().alerts_count(mono));  // two nitro groups count once
  CHECK(engine().alerts_count(parse_smiles("Cc1ccccc1")) == 0);
}

TEST_CASE("qed lies in (0,1] and responds to alerts") {
  for (const char* s : {"CCO", "c1ccccc1", "CC(=O)Nc1ccc(O)cc1", "O=[N+]([O-])c1ccccc1",
                        "N[C@@H](C)C(=O)O", "[NH4+].[Cl-]"}) {
    double q = engine().qed(parse_smiles(s));
    CAPTURE(s);
    CHECK(q > 0.0);
    CHECK(q <= 1.0);
  }
  // alert desirability is strictly decreasing in the alert count
  QedParameters q = QedParameters::load(std::string(CHEMFORGE_SOURCE_DIR) +
                                        "/share/chemforge/qed_params.tsv");
  CHECK(QedParameters::desirability(q.ads[7], 1) < QedParameters::desirability(q.ads[7], 0));
  CHECK(QedParameters::desirability(q.ads[7], 3) < QedParameters::desirability(q.ads[7], 1));
  // constructed pair whose other descriptor bands stay put
  double clean = engine().qed(parse_smiles("CC(=O)Nc1ccc(OCCOc2ccccc2)cc1"));
  double alerted =
      engine().qed(parse_smiles("CC(=O)Nc1ccc(OCCOc2ccc(cc2)[N+](=O)[O-])cc1"));
  CHECK(alerted < clean);
}

TEST_CASE("adding a hydroxyl strictly increases polar surface area") {
  CHECK(tpsa_of("CCCCC") == 0.0);
  CHECK(tpsa_of("CCCCCO") > 0.0);
  CHECK(tpsa_of("CCCCCO") == doctest::Approx(20.23).epsilon(1e-6));
}

TEST_CASE("descriptors are identical across renderings of one molecule") {
  MolGraph a = parse_smiles("OCC");
  MolGraph b = parse_smiles("C(O)C");
  DescriptorSet da = engine().compute(a);
  DescriptorSet db = engine().compute(b);
  CHECK(da.mw == db.mw);
  CHECK(da.logp == db.logp);
  CHECK(da.tpsa == db.tpsa);
  CHECK(da.qed == db.qed);
  MolGraph c = parse_smiles("c1ccc(cc1)C(=O)Nc1ccccc1");
  auto vars = enumerate_smiles(c, 10, 11);
  DescriptorSet ref = engine().compute(c);
  for (const auto& v : vars) {
    DescriptorSet dv = engine().compute(parse_smiles(v));
    CHECK(dv.logp == ref.logp);
    CHECK(dv.tpsa == ref.tpsa);
    CHECK(dv.qed == ref.qed);
  }
}

TEST_CASE("stereocenter counting") {
  CHECK(count_stereocenters(parse_smiles("N[C@@H](C)C(=O)O")) == 1);
  CHECK(count_stereocenters(parse_smiles("NC(C)C(=O)O")) == 1);  // potential center
  CHECK(count_stereocenters(parse_smiles("CC(C)C")) == 0);
  CHECK(count_stereocenters(parse_smiles("CCO")) == 0);
}

TEST_CASE("missing fragment table raises a configuration error") {
  if (!engine().has_sa_table()) {
    CHECK_THROWS_AS(engine().sa_score(parse_smiles("CCO")), DescriptorError);
  } else {
    double sa = engine().sa_score(parse_smiles("CCO"));
    CHECK(sa >= 1.0);
    CHECK(sa <= 10.0);
    CHECK(sa < 3.0);  // tiny common molecule
  }
}

TEST_CASE("untyped atom error on a table without fallback") {
  std::string tmp = std::string(CHEMFORGE_BINARY_DIR) + "/tiny_table.tsv";
  {
    std::ofstream out(tmp);
    out << "C1\t[#6]\t0.1\nH1\t@H_ON_CARBON\t0.1\nH2\t@H_ON_ALCOHOL\t0.1\n"
        << "H3\t@H_ON_AMINE\t0.1\nH4\t@H_ON_ACID\t0.1\nHS\t@H_FALLBACK\t0.1\n";
  }
  ContributionTable t = ContributionTable::load(tmp);
  CHECK(crippen_logp(parse_smiles("CC"), t) == doctest::Approx(0.8));
  CHECK_THROWS_AS(crippen_logp(parse_smiles("CCO"), t), DescriptorError);
}
