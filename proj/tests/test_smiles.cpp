//
// ChemForge - Copyright 2026 ChemForge Developers.
// SPDX-License-Identifier: Apache-2.0
//

#include <doctest.h>

#include <numeric>
#include <random>
#include <set>

#include "chemforge/smiles.hpp"

using namespace chemforge;

namespace {

int heavy_atoms(const MolGraph& m) { return m.num_atoms(); }

int total_hydrogens(const MolGraph& m) {
  int h = 0;
  for (int i = 0; i < m.num_atoms(); ++i) h += m.atom(i).total_h();
  return h;
}

}  // namespace

TEST_CASE("ethanol parses with one hydroxyl hydrogen") {
  MolGraph m = parse_smiles("CCO");
  CHECK(heavy_atoms(m) == 3);
  CHECK(m.num_bonds() == 2);
  CHECK(m.atom(2).atomic_number == 8);
  CHECK(m.atom(2).total_h() == 1);
  CHECK(m.atom(0).total_h() == 3);
  CHECK(m.atom(1).total_h() == 2);
}

TEST_CASE("kekule benzene is perceived aromatic") {
  MolGraph m = parse_smiles("C1=CC=CC=C1");
  CHECK(m.num_atoms() == 6);
  for (int i = 0; i < 6; ++i) {
    CHECK(m.atom(i).aromatic);
    CHECK(m.atom(i).total_h() == 1);
  }
  CHECK(m.ring_info().rings.size() == 1);
}

TEST_CASE("unbalanced parenthesis is a positioned error") {
  try {
    parse_smiles("C(C(C");
    FAIL("expected throw");
  } catch (const SmilesError& e) {
    CHECK(e.code() == SmilesError::Code::UnbalancedParenthesis);
  }
}

TEST_CASE("canonical form is independent of atom order") {
  CHECK(canonical_smiles("OCC") == canonical_smiles("CCO"));
  CHECK(canonical_smiles("c1ccccc1") == canonical_smiles("C1=CC=CC=C1"));
  CHECK(canonical_smiles("N1C=CC=C1") == canonical_smiles("c1cc[nH]c1"));
  CHECK(canonical_smiles("CC(=O)O") == canonical_smiles("OC(C)=O"));
  CHECK(canonical_smiles("c1ccc2ccccc2c1") == canonical_smiles("C1=CC=C2C=CC=CC2=C1"));
}

TEST_CASE("canonicalization is idempotent") {
  for (const char* s : {"CCO", "c1ccccc1", "CC(=O)Nc1ccc(O)cc1", "C1CC1", "[NH4+].[Cl-]",
                        "O=[N+]([O-])c1ccccc1", "C/C=C/C", "N[C@@H](C)C(=O)O"}) {
    std::string c1 = canonical_smiles(s);
    std::string c2 = canonical_smiles(c1);
    CAPTURE(s);
    CHECK(c1 == c2);
  }
}

TEST_CASE("round trip through an arbitrary order") {
  MolGraph m = parse_smiles("CC(=O)Nc1ccc(O)cc1");
  std::vector<int> order(static_cast<size_t>(m.num_atoms()));
  std::iota(order.rbegin(), order.rend(), 0);
  std::string s = write_smiles(m, order);
  CHECK(canonical_smiles(s) == canonical_smiles(m));
}

TEST_CASE("two component salt writes one dot") {
  MolGraph m = parse_smiles("[Na+].[Cl-]");
  std::string s = canonical_smiles(m);
  CHECK(std::count(s.begin(), s.end(), '.') == 1);
}

TEST_CASE("enumeration closure") {
  MolGraph m = parse_smiles("CC(=O)Nc1ccc(O)cc1");
  std::string canon = canonical_smiles(m);
  auto variants = enumerate_smiles(m, 25, 7);
  CHECK(variants.size() == 25);
  for (const auto& v : variants) {
    CAPTURE(v);
    CHECK(canonical_smiles(v) == canon);
  }
  // deterministic under seed
  CHECK(enumerate_smiles(m, 25, 7) == variants);
  CHECK(enumerate_smiles(m, 5, 8) != enumerate_smiles(m, 5, 9));
}

TEST_CASE("single atom has no ordering freedom") {
  MolGraph m = parse_smiles("C");
  for (const auto& v : enumerate_smiles(m, 4, 1)) CHECK(v == "C");
}

TEST_CASE("validity verdicts") {
  CHECK(is_valid_smiles("CC(=O)O"));
  CHECK(is_valid_smiles("c1ccc2ccccc2c1"));
  CHECK_FALSE(is_valid_smiles("C1CC"));        // unclosed ring
  CHECK_FALSE(is_valid_smiles("C(C)(C)(C)(C)C"));  // pentavalent carbon
  CHECK_FALSE(is_valid_smiles("c1ccnc1"));     // unkekulizable aromatic n
  CHECK_FALSE(is_valid_smiles(""));
  CHECK_FALSE(is_valid_smiles("Xx"));
  CHECK_FALSE(is_valid_smiles("C=="));
  CHECK_FALSE(is_valid_smiles("[CH5]"));
  CHECK(is_valid_smiles("c1cc[nH]c1"));
  CHECK(is_valid_smiles("O=[N+]([O-])c1ccccc1"));
  CHECK(is_valid_smiles("F[Xe]F"));
}

TEST_CASE("errors carry byte offsets") {
  try {
    parse_smiles("CC1CC");
    FAIL("expected throw");
  } catch (const SmilesError& e) {
    CHECK(e.code() == SmilesError::Code::UnclosedRingBond);
    CHECK(e.offset() == 2);
  }
  try {
    parse_smiles("C[Zz]C");
    FAIL("expected throw");
  } catch (const SmilesError& e) {
    CHECK(e.code() == SmilesError::Code::UnknownElement);
  }
  try {
    parse_smiles("C[C$]C");
    FAIL("expected throw");
  } catch (const SmilesError& e) {
    CHECK(e.code() == SmilesError::Code::BadBracketAtom);
  }
}

TEST_CASE("bracket atoms: isotope charge hydrogens") {
  MolGraph m = parse_smiles("[13CH3][NH3+].[OH-]");
  CHECK(m.atom(0).isotope == 13);
  CHECK(m.atom(0).total_h() == 3);
  CHECK(m.atom(1).charge == 1);
  CHECK(m.atom(1).total_h() == 3);
  CHECK(m.atom(2).charge == -1);
  CHECK(m.atom(2).total_h() == 1);
}

TEST_CASE("explicit hydrogen atoms fold into the heavy atom") {
  CHECK(canonical_smiles("[H]C([H])([H])[H]") == canonical_smiles("C"));
  CHECK(canonical_smiles("[H]OC") == canonical_smiles("CO"));
  // H2 survives as an explicit molecule
  MolGraph m = parse_smiles("[H][H]");
  CHECK(m.num_atoms() == 2);
}

TEST_CASE("percent ring closures") {
  std::string s = "C%10CCCCC%10";
  CHECK(is_valid_smiles(s));
  CHECK(canonical_smiles(s) == canonical_smiles("C1CCCCC1"));
}

TEST_CASE("ring bond order may sit on either side") {
  CHECK(canonical_smiles("C=1CCCCC=1") == canonical_smiles("C1CCCCC=1"));
  CHECK(canonical_smiles("C=1CCCCC=1") == canonical_smiles("C=1CCCCC1"));
  CHECK_FALSE(is_valid_smiles("C=1CCCCC#1"));
}

TEST_CASE("aromatic flags require rings") {
  CHECK_FALSE(is_valid_smiles("cc"));
  CHECK_FALSE(is_valid_smiles("C:C"));
}

TEST_CASE("tetrahedral stereo round trips") {
  std::string ala = "N[C@@H](C)C(=O)O";
  std::string canon = canonical_smiles(ala);
  CHECK(canon.find('@') != std::string::npos);
  CHECK(canonical_smiles(canon) == canon);
  // the two enantiomers canonicalize differently
  CHECK(canonical_smiles("N[C@H](C)C(=O)O") != canon);
  // but describe the same constitution
  MolGraph m = parse_smiles(ala);
  auto vars = enumerate_smiles(m, 20, 3);
  for (const auto& v : vars) {
    CAPTURE(v);
    CHECK(canonical_smiles(v) == canon);
  }
}

TEST_CASE("double bond stereo round trips") {
  std::string trans = canonical_smiles("F/C=C/F");
  std::string cis = canonical_smiles("F/C=C\\F");
  CHECK(trans != cis);
  CHECK(canonical_smiles(trans) == trans);
  CHECK(canonical_smiles(cis) == cis);
  // same constitution modulo stereo marks
  auto strip = [](std::string s) {
    std::string r;
    for (char c : s)
      if (c != '/' && c != '\\') r += c;
    return r;
  };
  CHECK(strip(trans) == strip(cis));
  // equivalent renderings agree
  CHECK(canonical_smiles("F\\C=C\\F") == trans);
  CHECK(canonical_smiles("C(/F)=C/F") == cis);
  MolGraph m = parse_smiles("F/C=C/F");
  for (const auto& v : enumerate_smiles(m, 20, 5)) {
    CAPTURE(v);
    CHECK(canonical_smiles(v) == trans);
  }
}

TEST_CASE("conflicting stereo marks are rejected") {
  // both substituents claimed on the same side
  CHECK_FALSE(is_valid_smiles("F/C(\\Cl)=C/F"));
  // opposite-side marks on one end are fine
  CHECK(is_valid_smiles("F/C(/Cl)=C/F"));
}

TEST_CASE("heteroaromatics perceive and round trip") {
  for (const char* s :
       {"c1ccncc1", "c1cc[nH]c1", "c1ccoc1", "c1ccsc1", "c1cnc[nH]1", "c1ccc2[nH]ccc2c1",
        "c1ccc2ncccc2c1", "Cn1cccc1", "c1cc[n+](C)cc1"}) {
    CAPTURE(s);
    CHECK(is_valid_smiles(s));
    std::string c1 = canonical_smiles(s);
    CHECK(canonical_smiles(c1) == c1);
  }
}

TEST_CASE("pyridinone keeps its aromatic perception through round trip") {
  std::string s = "O=c1cccc[nH]1";
  CHECK(is_valid_smiles(s));
  std::string c1 = canonical_smiles(s);
  CHECK(canonical_smiles(c1) == c1);
  CHECK(canonical_smiles("O=C1C=CC=CN1") == c1);
}

TEST_CASE("azulene fused perception") {
  std::string s = "C1=CC2=CC=CC=CC2=C1";
  MolGraph m = parse_smiles(s);
  int aromatic_atoms = 0;
  for (int i = 0; i < m.num_atoms(); ++i) aromatic_atoms += m.atom(i).aromatic;
  CHECK(aromatic_atoms == 10);
  std::string c1 = canonical_smiles(s);
  CHECK(canonical_smiles(c1) == c1);
}

TEST_CASE("cyclobutadiene and cyclooctatetraene are not aromatic") {
  for (const char* s : {"C1=CC=C1", "C1=CC=CC=CC=C1"}) {
    MolGraph m = parse_smiles(s);
    for (int i = 0; i < m.num_atoms(); ++i) CHECK_FALSE(m.atom(i).aromatic);
  }
}

TEST_CASE("hydrogen counts stay consistent over round trips") {
  for (const char* s : {"CC(C)(C)C", "CC(=O)[O-]", "C#N", "OC=O", "c1ccc(cc1)S(=O)(=O)N"}) {
    MolGraph a = parse_smiles(s);
    MolGraph b = parse_smiles(canonical_smiles(a));
    CAPTURE(s);
    CHECK(total_hydrogens(a) == total_hydrogens(b));
    CHECK(heavy_atoms(a) == heavy_atoms(b));
  }
}

TEST_CASE("permissive mode accepts wildcards and atom maps") {
  CHECK_FALSE(is_valid_smiles("C*"));
  CHECK_FALSE(is_valid_smiles("[CH3:1]O"));
  ParseOptions p;
  p.permissive = true;
  CHECK(is_valid_smiles("C*", p));
  CHECK(is_valid_smiles("[CH3:1]O", p));
}

TEST_CASE("parser never crashes on garbage") {
  for (const char* s : {"((((", "))))", "%", "%1", "[", "]", "[]", "C1", "=", ".", "C..C",
                        "\x01\x7f\xffzz", "[C@@@]", "C%%C", "[13]", "[+]", "123"}) {
    CAPTURE(s);
    CHECK_FALSE(is_valid_smiles(s));
  }
}

TEST_CASE("fuzz: random byte strings never crash the parser") {
  std::mt19937_64 rng(1234);
  const std::string alphabet = "CNOSPFIclnos()[]=#123456789%+-@/\\.BrH*: \tXx&$~";
  int parsed = 0;
  for (int iter = 0; iter < 50000; ++iter) {
    int len = 1 + static_cast<int>(rng() % 30);
    std::string s;
    for (int i = 0; i < len; ++i) {
      if (rng() % 8 == 0)
        s += static_cast<char>(rng() % 256);
      else
        s += alphabet[rng() % alphabet.size()];
    }
    parsed += is_valid_smiles(s);  // must not crash or throw non-SmilesError
  }
  CHECK(parsed >= 0);
}
