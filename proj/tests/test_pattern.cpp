//
// ChemForge - Copyright 2026 ChemForge Developers.
// SPDX-License-Identifier: Apache-2.0
//

#include <doctest.h>

#include "chemforge/pattern.hpp"
#include "chemforge/smiles.hpp"

using namespace chemforge;

TEST_CASE("hydroxyl pattern on ethanol matches exactly once") {
  MolGraph m = parse_smiles("CCO");
  Pattern p = Pattern::parse("[OX2H]");
  auto matches = find_substructure(m, p);
  REQUIRE(matches.size() == 1);
  CHECK(matches[0][0] == 2);
}

TEST_CASE("aromatic carbon pattern on benzene matches six times") {
  MolGraph m = parse_smiles("c1ccccc1");
  Pattern p = Pattern::parse("c");
  CHECK(find_substructure(m, p).size() == 6);
}

TEST_CASE("nitro alert") {
  Pattern nitro = Pattern::parse("[N+](=O)[O-]");
  CHECK(nitro.find_all(parse_smiles("O=[N+]([O-])c1ccccc1")).size() == 1);
  CHECK(nitro.find_all(parse_smiles("Cc1ccccc1")).empty());
}

TEST_CASE("matches are lexicographically ordered and deterministic") {
  MolGraph m = parse_smiles("CCO");
  Pattern p = Pattern::parse("[#6]");
  auto matches = find_substructure(m, p);
  REQUIRE(matches.size() == 2);
  CHECK(matches[0][0] == 0);
  CHECK(matches[1][0] == 1);
}

TEST_CASE("bond primitives") {
  MolGraph hexene = parse_smiles("C1CCCCC1C=C");
  CHECK(Pattern::parse("C=C").find_all(hexene).size() == 2);   // both directions
  CHECK(Pattern::parse("C@C").find_all(hexene).size() == 12);  // ring bonds
  CHECK(Pattern::parse("C!@C").find_all(hexene).size() == 4);  // acyclic C-C and ring-to-chain
  MolGraph benzene = parse_smiles("c1ccccc1");
  CHECK(Pattern::parse("c:c").find_all(benzene).size() == 12);
  CHECK(Pattern::parse("C=C").find_all(benzene).empty());  // aromatic is not double
  CHECK(Pattern::parse("c-c").find_all(benzene).empty());  // nor single
  MolGraph biphenyl = parse_smiles("c1ccc(cc1)c1ccccc1");
  CHECK(Pattern::parse("c-c").find_all(biphenyl).size() == 2);
}

TEST_CASE("charge, degree, connectivity, valence, ring primitives") {
  MolGraph m = parse_smiles("CC(C)(C)[NH3+]");
  CHECK(Pattern::parse("[+]").find_all(m).size() == 1);
  CHECK(Pattern::parse("[N+1]").find_all(m).size() == 1);
  CHECK(Pattern::parse("[CD4]").find_all(m).size() == 1);
  CHECK(Pattern::parse("[CX4]").find_all(m).size() == 4);
  CHECK(Pattern::parse("[CH3]").find_all(m).size() == 3);
  MolGraph furan = parse_smiles("c1ccoc1");
  CHECK(Pattern::parse("[o;r5]").find_all(furan).size() == 1);
  CHECK(Pattern::parse("[R]").find_all(furan).size() == 5);
  CHECK(Pattern::parse("[R0]").find_all(furan).empty());
  MolGraph sulfone = parse_smiles("CS(=O)(=O)C");
  CHECK(Pattern::parse("[Sv6]").find_all(sulfone).size() == 1);
  CHECK(Pattern::parse("[S;v6]").find_all(sulfone).size() == 1);
}

TEST_CASE("or lists and negation") {
  MolGraph m = parse_smiles("FC(Cl)Br");
  CHECK(Pattern::parse("[F,Cl,Br,I]").find_all(m).size() == 3);
  CHECK(Pattern::parse("[!#6;!#1]").find_all(m).size() == 3);
  CHECK(Pattern::parse("[C;!R]").find_all(m).size() == 1);
}

TEST_CASE("branches and ring closures in patterns") {
  MolGraph m = parse_smiles("O=C(O)c1ccccc1");
  Pattern acid = Pattern::parse("C(=O)[OX2H]");
  CHECK(acid.find_all(m).size() == 1);
  Pattern ring = Pattern::parse("c1ccccc1");
  CHECK(ring.find_all(m).size() == 12);  // all automorphic images
  CHECK(ring.matches(m));
}

TEST_CASE("root-anchored matching") {
  MolGraph m = parse_smiles("CCO");
  Pattern p = Pattern::parse("[#8]");
  CHECK(p.matches_root(m, 2));
  CHECK_FALSE(p.matches_root(m, 0));
}

TEST_CASE("malformed patterns throw") {
  CHECK_THROWS_AS(Pattern::parse(""), PatternError);
  CHECK_THROWS_AS(Pattern::parse("[C"), PatternError);
  CHECK_THROWS_AS(Pattern::parse("C(("), PatternError);
  CHECK_THROWS_AS(Pattern::parse("C1CC"), PatternError);
  CHECK_THROWS_AS(Pattern::parse("[Zz]"), PatternError);
}

TEST_CASE("wildcards") {
  MolGraph m = parse_smiles("CC=O");
  CHECK(Pattern::parse("*").find_all(m).size() == 3);
  CHECK(Pattern::parse("*~*").find_all(m).size() == 4);
  CHECK(Pattern::parse("[A]").find_all(m).size() == 3);
  CHECK(Pattern::parse("a").find_all(m).empty());
}
