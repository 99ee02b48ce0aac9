//
// ChemForge - Copyright 2026 ChemForge Developers.
// SPDX-License-Identifier: Apache-2.0
//

#include <doctest.h>

#include <random>

#include "chemforge/tokenizer.hpp"

using namespace chemforge;

namespace {

const Vocabulary& vocab() {
  static Vocabulary v =
      Vocabulary::load(std::string(CHEMFORGE_SOURCE_DIR) + "/share/chemforge/vocab_268.txt");
  return v;
}

// Independent reference segmenter: counts the tokens a correct atom-level
// segmentation must produce, written against the rules rather than the
// tokenizer code.
int reference_token_count(const std::string& s) {
  int count = 0;
  bool in_bracket = false;
  size_t i = 0;
  auto letter = [](char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); };
  while (i < s.size()) {
    char c = s[i];
    size_t step = 1;
    if (c == '[') in_bracket = true;
    if (c == ']') in_bracket = false;
    if (c == '@' && i + 1 < s.size() && s[i + 1] == '@') step = 2;
    if (letter(c) && i + 1 < s.size() && letter(s[i + 1])) {
      std::string two = s.substr(i, 2);
      if (!in_bracket && (two == "Cl" || two == "Br")) step = 2;
      if (in_bracket &&
          (two == "Cl" || two == "Br" || two == "Si" || two == "Se" || two == "As" ||
           two == "Na" || two == "Ca" || two == "Sn" || two == "Zn" || two == "Mg" ||
           two == "se" || two == "as" || two == "Fe" || two == "Li" || two == "Sc"))
        step = 2;
    }
    ++count;
    i += step;
  }
  return count;
}

}  // namespace

TEST_CASE("default vocabulary has 268 entries with specials first") {
  CHECK(vocab().size() == 268);
  CHECK(vocab().token(0) == "[BOS]");
  CHECK(vocab().token(1) == "[EOS]");
  CHECK(vocab().token(2) == "[PAD]");
  CHECK(vocab().token(3) == "[UNK]");
  CHECK(vocab().id_of("Br") >= 0);
  CHECK(vocab().id_of("Cl") >= 0);
  CHECK(vocab().id_of("se") >= 0);
}

TEST_CASE("vocabulary validation") {
  CHECK_THROWS_AS(Vocabulary::from_lines({"[BOS]", "[EOS]", "[PAD]", "[UNK]", "C", "C"}),
                  TokenizerError);
  CHECK_THROWS_AS(Vocabulary::from_lines({"[BOS]", "[PAD]", "[UNK]", "C"}), TokenizerError);
  CHECK_THROWS_AS(Vocabulary::from_lines({"[BOS]"}), TokenizerError);
}

TEST_CASE("CCO encodes to five ids") {
  TokenSequence seq = encode("CCO", vocab());
  REQUIRE(seq.length() == 5);
  CHECK(seq.ids[0] == vocab().bos());
  CHECK(seq.ids[1] == vocab().id_of("C"));
  CHECK(seq.ids[2] == vocab().id_of("C"));
  CHECK(seq.ids[3] == vocab().id_of("O"));
  CHECK(seq.ids[4] == vocab().eos());
}

TEST_CASE("two-letter halogens never split") {
  auto toks = tokenize("BrCC(=O)Cl", vocab());
  CHECK(std::count(toks.begin(), toks.end(), "Br") == 1);
  CHECK(std::count(toks.begin(), toks.end(), "Cl") == 1);
  for (const auto& t : toks) {
    CHECK(t != "B");
    CHECK(t != "r");
    CHECK(t != "l");
  }
}

TEST_CASE("bracket atoms segment into internal symbols") {
  auto toks = tokenize("[13CH3][NH3+]", vocab());
  std::vector<std::string> expect = {"[", "1", "3", "C", "H", "3", "]",
                                     "[", "N", "H", "3", "+", "]"};
  CHECK(toks == expect);
}

TEST_CASE("Sc outside brackets is sulfur + aromatic carbon") {
  auto toks = tokenize("Sc1ccccc1", vocab());
  CHECK(toks[0] == "S");
  CHECK(toks[1] == "c");
  auto btoks = tokenize("[Sc]", vocab());
  CHECK(btoks == std::vector<std::string>{"[", "Sc", "]"});
}

TEST_CASE("percent ring closures tokenize as percent plus digits") {
  auto toks = tokenize("C%12CC%12", vocab());
  std::vector<std::string> expect = {"C", "%", "1", "2", "C", "C", "%", "1", "2"};
  CHECK(toks == expect);
}

TEST_CASE("unknown characters throw with offset, or map to UNK permissively") {
  try {
    encode("C!C", vocab());
    FAIL("expected throw");
  } catch (const TokenizerError& e) {
    CHECK(e.code() == TokenizerError::Code::UnknownToken);
    CHECK(e.offset() == 1);
  }
  EncodeOptions p;
  p.permissive = true;
  TokenSequence seq = encode("C!C", vocab(), p);
  CHECK(seq.ids[2] == vocab().unk());
}

TEST_CASE("overlong sequences throw SequenceTooLong") {
  std::string big(600, 'C');
  CHECK_THROWS_AS(encode(big, vocab()), TokenizerError);
  EncodeOptions unlimited;
  unlimited.max_length = 0;
  CHECK(encode(big, vocab(), unlimited).length() == 602);
}

TEST_CASE("decode inverts encode") {
  for (const char* s : {"CCO", "c1ccccc1", "O=[N+]([O-])c1ccc(Cl)cc1", "N[C@@H](C)C(=O)O",
                        "F/C=C/F", "[13CH3]O", "C%11CCC%11", "[se]1cccc1"}) {
    TokenSequence seq = encode(s, vocab());
    CHECK(decode(seq, vocab()) == s);
  }
  TokenSequence empty;
  empty.ids = {0, 1};
  CHECK(decode(empty, vocab()).empty());
}

TEST_CASE("decode rejects out-of-range ids") {
  TokenSequence seq;
  seq.ids = {0, 9999, 1};
  CHECK_THROWS_AS(decode(seq, vocab()), TokenizerError);
}

TEST_CASE("token counts match the reference segmenter") {
  for (const char* s :
       {"CCO", "BrCC(=O)Cl", "[NH4+].[Cl-]", "c1ccc2ccccc2c1", "C%10CCCCC%10",
        "N[C@@H](Cc1ccc(O)cc1)C(=O)O", "[Si](C)(C)(C)C", "[Na+].[O-]S(=O)(=O)c1ccccc1"}) {
    auto toks = tokenize(s, vocab());
    CAPTURE(s);
    CHECK(static_cast<int>(toks.size()) == reference_token_count(s));
  }
}

TEST_CASE("property: two-letter elements inserted at random positions stay whole") {
  std::mt19937_64 rng(99);
  const std::vector<std::string> elems = {"Br", "Cl"};
  const std::string base = "CCOCCNCCC";
  for (int iter = 0; iter < 500; ++iter) {
    std::string s = base;
    size_t pos = rng() % (s.size() + 1);
    const std::string& el = elems[rng() % elems.size()];
    s.insert(pos, el);
    auto toks = tokenize(s, vocab());
    int found = 0;
    for (const auto& t : toks) found += (t == el);
    CAPTURE(s);
    CHECK(found >= 1);
    CHECK(static_cast<int>(toks.size()) == reference_token_count(s));
  }
}
