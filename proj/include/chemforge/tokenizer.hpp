//
// ChemForge - Copyright 2026 ChemForge Developers.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef CHEMFORGE_TOKENIZER_HPP
#define CHEMFORGE_TOKENIZER_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace chemforge {

class TokenizerError : public std::runtime_error {
 public:
  enum class Code {
    DuplicateToken,
    MissingSpecials,
    UnknownToken,
    SequenceTooLong,
    IdOutOfRange,
    BadVocabFile,
  };
  TokenizerError(Code code, const std::string& what, size_t offset = 0)
      : std::runtime_error(what), code_(code), offset_(offset) {}
  Code code() const { return code_; }
  size_t offset() const { return offset_; }

 private:
  Code code_;
  size_t offset_;
};

// Atom-level token inventory. Line number = id; the first four lines must be
// [BOS] [EOS] [PAD] [UNK].
class Vocabulary {
 public:
  static Vocabulary load(const std::string& path);
  static Vocabulary from_lines(const std::vector<std::string>& lines);

  int size() const { return static_cast<int>(tokens_.size()); }
  const std::string& token(int id) const { return tokens_[static_cast<size_t>(id)]; }
  int id_of(std::string_view token) const;  // -1 if absent

  int bos() const { return 0; }
  int eos() const { return 1; }
  int pad() const { return 2; }
  int unk() const { return 3; }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, int> index_;
};

struct TokenSequence {
  std::vector<uint16_t> ids;  // BOS ... EOS, PAD only appended by batching

  int length() const { return static_cast<int>(ids.size()); }
};

struct EncodeOptions {
  int max_length = 512;     // 0 = unlimited
  bool permissive = false;  // map unknown characters to [UNK] instead of throwing
};

// Greedy longest-match atom-level segmentation wrapped in BOS/EOS. Bracket
// atoms are segmented into their internal symbols; outside brackets only Cl
// and Br match as two-letter element tokens.
TokenSequence encode(std::string_view smiles, const Vocabulary& vocab,
                     const EncodeOptions& opts = {});

// Raw token strings of the body segmentation (no BOS/EOS), for inspection.
std::vector<std::string> tokenize(std::string_view smiles, const Vocabulary& vocab,
                                  const EncodeOptions& opts = {});

// Concatenation of token strings with BOS/EOS/PAD stripped.
std::string decode(const TokenSequence& seq, const Vocabulary& vocab);

}  // namespace chemforge

#endif
